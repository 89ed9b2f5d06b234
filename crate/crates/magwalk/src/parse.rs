//! Text forms of angles, grids, field directions and spin states as they
//! appear on the command line and in config files.
//!
//! Angles are decimal radians (`0.3927`) or rational multiples of π
//! (`pi`, `-pi/2`, `3pi/8`, `3*pi/8`, `0.5π`).

use std::f64::consts::PI;
use std::str::FromStr;

use magwalk_core::{Direction, LinearGrid, SpinVector, C64};

use crate::error::{Error, Result};

pub fn parse_angle(input: &str) -> Result<f64> {
    let s = input.trim().to_ascii_lowercase().replace('π', "pi");
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|e| Error::parse("angle", input, e.to_string()))?,
        Some(at) => {
            let coef = s[..at].trim().trim_end_matches('*').trim();
            let rest = s[at + 2..].trim();
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|e| Error::parse("angle", input, e.to_string()))?,
            };
            let denom = match rest {
                "" => 1.0,
                r => match r.strip_prefix('/') {
                    Some(d) => d.trim().parse::<f64>().map_err(|e| Error::parse("angle", input, e.to_string()))?,
                    None => return Err(Error::parse("angle", input, "expected `/` after pi")),
                },
            };
            if denom == 0.0 {
                return Err(Error::parse("angle", input, "zero denominator"));
            }
            coef * PI / denom
        }
    };
    if !value.is_finite() {
        return Err(Error::parse("angle", input, "not finite"));
    }
    Ok(value)
}

/// `start:stop:count`, with angle syntax for both bounds.
pub fn parse_grid(input: &str) -> Result<LinearGrid> {
    let parts: Vec<&str> = input.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(Error::parse("grid", input, "expected start:stop:count"));
    };
    let count = count.trim().parse::<usize>().map_err(|e| Error::parse("grid", input, e.to_string()))?;
    LinearGrid::new(parse_angle(start)?, parse_angle(stop)?, count)
        .map_err(|e| Error::parse("grid", input, e.to_string()))
}

/// `x`, `y`, `z` (optionally negated) or `nx,ny,nz`. Explicit components
/// are normalized.
pub fn parse_direction(input: &str) -> Result<Direction> {
    let s = input.trim().to_ascii_lowercase();
    let axis = match s.as_str() {
        "x" | "+x" => Some(Direction::X),
        "y" | "+y" => Some(Direction::Y),
        "z" | "+z" => Some(Direction::Z),
        "-x" => Some(-Direction::X),
        "-y" => Some(-Direction::Y),
        "-z" => Some(-Direction::Z),
        _ => None,
    };
    if let Some(d) = axis {
        return Ok(d);
    }
    let comps = s
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::parse("direction", input, e.to_string()))?;
    let [x, y, z] = comps[..] else {
        return Err(Error::parse("direction", input, "expected x|y|z or nx,ny,nz"));
    };
    let norm = (x * x + y * y + z * z).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::parse("direction", input, "zero or non-finite vector"));
    }
    Direction::new(x / norm, y / norm, z / norm).map_err(|e| Error::parse("direction", input, e.to_string()))
}

/// `plus`, `zero`, `one` or two complex amplitudes `a,b` such as `0.6,0.8i`.
pub fn parse_spin(input: &str) -> Result<SpinVector> {
    let s = input.trim().to_ascii_lowercase();
    match s.as_str() {
        "plus" | "+" => return Ok(SpinVector::plus()),
        "zero" | "0" => return Ok(SpinVector::zero()),
        "one" | "1" => return Ok(SpinVector::one()),
        _ => {}
    }
    let Some((a, b)) = s.split_once(',') else {
        return Err(Error::parse("spin", input, "expected plus|zero|one or a,b"));
    };
    let amp = |t: &str| C64::from_str(t.trim()).map_err(|e| Error::parse("spin", input, e.to_string()));
    SpinVector::new(amp(a)?, amp(b)?).map_err(|e| Error::parse("spin", input, e.to_string()))
}
