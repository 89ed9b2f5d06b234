use crate::error::{Error, Result};

/// Evenly spaced points `start..=stop` with both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearGrid {
    start: f64,
    stop: f64,
    count: usize,
}

impl LinearGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidGrid("bounds must be finite"));
        }
        if count < 2 {
            return Err(Error::InvalidGrid("count must be at least 2"));
        }
        if start >= stop {
            return Err(Error::InvalidGrid("start must be below stop"));
        }
        Ok(Self { start, stop, count })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    /// The `i`-th point. The last point is exactly `stop`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }
}
