//! Filtration scale values: 64-bit floats compared exactly.
//!
//! Birth scales are nonnegative finite reals; death scales may be
//! `Scale::INFINITY`. All comparisons are bit-exact (`total_cmp`), which is
//! sound because every value in the pipeline is produced by exact arithmetic
//! on input decimals (max, min, addition, integer multiples, halving).

use std::fmt;
use std::ops::{Add, Sub};

/// A scale parameter in a filtration.
#[derive(Clone, Copy, Debug)]
pub struct Scale(f64);

impl Scale {
    pub const ZERO: Scale = Scale(0.0);
    pub const INFINITY: Scale = Scale(f64::INFINITY);

    /// Wraps a raw value. Panics on NaN; normalizes -0.0 to 0.0 so that
    /// equality is well defined.
    pub fn new(v: f64) -> Scale {
        assert!(!v.is_nan(), "scale must not be NaN");
        Scale(if v == 0.0 { 0.0 } else { v })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn min(self, other: Scale) -> Scale {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Scale) -> Scale {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exact integer multiple, used for the shift t = (K+1)·ε.
    pub fn times(self, k: usize) -> Scale {
        Scale::new(self.0 * k as f64)
    }

    /// Exact halving (division by two is exact in binary floating point).
    pub fn half(self) -> Scale {
        Scale::new(self.0 / 2.0)
    }
}

impl From<f64> for Scale {
    fn from(v: f64) -> Scale {
        Scale::new(v)
    }
}

impl PartialEq for Scale {
    fn eq(&self, other: &Scale) -> bool {
        self.0.total_cmp(&other.0) == std::cmp::Ordering::Equal
    }
}

impl Eq for Scale {}

impl PartialOrd for Scale {
    fn partial_cmp(&self, other: &Scale) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scale {
    fn cmp(&self, other: &Scale) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Scale {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl Add for Scale {
    type Output = Scale;
    fn add(self, rhs: Scale) -> Scale {
        Scale::new(self.0 + rhs.0)
    }
}

impl Sub for Scale {
    type Output = Scale;
    fn sub(self, rhs: Scale) -> Scale {
        Scale::new(self.0 - rhs.0)
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_equality_are_exact() {
        assert_eq!(Scale::new(2.0), Scale::new(2.0));
        assert!(Scale::new(1.0) < Scale::new(1.5));
        assert!(Scale::new(10.0) < Scale::INFINITY);
        assert_eq!(Scale::new(-0.0), Scale::ZERO);
    }

    #[test]
    fn half_and_times_are_exact_on_dyadics() {
        assert_eq!(Scale::new(3.0).half(), Scale::new(1.5));
        assert_eq!(Scale::new(0.5).times(4), Scale::new(2.0));
    }

    #[test]
    fn display_trims_like_rust_floats() {
        assert_eq!(Scale::new(2.0).to_string(), "2");
        assert_eq!(Scale::new(0.5).to_string(), "0.5");
        assert_eq!(Scale::INFINITY.to_string(), "inf");
    }
}
