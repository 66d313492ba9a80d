use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::wrap_angle;

/// Closed, non-wrapping parameter interval `[lo, hi]` on the circle.
///
/// `0 <= lo <= hi <= 2π`. The endpoint `hi = 2π` is allowed so that a wrapped
/// arc splits cleanly into `[a, 2π]` and `[0, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleInterval {
    lo: f64,
    hi: f64,
}

impl CircleInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInterval { lo, hi, reason: "non-finite endpoint" });
        }
        if lo < 0.0 || hi > TAU {
            return Err(Error::InvalidInterval { lo, hi, reason: "endpoints must lie in [0, 2π]" });
        }
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi, reason: "lo > hi (wrapping interval)" });
        }
        if hi - lo >= TAU {
            return Err(Error::InvalidInterval { lo, hi, reason: "length must be < 2π" });
        }
        Ok(Self { lo, hi })
    }

    pub fn singleton(t: f64) -> Result<Self> {
        Self::new(t, t)
    }

    /// Split a possibly wrapping arc from `lo` counterclockwise to `hi` into at
    /// most two non-wrapping pieces. Endpoints are first reduced mod 2π.
    pub fn split_wrapping(lo: f64, hi: f64) -> Result<Vec<Self>> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInterval { lo, hi, reason: "non-finite endpoint" });
        }
        let (a, b) = (wrap_angle(lo), wrap_angle(hi));
        if a <= b {
            Ok(vec![Self::new(a, b)?])
        } else if b == 0.0 {
            Ok(vec![Self::new(a, TAU)?])
        } else {
            Ok(vec![Self::new(a, TAU)?, Self::new(0.0, b)?])
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn is_singleton(&self) -> bool {
        self.hi == self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Circular membership: `t` is reduced mod 2π before comparison.
    pub fn contains(&self, t: f64, tol: f64) -> bool {
        let t = wrap_angle(t);
        [t - TAU, t, t + TAU].iter().any(|&s| s >= self.lo - tol && s <= self.hi + tol)
    }

    /// Disjointness as closed arcs of the circle (`0` and `2π` coincide).
    pub fn is_disjoint(&self, other: &Self) -> bool {
        [-TAU, 0.0, TAU].iter().all(|&k| other.hi + k < self.lo || self.hi < other.lo + k)
    }

    /// `[lo, hi] ⊆ self` as real intervals.
    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `n + 1` equally spaced parameters from `lo` to `hi`.
    pub fn samples(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(1);
        (0..=n).map(move |k| if k == n { self.hi } else { self.lo + (self.hi - self.lo) * k as f64 / n as f64 })
    }
}
