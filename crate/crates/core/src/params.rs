use serde::Serialize;

use crate::error::{Error, Result};

/// Rectangularity `r`, time `t` and external-source strength `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    r: f64,
    t: f64,
    a: f64,
}

impl Params {
    pub fn new(r: f64, t: f64, a: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParams(format!("r = {r} must lie in (0, 1]")));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParams(format!("t = {t} must be >= 0")));
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParams(format!("a = {a} must be >= 0")));
        }
        Ok(Self { r, t, a })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `r == 1` is dispatched exactly, never approached numerically.
    pub fn is_square(&self) -> bool {
        self.r == 1.0
    }

    /// Same `r`, with `t` and `a` multiplied by `kappa`.
    pub fn scaled(&self, kappa: f64) -> Result<Self> {
        Self::new(self.r, self.t * kappa, self.a * kappa)
    }

    pub(crate) fn require_positive_time(&self) -> Result<()> {
        if self.t > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "t = {} must be > 0 for a density (t = 0 is the point mass at a)",
                self.t
            )))
        }
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "r={}, t={}, a={}", self.r, self.t, self.a)
    }
}
