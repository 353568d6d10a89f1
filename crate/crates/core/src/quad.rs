//! Tanh-sinh (double-exponential) quadrature on a finite interval.
//!
//! The substitution `x = c + h tanh(pi/2 sinh s)` clusters nodes
//! doubly-exponentially at both endpoints, so integrable algebraic
//! endpoint singularities (square-root edges, `x^{-1/3}`, `x^{-1/2}`)
//! are absorbed without special handling.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_level: u32,
    /// Truncation of the transformed abscissa; at 4.5 the node nearest an
    /// endpoint sits ~1e-61 of the half-width away.
    pub s_max: f64,
}

impl Default for TanhSinh {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_level: 11,
            s_max: 4.5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl TanhSinh {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over `(lo, hi)`. `f` is never evaluated at the endpoints.
    pub fn integrate<F>(&self, mut f: F, lo: f64, hi: f64) -> Result<QuadResult>
    where
        F: FnMut(f64) -> f64,
    {
        if hi == lo {
            return Ok(QuadResult {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            });
        }
        if hi < lo {
            let r = self.integrate(f, hi, lo)?;
            return Ok(QuadResult {
                value: -r.value,
                ..r
            });
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut evaluations = 1usize;
        let f_mid = f(mid);
        if !f_mid.is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: f64::NAN,
                error: f64::INFINITY,
            });
        }

        // Contribution of the symmetric node pair at transformed abscissa s.
        let mut pair = |s: f64| -> Result<f64> {
            let u = FRAC_PI_2 * s.sinh();
            let cosh_u = u.cosh();
            let w = FRAC_PI_2 * s.cosh() / (cosh_u * cosh_u);
            // Distance of the node from the nearer endpoint, computed without
            // forming 1 - tanh(u).
            let offset = half / (u.exp() * cosh_u);
            let mut sum = 0.0;
            if offset > 0.0 && w > 0.0 {
                for x in [lo + offset, hi - offset] {
                    if x <= lo || x >= hi {
                        continue;
                    }
                    let v = f(x);
                    evaluations += 1;
                    if !v.is_finite() {
                        return Err(Error::QuadratureFailure {
                            estimate: f64::NAN,
                            error: f64::INFINITY,
                        });
                    }
                    sum += w * v;
                }
            }
            Ok(sum)
        };

        let mut h = 1.0;
        let mut sum = FRAC_PI_2 * f_mid;
        let mut k = 1;
        while (k as f64) * h <= self.s_max {
            sum += pair(k as f64 * h)?;
            k += 1;
        }
        let mut estimate = half * h * sum;
        let mut error = f64::INFINITY;

        for _level in 1..=self.max_level {
            h *= 0.5;
            let mut k = 1;
            while (k as f64) * h <= self.s_max {
                sum += pair(k as f64 * h)?;
                k += 2;
            }
            let next = half * h * sum;
            error = (next - estimate).abs();
            estimate = next;
            if error <= self.abs_tol.max(self.rel_tol * estimate.abs()) {
                return Ok(QuadResult {
                    value: estimate,
                    error,
                    evaluations,
                });
            }
        }
        Err(Error::QuadratureFailure { estimate, error })
    }
}
