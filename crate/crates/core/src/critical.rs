//! Dynamic critical behaviour of the square case `r = 1`.
//!
//! At `t_c = a` the left edge reaches the origin. Each exponent is
//! recovered as the slope of an ordinary least-squares fit on log-log
//! axes over an explicit window, chosen so the next order of the
//! relevant asymptotic expansion stays around one percent or below.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{support, MpDensity, RADICAND_CLAMP};
use crate::error::{Error, Result};
use crate::params::Params;

pub const MIN_R_SQUARED: f64 = 0.999;
pub const DEFAULT_POINTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    /// Slope of `ln y` against `ln x`.
    pub exponent: f64,
    /// `exp` of the intercept.
    pub amplitude: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// `n` points from `lo` to `hi` spaced evenly in `ln`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Fit `y = A x^k`. Points with non-positive `y` are an error, since
/// they mean the window left the asymptotic regime.
pub fn fit_power_law(name: &str, xs: &[f64], ys: &[f64]) -> Result<PowerFit> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "{name}: need >= 3 paired points"
        )));
    }
    if let Some(bad) = xs.iter().zip(ys).find(|(x, y)| !(**x > 0.0 && **y > 0.0)) {
        return Err(Error::DegenerateInput(format!(
            "{name}: non-positive point ({}, {})",
            bad.0, bad.1
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(0.0, f64::max);
    let fit = PowerFit {
        exponent: slope,
        amplitude: intercept.exp(),
        r_squared,
        window: (lo, hi),
    };
    if r_squared < MIN_R_SQUARED {
        return Err(Error::FitRejected {
            name: name.to_string(),
            r_squared,
        });
    }
    Ok(fit)
}

fn square(t: f64, a: f64) -> Result<Params> {
    Params::new(1.0, t, a)
}

fn require_positive_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "a = {a}: a critical time exists only for a > 0"
        )))
    }
}

/// Density values on `xs`, rejecting points inside the clamped zone.
fn densities(name: &str, model: &MpDensity, xs: &[f64]) -> Result<Vec<f64>> {
    let ys: Vec<f64> = xs
        .par_iter()
        .map(|&x| model.density(x))
        .collect::<Result<_>>()?;
    if let Some((x, y)) = xs
        .iter()
        .zip(&ys)
        .find(|(_, y)| **y <= 10.0 * RADICAND_CLAMP)
    {
        return Err(Error::DegenerateInput(format!(
            "{name}: density {y} at x = {x} is within the clamp tolerance"
        )));
    }
    Ok(ys)
}

/// `t_c(a) = a`, after confirming the left edge is positive just before
/// and zero just after.
pub fn critical_time(a: f64) -> Result<f64> {
    require_positive_a(a)?;
    let before = support(&square(0.99 * a, a)?)?.x_left;
    let after = support(&square(1.01 * a, a)?)?.x_left;
    if !(before > 0.0 && after == 0.0) {
        return Err(Error::Domain(format!(
            "edge check failed at a = {a}: x_L(0.99a) = {before}, x_L(1.01a) = {after}"
        )));
    }
    Ok(a)
}

/// `x_L(1, t_c - eps, a)` against `eps in [1e-4 a, 1e-2 a]`.
pub fn fit_edge_vanishing(a: f64, n_points: usize) -> Result<PowerFit> {
    require_positive_a(a)?;
    if n_points < 8 {
        return Err(Error::InvalidParams(format!(
            "n_points = {n_points} must be >= 8"
        )));
    }
    let eps = geometric_grid(1e-4 * a, 1e-2 * a, n_points);
    let xl: Vec<f64> = eps
        .par_iter()
        .map(|&e| Ok(support(&square(a - e, a)?)?.x_left))
        .collect::<Result<_>>()?;
    fit_power_law("nu", &eps, &xl)
}

/// Relative window for the left-edge fit; scaled by the smaller of the
/// support width and `x_L` so it stays inside the square-root regime
/// when `x_L` is tiny near `t_c`.
pub const EDGE_WINDOW: (f64, f64) = (1e-8, 1e-5);

/// `rho(x_L + delta)` against `delta`; the amplitude is `C_1(t, a)`.
pub fn fit_edge_exponent_subcritical(t: f64, a: f64) -> Result<PowerFit> {
    require_positive_a(a)?;
    if !(t > 0.0 && t < a) {
        return Err(Error::InvalidParams(format!(
            "need 0 < t < a, got t = {t}, a = {a}"
        )));
    }
    let model = MpDensity::new(square(t, a)?)?;
    let s = model.support().clone();
    let scale = s.width().min(s.x_left);
    let deltas = geometric_grid(EDGE_WINDOW.0 * scale, EDGE_WINDOW.1 * scale, DEFAULT_POINTS);
    let xs: Vec<f64> = deltas.iter().map(|d| s.x_left + d).collect();
    let ys = densities("beta1", &model, &xs)?;
    fit_power_law("beta1", &deltas, &ys)
}

/// Same fit at the right edge, for any parameters.
pub fn fit_right_edge(p: &Params) -> Result<PowerFit> {
    let model = MpDensity::new(*p)?;
    let s = model.support().clone();
    let deltas = geometric_grid(
        EDGE_WINDOW.0 * s.width(),
        EDGE_WINDOW.1 * s.width(),
        DEFAULT_POINTS,
    );
    let xs: Vec<f64> = deltas.iter().map(|d| s.x_right - d).collect();
    let ys = densities("right edge", &model, &xs)?;
    fit_power_law("right edge", &deltas, &ys)
}

/// Origin window: `[1e-9, 1e-6] a` at `t = a`; for `t > a` shrunk by
/// `((t - a)/a)^3`, the scale on which the `x^{-1/2}` law takes over.
pub fn origin_window(t: f64, a: f64) -> (f64, f64) {
    let shrink = if t > a {
        ((t - a) / a).powi(3).min(1.0)
    } else {
        1.0
    };
    (1e-9 * a * shrink, 1e-6 * a * shrink)
}

/// `rho(x)` against `x` near the origin for `t >= a`.
pub fn fit_origin_exponent(t: f64, a: f64) -> Result<PowerFit> {
    require_positive_a(a)?;
    if !(t >= a) {
        return Err(Error::InvalidParams(format!(
            "need t >= a, got t = {t}, a = {a}"
        )));
    }
    let name = if t == a { "gamma2" } else { "gamma3" };
    let model = MpDensity::new(square(t, a)?)?;
    let (lo, hi) = origin_window(t, a);
    let xs = geometric_grid(lo, hi, DEFAULT_POINTS);
    let ys = densities(name, &model, &xs)?;
    fit_power_law(name, &xs, &ys)
}

/// `C_1(t_c - eps, a)` against `eps in [1e-3 a, 1e-2 a]`.
pub fn fit_c1_divergence(a: f64) -> Result<PowerFit> {
    require_positive_a(a)?;
    let eps = geometric_grid(1e-3 * a, 1e-2 * a, 12);
    let c1: Vec<f64> = eps
        .par_iter()
        .map(|&e| Ok(fit_edge_exponent_subcritical(a - e, a)?.amplitude))
        .collect::<Result<_>>()?;
    fit_power_law("gamma1", &eps, &c1)
}

/// `C_2(t_c + eps, a)` against `eps in [1e-3 a, 1e-2 a]`.
pub fn fit_c2_growth(a: f64) -> Result<PowerFit> {
    require_positive_a(a)?;
    let eps = geometric_grid(1e-3 * a, 1e-2 * a, 12);
    let c2: Vec<f64> = eps
        .par_iter()
        .map(|&e| Ok(fit_origin_exponent(a + e, a)?.amplitude))
        .collect::<Result<_>>()?;
    fit_power_law("beta2", &eps, &c2)
}

/// `|nu - (beta2 + gamma1)|`.
pub fn scaling_relation_check(a: f64) -> Result<f64> {
    let nu = fit_edge_vanishing(a, DEFAULT_POINTS)?.exponent;
    let beta2 = fit_c2_growth(a)?.exponent;
    let gamma1 = -fit_c1_divergence(a)?.exponent;
    Ok((nu - (beta2 + gamma1)).abs())
}

/// One measured quantity with its target and tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    /// Absolute for exponents, relative for amplitudes.
    pub tolerance: f64,
    pub relative: bool,
    pub pass: bool,
}

impl Check {
    fn absolute(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            target,
            tolerance,
            relative: false,
            pass: (value - target).abs() <= tolerance,
        }
    }

    fn relative(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            target,
            tolerance,
            relative: true,
            pass: ((value - target) / target).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Amplitudes {
    pub nu: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalReport {
    pub a: f64,
    pub t_c: f64,
    pub nu: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub amplitudes: Amplitudes,
    pub fits: Vec<(String, PowerFit)>,
    pub scaling_relation_gap: f64,
    pub checks: Vec<Check>,
}

impl CriticalReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Every fit for one `a`, with `beta1` measured at `t = a/2` and `gamma3`
/// at `t = 3a/2`.
pub fn critical_report(a: f64) -> Result<CriticalReport> {
    let t_c = critical_time(a)?;
    let ((nu, beta1), ((gamma1, gamma2), (gamma3, beta2))) = rayon::join(
        || {
            rayon::join(
                || fit_edge_vanishing(a, DEFAULT_POINTS),
                || fit_edge_exponent_subcritical(0.5 * a, a),
            )
        },
        || {
            rayon::join(
                || rayon::join(|| fit_c1_divergence(a), || fit_origin_exponent(a, a)),
                || rayon::join(|| fit_origin_exponent(1.5 * a, a), || fit_c2_growth(a)),
            )
        },
    );
    let (nu, beta1, gamma1, gamma2, gamma3, beta2) =
        (nu?, beta1?, gamma1?, gamma2?, gamma3?, beta2?);

    let gap = (nu.exponent - (beta2.exponent - gamma1.exponent)).abs();
    let checks = vec![
        Check::absolute("nu", nu.exponent, 3.0, 0.05),
        Check::relative("amplitude_nu", nu.amplitude, 4.0 / (27.0 * a * a), 0.05),
        Check::absolute("beta1", beta1.exponent, 0.5, 0.01),
        Check::absolute("gamma1", -gamma1.exponent, 2.5, 0.05),
        Check::relative(
            "amplitude_gamma1",
            gamma1.amplitude,
            9.0 * a / (4.0 * PI),
            0.05,
        ),
        Check::absolute("gamma2", -gamma2.exponent, 1.0 / 3.0, 0.01),
        Check::relative(
            "amplitude_gamma2",
            gamma2.amplitude,
            3f64.sqrt() / (2.0 * PI) * a.powf(-2.0 / 3.0),
            0.02,
        ),
        Check::absolute("gamma3", -gamma3.exponent, 0.5, 0.01),
        Check::absolute("beta2", beta2.exponent, 0.5, 0.02),
        Check::relative("amplitude_beta2", beta2.amplitude, 1.0 / (PI * t_c), 0.05),
        Check::absolute("scaling_relation_gap", gap, 0.0, 0.1),
    ];
    Ok(CriticalReport {
        a,
        t_c,
        nu: nu.exponent,
        beta1: beta1.exponent,
        beta2: beta2.exponent,
        gamma1: -gamma1.exponent,
        gamma2: -gamma2.exponent,
        gamma3: -gamma3.exponent,
        amplitudes: Amplitudes {
            nu: nu.amplitude,
            gamma1: gamma1.amplitude,
            gamma2: gamma2.amplitude,
            beta2: beta2.amplitude,
        },
        fits: vec![
            ("nu".into(), nu),
            ("beta1".into(), beta1),
            ("gamma1".into(), gamma1),
            ("gamma2".into(), gamma2),
            ("gamma3".into(), gamma3),
            ("beta2".into(), beta2),
        ],
        scaling_relation_gap: gap,
        checks,
    })
}
