//! The resolvent `G(z)` as a root of the algebraic equation
//!
//! ```text
//! z = 1/G + t/(1 - r t G) + a/(1 - r t G)^2
//! ```
//!
//! Clearing denominators gives a cubic in `G`. The admissible root is the
//! Stieltjes transform of a probability measure on `[0, inf)`: for
//! `Im z > 0` it has `Im G < 0` and `Im(z G) <= 0`. Exactly one root has
//! both properties; the Herglotz sign alone does not single it out, since
//! the root that clearing denominators introduces near `G = 1/(rt)` often
//! has `Im G < 0` too.

use num_complex::Complex64;
use serde::Serialize;

use crate::density::BoundaryValue;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::poly;

const START_MODULUS: f64 = 1e6;
const BASE_STEPS: usize = 64;
const MAX_STEPS: usize = 1024;
const NEWTON_ITERS: usize = 50;
/// Relative slack on the two sign conditions.
const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct GreenSample {
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub g_value: Complex64,
    pub residual: f64,
    pub path_id: String,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut tup = s.serialize_tuple(2)?;
    tup.serialize_element(&z.re)?;
    tup.serialize_element(&z.im)?;
    tup.end()
}

/// Residuals of the real and imaginary parts of the resolvent equation on
/// the real axis, in terms of `A = 1/(R^2 + I^2)`, `B = 1/((1 - rtR)^2 + (rtI)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPair {
    pub e_real: f64,
    pub e_imag: f64,
}

/// Coefficients of the cleared cubic in `G`, highest degree first.
pub fn resolvent_cubic(z: Complex64, p: &Params) -> [Complex64; 4] {
    let c = p.r() * p.t();
    let (t, a) = (p.t(), p.a());
    [
        z * c * c,
        Complex64::from(t * c - c * c) - 2.0 * c * z,
        z + (2.0 * c - t - a),
        Complex64::from(-1.0),
    ]
}

/// `|z - 1/G - t/u - a/u^2|` with `u = 1 - rtG`.
pub fn equation_residual(z: Complex64, g: Complex64, p: &Params) -> f64 {
    let u = 1.0 - p.r() * p.t() * g;
    (z - 1.0 / g - p.t() / u - p.a() / (u * u)).norm()
}

/// Both sign conditions, for `Im z > 0`.
fn admissible(z: Complex64, g: Complex64) -> bool {
    g.im <= SIGN_TOL * g.norm() && (z * g).im <= SIGN_TOL * (z * g).norm() && g.im < 0.0
}

fn newton(coeffs: &[Complex64; 4], mut g: Complex64) -> Option<Complex64> {
    let mut last_step = f64::INFINITY;
    for _ in 0..NEWTON_ITERS {
        let (f, df) = poly::horner_c(coeffs, g);
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df;
        g -= step;
        if !g.re.is_finite() || !g.im.is_finite() {
            return None;
        }
        let size = step.norm();
        // Converged, or stalled at the rounding floor.
        if size <= 1e-15 * g.norm() || (size <= 1e-12 * g.norm() && size >= 0.5 * last_step) {
            return Some(poly::polish_complex(coeffs, g));
        }
        last_step = size;
    }
    None
}

/// Walks `z(lambda) = target + lambda (start - target)` from `lambda = 1`
/// to `0` with geometrically shrinking `lambda`, re-seeding Newton each step.
fn continue_along_ray(
    target: Complex64,
    p: &Params,
    steps: usize,
) -> std::result::Result<Complex64, Complex64> {
    let start = Complex64::new(START_MODULUS, START_MODULUS);
    let span = (start - target).norm();
    let lambda_min = (1e-2 * target.im / span).min(1e-3);
    let mut g = 1.0 / start;
    let coeffs = resolvent_cubic(start, p);
    g = newton(&coeffs, g).ok_or(g)?;
    for k in 1..=steps + 1 {
        let lambda = if k <= steps {
            lambda_min.powf(k as f64 / steps as f64)
        } else {
            0.0
        };
        let z = target + lambda * (start - target);
        let coeffs = resolvent_cubic(z, p);
        let next = newton(&coeffs, g).ok_or(g)?;
        if !admissible(z, next) {
            return Err(next);
        }
        g = next;
    }
    Ok(g)
}

/// The resolvent at `z` off the real axis.
pub fn solve_green(z: Complex64, p: &Params) -> Result<GreenSample> {
    if z.im == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("z = {z} must lie off the real axis")));
    }
    p.require_positive_time()?;
    if z.im < 0.0 {
        let mut s = solve_green(z.conj(), p)?;
        s.z = z;
        s.g_value = s.g_value.conj();
        return Ok(s);
    }

    let mut steps = BASE_STEPS;
    let (g, steps) = loop {
        match continue_along_ray(z, p, steps) {
            Ok(g) => break (g, steps),
            Err(last) if steps >= MAX_STEPS => {
                return Err(Error::ContinuationFailure { z, last });
            }
            Err(_) => steps *= 2,
        }
    };

    let coeffs = resolvent_cubic(z, p);
    let others = poly::deflate_cubic(coeffs, g);
    let competing: Vec<Complex64> = others
        .iter()
        .copied()
        .filter(|&h| admissible(z, h) && (h - g).norm() > 1e-9 * g.norm())
        .collect();
    if !competing.is_empty() {
        let mut roots = vec![g];
        roots.extend(competing);
        return Err(Error::BranchAmbiguity { z, roots });
    }

    Ok(GreenSample {
        z,
        g_value: g,
        residual: equation_residual(z, g, p),
        path_id: format!("ray(1e6+1e6i -> z, {steps} steps)"),
    })
}

pub const EPS_LADDER: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Boundary value `G(x + i0)` by Richardson extrapolation over
/// [`EPS_LADDER`]; `I` below `1e-8` is reported as zero.
pub fn boundary_value(x: f64, p: &Params) -> Result<BoundaryValue> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be > 0")));
    }
    let g: Vec<Complex64> = EPS_LADDER
        .iter()
        .map(|&eps| solve_green(Complex64::new(x, eps), p).map(|s| s.g_value))
        .collect::<Result<_>>()?;
    // Ratio 10 between rungs; eliminate the O(eps) then O(eps^2) terms.
    let first = [(10.0 * g[1] - g[0]) / 9.0, (10.0 * g[2] - g[1]) / 9.0];
    let limit = (100.0 * first[1] - first[0]) / 99.0;
    let i_part = -limit.im;
    Ok(BoundaryValue {
        r_part: limit.re,
        i_part: if i_part.abs() < 1e-8 { 0.0 } else { i_part },
    })
}

/// Central-difference residual of
/// `dG/dt = -dG/dz + r (dG/dz - 2 z G dG/dz - G^2)`.
pub fn pde_residual(z: Complex64, p: &Params, h_t: f64, h_z: f64) -> Result<f64> {
    if !(z.im.abs() > 10.0 * h_z) {
        return Err(Error::Domain(format!(
            "|Im z| = {} must exceed 10 h_z = {}",
            z.im.abs(),
            10.0 * h_z
        )));
    }
    if !(p.t() > h_t) {
        return Err(Error::Domain(format!(
            "t = {} must exceed h_t = {h_t}",
            p.t()
        )));
    }
    let at = |zz: Complex64, t: f64| -> Result<Complex64> {
        let q = Params::new(p.r(), t, p.a())?;
        Ok(solve_green(zz, &q)?.g_value)
    };
    let g = at(z, p.t())?;
    let dg_dt = (at(z, p.t() + h_t)? - at(z, p.t() - h_t)?) / (2.0 * h_t);
    let dg_dz = (at(z + h_z, p.t())? - at(z - h_z, p.t())?) / (2.0 * h_z);
    let r = p.r();
    let rhs = -dg_dz + r * (dg_dz - 2.0 * z * g * dg_dz - g * g);
    Ok((dg_dt - rhs).norm())
}

pub fn lemma_residuals(x: f64, p: &Params, bv: &BoundaryValue) -> Result<ResidualPair> {
    let (r_val, i_val) = (bv.r_part, bv.i_part);
    let norm2 = r_val * r_val + i_val * i_val;
    if norm2 == 0.0 {
        return Err(Error::DegenerateInput("R^2 + I^2 = 0".into()));
    }
    if !(i_val > 0.0) {
        return Err(Error::Domain(format!(
            "I = {i_val} must be > 0 inside the support"
        )));
    }
    let (r, t, a) = (p.r(), p.t(), p.a());
    let rt = r * t;
    let u = 1.0 - rt * r_val;
    let big_a = 1.0 / norm2;
    let big_b = 1.0 / (u * u + (rt * i_val).powi(2));
    let e_real =
        x - (r_val * big_a + u * t * big_b + a * (u * u - (rt * i_val).powi(2)) * big_b * big_b);
    let e_imag = (big_a - r * t * t * big_b) - 2.0 * a * u * rt * big_b * big_b;
    Ok(ResidualPair {
        e_real: e_real.abs(),
        e_imag: e_imag.abs(),
    })
}

/// Coefficients in `R` of the cubic satisfied by the real part of the
/// boundary value, highest degree first.
pub fn cubic_r_coefficients(x: f64, p: &Params) -> [f64; 4] {
    let (r, t, a) = (p.r(), p.t(), p.a());
    let rt = r * t;
    [
        8.0 * rt.powi(3) * x * x,
        -8.0 * rt * rt * x * (2.0 * x + (r - 1.0) * t),
        2.0 * rt * (5.0 * x * x + ((6.0 * r - 5.0) * t - a) * x + (r - 1.0).powi(2) * t * t),
        -(2.0 * x * x
            + ((4.0 * r - 3.0) * t - 2.0 * a) * x
            + (r - 1.0) * t * ((2.0 * r - 1.0) * t - a)),
    ]
}

pub fn cubic_r_roots(x: f64, p: &Params) -> Result<[Complex64; 3]> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x = {x} must be > 0")));
    }
    p.require_positive_time()?;
    let c = cubic_r_coefficients(x, p).map(Complex64::from);
    Ok(poly::complex_cubic_roots(c))
}
