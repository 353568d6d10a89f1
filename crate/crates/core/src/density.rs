//! Closed-form evaluation of the three-parametric Marcenko-Pastur density.
//!
//! For `a > 0` the support edges are the second and third real roots of the
//! cubic [`eval_s`]; inside the support the auxiliary quantity `phi` is the
//! unique real root of a cubic whose discriminant is `x^2 S(x)`, obtained from
//! the Cardano expression by choosing the cube-root branch that makes it real.
//! The density then follows from
//!
//! ```text
//! rho(x) = sqrt(2 (t - a + sqrt(D)) x - phi^2) / (2 pi r t x),   D = (t - a)^2 - 4 a phi
//! ```
//!
//! `a == 0` is dispatched to the exact two-parametric closed form, and
//! `r == 1` to the factorized support cubic.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::poly::{self, RealCubicRoots};
use crate::quad::TanhSinh;

/// Acceptance threshold for the imaginary residue of the selected branch,
/// relative to `1 + |phi|`.
pub const BRANCH_TOL: f64 = 1e-7;

/// Negative radicands above `-RADICAND_CLAMP * scale` are edge roundoff.
pub const RADICAND_CLAMP: f64 = 1e-10;

/// Coefficients of `S(x; r, t, a)`, highest degree first.
pub fn s_coefficients(p: &Params) -> [f64; 4] {
    let (r, t, a) = (p.r(), p.t(), p.a());
    let c3 = 4.0 * a;
    let c2 = -(8.0 * a * a + 4.0 * a * (3.0 * r + 2.0) * t - t * t);
    let c1 = 2.0
        * (2.0 * a.powi(3) - 2.0 * a * a * (5.0 * r - 2.0) * t
            + a * (r * (6.0 * r - 1.0) + 1.0) * t * t
            - (r + 1.0) * t.powi(3));
    let c0 = (r - 1.0).powi(2) * t * t * (a * a - a * (4.0 * r - 2.0) * t + t * t);
    [c3, c2, c1, c0]
}

/// The support polynomial `S(x; r, t, a)`, evaluated in Horner form.
pub fn eval_s(x: f64, p: &Params) -> f64 {
    poly::horner(&s_coefficients(p), x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Support {
    /// Real roots of `S`, ascending. Two entries when `a = 0` (S is then
    /// quadratic), one for the `t = 0` singleton.
    pub roots: Vec<f64>,
    pub x_left: f64,
    pub x_right: f64,
    pub degenerate: bool,
    pub discriminant: f64,
}

impl Support {
    pub fn width(&self) -> f64 {
        self.x_right - self.x_left
    }

    pub fn contains_open(&self, x: f64) -> bool {
        x > self.x_left && x < self.x_right
    }
}

/// Edges for `r = 1`: the nonzero roots of `4a x^2 - b x + 4(a - t)^3` with
/// `b = 8a^2 + 20at - t^2`, computed without cancellation.
fn square_case_roots(t: f64, a: f64) -> (f64, f64) {
    let b = 8.0 * a * a + 20.0 * a * t - t * t;
    let s = t.sqrt() * (8.0 * a + t).powf(1.5);
    let eps = a - t;
    // x_+ x_- = (a - t)^3 / a
    let prod = eps.powi(3) / a;
    if b >= 0.0 {
        let plus = (b + s) / (8.0 * a);
        (prod / plus, plus)
    } else {
        let minus = (b - s) / (8.0 * a);
        (minus, prod / minus)
    }
}

pub fn support(p: &Params) -> Result<Support> {
    let (r, t, a) = (p.r(), p.t(), p.a());
    let coeffs = s_coefficients(p);
    let discriminant = poly::cubic_discriminant(coeffs);
    if t == 0.0 {
        return Ok(Support {
            roots: vec![a],
            x_left: a,
            x_right: a,
            degenerate: true,
            discriminant,
        });
    }
    if a == 0.0 {
        let (xl, xr) = classic_edges(r, t);
        return Ok(Support {
            roots: vec![xl, xr],
            x_left: xl,
            x_right: xr,
            degenerate: xl == xr,
            discriminant,
        });
    }
    if p.is_square() {
        let (minus, plus) = square_case_roots(t, a);
        let mut roots = vec![0.0, minus, plus];
        roots.sort_by(f64::total_cmp);
        let (x_left, x_right) = if t < a { (minus, plus) } else { (0.0, plus) };
        let degenerate = roots.windows(2).any(|w| w[1] - w[0] <= 1e-12 * plus.abs());
        return Ok(Support {
            roots,
            x_left,
            x_right,
            degenerate,
            discriminant,
        });
    }
    match poly::real_cubic_roots(coeffs) {
        RealCubicRoots::Three { roots, degenerate } => Ok(Support {
            roots: roots.to_vec(),
            x_left: roots[1].max(0.0),
            x_right: roots[2],
            degenerate,
            discriminant,
        }),
        RealCubicRoots::One { .. } => Err(Error::NoRealSupport { discriminant }),
    }
}

fn classic_edges(r: f64, t: f64) -> (f64, f64) {
    let sr = r.sqrt();
    ((1.0 - sr).powi(2) * t, (1.0 + sr).powi(2) * t)
}

/// Coefficients of the cubic in `phi` satisfied inside the support.
pub fn phi_cubic(x: f64, p: &Params) -> [f64; 4] {
    let (r, t, a) = (p.r(), p.t(), p.a());
    [
        1.0,
        2.0 * (x - (r - 1.0) * t),
        x * x + ((3.0 - 2.0 * r) * t - a) * x + (r - 1.0).powi(2) * t * t,
        t * x * (x + (r - 1.0) * (a - t)),
    ]
}

/// The three values of the Cardano expression for `phi`, one per cube root
/// of `g`.
pub fn phi_candidates(x: f64, p: &Params) -> [Complex64; 3] {
    let (r, t, a) = (p.r(), p.t(), p.a());
    let s = eval_s(x, p);
    let root = Complex64::new(-3.0 * s, 0.0).sqrt();
    let rm1 = r - 1.0;
    let g = Complex64::from(
        -2.0 * x.powi(3) + 3.0 * ((2.0 * r + 1.0) * t + 6.0 * a) * x * x
            - 3.0 * rm1 * ((2.0 * r + 1.0) * t - 3.0 * a) * t * x
            + 2.0 * rm1.powi(3) * t.powi(3),
    ) + 3.0 * x * root;
    let q = x * x + (3.0 * a - (2.0 * r + 1.0) * t) * x + t * t * rm1 * rm1;
    let lead = -2.0 / 3.0 * (x - rm1 * t);
    let cbrt2 = 2f64.cbrt();
    let c0 = if g.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        g.powf(1.0 / 3.0)
    };
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut c = c0;
    for slot in out.iter_mut() {
        *slot = if c.norm() == 0.0 {
            Complex64::from(lead)
        } else {
            lead - cbrt2 / 3.0 * q / c - c / (3.0 * cbrt2)
        };
        c *= omega;
    }
    out
}

/// Picks the real branch. With a `hint` (the value at a neighbouring point)
/// the admissible candidate closest to it wins; otherwise the one with the
/// smallest imaginary residue.
pub fn select_branch(x: f64, candidates: [Complex64; 3], hint: Option<f64>) -> Result<f64> {
    let admissible: Vec<Complex64> = candidates
        .iter()
        .copied()
        .filter(|c| c.im.abs() < BRANCH_TOL * (1.0 + c.norm()))
        .collect();
    let chosen = match hint {
        Some(h) => admissible
            .iter()
            .min_by(|u, v| (u.re - h).abs().total_cmp(&(v.re - h).abs())),
        None => admissible
            .iter()
            .min_by(|u, v| u.im.abs().total_cmp(&v.im.abs())),
    };
    chosen.map(|c| c.re).ok_or_else(|| Error::BranchFailure {
        x,
        candidates: candidates.to_vec(),
    })
}

/// Evaluator with the support of one parameter set precomputed.
#[derive(Debug, Clone)]
pub struct MpDensity {
    params: Params,
    support: Support,
}

impl MpDensity {
    pub fn new(params: Params) -> Result<Self> {
        params.require_positive_time()?;
        let support = support(&params)?;
        Ok(Self { params, support })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    fn require_interior(&self, x: f64) -> Result<()> {
        if self.support.contains_open(x) && x > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "x = {x} is not inside the support ({}, {})",
                self.support.x_left, self.support.x_right
            )))
        }
    }

    /// `phi` at an interior point, optionally continuing from a neighbour.
    pub fn phi_with_hint(&self, x: f64, hint: Option<f64>) -> Result<f64> {
        self.require_interior(x)?;
        let p = &self.params;
        if p.a() == 0.0 {
            return Ok(-x + (p.r() - 1.0) * p.t());
        }
        let phi = select_branch(x, phi_candidates(x, p), hint)?;
        Ok(poly::polish_real(&phi_cubic(x, p), phi))
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        self.phi_with_hint(x, None)
    }

    pub fn hilbert_r(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        let rt = p.r() * p.t();
        if p.a() == 0.0 {
            self.require_interior(x)?;
            return Ok((x + (p.r() - 1.0) * p.t()) / (2.0 * rt * x));
        }
        let phi = self.phi(x)?;
        Ok((1.0 + phi / (2.0 * x)) / rt)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.density_with_hint(x, None).map(|(rho, _)| rho)
    }

    /// Density and the `phi` used (when one was needed).
    pub fn density_with_hint(&self, x: f64, hint: Option<f64>) -> Result<(f64, Option<f64>)> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("x = {x} must be >= 0")));
        }
        let p = &self.params;
        let (r, t, a) = (p.r(), p.t(), p.a());
        if !self.support.contains_open(x) || x == 0.0 {
            return Ok((0.0, None));
        }
        if a == 0.0 {
            let (xl, xr) = (self.support.x_left, self.support.x_right);
            let rho = ((x - xl) * (xr - x)).sqrt() / (2.0 * PI * r * t * x);
            return Ok((rho, None));
        }
        let phi = self.phi_with_hint(x, hint)?;
        let radicand = radicand(x, phi, t, a);
        let scale = 2.0 * ((t - a).abs() + sqrt_d(phi, t, a)) * x + phi * phi;
        let radicand = if radicand >= 0.0 {
            radicand
        } else if radicand >= -RADICAND_CLAMP * scale {
            0.0
        } else {
            return Err(Error::BranchFailure {
                x,
                candidates: phi_candidates(x, p).to_vec(),
            });
        };
        Ok((radicand.sqrt() / (2.0 * PI * r * t * x), Some(phi)))
    }

    /// Headline `f_L` / `f_R` form, in complex arithmetic.
    pub fn density_via_f(&self, x: f64) -> Result<EdgeForm> {
        let p = &self.params;
        let (r, t, a) = (p.r(), p.t(), p.a());
        let phi = self.phi(x)?;
        let root_a_phi = Complex64::new(a * phi, 0.0).sqrt();
        let d_minus = Complex64::from(t - a) - 2.0 * root_a_phi;
        let d_plus = Complex64::from(t - a) + 2.0 * root_a_phi;
        let half_sum = 0.5 * (d_minus.sqrt() + d_plus.sqrt());
        if half_sum.im.abs() > 1e-8 * (1.0 + half_sum.norm()) {
            return Err(Error::BranchFailure {
                x,
                candidates: vec![d_minus, d_plus, half_sum],
            });
        }
        let d0 = Complex64::from(phi + x + 0.5 * (t - a) + 0.5 * sqrt_d(phi, t, a));
        let root_d0 = d0.sqrt();
        let f_left = (half_sum - root_d0).powi(2);
        let f_right = (half_sum + root_d0).powi(2);
        let product = ((x - f_left) * (f_right - x)).re.max(0.0);
        Ok(EdgeForm {
            f_left: f_left.re,
            f_right: f_right.re,
            rho: product.sqrt() / (2.0 * PI * r * x * t),
        })
    }

    /// `int x^k rho(x) dx` over the support.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let Support {
            x_left, x_right, ..
        } = self.support;
        let quad = TanhSinh::new(1e-12);
        let mut failure = None;
        let res = quad.integrate(
            |x| match self.density(x) {
                Ok(rho) => x.powi(k as i32) * rho,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            x_left,
            x_right,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let res = res?;
        if res.error > 1e-9 * res.value.abs().max(1.0) {
            return Err(Error::QuadratureFailure {
                estimate: res.value,
                error: res.error,
            });
        }
        Ok(res.value)
    }
}

fn sqrt_d(phi: f64, t: f64, a: f64) -> f64 {
    ((t - a).powi(2) - 4.0 * a * phi).max(0.0).sqrt()
}

/// `2 (t - a + sqrt(D)) x - phi^2`, with `t - a + sqrt(D)` rationalized
/// when `t < a`.
fn radicand(x: f64, phi: f64, t: f64, a: f64) -> f64 {
    let sd = sqrt_d(phi, t, a);
    let sum = if t >= a {
        (t - a) + sd
    } else {
        -4.0 * a * phi / (sd + (a - t))
    };
    2.0 * sum * x - phi * phi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeForm {
    pub f_left: f64,
    pub f_right: f64,
    pub rho: f64,
}

/// Boundary data of the resolvent on the real axis: `G(x - i0) = R + i I`
/// with `rho = I / pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryValue {
    pub r_part: f64,
    pub i_part: f64,
}

impl BoundaryValue {
    pub fn density(&self) -> f64 {
        self.i_part / PI
    }
}

/// `(R, pi rho)` from the closed forms, at an interior point.
pub fn boundary_closed_form(x: f64, p: &Params) -> Result<BoundaryValue> {
    let eval = MpDensity::new(*p)?;
    Ok(BoundaryValue {
        r_part: eval.hilbert_r(x)?,
        i_part: PI * eval.density(x)?,
    })
}

pub fn eval_phi(x: f64, p: &Params) -> Result<f64> {
    MpDensity::new(*p)?.phi(x)
}

pub fn hilbert_r(x: f64, p: &Params) -> Result<f64> {
    MpDensity::new(*p)?.hilbert_r(x)
}

pub fn density(x: f64, p: &Params) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x = {x} must be >= 0")));
    }
    MpDensity::new(*p)?.density(x)
}

pub fn density_via_f(x: f64, p: &Params) -> Result<EdgeForm> {
    MpDensity::new(*p)?.density_via_f(x)
}

pub fn moment(k: u32, p: &Params) -> Result<f64> {
    MpDensity::new(*p)?.moment(k)
}

/// The one-parameter law, `rho(x; r)`.
pub fn density_mp_classic(x: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("r = {r} must lie in (0, 1]")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x = {x} must be >= 0")));
    }
    let (xl, xr) = classic_edges(r, 1.0);
    if x <= xl || x >= xr || x == 0.0 {
        return Ok(0.0);
    }
    Ok(((x - xl) * (xr - x)).sqrt() / (2.0 * PI * r * x))
}

/// Density of signed singular values, `2|x| rho(x^2; r, t, a^2)`.
///
/// At the origin the value is the limit: for `r = 1` and `t > a^2` it is
/// `2 sqrt(t - a^2) / (pi t)`, otherwise zero.
pub fn density_chiral(x: f64, p: &Params) -> Result<f64> {
    let q = Params::new(p.r(), p.t(), p.a() * p.a())?;
    q.require_positive_time()?;
    if x == 0.0 {
        let (t, a2) = (q.t(), q.a());
        return Ok(if q.is_square() && t > a2 {
            2.0 * (t - a2).sqrt() / (PI * t)
        } else {
            0.0
        });
    }
    Ok(2.0 * x.abs() * density(x * x, &q)?)
}

pub fn density_wigner(x: f64) -> f64 {
    if x.abs() < 2.0 {
        (4.0 - x * x).sqrt() / PI
    } else {
        0.0
    }
}

/// Density sampled on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct DensityCurve {
    pub params: Params,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityCurve {
    /// Evaluates along the grid, seeding each branch choice from the
    /// previous interior point.
    pub fn evaluate(params: Params, grid: Vec<f64>) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        let eval = MpDensity::new(params)?;
        let mut hint = None;
        let mut values = Vec::with_capacity(grid.len());
        for &x in &grid {
            let (rho, phi) = eval.density_with_hint(x, hint)?;
            hint = phi.or(hint);
            values.push(rho);
        }
        Ok(Self {
            params,
            grid,
            values,
        })
    }

    pub fn trapezoid(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: f64, t: f64, a: f64) -> Params {
        Params::new(r, t, a).unwrap()
    }

    #[test]
    fn s_values() {
        assert!(eval_s(4.0, &p(1.0, 1.0, 0.0)).abs() < 1e-14);
        assert!(eval_s(6.75, &p(1.0, 1.0, 1.0)).abs() < 1e-12);
        assert!((eval_s(0.0, &p(0.5, 1.0, 1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn s_matches_expanded_polynomial() {
        // Brute-force expansion, independent of the coefficient helper.
        let brute = |x: f64, r: f64, t: f64, a: f64| {
            4.0 * a * x * x * x - (8.0 * a * a + 4.0 * a * (3.0 * r + 2.0) * t - t * t) * x * x
                + 2.0
                    * (2.0 * a * a * a - 2.0 * a * a * (5.0 * r - 2.0) * t
                        + a * (r * (6.0 * r - 1.0) + 1.0) * t * t
                        - (r + 1.0) * t * t * t)
                    * x
                + (r - 1.0) * (r - 1.0) * t * t * (a * a - a * (4.0 * r - 2.0) * t + t * t)
        };
        for &(x, r, t, a) in &[
            (0.3, 0.2, 1.5, 0.7),
            (2.0, 0.9, 0.4, 3.0),
            (5.0, 1.0, 2.0, 1.0),
        ] {
            let want = brute(x, r, t, a);
            assert!((eval_s(x, &p(r, t, a)) - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn support_examples() {
        let s = support(&p(1.0, 0.5, 1.0)).unwrap();
        assert!((s.x_left - 0.02835).abs() < 1e-4, "{}", s.x_left);
        assert!((s.x_right - 4.40915).abs() < 1e-4, "{}", s.x_right);

        let s = support(&p(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.x_left, 0.0);
        assert!((s.x_right - 6.75).abs() < 1e-13);

        let s = support(&p(0.3, 1.0, 0.0)).unwrap();
        assert!((s.x_left - (1.0 - 0.3f64.sqrt()).powi(2)).abs() < 1e-15);
        assert!((s.x_right - (1.0 + 0.3f64.sqrt()).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn support_edges_are_roots() {
        for &(r, t, a) in &[
            (0.3, 1.0, 1.0),
            (0.7, 2.0, 3.0),
            (0.1, 0.2, 0.5),
            (1.0, 0.3, 1.0),
        ] {
            let q = p(r, t, a);
            let s = support(&q).unwrap();
            let c = s_coefficients(&q);
            let scale: f64 = c
                .iter()
                .enumerate()
                .map(|(i, ci)| ci.abs() * s.x_right.powi(3 - i as i32))
                .sum();
            assert!(eval_s(s.x_left, &q).abs() < 1e-12 * scale);
            assert!(eval_s(s.x_right, &q).abs() < 1e-12 * scale);
            assert!(s.x_left >= 0.0 && s.x_left < s.x_right);
        }
    }

    #[test]
    fn zero_time_support_is_point_mass() {
        let s = support(&p(0.5, 0.0, 2.0)).unwrap();
        assert_eq!((s.x_left, s.x_right), (2.0, 2.0));
        assert!(s.degenerate);
        assert!(density(1.0, &p(0.5, 0.0, 2.0)).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(eval_phi(1.0, &p(1.0, 1.0, 0.0)).unwrap(), -1.0);
        // Near the left edge, phi tends to -(4/(9a)) eps^2 + O(eps^3).
        let q = p(1.0, 0.5, 1.0);
        let xl = support(&q).unwrap().x_left;
        let phi = eval_phi(xl * (1.0 + 1e-9), &q).unwrap();
        assert!((phi + 4.0 / 9.0 * 0.25).abs() < 0.06, "{phi}");
    }

    #[test]
    fn phi_solves_its_cubic() {
        for &(x, r, t, a) in &[
            (1.0, 1.0, 2.0, 1.0),
            (1.0, 0.3, 1.0, 1.0),
            (3.0, 0.7, 2.0, 3.0),
        ] {
            let q = p(r, t, a);
            let phi = eval_phi(x, &q).unwrap();
            let c = phi_cubic(x, &q);
            let scale: f64 = c
                .iter()
                .enumerate()
                .map(|(i, ci)| ci.abs() * phi.abs().powi(3 - i as i32))
                .sum();
            assert!(poly::horner(&c, phi).abs() < 1e-13 * scale);
        }
    }

    #[test]
    fn hilbert_examples() {
        assert!((hilbert_r(2.0, &p(1.0, 1.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((hilbert_r(1.0, &p(0.3, 1.0, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(hilbert_r(10.0, &p(0.3, 1.0, 0.0)).is_err());
    }

    #[test]
    fn density_examples() {
        let want = 3f64.sqrt() / (2.0 * PI);
        assert!((density(1.0, &p(1.0, 1.0, 0.0)).unwrap() - want).abs() < 1e-15);
        assert_eq!(density(3.0, &p(0.3, 1.0, 0.0)).unwrap(), 0.0);
        let near_origin = density(1e-3, &p(1.0, 1.0, 1.0)).unwrap();
        assert!((near_origin / 2.7566 - 1.0).abs() < 0.05, "{near_origin}");
        assert!(density(-1.0, &p(1.0, 1.0, 0.0)).is_err());
        assert!(density(1.0, &p(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn classic_examples() {
        let want = 3f64.sqrt() / (2.0 * PI);
        assert!((density_mp_classic(1.0, 1.0).unwrap() - want).abs() < 1e-15);
        for r in [0.1, 0.3, 0.9] {
            assert_eq!(
                density_mp_classic((1.0 - f64::sqrt(r)).powi(2), r).unwrap(),
                0.0
            );
        }
        // x_L = 0.2045548..., x_R = 2.3954451...
        let got = density_mp_classic(1.0, 0.3).unwrap();
        assert!((got - 0.558934).abs() < 1e-6, "{got}");
        assert!(density_mp_classic(1.0, 1.2).is_err());
    }

    #[test]
    fn via_f_agrees() {
        let ef = density_via_f(1.0, &p(0.3, 1.0, 0.0)).unwrap();
        assert!((ef.f_left - (1.0 - 0.3f64.sqrt()).powi(2)).abs() < 1e-14);
        assert!((ef.f_right - (1.0 + 0.3f64.sqrt()).powi(2)).abs() < 1e-14);

        let q = p(1.0, 1.0, 1.0);
        let ef = density_via_f(1.0, &q).unwrap();
        let rho = density(1.0, &q).unwrap();
        assert!((ef.rho - rho).abs() < 1e-9 * rho);

        let q = p(1.0, 0.5, 1.0);
        let xl = support(&q).unwrap().x_left;
        let ef = density_via_f(xl + 1e-6, &q).unwrap();
        assert!(ef.rho > 0.0 && ef.rho < 0.1, "{}", ef.rho);
    }

    #[test]
    fn chiral_and_wigner() {
        let q = p(1.0, 0.5, 1.0);
        assert_eq!(density_chiral(0.0, &q).unwrap(), 0.0);
        for y in [0.1, 0.7, 1.3] {
            assert_eq!(
                density_chiral(y, &q).unwrap(),
                density_chiral(-y, &q).unwrap()
            );
        }
        assert!((density_wigner(0.0) - 2.0 / PI).abs() < 1e-15);
        assert_eq!(density_wigner(2.0), 0.0);
        assert_eq!(density_wigner(-3.0), 0.0);
    }

    #[test]
    fn chiral_origin_limit_matches_nearby_values() {
        let q = p(1.0, 1.2, 1.0);
        let at_zero = density_chiral(0.0, &q).unwrap();
        let near = density_chiral(1e-6, &q).unwrap();
        assert!((at_zero - near).abs() < 1e-4 * at_zero, "{at_zero} {near}");
        // Just above t = a^2 the value follows 2/(pi a^2) (t - a^2)^{1/2}.
        let q = p(1.0, 1.0001, 1.0);
        let v = density_chiral(0.0, &q).unwrap();
        assert!((v / (2.0 / PI * 1e-2) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn moments() {
        assert!((moment(0, &p(0.7, 2.0, 3.0)).unwrap() - 1.0).abs() < 1e-8);
        assert!((moment(1, &p(0.3, 1.0, 1.0)).unwrap() - 2.0).abs() < 1e-8);
        assert!((moment(1, &p(1.0, 1.0, 0.0)).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn curve_trapezoid_approaches_one() {
        let q = p(0.3, 1.0, 1.0);
        let s = support(&q).unwrap();
        let coarse = DensityCurve::evaluate(q, uniform_grid(s.x_left, s.x_right, 200)).unwrap();
        let fine = DensityCurve::evaluate(q, uniform_grid(s.x_left, s.x_right, 4000)).unwrap();
        assert!((fine.trapezoid() - 1.0).abs() < (coarse.trapezoid() - 1.0).abs());
        assert!((fine.trapezoid() - 1.0).abs() < 1e-4);
        assert!(DensityCurve::evaluate(q, vec![1.0, 1.0]).is_err());
    }
}
