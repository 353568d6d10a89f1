//! Low-degree polynomial root finding.
//!
//! Coefficient slices are ordered from the highest degree down.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Relative size of the cubic discriminant below which roots are treated
/// as coincident.
pub const DEGENERATE_TOL: f64 = 1e-12;

pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Value and first derivative.
pub fn horner_d(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn horner_c(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Discriminant of `c3 x^3 + c2 x^2 + c1 x + c0`; positive for three
/// distinct real roots.
pub fn cubic_discriminant(c: [f64; 4]) -> f64 {
    let [a, b, cc, d] = c;
    18.0 * a * b * cc * d - 4.0 * b.powi(3) * d + b * b * cc * cc
        - 4.0 * a * cc.powi(3)
        - 27.0 * a * a * d * d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealCubicRoots {
    /// Three real roots, ascending; `degenerate` flags a coincidence.
    Three { roots: [f64; 3], degenerate: bool },
    /// Only one real root; the other two form a complex pair.
    One { root: f64 },
}

/// Real roots of a real cubic with `c[0] != 0`, via the trigonometric
/// method in the three-root regime. Every root gets a guarded Newton polish.
pub fn real_cubic_roots(c: [f64; 4]) -> RealCubicRoots {
    let b = c[1] / c[0];
    let cc = c[2] / c[0];
    let d = c[3] / c[0];
    let shift = b / 3.0;
    let p = cc - b * b / 3.0;
    let q = 2.0 * b.powi(3) / 27.0 - b * cc / 3.0 + d;
    let half_q2 = 0.25 * q * q;
    let p3 = p.powi(3) / 27.0;
    let h = half_q2 + p3;
    let scale = half_q2 + p3.abs();
    let degenerate = h.abs() <= DEGENERATE_TOL * scale || scale == 0.0;

    if h > 0.0 && !degenerate {
        let sq = h.sqrt();
        let u = (-0.5 * q + sq.copysign(-q)).cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let root = polish_real(&c, u + v - shift);
        return RealCubicRoots::One { root };
    }

    let mut roots = if p >= 0.0 {
        // Only reachable when p and q both vanish to roundoff: triple root.
        [-shift; 3]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        [0, 1, 2].map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift)
    };
    for r in roots.iter_mut() {
        *r = polish_real(&c, *r);
    }
    roots.sort_by(f64::total_cmp);
    RealCubicRoots::Three { roots, degenerate }
}

/// Newton steps that are kept only while they reduce the residual.
pub fn polish_real(coeffs: &[f64], mut x: f64) -> f64 {
    let mut fx = horner(coeffs, x).abs();
    for _ in 0..4 {
        let (f, df) = horner_d(coeffs, x);
        if df == 0.0 || f == 0.0 {
            break;
        }
        let next = x - f / df;
        let fn_ = horner(coeffs, next).abs();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

pub fn polish_complex(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut fz = horner_c(coeffs, z).0.norm();
    for _ in 0..6 {
        let (f, df) = horner_c(coeffs, z);
        if df.norm() == 0.0 || fz == 0.0 {
            break;
        }
        let next = z - f / df;
        let fn_ = horner_c(coeffs, next).0.norm();
        if !(fn_ < fz) {
            break;
        }
        z = next;
        fz = fn_;
    }
    z
}

/// All three roots of a complex cubic with `c[0] != 0`, by the general
/// Cardano construction followed by Newton polish.
pub fn complex_cubic_roots(c: [Complex64; 4]) -> [Complex64; 3] {
    let b = c[1] / c[0];
    let cc = c[2] / c[0];
    let d = c[3] / c[0];
    let d0 = b * b - 3.0 * cc;
    let d1 = 2.0 * b * b * b - 9.0 * b * cc + 27.0 * d;
    let disc = (d1 * d1 - 4.0 * d0 * d0 * d0).sqrt();
    // Pick the sign that avoids cancellation.
    let cand = if (d1 + disc).norm() >= (d1 - disc).norm() {
        d1 + disc
    } else {
        d1 - disc
    };
    let big_c = (0.5 * cand).powf(1.0 / 3.0);
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut xi = Complex64::new(1.0, 0.0);
    for root in roots.iter_mut() {
        let ck = xi * big_c;
        *root = if ck.norm() == 0.0 {
            -b / 3.0
        } else {
            -(b + ck + d0 / ck) / 3.0
        };
        xi *= omega;
    }
    for root in roots.iter_mut() {
        *root = polish_complex(&c, *root);
    }
    roots
}

/// The roots of `q(z) = p(z) / (z - root)` for a known root of the cubic `p`.
pub fn deflate_cubic(c: [Complex64; 4], root: Complex64) -> [Complex64; 2] {
    let b0 = c[0];
    let b1 = c[1] + root * b0;
    let b2 = c[2] + root * b1;
    let disc = (b1 * b1 - 4.0 * b0 * b2).sqrt();
    let s = if (b1 + disc).norm() >= (b1 - disc).norm() {
        b1 + disc
    } else {
        b1 - disc
    };
    if s.norm() == 0.0 {
        let z = -b1 / (2.0 * b0);
        return [z, z];
    }
    let z1 = -s / (2.0 * b0);
    let z2 = -2.0 * b2 / s;
    [polish_complex(&c, z1), polish_complex(&c, z2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(r: [f64; 3]) -> [f64; 4] {
        [
            1.0,
            -(r[0] + r[1] + r[2]),
            r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            -r[0] * r[1] * r[2],
        ]
    }

    #[test]
    fn three_distinct_roots() {
        let c = from_roots([-1.0, 0.5, 3.0]);
        match real_cubic_roots(c) {
            RealCubicRoots::Three { roots, degenerate } => {
                assert!(!degenerate);
                for (got, want) in roots.iter().zip([-1.0, 0.5, 3.0]) {
                    assert!((got - want).abs() < 1e-13, "{got} vs {want}");
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_real_root() {
        // (x - 2)(x^2 + 1)
        match real_cubic_roots([1.0, -2.0, 1.0, -2.0]) {
            RealCubicRoots::One { root } => assert!((root - 2.0).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
        assert!(cubic_discriminant([1.0, -2.0, 1.0, -2.0]) < 0.0);
    }

    #[test]
    fn double_root_is_flagged() {
        let c = from_roots([1.0, 1.0, 4.0]);
        match real_cubic_roots(c) {
            RealCubicRoots::Three { roots, degenerate } => {
                assert!(degenerate);
                assert!((roots[0] - 1.0).abs() < 1e-7);
                assert!((roots[1] - 1.0).abs() < 1e-7);
                assert!((roots[2] - 4.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn widely_separated_roots() {
        // Leading coefficient tiny: one root far out on the negative axis.
        let c = [1e-8, 1.0, -3.0, 2.0];
        match real_cubic_roots(c) {
            RealCubicRoots::Three { roots, .. } => {
                assert!(roots[0] < -1e7);
                assert!(horner(&c, roots[1]).abs() < 1e-12);
                assert!(horner(&c, roots[2]).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complex_roots_and_deflation() {
        let r = [
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.1),
            Complex64::new(3.0, -1.0),
        ];
        let one = Complex64::new(1.0, 0.0);
        let c = [
            one,
            -(r[0] + r[1] + r[2]),
            r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            -r[0] * r[1] * r[2],
        ];
        let got = complex_cubic_roots(c);
        for want in r {
            assert!(got.iter().any(|g| (g - want).norm() < 1e-12));
        }
        let rest = deflate_cubic(c, r[0]);
        for want in &r[1..] {
            assert!(rest.iter().any(|g| (g - want).norm() < 1e-12));
        }
    }

    proptest! {
        #[test]
        fn recovers_random_real_roots(
            a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0
        ) {
            let mut r = [a, b, c];
            r.sort_by(f64::total_cmp);
            prop_assume!(r[1] - r[0] > 1e-3 && r[2] - r[1] > 1e-3);
            match real_cubic_roots(from_roots(r)) {
                RealCubicRoots::Three { roots, .. } => {
                    for (g, w) in roots.iter().zip(r) {
                        prop_assert!((g - w).abs() < 1e-9 * (1.0 + w.abs()));
                    }
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }

        #[test]
        fn complex_residuals_vanish(
            re in proptest::array::uniform4(-5.0f64..5.0),
            im in proptest::array::uniform4(-5.0f64..5.0),
        ) {
            prop_assume!(re[0].abs() + im[0].abs() > 0.1);
            let c = [0, 1, 2, 3].map(|k| Complex64::new(re[k], im[k]));
            let scale: f64 = c.iter().map(|z| z.norm()).sum();
            for z in complex_cubic_roots(c) {
                let (v, _) = horner_c(&c, z);
                prop_assert!(v.norm() < 1e-9 * scale * (1.0 + z.norm()).powi(3));
            }
        }
    }
}
