//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]` / `[FAIL]` line with the measured value, the tolerance and the
//! runtime against its budget, then asserts.

use std::process::Command;
use std::time::{Duration, Instant};

use mp3_core::critical::critical_report;
use mp3_core::density::uniform_grid;
use mp3_core::green::{boundary_value, lemma_residuals, pde_residual, solve_green};
use mp3_core::quad::TanhSinh;
use mp3_core::wishart::{goodness_of_fit, sample_spectrum, McConfig};
use mp3_core::{
    density, density_chiral, density_mp_classic, density_wigner, moment, support, Params,
};
use num_complex::Complex64;
use rayon::prelude::*;

fn lattice() -> Vec<Params> {
    let mut out = Vec::with_capacity(80);
    for r in [0.1, 0.3, 0.7, 1.0] {
        for t in [0.2, 0.5, 1.0, 2.0, 5.0] {
            for a in [0.0, 0.5, 1.0, 3.0] {
                out.push(Params::new(r, t, a).unwrap());
            }
        }
    }
    out
}

/// Midpoints of `n` equal cells of the open support.
fn interior(p: &Params, n: usize) -> Vec<f64> {
    let s = support(p).unwrap();
    (0..n)
        .map(|i| s.x_left + s.width() * (i as f64 + 0.5) / n as f64)
        .collect()
}

fn report(
    id: u32,
    name: &str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
) -> bool {
    let in_time = elapsed <= budget;
    let ok = pass && in_time;
    println!(
        "[{}] criterion {id}: {name}: {detail}; {:.2} s (budget {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

#[test]
fn criterion_1_classic_reduction() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for r in [0.3, 0.7, 1.0] {
        let p = Params::new(r, 1.0, 0.0).unwrap();
        let s = support(&p).unwrap();
        for x in uniform_grid(s.x_left, s.x_right, 2000) {
            let d = (density(x, &p).unwrap() - density_mp_classic(x, r).unwrap()).abs();
            worst = worst.max(d);
        }
    }
    let ok = report(
        1,
        "classic reduction",
        worst < 1e-10,
        format!("max |diff| = {worst:.3e} (tol 1e-10)"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn criterion_2_normalization_and_mean() {
    let start = Instant::now();
    let (mass, mean) = lattice()
        .par_iter()
        .map(|p| {
            let m0 = (moment(0, p).unwrap() - 1.0).abs();
            let m1 = (moment(1, p).unwrap() - (p.t() + p.a())).abs();
            (m0, m1)
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
    let ok = report(
        2,
        "normalization and mean",
        mass < 1e-8 && mean < 1e-8,
        format!(
            "max |mass - 1| = {mass:.3e}, max |mean - (t+a)| = {mean:.3e} (tol 1e-8, 80 points)"
        ),
        start.elapsed(),
        Duration::from_secs(30),
    );
    assert!(ok);
}

#[test]
fn criterion_3_figure_edge_value() {
    let start = Instant::now();
    let xl = support(&Params::new(1.0, 0.5, 1.0).unwrap())
        .unwrap()
        .x_left;
    let ok = report(
        3,
        "x_L(1, 0.5, 1)",
        (xl - 0.02835).abs() < 1e-4,
        format!("x_L = {xl:.6} (target 0.02835 +- 1e-4)"),
        start.elapsed(),
        Duration::from_secs(1),
    );
    assert!(ok);
}

#[test]
fn criterion_4_critical_exponents() {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        match critical_report(a) {
            Ok(rep) => {
                for c in rep.failures() {
                    parts.push(format!(
                        "a={a} {} = {} (target {})",
                        c.name, c.value, c.target
                    ));
                }
                pass &= rep.all_pass();
                parts.push(format!(
                    "a={a}: nu={:.4} beta1={:.4} gamma1={:.4} gamma2={:.4} gamma3={:.4} beta2={:.4} gap={:.4}",
                    rep.nu, rep.beta1, rep.gamma1, rep.gamma2, rep.gamma3, rep.beta2, rep.scaling_relation_gap
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("a={a}: {e}"));
            }
        }
    }
    let ok = report(
        4,
        "critical exponents and amplitudes",
        pass,
        parts.join("; "),
        start.elapsed(),
        Duration::from_secs(120),
    );
    assert!(ok);
}

#[test]
fn criterion_5_scaling_homogeneity() {
    let start = Instant::now();
    let worst = lattice()
        .par_iter()
        .map(|p| {
            let mut w: f64 = 0.0;
            for kappa in [0.1, 2.0, 10.0] {
                let q = p.scaled(kappa).unwrap();
                for x in interior(p, 50) {
                    let d =
                        (kappa * density(kappa * x, &q).unwrap() - density(x, p).unwrap()).abs();
                    w = w.max(d);
                }
            }
            w
        })
        .reduce(|| 0.0, f64::max);
    let ok = report(
        5,
        "scaling homogeneity",
        worst < 1e-9,
        format!("max |diff| = {worst:.3e} (tol 1e-9)"),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn criterion_6_long_term_universality() {
    let start = Instant::now();
    let t = 1e4;
    let mut worst_mp: f64 = 0.0;
    for r in [0.3, 1.0] {
        let p = Params::new(r, t, 1.0).unwrap();
        for x in interior(&Params::new(r, 1.0, 0.0).unwrap(), 2000) {
            let d = (t * density(t * x, &p).unwrap() - density_mp_classic(x, r).unwrap()).abs();
            worst_mp = worst_mp.max(d);
        }
    }
    let p = Params::new(1.0, t, 1.0).unwrap();
    let worst_wigner = uniform_grid(-2.2, 2.2, 2001)
        .into_iter()
        .map(|x| (t.sqrt() * density_chiral(t.sqrt() * x, &p).unwrap() - density_wigner(x)).abs())
        .fold(0.0, f64::max);
    let ok = report(
        6,
        "long-term universality",
        worst_mp < 0.01 && worst_wigner < 0.01,
        format!("MP sup {worst_mp:.3e}, Wigner sup {worst_wigner:.3e} (tol 0.01)"),
        start.elapsed(),
        Duration::from_secs(10),
    );
    assert!(ok);
}

#[test]
fn criterion_7_green_oracle() {
    let start = Instant::now();
    let params = lattice();
    let per_p: Vec<(f64, f64, f64)> = params
        .par_iter()
        .map(|p| {
            let (mut oracle, mut resid, mut lemma): (f64, f64, f64) = (0.0, 0.0, 0.0);
            for x in interior(p, 20) {
                if x <= 0.0 {
                    continue;
                }
                let bv = boundary_value(x, p).unwrap();
                oracle =
                    oracle.max((bv.i_part / std::f64::consts::PI - density(x, p).unwrap()).abs());
                let res = lemma_residuals(x, p, &bv).unwrap();
                lemma = lemma.max(res.e_real).max(res.e_imag);
                for eps in [1e-4, 1e-6] {
                    let z = Complex64::new(x, eps);
                    let s = solve_green(z, p).unwrap();
                    resid = resid.max(s.residual / (1.0 + z.norm()));
                }
            }
            (oracle, resid, lemma)
        })
        .collect();
    let oracle = per_p.iter().map(|v| v.0).fold(0.0, f64::max);
    let resid = per_p.iter().map(|v| v.1).fold(0.0, f64::max);
    let lemma = per_p.iter().map(|v| v.2).fold(0.0, f64::max);

    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for p in &params {
        let s = support(p).unwrap();
        for z in [
            Complex64::new(2.0, 0.5),
            Complex64::new(0.5 * (s.x_left + s.x_right), 0.5),
        ] {
            let ratio =
                pde_residual(z, p, 1e-3, 1e-3).unwrap() / pde_residual(z, p, 5e-4, 5e-4).unwrap();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    let pass = oracle < 1e-6 && resid < 1e-12 && lemma < 1e-8 && lo >= 3.0 && hi <= 5.0;
    let ok = report(
        7,
        "Green's-function oracle",
        pass,
        format!(
            "sup |I/pi - rho| = {oracle:.3e} (tol 1e-6), residual/(1+|z|) = {resid:.3e} (tol 1e-12), \
             lemma = {lemma:.3e} (tol 1e-8), PDE ratio in [{lo:.3}, {hi:.3}] (need [3, 5])"
        ),
        start.elapsed(),
        Duration::from_secs(120),
    );
    assert!(ok);
}

/// KS distance of sorted `xs` against the one-parameter law, its CDF
/// accumulated between consecutive sample points.
fn classic_ks(xs: &[f64], r: f64) -> f64 {
    let (lo, hi) = ((1.0 - r.sqrt()).powi(2), (1.0 + r.sqrt()).powi(2));
    let quad = TanhSinh::default();
    let n = xs.len() as f64;
    let (mut cdf, mut prev, mut worst) = (0.0, lo, 0.0f64);
    for (i, &x) in xs.iter().enumerate() {
        let x = x.clamp(lo, hi);
        if x > prev {
            cdf += quad
                .integrate(|s| density_mp_classic(s, r).unwrap(), prev, x)
                .unwrap()
                .value;
            prev = x;
        }
        worst = worst.max(cdf - i as f64 / n).max((i + 1) as f64 / n - cdf);
    }
    worst
}

#[test]
fn criterion_8_monte_carlo_figure_one() {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [0.0, 1.0] {
        let s = sample_spectrum(McConfig {
            m: 1000,
            n: 300,
            t: 1.0,
            a,
            samples: 20,
            seed: 7,
        })
        .unwrap();
        let ks = if a == 0.0 {
            classic_ks(&s.eigenvalues, 0.3)
        } else {
            goodness_of_fit(&s, &Params::new(0.3, 1.0, 1.0).unwrap())
                .unwrap()
                .ks_distance
        };
        let z = (s.mean() - (1.0 + a)).abs() / s.standard_error();
        pass &= ks < 0.02 && z < 4.0;
        parts.push(format!(
            "a={a}: KS = {ks:.4} (tol 0.02), |mean - (t+a)| = {z:.2} SE (tol 4)"
        ));
    }
    let ok = report(
        8,
        "Monte Carlo Fig. 1",
        pass,
        parts.join("; "),
        start.elapsed(),
        Duration::from_secs(300),
    );
    assert!(ok);
}

#[test]
fn criterion_9_determinism() {
    let start = Instant::now();
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mp3"));
        cmd.args([
            "mc",
            "--m",
            "1000",
            "--n",
            "300",
            "--t",
            "1",
            "--a",
            "1",
            "--samples",
            "20",
            "--seed",
            "7",
            "--precision",
            "17",
        ]);
        match threads {
            Some(n) => cmd.env("MP3_THREADS", n),
            None => cmd.env_remove("MP3_THREADS"),
        };
        let out = cmd.output().expect("mp3 runs");
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let first = run(Some("1"));
    let second = run(Some("1"));
    let parallel = run(Some("4"));
    let default = run(None);
    let pass = first == second && first == parallel && first == default && !first.is_empty();
    let ok = report(
        9,
        "determinism",
        pass,
        format!(
            "{} bytes; repeat equal: {}, MP3_THREADS=4 equal: {}, default pool equal: {}",
            first.len(),
            first == second,
            first == parallel,
            first == default
        ),
        start.elapsed(),
        Duration::from_secs(600),
    );
    assert!(ok);
}
