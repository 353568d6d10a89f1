use mp3_core::critical::{critical_report, geometric_grid, scaling_relation_check};
use mp3_core::{support, Params};

#[test]
fn exponent_table_for_several_a() {
    let mut exponents = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        let report = critical_report(a).unwrap();
        for c in &report.checks {
            println!(
                "a={a} {:<22} {:>12.6} target {:>10.6} pass={}",
                c.name, c.value, c.target, c.pass
            );
        }
        assert!(report.all_pass(), "a={a}: {:?}", report.failures());
        for (_, fit) in &report.fits {
            assert!(fit.r_squared >= 0.999);
            assert!(0.0 < fit.window.0 && fit.window.0 < fit.window.1);
        }
        exponents.push([
            report.nu,
            report.beta1,
            report.beta2,
            report.gamma1,
            report.gamma2,
            report.gamma3,
        ]);
    }
    // Universality: exponents agree across a far inside the tolerances.
    for k in 0..6 {
        let vals: Vec<f64> = exponents.iter().map(|e| e[k]).collect();
        let spread = vals.iter().copied().fold(f64::MIN, f64::max)
            - vals.iter().copied().fold(f64::MAX, f64::min);
        assert!(spread < 0.01, "exponent {k}: {vals:?}");
    }
}

#[test]
fn scaling_relation_holds() {
    for a in [1.0, 2.0] {
        assert!(scaling_relation_check(a).unwrap() < 0.1);
    }
}

#[test]
fn no_critical_time_below_square_case() {
    for a in [0.5, 1.0, 2.0] {
        for t in geometric_grid(1e-3 * a, 10.0 * a, 200) {
            let xl = support(&Params::new(0.999, t, a).unwrap()).unwrap().x_left;
            assert!(xl > 0.0, "a={a} t={t}: x_L = {xl}");
        }
    }
}
