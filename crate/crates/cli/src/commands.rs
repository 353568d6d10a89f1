use std::fmt;
use std::io;

use clap::Args;
use mp3_core::critical::critical_report;
use mp3_core::density::uniform_grid;
use mp3_core::green::{pde_residual, solve_green};
use mp3_core::wishart::{goodness_of_fit, sample_spectrum, McConfig};
use mp3_core::{
    density_chiral, density_wigner, support as support_of, DensityCurve, Error, MpDensity, Params,
};
use num_complex::Complex64;
use serde_json::json;

use crate::output::{pretty, Format, OutputSpec, Table, SCHEMA};
use crate::svg::Plot;

pub const EXIT_OK: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BRANCH: u8 = 3;
pub const EXIT_FIT: u8 = 4;
pub const EXIT_EIGEN: u8 = 5;

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
    Io(io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_INVALID,
            Failure::Core(e) => match e {
                Error::InvalidParams(_) | Error::Domain(_) | Error::DegenerateInput(_) => {
                    EXIT_INVALID
                }
                Error::NoRealSupport { .. }
                | Error::BranchFailure { .. }
                | Error::QuadratureFailure { .. }
                | Error::ContinuationFailure { .. }
                | Error::BranchAmbiguity { .. } => EXIT_BRANCH,
                Error::FitRejected { .. } => EXIT_FIT,
                Error::EigensolverFailure { .. } => EXIT_EIGEN,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Io(e) => write!(f, "output: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(String, u8), Failure>;

fn params_json(p: &Params) -> serde_json::Value {
    json!({"r": p.r(), "t": p.t(), "a": p.a()})
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    /// Grid start; defaults to x_L and is clipped at 0.
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    /// Grid end; defaults to x_R.
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 401, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
    #[command(flatten)]
    pub out: OutputSpec,
}

pub fn density(args: &DensityArgs) -> Outcome {
    let p = Params::new(args.r, args.t, args.a)?;
    let model = MpDensity::new(p)?;
    let s = model.support().clone();
    let lo = args.x_min.unwrap_or(s.x_left).max(0.0);
    let hi = args.x_max.unwrap_or(s.x_right);
    if !(hi > lo) {
        return Err(Failure::Usage(format!("empty grid [{lo}, {hi}]")));
    }
    let curve = DensityCurve::evaluate(p, uniform_grid(lo, hi, args.points as usize))?;
    let table = Table {
        command: "density",
        params: params_json(&p),
        annotations: vec![("x_L".into(), s.x_left), ("x_R".into(), s.x_right)],
        columns: vec!["x", "rho"],
        rows: curve
            .grid
            .iter()
            .zip(&curve.values)
            .map(|(&x, &y)| vec![x, y])
            .collect(),
    };
    Ok((
        table.render(&args.out, format!("density, {p}"), "rho(x)"),
        EXIT_OK,
    ))
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 301, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
    #[command(flatten)]
    pub out: OutputSpec,
}

fn support_rows(args: &SupportArgs) -> Result<Vec<Vec<f64>>, Failure> {
    if !(args.t_min >= 0.0 && args.t_max > args.t_min) {
        return Err(Failure::Usage(format!(
            "need 0 <= t_min < t_max, got [{}, {}]",
            args.t_min, args.t_max
        )));
    }
    uniform_grid(args.t_min, args.t_max, args.points as usize)
        .into_iter()
        .map(|t| {
            let s = support_of(&Params::new(args.r, t, args.a)?)?;
            Ok(vec![t, s.x_left, s.x_right])
        })
        .collect()
}

pub fn support(args: &SupportArgs) -> Outcome {
    // Validate r and a once up front so the message names them.
    Params::new(args.r, args.t_max.max(0.0), args.a)?;
    let table = Table {
        command: "support",
        params: json!({"r": args.r, "a": args.a}),
        annotations: vec![],
        columns: vec!["t", "x_L", "x_R"],
        rows: support_rows(args)?,
    };
    let title = format!("support, r={}, a={}", args.r, args.a);
    Ok((table.render(&args.out, title, "x"), EXIT_OK))
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[command(flatten)]
    pub out: OutputSpec,
}

pub fn critical(args: &CriticalArgs) -> Outcome {
    let report = critical_report(args.a)?;
    let out = &args.out;
    let body = match out.format_or(Format::Json) {
        Format::Json => {
            let windows: serde_json::Map<_, _> = report
                .fits
                .iter()
                .map(|(name, f)| {
                    (
                        name.clone(),
                        json!([out.round(f.window.0), out.round(f.window.1)]),
                    )
                })
                .collect();
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "value": out.round(c.value),
                        "target": out.round(c.target),
                        "tolerance": c.tolerance,
                        "relative": c.relative,
                        "pass": c.pass,
                    })
                })
                .collect();
            pretty(&json!({
                "schema": SCHEMA,
                "command": "critical",
                "a": report.a,
                "t_c": report.t_c,
                "nu": out.round(report.nu),
                "beta1": out.round(report.beta1),
                "beta2": out.round(report.beta2),
                "gamma1": out.round(report.gamma1),
                "gamma2": out.round(report.gamma2),
                "gamma3": out.round(report.gamma3),
                "amplitudes": {
                    "nu": out.round(report.amplitudes.nu),
                    "gamma1": out.round(report.amplitudes.gamma1),
                    "gamma2": out.round(report.amplitudes.gamma2),
                    "beta2": out.round(report.amplitudes.beta2),
                },
                "windows": windows,
                "r_squared": report.fits.iter().map(|(n, f)| (n.clone(), out.round(f.r_squared))).collect::<serde_json::Map<_, _>>(),
                "scaling_relation_gap": out.round(report.scaling_relation_gap),
                "checks": checks,
                "all_pass": report.all_pass(),
            }))
        }
        Format::Csv => {
            let mut s = format!(
                "# a={}\n# t_c={}\nname,value,target,tolerance,relative,pass\n",
                out.num(report.a),
                out.num(report.t_c)
            );
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    c.name,
                    out.num(c.value),
                    out.num(c.target),
                    out.num(c.tolerance),
                    c.relative,
                    c.pass
                ));
            }
            s
        }
        Format::Svg => {
            return Err(Failure::Usage(
                "svg output is not available for critical; use json or csv".into(),
            ));
        }
    };
    let code = if report.all_pass() {
        EXIT_OK
    } else {
        for c in report.failures() {
            eprintln!(
                "out of tolerance: {} = {} (target {})",
                c.name, c.value, c.target
            );
        }
        EXIT_TOLERANCE
    };
    Ok((body, code))
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Histogram bin count; Freedman-Diaconis when omitted.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Compare against the model with this a instead of the sampled one.
    #[arg(long, allow_negative_numbers = true)]
    pub model_a: Option<f64>,
    /// Largest KS distance that counts as agreement.
    #[arg(long, default_value_t = 0.02)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutputSpec,
}

pub fn mc(args: &McArgs) -> Outcome {
    let config = McConfig {
        m: args.m,
        n: args.n,
        t: args.t,
        a: args.a,
        samples: args.samples,
        seed: args.seed,
    };
    config.validate()?;
    let model = Params::new(config.ratio(), config.t, args.model_a.unwrap_or(config.a))?;
    let mut sample = sample_spectrum(config)?;
    if let Some(bins) = args.bins {
        if bins == 0 {
            return Err(Failure::Usage("bins must be >= 1".into()));
        }
        sample.rebin(bins);
    }
    let gof = goodness_of_fit(&sample, &model)?;
    eprintln!(
        "ks_distance={} l1_distance={}",
        gof.ks_distance, gof.l1_distance
    );

    let out = &args.out;
    let hist = &sample.histogram;
    let centers: Vec<f64> = hist.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect();
    let eval = MpDensity::new(model)?;
    let overlay: Vec<f64> = centers
        .iter()
        .map(|&x| eval.density(x))
        .collect::<Result<_, _>>()?;

    let body = match out.format_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::new();
            for (k, v) in [
                ("m", config.m as f64),
                ("n", config.n as f64),
                ("t", config.t),
                ("a", config.a),
                ("samples", config.samples as f64),
                ("model_a", model.a()),
                ("ks_distance", gof.ks_distance),
                ("l1_distance", gof.l1_distance),
            ] {
                s.push_str(&format!("# {k}={}\n", out.num(v)));
            }
            s.push_str(&format!("# seed={}\n", config.seed));
            s.push_str("eigenvalue\n");
            for v in &sample.eigenvalues {
                s.push_str(&out.num(*v));
                s.push('\n');
            }
            s
        }
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "command": "mc",
            "config": {
                "m": config.m, "n": config.n, "t": config.t, "a": config.a,
                "samples": config.samples, "seed": config.seed,
            },
            "model": params_json(&model),
            "eigenvalue_count": sample.eigenvalues.len(),
            "mean": out.round(sample.mean()),
            "standard_error": out.round(sample.standard_error()),
            "histogram": {
                "edges": out.round_all(&hist.edges),
                "counts": hist.counts,
                "density": out.round_all(&hist.density()),
            },
            "overlay": {"x": out.round_all(&centers), "rho": out.round_all(&overlay)},
            "gof": {
                "ks_distance": out.round(gof.ks_distance),
                "l1_distance": out.round(gof.l1_distance),
                "threshold": args.threshold,
            },
        })),
        Format::Svg => {
            let dens = hist.density();
            let mut steps = Vec::with_capacity(2 * dens.len() + 2);
            steps.push((hist.edges[0], 0.0));
            for (i, d) in dens.iter().enumerate() {
                steps.push((hist.edges[i], *d));
                steps.push((hist.edges[i + 1], *d));
            }
            steps.push((hist.edges[dens.len()], 0.0));
            let grid = uniform_grid(hist.edges[0], hist.edges[dens.len()], 400);
            let curve = DensityCurve::evaluate(model, grid)?;
            let mut plot = Plot::new(
                format!(
                    "Wishart m={}, n={}, samples={}; model {model}",
                    config.m, config.n, config.samples
                ),
                "x",
                "density",
            );
            plot.line("histogram", steps);
            plot.line("model", curve.grid.into_iter().zip(curve.values).collect());
            let mut csv = String::from("bin_center,histogram,model\n");
            for ((c, h), m) in centers.iter().zip(&dens).zip(&overlay) {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    out.num(*c),
                    out.num(*h),
                    out.num(*m)
                ));
            }
            plot.render(out, &csv)
        }
    };
    let code = if gof.ks_distance < args.threshold {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    };
    Ok((body, code))
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z_re: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z_im: f64,
    /// Finite-difference step for the PDE check; also run at h/2.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[command(flatten)]
    pub out: OutputSpec,
}

pub fn green(args: &GreenArgs) -> Outcome {
    let p = Params::new(args.r, args.t, args.a)?;
    let z = Complex64::new(args.z_re, args.z_im);
    let sample = solve_green(z, &p)?;
    let g = sample.g_value;
    let pde = |h: f64| pde_residual(z, &p, h, h);
    let (pde_h, pde_h2) = match (pde(args.h), pde(0.5 * args.h)) {
        (Ok(c), Ok(f)) => (c, f),
        (Err(Error::Domain(m)), _) | (_, Err(Error::Domain(m))) => {
            eprintln!("PDE check skipped: {m}");
            (f64::NAN, f64::NAN)
        }
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    };
    let ratio = pde_h / pde_h2;
    let out = &args.out;
    let columns = [
        "z_re",
        "z_im",
        "g_re",
        "g_im",
        "residual",
        "pde_h",
        "pde_h_half",
        "pde_ratio",
    ];
    let values = [
        z.re,
        z.im,
        g.re,
        g.im,
        sample.residual,
        pde_h,
        pde_h2,
        ratio,
    ];
    let body = match out.format_or(Format::Csv) {
        Format::Csv => {
            let cells: Vec<String> = values.iter().map(|&v| out.num(v)).collect();
            format!("{}\n{}\n", columns.join(","), cells.join(","))
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("schema".into(), json!(SCHEMA));
            obj.insert("command".into(), json!("green"));
            obj.insert("params".into(), params_json(&p));
            obj.insert("path_id".into(), json!(sample.path_id));
            obj.insert("h".into(), json!(args.h));
            for (k, v) in columns.iter().zip(values) {
                obj.insert((*k).into(), out.round(v));
            }
            pretty(&serde_json::Value::Object(obj))
        }
        Format::Svg => {
            return Err(Failure::Usage(
                "svg output is not available for green; use json or csv".into(),
            ));
        }
    };
    let code = if sample.residual < 1e-12 * (1.0 + z.norm()) {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    };
    Ok((body, code))
}

#[derive(Debug, Args)]
pub struct ChiralArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    /// Half-width of the symmetric grid; defaults to 1.1 times the outer edge.
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 401, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
    /// Report sqrt(t) rho(sqrt(t) x) next to the semicircle.
    #[arg(long)]
    pub rescale: bool,
    #[command(flatten)]
    pub out: OutputSpec,
}

pub fn chiral(args: &ChiralArgs) -> Outcome {
    let p = Params::new(args.r, args.t, args.a)?;
    if p.t() <= 0.0 {
        return Err(Error::Domain("t must be > 0 for a density".into()).into());
    }
    let squared = Params::new(args.r, args.t, args.a * args.a)?;
    let scale = if args.rescale { p.t().sqrt() } else { 1.0 };
    let x_max = args.x_max.unwrap_or_else(|| {
        1.1 * support_of(&squared)
            .map(|s| s.x_right.sqrt())
            .unwrap_or(1.0)
            / scale
    });
    if !(x_max > 0.0) {
        return Err(Failure::Usage(format!("x_max = {x_max} must be > 0")));
    }
    let grid = uniform_grid(-x_max, x_max, args.points as usize);
    let mut rows = Vec::with_capacity(grid.len());
    let mut worst: f64 = 0.0;
    for &x in &grid {
        let rho = scale * density_chiral(scale * x, &p)?;
        if args.rescale {
            let w = density_wigner(x);
            worst = worst.max((rho - w).abs());
            rows.push(vec![x, rho, w]);
        } else {
            rows.push(vec![x, rho]);
        }
    }
    let (columns, annotations) = if args.rescale {
        (
            vec!["x", "rho_scaled", "wigner"],
            vec![("max_abs_diff".to_string(), worst)],
        )
    } else {
        (vec!["x", "rho"], vec![])
    };
    let table = Table {
        command: "chiral",
        params: params_json(&p),
        annotations,
        columns,
        rows,
    };
    Ok((
        table.render(&args.out, format!("chiral density, {p}"), "rho_chiral(x)"),
        EXIT_OK,
    ))
}
