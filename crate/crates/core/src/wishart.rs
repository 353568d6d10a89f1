//! Finite-size non-centred complex Wishart spectra.
//!
//! `K` is `m x n` with independent complex Gaussian entries of variance
//! `t` (`t/2` per real component); the real parts of the diagonal entries
//! `K_kk`, `k < n`, are shifted by `sqrt(m a)`. The eigenvalues of
//! `L = K^dagger K`, divided by `m`, follow `rho(x; n/m, t, a)` as `m`
//! and `n` grow.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::MpDensity;
use crate::eigen::{hermitian_eigenvalues, HermitianMatrix};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::quad::TanhSinh;

const MAX_BINS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub m: usize,
    pub n: usize,
    pub t: f64,
    pub a: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.m < self.n {
            return Err(Error::InvalidParams(format!(
                "need m >= n >= 1, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidParams(format!("t = {} must be > 0", self.t)));
        }
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParams(format!("a = {} must be >= 0", self.a)));
        }
        if self.samples < 1 {
            return Err(Error::InvalidParams("samples must be >= 1".into()));
        }
        Ok(())
    }

    pub fn ratio(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    /// Model parameters `(n/m, t, a)`.
    pub fn params(&self) -> Result<Params> {
        Params::new(self.ratio(), self.t, self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over `[min, max]` of sorted `values`.
    pub fn with_bins(sorted: &[f64], bins: usize) -> Self {
        let bins = bins.clamp(1, MAX_BINS);
        let (lo, hi) = match (sorted.first(), sorted.last()) {
            (Some(&lo), Some(&hi)) if hi > lo => (lo, hi),
            (Some(&lo), Some(_)) => (lo - 0.5, lo + 0.5),
            _ => (0.0, 1.0),
        };
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let mut counts = vec![0; bins];
        for &v in sorted {
            let idx = (((v - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Self { edges, counts }
    }

    /// Freedman-Diaconis bin width `2 IQR / N^{1/3}`.
    pub fn freedman_diaconis(sorted: &[f64]) -> Self {
        let n = sorted.len();
        if n < 2 {
            return Self::with_bins(sorted, 1);
        }
        let q = |f: f64| sorted[((n - 1) as f64 * f).round() as usize];
        let iqr = q(0.75) - q(0.25);
        let range = sorted[n - 1] - sorted[0];
        let bins = if iqr > 0.0 {
            (range / (2.0 * iqr / (n as f64).cbrt())).ceil() as usize
        } else {
            1
        };
        Self::with_bins(sorted, bins)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Counts normalized to a probability density.
    pub fn density(&self) -> Vec<f64> {
        let total = self.total().max(1) as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| c as f64 / (total * (e[1] - e[0])))
            .collect()
    }

    pub fn mode_center(&self) -> f64 {
        let (i, _) = self
            .counts
            .iter()
            .enumerate()
            .max_by_key(|&(i, &c)| (c, std::cmp::Reverse(i)))
            .unwrap_or((0, &0));
        0.5 * (self.edges[i] + self.edges[i + 1])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSample {
    pub config: McConfig,
    /// Scaled by `1/m`, ascending.
    pub eigenvalues: Vec<f64>,
    pub histogram: Histogram,
}

impl SpectrumSample {
    /// Fraction of eigenvalues `<= x`.
    pub fn empirical_cdf(&self, x: f64) -> f64 {
        let k = self.eigenvalues.partition_point(|&v| v <= x);
        k as f64 / self.eigenvalues.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.eigenvalues.iter().sum::<f64>() / self.eigenvalues.len() as f64
    }

    pub fn std_dev(&self) -> f64 {
        let n = self.eigenvalues.len() as f64;
        let mean = self.mean();
        let var = self
            .eigenvalues
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0).max(1.0);
        var.sqrt()
    }

    pub fn standard_error(&self) -> f64 {
        self.std_dev() / (self.eigenvalues.len() as f64).sqrt()
    }

    pub fn rebin(&mut self, bins: usize) {
        self.histogram = Histogram::with_bins(&self.eigenvalues, bins);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofReport {
    pub ks_distance: f64,
    pub l1_distance: f64,
}

/// Pair of independent standard normals from two uniforms.
fn box_muller(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    (radius * angle.cos(), radius * angle.sin())
}

/// Raw (unscaled) eigenvalues of one `L = K^dagger K` draw.
fn one_sample(config: &McConfig, index: usize) -> Result<Vec<f64>> {
    let (m, n) = (config.m, config.n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let sd = (config.t / 2.0).sqrt();
    let shift = (m as f64 * config.a).sqrt();

    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..m {
        for (j, entry) in row.iter_mut().enumerate() {
            let (re, im) = box_muller(&mut rng);
            *entry = Complex64::new(sd * re, sd * im);
            if j == k {
                entry.re += shift;
            }
        }
        // Rank-one update of the upper triangle.
        for i in 0..n {
            let ci = row[i].conj();
            let dst = &mut l[i * n + i..i * n + n];
            for (d, kj) in dst.iter_mut().zip(&row[i..]) {
                *d += ci * kj;
            }
        }
    }
    for i in 0..n {
        l[i * n + i].im = 0.0;
        for j in 0..i {
            l[i * n + j] = l[j * n + i].conj();
        }
    }
    let mat = HermitianMatrix::from_row_major(n, l);
    let norm = mat.norm_inf();
    let mut vals = hermitian_eigenvalues(&mat).map_err(|reason| Error::EigensolverFailure {
        sample: index,
        reason,
    })?;
    if let Some(&low) = vals.first() {
        if low < -1e-10 * norm {
            return Err(Error::EigensolverFailure {
                sample: index,
                reason: format!(
                    "eigenvalue {low} violates positive semidefiniteness (|L| = {norm})"
                ),
            });
        }
    }
    for v in &mut vals {
        *v = v.max(0.0);
    }
    Ok(vals)
}

/// Draw `config.samples` independent matrices. Sample `i` uses stream `i`
/// of a generator seeded with `config.seed`, so the result does not depend
/// on how the work is scheduled.
pub fn sample_spectrum(config: McConfig) -> Result<SpectrumSample> {
    config.validate()?;
    let per_sample: Vec<Vec<f64>> = (0..config.samples)
        .into_par_iter()
        .map(|i| one_sample(&config, i))
        .collect::<Result<_>>()?;
    let scale = config.m as f64;
    let mut eigenvalues: Vec<f64> = per_sample
        .into_iter()
        .flatten()
        .map(|v| v / scale)
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let histogram = Histogram::freedman_diaconis(&eigenvalues);
    Ok(SpectrumSample {
        config,
        eigenvalues,
        histogram,
    })
}

/// Model CDF at each of the ascending points `xs`, accumulated
/// interval by interval so every integral is short.
pub fn model_cdf_sorted(xs: &[f64], p: &Params) -> Result<Vec<f64>> {
    let model = MpDensity::new(*p)?;
    let (lo, hi) = (model.support().x_left, model.support().x_right);
    let quad = TanhSinh::default();
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    let mut prev = lo;
    let mut failure = None;
    for &x in xs {
        let x_c = x.clamp(lo, hi);
        if x_c > prev {
            let piece = quad.integrate(
                |s| match model.density(s) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                },
                prev,
                x_c,
            );
            if let Some(e) = failure.take() {
                return Err(e);
            }
            acc += piece?.value;
            prev = x_c;
        }
        out.push(acc.clamp(0.0, 1.0));
    }
    Ok(out)
}

/// `int_0^x rho(s; p) ds`.
pub fn model_cdf(x: f64, p: &Params) -> Result<f64> {
    p.require_positive_time()?;
    Ok(model_cdf_sorted(&[x], p)?[0])
}

pub fn goodness_of_fit(sample: &SpectrumSample, p: &Params) -> Result<GofReport> {
    let xs = &sample.eigenvalues;
    if xs.is_empty() {
        return Err(Error::DegenerateInput("empty spectrum".into()));
    }
    let r = sample.config.ratio();
    if (p.r() - r).abs() > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "model r = {} does not match sample n/m = {r}",
            p.r()
        )));
    }
    let cdf = model_cdf_sorted(xs, p)?;
    let total = xs.len() as f64;
    let ks_distance = cdf
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / total).max((i + 1) as f64 / total - f))
        .fold(0.0, f64::max);

    let hist = &sample.histogram;
    let edge_cdf = model_cdf_sorted(&hist.edges, p)?;
    let inside: f64 = hist
        .counts
        .iter()
        .zip(edge_cdf.windows(2))
        .map(|(&c, f)| (c as f64 / total - (f[1] - f[0])).abs())
        .sum();
    let outside = 1.0 - (edge_cdf[edge_cdf.len() - 1] - edge_cdf[0]);
    Ok(GofReport {
        ks_distance,
        l1_distance: inside + outside.max(0.0),
    })
}
