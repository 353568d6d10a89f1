//! Eigenvalues of dense complex Hermitian matrices.
//!
//! Householder reflections bring the matrix to Hermitian tridiagonal form.
//! A diagonal unitary similarity then makes the off-diagonal real
//! (`|e_k|`), and implicit QL with shifts finds the eigenvalues of the
//! resulting real symmetric tridiagonal matrix.

use num_complex::Complex64;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Row-major `n x n` Hermitian matrix; only used through its values, the
/// upper and lower triangles must agree.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "expected {n}x{n} entries");
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Largest absolute row sum, an upper bound on the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n.max(1))
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Reduce to real symmetric tridiagonal form; returns `(diag, offdiag)`
/// with `offdiag[k]` coupling rows `k` and `k + 1`.
pub fn tridiagonalize(m: &HermitianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n;
    let mut a = m.data.clone();
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let s = k + 1;
        let norm = (s..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a[s * n + k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in s..n {
            v[i] = a[i * n + k];
        }
        v[s] -= alpha;
        let vnorm = (s..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            off[k] = norm;
            continue;
        }
        for vi in &mut v[s..n] {
            *vi /= vnorm;
        }

        // A <- H A H with H = I - 2 v v^dagger on the trailing block:
        // A - v q^dagger - q v^dagger with q = 2 A v - 2 (v^dagger A v) v.
        for i in s..n {
            let row = &a[i * n + s..i * n + n];
            p[i] = row.iter().zip(&v[s..n]).map(|(aij, vj)| aij * vj).sum();
        }
        let vap: f64 = (s..n).map(|i| (v[i].conj() * p[i]).re).sum();
        for i in s..n {
            p[i] = 2.0 * p[i] - 2.0 * vap * v[i];
        }
        for i in s..n {
            for j in s..n {
                a[i * n + j] -= v[i] * p[j].conj() + p[i] * v[j].conj();
            }
        }
        off[k] = norm;
        for i in s..n {
            a[i * n + k] = Complex64::new(0.0, 0.0);
            a[k * n + i] = Complex64::new(0.0, 0.0);
        }
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, off)
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL.
/// Returns them unsorted; `Err` carries the index that failed to converge.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>, usize> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.resize(n, 0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(l);
            }
            // Shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Eigenvalues in ascending order.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>, String> {
    let (d, e) = tridiagonalize(m);
    let mut vals = tridiagonal_eigenvalues(&d, &e)
        .map_err(|l| format!("QL iteration did not converge for eigenvalue {l}"))?;
    if vals.iter().any(|v| !v.is_finite()) {
        return Err("non-finite eigenvalue".into());
    }
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}
