//! Three-parametric Marcenko-Pastur density `rho(x; r, t, a)`: the
//! hydrodynamic limit of the eigenvalue density of `L = K^dagger K` for an
//! `M x N` complex Gaussian matrix `K` with variance `t` per entry and a
//! diagonal shift `sqrt(M a)`.
//!
//! * [`density`]: closed forms, support, Hilbert transform, limits.
//! * [`green`]: the algebraic resolvent equation solved in the complex
//!   plane, used as an independent oracle.
//! * [`critical`]: power-law fits of the dynamic critical behaviour at `r = 1`.
//! * [`wishart`]: finite-size Monte Carlo validation.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod density;
pub mod eigen;
pub mod error;
pub mod green;
pub mod params;
pub mod poly;
pub mod quad;
pub mod wishart;

pub use density::{
    boundary_closed_form, density, density_chiral, density_mp_classic, density_via_f,
    density_wigner, eval_phi, eval_s, hilbert_r, moment, support, BoundaryValue, DensityCurve,
    EdgeForm, MpDensity, Support,
};
pub use error::{Error, Result};
pub use params::Params;
