//! Interference alignment by alternating leakage minimization.
//!
//! Receivers pick the least-interfered subspace of their interference
//! covariance; transmitters do the same on the reciprocal network. Both steps
//! can only lower the total leakage, so the iteration is monotone. Once the
//! subspaces settle, every receiver separates its own streams by zero-forcing
//! inside its interference-free subspace.

use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::channel::{random_orthonormal, CMatrix, ChannelSet, C64};
use crate::error::{invalid, Error, Result};
use crate::model::SystemConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IaOptions {
    /// Relative leakage improvement below which iteration stops.
    pub tol: f64,
    pub max_iters: usize,
    /// Leakage at or below which the design counts as converged.
    pub leakage_target: f64,
}

impl Default for IaOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 5000,
            leakage_target: 1e-8,
        }
    }
}

/// Precoders (`n_tx × d_i`) and per-stream combiners (`n_rx × d_k`), all
/// columns unit-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct IaSolution {
    pub precoders: Vec<CMatrix>,
    pub combiners: Vec<CMatrix>,
    /// Total residual interference `Σ_k Σ_{i≠k} ‖U_k^* H_ki V_i‖²_F` on the
    /// channels used for the design.
    pub leakage: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn total_leakage(ch: &ChannelSet, u: &[CMatrix], v: &[CMatrix]) -> f64 {
    let l = ch.pairs();
    let mut sum = 0.0;
    for k in 0..l {
        for i in (0..l).filter(|&i| i != k) {
            sum += (u[k].adjoint() * ch.get(k, i) * &v[i]).norm_squared();
        }
    }
    sum
}

/// Eigenvectors of the `d` smallest eigenvalues of a Hermitian matrix.
fn min_subspace(cov: CMatrix, d: usize) -> CMatrix {
    let n = cov.nrows();
    // symmetrize against rounding before the Hermitian solver
    let herm = (&cov + cov.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let cols: Vec<_> = order[..d]
        .iter()
        .map(|&j| eig.eigenvectors.column(j).clone_owned())
        .collect();
    CMatrix::from_columns(&cols)
}

fn normalize_columns(m: &mut CMatrix) {
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col.unscale_mut(n);
        }
    }
}

/// Per-stream zero-forcing inside the combining subspace `u` against the
/// effective direct channel `u^* H_kk v`.
fn zero_forcing_combiners(u: &CMatrix, h_kk: &CMatrix, v: &CMatrix) -> CMatrix {
    let g = u.adjoint() * h_kk * v;
    let mut w = match g.clone().try_inverse() {
        Some(inv) => u * inv.adjoint(),
        None => u.clone(),
    };
    normalize_columns(&mut w);
    w
}

/// Designs precoders and combiners satisfying the alignment conditions on the
/// channel set `csi` (exact or quantized), starting from random orthonormal
/// precoders drawn from `seed`.
pub fn design_ia(csi: &ChannelSet, config: &SystemConfig, opts: &IaOptions, seed: u64) -> Result<IaSolution> {
    let l = config.pairs();
    if csi.pairs() != l {
        return Err(invalid(
            "pairs",
            "channel set and configuration disagree on the pair count",
        ));
    }
    if !config.ia_feasible() {
        return Err(Error::IaInfeasible {
            antennas: config.n_tx() + config.n_rx(),
            required: config.ia_required_antennas(),
        });
    }
    let d = config.streams();
    let (nt, nr) = (config.n_tx(), config.n_rx());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<CMatrix> = d.iter().map(|&di| random_orthonormal(nt, di, &mut rng)).collect();
    let mut u: Vec<CMatrix> = d.iter().map(|&dk| random_orthonormal(nr, dk, &mut rng)).collect();

    let mut leakage = f64::INFINITY;
    let mut best = (u.clone(), v.clone(), leakage);
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        for k in 0..l {
            let mut cov = CMatrix::zeros(nr, nr);
            for i in (0..l).filter(|&i| i != k) {
                let hv = csi.get(k, i) * &v[i];
                cov += &hv * hv.adjoint();
            }
            u[k] = min_subspace(cov, d[k]);
        }
        for i in 0..l {
            let mut cov = CMatrix::zeros(nt, nt);
            for k in (0..l).filter(|&k| k != i) {
                let hu = csi.get(k, i).adjoint() * &u[k];
                cov += &hu * hu.adjoint();
            }
            v[i] = min_subspace(cov, d[i]);
        }
        let prev = leakage;
        leakage = total_leakage(csi, &u, &v);
        if leakage < best.2 {
            best = (u.clone(), v.clone(), leakage);
        }
        if leakage <= f64::MIN_POSITIVE || (prev.is_finite() && prev - leakage <= opts.tol * prev) {
            break;
        }
    }

    let (u, v, leakage) = best;
    let combiners = (0..l)
        .map(|k| zero_forcing_combiners(&u[k], csi.get(k, k), &v[k]))
        .collect();
    Ok(IaSolution {
        precoders: v,
        combiners,
        leakage,
        iterations,
        converged: leakage <= opts.leakage_target,
    })
}
