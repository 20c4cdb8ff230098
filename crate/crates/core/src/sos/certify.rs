//! SOS certification of even-degree forms.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sdp::{min_eigenvalue, solve_sdp, SdpOptions, SdpStatus};
use crate::sos::bounds::bd_bound;
use crate::sos::extract::{extract_sos_terms, numerical_rank, reduce_rank, refit_low_rank, RANK_TOL};
use crate::sos::gram::GramSystem;
use crate::sos::mixed_term_components;
use crate::tensor::HomogeneousPolynomial;

/// How to split the variables before building Gram matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Blockwise {
    /// Split along connected components of the mixed-term graph when there
    /// is more than one.
    #[default]
    Auto,
    On,
    /// One Gram matrix over all variables.
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SosOptions {
    pub sdp: SdpOptions,
    pub blockwise: Blockwise,
    pub rank_tol: f64,
    pub reduce_rank: bool,
    /// Coefficient mismatch allowed, relative to `1 + max|f_alpha|`.
    pub soundness_tol: f64,
}

impl Default for SosOptions {
    fn default() -> Self {
        SosOptions {
            sdp: SdpOptions::default(),
            blockwise: Blockwise::Auto,
            rank_tol: RANK_TOL,
            reduce_rank: true,
            soundness_tol: 1e-6,
        }
    }
}

/// Gram matrix over the degree-`m/2` monomials in a subset of variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramBlock {
    /// 0-based global variable indices.
    pub vars: Vec<usize>,
    /// Exponents over `vars`.
    pub basis: Vec<Vec<u32>>,
    pub gram: DMatrix<f64>,
    /// Each entry `c` stands for the square `(sum_j c_j z_j)^2`.
    pub squares: Vec<Vec<f64>>,
}

/// `f = sum over blocks of z^T Q z`, equivalently the block-diagonal Gram
/// matrix over the union of the block bases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SosCertificate {
    pub nvars: usize,
    pub degree: usize,
    pub blocks: Vec<GramBlock>,
    /// Max coefficient mismatch between the squares and `f`.
    pub residual: f64,
    pub min_eigenvalue: f64,
    pub rank_estimate: usize,
}

impl SosCertificate {
    /// Expands the squares back into a polynomial.
    pub fn reconstruct(&self) -> HomogeneousPolynomial<f64> {
        let mut out = HomogeneousPolynomial::zero(self.degree, self.nvars);
        for b in &self.blocks {
            for sq in &b.squares {
                let support: Vec<(usize, f64)> = sq.iter().copied().enumerate().filter(|e| e.1 != 0.0).collect();
                for &(i, ci) in &support {
                    for &(j, cj) in &support {
                        let mut alpha = vec![0u32; self.nvars];
                        for (k, &v) in b.vars.iter().enumerate() {
                            alpha[v] = b.basis[i][k] + b.basis[j][k];
                        }
                        out.add_term(&alpha, ci * cj).expect("degree matches");
                    }
                }
            }
        }
        out
    }
}

/// Linear functional on degree-`m` monomials that is nonnegative on squares
/// yet negative on `f`: the dual witness that no Gram matrix exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotSosEvidence {
    pub vars: Vec<usize>,
    pub alphas: Vec<Vec<u32>>,
    pub moments: Vec<f64>,
    /// `L(f)`, negative.
    pub value: f64,
    pub moment_matrix_min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SosOutcome {
    Certified(SosCertificate),
    NotCertified { evidence: NotSosEvidence },
    Inconclusive { best_residual: f64, reason: String },
}

impl SosOutcome {
    pub fn certificate(&self) -> Option<&SosCertificate> {
        match self {
            SosOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

pub(crate) fn split_vars(f: &HomogeneousPolynomial<f64>, mode: Blockwise) -> Vec<Vec<usize>> {
    match mode {
        Blockwise::Off => vec![(0..f.nvars()).collect()],
        Blockwise::Auto | Blockwise::On => mixed_term_components(f),
    }
}

pub(crate) fn lift(alpha: &[u32], vars: &[usize], n: usize) -> Vec<u32> {
    let mut a = vec![0u32; n];
    for (k, &v) in vars.iter().enumerate() {
        a[v] = alpha[k];
    }
    a
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Number of squares that always suffices for the form behind `sys`: two for
/// binary forms, and the bounded-exponent bound when it applies.
fn guaranteed_rank(sys: &GramSystem) -> Option<usize> {
    let k = sys.nvars;
    let mut support = sys.alphas.iter().zip(&sys.rhs).filter(|(_, &c)| c != 0.0);
    if let (Some((a, &c)), None) = (support.next(), support.next()) {
        // A positive multiple of a squared monomial.
        if c > 0.0 && a.iter().all(|e| e % 2 == 0) {
            return Some(1);
        }
    }
    if k <= 2 {
        return Some(k);
    }
    let raw = sys
        .alphas
        .iter()
        .zip(&sys.rhs)
        .filter(|(_, &c)| c != 0.0)
        .flat_map(|(a, _)| a.iter().copied())
        .max()
        .unwrap_or(0);
    bd_bound(sys.degree, k, raw + raw % 2)
}

/// Builds and checks a block from a (scaled) Gram matrix.
pub(crate) fn finish_block(
    q: DMatrix<f64>,
    sys: &GramSystem,
    vars: Vec<usize>,
    scale: f64,
    opts: &SosOptions,
) -> GramBlock {
    let mut q = if opts.reduce_rank { reduce_rank(&q, sys, opts.rank_tol) } else { q };
    if opts.reduce_rank {
        if let Some(target) = guaranteed_rank(sys) {
            if numerical_rank(&q, opts.rank_tol) > target {
                if let Some(low) = refit_low_rank(&q, sys, target, 1e-9 * (1.0 + max_abs(&sys.rhs))) {
                    q = low;
                }
            }
        }
    }
    let q = q * scale;
    let squares = extract_sos_terms(&q, opts.rank_tol);
    GramBlock {
        vars,
        basis: sys.basis.clone(),
        gram: q,
        squares,
    }
}

pub(crate) fn assemble(
    f: &HomogeneousPolynomial<f64>,
    blocks: Vec<GramBlock>,
    opts: &SosOptions,
) -> SosCertificate {
    let min_eig = blocks
        .iter()
        .map(|b| min_eigenvalue(&b.gram))
        .fold(f64::INFINITY, f64::min);
    let rank = blocks.iter().map(|b| numerical_rank(&b.gram, opts.rank_tol)).sum();
    let mut cert = SosCertificate {
        nvars: f.nvars(),
        degree: f.degree(),
        blocks,
        residual: 0.0,
        min_eigenvalue: if min_eig.is_finite() { min_eig } else { 0.0 },
        rank_estimate: rank,
    };
    let diff = cert.reconstruct().sub(f).expect("same shape");
    cert.residual = diff.max_abs_coeff();
    cert
}

/// Decides whether `f` is a sum of squares of forms of half its degree.
pub fn certify_sos(f: &HomogeneousPolynomial<f64>, opts: &SosOptions) -> Result<SosOutcome> {
    let m = f.degree();
    if !m.is_multiple_of(2) {
        return Err(Error::OddOrder(m));
    }
    let n = f.nvars();
    let scale = f.max_abs_coeff();
    if scale == 0.0 {
        return Ok(SosOutcome::Certified(assemble(f, Vec::new(), opts)));
    }
    let g = f.scale(&(1.0 / scale));
    let mut blocks = Vec::new();
    let mut stalled = None;
    for vars in split_vars(&g, opts.blockwise) {
        let h = g.restrict(&vars);
        if h.is_zero() {
            continue;
        }
        let sys = GramSystem::new(&h)?;
        let sol = solve_sdp(&sys.feasibility_problem(), &opts.sdp)?;
        match sol.status {
            SdpStatus::Solved => blocks.push(finish_block(sol.x, &sys, vars, scale, opts)),
            SdpStatus::Infeasible => {
                let ev = sol.infeasibility.expect("infeasible status carries evidence");
                let value: f64 = ev.y.iter().zip(&sys.rhs).map(|(y, b)| y * b).sum::<f64>() * scale;
                return Ok(SosOutcome::NotCertified {
                    evidence: NotSosEvidence {
                        alphas: sys.alphas.iter().map(|a| lift(a, &vars, n)).collect(),
                        vars,
                        moments: ev.y,
                        value,
                        moment_matrix_min_eigenvalue: ev.min_eigenvalue,
                    },
                });
            }
            SdpStatus::Inconclusive => {
                // the last iterate is PSD; keep it if it passes the final check
                stalled = Some(sol.iterations);
                blocks.push(finish_block(sol.x, &sys, vars, scale, opts));
            }
        }
    }
    let cert = assemble(f, blocks, opts);
    let tol = opts.soundness_tol * (1.0 + scale);
    if cert.residual > tol || cert.min_eigenvalue < -opts.sdp.psd_tol * (1.0 + scale) {
        let reason = match stalled {
            Some(it) => format!("SDP did not converge in {it} iterations (residual {:.3e})", cert.residual),
            None => format!(
                "certificate failed verification (residual {:.3e}, min eigenvalue {:.3e})",
                cert.residual, cert.min_eigenvalue
            ),
        };
        return Ok(SosOutcome::Inconclusive {
            best_residual: cert.residual,
            reason,
        });
    }
    Ok(SosOutcome::Certified(cert))
}
