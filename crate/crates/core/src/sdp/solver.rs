//! Operator-splitting (ADMM) solver.
//!
//! With `u` in the affine set and `v` in `S_+ x R^free`, iterate
//!
//! ```text
//! u = P_aff(v - y - c / rho)
//! v = P_K(alpha u + (1 - alpha) v + y)
//! y = y + alpha u + (1 - alpha) v_old - v
//! ```
//!
//! The returned matrix is always the cone iterate, so it is PSD by
//! construction and only the equality residual needs checking.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sdp::affine::{Affine, AffineProjector};
use crate::sdp::problem::{SdpProblem, Sense};
use crate::sdp::psd::{min_eigenvalue, Svec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpOptions {
    /// Maximum equality violation (relative to `1 + max|b|`) at termination.
    pub feas_tol: f64,
    /// Tolerated negative eigenvalue of the returned block.
    pub psd_tol: f64,
    /// Objective change over `stall_window` iterations below which the
    /// optimization is considered converged.
    pub stall_tol: f64,
    pub stall_window: usize,
    /// Dual residual tolerance (relative to `1 + |c|`).
    pub dual_tol: f64,
    pub max_iter: usize,
    pub rho: f64,
    pub relaxation: f64,
    /// Iterations before infeasibility certificates are attempted.
    pub infeas_warmup: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            feas_tol: 1e-8,
            psd_tol: 1e-8,
            stall_tol: 1e-9,
            stall_window: 100,
            dual_tol: 1e-7,
            max_iter: 200_000,
            rho: 1.0,
            relaxation: 1.6,
            infeas_warmup: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SdpStatus {
    /// Feasible point found within tolerance (and, with an objective, the
    /// objective has settled).
    Solved,
    /// A Farkas-type certificate of infeasibility was found.
    Infeasible,
    /// Neither within the iteration budget.
    Inconclusive,
}

/// `y` with `sum_k y_k A_k` PSD (up to `min_eigenvalue`), `sum_k y_k c_k = 0`
/// on free columns, and `b^T y < 0`; normalized so that `b^T y = -1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfeasibilityEvidence {
    pub y: Vec<f64>,
    pub b_dot_y: f64,
    pub min_eigenvalue: f64,
    pub free_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: DMatrix<f64>,
    pub free: Vec<f64>,
    /// In the problem's own sense (not negated for maximization).
    pub objective: f64,
    pub primal_residual: f64,
    pub psd_violation: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub infeasibility: Option<InfeasibilityEvidence>,
    /// Best equality residual seen so far, sampled at each check.
    pub residual_trace: Vec<f64>,
}

const CHECK_EVERY: usize = 10;
const ADAPT_EVERY: usize = 50;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn solve_sdp(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let p = problem.block_size;
    let sv = Svec::new(p);
    let nm = sv.len();
    let nf = problem.num_free;
    let nt = nm + nf;
    let sqrt2 = std::f64::consts::SQRT_2;

    let mut rows = Vec::with_capacity(problem.constraints.len());
    let mut b = Vec::with_capacity(problem.constraints.len());
    for c in &problem.constraints {
        let mut row: std::collections::BTreeMap<usize, f64> = Default::default();
        for &(i, j, v) in &c.matrix.entries {
            let w = if i == j { v } else { v * sqrt2 };
            *row.entry(sv.index(i, j)).or_insert(0.0) += w;
        }
        for &(l, v) in &c.free {
            *row.entry(nm + l).or_insert(0.0) += v;
        }
        rows.push(row.into_iter().filter(|e| e.1 != 0.0).collect::<Vec<_>>());
        b.push(c.rhs);
    }
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cvec = vec![0.0; nt];
    for &(i, j, v) in &problem.objective.entries {
        cvec[sv.index(i, j)] += sign * if i == j { v } else { v * sqrt2 };
    }
    for &(l, v) in &problem.objective_free {
        cvec[nm + l] += sign * v;
    }
    let has_obj = cvec.iter().any(|&v| v != 0.0);
    let bscale = 1.0 + b.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let cscale = 1.0 + norm(&cvec);

    let zero_solution = |status, iterations, evidence| SdpSolution {
        status,
        x: DMatrix::zeros(p, p),
        free: vec![0.0; nf],
        objective: 0.0,
        primal_residual: f64::INFINITY,
        psd_violation: 0.0,
        dual_residual: f64::INFINITY,
        iterations,
        infeasibility: evidence,
        residual_trace: Vec::new(),
    };

    let proj = match AffineProjector::build(rows, b, nm, nf)? {
        Affine::Ready(pj) => pj,
        Affine::Inconsistent { y } => {
            let bty: f64 = y.iter().zip(&problem.constraints).map(|(a, c)| a * c.rhs).sum();
            let y: Vec<f64> = y.iter().map(|v| v / bty.abs()).collect();
            let ev = InfeasibilityEvidence {
                y,
                b_dot_y: -1.0,
                min_eigenvalue: 0.0,
                free_violation: 0.0,
            };
            return Ok(zero_solution(SdpStatus::Infeasible, 0, Some(ev)));
        }
    };

    let mut v = vec![0.0; nt];
    let mut y = vec![0.0; nt];
    let mut u = vec![0.0; nt];
    let mut w = vec![0.0; nt];
    let mut vnew = vec![0.0; nt];
    let mut rho = opts.rho;
    let alpha = opts.relaxation;

    let mut trace = Vec::new();
    let mut best_res = f64::INFINITY;
    let mut obj_hist: Vec<f64> = Vec::new();
    let mut last_dy: Vec<f64> = vec![0.0; nt];
    let mut prev_dy_norm = f64::NAN;
    let mut dual_res = f64::INFINITY;
    let mut status = SdpStatus::Inconclusive;
    let mut evidence = None;
    let mut iters = 0;

    for it in 1..=opts.max_iter {
        iters = it;
        for k in 0..nt {
            w[k] = v[k] - y[k] - cvec[k] / rho;
        }
        u.copy_from_slice(&w);
        proj.project(&mut u);
        for k in 0..nt {
            w[k] = alpha * u[k] + (1.0 - alpha) * v[k];
        }
        let mut shifted = vec![0.0; nm];
        for k in 0..nm {
            shifted[k] = w[k] + y[k];
        }
        sv.project_psd(&shifted, &mut vnew[..nm]);
        for k in nm..nt {
            vnew[k] = w[k] + y[k];
        }
        let mut rp2 = 0.0;
        let mut dv2 = 0.0;
        for k in 0..nt {
            let dy = w[k] - vnew[k];
            y[k] += dy;
            last_dy[k] = dy;
            let r = u[k] - vnew[k];
            rp2 += r * r;
            let d = vnew[k] - v[k];
            dv2 += d * d;
        }
        std::mem::swap(&mut v, &mut vnew);
        dual_res = rho * dv2.sqrt() / cscale;

        if it % ADAPT_EVERY == 0 {
            let rp = rp2.sqrt() / (1.0 + norm(&u).max(norm(&v)));
            let rd = dv2.sqrt() * rho / (1.0 + rho * norm(&y));
            if rp > 0.0 && rd > 0.0 {
                let ratio = (rp / rd).sqrt().clamp(0.2, 5.0);
                if !(0.5..=2.0).contains(&ratio) {
                    let new_rho = (rho * ratio).clamp(1e-6, 1e6);
                    let s = rho / new_rho;
                    y.iter_mut().for_each(|t| *t *= s);
                    rho = new_rho;
                }
            }
        }

        if it % CHECK_EVERY != 0 {
            continue;
        }
        let res = proj.residual(&v) / bscale;
        best_res = best_res.min(res);
        trace.push(best_res);
        let obj: f64 = cvec.iter().zip(&v).map(|(c, x)| c * x).sum();
        obj_hist.push(obj);

        if res <= opts.feas_tol {
            if !has_obj {
                status = SdpStatus::Solved;
                break;
            }
            let win = opts.stall_window / CHECK_EVERY;
            if obj_hist.len() > win {
                let old = obj_hist[obj_hist.len() - 1 - win];
                if (obj - old).abs() <= opts.stall_tol * (1.0 + obj.abs()) && dual_res <= opts.dual_tol {
                    status = SdpStatus::Solved;
                    break;
                }
            }
        }

        if it >= opts.infeas_warmup && it % 100 == 0 {
            let dy_norm = norm(&last_dy);
            let stable = prev_dy_norm.is_finite() && (dy_norm - prev_dy_norm).abs() <= 1e-3 * dy_norm;
            prev_dy_norm = dy_norm;
            if stable && dy_norm > 1e-7 * bscale && res > 10.0 * opts.feas_tol {
                if let Some(ev) = farkas_certificate(&proj, &sv, &last_dy, nm, nf) {
                    evidence = Some(ev);
                    status = SdpStatus::Infeasible;
                    break;
                }
            }
        }
    }

    let x = sv.to_matrix(&v[..nm]);
    let free = v[nm..].to_vec();
    let primal_residual = problem.residual(&x, &free);
    let psd_violation = (-min_eigenvalue(&x)).max(0.0);
    let objective = problem.objective_value(&x, &free);
    Ok(SdpSolution {
        status,
        x,
        free,
        objective,
        primal_residual,
        psd_violation,
        dual_residual: dual_res,
        iterations: iters,
        infeasibility: evidence,
        residual_trace: trace,
    })
}

/// From the limiting dual increment `d = u - v`, which lies in the row space
/// of `A` and in the negative polar of the cone when the problem is
/// infeasible, recover `y` with `A^T y = -d`.
fn farkas_certificate(
    proj: &AffineProjector,
    sv: &Svec,
    d: &[f64],
    nm: usize,
    nf: usize,
) -> Option<InfeasibilityEvidence> {
    let ad = proj.apply(d);
    let yprime = proj.solve(&ad);
    let mut y: Vec<f64> = yprime.iter().map(|v| -v).collect();
    let bty: f64 = y.iter().zip(proj.rhs()).map(|(a, b)| a * b).sum();
    if bty >= 0.0 {
        return None;
    }
    y.iter_mut().for_each(|v| *v /= -bty);
    let mut aty = vec![0.0; nm + nf];
    proj.apply_t_add(&y, 1.0, &mut aty);
    let s = sv.to_matrix(&aty[..nm]);
    let min_eig = min_eigenvalue(&s);
    let free_violation = aty[nm..].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let snorm = s.norm().max(1.0);
    if min_eig >= -1e-6 * snorm && free_violation <= 1e-6 * snorm {
        Some(InfeasibilityEvidence {
            y,
            b_dot_y: -1.0,
            min_eigenvalue: min_eig,
            free_violation,
        })
    } else {
        None
    }
}
