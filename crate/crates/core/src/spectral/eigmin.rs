//! Smallest H-eigenvalue of an even-order symmetric tensor via the largest
//! `r` for which `f_A - r sum_i x_i^m` is a sum of squares.

use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sdp::{psd_project, solve_sdp, SdpStatus};
use crate::sos::{
    assemble, extract_sos_terms, finish_block, gershgorin_lower_bound, is_diagonal_exponent, mu0, split_vars,
    GramBlock, GramSystem, SosCertificate, SosOptions,
};
use crate::spectral::oracle::{brute_force_min, OracleOptions};
use crate::structured::detect_extended_z_poly;
use crate::tensor::{HomogeneousPolynomial, SymmetricTensor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigMinOptions {
    pub sos: SosOptions,
    /// Resolve blocks with one mixed term by bisection on the closed-form
    /// threshold instead of an SDP.
    pub closed_form_single_term: bool,
    /// Build the Gram certificate of `f - r sum_i x_i^m`.
    pub certificate: bool,
    /// Also run the brute-force minimizer (small `n` only).
    pub oracle: Option<OracleOptions>,
}

impl Default for EigMinOptions {
    fn default() -> Self {
        EigMinOptions {
            sos: SosOptions::default(),
            closed_form_single_term: false,
            certificate: true,
            oracle: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockMethod {
    /// One variable; the value is its diagonal entry.
    Diagonal,
    SingleTerm,
    Sdp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockValue {
    /// 0-based variables.
    pub vars: Vec<usize>,
    pub method: BlockMethod,
    /// Largest feasible shift found.
    pub r: f64,
    /// `r` minus the coefficient mismatch of the Gram matrix.
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigMinResult {
    /// Guaranteed lower bound on the smallest H-eigenvalue.
    pub lambda_min: f64,
    /// SOS value `max { r : f - r sum x_i^m is SOS }` as computed.
    pub r: f64,
    /// Equals the smallest H-eigenvalue when `exact` holds, a lower bound
    /// otherwise.
    pub mu: f64,
    /// The form is extended-Z, where SOS and nonnegativity agree.
    pub exact: bool,
    /// More than one block was solved.
    pub blockwise: bool,
    /// Every block solved to tolerance.
    pub converged: bool,
    /// Diagonal-dominance bound, valid whatever the solver did.
    pub gershgorin_bound: f64,
    pub blocks: Vec<BlockValue>,
    pub oracle_value: Option<f64>,
    pub minimizer: Option<Vec<f64>>,
    pub certificate: Option<SosCertificate>,
    pub seconds: f64,
}

struct Solved {
    value: BlockValue,
    gram: Option<(GramBlock, Vec<usize>)>,
}

fn diag_position(basis: &[Vec<u32>], k: usize, half: u32) -> Option<usize> {
    basis.iter().position(|b| b[k] == half)
}

/// Largest `r <= min f_i` with `sum (f_i - r) x_i^m + c x^a` SOS.
fn single_term_shift(diag: &[f64], a: &[u32], c: f64) -> f64 {
    let top = diag
        .iter()
        .zip(a)
        .map(|(&d, _)| d)
        .fold(f64::INFINITY, f64::min);
    let all_even = a.iter().all(|e| e % 2 == 0);
    if c == 0.0 || (all_even && c > 0.0) {
        return top;
    }
    let ok = |r: f64| {
        let b: Vec<f64> = diag.iter().map(|d| d - r).collect();
        mu0(&b, a) >= c.abs()
    };
    let mut step = c.abs().max(1e-12);
    let mut lo = top - step;
    while !ok(lo) {
        step *= 2.0;
        lo = top - step;
    }
    let mut hi = top;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn solve_block(h: &HomogeneousPolynomial<f64>, vars: Vec<usize>, opts: &EigMinOptions) -> Result<Solved> {
    let m = h.degree();
    let k = vars.len();
    if k == 1 {
        let v = h.diagonal_coeff(0);
        return Ok(Solved {
            value: BlockValue {
                vars,
                method: BlockMethod::Diagonal,
                r: v,
                lower_bound: v,
                iterations: 0,
                converged: true,
            },
            gram: None,
        });
    }
    let mixed: Vec<(&Vec<u32>, f64)> = h
        .terms()
        .filter(|(a, _)| !is_diagonal_exponent(a))
        .map(|(a, &c)| (a, c))
        .collect();
    if opts.closed_form_single_term && mixed.len() <= 1 {
        let diag: Vec<f64> = (0..k).map(|i| h.diagonal_coeff(i)).collect();
        let r = match mixed.first() {
            Some((a, c)) => single_term_shift(&diag, a, *c),
            None => diag.iter().cloned().fold(f64::INFINITY, f64::min),
        };
        return Ok(Solved {
            value: BlockValue {
                vars,
                method: BlockMethod::SingleTerm,
                r,
                lower_bound: r,
                iterations: 0,
                converged: true,
            },
            gram: None,
        });
    }
    let sys = GramSystem::new(h)?;
    let sol = solve_sdp(&sys.shifted_problem(), &opts.sos.sdp)?;
    let r = *sol.free.first().ok_or_else(|| Error::Numerical("shift variable missing".into()))?;
    // any PSD Q gives f - r sum x^m - z^T Q z = sum e_a x^a, and |x^a| <= 1
    // on the unit m-sphere
    let q = psd_project(&sol.x);
    let coeffs = sys.coefficients(&q);
    let mismatch: f64 = sys
        .alphas
        .iter()
        .zip(&sys.rhs)
        .zip(&coeffs)
        .map(|((alpha, &b), &c)| {
            let shift = if alpha.contains(&(m as u32)) { r } else { 0.0 };
            (b - shift - c).abs()
        })
        .sum();
    let converged = sol.status == SdpStatus::Solved;
    let gram = if opts.certificate {
        let mut target = sys.clone();
        for (alpha, b) in target.alphas.iter().zip(target.rhs.iter_mut()) {
            if alpha.contains(&(m as u32)) {
                *b -= r;
            }
        }
        let block = finish_block(q, &target, vars.clone(), 1.0, &opts.sos);
        Some((block, vars.clone()))
    } else {
        None
    };
    Ok(Solved {
        value: BlockValue {
            vars,
            method: BlockMethod::Sdp,
            r,
            lower_bound: r - mismatch,
            iterations: sol.iterations,
            converged,
        },
        gram,
    })
}

/// Smallest H-eigenvalue of `a` by sum-of-squares relaxation, solved per
/// block of the mixed-term graph as configured.
pub fn min_h_eigenvalue(a: &SymmetricTensor, opts: &EigMinOptions) -> Result<EigMinResult> {
    let start = Instant::now();
    let m = a.order();
    if m % 2 != 0 {
        return Err(Error::OddOrder(m));
    }
    let n = a.dim();
    let f = a.to_polynomial()?;
    let scale = f.max_abs_coeff();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let g = f.scale(&(1.0 / scale));
    let exact = detect_extended_z_poly(&g).holds;

    let mut solved = Vec::new();
    for vars in split_vars(&g, opts.sos.blockwise) {
        let h = g.restrict(&vars);
        solved.push(solve_block(&h, vars, opts)?);
    }
    let r = solved.iter().map(|s| s.value.r).fold(f64::INFINITY, f64::min);
    let lower = solved.iter().map(|s| s.value.lower_bound).fold(f64::INFINITY, f64::min);
    let converged = solved.iter().all(|s| s.value.converged);

    let certificate = if opts.certificate && solved.iter().all(|s| s.value.method != BlockMethod::SingleTerm) {
        let half = (m / 2) as u32;
        let mut blocks = Vec::new();
        for s in &solved {
            match &s.gram {
                Some((block, _)) => {
                    // lower this block's shift to the common r
                    let mut q = block.gram.clone();
                    for k in 0..s.value.vars.len() {
                        if let Some(p) = diag_position(&block.basis, k, half) {
                            q[(p, p)] += s.value.r - r;
                        }
                    }
                    let q = q * scale;
                    blocks.push(GramBlock {
                        vars: block.vars.clone(),
                        basis: block.basis.clone(),
                        squares: extract_sos_terms(&q, opts.sos.rank_tol),
                        gram: q,
                    });
                }
                None => {
                    let v = (s.value.r - r) * scale;
                    let q = DMatrix::from_element(1, 1, v);
                    blocks.push(GramBlock {
                        vars: s.value.vars.clone(),
                        basis: vec![vec![half]],
                        squares: extract_sos_terms(&q, opts.sos.rank_tol),
                        gram: q,
                    });
                }
            }
        }
        let target = f.sub(&HomogeneousPolynomial::power_sum(m, n, r * scale))?;
        Some(assemble(&target, blocks, &opts.sos))
    } else {
        None
    };

    let blockwise = solved.len() > 1;
    let gershgorin_bound = gershgorin_lower_bound(a)?;
    let (oracle_value, minimizer) = match &opts.oracle {
        Some(o) if n <= o.max_dim => {
            let res = brute_force_min(a, o)?;
            (Some(res.value), Some(res.x))
        }
        _ => (None, None),
    };
    let mut blocks: Vec<BlockValue> = solved.into_iter().map(|s| s.value).collect();
    for b in &mut blocks {
        b.r *= scale;
        b.lower_bound *= scale;
    }
    Ok(EigMinResult {
        lambda_min: (lower * scale).max(gershgorin_bound),
        r: r * scale,
        mu: r * scale,
        exact,
        blockwise,
        converged,
        gershgorin_bound,
        blocks,
        oracle_value,
        minimizer,
        certificate,
        seconds: start.elapsed().as_secs_f64(),
    })
}
