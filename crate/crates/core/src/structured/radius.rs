//! Spectral radius of nonnegative tensors by shifted power iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sos::mixed_term_components;
use crate::tensor::{MultiIndex, SymmetricTensor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadius {
    pub rho: f64,
    /// Collatz–Wielandt bracket `min_i r_i <= rho <= max_i r_i` from the
    /// final iterate.
    pub lower: f64,
    pub upper: f64,
    /// Positive Perron-type vector, normalized to unit sum per component.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct PowerOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-12,
            max_iter: 20_000,
        }
    }
}

/// Power iteration `y <- ((Z + I) y^{m-1})^{[1/(m-1)]}` for any nonnegative
/// homogeneous map `z(y) = Z y^{m-1}`. The unit shift keeps iterates
/// positive and makes weakly irreducible cases converge.
pub fn power_iteration(
    n: usize,
    m: usize,
    z: impl Fn(&[f64]) -> Vec<f64>,
    opts: &PowerOptions,
) -> SpectralRadius {
    let p = (m - 1) as i32;
    let inv = 1.0 / (m - 1) as f64;
    let mut y = vec![1.0 / n as f64; n];
    let (mut lower, mut upper) = (0.0, f64::INFINITY);
    let mut it = 0;
    let mut converged = false;
    while it < opts.max_iter {
        it += 1;
        let zy = z(&y);
        let w: Vec<f64> = zy.iter().zip(&y).map(|(a, yi)| a + yi.powi(p)).collect();
        let ratios: Vec<f64> = w.iter().zip(&y).map(|(wi, yi)| wi / yi.powi(p)).collect();
        lower = ratios.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
        upper = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max) - 1.0;
        let mut next: Vec<f64> = w.iter().map(|wi| wi.powf(inv)).collect();
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= s);
        y = next;
        if upper - lower <= opts.tol * upper.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    SpectralRadius {
        rho: 0.5 * (lower + upper),
        lower,
        upper,
        vector: y,
        iterations: it,
        converged,
    }
}

/// Spectral radius of a nonnegative symmetric tensor. The tensor is split
/// into the blocks of its index graph (a symmetric tensor is block-diagonal
/// along them) and the largest block radius is returned.
pub fn spectral_radius_nonnegative(z: &SymmetricTensor) -> Result<SpectralRadius> {
    spectral_radius_with(z, &PowerOptions::default())
}

pub fn spectral_radius_with(z: &SymmetricTensor, opts: &PowerOptions) -> Result<SpectralRadius> {
    if let Some((idx, v)) = z.iter().find(|(_, v)| **v < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "negative entry {v} at {:?}",
            idx.one_based()
        )));
    }
    let (m, n) = (z.order(), z.dim());
    let comps = mixed_term_components(&z.to_polynomial()?);
    let mut out = SpectralRadius {
        rho: f64::NEG_INFINITY,
        lower: f64::NEG_INFINITY,
        upper: f64::NEG_INFINITY,
        vector: vec![0.0; n],
        iterations: 0,
        converged: true,
    };
    for comp in comps {
        let sub = restrict(z, &comp)?;
        let r = power_iteration(comp.len(), m, |y| sub.apply(y).expect("matching length"), opts);
        for (k, &i) in comp.iter().enumerate() {
            out.vector[i] = r.vector[k];
        }
        out.rho = out.rho.max(r.rho);
        out.lower = out.lower.max(r.lower);
        out.upper = out.upper.max(r.upper);
        out.iterations = out.iterations.max(r.iterations);
        out.converged &= r.converged;
    }
    Ok(out)
}

/// Principal sub-tensor on the 0-based variables `vars`.
pub(crate) fn restrict(a: &SymmetricTensor, vars: &[usize]) -> Result<SymmetricTensor> {
    let mut pos = vec![usize::MAX; a.dim()];
    for (k, &v) in vars.iter().enumerate() {
        pos[v] = k;
    }
    let mut sub = SymmetricTensor::zeros(a.order(), vars.len())?;
    for (idx, &v) in a.iter() {
        if idx.as_slice().iter().all(|&i| pos[i as usize] != usize::MAX) {
            let mapped = idx.as_slice().iter().map(|&i| pos[i as usize] as u32).collect();
            sub.set_canonical(MultiIndex::from_unsorted(mapped), v);
        }
    }
    Ok(sub)
}
