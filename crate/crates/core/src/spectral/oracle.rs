//! Brute-force minimization of `A x^m` on the unit `m`-norm sphere, used as
//! an independent check of the SOS values in small dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{eigen_residual, SymmetricTensor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Random starts; `None` means `50 n`.
    pub restarts: Option<usize>,
    pub seed: u64,
    pub max_dim: usize,
    /// Cap on the number of `{-1, 0, 1}^n` grid points evaluated.
    pub grid_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            restarts: None,
            seed: 0,
            max_dim: 8,
            grid_cap: 6561,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub x: Vec<f64>,
    /// `||A x^{m-1} - value x^{[m-1]}||_inf` at the returned point.
    pub residual: f64,
    pub starts: usize,
}

fn normalize(x: &mut [f64], m: usize) -> bool {
    let s: f64 = x.iter().map(|v| v.abs().powi(m as i32)).sum::<f64>();
    if s <= 0.0 || !s.is_finite() {
        return false;
    }
    let k = s.powf(-1.0 / m as f64);
    x.iter_mut().for_each(|v| *v *= k);
    true
}

struct Descent<'a> {
    a: &'a SymmetricTensor,
    m: usize,
    stat_tol: f64,
}

impl Descent<'_> {
    /// Gradient steps projected back to the sphere, with backtracking.
    /// Returns the final value.
    fn run(&self, x: &mut Vec<f64>, steps: usize) -> f64 {
        let p = (self.m - 1) as i32;
        let mut fx = self.a.evaluate(x).expect("matching length");
        let mut eta = 0.5;
        for _ in 0..steps {
            let g = self.a.apply(x).expect("matching length");
            let d: Vec<f64> = g.iter().zip(x.iter()).map(|(gi, xi)| gi - fx * xi.powi(p)).collect();
            let dn2: f64 = d.iter().map(|v| v * v).sum();
            if dn2.sqrt() <= self.stat_tol {
                break;
            }
            let mut accepted = false;
            while eta > 1e-18 {
                let mut y: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi - eta * di).collect();
                if normalize(&mut y, self.m) {
                    let fy = self.a.evaluate(&y).expect("matching length");
                    if fy <= fx - 1e-4 * eta * dn2 {
                        *x = y;
                        fx = fy;
                        accepted = true;
                        eta *= 1.5;
                        break;
                    }
                }
                eta *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        fx
    }
}

/// Multistart projected gradient on `||x||_m = 1`, seeded by the best points
/// of the `{-1, 0, 1}^n` sign grid plus `restarts` random points.
pub fn brute_force_min(a: &SymmetricTensor, opts: &OracleOptions) -> Result<OracleResult> {
    let (m, n) = (a.order(), a.dim());
    if m % 2 != 0 {
        return Err(Error::OddOrder(m));
    }
    if n > opts.max_dim {
        return Err(Error::TooLarge(format!("oracle dimension {n} exceeds cap {}", opts.max_dim)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let scale = 1.0 + a.max_abs_entry();
    let desc = Descent {
        a,
        m,
        stat_tol: 1e-12 * scale,
    };

    // sign grid
    let grid_total = 3usize.checked_pow(n as u32).unwrap_or(usize::MAX);
    let mut grid: Vec<(f64, Vec<f64>)> = Vec::new();
    let push = |mut x: Vec<f64>, grid: &mut Vec<(f64, Vec<f64>)>| {
        if normalize(&mut x, m) {
            let v = a.evaluate(&x).expect("matching length");
            grid.push((v, x));
        }
    };
    if grid_total <= opts.grid_cap {
        for code in 1..grid_total {
            let mut c = code;
            let x: Vec<f64> = (0..n)
                .map(|_| {
                    let t = (c % 3) as f64 - 1.0;
                    c /= 3;
                    t
                })
                .collect();
            push(x, &mut grid);
        }
    } else {
        for _ in 0..opts.grid_cap {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1i32..=1) as f64).collect();
            push(x, &mut grid);
        }
    }
    grid.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut starts: Vec<Vec<f64>> = grid.into_iter().take(2 * n + 4).map(|(_, x)| x).collect();
    let restarts = opts.restarts.unwrap_or(50 * n);
    for _ in 0..restarts {
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if normalize(&mut x, m) {
            starts.push(x);
        }
    }
    let nstarts = starts.len();
    let mut results: Vec<(f64, Vec<f64>)> = starts
        .into_iter()
        .map(|mut x| {
            let v = desc.run(&mut x, 300);
            (v, x)
        })
        .collect();
    results.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (_, mut x) in results.into_iter().take(4) {
        let v = desc.run(&mut x, 50_000);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, x));
        }
    }
    let (value, x) = best.ok_or_else(|| Error::Numerical("no valid starting point".into()))?;
    let residual = eigen_residual(a, value, &x)?;
    Ok(OracleResult {
        value,
        x,
        residual,
        starts: nstarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::special::identity;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_minimum_is_at_a_corner() {
        // sum x_i^4 on sum |x_i|^4 = 1 is constant 1
        let id: SymmetricTensor = identity(4, 3).unwrap();
        let r = brute_force_min(&id, &OracleOptions::default()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn indefinite_quartic() {
        // x1^4 + x2^4 - 3 x1^2 x2^2, minimum -1/2 at |x1| = |x2|
        let mut a: SymmetricTensor = identity(4, 2).unwrap();
        a.set(&[1, 1, 2, 2], -0.5).unwrap();
        let r = brute_force_min(&a, &OracleOptions::default()).unwrap();
        assert_abs_diff_eq!(r.value, -0.5, epsilon = 1e-10);
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn dimension_cap() {
        let id: SymmetricTensor = identity(4, 9).unwrap();
        assert!(brute_force_min(&id, &OracleOptions::default()).is_err());
    }
}
