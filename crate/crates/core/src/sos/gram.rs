//! Monomial bases and the Gram-matrix linear system.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sdp::{LinearConstraint, SdpProblem, Sense, SparseSym};
use crate::tensor::index::binomial;
use crate::tensor::HomogeneousPolynomial;

/// All exponent vectors of degree `d` in `n` variables, graded-lex order
/// (descending lexicographic), e.g. `x1^2, x1 x2, x2^2`.
pub fn monomial_basis(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if n > 0 {
        rec(0, d as u32, &mut cur, &mut out);
    }
    out
}

/// `f = z^T Q z` written as one equality per degree-`m` monomial `alpha`:
/// the sum of `Q_ij` over ordered pairs with `beta_i + beta_j = alpha`
/// equals `f_alpha`.
#[derive(Clone, Debug)]
pub struct GramSystem {
    pub nvars: usize,
    pub degree: usize,
    pub basis: Vec<Vec<u32>>,
    /// Exponent of each constraint, in graded-lex order.
    pub alphas: Vec<Vec<u32>>,
    /// Unordered pairs `(i, j)`, `i <= j`, contributing to each constraint.
    pub pairs: Vec<Vec<(usize, usize)>>,
    pub rhs: Vec<f64>,
}

/// Above this many basis monomials the Gram block is refused.
pub const MAX_BASIS: usize = 2000;

impl GramSystem {
    pub fn new(f: &HomogeneousPolynomial<f64>) -> Result<Self> {
        let m = f.degree();
        let n = f.nvars();
        if !m.is_multiple_of(2) {
            return Err(Error::OddOrder(m));
        }
        let size = binomial((n + m / 2 - 1) as u64, (m / 2) as u64).unwrap_or(u128::MAX);
        if size > MAX_BASIS as u128 {
            return Err(Error::TooLarge(format!("Gram basis of {size} monomials")));
        }
        let basis = monomial_basis(n, m / 2);
        let alphas = monomial_basis(n, m);
        let lookup: HashMap<&[u32], usize> = alphas.iter().enumerate().map(|(k, a)| (a.as_slice(), k)).collect();
        let mut pairs = vec![Vec::new(); alphas.len()];
        let mut sum = vec![0u32; n];
        for i in 0..basis.len() {
            for j in i..basis.len() {
                for (s, (a, b)) in sum.iter_mut().zip(basis[i].iter().zip(&basis[j])) {
                    *s = a + b;
                }
                pairs[lookup[sum.as_slice()]].push((i, j));
            }
        }
        let rhs = alphas.iter().map(|a| f.coeff(a)).collect();
        Ok(GramSystem {
            nvars: n,
            degree: m,
            basis,
            alphas,
            pairs,
            rhs,
        })
    }

    pub fn num_constraints(&self) -> usize {
        self.alphas.len()
    }

    /// Coefficient of `x^alpha_k` in `z^T Q z`, for every `k`.
    pub fn coefficients(&self, q: &nalgebra::DMatrix<f64>) -> Vec<f64> {
        self.pairs
            .iter()
            .map(|ps| ps.iter().map(|&(i, j)| if i == j { q[(i, i)] } else { q[(i, j)] + q[(j, i)] }).sum())
            .collect()
    }

    /// Feasibility SDP for `f = z^T Q z`, `Q` PSD.
    pub fn feasibility_problem(&self) -> SdpProblem {
        let mut pr = SdpProblem::feasibility(self.basis.len(), 0);
        pr.constraints = self.constraints(false);
        pr
    }

    /// `max r` subject to `f - r * sum_i x_i^m = z^T Q z`, `Q` PSD.
    pub fn shifted_problem(&self) -> SdpProblem {
        let mut pr = SdpProblem::feasibility(self.basis.len(), 1);
        pr.constraints = self.constraints(true);
        pr.sense = Sense::Maximize;
        pr.objective_free.push((0, 1.0));
        pr
    }

    fn constraints(&self, with_shift: bool) -> Vec<LinearConstraint> {
        let m = self.degree as u32;
        self.pairs
            .iter()
            .zip(&self.alphas)
            .zip(&self.rhs)
            .map(|((ps, alpha), &rhs)| {
                let mut mat = SparseSym::new();
                for &(i, j) in ps {
                    mat.push(i, j, 1.0);
                }
                let free = if with_shift && alpha.contains(&m) { vec![(0, 1.0)] } else { vec![] };
                LinearConstraint { matrix: mat, free, rhs }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_order_and_size() {
        assert_eq!(monomial_basis(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(monomial_basis(4, 3).len(), 20);
    }

    #[test]
    fn gram_system_of_squared_sum() {
        // (x1^2 + x2^2)^2
        let f = HomogeneousPolynomial::zero(4, 2)
            .with_term(&[4, 0], 1.0)
            .unwrap()
            .with_term(&[2, 2], 2.0)
            .unwrap()
            .with_term(&[0, 4], 1.0)
            .unwrap();
        let g = GramSystem::new(&f).unwrap();
        assert_eq!(g.num_constraints(), 5);
        let find = |a: &[u32]| g.alphas.iter().position(|x| x == a).unwrap();
        assert_eq!(g.pairs[find(&[4, 0])], vec![(0, 0)]);
        assert_eq!(g.pairs[find(&[0, 4])], vec![(2, 2)]);
        assert_eq!(g.pairs[find(&[3, 1])], vec![(0, 1)]);
        assert_eq!(g.pairs[find(&[1, 3])], vec![(1, 2)]);
        assert_eq!(g.pairs[find(&[2, 2])], vec![(0, 2), (1, 1)]);
        assert_eq!(g.rhs[find(&[2, 2])], 2.0);
        // Q = diag-plus-corner reproduces f
        let q = nalgebra::DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(g.coefficients(&q), g.rhs);
    }

    #[test]
    fn constraint_count_is_binomial() {
        let f = HomogeneousPolynomial::<f64>::zero(4, 3);
        assert_eq!(GramSystem::new(&f).unwrap().num_constraints(), 15);
    }
}
