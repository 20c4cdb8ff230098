//! Turning a PSD Gram matrix into explicit squares.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sdp::block_eigen;

use crate::sos::gram::GramSystem;

/// Relative eigenvalue threshold for the numerical rank of a Gram matrix.
pub const RANK_TOL: f64 = 1e-7;

/// Columns `sqrt(lambda_k) v_k` for eigenvalues above `tol * lambda_max`,
/// computed per block of the nonzero pattern.
pub fn factor(q: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let p = q.nrows();
    if p == 0 {
        return DMatrix::zeros(0, 0);
    }
    let blocks = block_eigen(q);
    let top = blocks
        .iter()
        .map(|(_, e)| e.eigenvalues.max())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for (g, e) in &blocks {
        for k in 0..g.len() {
            let lam = e.eigenvalues[k];
            if top > 0.0 && lam > tol * top {
                let mut c = DVector::zeros(p);
                for (a, &i) in g.iter().enumerate() {
                    c[i] = e.eigenvectors[(a, k)] * lam.sqrt();
                }
                cols.push(c);
            }
        }
    }
    if cols.is_empty() {
        return DMatrix::zeros(p, 0);
    }
    DMatrix::from_columns(&cols)
}

/// Square coefficient vectors over the basis: `f = sum_k (c_k . z)^2`.
pub fn extract_sos_terms(q: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let v = factor(q, tol);
    (0..v.ncols()).map(|c| v.column(c).iter().copied().collect()).collect()
}

pub fn numerical_rank(q: &DMatrix<f64>, tol: f64) -> usize {
    factor(q, tol).ncols()
}

const REDUCE_MAX_CONSTRAINTS: usize = 1500;
const REDUCE_MAX_DIM: usize = 1200;

/// Lowers the rank of a feasible Gram matrix while keeping `z^T Q z` fixed,
/// until `r (r + 1) / 2` does not exceed the number of constraints. Each step
/// moves along a direction `V D V^T` that is invisible to every constraint
/// and stops at the PSD boundary, so the rank drops by at least one.
pub fn reduce_rank(q: &DMatrix<f64>, sys: &GramSystem, tol: f64) -> DMatrix<f64> {
    let k = sys.num_constraints();
    let mut cur = q.clone();
    if k > REDUCE_MAX_CONSTRAINTS {
        return cur;
    }
    loop {
        let v = factor(&cur, tol);
        let r = v.ncols();
        let d = r * (r + 1) / 2;
        if d <= k || d > REDUCE_MAX_DIM {
            return if r == 0 { cur } else { &v * v.transpose() };
        }
        // rows of L: svec(V^T A_k V)
        let sq2 = std::f64::consts::SQRT_2;
        let mut l = DMatrix::zeros(k, d);
        for (row, ps) in sys.pairs.iter().enumerate() {
            let mut m = DMatrix::<f64>::zeros(r, r);
            for &(i, j) in ps {
                let vi = v.row(i).transpose();
                let vj = v.row(j).transpose();
                if i == j {
                    m += &vi * vi.transpose();
                } else {
                    m += &vi * vj.transpose() + &vj * vi.transpose();
                }
            }
            let mut c = 0;
            for a in 0..r {
                for b in a..r {
                    l[(row, c)] = if a == b { m[(a, a)] } else { sq2 * m[(a, b)] };
                    c += 1;
                }
            }
        }
        let gram = l.transpose() * &l;
        let eig = SymmetricEigen::new(gram);
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &e)| if e < acc.1 { (i, e) } else { acc });
        let dir = eig.eigenvectors.column(imin);
        let mut delta = DMatrix::zeros(r, r);
        let mut c = 0;
        for a in 0..r {
            for b in a..r {
                let val = if a == b { dir[c] } else { dir[c] / sq2 };
                delta[(a, b)] = val;
                delta[(b, a)] = val;
                c += 1;
            }
        }
        let de = SymmetricEigen::new(delta.clone());
        let (lmax, lmin) = (de.eigenvalues.max(), de.eigenvalues.min());
        let (delta, top) = if lmax >= -lmin { (delta, lmax) } else { (-delta, -lmin) };
        if top <= 0.0 {
            return &v * v.transpose();
        }
        let inner = DMatrix::identity(r, r) - delta / top;
        cur = &v * inner * v.transpose();
    }
}

/// Looks for a Gram matrix of rank at most `target` with the same
/// coefficients as `q`, by Levenberg-Marquardt on `V` in `Q = V V^T`,
/// starting from the leading factor of `q` and from seeded perturbations of
/// it. Returns `None` if no start reaches a coefficient mismatch below `tol`.
pub fn refit_low_rank(q: &DMatrix<f64>, sys: &GramSystem, target: usize, tol: f64) -> Option<DMatrix<f64>> {
    let d = q.nrows();
    if target == 0 || d == 0 || target >= d {
        return None;
    }
    let nv = d * target;
    let k = sys.num_constraints();
    let eig = SymmetricEigen::new((q + q.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut v0 = DMatrix::zeros(d, target);
    for (c, &idx) in order.iter().take(target).enumerate() {
        let lam = eig.eigenvalues[idx].max(0.0);
        v0.set_column(c, &(eig.eigenvectors.column(idx) * lam.sqrt()));
    }
    let residual = |v: &DMatrix<f64>| -> DVector<f64> {
        DVector::from_iterator(
            k,
            sys.pairs.iter().zip(&sys.rhs).map(|(ps, &b)| {
                let mut s = 0.0;
                for &(i, j) in ps {
                    let dot = v.row(i).dot(&v.row(j));
                    s += if i == j { dot } else { 2.0 * dot };
                }
                s - b
            }),
        )
    };
    let scale = v0.norm().max(1e-12) / (nv as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..64 {
        let mut v = v0.clone();
        if attempt > 0 {
            let amp = scale * [0.1, 0.3, 1.0, 3.0][attempt % 4];
            v.iter_mut().for_each(|x| *x += amp * rng.gen_range(-1.0..1.0));
        }
        let mut res = residual(&v);
        let mut cost = res.norm_squared();
        let mut lambda = 1e-3;
        for _ in 0..1000 {
            if res.amax() <= tol {
                return Some(&v * v.transpose());
            }
            let mut jac = DMatrix::zeros(k, nv);
            for (row, ps) in sys.pairs.iter().enumerate() {
                for &(i, j) in ps {
                    for c in 0..target {
                        jac[(row, i * target + c)] += 2.0 * v[(j, c)];
                        if i != j {
                            jac[(row, j * target + c)] += 2.0 * v[(i, c)];
                        }
                    }
                }
            }
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &res;
            let mut improved = false;
            while lambda < 1e12 {
                let mut h = jtj.clone();
                for t in 0..nv {
                    h[(t, t)] += lambda * (1.0 + jtj[(t, t)]);
                }
                let Some(ch) = h.cholesky() else {
                    lambda *= 4.0;
                    continue;
                };
                let step = ch.solve(&(-&g));
                let mut trial = v.clone();
                for i in 0..d {
                    for c in 0..target {
                        trial[(i, c)] += step[i * target + c];
                    }
                }
                let tres = residual(&trial);
                let tcost = tres.norm_squared();
                if tcost < cost {
                    v = trial;
                    res = tres;
                    cost = tcost;
                    lambda = (lambda / 3.0).max(1e-15);
                    improved = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        if res.amax() <= tol {
            return Some(&v * v.transpose());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::HomogeneousPolynomial;

    #[test]
    fn reduction_preserves_the_form_and_meets_the_bound() {
        // (x1^2 + x2^2)^2 with a full-rank Gram matrix
        let f = HomogeneousPolynomial::zero(4, 2)
            .with_term(&[4, 0], 1.0)
            .unwrap()
            .with_term(&[2, 2], 2.0)
            .unwrap()
            .with_term(&[0, 4], 1.0)
            .unwrap();
        let sys = GramSystem::new(&f).unwrap();
        let q = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0]);
        assert_eq!(numerical_rank(&q, RANK_TOL), 3);
        let red = reduce_rank(&q, &sys, RANK_TOL);
        let r = numerical_rank(&red, RANK_TOL);
        assert!(r * (r + 1) / 2 <= sys.num_constraints());
        for (a, b) in sys.coefficients(&red).iter().zip(&sys.rhs) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(crate::sdp::min_eigenvalue(&red) > -1e-10);
    }

    #[test]
    fn ternary_quartic_refits_to_three_squares() {
        // x1^4 + x2^4 + x3^4 has the identity as a rank-3 Gram matrix, but the
        // full-rank matrix below represents it too
        let f = HomogeneousPolynomial::power_sum(4, 3, 1.0);
        let sys = GramSystem::new(&f).unwrap();
        let mut q = DMatrix::<f64>::zeros(6, 6);
        for (k, b) in sys.basis.iter().enumerate() {
            q[(k, k)] = if b.contains(&2) { 1.0 } else { 0.5 };
        }
        for (ps, &rhs) in sys.pairs.iter().zip(&sys.rhs) {
            if rhs == 0.0 && ps.len() == 2 && ps.iter().any(|&(i, j)| i == j) {
                // x_i^2 x_j^2 = (x_i^2)(x_j^2) + (x_i x_j)^2: cancel the square
                let (i, j) = ps.iter().copied().find(|&(i, j)| i != j).unwrap();
                q[(i, j)] = -0.25;
                q[(j, i)] = -0.25;
            }
        }
        for (a, b) in sys.coefficients(&q).iter().zip(&sys.rhs) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!(numerical_rank(&q, RANK_TOL) > 3);
        let low = refit_low_rank(&q, &sys, 3, 1e-11).unwrap();
        assert!(numerical_rank(&low, RANK_TOL) <= 3);
        for (a, b) in sys.coefficients(&low).iter().zip(&sys.rhs) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
