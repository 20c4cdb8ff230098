//! Projection onto the PSD cone.

use nalgebra::{DMatrix, SymmetricEigen};

/// Connected components of the graph on `0..p` with an edge wherever
/// `nonzero(i, j)` holds for `i < j`.
pub(crate) fn pattern_components(p: usize, nonzero: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..p).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for i in 0..p {
        for j in i + 1..p {
            if nonzero(i, j) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); p];
    for i in 0..p {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

fn sub_matrix(m: &DMatrix<f64>, g: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(g.len(), g.len(), |a, b| 0.5 * (m[(g[a], g[b])] + m[(g[b], g[a])]))
}

/// Blocks of a symmetric matrix along its nonzero pattern, each with its
/// eigendecomposition.
pub(crate) fn block_eigen(m: &DMatrix<f64>) -> Vec<(Vec<usize>, SymmetricEigen<f64, nalgebra::Dyn>)> {
    let p = m.nrows();
    pattern_components(p, |i, j| m[(i, j)] != 0.0 || m[(j, i)] != 0.0)
        .into_iter()
        .map(|g| {
            let e = SymmetricEigen::new(sub_matrix(m, &g));
            (g, e)
        })
        .collect()
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to zero.
pub fn psd_project(m: &DMatrix<f64>) -> DMatrix<f64> {
    let p = m.nrows();
    let mut out = DMatrix::zeros(p, p);
    for (g, eig) in block_eigen(m) {
        let proj = reconstruct_positive(&eig);
        for (a, &i) in g.iter().enumerate() {
            for (b, &j) in g.iter().enumerate() {
                out[(i, j)] = proj[(a, b)];
            }
        }
    }
    out
}

fn reconstruct_positive(eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> DMatrix<f64> {
    let p = eig.eigenvalues.len();
    let pos: Vec<usize> = (0..p).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    let mut v = DMatrix::zeros(p, pos.len());
    let mut vs = DMatrix::zeros(p, pos.len());
    for (c, &k) in pos.iter().enumerate() {
        let col = eig.eigenvectors.column(k);
        v.set_column(c, &col);
        vs.set_column(c, &(col * eig.eigenvalues[k]));
    }
    vs * v.transpose()
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    block_eigen(m)
        .iter()
        .map(|(_, e)| e.eigenvalues.min())
        .fold(f64::INFINITY, f64::min)
}

/// Scaled half-vectorization of a `p x p` symmetric matrix: upper triangle,
/// row by row, off-diagonal entries times `sqrt(2)` so that Euclidean dot
/// products equal trace inner products.
#[derive(Clone, Debug)]
pub(crate) struct Svec {
    pub p: usize,
    offsets: Vec<usize>,
}

impl Svec {
    pub fn new(p: usize) -> Self {
        // offset(i) = sum_{r<i} (p - r)
        let mut offs = Vec::with_capacity(p);
        let mut acc = 0;
        for r in 0..p {
            offs.push(acc);
            acc += p - r;
        }
        Svec { p, offsets: offs }
    }

    pub fn len(&self) -> usize {
        self.p * (self.p + 1) / 2
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.offsets[i] + (j - i)
    }

    pub fn to_matrix(&self, u: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.p, self.p);
        for i in 0..self.p {
            m[(i, i)] = u[self.index(i, i)];
            for j in i + 1..self.p {
                let v = u[self.index(i, j)] / std::f64::consts::SQRT_2;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[cfg(test)]
    pub fn store(&self, m: &DMatrix<f64>, u: &mut [f64]) {
        for i in 0..self.p {
            u[self.index(i, i)] = m[(i, i)];
            for j in i + 1..self.p {
                u[self.index(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]) * std::f64::consts::SQRT_2;
            }
        }
    }

    /// PSD projection of `u` into `out`. The matrix is split into the
    /// connected components of its nonzero pattern first; the projection of a
    /// block-diagonal matrix is the block-diagonal of the projections, so this
    /// is exact and much cheaper on sparse iterates.
    pub fn project_psd(&self, u: &[f64], out: &mut [f64]) {
        let groups = pattern_components(self.p, |i, j| u[self.index(i, j)] != 0.0);
        out.iter_mut().for_each(|v| *v = 0.0);
        for g in &groups {
            if g.len() == 1 {
                let k = self.index(g[0], g[0]);
                out[k] = u[k].max(0.0);
                continue;
            }
            let s = g.len();
            let mut m = DMatrix::zeros(s, s);
            for a in 0..s {
                m[(a, a)] = u[self.index(g[a], g[a])];
                for b in a + 1..s {
                    let v = u[self.index(g[a], g[b])] / std::f64::consts::SQRT_2;
                    m[(a, b)] = v;
                    m[(b, a)] = v;
                }
            }
            let proj = reconstruct_positive(&SymmetricEigen::new(m));
            for a in 0..s {
                out[self.index(g[a], g[a])] = proj[(a, a)];
                for b in a + 1..s {
                    out[self.index(g[a], g[b])] = 0.5 * (proj[(a, b)] + proj[(b, a)]) * std::f64::consts::SQRT_2;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn projection_of_swap_matrix_is_half_ones() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let p = psd_project(&m);
        for v in p.iter() {
            assert_relative_eq!(*v, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent_and_psd() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, -1.0, 2.0, -3.0, 0.5, -1.0, 0.5, 0.2]);
        let p = psd_project(&m);
        assert!(min_eigenvalue(&p) > -1e-12);
        let pp = psd_project(&p);
        assert_relative_eq!((p - pp).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn split_projection_matches_dense() {
        let sv = Svec::new(4);
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[1.0, 0.0, 2.0, 0.0, 0.0, -1.0, 0.0, 0.0, 2.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 3.0],
        );
        let mut u = vec![0.0; sv.len()];
        sv.store(&m, &mut u);
        let mut out = vec![0.0; sv.len()];
        sv.project_psd(&u, &mut out);
        let dense = psd_project(&m);
        assert_relative_eq!((sv.to_matrix(&out) - dense).norm(), 0.0, epsilon = 1e-12);
    }
}
