//! Exact Euclidean projection onto `{u : A u = b}`.
//!
//! `A A^T` is factored once. Rows that share no matrix coordinate decouple,
//! so the matrix part is factored per connected component; the free-scalar
//! columns are added back with the Woodbury identity. Gram systems have a
//! diagonal matrix part, which makes the projection linear-time.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

const DENSE_FALLBACK_LIMIT: usize = 3000;

pub(crate) struct AffineProjector {
    rows: Vec<Vec<(usize, f64)>>,
    b: Vec<f64>,
    kkt: Kkt,
}

enum Kkt {
    Split(SplitKkt),
    Dense { pinv: DMatrix<f64> },
}

struct SplitKkt {
    comps: Vec<Comp>,
    /// G^{-1} F, one column per free scalar.
    ginv_f: DMatrix<f64>,
    /// Cholesky factor of I + F^T G^{-1} F.
    cap: Option<Cholesky<f64, Dyn>>,
    f: DMatrix<f64>,
}

enum Comp {
    Single { row: usize, inv: f64 },
    Block { rows: Vec<usize>, chol: Cholesky<f64, Dyn> },
}

/// Outcome of building the projector.
pub(crate) enum Affine {
    Ready(AffineProjector),
    /// The equalities are inconsistent; `y` satisfies `A^T y = 0`, `b^T y < 0`.
    Inconsistent { y: Vec<f64> },
}

impl AffineProjector {
    /// `rows[k]` holds `(column, value)`; columns `>= n_mat` are free scalars.
    pub fn build(rows: Vec<Vec<(usize, f64)>>, b: Vec<f64>, n_mat: usize, n_free: usize) -> Result<Affine> {
        let k = rows.len();
        // component structure of the matrix part
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let mut owner: Vec<Option<usize>> = vec![None; n_mat];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row.iter().filter(|e| e.0 < n_mat) {
                match owner[c] {
                    None => owner[c] = Some(r),
                    Some(o) => {
                        let (a, bb) = (find(&mut parent, o), find(&mut parent, r));
                        if a != bb {
                            parent[a.max(bb)] = a.min(bb);
                        }
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
        for r in 0..k {
            let g = find(&mut parent, r);
            groups[g].push(r);
        }
        let dot_mat = |a: &[(usize, f64)], bb: &[(usize, f64)]| -> f64 {
            // rows are short; a simple merge over sorted columns
            let (mut i, mut j, mut s) = (0, 0, 0.0);
            while i < a.len() && j < bb.len() {
                let (ca, cb) = (a[i].0, bb[j].0);
                if ca >= n_mat || cb >= n_mat {
                    break;
                }
                match ca.cmp(&cb) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        s += a[i].1 * bb[j].1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            s
        };
        let mut comps = Vec::new();
        let mut singular = false;
        for g in groups.into_iter().filter(|g| !g.is_empty()) {
            if g.len() == 1 {
                let d = dot_mat(&rows[g[0]], &rows[g[0]]);
                if d <= 1e-300 {
                    singular = true;
                    break;
                }
                comps.push(Comp::Single { row: g[0], inv: 1.0 / d });
            } else {
                let s = g.len();
                let mut m = DMatrix::zeros(s, s);
                for a in 0..s {
                    for c in a..s {
                        let v = dot_mat(&rows[g[a]], &rows[g[c]]);
                        m[(a, c)] = v;
                        m[(c, a)] = v;
                    }
                }
                let scale = m.diagonal().max();
                match Cholesky::new(m) {
                    Some(ch) if ch.l_dirty().diagonal().min() > 1e-10 * scale.sqrt() => {
                        comps.push(Comp::Block { rows: g, chol: ch })
                    }
                    _ => {
                        singular = true;
                        break;
                    }
                }
            }
        }
        if !singular {
            let mut f = DMatrix::zeros(k, n_free);
            for (r, row) in rows.iter().enumerate() {
                for &(c, v) in row.iter().filter(|e| e.0 >= n_mat) {
                    f[(r, c - n_mat)] += v;
                }
            }
            let mut split = SplitKkt {
                comps,
                ginv_f: DMatrix::zeros(k, n_free),
                cap: None,
                f,
            };
            for l in 0..n_free {
                let col = split.ginv(split.f.column(l).as_slice());
                split.ginv_f.set_column(l, &DVector::from_vec(col));
            }
            if n_free > 0 {
                let cap = DMatrix::identity(n_free, n_free) + split.f.transpose() * &split.ginv_f;
                split.cap = Some(
                    Cholesky::new(cap).ok_or_else(|| Error::Numerical("capacitance matrix not positive definite".into()))?,
                );
            }
            return Ok(Affine::Ready(AffineProjector {
                rows,
                b,
                kkt: Kkt::Split(split),
            }));
        }
        if k > DENSE_FALLBACK_LIMIT {
            return Err(Error::TooLarge(format!(
                "{k} coupled equality constraints with a singular Gram matrix"
            )));
        }
        // dense pseudo-inverse of A A^T
        let n_total = n_mat + n_free;
        let mut a: DMatrix<f64> = DMatrix::zeros(k, n_total);
        for (r, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                a[(r, c)] += v;
            }
        }
        let aat = &a * a.transpose();
        let eig = SymmetricEigen::new(aat);
        let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let thr = top * 1e-12 * k as f64;
        let mut pinv: DMatrix<f64> = DMatrix::zeros(k, k);
        let mut null_dirs = Vec::new();
        for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(idx);
            if lam > thr {
                pinv += (v * v.transpose()) / lam;
            } else {
                null_dirs.push(v.clone_owned());
            }
        }
        // b must lie in range(A A^T) = null(A^T)^perp
        let bv = DVector::from_vec(b.clone());
        let mut y: DVector<f64> = DVector::zeros(k);
        for v in &null_dirs {
            y += v * v.dot(&bv);
        }
        let bnorm = bv.norm().max(1.0);
        if y.norm() > 1e-9 * bnorm {
            return Ok(Affine::Inconsistent { y: (-y).as_slice().to_vec() });
        }
        Ok(Affine::Ready(AffineProjector {
            rows,
            b,
            kkt: Kkt::Dense { pinv },
        }))
    }

    /// `A u`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().map(|&(c, v)| v * u[c]).sum()).collect()
    }

    /// `A^T y`, accumulated into `out` with factor `alpha`.
    pub fn apply_t_add(&self, y: &[f64], alpha: f64, out: &mut [f64]) {
        for (row, &yk) in self.rows.iter().zip(y) {
            if yk != 0.0 {
                for &(c, v) in row {
                    out[c] += alpha * v * yk;
                }
            }
        }
    }

    /// Solves `(A A^T) lam = r` (least squares in the rank-deficient case).
    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        match &self.kkt {
            Kkt::Dense { pinv } => (pinv * DVector::from_column_slice(r)).as_slice().to_vec(),
            Kkt::Split(s) => {
                let t = s.ginv(r);
                match &s.cap {
                    None => t,
                    Some(cap) => {
                        let ft = s.f.transpose() * DVector::from_column_slice(&t);
                        let w = cap.solve(&ft);
                        let corr = &s.ginv_f * w;
                        t.iter().zip(corr.iter()).map(|(a, c)| a - c).collect()
                    }
                }
            }
        }
    }

    /// In-place projection of `w` onto the affine set.
    pub fn project(&self, w: &mut [f64]) {
        let mut r = self.apply(w);
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        let lam = self.solve(&r);
        self.apply_t_add(&lam, -1.0, w);
    }

    /// Max-norm of `A u - b`.
    pub fn residual(&self, u: &[f64]) -> f64 {
        self.apply(u)
            .iter()
            .zip(&self.b)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }
}

impl SplitKkt {
    fn ginv(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; r.len()];
        for c in &self.comps {
            match c {
                Comp::Single { row, inv } => out[*row] = r[*row] * inv,
                Comp::Block { rows, chol } => {
                    let rhs = DVector::from_iterator(rows.len(), rows.iter().map(|&i| r[i]));
                    let x = chol.solve(&rhs);
                    for (a, &i) in rows.iter().enumerate() {
                        out[i] = x[a];
                    }
                }
            }
        }
        out
    }
}
