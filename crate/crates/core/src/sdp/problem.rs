use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric matrix given by its upper triangle: each `(i, j, v)` with
/// `i <= j` sets both `A_ij` and `A_ji` to `v`. Repeated positions add up.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.entries.push((i, j, v));
    }

    /// `<A, X>` for a dense symmetric `X`.
    pub fn dot(&self, x: &nalgebra::DMatrix<f64>) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v * x[(i, i)] } else { 2.0 * v * x[(i, j)] })
            .sum()
    }

    pub fn to_dense(&self, p: usize) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(p, p);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v;
            }
        }
        m
    }
}

/// `<A, X> + sum_l c_l z_l = b`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub matrix: SparseSym,
    pub free: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// One PSD block `X` of size `block_size`, `num_free` unconstrained scalars
/// `z`, linear equalities and a linear objective `<C, X> + d^T z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub block_size: usize,
    pub num_free: usize,
    pub constraints: Vec<LinearConstraint>,
    pub objective: SparseSym,
    pub objective_free: Vec<(usize, f64)>,
    pub sense: Sense,
}

impl SdpProblem {
    /// Feasibility problem with a zero objective.
    pub fn feasibility(block_size: usize, num_free: usize) -> Self {
        SdpProblem {
            block_size,
            num_free,
            constraints: Vec::new(),
            objective: SparseSym::new(),
            objective_free: Vec::new(),
            sense: Sense::Minimize,
        }
    }

    pub fn has_objective(&self) -> bool {
        self.objective.entries.iter().any(|e| e.2 != 0.0)
            || self.objective_free.iter().any(|e| e.1 != 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::InvalidParameter("PSD block of size zero".into()));
        }
        let p = self.block_size;
        let check_mat = |m: &SparseSym| -> Result<()> {
            for &(i, j, v) in &m.entries {
                if i >= p || j >= p {
                    return Err(Error::IndexOutOfRange { index: i.max(j) + 1, dim: p });
                }
                if !v.is_finite() {
                    return Err(Error::InvalidParameter("non-finite coefficient".into()));
                }
            }
            Ok(())
        };
        let check_free = |f: &[(usize, f64)]| -> Result<()> {
            for &(l, v) in f {
                if l >= self.num_free {
                    return Err(Error::IndexOutOfRange { index: l + 1, dim: self.num_free });
                }
                if !v.is_finite() {
                    return Err(Error::InvalidParameter("non-finite coefficient".into()));
                }
            }
            Ok(())
        };
        check_mat(&self.objective)?;
        check_free(&self.objective_free)?;
        for c in &self.constraints {
            check_mat(&c.matrix)?;
            check_free(&c.free)?;
            if !c.rhs.is_finite() {
                return Err(Error::InvalidParameter("non-finite right-hand side".into()));
            }
        }
        Ok(())
    }

    /// Maximum constraint violation at `(x, z)`.
    pub fn residual(&self, x: &nalgebra::DMatrix<f64>, z: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| {
                let lhs = c.matrix.dot(x) + c.free.iter().map(|&(l, v)| v * z[l]).sum::<f64>();
                (lhs - c.rhs).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn objective_value(&self, x: &nalgebra::DMatrix<f64>, z: &[f64]) -> f64 {
        self.objective.dot(x) + self.objective_free.iter().map(|&(l, v)| v * z[l]).sum::<f64>()
    }
}
