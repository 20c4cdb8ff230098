//! Sparse storage of symmetric tensors under canonical multi-indices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tensor::index::{canonicalize, MultiIndex, MAX_ORDER};
use crate::tensor::{HomogeneousPolynomial, Scalar};

/// A real symmetric tensor of order `m` and dimension `n`. Only canonical
/// entries are stored; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensor<T = f64> {
    order: usize,
    dim: usize,
    entries: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> SymmetricTensor<T> {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(SymmetricTensor {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) canonical entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.entries.iter()
    }

    fn canonical(&self, indices: &[usize]) -> Result<MultiIndex> {
        if indices.len() != self.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                got: indices.len(),
            });
        }
        Ok(canonicalize(indices, self.dim)?.0)
    }

    /// Sets the entry at 1-based `indices` (and so at all its permutations).
    pub fn set(&mut self, indices: &[usize], value: T) -> Result<()> {
        let idx = self.canonical(indices)?;
        self.set_canonical(idx, value);
        Ok(())
    }

    pub fn get(&self, indices: &[usize]) -> Result<T> {
        let idx = self.canonical(indices)?;
        Ok(self.get_canonical(&idx))
    }

    /// Caller guarantees `idx` has the right order and range.
    pub fn set_canonical(&mut self, idx: MultiIndex, value: T) {
        debug_assert_eq!(idx.order(), self.order);
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn get_canonical(&self, idx: &MultiIndex) -> T {
        self.entries.get(idx).cloned().unwrap_or_else(T::zero)
    }

    pub fn diagonal(&self, i: usize) -> T {
        self.get_canonical(&MultiIndex::diagonal(i, self.order))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SymmetricTensor<U> {
        let mut out = SymmetricTensor {
            order: self.order,
            dim: self.dim,
            entries: BTreeMap::new(),
        };
        for (k, v) in &self.entries {
            out.set_canonical(k.clone(), f(v));
        }
        out
    }

    pub fn to_f64(&self) -> SymmetricTensor<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let cur = out.get_canonical(k);
            out.set_canonical(k.clone(), cur + v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&(-T::one())))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "order/dim ({}, {}) vs ({}, {})",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }

    fn check_vector(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// `A x^m`, the value of the associated form.
    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        self.check_vector(x)?;
        let mut acc = T::zero();
        for (idx, v) in &self.entries {
            let mut t = T::from_count(idx.multiplicity()?) * v.clone();
            for &i in idx.as_slice() {
                t = t * x[i as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// `A x^{m-1}`: component `i` is the sum over `i2..im` of
    /// `a_{i i2..im} x_{i2}..x_{im}`.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_vector(x)?;
        let mut out = vec![T::zero(); self.dim];
        for (idx, v) in &self.entries {
            for (i, _) in idx.counts() {
                let tail = idx.without_one(i).expect("index present");
                let mut t = T::from_count(tail.multiplicity()?) * v.clone();
                for &j in tail.as_slice() {
                    t = t * x[j as usize].clone();
                }
                out[i] = out[i].clone() + t;
            }
        }
        Ok(out)
    }

    /// Frobenius inner product over all `n^m` positions.
    pub fn inner_product(&self, other: &Self) -> Result<T> {
        self.same_shape(other)?;
        let mut acc = T::zero();
        for (idx, v) in &self.entries {
            if let Some(w) = other.entries.get(idx) {
                acc = acc + T::from_count(idx.multiplicity()?) * v.clone() * w.clone();
            }
        }
        Ok(acc)
    }

    /// The form `f_A(x) = A x^m`; the coefficient of `x^alpha` is the
    /// multiplicity of `alpha` times the entry.
    pub fn to_polynomial(&self) -> Result<HomogeneousPolynomial<T>> {
        let mut p = HomogeneousPolynomial::zero(self.order, self.dim);
        for (idx, v) in &self.entries {
            let c = T::from_count(idx.multiplicity()?) * v.clone();
            p.add_term(&idx.exponents(self.dim), c)?;
        }
        Ok(p)
    }

    /// Inverse of [`SymmetricTensor::to_polynomial`].
    pub fn from_polynomial(p: &HomogeneousPolynomial<T>) -> Result<Self> {
        let mut t = Self::zeros(p.degree(), p.nvars())?;
        for (alpha, c) in p.terms() {
            let idx = MultiIndex::from_exponents(alpha);
            let mult = T::from_count(idx.multiplicity()?);
            t.set_canonical(idx, c.clone() / mult);
        }
        Ok(t)
    }

    /// Sum over row `i` of all `n^{m-1}` entries `a_{i i2..im}`.
    pub fn row_sum(&self, i: usize) -> Result<T> {
        let mut acc = T::zero();
        for (idx, v) in &self.entries {
            let r = idx.row_multiplicity(i)?;
            if r > 0 {
                acc = acc + T::from_count(r) * v.clone();
            }
        }
        Ok(acc)
    }

    /// `|a|` entrywise.
    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    /// Comparison tensor: `|a_{i..i}|` on the diagonal, `-|a|` elsewhere.
    pub fn comparison(&self) -> Self {
        let mut out = self.clone();
        for (idx, v) in self.entries.iter() {
            let a = v.abs();
            out.set_canonical(idx.clone(), if idx.is_diagonal() { a } else { -a });
        }
        out
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.values().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_z_tensor(&self) -> bool {
        self.entries
            .iter()
            .all(|(idx, v)| idx.is_diagonal() || *v <= T::zero())
    }
}

impl SymmetricTensor<f64> {
    /// Dense `n^m` array in row-major order. Only sensible for small shapes.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        let total = (self.dim as u128)
            .checked_pow(self.order as u32)
            .filter(|&t| t <= 1 << 26)
            .ok_or_else(|| Error::TooLarge("dense tensor exceeds 2^26 entries".into()))?;
        let mut out = vec![0.0; total as usize];
        let mut idx = vec![0usize; self.order];
        for slot in out.iter_mut() {
            let one_based: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            *slot = self.get(&one_based)?;
            for k in (0..self.order).rev() {
                idx[k] += 1;
                if idx[k] < self.dim {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(out)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct TensorRepr {
    order: usize,
    dim: usize,
    /// 1-based canonical indices with their values.
    entries: Vec<(Vec<usize>, f64)>,
}

impl serde::Serialize for SymmetricTensor<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorRepr {
            order: self.order,
            dim: self.dim,
            entries: self.entries.iter().map(|(k, v)| (k.one_based(), *v)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for SymmetricTensor<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TensorRepr::deserialize(d)?;
        let mut t = SymmetricTensor::zeros(r.order, r.dim).map_err(serde::de::Error::custom)?;
        for (idx, v) in r.entries {
            t.set(&idx, v).map_err(serde::de::Error::custom)?;
        }
        Ok(t)
    }
}
