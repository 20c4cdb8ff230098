//! Named test tensors and random instance families.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sos::{is_diagonal_exponent, single_mixed_term_sos};
use crate::structured::{
    detect_extended_z, is_b0, is_double_b, is_h_tensor, is_mb0, is_quasi_double_b0, is_weakly_diagonally_dominated,
    restrict, BlockTag,
};
use crate::tensor::index::{all_canonical, binomial};
use crate::tensor::special::cauchy;
use crate::tensor::{HomogeneousPolynomial, MultiIndex, Scalar, SymmetricTensor};

fn int<T: Scalar>(k: i64) -> T {
    let v = T::from_count(k.unsigned_abs() as u128);
    if k < 0 {
        -v
    } else {
        v
    }
}

/// `x1^6 + x2^6 + x3^6 + x4^6 + 4 x1^3 x2^3 + 6 x3^2 x4^4`, smallest
/// H-eigenvalue `-1`.
pub fn example51<T: Scalar>() -> Result<SymmetricTensor<T>> {
    let p = HomogeneousPolynomial::power_sum(6, 4, T::one())
        .with_term(&[3, 3, 0, 0], int(4))?
        .with_term(&[0, 0, 2, 4], int(6))?;
    SymmetricTensor::from_polynomial(&p)
}

/// `sum x_i^6 + 20 alpha x1^3 x2^3 + 20 beta x3^3 x4^3`.
pub fn example52<T: Scalar>(alpha: T, beta: T) -> Result<SymmetricTensor<T>> {
    let p = HomogeneousPolynomial::power_sum(6, 4, T::one())
        .with_term(&[3, 3, 0, 0], int::<T>(20) * alpha)?
        .with_term(&[0, 0, 3, 3], int::<T>(20) * beta)?;
    SymmetricTensor::from_polynomial(&p)
}

/// `1 - 10 max(|alpha|, |beta|)`.
pub fn example52_value(alpha: f64, beta: f64) -> f64 {
    1.0 - 10.0 * alpha.abs().max(beta.abs())
}

/// Order `m` (a multiple of 10), dimension 4:
/// `sum x_i^m + 2 x1^{m/2} x2^{m/2} - x3^{m/5} x4^{4m/5} - x3^{4m/5} x4^{m/5}`,
/// smallest H-eigenvalue `0`.
pub fn example53<T: Scalar>(m: usize) -> Result<SymmetricTensor<T>> {
    if m == 0 || !m.is_multiple_of(10) {
        return Err(Error::InvalidParameter(format!("order {m} must be a positive multiple of 10")));
    }
    let (h, f) = ((m / 2) as u32, (m / 5) as u32);
    let p = HomogeneousPolynomial::power_sum(m, 4, T::one())
        .with_term(&[h, h, 0, 0], int(2))?
        .with_term(&[0, 0, f, 4 * f], int(-1))?
        .with_term(&[0, 0, 4 * f, f], int(-1))?;
    SymmetricTensor::from_polynomial(&p)
}

/// Off-diagonal entries of [`example53`]: `2 / C(m, m/2)` and
/// `-1 / C(m, m/5)`.
pub fn example53_entries<T: Scalar>(m: usize) -> Option<(T, T)> {
    let a = binomial(m as u64, (m / 2) as u64)?;
    let b = binomial(m as u64, (m / 5) as u64)?;
    Some((int::<T>(2) / T::from_count(a), -(T::one() / T::from_count(b))))
}

/// Order 4, dimension `n` (a multiple of 4):
/// `n sum x_i^4 + 4 sum_k x_{4k-3} x_{4k-2} x_{4k-1} x_{4k}`, smallest
/// H-eigenvalue `n - 1`.
pub fn example54<T: Scalar>(n: usize) -> Result<SymmetricTensor<T>> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!("dimension {n} must be a positive multiple of 4")));
    }
    let mut a = SymmetricTensor::zeros(4, n)?;
    for i in 1..=n {
        a.set(&[i, i, i, i], T::from_count(n as u128))?;
    }
    let sixth = T::one() / T::from_count(6);
    for k in 0..n / 4 {
        let b = 4 * k;
        a.set(&[b + 1, b + 2, b + 3, b + 4], sixth.clone())?;
    }
    Ok(a)
}

/// Families of tensors known to have SOS decompositions at even order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructuredClass {
    /// Cauchy tensor with a positive generating vector.
    Cauchy,
    WeaklyDiagonallyDominated,
    B0,
    DoubleB,
    QuasiDoubleB0,
    Mb0,
    /// H-tensor with nonnegative diagonal.
    HNonnegativeDiagonal,
    /// Positive semidefinite Z-tensor.
    PsdZ,
    /// Positive semidefinite extended Z-tensor.
    PsdExtendedZ,
}

impl StructuredClass {
    pub const ALL: [StructuredClass; 9] = [
        StructuredClass::Cauchy,
        StructuredClass::WeaklyDiagonallyDominated,
        StructuredClass::B0,
        StructuredClass::DoubleB,
        StructuredClass::QuasiDoubleB0,
        StructuredClass::Mb0,
        StructuredClass::HNonnegativeDiagonal,
        StructuredClass::PsdZ,
        StructuredClass::PsdExtendedZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructuredClass::Cauchy => "cauchy",
            StructuredClass::WeaklyDiagonallyDominated => "weak-diag",
            StructuredClass::B0 => "b0",
            StructuredClass::DoubleB => "double-b",
            StructuredClass::QuasiDoubleB0 => "quasi-double-b0",
            StructuredClass::Mb0 => "mb0",
            StructuredClass::HNonnegativeDiagonal => "h-nonneg",
            StructuredClass::PsdZ => "psd-z",
            StructuredClass::PsdExtendedZ => "psd-extended-z",
        }
    }

    /// Membership test used to tune generated instances.
    pub fn contains(self, a: &SymmetricTensor) -> Result<bool> {
        Ok(match self {
            StructuredClass::Cauchy => {
                return Err(Error::InvalidParameter("Cauchy membership needs the generating vector".into()))
            }
            StructuredClass::WeaklyDiagonallyDominated => is_weakly_diagonally_dominated(a)?,
            StructuredClass::B0 => is_b0(a)?,
            StructuredClass::DoubleB => is_double_b(a)?,
            StructuredClass::QuasiDoubleB0 => is_quasi_double_b0(a)?,
            StructuredClass::Mb0 => is_mb0(a)?.m_tensor,
            StructuredClass::HNonnegativeDiagonal => {
                (0..a.dim()).all(|i| a.diagonal(i) >= 0.0) && is_h_tensor(a)?.h_tensor
            }
            StructuredClass::PsdZ => a.is_z_tensor() && is_h_tensor(a)?.h_tensor,
            StructuredClass::PsdExtendedZ => psd_extended_z(a)?,
        })
    }
}

impl FromStr for StructuredClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StructuredClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown class `{s}`")))
    }
}

/// Exact on extended-Z tensors: each single-term block against its
/// closed-form threshold, each nonpositive block by the M-tensor test.
fn psd_extended_z(a: &SymmetricTensor) -> Result<bool> {
    let rep = detect_extended_z(a)?;
    if !rep.holds {
        return Ok(false);
    }
    let n = a.dim();
    if (0..n).any(|i| a.diagonal(i) < 0.0) {
        return Ok(false);
    }
    let f = a.to_polynomial()?;
    for block in &rep.blocks {
        let sub = restrict(a, &block.vars)?;
        let ok = match block.tag {
            BlockTag::SingleTerm => {
                let g = f.restrict(&block.vars);
                let diag: Vec<f64> = (0..block.vars.len()).map(|k| g.diagonal_coeff(k)).collect();
                let term = g.terms().find(|(al, _)| !is_diagonal_exponent(al)).map(|(al, &c)| (al.clone(), c));
                match term {
                    Some((al, c)) => single_mixed_term_sos(&diag, &al, -c, 0.0)?.sos,
                    None => true,
                }
            }
            BlockTag::Nonpositive => is_h_tensor(&sub)?.h_tensor,
            BlockTag::Violating => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_mixed_index(vars: &[usize], m: usize, rng: &mut impl Rng) -> MultiIndex {
    loop {
        let raw: Vec<u32> = (0..m).map(|_| vars[rng.gen_range(0..vars.len())] as u32).collect();
        let idx = MultiIndex::from_unsorted(raw);
        if !idx.is_diagonal() {
            return idx;
        }
    }
}

/// Scales a positive diagonal profile by the smallest factor that puts `a`
/// into `class` (found by bisection), then by a random margin. One instance
/// in four is left on the boundary.
fn tune_diagonal(a: &mut SymmetricTensor, class: StructuredClass, rng: &mut impl Rng) -> Result<()> {
    let n = a.dim();
    let m = a.order();
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..2.0)).collect();
    let set = |a: &mut SymmetricTensor, t: f64| {
        for (i, wi) in w.iter().enumerate() {
            a.set_canonical(MultiIndex::diagonal(i, m), t * wi);
        }
    };
    let mut hi = 1.0;
    loop {
        set(a, hi);
        if class.contains(a)? {
            break;
        }
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Numerical(format!("could not tune a {} instance", class.name())));
        }
    }
    let mut lo = 0.0;
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        set(a, mid);
        if class.contains(a)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = if rng.gen_bool(0.25) { hi } else { hi * rng.gen_range(1.0..1.3) };
    set(a, t);
    if !class.contains(a)? {
        set(a, hi);
    }
    Ok(())
}

/// A random member of `class` with order `m` and dimension `n`.
pub fn random_class(class: StructuredClass, m: usize, n: usize, rng: &mut impl Rng) -> Result<SymmetricTensor> {
    if !m.is_multiple_of(2) {
        return Err(Error::OddOrder(m));
    }
    if class == StructuredClass::Cauchy {
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        return cauchy(&c, m);
    }
    let mut a = SymmetricTensor::zeros(m, n)?;
    if class == StructuredClass::PsdExtendedZ {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut rest = &perm[..];
        while rest.len() >= 2 {
            let size = if rest.len() <= 3 { rest.len() } else { rng.gen_range(2..=rest.len()) };
            let (block, tail) = rest.split_at(size);
            rest = tail;
            if rng.gen_bool(0.5) {
                a.set_canonical(random_mixed_index(block, m, rng), rng.gen_range(-1.0..1.0));
            } else {
                for _ in 0..rng.gen_range(1..=4) {
                    a.set_canonical(random_mixed_index(block, m, rng), -rng.gen_range(0.0..1.0));
                }
            }
        }
    } else {
        let nonpositive = class == StructuredClass::PsdZ;
        for idx in all_canonical(m, n) {
            if idx.is_diagonal() || rng.gen_bool(0.5) {
                continue;
            }
            let v = if nonpositive { -rng.gen_range(0.0..1.0) } else { rng.gen_range(-1.0..1.0) };
            a.set_canonical(idx, v);
        }
    }
    tune_diagonal(&mut a, class, rng)?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::rational;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_entries() {
        let a: SymmetricTensor<BigRational> = example51().unwrap();
        assert_eq!(a.get(&[2, 1, 2, 1, 2, 1]).unwrap(), rational(1, 5));
        assert_eq!(a.get(&[4, 3, 4, 3, 4, 4]).unwrap(), rational(2, 5));
        let a: SymmetricTensor<BigRational> = example54(4).unwrap();
        assert_eq!(a.get(&[4, 4, 4, 4]).unwrap(), rational(4, 1));
        assert_eq!(a.get(&[3, 1, 4, 2]).unwrap(), rational(1, 6));
        assert_eq!(a.nnz(), 5);
        let a: SymmetricTensor<BigRational> = example53(10).unwrap();
        let (al, be) = example53_entries::<BigRational>(10).unwrap();
        assert_eq!(al, rational(1, 126));
        assert_eq!(be, rational(-1, 45));
        assert_eq!(a.get(&[1, 2, 1, 2, 1, 2, 1, 2, 1, 2]).unwrap(), al);
        assert_eq!(a.get(&[3, 3, 4, 4, 4, 4, 4, 4, 4, 4]).unwrap(), be);
        assert_eq!(a.get(&[4, 4, 3, 3, 3, 3, 3, 3, 3, 3]).unwrap(), be);
        let a: SymmetricTensor<BigRational> = example52(rational(1, 2), rational(-1, 3)).unwrap();
        assert_eq!(a.get(&[1, 1, 1, 2, 2, 2]).unwrap(), rational(1, 2));
        assert!(example53::<f64>(12).is_err());
        assert!(example54::<f64>(6).is_err());
    }

    #[test]
    fn random_classes_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for class in StructuredClass::ALL {
            assert_eq!(class.name().parse::<StructuredClass>().unwrap(), class);
            for (m, n) in [(4, 3), (6, 2)] {
                let a = random_class(class, m, n, &mut rng).unwrap();
                if class != StructuredClass::Cauchy {
                    assert!(class.contains(&a).unwrap(), "{class:?}");
                }
            }
        }
    }
}
