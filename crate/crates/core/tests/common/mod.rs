//! Property checks shared by the proptest suites and the acceptance target.

#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tensor_sos::generators::{random_class, StructuredClass};
use tensor_sos::io::{parse_polynomial, parse_tensor, write_polynomial, write_tensor};
use tensor_sos::sdp::min_eigenvalue;
use tensor_sos::sos::{certify_sos, gershgorin_lower_bound, SosOptions, SosOutcome};
use tensor_sos::spectral::{brute_force_min, min_h_eigenvalue, EigMinOptions, OracleOptions};
use tensor_sos::structured::{
    detect_extended_z, is_diagonally_dominated, is_mb0, is_quasi_double_b0, is_weakly_diagonally_dominated,
};
use tensor_sos::tensor::index::all_canonical;
use tensor_sos::tensor::special::identity;
use tensor_sos::tensor::{rational, MultiIndex, SymmetricTensor};

pub fn oracle_opts(seed: u64) -> OracleOptions {
    OracleOptions {
        restarts: Some(24),
        seed,
        ..OracleOptions::default()
    }
}

pub fn eig_opts() -> EigMinOptions {
    EigMinOptions {
        certificate: false,
        ..EigMinOptions::default()
    }
}

/// Fills every canonical index of an order-`m` tensor from `values`, cycling
/// if needed.
pub fn tensor_from(m: usize, n: usize, values: &[f64]) -> SymmetricTensor {
    let mut a = SymmetricTensor::zeros(m, n).unwrap();
    for (k, idx) in all_canonical(m, n).into_iter().enumerate() {
        a.set_canonical(idx, values[k % values.len()]);
    }
    a
}

pub fn rational_tensor_from(m: usize, n: usize, values: &[(i64, i64)]) -> SymmetricTensor<BigRational> {
    let mut a = SymmetricTensor::zeros(m, n).unwrap();
    for (k, idx) in all_canonical(m, n).into_iter().enumerate() {
        let (p, q) = values[k % values.len()];
        a.set_canonical(idx, rational(p, q));
    }
    a
}

/// Order 4, dimension 1..=3, entries in [-1, 1].
pub fn small_quartic() -> impl Strategy<Value = SymmetricTensor> {
    (1usize..=3, prop::collection::vec(-1.0f64..1.0, 15)).prop_map(|(n, v)| tensor_from(4, n, &v))
}

pub fn rational_tensor() -> impl Strategy<Value = SymmetricTensor<BigRational>> {
    (
        prop_oneof![Just(2usize), Just(4usize)],
        1usize..=4,
        prop::collection::vec((-50i64..50, 1i64..20), 35),
    )
        .prop_map(|(m, n, v)| rational_tensor_from(m, n, &v))
}

/// A random extended-Z form of order `m`: variables are split into blocks,
/// each carrying one mixed term of either sign or only nonpositive mixed
/// terms.
pub fn random_extended_z(m: usize, n: usize, rng: &mut ChaCha8Rng) -> SymmetricTensor {
    let mut a = SymmetricTensor::zeros(m, n).unwrap();
    for i in 0..n {
        a.set_canonical(
            MultiIndex::diagonal(i, m),
            rng.gen_range(-1.0..2.0),
        );
    }
    let mut start = 0;
    while start < n {
        let size = rng.gen_range(1..=n - start);
        let block: Vec<usize> = (start..start + size).collect();
        start += size;
        if size < 2 {
            continue;
        }
        let candidates: Vec<_> = all_canonical(m, n)
            .into_iter()
            .filter(|idx| !idx.is_diagonal() && idx.support().iter().all(|v| block.contains(v)))
            .collect();
        if rng.gen_bool(0.5) {
            let idx = candidates[rng.gen_range(0..candidates.len())].clone();
            a.set_canonical(idx, rng.gen_range(-1.0..1.0));
        } else {
            for idx in candidates {
                if rng.gen_bool(0.5) {
                    a.set_canonical(idx, -rng.gen_range(0.0..1.0));
                }
            }
        }
    }
    a
}

pub fn check_round_trip(a: &SymmetricTensor<BigRational>) -> Result<(), TestCaseError> {
    let back = parse_tensor(&write_tensor(a)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, a);
    let p = a.to_polynomial().unwrap();
    let q = parse_polynomial(&write_polynomial(&p)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&q, &p);
    prop_assert_eq!(&SymmetricTensor::from_polynomial(&q).unwrap(), a);
    Ok(())
}

pub fn check_gershgorin(a: &SymmetricTensor, seed: u64) -> Result<(), TestCaseError> {
    let g = gershgorin_lower_bound(a).unwrap();
    let o = brute_force_min(a, &oracle_opts(seed)).unwrap();
    prop_assert!(g <= o.value + 1e-9, "gershgorin {} above oracle {}", g, o.value);
    Ok(())
}

pub fn check_homogeneity_and_shift(a: &SymmetricTensor, t: f64, c: f64) -> Result<(), TestCaseError> {
    let opts = eig_opts();
    let base = min_h_eigenvalue(a, &opts).unwrap();
    let scaled = min_h_eigenvalue(&a.scale(&t), &opts).unwrap();
    let id: SymmetricTensor = identity(a.order(), a.dim()).unwrap();
    let shifted = min_h_eigenvalue(&a.add(&id.scale(&c)).unwrap(), &opts).unwrap();
    let tol = 1e-4 * (1.0 + a.max_abs_entry() * t.max(1.0) + c.abs());
    prop_assert!((scaled.r - t * base.r).abs() <= tol, "scale {}: {} vs {}", t, scaled.r, t * base.r);
    prop_assert!((shifted.r - (base.r + c)).abs() <= tol, "shift {}: {} vs {}", c, shifted.r, base.r + c);
    Ok(())
}

pub fn check_eigen_residual(a: &SymmetricTensor, seed: u64) -> Result<(), TestCaseError> {
    let o = brute_force_min(a, &oracle_opts(seed)).unwrap();
    let bound = 1e-4 * (1.0 + a.max_abs_entry());
    prop_assert!(o.residual <= bound, "residual {} > {}", o.residual, bound);
    Ok(())
}

pub fn check_implications(a: &SymmetricTensor) -> Result<(), TestCaseError> {
    if is_diagonally_dominated(a).unwrap() {
        prop_assert!(is_weakly_diagonally_dominated(a).unwrap());
    }
    if a.is_z_tensor() {
        prop_assert!(detect_extended_z(a).unwrap().holds);
    }
    if is_quasi_double_b0(a).unwrap() {
        prop_assert!(is_mb0(a).unwrap().m_tensor);
    }
    Ok(())
}

/// Tensors built to land in the hypotheses of the implication chain.
pub fn implication_instance(kind: u8, m: usize, n: usize, seed: u64) -> SymmetricTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind % 3 {
        0 => {
            let mut a = SymmetricTensor::zeros(m, n).unwrap();
            for idx in all_canonical(m, n) {
                if !idx.is_diagonal() && rng.gen_bool(0.5) {
                    a.set_canonical(idx, rng.gen_range(-1.0..1.0));
                }
            }
            let abs = a.abs();
            for i in 0..n {
                let off = abs.row_sum(i).unwrap();
                a.set_canonical(MultiIndex::diagonal(i, m), off + rng.gen_range(0.0..0.5));
            }
            a
        }
        1 => {
            let mut a = SymmetricTensor::zeros(m, n).unwrap();
            for idx in all_canonical(m, n) {
                let v = if idx.is_diagonal() { rng.gen_range(-1.0..1.0) } else { -rng.gen_range(0.0..1.0) };
                a.set_canonical(idx, v);
            }
            a
        }
        _ => random_class(StructuredClass::QuasiDoubleB0, m, n, &mut rng).unwrap(),
    }
}

pub fn check_sos_soundness(a: &SymmetricTensor) -> Result<(), TestCaseError> {
    let f = a.to_polynomial().unwrap();
    if let SosOutcome::Certified(c) = certify_sos(&f, &SosOptions::default()).unwrap() {
        let g = c.reconstruct();
        let scale = 1.0 + f.max_abs_coeff();
        let diff = f.sub(&g).unwrap().max_abs_coeff();
        prop_assert!(diff <= 1e-6 * scale, "reconstruction off by {}", diff);
        for b in &c.blocks {
            prop_assert!(min_eigenvalue(&b.gram) >= -1e-8 * scale);
        }
        let o = brute_force_min(a, &oracle_opts(1)).unwrap();
        prop_assert!(o.value >= -1e-6 * scale, "certified SOS but oracle found {}", o.value);
    }
    Ok(())
}
