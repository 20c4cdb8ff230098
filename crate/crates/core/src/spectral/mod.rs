//! Smallest H-eigenvalue, positive definiteness, and a brute-force oracle.

mod eigmin;
mod oracle;
mod pd;
mod procedure;

pub use eigmin::{min_h_eigenvalue, BlockMethod, BlockValue, EigMinOptions, EigMinResult};
pub use oracle::{brute_force_min, OracleOptions, OracleResult};
pub use pd::{is_positive_definite, PdOptions, PdReport, PdVerdict};
pub use procedure::{generate_procedure1, Procedure1Instance};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{example51, example52, example52_value, example53, example54};
    use crate::sos::Blockwise;
    use crate::structured::detect_extended_z;
    use crate::tensor::special::identity;
    use crate::tensor::SymmetricTensor;
    use approx::assert_abs_diff_eq;

    fn opts(mode: Blockwise) -> EigMinOptions {
        let mut o = EigMinOptions::default();
        o.sos.blockwise = mode;
        o
    }

    #[test]
    fn identity_has_eigenvalue_one() {
        let id: SymmetricTensor = identity(4, 3).unwrap();
        let r = min_h_eigenvalue(&id, &EigMinOptions::default()).unwrap();
        assert_abs_diff_eq!(r.lambda_min, 1.0, epsilon = 1e-9);
        assert!(r.exact);
    }

    #[test]
    fn mixed_cubes_example_monolithic() {
        let a = example51().unwrap();
        let r = min_h_eigenvalue(&a, &opts(Blockwise::Off)).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.lambda_min, -1.0, epsilon = 1e-4);
        assert!(r.lambda_min <= -1.0 + 1e-9);
        let cert = r.certificate.unwrap();
        assert!(cert.residual < 1e-6, "residual {}", cert.residual);
    }

    #[test]
    fn mixed_cubes_example_blockwise_and_closed_form() {
        let a = example51().unwrap();
        let r = min_h_eigenvalue(&a, &opts(Blockwise::On)).unwrap();
        assert_abs_diff_eq!(r.lambda_min, -1.0, epsilon = 1e-4);
        assert!(r.blockwise);
        let mut o = opts(Blockwise::On);
        o.closed_form_single_term = true;
        let r = min_h_eigenvalue(&a, &o).unwrap();
        assert_abs_diff_eq!(r.lambda_min, -1.0, epsilon = 1e-10);
    }

    #[test]
    fn two_parameter_family() {
        for &(al, be) in &[(5.0, 0.0), (-0.3, 0.7), (0.0, 0.0), (-2.0, 1.5)] {
            let a = example52(al, be).unwrap();
            let r = min_h_eigenvalue(&a, &EigMinOptions::default()).unwrap();
            let scale = 1.0 + 20.0 * f64::max(al, be).abs();
            assert!(
                (r.lambda_min - example52_value(al, be)).abs() <= 1e-4 * scale,
                "({al}, {be}): {} vs {}",
                r.lambda_min,
                example52_value(al, be)
            );
        }
    }

    #[test]
    fn block_quartic_example() {
        let a = example54(4).unwrap();
        let r = min_h_eigenvalue(&a, &opts(Blockwise::Off)).unwrap();
        assert_abs_diff_eq!(r.lambda_min, 3.0, epsilon = 1e-4);
    }

    #[test]
    fn order_ten_example_is_zero() {
        let a = example53(10).unwrap();
        let mut o = opts(Blockwise::On);
        o.closed_form_single_term = true;
        let r = min_h_eigenvalue(&a, &o).unwrap();
        assert_abs_diff_eq!(r.lambda_min, 0.0, epsilon = 1e-5);
    }

    #[test]
    fn oracle_agrees_on_small_examples() {
        let o = brute_force_min(&example51().unwrap(), &OracleOptions::default()).unwrap();
        assert_abs_diff_eq!(o.value, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(o.x[0].abs(), 0.5f64.powf(1.0 / 6.0), epsilon = 1e-4);
        assert!(o.x[0] * o.x[1] < 0.0);
        let o = brute_force_min(&example53(10).unwrap(), &OracleOptions::default()).unwrap();
        assert_abs_diff_eq!(o.value, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn procedure_instances_have_known_verdicts() {
        let mut seen = [false, false];
        for seed in 0..8 {
            let inst = generate_procedure1(4, 8, 2, 4, 100.0, seed).unwrap();
            assert!(detect_extended_z(&inst.tensor).unwrap().holds);
            let rep = is_positive_definite(&inst.tensor, &PdOptions::default()).unwrap();
            let want = if inst.positive_definite {
                PdVerdict::PositiveDefinite
            } else {
                PdVerdict::NotPositiveDefinite
            };
            assert_eq!(rep.verdict, want, "seed {seed}");
            seen[inst.parity as usize] = true;
        }
        assert!(seen[0] && seen[1]);
        assert!(generate_procedure1(4, 9, 2, 4, 100.0, 0).is_err());
    }

    #[test]
    fn identity_is_positive_definite() {
        let id: SymmetricTensor = identity(6, 2).unwrap();
        let rep = is_positive_definite(&id, &PdOptions::default()).unwrap();
        assert_eq!(rep.verdict, PdVerdict::PositiveDefinite);
    }
}
