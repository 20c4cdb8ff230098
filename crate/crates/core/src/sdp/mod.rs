//! A small semidefinite-programming solver: one PSD block, free scalars,
//! linear equalities and a linear objective.

mod affine;
mod format;
mod problem;
mod psd;
mod solver;

pub use format::{dump_sdp, load_sdp};
pub use problem::{LinearConstraint, SdpProblem, Sense, SparseSym};
pub use psd::{min_eigenvalue, psd_project};
pub(crate) use psd::block_eigen;
pub use solver::{solve_sdp, InfeasibilityEvidence, SdpOptions, SdpSolution, SdpStatus};

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_by_two(off: f64) -> SdpProblem {
        let mut pr = SdpProblem::feasibility(2, 0);
        let mut fix = |i: usize, j: usize, val: f64| {
            let mut m = SparseSym::new();
            // <A, X> = X_ij for off-diagonal A with entries 1/2
            m.push(i, j, if i == j { 1.0 } else { 0.5 });
            pr.constraints.push(LinearConstraint {
                matrix: m,
                free: vec![],
                rhs: val,
            });
        };
        fix(0, 0, 1.0);
        fix(1, 1, 1.0);
        fix(0, 1, off);
        pr
    }

    #[test]
    fn feasible_correlation_matrix() {
        let s = solve_sdp(&two_by_two(0.9), &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Solved);
        assert!(s.primal_residual < 1e-7);
        assert_abs_diff_eq!(s.x[(0, 1)], 0.9, epsilon = 1e-7);
    }

    #[test]
    fn infeasible_correlation_matrix_yields_farkas_vector() {
        let pr = two_by_two(1.1);
        let s = solve_sdp(&pr, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Infeasible);
        let ev = s.infeasibility.unwrap();
        let mut agg = nalgebra::DMatrix::zeros(2, 2);
        for (c, yk) in pr.constraints.iter().zip(&ev.y) {
            agg += c.matrix.to_dense(2) * *yk;
        }
        assert!(min_eigenvalue(&agg) > -1e-6);
        let bty: f64 = pr.constraints.iter().zip(&ev.y).map(|(c, y)| c.rhs * y).sum();
        assert!(bty < 0.0);
    }

    #[test]
    fn minimum_trace_with_unit_diagonal() {
        let mut pr = two_by_two(0.3);
        pr.constraints.pop();
        pr.objective.push(0, 0, 1.0);
        pr.objective.push(1, 1, 1.0);
        let s = solve_sdp(&pr, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Solved);
        assert_abs_diff_eq!(s.objective, 2.0, epsilon = 1e-7);
    }

    #[test]
    fn free_scalar_is_optimized() {
        // maximize r subject to X_11 + r = 3, X_22 = 1, X_12 = 1: X PSD needs
        // X_11 >= 1, so r* = 2.
        let mut pr = SdpProblem::feasibility(2, 1);
        pr.sense = Sense::Maximize;
        pr.objective_free.push((0, 1.0));
        let mut m = SparseSym::new();
        m.push(0, 0, 1.0);
        pr.constraints.push(LinearConstraint { matrix: m, free: vec![(0, 1.0)], rhs: 3.0 });
        let mut m = SparseSym::new();
        m.push(1, 1, 1.0);
        pr.constraints.push(LinearConstraint { matrix: m, free: vec![], rhs: 1.0 });
        let mut m = SparseSym::new();
        m.push(0, 1, 0.5);
        pr.constraints.push(LinearConstraint { matrix: m, free: vec![], rhs: 1.0 });
        let s = solve_sdp(&pr, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Solved);
        assert_abs_diff_eq!(s.free[0], 2.0, epsilon = 1e-6);
    }

    #[test]
    fn inconsistent_equalities_are_reported() {
        let mut pr = SdpProblem::feasibility(1, 0);
        for rhs in [1.0, 2.0] {
            let mut m = SparseSym::new();
            m.push(0, 0, 1.0);
            pr.constraints.push(LinearConstraint { matrix: m, free: vec![], rhs });
        }
        let s = solve_sdp(&pr, &SdpOptions::default()).unwrap();
        assert_eq!(s.status, SdpStatus::Infeasible);
    }

    #[test]
    fn dump_load_round_trip() {
        let mut pr = two_by_two(0.5);
        pr.num_free = 1;
        pr.constraints[0].free.push((0, 2.0));
        pr.objective_free.push((0, -1.0));
        let text = dump_sdp(&pr);
        assert_eq!(load_sdp(&text).unwrap(), pr);
    }

    #[test]
    fn malformed_dump_is_rejected() {
        assert!(load_sdp("sdp 2 0 1 min\n1 3 1 1.0\n").is_err());
        assert!(load_sdp("sdp 2 0 1 sideways\n").is_err());
    }

    #[test]
    fn residual_trace_is_monotone() {
        let s = solve_sdp(&two_by_two(0.9), &SdpOptions::default()).unwrap();
        assert!(s.residual_trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
