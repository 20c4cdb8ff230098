//! Sum-of-squares certificates: Gram systems, extraction, rank bounds and
//! the closed-form criteria that avoid an SDP.

mod bounds;
mod certify;
mod closed_form;
mod extract;
mod gram;

pub use bounds::{bd_bound, bd_exponent, lambda_bound, sos_rank_bounds, RankBounds};
pub use certify::{
    certify_sos, Blockwise, GramBlock, NotSosEvidence, SosCertificate, SosOptions, SosOutcome,
};
pub(crate) use certify::{assemble, finish_block, split_vars};
pub use closed_form::{
    delta, f_hat, gershgorin_lower_bound, is_diagonal_exponent, omega, single_mixed_term_sos,
    SingleTermVerdict,
};
pub(crate) use closed_form::mu0;
pub use extract::{extract_sos_terms, numerical_rank, reduce_rank, refit_low_rank, RANK_TOL};
pub use gram::{monomial_basis, GramSystem};

use crate::tensor::HomogeneousPolynomial;

/// Connected components of the graph joining variables that share a mixed
/// term, singletons included, each sorted and listed by smallest member.
pub fn mixed_term_components(f: &HomogeneousPolynomial<f64>) -> Vec<Vec<usize>> {
    let n = f.nvars();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for (alpha, _) in f.terms() {
        let support: Vec<usize> = (0..n).filter(|&i| alpha[i] > 0).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}
