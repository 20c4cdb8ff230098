//! Extended Z-tensors: forms whose mixed terms split into variable blocks
//! each holding either a single mixed term or only nonpositive ones.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sos::{is_diagonal_exponent, mixed_term_components};
use crate::tensor::{HomogeneousPolynomial, SymmetricTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockTag {
    /// Exactly one mixed term, of any sign.
    SingleTerm,
    /// Every mixed term is nonpositive.
    Nonpositive,
    /// Neither; the form is not extended-Z.
    Violating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtZBlock {
    /// 0-based variables.
    pub vars: Vec<usize>,
    pub tag: BlockTag,
    pub mixed_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedZReport {
    pub holds: bool,
    /// Partition of all variables. Variables without mixed terms are
    /// attached to the first block.
    pub blocks: Vec<ExtZBlock>,
    /// Variables that occur in no mixed term.
    pub isolated: Vec<usize>,
}

pub fn detect_extended_z(a: &SymmetricTensor) -> Result<ExtendedZReport> {
    Ok(detect_extended_z_poly(&a.to_polynomial()?))
}

/// Any valid block partition is a union of connected components of the
/// mixed-term graph, and a block passes iff each of its components does, so
/// testing the components decides the question.
pub fn detect_extended_z_poly(f: &HomogeneousPolynomial<f64>) -> ExtendedZReport {
    let comps = mixed_term_components(f);
    let mut blocks = Vec::new();
    let mut isolated = Vec::new();
    for vars in comps {
        if vars.len() == 1 {
            isolated.push(vars[0]);
            continue;
        }
        let terms: Vec<f64> = f
            .terms()
            .filter(|(a, _)| !is_diagonal_exponent(a) && vars.iter().any(|&v| a[v] > 0))
            .map(|(_, &c)| c)
            .collect();
        let tag = if terms.iter().all(|&c| c <= 0.0) {
            BlockTag::Nonpositive
        } else if terms.len() == 1 {
            BlockTag::SingleTerm
        } else {
            BlockTag::Violating
        };
        blocks.push(ExtZBlock {
            vars,
            tag,
            mixed_terms: terms.len(),
        });
    }
    let holds = blocks.iter().all(|b| b.tag != BlockTag::Violating);
    if blocks.is_empty() {
        blocks.push(ExtZBlock {
            vars: isolated.clone(),
            tag: BlockTag::Nonpositive,
            mixed_terms: 0,
        });
    } else {
        blocks[0].vars.extend(isolated.iter().copied());
        blocks[0].vars.sort_unstable();
    }
    ExtendedZReport {
        holds,
        blocks,
        isolated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(m: usize, n: usize, terms: &[(&[u32], f64)]) -> HomogeneousPolynomial<f64> {
        let mut p = HomogeneousPolynomial::zero(m, n);
        for (a, c) in terms {
            p.add_term(a, *c).unwrap();
        }
        p
    }

    #[test]
    fn two_positive_terms_in_one_block_fail() {
        let f = poly(4, 2, &[(&[4, 0], 1.0), (&[0, 4], 1.0), (&[2, 2], 1.0), (&[1, 3], 2.0)]);
        let r = detect_extended_z_poly(&f);
        assert!(!r.holds);
        assert_eq!(r.blocks[0].tag, BlockTag::Violating);
    }

    #[test]
    fn example_with_two_single_term_blocks() {
        let mut f = HomogeneousPolynomial::power_sum(6, 4, 1.0);
        f.add_term(&[3, 3, 0, 0], 4.0).unwrap();
        f.add_term(&[0, 0, 2, 4], 6.0).unwrap();
        let r = detect_extended_z_poly(&f);
        assert!(r.holds);
        assert_eq!(r.blocks.len(), 2);
        assert_eq!(r.blocks[0].vars, vec![0, 1]);
        assert_eq!(r.blocks[1].vars, vec![2, 3]);
        assert!(r.blocks.iter().all(|b| b.tag == BlockTag::SingleTerm));
    }

    #[test]
    fn z_tensor_blocks_are_nonpositive() {
        let f = poly(4, 3, &[(&[4, 0, 0], 1.0), (&[1, 1, 2, ][..], -0.5), (&[0, 2, 2], -1.0)]);
        let r = detect_extended_z_poly(&f);
        assert!(r.holds);
        assert!(r.blocks.iter().all(|b| b.tag == BlockTag::Nonpositive));
    }

    #[test]
    fn isolated_variables_join_first_block() {
        let f = poly(4, 4, &[(&[0, 2, 2, 0], 3.0), (&[4, 0, 0, 0], 1.0)]);
        let r = detect_extended_z_poly(&f);
        assert!(r.holds);
        assert_eq!(r.isolated, vec![0, 3]);
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].vars, vec![0, 1, 2, 3]);
    }
}
