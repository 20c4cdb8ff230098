//! Random extended-Z instances with a known definiteness verdict.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{canonicalize, MultiIndex, SymmetricTensor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Procedure1Instance {
    pub tensor: SymmetricTensor,
    /// 1 when the diagonal is negative.
    pub parity: u32,
    /// Equal-size partition of the variables, 0-based.
    pub blocks: Vec<Vec<usize>>,
    pub positive_definite: bool,
}

/// Draws `s` blocks of `k` variables. Blocks `1..s-1` get one random mixed
/// entry in `[0, 1]`; the last block gets `-B` on all of its mixed entries
/// with `B` uniform in `[0, 1]`. The diagonal is `(-1)^L M` with `L` a fair
/// coin, so the form is positive definite exactly when `L` is even (for `M`
/// large against the last block's row sums).
pub fn generate_procedure1(m: usize, n: usize, s: usize, k: usize, big_m: f64, seed: u64) -> Result<Procedure1Instance> {
    if s == 0 || k == 0 || s * k != n {
        return Err(Error::InvalidParameter(format!("n = {n} is not s * k = {s} * {k}")));
    }
    if !m.is_multiple_of(2) || m == 0 {
        return Err(Error::OddOrder(m));
    }
    if big_m <= 0.0 || !big_m.is_finite() {
        return Err(Error::InvalidParameter(format!("M = {big_m} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parity: u32 = rng.gen_range(0..2);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let blocks: Vec<Vec<usize>> = perm
        .chunks(k)
        .map(|c| {
            let mut b = c.to_vec();
            b.sort_unstable();
            b
        })
        .collect();
    let mut a = SymmetricTensor::zeros(m, n)?;
    if k >= 2 {
        for block in &blocks[..s - 1] {
            let idx = loop {
                let raw: Vec<usize> = (0..m).map(|_| block[rng.gen_range(0..k)] + 1).collect();
                let (c, _) = canonicalize(&raw, n)?;
                if !c.is_diagonal() {
                    break c;
                }
            };
            a.set_canonical(idx, rng.gen_range(0.0..=1.0));
        }
        let last = &blocks[s - 1];
        for local in crate::tensor::index::all_canonical(m, k) {
            if local.is_diagonal() {
                continue;
            }
            let global: Vec<u32> = local.as_slice().iter().map(|&v| last[v as usize] as u32).collect();
            let idx = MultiIndex::from_unsorted(global);
            a.set_canonical(idx, -rng.gen_range(0.0..=1.0));
        }
    }
    let d = if parity == 0 { big_m } else { -big_m };
    for i in 0..n {
        a.set_canonical(MultiIndex::diagonal(i, m), d);
    }
    Ok(Procedure1Instance {
        tensor: a,
        parity,
        blocks,
        positive_definite: parity == 0,
    })
}
