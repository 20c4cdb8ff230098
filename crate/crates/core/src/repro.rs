//! Reproduction suites for the worked examples and the definiteness test.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generators::{example51, example52, example52_value, example53, example54};
use crate::sos::Blockwise;
use crate::spectral::{generate_procedure1, is_positive_definite, min_h_eigenvalue, EigMinOptions, PdOptions, PdVerdict};
use crate::tensor::SymmetricTensor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproRow {
    pub problem: String,
    pub m: usize,
    pub n: usize,
    pub computed: f64,
    pub truth: f64,
    pub abs_error: f64,
    pub seconds: f64,
    pub note: String,
}

/// Which example instances to run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExamplesConfig {
    pub pairs: usize,
    pub seed: u64,
    pub example53_orders: Vec<usize>,
    pub example54_monolithic: Vec<usize>,
    pub example54_blockwise: Vec<usize>,
}

impl Default for ExamplesConfig {
    fn default() -> Self {
        ExamplesConfig {
            pairs: 100,
            seed: 0,
            example53_orders: vec![10, 20, 30],
            example54_monolithic: vec![4, 8, 20],
            example54_blockwise: vec![100, 500, 1000, 2000],
        }
    }
}

fn row(
    problem: &str,
    a: &SymmetricTensor,
    truth: f64,
    mode: Blockwise,
    base: &EigMinOptions,
    note: &str,
) -> Result<ReproRow> {
    let mut opts = base.clone();
    opts.sos.blockwise = mode;
    let r = min_h_eigenvalue(a, &opts)?;
    let mut note = note.to_string();
    if !r.converged {
        note = format!("{note}{}solver stopped at iteration limit", if note.is_empty() { "" } else { "; " });
    }
    Ok(ReproRow {
        problem: problem.into(),
        m: a.order(),
        n: a.dim(),
        computed: r.lambda_min,
        truth,
        abs_error: (r.lambda_min - truth).abs(),
        seconds: r.seconds,
        note,
    })
}

/// `(alpha, beta)` pairs uniform on `[-5, 5]^2`.
pub fn example52_pairs(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0)))
        .collect()
}

pub fn run_examples(cfg: &ExamplesConfig, base: &EigMinOptions) -> Result<Vec<ReproRow>> {
    let mut rows = vec![row("mixed cubes", &example51()?, -1.0, Blockwise::Off, base, "")?];

    if cfg.pairs > 0 {
        let start = Instant::now();
        let mut worst = (0.0f64, 0.0, 0.0, 0.0, 0.0);
        for (al, be) in example52_pairs(cfg.pairs, cfg.seed) {
            let r = min_h_eigenvalue(&example52(al, be)?, base)?;
            let truth = example52_value(al, be);
            let err = (r.lambda_min - truth).abs();
            if err >= worst.0 {
                worst = (err, r.lambda_min, truth, al, be);
            }
        }
        rows.push(ReproRow {
            problem: "two-parameter family".into(),
            m: 6,
            n: 4,
            computed: worst.1,
            truth: worst.2,
            abs_error: worst.0,
            seconds: start.elapsed().as_secs_f64(),
            note: format!(
                "worst of {} pairs, at (alpha, beta) = ({:.4}, {:.4})",
                cfg.pairs, worst.3, worst.4
            ),
        });
    }
    for &m in &cfg.example53_orders {
        rows.push(row("single mixed term", &example53(m)?, 0.0, Blockwise::On, base, "blockwise")?);
    }
    for &n in &cfg.example54_monolithic {
        rows.push(row("quartets", &example54(n)?, (n - 1) as f64, Blockwise::Off, base, "")?);
    }
    for &n in &cfg.example54_blockwise {
        rows.push(row("quartets", &example54(n)?, (n - 1) as f64, Blockwise::On, base, "blockwise")?);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdSuiteConfig {
    pub instances: usize,
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub big_m: f64,
    pub seed: u64,
}

impl Default for PdSuiteConfig {
    fn default() -> Self {
        PdSuiteConfig {
            instances: 100,
            m: 4,
            n: 20,
            s: 4,
            k: 5,
            big_m: 100.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdSuiteReport {
    pub instances: usize,
    pub pd: usize,
    pub not_pd: usize,
    pub inconclusive: usize,
    pub correct: usize,
    pub correctness: f64,
    pub seconds: f64,
}

/// Instance `j` uses seed `cfg.seed + j`.
pub fn run_pd_suite(cfg: &PdSuiteConfig, opts: &PdOptions) -> Result<PdSuiteReport> {
    let start = Instant::now();
    let mut rep = PdSuiteReport {
        instances: cfg.instances,
        pd: 0,
        not_pd: 0,
        inconclusive: 0,
        correct: 0,
        correctness: 0.0,
        seconds: 0.0,
    };
    for j in 0..cfg.instances {
        let inst = generate_procedure1(cfg.m, cfg.n, cfg.s, cfg.k, cfg.big_m, cfg.seed.wrapping_add(j as u64))?;
        let v = is_positive_definite(&inst.tensor, opts)?.verdict;
        match v {
            PdVerdict::PositiveDefinite => rep.pd += 1,
            PdVerdict::NotPositiveDefinite => rep.not_pd += 1,
            PdVerdict::Inconclusive => rep.inconclusive += 1,
        }
        let truth = if inst.positive_definite {
            PdVerdict::PositiveDefinite
        } else {
            PdVerdict::NotPositiveDefinite
        };
        if v == truth {
            rep.correct += 1;
        }
    }
    rep.correctness = if cfg.instances == 0 {
        100.0
    } else {
        100.0 * rep.correct as f64 / cfg.instances as f64
    };
    rep.seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}
