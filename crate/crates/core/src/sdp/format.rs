//! Plain-text dump of an [`SdpProblem`].
//!
//! ```text
//! sdp <block_size> <num_free> <num_constraints> <min|max>
//! k i j v        # matrix entry (1-based, i <= j); k = 0 is the objective
//! k free l v     # coefficient of free scalar l
//! k rhs v        # right-hand side of constraint k
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::sdp::problem::{LinearConstraint, SdpProblem, Sense, SparseSym};

pub fn dump_sdp(problem: &SdpProblem) -> String {
    let mut s = String::new();
    let sense = match problem.sense {
        Sense::Minimize => "min",
        Sense::Maximize => "max",
    };
    writeln!(
        s,
        "sdp {} {} {} {}",
        problem.block_size,
        problem.num_free,
        problem.constraints.len(),
        sense
    )
    .unwrap();
    let mat = |s: &mut String, k: usize, m: &SparseSym, free: &[(usize, f64)]| {
        for &(i, j, v) in &m.entries {
            writeln!(s, "{k} {} {} {v:?}", i + 1, j + 1).unwrap();
        }
        for &(l, v) in free {
            writeln!(s, "{k} free {} {v:?}", l + 1).unwrap();
        }
    };
    mat(&mut s, 0, &problem.objective, &problem.objective_free);
    for (k, c) in problem.constraints.iter().enumerate() {
        mat(&mut s, k + 1, &c.matrix, &c.free);
        writeln!(s, "{} rhs {:?}", k + 1, c.rhs).unwrap();
    }
    s
}

pub fn load_sdp(text: &str) -> Result<SdpProblem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let perr = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 || h[0] != "sdp" {
        return Err(perr(hl, "expected `sdp <block_size> <num_free> <num_constraints> <min|max>`"));
    }
    let num = |t: &str, line: usize| t.parse::<usize>().map_err(|_| perr(line, &format!("bad integer `{t}`")));
    let flt = |t: &str, line: usize| t.parse::<f64>().map_err(|_| perr(line, &format!("bad number `{t}`")));
    let p = num(h[1], hl)?;
    let nf = num(h[2], hl)?;
    let k = num(h[3], hl)?;
    let sense = match h[4] {
        "min" => Sense::Minimize,
        "max" => Sense::Maximize,
        _ => return Err(perr(hl, "sense must be `min` or `max`")),
    };
    let mut problem = SdpProblem::feasibility(p, nf);
    problem.sense = sense;
    problem.constraints = vec![LinearConstraint::default(); k];
    for (ln, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        let idx = num(t[0], ln)?;
        if idx > k {
            return Err(perr(ln, &format!("constraint {idx} exceeds declared count {k}")));
        }
        match (t.get(1).copied(), t.len()) {
            (Some("rhs"), 3) => {
                if idx == 0 {
                    return Err(perr(ln, "objective has no right-hand side"));
                }
                problem.constraints[idx - 1].rhs = flt(t[2], ln)?;
            }
            (Some("free"), 4) => {
                let l = num(t[2], ln)?;
                if l == 0 || l > nf {
                    return Err(perr(ln, "free scalar index out of range"));
                }
                let v = flt(t[3], ln)?;
                if idx == 0 {
                    problem.objective_free.push((l - 1, v));
                } else {
                    problem.constraints[idx - 1].free.push((l - 1, v));
                }
            }
            (_, 4) => {
                let (i, j) = (num(t[1], ln)?, num(t[2], ln)?);
                if i == 0 || j == 0 || i > p || j > p {
                    return Err(perr(ln, "matrix index out of range"));
                }
                let v = flt(t[3], ln)?;
                let m = if idx == 0 {
                    &mut problem.objective
                } else {
                    &mut problem.constraints[idx - 1].matrix
                };
                m.push(i - 1, j - 1, v);
            }
            _ => return Err(perr(ln, "expected `k i j v`, `k free l v` or `k rhs v`")),
        }
    }
    Ok(problem)
}
