//! Plain-text sparse triplet dump of a [`ConicProgram`].
//!
//! ```text
//! * comment
//! sense max
//! vars 3
//! blocks 2 1
//! equalities 1
//! obj <var> <value>                       var 0 = objective constant
//! f <block> <row> <col> <var> <value>     var 0 = constant term F_b0
//! eq <equality> <var> <value>             var 0 = right-hand side
//! ```
//!
//! All indices are 1-based. Only upper-triangular block entries are written.

use std::fmt::Write;

use super::{ConicProgram, Sense};
use crate::error::{Error, Result};

pub(super) fn write_program(p: &ConicProgram) -> String {
    let mut out = String::new();
    out.push_str("* moment-sentinel conic program\n");
    let sense = match p.sense {
        Sense::Maximize => "max",
        Sense::Minimize => "min",
    };
    let _ = writeln!(out, "sense {sense}");
    let _ = writeln!(out, "vars {}", p.num_vars);
    let sizes: Vec<String> = p.block_sizes.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "blocks {}", sizes.join(" "));
    let _ = writeln!(out, "equalities {}", p.equalities.len());
    if p.objective_constant != 0.0 {
        let _ = writeln!(out, "obj 0 {:e}", p.objective_constant);
    }
    for (j, c) in p.objective.iter().enumerate() {
        if *c != 0.0 {
            let _ = writeln!(out, "obj {} {:e}", j + 1, c);
        }
    }
    for (b, entries) in p.block_entries.iter().enumerate() {
        for e in entries {
            let var = e.var.map_or(0, |j| j + 1);
            let _ = writeln!(
                out,
                "f {} {} {} {} {:e}",
                b + 1,
                e.row + 1,
                e.col + 1,
                var,
                e.value
            );
        }
    }
    for (i, eq) in p.equalities.iter().enumerate() {
        let _ = writeln!(out, "eq {} 0 {:e}", i + 1, eq.rhs);
        for &(j, c) in &eq.coeffs {
            let _ = writeln!(out, "eq {} {} {:e}", i + 1, j + 1, c);
        }
    }
    out
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: malformed field")))
}

fn one_based(v: usize, line: usize) -> Result<usize> {
    v.checked_sub(1)
        .ok_or_else(|| Error::Parse(format!("line {line}: index must be ≥ 1")))
}

pub(super) fn read_program(text: &str) -> Result<ConicProgram> {
    let mut sense = None;
    let mut prog: Option<ConicProgram> = None;
    let mut pending_blocks: Option<Vec<usize>> = None;
    let mut eq_count = 0usize;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let tag = toks.next().unwrap();
        match tag {
            "sense" => {
                sense = Some(match toks.next() {
                    Some("max") => Sense::Maximize,
                    Some("min") => Sense::Minimize,
                    _ => return Err(Error::Parse(format!("line {ln}: bad sense"))),
                })
            }
            "vars" => {
                let m: usize = field(toks.next(), ln)?;
                let s = sense.ok_or_else(|| Error::Parse("sense must precede vars".into()))?;
                prog = Some(ConicProgram::new(m, s));
            }
            "blocks" => {
                pending_blocks = Some(toks.map(|t| field(Some(t), ln)).collect::<Result<_>>()?);
            }
            "equalities" => eq_count = field(toks.next(), ln)?,
            _ => {
                let p = prog
                    .as_mut()
                    .ok_or_else(|| Error::Parse(format!("line {ln}: header missing")))?;
                if let Some(sizes) = pending_blocks.take() {
                    for s in sizes {
                        p.add_block(s);
                    }
                    for _ in 0..eq_count {
                        p.add_equality(Vec::new(), 0.0);
                    }
                }
                match tag {
                    "obj" => {
                        let var: usize = field(toks.next(), ln)?;
                        let v: f64 = field(toks.next(), ln)?;
                        if var == 0 {
                            p.objective_constant = v;
                        } else {
                            let j = one_based(var, ln)?;
                            if j >= p.num_vars {
                                return Err(Error::Parse(format!(
                                    "line {ln}: variable out of range"
                                )));
                            }
                            p.objective[j] = v;
                        }
                    }
                    "f" => {
                        let b = one_based(field(toks.next(), ln)?, ln)?;
                        let r = one_based(field(toks.next(), ln)?, ln)?;
                        let c = one_based(field(toks.next(), ln)?, ln)?;
                        let var: usize = field(toks.next(), ln)?;
                        let v: f64 = field(toks.next(), ln)?;
                        if b >= p.block_sizes.len() {
                            return Err(Error::Parse(format!("line {ln}: block out of range")));
                        }
                        p.add_entry(b, r, c, var.checked_sub(1), v);
                    }
                    "eq" => {
                        let i = one_based(field(toks.next(), ln)?, ln)?;
                        let var: usize = field(toks.next(), ln)?;
                        let v: f64 = field(toks.next(), ln)?;
                        let eq = p.equalities.get_mut(i).ok_or_else(|| {
                            Error::Parse(format!("line {ln}: equality out of range"))
                        })?;
                        match var.checked_sub(1) {
                            None => eq.rhs = v,
                            Some(j) => eq.coeffs.push((j, v)),
                        }
                    }
                    other => {
                        return Err(Error::Parse(format!("line {ln}: unknown record '{other}'")))
                    }
                }
            }
        }
    }
    let mut p = prog.ok_or_else(|| Error::Parse("missing header".into()))?;
    if let Some(sizes) = pending_blocks {
        for s in sizes {
            p.add_block(s);
        }
        for _ in 0..eq_count {
            p.add_equality(Vec::new(), 0.0);
        }
    }
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let mut p = ConicProgram::new(2, Sense::Maximize);
        let b0 = p.add_block(2);
        let b1 = p.add_block(1);
        p.add_entry(b0, 0, 0, None, 1.0);
        p.add_entry(b0, 1, 1, None, 1.0);
        p.add_entry(b0, 1, 0, Some(0), 1.0);
        p.add_entry(b1, 0, 0, Some(1), -0.1);
        p.add_entry(b1, 0, 0, None, 1.0 / 3.0);
        p.set_objective(0, 1.0);
        p.set_objective_constant(0.25);
        p.add_equality(vec![(0, 1.0), (1, 2.0)], 0.5);
        let text = p.to_triplets();
        assert!(text.contains("f 1 2 2 0 1e0"));
        let q = ConicProgram::from_triplets(&text).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn malformed_dump() {
        assert!(ConicProgram::from_triplets("vars 2\n").is_err());
        assert!(ConicProgram::from_triplets("sense max\nvars 1\nblocks 1\nf 2 1 1 0 1\n").is_err());
        assert!(ConicProgram::from_triplets("sense max\nvars 1\nblocks 1\nzz 1\n").is_err());
    }
}
