//! Instance file format.
//!
//! Text, UTF-8, LF. First non-comment line is `ising <n>`, followed by
//! `h <i> <value>` and `J <i> <j> <value>` lines in any order with i < j.
//! `#` starts a comment to end of line. Omitted entries default to 0.
//! The canonical writer emits the header, all `h` lines ascending, then
//! `J` lines in (i, j) lexicographic order, floats with 17 significant
//! digits so read(write(p)) is bit-exact.

use std::collections::BTreeMap;

use crate::error::{PqlsError, Result};
use crate::ising::IsingProblem;

fn parse_err(line: usize, message: impl Into<String>) -> PqlsError {
    PqlsError::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_instance(text: &str) -> Result<IsingProblem> {
    let mut n: Option<usize> = None;
    let mut fields: Vec<Option<f64>> = Vec::new();
    let mut couplings: BTreeMap<(usize, usize), f64> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match n {
            None => {
                if tokens.len() != 2 || tokens[0] != "ising" {
                    return Err(parse_err(lineno, "expected header `ising <n>`"));
                }
                let parsed: usize = tokens[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, "invalid variable count"))?;
                if parsed < 1 {
                    return Err(parse_err(lineno, "variable count must be >= 1"));
                }
                fields = vec![None; parsed];
                n = Some(parsed);
            }
            Some(n) => match tokens[0] {
                "h" => {
                    if tokens.len() != 3 {
                        return Err(parse_err(lineno, "expected `h <i> <value>`"));
                    }
                    let i: usize = tokens[1]
                        .parse()
                        .map_err(|_| parse_err(lineno, "invalid index"))?;
                    if i < 1 || i > n {
                        return Err(parse_err(lineno, format!("index {i} out of range 1..={n}")));
                    }
                    let v: f64 = tokens[2]
                        .parse()
                        .map_err(|_| parse_err(lineno, "invalid field value"))?;
                    if fields[i - 1].replace(v).is_some() {
                        return Err(parse_err(lineno, format!("duplicate field for variable {i}")));
                    }
                }
                "J" => {
                    if tokens.len() != 4 {
                        return Err(parse_err(lineno, "expected `J <i> <j> <value>`"));
                    }
                    let i: usize = tokens[1]
                        .parse()
                        .map_err(|_| parse_err(lineno, "invalid index"))?;
                    let j: usize = tokens[2]
                        .parse()
                        .map_err(|_| parse_err(lineno, "invalid index"))?;
                    if i >= j {
                        return Err(parse_err(lineno, "coupling indices must satisfy i < j"));
                    }
                    if i < 1 || j > n {
                        return Err(parse_err(
                            lineno,
                            format!("indices ({i}, {j}) out of range 1..={n}"),
                        ));
                    }
                    let v: f64 = tokens[3]
                        .parse()
                        .map_err(|_| parse_err(lineno, "invalid coupling value"))?;
                    if couplings.insert((i, j), v).is_some() {
                        return Err(parse_err(lineno, format!("duplicate coupling ({i}, {j})")));
                    }
                }
                other => return Err(parse_err(lineno, format!("unknown record `{other}`"))),
            },
        }
    }

    let n = n.ok_or_else(|| parse_err(0, "missing `ising <n>` header"))?;
    let fields = fields.into_iter().map(|f| f.unwrap_or(0.0)).collect();
    IsingProblem::new(n, couplings, fields)
}

pub fn write_instance(problem: &IsingProblem) -> String {
    let mut out = String::new();
    out.push_str(&format!("ising {}\n", problem.n()));
    for (i, h) in problem.fields().iter().enumerate() {
        out.push_str(&format!("h {} {}\n", i + 1, fmt_float(*h)));
    }
    for (&(i, j), &v) in problem.couplings() {
        out.push_str(&format!("J {} {} {}\n", i, j, fmt_float(v)));
    }
    out
}

/// 17 significant digits, enough to round-trip any finite f64.
pub(crate) fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::generate_instance;

    #[test]
    fn parse_basic() {
        let p = read_instance("ising 2\nh 1 0.0\nh 2 0.0\nJ 1 2 1.0").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.coupling(1, 2), 1.0);
        assert_eq!(p.fields(), &[0.0, 0.0]);
    }

    #[test]
    fn omitted_entries_default_to_zero() {
        let p = read_instance("# comment\nising 3\nJ 1 3 -0.5 # trailing").unwrap();
        assert_eq!(p.fields(), &[0.0, 0.0, 0.0]);
        assert_eq!(p.coupling(1, 3), -0.5);
        assert_eq!(p.coupling(1, 2), 0.0);
    }

    #[test]
    fn reversed_coupling_rejected() {
        let err = read_instance("ising 2\nJ 2 1 1.0").unwrap_err();
        assert!(err.to_string().contains("i < j"), "{err}");
    }

    #[test]
    fn duplicates_rejected_with_line_numbers() {
        let err = read_instance("ising 2\nJ 1 2 1.0\nJ 1 2 2.0").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = read_instance("ising 2\nh 1 1.0\nh 1 2.0").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(read_instance("ising 2\nh 3 1.0").is_err());
        assert!(read_instance("ising 2\nJ 1 3 1.0").is_err());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for seed in 0..5 {
            let p = generate_instance(14, seed).unwrap();
            let q = read_instance(&write_instance(&p)).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn writer_is_canonical() {
        let p = generate_instance(5, 0).unwrap();
        let text = write_instance(&p);
        assert_eq!(text, write_instance(&read_instance(&text).unwrap()));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ising 5");
        assert!(lines[1].starts_with("h 1 "));
        assert!(lines[5].starts_with("h 5 "));
        assert!(lines[6].starts_with("J 1 2 "));
    }
}
