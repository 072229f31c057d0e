//! Text formats: instances, result files and run reports.
//!
//! ```text
//! MOAP p n            MOKP p n
//! <p blocks of n      <capacity>
//!  rows of n costs>   <n weights>
//!                     <p rows of n profits>
//! ```

use std::fmt::Write as _;

use crate::engine::RunStats;
use crate::error::{Error, Result};
use crate::solvers::RawProblem;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line as integers.
    fn ints(&mut self, expected: usize, what: &str) -> Result<Vec<i64>> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let values = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("'{t}' is not an integer"),
                    })
                })
                .collect::<Result<Vec<i64>>>()?;
            if values.len() != expected {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("{what}: expected {expected} values, found {}", values.len()),
                });
            }
            return Ok(values);
        }
        Err(Error::Parse {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }

    fn header(&mut self) -> Result<(String, usize, usize)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |message: String| Error::Parse { line: i + 1, message };
            if parts.len() != 3 {
                return Err(bad("header must be 'MOAP p n' or 'MOKP p n'".into()));
            }
            let dim = |t: &str| -> Result<usize> {
                match t.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(bad(format!("'{t}' is not a positive integer"))),
                }
            };
            return Ok((parts[0].to_string(), dim(parts[1])?, dim(parts[2])?));
        }
        Err(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })
    }

    fn finish(&mut self) -> Result<()> {
        for (i, line) in self.inner.by_ref() {
            if !line.trim().is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "trailing data".into(),
                });
            }
        }
        Ok(())
    }
}

pub fn parse_instance(text: &str) -> Result<RawProblem> {
    let mut lines = Lines::new(text);
    let (tag, p, n) = lines.header()?;
    let raw = match tag.as_str() {
        "MOAP" => {
            let mut costs = Vec::with_capacity(p);
            for k in 0..p {
                let mut block = Vec::with_capacity(n);
                for i in 0..n {
                    block.push(lines.ints(n, &format!("row {} of cost matrix {}", i + 1, k + 1))?);
                }
                costs.push(block);
            }
            RawProblem::Assignment { costs }
        }
        "MOKP" => {
            let capacity = lines.ints(1, "capacity")?[0];
            let weights = lines.ints(n, "weights")?;
            let mut profits = Vec::with_capacity(p);
            for k in 0..p {
                profits.push(lines.ints(n, &format!("profits of objective {}", k + 1))?);
            }
            RawProblem::Knapsack {
                capacity,
                weights,
                profits,
            }
        }
        other => {
            return Err(Error::Parse {
                line: 1,
                message: format!("unknown problem tag '{other}'"),
            })
        }
    };
    lines.finish()?;
    Ok(raw)
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_instance(raw: &RawProblem) -> String {
    let mut out = String::new();
    match raw {
        RawProblem::Assignment { costs } => {
            let n = costs.first().map_or(0, Vec::len);
            writeln!(out, "MOAP {} {}", costs.len(), n).unwrap();
            for row in costs.iter().flatten() {
                writeln!(out, "{}", join(row)).unwrap();
            }
        }
        RawProblem::Knapsack {
            capacity,
            weights,
            profits,
        } => {
            writeln!(out, "MOKP {} {}", profits.len(), weights.len()).unwrap();
            writeln!(out, "{capacity}").unwrap();
            writeln!(out, "{}", join(weights)).unwrap();
            for row in profits {
                writeln!(out, "{}", join(row)).unwrap();
            }
        }
    }
    out
}

/// One point per line, sorted lexicographically.
pub fn write_points(points: &[Vec<i64>]) -> String {
    let mut sorted = points.to_vec();
    sorted.sort();
    let mut out = String::new();
    for y in sorted {
        writeln!(out, "{}", join(&y)).unwrap();
    }
    out
}

pub fn parse_points(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let y = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    line: i + 1,
                    message: format!("'{t}' is not an integer"),
                })
            })
            .collect::<Result<Vec<i64>>>()?;
        out.push(y);
    }
    Ok(out)
}

/// Run report as `key=value` lines.
pub fn write_report(stats: &RunStats) -> String {
    format!(
        "ysn1={}\nsolver_calls={}\nfloat_calls={}\ninit_calls={}\ntime_s={:.6}\n",
        stats.extreme_points_found, stats.solver_calls, stats.float_calls, stats.init_solver_calls, stats.wall_time
    )
}

/// Parse `key=value` lines into pairs, in order.
pub fn parse_report(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: "expected key=value".into(),
                })
        })
        .collect()
}
