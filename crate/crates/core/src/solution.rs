//! Solution files: the chosen cycle order, its crossing counts and the
//! generations spent finding it.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ga::{self, Chromosome, FitnessBreakdown, RunResult};
use crate::instance::Instance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolutionError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("solution does not match instance: {0}")]
    Mismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub order: Chromosome,
    pub fitness: FitnessBreakdown,
    pub generations: usize,
}

impl From<&RunResult> for Solution {
    fn from(r: &RunResult) -> Self {
        Solution {
            order: r.best.clone(),
            fitness: r.best_fitness,
            generations: r.generations_used,
        }
    }
}

impl Solution {
    /// Checks the order covers the instance's points and the recorded counts
    /// agree with a fresh evaluation.
    pub fn check_against(&self, instance: &Instance) -> Result<(), SolutionError> {
        if self.order.len() != instance.n() {
            return Err(SolutionError::Mismatch(format!(
                "order has {} entries but the instance has {} points",
                self.order.len(),
                instance.n()
            )));
        }
        let actual = ga::fitness(instance, &self.order).map_err(|e| SolutionError::Mismatch(e.to_string()))?;
        if actual != self.fitness {
            return Err(SolutionError::Mismatch(format!(
                "recorded FITNESS {} but the order scores {}",
                self.fitness, actual
            )));
        }
        Ok(())
    }
}

pub fn format_solution(sol: &Solution) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ORDER {}", sol.order);
    let _ = writeln!(s, "FITNESS {}", sol.fitness);
    let _ = writeln!(s, "GENERATIONS {}", sol.generations);
    s
}

pub fn parse_solution(text: &str) -> Result<Solution, SolutionError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let end = text.lines().count() + 1;
    let mut expect = |keyword: &str| -> Result<(usize, Vec<&str>), SolutionError> {
        let (line, l) = lines.next().ok_or_else(|| SolutionError::Syntax {
            line: end,
            message: format!("unexpected end of input, expected {keyword}"),
        })?;
        let mut tok = l.split_whitespace();
        if tok.next() != Some(keyword) {
            return Err(SolutionError::Syntax { line, message: format!("expected {keyword}, found '{l}'") });
        }
        Ok((line, tok.collect()))
    };
    let ints = |line: usize, toks: &[&str], what: &str| -> Result<Vec<usize>, SolutionError> {
        toks.iter()
            .map(|t| {
                t.parse::<usize>().map_err(|_| SolutionError::Syntax {
                    line,
                    message: format!("{what}: '{t}' is not a non-negative integer"),
                })
            })
            .collect()
    };

    let (line, toks) = expect("ORDER")?;
    let order = ints(line, &toks, "ORDER")?;
    let order = Chromosome::new(order).map_err(|e| SolutionError::Syntax { line, message: e.to_string() })?;
    if order.len() < 3 {
        return Err(SolutionError::Syntax { line, message: "ORDER needs at least 3 indices".into() });
    }

    let (line, toks) = expect("FITNESS")?;
    let counts = ints(line, &toks, "FITNESS")?;
    let [c1, c2, f] = counts[..] else {
        return Err(SolutionError::Syntax { line, message: "FITNESS needs exactly C1 C2 F".into() });
    };
    let (c1, c2, f) = (to_u32(c1, line)?, to_u32(c2, line)?, to_u32(f, line)?);
    if c1.checked_add(c2) != Some(f) {
        return Err(SolutionError::Syntax { line, message: format!("F = {f} is not C1 + C2 = {c1} + {c2}") });
    }

    let (line, toks) = expect("GENERATIONS")?;
    let g = ints(line, &toks, "GENERATIONS")?;
    let [generations] = g[..] else {
        return Err(SolutionError::Syntax { line, message: "GENERATIONS needs exactly one count".into() });
    };
    if let Some((line, extra)) = lines.next() {
        return Err(SolutionError::Syntax { line, message: format!("unexpected content '{extra}'") });
    }
    Ok(Solution { order, fitness: FitnessBreakdown::new(c1, c2), generations })
}

fn to_u32(v: usize, line: usize) -> Result<u32, SolutionError> {
    u32::try_from(v).map_err(|_| SolutionError::Syntax { line, message: format!("count {v} too large") })
}
