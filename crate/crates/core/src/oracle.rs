//! Exhaustive ground truth for small instances: every distinct cyclic order
//! is scored and the best one kept.

use thiserror::Error;

use crate::ga::{self, run_ga, Chromosome, Evaluator, FitnessBreakdown, GaConfig, GaError};
use crate::instance::Instance;

pub const DEFAULT_MAX_N: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("exhaustive search refused: {n} points exceeds the limit of {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("exhaustive search needs at least 3 points, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Ga(#[from] GaError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub min_f: u32,
    pub breakdown: FitnessBreakdown,
    /// Lexicographically least order achieving `min_f`.
    pub witness: Chromosome,
    pub orders_examined: u64,
}

/// In-place lexicographic successor; false once the last permutation is reached.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Scores all `(n - 1)! / 2` cyclic orders with point 0 first and
/// `order[1] < order[n - 1]` (one representative per rotation/reflection class).
pub fn solve_exhaustive(instance: &Instance, max_n: usize) -> Result<OracleResult, OracleError> {
    let n = instance.n();
    if n > max_n {
        return Err(OracleError::TooLarge { n, max_n });
    }
    if n < 3 {
        return Err(OracleError::TooSmall(n));
    }
    let eval = Evaluator::new(instance)?;
    let mut tail: Vec<usize> = (1..n).collect();
    let mut best: Option<(FitnessBreakdown, Chromosome)> = None;
    let mut examined = 0u64;
    let mut order = vec![0usize; n];
    loop {
        if tail[0] < tail[n - 2] {
            order[1..].copy_from_slice(&tail);
            let chrom = Chromosome::from_vec_unchecked(order.clone());
            let f = eval.evaluate(&chrom);
            examined += 1;
            if best.as_ref().is_none_or(|(b, _)| f.f() < b.f()) {
                best = Some((f, chrom));
            }
        }
        if !next_permutation(&mut tail) {
            break;
        }
    }
    let (breakdown, witness) = best.expect("n >= 3 yields at least one order");
    Ok(OracleResult { min_f: breakdown.f(), breakdown, witness, orders_examined: examined })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub oracle_min_f: u32,
    pub ga_best_f: u32,
}

impl Comparison {
    pub fn gap(&self) -> i64 {
        i64::from(self.ga_best_f) - i64::from(self.oracle_min_f)
    }
}

/// Runs both the exhaustive solver and the GA on the same instance.
pub fn verify_ga_against_oracle(instance: &Instance, config: &GaConfig) -> Result<Comparison, OracleError> {
    let oracle = solve_exhaustive(instance, DEFAULT_MAX_N)?;
    let run = run_ga(instance, config)?;
    let rescored = ga::fitness(instance, &oracle.witness)?;
    debug_assert_eq!(rescored.f(), oracle.min_f);
    Ok(Comparison { oracle_min_f: oracle.min_f, ga_best_f: run.best_fitness.f() })
}
