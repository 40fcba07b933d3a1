//! The genetic algorithm: permutation chromosomes, crossing-count fitness,
//! crossover plus swap and uncrossing mutations, roulette-wheel selection and
//! the restartable generational loop.

mod fitness;
mod operators;
mod run;
mod select;

use std::fmt;

use thiserror::Error;

use crate::geom::is_permutation;

pub use fitness::{fitness, Evaluator, FitnessBreakdown};
pub use operators::{
    choose_operator, crossover, crossover_at, find_crossing_edge_pairs, init_population,
    mutate_swap, mutate_uncross, produce_children, swap_at, uncross_pair, Operator,
};
pub use run::{run_ga, run_ga_with_initial, GaConfig, GenerationStat, Rates, RunResult, Version};
pub use select::{roulette_weights, select_next_generation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid chromosome: {0}")]
    InvalidChromosome(String),
    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),
    #[error("internal error: {0}")]
    Internal(String),
}

/// One embedded cycle: `order[k]` is the index of the point that cycle vertex
/// `k` is mapped to. Always a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chromosome(Vec<usize>);

impl Chromosome {
    pub fn new(order: Vec<usize>) -> Result<Self, GaError> {
        if !is_permutation(&order, order.len()) {
            return Err(GaError::InvalidChromosome(format!(
                "{order:?} is not a permutation of 0..{}",
                order.len()
            )));
        }
        Ok(Chromosome(order))
    }

    pub fn identity(n: usize) -> Self {
        Chromosome((0..n).collect())
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&order, order.len()));
        Chromosome(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_order(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        is_permutation(&self.0, self.0.len())
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

/// A chromosome together with its evaluated fitness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub fitness: FitnessBreakdown,
}
