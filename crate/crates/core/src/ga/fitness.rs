use std::fmt;

use rayon::prelude::*;

use super::{Chromosome, GaError, Individual};
use crate::geom::{self, raw_intersect};
use crate::instance::Instance;

/// Crossing counts of one embedding: `c1` self-crossings, `c2` crossings with
/// polygon sides. The total is always their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FitnessBreakdown {
    pub c1: u32,
    pub c2: u32,
}

impl FitnessBreakdown {
    pub fn new(c1: u32, c2: u32) -> Self {
        FitnessBreakdown { c1, c2 }
    }

    pub fn f(&self) -> u32 {
        self.c1 + self.c2
    }
}

impl fmt::Display for FitnessBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.c1, self.c2, self.f())
    }
}

/// Scores a chromosome from scratch with the geometry kernel's counters.
pub fn fitness(instance: &Instance, chrom: &Chromosome) -> Result<FitnessBreakdown, GaError> {
    let pts = &instance.points;
    if chrom.len() != pts.len() {
        return Err(GaError::InvalidChromosome(format!(
            "length {} does not match {} points",
            chrom.len(),
            pts.len()
        )));
    }
    let to_ga = |e: geom::GeomError| GaError::InvalidChromosome(e.to_string());
    let c1 = geom::cycle_self_crossings(pts, chrom.order()).map_err(to_ga)?;
    let c2 = geom::cycle_polygon_crossings(pts, chrom.order(), &instance.polygon).map_err(to_ga)?;
    Ok(FitnessBreakdown::new(c1 as u32, c2 as u32))
}

/// Fitness evaluation bound to one validated instance. The number of polygon
/// sides hit by each possible edge is tabulated up front, so `c2` costs
/// `O(n)` per chromosome.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    instance: &'a Instance,
    side_hits: Vec<u32>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance) -> Result<Self, GaError> {
        let violations = instance.validate();
        if !violations.is_empty() {
            return Err(GaError::InvalidInstance(violations));
        }
        let n = instance.n();
        let pts = &instance.points;
        let mut side_hits = vec![0u32; n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let hits = instance
                    .polygon
                    .sides()
                    .filter(|&(c, d)| raw_intersect(pts[a], pts[b], c, d))
                    .count() as u32;
                side_hits[a * n + b] = hits;
                side_hits[b * n + a] = hits;
            }
        }
        Ok(Evaluator { instance, side_hits })
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    /// Caller guarantees `chrom` is a permutation of this instance's points.
    pub fn evaluate(&self, chrom: &Chromosome) -> FitnessBreakdown {
        let order = chrom.order();
        let n = order.len();
        let c1 = geom::self_crossings_unchecked(&self.instance.points, order) as u32;
        let c2 = (0..n)
            .map(|i| self.side_hits[order[i] * n + order[(i + 1) % n]])
            .sum();
        FitnessBreakdown::new(c1, c2)
    }

    pub fn score(&self, chrom: Chromosome) -> Individual {
        let fitness = self.evaluate(&chrom);
        Individual { chromosome: chrom, fitness }
    }

    /// Scores a batch, optionally on the rayon pool. Output order always
    /// matches input order.
    pub fn score_all(&self, chroms: Vec<Chromosome>, parallel: bool) -> Vec<Individual> {
        if parallel {
            chroms.into_par_iter().map(|c| self.score(c)).collect()
        } else {
            chroms.into_iter().map(|c| self.score(c)).collect()
        }
    }
}
