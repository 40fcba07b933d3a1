use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use super::operators::{init_population, produce_children};
use super::select::select_next_generation;
use super::{fitness, Chromosome, Evaluator, FitnessBreakdown, GaError, Individual};
use crate::instance::Instance;
use crate::seed::{derive_seed, rng_from};

const RATE_TOLERANCE: f64 = 1e-9;

/// Algorithm variant. `V1` mutates only by swapping; `V2` adds the
/// uncrossing mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Version {
    V1,
    V2,
}

impl Version {
    pub fn number(self) -> u8 {
        match self {
            Version::V1 => 1,
            Version::V2 => 2,
        }
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Version {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" | "v1" | "V1" => Ok(Version::V1),
            "2" | "v2" | "V2" => Ok(Version::V2),
            other => Err(format!("unknown version '{other}', expected 1 or 2")),
        }
    }
}

/// Probability that a child comes from each operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub crossover: f64,
    pub swap: f64,
    pub uncross: f64,
}

impl Rates {
    pub fn new(crossover: f64, swap: f64, uncross: f64) -> Self {
        Rates { crossover, swap, uncross }
    }

    pub fn default_for(version: Version) -> Self {
        match version {
            Version::V1 => Rates::new(0.8, 0.2, 0.0),
            Version::V2 => Rates::new(0.8, 0.1, 0.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub version: Version,
    /// Population size is this multiple of the number of points.
    pub population_multiplier: usize,
    /// Children per generation as `numerator / denominator` of the population.
    pub children_fraction: (usize, usize),
    pub rates: Rates,
    pub generation_cap: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Score children on the rayon pool. Results are identical either way.
    pub parallel_fitness: bool,
    pub record_log: bool,
}

impl GaConfig {
    pub fn for_version(version: Version, seed: u64) -> Self {
        GaConfig {
            version,
            population_multiplier: 3,
            children_fraction: (1, 3),
            rates: Rates::default_for(version),
            generation_cap: 1000,
            restarts: 1,
            seed,
            parallel_fitness: false,
            record_log: false,
        }
    }

    pub fn v1(seed: u64) -> Self {
        Self::for_version(Version::V1, seed)
    }

    pub fn v2(seed: u64) -> Self {
        Self::for_version(Version::V2, seed)
    }

    pub fn with_generations(mut self, cap: usize) -> Self {
        self.generation_cap = cap;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_rates(mut self, rates: Rates) -> Self {
        self.rates = rates;
        self
    }

    pub fn population_size(&self, n: usize) -> usize {
        self.population_multiplier * n
    }

    pub fn check(&self) -> Result<(), GaError> {
        let bad = |msg: String| Err(GaError::InvalidConfig(msg));
        let r = &self.rates;
        for (name, v) in [("crossover", r.crossover), ("swap", r.swap), ("uncross", r.uncross)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} rate {v} outside [0, 1]"));
            }
        }
        let sum = r.crossover + r.swap + r.uncross;
        if (sum - 1.0).abs() > RATE_TOLERANCE {
            return bad(format!("operator rates sum to {sum}, expected 1"));
        }
        if self.version == Version::V1 && r.uncross != 0.0 {
            return bad("version 1 does not use the uncrossing mutation; its rate must be 0".into());
        }
        if self.population_multiplier == 0 {
            return bad("population multiplier must be >= 1".into());
        }
        let (num, den) = self.children_fraction;
        if den == 0 || num > den {
            return bad(format!("children fraction {num}/{den} must lie in [0, 1]"));
        }
        if self.restarts == 0 {
            return bad("restarts must be >= 1".into());
        }
        Ok(())
    }
}

/// One row of the per-generation trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStat {
    pub restart: usize,
    pub generation: usize,
    /// Best fitness archived so far in this restart.
    pub best_f: u32,
    /// Mean fitness of the current population.
    pub mean_f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best: Chromosome,
    pub best_fitness: FitnessBreakdown,
    /// Generations executed, summed over all restarts that ran.
    pub generations_used: usize,
    pub restarts_used: usize,
    pub wall_time: Duration,
    pub generation_log: Option<Vec<GenerationStat>>,
}

impl RunResult {
    /// Equality on everything except wall time.
    pub fn same_outcome(&self, other: &RunResult) -> bool {
        self.best == other.best
            && self.best_fitness == other.best_fitness
            && self.generations_used == other.generations_used
            && self.restarts_used == other.restarts_used
            && self.generation_log == other.generation_log
    }
}

fn mean_f(pop: &[Individual]) -> f64 {
    pop.iter().map(|i| f64::from(i.fitness.f())).sum::<f64>() / pop.len() as f64
}

/// Keeps `archive` at the first individual seen with the lowest fitness.
fn archive_best<'a>(archive: &mut Option<Individual>, candidates: impl IntoIterator<Item = &'a Individual>) {
    for c in candidates {
        let better = archive.as_ref().is_none_or(|a| c.fitness.f() < a.fitness.f());
        if better {
            *archive = Some(c.clone());
        }
    }
}

/// Runs the generational loop `config.restarts` times (stopping early once a
/// crossing-free cycle is found) and returns the best cycle seen.
pub fn run_ga(instance: &Instance, config: &GaConfig) -> Result<RunResult, GaError> {
    run_ga_with_initial(instance, config, &[])
}

/// Like [`run_ga`], but the first restart's initial population starts with
/// `planted` (the remaining slots stay random).
pub fn run_ga_with_initial(
    instance: &Instance,
    config: &GaConfig,
    planted: &[Chromosome],
) -> Result<RunResult, GaError> {
    config.check()?;
    if let Some(bad) = planted.iter().find(|c| c.len() != instance.n()) {
        return Err(GaError::InvalidChromosome(format!(
            "planted chromosome of length {} for {} points",
            bad.len(),
            instance.n()
        )));
    }
    let eval = Evaluator::new(instance)?;
    let start = Instant::now();
    let n = instance.n();
    let pop_size = config.population_size(n);
    if pop_size < 2 {
        return Err(GaError::InvalidConfig(format!("population of {pop_size} is too small")));
    }

    let mut overall: Option<Individual> = None;
    let mut generations_used = 0;
    let mut restarts_used = 0;
    let mut trace = config.record_log.then(Vec::new);

    for restart in 0..config.restarts {
        restarts_used += 1;
        let mut rng = rng_from(derive_seed(config.seed, &[restart as u64]));
        let mut initial = init_population(instance, pop_size, &mut rng);
        if restart == 0 {
            for (slot, c) in initial.iter_mut().zip(planted) {
                *slot = c.clone();
            }
        }
        let mut population = eval.score_all(initial, config.parallel_fitness);
        let mut archive = None;
        archive_best(&mut archive, &population);
        let mut best_f = archive.as_ref().map_or(u32::MAX, |a: &Individual| a.fitness.f());
        if let Some(t) = trace.as_mut() {
            t.push(GenerationStat { restart, generation: 0, best_f, mean_f: mean_f(&population) });
        }

        let mut generation = 0;
        while best_f > 0 && generation < config.generation_cap {
            let children = produce_children(&eval, &population, config, &mut rng);
            archive_best(&mut archive, population.iter().chain(&children));
            population = select_next_generation(&population, &children, pop_size, &mut rng);
            generation += 1;
            best_f = archive.as_ref().map_or(u32::MAX, |a| a.fitness.f());
            if let Some(t) = trace.as_mut() {
                t.push(GenerationStat { restart, generation, best_f, mean_f: mean_f(&population) });
            }
        }
        generations_used += generation;

        let restart_best = archive.expect("population is non-empty");
        archive_best(&mut overall, std::iter::once(&restart_best));
        if best_f == 0 {
            break;
        }
    }

    let best = overall.expect("at least one restart ran");
    let verified = fitness(instance, &best.chromosome)?;
    if verified != best.fitness {
        return Err(GaError::Internal(format!(
            "archived fitness {} disagrees with recomputation {}",
            best.fitness, verified
        )));
    }
    Ok(RunResult {
        best: best.chromosome,
        best_fitness: verified,
        generations_used,
        restarts_used,
        wall_time: start.elapsed(),
        generation_log: trace,
    })
}
