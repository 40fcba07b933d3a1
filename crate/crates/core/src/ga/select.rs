use rand::Rng;

use super::Individual;

/// Roulette weights for a minimisation problem: `(f_max - f) + 1`, so the
/// worst individual keeps weight 1 and equal fitness means equal weight.
pub fn roulette_weights(pool: &[&Individual]) -> Vec<u64> {
    let worst = pool.iter().map(|i| i.fitness.f()).max().unwrap_or(0);
    pool.iter()
        .map(|i| u64::from(worst - i.fitness.f()) + 1)
        .collect()
}

/// Draws `target_size` individuals with replacement from parents and children
/// combined, each with probability proportional to its roulette weight.
pub fn select_next_generation<R: Rng>(
    parents: &[Individual],
    children: &[Individual],
    target_size: usize,
    rng: &mut R,
) -> Vec<Individual> {
    let pool: Vec<&Individual> = parents.iter().chain(children).collect();
    if pool.is_empty() {
        return Vec::new();
    }
    let cumulative: Vec<u64> = roulette_weights(&pool)
        .into_iter()
        .scan(0u64, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().expect("non-empty pool");
    (0..target_size)
        .map(|_| {
            let ticket = rng.gen_range(0..total);
            let slot = cumulative.partition_point(|&c| c <= ticket);
            pool[slot].clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::{Chromosome, FitnessBreakdown};
    use crate::seed::rng_from;

    fn ind(tag: usize, f: u32) -> Individual {
        let mut order: Vec<usize> = (0..4).collect();
        order.rotate_left(tag % 4);
        Individual {
            chromosome: Chromosome::new(order).unwrap(),
            fitness: FitnessBreakdown::new(f, 0),
        }
    }

    #[test]
    fn weights_flip_fitness() {
        let a = ind(0, 0);
        let b = ind(1, 4);
        let c = ind(2, 2);
        assert_eq!(roulette_weights(&[&a, &b, &c]), vec![5, 1, 3]);
        assert_eq!(roulette_weights(&[&b, &b]), vec![1, 1]);
    }

    #[test]
    fn output_size_matches_target() {
        let mut rng = rng_from(5);
        let parents = vec![ind(0, 3), ind(1, 1)];
        let children = vec![ind(2, 7)];
        for target in [1, 2, 9, 40] {
            assert_eq!(select_next_generation(&parents, &children, target, &mut rng).len(), target);
        }
        assert_eq!(select_next_generation(&parents, &[], 3, &mut rng).len(), 3);
    }

    #[test]
    fn five_to_one_ratio() {
        let mut rng = rng_from(42);
        let parents = vec![ind(0, 0)];
        let children = vec![ind(1, 4)];
        let draws = 100_000;
        let picked = select_next_generation(&parents, &children, draws, &mut rng);
        let best = picked.iter().filter(|i| i.fitness.f() == 0).count() as f64;
        let p = 5.0 / 6.0;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((best - p * draws as f64).abs() < 3.0 * sigma, "best={best}");
    }

    #[test]
    fn equal_fitness_is_uniform() {
        let mut rng = rng_from(8);
        let pool: Vec<Individual> = (0..4).map(|t| ind(t, 2)).collect();
        let draws = 40_000;
        let picked = select_next_generation(&pool, &[], draws, &mut rng);
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        for member in &pool {
            let hits = picked.iter().filter(|i| i.chromosome == member.chromosome).count() as f64;
            assert!((hits - draws as f64 / 4.0).abs() < 3.0 * sigma);
        }
    }
}
