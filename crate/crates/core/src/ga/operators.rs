use rand::seq::SliceRandom;
use rand::Rng;

use super::run::{GaConfig, Rates};
use super::{Chromosome, Evaluator, GaError, Individual};
use crate::geom::raw_intersect;
use crate::instance::Instance;

/// Which operator produced a child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Crossover,
    Swap,
    Uncross,
}

/// `size` independent uniformly random cycles over the instance's points.
pub fn init_population<R: Rng>(instance: &Instance, size: usize, rng: &mut R) -> Vec<Chromosome> {
    let n = instance.n();
    (0..size)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            Chromosome::from_vec_unchecked(order)
        })
        .collect()
}

/// Single-point order-preserving crossover: the first `prefix_len` genes come
/// from `first`, the rest are the missing indices in `second`'s order.
pub fn crossover_at(
    first: &Chromosome,
    second: &Chromosome,
    prefix_len: usize,
) -> Result<Chromosome, GaError> {
    let n = first.len();
    if second.len() != n {
        return Err(GaError::InvalidChromosome(format!(
            "crossover parents differ in length ({n} vs {})",
            second.len()
        )));
    }
    if prefix_len > n {
        return Err(GaError::InvalidChromosome(format!(
            "crossover prefix {prefix_len} exceeds length {n}"
        )));
    }
    let mut taken = vec![false; n];
    let mut child = Vec::with_capacity(n);
    for &g in &first.order()[..prefix_len] {
        taken[g] = true;
        child.push(g);
    }
    child.extend(second.order().iter().copied().filter(|&g| !taken[g]));
    Ok(Chromosome::from_vec_unchecked(child))
}

/// Crossover at a cut drawn uniformly; the prefix copied from `first` has
/// between 0 and `n - 1` genes.
pub fn crossover<R: Rng>(
    first: &Chromosome,
    second: &Chromosome,
    rng: &mut R,
) -> Result<Chromosome, GaError> {
    let n = first.len().max(1);
    crossover_at(first, second, rng.gen_range(0..n))
}

/// Exchanges the genes at two positions.
pub fn swap_at(parent: &Chromosome, i: usize, j: usize) -> Chromosome {
    let mut order = parent.order().to_vec();
    order.swap(i, j);
    Chromosome::from_vec_unchecked(order)
}

/// Two-point mutation on two distinct uniformly drawn positions.
pub fn mutate_swap<R: Rng>(parent: &Chromosome, rng: &mut R) -> Chromosome {
    let n = parent.len();
    if n < 2 {
        return parent.clone();
    }
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    swap_at(parent, i, j)
}

/// All pairs `(i, j)`, `i < j`, of non-adjacent cycle edges that share a
/// point. Edge `k` joins positions `k` and `k + 1 (mod n)`.
pub fn find_crossing_edge_pairs(instance: &Instance, chrom: &Chromosome) -> Vec<(usize, usize)> {
    let order = chrom.order();
    let n = order.len();
    let pts = &instance.points;
    let at = |k: usize| pts[order[k % n]];
    let mut pairs = Vec::new();
    for i in 0..n {
        let last = if i == 0 { n.saturating_sub(1) } else { n };
        for j in (i + 2)..last {
            if raw_intersect(at(i), at(i + 1), at(j), at(j + 1)) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Replaces edges `i` and `j` (`i < j`, non-adjacent) with the two
/// reconnecting edges by reversing positions `i + 1 ..= j`.
pub fn uncross_pair(parent: &Chromosome, i: usize, j: usize) -> Chromosome {
    debug_assert!(i < j && j < parent.len());
    let mut order = parent.order().to_vec();
    order[i + 1..=j].reverse();
    Chromosome::from_vec_unchecked(order)
}

/// Removes one uniformly chosen crossing; falls back to [`mutate_swap`] when
/// the cycle has no crossing edge pair.
pub fn mutate_uncross<R: Rng>(instance: &Instance, parent: &Chromosome, rng: &mut R) -> Chromosome {
    let pairs = find_crossing_edge_pairs(instance, parent);
    match pairs.choose(rng) {
        Some(&(i, j)) => uncross_pair(parent, i, j),
        None => mutate_swap(parent, rng),
    }
}

pub fn choose_operator<R: Rng>(rates: &Rates, rng: &mut R) -> Operator {
    let u: f64 = rng.gen();
    if u < rates.crossover {
        Operator::Crossover
    } else if u < rates.crossover + rates.swap || rates.uncross <= 0.0 {
        Operator::Swap
    } else {
        Operator::Uncross
    }
}

/// Number of children bred from a population of `population` individuals.
pub(crate) fn child_count(config: &GaConfig, population: usize) -> usize {
    let (num, den) = config.children_fraction;
    population * num / den
}

/// Breeds one generation of children, each from exactly one operator, and
/// scores them. Children are drawn sequentially from `rng`; scoring may run
/// in parallel without affecting the result.
pub fn produce_children<R: Rng>(
    eval: &Evaluator<'_>,
    population: &[Individual],
    config: &GaConfig,
    rng: &mut R,
) -> Vec<Individual> {
    let count = child_count(config, population.len());
    let instance = eval.instance();
    let pick = |rng: &mut R| &population[rng.gen_range(0..population.len())].chromosome;
    let children: Vec<Chromosome> = (0..count)
        .map(|_| match choose_operator(&config.rates, rng) {
            Operator::Crossover => {
                let (first, second) = if population.len() >= 2 {
                    let a = rng.gen_range(0..population.len());
                    let mut b = rng.gen_range(0..population.len() - 1);
                    if b >= a {
                        b += 1;
                    }
                    (&population[a].chromosome, &population[b].chromosome)
                } else {
                    (&population[0].chromosome, &population[0].chromosome)
                };
                // Parents share one instance, so lengths always agree.
                crossover(first, second, rng).expect("equal-length parents")
            }
            Operator::Swap => mutate_swap(pick(rng), rng),
            Operator::Uncross => mutate_uncross(instance, pick(rng), rng),
        })
        .collect();
    eval.score_all(children, config.parallel_fitness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{cycle_length, raw_properly_cross, Point, Polygon};
    use crate::ga::Version;
    use crate::instance::{generate_instance, GenSpec};
    use crate::seed::rng_from;

    fn chrom(v: &[usize]) -> Chromosome {
        Chromosome::new(v.to_vec()).unwrap()
    }

    #[test]
    fn crossover_prefix_edge_cases() {
        let p1 = chrom(&[3, 1, 0, 2, 4]);
        let p2 = chrom(&[4, 2, 1, 3, 0]);
        assert_eq!(crossover_at(&p1, &p2, 0).unwrap(), p2);
        assert_eq!(crossover_at(&p1, &p2, 4).unwrap(), chrom(&[3, 1, 0, 2, 4]));
        assert_eq!(crossover_at(&p1, &p2, 2).unwrap(), chrom(&[3, 1, 4, 2, 0]));
        for k in 0..5 {
            assert_eq!(crossover_at(&p1, &p1, k).unwrap(), p1);
        }
    }

    #[test]
    fn crossover_length_mismatch() {
        assert!(crossover_at(&chrom(&[0, 1, 2]), &chrom(&[0, 1, 2, 3]), 1).is_err());
    }

    #[test]
    fn swap_is_involution() {
        let p = chrom(&[0, 1, 2, 3, 4, 5]);
        let once = swap_at(&p, 1, 3);
        assert_eq!(once, chrom(&[0, 3, 2, 1, 4, 5]));
        assert_eq!(swap_at(&once, 1, 3), p);
    }

    #[test]
    fn swap_changes_exactly_two_positions() {
        let mut rng = rng_from(3);
        let p = Chromosome::identity(7);
        for _ in 0..500 {
            let c = mutate_swap(&p, &mut rng);
            let diff = p.order().iter().zip(c.order()).filter(|(a, b)| a != b).count();
            assert_eq!(diff, 2);
        }
    }

    fn convex_instance() -> Instance {
        let poly = Polygon::new(vec![
            Point::new(-5, -5),
            Point::new(25, -5),
            Point::new(25, 25),
            Point::new(-5, 25),
        ])
        .unwrap();
        let hull = [(20, 10), (17, 17), (10, 20), (3, 17), (0, 10), (3, 3), (10, 0), (17, 3)];
        Instance::new(poly, hull.iter().map(|&p| p.into()).collect()).unwrap()
    }

    #[test]
    fn crossing_pairs_on_convex_points() {
        let inst = convex_instance();
        assert!(find_crossing_edge_pairs(&inst, &Chromosome::identity(8)).is_empty());
        // Hull positions 0,1,5,4,3,2,6,7: edges 1 and 5 are the only crossing pair.
        let tangled = chrom(&[0, 1, 5, 4, 3, 2, 6, 7]);
        assert_eq!(find_crossing_edge_pairs(&inst, &tangled), vec![(1, 5)]);
        let mut rng = rng_from(0);
        assert_eq!(mutate_uncross(&inst, &tangled, &mut rng), Chromosome::identity(8));
    }

    #[test]
    fn uncross_on_wrap_edge() {
        let inst = convex_instance();
        // Edge 7 (position 7 -> 0) crosses edge 5.
        let tangled = chrom(&[0, 1, 2, 3, 4, 5, 7, 6]);
        let pairs = find_crossing_edge_pairs(&inst, &tangled);
        assert_eq!(pairs, vec![(5, 7)]);
        let child = uncross_pair(&tangled, 5, 7);
        assert!(find_crossing_edge_pairs(&inst, &child).is_empty());
    }

    #[test]
    fn uncross_falls_back_to_swap() {
        let inst = convex_instance();
        let p = Chromosome::identity(8);
        let mut a = rng_from(9);
        let mut b = rng_from(9);
        for _ in 0..50 {
            assert_eq!(mutate_uncross(&inst, &p, &mut a), mutate_swap(&p, &mut b));
        }
    }

    #[test]
    fn uncross_shortens_random_cycles() {
        let mut rng = rng_from(1234);
        let mut checked = 0;
        for seed in 0..200 {
            let inst = generate_instance(&GenSpec::new(10, 12, seed)).unwrap();
            let pop = init_population(&inst, 3, &mut rng);
            for c in pop {
                for (i, j) in find_crossing_edge_pairs(&inst, &c) {
                    let o = c.order();
                    let pt = |k: usize| inst.points[o[k % o.len()]];
                    if !raw_properly_cross(pt(i), pt(i + 1), pt(j), pt(j + 1)) {
                        continue;
                    }
                    let child = uncross_pair(&c, i, j);
                    let before = cycle_length(&inst.points, c.order()).unwrap();
                    let after = cycle_length(&inst.points, child.order()).unwrap();
                    assert!(after < before);
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn operator_rates_respected() {
        let mut rng = rng_from(77);
        let rates = Rates::new(0.8, 0.2, 0.0);
        let mut counts = [0usize; 3];
        let trials = 10_000;
        for _ in 0..trials {
            counts[choose_operator(&rates, &mut rng) as usize] += 1;
        }
        assert_eq!(counts[2], 0);
        let sigma = (trials as f64 * 0.8 * 0.2).sqrt();
        assert!((counts[0] as f64 - 0.8 * trials as f64).abs() < 3.0 * sigma, "{counts:?}");
    }

    #[test]
    fn child_count_is_third_of_population() {
        let inst = generate_instance(&GenSpec::new(10, 20, 4)).unwrap();
        let eval = Evaluator::new(&inst).unwrap();
        let config = GaConfig::for_version(Version::V2, 1);
        let mut rng = rng_from(1);
        let pop: Vec<Individual> = init_population(&inst, 60, &mut rng)
            .into_iter()
            .map(|c| eval.score(c))
            .collect();
        let kids = produce_children(&eval, &pop, &config, &mut rng);
        assert_eq!(kids.len(), 20);
        for k in &kids {
            assert!(k.chromosome.is_valid());
            assert_eq!(k.fitness, eval.evaluate(&k.chromosome));
        }
    }
}
