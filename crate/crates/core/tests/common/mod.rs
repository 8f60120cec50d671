#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use popsrep::laws::{independent_law, DiscreteLaw, PopulationLaw, Tolerances};
use popsrep::population::{AssignmentFunction, Population, StateId, StateSpace};
use popsrep::representation::DiscreteRepresentationLaw;
use rand::Rng;

/// Restricted growth strings of length `n`: one per set partition.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            if prefix.is_empty() && b > 0 {
                break;
            }
            prefix.push(b);
            let next = if prefix.len() == 1 { 0 } else { max.max(b) };
            go(prefix, n, next, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, 0, &mut out);
    out
}

pub fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn population(prefix: &str, labels: &[usize]) -> Arc<Population> {
    let names = ids(prefix, labels.len());
    let nblocks = labels.iter().max().map_or(0, |m| m + 1);
    let blocks: Vec<Vec<String>> = (0..nblocks)
        .map(|b| {
            names
                .iter()
                .zip(labels)
                .filter(|(_, l)| **l == b)
                .map(|(x, _)| x.clone())
                .collect()
        })
        .collect();
    if blocks.is_empty() {
        return Arc::new(Population::distinguishable(Vec::<String>::new()));
    }
    Arc::new(Population::from_blocks(blocks).unwrap())
}

/// Every population on at most `max_n` individuals, with its block labels.
pub fn all_populations(prefix: &str, max_n: usize) -> Vec<(Arc<Population>, Vec<usize>)> {
    (0..=max_n)
        .flat_map(|n| set_partitions(n).into_iter())
        .map(|l| (population(prefix, &l), l))
        .collect()
}

pub fn states(k: usize) -> Arc<StateSpace> {
    Arc::new(StateSpace::proper_only((0..k).map(|i| format!("s{i}"))).unwrap())
}

pub fn value_vectors(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..k).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn function(pop: &Arc<Population>, s: &Arc<StateSpace>, values: &[usize]) -> AssignmentFunction {
    AssignmentFunction::from_values(Arc::clone(pop), Arc::clone(s), values.iter().map(|&v| StateId(v)).collect())
        .unwrap()
}

/// Per-block multisets of values.
pub fn block_multisets(labels: &[usize], values: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (l, v) in labels.iter().zip(values) {
        m.entry(*l).or_default().push(*v);
    }
    m.values_mut().for_each(|v| v.sort_unstable());
    m
}

/// Relation induced by `tau`, by per-block multiset comparison.
pub fn oracle_rho(labels: &[usize], f: &[usize], g: &[usize]) -> bool {
    block_multisets(labels, f) == block_multisets(labels, g)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

pub fn palette(k: usize) -> Vec<DiscreteLaw> {
    let mut out: Vec<DiscreteLaw> = (0..k).map(|s| DiscreteLaw::point_mass(k, StateId(s))).collect();
    out.push(DiscreteLaw::uniform(k));
    if k == 2 {
        out.push(DiscreteLaw::new(vec![0.3, 0.7], &Tolerances::default()).unwrap());
    }
    out
}

/// Every admissible independent law with block laws from the palette.
pub fn palette_laws(prefix: &str, max_n: usize, k: usize) -> Vec<(PopulationLaw, Vec<usize>, Vec<usize>)> {
    let s = states(k);
    let pal = palette(k);
    let mut out = Vec::new();
    for (pop, labels) in all_populations(prefix, max_n) {
        let nb = labels.iter().max().map_or(0, |m| m + 1);
        for code in 0..pal.len().pow(nb as u32) {
            let block_law: Vec<usize> = (0..nb).map(|b| code / pal.len().pow(b as u32) % pal.len()).collect();
            let per_individual: Vec<usize> = labels.iter().map(|l| block_law[*l]).collect();
            let family = pop
                .individuals()
                .iter()
                .cloned()
                .zip(per_individual.iter().map(|&i| pal[i].clone()))
                .collect();
            let law = independent_law(&pop, &s, &family, Tolerances::default()).unwrap();
            out.push((law, labels.clone(), per_individual));
        }
    }
    out
}

pub fn random_law(rng: &mut impl Rng, k: usize) -> DiscreteLaw {
    DiscreteLaw::normalized((0..k).map(|_| rng.gen_range(0.01..1.0)).collect()).unwrap()
}

/// A random multiplicity-vector law with `atoms` atom laws on `k` states.
pub fn random_representation(
    rng: &mut impl Rng,
    atoms: usize,
    k: usize,
    support: usize,
    max_count: u64,
) -> DiscreteRepresentationLaw {
    let laws: Vec<DiscreteLaw> = (0..atoms).map(|_| random_law(rng, k)).collect();
    let raw: Vec<(Vec<u64>, f64)> = (0..support)
        .map(|_| {
            (
                (0..atoms).map(|_| rng.gen_range(0..=max_count)).collect(),
                rng.gen_range(0.01..1.0),
            )
        })
        .collect();
    let total: f64 = raw.iter().map(|(_, m)| m).sum();
    let c = raw.into_iter().map(|(n, m)| (n, m / total));
    DiscreteRepresentationLaw::new(&states(k), laws, c, Tolerances { mass: 1e-9, law: 1e-9 }).unwrap()
}
