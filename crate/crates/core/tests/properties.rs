mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use popsrep::combinatorics::{partition_join, partition_refines, Ident, Partition};
use popsrep::laws::{independent_law, DiscreteLaw, Tolerances};
use popsrep::parametric::{pgfl_on_parameters, pull_to_parameters, push_to_laws, ParametricFamily};
use popsrep::population::{Population, StateId};
use popsrep::representation::{
    cardinality_moment, collapsed_moments, collapsed_moments_direct, mean_and_variance_on_laws, pgf, pgfl,
    structure_moment, DiscreteRepresentationLaw, StochasticRepresentation,
};
use proptest::prelude::*;

fn law_strategy(k: usize) -> impl Strategy<Value = DiscreteLaw> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|w| DiscreteLaw::normalized(w).unwrap())
}

prop_compose! {
    fn representation()(atoms in 1usize..=4)
        (laws in prop::collection::vec(law_strategy(3), atoms),
         c in prop::collection::vec((prop::collection::vec(0u64..=4, atoms), 0.01f64..1.0), 1..=20))
        -> DiscreteRepresentationLaw {
        let total: f64 = c.iter().map(|(_, m)| m).sum();
        DiscreteRepresentationLaw::new(
            &common::states(3),
            laws,
            c.into_iter().map(|(n, m)| (n, m / total)),
            Tolerances { mass: 1e-9, law: 1e-9 },
        ).unwrap()
    }
}

fn partition_of(ids: &[Ident], labels: &[usize]) -> Partition {
    let mut blocks: BTreeMap<usize, Vec<Ident>> = BTreeMap::new();
    for (x, l) in ids.iter().zip(labels) {
        blocks.entry(*l).or_default().push(x.clone());
    }
    Partition::new(blocks.into_values().collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pgfl_matches_pgf(d in representation(), seed in prop::collection::vec(0.0f64..=1.0, 4)) {
        let z = &seed[..d.num_atoms()];
        let g = pgfl(&d, |p| z[d.atom_index(p).unwrap()]).unwrap();
        prop_assert!((g - pgf(&d, z).unwrap()).abs() <= 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&g));
    }

    #[test]
    fn collapsed_closed_form_matches_direct(d in representation(), mask in 0u8..8) {
        let region: Vec<StateId> = (0..3).filter(|i| mask >> i & 1 == 1).map(StateId).collect();
        let (m, v) = collapsed_moments(&d, &region);
        let (md, vd) = collapsed_moments_direct(&d, &region);
        prop_assert!((m - md).abs() <= 1e-9);
        prop_assert!((v - vd).abs() <= 1e-9);
        prop_assert!(v >= -1e-9);
    }

    #[test]
    fn law_counts_are_additive_with_nonnegative_variance(d in representation(), mask in 0u8..16) {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..d.num_atoms()).partition(|t| mask >> t & 1 == 1);
        let (ma, va) = mean_and_variance_on_laws(&d, &a).unwrap();
        let (mb, vb) = mean_and_variance_on_laws(&d, &b).unwrap();
        let all: Vec<usize> = (0..d.num_atoms()).collect();
        let (m, _) = mean_and_variance_on_laws(&d, &all).unwrap();
        prop_assert!((ma + mb - m).abs() <= 1e-9);
        prop_assert!(va >= 0.0 && vb >= 0.0);
    }

    #[test]
    fn whole_space_collapses_to_cardinality(d in representation()) {
        let all: Vec<StateId> = (0..3).map(StateId).collect();
        let (m, v) = collapsed_moments(&d, &all);
        let mean = d.expect(|n| n.total() as f64);
        let var = d.expect(|n| (n.total() as f64 - mean).powi(2));
        prop_assert!((m - mean).abs() <= 1e-9);
        prop_assert!((v - var).abs() <= 1e-9);
    }

    #[test]
    fn transport_round_trips(d in representation(), extra in prop::collection::vec(law_strategy(3), 0..3)) {
        let mut members: Vec<(Vec<f64>, DiscreteLaw)> =
            d.atom_laws().iter().enumerate().map(|(i, p)| (vec![i as f64], p.clone())).collect();
        for (j, p) in extra.into_iter().enumerate() {
            members.push((vec![(10 + j) as f64], p));
        }
        let fam = ParametricFamily::new(d.state_space(), members, *d.tolerances()).unwrap();
        let n = pull_to_parameters(&d, &fam).unwrap();
        let back = push_to_laws(&n, &fam).unwrap();
        prop_assert!(back.equivalent(&d));
        prop_assert_eq!(pull_to_parameters(&back, &fam).unwrap(), n.clone());
        let h = |p: &DiscreteLaw| p.weights()[0];
        let lhs = pgfl(&d, h).unwrap();
        prop_assert!((lhs - pgfl_on_parameters(&n, &fam, h).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn blocks_never_outnumber_individuals(
        atoms in prop::collection::vec((0usize..52, 0.01f64..1.0), 1..6),
    ) {
        let s = common::states(2);
        let tol = Tolerances::default();
        let total: f64 = atoms.iter().map(|(_, m)| m).sum();
        let mut support = Vec::new();
        let mut relabelled = Vec::new();
        for (code, m) in &atoms {
            let n = code % 4;
            let parts = common::set_partitions(n);
            let labels = &parts[code % parts.len().max(1)];
            for (prefix, out) in [("x", &mut support), ("y", &mut relabelled)] {
                let pop = common::population(prefix, labels);
                let fam = pop.individuals().iter().map(|x| (x.clone(), DiscreteLaw::uniform(2))).collect();
                out.push((independent_law(&pop, &s, &fam, tol).unwrap(), m / total));
            }
        }
        let r = StochasticRepresentation::new(&s, support, Tolerances { mass: 1e-9, law: 1e-9 }).unwrap();
        let r2 = StochasticRepresentation::new(&s, relabelled, Tolerances { mass: 1e-9, law: 1e-9 }).unwrap();
        prop_assert!(structure_moment(&r, 1) <= cardinality_moment(&r, 1) + 1e-12);
        prop_assert_eq!(r.structure_marginal(), r2.structure_marginal());
    }

    #[test]
    fn join_is_least_upper_bound(a in prop::collection::vec(0usize..4, 4), b in prop::collection::vec(0usize..4, 4)) {
        let ids: Vec<Ident> = common::ids("x", 4).into_iter().map(Ident::new).collect();
        let (pa, pb) = (partition_of(&ids, &a), partition_of(&ids, &b));
        let j = partition_join(&[pa.clone(), pb.clone()]).unwrap();
        prop_assert!(partition_refines(&pa, &j).unwrap());
        prop_assert!(partition_refines(&pb, &j).unwrap());
        for labels in common::set_partitions(4) {
            let c = partition_of(&ids, &labels);
            if partition_refines(&pa, &c).unwrap() && partition_refines(&pb, &c).unwrap() {
                prop_assert!(partition_refines(&j, &c).unwrap());
            }
        }
    }
}

#[test]
fn structure_marginal_ignores_labels() {
    let s = common::states(2);
    let tol = Tolerances::default();
    let mk = |blocks: Vec<Vec<&str>>| {
        let pop = Arc::new(Population::from_blocks(blocks).unwrap());
        let fam = pop.individuals().iter().map(|x| (x.clone(), DiscreteLaw::uniform(2))).collect();
        independent_law(&pop, &s, &fam, tol).unwrap()
    };
    let r = StochasticRepresentation::new(
        &s,
        vec![(mk(vec![vec!["a", "b"], vec!["c"]]), 0.5), (mk(vec![vec!["q"], vec!["r", "p"]]), 0.5)],
        tol,
    )
    .unwrap();
    assert_eq!(r.structure_marginal(), BTreeMap::from([(vec![2, 1], 1.0)]));
}
