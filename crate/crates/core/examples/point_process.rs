//! From a law on a population to a point process on the state space.
//!
//! `zeta` forgets who is who and keeps how many individuals follow each
//! law. Restricting to a union of blocks gives the law of the occupancy
//! counts there.

use std::collections::BTreeMap;
use std::sync::Arc;

use popsrep::combinatorics::Ident;
use popsrep::laws::{independent_law, DiscreteLaw, Tolerances};
use popsrep::population::{Population, StateId, StateSpace};
use popsrep::representation::{induced_point_process, pgfl, to_discrete, zeta, StochasticRepresentation};
use popsrep::Result;

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let states = Arc::new(StateSpace::with_empty(["x"])?);
    let pop = Arc::new(Population::from_blocks(vec![vec!["a", "b"], vec!["c"]])?);
    let present = DiscreteLaw::new(vec![0.9, 0.1], &tol)?;
    let faint = DiscreteLaw::new(vec![0.4, 0.6], &tol)?;
    let laws: BTreeMap<Ident, DiscreteLaw> = [("a", &present), ("b", &present), ("c", &faint)]
        .into_iter()
        .map(|(x, p)| (Ident::new(x), p.clone()))
        .collect();
    let law = independent_law(&pop, &states, &laws, tol)?;

    for (p, k) in zeta(&law)?.iter() {
        println!("{k} individual(s) with law {:?}", p.weights());
    }

    let pp = induced_point_process(&law, pop.individuals())?;
    let mut counts: Vec<(u64, f64)> = pp.iter().map(|(m, prob)| (m.get(&StateId(0)), prob)).collect();
    counts.sort_by_key(|(k, _)| *k);
    for (k, prob) in counts {
        println!("P({k} in x) = {prob:.4}");
    }
    println!("expected count in x: {:.3}", pp.expected_mass(&[StateId(0)]));

    let rep = StochasticRepresentation::new(&states, vec![(law, 1.0)], tol)?;
    let d = to_discrete(&rep)?;
    // h(p) = probability of staying out of x: the chance x is empty.
    let empty = pgfl(&d, |p| 1.0 - p.prob(StateId(0)))?;
    println!("P(no one in x) = {empty:.4}");
    Ok(())
}
