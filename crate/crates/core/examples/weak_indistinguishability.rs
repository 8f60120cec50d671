//! Individuals that are labelled apart but share a law are still
//! indistinguishable in distribution.

use std::collections::BTreeMap;
use std::sync::Arc;

use popsrep::combinatorics::{Bounds, Ident};
use popsrep::laws::{canonicalize, independent_law, weak_indistinguishability_report, DiscreteLaw, Tolerances};
use popsrep::population::{Population, StateSpace};
use popsrep::Result;

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let states = Arc::new(StateSpace::with_empty(["x", "y"])?);
    let pop = Arc::new(Population::distinguishable(["a", "b", "c"]));
    let shared = DiscreteLaw::new(vec![0.5, 0.3, 0.2], &tol)?;
    let odd = DiscreteLaw::new(vec![0.1, 0.1, 0.8], &tol)?;
    let laws: BTreeMap<Ident, DiscreteLaw> = [("a", &shared), ("b", &odd), ("c", &shared)]
        .into_iter()
        .map(|(x, p)| (Ident::new(x), p.clone()))
        .collect();
    let law = independent_law(&pop, &states, &laws, tol)?;

    let report = weak_indistinguishability_report(&law, &Bounds::default())?;
    println!("invariant partitions: {}", report.valid.len());
    for block in report.eta.blocks() {
        let names: Vec<&str> = block.iter().map(Ident::as_str).collect();
        println!("  weakly indistinguishable: {{{}}}", names.join(", "));
    }

    let class = canonicalize(&law, &Bounds::default())?;
    println!("canonical structure {:?}", class.structure);
    Ok(())
}
