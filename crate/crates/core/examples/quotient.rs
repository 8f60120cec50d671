//! Which assignments of individuals to states can be told apart.
//!
//! Two individuals in one block of `tau` cannot be distinguished, so swapping
//! their states yields the same configuration. Putting them in separate blocks
//! makes every function its own class.

use std::sync::Arc;

use popsrep::combinatorics::Bounds;
use popsrep::population::{function_space, rho_classes, rho_star_quotient, xi, Population, StateSpace};
use popsrep::Result;

fn show(name: &str, pop: Population, states: &Arc<StateSpace>) -> Result<()> {
    let pop = Arc::new(pop);
    let classes = rho_classes(&pop, states, &Bounds::default())?;
    println!("{name}: {} classes", classes.len());
    for class in &classes {
        let counts: Vec<String> = xi(&class[0])
            .iter()
            .map(|(s, k)| format!("{}:{k}", states.label(*s)))
            .collect();
        println!("  {} function(s), occupancy {}", class.len(), counts.join(" "));
    }
    Ok(())
}

fn main() -> Result<()> {
    let states = Arc::new(StateSpace::proper_only(["x", "x'"])?);
    show("indistinguishable pair", Population::indistinguishable(["a", "b"]), &states)?;
    show("distinguishable pair", Population::distinguishable(["a", "b"]), &states)?;

    // Quotienting individually labelled pairs by relabelling every individual
    // at once collapses pairs that describe different people.
    let pairs: Vec<_> = [["a", "b"], ["c", "d"]]
        .into_iter()
        .map(|ids| Arc::new(Population::indistinguishable(ids)))
        .collect();
    let mut functions = Vec::new();
    for pop in &pairs {
        functions.extend(function_space(pop, &states, &Bounds::default())?);
    }
    let naive = rho_star_quotient(&functions, &Bounds::default())?;
    println!("naive relabelling over two pairs: {} classes of {} functions", naive.len(), functions.len());
    Ok(())
}
