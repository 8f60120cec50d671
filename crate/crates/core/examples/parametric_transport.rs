//! Individuals described by Gaussian laws on a grid, indexed by their mean.
//!
//! Counts over laws and counts over parameters carry the same information,
//! so moments can be computed on either side.

use std::sync::Arc;

use popsrep::laws::Tolerances;
use popsrep::parametric::{
    gaussian_grid_family, moment_transport_check, pgfl_on_parameters, pull_to_parameters, push_to_laws, NumericGrid,
};
use popsrep::representation::{pgfl, DiscreteRepresentationLaw};
use popsrep::Result;

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let grid = NumericGrid::uniform(-6.0, 6.0, 49, true)?;
    let fam = gaussian_grid_family(&[-1.0, 0.5, 2.0], 0.6, &grid, tol)?;
    let states = Arc::clone(grid.state_space());

    // One or two individuals near -1, and maybe one near 2.
    let d = DiscreteRepresentationLaw::new(
        &states,
        vec![fam.law(0).clone(), fam.law(2).clone()],
        [(vec![1u64, 0], 0.3), (vec![2, 0], 0.2), (vec![1, 1], 0.4), (vec![2, 1], 0.1)],
        tol,
    )?;

    let n = pull_to_parameters(&d, &fam)?;
    for (mu, m) in n.iter() {
        let at: Vec<String> = mu.iter().map(|(&t, k)| format!("{k} at {}", fam.parameter(t)[0])).collect();
        println!("{m:.2}: {}", at.join(", "));
    }
    println!("round trip preserves the law: {}", push_to_laws(&n, &fam)?.equivalent(&d));

    for power in 1..=3 {
        let (on_laws, on_params) = moment_transport_check(&d, &fam, &[0], power)?;
        println!("E[(count near -1)^{power}]: {on_laws:.4} on laws, {on_params:.4} on parameters");
    }

    let right_half: Vec<_> = grid
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, x)| **x > 0.0)
        .map(|(i, _)| popsrep::population::StateId(i))
        .collect();
    let h = |p: &popsrep::laws::DiscreteLaw| 1.0 - p.mass(&right_half);
    println!(
        "P(no one right of 0) = {:.4} (laws) = {:.4} (parameters)",
        pgfl(&d, h)?,
        pgfl_on_parameters(&n, &fam, h)?
    );
    Ok(())
}
