//! Two individuals in a two-state space. When both follow one uniform law
//! they land together half the time; with point masses on different states
//! they never do.

use std::sync::Arc;

use popsrep::laws::{DiscreteLaw, Tolerances};
use popsrep::population::{StateId, StateSpace};
use popsrep::representation::{sample_seeded, DiscreteRepresentationLaw};
use popsrep::Result;

fn shared_frequency(d: &DiscreteRepresentationLaw, draws: usize) -> Result<f64> {
    let samples = sample_seeded(d, 20240611, draws)?;
    let together = samples.iter().filter(|s| s.states.support_len() == 1).count();
    Ok(together as f64 / draws as f64)
}

fn main() -> Result<()> {
    let states = Arc::new(StateSpace::proper_only(["x", "x'"])?);
    let tol = Tolerances::default();
    let draws = 100_000;

    let shared = DiscreteRepresentationLaw::new(&states, vec![DiscreteLaw::uniform(2)], [(vec![2u64], 1.0)], tol)?;
    println!("one shared law:   together in {:.4} of draws", shared_frequency(&shared, draws)?);

    let apart = DiscreteRepresentationLaw::new(
        &states,
        vec![DiscreteLaw::point_mass(2, StateId(0)), DiscreteLaw::point_mass(2, StateId(1))],
        [(vec![1u64, 1], 1.0)],
        tol,
    )?;
    println!("two point masses: together in {:.4} of draws", shared_frequency(&apart, draws)?);
    Ok(())
}
