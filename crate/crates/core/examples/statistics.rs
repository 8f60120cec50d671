//! Moments of a representation with two individual laws and a random
//! number of individuals following each.

use std::sync::Arc;

use popsrep::laws::{DiscreteLaw, Tolerances};
use popsrep::population::{StateId, StateSpace};
use popsrep::representation::{
    collapsed_moments, collapsed_moments_direct, mean_and_variance_on_laws, pgf, DiscreteRepresentationLaw,
};
use popsrep::Result;

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let states = Arc::new(StateSpace::with_empty(["x", "x'"])?);
    let laws = vec![DiscreteLaw::new(vec![0.7, 0.2, 0.1], &tol)?, DiscreteLaw::new(vec![0.1, 0.6, 0.3], &tol)?];
    let c = (0..=3u64).map(|k| (vec![k, 3 - k], 0.25));
    let d = DiscreteRepresentationLaw::new(&states, laws, c, tol)?;

    let (m, v) = mean_and_variance_on_laws(&d, &[0])?;
    println!("individuals following the first law: mean {m}, variance {v}");
    println!("means {:?}", d.multiplicity_means());
    println!("covariance {:?}", d.multiplicity_covariance());

    let region = [StateId(0)];
    let (m, v) = collapsed_moments(&d, &region);
    let (md, vd) = collapsed_moments_direct(&d, &region);
    println!("collapsed on x: mean {m:.4}, variance {v:.4} (direct {md:.4}, {vd:.4})");

    // Derivative of the generating function at 1 recovers the mean multiplicity.
    let h = 1e-5;
    let slope = (pgf(&d, &[1.0, 1.0])? - pgf(&d, &[1.0 - h, 1.0])?) / h;
    println!("dG/dz_0 at 1 ~ {slope:.4}");
    Ok(())
}
