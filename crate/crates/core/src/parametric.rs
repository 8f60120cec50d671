//! Parametrised families of individual laws and the transport of point
//! processes between the parameter set and the space of laws.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::laws::{DiscreteLaw, Tolerances};
use crate::population::{CountingMeasure, StateSpace};
use crate::representation::{DiscreteRepresentationLaw, MultiplicityVector};

/// Maximum probability mass a grid discretisation may lose to truncation.
pub const MAX_TRUNCATION_LOSS: f64 = 1e-6;

/// A finite identifiable family `theta -> p_theta` with `theta` in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricFamily {
    states: Arc<StateSpace>,
    dim: usize,
    params: Vec<Vec<f64>>,
    laws: Vec<DiscreteLaw>,
    tol: Tolerances,
}

impl ParametricFamily {
    pub fn new(
        states: &Arc<StateSpace>,
        members: Vec<(Vec<f64>, DiscreteLaw)>,
        tol: Tolerances,
    ) -> Result<Self> {
        let dim = members.first().map_or(0, |(t, _)| t.len());
        let mut params = Vec::with_capacity(members.len());
        let mut laws: Vec<DiscreteLaw> = Vec::with_capacity(members.len());
        for (theta, p) in members {
            if theta.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: theta.len(),
                });
            }
            if p.num_states() != states.len() {
                return Err(Error::Dimension {
                    expected: states.len(),
                    got: p.num_states(),
                });
            }
            if params.contains(&theta) {
                return Err(Error::Identifiability(format!("parameter {theta:?} listed twice")));
            }
            if let Some(j) = laws.iter().position(|q| q.tv_distance(&p) <= tol.law) {
                return Err(Error::Identifiability(format!(
                    "parameters {:?} and {theta:?} map to the same law",
                    params[j]
                )));
            }
            params.push(theta);
            laws.push(p);
        }
        Ok(ParametricFamily {
            states: Arc::clone(states),
            dim,
            params,
            laws,
            tol,
        })
    }

    /// Builds the family by evaluating `law_map` on each parameter.
    pub fn from_fn(
        states: &Arc<StateSpace>,
        params: Vec<Vec<f64>>,
        law_map: impl Fn(&[f64]) -> Result<DiscreteLaw>,
        tol: Tolerances,
    ) -> Result<Self> {
        let members = params
            .into_iter()
            .map(|t| law_map(&t).map(|p| (t, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, members, tol)
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn parameter(&self, theta: usize) -> &[f64] {
        &self.params[theta]
    }

    pub fn parameters(&self) -> &[Vec<f64>] {
        &self.params
    }

    /// `F(theta)`.
    pub fn law(&self, theta: usize) -> &DiscreteLaw {
        &self.laws[theta]
    }

    pub fn laws(&self) -> &[DiscreteLaw] {
        &self.laws
    }

    /// `F^{-1}(p)`: the unique parameter whose law is within `eps_p` of `p`.
    pub fn preimage(&self, p: &DiscreteLaw) -> Result<usize> {
        let mut hits = (0..self.len()).filter(|&t| self.laws[t].approx_eq(p, self.tol.law));
        match (hits.next(), hits.next()) {
            (Some(t), None) => Ok(t),
            (None, _) => Err(Error::Coverage(format!("law {:?} is outside the family", p.weights()))),
            (Some(a), Some(b)) => Err(Error::Identifiability(format!(
                "parameters {:?} and {:?} both match law {:?}",
                self.params[a],
                self.params[b],
                p.weights()
            ))),
        }
    }
}

/// A finitely supported point process on the parameter indices of a family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterProcess {
    dist: BTreeMap<CountingMeasure<usize>, f64>,
}

impl ParameterProcess {
    pub fn new(dist: impl IntoIterator<Item = (CountingMeasure<usize>, f64)>, tol: &Tolerances) -> Result<Self> {
        let mut out: BTreeMap<CountingMeasure<usize>, f64> = BTreeMap::new();
        for (mu, m) in dist {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidLaw(format!("mass {m} is not a probability")));
            }
            if m > 0.0 {
                *out.entry(mu).or_insert(0.0) += m;
            }
        }
        let total: f64 = out.values().sum();
        if (total - 1.0).abs() > tol.mass {
            return Err(Error::InvalidLaw(format!("process masses sum to {total}")));
        }
        Ok(ParameterProcess { dist: out })
    }

    /// The process with no points.
    pub fn zero() -> Self {
        ParameterProcess {
            dist: BTreeMap::from([(CountingMeasure::new(), 1.0)]),
        }
    }

    pub fn prob(&self, mu: &CountingMeasure<usize>) -> f64 {
        self.dist.get(mu).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CountingMeasure<usize>, f64)> {
        self.dist.iter().map(|(k, &v)| (k, v))
    }

    /// `E[N(B)^n]`.
    pub fn count_moment(&self, thetas: &[usize], n: u32) -> f64 {
        self.dist
            .iter()
            .map(|(mu, m)| m * (mu.mass_where(|t| thetas.contains(t)) as f64).powi(n as i32))
            .sum()
    }
}

/// `N = (F^{-1})_* M`.
pub fn pull_to_parameters(d: &DiscreteRepresentationLaw, fam: &ParametricFamily) -> Result<ParameterProcess> {
    let index: Vec<usize> = d
        .atom_laws()
        .iter()
        .map(|p| fam.preimage(p))
        .collect::<Result<_>>()?;
    let dist = d.c().iter().map(|(n, &m)| {
        let mut mu = CountingMeasure::new();
        for (&t, &k) in index.iter().zip(&n.0) {
            mu.add(t, k);
        }
        (mu, m)
    });
    ParameterProcess::new(dist, d.tolerances())
}

/// `F_* N`, with the whole family as the atom laws.
pub fn push_to_laws(n: &ParameterProcess, fam: &ParametricFamily) -> Result<DiscreteRepresentationLaw> {
    let c = n.iter().map(|(mu, m)| {
        let counts = (0..fam.len()).map(|t| mu.get(&t)).collect::<Vec<u64>>();
        (MultiplicityVector(counts), m)
    });
    DiscreteRepresentationLaw::new(&fam.states, fam.laws.clone(), c, fam.tol)
}

/// Both sides of `E[M(F[B])^n] = E[N(B)^n]`, computed independently.
pub fn moment_transport_check(
    d: &DiscreteRepresentationLaw,
    fam: &ParametricFamily,
    thetas: &[usize],
    n: u32,
) -> Result<(f64, f64)> {
    if let Some(&t) = thetas.iter().find(|&&t| t >= fam.len()) {
        return Err(Error::Precondition(format!("parameter index {t} out of range")));
    }
    let image: Vec<&DiscreteLaw> = thetas.iter().map(|&t| fam.law(t)).collect();
    let in_image: Vec<usize> = (0..d.num_atoms())
        .filter(|&a| image.iter().any(|p| p.approx_eq(&d.atom_laws()[a], fam.tol.law)))
        .collect();
    let left = d.expect(|nv| (nv.count_in(&in_image) as f64).powi(n as i32));
    let right = pull_to_parameters(d, fam)?.count_moment(thetas, n);
    Ok((left, right))
}

/// The p.g.fl. written on the parameter side, `E[prod_theta h(p_theta)^{N_theta}]`.
pub fn pgfl_on_parameters(
    n: &ParameterProcess,
    fam: &ParametricFamily,
    h: impl Fn(&DiscreteLaw) -> f64,
) -> Result<f64> {
    let hv: Vec<f64> = fam.laws.iter().map(&h).collect();
    if let Some(&v) = hv.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfRange(v));
    }
    Ok(n
        .iter()
        .map(|(mu, m)| m * mu.iter().map(|(&t, k)| hv[t].powi(k as i32)).product::<f64>())
        .sum())
}

/// Real coordinates attached to the proper states of a state space.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericGrid {
    states: Arc<StateSpace>,
    coords: Vec<f64>,
}

impl NumericGrid {
    /// `coords` must be strictly increasing, one per proper state.
    pub fn new(states: &Arc<StateSpace>, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != states.num_proper() {
            return Err(Error::Dimension {
                expected: states.num_proper(),
                got: coords.len(),
            });
        }
        if coords.is_empty() {
            return Err(Error::EmptyInput("numeric grid"));
        }
        if coords.iter().any(|x| !x.is_finite()) || coords.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStateSpace("grid must be finite and strictly increasing".into()));
        }
        Ok(NumericGrid {
            states: Arc::clone(states),
            coords,
        })
    }

    /// `n` evenly spaced points on `[lo, hi]`, labelled by their coordinate,
    /// optionally followed by the empty state.
    pub fn uniform(lo: f64, hi: f64, n: usize, with_empty: bool) -> Result<Self> {
        if n == 0 || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidStateSpace(format!("bad grid [{lo}, {hi}] with {n} points")));
        }
        let step = if n == 1 { 0.0 } else { (hi - lo) / (n - 1) as f64 };
        let coords: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        let labels: Vec<String> = coords.iter().map(|x| format!("{x}")).collect();
        let states = if with_empty {
            StateSpace::with_empty(labels)?
        } else {
            StateSpace::proper_only(labels)?
        };
        Self::new(&Arc::new(states), coords)
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Cell boundaries: midpoints between neighbours, half a spacing beyond
    /// the ends.
    pub fn cell_edges(&self) -> Vec<f64> {
        let x = &self.coords;
        if x.len() == 1 {
            return vec![x[0] - 0.5, x[0] + 0.5];
        }
        let mut edges = Vec::with_capacity(x.len() + 1);
        edges.push(x[0] - (x[1] - x[0]) / 2.0);
        edges.extend(x.windows(2).map(|w| (w[0] + w[1]) / 2.0));
        let k = x.len();
        edges.push(x[k - 1] + (x[k - 1] - x[k - 2]) / 2.0);
        edges
    }
}

/// Gaussian laws with standard deviation `sigma`, one per mean, integrated
/// over the grid cells and renormalised. The empty state gets no mass.
pub fn gaussian_grid_family(
    means: &[f64],
    sigma: f64,
    grid: &NumericGrid,
    tol: Tolerances,
) -> Result<ParametricFamily> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Precondition(format!("sigma must be positive, got {sigma}")));
    }
    let edges = grid.cell_edges();
    let total_states = grid.states.len();
    let law_map = |theta: &[f64]| -> Result<DiscreteLaw> {
        let normal = Normal::new(theta[0], sigma).map_err(|e| Error::Precondition(e.to_string()))?;
        let (lo, hi) = (edges[0], edges[edges.len() - 1]);
        let loss = normal.cdf(lo) + normal.sf(hi);
        if loss >= MAX_TRUNCATION_LOSS {
            return Err(Error::Coverage(format!(
                "mean {} loses mass {loss:e} outside the grid",
                theta[0]
            )));
        }
        let mut w: Vec<f64> = edges.windows(2).map(|e| normal.cdf(e[1]) - normal.cdf(e[0])).collect();
        w.resize(total_states, 0.0);
        DiscreteLaw::normalized(w)
    };
    let params = means.iter().map(|&m| vec![m]).collect();
    ParametricFamily::from_fn(&grid.states, params, law_map, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state_family() -> (Arc<StateSpace>, ParametricFamily) {
        let s = Arc::new(StateSpace::proper_only(["x", "x'"]).unwrap());
        let tol = Tolerances::default();
        let fam = ParametricFamily::new(
            &s,
            vec![
                (vec![1.0], DiscreteLaw::new(vec![0.8, 0.2], &tol).unwrap()),
                (vec![2.0], DiscreteLaw::new(vec![0.1, 0.9], &tol).unwrap()),
            ],
            tol,
        )
        .unwrap();
        (s, fam)
    }

    fn uniform_four(s: &Arc<StateSpace>, fam: &ParametricFamily) -> DiscreteRepresentationLaw {
        let c = [(vec![3, 0], 0.25), (vec![2, 1], 0.25), (vec![1, 2], 0.25), (vec![0, 3], 0.25)];
        DiscreteRepresentationLaw::new(s, fam.laws().to_vec(), c, Tolerances::default()).unwrap()
    }

    #[test]
    fn pull_relabels_atoms() {
        let (s, fam) = two_state_family();
        let d = DiscreteRepresentationLaw::new(&s, fam.laws().to_vec(), [(vec![2, 1], 1.0)], Tolerances::default()).unwrap();
        let n = pull_to_parameters(&d, &fam).unwrap();
        let expected: CountingMeasure<usize> = [0, 0, 1].into_iter().collect();
        assert_eq!(n.prob(&expected), 1.0);
        assert!(push_to_laws(&n, &fam).unwrap().equivalent(&d));
    }

    #[test]
    fn pull_rejects_laws_outside_family() {
        let (s, fam) = two_state_family();
        let d = DiscreteRepresentationLaw::new(&s, vec![DiscreteLaw::uniform(2)], [(vec![1], 1.0)], Tolerances::default()).unwrap();
        assert!(matches!(pull_to_parameters(&d, &fam), Err(Error::Coverage(_))));
    }

    #[test]
    fn push_examples() {
        let (_, fam) = two_state_family();
        let empty = push_to_laws(&ParameterProcess::zero(), &fam).unwrap();
        assert_eq!(empty.c().len(), 1);
        assert!(empty.c().keys().all(|n| n.total() == 0));

        let one = ParameterProcess::new([(CountingMeasure::dirac(0), 1.0)], &Tolerances::default()).unwrap();
        let d = push_to_laws(&one, &fam).unwrap();
        let on_laws = d.law_on_measures();
        assert_eq!(on_laws.get(&CountingMeasure::dirac(fam.law(0).clone())), Some(&1.0));
    }

    #[test]
    fn moment_transport_examples() {
        let (s, fam) = two_state_family();
        let det = DiscreteRepresentationLaw::new(&s, fam.laws().to_vec(), [(vec![2, 1], 1.0)], Tolerances::default()).unwrap();
        assert_eq!(moment_transport_check(&det, &fam, &[0], 1).unwrap(), (2.0, 2.0));
        let four = uniform_four(&s, &fam);
        let (l, r) = moment_transport_check(&four, &fam, &[0], 2).unwrap();
        assert!((l - 3.5).abs() < 1e-12 && (r - 3.5).abs() < 1e-12);
        assert_eq!(moment_transport_check(&four, &fam, &[], 3).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn pgfl_transports() {
        let (s, fam) = two_state_family();
        let four = uniform_four(&s, &fam);
        let h = |p: &DiscreteLaw| p.weights()[0];
        let n = pull_to_parameters(&four, &fam).unwrap();
        let direct = crate::representation::pgfl(&four, h).unwrap();
        assert!((pgfl_on_parameters(&n, &fam, h).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn gaussian_family() {
        let grid = NumericGrid::uniform(-6.0, 6.0, 241, true).unwrap();
        let tol = Tolerances::default();
        let one = gaussian_grid_family(&[0.0], 1.0, &grid, tol).unwrap();
        assert_eq!(one.len(), 1);
        let psi = grid.state_space().empty_state().unwrap();
        assert_eq!(one.law(0).prob(psi), 0.0);

        let two = gaussian_grid_family(&[-1.0, 1.0], 0.1, &grid, tol).unwrap();
        assert!(two.law(0).tv_distance(two.law(1)) > 1.0 - 1e-9);

        assert!(matches!(
            gaussian_grid_family(&[0.5, 0.5], 1.0, &grid, tol),
            Err(Error::Identifiability(_))
        ));
        assert!(matches!(
            gaussian_grid_family(&[5.5], 1.0, &grid, tol),
            Err(Error::Coverage(_))
        ));
        assert!(gaussian_grid_family(&[0.0], 0.0, &grid, tol).is_err());
    }

    #[test]
    fn grid_validation() {
        let s = Arc::new(StateSpace::proper_only(["a", "b"]).unwrap());
        assert!(NumericGrid::new(&s, vec![1.0, 1.0]).is_err());
        assert!(NumericGrid::new(&s, vec![1.0]).is_err());
        assert_eq!(NumericGrid::new(&s, vec![0.0, 1.0]).unwrap().cell_edges(), vec![-0.5, 0.5, 1.5]);
    }
}
