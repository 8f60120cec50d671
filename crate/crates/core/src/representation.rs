//! Stochastic representations and their point-process view.
//!
//! Under independence a population law is summarised by `zeta`, the counting
//! measure of its individual laws. A finitely supported random
//! representation then becomes a point process on laws; when the laws come
//! from a finite family `{p_theta}` it is fully described by the law `c` of
//! the multiplicity vector `N`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{Bounds, Ident};
use crate::error::{Error, Result};
use crate::laws::{canonicalize, DiscreteLaw, LawBody, PopulationLaw, RepresentationClass, Tolerances};
use crate::population::{t_sub_is_measurable, CountingMeasure, StateId, StateSpace};

/// `zeta(P)`: the counting measure of the individual laws of an independent law.
///
/// Laws within the law tolerance of each other are merged onto the least of them.
pub fn zeta(law: &PopulationLaw) -> Result<CountingMeasure<DiscreteLaw>> {
    let family = law.individual_laws().ok_or(Error::NotIndependent)?;
    Ok(merge_laws(family.iter().cloned(), law.tolerances().law))
}

fn merge_laws(laws: impl Iterator<Item = DiscreteLaw>, eps: f64) -> CountingMeasure<DiscreteLaw> {
    let mut sorted: Vec<DiscreteLaw> = laws.collect();
    sorted.sort();
    let mut reps: Vec<(DiscreteLaw, u64)> = Vec::new();
    for p in sorted {
        match reps.iter_mut().find(|(r, _)| r.approx_eq(&p, eps)) {
            Some((_, n)) => *n += 1,
            None => reps.push((p, 1)),
        }
    }
    let mut out = CountingMeasure::new();
    for (p, n) in reps {
        out.add(p, n);
    }
    out
}

/// A finitely supported random population representation with independent
/// individuals.
#[derive(Clone, Debug)]
pub struct StochasticRepresentation {
    states: Arc<StateSpace>,
    support: Vec<(PopulationLaw, f64)>,
    tol: Tolerances,
}

impl StochasticRepresentation {
    pub fn new(states: &Arc<StateSpace>, support: Vec<(PopulationLaw, f64)>, tol: Tolerances) -> Result<Self> {
        for (law, m) in &support {
            if !law.is_independent() {
                return Err(Error::NotIndependent);
            }
            if law.state_space() != states {
                return Err(Error::DomainMismatch("support law on another state space".into()));
            }
            if !m.is_finite() || *m < 0.0 {
                return Err(Error::InvalidLaw(format!("mass {m} is not a probability")));
            }
        }
        let total: f64 = support.iter().map(|(_, m)| m).sum();
        if (total - 1.0).abs() > tol.mass {
            return Err(Error::InvalidLaw(format!("support masses sum to {total}")));
        }
        Ok(StochasticRepresentation {
            states: Arc::clone(states),
            support,
            tol,
        })
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    pub fn support(&self) -> &[(PopulationLaw, f64)] {
        &self.support
    }

    /// Probability of each population structure (block-size multiset).
    pub fn structure_marginal(&self) -> BTreeMap<Vec<usize>, f64> {
        let mut out = BTreeMap::new();
        for (law, m) in &self.support {
            *out.entry(law.population().structure()).or_insert(0.0) += m;
        }
        out
    }

    /// Probability of each representation class.
    pub fn class_distribution(&self, bounds: &Bounds) -> Result<BTreeMap<RepresentationClass, f64>> {
        let mut out = BTreeMap::new();
        for (law, m) in &self.support {
            *out.entry(canonicalize(law, bounds)?).or_insert(0.0) += m;
        }
        Ok(out)
    }

    fn expect(&self, f: impl Fn(&PopulationLaw) -> f64) -> f64 {
        self.support.iter().map(|(l, m)| m * f(l)).sum()
    }
}

/// `E[|X|^n]`.
pub fn cardinality_moment(rep: &StochasticRepresentation, n: u32) -> f64 {
    rep.expect(|l| (l.population().size() as f64).powi(n as i32))
}

/// `E[|X / tau|^n]`.
pub fn structure_moment(rep: &StochasticRepresentation, n: u32) -> f64 {
    rep.expect(|l| (l.population().tau().num_blocks() as f64).powi(n as i32))
}

/// Exact distribution of a random counting measure on states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointProcessLaw {
    dist: BTreeMap<CountingMeasure<StateId>, f64>,
}

impl PointProcessLaw {
    pub fn prob(&self, m: &CountingMeasure<StateId>) -> f64 {
        self.dist.get(m).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CountingMeasure<StateId>, f64)> {
        self.dist.iter().map(|(k, &v)| (k, v))
    }

    /// Expected number of points falling in `states`.
    pub fn expected_mass(&self, states: &[StateId]) -> f64 {
        self.dist
            .iter()
            .map(|(mu, p)| p * mu.mass_where(|s| states.contains(s)) as f64)
            .sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.dist.values().sum()
    }
}

/// `(T_X)_* P`: law of the counting measure of the states of `subset`.
///
/// `subset` must be a union of `tau`-blocks.
pub fn induced_point_process(law: &PopulationLaw, subset: &[Ident]) -> Result<PointProcessLaw> {
    let pop = law.population();
    if !t_sub_is_measurable(pop, subset)? {
        return Err(Error::Precondition(
            "subset is not a union of strongly indistinguishable blocks".into(),
        ));
    }
    let mut idx: Vec<usize> = pop.check_subset(subset)?;
    idx.sort_unstable();
    idx.dedup();
    let mut dist: BTreeMap<CountingMeasure<StateId>, f64> = BTreeMap::new();
    match law.body() {
        LawBody::Independent(family) => {
            dist.insert(CountingMeasure::new(), 1.0);
            for &i in &idx {
                let mut next = BTreeMap::new();
                for (mu, p) in &dist {
                    for (s, w) in family[i].weights().iter().enumerate() {
                        if *w > 0.0 {
                            let mut m = mu.clone();
                            m.add(StateId(s), 1);
                            *next.entry(m).or_insert(0.0) += p * w;
                        }
                    }
                }
                dist = next;
            }
        }
        LawBody::Explicit(table) => {
            for (vals, m) in table {
                let mu: CountingMeasure<StateId> = idx.iter().map(|&i| vals[i]).collect();
                *dist.entry(mu).or_insert(0.0) += m;
            }
        }
    }
    Ok(PointProcessLaw { dist })
}

/// `chi^m_B(P)`: number of `tau`-blocks of size `m` whose induced point-process
/// law satisfies `pred`.
pub fn chi_m(law: &PopulationLaw, m: usize, pred: impl Fn(&PointProcessLaw) -> bool) -> Result<usize> {
    let mut count = 0;
    for block in law.population().tau().blocks().iter().filter(|b| b.len() == m) {
        if pred(&induced_point_process(law, block)?) {
            count += 1;
        }
    }
    Ok(count)
}

/// `(chi_B(P), chi-bar_B'(P))` for a law whose individuals are all weakly
/// distinguishable.
pub fn chi_and_chibar(
    law: &PopulationLaw,
    pred: impl Fn(&DiscreteLaw) -> bool,
    states: &[StateId],
) -> Result<(usize, f64)> {
    if !law.population().tau().is_discrete() {
        return Err(Error::Precondition("strong indistinguishability must be trivial".into()));
    }
    let mut chi = 0;
    let mut chibar = 0.0;
    for i in 0..law.population().size() {
        let marginal = law.marginal(i);
        if pred(&marginal) {
            chi += 1;
        }
        chibar += marginal.mass(states);
    }
    Ok((chi, chibar))
}

/// Multiplicities `N_theta` of each atom law.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiplicityVector(pub Vec<u64>);

impl MultiplicityVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn get(&self, theta: usize) -> u64 {
        self.0.get(theta).copied().unwrap_or(0)
    }

    /// `sum_{theta in B} N_theta`.
    pub fn count_in(&self, thetas: &[usize]) -> u64 {
        let mut seen = vec![false; self.0.len()];
        thetas
            .iter()
            .filter(|&&t| t < seen.len() && !std::mem::replace(&mut seen[t], true))
            .map(|&t| self.0[t])
            .sum()
    }
}

impl From<Vec<u64>> for MultiplicityVector {
    fn from(v: Vec<u64>) -> Self {
        MultiplicityVector(v)
    }
}

/// A stochastic representation supported by finitely many individual laws.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteRepresentationLaw {
    states: Arc<StateSpace>,
    atom_laws: Vec<DiscreteLaw>,
    c: BTreeMap<MultiplicityVector, f64>,
    tol: Tolerances,
}

impl DiscreteRepresentationLaw {
    pub fn new<I, V>(states: &Arc<StateSpace>, atom_laws: Vec<DiscreteLaw>, c: I, tol: Tolerances) -> Result<Self>
    where
        I: IntoIterator<Item = (V, f64)>,
        V: Into<MultiplicityVector>,
    {
        for p in &atom_laws {
            if p.num_states() != states.len() {
                return Err(Error::Dimension {
                    expected: states.len(),
                    got: p.num_states(),
                });
            }
        }
        for (i, p) in atom_laws.iter().enumerate() {
            if let Some(j) = atom_laws[..i].iter().position(|q| q.approx_eq(p, tol.law)) {
                return Err(Error::Identifiability(format!("atom laws {j} and {i} coincide")));
            }
        }
        let mut table: BTreeMap<MultiplicityVector, f64> = BTreeMap::new();
        for (n, m) in c {
            let n = n.into();
            if n.dim() != atom_laws.len() {
                return Err(Error::Dimension {
                    expected: atom_laws.len(),
                    got: n.dim(),
                });
            }
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidLaw(format!("mass {m} is not a probability")));
            }
            if m > 0.0 {
                *table.entry(n).or_insert(0.0) += m;
            }
        }
        let total: f64 = table.values().sum();
        if (total - 1.0).abs() > tol.mass {
            return Err(Error::InvalidLaw(format!("multiplicity masses sum to {total}")));
        }
        Ok(DiscreteRepresentationLaw {
            states: Arc::clone(states),
            atom_laws,
            c: table,
            tol,
        })
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    pub fn atom_laws(&self) -> &[DiscreteLaw] {
        &self.atom_laws
    }

    pub fn num_atoms(&self) -> usize {
        self.atom_laws.len()
    }

    pub fn c(&self) -> &BTreeMap<MultiplicityVector, f64> {
        &self.c
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// `c(n)`.
    pub fn prob(&self, n: &MultiplicityVector) -> f64 {
        self.c.get(n).copied().unwrap_or(0.0)
    }

    /// Index of the atom law within tolerance of `p`.
    pub fn atom_index(&self, p: &DiscreteLaw) -> Option<usize> {
        self.atom_laws.iter().position(|q| q.approx_eq(p, self.tol.law))
    }

    /// `mu_n = sum_theta n_theta delta_{p_theta}`.
    pub fn realization(&self, n: &MultiplicityVector) -> CountingMeasure<DiscreteLaw> {
        let mut mu = CountingMeasure::new();
        for (p, &k) in self.atom_laws.iter().zip(&n.0) {
            mu.add(p.clone(), k);
        }
        mu
    }

    /// The law of the point process on laws, independent of atom ordering.
    pub fn law_on_measures(&self) -> BTreeMap<CountingMeasure<DiscreteLaw>, f64> {
        let mut out = BTreeMap::new();
        for (n, m) in &self.c {
            *out.entry(self.realization(n)).or_insert(0.0) += m;
        }
        out
    }

    /// Same point process, up to the ordering and padding of atom laws.
    pub fn equivalent(&self, other: &DiscreteRepresentationLaw) -> bool {
        let (a, b) = (self.law_on_measures(), other.law_on_measures());
        a.len() == b.len()
            && a.iter()
                .zip(&b)
                .all(|((ka, ma), (kb, mb))| ka == kb && (ma - mb).abs() <= self.tol.mass)
    }

    /// `E_c[g(N)]`.
    pub fn expect(&self, g: impl Fn(&MultiplicityVector) -> f64) -> f64 {
        self.c.iter().map(|(n, m)| m * g(n)).sum()
    }

    /// `m_theta = E[N_theta]`.
    pub fn multiplicity_means(&self) -> Vec<f64> {
        (0..self.num_atoms())
            .map(|t| self.expect(|n| n.get(t) as f64))
            .collect()
    }

    /// `cov_{theta, theta'}`.
    pub fn multiplicity_covariance(&self) -> Vec<Vec<f64>> {
        let means = self.multiplicity_means();
        let k = self.num_atoms();
        (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| self.expect(|n| (n.get(a) as f64 - means[a]) * (n.get(b) as f64 - means[b])))
                    .collect()
            })
            .collect()
    }
}

/// Collects the individual laws of every support atom into a finite family
/// and expresses each atom as a multiplicity vector.
pub fn to_discrete(rep: &StochasticRepresentation) -> Result<DiscreteRepresentationLaw> {
    let eps = rep.tol.law;
    let all = rep
        .support
        .iter()
        .flat_map(|(l, _)| l.individual_laws().unwrap_or_default().iter().cloned());
    let theta: Vec<DiscreteLaw> = merge_laws(all, eps).iter().map(|(p, _)| p.clone()).collect();
    let mut c = Vec::with_capacity(rep.support.len());
    for (law, m) in &rep.support {
        let mut n = vec![0u64; theta.len()];
        for (p, k) in zeta(law)?.iter() {
            let t = theta
                .iter()
                .position(|q| q.approx_eq(p, eps))
                .expect("every individual law is in the family");
            n[t] += k;
        }
        c.push((MultiplicityVector(n), *m));
    }
    DiscreteRepresentationLaw::new(&rep.states, theta, c, rep.tol)
}

/// One draw of the representation and of the individual states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub multiplicities: MultiplicityVector,
    pub states: CountingMeasure<StateId>,
}

/// Reusable sampler for a discrete representation law.
pub struct Sampler<'a> {
    law: &'a DiscreteRepresentationLaw,
    outcomes: Vec<&'a MultiplicityVector>,
    outcome_index: WeightedIndex<f64>,
    state_index: Vec<WeightedIndex<f64>>,
}

impl<'a> Sampler<'a> {
    pub fn new(law: &'a DiscreteRepresentationLaw) -> Result<Self> {
        let outcomes: Vec<&MultiplicityVector> = law.c.keys().collect();
        let outcome_index = WeightedIndex::new(law.c.values().copied())
            .map_err(|e| Error::InvalidLaw(e.to_string()))?;
        let state_index = law
            .atom_laws
            .iter()
            .map(|p| WeightedIndex::new(p.weights().iter().copied()).map_err(|e| Error::InvalidLaw(e.to_string())))
            .collect::<Result<_>>()?;
        Ok(Sampler {
            law,
            outcomes,
            outcome_index,
            state_index,
        })
    }

    /// Draws `n ~ c`, then `n_theta` independent states from each `p_theta`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Sample {
        let n = self.outcomes[self.outcome_index.sample(rng)].clone();
        let mut states = CountingMeasure::new();
        for (t, &k) in n.0.iter().enumerate() {
            for _ in 0..k {
                states.add(StateId(self.state_index[t].sample(rng)), 1);
            }
        }
        debug_assert_eq!(n.dim(), self.law.num_atoms());
        Sample {
            multiplicities: n,
            states,
        }
    }
}

/// A single draw with a generator passed by the caller.
pub fn sample<R: Rng + ?Sized>(law: &DiscreteRepresentationLaw, rng: &mut R) -> Result<Sample> {
    Ok(Sampler::new(law)?.draw(rng))
}

/// `count` draws from a ChaCha generator seeded with `seed`.
pub fn sample_seeded(law: &DiscreteRepresentationLaw, seed: u64, count: usize) -> Result<Vec<Sample>> {
    let sampler = Sampler::new(law)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.draw(&mut rng)).collect())
}

fn check_thetas(law: &DiscreteRepresentationLaw, thetas: &[usize]) -> Result<()> {
    match thetas.iter().find(|&&t| t >= law.num_atoms()) {
        Some(&t) => Err(Error::Precondition(format!("atom index {t} out of range"))),
        None => Ok(()),
    }
}

/// Mean and variance of the number of individual laws in `thetas`.
pub fn mean_and_variance_on_laws(law: &DiscreteRepresentationLaw, thetas: &[usize]) -> Result<(f64, f64)> {
    check_thetas(law, thetas)?;
    let mean = law.expect(|n| n.count_in(thetas) as f64);
    let var = law.expect(|n| (n.count_in(thetas) as f64 - mean).powi(2));
    Ok((mean, var))
}

/// Collapsed mean and variance of `sum_theta N_theta p_theta(B)`, the
/// expected number of individuals in `states` given `N`, from `m_theta` and
/// `cov_{theta, theta'}`. The mean equals that of the realised count; the
/// variance leaves out the within-law sampling noise.
pub fn collapsed_moments(law: &DiscreteRepresentationLaw, states: &[StateId]) -> (f64, f64) {
    let phi: Vec<f64> = law.atom_laws.iter().map(|p| p.mass(states)).collect();
    let means = law.multiplicity_means();
    let cov = law.multiplicity_covariance();
    let mean = means.iter().zip(&phi).map(|(m, f)| m * f).sum();
    let var = (0..phi.len())
        .flat_map(|a| (0..phi.len()).map(move |b| (a, b)))
        .map(|(a, b)| cov[a][b] * phi[a] * phi[b])
        .sum();
    (mean, var)
}

/// The same quantities as [`collapsed_moments`], by direct expectation of
/// `mu_N(Phi_B)` and its square over `c`.
pub fn collapsed_moments_direct(law: &DiscreteRepresentationLaw, states: &[StateId]) -> (f64, f64) {
    let phi_of = |n: &MultiplicityVector| -> f64 {
        law.realization(n)
            .iter()
            .map(|(p, k)| k as f64 * p.mass(states))
            .sum()
    };
    let first = law.expect(phi_of);
    let second = law.expect(|n| phi_of(n).powi(2));
    (first, second - first * first)
}

fn check_unit(v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::OutOfRange(v))
    }
}

/// Probability-generating functional `G(h) = E[prod_theta h(p_theta)^{N_theta}]`
/// for `h` with values in `[0, 1]`.
pub fn pgfl(law: &DiscreteRepresentationLaw, h: impl Fn(&DiscreteLaw) -> f64) -> Result<f64> {
    let hv = law
        .atom_laws
        .iter()
        .map(|p| check_unit(h(p)))
        .collect::<Result<Vec<f64>>>()?;
    let mut total = 0.0;
    for (n, m) in &law.c {
        // integrate log h against mu_n, one point at a time
        let mut term = *m;
        for (t, &k) in n.0.iter().enumerate() {
            for _ in 0..k {
                term *= hv[t];
            }
        }
        total += term;
    }
    Ok(total)
}

/// Probability-generating function `G'(z) = sum_n c(n) prod_theta z_theta^{n_theta}`.
pub fn pgf(law: &DiscreteRepresentationLaw, z: &[f64]) -> Result<f64> {
    if z.len() != law.num_atoms() {
        return Err(Error::Dimension {
            expected: law.num_atoms(),
            got: z.len(),
        });
    }
    for &v in z {
        check_unit(v)?;
    }
    Ok(pgf_unchecked(law, z))
}

/// `G'` without the `[0, 1]` domain check, for numerical differentiation.
pub fn pgf_unchecked(law: &DiscreteRepresentationLaw, z: &[f64]) -> f64 {
    law.c
        .iter()
        .map(|(n, m)| {
            m * n
                .0
                .iter()
                .zip(z)
                .map(|(&k, &zt)| zt.powi(k as i32))
                .product::<f64>()
        })
        .sum()
}
