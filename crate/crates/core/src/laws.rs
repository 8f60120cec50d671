//! Probability laws over assignment-function spaces.
//!
//! A [`PopulationLaw`] is either a product of individual laws or an explicit
//! finite table over assignment functions. Laws must not distinguish strongly
//! indistinguishable individuals; the checked constructors reject laws that
//! are not invariant under `Sym(X, tau)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    all_partitions, partition_join, partition_refines, relation_preserving_bijections, sym_group,
    Bijection, Bounds, Ident, Partition, Permutation,
};
use crate::error::{Error, Result};
use crate::population::{
    function_space, is_saturated_event, AssignmentFunction, Event, Population, StateId, StateSpace,
};

/// Numerical tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed deviation of total mass from one.
    pub mass: f64,
    /// Two laws are equal iff their total-variation distance is at most this.
    pub law: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mass: 1e-12,
            law: 1e-9,
        }
    }
}

/// A probability law on a finite state space, stored densely in state order.
///
/// `Eq`, `Ord` and `Hash` are exact (bitwise on the weights); use
/// [`DiscreteLaw::approx_eq`] for tolerance-based comparison.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct DiscreteLaw {
    weights: Vec<f64>,
}

impl DiscreteLaw {
    pub fn new(weights: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidLaw("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol.mass {
            return Err(Error::InvalidLaw(format!("weights sum to {total}")));
        }
        Ok(DiscreteLaw { weights })
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidLaw("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidLaw("zero total mass".into()));
        }
        Ok(DiscreteLaw {
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn point_mass(num_states: usize, at: StateId) -> Self {
        let mut weights = vec![0.0; num_states];
        weights[at.0] = 1.0;
        DiscreteLaw { weights }
    }

    pub fn uniform(num_states: usize) -> Self {
        DiscreteLaw {
            weights: vec![1.0 / num_states as f64; num_states],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_states(&self) -> usize {
        self.weights.len()
    }

    pub fn prob(&self, s: StateId) -> f64 {
        self.weights.get(s.0).copied().unwrap_or(0.0)
    }

    /// `p(B)` for a set of states; repeated states count once.
    pub fn mass(&self, states: &[StateId]) -> f64 {
        let mut seen = vec![false; self.weights.len()];
        states
            .iter()
            .filter(|s| s.0 < seen.len() && !std::mem::replace(&mut seen[s.0], true))
            .map(|s| self.weights[s.0])
            .sum()
    }

    /// Total-variation distance; laws on different state spaces are at distance 1.
    pub fn tv_distance(&self, other: &DiscreteLaw) -> f64 {
        if self.weights.len() != other.weights.len() {
            return 1.0;
        }
        0.5 * self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn approx_eq(&self, other: &DiscreteLaw, eps: f64) -> bool {
        self.tv_distance(other) <= eps
    }
}

impl PartialEq for DiscreteLaw {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DiscreteLaw {}

impl PartialOrd for DiscreteLaw {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiscreteLaw {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weights.len().cmp(&other.weights.len()).then_with(|| {
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl Hash for DiscreteLaw {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for w in &self.weights {
            w.to_bits().hash(state);
        }
    }
}

/// Joint table keyed by function values in sorted-individual order.
pub type LawTable = BTreeMap<Vec<StateId>, f64>;

#[derive(Clone, Debug, PartialEq)]
pub enum LawBody {
    /// One law per individual, in sorted-individual order.
    Independent(Vec<DiscreteLaw>),
    /// Positive masses on assignment functions.
    Explicit(LawTable),
}

/// A probability law on the functions of one population.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationLaw {
    population: Arc<Population>,
    states: Arc<StateSpace>,
    body: LawBody,
    tol: Tolerances,
}

/// Product law of independent individuals.
///
/// Every individual needs a law; individuals in the same `tau`-block must
/// share it.
pub fn independent_law(
    population: &Arc<Population>,
    states: &Arc<StateSpace>,
    laws: &BTreeMap<Ident, DiscreteLaw>,
    tol: Tolerances,
) -> Result<PopulationLaw> {
    if laws.len() != population.size() {
        return Err(Error::InvalidLaw(format!(
            "{} individual laws for {} individuals",
            laws.len(),
            population.size()
        )));
    }
    let mut family = Vec::with_capacity(population.size());
    for x in population.individuals() {
        let p = laws
            .get(x)
            .ok_or_else(|| Error::InvalidLaw(format!("no law for {x}")))?;
        if p.num_states() != states.len() {
            return Err(Error::Dimension {
                expected: states.len(),
                got: p.num_states(),
            });
        }
        family.push(p.clone());
    }
    for block in population.tau().blocks() {
        let first = &laws[&block[0]];
        if let Some(x) = block.iter().find(|x| !laws[*x].approx_eq(first, tol.law)) {
            return Err(Error::Inadmissible(format!(
                "{} and {x} are strongly indistinguishable but have different laws",
                block[0]
            )));
        }
    }
    Ok(PopulationLaw {
        population: Arc::clone(population),
        states: Arc::clone(states),
        body: LawBody::Independent(family),
        tol,
    })
}

impl PopulationLaw {
    /// Explicit joint law; rejected unless invariant under `Sym(X, tau)`.
    pub fn explicit<I>(
        population: &Arc<Population>,
        states: &Arc<StateSpace>,
        table: I,
        tol: Tolerances,
        bounds: &Bounds,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (AssignmentFunction, f64)>,
    {
        let law = Self::explicit_raw(population, states, table, tol)?;
        if !law_is_admissible(&law, bounds)? {
            return Err(Error::Inadmissible(
                "explicit law is not invariant under permutations of strongly indistinguishable individuals".into(),
            ));
        }
        Ok(law)
    }

    /// Explicit joint law without the symmetry check, for auditing tables that
    /// may distinguish strongly indistinguishable individuals.
    pub fn explicit_raw<I>(
        population: &Arc<Population>,
        states: &Arc<StateSpace>,
        table: I,
        tol: Tolerances,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (AssignmentFunction, f64)>,
    {
        let mut out = LawTable::new();
        for (f, m) in table {
            if f.population() != population || f.state_space() != states {
                return Err(Error::DomainMismatch("table entry on another population".into()));
            }
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidLaw(format!("mass {m} is not a probability")));
            }
            if m > 0.0 {
                *out.entry(f.values().to_vec()).or_default() += m;
            }
        }
        let total: f64 = out.values().sum();
        if (total - 1.0).abs() > tol.mass {
            return Err(Error::InvalidLaw(format!("masses sum to {total}")));
        }
        Ok(PopulationLaw {
            population: Arc::clone(population),
            states: Arc::clone(states),
            body: LawBody::Explicit(out),
            tol,
        })
    }

    pub fn population(&self) -> &Arc<Population> {
        &self.population
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    pub fn body(&self) -> &LawBody {
        &self.body
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn is_independent(&self) -> bool {
        matches!(self.body, LawBody::Independent(_))
    }

    /// The individual laws, in sorted-individual order, if independent.
    pub fn individual_laws(&self) -> Option<&[DiscreteLaw]> {
        match &self.body {
            LawBody::Independent(f) => Some(f),
            LawBody::Explicit(_) => None,
        }
    }

    pub fn law_of(&self, x: &Ident) -> Option<&DiscreteLaw> {
        let i = self.population.index_of(x)?;
        self.individual_laws().map(|f| &f[i])
    }

    /// Probability of a single function given by its values.
    pub fn mass_of_values(&self, values: &[StateId]) -> f64 {
        match &self.body {
            LawBody::Independent(family) => family
                .iter()
                .zip(values)
                .map(|(p, s)| p.prob(*s))
                .product(),
            LawBody::Explicit(t) => t.get(values).copied().unwrap_or(0.0),
        }
    }

    /// Marginal law of the `i`-th individual.
    pub fn marginal(&self, i: usize) -> DiscreteLaw {
        match &self.body {
            LawBody::Independent(family) => family[i].clone(),
            LawBody::Explicit(t) => {
                let mut w = vec![0.0; self.states.len()];
                for (vals, m) in t {
                    w[vals[i].0] += m;
                }
                DiscreteLaw { weights: w }
            }
        }
    }

    /// The law as a joint table (zero-mass functions omitted).
    pub fn to_table(&self, bounds: &Bounds) -> Result<LawTable> {
        match &self.body {
            LawBody::Explicit(t) => Ok(t.clone()),
            LawBody::Independent(_) => Ok(function_space(&self.population, &self.states, bounds)?
                .into_iter()
                .map(|f| {
                    let m = self.mass_of_values(f.values());
                    (f.values().to_vec(), m)
                })
                .filter(|(_, m)| *m > 0.0)
                .collect()),
        }
    }

    /// `(T_sigma)_* P` for `T_sigma: f -> f ∘ sigma`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<PopulationLaw> {
        if sigma.ground_set() != self.population.individuals() {
            return Err(Error::MismatchedGroundSets);
        }
        let n = self.population.size();
        let body = match &self.body {
            LawBody::Independent(family) => {
                LawBody::Independent((0..n).map(|i| family[sigma.image_index(i)].clone()).collect())
            }
            LawBody::Explicit(t) => LawBody::Explicit(
                t.iter()
                    .map(|(vals, m)| ((0..n).map(|i| vals[sigma.image_index(i)]).collect(), *m))
                    .collect(),
            ),
        };
        Ok(PopulationLaw {
            population: Arc::clone(&self.population),
            states: Arc::clone(&self.states),
            body,
            tol: self.tol,
        })
    }
}

/// `P(F)` for a saturated event `F`.
pub fn law_eval(law: &PopulationLaw, event: &Event, bounds: &Bounds) -> Result<f64> {
    for f in event {
        if f.population() != &law.population || f.state_space() != &law.states {
            return Err(Error::DomainMismatch("event is not on the law's population".into()));
        }
    }
    if !is_saturated_event(event, bounds)? {
        return Err(Error::NotSaturated);
    }
    Ok(event.iter().map(|f| law.mass_of_values(f.values())).sum())
}

/// Relabels a law along a relation-preserving bijection `nu: X -> X'`.
///
/// The result lives on `target`, with `p'_{nu(x)} = p_x`.
pub fn pushforward_by_bijection(
    law: &PopulationLaw,
    nu: &Bijection,
    target: &Arc<Population>,
) -> Result<PopulationLaw> {
    if !nu.is_relation_preserving(law.population.tau(), target.tau()) {
        return Err(Error::InvalidBijection(
            "bijection does not map the law's population block-wise onto the target".into(),
        ));
    }
    let n = law.population.size();
    let body = match &law.body {
        LawBody::Independent(family) => {
            let mut out = family.clone();
            for (i, p) in family.iter().enumerate() {
                out[nu.image_index(i)] = p.clone();
            }
            LawBody::Independent(out)
        }
        LawBody::Explicit(t) => LawBody::Explicit(
            t.iter()
                .map(|(vals, m)| {
                    let mut out = vals.clone();
                    for i in 0..n {
                        out[nu.image_index(i)] = vals[i];
                    }
                    (out, *m)
                })
                .collect(),
        ),
    };
    Ok(PopulationLaw {
        population: Arc::clone(target),
        states: Arc::clone(&law.states),
        body,
        tol: law.tol,
    })
}

/// Tolerance-based equality of two laws on the same population.
pub fn laws_approx_eq(p: &PopulationLaw, q: &PopulationLaw, bounds: &Bounds) -> Result<bool> {
    if p.population != q.population || p.states != q.states {
        return Ok(false);
    }
    let eps = p.tol.law;
    if let (LawBody::Independent(a), LawBody::Independent(b)) = (&p.body, &q.body) {
        return Ok(a.iter().zip(b).all(|(x, y)| x.approx_eq(y, eps)));
    }
    let (a, b) = (p.to_table(bounds)?, q.to_table(bounds)?);
    let mut diff = 0.0;
    for (k, m) in &a {
        diff += (m - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, m) in &b {
        if !a.contains_key(k) {
            diff += m.abs();
        }
    }
    Ok(0.5 * diff <= eps)
}

fn invariant_under_all(law: &PopulationLaw, eta: &Partition, bounds: &Bounds) -> Result<bool> {
    for sigma in sym_group(eta, bounds)? {
        if sigma.is_identity() {
            continue;
        }
        if !laws_approx_eq(law, &law.permuted(&sigma)?, bounds)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the law is invariant under `Sym(X, tau)`.
pub fn law_is_admissible(law: &PopulationLaw, bounds: &Bounds) -> Result<bool> {
    invariant_under_all(law, law.population.tau(), bounds)
}

/// Outcome of the weak-indistinguishability search.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakIndistinguishability {
    /// The greatest invariant partition.
    pub eta: Partition,
    /// Every partition under whose permutations the law is invariant.
    pub valid: Vec<Partition>,
}

/// Exhaustive search for the relation of weak indistinguishability.
pub fn weak_indistinguishability_report(law: &PopulationLaw, bounds: &Bounds) -> Result<WeakIndistinguishability> {
    let candidates = all_partitions(law.population.individuals(), bounds)?;
    let mut valid = Vec::new();
    for eta in candidates {
        if invariant_under_all(law, &eta, bounds)? {
            valid.push(eta);
        }
    }
    let eta = partition_join(&valid)?;
    if !invariant_under_all(law, &eta, bounds)? {
        return Err(Error::NoGreatestElement);
    }
    for v in &valid {
        if !partition_refines(v, &eta)? {
            return Err(Error::NoGreatestElement);
        }
    }
    Ok(WeakIndistinguishability { eta, valid })
}

/// The relation `eta` of weak indistinguishability induced by the law.
pub fn weak_indistinguishability(law: &PopulationLaw, bounds: &Bounds) -> Result<Partition> {
    weak_indistinguishability_report(law, bounds).map(|r| r.eta)
}

/// `P rho-bar Q` iff `P = (T_nu)_* Q` for a relation-preserving `nu: Y_P -> Y_Q`.
pub fn rho_bar_related(p: &PopulationLaw, q: &PopulationLaw, bounds: &Bounds) -> Result<bool> {
    if p.states != q.states {
        return Ok(false);
    }
    for nu in relation_preserving_bijections(p.population.tau(), q.population.tau(), bounds)? {
        // (T_nu)_* Q has family x -> q_{nu(x)}, i.e. Q relabelled along nu^{-1}
        let pulled = pushforward_by_bijection(q, &nu.inverse(), &p.population)?;
        if laws_approx_eq(p, &pulled, bounds)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Canonical form of a law up to relation-preserving relabelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalLaw {
    /// Sorted `(block size, block law)` pairs.
    Independent(Vec<(usize, DiscreteLaw)>),
    /// Lexicographically least relabelled table; masses as IEEE bit patterns.
    Explicit(Vec<(Vec<StateId>, u64)>),
}

/// A population representation: the `rho-bar` class of a law.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepresentationClass {
    pub structure: Vec<usize>,
    pub law: CanonicalLaw,
}

impl RepresentationClass {
    pub fn size(&self) -> usize {
        self.structure.iter().sum()
    }
}

fn canonical_population(structure: &[usize]) -> Arc<Population> {
    let mut next = 0usize;
    let blocks: Vec<Vec<String>> = structure
        .iter()
        .map(|&s| {
            (0..s)
                .map(|_| {
                    next += 1;
                    format!("#{:06}", next - 1)
                })
                .collect()
        })
        .collect();
    Arc::new(Population::from_blocks(blocks).expect("canonical blocks are disjoint"))
}

fn factorizes(law: &PopulationLaw, table: &LawTable) -> bool {
    let n = law.population.size();
    let marginals: Vec<DiscreteLaw> = (0..n).map(|i| law.marginal(i)).collect();
    let product = |vals: &[StateId]| -> f64 { marginals.iter().zip(vals).map(|(p, s)| p.prob(*s)).product() };
    // every function with positive product mass must appear in the table
    let support_mass: f64 = table.keys().map(|k| product(k)).sum();
    let diff: f64 = table.iter().map(|(k, m)| (m - product(k)).abs()).sum::<f64>() + (1.0 - support_mass).abs();
    0.5 * diff <= law.tol.law
}

/// Canonical representative of the `rho-bar` class of `law`.
///
/// Explicit tables that factorise into block-constant marginals are
/// canonicalised like independent laws so that both forms of the same law
/// land in the same class.
pub fn canonicalize(law: &PopulationLaw, bounds: &Bounds) -> Result<RepresentationClass> {
    let structure = law.population.structure();
    let tau = law.population.tau();
    let independent_form = |family: &dyn Fn(usize) -> DiscreteLaw| {
        let mut pairs: Vec<(usize, DiscreteLaw)> = tau
            .blocks()
            .iter()
            .map(|b| (b.len(), family(law.population.index_of(&b[0]).expect("member"))))
            .collect();
        pairs.sort();
        CanonicalLaw::Independent(pairs)
    };
    let canonical = match &law.body {
        LawBody::Independent(family) => independent_form(&|i| family[i].clone()),
        LawBody::Explicit(table) => {
            if law_is_admissible(law, bounds)? && factorizes(law, table) {
                independent_form(&|i| law.marginal(i))
            } else {
                let target = canonical_population(&structure);
                let mut best: Option<Vec<(Vec<StateId>, u64)>> = None;
                for nu in relation_preserving_bijections(tau, target.tau(), bounds)? {
                    let moved = pushforward_by_bijection(law, &nu, &target)?;
                    let LawBody::Explicit(t) = moved.body else {
                        unreachable!("explicit stays explicit")
                    };
                    let key: Vec<(Vec<StateId>, u64)> = t.into_iter().map(|(k, m)| (k, m.to_bits())).collect();
                    if best.as_ref().is_none_or(|b| key < *b) {
                        best = Some(key);
                    }
                }
                CanonicalLaw::Explicit(best.unwrap_or_default())
            }
        }
    };
    Ok(RepresentationClass {
        structure,
        law: canonical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ident_set;
    use crate::population::function_space;

    fn states2() -> Arc<StateSpace> {
        Arc::new(StateSpace::proper_only(["x", "x'"]).unwrap())
    }

    fn law(w: &[f64]) -> DiscreteLaw {
        DiscreteLaw::new(w.to_vec(), &Tolerances::default()).unwrap()
    }

    fn family(pairs: &[(&str, &DiscreteLaw)]) -> BTreeMap<Ident, DiscreteLaw> {
        pairs.iter().map(|(x, p)| (Ident::from(*x), (*p).clone())).collect()
    }

    #[test]
    fn discrete_law_validation() {
        let tol = Tolerances::default();
        assert!(DiscreteLaw::new(vec![0.5, 0.4], &tol).is_err());
        assert!(DiscreteLaw::new(vec![1.5, -0.5], &tol).is_err());
        let p = law(&[0.3, 0.7]);
        assert!((p.tv_distance(&law(&[0.5, 0.5])) - 0.2).abs() < 1e-15);
        assert_eq!(p.mass(&[StateId(1), StateId(1)]), 0.7);
    }

    #[test]
    fn independent_evaluation() {
        let b = Bounds::default();
        let s = states2();
        let single = Arc::new(Population::distinguishable(["x"]));
        let u = DiscreteLaw::uniform(2);
        let p = independent_law(&single, &s, &family(&[("x", &u)]), Tolerances::default()).unwrap();
        let ev: Event = function_space(&single, &s, &b)
            .unwrap()
            .into_iter()
            .filter(|f| f.values()[0] == StateId(0))
            .collect();
        assert_eq!(law_eval(&p, &ev, &b).unwrap(), 0.5);

        let both = Arc::new(Population::indistinguishable(["x", "x'"]));
        let p = independent_law(&both, &s, &family(&[("x", &u), ("x'", &u)]), Tolerances::default()).unwrap();
        let ev: Event = function_space(&both, &s, &b)
            .unwrap()
            .into_iter()
            .filter(|f| f.values().iter().all(|v| *v == StateId(0)))
            .collect();
        assert_eq!(law_eval(&p, &ev, &b).unwrap(), 0.25);

        let non_sat: Event = function_space(&both, &s, &b)
            .unwrap()
            .into_iter()
            .filter(|f| f.values() == [StateId(0), StateId(1)])
            .collect();
        assert_eq!(law_eval(&p, &non_sat, &b), Err(Error::NotSaturated));

        let full: Event = function_space(&both, &s, &b).unwrap().into_iter().collect();
        assert!((law_eval(&p, &full, &b).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(law_eval(&p, &Event::new(), &b).unwrap(), 0.0);
    }

    #[test]
    fn unequal_block_laws_rejected() {
        let s = states2();
        let both = Arc::new(Population::indistinguishable(["a", "b"]));
        let r = independent_law(
            &both,
            &s,
            &family(&[("a", &law(&[1.0, 0.0])), ("b", &law(&[0.0, 1.0]))]),
            Tolerances::default(),
        );
        assert!(matches!(r, Err(Error::Inadmissible(_))));
    }

    fn symmetric_injective(pop: &Arc<Population>, s: &Arc<StateSpace>) -> PopulationLaw {
        let b = Bounds::default();
        let table = function_space(pop, s, &b)
            .unwrap()
            .into_iter()
            .filter(AssignmentFunction::is_injective)
            .map(|f| (f, 0.5));
        PopulationLaw::explicit(pop, s, table, Tolerances::default(), &b).unwrap()
    }

    #[test]
    fn explicit_gluing_law() {
        let b = Bounds::default();
        let s = states2();
        let pop = Arc::new(Population::indistinguishable(["x", "x'"]));
        let p = symmetric_injective(&pop, &s);
        let ev: Event = function_space(&pop, &s, &b)
            .unwrap()
            .into_iter()
            .filter(AssignmentFunction::is_injective)
            .collect();
        assert_eq!(law_eval(&p, &ev, &b).unwrap(), 1.0);
    }

    #[test]
    fn admissibility() {
        let b = Bounds::default();
        let s = states2();
        let pop = Arc::new(Population::indistinguishable(["x", "x'"]));
        let f = AssignmentFunction::from_values(Arc::clone(&pop), Arc::clone(&s), vec![StateId(0), StateId(1)]).unwrap();
        let raw = PopulationLaw::explicit_raw(&pop, &s, [(f.clone(), 1.0)], Tolerances::default()).unwrap();
        assert!(!law_is_admissible(&raw, &b).unwrap());
        assert!(matches!(
            PopulationLaw::explicit(&pop, &s, [(f, 1.0)], Tolerances::default(), &b),
            Err(Error::Inadmissible(_))
        ));

        let o = Arc::new(Population::distinguishable(["x", "x'"]));
        let g = AssignmentFunction::from_values(Arc::clone(&o), Arc::clone(&s), vec![StateId(0), StateId(1)]).unwrap();
        let raw = PopulationLaw::explicit_raw(&o, &s, [(g, 1.0)], Tolerances::default()).unwrap();
        assert!(law_is_admissible(&raw, &b).unwrap());
    }

    #[test]
    fn weak_indistinguishability_examples() {
        let b = Bounds::default();
        let s = states2();
        let pop = Arc::new(Population::distinguishable(["a", "b", "c"]));
        let p = law(&[0.2, 0.8]);
        let q = law(&[0.6, 0.4]);
        let l = independent_law(&pop, &s, &family(&[("a", &p), ("b", &p), ("c", &q)]), Tolerances::default()).unwrap();
        let eta = weak_indistinguishability(&l, &b).unwrap();
        assert_eq!(eta, Partition::new(vec![vec!["a", "b"], vec!["c"]]).unwrap());

        let r = law(&[0.9, 0.1]);
        let l = independent_law(&pop, &s, &family(&[("a", &p), ("b", &q), ("c", &r)]), Tolerances::default()).unwrap();
        assert!(weak_indistinguishability(&l, &b).unwrap().is_discrete());

        let two = Arc::new(Population::distinguishable(["x", "x'"]));
        let sym = symmetric_injective(&two, &s);
        assert!(weak_indistinguishability(&sym, &b).unwrap().is_indiscrete());
    }

    #[test]
    fn pushforward_relabels() {
        let b = Bounds::default();
        let s = states2();
        let pop = Arc::new(Population::distinguishable(["a", "b"]));
        let p = law(&[0.2, 0.8]);
        let q = law(&[0.6, 0.4]);
        let l = independent_law(&pop, &s, &family(&[("a", &p), ("b", &q)]), Tolerances::default()).unwrap();

        let id = Bijection::new([("a", "a"), ("b", "b")]).unwrap();
        assert_eq!(pushforward_by_bijection(&l, &id, &pop).unwrap(), l);

        let swap = Bijection::new([("a", "b"), ("b", "a")]).unwrap();
        let swapped = pushforward_by_bijection(&l, &swap, &pop).unwrap();
        assert_eq!(swapped.law_of(&"a".into()), Some(&q));
        assert_ne!(swapped, l);
        assert!(!laws_approx_eq(&swapped, &l, &b).unwrap());
        // relabelling never changes the representation class
        assert_eq!(canonicalize(&swapped, &b).unwrap(), canonicalize(&l, &b).unwrap());

        let eq = independent_law(&pop, &s, &family(&[("a", &p), ("b", &p)]), Tolerances::default()).unwrap();
        assert_eq!(pushforward_by_bijection(&eq, &swap, &pop).unwrap(), eq);

        let grouped = Arc::new(Population::indistinguishable(["a", "b"]));
        assert!(pushforward_by_bijection(&l, &id, &grouped).is_err());
    }

    #[test]
    fn rho_bar_and_canonical_forms() {
        let b = Bounds::default();
        let s = states2();
        let p = law(&[0.2, 0.8]);
        let q = law(&[0.6, 0.4]);
        let left = Arc::new(Population::distinguishable(["a", "b"]));
        let right = Arc::new(Population::distinguishable(["u", "v"]));
        let lp = independent_law(&left, &s, &family(&[("a", &p), ("b", &q)]), Tolerances::default()).unwrap();
        let rq = independent_law(&right, &s, &family(&[("u", &q), ("v", &p)]), Tolerances::default()).unwrap();
        assert!(rho_bar_related(&lp, &rq, &b).unwrap());
        assert!(rho_bar_related(&lp, &lp, &b).unwrap());
        assert_eq!(canonicalize(&lp, &b).unwrap(), canonicalize(&rq, &b).unwrap());

        let rp = independent_law(&right, &s, &family(&[("u", &p), ("v", &p)]), Tolerances::default()).unwrap();
        assert!(!rho_bar_related(&lp, &rp, &b).unwrap());
        assert_ne!(canonicalize(&lp, &b).unwrap(), canonicalize(&rp, &b).unwrap());

        let grouped = Arc::new(Population::indistinguishable(["u", "v"]));
        let gp = independent_law(&grouped, &s, &family(&[("u", &p), ("v", &p)]), Tolerances::default()).unwrap();
        assert!(!rho_bar_related(&rp, &gp, &b).unwrap());

        let sym = symmetric_injective(&left, &s);
        assert_eq!(canonicalize(&sym, &b).unwrap(), canonicalize(&sym.clone(), &b).unwrap());
    }

    #[test]
    fn explicit_product_canonicalises_like_independent() {
        let b = Bounds::default();
        let s = states2();
        let pop = Arc::new(Population::distinguishable(["a", "b"]));
        let u = DiscreteLaw::uniform(2);
        let ind = independent_law(&pop, &s, &family(&[("a", &u), ("b", &u)]), Tolerances::default()).unwrap();
        let table = function_space(&pop, &s, &b).unwrap().into_iter().map(|f| (f, 0.25));
        let exp = PopulationLaw::explicit(&pop, &s, table, Tolerances::default(), &b).unwrap();
        assert!(rho_bar_related(&ind, &exp, &b).unwrap());
        assert_eq!(canonicalize(&ind, &b).unwrap(), canonicalize(&exp, &b).unwrap());
    }

    #[test]
    fn ids_helper_sorted() {
        assert_eq!(ident_set(["b", "a", "b"]), vec![Ident::from("a"), Ident::from("b")]);
    }
}
