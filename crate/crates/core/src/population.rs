//! Finite state spaces, structured populations and assignment functions.
//!
//! An [`AssignmentFunction`] maps every individual of a [`Population`] to a
//! state. Two functions on the same population are `rho`-related when they
//! differ by a permutation of strongly indistinguishable individuals; events
//! that cannot tell such functions apart are exactly the unions of
//! `rho`-classes ("saturated" events).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::combinatorics::{
    ident_set, relation_preserving_bijections, sym_group, Bounds, Ident, Partition, Permutation,
};
use crate::error::{Error, Result};

/// Index of a state in a [`StateSpace`]. Proper states come first, the empty
/// state (if any) is last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct StateId(pub usize);

/// A finite state space: proper states plus an optional isolated empty state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSpace {
    proper: Vec<String>,
    empty: Option<String>,
}

impl StateSpace {
    pub fn new<I, S>(proper: I, empty: Option<&str>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let proper: Vec<String> = proper.into_iter().map(Into::into).collect();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for s in proper.iter().map(String::as_str).chain(empty) {
            if !seen.insert(s) {
                return Err(Error::InvalidStateSpace(format!("duplicate label {s:?}")));
            }
        }
        Ok(StateSpace {
            proper,
            empty: empty.map(str::to_owned),
        })
    }

    /// Proper states plus an empty state labelled `psi`.
    pub fn with_empty<I, S>(proper: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(proper, Some("psi"))
    }

    /// A state space made of proper states only.
    pub fn proper_only<I, S>(proper: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(proper, None)
    }

    pub fn len(&self) -> usize {
        self.proper.len() + usize::from(self.empty.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_proper(&self) -> usize {
        self.proper.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.len()).map(StateId)
    }

    pub fn empty_state(&self) -> Option<StateId> {
        self.empty.as_ref().map(|_| StateId(self.proper.len()))
    }

    pub fn label(&self, s: StateId) -> &str {
        if s.0 < self.proper.len() {
            &self.proper[s.0]
        } else {
            self.empty.as_deref().expect("state index in range")
        }
    }

    pub fn state(&self, label: &str) -> Option<StateId> {
        if let Some(i) = self.proper.iter().position(|p| p == label) {
            return Some(StateId(i));
        }
        (self.empty.as_deref() == Some(label)).then_some(StateId(self.proper.len()))
    }
}

/// A structured population `(X, tau)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Population {
    tau: Partition,
}

impl Population {
    pub fn new(individuals: &[Ident], tau: Partition) -> Result<Self> {
        if ident_set(individuals.iter().cloned()).as_slice() != tau.ground_set() {
            return Err(Error::MismatchedGroundSets);
        }
        Ok(Population { tau })
    }

    pub fn from_partition(tau: Partition) -> Self {
        Population { tau }
    }

    pub fn from_blocks<B, T>(blocks: B) -> Result<Self>
    where
        B: IntoIterator,
        B::Item: IntoIterator<Item = T>,
        T: Into<Ident>,
    {
        Ok(Population {
            tau: Partition::new(blocks)?,
        })
    }

    /// All individuals weakly distinguishable (`tau = O`).
    pub fn distinguishable<I, T>(ids: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Ident>,
    {
        Population {
            tau: Partition::discrete(&ident_set(ids)),
        }
    }

    /// All individuals strongly indistinguishable (`tau = I`).
    pub fn indistinguishable<I, T>(ids: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Ident>,
    {
        Population {
            tau: Partition::indiscrete(&ident_set(ids)),
        }
    }

    /// Sorted individuals.
    pub fn individuals(&self) -> &[Ident] {
        self.tau.ground_set()
    }

    pub fn tau(&self) -> &Partition {
        &self.tau
    }

    pub fn size(&self) -> usize {
        self.individuals().len()
    }

    /// Block-size multiset of `tau`, in decreasing order.
    pub fn structure(&self) -> Vec<usize> {
        self.tau.block_sizes()
    }

    pub fn index_of(&self, x: &Ident) -> Option<usize> {
        self.individuals().binary_search(x).ok()
    }

    pub(crate) fn check_subset(&self, subset: &[Ident]) -> Result<Vec<usize>> {
        subset
            .iter()
            .map(|x| self.index_of(x).ok_or_else(|| Error::NotSubset(x.to_string())))
            .collect()
    }
}

/// A map from the individuals of a population to states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssignmentFunction {
    population: Arc<Population>,
    states: Arc<StateSpace>,
    values: Vec<StateId>,
}

impl AssignmentFunction {
    /// Builds a function from `(individual, state)` pairs covering the population exactly.
    pub fn new<I, T>(population: Arc<Population>, states: Arc<StateSpace>, graph: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, StateId)>,
        T: Into<Ident>,
    {
        let mut values: Vec<Option<StateId>> = vec![None; population.size()];
        for (x, s) in graph {
            let x: Ident = x.into();
            let i = population
                .index_of(&x)
                .ok_or_else(|| Error::DomainMismatch(format!("{x} is not in the population")))?;
            if s.0 >= states.len() {
                return Err(Error::DomainMismatch(format!("state index {} out of range", s.0)));
            }
            if values[i].replace(s).is_some() {
                return Err(Error::DomainMismatch(format!("{x} assigned twice")));
            }
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::DomainMismatch("function is not total".into()))?;
        Ok(AssignmentFunction {
            population,
            states,
            values,
        })
    }

    /// Builds a function from values listed in sorted-individual order.
    pub fn from_values(population: Arc<Population>, states: Arc<StateSpace>, values: Vec<StateId>) -> Result<Self> {
        if values.len() != population.size() {
            return Err(Error::Dimension {
                expected: population.size(),
                got: values.len(),
            });
        }
        if values.iter().any(|s| s.0 >= states.len()) {
            return Err(Error::DomainMismatch("state index out of range".into()));
        }
        Ok(AssignmentFunction {
            population,
            states,
            values,
        })
    }

    pub fn population(&self) -> &Arc<Population> {
        &self.population
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    /// Values in sorted-individual order.
    pub fn values(&self) -> &[StateId] {
        &self.values
    }

    pub fn value(&self, x: &Ident) -> Option<StateId> {
        self.population.index_of(x).map(|i| self.values[i])
    }

    /// `f ∘ sigma`.
    pub fn permuted(&self, sigma: &Permutation) -> AssignmentFunction {
        let values = (0..self.values.len())
            .map(|i| self.values[sigma.image_index(i)])
            .collect();
        AssignmentFunction {
            population: Arc::clone(&self.population),
            states: Arc::clone(&self.states),
            values,
        }
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<_> = self.values.iter().collect();
        distinct.len() == self.values.len()
    }
}

impl fmt::Display for AssignmentFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, s)) in self.population.individuals().iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({x},{})", self.states.label(*s))?;
        }
        f.write_str("}")
    }
}

/// A finite set of assignment functions.
pub type Event = BTreeSet<AssignmentFunction>;

/// A finite integer-valued measure: points with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountingMeasure<T: Ord> {
    atoms: BTreeMap<T, u64>,
}

impl<T: Ord> Default for CountingMeasure<T> {
    fn default() -> Self {
        CountingMeasure { atoms: BTreeMap::new() }
    }
}

impl<T: Ord> CountingMeasure<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The Dirac measure at `point`.
    pub fn dirac(point: T) -> Self {
        let mut m = Self::new();
        m.add(point, 1);
        m
    }

    pub fn add(&mut self, point: T, multiplicity: u64) {
        if multiplicity > 0 {
            *self.atoms.entry(point).or_default() += multiplicity;
        }
    }

    pub fn get(&self, point: &T) -> u64 {
        self.atoms.get(point).copied().unwrap_or(0)
    }

    pub fn total_mass(&self) -> u64 {
        self.atoms.values().sum()
    }

    /// Mass of the points satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(&T) -> bool) -> u64 {
        self.atoms.iter().filter(|(p, _)| pred(p)).map(|(_, n)| n).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u64)> {
        self.atoms.iter().map(|(p, &n)| (p, n))
    }

    /// Number of distinct atoms.
    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn merged(&self, other: &Self) -> Self
    where
        T: Clone,
    {
        let mut out = self.clone();
        for (p, n) in other.iter() {
            out.add(p.clone(), n);
        }
        out
    }
}

impl<T: Ord> FromIterator<T> for CountingMeasure<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Self::new();
        for p in iter {
            m.add(p, 1);
        }
        m
    }
}

impl<T: Ord + Serialize> Serialize for CountingMeasure<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.atoms.len()))?;
        for (p, n) in &self.atoms {
            seq.serialize_element(&(p, n))?;
        }
        seq.end()
    }
}

fn function_space_size(population: &Population, states: &StateSpace) -> u128 {
    (0..population.size()).fold(1u128, |acc, _| acc.saturating_mul(states.len() as u128))
}

/// Every function from the population to the state space, in lexicographic order.
pub fn function_space(
    population: &Arc<Population>,
    states: &Arc<StateSpace>,
    bounds: &Bounds,
) -> Result<Vec<AssignmentFunction>> {
    let size = function_space_size(population, states);
    if size > u128::from(bounds.max_function_space) {
        return Err(Error::SizeLimit {
            what: "function space",
            size,
            limit: u128::from(bounds.max_function_space),
        });
    }
    let n = population.size();
    let k = states.len();
    if k == 0 && n > 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut digits = vec![0usize; n];
    loop {
        out.push(AssignmentFunction {
            population: Arc::clone(population),
            states: Arc::clone(states),
            values: digits.iter().map(|&d| StateId(d)).collect(),
        });
        // odometer, last individual fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Injective functions only.
pub fn injective_functions(
    population: &Arc<Population>,
    states: &Arc<StateSpace>,
    bounds: &Bounds,
) -> Result<Vec<AssignmentFunction>> {
    Ok(function_space(population, states, bounds)?
        .into_iter()
        .filter(AssignmentFunction::is_injective)
        .collect())
}

fn same_domain(f: &AssignmentFunction, g: &AssignmentFunction) -> Result<()> {
    if f.population != g.population {
        return Err(Error::DomainMismatch("functions are defined on different populations".into()));
    }
    if f.states != g.states {
        return Err(Error::DomainMismatch("functions use different state spaces".into()));
    }
    Ok(())
}

/// `f rho g` iff `f = g ∘ sigma` for some `sigma` in `Sym(X, tau)`.
pub fn rho_related(f: &AssignmentFunction, g: &AssignmentFunction, bounds: &Bounds) -> Result<bool> {
    same_domain(f, g)?;
    let group = sym_group(f.population.tau(), bounds)?;
    Ok(group.iter().any(|s| {
        (0..f.values.len()).all(|i| f.values[i] == g.values[s.image_index(i)])
    }))
}

/// Orbit of `f` under precomposition with `group`.
fn orbit(f: &AssignmentFunction, group: &[Permutation]) -> BTreeSet<AssignmentFunction> {
    group.iter().map(|s| f.permuted(s)).collect()
}

/// Splits `functions` (all on one population) into `rho`-classes.
///
/// Each class is sorted; classes are ordered by their least member, which is
/// the class representative.
pub fn rho_quotient(functions: &[AssignmentFunction], bounds: &Bounds) -> Result<Vec<Vec<AssignmentFunction>>> {
    let Some(first) = functions.first() else {
        return Ok(Vec::new());
    };
    for f in functions {
        same_domain(first, f).map_err(|_| Error::MixedPopulations)?;
    }
    let group = sym_group(first.population.tau(), bounds)?;
    let remaining: BTreeSet<&AssignmentFunction> = functions.iter().collect();
    let mut assigned: BTreeSet<&AssignmentFunction> = BTreeSet::new();
    let mut classes = Vec::new();
    for f in &remaining {
        if assigned.contains(f) {
            continue;
        }
        let orb = orbit(f, &group);
        let class: Vec<AssignmentFunction> = orb.into_iter().filter(|g| remaining.contains(g)).collect();
        for g in &class {
            assigned.insert(remaining.get(g).expect("member"));
        }
        classes.push(class);
    }
    classes.sort();
    Ok(classes)
}

/// The quotient of the full function space by `rho`.
pub fn rho_classes(
    population: &Arc<Population>,
    states: &Arc<StateSpace>,
    bounds: &Bounds,
) -> Result<Vec<Vec<AssignmentFunction>>> {
    let all = function_space(population, states, bounds)?;
    rho_quotient(&all, bounds)
}

fn homogeneous(event: &Event) -> Result<Option<&AssignmentFunction>> {
    let mut it = event.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    if it.any(|f| f.population != first.population || f.states != first.states) {
        return Err(Error::MixedPopulations);
    }
    Ok(Some(first))
}

/// True iff the event is closed under `rho`.
pub fn is_saturated_event(event: &Event, bounds: &Bounds) -> Result<bool> {
    let Some(first) = homogeneous(event)? else {
        return Ok(true);
    };
    let group = sym_group(first.population.tau(), bounds)?;
    Ok(event
        .iter()
        .all(|f| group.iter().all(|s| event.contains(&f.permuted(s)))))
}

/// Smallest saturated event containing `event`.
pub fn saturate_event(event: &Event, bounds: &Bounds) -> Result<Event> {
    let Some(first) = homogeneous(event)? else {
        return Ok(Event::new());
    };
    let group = sym_group(first.population.tau(), bounds)?;
    Ok(event.iter().flat_map(|f| orbit(f, &group)).collect())
}

/// `f rho* g` iff `f = g ∘ nu` for a relation-preserving bijection `nu`.
pub fn rho_star_related(f: &AssignmentFunction, g: &AssignmentFunction, bounds: &Bounds) -> Result<bool> {
    if f.states != g.states {
        return Err(Error::DomainMismatch("functions use different state spaces".into()));
    }
    let nus = relation_preserving_bijections(f.population.tau(), g.population.tau(), bounds)?;
    Ok(nus
        .iter()
        .any(|nu| (0..f.values.len()).all(|i| f.values[i] == g.values[nu.image_index(i)])))
}

/// Groups functions (possibly on different populations) into `rho*`-classes.
pub fn rho_star_quotient(functions: &[AssignmentFunction], bounds: &Bounds) -> Result<Vec<Vec<AssignmentFunction>>> {
    let mut classes: Vec<Vec<AssignmentFunction>> = Vec::new();
    let mut sorted = functions.to_vec();
    sorted.sort();
    sorted.dedup();
    'next: for f in sorted {
        for class in classes.iter_mut() {
            if rho_star_related(&f, &class[0], bounds)? {
                class.push(f);
                continue 'next;
            }
        }
        classes.push(vec![f]);
    }
    Ok(classes)
}

/// `xi(f) = sum over individuals of the Dirac mass at f(x)`.
pub fn xi(f: &AssignmentFunction) -> CountingMeasure<StateId> {
    f.values.iter().copied().collect()
}

/// `T_X(f)`: the counting measure of the states of the individuals in `subset`.
pub fn t_sub(f: &AssignmentFunction, subset: &[Ident]) -> Result<CountingMeasure<StateId>> {
    let idx = f.population.check_subset(subset)?;
    let idx: BTreeSet<usize> = idx.into_iter().collect();
    Ok(idx.into_iter().map(|i| f.values[i]).collect())
}

/// True iff `T_X` is measurable for the saturated events, i.e. `subset` is a
/// union of `tau`-blocks.
pub fn t_sub_is_measurable(population: &Population, subset: &[Ident]) -> Result<bool> {
    population.check_subset(subset)?;
    Ok(population.tau().is_union_of_blocks(subset))
}
