//! Exhaustive and randomised verification suites, run by the `check` command.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{all_partitions, partition_refines, Bounds, Ident, Partition};
use crate::error::{Error, Result};
use crate::laws::{
    independent_law, law_is_admissible, rho_bar_related, weak_indistinguishability_report, DiscreteLaw, PopulationLaw,
    Tolerances,
};
use crate::parametric::{moment_transport_check, pull_to_parameters, push_to_laws, ParametricFamily};
use crate::population::{
    function_space, rho_quotient, rho_related, rho_star_quotient, rho_star_related, t_sub, t_sub_is_measurable, xi,
    AssignmentFunction, CountingMeasure, Population, StateId, StateSpace,
};
use crate::representation::{
    collapsed_moments, collapsed_moments_direct, pgf, pgf_unchecked, pgfl, sample_seeded, zeta,
    DiscreteRepresentationLaw, MultiplicityVector,
};

/// Names accepted by [`run_suite`], in execution order for `all`.
pub const SUITES: [&str; 8] = [
    "equivalence",
    "theorem1",
    "tsub",
    "weak",
    "zeta",
    "generating",
    "transport",
    "sampling",
];

/// Result of checking one property over a family of instances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub suite: String,
    pub property: String,
    pub instances: u64,
    pub violations: u64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

struct Tally {
    suite: &'static str,
    rows: Vec<PropertyReport>,
}

impl Tally {
    fn new(suite: &'static str) -> Self {
        Tally { suite, rows: Vec::new() }
    }

    fn record(&mut self, property: &str, ok: bool) {
        let row = match self.rows.iter_mut().find(|r| r.property == property) {
            Some(r) => r,
            None => {
                self.rows.push(PropertyReport {
                    suite: self.suite.to_owned(),
                    property: property.to_owned(),
                    instances: 0,
                    violations: 0,
                });
                self.rows.last_mut().expect("just pushed")
            }
        };
        row.instances += 1;
        row.violations += u64::from(!ok);
    }
}

/// Runs one named suite. `seed` drives the randomised suites.
pub fn run_suite(name: &str, seed: u64, bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    match name {
        "equivalence" => equivalence(bounds),
        "theorem1" => theorem1(bounds),
        "tsub" => tsub(bounds),
        "weak" => weak(seed, bounds),
        "zeta" => zeta_suite(bounds),
        "generating" => generating(seed),
        "transport" => transport(seed),
        "sampling" => sampling(seed),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, seed, bounds)?);
            }
            Ok(out)
        }
        other => Err(Error::Config(format!("unknown check suite {other:?}"))),
    }
}

fn names(prefix: &str, n: usize) -> Vec<Ident> {
    (0..n).map(|i| Ident::new(format!("{prefix}{i}"))).collect()
}

fn state_space(k: usize) -> Arc<StateSpace> {
    Arc::new(StateSpace::proper_only((0..k).map(|i| format!("s{i}"))).expect("distinct labels"))
}

/// Every population on `prefix0..prefix{n-1}` for `n <= max_n`.
pub fn small_populations(prefix: &str, max_n: usize, bounds: &Bounds) -> Result<Vec<Arc<Population>>> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let ids = names(prefix, n);
        for tau in all_partitions(&ids, bounds)? {
            out.push(Arc::new(Population::new(&ids, tau)?));
        }
    }
    Ok(out)
}

fn relation_axioms(t: &mut Tally, label: &str, rel: &[Vec<bool>]) {
    let n = rel.len();
    for i in 0..n {
        t.record(&format!("{label} reflexive"), rel[i][i]);
        for j in 0..n {
            t.record(&format!("{label} symmetric"), rel[i][j] == rel[j][i]);
            if rel[i][j] {
                for (k, &jk) in rel[j].iter().enumerate() {
                    if jk {
                        t.record(&format!("{label} transitive"), rel[i][k]);
                    }
                }
            }
        }
    }
}

fn relation_matrix<T>(items: &[T], f: impl Fn(&T, &T) -> Result<bool>) -> Result<Vec<Vec<bool>>> {
    items
        .iter()
        .map(|a| items.iter().map(|b| f(a, b)).collect())
        .collect()
}

fn equivalence(bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("equivalence");
    for pop in small_populations("x", 4, bounds)? {
        for k in 1..=3 {
            let fs = function_space(&pop, &state_space(k), bounds)?;
            let rel = relation_matrix(&fs, |f, g| rho_related(f, g, bounds))?;
            relation_axioms(&mut t, "rho", &rel);
        }
    }

    let states = state_space(2);
    let mut fs = Vec::new();
    for prefix in ["x", "y"] {
        for pop in small_populations(prefix, 2, bounds)? {
            fs.extend(function_space(&pop, &states, bounds)?);
        }
    }
    let rel = relation_matrix(&fs, |f, g| rho_star_related(f, g, bounds))?;
    relation_axioms(&mut t, "rho*", &rel);

    let laws = independent_laws(&["x", "y"], 2, bounds)?;
    let rel = relation_matrix(&laws, |p, q| rho_bar_related(p, q, bounds))?;
    relation_axioms(&mut t, "rho-bar", &rel);
    Ok(t.rows)
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn theorem1(bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("theorem1");
    for k in 1..=3usize {
        let states = state_space(k);
        for n in 0..=4usize {
            let mut fs = Vec::new();
            for prefix in ["x", "y"] {
                let pop = Arc::new(Population::indistinguishable(names(prefix, n)));
                fs.extend(function_space(&pop, &states, bounds)?);
            }
            let classes = rho_star_quotient(&fs, bounds)?;
            let expected = binomial((n + k - 1) as u64, n as u64);
            t.record("class count equals multiset count", classes.len() as u64 == expected);
            let images: BTreeSet<CountingMeasure<StateId>> = classes.iter().map(|c| xi(&c[0])).collect();
            t.record("xi injective on classes", images.len() == classes.len());
            for c in &classes {
                t.record("xi constant on classes", c.iter().all(|f| xi(f) == xi(&c[0])));
                t.record("xi has mass n", xi(&c[0]).total_mass() == n as u64);
            }
        }
    }
    Ok(t.rows)
}

fn subsets(ids: &[Ident]) -> Vec<Vec<Ident>> {
    (0..1u32 << ids.len())
        .map(|mask| {
            ids.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

fn tsub(bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("tsub");
    let states = state_space(2);
    for pop in small_populations("x", 4, bounds)? {
        let classes = rho_quotient(&function_space(&pop, &states, bounds)?, bounds)?;
        for sub in subsets(pop.individuals()) {
            let mut constant = true;
            for c in &classes {
                let first = t_sub(&c[0], &sub)?;
                for f in c {
                    constant &= t_sub(f, &sub)? == first;
                }
            }
            t.record(
                "measurable iff constant on rho-classes",
                t_sub_is_measurable(&pop, &sub)? == constant,
            );
        }
    }
    Ok(t.rows)
}

fn palette(k: usize) -> Vec<DiscreteLaw> {
    let mut out: Vec<DiscreteLaw> = (0..k).map(|s| DiscreteLaw::point_mass(k, StateId(s))).collect();
    out.push(DiscreteLaw::uniform(k));
    out
}

/// Every admissible independent law with individual laws drawn from a small
/// palette, on populations of at most three individuals.
pub fn independent_laws(prefixes: &[&str], k: usize, bounds: &Bounds) -> Result<Vec<PopulationLaw>> {
    let states = state_space(k);
    let pal = palette(k);
    let mut out = Vec::new();
    for prefix in prefixes {
        for pop in small_populations(prefix, 3, bounds)? {
            let b = pop.tau().num_blocks();
            for code in 0..pal.len().pow(b as u32) {
                let mut laws = BTreeMap::new();
                let mut c = code;
                for block in pop.tau().blocks() {
                    let p = &pal[c % pal.len()];
                    c /= pal.len();
                    for x in block {
                        laws.insert(x.clone(), p.clone());
                    }
                }
                out.push(independent_law(&pop, &states, &laws, Tolerances::default())?);
            }
        }
    }
    Ok(out)
}

fn symmetrised_table(pop: &Arc<Population>, states: &Arc<StateSpace>, rng: &mut ChaCha8Rng, bounds: &Bounds) -> Result<PopulationLaw> {
    let fs = function_space(pop, states, bounds)?;
    let group = crate::combinatorics::sym_group(pop.tau(), bounds)?;
    let raw: BTreeMap<AssignmentFunction, f64> = fs.iter().map(|f| (f.clone(), rng.gen::<f64>())).collect();
    let total: f64 = raw.values().sum();
    let table = fs.iter().map(|f| {
        let avg = group.iter().map(|s| raw[&f.permuted(s)]).sum::<f64>() / group.len() as f64;
        (f.clone(), avg / total)
    });
    PopulationLaw::explicit(pop, states, table, Tolerances::default(), bounds)
}

fn equal_law_partition(law: &PopulationLaw) -> Result<Partition> {
    let family = law.individual_laws().ok_or(Error::NotIndependent)?;
    let ids = law.population().individuals();
    let mut groups: Vec<(DiscreteLaw, Vec<Ident>)> = Vec::new();
    for (x, p) in ids.iter().zip(family) {
        match groups.iter_mut().find(|(q, _)| q.approx_eq(p, law.tolerances().law)) {
            Some((_, g)) => g.push(x.clone()),
            None => groups.push((p.clone(), vec![x.clone()])),
        }
    }
    if groups.is_empty() {
        return Ok(Partition::discrete(&[]));
    }
    Partition::new(groups.into_iter().map(|(_, g)| g).collect::<Vec<_>>())
}

fn weak(seed: u64, bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("weak");
    let mut laws = independent_laws(&["x"], 2, bounds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = state_space(2);
    for pop in small_populations("x", 3, bounds)? {
        for _ in 0..3 {
            laws.push(symmetrised_table(&pop, &states, &mut rng, bounds)?);
        }
    }
    for law in &laws {
        t.record("law admissible", law_is_admissible(law, bounds)?);
        let report = match weak_indistinguishability_report(law, bounds) {
            Ok(r) => r,
            Err(Error::NoGreatestElement) => {
                t.record("greatest invariant partition exists", false);
                continue;
            }
            Err(e) => return Err(e),
        };
        t.record("greatest invariant partition exists", true);
        t.record("tau refines eta", partition_refines(law.population().tau(), &report.eta)?);
        t.record("eta is invariant", report.valid.contains(&report.eta));
        for v in &report.valid {
            t.record("eta dominates every invariant partition", partition_refines(v, &report.eta)?);
        }
        if law.is_independent() {
            t.record("eta equals equal-law groups", report.eta == equal_law_partition(law)?);
        }
    }
    Ok(t.rows)
}

fn zeta_suite(bounds: &Bounds) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("zeta");
    let laws = independent_laws(&["x", "y"], 2, bounds)?;
    let images = laws.iter().map(zeta).collect::<Result<Vec<_>>>()?;
    for (i, p) in laws.iter().enumerate() {
        t.record("total mass equals population size", images[i].total_mass() == p.population().size() as u64);
        for (j, q) in laws.iter().enumerate() {
            if rho_bar_related(p, q, bounds)? {
                t.record("rho-bar related laws have equal images", images[i] == images[j]);
            }
            let same_family = p.population().individuals() == q.population().individuals()
                && p.individual_laws() == q.individual_laws();
            if same_family {
                t.record("images forget tau", images[i] == images[j]);
            }
        }
    }
    Ok(t.rows)
}

/// A random discrete representation law with `atoms` atom laws on `k` states,
/// `support` multiplicity vectors with entries at most `max_count`.
pub fn random_discrete_law(
    rng: &mut impl Rng,
    atoms: usize,
    k: usize,
    support: usize,
    max_count: u64,
) -> Result<DiscreteRepresentationLaw> {
    let states = state_space(k);
    let laws = (0..atoms)
        .map(|_| DiscreteLaw::normalized((0..k).map(|_| rng.gen_range(0.01..1.0)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let mut c: BTreeMap<MultiplicityVector, f64> = BTreeMap::new();
    for _ in 0..support {
        let n: Vec<u64> = (0..atoms).map(|_| rng.gen_range(0..=max_count)).collect();
        *c.entry(MultiplicityVector(n)).or_insert(0.0) += rng.gen_range(0.01..1.0);
    }
    let total: f64 = c.values().sum();
    let c = c.into_iter().map(|(n, m)| (n, m / total));
    DiscreteRepresentationLaw::new(&states, laws, c, Tolerances { mass: 1e-9, law: 1e-9 })
}

fn generating(seed: u64) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("generating");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let atoms = rng.gen_range(1..=4);
        let support = rng.gen_range(1..=20);
        let d = random_discrete_law(&mut rng, atoms, 3, support, 4)?;
        let z: Vec<f64> = (0..atoms).map(|_| rng.gen::<f64>()).collect();
        let g = pgfl(&d, |p| z[d.atom_index(p).expect("atom law")])?;
        t.record("G(h) = G'(h(p_1), ..., h(p_k)) within 1e-12", (g - pgf(&d, &z)?).abs() <= 1e-12);

        let region: Vec<StateId> = (0..3).filter(|_| rng.gen_bool(0.5)).map(StateId).collect();
        let (m, v) = collapsed_moments(&d, &region);
        let (md, vd) = collapsed_moments_direct(&d, &region);
        t.record("collapsed moments match direct expectation within 1e-9", (m - md).abs() <= 1e-9 && (v - vd).abs() <= 1e-9);

        let means = d.multiplicity_means();
        for theta in 0..atoms {
            let h = 1e-4;
            let mut up = vec![1.0; atoms];
            let mut down = vec![1.0; atoms];
            up[theta] += h;
            down[theta] -= h;
            let deriv = (pgf_unchecked(&d, &up) - pgf_unchecked(&d, &down)) / (2.0 * h);
            t.record("dG'/dz at 1 equals mean multiplicity within 1e-6", (deriv - means[theta]).abs() <= 1e-6);
        }
    }
    Ok(t.rows)
}

fn transport(seed: u64) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("transport");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let atoms = rng.gen_range(1..=4);
        let support = rng.gen_range(1..=20);
        let d = random_discrete_law(&mut rng, atoms, 3, support, 4)?;
        let extra = rng.gen_range(0..=2);
        let mut members: Vec<(Vec<f64>, DiscreteLaw)> = d
            .atom_laws()
            .iter()
            .enumerate()
            .map(|(i, p)| (vec![i as f64, rng.gen::<f64>()], p.clone()))
            .collect();
        for j in 0..extra {
            let p = DiscreteLaw::normalized((0..3).map(|_| rng.gen_range(0.01..1.0)).collect())?;
            members.push((vec![(atoms + j) as f64, 0.0], p));
        }
        let len = members.len();
        let fam = ParametricFamily::new(d.state_space(), members, *d.tolerances())?;
        let thetas: Vec<usize> = (0..len).filter(|_| rng.gen_bool(0.5)).collect();
        for n in 1..=3 {
            let (l, r) = moment_transport_check(&d, &fam, &thetas, n)?;
            t.record("E[M(F[B])^n] = E[N(B)^n] within 1e-9", (l - r).abs() <= 1e-9);
        }
        let pulled = pull_to_parameters(&d, &fam)?;
        let pushed = push_to_laws(&pulled, &fam)?;
        t.record("push after pull is the identity", pushed.equivalent(&d));
        t.record("pull after push is the identity", pull_to_parameters(&pushed, &fam)? == pulled);
    }
    Ok(t.rows)
}

/// Frequency of both draws landing in the same state for two individuals
/// sharing a uniform law on two states, with its 3-sigma band around 0.5.
pub fn same_mode_frequency(seed: u64, count: usize) -> Result<(f64, f64)> {
    let states = state_space(2);
    let d = DiscreteRepresentationLaw::new(&states, vec![DiscreteLaw::uniform(2)], [(vec![2u64], 1.0)], Tolerances::default())?;
    let draws = sample_seeded(&d, seed, count)?;
    let same = draws.iter().filter(|s| s.states.support_len() == 1).count();
    let band = 3.0 * (0.25 / count as f64).sqrt();
    Ok((same as f64 / count as f64, band))
}

fn sampling(seed: u64) -> Result<Vec<PropertyReport>> {
    let mut t = Tally::new("sampling");
    let (freq, band) = same_mode_frequency(seed, 100_000)?;
    t.record("same-mode frequency within 3 sigma of 0.5", (freq - 0.5).abs() <= band);
    Ok(t.rows)
}
