//! Experiment configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::Deserialize;

use crate::combinatorics::{Bounds, Ident, Partition};
use crate::error::{Error, Result};
use crate::laws::{independent_law, DiscreteLaw, PopulationLaw, Tolerances};
use crate::parametric::{gaussian_grid_family, NumericGrid};
use crate::population::{Population, StateSpace};
use crate::representation::{to_discrete, DiscreteRepresentationLaw, StochasticRepresentation};

/// Top-level JSON document read by every subcommand.
#[derive(Clone, Debug, Default, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub state_space: Option<StateSpaceSpec>,
    #[serde(default)]
    pub populations: BTreeMap<String, PopulationSpec>,
    #[serde(default)]
    pub laws: BTreeMap<String, LawSpec>,
    pub representation: Option<RepresentationSpec>,
    pub quotient: Option<QuotientSpec>,
    #[serde(default)]
    pub queries: Vec<Query>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: TolerancesSpec,
    #[serde(default)]
    pub bounds: BoundsSpec,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StateSpaceSpec {
    /// Labels of the proper states.
    pub labels: Vec<String>,
    /// Label of the empty state, if the space has one.
    pub empty: Option<String>,
    /// Numeric coordinate of each proper state, strictly increasing.
    pub grid: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    pub individuals: Vec<String>,
    /// Blocks of strongly indistinguishable individuals; singletons if omitted.
    pub tau: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(untagged)]
pub enum LawSpec {
    /// Probabilities in state order, the empty state last.
    Weights(Vec<f64>),
    /// A Gaussian discretised onto the numeric grid.
    Gaussian { gaussian: GaussianSpec },
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    pub mean: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RepresentationSpec {
    /// Independent population laws with their probabilities.
    Support(Vec<SupportAtomSpec>),
    /// Atom laws and a law on multiplicity vectors.
    Discrete(DiscreteSpec),
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SupportAtomSpec {
    pub population: String,
    /// Law name shared by every individual.
    pub law: Option<String>,
    /// Law name per individual; overrides `law`.
    #[serde(default)]
    pub laws: BTreeMap<String, String>,
    pub mass: f64,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSpec {
    /// Law names, in the order used by multiplicity vectors.
    pub atoms: Vec<String>,
    pub c: Vec<MultiplicityMass>,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityMass {
    pub n: Vec<u64>,
    pub mass: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Permutations within strongly indistinguishable blocks of one population.
    #[default]
    Rho,
    /// Relation-preserving bijections across populations.
    RhoStar,
}

#[derive(Clone, Debug, Default, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    /// Population names; all populations if omitted.
    pub populations: Option<Vec<String>>,
    #[serde(default)]
    pub relation: Relation,
    /// Restrict to injective assignment functions.
    #[serde(default)]
    pub injective: bool,
}

/// A statistic request for `stats`.
#[derive(Clone, Debug, Deserialize, JsonSchema)]
pub struct Query {
    pub id: String,
    #[serde(flatten)]
    pub kind: QueryKind,
}

#[derive(Clone, Debug, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QueryKind {
    /// `E[|X|^n]`.
    CardinalityMoment { n: u32 },
    /// `E[|X / tau|^n]`.
    StructureMoment { n: u32 },
    /// Probability of each block-size multiset.
    StructureMarginal,
    /// Blocks of size `m` in support atom `atom` whose expected number of
    /// points in `states` is at least `at_least`.
    ChiM {
        atom: usize,
        m: usize,
        states: Vec<String>,
        at_least: f64,
    },
    /// Individuals of support atom `atom` whose marginal is one of `laws`,
    /// and the summed marginal mass of `states`.
    Chi {
        atom: usize,
        laws: Vec<String>,
        states: Vec<String>,
    },
    /// Mean and variance of the number of individual laws among `laws`.
    LawsMeanVariance { laws: Vec<String> },
    /// Mean and variance of the number of individuals in `states`.
    CollapsedMoments { states: Vec<String> },
    /// Means and covariances of the multiplicity vector.
    MultiplicityMoments,
    /// Generating function of the multiplicity vector at `z`.
    Pgf { z: Vec<f64> },
    /// Generating functional with `h(law) = values[law]`, `default` elsewhere.
    Pgfl {
        values: BTreeMap<String, f64>,
        #[serde(default = "one")]
        default: f64,
    },
    /// Monte Carlo mean and variance of the number of sampled individuals in
    /// `states`.
    SampleMean { states: Vec<String>, count: usize },
}

impl QueryKind {
    pub fn name(&self) -> &'static str {
        match self {
            QueryKind::CardinalityMoment { .. } => "cardinality_moment",
            QueryKind::StructureMoment { .. } => "structure_moment",
            QueryKind::StructureMarginal => "structure_marginal",
            QueryKind::ChiM { .. } => "chi_m",
            QueryKind::Chi { .. } => "chi",
            QueryKind::LawsMeanVariance { .. } => "laws_mean_variance",
            QueryKind::CollapsedMoments { .. } => "collapsed_moments",
            QueryKind::MultiplicityMoments => "multiplicity_moments",
            QueryKind::Pgf { .. } => "pgf",
            QueryKind::Pgfl { .. } => "pgfl",
            QueryKind::SampleMean { .. } => "sample_mean",
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, Default, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct TolerancesSpec {
    pub mass: Option<f64>,
    pub law: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub max_ground_set: Option<usize>,
    pub max_group_order: Option<u64>,
    pub max_function_space: Option<u64>,
}

impl BoundsSpec {
    pub fn resolve(&self, base: Bounds) -> Bounds {
        Bounds {
            max_ground_set: self.max_ground_set.unwrap_or(base.max_ground_set),
            max_group_order: self.max_group_order.unwrap_or(base.max_group_order),
            max_function_space: self.max_function_space.unwrap_or(base.max_function_space),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// JSON schema of [`ExperimentConfig`].
pub fn config_schema() -> serde_json::Value {
    serde_json::to_value(schemars::schema_for!(ExperimentConfig)).expect("schema serialises")
}

/// A configuration with every name resolved.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub states: Option<Arc<StateSpace>>,
    pub populations: BTreeMap<String, Arc<Population>>,
    pub laws: BTreeMap<String, DiscreteLaw>,
    pub representation: Option<Representation>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub bounds: Bounds,
}

#[derive(Clone, Debug)]
pub enum Representation {
    Support(StochasticRepresentation),
    Discrete(DiscreteRepresentationLaw),
}

impl Representation {
    pub fn discrete(&self) -> Result<DiscreteRepresentationLaw> {
        match self {
            Representation::Support(r) => to_discrete(r),
            Representation::Discrete(d) => Ok(d.clone()),
        }
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::SizeLimit { .. } | Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl Experiment {
    /// Resolves every name in `cfg`. `bounds` are used as given; the config's
    /// own `bounds` object is not consulted here.
    pub fn build(cfg: &ExperimentConfig, bounds: Bounds, seed: Option<u64>) -> Result<Self> {
        let tolerances = Tolerances {
            mass: cfg.tolerances.mass.unwrap_or(Tolerances::default().mass),
            law: cfg.tolerances.law.unwrap_or(Tolerances::default().law),
        };
        let (states, grid) = match &cfg.state_space {
            Some(spec) => {
                let s = Arc::new(StateSpace::new(spec.labels.clone(), spec.empty.as_deref()).map_err(config_err)?);
                let grid = spec
                    .grid
                    .as_ref()
                    .map(|g| NumericGrid::new(&s, g.clone()))
                    .transpose()
                    .map_err(config_err)?;
                (Some(s), grid)
            }
            None => (None, None),
        };

        let mut populations = BTreeMap::new();
        for (name, spec) in &cfg.populations {
            if spec.individuals.len() > bounds.max_ground_set {
                return Err(Error::SizeLimit {
                    what: "population",
                    size: spec.individuals.len() as u128,
                    limit: bounds.max_ground_set as u128,
                });
            }
            let ids: Vec<Ident> = spec.individuals.iter().map(Ident::new).collect();
            let tau = match &spec.tau {
                Some(blocks) => Partition::new(blocks.clone()),
                None => Ok(Partition::discrete(&ids)),
            }
            .map_err(|e| Error::Config(format!("population {name:?}: {e}")))?;
            let pop = Population::new(&ids, tau).map_err(|e| Error::Config(format!("population {name:?}: {e}")))?;
            populations.insert(name.clone(), Arc::new(pop));
        }

        let mut laws = BTreeMap::new();
        for (name, spec) in &cfg.laws {
            let s = states
                .as_ref()
                .ok_or_else(|| Error::Config("laws need a state_space".into()))?;
            let law = match spec {
                LawSpec::Weights(w) => {
                    if w.len() != s.len() {
                        return Err(Error::Config(format!(
                            "law {name:?} has {} weights for {} states",
                            w.len(),
                            s.len()
                        )));
                    }
                    DiscreteLaw::new(w.clone(), &tolerances)
                }
                LawSpec::Gaussian { gaussian } => {
                    let g = grid
                        .as_ref()
                        .ok_or_else(|| Error::Config(format!("law {name:?} needs state_space.grid")))?;
                    gaussian_grid_family(&[gaussian.mean], gaussian.sigma, g, tolerances).map(|f| f.law(0).clone())
                }
            }
            .map_err(|e| Error::Config(format!("law {name:?}: {e}")))?;
            laws.insert(name.clone(), law);
        }

        let mut exp = Experiment {
            states,
            populations,
            laws,
            representation: None,
            seed: seed.or(cfg.seed).unwrap_or(0),
            tolerances,
            bounds,
        };
        exp.representation = cfg
            .representation
            .as_ref()
            .map(|r| exp.build_representation(r))
            .transpose()?;
        Ok(exp)
    }

    pub fn state_space(&self) -> Result<&Arc<StateSpace>> {
        self.states
            .as_ref()
            .ok_or_else(|| Error::Config("missing state_space".into()))
    }

    pub fn law(&self, name: &str) -> Result<&DiscreteLaw> {
        self.laws
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown law {name:?}")))
    }

    pub fn population(&self, name: &str) -> Result<&Arc<Population>> {
        self.populations
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown population {name:?}")))
    }

    pub fn states_named(&self, labels: &[String]) -> Result<Vec<crate::population::StateId>> {
        let s = self.state_space()?;
        labels
            .iter()
            .map(|l| s.state(l).ok_or_else(|| Error::Config(format!("unknown state {l:?}"))))
            .collect()
    }

    pub fn representation(&self) -> Result<&Representation> {
        self.representation
            .as_ref()
            .ok_or_else(|| Error::Config("missing representation".into()))
    }

    fn build_representation(&self, spec: &RepresentationSpec) -> Result<Representation> {
        let states = self.state_space()?;
        match spec {
            RepresentationSpec::Support(atoms) => {
                let mut support = Vec::with_capacity(atoms.len());
                for (i, atom) in atoms.iter().enumerate() {
                    support.push((self.support_law(i, atom)?, atom.mass));
                }
                StochasticRepresentation::new(states, support, self.tolerances)
                    .map(Representation::Support)
                    .map_err(config_err)
            }
            RepresentationSpec::Discrete(d) => {
                let atom_laws = d
                    .atoms
                    .iter()
                    .map(|n| self.law(n).cloned())
                    .collect::<Result<Vec<_>>>()?;
                let c = d.c.iter().map(|m| (m.n.clone(), m.mass));
                DiscreteRepresentationLaw::new(states, atom_laws, c, self.tolerances)
                    .map(Representation::Discrete)
                    .map_err(config_err)
            }
        }
    }

    fn support_law(&self, i: usize, atom: &SupportAtomSpec) -> Result<PopulationLaw> {
        let pop = self.population(&atom.population)?;
        let mut family = BTreeMap::new();
        for x in pop.individuals() {
            let name = atom
                .laws
                .get(x.as_str())
                .or(atom.law.as_ref())
                .ok_or_else(|| Error::Config(format!("support atom {i}: no law for {x}")))?;
            family.insert(x.clone(), self.law(name)?.clone());
        }
        if let Some(extra) = atom.laws.keys().find(|k| pop.index_of(&Ident::new(k.as_str())).is_none()) {
            return Err(Error::Config(format!("support atom {i}: {extra:?} is not in the population")));
        }
        independent_law(pop, self.state_space()?, &family, self.tolerances)
            .map_err(|e| Error::Config(format!("support atom {i}: {e}")))
    }
}
