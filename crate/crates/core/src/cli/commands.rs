use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::config::{Experiment, Query, QueryKind, QuotientSpec, Relation, Representation};
use super::Format;
use crate::checks::{run_suite, SUITES};
use crate::combinatorics::Bounds;
use crate::error::{Error, Result};
use crate::laws::DiscreteLaw;
use crate::population::{
    function_space, injective_functions, rho_quotient, rho_star_quotient, xi, AssignmentFunction, CountingMeasure,
    StateId, StateSpace,
};
use crate::representation::{
    cardinality_moment, chi_and_chibar, chi_m, collapsed_moments, mean_and_variance_on_laws,
    pgf, pgfl, sample_seeded, structure_moment, DiscreteRepresentationLaw, StochasticRepresentation,
};

/// How a reported number was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    ExactEnumeration,
    MonteCarlo { draws: usize, seed: u64 },
}

/// One answered query.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub id: String,
    pub kind: String,
    pub value: Value,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

fn to_json_text(v: &impl Serialize) -> String {
    // going through Value sorts object keys
    let v = serde_json::to_value(v).expect("serialisable");
    let mut s = serde_json::to_string_pretty(&v).expect("serialisable");
    s.push('\n');
    s
}

fn measure_json(states: &StateSpace, mu: &CountingMeasure<StateId>) -> Value {
    let m: Map<String, Value> = mu.iter().map(|(s, k)| (states.label(*s).to_owned(), json!(k))).collect();
    Value::Object(m)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Classes of assignment functions under `rho` or `rho*`.
pub fn quotient_report(exp: &Experiment, spec: &QuotientSpec, format: Format) -> Result<String> {
    let states = exp.state_space()?;
    let names: Vec<String> = match &spec.populations {
        Some(n) => n.clone(),
        None => exp.populations.keys().cloned().collect(),
    };
    if names.is_empty() {
        return Err(Error::Config("quotient needs at least one population".into()));
    }
    if spec.relation == Relation::Rho && names.len() != 1 {
        return Err(Error::Config("rho compares functions on a single population; use rho_star".into()));
    }
    let mut functions = Vec::new();
    let mut pops = Vec::new();
    for name in &names {
        let pop = exp.population(name)?;
        pops.push((name.as_str(), Arc::clone(pop)));
        functions.extend(if spec.injective {
            injective_functions(pop, states, &exp.bounds)?
        } else {
            function_space(pop, states, &exp.bounds)?
        });
    }
    let classes = match spec.relation {
        Relation::Rho => rho_quotient(&functions, &exp.bounds)?,
        Relation::RhoStar => rho_star_quotient(&functions, &exp.bounds)?,
    };
    let pop_name = |f: &AssignmentFunction| {
        pops.iter()
            .find(|(_, p)| Arc::ptr_eq(p, f.population()))
            .map(|(n, _)| *n)
            .expect("function built from a listed population")
    };
    let assignment = |f: &AssignmentFunction| -> Value {
        let m: Map<String, Value> = f
            .population()
            .individuals()
            .iter()
            .zip(f.values())
            .map(|(x, s)| (x.to_string(), json!(states.label(*s))))
            .collect();
        Value::Object(m)
    };
    match format {
        Format::Json => {
            let class_json: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "size": c.len(),
                        "representative": {"population": pop_name(&c[0]), "assignment": assignment(&c[0])},
                        "counting_measure": measure_json(states, &xi(&c[0])),
                    })
                })
                .collect();
            Ok(to_json_text(&json!({
                "relation": match spec.relation { Relation::Rho => "rho", Relation::RhoStar => "rho_star" },
                "injective": spec.injective,
                "populations": names,
                "function_count": functions.len(),
                "class_count": classes.len(),
                "class_sizes": classes.iter().map(Vec::len).collect::<Vec<_>>(),
                "classes": class_json,
                "provenance": Provenance::ExactEnumeration,
            })))
        }
        Format::Csv => csv_text(
            &["class", "size", "population", "representative"],
            classes.iter().enumerate().map(|(i, c)| {
                vec![
                    i.to_string(),
                    c.len().to_string(),
                    pop_name(&c[0]).to_owned(),
                    c[0].to_string(),
                ]
            }),
        ),
    }
}

fn support(exp: &Experiment) -> Result<&StochasticRepresentation> {
    match exp.representation()? {
        Representation::Support(r) => Ok(r),
        Representation::Discrete(_) => Err(Error::Config(
            "this query needs a representation given by its support".into(),
        )),
    }
}

fn support_atom(exp: &Experiment, atom: usize) -> Result<&crate::laws::PopulationLaw> {
    support(exp)?
        .support()
        .get(atom)
        .map(|(l, _)| l)
        .ok_or_else(|| Error::Config(format!("no support atom {atom}")))
}

/// Name of each atom law: the configured law it matches, or `theta<i>`.
pub(crate) fn atom_names(exp: &Experiment, d: &DiscreteRepresentationLaw) -> Vec<String> {
    d.atom_laws()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            exp.laws
                .iter()
                .find(|(_, q)| q.approx_eq(p, exp.tolerances.law))
                .map_or_else(|| format!("theta{i}"), |(n, _)| n.clone())
        })
        .collect()
}

fn named_laws(exp: &Experiment, names: &[String]) -> Result<Vec<DiscreteLaw>> {
    names.iter().map(|n| exp.law(n).cloned()).collect()
}

fn mean_var(mean: f64, variance: f64) -> Value {
    json!({"mean": mean, "variance": variance})
}

fn answer(exp: &Experiment, q: &QueryKind) -> Result<(Value, Provenance)> {
    use Provenance::*;
    Ok(match q {
        QueryKind::CardinalityMoment { n } => {
            let v = match exp.representation()? {
                Representation::Support(r) => cardinality_moment(r, *n),
                Representation::Discrete(d) => d.expect(|m| (m.total() as f64).powi(*n as i32)),
            };
            (json!(v), ExactEnumeration)
        }
        QueryKind::StructureMoment { n } => (json!(structure_moment(support(exp)?, *n)), ExactEnumeration),
        QueryKind::StructureMarginal => {
            let rows: Vec<Value> = support(exp)?
                .structure_marginal()
                .into_iter()
                .map(|(blocks, p)| json!({"blocks": blocks, "probability": p}))
                .collect();
            (Value::Array(rows), ExactEnumeration)
        }
        QueryKind::ChiM { atom, m, states, at_least } => {
            let law = support_atom(exp, *atom)?;
            let b = exp.states_named(states)?;
            let v = chi_m(law, *m, |pp| pp.expected_mass(&b) >= *at_least)?;
            (json!(v), ExactEnumeration)
        }
        QueryKind::Chi { atom, laws, states } => {
            let law = support_atom(exp, *atom)?;
            let targets = named_laws(exp, laws)?;
            let b = exp.states_named(states)?;
            let eps = exp.tolerances.law;
            let (chi, chibar) = chi_and_chibar(law, |p| targets.iter().any(|t| t.approx_eq(p, eps)), &b)?;
            (json!({"chi": chi, "chibar": chibar}), ExactEnumeration)
        }
        QueryKind::LawsMeanVariance { laws } => {
            let d = exp.representation()?.discrete()?;
            let thetas: Vec<usize> = named_laws(exp, laws)?
                .iter()
                .filter_map(|p| d.atom_index(p))
                .collect();
            let (m, v) = mean_and_variance_on_laws(&d, &thetas)?;
            (mean_var(m, v), ExactEnumeration)
        }
        QueryKind::CollapsedMoments { states } => {
            let d = exp.representation()?.discrete()?;
            let (m, v) = collapsed_moments(&d, &exp.states_named(states)?);
            (mean_var(m, v), ClosedForm)
        }
        QueryKind::MultiplicityMoments => {
            let d = exp.representation()?.discrete()?;
            (
                json!({
                    "atoms": atom_names(exp, &d),
                    "means": d.multiplicity_means(),
                    "covariance": d.multiplicity_covariance(),
                }),
                ExactEnumeration,
            )
        }
        QueryKind::Pgf { z } => {
            let d = exp.representation()?.discrete()?;
            (json!(pgf(&d, z)?), ExactEnumeration)
        }
        QueryKind::Pgfl { values, default } => {
            let d = exp.representation()?.discrete()?;
            let table: Vec<(DiscreteLaw, f64)> = values
                .iter()
                .map(|(n, v)| exp.law(n).map(|p| (p.clone(), *v)))
                .collect::<Result<_>>()?;
            let eps = exp.tolerances.law;
            let h = |p: &DiscreteLaw| {
                table
                    .iter()
                    .find(|(q, _)| q.approx_eq(p, eps))
                    .map_or(*default, |(_, v)| *v)
            };
            (json!(pgfl(&d, h)?), ExactEnumeration)
        }
        QueryKind::SampleMean { states, count } => {
            let d = exp.representation()?.discrete()?;
            let b = exp.states_named(states)?;
            let draws = sample_seeded(&d, exp.seed, *count)?;
            let xs: Vec<f64> = draws
                .iter()
                .map(|s| s.states.mass_where(|x| b.contains(x)) as f64)
                .collect();
            let k = xs.len() as f64;
            let mean = if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / k };
            let var = if xs.len() < 2 {
                0.0
            } else {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)
            };
            (mean_var(mean, var), MonteCarlo { draws: *count, seed: exp.seed })
        }
    })
}

/// Answers every query. Numbers are deterministic given the config and seed.
pub fn evaluate_queries(exp: &Experiment, queries: &[Query], timings: bool) -> Result<Vec<ResultRecord>> {
    queries
        .iter()
        .map(|q| {
            let start = Instant::now();
            let (value, provenance) = answer(exp, &q.kind).map_err(|e| match e {
                Error::SizeLimit { .. } => e,
                other => Error::Config(format!("query {:?}: {other}", q.id)),
            })?;
            Ok(ResultRecord {
                id: q.id.clone(),
                kind: q.kind.name().to_owned(),
                value,
                provenance,
                elapsed_ms: timings.then(|| start.elapsed().as_secs_f64() * 1e3),
            })
        })
        .collect()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

pub fn stats_report(exp: &Experiment, queries: &[Query], format: Format, timings: bool) -> Result<String> {
    let records = evaluate_queries(exp, queries, timings)?;
    match format {
        Format::Json => Ok(to_json_text(&json!({"seed": exp.seed, "results": records}))),
        Format::Csv => {
            let mut rows = Vec::new();
            for r in &records {
                let mut fields = Vec::new();
                flatten("", &r.value, &mut fields);
                let (method, draws, seed) = match &r.provenance {
                    Provenance::ClosedForm => ("closed-form", String::new(), String::new()),
                    Provenance::ExactEnumeration => ("exact-enumeration", String::new(), String::new()),
                    Provenance::MonteCarlo { draws, seed } => ("monte-carlo", draws.to_string(), seed.to_string()),
                };
                for (field, value) in fields {
                    let field = if field.is_empty() { "value".to_owned() } else { field };
                    rows.push(vec![
                        r.id.clone(),
                        r.kind.clone(),
                        field,
                        value,
                        method.to_owned(),
                        draws.clone(),
                        seed.clone(),
                    ]);
                }
            }
            csv_text(&["id", "kind", "field", "value", "method", "draws", "seed"], rows)
        }
    }
}

#[derive(Serialize)]
struct HistogramRow<T: Serialize> {
    #[serde(flatten)]
    key: T,
    count: usize,
    frequency: f64,
}

/// `count` seeded draws as JSON lines, followed by one summary line.
pub fn sample_report(exp: &Experiment, count: usize, format: Format) -> Result<String> {
    let d = exp.representation()?.discrete()?;
    let states = exp.state_space()?;
    let names = atom_names(exp, &d);
    let draws = sample_seeded(&d, exp.seed, count)?;
    match format {
        Format::Json => {
            let mut out = String::new();
            for (i, s) in draws.iter().enumerate() {
                let line = json!({
                    "draw": i,
                    "multiplicities": s.multiplicities,
                    "states": measure_json(states, &s.states),
                });
                out.push_str(&serde_json::to_string(&line).expect("serialisable"));
                out.push('\n');
            }
            let freq = |c: usize| if count == 0 { 0.0 } else { c as f64 / count as f64 };
            let mut by_n: BTreeMap<&[u64], usize> = BTreeMap::new();
            let mut by_mu: BTreeMap<&CountingMeasure<StateId>, usize> = BTreeMap::new();
            let mut totals = vec![0u64; states.len()];
            let mut collisions = 0;
            for s in &draws {
                *by_n.entry(&s.multiplicities.0).or_default() += 1;
                *by_mu.entry(&s.states).or_default() += 1;
                for (x, k) in s.states.iter() {
                    totals[x.0] += k;
                }
                collisions += usize::from(s.states.iter().any(|(_, k)| k > 1));
            }
            let summary = json!({
                "summary": {
                    "count": count,
                    "seed": exp.seed,
                    "atoms": names,
                    "multiplicity_histogram": by_n.into_iter().map(|(n, c)| HistogramRow {
                        key: json!({"multiplicities": n}), count: c, frequency: freq(c),
                    }).collect::<Vec<_>>(),
                    "state_histogram": by_mu.into_iter().map(|(mu, c)| HistogramRow {
                        key: json!({"states": measure_json(states, mu)}), count: c, frequency: freq(c),
                    }).collect::<Vec<_>>(),
                    "state_totals": states.states().map(|s| (states.label(s).to_owned(), json!(totals[s.0]))).collect::<Map<_, _>>(),
                    "shared_state_frequency": freq(collisions),
                    "provenance": Provenance::MonteCarlo { draws: count, seed: exp.seed },
                }
            });
            out.push_str(&serde_json::to_string(&summary).expect("serialisable"));
            out.push('\n');
            Ok(out)
        }
        Format::Csv => {
            let mut header: Vec<String> = vec!["draw".into()];
            header.extend(names.iter().map(|n| format!("n_{n}")));
            header.extend(states.states().map(|s| format!("state_{}", states.label(s))));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows = draws.iter().enumerate().map(|(i, s)| {
                let mut r = vec![i.to_string()];
                r.extend(s.multiplicities.0.iter().map(u64::to_string));
                r.extend(states.states().map(|x| s.states.get(&x).to_string()));
                r
            });
            csv_text(&header, rows)
        }
    }
}

/// Runs `suite` (or every suite for `all`); returns the report and whether
/// every property held.
pub fn check_report(suite: &str, seed: u64, bounds: &Bounds, format: Format) -> Result<(String, bool)> {
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(Error::Config(format!(
            "unknown check suite {suite:?}; expected one of {} or all",
            SUITES.join(", ")
        )));
    }
    let rows = run_suite(suite, seed, bounds)?;
    let passed = rows.iter().all(|r| r.passed());
    let text = match format {
        Format::Json => to_json_text(&json!({
            "suite": suite,
            "seed": seed,
            "passed": passed,
            "properties": rows,
        })),
        Format::Csv => csv_text(
            &["suite", "property", "instances", "violations", "passed"],
            rows.iter().map(|r| {
                vec![
                    r.suite.clone(),
                    r.property.clone(),
                    r.instances.to_string(),
                    r.violations.to_string(),
                    r.passed().to_string(),
                ]
            }),
        )?,
    };
    Ok((text, passed))
}
