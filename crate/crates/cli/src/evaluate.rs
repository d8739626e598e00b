//! `evaluate` and `condition`.

use fbelief_core::island::{
    cold_case_belief, cold_case_classical, generalized_cold_case_belief, search_case_belief, search_case_classical,
    GeneralizedParams, IslandParams,
};
use fbelief_core::ledger::{ledger_to_mass, posterior_guilt, Ledger};
use fbelief_core::oracle::{
    cold_case_conditioned, generalized_conditioned, parental_conditioned, search_conditioned, ColdRoute, Conditioned,
    ParentalRoute, SearchRoute,
};
use fbelief_core::parental::{paternity_belief, paternity_classical, ParentalParams};
use fbelief_core::{Backend, EventSet, MassFunction, Predicate, Rational, Scalar};

use crate::report::{FocalEntry, LedgerSummary, Number, Report, Row, ScenarioEcho};
use crate::scenario::{CustomSpec, GeneralSpec, IslandSpec, ParentalSpec, Scenario, ScenarioBody, ScenarioKind};
use crate::CliError;

/// Largest populations for which plausibility is read off a materialized posterior.
pub const PLAUSIBILITY_LIMIT_ISLAND: u64 = 12;
pub const PLAUSIBILITY_LIMIT_GENERAL: u64 = 8;
pub const PLAUSIBILITY_LIMIT_PARENTAL: u64 = 7;

/// Above this many others the exact backend is refused; powers of (1−p) get too long.
pub const EXACT_EXPONENT_LIMIT: u64 = 100_000;

const CLOSED: &str = "closed-form";
const ORACLE: &str = "oracle";
const DIRECT: &str = "mass-function";

fn members_label(var: &str, members: &[usize]) -> String {
    let names: Vec<String> = members.iter().map(|i| (i + 1).to_string()).collect();
    format!("{var} in {{{}}}", names.join(", "))
}

fn context(what: &str, e: fbelief_core::Error) -> CliError {
    CliError::Evaluation {
        context: what.to_string(),
        source: e,
    }
}

fn new_report(command: &str, scenario: &Scenario, backend: Backend) -> Report {
    let mut r = Report::new(command, backend.name());
    r.scenario = Some(ScenarioEcho {
        kind: scenario.kind.name().into(),
        parameters: scenario.echo.clone(),
    });
    r
}

pub fn run_evaluate(scenario: &Scenario, backend: Backend) -> Result<Report, CliError> {
    if backend == Backend::Float && matches!(scenario.kind, ScenarioKind::Ledger | ScenarioKind::CustomMass) {
        return Err(CliError::Usage(format!(
            "--float applies to closed-form scenarios only, not {}",
            scenario.kind.name()
        )));
    }
    let mut report = new_report("evaluate", scenario, backend);
    match (&scenario.body, backend) {
        (ScenarioBody::IslandCold(s), Backend::Exact) => report.rows = cold_exact(s)?,
        (ScenarioBody::IslandCold(s), Backend::Float) => report.rows = cold_float(s)?,
        (ScenarioBody::IslandSearch(s), Backend::Exact) => report.rows = search_exact(s)?,
        (ScenarioBody::IslandSearch(s), Backend::Float) => report.rows = search_float(s)?,
        (ScenarioBody::IslandGeneral(s), Backend::Exact) => report.rows = general_exact(s)?,
        (ScenarioBody::IslandGeneral(s), Backend::Float) => report.rows = general_float(s)?,
        (ScenarioBody::Parental(s), Backend::Exact) => report.rows = parental_exact(s)?,
        (ScenarioBody::Parental(s), Backend::Float) => report.rows = parental_float(s)?,
        (ScenarioBody::Ledger(l), _) => ledger(l, &mut report)?,
        (ScenarioBody::CustomMass(c), _) => custom(c, &mut report)?,
    }
    Ok(report)
}

pub fn run_condition(scenario: &Scenario, backend: Backend) -> Result<Report, CliError> {
    let ScenarioBody::CustomMass(c) = &scenario.body else {
        return Err(CliError::Usage(format!(
            "condition needs a custom-mass scenario, got {}",
            scenario.kind.name()
        )));
    };
    if backend == Backend::Float {
        return Err(CliError::Usage("--float applies to closed-form scenarios only".into()));
    }
    if c.condition.is_none() {
        return Err(CliError::Usage("the scenario has no `condition = {...}` line".into()));
    }
    let mut report = new_report("condition", scenario, backend);
    custom(c, &mut report)?;
    Ok(report)
}

fn exact_size_guard(population: u64) -> Result<(), CliError> {
    if population - 1 > EXACT_EXPONENT_LIMIT {
        return Err(CliError::Usage(format!(
            "N = {} is beyond the exact backend's limit of {EXACT_EXPONENT_LIMIT}; use --float",
            population - 1
        )));
    }
    Ok(())
}

fn plausibility_row(run: Option<&Conditioned>, members: &[usize]) -> Result<(Option<Number>, Option<String>), CliError> {
    let Some(run) = run else {
        return Ok((None, None));
    };
    let pl = run.plausibility_in(members).map_err(|e| context("plausibility", e))?;
    Ok((pl.as_ref().map(Number::exact), pl.map(|_| ORACLE.to_string())))
}

fn cold_exact(s: &IslandSpec) -> Result<Vec<Row>, CliError> {
    exact_size_guard(s.population)?;
    let base = IslandParams::new(s.population, s.p.clone()).with_suspect(s.suspect);
    let run = if s.population <= PLAUSIBILITY_LIMIT_ISLAND {
        Some(cold_case_conditioned(&base, ColdRoute::Direct).map_err(|e| context("cold-case posterior", e))?)
    } else {
        None
    };
    s.targets
        .iter()
        .map(|t| {
            let params = base.clone().with_target(t.len() as u64);
            let belief = cold_case_belief(&params).map_err(|e| context("cold-case belief", e))?;
            let classical = (t.len() == 1)
                .then(|| cold_case_classical(&params))
                .transpose()
                .map_err(|e| context("classical posterior", e))?;
            let (plausibility, plausibility_source) = plausibility_row(run.as_ref(), t)?;
            Ok(Row {
                event: members_label("C", t),
                belief: Number::exact(&belief),
                belief_source: CLOSED.into(),
                plausibility,
                plausibility_source,
                classical: classical.as_ref().map(Number::exact),
            })
        })
        .collect()
}

fn float_row(event: String, belief: f64, classical: Option<f64>) -> Row {
    Row {
        event,
        belief: Number::float(belief),
        belief_source: CLOSED.into(),
        plausibility: None,
        plausibility_source: None,
        classical: classical.map(Number::float),
    }
}

fn cold_float(s: &IslandSpec) -> Result<Vec<Row>, CliError> {
    let base = IslandParams::new(s.population, Scalar::to_f64(&s.p)).with_suspect(s.suspect);
    s.targets
        .iter()
        .map(|t| {
            let params = base.clone().with_target(t.len() as u64);
            let belief = cold_case_belief(&params).map_err(|e| context("cold-case belief", e))?;
            let classical = (t.len() == 1)
                .then(|| cold_case_classical(&params))
                .transpose()
                .map_err(|e| context("classical posterior", e))?;
            Ok(float_row(members_label("C", t), belief, classical))
        })
        .collect()
}

fn search_exact(s: &IslandSpec) -> Result<Vec<Row>, CliError> {
    exact_size_guard(s.population)?;
    let base = IslandParams::new(s.population, s.p.clone()).with_suspect(s.suspect);
    let run = if s.population <= PLAUSIBILITY_LIMIT_ISLAND {
        Some(search_conditioned(&base, SearchRoute::ExtendedFrame).map_err(|e| context("search-case posterior", e))?)
    } else {
        None
    };
    s.targets
        .iter()
        .map(|t| {
            let (belief, source, classical) = if t.len() == 1 {
                let belief = search_case_belief(&base).map_err(|e| context("search-case belief", e))?;
                let classical = search_case_classical(&base).map_err(|e| context("classical posterior", e))?;
                (belief, CLOSED, Some(classical))
            } else {
                // no closed form beyond B = {s}; read it off the posterior
                let run = run.as_ref().ok_or_else(|| {
                    CliError::Usage(format!(
                        "search case with |B| > 1 needs the enumerated posterior, limited to N+1 <= {PLAUSIBILITY_LIMIT_ISLAND}"
                    ))
                })?;
                let belief = run
                    .belief_in(t)
                    .map_err(|e| context("search-case belief", e))?
                    .expect("search-case conditioning is always possible for p > 0");
                (belief, ORACLE, None)
            };
            let (plausibility, plausibility_source) = plausibility_row(run.as_ref(), t)?;
            Ok(Row {
                event: members_label("C", t),
                belief: Number::exact(&belief),
                belief_source: source.into(),
                plausibility,
                plausibility_source,
                classical: classical.as_ref().map(Number::exact),
            })
        })
        .collect()
}

fn search_float(s: &IslandSpec) -> Result<Vec<Row>, CliError> {
    let base = IslandParams::new(s.population, Scalar::to_f64(&s.p)).with_suspect(s.suspect);
    s.targets
        .iter()
        .map(|t| {
            if t.len() != 1 {
                return Err(CliError::Usage("the float backend evaluates the search case for B = {s} only".into()));
            }
            let belief = search_case_belief(&base).map_err(|e| context("search-case belief", e))?;
            let classical = search_case_classical(&base).map_err(|e| context("classical posterior", e))?;
            Ok(float_row(members_label("C", t), belief, Some(classical)))
        })
        .collect()
}

fn general_exact(s: &GeneralSpec) -> Result<Vec<Row>, CliError> {
    exact_size_guard(s.population)?;
    let mut base = GeneralizedParams::new(s.population, s.p.clone(), s.q.clone(), s.r.clone());
    base.suspect = s.suspect;
    let run = if s.population <= PLAUSIBILITY_LIMIT_GENERAL {
        Some(generalized_conditioned(&base).map_err(|e| context("generalized posterior", e))?)
    } else {
        None
    };
    s.targets
        .iter()
        .map(|t| {
            let belief = generalized_cold_case_belief(&base.clone().with_target(t.len() as u64))
                .map_err(|e| context("generalized belief", e))?;
            let (plausibility, plausibility_source) = plausibility_row(run.as_ref(), t)?;
            Ok(Row {
                event: members_label("C", t),
                belief: Number::exact(&belief),
                belief_source: CLOSED.into(),
                plausibility,
                plausibility_source,
                classical: None,
            })
        })
        .collect()
}

fn general_float(s: &GeneralSpec) -> Result<Vec<Row>, CliError> {
    let f = |x: &Rational| Scalar::to_f64(x);
    let mut base = GeneralizedParams::new(s.population, f(&s.p), f(&s.q), f(&s.r));
    base.suspect = s.suspect;
    s.targets
        .iter()
        .map(|t| {
            let belief = generalized_cold_case_belief(&base.clone().with_target(t.len() as u64))
                .map_err(|e| context("generalized belief", e))?;
            Ok(float_row(members_label("C", t), belief, None))
        })
        .collect()
}

fn parental_exact(s: &ParentalSpec) -> Result<Vec<Row>, CliError> {
    exact_size_guard(s.population)?;
    let mut base = ParentalParams::new(s.population, s.p0.clone(), s.p1.clone(), s.p2.clone(), s.alleles);
    base.suspect = s.suspect;
    let mut rows = Vec::new();
    let mut run = None;
    for t in &s.targets {
        let params = base.clone().with_target(t.len() as u64);
        let belief = paternity_belief(&params).map_err(|e| context("paternity belief", e))?;
        if run.is_none() && s.population <= PLAUSIBILITY_LIMIT_PARENTAL {
            run = Some(parental_conditioned(&base, ParentalRoute::Belief).map_err(|e| context("paternity posterior", e))?);
        }
        let classical = (t.len() == 1)
            .then(|| paternity_classical(&params))
            .transpose()
            .map_err(|e| context("classical posterior", e))?;
        let (plausibility, plausibility_source) = plausibility_row(run.as_ref(), t)?;
        rows.push(Row {
            event: members_label("F", t),
            belief: Number::exact(&belief),
            belief_source: CLOSED.into(),
            plausibility,
            plausibility_source,
            classical: classical.as_ref().map(Number::exact),
        });
    }
    Ok(rows)
}

fn parental_float(s: &ParentalSpec) -> Result<Vec<Row>, CliError> {
    let f = |x: &Rational| Scalar::to_f64(x);
    let mut base = ParentalParams::new(s.population, f(&s.p0), f(&s.p1), f(&s.p2), s.alleles);
    base.suspect = s.suspect;
    s.targets
        .iter()
        .map(|t| {
            let params = base.clone().with_target(t.len() as u64);
            let belief = paternity_belief(&params).map_err(|e| context("paternity belief", e))?;
            let classical = (t.len() == 1)
                .then(|| paternity_classical(&params))
                .transpose()
                .map_err(|e| context("classical posterior", e))?;
            Ok(float_row(members_label("F", t), belief, classical))
        })
        .collect()
}

fn ledger(l: &Ledger, report: &mut Report) -> Result<(), CliError> {
    let post = posterior_guilt(l).map_err(|e| context("conditioning the ledger on E=1", e))?;
    let (pf, m) = ledger_to_mass(l).map_err(|e| context("ledger", e))?;
    let evidence = pf
        .event_of(&Predicate::eq("E", 1))
        .map_err(|e| context("ledger", e))?;
    let conditioned = m.condition(&evidence).map_err(|e| context("conditioning the ledger on E=1", e))?;
    report.conditioned_mass = Some(
        conditioned
            .focal_sets_sorted()
            .into_iter()
            .map(|(set, mass)| {
                let cells: Vec<String> = set
                    .iter()
                    .map(|i| {
                        let a = pf.decode(i).expect("index in frame");
                        format!("({},{})", a[0], a[1])
                    })
                    .collect();
                FocalEntry {
                    set: format!("{{{}}}", cells.join(", ")),
                    mass: Number::exact(mass),
                }
            })
            .collect(),
    );
    let row = |event: &str, belief: &Rational| Row {
        event: event.into(),
        belief: Number::exact(belief),
        belief_source: DIRECT.into(),
        plausibility: Some(Number::exact(&(belief + &post.ignorance))),
        plausibility_source: Some(DIRECT.into()),
        classical: None,
    };
    report.rows = vec![row("G=1 given E=1", &post.guilty), row("G=0 given E=1", &post.not_guilty)];
    report.ledger = Some(LedgerSummary {
        guilty: Number::exact(&post.guilty),
        not_guilty: Number::exact(&post.not_guilty),
        ignorance: Number::exact(&post.ignorance),
    });
    Ok(())
}

fn custom(c: &CustomSpec, report: &mut Report) -> Result<(), CliError> {
    let m: MassFunction = match &c.condition {
        Some(h) => {
            let mh = c
                .mass
                .condition(h)
                .map_err(|e| context(&format!("conditioning on {}", h.describe()), e))?;
            report.conditioned_mass = Some(
                mh.focal_sets_sorted()
                    .into_iter()
                    .map(|(set, mass)| FocalEntry {
                        set: set.describe(),
                        mass: Number::exact(mass),
                    })
                    .collect(),
            );
            mh
        }
        None => c.mass.clone(),
    };
    let queries: Vec<EventSet> = c.queries.clone();
    report.rows = queries
        .iter()
        .map(|q| {
            let bel = m.belief(q).map_err(|e| context("belief", e))?;
            let pl = m.plausibility(q).map_err(|e| context("plausibility", e))?;
            Ok(Row {
                event: q.describe(),
                belief: Number::exact(&bel),
                belief_source: DIRECT.into(),
                plausibility: Some(Number::exact(&pl)),
                plausibility_source: Some(DIRECT.into()),
                classical: None,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn eval(text: &str) -> Report {
        run_evaluate(&parse_scenario(text).unwrap(), Backend::Exact).unwrap()
    }

    #[test]
    fn cold_case_row() {
        let r = eval("scenario = island-cold\nN = 3\np = 1/2\n");
        let row = &r.rows[0];
        assert_eq!(row.belief, Number::exact(&fbelief_core::scalar::rat(1, 8)));
        assert_eq!(row.belief.decimal, "0.125");
        assert_eq!(row.classical.as_ref().unwrap().value, "2/5");
        assert_eq!(row.plausibility.as_ref().unwrap().value, "1/1");
    }

    #[test]
    fn search_beyond_singleton_uses_the_posterior() {
        let r = eval("scenario = island-search\nN = 2\np = 1/2\ntarget_set = 1\ntarget_set = 1, 2\ntarget_set = 1, 2, 3\n");
        assert_eq!(r.rows[0].belief.value, "3/7");
        assert_eq!(r.rows[1].belief_source, "oracle");
        assert_eq!(r.rows[2].belief.value, "1/1");
    }

    #[test]
    fn parental_impossible_conditioning_is_an_error() {
        let s = parse_scenario("scenario = parental\nN = 2\np0 = 1/2\np1 = 1/2\np2 = 0\nallele_count = 2\n").unwrap();
        let err = run_evaluate(&s, Backend::Exact).unwrap_err();
        assert!(err.to_string().contains("conditioning impossible"), "{err}");
    }

    #[test]
    fn float_is_limited_to_closed_forms() {
        let s = parse_scenario("scenario = ledger\nentry = I : 1\n").unwrap();
        assert!(matches!(run_evaluate(&s, Backend::Float), Err(CliError::Usage(_))));
        let s = parse_scenario("scenario = island-cold\nN = 1000000\np = 1e-6\n").unwrap();
        let r = run_evaluate(&s, Backend::Float).unwrap();
        let bel: f64 = r.rows[0].belief.value.parse().unwrap();
        assert!((bel - (-1f64).exp()).abs() < 1e-3);
        assert!(run_evaluate(&s, Backend::Exact).is_err());
    }
}
