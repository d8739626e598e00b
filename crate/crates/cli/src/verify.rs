//! `verify`: every oracle scenario over a parameter grid, run in parallel and
//! reported in a fixed order.

use fbelief_core::island::{cold_case_belief, GeneralizedParams, IslandParams};
use fbelief_core::ledger::{cold_case_ledger, posterior_guilt};
use fbelief_core::oracle::{
    oracle_cold_case_sweep, oracle_generalized_sweep, oracle_parental_sweep, oracle_search, Check, ColdRoute,
    OracleReport, ParentalRoute, SearchRoute, MAX_ORACLE_POPULATION,
};
use fbelief_core::parental::{AlleleCount, ParentalParams};
use fbelief_core::scalar::rat;
use fbelief_core::{Error, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::report::{Mismatch, Number, Report, ScenarioTally, Verification};
use crate::scenario::parse_rational;
use crate::CliError;

pub const DEFAULT_MAX_POPULATION: u64 = 8;
/// The generalized and parental frames grow as 3^(N+1); their sweeps stop here.
pub const TERNARY_POPULATION_CAP: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cold,
    Search,
    General,
    Parental,
    Ledger,
}

impl Family {
    const ALL: [Family; 5] = [Family::Cold, Family::Search, Family::General, Family::Parental, Family::Ledger];

    fn parse(s: &str) -> Option<Family> {
        match s {
            "cold" => Some(Family::Cold),
            "search" => Some(Family::Search),
            "general" => Some(Family::General),
            "parental" => Some(Family::Parental),
            "ledger" => Some(Family::Ledger),
            _ => None,
        }
    }
}

type Triple = (Rational, Rational, Rational);

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub max_population: u64,
    pub island_populations: Vec<u64>,
    pub island_ps: Vec<Rational>,
    pub general_populations: Vec<u64>,
    pub pqr: Vec<Triple>,
    pub parental_populations: Vec<u64>,
    pub alleles: Vec<Triple>,
    pub families: Vec<Family>,
}

fn too_large(size: u64, limit: u64) -> CliError {
    CliError::Core(Error::FrameTooLarge {
        what: "population",
        size: size as u128,
        limit: limit as u128,
    })
}

impl GridSpec {
    pub fn default_for(max_population: u64) -> Result<GridSpec, CliError> {
        if max_population > MAX_ORACLE_POPULATION {
            return Err(too_large(max_population, MAX_ORACLE_POPULATION));
        }
        if max_population < 2 {
            return Err(CliError::Usage("--max-pop must be at least 2".into()));
        }
        let ternary = max_population.min(TERNARY_POPULATION_CAP);
        Ok(GridSpec {
            max_population,
            island_populations: (2..=max_population).collect(),
            island_ps: vec![rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)],
            general_populations: (2..=ternary).collect(),
            pqr: vec![
                (rat(1, 2), rat(1, 4), rat(1, 4)),
                (rat(1, 4), rat(1, 2), rat(1, 4)),
                (rat(1, 2), rat(1, 2), rat(0, 1)),
                (rat(1, 4), rat(3, 4), rat(0, 1)),
                (rat(1, 1), rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(0, 1), rat(3, 4)),
                (rat(1, 2), rat(0, 1), rat(1, 2)),
            ],
            parental_populations: (2..=ternary).collect(),
            alleles: vec![
                (rat(1, 4), rat(1, 2), rat(1, 4)),
                (rat(1, 2), rat(1, 4), rat(1, 4)),
                (rat(1, 4), rat(1, 4), rat(1, 2)),
                (rat(0, 1), rat(1, 2), rat(1, 2)),
                (rat(1, 2), rat(1, 2), rat(0, 1)),
                (rat(1, 2), rat(0, 1), rat(1, 2)),
                (rat(9, 16), rat(3, 8), rat(1, 16)),
            ],
            families: Family::ALL.to_vec(),
        })
    }

    /// Overrides parts of the default grid. `spec` is a `;`-separated list of
    /// `key=value` clauses:
    ///
    /// * `pop=2..6` or `pop=2,4` for the island populations; also caps the others
    /// * `p=1/4,1/2`
    /// * `pqr=1/2:1/4:1/4,1:0:0`
    /// * `alleles=1/4:1/2:1/4`
    /// * `only=cold,search,general,parental,ledger`
    pub fn parse(spec: &str, max_population: u64) -> Result<GridSpec, CliError> {
        let mut grid = GridSpec::default_for(max_population)?;
        let bad = |m: String| CliError::Usage(format!("--grid: {m}"));
        for clause in spec.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (key, value) = clause
                .split_once('=')
                .ok_or_else(|| bad(format!("`{clause}` should read key=value")))?;
            let value = value.trim();
            match key.trim() {
                "pop" => {
                    let pops = parse_populations(value).ok_or_else(|| bad(format!("bad population list `{value}`")))?;
                    for &n in &pops {
                        if n > MAX_ORACLE_POPULATION {
                            return Err(too_large(n, MAX_ORACLE_POPULATION));
                        }
                        if n > max_population {
                            return Err(too_large(n, max_population));
                        }
                        if n == 0 {
                            return Err(bad("populations start at 1".into()));
                        }
                    }
                    grid.general_populations = pops.iter().copied().filter(|&n| n <= TERNARY_POPULATION_CAP).collect();
                    grid.parental_populations = grid.general_populations.clone();
                    grid.island_populations = pops;
                }
                "p" => {
                    grid.island_ps = value
                        .split(',')
                        .map(|s| {
                            parse_rational(s)
                                .filter(|p| *p > Rational::zero() && *p <= Rational::one())
                                .ok_or_else(|| bad(format!("p = `{}` must be a rational in (0, 1]", s.trim())))
                        })
                        .collect::<Result<_, _>>()?;
                }
                "pqr" => {
                    grid.pqr = parse_triples(value).ok_or_else(|| bad(format!("bad p:q:r list `{value}`")))?;
                    if grid.pqr.iter().any(|(p, _, _)| p.is_zero()) {
                        return Err(bad("generalized grid needs p > 0".into()));
                    }
                }
                "alleles" => {
                    grid.alleles = parse_triples(value).ok_or_else(|| bad(format!("bad p0:p1:p2 list `{value}`")))?;
                }
                "only" => {
                    grid.families = value
                        .split(',')
                        .map(|s| Family::parse(s.trim()).ok_or_else(|| bad(format!("unknown family `{}`", s.trim()))))
                        .collect::<Result<_, _>>()?;
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(grid)
    }
}

fn parse_populations(s: &str) -> Option<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().ok()?;
        let b: u64 = b.trim().trim_start_matches('=').parse().ok()?;
        return (a <= b).then(|| (a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// Non-negative triples summing to exactly 1.
fn parse_triples(s: &str) -> Option<Vec<Triple>> {
    s.split(',')
        .map(|t| {
            let parts: Vec<Rational> = t.split(':').map(parse_rational).collect::<Option<_>>()?;
            let [a, b, c]: [Rational; 3] = parts.try_into().ok()?;
            let ok = [&a, &b, &c].iter().all(|x| **x >= Rational::zero()) && (&a + &b + &c).is_one();
            ok.then_some((a, b, c))
        })
        .collect()
}

/// Adds 1/1000 to the closed form of every matching run. Written
/// `SCENARIO@key=value,key=value`; a bare `SCENARIO` matches all its runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub scenario: String,
    pub point: Vec<(String, String)>,
}

impl Perturbation {
    pub fn parse(s: &str) -> Result<Perturbation, CliError> {
        let (scenario, point) = match s.split_once('@') {
            Some((sc, pt)) => (sc, pt),
            None => (s, ""),
        };
        let point = point
            .split(',')
            .filter(|kv| !kv.trim().is_empty())
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| CliError::Usage(format!("perturbation point `{kv}` should read key=value")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Perturbation {
            scenario: scenario.trim().to_string(),
            point,
        })
    }

    fn matches(&self, r: &OracleReport) -> bool {
        r.scenario == self.scenario && self.point.iter().all(|kv| r.point.contains(kv))
    }

    fn apply(&self, reports: Vec<OracleReport>) -> Result<Vec<OracleReport>, CliError> {
        let mut hit = false;
        let out = reports
            .into_iter()
            .map(|r| {
                if self.matches(&r) {
                    hit = true;
                    let bumped = r.closed_form.clone().unwrap_or_else(Rational::zero) + rat(1, 1000);
                    r.with_closed_form(Some(bumped))
                } else {
                    r
                }
            })
            .collect();
        if !hit {
            return Err(CliError::Usage(format!(
                "perturbation `{}` matched no oracle run",
                self.scenario
            )));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
enum Job {
    Cold(IslandParams<Rational>, ColdRoute),
    Search(IslandParams<Rational>, SearchRoute),
    General(GeneralizedParams<Rational>),
    Parental(ParentalParams<Rational>, ParentalRoute),
    Ledger(u64, Rational),
}

fn jobs(grid: &GridSpec) -> Vec<Job> {
    let mut jobs = Vec::new();
    for family in &grid.families {
        match family {
            Family::Cold => {
                for &n in &grid.island_populations {
                    for p in &grid.island_ps {
                        for route in ColdRoute::ALL {
                            jobs.push(Job::Cold(IslandParams::new(n, p.clone()), route));
                        }
                    }
                }
            }
            Family::Search => {
                for &n in &grid.island_populations {
                    for p in &grid.island_ps {
                        for route in SearchRoute::ALL {
                            jobs.push(Job::Search(IslandParams::new(n, p.clone()), route));
                        }
                    }
                }
            }
            Family::General => {
                for &n in &grid.general_populations {
                    for (p, q, r) in &grid.pqr {
                        jobs.push(Job::General(GeneralizedParams::new(n, p.clone(), q.clone(), r.clone())));
                    }
                }
            }
            Family::Parental => {
                for &n in &grid.parental_populations {
                    for (p0, p1, p2) in &grid.alleles {
                        for alleles in [AlleleCount::Two, AlleleCount::One] {
                            for route in [ParentalRoute::Belief, ParentalRoute::Classical] {
                                let params = ParentalParams::new(n, p0.clone(), p1.clone(), p2.clone(), alleles);
                                jobs.push(Job::Parental(params, route));
                            }
                        }
                    }
                }
            }
            Family::Ledger => {
                for &n in &grid.island_populations {
                    for p in grid.island_ps.iter().filter(|p| **p < Rational::one()) {
                        jobs.push(Job::Ledger(n - 1, p.clone()));
                    }
                }
            }
        }
    }
    jobs
}

/// The cold-case ledger conditioned on E=1 against (1−p)^N.
fn ledger_report(others: u64, p: &Rational) -> Result<Vec<OracleReport>, Error> {
    let started = std::time::Instant::now();
    let ledger = cold_case_ledger(others, p)?;
    let post = posterior_guilt(&ledger)?;
    let closed = cold_case_belief(&IslandParams::new(others + 1, p.clone()))?;
    let checks = vec![
        Check::new(
            "guilty + not guilty + ignorance = 1",
            (&post.guilty + &post.not_guilty + &post.ignorance).is_one(),
        ),
        Check::new("fourth mass is 0 exactly when N = 1", (ledger.entries().len() == 3) == (others == 1)),
    ];
    Ok(vec![OracleReport {
        scenario: "ledger/cold-case".into(),
        point: vec![("N".into(), others.to_string()), ("p".into(), p.to_string())],
        equal: closed == post.guilty,
        closed_form: Some(closed),
        oracle: Some(post.guilty),
        focal_before: ledger.entries().len(),
        focal_after: 0,
        elapsed: started.elapsed(),
        checks,
    }])
}

fn run_job(job: &Job) -> Result<Vec<OracleReport>, Error> {
    match job {
        Job::Cold(params, route) => oracle_cold_case_sweep(params, *route),
        Job::Search(params, route) => Ok(vec![oracle_search(params, *route)?]),
        Job::General(params) => oracle_generalized_sweep(params),
        Job::Parental(params, route) => oracle_parental_sweep(params, *route),
        Job::Ledger(others, p) => ledger_report(*others, p),
    }
}

/// Runs every oracle scenario in `grid`. Reports come back in job order whatever
/// the scheduling.
pub fn run_oracles(grid: &GridSpec, perturbation: Option<&Perturbation>) -> Result<Vec<OracleReport>, CliError> {
    let results: Vec<Result<Vec<OracleReport>, Error>> = jobs(grid).par_iter().map(run_job).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    match perturbation {
        Some(p) => p.apply(reports),
        None => Ok(reports),
    }
}

pub fn summarize(grid: &GridSpec, reports: &[OracleReport]) -> Verification {
    let mut tallies: Vec<ScenarioTally> = Vec::new();
    for r in reports {
        let idx = match tallies.iter().position(|t| t.scenario == r.scenario) {
            Some(i) => i,
            None => {
                tallies.push(ScenarioTally {
                    scenario: r.scenario.clone(),
                    runs: 0,
                    passed: 0,
                });
                tallies.len() - 1
            }
        };
        tallies[idx].runs += 1;
        tallies[idx].passed += usize::from(r.passed());
    }
    let mismatches: Vec<Mismatch> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| Mismatch {
            scenario: r.scenario.clone(),
            point: r.point.iter().cloned().collect(),
            closed_form: r.closed_form.as_ref().map(Number::exact),
            oracle: r.oracle.as_ref().map(Number::exact),
            failed_checks: std::iter::once("closed form = oracle".to_string())
                .filter(|_| !r.equal)
                .chain(r.failed_checks().map(|c| c.name.clone()))
                .collect(),
        })
        .collect();
    Verification {
        passed: mismatches.is_empty(),
        runs: reports.len(),
        checks: reports.iter().map(|r| r.checks.len() + 1).sum(),
        max_population: grid.max_population,
        scenarios: tallies,
        mismatches,
    }
}

pub fn run_verify(grid: &GridSpec, perturbation: Option<&Perturbation>) -> Result<Report, CliError> {
    let reports = run_oracles(grid, perturbation)?;
    let mut report = Report::new("verify", "exact");
    report.verification = Some(summarize(grid, &reports));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridSpec {
        GridSpec::parse("pop=2..3", 3).unwrap()
    }

    #[test]
    fn small_grid_passes() {
        let report = run_verify(&small(), None).unwrap();
        let v = report.verification.unwrap();
        assert!(v.passed, "{:?}", v.mismatches);
        assert!(v.scenarios.iter().any(|t| t.scenario == "parental/one-allele/classical"));
    }

    #[test]
    fn perturbation_names_the_point() {
        let p = Perturbation::parse("search-case/extended-frame@N+1=3,p=1/2").unwrap();
        let v = run_verify(&small(), Some(&p)).unwrap().verification.unwrap();
        assert!(!v.passed);
        assert_eq!(v.mismatches.len(), 1);
        assert_eq!(v.mismatches[0].point["N+1"], "3");
        assert_eq!(v.mismatches[0].point["p"], "1/2");
        let missing = Perturbation::parse("nothing").unwrap();
        assert!(run_verify(&small(), Some(&missing)).is_err());
    }

    #[test]
    fn bounds() {
        assert!(matches!(
            GridSpec::default_for(20),
            Err(CliError::Core(Error::FrameTooLarge { size: 20, .. }))
        ));
        assert!(GridSpec::parse("pop=2..5", 4).is_err());
        assert!(GridSpec::parse("p=0", 4).is_err());
        assert!(GridSpec::parse("pqr=1/2:1/2:1/2", 4).is_err());
        let g = GridSpec::parse("pop=2,3; p=1/3; only=cold", 4).unwrap();
        assert_eq!(g.island_populations, vec![2, 3]);
        assert_eq!(g.families, vec![Family::Cold]);
    }

    #[test]
    fn order_is_deterministic() {
        let a = run_oracles(&small(), None).unwrap();
        let b = run_oracles(&small(), None).unwrap();
        let key = |rs: &[OracleReport]| rs.iter().map(|r| (r.scenario.clone(), r.point.clone())).collect::<Vec<_>>();
        assert_eq!(key(&a), key(&b));
    }
}
