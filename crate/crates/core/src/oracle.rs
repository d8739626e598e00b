//! Brute-force verification of the closed forms.
//!
//! Each run materializes the full product frame, writes down the prior mass
//! function focal set by focal set, conditions it with [`MassFunction::condition`]
//! and reads off belief. Nothing here calls into the solver formulas except to
//! obtain the value being checked.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frame::EventSet;
use crate::island::{
    cold_case_belief, cold_case_classical, generalized_cold_case_belief, island_frame, match_predicate,
    search_case_belief, search_case_belief_harmonic, search_case_classical, target_members, GeneralizedParams,
    IslandParams,
};
use crate::mass::MassFunction;
use crate::parental::{
    paternity_belief, paternity_belief_two_alleles, paternity_classical, AlleleCount, ParentalParams,
};
use crate::product::{Predicate, ProductFrame, VariableSpec};
use crate::scalar::{Rational, Scalar};

/// Largest population the oracle will enumerate.
pub const MAX_ORACLE_POPULATION: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColdRoute {
    /// Prior on {S=x, Γ=y}, conditioned on {S=s, Γ_s=1, Γ_C=1}.
    Direct,
    /// Prior already knows somebody carries the trait; conditioned on {S=s, Γ_s=1}.
    AtLeastOne,
    /// Uniform prior on the culprit, singletons only.
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchRoute {
    /// Selection variable extended with `*` for an unsuccessful search.
    ExtendedFrame,
    AtLeastOne,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParentalRoute {
    Belief,
    Classical,
}

impl ColdRoute {
    pub const ALL: [ColdRoute; 3] = [ColdRoute::Direct, ColdRoute::AtLeastOne, ColdRoute::Classical];

    pub fn name(self) -> &'static str {
        match self {
            ColdRoute::Direct => "direct",
            ColdRoute::AtLeastOne => "at-least-one",
            ColdRoute::Classical => "classical",
        }
    }
}

impl SearchRoute {
    pub const ALL: [SearchRoute; 3] = [SearchRoute::ExtendedFrame, SearchRoute::AtLeastOne, SearchRoute::Classical];

    pub fn name(self) -> &'static str {
        match self {
            SearchRoute::ExtendedFrame => "extended-frame",
            SearchRoute::AtLeastOne => "at-least-one",
            SearchRoute::Classical => "classical",
        }
    }
}

impl ParentalRoute {
    pub fn name(self) -> &'static str {
        match self {
            ParentalRoute::Belief => "belief",
            ParentalRoute::Classical => "classical",
        }
    }
}

/// A named side condition evaluated during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, holds: bool) -> Check {
        Check { name: name.into(), holds }
    }
}

/// One comparison of an enumerated belief against a closed form.
/// A value of `None` means conditioning was impossible on that side.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub scenario: String,
    pub point: Vec<(String, String)>,
    pub closed_form: Option<Rational>,
    pub oracle: Option<Rational>,
    pub equal: bool,
    pub focal_before: usize,
    pub focal_after: usize,
    pub elapsed: Duration,
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.equal && self.checks.iter().all(|c| c.holds)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn point_string(&self) -> String {
        self.point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Replaces the closed-form side and recomputes `equal`. Used to confirm that
    /// a wrong formula is caught.
    pub fn with_closed_form(mut self, value: Option<Rational>) -> OracleReport {
        self.equal = value == self.oracle;
        self.closed_form = value;
        self
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Rational>| v.as_ref().map_or("impossible".to_string(), |r| r.to_string());
        write!(
            f,
            "{} [{}]: closed form {}, oracle {}",
            self.scenario,
            self.point_string(),
            show(&self.closed_form),
            show(&self.oracle)
        )
    }
}

/// A prior together with the event it is conditioned on.
struct Setup {
    pf: ProductFrame,
    prior: MassFunction,
    hypothesis: EventSet,
    culprit: &'static str,
}

/// The result of conditioning a materialized prior.
pub struct Conditioned {
    pub frame: ProductFrame,
    pub focal_before: usize,
    pub hypothesis: EventSet,
    /// Pl(H) under the prior, computed separately from the conditioning step.
    pub normalizer: Rational,
    pub posterior: Option<MassFunction>,
    culprit: &'static str,
    elapsed: Duration,
}

impl Setup {
    fn condition(self, started: Instant) -> Result<Conditioned> {
        let normalizer = self.prior.plausibility(&self.hypothesis)?;
        let posterior = match self.prior.condition(&self.hypothesis) {
            Ok(m) => Some(m),
            Err(Error::ConditioningImpossible(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Conditioned {
            focal_before: self.prior.focal_count(),
            frame: self.pf,
            hypothesis: self.hypothesis,
            normalizer,
            posterior,
            culprit: self.culprit,
            elapsed: started.elapsed(),
        })
    }
}

impl Conditioned {
    pub fn focal_after(&self) -> usize {
        self.posterior.as_ref().map_or(0, MassFunction::focal_count)
    }

    /// The event that the culprit (or father) is one of `members`.
    pub fn culprit_event(&self, members: &[usize]) -> Result<EventSet> {
        self.frame.event_of(&Predicate::is_in(self.culprit, members.iter().copied()))
    }

    pub fn belief_of(&self, event: &EventSet) -> Result<Option<Rational>> {
        self.posterior.as_ref().map(|m| m.belief(event)).transpose()
    }

    pub fn belief_in(&self, members: &[usize]) -> Result<Option<Rational>> {
        let event = self.culprit_event(members)?;
        self.belief_of(&event)
    }

    pub fn plausibility_in(&self, members: &[usize]) -> Result<Option<Rational>> {
        let event = self.culprit_event(members)?;
        self.posterior.as_ref().map(|m| m.plausibility(&event)).transpose()
    }

    /// Normalizer identity, exact total mass and support inside H.
    fn standard_checks(&self, normalizer_name: &str, expected: &Rational) -> Vec<Check> {
        let mut checks = vec![Check::new(format!("normalizer = {normalizer_name}"), self.normalizer == *expected)];
        if let Some(m) = &self.posterior {
            checks.push(Check::new("posterior mass sums to 1", m.total_mass().is_one()));
            checks.push(Check::new(
                "posterior support inside the conditioning event",
                m.focal_sets().all(|(set, _)| !set.is_empty() && set.is_subset_of(&self.hypothesis)),
            ));
        }
        checks
    }
}

fn one() -> Rational {
    Rational::one()
}

fn gamma_names(pop: usize) -> Vec<String> {
    (1..=pop).map(|i| format!("G{i}")).collect()
}

/// Conjunction of `S = x` and `G_i = y_i` for every i, optionally restricting a further variable.
fn block(pf: &ProductFrame, fixed: &[(&str, usize)], gammas: &[usize], extra: Option<Predicate>) -> Result<EventSet> {
    let mut conj: Vec<Predicate> = fixed.iter().map(|(v, x)| Predicate::eq(*v, *x)).collect();
    conj.extend(gamma_names(gammas.len()).into_iter().zip(gammas).map(|(g, &y)| Predicate::eq(g, y)));
    conj.extend(extra);
    pf.event_of(&Predicate::And(conj))
}

fn bits(mask: u64, pop: usize) -> Vec<usize> {
    (0..pop).map(|i| (mask >> i & 1) as usize).collect()
}

fn bearers(gammas: &[usize], value: usize) -> Vec<usize> {
    gammas.iter().enumerate().filter(|(_, &g)| g == value).map(|(i, _)| i).collect()
}

fn check_population(population: u64) -> Result<()> {
    if population > MAX_ORACLE_POPULATION {
        return Err(Error::FrameTooLarge {
            what: "population",
            size: population as u128,
            limit: MAX_ORACLE_POPULATION as u128,
        });
    }
    Ok(())
}

fn island_point(population: u64, p: &Rational, suspect: usize) -> Vec<(String, String)> {
    vec![
        ("N+1".into(), population.to_string()),
        ("p".into(), p.to_string()),
        ("s".into(), (suspect + 1).to_string()),
    ]
}

fn with_target(mut point: Vec<(String, String)>, size: u64) -> Vec<(String, String)> {
    point.push(("|B|".into(), size.to_string()));
    point
}

fn compare(
    scenario: String,
    point: Vec<(String, String)>,
    closed_form: Result<Rational>,
    oracle: Option<Rational>,
    run: &Conditioned,
    checks: Vec<Check>,
    started: Instant,
) -> OracleReport {
    let closed_form = closed_form.ok();
    OracleReport {
        equal: closed_form == oracle,
        scenario,
        point,
        closed_form,
        oracle,
        focal_before: run.focal_before,
        focal_after: run.focal_after(),
        elapsed: run.elapsed + started.elapsed(),
        checks,
    }
}

// ---------------------------------------------------------------------------
// cold case

fn cold_case_setup(params: &IslandParams<Rational>, route: ColdRoute) -> Result<Setup> {
    params.validate()?;
    check_population(params.population)?;
    let pop = params.population as usize;
    let n = params.others();
    let p = &params.p;
    let miss = one() - p;
    let pf = island_frame(params.population, false)?;
    let some_bearer = one() - miss.powu(n + 1);
    let mut entries = Vec::new();
    for mask in 0u64..(1 << pop) {
        let y = bits(mask, pop);
        let k = mask.count_ones() as u64;
        let weight = p.powu(k) * miss.powu(n + 1 - k);
        for x in 0..pop {
            match route {
                ColdRoute::Direct => {
                    let mass = &weight / Rational::from_u64(n + 1);
                    entries.push((block(&pf, &[("S", x)], &y, None)?, mass));
                }
                ColdRoute::AtLeastOne => {
                    if k == 0 {
                        continue;
                    }
                    let mass = &weight / (Rational::from_u64(n + 1) * &some_bearer);
                    let c = Predicate::is_in("C", bearers(&y, 1));
                    entries.push((block(&pf, &[("S", x)], &y, Some(c))?, mass));
                }
                ColdRoute::Classical => {
                    let mass = &weight / Rational::from_u64((n + 1) * (n + 1));
                    for c in 0..pop {
                        entries.push((block(&pf, &[("S", x), ("C", c)], &y, None)?, mass.clone()));
                    }
                }
            }
        }
    }
    let prior = MassFunction::new(pf.frame(), entries)?;
    let s = params.suspect;
    let hypothesis = match route {
        ColdRoute::Direct | ColdRoute::Classical => pf.event_of(&match_predicate(s))?,
        ColdRoute::AtLeastOne => pf.event_of(&Predicate::And(vec![
            Predicate::eq("S", s),
            Predicate::eq(format!("G{}", s + 1), 1),
        ]))?,
    };
    Ok(Setup {
        pf,
        prior,
        hypothesis,
        culprit: "C",
    })
}

/// Materializes and conditions the cold-case prior for `route`.
pub fn cold_case_conditioned(params: &IslandParams<Rational>, route: ColdRoute) -> Result<Conditioned> {
    cold_case_setup(params, route)?.condition(Instant::now())
}

fn cold_case_normalizer(params: &IslandParams<Rational>, route: ColdRoute) -> (&'static str, Rational) {
    let n = params.others();
    let p = &params.p;
    let pop = Rational::from_u64(n + 1);
    match route {
        ColdRoute::Direct => ("p/(N+1)", p / &pop),
        ColdRoute::AtLeastOne => (
            "p/((N+1)(1-(1-p)^(N+1)))",
            p / (&pop * (one() - (one() - p).powu(n + 1))),
        ),
        ColdRoute::Classical => (
            "p(1+Np)/(N+1)^2",
            p * (one() + Rational::from_u64(n) * p) / (&pop * &pop),
        ),
    }
}

/// Oracle reports for every target size 1..=N+1 (only |B| = 1 for the classical route).
pub fn oracle_cold_case_sweep(params: &IslandParams<Rational>, route: ColdRoute) -> Result<Vec<OracleReport>> {
    let run = cold_case_conditioned(params, route)?;
    let (name, expected) = cold_case_normalizer(params, route);
    let mut checks = run.standard_checks(name, &expected);
    let n = params.others();
    match route {
        ColdRoute::Direct => {
            // at p = 1 every other person carries the trait and only one focal set is left
            let expected = if params.p.is_one() { 1 } else { 1 << n };
            checks.push(Check::new("2^N focal sets after conditioning", run.focal_after() == expected));
        }
        ColdRoute::AtLeastOne => {
            let direct = cold_case_conditioned(params, ColdRoute::Direct)?;
            checks.push(Check::new(
                "same conditional mass function as the direct route",
                direct.posterior.is_some() && direct.posterior == run.posterior,
            ));
        }
        ColdRoute::Classical => {
            if n >= 1 {
                let belief = cold_case_belief(params);
                let classical = cold_case_classical(params);
                checks.push(Check::new(
                    "(1-p)^N < 1/(1+Np)",
                    matches!((belief, classical), (Ok(b), Ok(c)) if b < c),
                ));
            }
        }
    }
    let sizes: Vec<u64> = match route {
        ColdRoute::Classical => vec![1],
        _ => (1..=params.population).collect(),
    };
    let scenario = format!("cold-case/{}", route.name());
    let mut reports = Vec::with_capacity(sizes.len());
    let mut previous: Option<Rational> = None;
    for b in sizes {
        let started = Instant::now();
        let target = params.clone().with_target(b);
        let members = target_members(params.population, params.suspect, b);
        let oracle = run.belief_in(&members)?;
        let closed = match route {
            ColdRoute::Classical => cold_case_classical(&target),
            _ => cold_case_belief(&target),
        };
        let mut local = checks.clone();
        if route != ColdRoute::Classical {
            if let (Some(prev), Some(cur)) = (&previous, &oracle) {
                local.push(Check::new("belief non-decreasing in |B|", prev <= cur));
            }
            if b == params.population {
                local.push(Check::new("belief 1 at |B| = N+1", oracle.as_ref().is_some_and(|v| v.is_one())));
            }
            previous = oracle.clone();
        }
        let point = with_target(island_point(params.population, &params.p, params.suspect), b);
        reports.push(compare(scenario.clone(), point, closed, oracle, &run, local, started));
    }
    Ok(reports)
}

/// Oracle report at the target size given in `params`.
pub fn oracle_cold_case(params: &IslandParams<Rational>, route: ColdRoute) -> Result<OracleReport> {
    let sweep = oracle_cold_case_sweep(params, route)?;
    pick(sweep, params.target_set_size, route == ColdRoute::Classical)
}

fn pick(sweep: Vec<OracleReport>, size: u64, single: bool) -> Result<OracleReport> {
    if single {
        if size != 1 {
            return Err(Error::InvalidParams("classical comparison is defined for |B| = 1 only".into()));
        }
        return Ok(sweep.into_iter().next().expect("one report"));
    }
    sweep
        .into_iter()
        .nth(size as usize - 1)
        .ok_or_else(|| Error::InvalidParams(format!("no report for |B| = {size}")))
}

// ---------------------------------------------------------------------------
// generalized cold case

fn generalized_setup(params: &GeneralizedParams<Rational>) -> Result<Setup> {
    params.validate()?;
    check_population(params.population)?;
    let pop = params.population as usize;
    let pf = island_frame(params.population, false)?;
    let mut entries = Vec::new();
    // Y_i = {0}, {1} or {0,1}, coded 0, 1, 2
    let total = 3u64.pow(pop as u32);
    for code in 0..total {
        let mut ys = Vec::with_capacity(pop);
        let mut rest = code;
        for _ in 0..pop {
            ys.push((rest % 3) as usize);
            rest /= 3;
        }
        let k0 = ys.iter().filter(|&&y| y == 0).count() as u64;
        let k1 = ys.iter().filter(|&&y| y == 1).count() as u64;
        let weight = params.p.powu(k1) * params.q.powu(k0) * params.r.powu(pop as u64 - k0 - k1)
            / Rational::from_u64(pop as u64);
        let gammas: Vec<Predicate> = gamma_names(pop)
            .into_iter()
            .zip(&ys)
            .map(|(g, &y)| match y {
                2 => Predicate::is_in(g, [0, 1]),
                v => Predicate::eq(g, v),
            })
            .collect();
        for x in 0..pop {
            let mut conj = vec![Predicate::eq("S", x)];
            conj.extend(gammas.iter().cloned());
            entries.push((pf.event_of(&Predicate::And(conj))?, weight.clone()));
        }
    }
    let prior = MassFunction::new(pf.frame(), entries)?;
    let hypothesis = pf.event_of(&match_predicate(params.suspect))?;
    Ok(Setup {
        pf,
        prior,
        hypothesis,
        culprit: "C",
    })
}

pub fn generalized_conditioned(params: &GeneralizedParams<Rational>) -> Result<Conditioned> {
    generalized_setup(params)?.condition(Instant::now())
}

pub fn oracle_generalized_sweep(params: &GeneralizedParams<Rational>) -> Result<Vec<OracleReport>> {
    let run = generalized_conditioned(params)?;
    let pop = Rational::from_u64(params.population);
    let expected = (&params.p + &params.r) / &pop;
    let checks = run.standard_checks("(p+r)/(N+1)", &expected);
    let mut reports = Vec::new();
    for b in 1..=params.population {
        let started = Instant::now();
        let members = target_members(params.population, params.suspect, b);
        let oracle = run.belief_in(&members)?;
        let closed = generalized_cold_case_belief(&params.clone().with_target(b));
        let point = vec![
            ("N+1".into(), params.population.to_string()),
            ("p".into(), params.p.to_string()),
            ("q".into(), params.q.to_string()),
            ("r".into(), params.r.to_string()),
            ("s".into(), (params.suspect + 1).to_string()),
            ("|B|".into(), b.to_string()),
        ];
        reports.push(compare("generalized".into(), point, closed, oracle, &run, checks.clone(), started));
    }
    Ok(reports)
}

pub fn oracle_generalized(params: &GeneralizedParams<Rational>) -> Result<OracleReport> {
    pick(oracle_generalized_sweep(params)?, params.target_set_size, false)
}

// ---------------------------------------------------------------------------
// search case

fn search_setup(params: &IslandParams<Rational>, route: SearchRoute) -> Result<Setup> {
    params.validate()?;
    check_population(params.population)?;
    let pop = params.population as usize;
    let n = params.others();
    let p = &params.p;
    let miss = one() - p;
    let extended = route != SearchRoute::AtLeastOne;
    let pf = island_frame(params.population, extended)?;
    let some_bearer = one() - miss.powu(n + 1);
    let mut entries = Vec::new();
    for mask in 1u64..(1 << pop) {
        let y = bits(mask, pop);
        let k = mask.count_ones() as u64;
        let weight = p.powu(k) * miss.powu(n + 1 - k) / Rational::from_u64(k);
        for x in bearers(&y, 1) {
            match route {
                SearchRoute::ExtendedFrame => entries.push((block(&pf, &[("S", x)], &y, None)?, weight.clone())),
                SearchRoute::AtLeastOne => {
                    let c = Predicate::is_in("C", bearers(&y, 1));
                    entries.push((block(&pf, &[("S", x)], &y, Some(c))?, &weight / &some_bearer));
                }
                SearchRoute::Classical => {
                    let mass = &weight / Rational::from_u64(n + 1);
                    for c in 0..pop {
                        entries.push((block(&pf, &[("S", x), ("C", c)], &y, None)?, mass.clone()));
                    }
                }
            }
        }
    }
    if extended {
        let unfound = pf.value_of("S", "*")?;
        entries.push((block(&pf, &[("S", unfound)], &vec![0; pop], None)?, miss.powu(n + 1)));
    }
    let prior = MassFunction::new(pf.frame(), entries)?;
    let hypothesis = match route {
        SearchRoute::AtLeastOne => pf.event_of(&Predicate::eq("S", params.suspect))?,
        _ => pf.event_of(&match_predicate(params.suspect))?,
    };
    Ok(Setup {
        pf,
        prior,
        hypothesis,
        culprit: "C",
    })
}

pub fn search_conditioned(params: &IslandParams<Rational>, route: SearchRoute) -> Result<Conditioned> {
    search_setup(params, route)?.condition(Instant::now())
}

/// Search-case oracle for B = {s}.
pub fn oracle_search(params: &IslandParams<Rational>, route: SearchRoute) -> Result<OracleReport> {
    if params.target_set_size != 1 {
        return Err(Error::InvalidParams("search case is defined for |B| = 1 only".into()));
    }
    let started = Instant::now();
    let run = search_conditioned(params, route)?;
    let n = params.others();
    let p = &params.p;
    let pop = Rational::from_u64(n + 1);
    let all_miss = (one() - p).powu(n + 1);
    let (name, expected) = match route {
        SearchRoute::ExtendedFrame => ("(1-(1-p)^(N+1))/(N+1)", (one() - &all_miss) / &pop),
        SearchRoute::AtLeastOne => ("1/(N+1)", one() / &pop),
        SearchRoute::Classical => ("p/(N+1)", p / &pop),
    };
    let mut checks = run.standard_checks(name, &expected);
    let oracle = run.belief_in(&[params.suspect])?;
    let closed = match route {
        SearchRoute::Classical => search_case_classical(params),
        _ => search_case_belief(params),
    };
    match route {
        SearchRoute::ExtendedFrame => {
            if *p < one() {
                let harmonic = search_case_belief_harmonic(params);
                checks.push(Check::new(
                    "harmonic-mean form agrees",
                    matches!((&harmonic, &oracle), (Ok(h), Some(o)) if h == o),
                ));
            } else {
                checks.push(Check::new("belief 0 at p = 1", oracle.as_ref().is_some_and(Zero::is_zero)));
            }
        }
        SearchRoute::AtLeastOne => {
            let other = search_conditioned(params, SearchRoute::ExtendedFrame)?.belief_in(&[params.suspect])?;
            checks.push(Check::new(
                "same belief as the extended-frame route",
                other.is_some() && other == oracle,
            ));
        }
        SearchRoute::Classical => {
            let (belief, classical) = (search_case_belief(params), search_case_classical(params));
            let ordered = matches!((&belief, &classical), (Ok(b), Ok(c)) if b <= c);
            checks.push(Check::new("harmonic mean <= arithmetic mean", ordered));
            if n >= 1 {
                let strict = matches!((&belief, &classical), (Ok(b), Ok(c)) if b < c);
                checks.push(Check::new("strict for N >= 1", strict));
            }
        }
    }
    let point = with_target(island_point(params.population, p, params.suspect), 1);
    Ok(compare(format!("search-case/{}", route.name()), point, closed, oracle, &run, checks, started))
}

// ---------------------------------------------------------------------------
// parental identification

/// S, the transmission indicator A, allele counts G1..G{N+1} in {0,1,2}, and the father F last.
pub fn parental_frame(population: u64) -> Result<ProductFrame> {
    if population == 0 {
        return Err(Error::InvalidParams("population must be at least 1".into()));
    }
    check_population(population)?;
    let pop = population as usize;
    let people = || (1..=pop).map(|i| i.to_string());
    let mut vars = vec![VariableSpec::labelled("S", people()), VariableSpec::new("A", 2)];
    vars.extend((1..=pop).map(|i| VariableSpec::new(format!("G{i}"), 3)));
    vars.push(VariableSpec::labelled("F", people()));
    ProductFrame::new(vars)
}

/// H_{s,a}: S = s, Γ_s = a, and the father carries two matching alleles or carries
/// one and passed it on (A = 1).
pub fn parental_hypothesis(suspect: usize, alleles: AlleleCount) -> Predicate {
    Predicate::And(vec![
        Predicate::eq("S", suspect),
        Predicate::eq(format!("G{}", suspect + 1), alleles.count() as usize),
        Predicate::Or(vec![
            Predicate::indirect("F", "G", 2),
            Predicate::And(vec![Predicate::indirect("F", "G", 1), Predicate::eq("A", 1)]),
        ]),
    ])
}

fn parental_setup(params: &ParentalParams<Rational>, route: ParentalRoute) -> Result<Setup> {
    params.validate()?;
    let pf = parental_frame(params.population)?;
    let pop = params.population as usize;
    let n1 = params.population;
    let scale = match route {
        ParentalRoute::Belief => Rational::from_u64(2 * n1),
        ParentalRoute::Classical => Rational::from_u64(2 * n1 * n1),
    };
    let probs = [&params.p0, &params.p1, &params.p2];
    let mut entries = Vec::new();
    for code in 0..3u64.pow(pop as u32) {
        let mut ys = Vec::with_capacity(pop);
        let mut rest = code;
        for _ in 0..pop {
            ys.push((rest % 3) as usize);
            rest /= 3;
        }
        let weight = ys.iter().fold(one(), |acc, &y| acc * probs[y]) / &scale;
        if weight.is_zero() {
            continue;
        }
        for x in 0..pop {
            for a in 0..2 {
                match route {
                    ParentalRoute::Belief => {
                        entries.push((block(&pf, &[("S", x), ("A", a)], &ys, None)?, weight.clone()))
                    }
                    ParentalRoute::Classical => {
                        for f in 0..pop {
                            let set = block(&pf, &[("S", x), ("A", a), ("F", f)], &ys, None)?;
                            entries.push((set, weight.clone()));
                        }
                    }
                }
            }
        }
    }
    let prior = MassFunction::new(pf.frame(), entries)?;
    let hypothesis = pf.event_of(&parental_hypothesis(params.suspect, params.suspect_allele_count))?;
    Ok(Setup {
        pf,
        prior,
        hypothesis,
        culprit: "F",
    })
}

pub fn parental_conditioned(params: &ParentalParams<Rational>, route: ParentalRoute) -> Result<Conditioned> {
    parental_setup(params, route)?.condition(Instant::now())
}

fn parental_normalizer(params: &ParentalParams<Rational>, route: ParentalRoute) -> (&'static str, Rational) {
    let n = params.others();
    let pop = Rational::from_u64(n + 1);
    let half = Rational::half();
    let (p0, p1, p2) = (&params.p0, &params.p1, &params.p2);
    let nn = Rational::from_u64(n);
    match (route, params.suspect_allele_count) {
        (ParentalRoute::Belief, AlleleCount::Two) => ("p2/(N+1)", p2 / &pop),
        (ParentalRoute::Belief, AlleleCount::One) => (
            "(p1/(N+1))(1-(p0+p1)^N/2)",
            p1 / &pop * (one() - &half * (p0 + p1).powu(n)),
        ),
        (ParentalRoute::Classical, AlleleCount::One) => (
            "(p1/2 + p1 N(p1/2+p2))/(N+1)^2",
            (&half * p1 + p1 * &nn * (&half * p1 + p2)) / (&pop * &pop),
        ),
        (ParentalRoute::Classical, AlleleCount::Two) => (
            "p2(1 + N(p1/2+p2))/(N+1)^2",
            p2 * (one() + &nn * (&half * p1 + p2)) / (&pop * &pop),
        ),
    }
}

pub fn oracle_parental_sweep(params: &ParentalParams<Rational>, route: ParentalRoute) -> Result<Vec<OracleReport>> {
    let run = parental_conditioned(params, route)?;
    let (name, expected) = parental_normalizer(params, route);
    let mut checks = run.standard_checks(name, &expected);
    if route == ParentalRoute::Classical {
        if let (Ok(c), Ok(b)) = (paternity_classical(params), paternity_belief(params)) {
            checks.push(Check::new("classical >= belief", c >= b));
        }
    }
    let sizes: Vec<u64> = match route {
        ParentalRoute::Classical => vec![1],
        ParentalRoute::Belief => (1..=params.population).collect(),
    };
    let scenario = format!(
        "parental/{}-allele/{}",
        match params.suspect_allele_count {
            AlleleCount::One => "one",
            AlleleCount::Two => "two",
        },
        route.name()
    );
    let mut reports = Vec::new();
    for b in sizes {
        let started = Instant::now();
        let target = params.clone().with_target(b);
        let members = target_members(params.population, params.suspect, b);
        let oracle = run.belief_in(&members)?;
        let closed = match route {
            ParentalRoute::Classical => paternity_classical(&target),
            ParentalRoute::Belief => paternity_belief(&target),
        };
        let mut local = checks.clone();
        if route == ParentalRoute::Belief {
            match params.suspect_allele_count {
                AlleleCount::One => {
                    let two = paternity_belief_two_alleles(&target.clone().with_alleles(AlleleCount::Two));
                    if let (Ok(two), Some(one)) = (two, &oracle) {
                        local.push(Check::new("one-allele belief <= two-allele belief", *one <= two));
                    }
                }
                AlleleCount::Two => {
                    if let Some(total) = &oracle {
                        local.push(decomposition_check(&run, &members, params, b, total)?);
                    }
                }
            }
        }
        let point = vec![
            ("N+1".into(), params.population.to_string()),
            ("p0".into(), params.p0.to_string()),
            ("p1".into(), params.p1.to_string()),
            ("p2".into(), params.p2.to_string()),
            ("alleles".into(), params.suspect_allele_count.count().to_string()),
            ("s".into(), (params.suspect + 1).to_string()),
            ("|B|".into(), b.to_string()),
        ];
        reports.push(compare(scenario.clone(), point, closed, oracle, &run, local, started));
    }
    Ok(reports)
}

/// Bel(F∈B) splits into Bel(F∈B, A=1) = ½p0^(N+1−|B|) and Bel(F∈B, A=0) = ½(p0+p1)^(N+1−|B|).
fn decomposition_check(
    run: &Conditioned,
    members: &[usize],
    params: &ParentalParams<Rational>,
    size: u64,
    total: &Rational,
) -> Result<Check> {
    let mut parts = Vec::new();
    for a in [1, 0] {
        let event = run.frame.event_of(&Predicate::And(vec![
            Predicate::is_in("F", members.iter().copied()),
            Predicate::eq("A", a),
        ]))?;
        parts.push(run.belief_of(&event)?.unwrap_or_else(Rational::zero));
    }
    let k = params.population - size;
    let half = Rational::half();
    let expected_a1 = &half * params.p0.powu(k);
    let expected_a0 = &half * (&params.p0 + &params.p1).powu(k);
    Ok(Check::new(
        "Bel(F in B) = Bel(F in B, A=1) + Bel(F in B, A=0)",
        parts[0] == expected_a1 && parts[1] == expected_a0 && &parts[0] + &parts[1] == *total,
    ))
}

pub fn oracle_parental(params: &ParentalParams<Rational>, route: ParentalRoute) -> Result<OracleReport> {
    let sweep = oracle_parental_sweep(params, route)?;
    pick(sweep, params.target_set_size, route == ParentalRoute::Classical)
}
