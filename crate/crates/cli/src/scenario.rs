//! Scenario files: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! scenario = island-cold
//! N = 3
//! p = 1/2
//! suspect = 1
//! target_set = 1, 2
//! ```
//!
//! Individuals are numbered from 1. Numbers are exact: `3/4`, `2`, `0.855` and
//! `1e-6` are all read as rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fbelief_core::ledger::{cold_case_ledger, CellSet, Ledger, OptionId};
use fbelief_core::parental::AlleleCount;
use fbelief_core::{EventSet, Frame, MassFunction, Rational};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A well-formed file whose contents break a named constraint.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{constraint}: {message}")]
pub struct ValidationError {
    pub constraint: &'static str,
    pub message: String,
}

impl ValidationError {
    fn new(constraint: &'static str, message: impl Into<String>) -> ValidationError {
        ValidationError {
            constraint,
            message: message.into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Core(#[from] fbelief_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    IslandCold,
    IslandSearch,
    IslandGeneral,
    Parental,
    Ledger,
    CustomMass,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::IslandCold => "island-cold",
            ScenarioKind::IslandSearch => "island-search",
            ScenarioKind::IslandGeneral => "island-general",
            ScenarioKind::Parental => "parental",
            ScenarioKind::Ledger => "ledger",
            ScenarioKind::CustomMass => "custom-mass",
        }
    }

    fn parse(s: &str) -> Option<ScenarioKind> {
        [
            ScenarioKind::IslandCold,
            ScenarioKind::IslandSearch,
            ScenarioKind::IslandGeneral,
            ScenarioKind::Parental,
            ScenarioKind::Ledger,
            ScenarioKind::CustomMass,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    /// Keys accepted besides `scenario`, and whether each may repeat.
    fn keys(self) -> &'static [(&'static str, bool)] {
        match self {
            ScenarioKind::IslandCold | ScenarioKind::IslandSearch => {
                &[("N", false), ("p", false), ("suspect", false), ("target_set", true)]
            }
            ScenarioKind::IslandGeneral => &[
                ("N", false),
                ("p", false),
                ("q", false),
                ("r", false),
                ("suspect", false),
                ("target_set", true),
            ],
            ScenarioKind::Parental => &[
                ("N", false),
                ("p0", false),
                ("p1", false),
                ("p2", false),
                ("allele_count", false),
                ("suspect", false),
                ("target_set", true),
            ],
            ScenarioKind::Ledger => &[("entry", true), ("template", false), ("N", false), ("p", false)],
            ScenarioKind::CustomMass => &[("outcomes", false), ("mass", true), ("condition", false), ("query", true)],
        }
    }
}

/// The island parameters shared by the cold and search cases.
#[derive(Debug, Clone, PartialEq)]
pub struct IslandSpec {
    pub population: u64,
    pub p: Rational,
    /// 0-based.
    pub suspect: usize,
    /// 0-based members, each containing the suspect.
    pub targets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSpec {
    pub population: u64,
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
    pub suspect: usize,
    pub targets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParentalSpec {
    pub population: u64,
    pub p0: Rational,
    pub p1: Rational,
    pub p2: Rational,
    pub alleles: AlleleCount,
    pub suspect: usize,
    pub targets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct CustomSpec {
    pub frame: Arc<Frame>,
    pub mass: MassFunction,
    pub condition: Option<EventSet>,
    pub queries: Vec<EventSet>,
}

#[derive(Debug, Clone)]
pub enum ScenarioBody {
    IslandCold(IslandSpec),
    IslandSearch(IslandSpec),
    IslandGeneral(GeneralSpec),
    Parental(ParentalSpec),
    Ledger(Ledger),
    CustomMass(CustomSpec),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub body: ScenarioBody,
    /// Parameters as read, normalized (rationals in lowest terms), for echoing.
    pub echo: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
struct Field {
    key: String,
    value: String,
    line: usize,
    column: usize,
}

impl Field {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<Field>, ParseError> {
    let mut fields = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let column = content.len() - content.trim_start().len() + 1;
            return Err(ParseError {
                line,
                column,
                message: "expected `key = value`".into(),
            });
        };
        let key = content[..eq].trim();
        if key.is_empty() {
            return Err(ParseError {
                line,
                column: eq + 1,
                message: "missing key before `=`".into(),
            });
        }
        let after = &content[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        fields.push(Field {
            key: key.to_string(),
            value: after.trim().to_string(),
            line,
            column: char_column(content, eq + 1 + lead),
        });
    }
    Ok(fields)
}

fn char_column(s: &str, byte: usize) -> usize {
    s[..byte.min(s.len())].chars().count() + 1
}

/// Reads an exact rational: `a/b`, an integer, a finite decimal, or a decimal with
/// an exponent such as `1e-6`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    if exponent.abs() > 1000 {
        return None;
    }
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let factor: Rational = if scale >= 0 {
        Pow::pow(ten, scale as u32)
    } else {
        Rational::one() / Pow::pow(ten, scale.unsigned_abs())
    };
    let value = Rational::from_integer(numer) * factor;
    Some(if negative { -value } else { value })
}

/// The fields of one file, checked against the keys the scenario kind allows.
struct Fields {
    kind: ScenarioKind,
    fields: Vec<Field>,
}

impl Fields {
    fn one(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.key == key)
    }

    fn all(&self, key: &str) -> impl Iterator<Item = &Field> {
        let key = key.to_string();
        self.fields.iter().filter(move |f| f.key == key)
    }

    fn required(&self, key: &'static str) -> Result<&Field, ValidationError> {
        self.one(key).ok_or_else(|| {
            ValidationError::new("required key", format!("{} scenario needs `{key}`", self.kind.name()))
        })
    }

    fn rational(&self, key: &'static str) -> Result<Rational, ScenarioError> {
        let f = self.required(key)?;
        Ok(parse_rational(&f.value).ok_or_else(|| f.error(format!("`{}` is not a rational number", f.value)))?)
    }

    fn integer(&self, key: &'static str) -> Result<Option<u64>, ParseError> {
        self.one(key)
            .map(|f| {
                f.value
                    .parse::<u64>()
                    .map_err(|_| f.error(format!("`{}` is not a non-negative integer", f.value)))
            })
            .transpose()
    }
}

fn check_keys(kind: ScenarioKind, fields: &[Field]) -> Result<(), ParseError> {
    let allowed = kind.keys();
    let mut seen: Vec<&str> = Vec::new();
    for f in fields.iter().filter(|f| f.key != "scenario") {
        let Some((_, repeat)) = allowed.iter().find(|(k, _)| *k == f.key) else {
            let names: Vec<&str> = allowed.iter().map(|(k, _)| *k).collect();
            return Err(ParseError {
                line: f.line,
                column: 1,
                message: format!(
                    "unknown key `{}` for {} (expected one of: {})",
                    f.key,
                    kind.name(),
                    names.join(", ")
                ),
            });
        };
        if !repeat && seen.contains(&f.key.as_str()) {
            return Err(ParseError {
                line: f.line,
                column: 1,
                message: format!("key `{}` given twice", f.key),
            });
        }
        seen.push(&f.key);
    }
    Ok(())
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let fields = lex(text)?;
    let mut discriminators = fields.iter().filter(|f| f.key == "scenario");
    let Some(disc) = discriminators.next() else {
        return Err(ValidationError::new("scenario discriminator", "file has no `scenario = ...` line").into());
    };
    if let Some(second) = discriminators.next() {
        return Err(ParseError {
            line: second.line,
            column: 1,
            message: "only one `scenario` line is allowed".into(),
        }
        .into());
    }
    let kind = ScenarioKind::parse(&disc.value).ok_or_else(|| {
        disc.error(format!(
            "unknown scenario `{}` (island-cold, island-search, island-general, parental, ledger, custom-mass)",
            disc.value
        ))
    })?;
    check_keys(kind, &fields)?;
    let fields = Fields { kind, fields };
    let mut echo = BTreeMap::new();
    let body = match kind {
        ScenarioKind::IslandCold => ScenarioBody::IslandCold(island(&fields, &mut echo)?),
        ScenarioKind::IslandSearch => ScenarioBody::IslandSearch(island(&fields, &mut echo)?),
        ScenarioKind::IslandGeneral => ScenarioBody::IslandGeneral(general(&fields, &mut echo)?),
        ScenarioKind::Parental => ScenarioBody::Parental(parental(&fields, &mut echo)?),
        ScenarioKind::Ledger => ScenarioBody::Ledger(ledger(&fields, &mut echo)?),
        ScenarioKind::CustomMass => ScenarioBody::CustomMass(custom(&fields, &mut echo)?),
    };
    Ok(Scenario { kind, body, echo })
}

fn probability(fields: &Fields, key: &'static str, echo: &mut BTreeMap<String, String>) -> Result<Rational, ScenarioError> {
    let v = fields.rational(key)?;
    if v.is_negative() || v > Rational::one() {
        return Err(ValidationError::new("probability range", format!("{key} = {v} must lie in [0, 1]")).into());
    }
    echo.insert(key.to_string(), v.to_string());
    Ok(v)
}

/// N, suspect and target sets; returns (population, suspect, targets).
fn population_and_targets(
    fields: &Fields,
    echo: &mut BTreeMap<String, String>,
) -> Result<(u64, usize, Vec<Vec<usize>>), ScenarioError> {
    let n = fields
        .integer("N")?
        .ok_or_else(|| ValidationError::new("required key", "missing `N` (population size minus one)"))?;
    let population = n
        .checked_add(1)
        .ok_or_else(|| ValidationError::new("population size", "N is too large"))?;
    let suspect_1 = fields.integer("suspect")?.unwrap_or(1);
    if suspect_1 == 0 || suspect_1 > population {
        return Err(ValidationError::new(
            "suspect in population",
            format!("suspect {suspect_1} is not one of 1..={population}"),
        )
        .into());
    }
    let suspect = (suspect_1 - 1) as usize;
    echo.insert("N".into(), n.to_string());
    echo.insert("suspect".into(), suspect_1.to_string());

    let mut targets = Vec::new();
    for f in fields.all("target_set") {
        let mut members = Vec::new();
        let mut offset = 0;
        for part in f.value.split(',') {
            let trimmed = part.trim();
            let col = f.column + offset + (part.len() - part.trim_start().len());
            offset += part.len() + 1;
            let idx: u64 = trimmed.parse().map_err(|_| ParseError {
                line: f.line,
                column: col,
                message: format!("`{trimmed}` is not an individual number"),
            })?;
            if idx == 0 || idx > population {
                return Err(ValidationError::new(
                    "target set in population",
                    format!("individual {idx} is not one of 1..={population}"),
                )
                .into());
            }
            let idx = (idx - 1) as usize;
            if members.contains(&idx) {
                return Err(ValidationError::new("target set", format!("individual {} listed twice", idx + 1)).into());
            }
            members.push(idx);
        }
        if !members.contains(&suspect) {
            return Err(ValidationError::new(
                "target set contains suspect",
                format!("target set {{{}}} must contain the suspect {suspect_1}", f.value),
            )
            .into());
        }
        members.sort_unstable();
        targets.push(members);
    }
    if targets.is_empty() {
        targets.push(vec![suspect]);
    }
    let rendered: Vec<String> = targets
        .iter()
        .map(|t| format!("{{{}}}", t.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    echo.insert("target_set".into(), rendered.join(" "));
    Ok((population, suspect, targets))
}

fn island(fields: &Fields, echo: &mut BTreeMap<String, String>) -> Result<IslandSpec, ScenarioError> {
    let (population, suspect, targets) = population_and_targets(fields, echo)?;
    let p = probability(fields, "p", echo)?;
    if p.is_zero() {
        return Err(ValidationError::new("p in (0, 1]", "p = 0 makes the match impossible").into());
    }
    Ok(IslandSpec {
        population,
        p,
        suspect,
        targets,
    })
}

fn sums_to_one(values: &[&Rational], names: &str) -> Result<(), ValidationError> {
    let total = values.iter().fold(Rational::zero(), |acc, v| acc + *v);
    if !total.is_one() {
        return Err(ValidationError::new("probabilities sum to 1", format!("{names} = {total}")));
    }
    Ok(())
}

fn general(fields: &Fields, echo: &mut BTreeMap<String, String>) -> Result<GeneralSpec, ScenarioError> {
    let (population, suspect, targets) = population_and_targets(fields, echo)?;
    let p = probability(fields, "p", echo)?;
    let q = probability(fields, "q", echo)?;
    let r = probability(fields, "r", echo)?;
    if p.is_zero() {
        return Err(ValidationError::new("p > 0", "p = 0 makes the match impossible").into());
    }
    sums_to_one(&[&p, &q, &r], "p + q + r")?;
    Ok(GeneralSpec {
        population,
        p,
        q,
        r,
        suspect,
        targets,
    })
}

fn parental(fields: &Fields, echo: &mut BTreeMap<String, String>) -> Result<ParentalSpec, ScenarioError> {
    let (population, suspect, targets) = population_and_targets(fields, echo)?;
    let p0 = probability(fields, "p0", echo)?;
    let p1 = probability(fields, "p1", echo)?;
    let p2 = probability(fields, "p2", echo)?;
    sums_to_one(&[&p0, &p1, &p2], "p0 + p1 + p2")?;
    let count = fields
        .integer("allele_count")?
        .ok_or_else(|| ValidationError::new("required key", "parental scenario needs `allele_count` (1 or 2)"))?;
    let alleles = AlleleCount::from_count(count)
        .map_err(|_| ValidationError::new("allele_count in {1, 2}", format!("got {count}")))?;
    echo.insert("allele_count".into(), count.to_string());
    Ok(ParentalSpec {
        population,
        p0,
        p1,
        p2,
        alleles,
        suspect,
        targets,
    })
}

fn parse_cells(f: &Field, text: &str) -> Result<CellSet, ScenarioError> {
    let trimmed = text.trim();
    if let Some(id) = OptionId::parse(trimmed) {
        return Ok(id.cells());
    }
    let mut cells = Vec::new();
    let mut rest = trimmed.trim_start_matches('{').trim_end_matches('}');
    while let Some(open) = rest.find('(') {
        let close = rest[open..]
            .find(')')
            .ok_or_else(|| f.error("unclosed `(` in cell list"))?
            + open;
        let inner = &rest[open + 1..close];
        let (g, e) = inner
            .split_once(',')
            .ok_or_else(|| f.error(format!("cell `({inner})` should read (G,E)")))?;
        let bit = |s: &str| match s.trim() {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            other => Err(f.error(format!("cell coordinate `{other}` must be 0 or 1"))),
        };
        cells.push((bit(g)?, bit(e)?));
        rest = &rest[close + 1..];
    }
    if cells.is_empty() {
        return Err(f
            .error(format!("`{trimmed}` is neither an option I..IX nor a list of (G,E) cells"))
            .into());
    }
    Ok(CellSet::from_cells(cells)?)
}

fn ledger(fields: &Fields, echo: &mut BTreeMap<String, String>) -> Result<Ledger, ScenarioError> {
    let entries: Vec<&Field> = fields.all("entry").collect();
    if let Some(t) = fields.one("template") {
        if !entries.is_empty() {
            return Err(ValidationError::new("ledger source", "give either `template` or `entry` lines, not both").into());
        }
        if t.value != "cold-case" {
            return Err(t.error(format!("unknown template `{}` (expected cold-case)", t.value)).into());
        }
        let n = fields
            .integer("N")?
            .ok_or_else(|| ValidationError::new("required key", "cold-case template needs `N`"))?;
        let p = fields.rational("p")?;
        echo.insert("template".into(), "cold-case".into());
        echo.insert("N".into(), n.to_string());
        echo.insert("p".into(), p.to_string());
        return Ok(cold_case_ledger(n, &p)?);
    }
    if let Some(f) = fields.one("N").or_else(|| fields.one("p")) {
        return Err(f.error(format!("`{}` is only used with `template = cold-case`", f.key)).into());
    }
    if entries.is_empty() {
        return Err(ValidationError::new("ledger entries", "ledger needs at least one `entry` line").into());
    }
    let mut parsed = Vec::new();
    for f in entries {
        let (cells, mass) = f
            .value
            .rsplit_once(':')
            .ok_or_else(|| f.error("entry should read `<cells> : <mass>`"))?;
        let lead = mass.len() - mass.trim_start().len();
        let mass_col = f.column + char_column(&f.value, f.value.len() - mass.len() + lead) - 1;
        let m = parse_rational(mass).ok_or_else(|| ParseError {
            line: f.line,
            column: mass_col,
            message: format!("`{}` is not a rational number", mass.trim()),
        })?;
        parsed.push((parse_cells(f, cells)?, m));
    }
    let ledger = Ledger::new(parsed)?;
    for (cells, m) in ledger.entries() {
        echo.insert(format!("entry {cells}"), m.to_string());
    }
    Ok(ledger)
}

/// `{a, b}` over the labelled frame.
fn parse_event(f: &Field, text: &str, frame: &Arc<Frame>) -> Result<EventSet, ScenarioError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| f.error(format!("event `{t}` should be written {{label, label, ...}}")))?;
    let labels: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for l in &labels {
        if frame.index_of(l).is_none() {
            return Err(f.error(format!("`{l}` is not one of the declared outcomes")).into());
        }
    }
    Ok(EventSet::from_labels(frame, labels)?)
}

fn custom(fields: &Fields, echo: &mut BTreeMap<String, String>) -> Result<CustomSpec, ScenarioError> {
    let outcomes = fields.required("outcomes")?;
    let labels: Vec<String> = outcomes.value.split(',').map(|s| s.trim().to_string()).collect();
    if labels.iter().any(String::is_empty) {
        return Err(outcomes.error("empty outcome label").into());
    }
    let frame = Frame::with_labels(labels.clone()).map_err(|e| outcomes.error(e.to_string()))?;
    echo.insert("outcomes".into(), labels.join(", "));

    let mut entries = Vec::new();
    for f in fields.all("mass") {
        let (set, mass) = f
            .value
            .rsplit_once(':')
            .ok_or_else(|| f.error("mass line should read `{outcomes} : <mass>`"))?;
        let m = parse_rational(mass).ok_or_else(|| f.error(format!("`{}` is not a rational number", mass.trim())))?;
        entries.push((parse_event(f, set, &frame)?, m));
    }
    if entries.is_empty() {
        return Err(ValidationError::new("mass entries", "custom-mass needs at least one `mass` line").into());
    }
    let mass = MassFunction::new(&frame, entries)?;
    for (set, m) in mass.focal_sets_sorted() {
        echo.insert(format!("mass {}", set.describe()), m.to_string());
    }
    let condition = fields
        .one("condition")
        .map(|f| parse_event(f, &f.value, &frame))
        .transpose()?;
    if let Some(h) = &condition {
        if h.is_empty() {
            return Err(ValidationError::new("condition nonempty", "cannot condition on the empty event").into());
        }
        echo.insert("condition".into(), h.describe());
    }
    let queries = fields
        .all("query")
        .map(|f| parse_event(f, &f.value, &frame))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CustomSpec {
        frame,
        mass,
        condition,
        queries,
    })
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for (k, v) in &self.echo {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbelief_core::scalar::rat;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("6/8"), Some(rat(3, 4)));
        assert_eq!(parse_rational("0.855"), Some(rat(171, 200)));
        assert_eq!(parse_rational("2"), Some(rat(2, 1)));
        assert_eq!(parse_rational("1e-6"), Some(rat(1, 1_000_000)));
        assert_eq!(parse_rational("2.5E2"), Some(rat(250, 1)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-1/2"), Some(rat(-1, 2)));
        for bad in ["", "1/0", "abc", "1.2.3", "0x10", "e5", "1/2/3"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
    }

    #[test]
    fn island_file() {
        let s = parse_scenario("# cold case\nscenario = island-cold\nN = 3\np = 1/2\n").unwrap();
        let ScenarioBody::IslandCold(spec) = s.body else { panic!() };
        assert_eq!(spec.population, 4);
        assert_eq!(spec.targets, vec![vec![0]]);
        assert_eq!(s.echo["p"], "1/2");
    }

    #[test]
    fn target_sets_are_one_based() {
        let s = parse_scenario("scenario = island-cold\nN = 3\np = 1/2\nsuspect = 2\ntarget_set = 4, 2\n").unwrap();
        let ScenarioBody::IslandCold(spec) = s.body else { panic!() };
        assert_eq!(spec.suspect, 1);
        assert_eq!(spec.targets, vec![vec![1, 3]]);
        let err = parse_scenario("scenario = island-cold\nN = 3\np = 1/2\ntarget_set = 2, 3\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Validation(v) if v.constraint == "target set contains suspect"));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_scenario("scenario = island-cold\nN = 3\np = one half\n").unwrap_err();
        let ScenarioError::Parse(e) = err else { panic!("{err:?}") };
        assert_eq!((e.line, e.column), (3, 5));

        let err = parse_scenario("scenario = island-cold\nN = 3\n  oops\n").unwrap_err();
        let ScenarioError::Parse(e) = err else { panic!() };
        assert_eq!((e.line, e.column), (3, 3));

        let err = parse_scenario("scenario = island-cold\nN = 3\np = 1/2\nq = 1/2\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(ParseError { line: 4, .. })));

        let err = parse_scenario("scenario = island-cold\nscenario = ledger\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(ParseError { line: 2, .. })));

        let err = parse_scenario("scenario = ledger\nentry = I : 1/2\nentry = (0,0) (1,1) : half\n").unwrap_err();
        let ScenarioError::Parse(e) = err else { panic!() };
        assert_eq!((e.line, e.column), (3, 23));
    }

    #[test]
    fn validation_errors_name_the_constraint() {
        let err = parse_scenario("scenario = island-general\nN = 2\np = 1/2\nq = 1/4\nr = 1/2\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Validation(v) if v.constraint == "probabilities sum to 1"));
        let err = parse_scenario("N = 2\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Validation(v) if v.constraint == "scenario discriminator"));
        let err = parse_scenario("scenario = island-cold\nN = 2\np = 0\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Validation(_)));
    }

    #[test]
    fn ledger_file() {
        let s = parse_scenario(
            "scenario = ledger\n\
             entry = (0,0) : 0.855\n\
             entry = (0,1) : 0.045\n\
             entry = (1,0) : 0.02\n\
             entry = (1,1) : 0.08\n",
        )
        .unwrap();
        let ScenarioBody::Ledger(l) = s.body else { panic!() };
        assert_eq!(l.entries().len(), 4);
        let s = parse_scenario("scenario = ledger\nentry = I : 1/2\nentry = {(0,0), (1,0)} : 1/2\n").unwrap();
        let ScenarioBody::Ledger(l) = s.body else { panic!() };
        assert_eq!(l.mass_of(OptionId::II.cells()), rat(1, 2));
        let s = parse_scenario("scenario = ledger\ntemplate = cold-case\nN = 1\np = 1/2\n").unwrap();
        let ScenarioBody::Ledger(l) = s.body else { panic!() };
        assert_eq!(l.entries().len(), 3);
    }

    #[test]
    fn custom_mass_file() {
        let s = parse_scenario(
            "scenario = custom-mass\n\
             outcomes = Father, Mother, Son\n\
             mass = {Father, Mother} : 9/10\n\
             mass = {Son} : 1/10\n\
             condition = {Father, Son}\n\
             query = {Father}\n",
        )
        .unwrap();
        let ScenarioBody::CustomMass(c) = s.body else { panic!() };
        assert_eq!(c.mass.focal_count(), 2);
        assert_eq!(c.queries.len(), 1);
        assert!(c.condition.is_some());
        let err = parse_scenario("scenario = custom-mass\noutcomes = a, b\nmass = {c} : 1\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse(ParseError { line: 3, .. })));
        let err = parse_scenario("scenario = custom-mass\noutcomes = a, b\nmass = {a} : 1/2\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Core(fbelief_core::Error::MassNotNormalized { .. })));
    }
}
