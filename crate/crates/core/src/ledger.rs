//! Updating belief in guilt with one piece of evidence.
//!
//! The outcome space is the four cells (G, E) with G = 1 for guilt and E = 1 for
//! the evidence being present. A [`Ledger`] assigns mass to sets of cells;
//! conditioning on E = 1 and projecting onto G gives belief in guilt, belief in
//! innocence, and whatever mass remains uncommitted between the two.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frame::EventSet;
use crate::mass::MassFunction;
use crate::product::{Predicate, ProductFrame, VariableSpec};
use crate::scalar::{is_negative, Rational, Scalar};

/// A nonempty set of (G, E) cells, stored as a 4-bit mask. Bit `2g + e` is cell (g, e),
/// matching the outcome numbering of [`ledger_frame`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSet(u8);

impl CellSet {
    pub fn from_cells(cells: impl IntoIterator<Item = (u8, u8)>) -> Result<CellSet> {
        let mut mask = 0u8;
        for (g, e) in cells {
            if g > 1 || e > 1 {
                return Err(Error::InvalidParams(format!("cell ({g},{e}) is not in {{0,1}}²")));
            }
            mask |= 1 << (2 * g + e);
        }
        if mask == 0 {
            return Err(Error::EmptyFocalSet);
        }
        Ok(CellSet(mask))
    }

    pub fn from_mask(mask: u8) -> Result<CellSet> {
        if mask == 0 || mask > 0b1111 {
            return Err(Error::InvalidParams(format!("cell mask {mask:#b} out of range")));
        }
        Ok(CellSet(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, g: u8, e: u8) -> bool {
        self.0 & (1 << (2 * g + e)) != 0
    }

    pub fn cells(self) -> Vec<(u8, u8)> {
        (0..2u8)
            .flat_map(|g| (0..2u8).map(move |e| (g, e)))
            .filter(|&(g, e)| self.contains(g, e))
            .collect()
    }

    /// The set of G values the cells cover.
    pub fn guilt_projection(self) -> GuiltProjection {
        let innocent = self.contains(0, 0) || self.contains(0, 1);
        let guilty = self.contains(1, 0) || self.contains(1, 1);
        match (innocent, guilty) {
            (true, true) => GuiltProjection::Either,
            (false, true) => GuiltProjection::Guilty,
            _ => GuiltProjection::NotGuilty,
        }
    }

    /// The taxonomy entry, if the set projects onto both guilt values.
    pub fn option_id(self) -> Option<OptionId> {
        OptionId::ALL.into_iter().find(|o| o.cells() == self)
    }

    pub fn all_nonempty() -> impl Iterator<Item = CellSet> {
        (1u8..16).map(CellSet)
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = self.option_id() {
            return write!(f, "{id}");
        }
        let cells: Vec<String> = self.cells().iter().map(|(g, e)| format!("({g},{e})")).collect();
        write!(f, "{}", cells.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuiltProjection {
    Guilty,
    NotGuilty,
    Either,
}

/// The nine cell sets that say nothing about guilt on their own: each covers
/// both G = 0 and G = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl OptionId {
    pub const ALL: [OptionId; 9] = [
        OptionId::I,
        OptionId::II,
        OptionId::III,
        OptionId::IV,
        OptionId::V,
        OptionId::VI,
        OptionId::VII,
        OptionId::VIII,
        OptionId::IX,
    ];

    pub fn cells(self) -> CellSet {
        let cells: &[(u8, u8)] = match self {
            OptionId::I => &[(0, 0), (1, 0), (0, 1), (1, 1)],
            OptionId::II => &[(0, 0), (1, 0)],
            OptionId::III => &[(0, 1), (1, 1)],
            OptionId::IV => &[(0, 0), (1, 1)],
            OptionId::V => &[(0, 0), (0, 1), (1, 1)],
            OptionId::VI => &[(0, 0), (1, 0), (1, 1)],
            OptionId::VII => &[(1, 0), (0, 1)],
            OptionId::VIII => &[(1, 0), (0, 1), (1, 1)],
            OptionId::IX => &[(0, 0), (1, 0), (0, 1)],
        };
        CellSet::from_cells(cells.iter().copied()).expect("static cells")
    }

    pub fn interpretation(self) -> &'static str {
        match self {
            OptionId::I => "uninformative",
            OptionId::II => "no evidence whatever the truth",
            OptionId::III => "evidence whatever the truth",
            OptionId::IV => "incriminating evidence exactly when guilty",
            OptionId::V => "incriminating evidence, false positive possible",
            OptionId::VI => "incriminating evidence, false negative possible",
            OptionId::VII => "perfect exculpatory evidence",
            OptionId::VIII => "exculpatory evidence, false positive possible",
            OptionId::IX => "exculpatory evidence, false negative possible",
        }
    }

    pub fn parse(s: &str) -> Option<OptionId> {
        OptionId::ALL.into_iter().find(|o| o.to_string() == s)
    }
}

impl fmt::Display for OptionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OptionId::I => "I",
            OptionId::II => "II",
            OptionId::III => "III",
            OptionId::IV => "IV",
            OptionId::V => "V",
            OptionId::VI => "VI",
            OptionId::VII => "VII",
            OptionId::VIII => "VIII",
            OptionId::IX => "IX",
        };
        f.write_str(s)
    }
}

/// Mass assignments on cell sets. Zero masses are dropped at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    entries: Vec<(CellSet, Rational)>,
}

impl Ledger {
    pub fn new(entries: impl IntoIterator<Item = (CellSet, Rational)>) -> Result<Ledger> {
        let mut kept: Vec<(CellSet, Rational)> = Vec::new();
        let mut total = Rational::zero();
        for (cells, mass) in entries {
            if is_negative(&mass) {
                return Err(Error::NegativeMass { mass: mass.to_string() });
            }
            if mass.is_zero() {
                continue;
            }
            total += &mass;
            match kept.iter_mut().find(|(c, _)| *c == cells) {
                Some((_, m)) => *m += mass,
                None => kept.push((cells, mass)),
            }
        }
        if !total.is_one() {
            return Err(Error::MassNotNormalized { sum: total.to_string() });
        }
        Ok(Ledger { entries: kept })
    }

    pub fn entries(&self) -> &[(CellSet, Rational)] {
        &self.entries
    }

    pub fn mass_of(&self, cells: CellSet) -> Rational {
        self.entries
            .iter()
            .find(|(c, _)| *c == cells)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// The 2×2 frame with G the first (most significant) variable.
pub fn ledger_frame() -> ProductFrame {
    ProductFrame::new(vec![
        VariableSpec::labelled("G", ["0", "1"]),
        VariableSpec::labelled("E", ["0", "1"]),
    ])
    .expect("static frame")
}

fn cells_event(pf: &ProductFrame, cells: CellSet) -> Result<EventSet> {
    let idx = cells
        .cells()
        .into_iter()
        .map(|(g, e)| pf.encode(&[g as usize, e as usize]))
        .collect::<Result<Vec<_>>>()?;
    EventSet::from_indices(pf.frame(), idx)
}

pub fn ledger_to_mass(ledger: &Ledger) -> Result<(ProductFrame, MassFunction)> {
    let pf = ledger_frame();
    let entries = ledger
        .entries
        .iter()
        .map(|(c, m)| Ok((cells_event(&pf, *c)?, m.clone())))
        .collect::<Result<Vec<_>>>()?;
    let m = MassFunction::new(pf.frame(), entries)?;
    Ok((pf, m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorGuilt {
    pub guilty: Rational,
    pub not_guilty: Rational,
    /// Mass on sets projecting onto both G values: withheld from either verdict.
    pub ignorance: Rational,
}

/// Conditions the ledger on E = 1 and projects the result onto G.
pub fn posterior_guilt(ledger: &Ledger) -> Result<PosteriorGuilt> {
    let (pf, m) = ledger_to_mass(ledger)?;
    let evidence = pf.event_of(&Predicate::eq("E", 1))?;
    let posterior = m.condition(&evidence)?;
    let frame: &Arc<_> = pf.frame();
    let guilty_set = pf.event_of(&Predicate::eq("G", 1))?;
    let innocent_set = pf.event_of(&Predicate::eq("G", 0))?;
    debug_assert_eq!(guilty_set.frame().size(), frame.size());

    let mut out = PosteriorGuilt {
        guilty: Rational::zero(),
        not_guilty: Rational::zero(),
        ignorance: Rational::zero(),
    };
    for (set, mass) in posterior.focal_sets() {
        if set.is_subset_of(&guilty_set) {
            out.guilty += mass;
        } else if set.is_subset_of(&innocent_set) {
            out.not_guilty += mass;
        } else {
            out.ignorance += mass;
        }
    }
    Ok(out)
}

/// The cold-case ledger: 1−p on II (suspect lacks the trait, so no evidence),
/// p^(N+1) on III (everyone has it), p(1−p)^N on VI (only the suspect has it),
/// and the remainder on I.
pub fn cold_case_ledger(others: u64, p: &Rational) -> Result<Ledger> {
    if others < 1 {
        return Err(Error::InvalidParams("cold-case ledger needs N ≥ 1".into()));
    }
    if *p <= Rational::zero() || *p >= Rational::one() {
        return Err(Error::InvalidParams(format!("p = {p} must lie in (0, 1)")));
    }
    let one = Rational::one();
    let miss = &one - p;
    let all = p.powu(others + 1);
    let only = p * miss.powu(others);
    let rest = p - &all - &only;
    Ledger::new([
        (OptionId::II.cells(), miss),
        (OptionId::III.cells(), all),
        (OptionId::VI.cells(), only),
        (OptionId::I.cells(), rest),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn dec(s: &str) -> Rational {
        let (int, frac) = s.split_once('.').unwrap();
        let denom = 10i64.pow(frac.len() as u32);
        let numer: i64 = format!("{int}{frac}").parse().unwrap();
        rat(numer, denom)
    }

    fn cs(cells: &[(u8, u8)]) -> CellSet {
        CellSet::from_cells(cells.iter().copied()).unwrap()
    }

    fn classical_example() -> Ledger {
        Ledger::new([
            (cs(&[(0, 0)]), dec("0.855")),
            (cs(&[(0, 1)]), dec("0.045")),
            (cs(&[(1, 0)]), dec("0.02")),
            (cs(&[(1, 1)]), dec("0.08")),
        ])
        .unwrap()
    }

    fn mixture_example() -> Ledger {
        Ledger::new([
            (cs(&[(0, 0)]), dec("0.5")),
            (cs(&[(0, 1)]), dec("0.05")),
            (cs(&[(0, 0), (0, 1)]), dec("0.15")),
            (OptionId::IV.cells(), dec("0.2")),
            (OptionId::V.cells(), dec("0.05")),
            (OptionId::VI.cells(), dec("0.05")),
        ])
        .unwrap()
    }

    #[test]
    fn taxonomy_is_exactly_the_sets_covering_both_verdicts() {
        let both: Vec<CellSet> = CellSet::all_nonempty()
            .filter(|c| c.guilt_projection() == GuiltProjection::Either)
            .collect();
        assert_eq!(both.len(), 9);
        assert_eq!(CellSet::all_nonempty().count(), 15);
        for c in both {
            assert!(c.option_id().is_some(), "{c:?}");
        }
        let mut ids: Vec<CellSet> = OptionId::ALL.iter().map(|o| o.cells()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 9);
        assert_eq!(OptionId::parse("VIII"), Some(OptionId::VIII));
        assert_eq!(OptionId::parse("X"), None);
    }

    #[test]
    fn classical_example_posterior() {
        let ledger = classical_example();
        let (_, m) = ledger_to_mass(&ledger).unwrap();
        assert!(m.is_bayesian());
        let post = posterior_guilt(&ledger).unwrap();
        assert_eq!(post.guilty, rat(16, 25));
        assert_eq!(post.not_guilty, rat(9, 25));
        assert!(post.ignorance.is_zero());
        // Bayes in odds form: prior odds 1/9 times likelihood ratio 0.8/0.05
        let odds = rat(1, 9) * (dec("0.8") / dec("0.05"));
        assert_eq!(odds.clone() / (Rational::one() + odds), post.guilty);
    }

    #[test]
    fn vacuous_ledger() {
        let ledger = Ledger::new([(OptionId::I.cells(), Rational::one())]).unwrap();
        let (pf, m) = ledger_to_mass(&ledger).unwrap();
        assert_eq!(m, MassFunction::vacuous(pf.frame()));
        let post = posterior_guilt(&ledger).unwrap();
        assert_eq!(post.ignorance, Rational::one());
    }

    #[test]
    fn mixture_example_posterior() {
        let post = posterior_guilt(&mixture_example()).unwrap();
        assert_eq!(post.guilty, rat(1, 2));
        assert_eq!(post.not_guilty, rat(2, 5));
        assert_eq!(post.ignorance, rat(1, 10));
    }

    #[test]
    fn cold_case_ledger_matches_closed_form() {
        let l = cold_case_ledger(1, &rat(1, 2)).unwrap();
        assert_eq!(l.entries().len(), 3);
        assert!(l.mass_of(OptionId::I.cells()).is_zero());
        assert_eq!(l.mass_of(OptionId::II.cells()), rat(1, 2));

        assert_eq!(cold_case_ledger(2, &rat(1, 2)).unwrap().mass_of(OptionId::I.cells()), rat(1, 4));

        for n in 1..=8u64 {
            for p in [rat(1, 4), rat(1, 2), rat(3, 4)] {
                let post = posterior_guilt(&cold_case_ledger(n, &p).unwrap()).unwrap();
                assert_eq!(post.guilty, (Rational::one() - &p).powu(n));
                assert_eq!(&post.guilty + &post.not_guilty + &post.ignorance, Rational::one());
            }
        }
    }

    #[test]
    fn ledger_errors() {
        assert!(Ledger::new([(OptionId::I.cells(), rat(1, 2))]).is_err());
        assert!(CellSet::from_cells([]).is_err());
        assert!(CellSet::from_cells([(2, 0)]).is_err());
        assert!(cold_case_ledger(0, &rat(1, 2)).is_err());
        assert!(cold_case_ledger(3, &Rational::one()).is_err());
        let only_no_evidence = Ledger::new([(OptionId::II.cells(), Rational::one())]).unwrap();
        assert!(matches!(
            posterior_guilt(&only_no_evidence),
            Err(Error::ConditioningImpossible(_))
        ));
    }
}
