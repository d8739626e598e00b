//! Closed forms for the island identification problems.
//!
//! A population of `N + 1` people contains the culprit. A trait found at the
//! scene occurs independently with frequency `p`. The selected person `s` shares
//! the trait, either picked uniformly at random (cold case) or as the first
//! trait bearer met in a random-order search (search case). With no prior
//! information about the culprit beyond membership of the population, the
//! posterior belief that the culprit lies in a set `B ∋ s` depends only on `|B|`.

use crate::error::{Error, Result};
use crate::frame::EventSet;
use crate::mass::MassFunction;
use crate::product::{Predicate, ProductFrame, VariableSpec};
use crate::scalar::{Rational, Scalar};

/// Largest population for which focal sets are materialized.
pub const MAX_MATERIALIZED_POPULATION: u64 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct IslandParams<T> {
    /// N + 1.
    pub population: u64,
    /// Trait frequency, in (0, 1].
    pub p: T,
    /// Zero-based index of the selected person.
    pub suspect: usize,
    /// |B|, with the suspect in B.
    pub target_set_size: u64,
}

impl<T: Scalar> IslandParams<T> {
    pub fn new(population: u64, p: T) -> IslandParams<T> {
        IslandParams {
            population,
            p,
            suspect: 0,
            target_set_size: 1,
        }
    }

    pub fn with_target(mut self, size: u64) -> Self {
        self.target_set_size = size;
        self
    }

    pub fn with_suspect(mut self, suspect: usize) -> Self {
        self.suspect = suspect;
        self
    }

    /// N, the number of people other than the suspect.
    pub fn others(&self) -> u64 {
        self.population - 1
    }

    pub fn validate(&self) -> Result<()> {
        validate_population(self.population, self.suspect, self.target_set_size)?;
        if !self.p.is_finite() || self.p <= T::zero() || self.p > T::one() {
            return Err(Error::InvalidParams(format!("p = {:?} must lie in (0, 1]", self.p)));
        }
        Ok(())
    }

    fn require_singleton_target(&self) -> Result<()> {
        if self.target_set_size != 1 {
            return Err(Error::InvalidParams(format!(
                "this quantity is defined for B = {{s}} only (got |B| = {})",
                self.target_set_size
            )));
        }
        Ok(())
    }
}

pub(crate) fn validate_population(population: u64, suspect: usize, target: u64) -> Result<()> {
    if population == 0 {
        return Err(Error::InvalidParams("population must have at least one member".into()));
    }
    if suspect as u64 >= population {
        return Err(Error::InvalidParams(format!(
            "suspect index {suspect} outside population of {population}"
        )));
    }
    if target == 0 || target > population {
        return Err(Error::InvalidParams(format!(
            "|B| = {target} must lie in 1..={population}"
        )));
    }
    Ok(())
}

/// Trait observations that may be inconclusive: `p` determined present, `q`
/// determined absent, `r` undetermined.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedParams<T> {
    pub population: u64,
    pub p: T,
    pub q: T,
    pub r: T,
    pub suspect: usize,
    pub target_set_size: u64,
}

impl<T: Scalar> GeneralizedParams<T> {
    pub fn new(population: u64, p: T, q: T, r: T) -> GeneralizedParams<T> {
        GeneralizedParams {
            population,
            p,
            q,
            r,
            suspect: 0,
            target_set_size: 1,
        }
    }

    pub fn with_target(mut self, size: u64) -> Self {
        self.target_set_size = size;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_population(self.population, self.suspect, self.target_set_size)?;
        if self.p <= T::zero() || self.q < T::zero() || self.r < T::zero() {
            return Err(Error::InvalidParams("need p > 0, q ≥ 0, r ≥ 0".into()));
        }
        let total = self.p.clone() + self.q.clone() + self.r.clone();
        let sums_to_one = match T::BACKEND {
            crate::scalar::Backend::Exact => total == T::one(),
            crate::scalar::Backend::Float => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !sums_to_one {
            return Err(Error::InvalidParams(format!("p + q + r = {total:?}, expected 1")));
        }
        Ok(())
    }
}

/// Belief that the culprit is in B after a cold-case match: (1−p)^(N+1−|B|).
pub fn cold_case_belief<T: Scalar>(params: &IslandParams<T>) -> Result<T> {
    params.validate()?;
    Ok((T::one() - params.p.clone()).powu(params.population - params.target_set_size))
}

/// Posterior probability of guilt under a uniform prior on the culprit: 1/(1+Np).
pub fn cold_case_classical<T: Scalar>(params: &IslandParams<T>) -> Result<T> {
    params.validate()?;
    params.require_singleton_target()?;
    let n = T::from_u64(params.others());
    Ok(T::one() / (T::one() + n * params.p.clone()))
}

/// Cold-case belief with three-valued trait observations: q^(N+1−|B|).
pub fn generalized_cold_case_belief<T: Scalar>(params: &GeneralizedParams<T>) -> Result<T> {
    params.validate()?;
    Ok(params.q.powu(params.population - params.target_set_size))
}

/// Belief that the first trait bearer found in a search is the culprit:
/// p(1−p)^N(N+1) / (1 − (1−p)^(N+1)). Zero when p = 1.
pub fn search_case_belief<T: Scalar>(params: &IslandParams<T>) -> Result<T> {
    params.validate()?;
    params.require_singleton_target()?;
    let n = params.others();
    let miss = T::one() - params.p.clone();
    let numer = params.p.clone() * miss.powu(n) * T::from_u64(n + 1);
    Ok(numer / (T::one() - miss.powu(n + 1)))
}

/// The same belief written as the harmonic mean of 1, (1−p), …, (1−p)^N. Only
/// defined for p < 1.
pub fn search_case_belief_harmonic<T: Scalar>(params: &IslandParams<T>) -> Result<T> {
    params.validate()?;
    params.require_singleton_target()?;
    if params.p >= T::one() {
        return Err(Error::InvalidParams("harmonic form needs p < 1".into()));
    }
    let n = params.others();
    let inv_miss = T::one() / (T::one() - params.p.clone());
    let mut sum = T::zero();
    let mut term = T::one();
    for _ in 0..=n {
        sum = sum + term.clone();
        term = term * inv_miss.clone();
    }
    Ok(T::from_u64(n + 1) / sum)
}

/// Classical search-case posterior, the arithmetic mean of 1, (1−p), …, (1−p)^N:
/// (1 − (1−p)^(N+1)) / ((N+1)p).
pub fn search_case_classical<T: Scalar>(params: &IslandParams<T>) -> Result<T> {
    params.validate()?;
    params.require_singleton_target()?;
    let pop = params.population;
    let miss = T::one() - params.p.clone();
    Ok((T::one() - miss.powu(pop)) / (T::from_u64(pop) * params.p.clone()))
}

/// Variable layout shared by the island frames: S, the trait indicators
/// G1..G{N+1}, and the culprit C last so that sets of the form {S=x, G=y, C∈A}
/// occupy a contiguous run of outcomes.
///
/// With `with_unfound` the selection variable gets an extra last value `*` for
/// "nobody carries the trait".
pub fn island_frame(population: u64, with_unfound: bool) -> Result<ProductFrame> {
    if population == 0 || population > MAX_MATERIALIZED_POPULATION {
        return Err(Error::FrameTooLarge {
            what: "population",
            size: population as u128,
            limit: MAX_MATERIALIZED_POPULATION as u128,
        });
    }
    let pop = population as usize;
    let mut s_labels: Vec<String> = (1..=pop).map(|i| i.to_string()).collect();
    if with_unfound {
        s_labels.push("*".into());
    }
    let mut vars = vec![VariableSpec::labelled("S", s_labels)];
    vars.extend((1..=pop).map(|i| VariableSpec::new(format!("G{i}"), 2)));
    vars.push(VariableSpec::labelled("C", (1..=pop).map(|i| i.to_string())));
    ProductFrame::new(vars)
}

/// The conditioning event {S=s, G_S=1, G_C=1}.
pub fn match_predicate(suspect: usize) -> Predicate {
    Predicate::And(vec![
        Predicate::eq("S", suspect),
        Predicate::eq(format!("G{}", suspect + 1), 1),
        Predicate::indirect("C", "G", 1),
    ])
}

/// A target set B of the requested size containing the suspect: the suspect
/// followed by the next people in cyclic order.
pub fn target_members(population: u64, suspect: usize, size: u64) -> Vec<usize> {
    (0..size as usize).map(|k| (suspect + k) % population as usize).collect()
}

/// The posterior mass function after a cold-case match, built directly: for every
/// A ∋ s with |A| = k+1 the set {C∈A, S=s, G_i = 1_A(i)} carries p^k(1−p)^(N−k).
pub fn cold_case_posterior_mass(params: &IslandParams<Rational>) -> Result<(ProductFrame, MassFunction)> {
    params.validate()?;
    let pf = island_frame(params.population, false)?;
    let pop = params.population as usize;
    let s = params.suspect;
    let others: Vec<usize> = (0..pop).filter(|&i| i != s).collect();
    let n = others.len() as u64;
    let miss = Rational::from_u64(1) - &params.p;
    let mut entries = Vec::with_capacity(1 << others.len());
    for mask in 0u64..(1u64 << others.len()) {
        let mut members = vec![s];
        members.extend(others.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &i)| i));
        let k = members.len() as u64 - 1;
        let mut conj = vec![Predicate::eq("S", s), Predicate::is_in("C", members.iter().copied())];
        conj.extend((0..pop).map(|i| Predicate::eq(format!("G{}", i + 1), usize::from(members.contains(&i)))));
        let set = pf.event_of(&Predicate::And(conj))?;
        entries.push((set, params.p.powu(k) * miss.powu(n - k)));
    }
    let m = MassFunction::new(pf.frame(), entries)?;
    Ok((pf, m))
}

/// {C ∈ B} on an island frame.
pub fn culprit_in(pf: &ProductFrame, members: &[usize]) -> Result<EventSet> {
    pf.event_of(&Predicate::is_in("C", members.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::{One, Zero};

    fn ip(pop: u64, p: Rational) -> IslandParams<Rational> {
        IslandParams::new(pop, p)
    }

    #[test]
    fn cold_case_values() {
        for pop in 1..6 {
            assert_eq!(cold_case_belief(&ip(pop, Rational::one())).unwrap().is_zero(), pop > 1);
            assert_eq!(
                cold_case_belief(&ip(pop, rat(1, 3)).with_target(pop)).unwrap(),
                Rational::one()
            );
        }
        // frozen from the enumeration oracle over the 4-person frame
        assert_eq!(cold_case_belief(&ip(4, rat(1, 2))).unwrap(), rat(1, 8));
    }

    #[test]
    fn classical_cold_case_values() {
        for pop in 1..6u64 {
            assert_eq!(
                cold_case_classical(&ip(pop, Rational::one())).unwrap(),
                rat(1, pop as i64)
            );
        }
        assert_eq!(cold_case_classical(&ip(4, rat(1, 2))).unwrap(), rat(2, 5));
        assert!(cold_case_classical(&ip(4, rat(1, 2)).with_target(2)).is_err());
    }

    #[test]
    fn asymptotic_regime_in_floats() {
        let params = IslandParams::new(1_000_001, 1e-6);
        let belief = cold_case_belief(&params).unwrap();
        let classical = cold_case_classical(&params).unwrap();
        assert!((belief - (-1.0f64).exp()).abs() < 1e-3);
        assert!((classical - 0.5).abs() < 1e-3);
    }

    #[test]
    fn parameter_validation() {
        assert!(cold_case_belief(&ip(3, Rational::zero())).is_err());
        assert!(cold_case_belief(&ip(3, rat(3, 2))).is_err());
        assert!(cold_case_belief(&ip(0, rat(1, 2))).is_err());
        assert!(cold_case_belief(&ip(3, rat(1, 2)).with_target(4)).is_err());
        assert!(cold_case_belief(&ip(3, rat(1, 2)).with_target(0)).is_err());
        assert!(cold_case_belief(&ip(3, rat(1, 2)).with_suspect(3)).is_err());
        assert!(cold_case_belief(&IslandParams::new(3, f64::NAN)).is_err());
    }

    #[test]
    fn generalized_values() {
        let g = |pop, p, q, r, b| GeneralizedParams::new(pop, p, q, r).with_target(b);
        // r = 0 is the ordinary cold case
        for pop in 1..6 {
            for b in 1..=pop {
                let p = rat(1, 3);
                assert_eq!(
                    generalized_cold_case_belief(&g(pop, p.clone(), rat(2, 3), Rational::zero(), b)).unwrap(),
                    cold_case_belief(&ip(pop, p).with_target(b)).unwrap()
                );
            }
        }
        assert!(generalized_cold_case_belief(&g(3, rat(1, 2), Rational::zero(), rat(1, 2), 2))
            .unwrap()
            .is_zero());
        assert_eq!(
            generalized_cold_case_belief(&g(3, rat(1, 2), rat(1, 4), rat(1, 4), 1)).unwrap(),
            rat(1, 16)
        );
        assert!(generalized_cold_case_belief(&g(3, rat(1, 2), rat(1, 4), rat(1, 8), 1)).is_err());
        assert!(generalized_cold_case_belief(&g(3, Rational::zero(), rat(1, 2), rat(1, 2), 1)).is_err());
    }

    #[test]
    fn search_case_values() {
        for pop in 1..6 {
            assert!(search_case_belief(&ip(pop, Rational::one())).unwrap().is_zero() || pop == 1);
            assert_eq!(search_case_classical(&ip(pop, Rational::one())).unwrap(), rat(1, pop as i64));
        }
        for p in [rat(1, 4), rat(1, 2), rat(9, 10), Rational::one()] {
            assert_eq!(search_case_belief(&ip(1, p.clone())).unwrap(), Rational::one());
            assert_eq!(search_case_classical(&ip(1, p)).unwrap(), Rational::one());
        }
        assert_eq!(search_case_belief(&ip(3, rat(1, 2))).unwrap(), rat(3, 7));
        assert_eq!(search_case_classical(&ip(3, rat(1, 2))).unwrap(), rat(7, 12));
    }

    #[test]
    fn harmonic_form_agrees_below_one() {
        for pop in 1..8 {
            for p in [rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 7)] {
                let params = ip(pop, p);
                assert_eq!(
                    search_case_belief(&params).unwrap(),
                    search_case_belief_harmonic(&params).unwrap()
                );
            }
        }
        assert!(search_case_belief_harmonic(&ip(3, Rational::one())).is_err());
    }

    #[test]
    fn materialized_posterior() {
        let params = ip(2, rat(1, 2));
        let (_, m) = cold_case_posterior_mass(&params).unwrap();
        assert_eq!(m.focal_count(), 2);
        assert!(m.focal_sets().all(|(_, v)| *v == rat(1, 2)));

        for pop in 1..7u64 {
            for p in [rat(1, 4), rat(3, 4)] {
                for s in [0, pop as usize - 1] {
                    let params = ip(pop, p.clone()).with_suspect(s);
                    let (pf, m) = cold_case_posterior_mass(&params).unwrap();
                    assert_eq!(m.focal_count(), 1 << (pop - 1));
                    for b in 1..=pop {
                        let target = culprit_in(&pf, &target_members(pop, s, b)).unwrap();
                        assert_eq!(
                            m.belief(&target).unwrap(),
                            cold_case_belief(&params.clone().with_target(b)).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn materialization_is_bounded() {
        assert!(matches!(
            cold_case_posterior_mass(&ip(13, rat(1, 2))),
            Err(Error::FrameTooLarge { .. })
        ));
    }
}
