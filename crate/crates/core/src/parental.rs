//! Closed forms for paternity with a known mother and child at a single locus.
//!
//! Every potential father carries 0, 1 or 2 copies of the paternal allele with
//! population probabilities `p0`, `p1`, `p2`. A father with one copy transmits it
//! with probability ½. The putative father `s` carries either one or two copies.

use crate::error::{Error, Result};
use crate::island::validate_population;
use crate::scalar::{Backend, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlleleCount {
    One,
    Two,
}

impl AlleleCount {
    pub fn from_count(n: u64) -> Result<AlleleCount> {
        match n {
            1 => Ok(AlleleCount::One),
            2 => Ok(AlleleCount::Two),
            _ => Err(Error::InvalidParams(format!(
                "suspect allele count must be 1 or 2, got {n}"
            ))),
        }
    }

    pub fn count(self) -> u64 {
        match self {
            AlleleCount::One => 1,
            AlleleCount::Two => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParentalParams<T> {
    /// N + 1 potential fathers.
    pub population: u64,
    pub p0: T,
    pub p1: T,
    pub p2: T,
    pub suspect: usize,
    pub target_set_size: u64,
    pub suspect_allele_count: AlleleCount,
}

impl<T: Scalar> ParentalParams<T> {
    pub fn new(population: u64, p0: T, p1: T, p2: T, alleles: AlleleCount) -> ParentalParams<T> {
        ParentalParams {
            population,
            p0,
            p1,
            p2,
            suspect: 0,
            target_set_size: 1,
            suspect_allele_count: alleles,
        }
    }

    pub fn with_target(mut self, size: u64) -> Self {
        self.target_set_size = size;
        self
    }

    pub fn with_alleles(mut self, alleles: AlleleCount) -> Self {
        self.suspect_allele_count = alleles;
        self
    }

    pub fn others(&self) -> u64 {
        self.population - 1
    }

    pub fn validate(&self) -> Result<()> {
        validate_population(self.population, self.suspect, self.target_set_size)?;
        if self.p0 < T::zero() || self.p1 < T::zero() || self.p2 < T::zero() {
            return Err(Error::InvalidParams("allele probabilities must be non-negative".into()));
        }
        let total = self.p0.clone() + self.p1.clone() + self.p2.clone();
        let ok = match T::BACKEND {
            Backend::Exact => total == T::one(),
            Backend::Float => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(Error::InvalidParams(format!("p0 + p1 + p2 = {total:?}, expected 1")));
        }
        Ok(())
    }

    fn expect_alleles(&self, alleles: AlleleCount) -> Result<()> {
        if self.suspect_allele_count != alleles {
            return Err(Error::InvalidParams(format!(
                "formula is for a suspect with {} matching allele(s), params say {}",
                alleles.count(),
                self.suspect_allele_count.count()
            )));
        }
        Ok(())
    }

    /// N+1−|B|.
    fn outside(&self) -> u64 {
        self.population - self.target_set_size
    }
}

/// The two halves of the two-allele belief, split on whether the true father
/// transmitted a single matching copy (A=1) or not (A=0):
/// (½ p0^(N+1−|B|), ½ (p0+p1)^(N+1−|B|)).
pub fn paternity_two_allele_components<T: Scalar>(params: &ParentalParams<T>) -> Result<(T, T)> {
    params.validate()?;
    params.expect_alleles(AlleleCount::Two)?;
    if params.p2 <= T::zero() {
        return Err(Error::ConditioningImpossible(
            "p2 = 0: nobody can carry two matching alleles".into(),
        ));
    }
    let k = params.outside();
    let half = T::half();
    Ok((
        half.clone() * params.p0.powu(k),
        half * (params.p0.clone() + params.p1.clone()).powu(k),
    ))
}

/// Belief that the father is in B when the putative father carries two matching alleles.
pub fn paternity_belief_two_alleles<T: Scalar>(params: &ParentalParams<T>) -> Result<T> {
    let (a1, a0) = paternity_two_allele_components(params)?;
    Ok(a1 + a0)
}

/// Belief that the father is in B when the putative father carries one matching allele:
/// ½(p0^(N+1−|B|) + (p0+p1)^(N+1−|B|) − (p0+p1)^N) / (1 − ½(p0+p1)^N).
pub fn paternity_belief_one_allele<T: Scalar>(params: &ParentalParams<T>) -> Result<T> {
    params.validate()?;
    params.expect_alleles(AlleleCount::One)?;
    if params.p1 <= T::zero() {
        return Err(Error::ConditioningImpossible(
            "p1 = 0: nobody can carry exactly one matching allele".into(),
        ));
    }
    let low = params.p0.clone() + params.p1.clone();
    let all_low = low.powu(params.others());
    let normalizer = T::one() - T::half() * all_low.clone();
    if normalizer <= T::zero() {
        return Err(Error::ConditioningImpossible("normalizer is not positive".into()));
    }
    let k = params.outside();
    let numer = T::half() * (params.p0.powu(k) + low.powu(k) - all_low);
    Ok(numer / normalizer)
}

/// Dispatches on the suspect's allele count.
pub fn paternity_belief<T: Scalar>(params: &ParentalParams<T>) -> Result<T> {
    match params.suspect_allele_count {
        AlleleCount::One => paternity_belief_one_allele(params),
        AlleleCount::Two => paternity_belief_two_alleles(params),
    }
}

/// Posterior probability of paternity under a uniform prior on the father:
/// 1/(1+N(p1+2p2)) with one matching allele, 1/(1+N(½p1+p2)) with two.
pub fn paternity_classical<T: Scalar>(params: &ParentalParams<T>) -> Result<T> {
    params.validate()?;
    if params.target_set_size != 1 {
        return Err(Error::InvalidParams("classical posterior is defined for B = {s} only".into()));
    }
    let n = T::from_u64(params.others());
    let rate = match params.suspect_allele_count {
        AlleleCount::One => {
            if params.p1 <= T::zero() {
                return Err(Error::InvalidParams("p1 must be positive".into()));
            }
            params.p1.clone() + T::from_u64(2) * params.p2.clone()
        }
        AlleleCount::Two => {
            if params.p2 <= T::zero() {
                return Err(Error::InvalidParams("p2 must be positive".into()));
            }
            T::half() * params.p1.clone() + params.p2.clone()
        }
    };
    Ok(T::one() / (T::one() + n * rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::island::{cold_case_belief, cold_case_classical, IslandParams};
    use crate::scalar::{rat, Rational};
    use num_traits::{One, Zero};

    fn pp(pop: u64, p0: Rational, p1: Rational, p2: Rational, a: AlleleCount) -> ParentalParams<Rational> {
        ParentalParams::new(pop, p0, p1, p2, a)
    }

    #[test]
    fn two_alleles() {
        let base = pp(3, rat(1, 4), rat(1, 2), rat(1, 4), AlleleCount::Two);
        assert_eq!(paternity_belief_two_alleles(&base).unwrap(), rat(5, 16));
        assert_eq!(paternity_belief_two_alleles(&base.clone().with_target(3)).unwrap(), Rational::one());
        assert!(matches!(
            paternity_belief_two_alleles(&pp(3, rat(1, 2), rat(1, 2), Rational::zero(), AlleleCount::Two)),
            Err(Error::ConditioningImpossible(_))
        ));
        assert!(paternity_belief_two_alleles(&base.with_alleles(AlleleCount::One)).is_err());
    }

    #[test]
    fn no_single_copies_reduces_to_cold_case() {
        for pop in 1..6u64 {
            for b in 1..=pop {
                let p2 = rat(1, 3);
                let params = pp(pop, Rational::one() - &p2, Rational::zero(), p2.clone(), AlleleCount::Two)
                    .with_target(b);
                assert_eq!(
                    paternity_belief_two_alleles(&params).unwrap(),
                    cold_case_belief(&IslandParams::new(pop, p2.clone()).with_target(b)).unwrap()
                );
            }
            let p2 = rat(1, 3);
            let params = pp(pop, Rational::one() - &p2, Rational::zero(), p2.clone(), AlleleCount::Two);
            assert_eq!(
                paternity_classical(&params).unwrap(),
                cold_case_classical(&IslandParams::new(pop, p2)).unwrap()
            );
        }
    }

    #[test]
    fn one_allele() {
        let base = pp(3, rat(1, 4), rat(1, 2), rat(1, 4), AlleleCount::One);
        assert_eq!(paternity_belief_one_allele(&base).unwrap(), rat(1, 23));
        // p0 = 0: nobody is excluded outright
        for pop in 2..6 {
            let params = pp(pop, Rational::zero(), rat(1, 3), rat(2, 3), AlleleCount::One);
            assert!(paternity_belief_one_allele(&params).unwrap().is_zero());
        }
        assert!(matches!(
            paternity_belief_one_allele(&pp(3, rat(1, 2), Rational::zero(), rat(1, 2), AlleleCount::One)),
            Err(Error::ConditioningImpossible(_))
        ));
    }

    #[test]
    fn one_allele_never_exceeds_two() {
        let grid = [
            (rat(1, 4), rat(1, 2), rat(1, 4)),
            (rat(1, 2), rat(1, 4), rat(1, 4)),
            (rat(1, 8), rat(1, 8), rat(3, 4)),
            (rat(0, 1), rat(1, 2), rat(1, 2)),
        ];
        for pop in 1..7u64 {
            for b in 1..=pop {
                for (p0, p1, p2) in &grid {
                    let one = pp(pop, p0.clone(), p1.clone(), p2.clone(), AlleleCount::One).with_target(b);
                    let two = one.clone().with_alleles(AlleleCount::Two);
                    assert!(paternity_belief(&one).unwrap() <= paternity_belief(&two).unwrap());
                }
            }
        }
    }

    #[test]
    fn classical() {
        for a in [AlleleCount::One, AlleleCount::Two] {
            assert_eq!(
                paternity_classical(&pp(1, rat(1, 4), rat(1, 2), rat(1, 4), a)).unwrap(),
                Rational::one()
            );
        }
        let two = pp(3, rat(1, 4), rat(1, 2), rat(1, 4), AlleleCount::Two);
        assert_eq!(paternity_classical(&two).unwrap(), rat(1, 2));
        assert!(paternity_classical(&two).unwrap() >= paternity_belief(&two).unwrap());
        let one = two.with_alleles(AlleleCount::One);
        // 1/(1 + 2(1/2 + 2·1/4)) = 1/3
        assert_eq!(paternity_classical(&one).unwrap(), rat(1, 3));
        assert!(paternity_classical(&one.with_target(2)).is_err());
    }

    #[test]
    fn validation() {
        assert!(paternity_belief(&pp(3, rat(1, 4), rat(1, 4), rat(1, 4), AlleleCount::Two)).is_err());
        assert!(paternity_belief(&pp(3, rat(-1, 4), rat(3, 4), rat(1, 2), AlleleCount::Two)).is_err());
        assert!(AlleleCount::from_count(3).is_err());
    }
}
