//! Basic belief assignments and Dempster-Shafer conditioning.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frame::{EventSet, Frame};
use crate::scalar::{is_negative, Rational};

/// A basic belief assignment: positive exact masses on nonempty focal sets,
/// summing to exactly one. Immutable once built.
#[derive(Debug, Clone)]
pub struct MassFunction {
    frame: Arc<Frame>,
    focal: HashMap<EventSet, Rational>,
}

impl MassFunction {
    /// Validates and builds a mass function. Zero masses are dropped; masses given
    /// twice for the same set are added.
    pub fn new(frame: &Arc<Frame>, entries: impl IntoIterator<Item = (EventSet, Rational)>) -> Result<MassFunction> {
        let mut focal: HashMap<EventSet, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (set, mass) in entries {
            set.check_frame(frame)?;
            if is_negative(&mass) {
                return Err(Error::NegativeMass {
                    mass: mass.to_string(),
                });
            }
            if set.is_empty() {
                return Err(Error::EmptyFocalSet);
            }
            if mass.is_zero() {
                continue;
            }
            total += &mass;
            *focal.entry(set).or_insert_with(Rational::zero) += mass;
        }
        if !total.is_one() {
            return Err(Error::MassNotNormalized {
                sum: total.to_string(),
            });
        }
        Ok(MassFunction {
            frame: Arc::clone(frame),
            focal,
        })
    }

    /// m(Ω) = 1.
    pub fn vacuous(frame: &Arc<Frame>) -> MassFunction {
        let mut focal = HashMap::new();
        focal.insert(EventSet::full(frame), Rational::one());
        MassFunction {
            frame: Arc::clone(frame),
            focal,
        }
    }

    /// The Bayesian mass function of a probability vector over the frame's outcomes.
    pub fn from_distribution(frame: &Arc<Frame>, probs: &[Rational]) -> Result<MassFunction> {
        if probs.len() != frame.size() {
            return Err(Error::InvalidParams(format!(
                "distribution has {} entries for a frame of {} outcomes",
                probs.len(),
                frame.size()
            )));
        }
        let entries = probs
            .iter()
            .enumerate()
            .map(|(i, p)| Ok((EventSet::singleton(frame, i)?, p.clone())))
            .collect::<Result<Vec<_>>>()?;
        MassFunction::new(frame, entries)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// m(a); zero for anything that is not focal.
    pub fn mass(&self, a: &EventSet) -> Rational {
        self.focal.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn focal_sets(&self) -> impl Iterator<Item = (&EventSet, &Rational)> {
        self.focal.iter()
    }

    /// Focal sets in canonical order, for reporting.
    pub fn focal_sets_sorted(&self) -> Vec<(&EventSet, &Rational)> {
        let mut v: Vec<_> = self.focal.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn total_mass(&self) -> Rational {
        self.focal.values().fold(Rational::zero(), |acc, m| acc + m)
    }

    /// Bel(a) = Σ_{C ⊆ a} m(C).
    pub fn belief(&self, a: &EventSet) -> Result<Rational> {
        a.check_frame(&self.frame)?;
        Ok(self
            .focal
            .iter()
            .filter(|(c, _)| c.is_subset_of(a))
            .fold(Rational::zero(), |acc, (_, m)| acc + m))
    }

    /// Pl(a) = 1 − Bel(aᶜ).
    pub fn plausibility(&self, a: &EventSet) -> Result<Rational> {
        a.check_frame(&self.frame)?;
        Ok(Rational::one() - self.belief(&a.complement())?)
    }

    /// Every focal set is a singleton, i.e. this is an ordinary probability distribution.
    pub fn is_bayesian(&self) -> bool {
        self.focal.keys().all(EventSet::is_singleton)
    }

    /// Dempster-Shafer conditioning on `h`: each focal set's mass moves to its
    /// intersection with `h`, sets disjoint from `h` lose their mass, and the rest
    /// is rescaled by 1 − Σ_{B∩h=∅} m(B).
    pub fn condition(&self, h: &EventSet) -> Result<MassFunction> {
        h.check_frame(&self.frame)?;
        let mut lost = Rational::zero();
        let mut moved: HashMap<EventSet, Rational> = HashMap::with_capacity(self.focal.len());
        for (b, m) in &self.focal {
            let meet = b.intersection(h);
            if meet.is_empty() {
                lost += m;
            } else {
                *moved.entry(meet).or_insert_with(Rational::zero) += m;
            }
        }
        let normalizer = Rational::one() - lost;
        if normalizer.is_zero() {
            return Err(Error::ConditioningImpossible(format!(
                "belief in the complement of {} is 1",
                h.describe()
            )));
        }
        for m in moved.values_mut() {
            *m /= &normalizer;
        }
        Ok(MassFunction {
            frame: Arc::clone(&self.frame),
            focal: moved,
        })
    }
}

/// Two mass functions are equal when they assign identical masses to identical sets.
impl PartialEq for MassFunction {
    fn eq(&self, other: &Self) -> bool {
        *self.frame == *other.frame && self.focal == other.focal
    }
}
