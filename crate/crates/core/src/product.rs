//! Structured outcome spaces built as products of named finite variables.
//!
//! Outcomes are numbered mixed-radix with the first declared variable most
//! significant. Events are described with [`Predicate`]s, including the indirect
//! form "the family member selected by another variable has value v" used for
//! statements such as "the culprit has the trait".

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{EventSet, Frame, MAX_FRAME_SIZE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub cardinality: usize,
    pub value_labels: Option<Vec<String>>,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, cardinality: usize) -> VariableSpec {
        VariableSpec {
            name: name.into(),
            cardinality,
            value_labels: None,
        }
    }

    pub fn labelled<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> VariableSpec {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        VariableSpec {
            name: name.into(),
            cardinality: labels.len(),
            value_labels: Some(labels),
        }
    }

    pub fn value_label(&self, value: usize) -> String {
        match &self.value_labels {
            Some(l) => l[value].clone(),
            None => value.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Equals { variable: String, value: usize },
    In { variable: String, values: Vec<usize> },
    /// `{family}{k}` equals `value`, where `k` is one plus the pointer variable's value.
    IndirectEquals { pointer: String, family: String, value: usize },
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
}

impl Predicate {
    pub fn eq(variable: impl Into<String>, value: usize) -> Predicate {
        Predicate::Equals {
            variable: variable.into(),
            value,
        }
    }

    pub fn is_in(variable: impl Into<String>, values: impl IntoIterator<Item = usize>) -> Predicate {
        Predicate::In {
            variable: variable.into(),
            values: values.into_iter().collect(),
        }
    }

    pub fn indirect(pointer: impl Into<String>, family: impl Into<String>, value: usize) -> Predicate {
        Predicate::IndirectEquals {
            pointer: pointer.into(),
            family: family.into(),
            value,
        }
    }

    fn has_indirect_or_disjunction(&self) -> bool {
        match self {
            Predicate::Equals { .. } | Predicate::In { .. } => false,
            Predicate::IndirectEquals { .. } | Predicate::Or(_) => true,
            Predicate::And(ps) => ps.iter().any(Predicate::has_indirect_or_disjunction),
        }
    }
}

/// Predicate with names resolved to variable positions.
enum Compiled {
    Allowed { var: usize, mask: Vec<bool> },
    Indirect { pointer: usize, family: Vec<usize>, value: usize },
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    fn holds(&self, assignment: &[usize]) -> bool {
        match self {
            Compiled::Allowed { var, mask } => mask[assignment[*var]],
            Compiled::Indirect { pointer, family, value } => {
                assignment[family[assignment[*pointer]]] == *value
            }
            Compiled::And(ps) => ps.iter().all(|p| p.holds(assignment)),
            Compiled::Or(ps) => ps.iter().any(|p| p.holds(assignment)),
        }
    }

    /// For conjunctions of plain constraints: per-variable allowed values.
    fn restrict(&self, allowed: &mut [Vec<bool>]) {
        match self {
            Compiled::Allowed { var, mask } => {
                for (a, m) in allowed[*var].iter_mut().zip(mask) {
                    *a &= *m;
                }
            }
            Compiled::And(ps) => ps.iter().for_each(|p| p.restrict(allowed)),
            Compiled::Indirect { .. } | Compiled::Or(_) => unreachable!("factorized path only"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProductFrame {
    variables: Vec<VariableSpec>,
    positions: HashMap<String, usize>,
    strides: Vec<usize>,
    frame: Arc<Frame>,
}

impl ProductFrame {
    pub fn new(variables: Vec<VariableSpec>) -> Result<ProductFrame> {
        if variables.is_empty() {
            return Err(Error::InvalidFrame("a product frame needs at least one variable".into()));
        }
        let mut positions = HashMap::new();
        let mut size: u128 = 1;
        for (i, v) in variables.iter().enumerate() {
            if v.cardinality == 0 {
                return Err(Error::InvalidFrame(format!("variable `{}` has no values", v.name)));
            }
            if let Some(labels) = &v.value_labels {
                if labels.len() != v.cardinality {
                    return Err(Error::InvalidFrame(format!(
                        "variable `{}` has {} labels for {} values",
                        v.name,
                        labels.len(),
                        v.cardinality
                    )));
                }
            }
            if positions.insert(v.name.clone(), i).is_some() {
                return Err(Error::DuplicateVariableName(v.name.clone()));
            }
            size = size.saturating_mul(v.cardinality as u128);
        }
        if size > MAX_FRAME_SIZE as u128 {
            return Err(Error::FrameTooLarge {
                what: "frame size",
                size,
                limit: MAX_FRAME_SIZE as u128,
            });
        }
        let mut strides = vec![1usize; variables.len()];
        for i in (0..variables.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * variables[i + 1].cardinality;
        }
        let frame = Frame::new(size as usize)?;
        Ok(ProductFrame {
            variables,
            positions,
            strides,
            frame,
        })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn size(&self) -> usize {
        self.frame.size()
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.positions
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn cardinality(&self, name: &str) -> Result<usize> {
        Ok(self.variables[self.position(name)?].cardinality)
    }

    /// Value index of a labelled value.
    pub fn value_of(&self, variable: &str, label: &str) -> Result<usize> {
        let v = &self.variables[self.position(variable)?];
        let found = match &v.value_labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse::<usize>().ok().filter(|&i| i < v.cardinality),
        };
        found.ok_or_else(|| Error::UnknownValue {
            variable: variable.to_string(),
            value: label.to_string(),
        })
    }

    pub fn encode(&self, assignment: &[usize]) -> Result<usize> {
        if assignment.len() != self.variables.len() {
            return Err(Error::InvalidParams(format!(
                "assignment has {} coordinates, frame has {} variables",
                assignment.len(),
                self.variables.len()
            )));
        }
        let mut index = 0;
        for ((&a, v), &s) in assignment.iter().zip(&self.variables).zip(&self.strides) {
            if a >= v.cardinality {
                return Err(Error::UnknownValue {
                    variable: v.name.clone(),
                    value: a.to_string(),
                });
            }
            index += a * s;
        }
        Ok(index)
    }

    pub fn decode(&self, mut index: usize) -> Result<Vec<usize>> {
        if index >= self.size() {
            return Err(Error::OutcomeOutOfRange {
                index,
                size: self.size(),
            });
        }
        let mut out = Vec::with_capacity(self.variables.len());
        for &s in &self.strides {
            out.push(index / s);
            index %= s;
        }
        Ok(out)
    }

    /// Human-readable `name=value` list for one outcome.
    pub fn describe_outcome(&self, index: usize) -> Result<String> {
        let a = self.decode(index)?;
        Ok(self
            .variables
            .iter()
            .zip(a)
            .map(|(v, x)| format!("{}={}", v.name, v.value_label(x)))
            .collect::<Vec<_>>()
            .join(" "))
    }

    fn compile(&self, pred: &Predicate) -> Result<Compiled> {
        let value_ok = |var: usize, value: usize| -> Result<()> {
            let v = &self.variables[var];
            if value < v.cardinality {
                Ok(())
            } else {
                Err(Error::UnknownValue {
                    variable: v.name.clone(),
                    value: value.to_string(),
                })
            }
        };
        Ok(match pred {
            Predicate::Equals { variable, value } => {
                let var = self.position(variable)?;
                value_ok(var, *value)?;
                let mut mask = vec![false; self.variables[var].cardinality];
                mask[*value] = true;
                Compiled::Allowed { var, mask }
            }
            Predicate::In { variable, values } => {
                let var = self.position(variable)?;
                let mut mask = vec![false; self.variables[var].cardinality];
                for &v in values {
                    value_ok(var, v)?;
                    mask[v] = true;
                }
                Compiled::Allowed { var, mask }
            }
            Predicate::IndirectEquals { pointer, family, value } => {
                let p = self.position(pointer)?;
                let members = (1..=self.variables[p].cardinality)
                    .map(|k| {
                        let f = self.position(&format!("{family}{k}"))?;
                        value_ok(f, *value)?;
                        Ok(f)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Compiled::Indirect {
                    pointer: p,
                    family: members,
                    value: *value,
                }
            }
            Predicate::And(ps) => Compiled::And(ps.iter().map(|p| self.compile(p)).collect::<Result<_>>()?),
            Predicate::Or(ps) => Compiled::Or(ps.iter().map(|p| self.compile(p)).collect::<Result<_>>()?),
        })
    }

    /// All outcomes satisfying `pred`. Plain conjunctions are enumerated directly
    /// from the per-variable allowed values; anything with an indirect reference or
    /// a disjunction is evaluated by scanning the whole frame.
    pub fn event_of(&self, pred: &Predicate) -> Result<EventSet> {
        let compiled = self.compile(pred)?;
        if pred.has_indirect_or_disjunction() {
            self.scan(&compiled)
        } else {
            self.factorized(&compiled)
        }
    }

    fn scan(&self, pred: &Compiled) -> Result<EventSet> {
        let mut members = Vec::new();
        let mut assignment = vec![0usize; self.variables.len()];
        for index in 0..self.size() {
            if pred.holds(&assignment) {
                members.push(index);
            }
            // odometer increment, last variable fastest
            for k in (0..assignment.len()).rev() {
                assignment[k] += 1;
                if assignment[k] < self.variables[k].cardinality {
                    break;
                }
                assignment[k] = 0;
            }
        }
        EventSet::from_indices(&self.frame, members)
    }

    fn factorized(&self, pred: &Compiled) -> Result<EventSet> {
        let mut allowed: Vec<Vec<bool>> = self.variables.iter().map(|v| vec![true; v.cardinality]).collect();
        pred.restrict(&mut allowed);
        let choices: Vec<Vec<usize>> = allowed
            .iter()
            .map(|mask| mask.iter().enumerate().filter(|(_, &ok)| ok).map(|(i, _)| i).collect())
            .collect();
        if choices.iter().any(Vec::is_empty) {
            return Ok(EventSet::empty(&self.frame));
        }
        let mut members = vec![0usize];
        for (c, &stride) in choices.iter().zip(&self.strides) {
            members = members
                .iter()
                .flat_map(|&base| c.iter().map(move |&v| base + v * stride))
                .collect();
        }
        EventSet::from_indices(&self.frame, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// C, S over a population of `pop`, then trait indicators G1..G{pop}.
    fn island(pop: usize) -> ProductFrame {
        let mut vars = vec![VariableSpec::new("C", pop), VariableSpec::new("S", pop)];
        vars.extend((1..=pop).map(|i| VariableSpec::new(format!("G{i}"), 2)));
        ProductFrame::new(vars).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(island(3).size(), 72);
        assert_eq!(island(2).size(), 16);
        assert_eq!(ProductFrame::new(vec![VariableSpec::new("x", 2)]).unwrap().size(), 2);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            ProductFrame::new(vec![VariableSpec::new("x", 2), VariableSpec::new("x", 3)]),
            Err(Error::DuplicateVariableName(_))
        ));
        let big: Vec<_> = (0..21).map(|i| VariableSpec::new(format!("b{i}"), 2)).collect();
        assert!(matches!(ProductFrame::new(big), Err(Error::FrameTooLarge { .. })));
        assert!(ProductFrame::new(vec![]).is_err());
    }

    #[test]
    fn codec_round_trips_over_whole_frame() {
        let pf = island(3);
        for i in 0..pf.size() {
            let a = pf.decode(i).unwrap();
            assert_eq!(pf.encode(&a).unwrap(), i);
        }
        // first variable most significant
        assert_eq!(pf.decode(pf.size() - 1).unwrap(), vec![2, 2, 1, 1, 1]);
        assert_eq!(pf.encode(&[1, 0, 0, 0, 0]).unwrap(), 24);
    }

    #[test]
    fn culprit_and_selected_share_the_trait_two_person_island() {
        let pf = island(2);
        let pred = Predicate::And(vec![
            Predicate::eq("S", 0),
            Predicate::eq("G1", 1),
            Predicate::indirect("C", "G", 1),
        ]);
        let ev = pf.event_of(&pred).unwrap();
        // Hand enumeration of (C, S, G1, G2) with S = 1st person and G1 = 1:
        // C = 1st: G_C = G1 = 1 always -> G2 free -> 2 outcomes
        // C = 2nd: needs G2 = 1 -> 1 outcome
        let expected: Vec<usize> = vec![
            pf.encode(&[0, 0, 1, 0]).unwrap(),
            pf.encode(&[0, 0, 1, 1]).unwrap(),
            pf.encode(&[1, 0, 1, 1]).unwrap(),
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(ev.iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn tautology_and_contradiction() {
        let pf = island(2);
        assert_eq!(
            pf.event_of(&Predicate::is_in("C", 0..2)).unwrap(),
            EventSet::full(pf.frame())
        );
        let one = ProductFrame::new(vec![VariableSpec::new("C", 1), VariableSpec::new("G1", 2)]).unwrap();
        let pred = Predicate::And(vec![Predicate::eq("G1", 0), Predicate::indirect("C", "G", 1)]);
        assert!(one.event_of(&pred).unwrap().is_empty());
    }

    #[test]
    fn unknown_names_and_values() {
        let pf = island(2);
        assert!(matches!(
            pf.event_of(&Predicate::eq("Z", 0)),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(
            pf.event_of(&Predicate::eq("G1", 2)),
            Err(Error::UnknownValue { .. })
        ));
        // family must cover every pointer value
        let partial = ProductFrame::new(vec![VariableSpec::new("C", 3), VariableSpec::new("G1", 2)]).unwrap();
        assert!(partial.event_of(&Predicate::indirect("C", "G", 1)).is_err());
    }

    #[test]
    fn labelled_values() {
        let pf = ProductFrame::new(vec![
            VariableSpec::labelled("S", ["1", "2", "*"]),
            VariableSpec::new("G1", 2),
        ])
        .unwrap();
        assert_eq!(pf.value_of("S", "*").unwrap(), 2);
        assert!(pf.value_of("S", "3").is_err());
        assert_eq!(pf.describe_outcome(5).unwrap(), "S=* G1=1");
    }

    fn plain_pred(pf_vars: usize) -> impl Strategy<Value = Predicate> {
        let leaf = (0..pf_vars, prop::collection::vec(0usize..2, 0..3)).prop_map(|(v, vals)| {
            let name = if v == 0 { "C".to_string() } else if v == 1 { "S".to_string() } else { format!("G{}", v - 1) };
            Predicate::In { variable: name, values: vals }
        });
        prop::collection::vec(leaf, 1..4).prop_map(Predicate::And)
    }

    proptest! {
        #[test]
        fn and_distributes_and_factorized_matches_scan(p in plain_pred(5), q in plain_pred(5)) {
            let pf = island(3);
            let both = pf.event_of(&Predicate::And(vec![p.clone(), q.clone()])).unwrap();
            let inter = pf.event_of(&p).unwrap().intersection(&pf.event_of(&q).unwrap());
            prop_assert_eq!(&both, &inter);
            // route through the full scan by wrapping in a single-arm Or
            let scanned = pf.event_of(&Predicate::Or(vec![Predicate::And(vec![p, q])])).unwrap();
            prop_assert_eq!(both, scanned);
        }

        #[test]
        fn plain_event_size_is_product_of_allowed_counts(p in plain_pred(5)) {
            let pf = island(3);
            let mut allowed: Vec<Vec<bool>> = pf.variables().iter().map(|v| vec![true; v.cardinality]).collect();
            if let Predicate::And(leaves) = &p {
                for leaf in leaves {
                    if let Predicate::In { variable, values } = leaf {
                        let i = pf.position(variable).unwrap();
                        for (k, a) in allowed[i].iter_mut().enumerate() {
                            *a &= values.contains(&k);
                        }
                    }
                }
            }
            let expected: usize = allowed.iter().map(|m| m.iter().filter(|&&x| x).count()).product();
            prop_assert_eq!(pf.event_of(&p).unwrap().len(), expected);
        }
    }
}
