//! Outcome spaces and events.
//!
//! An [`EventSet`] is a bit vector indexed by outcome position. Only the span of
//! words between the first and last member is stored (`offset` counts whole
//! words), so an event touching a handful of adjacent outcomes stays small even
//! in a frame of a million outcomes. The stored form is canonical: two events
//! over the same frame are equal iff they have the same members, and equality and
//! hashing work directly on the words.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest frame the crate will materialize (2^20 outcomes).
pub const MAX_FRAME_SIZE: usize = 1 << 20;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    size: usize,
    labels: Option<Vec<String>>,
}

impl Frame {
    pub fn new(size: usize) -> Result<Arc<Frame>> {
        if size == 0 {
            return Err(Error::InvalidFrame("frame must have at least one outcome".into()));
        }
        if size > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                what: "frame size",
                size: size as u128,
                limit: MAX_FRAME_SIZE as u128,
            });
        }
        Ok(Arc::new(Frame { size, labels: None }))
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Frame>> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidFrame(format!("duplicate outcome label `{l}`")));
            }
        }
        let frame = Frame::new(labels.len())?;
        Ok(Arc::new(Frame {
            size: frame.size,
            labels: Some(labels),
        }))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label_of(&self, index: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(index)).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
}

#[derive(Clone)]
pub struct EventSet {
    frame: Arc<Frame>,
    offset: usize,
    words: Box<[u64]>,
}

impl EventSet {
    pub fn empty(frame: &Arc<Frame>) -> EventSet {
        EventSet {
            frame: Arc::clone(frame),
            offset: 0,
            words: Box::new([]),
        }
    }

    /// The whole frame, Ω.
    pub fn full(frame: &Arc<Frame>) -> EventSet {
        let n = frame.size();
        let mut words = vec![u64::MAX; n.div_ceil(WORD_BITS)];
        let tail = n % WORD_BITS;
        if tail != 0 {
            *words.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        EventSet::from_words(frame, 0, words)
    }

    pub fn singleton(frame: &Arc<Frame>, index: usize) -> Result<EventSet> {
        EventSet::from_indices(frame, [index])
    }

    pub fn from_indices(frame: &Arc<Frame>, indices: impl IntoIterator<Item = usize>) -> Result<EventSet> {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = idx.iter().find(|&&i| i >= frame.size()) {
            return Err(Error::OutcomeOutOfRange {
                index: bad,
                size: frame.size(),
            });
        }
        if idx.is_empty() {
            return Ok(EventSet::empty(frame));
        }
        idx.sort_unstable();
        let lo = idx[0] / WORD_BITS;
        let hi = idx[idx.len() - 1] / WORD_BITS;
        let mut words = vec![0u64; hi - lo + 1];
        for i in idx {
            words[i / WORD_BITS - lo] |= 1u64 << (i % WORD_BITS);
        }
        Ok(EventSet::from_words(frame, lo, words))
    }

    /// Builds from labels; every label must exist in the frame.
    pub fn from_labels<S: AsRef<str>>(frame: &Arc<Frame>, labels: impl IntoIterator<Item = S>) -> Result<EventSet> {
        let mut idx = Vec::new();
        for l in labels {
            let l = l.as_ref();
            let i = frame.index_of(l).ok_or_else(|| {
                Error::InvalidFrame(format!("no outcome labelled `{l}`"))
            })?;
            idx.push(i);
        }
        EventSet::from_indices(frame, idx)
    }

    /// Trims zero words at both ends so the representation is canonical.
    fn from_words(frame: &Arc<Frame>, offset: usize, words: Vec<u64>) -> EventSet {
        let first = words.iter().position(|&w| w != 0);
        let Some(first) = first else {
            return EventSet::empty(frame);
        };
        let last = words.iter().rposition(|&w| w != 0).unwrap();
        let words: Box<[u64]> = if first == 0 && last + 1 == words.len() {
            words.into_boxed_slice()
        } else {
            words[first..=last].to_vec().into_boxed_slice()
        };
        EventSet {
            frame: Arc::clone(frame),
            offset: offset + first,
            words,
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_singleton(&self) -> bool {
        self.words.len() == 1 && self.words[0].count_ones() == 1
    }

    pub fn contains(&self, index: usize) -> bool {
        let w = index / WORD_BITS;
        if w < self.offset || w >= self.offset + self.words.len() {
            return false;
        }
        self.words[w - self.offset] & (1u64 << (index % WORD_BITS)) != 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(k, &w)| {
            let base = (self.offset + k) * WORD_BITS;
            BitIter(w).map(move |b| base + b)
        })
    }

    pub fn same_frame(&self, other: &EventSet) -> bool {
        Arc::ptr_eq(&self.frame, &other.frame) || *self.frame == *other.frame
    }

    pub(crate) fn check_frame(&self, frame: &Arc<Frame>) -> Result<()> {
        if Arc::ptr_eq(&self.frame, frame) || *self.frame == **frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                expected: frame.size(),
                found: self.frame.size(),
            })
        }
    }

    fn word_at(&self, w: usize) -> u64 {
        if w < self.offset {
            return 0;
        }
        self.words.get(w - self.offset).copied().unwrap_or(0)
    }

    fn end(&self) -> usize {
        self.offset + self.words.len()
    }

    /// `self ⊆ other`. Frames are assumed equal; see [`EventSet::same_frame`].
    pub fn is_subset_of(&self, other: &EventSet) -> bool {
        if self.is_empty() {
            return true;
        }
        if self.offset < other.offset || self.end() > other.end() {
            return false;
        }
        self.words
            .iter()
            .enumerate()
            .all(|(k, &w)| w & !other.word_at(self.offset + k) == 0)
    }

    pub fn intersects(&self, other: &EventSet) -> bool {
        let lo = self.offset.max(other.offset);
        let hi = self.end().min(other.end());
        (lo..hi).any(|w| self.word_at(w) & other.word_at(w) != 0)
    }

    pub fn intersection(&self, other: &EventSet) -> EventSet {
        let lo = self.offset.max(other.offset);
        let hi = self.end().min(other.end());
        if lo >= hi {
            return EventSet::empty(&self.frame);
        }
        let words = (lo..hi).map(|w| self.word_at(w) & other.word_at(w)).collect();
        EventSet::from_words(&self.frame, lo, words)
    }

    pub fn union(&self, other: &EventSet) -> EventSet {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        let words = (lo..hi).map(|w| self.word_at(w) | other.word_at(w)).collect();
        EventSet::from_words(&self.frame, lo, words)
    }

    pub fn difference(&self, other: &EventSet) -> EventSet {
        let words = (self.offset..self.end())
            .map(|w| self.word_at(w) & !other.word_at(w))
            .collect();
        EventSet::from_words(&self.frame, self.offset, words)
    }

    /// Ω \ self.
    pub fn complement(&self) -> EventSet {
        EventSet::full(&self.frame).difference(self)
    }

    /// Canonical little-endian bytes: word offset followed by the stored words.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.words.len());
        out.extend_from_slice(&(self.offset as u64).to_le_bytes());
        for w in self.words.iter() {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    /// Member labels when the frame is labelled, indices otherwise.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|i| match self.frame.label_of(i) {
                Some(l) => l.to_string(),
                None => i.to_string(),
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl PartialEq for EventSet {
    fn eq(&self, other: &Self) -> bool {
        self.offset == other.offset && self.words == other.words && self.same_frame(other)
    }
}

impl Eq for EventSet {}

impl Hash for EventSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.offset.hash(state);
        self.words.hash(state);
    }
}

impl PartialOrd for EventSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the sorted member lists.
impl Ord for EventSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EventSet{}", self.describe())
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(frame: &Arc<Frame>, idx: &[usize]) -> EventSet {
        EventSet::from_indices(frame, idx.iter().copied()).unwrap()
    }

    #[test]
    fn frame_rejects_zero_and_oversize() {
        assert!(Frame::new(0).is_err());
        assert!(matches!(
            Frame::new(MAX_FRAME_SIZE + 1),
            Err(Error::FrameTooLarge { .. })
        ));
        assert!(Frame::new(MAX_FRAME_SIZE).is_ok());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(Frame::with_labels(["a", "b", "a"]).is_err());
        let f = Frame::with_labels(["Father", "Mother", "Son"]).unwrap();
        assert_eq!(f.index_of("Son"), Some(2));
    }

    #[test]
    fn out_of_range_member() {
        let f = Frame::new(10).unwrap();
        assert!(matches!(
            EventSet::from_indices(&f, [3, 10]),
            Err(Error::OutcomeOutOfRange { index: 10, size: 10 })
        ));
    }

    #[test]
    fn canonical_after_operations() {
        let f = Frame::new(300).unwrap();
        let a = set(&f, &[5, 200, 250]);
        let b = set(&f, &[200, 250, 299]);
        let i = a.intersection(&b);
        assert_eq!(i, set(&f, &[200, 250]));
        assert_eq!(i.canonical_bytes(), set(&f, &[250, 200]).canonical_bytes());
        assert!(set(&f, &[5]).intersection(&set(&f, &[299])).is_empty());
        assert_eq!(set(&f, &[5]).intersection(&set(&f, &[299])), EventSet::empty(&f));
    }

    #[test]
    fn full_and_complement() {
        let f = Frame::new(70).unwrap();
        let full = EventSet::full(&f);
        assert_eq!(full.len(), 70);
        assert!(full.contains(69) && !full.contains(70));
        let a = set(&f, &[0, 64, 69]);
        let c = a.complement();
        assert_eq!(c.len(), 67);
        assert_eq!(c.union(&a), full);
        assert!(c.intersection(&a).is_empty());
        assert_eq!(EventSet::empty(&f).complement(), full);
    }

    #[test]
    fn ordering_is_lexicographic_on_members() {
        let f = Frame::new(200).unwrap();
        let mut v = [set(&f, &[2]), set(&f, &[0, 150]), set(&f, &[0, 1]), set(&f, &[150])];
        v.sort();
        assert_eq!(v[0], set(&f, &[0, 1]));
        assert_eq!(v[1], set(&f, &[0, 150]));
        assert_eq!(v[3], set(&f, &[150]));
    }

    fn members() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(0usize..500, 0..40)
    }

    proptest! {
        #[test]
        fn set_algebra_matches_hashset(a in members(), b in members()) {
            let f = Frame::new(500).unwrap();
            let (ea, eb) = (set(&f, &a), set(&f, &b));
            let (ha, hb): (HashSet<usize>, HashSet<usize>) =
                (a.iter().copied().collect(), b.iter().copied().collect());

            let mut inter: Vec<usize> = ha.intersection(&hb).copied().collect();
            inter.sort();
            prop_assert_eq!(ea.intersection(&eb).iter().collect::<Vec<_>>(), inter);

            let mut uni: Vec<usize> = ha.union(&hb).copied().collect();
            uni.sort();
            prop_assert_eq!(ea.union(&eb).iter().collect::<Vec<_>>(), uni);

            prop_assert_eq!(ea.is_subset_of(&eb), ha.is_subset(&hb));
            prop_assert_eq!(ea.intersects(&eb), !ha.is_disjoint(&hb));
            prop_assert_eq!(ea.len(), ha.len());
            prop_assert_eq!(ea.complement().len(), 500 - ha.len());
        }

        #[test]
        fn equality_iff_same_members(a in members(), b in members()) {
            let f = Frame::new(500).unwrap();
            let ha: HashSet<usize> = a.iter().copied().collect();
            let hb: HashSet<usize> = b.iter().copied().collect();
            prop_assert_eq!(set(&f, &a) == set(&f, &b), ha == hb);
        }
    }
}
