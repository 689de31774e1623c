//! Finite unions of subintervals of `[0, 1]` with exact endpoints.
//!
//! A [`SectionSet`] is always kept in canonical form: its intervals are sorted,
//! pairwise disjoint and no two of them could be merged. Structural equality is
//! therefore set equality. Topology (open, closed, interior, closure) is taken
//! relative to the ambient space `[0, 1]`, so `[0, 1/2)` is open.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval endpoints {lo}..{hi} leave the unit interval")]
    OutOfRange { lo: Rational, hi: Rational },
    #[error("interval lower endpoint {lo} exceeds upper endpoint {hi}")]
    Inverted { lo: Rational, hi: Rational },
    #[error("degenerate interval at {0} must be closed on both sides")]
    EmptyPoint(Rational),
}

/// A nonempty subinterval of `[0, 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self, IntervalError> {
        if !lo.is_unit() || !hi.is_unit() {
            return Err(IntervalError::OutOfRange { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        if lo == hi && !(lo_closed && hi_closed) {
            return Err(IntervalError::EmptyPoint(lo));
        }
        Ok(Interval { lo, hi, lo_closed, hi_closed })
    }

    /// Like [`Interval::new`] but returns `None` for anything that would be empty
    /// once clipped to `[0, 1]`.
    pub fn clipped(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        let (lo, lo_closed) = if lo < Rational::ZERO { (Rational::ZERO, true) } else { (lo, lo_closed) };
        let (hi, hi_closed) = if hi > Rational::ONE { (Rational::ONE, true) } else { (hi, hi_closed) };
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) || hi < Rational::ZERO || lo > Rational::ONE {
            return None;
        }
        Some(Interval { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, true, true).expect("valid closed interval")
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, false).expect("valid open interval")
    }

    pub fn closed_open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, true, false).expect("valid half-open interval")
    }

    pub fn open_closed(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, true).expect("valid half-open interval")
    }

    pub fn point(at: Rational) -> Self {
        Self::closed(at, at)
    }

    pub fn unit() -> Self {
        Self::closed(Rational::ZERO, Rational::ONE)
    }

    pub fn lo(&self) -> Rational {
        self.lo
    }

    pub fn hi(&self) -> Rational {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: Rational) -> bool {
        let above = x > self.lo || (x == self.lo && self.lo_closed);
        let below = x < self.hi || (x == self.hi && self.hi_closed);
        above && below
    }

    /// Intersection of two intervals, `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo, other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo, self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi, self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi, other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    /// A deterministic member: the lower endpoint when attained, otherwise the
    /// midpoint of the interval.
    pub fn representative(&self) -> Rational {
        if self.lo_closed {
            self.lo
        } else if self.hi_closed && self.is_point() {
            self.hi
        } else {
            Rational::midpoint(self.lo, self.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite union of disjoint, non-adjacent subintervals of `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct SectionSet {
    intervals: Vec<Interval>,
}

impl SectionSet {
    pub fn empty() -> Self {
        SectionSet { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        SectionSet { intervals: vec![Interval::unit()] }
    }

    pub fn point(at: Rational) -> Self {
        SectionSet { intervals: vec![Interval::point(at)] }
    }

    pub fn from_interval(interval: Interval) -> Self {
        SectionSet { intervals: vec![interval] }
    }

    /// Canonical form of an arbitrary collection of intervals: overlapping and
    /// touching pieces are merged, the result is sorted.
    pub fn normalize<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut items: Vec<Interval> = raw.into_iter().collect();
        // Closed lower endpoints sort first so that a merge never needs to reopen.
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
        for next in items {
            match merged.last_mut() {
                Some(cur) if next.lo < cur.hi || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed)) => {
                    match next.hi.cmp(&cur.hi) {
                        std::cmp::Ordering::Greater => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        std::cmp::Ordering::Equal => cur.hi_closed |= next.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                }
                _ => merged.push(next),
            }
        }
        SectionSet { intervals: merged }
    }

    /// Parses raw `(lo, hi, lo_closed, hi_closed)` tuples.
    pub fn from_raw(raw: &[(Rational, Rational, bool, bool)]) -> Result<Self, IntervalError> {
        let intervals = raw
            .iter()
            .map(|&(lo, hi, lc, hc)| Interval::new(lo, hi, lc, hc))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::normalize(intervals))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0] == Interval::unit()
    }

    pub fn contains(&self, x: Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &SectionSet) -> SectionSet {
        SectionSet::normalize(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    pub fn intersect(&self, other: &SectionSet) -> SectionSet {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        SectionSet::normalize(out)
    }

    pub fn difference(&self, other: &SectionSet) -> SectionSet {
        self.intersect(&other.complement())
    }

    /// `[0, 1]` minus this set.
    pub fn complement(&self) -> SectionSet {
        let mut out = Vec::new();
        let mut cursor = Rational::ZERO;
        let mut cursor_closed = true;
        for i in &self.intervals {
            if let Ok(gap) = Interval::new(cursor, i.lo, cursor_closed, !i.lo_closed) {
                out.push(gap);
            }
            cursor = i.hi;
            cursor_closed = !i.hi_closed;
        }
        if let Ok(gap) = Interval::new(cursor, Rational::ONE, cursor_closed, true) {
            out.push(gap);
        }
        SectionSet { intervals: out }
    }

    /// Interior relative to `[0, 1]`.
    pub fn interior(&self) -> SectionSet {
        let parts = self.intervals.iter().filter(|i| !i.is_point()).map(|i| Interval {
            lo: i.lo,
            hi: i.hi,
            lo_closed: i.lo_closed && i.lo.is_zero(),
            hi_closed: i.hi_closed && i.hi.is_one(),
        });
        SectionSet::normalize(parts)
    }

    pub fn closure(&self) -> SectionSet {
        SectionSet::normalize(self.intervals.iter().map(|i| Interval::closed(i.lo, i.hi)))
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    pub fn is_convex(&self) -> bool {
        self.intervals.len() <= 1
    }

    pub fn component_count(&self) -> usize {
        self.intervals.len()
    }

    /// Smallest element, when the infimum is attained.
    pub fn min(&self) -> Option<Rational> {
        self.intervals.first().filter(|i| i.lo_closed).map(|i| i.lo)
    }

    /// Largest element, when the supremum is attained.
    pub fn max(&self) -> Option<Rational> {
        self.intervals.last().filter(|i| i.hi_closed).map(|i| i.hi)
    }

    pub fn infimum(&self) -> Option<Rational> {
        self.intervals.first().map(|i| i.lo)
    }

    pub fn supremum(&self) -> Option<Rational> {
        self.intervals.last().map(|i| i.hi)
    }

    /// Deterministic member used when a witness weight has to be reported.
    pub fn representative(&self) -> Option<Rational> {
        self.intervals.first().map(Interval::representative)
    }

    /// Every endpoint of every component, deduplicated and sorted.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.intervals.iter().flat_map(|i| [i.lo, i.hi]).collect();
        out.dedup();
        out
    }

    pub fn analyze(&self) -> TopologyReport {
        let closure = self.closure();
        let interior = self.interior();
        TopologyReport {
            is_closed: closure == *self,
            is_open: interior == *self,
            is_convex: self.is_convex(),
            component_count: self.component_count(),
            closure,
            interior,
            min: self.min(),
            max: self.max(),
        }
    }
}

impl fmt::Display for SectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, i) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for SectionSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: Rational,
            hi: Rational,
            lo_closed: bool,
            hi_closed: bool,
        }
        let raw = Vec::<Raw>::deserialize(deserializer)?;
        let items = raw
            .into_iter()
            .map(|r| Interval::new(r.lo, r.hi, r.lo_closed, r.hi_closed))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(SectionSet::normalize(items))
    }
}

/// Topological summary of a section set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub is_closed: bool,
    pub is_open: bool,
    pub is_convex: bool,
    pub component_count: usize,
    pub closure: SectionSet,
    pub interior: SectionSet,
    pub min: Option<Rational>,
    pub max: Option<Rational>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn grid_agrees(set: &SectionSet, member: impl Fn(Rational) -> bool) -> bool {
        (0..=1000).all(|p| {
            let x = q(p, 1000);
            set.contains(x) == member(x)
        })
    }

    #[test]
    fn normalize_merges_adjacent() {
        let s = SectionSet::normalize([Interval::closed_open(q(0, 1), q(1, 2)), Interval::closed(q(1, 2), q(1, 1))]);
        assert_eq!(s, SectionSet::full());
    }

    #[test]
    fn normalize_absorbs_endpoint() {
        let s = SectionSet::normalize([Interval::point(q(1, 1)), Interval::open(q(0, 1), q(1, 1))]);
        assert_eq!(s.intervals(), &[Interval::open_closed(q(0, 1), q(1, 1))]);
    }

    #[test]
    fn normalize_overlap_grid_oracle() {
        let a = Interval::open(q(1, 3), q(1, 2));
        let b = Interval::open(q(1, 4), q(2, 5));
        let s = SectionSet::normalize([a, b]);
        assert_eq!(s.intervals(), &[Interval::open(q(1, 4), q(1, 2))]);
        assert!(grid_agrees(&s, |x| a.contains(x) || b.contains(x)));
    }

    #[test]
    fn open_endpoints_do_not_merge() {
        let s = SectionSet::normalize([Interval::closed_open(q(0, 1), q(1, 2)), Interval::open_closed(q(1, 2), q(1, 1))]);
        assert_eq!(s.component_count(), 2);
        assert!(!s.contains(q(1, 2)));
    }

    #[test]
    fn malformed_intervals_rejected() {
        assert!(matches!(Interval::new(q(1, 2), q(1, 3), true, true), Err(IntervalError::Inverted { .. })));
        assert!(matches!(Interval::new(q(1, 2), q(1, 2), true, false), Err(IntervalError::EmptyPoint(_))));
        assert!(matches!(Interval::new(q(0, 1), q(3, 2), true, true), Err(IntervalError::OutOfRange { .. })));
        assert!(SectionSet::from_raw(&[(q(1, 2), q(1, 4), true, true)]).is_err());
    }

    #[test]
    fn union_examples() {
        let s = SectionSet::normalize([Interval::closed(q(1, 4), q(1, 2))]);
        assert_eq!(SectionSet::empty().union(&s), s);
        let ends = SectionSet::point(q(0, 1)).union(&SectionSet::point(q(1, 1)));
        assert_eq!(ends.component_count(), 2);

        let a = SectionSet::normalize([Interval::closed_open(q(0, 1), q(1, 3)), Interval::open_closed(q(2, 3), q(1, 1))]);
        let b = SectionSet::point(q(1, 3));
        let u = a.union(&b);
        assert_eq!(u.intervals(), &[Interval::closed(q(0, 1), q(1, 3)), Interval::open_closed(q(2, 3), q(1, 1))]);
        assert!(grid_agrees(&u, |x| a.contains(x) || b.contains(x)));
    }

    #[test]
    fn intersect_examples() {
        let s = SectionSet::normalize([Interval::open(q(1, 4), q(1, 2))]);
        assert_eq!(s.intersect(&SectionSet::full()), s);
        let m = SectionSet::from_interval(Interval::closed(q(0, 1), q(1, 2)))
            .intersect(&SectionSet::from_interval(Interval::closed(q(1, 2), q(1, 1))));
        assert_eq!(m, SectionSet::point(q(1, 2)));

        let a = SectionSet::normalize([Interval::closed_open(q(0, 1), q(1, 3)), Interval::open_closed(q(2, 3), q(1, 1))]);
        let b = SectionSet::from_interval(Interval::closed(q(1, 4), q(3, 4)));
        let i = a.intersect(&b);
        assert_eq!(i.intervals(), &[Interval::closed_open(q(1, 4), q(1, 3)), Interval::open_closed(q(2, 3), q(3, 4))]);
        assert!(grid_agrees(&i, |x| a.contains(x) && b.contains(x)));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(SectionSet::empty().complement(), SectionSet::full());
        assert_eq!(
            SectionSet::point(q(1, 1)).complement().intervals(),
            &[Interval::closed_open(q(0, 1), q(1, 1))]
        );
        let a = SectionSet::normalize([Interval::closed_open(q(0, 1), q(1, 3)), Interval::open_closed(q(2, 3), q(1, 1))]);
        let c = a.complement();
        assert_eq!(c.intervals(), &[Interval::closed(q(1, 3), q(2, 3))]);
        assert!(grid_agrees(&c, |x| !a.contains(x)));
        assert!(SectionSet::full().complement().is_empty());
    }

    #[test]
    fn analyze_examples() {
        let top = SectionSet::point(q(1, 1)).analyze();
        assert!(top.is_closed && !top.is_open);
        assert!(top.interior.is_empty());

        let full = SectionSet::full().analyze();
        assert!(full.is_closed && full.is_open);
        assert_eq!(full.component_count, 1);

        let a = SectionSet::normalize([Interval::closed_open(q(0, 1), q(1, 3)), Interval::open_closed(q(2, 3), q(1, 1))]);
        let r = a.analyze();
        assert!(!r.is_closed);
        assert!(r.is_open);
        assert_eq!(r.component_count, 2);
        assert_eq!(r.closure.intervals(), &[Interval::closed(q(0, 1), q(1, 3)), Interval::closed(q(2, 3), q(1, 1))]);
        assert!(!r.is_convex);
    }

    #[test]
    fn relative_openness_at_boundary() {
        let s = SectionSet::from_interval(Interval::closed_open(q(0, 1), q(1, 2)));
        assert!(s.is_open());
        assert!(!s.is_closed());
        assert!(!SectionSet::point(q(0, 1)).is_open());
        let interior = SectionSet::from_interval(Interval::closed(q(0, 1), q(1, 2))).interior();
        assert_eq!(interior, s);
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (0i128..=12, 0i128..=12, any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if lo == hi {
                Interval::point(q(lo, 12))
            } else {
                Interval::new(q(lo, 12), q(hi, 12), lc, hc).unwrap()
            }
        })
    }

    fn arb_set() -> impl Strategy<Value = SectionSet> {
        proptest::collection::vec(arb_interval(), 0..5).prop_map(SectionSet::normalize)
    }

    fn probes() -> Vec<Rational> {
        (0..=48).map(|p| q(p, 48)).collect()
    }

    proptest! {
        #[test]
        fn membership_laws(a in arb_set(), b in arb_set()) {
            let u = a.union(&b);
            let i = a.intersect(&b);
            let c = a.complement();
            for x in probes() {
                prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(c.contains(x), !a.contains(x));
            }
        }

        #[test]
        fn double_complement_and_de_morgan(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        }

        #[test]
        fn canonical_form_is_stable(a in arb_set()) {
            prop_assert_eq!(SectionSet::normalize(a.intervals().iter().copied()), a.clone());
            for w in a.intervals().windows(2) {
                prop_assert!(w[0].hi() < w[1].lo() || (w[0].hi() == w[1].lo() && !w[0].hi_closed() && !w[1].lo_closed()));
            }
        }

        #[test]
        fn topology_laws(a in arb_set()) {
            let r = a.analyze();
            prop_assert_eq!(r.is_closed, a == r.closure);
            // an open set's complement is closed
            prop_assert_eq!(r.is_open, a.complement().is_closed());
            for x in probes() {
                if r.interior.contains(x) { prop_assert!(a.contains(x)); }
                if a.contains(x) { prop_assert!(r.closure.contains(x)); }
            }
            let inside: Vec<Rational> = probes().into_iter().filter(|&x| a.contains(x)).collect();
            let convex_on_grid = inside.windows(2).all(|w| {
                probes().into_iter().filter(|&x| x > w[0] && x < w[1]).all(|x| a.contains(x))
            });
            if r.is_convex { prop_assert!(convex_on_grid); }
        }
    }
}
