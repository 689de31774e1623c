//! Decision procedures for every axiom over a finite universe.
//!
//! A [`Checker`] materializes the universe once, caches the pairwise
//! comparison matrix and the labeled partition of every ordered triple, and
//! answers each axiom from those tables. Witnesses are the first violating
//! tuple in universe order, with the smallest weight inside the offending set.

use std::cell::RefCell;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intervals::{Interval, SectionSet};
use crate::rational::Rational;
use crate::relations::{ComparisonOutcome, Label, LabeledPartition, Model, PointwiseRule, RelationError, RelationModel, SectionKind};
use crate::spaces::{check_c1_c2, check_mixture_axioms, MixtureSpace, Point, SpaceError};
use crate::surd::Surd;
use crate::verdict::{AxiomId, Status, Verdict, Witness};

const SATURATION_ROUNDS: usize = 6;

pub fn default_grid() -> Vec<Rational> {
    vec![Rational::new(1, 4), Rational::new(1, 2), Rational::new(3, 4)]
}

fn default_depth() -> usize {
    1
}

fn yes() -> bool {
    true
}

/// The finite instantiation of "for all points".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    pub points: Vec<Point>,
    #[serde(default = "default_depth")]
    pub closure_depth: usize,
    #[serde(default = "default_grid")]
    pub grid: Vec<Rational>,
    /// Add mixtures on section boundaries until the direct checks stabilize.
    #[serde(default = "yes")]
    pub saturate: bool,
}

impl Universe {
    pub fn new(points: Vec<Point>) -> Self {
        Universe { points, closure_depth: default_depth(), grid: default_grid(), saturate: true }
    }

    pub fn with_grid(mut self, grid: Vec<Rational>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.closure_depth = depth;
        self
    }

    pub fn saturating(mut self, on: bool) -> Self {
        self.saturate = on;
        self
    }

    /// The given points followed by their grid mixtures, `closure_depth` rounds deep.
    pub fn closure(&self, space: &MixtureSpace) -> Result<Vec<Point>, SpaceError> {
        let mut pts: Vec<Point> = Vec::new();
        for p in &self.points {
            let c = canonical(space, p)?;
            if !pts.contains(&c) {
                pts.push(c);
            }
        }
        for _ in 0..self.closure_depth {
            let snapshot = pts.clone();
            for x in &snapshot {
                for y in &snapshot {
                    if x == y {
                        continue;
                    }
                    for &lambda in &self.grid {
                        let m = space.mix(x, lambda, y)?;
                        if !pts.contains(&m) {
                            pts.push(m);
                        }
                    }
                }
            }
        }
        Ok(pts)
    }
}

fn canonical(space: &MixtureSpace, p: &Point) -> Result<Point, SpaceError> {
    match space {
        MixtureSpace::Quotient(q) => {
            space.check_point(p)?;
            q.canonical(p)
        }
        _ => {
            space.check_point(p)?;
            Ok(p.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("universe is empty")]
    EmptyUniverse,
}

fn open_unit() -> SectionSet {
    SectionSet::from_interval(Interval::open(Rational::ZERO, Rational::ONE))
}

/// Smallest element when attained, otherwise a point of the first component.
pub fn pick(set: &SectionSet) -> Option<Rational> {
    set.min().or_else(|| set.representative())
}

fn label_of(kind: SectionKind) -> Option<Label> {
    match kind {
        SectionKind::StrictAbove => Some(Label::StrictAbove),
        SectionKind::StrictBelow => Some(Label::StrictBelow),
        SectionKind::Indifferent => Some(Label::Indifferent),
        SectionKind::Incomparable => Some(Label::Incomparable),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniverseSize {
    pub given: usize,
    pub closure: usize,
    pub total: usize,
}

pub struct Checker {
    model: Model,
    grid: Vec<Rational>,
    points: Vec<Point>,
    size: UniverseSize,
    cmp: Vec<ComparisonOutcome>,
    parts: Option<Vec<LabeledPartition>>,
    cache: RefCell<BTreeMap<AxiomId, Verdict>>,
}

type Step<T> = Result<T, CheckError>;

impl Checker {
    pub fn new(model: &Model, universe: &Universe) -> Step<Checker> {
        let mut points = universe.closure(&model.space)?;
        if points.is_empty() {
            return Err(CheckError::EmptyUniverse);
        }
        let closure = points.len();
        let given = universe.points.len().min(closure);
        let size = UniverseSize { given, closure, total: closure };
        let mut checker = Checker::build(model.clone(), universe.grid.clone(), points.clone(), size)?;
        if universe.saturate && checker.parts.is_some() {
            for _ in 0..SATURATION_ROUNDS {
                let mut fresh = Vec::new();
                for p in checker.saturation_points()? {
                    let p = canonical(&model.space, &p)?;
                    if !points.contains(&p) && !fresh.contains(&p) {
                        fresh.push(p);
                    }
                }
                if fresh.is_empty() {
                    break;
                }
                points.extend(fresh);
                let size = UniverseSize { total: points.len(), ..size };
                checker = Checker::build(model.clone(), universe.grid.clone(), points.clone(), size)?;
            }
        }
        Ok(checker)
    }

    fn build(model: Model, grid: Vec<Rational>, points: Vec<Point>, size: UniverseSize) -> Step<Checker> {
        let n = points.len();
        let mut cmp = Vec::with_capacity(n * n);
        for x in &points {
            for y in &points {
                cmp.push(model.compare(x, y)?);
            }
        }
        let parts = if model.has_segment_oracle() {
            let mut parts = Vec::with_capacity(n * n * n);
            for x in &points {
                for y in &points {
                    for z in &points {
                        parts.push(model.classify_segment(x, y, z)?);
                    }
                }
            }
            Some(parts)
        } else {
            None
        };
        Ok(Checker { model, grid, points, size, cmp, parts, cache: RefCell::new(BTreeMap::new()) })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn grid(&self) -> &[Rational] {
        &self.grid
    }

    pub fn size(&self) -> UniverseSize {
        self.size
    }

    pub fn has_sections(&self) -> bool {
        self.parts.is_some()
    }

    fn n(&self) -> usize {
        self.points.len()
    }

    pub fn outcome(&self, i: usize, j: usize) -> ComparisonOutcome {
        self.cmp[i * self.n() + j]
    }

    fn ge(&self, i: usize, j: usize) -> bool {
        self.outcome(i, j).weakly_better()
    }

    fn gt(&self, i: usize, j: usize) -> bool {
        self.outcome(i, j) == ComparisonOutcome::Better
    }

    fn sim(&self, i: usize, j: usize) -> bool {
        self.outcome(i, j) == ComparisonOutcome::Equivalent
    }

    fn bowtie(&self, i: usize, j: usize) -> bool {
        self.outcome(i, j) == ComparisonOutcome::Incomparable
    }

    /// The partition for `(x, y, z) = (points[i], points[j], points[k])`.
    pub fn partition(&self, i: usize, j: usize, k: usize) -> Option<&LabeledPartition> {
        let n = self.n();
        self.parts.as_ref().map(|p| &p[(i * n + j) * n + k])
    }

    fn part(&self, i: usize, j: usize, k: usize) -> &LabeledPartition {
        self.partition(i, j, k).expect("section checks run only with an oracle")
    }

    fn w2(&self, i: usize, j: usize) -> Witness {
        Witness::new().point("x", &self.points[i]).point("y", &self.points[j])
    }

    fn w3(&self, i: usize, j: usize, k: usize) -> Witness {
        self.w2(i, j).point("z", &self.points[k])
    }

    fn first_pair(&self, f: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| f(i, j))
    }

    fn first_triple(&self, f: impl Fn(usize, usize, usize) -> bool) -> Option<(usize, usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .find(|&(i, j, k)| f(i, j, k))
    }

    pub fn check_all(&self, ids: &[AxiomId]) -> Step<Vec<Verdict>> {
        ids.iter().map(|id| self.check(*id)).collect()
    }

    pub fn status(&self, id: AxiomId) -> Step<Status> {
        Ok(self.check(id)?.status)
    }

    pub fn check(&self, id: AxiomId) -> Step<Verdict> {
        if let Some(v) = self.cache.borrow().get(&id) {
            return Ok(v.clone());
        }
        let v = self.compute(id)?;
        self.cache.borrow_mut().insert(id, v.clone());
        Ok(v)
    }

    fn compute(&self, id: AxiomId) -> Step<Verdict> {
        use AxiomId::*;
        if id.needs_sections() && self.parts.is_none() {
            if id == StrongArchimedean {
                if let RelationModel::PointwiseOnly(PointwiseRule::RationalOverIrrational) = self.model.relation {
                    return self.surd_strong_archimedean();
                }
            }
            return Ok(Verdict::not_applicable(id, "relation has no segment oracle"));
        }
        Ok(match id {
            Reflexive => match (0..self.n()).find(|&i| !self.sim(i, i)) {
                Some(i) => Verdict::fails(id, Witness::new().point("x", &self.points[i])),
                None => Verdict::holds(id),
            },
            Complete => self.universal_pair(id, |i, j| self.bowtie(i, j)),
            Nontrivial => match self.first_pair(|i, j| self.gt(i, j)) {
                Some((i, j)) => Verdict::holds_with(id, self.w2(i, j)),
                None => Verdict::fails(id, Witness::new().count("pairs_examined", self.n() * self.n())),
            },
            Transitive => self.universal_triple(id, |i, j, k| self.ge(i, j) && self.ge(j, k) && !self.ge(i, k)),
            NegativelyTransitive => {
                self.universal_triple(id, |i, j, k| !self.gt(i, j) && !self.gt(j, k) && self.gt(i, k))
            }
            SemiTransitiveUp => self.universal_triple(id, |i, j, k| self.gt(i, j) && self.sim(j, k) && !self.gt(i, k)),
            SemiTransitiveDown => {
                self.universal_triple(id, |i, j, k| self.sim(i, j) && self.gt(j, k) && !self.gt(i, k))
            }
            SemiTransitive => {
                for half in [SemiTransitiveUp, SemiTransitiveDown] {
                    let v = self.check(half)?;
                    if v.status == Status::Fails {
                        let w = v.witness.unwrap_or_default().text("half", half.as_str());
                        return Ok(Verdict::fails(id, w));
                    }
                }
                Verdict::holds(id)
            }
            TransitiveSym => self.universal_triple(id, |i, j, k| self.sim(i, j) && self.sim(j, k) && !self.sim(i, k)),
            TransitiveStrict => self.universal_triple(id, |i, j, k| self.gt(i, j) && self.gt(j, k) && !self.gt(i, k)),
            AntiSymmetric => {
                let mut found = None;
                'outer: for i in 0..self.n() {
                    for j in 0..self.n() {
                        if self.sim(i, j) && !self.model.space.points_equal(&self.points[i], &self.points[j])? {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match found {
                    Some((i, j)) => Verdict::fails(id, self.w2(i, j)),
                    None => Verdict::holds(id),
                }
            }
            MixtureContinuous => {
                self.section_property(id, &[SectionKind::WeakAbove, SectionKind::WeakBelow], |s| s.is_closed())
            }
            OpenStrictSections => {
                self.section_property(id, &[SectionKind::StrictAbove, SectionKind::StrictBelow], |s| s.is_open())
            }
            OpenIncomparableSections => self.section_property(id, &[SectionKind::Incomparable], |s| s.is_open()),
            Archimedean => self.archimedean(),
            StrongArchimedean => self.strong_archimedean(),
            Linear => {
                let refl = self.check(Reflexive)?.status.passes();
                let tsym = self.check(TransitiveSym)?.status.passes();
                if !(refl && tsym) {
                    Verdict::not_applicable(id, "needs a reflexive relation with transitive indifference")
                } else {
                    self.section_convexity(SectionKind::Indifferent).with_axiom(id)
                }
            }
            Convex => self.directional(id, true),
            Concave => self.directional(id, false),
            StarConvex => self.star(id, true),
            StarConcave => self.star(id, false),
            Independent => self.independence()?,
            Fragile => self.existential_triple(id, |p| {
                p.above.union(&p.below).intersect(&p.incomparable.interior().closure())
            }),
            Flimsy => self.existential_triple(id, |p| p.incomparable.intersect(&p.weak_above().union(&p.weak_below()).closure())),
            S1 | S2 | S3 | S4 if self.model.space.is_convex_carrier() => {
                Verdict::holds(id).with_note("analytic: affine combinations in a convex carrier")
            }
            S1 | S2 | S3 | S4 => {
                self.grouped(id, check_mixture_axioms(&self.model.space, &self.points, &self.grid, None)?)
            }
            M1 | M2 | M3 | M4 => {
                self.grouped(id, check_mixture_axioms(&self.model.space, &self.points, &self.grid, Some(&self.model))?)
            }
            C1 | C2 => {
                self.grouped(id, check_c1_c2(&self.model.space, &self.points, &self.grid)?)
            }
        })
    }

    /// Caches a jointly computed family and returns the member `id`.
    fn grouped(&self, id: AxiomId, family: Vec<Verdict>) -> Verdict {
        let mut cache = self.cache.borrow_mut();
        let mut found = None;
        for v in family {
            if v.axiom == id {
                found = Some(v.clone());
            }
            cache.insert(v.axiom, v);
        }
        found.expect("family reports every member")
    }

    fn universal_pair(&self, id: AxiomId, bad: impl Fn(usize, usize) -> bool) -> Verdict {
        match self.first_pair(bad) {
            Some((i, j)) => Verdict::fails(id, self.w2(i, j)),
            None => Verdict::holds(id),
        }
    }

    fn universal_triple(&self, id: AxiomId, bad: impl Fn(usize, usize, usize) -> bool) -> Verdict {
        match self.first_triple(bad) {
            Some((i, j, k)) => Verdict::fails(id, self.w3(i, j, k)),
            None => Verdict::holds(id),
        }
    }

    fn section_property(&self, id: AxiomId, kinds: &[SectionKind], good: impl Fn(&SectionSet) -> bool) -> Verdict {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = self.part(i, j, k);
                    for kind in kinds {
                        let s = p.section(*kind);
                        if !good(&s) {
                            let mut w = self.w3(i, j, k).text("section", kind.as_str()).set("set", &s);
                            let edge = if id == AxiomId::MixtureContinuous {
                                s.closure().difference(&s)
                            } else {
                                s.difference(&s.interior())
                            };
                            if let Some(l) = pick(&edge) {
                                w = w.weight("lambda", l);
                            }
                            return Verdict::fails(id, w);
                        }
                    }
                }
            }
        }
        Verdict::holds(id)
    }

    /// For `x ≻ y`: every `z ⋈ y` admits `λ ∈ (0,1)` with `xλz ≻ y`, and every
    /// `w ⋈ x` admits `δ ∈ (0,1)` with `yδw ≺ x`.
    fn archimedean(&self) -> Verdict {
        let id = AxiomId::Archimedean;
        let n = self.n();
        let mut guarded = 0usize;
        for i in 0..n {
            for j in 0..n {
                if !self.gt(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.bowtie(j, k) {
                        guarded += 1;
                        let above = &self.part(i, k, j).above;
                        if above.intersect(&open_unit()).is_empty() {
                            let w = self.w3(i, j, k).text("clause", "z").set("set", above);
                            return Verdict::fails(id, w);
                        }
                    }
                }
                for k in 0..n {
                    if self.bowtie(i, k) {
                        guarded += 1;
                        let below = &self.part(j, k, i).below;
                        if below.intersect(&open_unit()).is_empty() {
                            let w = self.w2(i, j).point("w", &self.points[k]).text("clause", "w").set("set", below);
                            return Verdict::fails(id, w);
                        }
                    }
                }
            }
        }
        if guarded == 0 {
            Verdict::holds(id).with_note("vacuous: no strict pair with an incomparable third point")
        } else {
            Verdict::holds(id)
        }
    }

    fn strong_archimedean(&self) -> Verdict {
        let id = AxiomId::StrongArchimedean;
        let n = self.n();
        let mut strict = 0usize;
        for i in 0..n {
            for j in 0..n {
                if !self.gt(i, j) {
                    continue;
                }
                strict += 1;
                for k in 0..n {
                    let above = &self.part(i, k, j).above;
                    if above.intersect(&open_unit()).is_empty() {
                        return Verdict::fails(id, self.w3(i, j, k).text("clause", "above").set("set", above));
                    }
                    let below = &self.part(j, k, i).below;
                    if below.intersect(&open_unit()).is_empty() {
                        return Verdict::fails(id, self.w3(i, j, k).text("clause", "below").set("set", below));
                    }
                }
            }
        }
        if strict == 0 {
            Verdict::holds(id).with_note("vacuous: no strict pair")
        } else {
            Verdict::holds(id)
        }
    }

    /// Convexity (`upper`) or concavity straight from the definition.
    fn directional(&self, id: AxiomId, upper: bool) -> Verdict {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let guard = if upper { self.ge(i, k) && self.ge(j, k) } else { self.ge(k, i) && self.ge(k, j) };
                    if !guard {
                        continue;
                    }
                    let p = self.part(i, j, k);
                    let s = if upper { p.weak_above() } else { p.weak_below() };
                    if !s.is_full() {
                        let lambda = pick(&s.complement()).expect("nonempty complement");
                        return Verdict::fails(id, self.w3(i, j, k).weight("lambda", lambda).set("set", &s));
                    }
                }
            }
        }
        Verdict::holds(id)
    }

    /// Convexity of every `A⪰` (`ge`), `A⪯` (`le`) or `A∼` (`sim`) section.
    pub fn section_convexity(&self, kind: SectionKind) -> Verdict {
        let id = match kind {
            SectionKind::WeakAbove => AxiomId::Convex,
            SectionKind::WeakBelow => AxiomId::Concave,
            _ => AxiomId::Linear,
        };
        if self.parts.is_none() {
            return Verdict::not_applicable(id, "relation has no segment oracle");
        }
        self.section_property(id, &[kind], |s| s.is_convex()).with_note("section form")
    }

    fn star(&self, id: AxiomId, upward: bool) -> Verdict {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let guard = if upward { self.ge(i, j) } else { self.ge(j, i) };
                if !guard {
                    continue;
                }
                let p = self.part(i, j, j);
                let s = if upward { &p.above } else { &p.below };
                let missing = open_unit().difference(s);
                if let Some(l) = pick(&missing) {
                    return Verdict::fails(id, self.w2(i, j).weight("lambda", l).set("set", s));
                }
            }
        }
        Verdict::holds(id)
    }

    fn existential_triple(&self, id: AxiomId, hits: impl Fn(&LabeledPartition) -> SectionSet) -> Verdict {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = hits(self.part(i, j, k));
                    if let Some(l) = pick(&s) {
                        return Verdict::holds_with(id, self.w3(i, j, k).weight("lambda", l));
                    }
                }
            }
        }
        Verdict::fails(id, Witness::new().count("triples_examined", n * n * n))
    }

    fn independence(&self) -> Step<Verdict> {
        let id = AxiomId::Independent;
        if matches!(self.model.relation, RelationModel::MultiUtility { .. }) && self.model.space.is_convex_carrier() {
            return Ok(Verdict::holds(id).with_note("analytic: each utility difference scales by λ"));
        }
        let mut weights: Vec<Rational> = self.grid.iter().copied().filter(|l| l.is_positive() && *l <= Rational::ONE).collect();
        weights.push(Rational::ONE);
        weights.sort();
        weights.dedup();
        let n = self.n();
        let space = &self.model.space;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for &lambda in &weights {
                        let a = space.mix(&self.points[i], lambda, &self.points[k])?;
                        let b = space.mix(&self.points[j], lambda, &self.points[k])?;
                        let mixed = self.model.compare(&a, &b)? == ComparisonOutcome::Equivalent;
                        if mixed != self.sim(i, j) {
                            return Ok(Verdict::fails(id, self.w3(i, j, k).weight("lambda", lambda)));
                        }
                    }
                }
            }
        }
        Ok(Verdict::sampled(id, format!("{n}³ triples × {} weights", weights.len())))
    }

    /// Strong Archimedean search for the pointwise rational/irrational relation.
    fn surd_strong_archimedean(&self) -> Step<Verdict> {
        let id = AxiomId::StrongArchimedean;
        let space = &self.model.space;
        let n = self.n();
        let mut searched = 0usize;
        for i in 0..n {
            for j in 0..n {
                if !self.gt(i, j) {
                    continue;
                }
                for k in 0..n {
                    let (x, y, z) = (&self.points[i], &self.points[j], &self.points[k]);
                    searched += 1;
                    let lambda = surd_weight_search(&self.model, x, z, |m| Ok(self.model.compare(m, y)? == ComparisonOutcome::Better))?;
                    if lambda.is_none() {
                        return Ok(Verdict::fails(id, self.w3(i, j, k).text("clause", "above")));
                    }
                    let delta = surd_weight_search(&self.model, y, z, |m| Ok(self.model.compare(m, x)? == ComparisonOutcome::Worse))?;
                    if delta.is_none() {
                        return Ok(Verdict::fails(id, self.w3(i, j, k).text("clause", "below")));
                    }
                    debug_assert!(space.mix_surd(x, lambda.unwrap(), z).is_ok());
                }
            }
        }
        Ok(Verdict::holds(id).with_note(format!("pointwise witness search over {searched} triples")))
    }

    /// Points to add so that a failure of a section-level characterization
    /// becomes visible to the matching direct check.
    fn saturation_points(&self) -> Step<Vec<Point>> {
        let mut out = Vec::new();
        if self.check(AxiomId::OpenStrictSections)?.status == Status::Fails
            && self.check(AxiomId::Archimedean)?.status == Status::Holds
        {
            out.extend(self.open_boundary_probe()?);
        }
        let convex = self.check(AxiomId::Convex)?.status == Status::Holds;
        let concave = self.check(AxiomId::Concave)?.status == Status::Holds;
        if convex {
            out.extend(self.component_probe(SectionKind::WeakAbove)?);
        }
        if concave {
            out.extend(self.component_probe(SectionKind::WeakBelow)?);
        }
        if convex && concave {
            out.extend(self.component_probe(SectionKind::Indifferent)?);
        }
        Ok(out)
    }

    /// The mixture at the first non-interior point of a strict section and
    /// at the middle of the adjacent piece outside it.
    fn open_boundary_probe(&self) -> Step<Vec<Point>> {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = self.part(i, j, k);
                    for kind in [SectionKind::StrictAbove, SectionKind::StrictBelow] {
                        let s = p.section(kind);
                        if s.is_open() {
                            continue;
                        }
                        let Some(c) = s.difference(&s.interior()).min() else { continue };
                        let label = label_of(kind);
                        let side = p.pieces().into_iter().find(|(iv, l)| {
                            Some(*l) != label
                                && ((iv.hi() == c && !iv.hi_closed()) || (iv.lo() == c && !iv.lo_closed()))
                        });
                        if let Some((iv, _)) = side {
                            let beta = Rational::midpoint(iv.lo(), iv.hi());
                            let (x, y) = (&self.points[i], &self.points[j]);
                            return Ok(vec![self.model.space.mix(x, c, y)?, self.model.space.mix(x, beta, y)?]);
                        }
                    }
                }
            }
        }
        Ok(Vec::new())
    }

    /// Mixtures at two components of the first non-convex section of `kind`.
    fn component_probe(&self, kind: SectionKind) -> Step<Vec<Point>> {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = self.part(i, j, k).section(kind);
                    if s.component_count() > 1 {
                        let a = s.intervals()[0].representative();
                        let b = s.intervals()[1].representative();
                        let (x, y) = (&self.points[i], &self.points[j]);
                        return Ok(vec![self.model.space.mix(x, a, y)?, self.model.space.mix(x, b, y)?]);
                    }
                }
            }
        }
        Ok(Vec::new())
    }
}

/// A weight `λ ∈ (0,1)` with `accept(xλz)`; rational candidates first, then
/// the irrational weight that lands `xλz` on a rational point.
fn surd_weight_search(
    model: &Model,
    x: &Point,
    z: &Point,
    accept: impl Fn(&Point) -> Step<bool>,
) -> Step<Option<Surd>> {
    let space = &model.space;
    let mut candidates: Vec<Surd> = Vec::new();
    for d in 2..=8 {
        for k in 1..d {
            let r = Rational::new(k, d);
            let s = Surd::rational(r);
            if !candidates.contains(&s) {
                candidates.push(s);
            }
        }
    }
    if let (Some(xv), Some(zv)) = (space.surd_value(x), space.surd_value(z)) {
        if xv != zv {
            if let Some(q) = rational_between(xv, zv) {
                candidates.push((Surd::rational(q) - zv) / (xv - zv));
            }
        }
    }
    for lambda in candidates {
        if lambda <= Surd::ZERO || lambda >= Surd::ONE {
            continue;
        }
        let m = space.mix_surd(x, lambda, z)?;
        if accept(&m)? {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}

/// Some rational strictly between two distinct surds.
fn rational_between(a: Surd, b: Surd) -> Option<Rational> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut denom = 4i128;
    for _ in 0..40 {
        let (_, up) = lo.bracket(denom);
        if Surd::rational(up) > lo && Surd::rational(up) < hi {
            return Some(up);
        }
        let (down, _) = hi.bracket(denom);
        if Surd::rational(down) > lo && Surd::rational(down) < hi {
            return Some(down);
        }
        denom = denom.checked_mul(2)?;
    }
    None
}

/// Re-evaluates a verdict's witness against the model directly, without the
/// checker's tables. Returns `true` when the witness supports the status, or
/// when there is nothing to re-check.
pub fn verify_witness(model: &Model, verdict: &Verdict) -> Step<bool> {
    use AxiomId::*;
    let Some(w) = &verdict.witness else { return Ok(true) };
    let pt = |k: &str| w.get_point(k);
    let cmp = |a: &Point, b: &Point| model.compare(a, b);
    let open = open_unit();
    let fails = verdict.status == Status::Fails;
    let holds = verdict.status == Status::Holds;
    let section = |x: &Point, y: &Point, z: &Point, kind: &str| -> Step<SectionSet> {
        let kind: SectionKind = kind.parse().map_err(RelationError::Invalid)?;
        Ok(model.section(x, y, z, kind)?)
    };
    Ok(match (verdict.axiom, pt("x"), pt("y"), pt("z")) {
        (Reflexive, Some(x), _, _) if fails => cmp(x, x)? != ComparisonOutcome::Equivalent,
        (Complete, Some(x), Some(y), _) if fails => cmp(x, y)? == ComparisonOutcome::Incomparable,
        (Nontrivial, Some(x), Some(y), _) if holds => cmp(x, y)? == ComparisonOutcome::Better,
        (Transitive, Some(x), Some(y), Some(z)) if fails => {
            cmp(x, y)?.weakly_better() && cmp(y, z)?.weakly_better() && !cmp(x, z)?.weakly_better()
        }
        (NegativelyTransitive, Some(x), Some(y), Some(z)) if fails => {
            use ComparisonOutcome::Better;
            cmp(x, y)? != Better && cmp(y, z)? != Better && cmp(x, z)? == Better
        }
        (SemiTransitive | SemiTransitiveUp | SemiTransitiveDown, Some(x), Some(y), Some(z)) if fails => {
            use ComparisonOutcome::{Better, Equivalent};
            let up = verdict.axiom == SemiTransitiveUp || w.get_text("half") == Some(SemiTransitiveUp.as_str());
            let (a, b) = (cmp(x, y)?, cmp(y, z)?);
            let guard = if up { a == Better && b == Equivalent } else { a == Equivalent && b == Better };
            guard && cmp(x, z)? != Better
        }
        (TransitiveSym, Some(x), Some(y), Some(z)) if fails => {
            use ComparisonOutcome::Equivalent;
            cmp(x, y)? == Equivalent && cmp(y, z)? == Equivalent && cmp(x, z)? != Equivalent
        }
        (TransitiveStrict, Some(x), Some(y), Some(z)) if fails => {
            use ComparisonOutcome::Better;
            cmp(x, y)? == Better && cmp(y, z)? == Better && cmp(x, z)? != Better
        }
        (AntiSymmetric, Some(x), Some(y), _) if fails => {
            cmp(x, y)? == ComparisonOutcome::Equivalent && !model.space.points_equal(x, y)?
        }
        (MixtureContinuous | OpenStrictSections | OpenIncomparableSections | Linear | Convex | Concave, Some(x), Some(y), Some(z))
            if fails && w.get_text("section").is_some() =>
        {
            let s = section(x, y, z, w.get_text("section").unwrap())?;
            match verdict.axiom {
                MixtureContinuous => !s.is_closed(),
                OpenStrictSections | OpenIncomparableSections => !s.is_open(),
                _ => !s.is_convex(),
            }
        }
        (Convex | Concave, Some(x), Some(y), Some(z)) if fails => {
            let lambda = w.get_weight("lambda").unwrap_or_default();
            let m = model.space.mix(x, lambda, y)?;
            if verdict.axiom == Convex {
                cmp(x, z)?.weakly_better() && cmp(y, z)?.weakly_better() && !cmp(&m, z)?.weakly_better()
            } else {
                cmp(z, x)?.weakly_better() && cmp(z, y)?.weakly_better() && !cmp(z, &m)?.weakly_better()
            }
        }
        (StarConvex | StarConcave, Some(x), Some(y), _) if fails => {
            let lambda = w.get_weight("lambda").unwrap_or_default();
            let m = model.space.mix(x, lambda, y)?;
            let open_weight = open.contains(lambda) && !model.space.points_equal(x, y)?;
            if verdict.axiom == StarConvex {
                open_weight && cmp(x, y)?.weakly_better() && cmp(&m, y)? != ComparisonOutcome::Better
            } else {
                open_weight && cmp(y, x)?.weakly_better() && cmp(&m, y)? != ComparisonOutcome::Worse
            }
        }
        (Archimedean, Some(x), Some(y), _) if fails => {
            use ComparisonOutcome::{Better, Incomparable};
            if cmp(x, y)? != Better {
                return Ok(false);
            }
            match (w.get_text("clause"), pt("z"), pt("w")) {
                (Some("z"), Some(z), _) => {
                    cmp(y, z)? == Incomparable && model.section(x, z, y, SectionKind::StrictAbove)?.intersect(&open).is_empty()
                }
                (Some("w"), _, Some(v)) => {
                    cmp(x, v)? == Incomparable && model.section(y, v, x, SectionKind::StrictBelow)?.intersect(&open).is_empty()
                }
                _ => false,
            }
        }
        (StrongArchimedean, Some(x), Some(y), Some(z)) if fails && model.has_segment_oracle() => {
            cmp(x, y)? == ComparisonOutcome::Better
                && match w.get_text("clause") {
                    Some("above") => model.section(x, z, y, SectionKind::StrictAbove)?.intersect(&open).is_empty(),
                    Some("below") => model.section(y, z, x, SectionKind::StrictBelow)?.intersect(&open).is_empty(),
                    _ => false,
                }
        }
        (Fragile | Flimsy, Some(x), Some(y), Some(z)) if holds => {
            let Some(lambda) = w.get_weight("lambda") else { return Ok(false) };
            let p = model.classify_segment(x, y, z)?;
            if verdict.axiom == Fragile {
                p.above.union(&p.below).contains(lambda) && p.incomparable.interior().closure().contains(lambda)
            } else {
                p.incomparable.contains(lambda) && p.weak_above().union(&p.weak_below()).closure().contains(lambda)
            }
        }
        (Independent, Some(x), Some(y), Some(z)) if fails => {
            let lambda = w.get_weight("lambda").unwrap_or(Rational::ONE);
            let a = model.space.mix(x, lambda, z)?;
            let b = model.space.mix(y, lambda, z)?;
            (cmp(&a, &b)? == ComparisonOutcome::Equivalent) != (cmp(x, y)? == ComparisonOutcome::Equivalent)
        }
        _ => true,
    })
}
