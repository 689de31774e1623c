//! Mixture-set carriers.
//!
//! Every space exposes its mixture operation through [`MixtureSpace::segment`]:
//! the map `λ ↦ xλy` is returned as a list of affine pieces, each valid on a
//! subinterval of `[0, 1]`. Convex carriers need one piece; the split space
//! needs two because its mixture jumps at an endpoint. The convention is
//! `xλy = λx + (1-λ)y`, so `x1y = x`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intervals::{Interval, SectionSet};
use crate::rational::Rational;
use crate::relations::{ComparisonOutcome, Model, RelationError};
use crate::surd::Surd;
use crate::verdict::{AxiomId, Verdict, Witness};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The `i`-th vertex of a simplex with `n` coordinates.
    pub fn vertex(n: usize, i: usize) -> Self {
        Point((0..n).map(|k| if k == i { Rational::ONE } else { Rational::ZERO }).collect())
    }

    pub fn scalar(v: Rational) -> Self {
        Point(vec![v])
    }

    pub fn dot(&self, w: &[Rational]) -> Rational {
        self.0.iter().zip(w).map(|(a, b)| *a * *b).sum()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("point {point} is not in the carrier of {space}")]
    NotInCarrier { point: Point, space: String },
    #[error("mixture weight {0} is outside [0, 1]")]
    WeightOutOfRange(Rational),
    #[error("invalid space: {0}")]
    Invalid(String),
    #[error(transparent)]
    Relation(Box<RelationError>),
}

impl From<RelationError> for SpaceError {
    fn from(e: RelationError) -> Self {
        SpaceError::Relation(Box::new(e))
    }
}

/// One affine piece of a segment: `point(λ) = origin + λ·direction` on `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub domain: Interval,
    pub origin: Vec<Rational>,
    pub direction: Vec<Rational>,
}

impl Piece {
    fn affine(domain: Interval, origin: Vec<Rational>, direction: Vec<Rational>) -> Self {
        Piece { domain, origin, direction }
    }

    fn constant(domain: Interval, at: &Point) -> Self {
        let zero = vec![Rational::ZERO; at.dim()];
        Piece { domain, origin: at.0.clone(), direction: zero }
    }

    pub fn at(&self, lambda: Rational) -> Point {
        Point(self.origin.iter().zip(&self.direction).map(|(o, d)| *o + lambda * *d).collect())
    }

    /// `w·point(λ) + c` as `(intercept, slope)` in `λ`.
    pub fn linear_form(&self, w: &[Rational], c: Rational) -> (Rational, Rational) {
        let a: Rational = self.origin.iter().zip(w).map(|(o, k)| *o * *k).sum();
        let b: Rational = self.direction.iter().zip(w).map(|(d, k)| *d * *k).sum();
        (a + c, b)
    }

    /// The weights on this piece at which the segment passes through `target`.
    pub fn hits(&self, target: &Point) -> SectionSet {
        let mut set = SectionSet::from_interval(self.domain);
        for ((o, d), t) in self.origin.iter().zip(&self.direction).zip(target.coords()) {
            let gap = *t - *o;
            if d.is_zero() {
                if !gap.is_zero() {
                    return SectionSet::empty();
                }
            } else {
                let root = gap / *d;
                if !root.is_unit() {
                    return SectionSet::empty();
                }
                set = set.intersect(&SectionSet::point(root));
            }
            if set.is_empty() {
                break;
            }
        }
        set
    }
}

/// Which half of the split space a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitPart {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MixtureSpace {
    /// Probability vectors with `dim + 1` coordinates.
    Simplex { dim: usize },
    RealInterval { lo: Rational, hi: Rational },
    /// `A = {0}×[0,1]` together with `B = (0,1]×{0}`, with the jump mixture
    /// between the two parts.
    Split,
    /// The unit interval over `ℚ(√2)`; a point `[a, b]` denotes `a + b√2`.
    SurdInterval,
    Quotient(Box<QuotientSpace>),
}

impl MixtureSpace {
    pub fn simplex(dim: usize) -> Self {
        MixtureSpace::Simplex { dim }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self, SpaceError> {
        if lo >= hi {
            return Err(SpaceError::Invalid(format!("interval [{lo}, {hi}] is degenerate")));
        }
        Ok(MixtureSpace::RealInterval { lo, hi })
    }

    pub fn name(&self) -> String {
        match self {
            MixtureSpace::Simplex { dim } => format!("simplex({dim})"),
            MixtureSpace::RealInterval { lo, hi } => format!("interval[{lo},{hi}]"),
            MixtureSpace::Split => "split".to_string(),
            MixtureSpace::SurdInterval => "surd_interval".to_string(),
            MixtureSpace::Quotient(q) => format!("quotient({})", q.base.space.name()),
        }
    }

    /// Number of coordinates of a carrier point.
    pub fn coordinate_count(&self) -> usize {
        match self {
            MixtureSpace::Simplex { dim } => dim + 1,
            MixtureSpace::RealInterval { .. } => 1,
            MixtureSpace::Split | MixtureSpace::SurdInterval => 2,
            MixtureSpace::Quotient(q) => q.base.space.coordinate_count(),
        }
    }

    /// True for carriers that are convex subsets of a linear space under the
    /// ordinary convex combination.
    pub fn is_convex_carrier(&self) -> bool {
        matches!(self, MixtureSpace::Simplex { .. } | MixtureSpace::RealInterval { .. } | MixtureSpace::SurdInterval)
    }

    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.coordinate_count() {
            return false;
        }
        let c = p.coords();
        match self {
            MixtureSpace::Simplex { .. } => {
                c.iter().all(|v| !v.is_negative()) && c.iter().copied().sum::<Rational>() == Rational::ONE
            }
            MixtureSpace::RealInterval { lo, hi } => c[0] >= *lo && c[0] <= *hi,
            MixtureSpace::Split => split_part(p).is_some(),
            MixtureSpace::SurdInterval => Surd::new(c[0], c[1]).is_unit(),
            MixtureSpace::Quotient(q) => q.base.space.contains(p),
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<(), SpaceError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(SpaceError::NotInCarrier { point: p.clone(), space: self.name() })
        }
    }

    /// The map `λ ↦ xλy` as affine pieces covering `[0, 1]`.
    pub fn segment(&self, x: &Point, y: &Point) -> Result<Vec<Piece>, SpaceError> {
        self.check_point(x)?;
        self.check_point(y)?;
        let straight = || {
            let dir = x.0.iter().zip(&y.0).map(|(a, b)| *a - *b).collect();
            vec![Piece::affine(Interval::unit(), y.0.clone(), dir)]
        };
        Ok(match self {
            MixtureSpace::Split => match (split_part(x), split_part(y)) {
                (Some(SplitPart::A), Some(SplitPart::B)) => {
                    // aλb = (1-λ)b for λ < 1 and a1b = a
                    let neg = y.0.iter().map(|v| -*v).collect();
                    vec![
                        Piece::affine(Interval::closed_open(Rational::ZERO, Rational::ONE), y.0.clone(), neg),
                        Piece::constant(Interval::point(Rational::ONE), x),
                    ]
                }
                (Some(SplitPart::B), Some(SplitPart::A)) => {
                    // bλa = a(1-λ)b = λb for λ > 0 and b0a = a
                    vec![
                        Piece::constant(Interval::point(Rational::ZERO), y),
                        Piece::affine(
                            Interval::open_closed(Rational::ZERO, Rational::ONE),
                            vec![Rational::ZERO; 2],
                            x.0.clone(),
                        ),
                    ]
                }
                _ => straight(),
            },
            MixtureSpace::Quotient(q) => q.base.space.segment(x, y)?,
            _ => straight(),
        })
    }

    /// `xλy`. Quotient mixtures are mapped to the stored class representative.
    pub fn mix(&self, x: &Point, lambda: Rational, y: &Point) -> Result<Point, SpaceError> {
        if !lambda.is_unit() {
            return Err(SpaceError::WeightOutOfRange(lambda));
        }
        if let MixtureSpace::Simplex { .. } | MixtureSpace::RealInterval { .. } = self {
            self.check_point(x)?;
            self.check_point(y)?;
            let mu = lambda.complement();
            return Ok(Point(x.0.iter().zip(&y.0).map(|(a, b)| lambda * *a + mu * *b).collect()));
        }
        let pieces = self.segment(x, y)?;
        let piece = pieces.iter().find(|p| p.domain.contains(lambda)).expect("segment pieces cover [0, 1]");
        let raw = piece.at(lambda);
        match self {
            MixtureSpace::Quotient(q) => q.canonical(&raw),
            _ => Ok(raw),
        }
    }

    /// Identity of carrier points; in a quotient this is indifference.
    pub fn points_equal(&self, a: &Point, b: &Point) -> Result<bool, SpaceError> {
        match self {
            MixtureSpace::Quotient(q) => Ok(q.base.compare(a, b)? == ComparisonOutcome::Equivalent),
            _ => Ok(a == b),
        }
    }

    /// Exact value `a + b√2` of a surd-interval point.
    pub fn surd_value(&self, p: &Point) -> Option<Surd> {
        match self {
            MixtureSpace::SurdInterval if p.dim() == 2 => Some(Surd::new(p.0[0], p.0[1])),
            _ => None,
        }
    }

    /// Mixture with an irrational weight, available on the surd interval only.
    pub fn mix_surd(&self, x: &Point, lambda: Surd, y: &Point) -> Result<Point, SpaceError> {
        let (Some(a), Some(b)) = (self.surd_value(x), self.surd_value(y)) else {
            return Err(SpaceError::Invalid(format!("{} has no irrational weights", self.name())));
        };
        if !lambda.is_unit() {
            return Err(SpaceError::Invalid(format!("weight {lambda} is outside [0, 1]")));
        }
        let v = lambda * a + lambda.complement() * b;
        Ok(Point(vec![v.a, v.b]))
    }
}

pub fn split_part(p: &Point) -> Option<SplitPart> {
    if p.dim() != 2 {
        return None;
    }
    let (x1, x2) = (p.0[0], p.0[1]);
    if x1.is_zero() && x2.is_unit() {
        Some(SplitPart::A)
    } else if x1.is_positive() && x1 <= Rational::ONE && x2.is_zero() {
        Some(SplitPart::B)
    } else {
        None
    }
}

/// Indifference classes over a finite universe with the induced mixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpace {
    pub base: Model,
    pub classes: Vec<Vec<Point>>,
}

impl QuotientSpace {
    pub fn representatives(&self) -> Vec<Point> {
        self.classes.iter().map(|c| c[0].clone()).collect()
    }

    /// Representative of the class of `p`, or `p` itself when it starts a new class.
    pub fn canonical(&self, p: &Point) -> Result<Point, SpaceError> {
        for class in &self.classes {
            if self.base.compare(&class[0], p)? == ComparisonOutcome::Equivalent {
                return Ok(class[0].clone());
            }
        }
        Ok(p.clone())
    }

    pub fn class_of(&self, p: &Point) -> Result<Option<usize>, SpaceError> {
        for (k, class) in self.classes.iter().enumerate() {
            if self.base.compare(&class[0], p)? == ComparisonOutcome::Equivalent {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("indifference is not an equivalence on the universe: {0}")]
    NotEquivalence(Witness),
    #[error("class mixture depends on representatives: {0}")]
    NotWellDefined(Witness),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl From<RelationError> for QuotientError {
    fn from(e: RelationError) -> Self {
        QuotientError::Space(e.into())
    }
}

/// Builds `M|∼` over `universe`. The returned model compares class
/// representatives with the base relation.
pub fn quotient(model: &Model, universe: &[Point], grid: &[Rational]) -> Result<Model, QuotientError> {
    let n = universe.len();
    let mut eq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            eq[i * n + j] = model.compare(&universe[i], &universe[j])? == ComparisonOutcome::Equivalent;
        }
    }
    for i in 0..n {
        if !eq[i * n + i] {
            return Err(QuotientError::NotEquivalence(Witness::new().point("x", &universe[i]).text("violates", "reflexivity")));
        }
        for j in 0..n {
            for k in 0..n {
                if eq[i * n + j] && eq[j * n + k] && !eq[i * n + k] {
                    return Err(QuotientError::NotEquivalence(
                        Witness::new()
                            .point("x", &universe[i])
                            .point("y", &universe[j])
                            .point("z", &universe[k])
                            .text("violates", "transitivity"),
                    ));
                }
            }
        }
    }
    let mut classes: Vec<Vec<Point>> = Vec::new();
    let mut owner: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        match (0..i).find(|&j| eq[j * n + i]) {
            Some(j) => {
                let k = owner[j];
                owner.push(k);
                if !classes[k].contains(&universe[i]) {
                    classes[k].push(universe[i].clone());
                }
            }
            None => {
                owner.push(classes.len());
                classes.push(vec![universe[i].clone()]);
            }
        }
    }
    // [x]λ[y] must not depend on the chosen members
    for cx in &classes {
        for cy in &classes {
            for &lambda in grid {
                let reference = model.space.mix(&cx[0], lambda, &cy[0])?;
                for x in cx {
                    for y in cy {
                        let m = model.space.mix(x, lambda, y)?;
                        if model.compare(&m, &reference)? != ComparisonOutcome::Equivalent {
                            return Err(QuotientError::NotWellDefined(
                                Witness::new()
                                    .point("x", x)
                                    .point("y", y)
                                    .point("x_rep", &cx[0])
                                    .point("y_rep", &cy[0])
                                    .weight("lambda", lambda),
                            ));
                        }
                    }
                }
            }
        }
    }
    let space = MixtureSpace::Quotient(Box::new(QuotientSpace { base: model.clone(), classes }));
    Ok(Model::new(space, crate::relations::RelationModel::QuotientDerived).expect("quotient model is well formed"))
}

fn with_endpoints(grid: &[Rational]) -> Vec<Rational> {
    let mut w: Vec<Rational> = grid.iter().copied().filter(|l| l.is_unit()).collect();
    w.push(Rational::ZERO);
    w.push(Rational::ONE);
    w.sort();
    w.dedup();
    w
}

/// S1–S4 with equality, or M1–M4 when `model` supplies the indifference.
pub fn check_mixture_axioms(
    space: &MixtureSpace,
    universe: &[Point],
    grid: &[Rational],
    model: Option<&Model>,
) -> Result<Vec<Verdict>, SpaceError> {
    let same = |a: &Point, b: &Point| -> Result<bool, SpaceError> {
        match model {
            Some(m) => Ok(m.compare(a, b)? == ComparisonOutcome::Equivalent),
            None => space.points_equal(a, b),
        }
    };
    let ids = if model.is_some() {
        [AxiomId::M1, AxiomId::M2, AxiomId::M3, AxiomId::M4]
    } else {
        [AxiomId::S1, AxiomId::S2, AxiomId::S3, AxiomId::S4]
    };
    let weights = with_endpoints(grid);
    let mut out = Vec::with_capacity(4);

    let pair = |x: &Point, y: &Point| Witness::new().point("x", x).point("y", y);

    let mut first: Option<Witness> = None;
    'one: for x in universe {
        for y in universe {
            if !same(&space.mix(x, Rational::ONE, y)?, x)? {
                first = Some(pair(x, y));
                break 'one;
            }
        }
    }
    out.push(conclude(ids[0], first));

    let mut first: Option<Witness> = None;
    'two: for x in universe {
        for y in universe {
            for &mu in &weights {
                if !same(&space.mix(x, mu, y)?, &space.mix(y, mu.complement(), x)?)? {
                    first = Some(pair(x, y).weight("mu", mu));
                    break 'two;
                }
            }
        }
    }
    out.push(conclude(ids[1], first));

    let mut first: Option<Witness> = None;
    'three: for x in universe {
        for y in universe {
            for &mu in &weights {
                let inner = space.mix(x, mu, y)?;
                for &lambda in &weights {
                    let lhs = space.mix(&inner, lambda, y)?;
                    let rhs = space.mix(x, lambda * mu, y)?;
                    if !same(&lhs, &rhs)? {
                        first = Some(pair(x, y).weight("lambda", lambda).weight("mu", mu));
                        break 'three;
                    }
                }
            }
        }
    }
    out.push(conclude(ids[2], first));

    let mut first: Option<Witness> = None;
    'four: for x in universe {
        for y in universe {
            for &lambda in &weights {
                let a = space.mix(x, lambda, y)?;
                for &beta in &weights {
                    let b = space.mix(x, beta, y)?;
                    for &mu in &weights {
                        let lhs = space.mix(&a, mu, &b)?;
                        let rhs = space.mix(x, mu * lambda + mu.complement() * beta, y)?;
                        if !same(&lhs, &rhs)? {
                            first = Some(pair(x, y).weight("lambda", lambda).weight("mu", mu).weight("beta", beta));
                            break 'four;
                        }
                    }
                }
            }
        }
    }
    out.push(conclude(ids[3], first));
    Ok(out)
}

fn conclude(axiom: AxiomId, failure: Option<Witness>) -> Verdict {
    match failure {
        Some(w) => Verdict::fails(axiom, w),
        None => Verdict::holds(axiom).with_note("on tested universe and weights"),
    }
}

/// The cancellation (C1) and associativity (C2) conditions.
pub fn check_c1_c2(space: &MixtureSpace, universe: &[Point], grid: &[Rational]) -> Result<Vec<Verdict>, SpaceError> {
    let interior: Vec<Rational> = grid.iter().copied().filter(|l| l.is_positive() && *l < Rational::ONE).collect();
    let mut c1: Option<Witness> = None;
    'c1: for x in universe {
        for y in universe {
            for y2 in universe {
                if space.points_equal(y, y2)? {
                    continue;
                }
                for &lambda in &interior {
                    if space.points_equal(&space.mix(x, lambda, y)?, &space.mix(x, lambda, y2)?)? {
                        c1 = Some(Witness::new().point("x", x).point("y", y).point("y_prime", y2).weight("lambda", lambda));
                        break 'c1;
                    }
                }
            }
        }
    }

    let weights = with_endpoints(grid);
    let mut c2: Option<Witness> = None;
    'c2: for x in universe {
        for y in universe {
            for z in universe {
                for &lambda in &weights {
                    let xy = space.mix(x, lambda, y)?;
                    for &mu in &weights {
                        let lm = lambda * mu;
                        if lm.is_one() {
                            continue;
                        }
                        let nu = mu * lambda.complement() / lm.complement();
                        let lhs = space.mix(&xy, mu, z)?;
                        let rhs = space.mix(x, lm, &space.mix(y, nu, z)?)?;
                        if !space.points_equal(&lhs, &rhs)? {
                            c2 = Some(
                                Witness::new()
                                    .point("x", x)
                                    .point("y", y)
                                    .point("z", z)
                                    .weight("lambda", lambda)
                                    .weight("mu", mu),
                            );
                            break 'c2;
                        }
                    }
                }
            }
        }
    }
    Ok(vec![conclude(AxiomId::C1, c1), conclude(AxiomId::C2, c2)])
}
