//! Relations: a pairwise comparator together with an exact segment oracle.
//!
//! The oracle answers, for a triple `(x, y, z)`, the two sets of weights
//! `{λ | xλy ⪰ z}` and `{λ | z ⪰ xλy}`. Every other section set is a Boolean
//! combination of those two, see [`LabeledPartition`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intervals::{Interval, SectionSet};
use crate::rational::Rational;
use crate::spaces::{MixtureSpace, Piece, Point, SpaceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonOutcome {
    Better,
    Worse,
    Equivalent,
    Incomparable,
}

impl ComparisonOutcome {
    /// From the two primitive facts `x ⪰ y` and `y ⪰ x`.
    pub fn from_weak(ge: bool, le: bool) -> Self {
        match (ge, le) {
            (true, false) => ComparisonOutcome::Better,
            (false, true) => ComparisonOutcome::Worse,
            (true, true) => ComparisonOutcome::Equivalent,
            (false, false) => ComparisonOutcome::Incomparable,
        }
    }

    pub fn converse(self) -> Self {
        match self {
            ComparisonOutcome::Better => ComparisonOutcome::Worse,
            ComparisonOutcome::Worse => ComparisonOutcome::Better,
            other => other,
        }
    }

    /// `x ⪰ y`.
    pub fn weakly_better(self) -> bool {
        matches!(self, ComparisonOutcome::Better | ComparisonOutcome::Equivalent)
    }

    /// `y ⪰ x`.
    pub fn weakly_worse(self) -> bool {
        matches!(self, ComparisonOutcome::Worse | ComparisonOutcome::Equivalent)
    }

    pub fn label(self) -> Label {
        match self {
            ComparisonOutcome::Better => Label::StrictAbove,
            ComparisonOutcome::Worse => Label::StrictBelow,
            ComparisonOutcome::Equivalent => Label::Indifferent,
            ComparisonOutcome::Incomparable => Label::Incomparable,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ComparisonOutcome::Better => "≻",
            ComparisonOutcome::Worse => "≺",
            ComparisonOutcome::Equivalent => "∼",
            ComparisonOutcome::Incomparable => "⋈",
        }
    }
}

/// How `xλy` compares with `z` at one weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    StrictAbove,
    StrictBelow,
    Indifferent,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectionKind {
    #[serde(rename = "ge")]
    WeakAbove,
    #[serde(rename = "le")]
    WeakBelow,
    #[serde(rename = "gt")]
    StrictAbove,
    #[serde(rename = "lt")]
    StrictBelow,
    #[serde(rename = "sim")]
    Indifferent,
    #[serde(rename = "bowtie")]
    Incomparable,
}

impl SectionKind {
    pub const ALL: [SectionKind; 6] = [
        SectionKind::WeakAbove,
        SectionKind::WeakBelow,
        SectionKind::StrictAbove,
        SectionKind::StrictBelow,
        SectionKind::Indifferent,
        SectionKind::Incomparable,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SectionKind::WeakAbove => "ge",
            SectionKind::WeakBelow => "le",
            SectionKind::StrictAbove => "gt",
            SectionKind::StrictBelow => "lt",
            SectionKind::Indifferent => "sim",
            SectionKind::Incomparable => "bowtie",
        }
    }
}

impl FromStr for SectionKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ge" | "⪰" | ">=" => SectionKind::WeakAbove,
            "le" | "⪯" | "<=" => SectionKind::WeakBelow,
            "gt" | "≻" | ">" => SectionKind::StrictAbove,
            "lt" | "≺" | "<" => SectionKind::StrictBelow,
            "sim" | "∼" | "~" => SectionKind::Indifferent,
            "bowtie" | "⋈" => SectionKind::Incomparable,
            other => return Err(format!("unknown section kind `{other}`")),
        })
    }
}

/// Exact partition of `[0, 1]` by the label of `xλy` against `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledPartition {
    pub above: SectionSet,
    pub below: SectionSet,
    pub indifferent: SectionSet,
    pub incomparable: SectionSet,
}

impl LabeledPartition {
    pub fn from_weak(ge: &SectionSet, le: &SectionSet) -> Self {
        let indifferent = ge.intersect(le);
        LabeledPartition {
            above: ge.difference(le),
            below: le.difference(ge),
            incomparable: ge.union(le).complement(),
            indifferent,
        }
    }

    pub fn weak_above(&self) -> SectionSet {
        self.above.union(&self.indifferent)
    }

    pub fn weak_below(&self) -> SectionSet {
        self.below.union(&self.indifferent)
    }

    pub fn section(&self, kind: SectionKind) -> SectionSet {
        match kind {
            SectionKind::WeakAbove => self.weak_above(),
            SectionKind::WeakBelow => self.weak_below(),
            SectionKind::StrictAbove => self.above.clone(),
            SectionKind::StrictBelow => self.below.clone(),
            SectionKind::Indifferent => self.indifferent.clone(),
            SectionKind::Incomparable => self.incomparable.clone(),
        }
    }

    pub fn set(&self, label: Label) -> &SectionSet {
        match label {
            Label::StrictAbove => &self.above,
            Label::StrictBelow => &self.below,
            Label::Indifferent => &self.indifferent,
            Label::Incomparable => &self.incomparable,
        }
    }

    pub fn label_at(&self, lambda: Rational) -> Option<Label> {
        [Label::StrictAbove, Label::StrictBelow, Label::Indifferent, Label::Incomparable]
            .into_iter()
            .find(|l| self.set(*l).contains(lambda))
    }

    /// Pieces sorted by position.
    pub fn pieces(&self) -> Vec<(Interval, Label)> {
        let mut out: Vec<(Interval, Label)> = Vec::new();
        for label in [Label::StrictAbove, Label::StrictBelow, Label::Indifferent, Label::Incomparable] {
            out.extend(self.set(label).intervals().iter().map(|i| (*i, label)));
        }
        out.sort_by(|a, b| a.0.lo().cmp(&b.0.lo()).then(b.0.lo_closed().cmp(&a.0.lo_closed())));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Op {
    fn holds(self, v: Rational) -> bool {
        match self {
            Op::Ge => !v.is_negative(),
            Op::Gt => v.is_positive(),
            Op::Eq => v.is_zero(),
            Op::Le => !v.is_positive(),
            Op::Lt => v.is_negative(),
        }
    }
}

/// `coeffs·p + constant  op  0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub op: Op,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, constant: Rational, op: Op) -> Self {
        Constraint { coeffs, constant, op }
    }

    /// `p[axis] op value`.
    pub fn coord(dim: usize, axis: usize, op: Op, value: Rational) -> Self {
        let mut coeffs = vec![Rational::ZERO; dim];
        coeffs[axis] = Rational::ONE;
        Constraint { coeffs, constant: -value, op }
    }

    pub fn holds(&self, p: &Point) -> bool {
        self.op.holds(p.dot(&self.coeffs) + self.constant)
    }

    /// Weights on `piece` at which the constraint holds.
    pub fn solve(&self, piece: &Piece) -> SectionSet {
        let (a, b) = piece.linear_form(&self.coeffs, self.constant);
        solve_affine(a, b, self.op).intersect(&SectionSet::from_interval(piece.domain))
    }
}

/// `{λ ∈ [0,1] | a + bλ op 0}`.
pub fn solve_affine(a: Rational, b: Rational, op: Op) -> SectionSet {
    if b.is_zero() {
        return if op.holds(a) { SectionSet::full() } else { SectionSet::empty() };
    }
    let root = -a / b;
    let below = Rational::integer(-1);
    let above = Rational::integer(2);
    let upward = match op {
        Op::Ge | Op::Gt => b.is_positive(),
        Op::Le | Op::Lt => b.is_negative(),
        Op::Eq => {
            return if root.is_unit() { SectionSet::point(root) } else { SectionSet::empty() };
        }
    };
    let closed = matches!(op, Op::Ge | Op::Le);
    let interval = if upward {
        Interval::clipped(root, above, closed, true)
    } else {
        Interval::clipped(below, root, true, closed)
    };
    interval.map(SectionSet::from_interval).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub constraints: Vec<Constraint>,
}

impl Cell {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        Cell { constraints }
    }

    fn contains(&self, p: &Point) -> bool {
        self.constraints.iter().all(|c| c.holds(p))
    }

    fn solve(&self, piece: &Piece) -> SectionSet {
        let mut set = SectionSet::from_interval(piece.domain);
        for c in &self.constraints {
            set = set.intersect(&c.solve(piece));
            if set.is_empty() {
                break;
            }
        }
        set
    }
}

/// A union of polyhedral cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zone {
    pub name: String,
    pub cells: Vec<Cell>,
}

impl Zone {
    pub fn new(name: &str, cells: Vec<Cell>) -> Self {
        Zone { name: name.to_string(), cells }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    fn solve(&self, piece: &Piece) -> SectionSet {
        self.cells.iter().fold(SectionSet::empty(), |acc, c| acc.union(&c.solve(piece)))
    }
}

/// A relation that is constant on the cells of a zone partition, plus the
/// diagonal when reflexive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneRelation {
    pub id: String,
    pub zones: Vec<Zone>,
    /// `table[a][b]` compares a point of zone `a` with a point of zone `b`.
    pub table: Vec<Vec<ComparisonOutcome>>,
    pub reflexive: bool,
}

impl ZoneRelation {
    fn validate(&self, dim: usize) -> Result<(), RelationError> {
        let n = self.zones.len();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(RelationError::Invalid(format!("{}: table is not {n}×{n}", self.id)));
        }
        for a in 0..n {
            for b in 0..n {
                if self.table[a][b].converse() != self.table[b][a] {
                    return Err(RelationError::Invalid(format!("{}: table entry ({a},{b}) is not converse-consistent", self.id)));
                }
            }
        }
        for z in &self.zones {
            for c in &z.cells {
                if c.constraints.iter().any(|k| k.coeffs.len() != dim) {
                    return Err(RelationError::Invalid(format!("{}: zone {} has wrong arity", self.id, z.name)));
                }
            }
        }
        Ok(())
    }

    pub fn zone_of(&self, p: &Point) -> Result<usize, RelationError> {
        self.zones.iter().position(|z| z.contains(p)).ok_or_else(|| RelationError::Unzoned(p.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointwiseRule {
    /// Rationals are mutually indifferent, irrationals likewise, and every
    /// rational is strictly preferred to every irrational.
    RationalOverIrrational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationModel {
    /// `x ⪰ y` iff `uⁱ·x ≥ uⁱ·y` for every utility vector.
    MultiUtility { utilities: Vec<Vec<Rational>> },
    Piecewise(ZoneRelation),
    /// The relation of the base model carried to its quotient space.
    QuotientDerived,
    /// Comparator only; sections are not finite interval unions.
    PointwiseOnly(PointwiseRule),
}

impl RelationModel {
    pub fn kind(&self) -> &'static str {
        match self {
            RelationModel::MultiUtility { .. } => "multi_utility",
            RelationModel::Piecewise(_) => "piecewise",
            RelationModel::QuotientDerived => "quotient",
            RelationModel::PointwiseOnly(_) => "pointwise",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("relation has no segment oracle; its sections are not finite interval unions")]
    NotRepresentable,
    #[error("point {0} lies in no zone of the relation")]
    Unzoned(Point),
    #[error("invalid relation: {0}")]
    Invalid(String),
}

/// A relation bound to its carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub space: MixtureSpace,
    pub relation: RelationModel,
}

impl Model {
    pub fn new(space: MixtureSpace, relation: RelationModel) -> Result<Self, RelationError> {
        let dim = space.coordinate_count();
        match &relation {
            RelationModel::MultiUtility { utilities } => {
                if matches!(space, MixtureSpace::SurdInterval | MixtureSpace::Quotient(_)) {
                    return Err(RelationError::Invalid(format!("multi-utility relation on {}", space.name())));
                }
                if utilities.is_empty() || utilities.iter().any(|u| u.len() != dim) {
                    return Err(RelationError::Invalid(format!("utility vectors must have {dim} entries")));
                }
            }
            RelationModel::Piecewise(z) => {
                if matches!(space, MixtureSpace::Quotient(_)) {
                    return Err(RelationError::Invalid("piecewise relation on a quotient".into()));
                }
                z.validate(dim)?
            }
            RelationModel::QuotientDerived => {
                if !matches!(space, MixtureSpace::Quotient(_)) {
                    return Err(RelationError::Invalid("quotient relation needs a quotient space".into()));
                }
            }
            RelationModel::PointwiseOnly(PointwiseRule::RationalOverIrrational) => {
                if space != MixtureSpace::SurdInterval {
                    return Err(RelationError::Invalid("rational/irrational rule needs the surd interval".into()));
                }
            }
        }
        Ok(Model { space, relation })
    }

    pub fn has_segment_oracle(&self) -> bool {
        match (&self.relation, &self.space) {
            (RelationModel::PointwiseOnly(_), _) => false,
            (RelationModel::QuotientDerived, MixtureSpace::Quotient(q)) => q.base.has_segment_oracle(),
            _ => true,
        }
    }

    /// The model whose relation answers comparisons (the base for quotients).
    fn base(&self) -> &Model {
        match (&self.relation, &self.space) {
            (RelationModel::QuotientDerived, MixtureSpace::Quotient(q)) => q.base.base(),
            _ => self,
        }
    }

    pub fn compare(&self, x: &Point, y: &Point) -> Result<ComparisonOutcome, RelationError> {
        self.space.check_point(x)?;
        self.space.check_point(y)?;
        let base = self.base();
        Ok(match &base.relation {
            RelationModel::MultiUtility { utilities } => {
                let (mut ge, mut le) = (true, true);
                for u in utilities {
                    let d = x.dot(u) - y.dot(u);
                    ge &= !d.is_negative();
                    le &= !d.is_positive();
                }
                ComparisonOutcome::from_weak(ge, le)
            }
            RelationModel::Piecewise(z) => {
                if z.reflexive && x == y {
                    ComparisonOutcome::Equivalent
                } else {
                    z.table[z.zone_of(x)?][z.zone_of(y)?]
                }
            }
            RelationModel::PointwiseOnly(PointwiseRule::RationalOverIrrational) => {
                let rx = base.space.surd_value(x).expect("surd point").is_rational();
                let ry = base.space.surd_value(y).expect("surd point").is_rational();
                ComparisonOutcome::from_weak(rx || !ry, ry || !rx)
            }
            RelationModel::QuotientDerived => unreachable!("base of a quotient is never a quotient"),
        })
    }

    /// `(A⪰, A⪯)` restricted to one affine piece.
    fn weak_sets(&self, piece: &Piece, z: &Point) -> Result<(SectionSet, SectionSet), RelationError> {
        let base = self.base();
        match &base.relation {
            RelationModel::MultiUtility { utilities } => {
                let mut ge = SectionSet::from_interval(piece.domain);
                let mut le = ge.clone();
                for u in utilities {
                    let (a, b) = piece.linear_form(u, -z.dot(u));
                    ge = ge.intersect(&solve_affine(a, b, Op::Ge));
                    le = le.intersect(&solve_affine(a, b, Op::Le));
                }
                Ok((ge, le))
            }
            RelationModel::Piecewise(rel) => {
                let target = rel.zone_of(z)?;
                let (mut ge, mut le) = (SectionSet::empty(), SectionSet::empty());
                let mut covered = SectionSet::empty();
                for (k, zone) in rel.zones.iter().enumerate() {
                    let s = zone.solve(piece);
                    covered = covered.union(&s);
                    let outcome = rel.table[k][target];
                    if outcome.weakly_better() {
                        ge = ge.union(&s);
                    }
                    if outcome.weakly_worse() {
                        le = le.union(&s);
                    }
                }
                if covered != SectionSet::from_interval(piece.domain) {
                    return Err(RelationError::Invalid(format!("{}: zones do not cover the segment", rel.id)));
                }
                if rel.reflexive {
                    let diag = piece.hits(z);
                    ge = ge.union(&diag);
                    le = le.union(&diag);
                }
                Ok((ge, le))
            }
            RelationModel::PointwiseOnly(_) => Err(RelationError::NotRepresentable),
            RelationModel::QuotientDerived => unreachable!("base of a quotient is never a quotient"),
        }
    }

    pub fn classify_segment(&self, x: &Point, y: &Point, z: &Point) -> Result<LabeledPartition, RelationError> {
        if !self.has_segment_oracle() {
            return Err(RelationError::NotRepresentable);
        }
        self.space.check_point(z)?;
        let (mut ge, mut le) = (SectionSet::empty(), SectionSet::empty());
        for piece in self.space.segment(x, y)? {
            let (g, l) = self.weak_sets(&piece, z)?;
            ge = ge.union(&g);
            le = le.union(&l);
        }
        Ok(LabeledPartition::from_weak(&ge, &le))
    }

    pub fn section(&self, x: &Point, y: &Point, z: &Point, kind: SectionKind) -> Result<SectionSet, RelationError> {
        Ok(self.classify_segment(x, y, z)?.section(kind))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.relation.kind(), self.space.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn eu3() -> Model {
        Model::new(MixtureSpace::simplex(2), RelationModel::MultiUtility { utilities: vec![vec![q(0, 1), q(1, 1), q(2, 1)]] })
            .unwrap()
    }

    #[test]
    fn outcome_from_primitive_facts() {
        assert_eq!(ComparisonOutcome::from_weak(true, false), ComparisonOutcome::Better);
        assert_eq!(ComparisonOutcome::from_weak(false, false), ComparisonOutcome::Incomparable);
        assert_eq!(ComparisonOutcome::Better.converse(), ComparisonOutcome::Worse);
    }

    #[test]
    fn affine_solver() {
        assert_eq!(solve_affine(q(-1, 2), q(1, 1), Op::Ge).intervals(), &[Interval::closed(q(1, 2), q(1, 1))]);
        assert_eq!(solve_affine(q(-1, 2), q(1, 1), Op::Lt).intervals(), &[Interval::closed_open(q(0, 1), q(1, 2))]);
        assert!(solve_affine(q(1, 1), q(0, 1), Op::Ge).is_full());
        assert!(solve_affine(q(3, 1), q(1, 1), Op::Eq).is_empty());
        assert_eq!(solve_affine(q(1, 1), q(-2, 1), Op::Eq), SectionSet::point(q(1, 2)));
    }

    #[test]
    fn single_utility_segment() {
        let m = eu3();
        let (e1, e2, e3) = (Point::vertex(3, 0), Point::vertex(3, 1), Point::vertex(3, 2));
        let part = m.classify_segment(&e1, &e3, &e2).unwrap();
        assert_eq!(part.indifferent, SectionSet::point(q(1, 2)));
        assert_eq!(part.above.intervals(), &[Interval::closed_open(q(0, 1), q(1, 2))]);
        assert_eq!(part.below.intervals(), &[Interval::open_closed(q(1, 2), q(1, 1))]);
        assert!(part.incomparable.is_empty());
        let full = m.classify_segment(&e1, &e1, &e1).unwrap();
        assert!(full.indifferent.is_full());
    }

    #[test]
    fn endpoint_consistency_and_symmetry() {
        let m = Model::new(
            MixtureSpace::simplex(2),
            RelationModel::MultiUtility { utilities: vec![vec![q(2, 1), q(1, 1), q(0, 1)], vec![q(1, 1), q(0, 1), q(2, 1)]] },
        )
        .unwrap();
        let pts = [Point::vertex(3, 0), Point::vertex(3, 1), Point::vertex(3, 2), Point::new(vec![q(1, 3), q(1, 3), q(1, 3)])];
        for x in &pts {
            for y in &pts {
                for z in &pts {
                    let part = m.classify_segment(x, y, z).unwrap();
                    assert_eq!(part.label_at(Rational::ONE), Some(m.compare(x, z).unwrap().label()));
                    assert_eq!(part.label_at(Rational::ZERO), Some(m.compare(y, z).unwrap().label()));
                    let mirror = m.classify_segment(y, x, z).unwrap();
                    for k in 0..=20 {
                        let l = q(k, 20);
                        assert_eq!(part.label_at(l), mirror.label_at(l.complement()));
                    }
                }
            }
        }
    }

    #[test]
    fn partition_pieces_cover() {
        let m = eu3();
        let part = m.classify_segment(&Point::vertex(3, 0), &Point::vertex(3, 2), &Point::vertex(3, 1)).unwrap();
        let pieces = part.pieces();
        assert_eq!(pieces.len(), 3);
        assert_eq!(pieces[1], (Interval::point(q(1, 2)), Label::Indifferent));
        let union = SectionSet::normalize(pieces.iter().map(|p| p.0));
        assert!(union.is_full());
    }

    #[test]
    fn model_validation() {
        assert!(Model::new(MixtureSpace::simplex(2), RelationModel::MultiUtility { utilities: vec![vec![q(1, 1)]] }).is_err());
        assert!(Model::new(MixtureSpace::simplex(2), RelationModel::QuotientDerived).is_err());
        assert!(Model::new(MixtureSpace::Split, RelationModel::PointwiseOnly(PointwiseRule::RationalOverIrrational)).is_err());
    }

    #[test]
    fn pointwise_rule() {
        let m = Model::new(MixtureSpace::SurdInterval, RelationModel::PointwiseOnly(PointwiseRule::RationalOverIrrational)).unwrap();
        let r = Point::new(vec![q(1, 2), q(0, 1)]);
        let i = Point::new(vec![q(0, 1), q(1, 2)]);
        assert_eq!(m.compare(&r, &i).unwrap(), ComparisonOutcome::Better);
        assert_eq!(m.compare(&i, &i).unwrap(), ComparisonOutcome::Equivalent);
        assert!(matches!(m.classify_segment(&r, &i, &r), Err(RelationError::NotRepresentable)));
    }
}
