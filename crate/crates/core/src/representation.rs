//! Expected-utility representation by calibration along the anchor segment.
//!
//! With anchors `x̄ ≺ ȳ`, a point between them gets `û(z) = 1 - λ*` where
//! `λ* = min A∼(x̄, ȳ, z)`; points outside are placed by the unique value
//! that makes the mixture through the nearer anchor come out right.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::axioms::{pick, CheckError, Checker};
use crate::intervals::{Interval, SectionSet};
use crate::rational::Rational;
use crate::relations::{ComparisonOutcome, Model, RelationError, SectionKind};
use crate::spaces::{MixtureSpace, Point, SpaceError};
use crate::verdict::{AxiomId, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CalibrationCase {
    /// Below the lower anchor.
    #[serde(rename = "i")]
    Below,
    /// Between the anchors.
    #[serde(rename = "ii")]
    Between,
    /// Above the upper anchor.
    #[serde(rename = "iii")]
    Above,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub point: Point,
    pub case: CalibrationCase,
    pub lambda: Rational,
    pub utility: Rational,
    /// The indifference set on the calibration segment is not a single point.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub plateau: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityRepresentation {
    pub anchor_low: Point,
    pub anchor_high: Point,
    pub values: BTreeMap<Point, Rational>,
}

impl UtilityRepresentation {
    pub fn value(&self, p: &Point) -> Option<Rational> {
        self.values.get(p).copied()
    }

    /// For quotient models, the class value copied to every stored member.
    pub fn with_class_members(&self, model: &Model) -> Result<UtilityRepresentation, SpaceError> {
        let mut out = self.clone();
        if let MixtureSpace::Quotient(q) = &model.space {
            for class in &q.classes {
                let rep = q.canonical(&class[0])?;
                if let Some(v) = self.value(&rep) {
                    for member in class {
                        out.values.insert(member.clone(), v);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for UtilityRepresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shape<'a> {
            anchor_low: &'a Point,
            anchor_high: &'a Point,
            values: Values<'a>,
        }
        struct Values<'a>(&'a BTreeMap<Point, Rational>);
        impl Serialize for Values<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (p, v) in self.0 {
                    map.serialize_entry(&p.to_string(), v)?;
                }
                map.end()
            }
        }
        Shape { anchor_low: &self.anchor_low, anchor_high: &self.anchor_high, values: Values(&self.values) }
            .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Calibration {
    pub representation: UtilityRepresentation,
    pub trace: Vec<TraceEntry>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("hypothesis `{}` does not hold on the universe", .0.axiom)]
    Hypothesis(Box<Verdict>),
    #[error("anchors are not strictly ordered: {low} is not below {high}")]
    AnchorsNotOrdered { low: Point, high: Point },
    #[error("anchor index {0} is outside the universe")]
    AnchorIndex(usize),
    #[error("no indifferent mixture for {point} in case {case:?}; the verified hypotheses are inconsistent with the oracle")]
    EmptyIndifference { point: Point, case: CalibrationCase },
    #[error("{point} is incomparable with an anchor")]
    Incomparable { point: Point },
    #[error(transparent)]
    Check(#[from] CheckError),
}

impl From<RelationError> for RepresentationError {
    fn from(e: RelationError) -> Self {
        RepresentationError::Check(e.into())
    }
}

impl From<SpaceError> for RepresentationError {
    fn from(e: SpaceError) -> Self {
        RepresentationError::Check(e.into())
    }
}

/// Calibrates every universe point against `points[low] ≺ points[high]`.
pub fn calibrate(checker: &Checker, low: usize, high: usize) -> Result<Calibration, RepresentationError> {
    for id in [AxiomId::Complete, AxiomId::Transitive, AxiomId::MixtureContinuous] {
        let v = checker.check(id)?;
        if !v.status.passes() {
            return Err(RepresentationError::Hypothesis(Box::new(v)));
        }
    }
    let pts = checker.points();
    let (Some(xl), Some(xh)) = (pts.get(low), pts.get(high)) else {
        return Err(RepresentationError::AnchorIndex(low.max(high)));
    };
    let model = checker.model();
    if model.compare(xl, xh)? != ComparisonOutcome::Worse {
        return Err(RepresentationError::AnchorsNotOrdered { low: xl.clone(), high: xh.clone() });
    }
    let mut values = BTreeMap::new();
    let mut trace = Vec::with_capacity(pts.len());
    let mut warnings = Vec::new();
    for z in pts {
        let entry = calibrate_point(model, xl, xh, z)?;
        if entry.plateau {
            warnings.push(format!("indifference plateau on the calibration segment for {z}"));
        }
        values.insert(z.clone(), entry.utility);
        trace.push(entry);
    }
    Ok(Calibration {
        representation: UtilityRepresentation { anchor_low: xl.clone(), anchor_high: xh.clone(), values },
        trace,
        warnings,
    })
}

/// The calibrated value of one point.
pub fn calibrate_point(model: &Model, low: &Point, high: &Point, z: &Point) -> Result<TraceEntry, RepresentationError> {
    let against_low = model.compare(z, low)?;
    let against_high = model.compare(z, high)?;
    if against_low == ComparisonOutcome::Incomparable || against_high == ComparisonOutcome::Incomparable {
        return Err(RepresentationError::Incomparable { point: z.clone() });
    }
    let open = SectionSet::from_interval(Interval::open(Rational::ZERO, Rational::ONE));
    let (case, set) = if against_low == ComparisonOutcome::Worse {
        (CalibrationCase::Below, model.section(z, high, low, SectionKind::Indifferent)?.intersect(&open))
    } else if against_high == ComparisonOutcome::Better {
        (CalibrationCase::Above, model.section(low, z, high, SectionKind::Indifferent)?.intersect(&open))
    } else {
        (CalibrationCase::Between, model.section(low, high, z, SectionKind::Indifferent)?)
    };
    let lambda = match case {
        CalibrationCase::Between => set.min(),
        _ => pick(&set),
    }
    .ok_or_else(|| RepresentationError::EmptyIndifference { point: z.clone(), case })?;
    let utility = match case {
        CalibrationCase::Between => lambda.complement(),
        // 0 = λ·û(z) + (1-λ)·1
        CalibrationCase::Below => -(lambda.complement() / lambda),
        // 1 = λ·0 + (1-λ)·û(z)
        CalibrationCase::Above => lambda.complement().recip(),
    };
    let plateau = !(set.component_count() == 1 && set.intervals()[0].is_point());
    Ok(TraceEntry { point: z.clone(), case, lambda, utility, plateau })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub order_agreement: bool,
    pub mixture_preservation: bool,
    pub pairs_checked: usize,
    pub mixtures_checked: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Witness>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.order_agreement && self.mixture_preservation
    }
}

/// Order agreement on every pair and exact mixture preservation for every
/// pair and grid weight; mixed points outside the table are calibrated on demand.
pub fn verify_representation(
    model: &Model,
    repr: &UtilityRepresentation,
    universe: &[Point],
    grid: &[Rational],
) -> Result<VerificationReport, CheckError> {
    let mut failures = Vec::new();
    let mut order_agreement = true;
    let mut mixture_preservation = true;
    let mut pairs = 0;
    let mut mixtures = 0;
    let value = |p: &Point| -> Result<Option<Rational>, CheckError> {
        if let Some(v) = repr.value(p) {
            return Ok(Some(v));
        }
        match calibrate_point(model, &repr.anchor_low, &repr.anchor_high, p) {
            Ok(e) => Ok(Some(e.utility)),
            Err(RepresentationError::Check(e)) => Err(e),
            Err(_) => Ok(None),
        }
    };
    let known: Vec<(&Point, Rational)> = universe.iter().filter_map(|p| repr.value(p).map(|v| (p, v))).collect();
    for (x, ux) in &known {
        for (y, uy) in &known {
            pairs += 1;
            let expect = match ux.cmp(uy) {
                std::cmp::Ordering::Greater => ComparisonOutcome::Better,
                std::cmp::Ordering::Less => ComparisonOutcome::Worse,
                std::cmp::Ordering::Equal => ComparisonOutcome::Equivalent,
            };
            let actual = model.compare(x, y)?;
            if actual != expect {
                order_agreement = false;
                failures.push(Witness::new().point("x", x).point("y", y).text("relation", actual.symbol()).text("utility", expect.symbol()));
            }
        }
    }
    for (x, ux) in &known {
        for (y, uy) in &known {
            for &lambda in grid {
                mixtures += 1;
                let m = model.space.mix(x, lambda, y)?;
                let expect = lambda * *ux + lambda.complement() * *uy;
                match value(&m)? {
                    Some(v) if v == expect => {}
                    got => {
                        mixture_preservation = false;
                        let mut w = Witness::new().point("x", x).point("y", y).weight("lambda", lambda).weight("expected", expect);
                        if let Some(v) = got {
                            w = w.weight("got", v);
                        }
                        failures.push(w);
                    }
                }
            }
        }
    }
    Ok(VerificationReport {
        order_agreement,
        mixture_preservation,
        pairs_checked: pairs,
        mixtures_checked: mixtures,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::Universe;
    use crate::rational::q;
    use crate::relations::RelationModel;

    fn eu3() -> (Model, Checker) {
        let u = vec![q(0, 1), q(1, 1), q(2, 1)];
        let m = Model::new(MixtureSpace::simplex(2), RelationModel::MultiUtility { utilities: vec![u] }).unwrap();
        let c = Checker::new(&m, &Universe::new((0..3).map(|i| Point::vertex(3, i)).collect())).unwrap();
        (m, c)
    }

    #[test]
    fn calibrates_middle_vertex() {
        let (m, c) = eu3();
        let cal = calibrate(&c, 0, 2).unwrap();
        let r = &cal.representation;
        assert_eq!(r.value(&Point::vertex(3, 0)), Some(q(0, 1)));
        assert_eq!(r.value(&Point::vertex(3, 2)), Some(q(1, 1)));
        assert_eq!(r.value(&Point::vertex(3, 1)), Some(q(1, 2)));
        assert!(cal.warnings.is_empty());
        let report = verify_representation(&m, r, c.points(), c.grid()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn outer_cases_extend_linearly() {
        let (m, c) = eu3();
        // anchors e2 (u=1) and e3 (u=2): e1 falls below
        let cal = calibrate(&c, 1, 2).unwrap();
        let e1 = cal.trace.iter().find(|t| t.point == Point::vertex(3, 0)).unwrap();
        assert_eq!(e1.case, CalibrationCase::Below);
        assert_eq!(e1.utility, q(-1, 1));
        let cal = calibrate(&c, 0, 1).unwrap();
        let e3 = cal.trace.iter().find(|t| t.point == Point::vertex(3, 2)).unwrap();
        assert_eq!(e3.case, CalibrationCase::Above);
        assert_eq!(e3.utility, q(2, 1));
        assert!(verify_representation(&m, &cal.representation, c.points(), c.grid()).unwrap().passed());
    }

    #[test]
    fn anchors_must_be_ordered() {
        let (_, c) = eu3();
        assert!(matches!(calibrate(&c, 0, 0), Err(RepresentationError::AnchorsNotOrdered { .. })));
        assert!(matches!(calibrate(&c, 2, 0), Err(RepresentationError::AnchorsNotOrdered { .. })));
    }
}
