//! The worked examples as fixtures with expected verdicts.

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{verify_witness, CheckError, Checker, Universe};
use crate::rational::Rational;
use crate::relations::{Cell, ComparisonOutcome, Constraint, Model, Op, PointwiseRule, RelationModel, Zone, ZoneRelation};
use crate::representation::{calibrate, verify_representation};
use crate::spaces::{quotient, MixtureSpace, Point, QuotientError};
use crate::theorems::{run_all, HarnessReport, TheoremId};
use crate::verdict::{AxiomId, Status, Verdict};

pub const IDS: [&str; 10] = [
    "star_cvx_not_cvx",
    "split_hm",
    "fragile_unit",
    "flimsy_0_3",
    "appx1",
    "appx2",
    "appx3",
    "appx4_rationals",
    "pareto2",
    "eu3",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedTheorem {
    pub theorem: TheoremId,
    pub applicable: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub model: Model,
    pub universe: Universe,
    pub expectations: Vec<(AxiomId, Status)>,
    pub theorems: Vec<ExpectedTheorem>,
    /// Universe indices `(low, high)` for calibration.
    pub anchors: Option<(usize, usize)>,
    /// Represent through the indifference quotient.
    pub quotient: bool,
    pub notes: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn scalar(n: i128, d: i128) -> Point {
    Point::scalar(r(n, d))
}

fn pt(c: &[(i128, i128)]) -> Point {
    Point::new(c.iter().map(|&(n, d)| r(n, d)).collect())
}

fn ints(v: &[i128]) -> Vec<Rational> {
    v.iter().map(|&k| Rational::integer(k)).collect()
}

fn vertices(n: usize) -> Vec<Point> {
    (0..n).map(|i| Point::vertex(n, i)).collect()
}

/// `p[axis] op value` on a carrier with `dim` coordinates.
fn on(dim: usize, axis: usize, op: Op, value: Rational) -> Constraint {
    Constraint::coord(dim, axis, op, value)
}

fn zone(name: &str, cells: Vec<Vec<Constraint>>) -> Zone {
    Zone::new(name, cells.into_iter().map(Cell::new).collect())
}

/// Table from the strict pairs `(better, worse)` and the indifferent pairs;
/// every other entry is incomparable.
fn table(n: usize, strict: &[(usize, usize)], indifferent: &[usize]) -> Vec<Vec<ComparisonOutcome>> {
    let mut t = vec![vec![ComparisonOutcome::Incomparable; n]; n];
    for &(a, b) in strict {
        t[a][b] = ComparisonOutcome::Better;
        t[b][a] = ComparisonOutcome::Worse;
    }
    for &a in indifferent {
        t[a][a] = ComparisonOutcome::Equivalent;
    }
    t
}

fn piecewise(id: &str, space: MixtureSpace, zones: Vec<Zone>, table: Vec<Vec<ComparisonOutcome>>) -> Model {
    let rel = ZoneRelation { id: id.to_string(), zones, table, reflexive: true };
    Model::new(space, RelationModel::Piecewise(rel)).expect("catalog relation is well formed")
}

fn multi(space: MixtureSpace, utilities: Vec<Vec<Rational>>) -> Model {
    Model::new(space, RelationModel::MultiUtility { utilities }).expect("catalog relation is well formed")
}

fn unit() -> MixtureSpace {
    MixtureSpace::interval(Rational::ZERO, Rational::ONE).expect("unit interval")
}

/// The relation of a catalog entry, for model files that refer to it by id.
pub fn relation(id: &str) -> Result<Model, CatalogError> {
    Ok(load_entry(id)?.model)
}

pub fn load_entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    use AxiomId::*;
    use Status::*;
    let one = Rational::ONE;
    let half = r(1, 2);
    let entry = match id {
        "appx1" => CatalogEntry {
            id: "appx1",
            // 1 ≻ x for every x < 1; nothing else is comparable
            model: piecewise(
                id,
                unit(),
                vec![zone("low", vec![vec![on(1, 0, Op::Lt, one)]]), zone("top", vec![vec![on(1, 0, Op::Eq, one)]])],
                table(2, &[(1, 0)], &[1]),
            ),
            universe: Universe::new(vec![scalar(1, 1), scalar(1, 2), scalar(1, 4), scalar(0, 1)]),
            expectations: vec![
                (Reflexive, Holds),
                (Complete, Fails),
                (Nontrivial, Holds),
                (Transitive, Holds),
                (MixtureContinuous, Holds),
                (Archimedean, Fails),
                (StrongArchimedean, Fails),
                (OpenStrictSections, Fails),
                (OpenIncomparableSections, Holds),
                (Fragile, Holds),
            ],
            theorems: vec![
                ExpectedTheorem { theorem: TheoremId::T1, applicable: false },
                ExpectedTheorem { theorem: TheoremId::P1, applicable: true },
            ],
            anchors: None,
            quotient: false,
            notes: "unit interval; the top point is strictly preferred to every other point and no other pair is comparable",
        },
        "appx2" => CatalogEntry {
            id: "appx2",
            // indifference on [0, 1/2), incomparability elsewhere; reflexive on the diagonal
            model: piecewise(
                id,
                unit(),
                vec![zone("low", vec![vec![on(1, 0, Op::Lt, half)]]), zone("high", vec![vec![on(1, 0, Op::Ge, half)]])],
                table(2, &[], &[0]),
            ),
            universe: Universe::new(vec![scalar(1, 1), scalar(0, 1), scalar(1, 2), scalar(1, 4)]),
            expectations: vec![
                (Reflexive, Holds),
                (Complete, Fails),
                (Nontrivial, Fails),
                (MixtureContinuous, Fails),
                (StrongArchimedean, Holds),
                (OpenIncomparableSections, Fails),
            ],
            theorems: vec![ExpectedTheorem { theorem: TheoremId::P2, applicable: false }],
            anchors: None,
            quotient: false,
            notes: "the stated weak-upper section is [0,1/2); with x1y = x it evaluates to (1/2,1]; both fail closedness",
        },
        "appx3" => CatalogEntry {
            id: "appx3",
            model: piecewise(
                id,
                unit(),
                vec![zone("low", vec![vec![on(1, 0, Op::Lt, half)]]), zone("high", vec![vec![on(1, 0, Op::Ge, half)]])],
                table(2, &[(1, 0)], &[0, 1]),
            ),
            universe: Universe::new(vec![scalar(0, 1), scalar(1, 1), scalar(1, 2), scalar(1, 4)]),
            expectations: vec![
                (Complete, Holds),
                (Transitive, Holds),
                (Nontrivial, Holds),
                (MixtureContinuous, Fails),
                (StrongArchimedean, Fails),
                (OpenIncomparableSections, Holds),
                (Flimsy, Fails),
                (Fragile, Fails),
            ],
            theorems: vec![ExpectedTheorem { theorem: TheoremId::P1, applicable: false }],
            anchors: None,
            quotient: false,
            notes: "two indifference classes [0,1/2) and [1/2,1], the upper one preferred; the stated section is mirrored under x1y = x",
        },
        "fragile_unit" => CatalogEntry {
            id: "fragile_unit",
            model: piecewise(
                id,
                unit(),
                vec![
                    zone("zero", vec![vec![on(1, 0, Op::Eq, Rational::ZERO)]]),
                    zone("inner", vec![vec![on(1, 0, Op::Gt, Rational::ZERO), on(1, 0, Op::Lt, one)]]),
                    zone("one", vec![vec![on(1, 0, Op::Eq, one)]]),
                ],
                table(3, &[(2, 0)], &[0, 2]),
            ),
            universe: Universe::new(vec![scalar(1, 1), scalar(0, 1), scalar(1, 2)]),
            expectations: vec![
                (Reflexive, Holds),
                (Complete, Fails),
                (Nontrivial, Holds),
                (Transitive, Holds),
                (SemiTransitive, Holds),
                (TransitiveSym, Holds),
                (MixtureContinuous, Holds),
                (Archimedean, Fails),
                (Fragile, Holds),
            ],
            theorems: vec![
                ExpectedTheorem { theorem: TheoremId::T1, applicable: false },
                ExpectedTheorem { theorem: TheoremId::P3, applicable: true },
            ],
            anchors: None,
            quotient: false,
            notes: "a for sure is strictly preferred to b for sure; no other alternatives are comparable",
        },
        "flimsy_0_3" => CatalogEntry {
            id: "flimsy_0_3",
            model: piecewise(
                id,
                MixtureSpace::interval(Rational::ZERO, Rational::integer(3)).expect("interval"),
                vec![
                    zone("low", vec![vec![on(1, 0, Op::Lt, one)]]),
                    zone("mid", vec![vec![on(1, 0, Op::Ge, one), on(1, 0, Op::Le, Rational::integer(2))]]),
                    zone("high", vec![vec![on(1, 0, Op::Gt, Rational::integer(2))]]),
                ],
                table(3, &[(2, 0)], &[0, 2]),
            ),
            universe: Universe::new(vec![scalar(3, 1), scalar(0, 1), scalar(1, 1), scalar(2, 1), scalar(3, 2)]),
            expectations: vec![
                (Reflexive, Holds),
                (Complete, Fails),
                (Nontrivial, Holds),
                (Transitive, Holds),
                (StrongArchimedean, Holds),
                (MixtureContinuous, Fails),
                (Flimsy, Holds),
            ],
            theorems: vec![ExpectedTheorem { theorem: TheoremId::P4, applicable: true }],
            anchors: None,
            quotient: false,
            notes: "[0,1) and (2,3] are indifference classes with the upper one preferred; [1,2] is comparable with nothing else",
        },
        "star_cvx_not_cvx" => {
            let d = 3;
            let zero = Rational::ZERO;
            CatalogEntry {
                id: "star_cvx_not_cvx",
                model: piecewise(
                    id,
                    MixtureSpace::simplex(2),
                    vec![
                        zone("apex", vec![vec![on(d, 1, Op::Eq, one)]]),
                        zone(
                            "arms",
                            vec![vec![on(d, 2, Op::Eq, zero), on(d, 1, Op::Lt, one)], vec![on(d, 0, Op::Eq, zero), on(d, 1, Op::Lt, one)]],
                        ),
                        zone("rest", vec![vec![on(d, 0, Op::Gt, zero), on(d, 2, Op::Gt, zero)]]),
                    ],
                    table(3, &[(1, 0)], &[0]),
                ),
                universe: Universe::new(vec![Point::vertex(3, 0), Point::vertex(3, 2), Point::vertex(3, 1)]),
                expectations: vec![(Reflexive, Holds), (StarConvex, Holds), (Convex, Fails)],
                theorems: vec![],
                anchors: None,
                quotient: false,
                notes: "simplex; mixtures of e1 or e3 with e2 are strictly preferred to e2 and nothing else is comparable",
            }
        }
        "split_hm" => CatalogEntry {
            id: "split_hm",
            model: multi(MixtureSpace::Split, vec![ints(&[1, 0])]),
            universe: Universe::new(vec![pt(&[(1, 1), (0, 1)]), pt(&[(0, 1), (0, 1)]), pt(&[(0, 1), (1, 1)]), pt(&[(1, 2), (0, 1)])]),
            expectations: vec![
                (Nontrivial, Holds),
                (Complete, Holds),
                (Transitive, Holds),
                (MixtureContinuous, Holds),
                (Independent, Sampled),
                (C1, Fails),
                (S1, Holds),
                (S2, Holds),
                (S3, Holds),
            ],
            theorems: vec![],
            anchors: Some((2, 0)),
            quotient: true,
            notes: "split space A ∪ B with the jump mixture; u(x) = x1; cancellation fails",
        },
        "appx4_rationals" => CatalogEntry {
            id: "appx4_rationals",
            model: Model::new(MixtureSpace::SurdInterval, RelationModel::PointwiseOnly(PointwiseRule::RationalOverIrrational))
                .expect("pointwise model"),
            universe: Universe::new(vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(1, 2), (0, 1)]),
                pt(&[(1, 1), (0, 1)]),
                pt(&[(0, 1), (1, 2)]),
                pt(&[(1, 1), (-1, 2)]),
                pt(&[(0, 1), (1, 4)]),
            ])
            .with_depth(0),
            expectations: vec![
                (Complete, Holds),
                (Transitive, Holds),
                (Nontrivial, Holds),
                (StrongArchimedean, Holds),
                (MixtureContinuous, NotApplicable),
                (Archimedean, NotApplicable),
                (Fragile, NotApplicable),
                (Independent, Fails),
            ],
            theorems: vec![],
            anchors: None,
            quotient: false,
            notes: "rationals over irrationals on [0,1] ∩ Q(√2); sections are dense, so only the comparator is available",
        },
        "pareto2" => CatalogEntry {
            id: "pareto2",
            model: multi(MixtureSpace::simplex(2), vec![ints(&[2, 1, 0]), ints(&[1, 0, 2])]),
            universe: Universe::new(vertices(3)),
            expectations: vec![
                (Reflexive, Holds),
                (Complete, Fails),
                (Nontrivial, Holds),
                (Transitive, Holds),
                (MixtureContinuous, Holds),
                (Archimedean, Fails),
                (Independent, Holds),
                (Fragile, Holds),
            ],
            theorems: vec![
                ExpectedTheorem { theorem: TheoremId::P3, applicable: true },
                ExpectedTheorem { theorem: TheoremId::T1, applicable: false },
            ],
            anchors: None,
            quotient: false,
            notes: "Pareto dominance for u1 = (2,1,0) and u2 = (1,0,2)",
        },
        "eu3" => CatalogEntry {
            id: "eu3",
            model: multi(MixtureSpace::simplex(2), vec![ints(&[0, 1, 2])]),
            universe: Universe::new(vertices(3)),
            expectations: vec![
                (Reflexive, Holds),
                (Complete, Holds),
                (Nontrivial, Holds),
                (Transitive, Holds),
                (NegativelyTransitive, Holds),
                (SemiTransitive, Holds),
                (TransitiveSym, Holds),
                (TransitiveStrict, Holds),
                (MixtureContinuous, Holds),
                (Archimedean, Holds),
                (StrongArchimedean, Holds),
                (OpenStrictSections, Holds),
                (OpenIncomparableSections, Holds),
                (Linear, Holds),
                (Convex, Holds),
                (Concave, Holds),
                (Independent, Holds),
                (AntiSymmetric, Fails),
                (StarConvex, Fails),
                (StarConcave, Fails),
                (Fragile, Fails),
                (Flimsy, Fails),
            ],
            theorems: vec![
                ExpectedTheorem { theorem: TheoremId::T1, applicable: true },
                ExpectedTheorem { theorem: TheoremId::P1, applicable: true },
            ],
            anchors: Some((0, 2)),
            quotient: false,
            notes: "expected utility with u = (0,1,2); star-convexity fails on distinct indifferent points",
        },
        other => return Err(CatalogError::Unknown(other.to_string())),
    };
    Ok(entry)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub subject: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationSummary {
    pub quotient: bool,
    pub classes: Option<usize>,
    pub verified: bool,
    pub values: crate::representation::UtilityRepresentation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub universe_size: usize,
    pub verdicts: Vec<Verdict>,
    pub theorems: Vec<HarnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationSummary>,
    pub mismatches: Vec<Mismatch>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs every check on the entry and diffs against its expectations.
pub fn run_entry(entry: &CatalogEntry) -> Result<EntryReport, CatalogError> {
    let checker = Checker::new(&entry.model, &entry.universe)?;
    let mut mismatches = Vec::new();
    let mut ids: Vec<AxiomId> = AxiomId::standard().to_vec();
    for (id, _) in &entry.expectations {
        if !ids.contains(id) {
            ids.push(*id);
        }
    }
    let verdicts = checker.check_all(&ids)?;
    for v in &verdicts {
        if !verify_witness(&entry.model, v)? {
            mismatches.push(Mismatch {
                subject: format!("{} witness", v.axiom),
                expected: "re-verifies".into(),
                actual: v.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
            });
        }
    }
    for (id, want) in &entry.expectations {
        let got = verdicts.iter().find(|v| v.axiom == *id).expect("checked").status;
        if got != *want {
            mismatches.push(Mismatch { subject: id.to_string(), expected: want.to_string(), actual: got.to_string() });
        }
    }
    let theorems = run_all(&checker)?;
    for t in &theorems {
        if t.refuted() {
            mismatches.push(Mismatch {
                subject: format!("{} {}", t.theorem, t.variant.as_deref().unwrap_or("")).trim().to_string(),
                expected: "consistent".into(),
                actual: "refuted on instance".into(),
            });
        }
    }
    for e in &entry.theorems {
        for t in theorems.iter().filter(|t| t.theorem == e.theorem) {
            if t.applicable != e.applicable {
                mismatches.push(Mismatch {
                    subject: format!("{} applicable", e.theorem),
                    expected: e.applicable.to_string(),
                    actual: t.applicable.to_string(),
                });
            }
        }
    }
    let representation = match entry.anchors {
        Some(anchors) => Some(represent_entry(entry, &checker, anchors, &mut mismatches)?),
        None => None,
    };
    Ok(EntryReport { id: entry.id.to_string(), universe_size: checker.points().len(), verdicts, theorems, representation, mismatches })
}

fn represent_entry(
    entry: &CatalogEntry,
    checker: &Checker,
    (low, high): (usize, usize),
    mismatches: &mut Vec<Mismatch>,
) -> Result<RepresentationSummary, CatalogError> {
    let (low, high) = (checker.points()[low].clone(), checker.points()[high].clone());
    let (model, qchecker) = if entry.quotient {
        let qm = quotient(&entry.model, checker.points(), checker.grid())?;
        let qc = Checker::new(&qm, &Universe::new(checker.points().to_vec()).with_depth(0).with_grid(checker.grid().to_vec()))?;
        for id in [AxiomId::AntiSymmetric, AxiomId::Complete, AxiomId::Transitive, AxiomId::MixtureContinuous] {
            let v = qc.check(id)?;
            if !v.status.passes() {
                mismatches.push(Mismatch { subject: format!("quotient {id}"), expected: "holds".into(), actual: v.status.to_string() });
            }
        }
        (qm, Some(qc))
    } else {
        (entry.model.clone(), None)
    };
    let active = qchecker.as_ref().unwrap_or(checker);
    let find = |p: &Point| -> Result<usize, CatalogError> {
        let c = match &model.space {
            MixtureSpace::Quotient(q) => q.canonical(p).map_err(CheckError::from)?,
            _ => p.clone(),
        };
        Ok(active.points().iter().position(|x| *x == c).expect("anchor in universe"))
    };
    let (li, hi) = (find(&low)?, find(&high)?);
    let classes = match &model.space {
        MixtureSpace::Quotient(q) => Some(q.classes.len()),
        _ => None,
    };
    match calibrate(active, li, hi) {
        Ok(cal) => {
            let report = verify_representation(&model, &cal.representation, active.points(), active.grid())?;
            if !report.passed() {
                mismatches.push(Mismatch { subject: "representation".into(), expected: "verified".into(), actual: format!("{:?}", report.failures) });
            }
            let values = cal.representation.with_class_members(&model).map_err(CheckError::from)?;
            Ok(RepresentationSummary { quotient: entry.quotient, classes, verified: report.passed(), values })
        }
        Err(e) => {
            mismatches.push(Mismatch { subject: "representation".into(), expected: "calibrated".into(), actual: e.to_string() });
            Ok(RepresentationSummary {
                quotient: entry.quotient,
                classes,
                verified: false,
                values: crate::representation::UtilityRepresentation { anchor_low: low, anchor_high: high, values: Default::default() },
            })
        }
    }
}

pub fn run_catalog(ids: Option<&[String]>) -> Result<Vec<EntryReport>, CatalogError> {
    let chosen: Vec<String> = match ids {
        Some(list) if !list.is_empty() => list.to_vec(),
        _ => IDS.iter().map(|s| s.to_string()).collect(),
    };
    let entries = chosen.iter().map(|id| load_entry(id)).collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<EntryReport, CatalogError>> = std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run_entry(e))).collect();
        handles.into_iter().map(|h| h.join().expect("catalog worker panicked")).collect()
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_loads() {
        for id in IDS {
            assert_eq!(load_entry(id).unwrap().id, id);
        }
        assert!(matches!(load_entry("no_such"), Err(CatalogError::Unknown(_))));
    }

    #[test]
    fn fragile_unit_comparisons() {
        let m = relation("fragile_unit").unwrap();
        assert_eq!(m.compare(&scalar(1, 1), &scalar(0, 1)).unwrap(), ComparisonOutcome::Better);
        assert_eq!(m.compare(&scalar(3, 10), &scalar(7, 10)).unwrap(), ComparisonOutcome::Incomparable);
        assert_eq!(m.compare(&scalar(3, 10), &scalar(3, 10)).unwrap(), ComparisonOutcome::Equivalent);
    }
}
