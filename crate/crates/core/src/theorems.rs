//! Instance-level harness for the theorems: evaluate the hypotheses on a
//! universe, evaluate the conclusions, and flag any refutation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::axioms::{CheckError, Checker};
use crate::relations::SectionKind;
use crate::representation::{calibrate, verify_representation};
use crate::verdict::{AxiomId, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    P1,
    P2,
    T1,
    Obs1,
    Cor1,
    T2,
    T3a,
    T3b,
    T3c,
    T3d,
    Cor2,
    Cor3,
    L1d,
    T4,
    P3,
    P4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::P1,
        TheoremId::P2,
        TheoremId::T1,
        TheoremId::Obs1,
        TheoremId::Cor1,
        TheoremId::T2,
        TheoremId::T3a,
        TheoremId::T3b,
        TheoremId::T3c,
        TheoremId::T3d,
        TheoremId::Cor2,
        TheoremId::Cor3,
        TheoremId::L1d,
        TheoremId::T4,
        TheoremId::P3,
        TheoremId::P4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::P1 => "P1",
            TheoremId::P2 => "P2",
            TheoremId::T1 => "T1",
            TheoremId::Obs1 => "OBS1",
            TheoremId::Cor1 => "COR1",
            TheoremId::T2 => "T2",
            TheoremId::T3a => "T3a",
            TheoremId::T3b => "T3b",
            TheoremId::T3c => "T3c",
            TheoremId::T3d => "T3d",
            TheoremId::Cor2 => "COR2",
            TheoremId::Cor3 => "COR3",
            TheoremId::L1d => "L1d",
            TheoremId::T4 => "T4",
            TheoremId::P3 => "P3",
            TheoremId::P4 => "P4",
        }
    }

    /// Hypothesis lists, one per variant. The variant name is empty when the
    /// statement has a single form.
    fn variants(&self) -> Vec<(&'static str, Vec<Requirement>)> {
        use AxiomId::*;
        let all = |ids: &[AxiomId]| ids.iter().map(|&a| Requirement::passes(a)).collect::<Vec<_>>();
        let with = |base: &[AxiomId], extra: &[AxiomId]| {
            let mut v = all(base);
            v.extend(all(extra));
            v
        };
        let t3 = [Reflexive, MixtureContinuous, Archimedean, TransitiveSym, S1, S2, S3];
        let cor2 = [Nontrivial, Reflexive, MixtureContinuous, Archimedean, TransitiveSym, S1, S2, S3];
        let incomplete = |rest: &[AxiomId]| {
            let mut v = vec![Requirement { axiom: Complete, wanted: Wanted::Fails }];
            v.extend(all(rest));
            v
        };
        match self {
            TheoremId::P1 => vec![("", all(&[SemiTransitive, MixtureContinuous]))],
            TheoremId::P2 => vec![("", all(&[SemiTransitive, StrongArchimedean, OpenIncomparableSections]))],
            TheoremId::T1 => {
                vec![("", all(&[Nontrivial, Reflexive, SemiTransitive, MixtureContinuous, Archimedean, TransitiveSym]))]
            }
            TheoremId::Obs1 => vec![("", all(&[AntiSymmetric, Nontrivial, Reflexive, MixtureContinuous, Archimedean]))],
            TheoremId::Cor1 => vec![
                ("up", all(&[Complete, MixtureContinuous, Archimedean, SemiTransitiveUp])),
                ("down", all(&[Complete, MixtureContinuous, Archimedean, SemiTransitiveDown])),
            ],
            TheoremId::T2 => vec![
                ("star_convex", all(&[Complete, StrongArchimedean, TransitiveStrict, StarConvex])),
                ("star_concave", all(&[Complete, StrongArchimedean, TransitiveStrict, StarConcave])),
            ],
            TheoremId::T3a => vec![("", with(&t3, &[Linear]))],
            TheoremId::T3b => vec![("", with(&t3, &[Convex]))],
            TheoremId::T3c => vec![("", with(&t3, &[Concave]))],
            TheoremId::T3d => {
                vec![("convex", with(&t3, &[Complete, Convex])), ("concave", with(&t3, &[Complete, Concave]))]
            }
            TheoremId::Cor2 => vec![("linear", with(&cor2, &[Linear])), ("semi_transitive", with(&cor2, &[SemiTransitive]))],
            TheoremId::Cor3 => vec![
                ("convex", all(&[Complete, MixtureContinuous, Archimedean, TransitiveSym, Convex])),
                ("concave", all(&[Complete, MixtureContinuous, Archimedean, TransitiveSym, Concave])),
            ],
            TheoremId::L1d => vec![("", all(&[Reflexive, TransitiveSym, MixtureContinuous, Archimedean]))],
            TheoremId::T4 => vec![("", all(&[Nontrivial, Complete, Transitive, AntiSymmetric, MixtureContinuous]))],
            TheoremId::P3 => vec![("", incomplete(&[Nontrivial, Reflexive, Transitive, MixtureContinuous]))],
            TheoremId::P4 => vec![("", incomplete(&[Nontrivial, Reflexive, Transitive, StrongArchimedean]))],
        }
    }

    fn conclusions(&self) -> &'static [AxiomId] {
        use AxiomId::*;
        match self {
            TheoremId::P1 => &[Archimedean, StrongArchimedean, OpenStrictSections],
            TheoremId::P2 => &[MixtureContinuous],
            TheoremId::T1 | TheoremId::Obs1 | TheoremId::Cor2 => &[Complete, Transitive],
            TheoremId::Cor1 | TheoremId::T2 | TheoremId::Cor3 => &[Transitive],
            TheoremId::T3a | TheoremId::T3d => &[SemiTransitive],
            TheoremId::T3b => &[SemiTransitiveDown],
            TheoremId::T3c => &[SemiTransitiveUp],
            TheoremId::L1d => &[Linear, Convex, Concave],
            TheoremId::T4 => &[],
            TheoremId::P3 => &[Fragile],
            TheoremId::P4 => &[Flimsy],
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown theorem `{0}`")]
pub struct UnknownTheorem(pub String);

impl FromStr for TheoremId {
    type Err = UnknownTheorem;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownTheorem(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Wanted {
    Passes,
    Fails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Requirement {
    axiom: AxiomId,
    wanted: Wanted,
}

impl Requirement {
    fn passes(axiom: AxiomId) -> Self {
        Requirement { axiom, wanted: Wanted::Passes }
    }

    fn met(&self, status: Status) -> bool {
        match self.wanted {
            Wanted::Passes => status.passes(),
            Wanted::Fails => status == Status::Fails,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentationOutcome {
    pub calibrated: bool,
    pub verified: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub theorem: TheoremId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub applicable: bool,
    pub consistent: bool,
    pub hypotheses: BTreeMap<AxiomId, Verdict>,
    pub conclusions: BTreeMap<AxiomId, Verdict>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub intermediate: BTreeMap<AxiomId, Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl HarnessReport {
    /// A refutation on the instance: the hypotheses hold and a conclusion fails.
    pub fn refuted(&self) -> bool {
        self.applicable && !self.consistent
    }
}

/// Runs every variant of `theorem` on the checker's universe.
pub fn run_harness(theorem: TheoremId, checker: &Checker) -> Result<Vec<HarnessReport>, CheckError> {
    let mut out = Vec::new();
    for (variant, reqs) in theorem.variants() {
        let mut hypotheses = BTreeMap::new();
        let mut applicable = true;
        for r in &reqs {
            let v = checker.check(r.axiom)?;
            applicable &= r.met(v.status);
            hypotheses.insert(r.axiom, v);
        }
        let mut conclusions = BTreeMap::new();
        for &c in theorem.conclusions() {
            conclusions.insert(c, checker.check(c)?);
        }
        let mut notes = Vec::new();
        let mut intermediate = BTreeMap::new();
        let mut representation = None;
        let consistent = match theorem {
            TheoremId::P1 => {
                let statuses: Vec<bool> = conclusions.values().map(|v| v.status.passes()).collect();
                !applicable || statuses.windows(2).all(|w| w[0] == w[1])
            }
            TheoremId::L1d => {
                let linear = conclusions[&AxiomId::Linear].status.passes();
                let both = conclusions[&AxiomId::Convex].status.passes() && conclusions[&AxiomId::Concave].status.passes();
                !applicable || linear == both
            }
            TheoremId::T4 => {
                let outcome = if applicable { Some(representation_outcome(checker)?) } else { None };
                let ok = outcome.as_ref().map(|o| o.calibrated && o.verified).unwrap_or(true);
                representation = outcome;
                ok
            }
            _ => !applicable || conclusions.values().all(|v| v.status.passes()),
        };
        if theorem == TheoremId::T1 {
            intermediate.insert(AxiomId::NegativelyTransitive, checker.check(AxiomId::NegativelyTransitive)?);
        }
        if matches!(theorem, TheoremId::P2 | TheoremId::P4) {
            notes.push("finitely many section components: structural for every representable relation".to_string());
        }
        if !checker.has_sections() && theorem.variants().iter().flat_map(|v| &v.1).any(|r| r.axiom.needs_sections()) {
            notes.push("relation has no segment oracle".to_string());
        }
        out.push(HarnessReport {
            theorem,
            variant: (!variant.is_empty()).then(|| variant.to_string()),
            applicable,
            consistent,
            hypotheses,
            conclusions,
            intermediate,
            representation,
            notes,
        });
    }
    Ok(out)
}

pub fn run_all(checker: &Checker) -> Result<Vec<HarnessReport>, CheckError> {
    let mut out = Vec::new();
    for t in TheoremId::ALL {
        out.extend(run_harness(t, checker)?);
    }
    Ok(out)
}

/// Calibrate from the first strict pair and verify.
fn representation_outcome(checker: &Checker) -> Result<RepresentationOutcome, CheckError> {
    let n = checker.points().len();
    let pair = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| {
        checker.outcome(i, j) == crate::relations::ComparisonOutcome::Better
    });
    let Some((high, low)) = pair else {
        return Ok(RepresentationOutcome { calibrated: false, verified: false, detail: "no strict pair".into() });
    };
    match calibrate(checker, low, high) {
        Ok(cal) => {
            let report = verify_representation(checker.model(), &cal.representation, checker.points(), checker.grid())?;
            Ok(RepresentationOutcome {
                calibrated: true,
                verified: report.passed(),
                detail: format!(
                    "anchors {} and {}; {} pairs and {} mixtures checked",
                    checker.points()[low],
                    checker.points()[high],
                    report.pairs_checked,
                    report.mixtures_checked
                ),
            })
        }
        Err(e) => Ok(RepresentationOutcome { calibrated: false, verified: false, detail: e.to_string() }),
    }
}

/// Agreement of the direct and section forms of convexity and concavity, and
/// the characterization of linearity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub applicable: bool,
    pub convex_direct: Status,
    pub convex_sections: Status,
    pub concave_direct: Status,
    pub concave_sections: Status,
    pub linear: Status,
    pub convex_agrees: bool,
    pub concave_agrees: bool,
    /// Under mixture continuity and the Archimedean property.
    pub linear_characterized: Option<bool>,
}

impl ConvexityReport {
    pub fn consistent(&self) -> bool {
        !self.applicable || (self.convex_agrees && self.concave_agrees && self.linear_characterized.unwrap_or(true))
    }
}

pub fn convexity_suite(checker: &Checker) -> Result<ConvexityReport, CheckError> {
    let applicable = checker.status(AxiomId::Reflexive)?.passes() && checker.status(AxiomId::TransitiveSym)?.passes();
    let convex_direct = checker.status(AxiomId::Convex)?;
    let concave_direct = checker.status(AxiomId::Concave)?;
    let convex_sections = checker.section_convexity(SectionKind::WeakAbove).status;
    let concave_sections = checker.section_convexity(SectionKind::WeakBelow).status;
    let linear = checker.status(AxiomId::Linear)?;
    let regular = checker.status(AxiomId::MixtureContinuous)?.passes() && checker.status(AxiomId::Archimedean)?.passes();
    let linear_characterized =
        (applicable && regular).then(|| linear.passes() == (convex_direct.passes() && concave_direct.passes()));
    Ok(ConvexityReport {
        applicable,
        convex_direct,
        convex_sections,
        concave_direct,
        concave_sections,
        linear,
        convex_agrees: convex_direct == convex_sections,
        concave_agrees: concave_direct == concave_sections,
        linear_characterized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::Universe;
    use crate::rational::Rational;
    use crate::relations::{Model, RelationModel};
    use crate::spaces::{MixtureSpace, Point};

    fn checker(utilities: &[[i128; 3]]) -> Checker {
        let utilities = utilities.iter().map(|u| u.iter().map(|&v| Rational::integer(v)).collect()).collect();
        let m = Model::new(MixtureSpace::simplex(2), RelationModel::MultiUtility { utilities }).unwrap();
        Checker::new(&m, &Universe::new((0..3).map(|i| Point::vertex(3, i)).collect())).unwrap()
    }

    #[test]
    fn ids_parse() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("obs1".parse::<TheoremId>().unwrap(), TheoremId::Obs1);
        assert!("T9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn single_utility_meets_theorem_one() {
        let c = checker(&[[0, 1, 2]]);
        let r = &run_harness(TheoremId::T1, &c).unwrap()[0];
        assert!(r.applicable && r.consistent);
        assert!(r.intermediate.contains_key(&AxiomId::NegativelyTransitive));
        for report in run_all(&c).unwrap() {
            assert!(!report.refuted(), "{} {:?}", report.theorem, report.variant);
        }
    }

    #[test]
    fn pareto_meets_fragility_law() {
        let c = checker(&[[2, 1, 0], [1, 0, 2]]);
        let r = &run_harness(TheoremId::P3, &c).unwrap()[0];
        assert!(r.applicable, "{r:?}");
        assert!(r.consistent);
        let t1 = &run_harness(TheoremId::T1, &c).unwrap()[0];
        assert!(!t1.applicable);
        assert_eq!(run_harness(TheoremId::Cor1, &c).unwrap().len(), 2);
    }

    #[test]
    fn convexity_suite_on_linear_family() {
        let r = convexity_suite(&checker(&[[0, 1, 2]])).unwrap();
        assert!(r.applicable && r.consistent());
        assert_eq!(r.linear_characterized, Some(true));
    }
}
