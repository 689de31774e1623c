//! Axiom identifiers and verdicts with witnesses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intervals::SectionSet;
use crate::rational::Rational;
use crate::spaces::Point;
use crate::surd::Surd;

macro_rules! axiom_ids {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// Every property the engine can decide.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum AxiomId {
            $(#[serde(rename = $name)] $variant,)+
        }

        impl AxiomId {
            pub const ALL: &'static [AxiomId] = &[$(AxiomId::$variant,)+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(AxiomId::$variant => $name,)+
                }
            }
        }

        impl FromStr for AxiomId {
            type Err = UnknownAxiom;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(AxiomId::$variant),)+
                    other => Err(UnknownAxiom(other.to_string())),
                }
            }
        }
    };
}

axiom_ids! {
    Reflexive => "reflexive",
    Complete => "complete",
    Nontrivial => "nontrivial",
    Transitive => "transitive",
    NegativelyTransitive => "negatively_transitive",
    SemiTransitive => "semi_transitive",
    SemiTransitiveUp => "semi_transitive_up",
    SemiTransitiveDown => "semi_transitive_down",
    TransitiveSym => "transitive_sym",
    TransitiveStrict => "transitive_strict",
    AntiSymmetric => "anti_symmetric",
    MixtureContinuous => "mixture_continuous",
    Archimedean => "archimedean",
    StrongArchimedean => "strong_archimedean",
    OpenStrictSections => "open_strict_sections",
    OpenIncomparableSections => "open_incomparable_sections",
    Linear => "linear",
    Convex => "convex",
    Concave => "concave",
    StarConvex => "star_convex",
    StarConcave => "star_concave",
    Independent => "independent",
    Fragile => "fragile",
    Flimsy => "flimsy",
    S1 => "s1",
    S2 => "s2",
    S3 => "s3",
    S4 => "s4",
    M1 => "m1",
    M2 => "m2",
    M3 => "m3",
    M4 => "m4",
    C1 => "c1",
    C2 => "c2",
}

impl AxiomId {
    /// The axioms reported by a default `axioms` run.
    pub fn standard() -> &'static [AxiomId] {
        &Self::ALL[..24]
    }

    /// Axioms whose verdict needs the segment oracle.
    pub fn needs_sections(&self) -> bool {
        use AxiomId::*;
        matches!(
            self,
            MixtureContinuous
                | Archimedean
                | StrongArchimedean
                | OpenStrictSections
                | OpenIncomparableSections
                | Linear
                | Convex
                | Concave
                | StarConvex
                | StarConcave
                | Fragile
                | Flimsy
        )
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    /// Passed on every sampled instance; no analytic argument available.
    Sampled,
    NotApplicable,
}

impl Status {
    /// Holds outright or on every tested instance.
    pub fn passes(&self) -> bool {
        matches!(self, Status::Holds | Status::Sampled)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Sampled => "sampled",
            Status::NotApplicable => "not_applicable",
        }
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "holds" | "hold" | "true" => Ok(Status::Holds),
            "fails" | "fail" | "false" => Ok(Status::Fails),
            "sampled" => Ok(Status::Sampled),
            "not_applicable" | "na" | "n/a" => Ok(Status::NotApplicable),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Point(Point),
    Weight(Rational),
    SurdWeight(Surd),
    Set(SectionSet),
    Count(usize),
    Text(String),
}

/// Named components of a witness tuple, serialized with sorted keys.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct Witness(BTreeMap<String, WitnessValue>);

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: WitnessValue) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn point(self, key: &str, p: &Point) -> Self {
        self.with(key, WitnessValue::Point(p.clone()))
    }

    pub fn weight(self, key: &str, w: Rational) -> Self {
        self.with(key, WitnessValue::Weight(w))
    }

    pub fn set(self, key: &str, s: &SectionSet) -> Self {
        self.with(key, WitnessValue::Set(s.clone()))
    }

    pub fn text(self, key: &str, t: impl Into<String>) -> Self {
        self.with(key, WitnessValue::Text(t.into()))
    }

    pub fn count(self, key: &str, n: usize) -> Self {
        self.with(key, WitnessValue::Count(n))
    }

    pub fn get(&self, key: &str) -> Option<&WitnessValue> {
        self.0.get(key)
    }

    pub fn get_point(&self, key: &str) -> Option<&Point> {
        match self.0.get(key) {
            Some(WitnessValue::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn get_weight(&self, key: &str) -> Option<Rational> {
        match self.0.get(key) {
            Some(WitnessValue::Weight(w)) => Some(*w),
            _ => None,
        }
    }

    pub fn get_surd(&self, key: &str) -> Option<Surd> {
        match self.0.get(key) {
            Some(WitnessValue::SurdWeight(w)) => Some(*w),
            Some(WitnessValue::Weight(w)) => Some(Surd::rational(*w)),
            _ => None,
        }
    }

    pub fn get_text(&self, key: &str) -> Option<&str> {
        match self.0.get(key) {
            Some(WitnessValue::Text(t)) => Some(t),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &WitnessValue)> {
        self.0.iter()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            match v {
                WitnessValue::Point(p) => write!(f, "{k}={p}")?,
                WitnessValue::Weight(w) => write!(f, "{k}={w}")?,
                WitnessValue::SurdWeight(w) => write!(f, "{k}={w}")?,
                WitnessValue::Set(s) => write!(f, "{k}={s}")?,
                WitnessValue::Count(n) => write!(f, "{k}={n}")?,
                WitnessValue::Text(t) => write!(f, "{k}={t}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub axiom: AxiomId,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(axiom: AxiomId) -> Self {
        Verdict { axiom, status: Status::Holds, witness: None, note: None }
    }

    pub fn holds_with(axiom: AxiomId, witness: Witness) -> Self {
        Verdict { axiom, status: Status::Holds, witness: Some(witness), note: None }
    }

    pub fn fails(axiom: AxiomId, witness: Witness) -> Self {
        Verdict { axiom, status: Status::Fails, witness: Some(witness), note: None }
    }

    pub fn sampled(axiom: AxiomId, note: impl Into<String>) -> Self {
        Verdict { axiom, status: Status::Sampled, witness: None, note: Some(note.into()) }
    }

    pub fn not_applicable(axiom: AxiomId, reason: impl Into<String>) -> Self {
        Verdict { axiom, status: Status::NotApplicable, witness: None, note: Some(reason.into()) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_axiom(mut self, axiom: AxiomId) -> Self {
        self.axiom = axiom;
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<28} {}", self.axiom.as_str(), self.status)?;
        if let Some(w) = &self.witness {
            write!(f, "  [{w}]")?;
        }
        if let Some(n) = &self.note {
            write!(f, "  ({n})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn axiom_names_round_trip() {
        for id in AxiomId::ALL {
            assert_eq!(id.as_str().parse::<AxiomId>().unwrap(), *id);
            let json = serde_json::to_string(id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert_eq!(AxiomId::standard().last(), Some(&AxiomId::Flimsy));
        assert!("bogus".parse::<AxiomId>().is_err());
    }

    #[test]
    fn verdict_json_shape() {
        let w = Witness::new().point("x", &Point::new(vec![q(1, 1)])).weight("lambda", q(1, 2));
        let v = Verdict::fails(AxiomId::Archimedean, w);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["axiom"], "archimedean");
        assert_eq!(json["status"], "fails");
        assert_eq!(json["witness"]["lambda"], "1/2");
        assert_eq!(json["witness"]["x"][0], "1");
        assert!(json.get("note").is_none());
    }
}
