//! JSON model files: space, relation and universe descriptors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{default_grid, CheckError, Universe};
use crate::catalog::{self, CatalogEntry, CatalogError};
use crate::rational::Rational;
use crate::relations::{Model, RelationError, RelationModel};
use crate::spaces::{quotient, split_part, MixtureSpace, Point, QuotientError, SpaceError, SplitPart};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Simplex { dim: usize },
    Interval { lo: Rational, hi: Rational },
    Split,
    SurdInterval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationDescriptor {
    MultiUtility { utilities: Vec<Vec<Rational>> },
    Catalog { id: String },
    QuotientOf { base: Box<RelationDescriptor> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDescriptor {
    Tagged { part: SplitPart, coords: Vec<Rational> },
    Plain(Vec<Rational>),
}

impl PointDescriptor {
    fn coords(&self) -> &[Rational] {
        match self {
            PointDescriptor::Tagged { coords, .. } | PointDescriptor::Plain(coords) => coords,
        }
    }
}

fn default_depth() -> usize {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseDescriptor {
    pub points: Vec<PointDescriptor>,
    #[serde(default = "default_depth")]
    pub closure_depth: usize,
    #[serde(default = "default_grid")]
    pub grid: Vec<Rational>,
    #[serde(default = "yes")]
    pub saturate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub space: SpaceDescriptor,
    pub relation: RelationDescriptor,
    pub universe: UniverseDescriptor,
    /// Universe indices of the lower and upper calibration anchors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchors: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("cannot read model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("split point tagged {tag:?} lies in part {actual:?}")]
    SplitTag { tag: SplitPart, actual: Option<SplitPart> },
    #[error("catalog entry `{id}` lives on {expected}, not on {given}")]
    SpaceMismatch { id: String, expected: String, given: String },
    #[error("nested quotients are not supported")]
    NestedQuotient,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// A parsed model file.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub model: Model,
    pub universe: Universe,
    pub anchors: Option<(usize, usize)>,
}

impl SpaceDescriptor {
    pub fn build(&self) -> Result<MixtureSpace, SpaceError> {
        Ok(match self {
            SpaceDescriptor::Simplex { dim } => MixtureSpace::simplex(*dim),
            SpaceDescriptor::Interval { lo, hi } => MixtureSpace::interval(*lo, *hi)?,
            SpaceDescriptor::Split => MixtureSpace::Split,
            SpaceDescriptor::SurdInterval => MixtureSpace::SurdInterval,
        })
    }

    pub fn describe(space: &MixtureSpace) -> Option<SpaceDescriptor> {
        Some(match space {
            MixtureSpace::Simplex { dim } => SpaceDescriptor::Simplex { dim: *dim },
            MixtureSpace::RealInterval { lo, hi } => SpaceDescriptor::Interval { lo: *lo, hi: *hi },
            MixtureSpace::Split => SpaceDescriptor::Split,
            MixtureSpace::SurdInterval => SpaceDescriptor::SurdInterval,
            MixtureSpace::Quotient(_) => return None,
        })
    }
}

fn relation_model(space: &MixtureSpace, desc: &RelationDescriptor) -> Result<Model, DescriptorError> {
    match desc {
        RelationDescriptor::MultiUtility { utilities } => {
            Ok(Model::new(space.clone(), RelationModel::MultiUtility { utilities: utilities.clone() })?)
        }
        RelationDescriptor::Catalog { id } => {
            let m = catalog::relation(id)?;
            if m.space != *space {
                return Err(DescriptorError::SpaceMismatch { id: id.clone(), expected: m.space.name(), given: space.name() });
            }
            Ok(m)
        }
        RelationDescriptor::QuotientOf { .. } => Err(DescriptorError::NestedQuotient),
    }
}

fn point(space: &MixtureSpace, desc: &PointDescriptor) -> Result<Point, DescriptorError> {
    let p = Point::new(desc.coords().to_vec());
    if let PointDescriptor::Tagged { part, .. } = desc {
        let actual = split_part(&p);
        if actual != Some(*part) {
            return Err(DescriptorError::SplitTag { tag: *part, actual });
        }
    }
    space.check_point(&p)?;
    Ok(p)
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile, DescriptorError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &std::path::Path) -> Result<ModelFile, DescriptorError> {
        ModelFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn load(&self) -> Result<Loaded, DescriptorError> {
        let space = self.space.build()?;
        let points = self.universe.points.iter().map(|p| point(&space, p)).collect::<Result<Vec<_>, _>>()?;
        let universe = Universe {
            points,
            closure_depth: self.universe.closure_depth,
            grid: self.universe.grid.clone(),
            saturate: self.universe.saturate,
        };
        let anchors = self.anchors.map(|[a, b]| (a, b));
        match &self.relation {
            RelationDescriptor::QuotientOf { base } => {
                let model = relation_model(&space, base)?;
                let (model, universe) = quotient_instance(&model, &universe)?;
                Ok(Loaded { model, universe, anchors })
            }
            other => Ok(Loaded { model: relation_model(&space, other)?, universe, anchors }),
        }
    }

    /// The model file for a catalog entry, or for its quotient.
    pub fn from_entry(entry: &CatalogEntry, as_quotient: bool) -> ModelFile {
        let space = SpaceDescriptor::describe(&entry.model.space).expect("catalog spaces are not quotients");
        let catalog = match &entry.model.relation {
            RelationModel::MultiUtility { utilities } => RelationDescriptor::MultiUtility { utilities: utilities.clone() },
            _ => RelationDescriptor::Catalog { id: entry.id.to_string() },
        };
        let relation = if as_quotient { RelationDescriptor::QuotientOf { base: Box::new(catalog) } } else { catalog };
        let points = entry
            .universe
            .points
            .iter()
            .map(|p| match (&entry.model.space, split_part(p)) {
                (MixtureSpace::Split, Some(part)) => PointDescriptor::Tagged { part, coords: p.coords().to_vec() },
                _ => PointDescriptor::Plain(p.coords().to_vec()),
            })
            .collect();
        ModelFile {
            space,
            relation,
            universe: UniverseDescriptor {
                points,
                closure_depth: entry.universe.closure_depth,
                grid: entry.universe.grid.clone(),
                saturate: entry.universe.saturate,
            },
            anchors: if as_quotient { None } else { entry.anchors.map(|(a, b)| [a, b]) },
            notes: Some(entry.notes.to_string()),
        }
    }
}

/// The indifference quotient over the closure of `universe`, with the closed
/// universe carried over.
pub fn quotient_instance(model: &Model, universe: &Universe) -> Result<(Model, Universe), DescriptorError> {
    let pts = universe.closure(&model.space)?;
    let q = quotient(model, &pts, &universe.grid)?;
    let carried = Universe { points: pts, closure_depth: 0, grid: universe.grid.clone(), saturate: universe.saturate };
    Ok((q, carried))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn parses_multi_utility_model() {
        let text = r#"{
            "space": {"kind": "simplex", "dim": 2},
            "relation": {"kind": "multi_utility", "utilities": [["2","1","0"],["1","0","2"]]},
            "universe": {"points": [["1","0","0"],["0","1","0"],["0","0","1"]], "closure_depth": 0}
        }"#;
        let loaded = ModelFile::parse(text).unwrap().load().unwrap();
        assert_eq!(loaded.universe.points.len(), 3);
        assert_eq!(loaded.universe.grid, vec![q(1, 4), q(1, 2), q(3, 4)]);
        assert!(loaded.universe.saturate);
    }

    #[test]
    fn split_points_accept_tags() {
        let text = r#"{
            "space": {"kind": "split"},
            "relation": {"kind": "multi_utility", "utilities": [["1","0"]]},
            "universe": {"points": [{"part":"B","coords":["1","0"]}, {"part":"A","coords":["0","1"]}, ["1/2","0"]]}
        }"#;
        assert_eq!(ModelFile::parse(text).unwrap().load().unwrap().universe.points.len(), 3);
        let wrong = text.replace(r#"{"part":"B","coords":["1","0"]}"#, r#"{"part":"A","coords":["1","0"]}"#);
        assert!(matches!(ModelFile::parse(&wrong).unwrap().load(), Err(DescriptorError::SplitTag { .. })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ModelFile::parse("{").is_err());
        let text = r#"{"space":{"kind":"simplex","dim":1},"relation":{"kind":"catalog","id":"appx1"},"universe":{"points":[]}}"#;
        assert!(matches!(ModelFile::parse(text).unwrap().load(), Err(DescriptorError::SpaceMismatch { .. })));
        let text = r#"{"space":{"kind":"simplex","dim":1},"relation":{"kind":"multi_utility","utilities":[["1","0"]]},"universe":{"points":[["1","1"]]}}"#;
        assert!(matches!(ModelFile::parse(text).unwrap().load(), Err(DescriptorError::Space(_))));
    }

    #[test]
    fn catalog_entries_round_trip() {
        for id in catalog::IDS {
            let entry = catalog::load_entry(id).unwrap();
            let file = ModelFile::from_entry(&entry, false);
            let text = serde_json::to_string_pretty(&file).unwrap();
            let back = ModelFile::parse(&text).unwrap();
            assert_eq!(back, file);
            let loaded = back.load().unwrap();
            assert_eq!(loaded.model, entry.model, "{id}");
            assert_eq!(loaded.universe, entry.universe, "{id}");
        }
    }

    #[test]
    fn quotient_of_split_space() {
        let file = ModelFile::from_entry(&catalog::load_entry("split_hm").unwrap(), true);
        let loaded = file.load().unwrap();
        match &loaded.model.space {
            MixtureSpace::Quotient(qs) => assert!(qs.classes.len() < loaded.universe.points.len()),
            other => panic!("expected a quotient, got {}", other.name()),
        }
    }
}
