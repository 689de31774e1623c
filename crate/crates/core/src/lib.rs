//! Exact verification of preference axioms on mixture sets.
//!
//! Relations are given by a comparator and an exact segment oracle; every
//! section set `{λ ∈ [0,1] | xλy ⪰ z}` is a finite union of intervals with
//! rational endpoints, so closedness, openness and convexity are decided
//! without tolerances.

pub mod axioms;
pub mod catalog;
pub mod descriptor;
pub mod fuzz;
pub mod intervals;
pub mod rational;
pub mod representation;
pub mod relations;
pub mod spaces;
pub mod surd;
pub mod theorems;
pub mod verdict;

pub use intervals::{Interval, SectionSet, TopologyReport};
pub use rational::{q, Rational};
pub use relations::{ComparisonOutcome, Label, LabeledPartition, Model, RelationError, RelationModel, SectionKind};
pub use spaces::{MixtureSpace, Point, SpaceError};
pub use verdict::{AxiomId, Status, Verdict, Witness};
