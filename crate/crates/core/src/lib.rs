//! Tight-fusion-frame toolkit: exact parameter-orbit algebra, finite abelian
//! group Fourier analysis, combinatorial design search, numerical frame
//! verification, harmonic constructions, and a novelty-certification catalog.

pub mod catalog;
pub mod designs;
pub mod error;
pub mod frames;
pub mod groups;
pub mod harmonic;
pub mod tol;
pub mod triples;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Scalar field a frame lives over. Quaternionic parameters appear only in
/// catalog tables, never as frame data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(format!("unknown field {other:?}, expected real or complex")),
        }
    }
}

pub use catalog::{Catalog, CatalogRule, CertificationReport, Outcome3, Verdict};
pub use designs::{Bibd, DifferenceFamily, DivisibleDifferenceSet};
pub use frames::{FusionFrame, VerificationReport};
pub use groups::{AbelianGroup, GroupElement, Subgroup};
pub use harmonic::{HarmonicResult, HarmonicSpec};
pub use triples::{ExistenceVerdict, Move, OrbitClass, OrbitTag, ParamTriple};
