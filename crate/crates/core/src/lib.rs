//! Line colorings of the finite affine spaces AG(n,q).
//!
//! The crate builds AG(n,q) and PG(n,q) over exact GF(p^m) arithmetic,
//! constructs complete (and, where possible, proper) line colorings with
//! many colors, certifies them with explicit witnesses, evaluates the
//! closed-form bounds on the chromatic, achromatic and pseudoachromatic
//! indices, and computes those indices exactly for tiny instances by an
//! independent branch-and-bound search.

pub mod bounds;
pub mod cli;
pub mod colorings;
pub mod echelon;
pub mod field;
pub mod manifest;
pub mod oracle;
pub mod space;
pub mod structures;
pub mod verify;

pub use colorings::{ColorClass, Coloring, ConstructionTrace, Method};
pub use field::{Field, FieldElement};
pub use space::{AffineLine, AffinePoint, AffineSpace, ProjectivePoint, SpaceDescriptor, Subspace};
pub use verify::VerificationReport;

/// Size limits applied when building fields and spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_q: u64,
    pub max_n: usize,
    pub max_points: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_q: 32,
            max_n: 8,
            max_points: 1 << 20,
        }
    }
}
