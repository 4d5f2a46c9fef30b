//! Exact computation with Penrose rhombus tilings.
//!
//! Everything geometric is integer or golden-field arithmetic: tiling
//! vertices are integer 5-tuples modulo the all-ones vector, lengths and
//! areas live in Q(φ), and window/region polytopes in the internal space
//! are handled with exact predicates. Floating point appears only in SVG
//! output and in certified interval enclosures.
//!
//! The main entry points:
//! - [`substitution`]: the Penrose substitution on Robinson half-tiles,
//!   patch generation, and the k-atlas closure over the substitution
//!   graph;
//! - [`cutproject`]: the rhombic-icosahedron window, k-regions, plane
//!   sections, atlas enumeration and exact pattern frequencies;
//! - [`localrules`]: edge atlas, label reconstruction for unlabelled
//!   patches, deception checks, verification against an atlas;
//! - [`recurrence`]: the certified linear-recurrence constants and the
//!   patch containing every 1-map.

pub mod golden;
pub mod interval;
pub mod lattice;
pub mod patch;
pub mod rng;
pub mod tile;

pub mod cutproject;
pub mod io;
pub mod localrules;
pub mod polytope;
pub mod recurrence;
pub mod solomyak;
pub mod substitution;

pub use golden::GoldenNum;
pub use lattice::{
    dist2, internal_project, planar_embed, FramePoint, InternalPoint, Isometry, LatticePoint,
    PlanarPoint, ProjectionScheme,
};
pub use patch::{canonicalize, Atlas, EdgePattern, EquivMode, KMap, Patch, Pattern};
pub use tile::{ArrowKind, EdgeLabel, RhombusTile, Shape};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Overflow,
    DivisionByZero,
    Parse(String),
    InvalidPatch(String),
    CenterNotAVertex,
    InsufficientContext,
    MergeFailure(String),
    NonCertifiableImage,
    DegenerateScheme,
    BoundaryPoint,
    BoundViolated(String),
    ClaimFalsified(String),
    InconsistentEdge(String),
    PreconditionViolated(String),
    ResourceLimit(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::Overflow => write!(f, "integer overflow in exact arithmetic"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::InvalidPatch(s) => write!(f, "invalid patch: {s}"),
            Error::CenterNotAVertex => write!(f, "centre is not a vertex of the patch"),
            Error::InsufficientContext => {
                write!(f, "patch too small to certify the requested k-map")
            }
            Error::MergeFailure(s) => write!(f, "half-tile merge failure: {s}"),
            Error::NonCertifiableImage => {
                write!(f, "substitution image certifies no k-map")
            }
            Error::DegenerateScheme => {
                write!(f, "slope contains an integer direction")
            }
            Error::BoundaryPoint => write!(f, "point lies on a shifted facet"),
            Error::BoundViolated(s) => write!(f, "bound violated: {s}"),
            Error::ClaimFalsified(s) => write!(f, "claim falsified: {s}"),
            Error::InconsistentEdge(s) => write!(f, "inconsistent edge labels: {s}"),
            Error::PreconditionViolated(s) => write!(f, "precondition violated: {s}"),
            Error::ResourceLimit(s) => write!(f, "resource limit: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
