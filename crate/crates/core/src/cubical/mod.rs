//! Faces of `I^N`, cubulations and cellular cubical homology.

mod cubulation;
mod face;
mod singular;

use thiserror::Error;

pub use cubulation::{
    cellular_chain_map, corner, cubical_homology, BoundaryEntry, Cell, CellChain, CellularMap,
    Cubulation,
};
pub use face::{face_boundary, face_boundary_chain, face_sign, Coord, CubeFace, FaceError};
pub use singular::{
    boundary_canonical, normalize, normalize_canonical, realize, CanonicalCube,
    NormalizedCubicalChain, SingularCube,
};

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicalError {
    #[error("duplicate cell id {0}")]
    DuplicateCell(String),
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("bad boundary on cell {cell}: {reason}")]
    BadBoundary { cell: String, reason: String },
    #[error("boundary of boundary of cell {0} is nonzero")]
    BoundarySquaredNonzero(String),
    #[error("fundamental chain invalid: {0}")]
    FundamentalNotCycle(String),
    #[error("cellular map is not chain level at cell {0}")]
    NotChainLevel(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
