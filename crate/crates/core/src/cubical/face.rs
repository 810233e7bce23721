use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{Chain, FormalChain, GeneratorId, GeneratorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Coord {
    Free,
    Zero,
    One,
}

/// A face of `I^N`: every axis is free or pinned to 0 or 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CubeFace {
    pub coords: Vec<Coord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceError {
    #[error("face {0} has degree zero and no boundary")]
    DegreeZero(String),
    #[error("cannot parse face {0:?}")]
    Parse(String),
}

impl CubeFace {
    /// The whole cube `I^n`.
    pub fn full(n: usize) -> Self {
        Self {
            coords: vec![Coord::Free; n],
        }
    }

    pub fn ambient(&self) -> usize {
        self.coords.len()
    }

    pub fn degree(&self) -> usize {
        self.coords.iter().filter(|c| **c == Coord::Free).count()
    }

    /// Ambient indices of free axes, in order.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.ambient())
            .filter(|&i| self.coords[i] == Coord::Free)
            .collect()
    }

    /// Restriction `x_j = side` where `j` (0-based) counts free axes.
    pub fn restrict(&self, j: usize, side: u8) -> Self {
        let axis = self.free_axes()[j];
        let mut c = self.coords.clone();
        c[axis] = if side == 0 { Coord::Zero } else { Coord::One };
        Self { coords: c }
    }

    /// Whether `self` is contained in `other`.
    pub fn is_subface_of(&self, other: &Self) -> bool {
        self.ambient() == other.ambient()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| *b == Coord::Free || a == b)
    }

    /// Reindexes a subface of `self` onto the standard cube `I^p`, keeping
    /// only the coordinates at `self`'s free axes. This is the orientation
    /// preserving identification of free coordinates with `R^p`.
    pub fn reindex_into(&self, sub: &Self) -> Self {
        Self {
            coords: self.free_axes().iter().map(|&i| sub.coords[i]).collect(),
        }
    }

    pub fn generator(&self) -> GeneratorId {
        GeneratorId::new(
            self.to_string(),
            self.degree() as i64,
            GeneratorKind::CubeFace,
        )
    }

    /// Every face of `I^n`, `3^n` of them.
    pub fn all_faces(n: usize) -> Vec<Self> {
        let mut out = vec![Self { coords: vec![] }];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|f| {
                    [Coord::Free, Coord::Zero, Coord::One].map(|c| {
                        let mut g = f.clone();
                        g.coords.push(c);
                        g
                    })
                })
                .collect();
        }
        out
    }
}

/// Sign of side `side` of free axis `j` (0-based) in the cube boundary:
/// `(-1)^(j+1)` on side 1 and the opposite on side 0.
pub fn face_sign(j: usize, side: u8) -> i64 {
    let s = if (j + 1).is_multiple_of(2) { 1 } else { -1 };
    if side == 1 {
        s
    } else {
        -s
    }
}

/// `∂P = Σ_j (-1)^j [P|x_j=1 - P|x_j=0]` over the free axes of `P`.
pub fn face_boundary_chain(p: &CubeFace) -> Result<Chain<CubeFace>, FaceError> {
    let d = p.degree();
    if d == 0 {
        return Err(FaceError::DegreeZero(p.to_string()));
    }
    let mut out = Chain::zero();
    for j in 0..d {
        for side in [1u8, 0] {
            out.add_term(p.restrict(j, side), face_sign(j, side));
        }
    }
    Ok(out)
}

/// [`face_boundary_chain`] expressed over generic generators.
pub fn face_boundary(p: &CubeFace) -> Result<FormalChain, FaceError> {
    Ok(face_boundary_chain(p)?.map_keys(CubeFace::generator))
}

impl fmt::Display for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coords {
            let ch = match c {
                Coord::Free => '*',
                Coord::Zero => '0',
                Coord::One => '1',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl std::str::FromStr for CubeFace {
    type Err = FaceError;

    fn from_str(s: &str) -> Result<Self, FaceError> {
        let coords = s
            .chars()
            .map(|c| match c {
                '*' => Ok(Coord::Free),
                '0' => Ok(Coord::Zero),
                '1' => Ok(Coord::One),
                _ => Err(FaceError::Parse(s.to_string())),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { coords })
    }
}
