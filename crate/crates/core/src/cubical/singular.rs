//! Singular cube chains in the cellular model and their degeneracy
//! normalization.
//!
//! A singular `p`-cube is a map from a `p`-face `P` of `I^N` into a
//! cubulation, recorded by the cellular image of every subface of `P`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cubulation::{CellChain, Cubulation};
use super::face::{face_sign, Coord, CubeFace};
use crate::chains::Chain;

/// A singular cube carried on an arbitrary face of `I^N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SingularCube {
    pub domain: CubeFace,
    /// Image of each subface of `domain`; absent means zero.
    pub images: BTreeMap<CubeFace, CellChain>,
}

/// A singular cube reindexed onto the standard cube `I^p`.
///
/// Only nonzero images are stored so that equal maps compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCube {
    pub dim: usize,
    pub images: BTreeMap<CubeFace, CellChain>,
}

/// Chain of canonical, non-degenerate singular cubes.
pub type NormalizedCubicalChain = Chain<CanonicalCube>;

impl SingularCube {
    pub fn canonical(&self) -> CanonicalCube {
        CanonicalCube {
            dim: self.domain.degree(),
            images: self
                .images
                .iter()
                .filter(|(f, img)| f.is_subface_of(&self.domain) && !img.is_zero())
                .map(|(f, img)| (self.domain.reindex_into(f), img.clone()))
                .collect(),
        }
    }

    /// Restriction to a subface of the domain.
    pub fn restrict(&self, face: &CubeFace) -> Self {
        Self {
            domain: face.clone(),
            images: self
                .images
                .iter()
                .filter(|(f, _)| f.is_subface_of(face))
                .map(|(f, i)| (f.clone(), i.clone()))
                .collect(),
        }
    }

    pub fn boundary(&self) -> Chain<SingularCube> {
        let mut out = Chain::zero();
        for j in 0..self.domain.degree() {
            for side in [1u8, 0] {
                out.add_term(
                    self.restrict(&self.domain.restrict(j, side)),
                    face_sign(j, side),
                );
            }
        }
        out
    }
}

impl CanonicalCube {
    /// Builds a cube from the image of every face of `I^p`.
    pub fn from_fn(p: usize, mut f: impl FnMut(&CubeFace) -> CellChain) -> Self {
        Self {
            dim: p,
            images: CubeFace::all_faces(p)
                .into_iter()
                .filter_map(|face| {
                    let img = f(&face);
                    (!img.is_zero()).then_some((face, img))
                })
                .collect(),
        }
    }

    pub fn image(&self, f: &CubeFace) -> CellChain {
        self.images.get(f).cloned().unwrap_or_default()
    }

    /// Image of the top face: the cellular chain this cube realizes.
    pub fn realize(&self) -> CellChain {
        self.image(&CubeFace::full(self.dim))
    }

    /// Restriction to `x_j = side`, reindexed onto `I^{p-1}`.
    pub fn face(&self, j: usize, side: u8) -> Self {
        let pin = if side == 0 { Coord::Zero } else { Coord::One };
        Self {
            dim: self.dim - 1,
            images: self
                .images
                .iter()
                .filter(|(f, _)| f.coords[j] == pin)
                .map(|(f, img)| {
                    let mut c = f.coords.clone();
                    c.remove(j);
                    (CubeFace { coords: c }, img.clone())
                })
                .collect(),
        }
    }

    pub fn boundary(&self) -> NormalizedCubicalChain {
        let mut out = Chain::zero();
        for j in 0..self.dim {
            for side in [1u8, 0] {
                out.add_term(self.face(j, side), face_sign(j, side));
            }
        }
        out
    }

    /// The map ignores free coordinate `j`: faces free in `j` vanish and the
    /// two sides of `j` carry equal images.
    pub fn independent_of(&self, j: usize) -> bool {
        CubeFace::all_faces(self.dim)
            .iter()
            .all(|f| match f.coords[j] {
                Coord::Free => self.image(f).is_zero(),
                Coord::Zero => {
                    let mut g = f.clone();
                    g.coords[j] = Coord::One;
                    self.image(f) == self.image(&g)
                }
                Coord::One => true,
            })
    }

    pub fn is_degenerate(&self) -> bool {
        (0..self.dim).any(|j| self.independent_of(j))
    }

    /// Whether the face images form a chain map from `I^p` into `target`.
    pub fn is_chain_level(&self, target: &Cubulation) -> bool {
        CubeFace::all_faces(self.dim).iter().all(|f| {
            if f.degree() == 0 {
                return true;
            }
            let lhs = target.chain_boundary(&self.image(f));
            let mut rhs = CellChain::zero();
            for j in 0..f.degree() {
                for side in [0u8, 1] {
                    rhs.add_scaled(&self.image(&f.restrict(j, side)), face_sign(j, side));
                }
            }
            lhs == rhs
        })
    }
}

/// Reindexes every term to the standard cube, drops degenerate terms and
/// merges equal ones.
pub fn normalize(c: &Chain<SingularCube>) -> NormalizedCubicalChain {
    let mut out = Chain::zero();
    for (s, k) in c.iter() {
        let cc = s.canonical();
        if !cc.is_degenerate() {
            out.add_term(cc, k);
        }
    }
    out
}

/// Normalizes a chain that is already over canonical cubes.
pub fn normalize_canonical(c: &NormalizedCubicalChain) -> NormalizedCubicalChain {
    Chain::from_terms(
        c.iter()
            .filter(|(s, _)| !s.is_degenerate())
            .map(|(s, k)| (s.clone(), k)),
    )
}

pub fn boundary_canonical(c: &NormalizedCubicalChain) -> NormalizedCubicalChain {
    c.map_linear::<_, ()>(|s| Ok(s.boundary()))
        .unwrap_or_default()
}

/// Total cellular chain realized by a normalized chain.
pub fn realize(c: &NormalizedCubicalChain) -> CellChain {
    let mut out = CellChain::zero();
    for (s, k) in c.iter() {
        out.add_scaled(&s.realize(), k);
    }
    out
}
