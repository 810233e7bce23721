use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::face::{face_sign, Coord, CubeFace};
use super::CubicalError;
use crate::algebra::{homology_of_complex, GradedBoundaryMatrices, HomologyGroups, IntMatrix};
use crate::chains::Chain;

/// Chain over cell ids of one cubulation.
pub type CellChain = Chain<String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    pub sign: i64,
    pub axis: usize,
    pub side: u8,
    pub target: String,
}

/// An abstract cube: `2·dim` boundary entries, one per (axis, side).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub boundary: Vec<BoundaryEntry>,
}

impl Cell {
    pub fn vertex(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            dim: 0,
            boundary: vec![],
        }
    }

    /// Oriented edge `from -> to`, so `∂ = from - to`.
    pub fn edge(id: impl Into<String>, from: &str, to: &str) -> Self {
        Self {
            id: id.into(),
            dim: 1,
            boundary: vec![
                BoundaryEntry {
                    sign: face_sign(0, 1),
                    axis: 0,
                    side: 1,
                    target: to.to_string(),
                },
                BoundaryEntry {
                    sign: face_sign(0, 0),
                    axis: 0,
                    side: 0,
                    target: from.to_string(),
                },
            ],
        }
    }

    pub fn entry(&self, axis: usize, side: u8) -> Option<&BoundaryEntry> {
        self.boundary
            .iter()
            .find(|e| e.axis == axis && e.side == side)
    }
}

/// Oriented cubical cell complex with an optional fundamental chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cubulation {
    cells: BTreeMap<String, Cell>,
    fundamental: Option<CellChain>,
    /// Manifold with boundary: the fundamental chain need not be a cycle.
    #[serde(default)]
    with_boundary: bool,
}

impl Cubulation {
    /// Validates structure, `∂² = 0` and the fundamental chain.
    pub fn new(cells: Vec<Cell>, fundamental: Option<CellChain>) -> Result<Self, CubicalError> {
        let mut map = BTreeMap::new();
        for mut c in cells {
            c.boundary.sort_by_key(|e| (e.axis, e.side));
            if map.contains_key(&c.id) {
                return Err(CubicalError::DuplicateCell(c.id));
            }
            map.insert(c.id.clone(), c);
        }
        let k = Self {
            cells: map,
            fundamental,
            with_boundary: false,
        };
        k.check()?;
        Ok(k)
    }

    /// Like [`Cubulation::new`] but for a manifold with boundary, whose
    /// fundamental chain is a relative cycle. The flag is only kept when the
    /// boundary is actually nonempty.
    pub fn new_with_boundary(
        cells: Vec<Cell>,
        fundamental: Option<CellChain>,
    ) -> Result<Self, CubicalError> {
        let mut k = Self::new(cells, None)?;
        k.with_boundary = true;
        let k = k.with_fundamental(fundamental)?;
        // a relative cycle with empty boundary is just closed
        let closed = k
            .fundamental
            .as_ref()
            .is_none_or(|f| k.chain_boundary(f).is_zero());
        Ok(Self {
            with_boundary: !closed,
            ..k
        })
    }

    pub fn has_boundary(&self) -> bool {
        self.with_boundary
    }

    fn check(&self) -> Result<(), CubicalError> {
        for c in self.cells.values() {
            if c.boundary.len() != 2 * c.dim {
                return Err(CubicalError::BadBoundary {
                    cell: c.id.clone(),
                    reason: format!(
                        "expected {} boundary entries, found {}",
                        2 * c.dim,
                        c.boundary.len()
                    ),
                });
            }
            for axis in 0..c.dim {
                for side in [0u8, 1] {
                    if c.boundary
                        .iter()
                        .filter(|e| e.axis == axis && e.side == side)
                        .count()
                        != 1
                    {
                        return Err(CubicalError::BadBoundary {
                            cell: c.id.clone(),
                            reason: format!("axis {axis} side {side} must appear exactly once"),
                        });
                    }
                }
            }
            for e in &c.boundary {
                if e.sign != 1 && e.sign != -1 {
                    return Err(CubicalError::BadBoundary {
                        cell: c.id.clone(),
                        reason: format!("sign {} is not +1 or -1", e.sign),
                    });
                }
                let t = self
                    .cells
                    .get(&e.target)
                    .ok_or_else(|| CubicalError::UnknownCell(e.target.clone()))?;
                if t.dim + 1 != c.dim {
                    return Err(CubicalError::BadBoundary {
                        cell: c.id.clone(),
                        reason: format!("face {} has dimension {}", t.id, t.dim),
                    });
                }
            }
        }
        for c in self.cells.values() {
            if !self.chain_boundary(&self.boundary(&c.id)).is_zero() {
                return Err(CubicalError::BoundarySquaredNonzero(c.id.clone()));
            }
        }
        if let Some(f) = &self.fundamental {
            let top = self.dim();
            for (id, _) in f.iter() {
                let c = self
                    .cells
                    .get(id)
                    .ok_or_else(|| CubicalError::UnknownCell(id.clone()))?;
                if Some(c.dim) != top {
                    return Err(CubicalError::FundamentalNotCycle(format!(
                        "cell {id} is not top-dimensional"
                    )));
                }
            }
            if !self.with_boundary && !self.chain_boundary(f).is_zero() {
                return Err(CubicalError::FundamentalNotCycle(
                    "boundary is nonzero".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn cell(&self, id: &str) -> Option<&Cell> {
        self.cells.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.cells.contains_key(id)
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Top dimension, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.cells.values().map(|c| c.dim).max()
    }

    /// Cell ids of dimension `p`, sorted.
    pub fn cells_of_dim(&self, p: usize) -> Vec<&str> {
        self.cells
            .values()
            .filter(|c| c.dim == p)
            .map(|c| c.id.as_str())
            .collect()
    }

    pub fn fundamental(&self) -> Option<&CellChain> {
        self.fundamental.as_ref()
    }

    pub fn with_fundamental(mut self, f: Option<CellChain>) -> Result<Self, CubicalError> {
        self.fundamental = f;
        self.check()?;
        Ok(self)
    }

    /// Cellular boundary of a single cell; unknown ids give zero.
    pub fn boundary(&self, id: &str) -> CellChain {
        self.cells.get(id).map_or_else(CellChain::zero, |c| {
            CellChain::from_terms(c.boundary.iter().map(|e| (e.target.clone(), e.sign)))
        })
    }

    pub fn chain_boundary(&self, c: &CellChain) -> CellChain {
        c.map_linear::<_, ()>(|id| Ok(self.boundary(id)))
            .unwrap_or_default()
    }

    /// Boundary matrices indexed by cells sorted by id within each dimension.
    pub fn boundary_matrices(&self) -> GradedBoundaryMatrices {
        let Some(top) = self.dim() else {
            return GradedBoundaryMatrices::new(0, vec![]).expect("empty complex");
        };
        let by_dim: Vec<Vec<&str>> = (0..=top).map(|p| self.cells_of_dim(p)).collect();
        let mut mats = Vec::new();
        for p in 0..=top {
            let rows = if p == 0 { 0 } else { by_dim[p - 1].len() };
            let mut m = IntMatrix::zeros(rows, by_dim[p].len());
            if p > 0 {
                let index: BTreeMap<&str, usize> = by_dim[p - 1]
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (*s, i))
                    .collect();
                for (j, id) in by_dim[p].iter().enumerate() {
                    for (t, c) in self.boundary(id).iter() {
                        m.add_to(index[t.as_str()], j, &c.into());
                    }
                }
            }
            mats.push(m);
        }
        GradedBoundaryMatrices::new(0, mats).expect("cellular shapes are consistent")
    }

    /// Connected components as sets of cell ids.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let ids: Vec<&String> = self.cells.keys().collect();
        let index: BTreeMap<&String, usize> =
            ids.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in self.cells.values() {
            for e in &c.boundary {
                let a = find(&mut parent, index[&c.id]);
                let b = find(&mut parent, index[&e.target]);
                parent[a] = b;
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().insert((*id).clone());
        }
        groups.into_values().collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .values()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Same complex with every id passed through `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Self {
        let cells = self
            .cells
            .values()
            .map(|c| Cell {
                id: f(&c.id),
                dim: c.dim,
                boundary: c
                    .boundary
                    .iter()
                    .map(|e| BoundaryEntry {
                        target: f(&e.target),
                        ..e.clone()
                    })
                    .collect(),
            })
            .collect();
        let fundamental = self.fundamental.as_ref().map(|ch| ch.map_keys(|k| f(k)));
        let k = if self.with_boundary {
            Self::new_with_boundary(cells, fundamental)
        } else {
            Self::new(cells, fundamental)
        };
        k.expect("renaming preserves validity")
    }

    // ---- standard builders ----

    pub fn point(id: &str) -> Self {
        Self::new(
            vec![Cell::vertex(id)],
            Some(CellChain::single(id.to_string(), 1)),
        )
        .expect("point")
    }

    /// Disjoint signed points, e.g. an oriented 0-manifold.
    pub fn points(pts: &[(&str, i64)]) -> Self {
        Self::new(
            pts.iter().map(|(id, _)| Cell::vertex(*id)).collect(),
            Some(CellChain::from_terms(
                pts.iter().map(|(id, s)| (id.to_string(), *s)),
            )),
        )
        .expect("points")
    }

    /// Single edge `a -> b` named `e`; no fundamental chain.
    pub fn interval(a: &str, b: &str, e: &str) -> Self {
        Self::new(
            vec![Cell::vertex(a), Cell::vertex(b), Cell::edge(e, a, b)],
            None,
        )
        .expect("interval")
    }

    /// `n`-gon with vertices `{v}{i}` and edges `{e}{i}: v_i -> v_{i+1}`.
    pub fn circle(v: &str, e: &str, n: usize) -> Self {
        assert!(n >= 1);
        let mut cells = Vec::new();
        for i in 0..n {
            cells.push(Cell::vertex(format!("{v}{i}")));
        }
        for i in 0..n {
            cells.push(Cell::edge(
                format!("{e}{i}"),
                &format!("{v}{i}"),
                &format!("{v}{}", (i + 1) % n),
            ));
        }
        let fund = CellChain::from_terms((0..n).map(|i| (format!("{e}{i}"), 1)));
        Self::new(cells, Some(fund)).expect("circle")
    }

    /// Standard cube `I^p` with one cell per face, named by [`CubeFace`].
    pub fn standard_cube(p: usize) -> Self {
        let cells = CubeFace::all_faces(p)
            .into_iter()
            .map(|f| {
                let free = f.free_axes();
                let boundary = (0..free.len())
                    .flat_map(|j| {
                        [0u8, 1].map(|side| BoundaryEntry {
                            sign: face_sign(j, side),
                            axis: j,
                            side,
                            target: f.restrict(j, side).to_string(),
                        })
                    })
                    .collect();
                Cell {
                    id: f.to_string(),
                    dim: f.degree(),
                    boundary,
                }
            })
            .collect();
        Self::new(cells, None).expect("standard cube")
    }

    /// Product complex; axes of `a` come first. Cells are named `name(x, y)`.
    ///
    /// `∂(x×y) = ∂x×y + (-1)^{dim x} x×∂y`.
    pub fn product(a: &Self, b: &Self, name: impl Fn(&str, &str) -> String) -> Self {
        let mut cells = Vec::new();
        for x in a.cells.values() {
            for y in b.cells.values() {
                let mut boundary = Vec::new();
                for e in &x.boundary {
                    boundary.push(BoundaryEntry {
                        sign: e.sign,
                        axis: e.axis,
                        side: e.side,
                        target: name(&e.target, &y.id),
                    });
                }
                let s = if x.dim % 2 == 0 { 1 } else { -1 };
                for e in &y.boundary {
                    boundary.push(BoundaryEntry {
                        sign: s * e.sign,
                        axis: x.dim + e.axis,
                        side: e.side,
                        target: name(&x.id, &e.target),
                    });
                }
                cells.push(Cell {
                    id: name(&x.id, &y.id),
                    dim: x.dim + y.dim,
                    boundary,
                });
            }
        }
        let fundamental = match (&a.fundamental, &b.fundamental) {
            (Some(fa), Some(fb)) => {
                let mut f = CellChain::zero();
                for (x, cx) in fa.iter() {
                    for (y, cy) in fb.iter() {
                        f.add_term(name(x, y), cx * cy);
                    }
                }
                Some(f)
            }
            _ => None,
        };
        Self::new(cells, fundamental).expect("product of valid cubulations is valid")
    }

    /// Disjoint union; ids must not collide.
    pub fn disjoint_union(parts: &[&Self]) -> Result<Self, CubicalError> {
        let cells = parts
            .iter()
            .flat_map(|p| p.cells.values().cloned())
            .collect();
        let fundamental = if parts.iter().all(|p| p.fundamental.is_some())
            && parts
                .iter()
                .filter_map(|p| p.dim())
                .collect::<BTreeSet<_>>()
                .len()
                <= 1
        {
            let mut f = CellChain::zero();
            for p in parts {
                f.add_scaled(p.fundamental.as_ref().expect("checked"), 1);
            }
            Some(f)
        } else {
            None
        };
        Self::new(cells, fundamental)
    }
}

/// Homology of the cellular chain complex.
pub fn cubical_homology(k: &Cubulation) -> Result<HomologyGroups, CubicalError> {
    Ok(homology_of_complex(&k.boundary_matrices())?)
}

/// Validated cellular chain map between two cubulations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularMap {
    images: BTreeMap<String, CellChain>,
}

impl CellularMap {
    pub fn image(&self, id: &str) -> CellChain {
        self.images.get(id).cloned().unwrap_or_default()
    }

    pub fn apply(&self, c: &CellChain) -> CellChain {
        c.map_linear::<_, ()>(|id| Ok(self.image(id)))
            .unwrap_or_default()
    }

    pub fn images(&self) -> &BTreeMap<String, CellChain> {
        &self.images
    }
}

/// Accepts `images` iff each image has the source cell's dimension and
/// `∂(f c) = f(∂c)` for every source cell. Missing cells map to zero.
pub fn cellular_chain_map(
    source: &Cubulation,
    target: &Cubulation,
    images: BTreeMap<String, CellChain>,
) -> Result<CellularMap, CubicalError> {
    for (id, img) in &images {
        let c = source
            .cell(id)
            .ok_or_else(|| CubicalError::UnknownCell(id.clone()))?;
        for (t, _) in img.iter() {
            let tc = target
                .cell(t)
                .ok_or_else(|| CubicalError::UnknownCell(t.clone()))?;
            if tc.dim != c.dim {
                return Err(CubicalError::NotChainLevel(id.clone()));
            }
        }
    }
    let f = CellularMap { images };
    for c in source.cells() {
        let lhs = target.chain_boundary(&f.image(&c.id));
        let rhs = f.apply(&source.boundary(&c.id));
        if lhs != rhs {
            return Err(CubicalError::NotChainLevel(c.id.clone()));
        }
    }
    Ok(f)
}

/// Vertex name in the standard cube for a given corner.
pub fn corner(bits: &[u8]) -> String {
    CubeFace {
        coords: bits
            .iter()
            .map(|b| if *b == 0 { Coord::Zero } else { Coord::One })
            .collect(),
    }
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle2() -> Cubulation {
        // u0, u1; d0: u0->u1; d1: u1->u0
        Cubulation::circle("u", "d", 2)
    }

    fn torus() -> Cubulation {
        let a = Cubulation::circle("a", "e", 3);
        let b = Cubulation::circle("b", "f", 3);
        Cubulation::product(&a, &b, |x, y| format!("{x}|{y}"))
    }

    #[test]
    fn circle_homology() {
        let h = cubical_homology(&circle2()).unwrap();
        assert_eq!(h.to_string(), "H_0=Z H_1=Z");
    }

    #[test]
    fn point_homology() {
        assert_eq!(
            cubical_homology(&Cubulation::point("p"))
                .unwrap()
                .to_string(),
            "H_0=Z"
        );
    }

    #[test]
    fn torus_homology_and_fundamental() {
        let t = torus();
        assert_eq!(t.len(), 36);
        assert_eq!(t.cells_of_dim(2).len(), 9);
        let h = cubical_homology(&t).unwrap();
        assert_eq!(h.to_string(), "H_0=Z H_1=Z^2 H_2=Z");
        assert_eq!(t.fundamental().unwrap().len(), 9);
        assert_eq!(t.euler_characteristic(), 0);
    }

    #[test]
    fn standard_cube_is_contractible() {
        for p in 0..=3 {
            let h = cubical_homology(&Cubulation::standard_cube(p)).unwrap();
            assert!(h.same_groups(&HomologyGroups::free_from(&[1])));
        }
    }

    #[test]
    fn rejects_bad_structure() {
        let e = Cubulation::new(vec![Cell::edge("e", "a", "b")], None).unwrap_err();
        assert!(matches!(e, CubicalError::UnknownCell(_)));
        let mut bad = Cell::edge("e", "a", "b");
        bad.boundary.pop();
        let e = Cubulation::new(vec![Cell::vertex("a"), Cell::vertex("b"), bad], None).unwrap_err();
        assert!(matches!(e, CubicalError::BadBoundary { .. }));
        let e = Cubulation::new(
            vec![
                Cell::vertex("a"),
                Cell::vertex("b"),
                Cell::edge("e", "a", "b"),
            ],
            Some(CellChain::single("e".into(), 1)),
        )
        .unwrap_err();
        assert!(matches!(e, CubicalError::FundamentalNotCycle(_)));
    }

    #[test]
    fn identity_and_constant_maps() {
        let c = circle2();
        let id: BTreeMap<_, _> = c
            .cells()
            .map(|x| (x.id.clone(), CellChain::single(x.id.clone(), 1)))
            .collect();
        cellular_chain_map(&c, &c, id).unwrap();
        let constant: BTreeMap<_, _> = ["u0", "u1"]
            .iter()
            .map(|v| (v.to_string(), CellChain::single("u0".into(), 1)))
            .collect();
        let f = cellular_chain_map(&c, &c, constant).unwrap();
        assert!(f.image("d0").is_zero());
    }

    #[test]
    fn mismatched_endpoints_rejected() {
        let c = circle2();
        let mut m: BTreeMap<_, _> = c
            .cells()
            .map(|x| (x.id.clone(), CellChain::single(x.id.clone(), 1)))
            .collect();
        m.insert("d0".into(), CellChain::single("d1".into(), 1));
        assert_eq!(
            cellular_chain_map(&c, &c, m).unwrap_err(),
            CubicalError::NotChainLevel("d0".into())
        );
    }

    #[test]
    fn product_euler_is_multiplicative() {
        let pieces = [
            Cubulation::point("p"),
            Cubulation::circle("v", "e", 2),
            Cubulation::interval("a", "b", "t"),
            Cubulation::points(&[("x", 1), ("y", -1)]),
            Cubulation::standard_cube(2),
        ];
        for a in &pieces {
            for b in &pieces {
                let p = Cubulation::product(a, b, |x, y| format!("{x}|{y}"));
                let chi = |k: &Cubulation| -> i64 {
                    cubical_homology(k)
                        .unwrap()
                        .groups
                        .iter()
                        .map(|(d, g)| {
                            if d % 2 == 0 {
                                g.betti as i64
                            } else {
                                -(g.betti as i64)
                            }
                        })
                        .sum()
                };
                assert_eq!(chi(&p), chi(a) * chi(b));
            }
        }
    }

    #[test]
    fn components_of_disjoint_union() {
        let u = Cubulation::disjoint_union(&[
            &Cubulation::circle("a", "e", 2),
            &Cubulation::circle("b", "f", 3),
        ])
        .unwrap();
        assert_eq!(u.components().len(), 2);
        assert!(u.fundamental().is_some());
    }
}
