//! The Morse-Bott chain complex assembled from a flow category.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    homology_of_complex, AlgebraError, GradedBoundaryMatrices, HomologyGroups, IntMatrix,
};
use crate::chains::{Chain, FormalChain, GeneratorId, GeneratorKind};
use crate::cubical::CellChain;
use crate::flow::{CriticalLevel, FlowCategory};

/// A cell of a component of level `level`; Morse-Bott degree `dim + level`.
///
/// Field order gives the enumeration order (level, component, cell).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MbGenerator {
    pub level: usize,
    pub component: String,
    pub cell: String,
    pub dim: usize,
}

impl MbGenerator {
    pub fn degree(&self) -> i64 {
        (self.dim + self.level) as i64
    }

    pub fn to_generator_id(&self) -> GeneratorId {
        GeneratorId::new(
            format!("{}:{}", self.level, self.cell),
            self.degree(),
            GeneratorKind::Cell,
        )
    }
}

impl fmt::Display for MbGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.cell, self.level)
    }
}

pub type MbChain = Chain<MbGenerator>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("d-squared fails at Morse-Bott degree {k}, level {i}, gap {j}")]
    DSquaredViolation { k: i64, i: usize, j: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn pm(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Generator of `cell` on level `i`, if the cell exists there.
pub fn generator(fc: &FlowCategory, i: usize, cell: &str) -> Option<MbGenerator> {
    let l = fc.level(i)?;
    let k = l.component_of_cell(cell)?;
    Some(MbGenerator {
        level: i,
        component: k.id.clone(),
        cell: cell.to_string(),
        dim: k.cubulation.cell(cell)?.dim,
    })
}

/// Lifts a cellular chain on one level to Morse-Bott generators.
pub fn lift(level: &CriticalLevel, c: &CellChain) -> MbChain {
    let mut out = MbChain::zero();
    for (id, x) in c.iter() {
        if let Some(k) = level.component_of_cell(id) {
            let dim = k.cubulation.cell(id).map_or(0, |c| c.dim);
            out.add_term(
                MbGenerator {
                    level: level.index,
                    component: k.id.clone(),
                    cell: id.clone(),
                    dim,
                },
                x,
            );
        }
    }
    out
}

/// Cells of a Morse-Bott chain lying on level `i`.
pub fn on_level(c: &MbChain, i: usize) -> CellChain {
    CellChain::from_terms(
        c.iter()
            .filter(|(g, _)| g.level == i)
            .map(|(g, x)| (g.cell.clone(), x)),
    )
}

/// `(-1)^{p+i}` times the cellular boundary.
pub fn partial0(fc: &FlowCategory, g: &MbGenerator) -> MbChain {
    let Some(l) = fc.level(g.level) else {
        return MbChain::zero();
    };
    let Some(k) = l.component(&g.component) else {
        return MbChain::zero();
    };
    lift(l, &k.cubulation.boundary(&g.cell).scaled(pm(g.degree())))
}

/// Pullback along `M(i, i-j)` followed by the endpoint map.
pub fn partialj(fc: &FlowCategory, g: &MbGenerator, j: usize) -> MbChain {
    if j == 0 {
        return partial0(fc, g);
    }
    if j > g.level {
        return MbChain::zero();
    }
    let t = g.level - j;
    let (Some(src), Some(tgt), Some(b)) = (fc.level(g.level), fc.level(t), fc.bundle(g.level, t))
    else {
        return MbChain::zero();
    };
    lift(tgt, &b.push(&g.cell, src))
}

/// Linear extension of `partialj`.
pub fn partialj_chain(fc: &FlowCategory, c: &MbChain, j: usize) -> MbChain {
    let mut out = MbChain::zero();
    for (g, x) in c.iter() {
        out.add_scaled(&partialj(fc, g, j), x);
    }
    out
}

/// `∂ = Σ_j ∂_j`.
pub fn total_boundary(fc: &FlowCategory, g: &MbGenerator) -> MbChain {
    let mut out = MbChain::zero();
    for j in 0..=g.level {
        out.add_scaled(&partialj(fc, g, j), 1);
    }
    out
}

/// As a formal chain for generic consumers.
pub fn to_formal(c: &MbChain) -> FormalChain {
    c.map_keys(MbGenerator::to_generator_id)
}

/// All generators of Morse-Bott degree `k`, sorted.
pub fn generators_of_degree(fc: &FlowCategory, k: i64) -> Vec<MbGenerator> {
    let mut out = Vec::new();
    for (i, l) in &fc.levels {
        let p = k - *i as i64;
        if p < 0 {
            continue;
        }
        for comp in &l.components {
            for cell in comp.cubulation.cells_of_dim(p as usize) {
                out.push(MbGenerator {
                    level: *i,
                    component: comp.id.clone(),
                    cell: cell.to_string(),
                    dim: p as usize,
                });
            }
        }
    }
    out.sort();
    out
}

/// Default truncation: one past the top Morse-Bott degree.
pub fn default_k_max(fc: &FlowCategory) -> i64 {
    fc.max_degree().map_or(1, |d| d + 1).max(1)
}

/// Smallest `k_max` for which `H_k` of the truncated complex is exact.
pub fn truncation_bound(fc: &FlowCategory, k: i64) -> i64 {
    if fc.levels.values().all(CriticalLevel::is_empty) {
        0
    } else {
        k + 1
    }
}

/// `Σ_q ∂_q ∂_{j-q} = 0` on every generator and every gap.
pub fn check_blocks(fc: &FlowCategory) -> Result<(), ComplexError> {
    for (i, l) in &fc.levels {
        for comp in &l.components {
            for cell in comp.cubulation.cells() {
                let g = MbGenerator {
                    level: *i,
                    component: comp.id.clone(),
                    cell: cell.id.clone(),
                    dim: cell.dim,
                };
                for j in 0..=*i {
                    let mut acc = MbChain::zero();
                    for q in 0..=j {
                        let inner = partialj(fc, &g, j - q);
                        acc.add_scaled(&partialj_chain(fc, &inner, q), 1);
                    }
                    if !acc.is_zero() {
                        return Err(ComplexError::DSquaredViolation {
                            k: g.degree(),
                            i: *i,
                            j,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Generators in degrees `0..=k_max` and the assembled boundary.
#[derive(Clone, Debug)]
pub struct MorseBottComplex {
    pub k_max: i64,
    pub generators: BTreeMap<i64, Vec<MbGenerator>>,
    pub boundary: GradedBoundaryMatrices,
}

impl MorseBottComplex {
    pub fn index(&self, g: &MbGenerator) -> Option<usize> {
        self.generators.get(&g.degree())?.binary_search(g).ok()
    }

    pub fn rank(&self, k: i64) -> usize {
        self.generators.get(&k).map_or(0, Vec::len)
    }

    /// Coordinate vector of a chain concentrated in degree `k`.
    pub fn vector(&self, k: i64, c: &MbChain) -> Vec<i64> {
        let mut v = vec![0; self.rank(k)];
        for (g, x) in c.iter() {
            if g.degree() == k {
                if let Some(ix) = self.index(g) {
                    v[ix] += x;
                }
            }
        }
        v
    }

    /// The `∂_j` block from level `i` to level `i-j` in degree `k`.
    pub fn block(&self, k: i64, i: usize, j: usize) -> IntMatrix {
        let empty = Vec::new();
        let cols: Vec<usize> = self
            .generators
            .get(&k)
            .unwrap_or(&empty)
            .iter()
            .enumerate()
            .filter(|(_, g)| g.level == i)
            .map(|(x, _)| x)
            .collect();
        let rows: Vec<usize> = self
            .generators
            .get(&(k - 1))
            .unwrap_or(&empty)
            .iter()
            .enumerate()
            .filter(|(_, g)| j <= i && g.level == i - j)
            .map(|(x, _)| x)
            .collect();
        let m = self.boundary.matrix_at(k);
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out.set(a, b, m.get(r, c).clone());
            }
        }
        out
    }
}

/// Matrix of a chain-level operator from degree `k` of `src` to degree
/// `k + shift` of `dst`.
pub fn operator_matrix(
    src: &MorseBottComplex,
    dst: &MorseBottComplex,
    k: i64,
    shift: i64,
    op: impl Fn(&MbGenerator) -> MbChain,
) -> IntMatrix {
    let empty = Vec::new();
    let gens = src.generators.get(&k).unwrap_or(&empty);
    let mut m = IntMatrix::zeros(dst.rank(k + shift), gens.len());
    for (c, g) in gens.iter().enumerate() {
        for (h, x) in op(g).iter() {
            if h.degree() != k + shift {
                continue;
            }
            if let Some(r) = dst.index(h) {
                m.add_to(r, c, &x.into());
            }
        }
    }
    m
}

/// Builds the complex in degrees `0..=k_max` and checks both identities.
pub fn assemble(fc: &FlowCategory, k_max: i64) -> Result<MorseBottComplex, ComplexError> {
    check_blocks(fc)?;
    let k_max = k_max.max(0);
    let generators: BTreeMap<i64, Vec<MbGenerator>> = (0..=k_max)
        .map(|k| (k, generators_of_degree(fc, k)))
        .collect();
    let partial = MorseBottComplex {
        k_max,
        generators,
        boundary: GradedBoundaryMatrices::new(0, vec![])?,
    };
    let mut mats = Vec::new();
    for k in 0..=k_max {
        if k == 0 {
            mats.push(IntMatrix::zeros(0, partial.rank(0)));
            continue;
        }
        mats.push(operator_matrix(&partial, &partial, k, -1, |g| {
            total_boundary(fc, g)
        }));
    }
    let boundary = GradedBoundaryMatrices::new(0, mats)?;
    boundary.check_composition()?;
    Ok(MorseBottComplex {
        boundary,
        ..partial
    })
}

/// Homology in degrees `0..k_max`, `k_max` defaulting to [`default_k_max`].
pub fn morse_bott_homology(
    fc: &FlowCategory,
    k_max: Option<i64>,
) -> Result<HomologyGroups, ComplexError> {
    let k_max = k_max.unwrap_or_else(|| default_k_max(fc));
    let c = assemble(fc, k_max)?;
    let mut h = homology_of_complex(&c.boundary)?;
    h.groups.retain(|k, _| *k < k_max);
    Ok(h)
}
