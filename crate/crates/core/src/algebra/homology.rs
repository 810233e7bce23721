use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{smith_normal_form, SmithForm};
use super::{AlgebraError, IntMatrix};

/// Boundary matrices of a finitely generated free chain complex.
///
/// `matrix_at(k)` is the matrix of `∂: C_k -> C_{k-1}` with columns indexed by
/// degree-`k` generators. Degrees outside `min_degree..min_degree+len` are zero
/// groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBoundaryMatrices {
    pub min_degree: i64,
    /// Number of generators per degree, starting at `min_degree`.
    pub ranks: Vec<usize>,
    /// `matrices[i]` is `∂` out of degree `min_degree + i`.
    pub matrices: Vec<IntMatrix>,
}

impl GradedBoundaryMatrices {
    /// Builds the graded matrices and checks the shape invariant.
    pub fn new(min_degree: i64, matrices: Vec<IntMatrix>) -> Result<Self, AlgebraError> {
        let ranks: Vec<usize> = matrices.iter().map(IntMatrix::cols).collect();
        for (i, m) in matrices.iter().enumerate() {
            let below = if i == 0 { 0 } else { ranks[i - 1] };
            if m.rows() != below {
                return Err(AlgebraError::ShapeMismatch {
                    degree: min_degree + i as i64,
                    expected: below,
                    found: m.rows(),
                });
            }
        }
        Ok(Self {
            min_degree,
            ranks,
            matrices,
        })
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.min_degree..self.min_degree + self.ranks.len() as i64
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.ranks.len() as i64 - 1
    }

    fn idx(&self, k: i64) -> Option<usize> {
        let i = k - self.min_degree;
        (i >= 0 && (i as usize) < self.ranks.len()).then_some(i as usize)
    }

    pub fn rank_at(&self, k: i64) -> usize {
        self.idx(k).map_or(0, |i| self.ranks[i])
    }

    /// `∂_k` as a `rank(k-1) x rank(k)` matrix; zero-sized outside the range.
    pub fn matrix_at(&self, k: i64) -> IntMatrix {
        match self.idx(k) {
            Some(i) => self.matrices[i].clone(),
            None => IntMatrix::zeros(self.rank_at(k - 1), self.rank_at(k)),
        }
    }

    /// First degree `k` with `∂_{k-1} ∂_k != 0`.
    pub fn check_composition(&self) -> Result<(), AlgebraError> {
        for k in self.degrees() {
            if k == self.min_degree {
                continue;
            }
            if !(&self.matrix_at(k - 1) * &self.matrix_at(k)).is_zero() {
                return Err(AlgebraError::CompositionNotZero(k));
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|k| sign(k) * self.rank_at(k) as i64)
            .sum()
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Betti number and torsion coefficients of one homology group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(with = "super::bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        Self {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Homology in every degree of a complex, keyed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct HomologyGroups {
    pub groups: BTreeMap<i64, HomologyGroup>,
}

impl HomologyGroups {
    pub fn at(&self, k: i64) -> HomologyGroup {
        self.groups.get(&k).cloned().unwrap_or_default()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.values().map(|g| g.betti).collect()
    }

    /// Free groups with the given Betti numbers starting at degree 0.
    pub fn free_from(bettis: &[usize]) -> Self {
        Self {
            groups: bettis
                .iter()
                .enumerate()
                .map(|(k, &b)| (k as i64, HomologyGroup::free(b)))
                .collect(),
        }
    }

    /// Equality ignoring trailing zero groups on either side.
    pub fn same_groups(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<i64> = self
            .groups
            .keys()
            .chain(other.groups.keys())
            .copied()
            .collect();
        keys.into_iter().all(|k| self.at(k) == other.at(k))
    }
}

impl fmt::Display for HomologyGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(k, g)| format!("H_{k}={g}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Homology of one degree together with explicit cycle representatives.
///
/// Generators are ordered torsion first (by increasing order), then free.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub group: HomologyGroup,
    /// Order of each generator; zero for free generators.
    pub orders: Vec<BigInt>,
    /// Cycle representatives in chain coordinates, one per generator.
    pub cycles: Vec<Vec<BigInt>>,
    // coordinates: c = u2 * (v_inv * z)[r..], then pick `keep` entries
    kernel_offset: usize,
    v_inv: IntMatrix,
    u2: IntMatrix,
    keep: Vec<usize>,
}

impl HomologyBasis {
    /// Coordinates of a cycle in this basis; torsion entries are reduced into
    /// `[0, d)`.
    pub fn coordinates(&self, z: &[BigInt]) -> Vec<BigInt> {
        let full = self.v_inv.apply(z);
        let tail = &full[self.kernel_offset..];
        let c = self.u2.apply(tail);
        self.keep
            .iter()
            .zip(&self.orders)
            .map(|(&i, d)| {
                if d.is_zero() {
                    c[i].clone()
                } else {
                    c[i].mod_floor(d)
                }
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }
}

fn basis_for_degree(b: &GradedBoundaryMatrices, k: i64) -> HomologyBasis {
    let n = b.rank_at(k);
    let dk: SmithForm = smith_normal_form(&b.matrix_at(k));
    let r = dk.rank();
    let z = dk.v.columns(r..n);
    // image of ∂_{k+1} sits inside span(z); A = its coordinates there
    let next = b.matrix_at(k + 1);
    let a = (&dk.v_inv * &next).row_slice(r..n);
    let f2 = smith_normal_form(&a);
    let w = &z * &f2.u_inv;
    let factors = f2.factors();
    let m = n - r;

    let mut torsion_idx = Vec::new();
    let mut free_idx = Vec::new();
    for i in 0..m {
        match factors.get(i) {
            Some(d) if d.is_one() => {}
            Some(_) => torsion_idx.push(i),
            None => free_idx.push(i),
        }
    }
    let keep: Vec<usize> = torsion_idx.iter().chain(&free_idx).copied().collect();
    let orders: Vec<BigInt> = keep
        .iter()
        .map(|&i| factors.get(i).cloned().unwrap_or_default())
        .collect();
    let cycles = keep.iter().map(|&i| w.column(i)).collect();
    HomologyBasis {
        group: HomologyGroup {
            betti: free_idx.len(),
            torsion: torsion_idx.iter().map(|&i| factors[i].clone()).collect(),
        },
        orders,
        cycles,
        kernel_offset: r,
        v_inv: dk.v_inv,
        u2: f2.u,
        keep,
    }
}

/// Explicit homology bases for every degree in range.
pub fn homology_bases(
    b: &GradedBoundaryMatrices,
) -> Result<BTreeMap<i64, HomologyBasis>, AlgebraError> {
    b.check_composition()?;
    Ok(b.degrees().map(|k| (k, basis_for_degree(b, k))).collect())
}

/// `H_k = ker ∂_k / im ∂_{k+1}` for every degree, via Smith normal form.
pub fn homology_of_complex(b: &GradedBoundaryMatrices) -> Result<HomologyGroups, AlgebraError> {
    Ok(HomologyGroups {
        groups: homology_bases(b)?
            .into_iter()
            .map(|(k, basis)| (k, basis.group))
            .collect(),
    })
}

/// Matrix of an induced map on homology in one degree.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub degree: i64,
    /// Rows index target generators, columns source generators.
    pub matrix: IntMatrix,
    pub is_iso: bool,
    pub source: HomologyGroup,
    pub target: HomologyGroup,
}

impl InducedMap {
    /// True when the matrix is the identity (same generator count required).
    pub fn is_identity(&self) -> bool {
        self.matrix.rows() == self.matrix.cols()
            && self.matrix == IntMatrix::identity(self.matrix.rows())
    }
}

/// Per-degree chain map matrices `f_k: C_k(source) -> C_k(target)`.
pub type ChainMapMatrices = BTreeMap<i64, IntMatrix>;

fn map_at(
    f: &ChainMapMatrices,
    k: i64,
    src: &GradedBoundaryMatrices,
    dst: &GradedBoundaryMatrices,
) -> IntMatrix {
    f.get(&k)
        .cloned()
        .unwrap_or_else(|| IntMatrix::zeros(dst.rank_at(k), src.rank_at(k)))
}

/// Checks `∂' f_k = f_{k-1} ∂` in every degree touched by either complex.
pub fn check_chain_map(
    f: &ChainMapMatrices,
    source: &GradedBoundaryMatrices,
    target: &GradedBoundaryMatrices,
) -> Result<(), AlgebraError> {
    let lo = source.min_degree.min(target.min_degree);
    let hi = source.max_degree().max(target.max_degree()) + 1;
    for k in lo..=hi {
        let fk = map_at(f, k, source, target);
        if fk.rows() != target.rank_at(k) || fk.cols() != source.rank_at(k) {
            return Err(AlgebraError::ShapeMismatch {
                degree: k,
                expected: target.rank_at(k),
                found: fk.rows(),
            });
        }
        let lhs = &target.matrix_at(k) * &fk;
        let rhs = &map_at(f, k - 1, source, target) * &source.matrix_at(k);
        if lhs != rhs {
            return Err(AlgebraError::NotAChainMap(k));
        }
    }
    Ok(())
}

/// Induced maps on homology in every degree where either complex lives.
pub fn induced_map_on_homology(
    f: &ChainMapMatrices,
    source: &GradedBoundaryMatrices,
    target: &GradedBoundaryMatrices,
) -> Result<Vec<InducedMap>, AlgebraError> {
    source.check_composition()?;
    target.check_composition()?;
    check_chain_map(f, source, target)?;
    let lo = source.min_degree.min(target.min_degree);
    let hi = source.max_degree().max(target.max_degree());
    let mut out = Vec::new();
    for k in lo..=hi {
        let sb = basis_for_degree(source, k);
        let tb = basis_for_degree(target, k);
        let fk = map_at(f, k, source, target);
        let cols: Vec<Vec<BigInt>> = sb
            .cycles
            .iter()
            .map(|z| tb.coordinates(&fk.apply(z)))
            .collect();
        let matrix = IntMatrix::from_columns(tb.rank(), &cols);
        let is_iso = sb.group == tb.group && surjective(&matrix, &tb.orders);
        out.push(InducedMap {
            degree: k,
            matrix,
            is_iso,
            source: sb.group,
            target: tb.group,
        });
    }
    Ok(out)
}

/// Whether `m` maps onto `Z^n / (orders)`; a zero order means a free summand.
fn surjective(m: &IntMatrix, orders: &[BigInt]) -> bool {
    let n = orders.len();
    if n == 0 {
        return true;
    }
    let rel = IntMatrix::diagonal(n, n, orders);
    let f = smith_normal_form(&m.hstack(&rel));
    let factors = f.factors();
    factors.len() == n && factors.iter().all(One::is_one)
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let f = smith_normal_form(a);
    let ub = f.u.apply(b);
    let factors = f.factors();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        match factors.get(i) {
            Some(d) => {
                let (q, rem) = c.div_rem(d);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            None if !c.is_zero() => return None,
            None => {}
        }
    }
    Some(f.v.apply(&y))
}

/// Converts small-integer vectors for convenience.
pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Shortcut used by callers that only need `i64` coordinates.
pub fn small_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

/// Absolute values of torsion coefficients as `u64`, for display and tests.
pub fn torsion_u64(g: &HomologyGroup) -> Vec<u64> {
    g.torsion.iter().filter_map(|t| t.abs().to_u64()).collect()
}
