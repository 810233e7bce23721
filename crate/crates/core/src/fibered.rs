//! Fibered products: degrees, the signed boundary rule, pullbacks along
//! trivial bundle pieces, and associativity.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::Chain;
use crate::cubical::{CanonicalCube, CellChain, CubeFace, Cubulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberedError {
    #[error("negative fibered degree {p1} + {p2} - {b}")]
    NegativeDegree { p1: i64, p2: i64, b: i64 },
    #[error("chain meets cell {0} outside the base component")]
    BaseMismatch(String),
    #[error("fiber has no fundamental chain")]
    NoFundamental,
}

fn parity(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `p1 + p2 - b`.
pub fn fibered_degree(p1: i64, p2: i64, b: i64) -> Result<i64, FiberedError> {
    let d = p1 + p2 - b;
    if d < 0 {
        return Err(FiberedError::NegativeDegree { p1, p2, b });
    }
    Ok(d)
}

/// Sign relating `P ×_B (B × F)` to the plain product `P × F`.
///
/// The orientation relation carries `(-1)^{b·dim P2}` with `dim P2 = b + f`.
/// Writing the tangent space of `P × B × F` as `T(P × F) ⊕ ν` with the
/// diagonal normal `ν` taken from the first factor costs `(-1)^b` to trade it
/// for the second factor and `(-1)^{b·f}` to move it past `TF`. The three
/// factors multiply to `+1`, so pullback keeps the product orientation.
pub fn pullback_sign(b: i64, f: i64) -> i64 {
    let relation = parity(b * (b + f));
    let normal_swap = parity(b);
    let reorder = parity(b * f);
    relation * normal_swap * reorder
}

/// Symbolic fibered expression: named leaves (with `∂` marks) glued over
/// named bases.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FpExpr {
    Leaf {
        name: String,
        degree: i64,
        marks: u8,
    },
    Node {
        left: Box<FpExpr>,
        base: String,
        base_dim: i64,
        right: Box<FpExpr>,
    },
}

impl FpExpr {
    pub fn leaf(name: impl Into<String>, degree: i64) -> Self {
        Self::Leaf {
            name: name.into(),
            degree,
            marks: 0,
        }
    }

    pub fn over(left: Self, base: impl Into<String>, base_dim: i64, right: Self) -> Self {
        Self::Node {
            left: Box::new(left),
            base: base.into(),
            base_dim,
            right: Box::new(right),
        }
    }

    /// Degree, with the additivity law enforced at every node.
    pub fn degree(&self) -> Result<i64, FiberedError> {
        match self {
            Self::Leaf { degree, .. } => Ok(*degree),
            Self::Node {
                left,
                base_dim,
                right,
                ..
            } => fibered_degree(left.degree()?, right.degree()?, *base_dim),
        }
    }

    /// Formal boundary. A leaf marked twice is zero, so `∂∂` of a leaf
    /// vanishes by fiat and the interesting cancellation happens at nodes.
    pub fn boundary(&self) -> Result<Chain<FpExpr>, FiberedError> {
        match self {
            Self::Leaf {
                name,
                degree,
                marks,
            } => {
                if *marks >= 1 || *degree == 0 {
                    return Ok(Chain::zero());
                }
                Ok(Chain::single(
                    Self::Leaf {
                        name: name.clone(),
                        degree: degree - 1,
                        marks: marks + 1,
                    },
                    1,
                ))
            }
            Self::Node {
                left,
                base,
                base_dim,
                right,
            } => fibered_boundary(left, right, base, *base_dim),
        }
    }

    /// Leaves and bases read left to right; bracket-independent.
    pub fn flatten(&self) -> Vec<String> {
        match self {
            Self::Leaf { name, marks, .. } => {
                vec![format!("{}{name}", "∂".repeat(*marks as usize))]
            }
            Self::Node {
                left, base, right, ..
            } => {
                let mut v = left.flatten();
                v.push(format!("/{base}"));
                v.extend(right.flatten());
                v
            }
        }
    }

    fn degrees_flat(&self, leaves: &mut Vec<i64>, bases: &mut Vec<i64>) {
        match self {
            Self::Leaf { degree, .. } => leaves.push(*degree),
            Self::Node {
                left,
                base_dim,
                right,
                ..
            } => {
                left.degrees_flat(leaves, bases);
                bases.push(*base_dim);
                right.degrees_flat(leaves, bases);
            }
        }
    }

    /// Some contiguous sub-product has negative expected dimension, so the
    /// transverse fibered product is empty whatever the bracketing.
    pub fn is_generically_empty(&self) -> bool {
        let (mut d, mut b) = (Vec::new(), Vec::new());
        self.degrees_flat(&mut d, &mut b);
        (0..d.len()).any(|i| {
            let mut acc = 0;
            (i..d.len()).any(|j| {
                acc += d[j] - if j > i { b[j - 1] } else { 0 };
                acc < 0
            })
        })
    }

    /// Orientation sign of the whole expression under a per-node sign rule
    /// `rule(b, dim right, dim left)`.
    pub fn orientation(&self, rule: &dyn Fn(i64, i64, i64) -> i64) -> Result<i64, FiberedError> {
        match self {
            Self::Leaf { .. } => Ok(1),
            Self::Node {
                left,
                base_dim,
                right,
                ..
            } => Ok(left.orientation(rule)?
                * right.orientation(rule)?
                * rule(*base_dim, right.degree()?, left.degree()?)),
        }
    }
}

impl fmt::Display for FpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Leaf { name, marks, .. } => write!(f, "{}{name}", "∂".repeat(*marks as usize)),
            Self::Node {
                left, base, right, ..
            } => write!(f, "({left} x_{base} {right})"),
        }
    }
}

impl fmt::Debug for FpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `∂(P1 ×_B P2) = ∂P1 ×_B P2 + (-1)^{p1+b} P1 ×_B ∂P2`.
pub fn fibered_boundary(
    p1: &FpExpr,
    p2: &FpExpr,
    base: &str,
    b: i64,
) -> Result<Chain<FpExpr>, FiberedError> {
    let deg1 = p1.degree()?;
    fibered_degree(deg1, p2.degree()?, b)?;
    // a transverse product of negative expected dimension is empty
    let mut out = Chain::zero();
    let mut push = |e: FpExpr, c: i64| {
        if !e.is_generically_empty() {
            out.add_term(e, c);
        }
    };
    for (d1, c) in p1.boundary()?.iter() {
        push(FpExpr::over(d1.clone(), base, b, p2.clone()), c);
    }
    let s = parity(deg1 + b);
    for (d2, c) in p2.boundary()?.iter() {
        push(FpExpr::over(p1.clone(), base, b, d2.clone()), s * c);
    }
    Ok(out)
}

pub fn chain_boundary(c: &Chain<FpExpr>) -> Result<Chain<FpExpr>, FiberedError> {
    c.map_linear(FpExpr::boundary)
}

/// The default node rule: pullback keeps the product orientation.
pub fn default_rule(b: i64, dim_right: i64, _dim_left: i64) -> i64 {
    pullback_sign(b, dim_right - b)
}

/// Flattened, oriented form of a chain of expressions.
fn oriented_flat(
    c: &Chain<FpExpr>,
    rule: &dyn Fn(i64, i64, i64) -> i64,
) -> Result<Chain<Vec<String>>, FiberedError> {
    let mut out = Chain::zero();
    for (e, k) in c.iter() {
        out.add_term(e.flatten(), k * e.orientation(rule)?);
    }
    Ok(out)
}

/// Bracket-free text of an oriented chain under the default rule, with
/// terms in sorted order. Two chains are equal as oriented fibered products
/// exactly when these strings are equal.
pub fn canonical_form(c: &Chain<FpExpr>) -> Result<String, FiberedError> {
    let flat = oriented_flat(c, &default_rule)?;
    let terms: Vec<(&Vec<String>, i64)> = flat.iter().collect();
    Ok(serde_json::to_string(&terms).expect("strings and integers serialize"))
}

/// Compatible data for `P1 ×_{B1} P2 ×_{B2} P3`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub p1: (String, i64),
    pub b1: (String, i64),
    pub p2: (String, i64),
    pub b2: (String, i64),
    pub p3: (String, i64),
}

impl Triple {
    fn leaves(&self) -> (FpExpr, FpExpr, FpExpr) {
        (
            FpExpr::leaf(&self.p1.0, self.p1.1),
            FpExpr::leaf(&self.p2.0, self.p2.1),
            FpExpr::leaf(&self.p3.0, self.p3.1),
        )
    }

    pub fn left(&self) -> FpExpr {
        let (a, b, c) = self.leaves();
        FpExpr::over(
            FpExpr::over(a, &self.b1.0, self.b1.1, b),
            &self.b2.0,
            self.b2.1,
            c,
        )
    }

    pub fn right(&self) -> FpExpr {
        let (a, b, c) = self.leaves();
        FpExpr::over(
            a,
            &self.b1.0,
            self.b1.1,
            FpExpr::over(b, &self.b2.0, self.b2.1, c),
        )
    }
}

/// Both bracketings agree as oriented chains, and so do their boundaries.
pub fn check_associativity_with(t: &Triple, rule: &dyn Fn(i64, i64, i64) -> i64) -> bool {
    let run = || -> Result<bool, FiberedError> {
        let (l, r) = (t.left(), t.right());
        if l.degree()? != r.degree()? {
            return Ok(false);
        }
        let lc = Chain::single(l, 1);
        let rc = Chain::single(r, 1);
        Ok(oriented_flat(&lc, rule)? == oriented_flat(&rc, rule)?
            && oriented_flat(&chain_boundary(&lc)?, rule)?
                == oriented_flat(&chain_boundary(&rc)?, rule)?)
    };
    run().unwrap_or(false)
}

pub fn check_associativity(t: &Triple) -> bool {
    check_associativity_with(t, &default_rule)
}

/// A bundle piece `B × F` over one base component, `∂₋` the projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialBundlePiece {
    pub base_component: String,
    pub base_dim: i64,
    pub fiber: Cubulation,
    pub orientation_coeff: i64,
}

impl TrivialBundlePiece {
    pub fn fiber_dim(&self) -> i64 {
        self.fiber.dim().map_or(0, |d| d as i64)
    }

    pub fn total_degree(&self) -> i64 {
        self.base_dim + self.fiber_dim()
    }

    /// Total sign carried by a pullback through this piece.
    pub fn sign(&self) -> i64 {
        self.orientation_coeff * pullback_sign(self.base_dim, self.fiber_dim())
    }
}

/// A pulled-back domain `Q × F`. The orientation is folded into
/// `oriented_top`, the signed sum of top cells (a relative cycle when `Q` has
/// boundary, so it is kept outside the cubulation).
#[derive(Clone, Debug)]
pub struct PulledBack {
    pub cubulation: Cubulation,
    pub oriented_top: CellChain,
    pub degree: i64,
}

/// Pulls a singular cube `σ: I^q -> B` back along `piece`.
///
/// `base` is the cubulation of the piece's base component; every cell in the
/// image of σ must belong to it.
pub fn pullback(
    sigma: &CanonicalCube,
    base: &Cubulation,
    piece: &TrivialBundlePiece,
) -> Result<PulledBack, FiberedError> {
    for img in sigma.images.values() {
        for (cell, _) in img.iter() {
            if !base.contains(cell) {
                return Err(FiberedError::BaseMismatch(cell.clone()));
            }
        }
    }
    let q = sigma.dim;
    let fund_f = piece
        .fiber
        .fundamental()
        .ok_or(FiberedError::NoFundamental)?;
    let cubulation = Cubulation::product(&Cubulation::standard_cube(q), &piece.fiber, |x, y| {
        format!("{x}|{y}")
    });
    let sign = piece.sign();
    let top = CubeFace::full(q).to_string();
    let oriented_top =
        CellChain::from_terms(fund_f.iter().map(|(y, c)| (format!("{top}|{y}"), sign * c)));
    Ok(PulledBack {
        cubulation,
        oriented_top,
        degree: fibered_degree(q as i64, piece.total_degree(), piece.base_dim)?,
    })
}

/// Oriented product chain `c × [F]` over pairs (base cell, fiber cell).
pub fn product_chain(
    c: &CellChain,
    piece: &TrivialBundlePiece,
) -> Result<Chain<(String, String)>, FiberedError> {
    let fund = piece
        .fiber
        .fundamental()
        .ok_or(FiberedError::NoFundamental)?;
    let s = piece.sign();
    let mut out = Chain::zero();
    for (x, a) in c.iter() {
        for (y, b) in fund.iter() {
            out.add_term((x.clone(), y.clone()), s * a * b);
        }
    }
    Ok(out)
}
