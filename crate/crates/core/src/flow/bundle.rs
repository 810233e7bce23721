use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{CriticalLevel, Report, Rule};
use crate::chains::Chain;
use crate::cubical::{CellChain, Cubulation};
use crate::fibered::pullback_sign;

/// What a bundle connects, which fixes its degree shift on Morse-Bott degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BundleKind {
    /// Compactified moduli inside one category: lowers degree by one.
    Internal,
    /// Continuation between two categories: degree zero.
    Continuation,
    /// Chain homotopy between composites: raises degree by one.
    Homotopy,
}

impl BundleKind {
    pub fn shift(self) -> i64 {
        match self {
            Self::Internal => -1,
            Self::Continuation => 0,
            Self::Homotopy => 1,
        }
    }

    pub fn allows(self, f: Family) -> bool {
        match self {
            Self::Internal => f == Family::Internal,
            Self::Continuation => matches!(f, Family::Left | Family::Right),
            Self::Homotopy => matches!(f, Family::A | Family::B | Family::C | Family::D),
        }
    }
}

/// Which pair of bundles a boundary stratum is glued from.
///
/// For continuation data `Left` is source moduli followed by the continuation
/// and `Right` is the continuation followed by target moduli. For homotopy
/// data `A = F21 then F42`, `B = F31 then F43`, `C = f1 moduli then H` and
/// `D = H then f4 moduli`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum Family {
    #[default]
    Internal,
    Left,
    Right,
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn is_internal(&self) -> bool {
        *self == Self::Internal
    }

    /// Sign of this family's composite in the residue identity.
    pub fn sign(self) -> i64 {
        match self {
            Self::Right | Self::B => -1,
            _ => 1,
        }
    }
}

/// An isolated signed point inside a top cell of the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub id: String,
    pub sign: i64,
    pub cell: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumLabel {
    pub fiber_boundary_cell: String,
    pub via_index: usize,
    pub left_cell: String,
    pub right_cell: String,
    #[serde(default, skip_serializing_if = "Family::is_internal")]
    pub family: Family,
}

/// A trivial piece `K × F` over base component `K`, or `S × F` over a finite
/// signed point set `S ⊂ K` when `support` is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub base_component: String,
    pub fiber: Cubulation,
    pub orientation_coeff: i64,
    pub support: Option<Vec<SupportPoint>>,
    /// `∂₊` on product cells keyed by (base cell or support id, fiber cell).
    pub endpoint_map: BTreeMap<(String, String), CellChain>,
    pub strata: Vec<StratumLabel>,
}

type Pair = (String, String);

impl Piece {
    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim().unwrap_or(0)
    }

    pub fn is_point_supported(&self) -> bool {
        self.support.is_some()
    }

    /// Orientation carried by a pullback through this piece.
    pub fn epsilon(&self, base_dim: usize) -> i64 {
        self.orientation_coeff * pullback_sign(base_dim as i64, self.fiber_dim() as i64)
    }

    pub fn endpoint(&self, a: &str, y: &str) -> CellChain {
        self.endpoint_map
            .get(&(a.to_string(), y.to_string()))
            .cloned()
            .unwrap_or_default()
    }

    /// `∂₊` extended linearly over pairs.
    pub fn endpoint_chain(&self, c: &Chain<Pair>) -> CellChain {
        c.map_linear::<_, ()>(|(a, y)| Ok(self.endpoint(a, y)))
            .unwrap_or_default()
    }

    fn fundamental(&self) -> CellChain {
        self.fiber.fundamental().cloned().unwrap_or_default()
    }

    /// Signed fiber-boundary cells `∂[F]`.
    pub fn fiber_boundary(&self) -> CellChain {
        self.fiber.chain_boundary(&self.fundamental())
    }

    /// Cellular boundary of a product cell of the total space.
    pub fn pair_boundary(&self, base: &Cubulation, a: &str, y: &str) -> Chain<Pair> {
        let mut out = Chain::zero();
        let dy = self.fiber.boundary(y);
        if self.is_point_supported() {
            for (z, c) in dy.iter() {
                out.add_term((a.to_string(), z.clone()), c);
            }
            return out;
        }
        for (b, c) in base.boundary(a).iter() {
            out.add_term((b.clone(), y.to_string()), c);
        }
        let p = base.cell(a).map_or(0, |c| c.dim);
        let s = if p.is_multiple_of(2) { 1 } else { -1 };
        for (z, c) in dy.iter() {
            out.add_term((a.to_string(), z.clone()), s * c);
        }
        out
    }

    /// Pullback of a base cell followed by `∂₊`: `ε ∂₊(g × [F])`.
    ///
    /// Point-supported pieces only see top cells that contain support points.
    pub fn push(&self, g: &str, base: &Cubulation) -> CellChain {
        let Some(gc) = base.cell(g) else {
            return CellChain::zero();
        };
        let b = base.dim().unwrap_or(0);
        let eps = self.epsilon(b);
        let fund = self.fundamental();
        let mut out = CellChain::zero();
        match &self.support {
            None => {
                for (y, a) in fund.iter() {
                    out.add_scaled(&self.endpoint(g, y), eps * a);
                }
            }
            Some(pts) => {
                if gc.dim != b {
                    return out;
                }
                for s in pts.iter().filter(|s| s.cell == g) {
                    for (y, a) in fund.iter() {
                        out.add_scaled(&self.endpoint(&s.id, y), eps * a * s.sign);
                    }
                }
            }
        }
        out
    }

    /// Base-side labels of product cells: cells of `K`, or support ids.
    fn base_labels<'a>(&'a self, base: &'a Cubulation) -> Vec<(String, usize)> {
        match &self.support {
            None => base.cells().map(|c| (c.id.clone(), c.dim)).collect(),
            Some(pts) => pts.iter().map(|s| (s.id.clone(), 0)).collect(),
        }
    }
}

/// All pieces from level `from` of one category to level `to` of another
/// (or the same) category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub from: usize,
    pub to: usize,
    pub pieces: Vec<Piece>,
}

impl Bundle {
    /// Sum of [`Piece::push`] over pieces sitting on `g`'s component.
    pub fn push(&self, g: &str, src: &CriticalLevel) -> CellChain {
        let Some(k) = src.component_of_cell(g) else {
            return CellChain::zero();
        };
        let mut out = CellChain::zero();
        for p in self.pieces.iter().filter(|p| p.base_component == k.id) {
            out.add_scaled(&p.push(g, &k.cubulation), 1);
        }
        out
    }

    pub fn push_chain(&self, c: &CellChain, src: &CriticalLevel) -> CellChain {
        c.map_linear::<_, ()>(|g| Ok(self.push(g, src)))
            .unwrap_or_default()
    }

    /// Piece whose fiber contains `cell`.
    pub fn piece_with_fiber_cell(&self, cell: &str) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.fiber.contains(cell))
    }

    /// Fiber dimension law per piece: `i - t + δ` for product pieces and
    /// `b + i - t + δ` for point-supported ones, `δ` the kind's shift.
    pub fn validate_degrees(
        &self,
        kind: BundleKind,
        src: Option<&CriticalLevel>,
        what: &str,
    ) -> Report {
        let mut r = Report::default();
        let Some(src) = src else { return r };
        let delta = kind.shift();
        let (i, t) = (self.from as i64, self.to as i64);
        for (pi, p) in self.pieces.iter().enumerate() {
            let Some(k) = src.component(&p.base_component) else {
                continue;
            };
            let b = k.dim as i64;
            let f = p.fiber_dim() as i64;
            let expected = if p.is_point_supported() {
                b + i - t + delta
            } else {
                i - t + delta
            };
            if f != expected {
                r.push(
                    Rule::Degree,
                    format!(
                        "{what} bundle {}->{} piece {pi} over {}: fiber dimension {f}, expected {expected}",
                        self.from, self.to, p.base_component
                    ),
                );
            }
        }
        r
    }

    /// Structural and endpoint checks for one bundle.
    pub fn validate(
        &self,
        kind: BundleKind,
        src: Option<&CriticalLevel>,
        tgt: Option<&CriticalLevel>,
        what: &str,
    ) -> Report {
        let mut r = Report::default();
        let name = format!("{what} bundle {}->{}", self.from, self.to);
        let Some(src) = src else {
            r.push(
                Rule::Structure,
                format!("{name}: source level {} is empty", self.from),
            );
            return r;
        };
        let Some(tgt) = tgt else {
            r.push(
                Rule::Structure,
                format!("{name}: target level {} is empty", self.to),
            );
            return r;
        };
        let mut seen_fiber = BTreeSet::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            let pname = format!("{name} piece {pi} over {}", p.base_component);
            let Some(k) = src.component(&p.base_component) else {
                r.push(Rule::Structure, format!("{pname}: unknown base component"));
                continue;
            };
            if p.orientation_coeff.abs() != 1 {
                r.push(
                    Rule::Structure,
                    format!(
                        "{pname}: orientation coefficient {} is not +1 or -1",
                        p.orientation_coeff
                    ),
                );
            }
            if p.fiber.fundamental().is_none() {
                r.push(
                    Rule::Structure,
                    format!("{pname}: fiber has no fundamental chain"),
                );
            }
            if p.fiber.is_empty() {
                r.push(Rule::Structure, format!("{pname}: fiber is empty"));
                continue;
            }
            for c in p.fiber.cells() {
                if !seen_fiber.insert(c.id.clone()) {
                    r.push(
                        Rule::Structure,
                        format!("{pname}: fiber cell id {} reused in bundle", c.id),
                    );
                }
            }
            if let Some(pts) = &p.support {
                if kind == BundleKind::Internal {
                    r.push(
                        Rule::Structure,
                        format!("{pname}: point support is only for continuation data"),
                    );
                }
                let mut ids = BTreeSet::new();
                for s in pts {
                    if !ids.insert(&s.id) {
                        r.push(
                            Rule::Structure,
                            format!("{pname}: duplicate support point {}", s.id),
                        );
                    }
                    if s.sign.abs() != 1 {
                        r.push(
                            Rule::Structure,
                            format!("{pname}: support point {} sign {}", s.id, s.sign),
                        );
                    }
                    match k.cubulation.cell(&s.cell) {
                        Some(c) if c.dim == k.dim => {}
                        _ => r.push(
                            Rule::Structure,
                            format!(
                                "{pname}: support point {} must sit in a top cell of {}",
                                s.id, k.id
                            ),
                        ),
                    }
                }
            }
            r.extend(validate_endpoint(p, &k.cubulation, tgt, &pname));
        }
        r
    }
}

fn validate_endpoint(p: &Piece, base: &Cubulation, tgt: &CriticalLevel, pname: &str) -> Report {
    let mut r = Report::default();
    let labels: BTreeMap<String, usize> = p.base_labels(base).into_iter().collect();
    for ((a, y), img) in &p.endpoint_map {
        if !labels.contains_key(a) || !p.fiber.contains(y) {
            r.push(
                Rule::Structure,
                format!("{pname}: endpoint key ({a}, {y}) is not a product cell"),
            );
            continue;
        }
        let d = labels[a] + p.fiber.cell(y).map_or(0, |c| c.dim);
        for (t, _) in img.iter() {
            match tgt.cell_dim(t) {
                None => r.push(
                    Rule::Structure,
                    format!("{pname}: endpoint image cell {t} not in target level"),
                ),
                Some(td) if td != d => r.push(
                    Rule::EndpointChainMap,
                    format!(
                        "{pname}: ({a}, {y}) has dimension {d} but maps to {t} of dimension {td}"
                    ),
                ),
                _ => {}
            }
        }
    }
    if !r.is_valid() {
        return r;
    }
    for (a, ad) in &labels {
        for yc in p.fiber.cells() {
            let y = &yc.id;
            let img = p.endpoint(a, y);
            if *ad == 0 && yc.dim == 0 {
                let ok = img.len() == 1 && img.iter().all(|(_, c)| c == 1);
                if !ok {
                    r.push(
                        Rule::EndpointChainMap,
                        format!("{pname}: vertex ({a}, {y}) must map to a single vertex"),
                    );
                }
                continue;
            }
            let lhs = tgt.boundary(&img);
            let rhs = p.endpoint_chain(&p.pair_boundary(base, a, y));
            if lhs != rhs {
                r.push(
                    Rule::EndpointChainMap,
                    format!("{pname}: endpoint map does not commute with boundary at ({a}, {y}): {lhs} vs {rhs}"),
                );
            }
        }
    }
    r
}

/// Bundles a stratum label refers to: the left bundle (from the piece's
/// level to `via`), the middle level, and the right bundle (from `via` on).
pub struct Resolved<'a> {
    pub left: Option<&'a Bundle>,
    pub mid: Option<&'a CriticalLevel>,
    pub right: Option<&'a Bundle>,
}

/// Label checks for one piece over level `i`.
///
/// Every signed fiber-boundary cell carries exactly one label of an allowed
/// family; labels point at top fiber cells of existing bundles; and for
/// product pieces the residue identity holds cell by cell:
/// `(-1)^i ε c_x ∂₊(g×x) = σ ε1 a_l ε2 r_r ∂₊²(∂₊¹(g×l) × r)`.
pub fn validate_piece_strata<'a>(
    p: &Piece,
    kind: BundleKind,
    i: usize,
    src: &CriticalLevel,
    resolve: &dyn Fn(Family, usize) -> Resolved<'a>,
    pname: &str,
) -> Report {
    let mut r = Report::default();
    let Some(k) = src.component(&p.base_component) else {
        return r;
    };
    let dfund = p.fiber_boundary();
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for lab in &p.strata {
        *count.entry(lab.fiber_boundary_cell.as_str()).or_default() += 1;
        if dfund.coeff(&lab.fiber_boundary_cell) == 0 {
            r.push(
                Rule::Strata,
                format!(
                    "{pname}: label on {} which is not a fiber-boundary cell",
                    lab.fiber_boundary_cell
                ),
            );
        }
        if !kind.allows(lab.family) {
            r.push(
                Rule::Strata,
                format!("{pname}: family {:?} not allowed here", lab.family),
            );
        }
    }
    for (x, _) in dfund.iter() {
        match count.get(x.as_str()) {
            Some(1) => {}
            Some(n) => r.push(
                Rule::Strata,
                format!("{pname}: fiber-boundary cell {x} labeled {n} times"),
            ),
            None => r.push(
                Rule::Strata,
                format!("{pname}: fiber-boundary cell {x} has no label"),
            ),
        }
    }
    if !r.is_valid() {
        return r;
    }
    let eps = p.epsilon(k.dim);
    let sign_i = if i.is_multiple_of(2) { 1 } else { -1 };
    for lab in &p.strata {
        let what = format!(
            "{pname}: label {} -> ({}, {}, {}, {:?})",
            lab.fiber_boundary_cell, lab.via_index, lab.left_cell, lab.right_cell, lab.family
        );
        let res = resolve(lab.family, lab.via_index);
        let (Some(lb), Some(mid), Some(rb)) = (res.left, res.mid, res.right) else {
            r.push(
                Rule::Strata,
                format!("{what}: no such bundles through level {}", lab.via_index),
            );
            continue;
        };
        let (Some(p1), Some(p2)) = (
            lb.piece_with_fiber_cell(&lab.left_cell),
            rb.piece_with_fiber_cell(&lab.right_cell),
        ) else {
            r.push(
                Rule::Strata,
                format!("{what}: left or right cell not found"),
            );
            continue;
        };
        let a_l = p1
            .fiber
            .fundamental()
            .map_or(0, |f| f.coeff(&lab.left_cell));
        let r_r = p2
            .fiber
            .fundamental()
            .map_or(0, |f| f.coeff(&lab.right_cell));
        if a_l == 0 || r_r == 0 {
            r.push(
                Rule::Strata,
                format!("{what}: left and right cells must be top fiber cells"),
            );
            continue;
        }
        if p1.base_component != p.base_component {
            r.push(
                Rule::Strata,
                format!("{what}: left piece sits over {}", p1.base_component),
            );
            continue;
        }
        if p.is_point_supported() || p1.is_point_supported() || p2.is_point_supported() {
            // aggregate identities cover these
            continue;
        }
        let Some(k2) = mid.component(&p2.base_component) else {
            r.push(
                Rule::Strata,
                format!("{what}: right piece base {} missing", p2.base_component),
            );
            continue;
        };
        let eps1 = p1.epsilon(k.dim);
        let eps2 = p2.epsilon(k2.dim);
        let c_x = dfund.coeff(&lab.fiber_boundary_cell);
        let coeff_ok = sign_i * eps * c_x == lab.family.sign() * eps1 * a_l * eps2 * r_r;
        if !coeff_ok {
            r.push(
                Rule::Strata,
                format!("{what}: orientation signs do not match the boundary formula"),
            );
            continue;
        }
        for g in k.cubulation.cells() {
            let lhs = p.endpoint(&g.id, &lab.fiber_boundary_cell);
            let mid_chain = p1.endpoint(&g.id, &lab.left_cell);
            let mut rhs = CellChain::zero();
            for (c, m) in mid_chain.iter() {
                if k2.cubulation.contains(c) {
                    rhs.add_scaled(&p2.endpoint(c, &lab.right_cell), m);
                }
            }
            if lhs != rhs {
                r.push(
                    Rule::Strata,
                    format!("{what}: endpoint of stratum at base cell {} is {lhs}, glued composite gives {rhs}", g.id),
                );
                break;
            }
        }
    }
    r
}

/// Components of the target level hit by vertices of `K × closure(l)`.
pub fn landing(p: &Piece, base: &Cubulation, l: &str, tgt: &CriticalLevel) -> BTreeSet<String> {
    let mut verts = BTreeSet::new();
    let mut stack = vec![l.to_string()];
    while let Some(c) = stack.pop() {
        for (z, _) in p.fiber.boundary(&c).iter() {
            stack.push(z.clone());
        }
        if p.fiber.cell(&c).is_some_and(|x| x.dim == 0) {
            verts.insert(c);
        }
    }
    let bases: Vec<String> = match &p.support {
        None => base.cells_of_dim(0).into_iter().map(String::from).collect(),
        Some(pts) => pts.iter().map(|s| s.id.clone()).collect(),
    };
    let mut out = BTreeSet::new();
    for a in &bases {
        for y in &verts {
            for (t, _) in p.endpoint(a, y).iter() {
                if let Some(k) = tgt.component_of_cell(t) {
                    out.insert(k.id.clone());
                }
            }
        }
    }
    out
}
