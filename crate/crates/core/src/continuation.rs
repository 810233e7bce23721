//! Continuation maps, chain homotopies and representing chains.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{
    check_chain_map, induced_map_on_homology, small_vec, solve_integer, AlgebraError,
    ChainMapMatrices, InducedMap, IntMatrix,
};
use crate::complex::{
    assemble, default_k_max, lift, operator_matrix, ComplexError, MbChain, MbGenerator,
    MorseBottComplex,
};
use crate::cubical::{CellChain, Cubulation};
use crate::flow::{flow_family, level_dims, FamilyInfo, FormalSystem};
use crate::flow::{
    validate_piece_strata, Bundle, BundleKind, Family, FlowCategory, Piece, Report, Resolved, Rule,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContinuationError {
    #[error("domain {0} has no fundamental chain and no compatible extension")]
    NoFundamentalChain(String),
    #[error("domain {domain} refers to unknown boundary domain {missing}")]
    UnknownDomain { domain: String, missing: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn bundle_in(list: &[Bundle], from: usize, to: usize) -> Option<&Bundle> {
    list.iter().find(|b| b.from == from && b.to == to)
}

/// Continuation moduli from `source` levels to `target` levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuationData {
    pub name: String,
    pub source: FlowCategory,
    pub target: FlowCategory,
    pub bundles: Vec<Bundle>,
}

impl ContinuationData {
    pub fn bundle(&self, from: usize, to: usize) -> Option<&Bundle> {
        bundle_in(&self.bundles, from, to)
    }

    /// `F(g) = Σ_t ∂₊(g × M_F(i, t))` as target generators.
    pub fn image(&self, g: &MbGenerator) -> MbChain {
        push_all(&self.bundles, &self.source, &self.target, g)
    }
}

fn push_all(
    bundles: &[Bundle],
    src: &FlowCategory,
    tgt: &FlowCategory,
    g: &MbGenerator,
) -> MbChain {
    let mut out = MbChain::zero();
    let Some(sl) = src.level(g.level) else {
        return out;
    };
    for b in bundles.iter().filter(|b| b.from == g.level) {
        if let Some(tl) = tgt.level(b.to) {
            out.add_scaled(&lift(tl, &b.push(&g.cell, sl)), 1);
        }
    }
    out
}

/// Diagonal identity data: over each component a point fiber whose endpoint
/// map is the identity, plus any `extra` lower bundles.
pub fn identity_continuation_with(fc: &FlowCategory, extra: Vec<Bundle>) -> ContinuationData {
    let mut bundles = Vec::new();
    for (i, l) in &fc.levels {
        if l.is_empty() {
            continue;
        }
        let pieces = l
            .components
            .iter()
            .map(|k| {
                let pt = format!("id.{}", k.id);
                Piece {
                    base_component: k.id.clone(),
                    fiber: Cubulation::point(&pt),
                    orientation_coeff: 1,
                    support: None,
                    endpoint_map: k
                        .cubulation
                        .cells()
                        .map(|c| {
                            (
                                (c.id.clone(), pt.clone()),
                                CellChain::single(c.id.clone(), 1),
                            )
                        })
                        .collect(),
                    strata: vec![],
                }
            })
            .collect();
        bundles.push(Bundle {
            from: *i,
            to: *i,
            pieces,
        });
    }
    bundles.extend(extra);
    ContinuationData {
        name: format!("{}-identity", fc.name),
        source: fc.clone(),
        target: fc.clone(),
        bundles,
    }
}

pub fn identity_continuation(fc: &FlowCategory) -> ContinuationData {
    identity_continuation_with(fc, vec![])
}

fn continuation_families(cd: &ContinuationData, s: usize, f: usize, t: usize) -> Vec<FamilyInfo> {
    vec![
        flow_family(&cd.source, "S", s, s),
        flow_family(&cd.target, "T", t, t),
        FamilyInfo {
            name: "F".into(),
            shift: 0,
            src_cat: s,
            tgt_cat: t,
            present: cd.bundles.iter().map(|b| (b.from, b.to)).collect(),
            rules: vec![(1, s, f), (-1, f, t)],
        },
    ]
}

fn validate_bundles<'a>(
    bundles: &[Bundle],
    kind: BundleKind,
    src: &FlowCategory,
    tgt: &FlowCategory,
    what: &str,
    resolve: &dyn Fn(Family, usize, usize, usize) -> Resolved<'a>,
) -> Report {
    let mut r = Report::default();
    let mut pairs = BTreeSet::new();
    for b in bundles {
        if !pairs.insert((b.from, b.to)) {
            r.push(
                Rule::Structure,
                format!("{what} bundle {}->{} given twice", b.from, b.to),
            );
        }
        r.extend(b.validate_degrees(kind, src.level(b.from), what));
        r.extend(b.validate(kind, src.level(b.from), tgt.level(b.to), what));
    }
    if !r.is_valid() {
        return r;
    }
    for b in bundles {
        let Some(sl) = src.level(b.from) else {
            continue;
        };
        let res = |fam: Family, n: usize| resolve(fam, b.from, n, b.to);
        for (pi, p) in b.pieces.iter().enumerate() {
            let pname = format!("{what} bundle {}->{} piece {pi}", b.from, b.to);
            r.extend(validate_piece_strata(p, kind, b.from, sl, &res, &pname));
        }
    }
    r
}

fn shared_k_max(cats: &[&FlowCategory]) -> i64 {
    cats.iter().map(|c| default_k_max(c)).max().unwrap_or(1)
}

/// Structure, degrees, labels, the symbolic `∂∂` cancellation and the
/// chain-map identity on the assembled complexes.
pub fn continuation_boundary_validate(cd: &ContinuationData) -> Report {
    let resolve = |fam: Family, i: usize, n: usize, t: usize| match fam {
        Family::Left => Resolved {
            left: cd.source.bundle(i, n),
            mid: cd.source.level(n),
            right: cd.bundle(n, t),
        },
        Family::Right => Resolved {
            left: cd.bundle(i, n),
            mid: cd.target.level(n),
            right: cd.target.bundle(n, t),
        },
        _ => Resolved {
            left: None,
            mid: None,
            right: None,
        },
    };
    let mut r = validate_bundles(
        &cd.bundles,
        BundleKind::Continuation,
        &cd.source,
        &cd.target,
        "continuation",
        &resolve,
    );
    if !r.is_valid() {
        return r;
    }
    // families S = 0, T = 1, F = 2 over categories source = 0, target = 1
    let sys = FormalSystem {
        cats: vec![level_dims(&cd.source), level_dims(&cd.target)],
        families: continuation_families(cd, 0, 2, 1),
    };
    for msg in sys.check() {
        r.push(Rule::DSquared, msg);
    }
    match chain_map_from_continuation(cd, None) {
        Err(e) => r.push(Rule::ChainMap, e.to_string()),
        Ok(m) => {
            if !verify_chain_map(&m.matrices, &m.source, &m.target) {
                r.push(
                    Rule::ChainMap,
                    format!(
                        "{}: continuation does not commute with the boundary",
                        cd.name
                    ),
                );
            }
        }
    }
    r
}

/// Source and target complexes with the per-degree matrices of `F_□`.
#[derive(Clone, Debug)]
pub struct ContinuationMap {
    pub source: MorseBottComplex,
    pub target: MorseBottComplex,
    pub matrices: ChainMapMatrices,
}

impl ContinuationMap {
    pub fn induced(&self) -> Result<Vec<InducedMap>, ContinuationError> {
        let mut v =
            induced_map_on_homology(&self.matrices, &self.source.boundary, &self.target.boundary)?;
        // the top degree is truncated
        v.retain(|m| m.degree < self.source.k_max.min(self.target.k_max));
        Ok(v)
    }
}

fn degree_matrices(
    src: &MorseBottComplex,
    dst: &MorseBottComplex,
    shift: i64,
    op: impl Fn(&MbGenerator) -> MbChain,
) -> ChainMapMatrices {
    (0..=src.k_max)
        .filter(|k| k + shift >= 0 && k + shift <= dst.k_max)
        .map(|k| (k, operator_matrix(src, dst, k, shift, &op)))
        .collect()
}

/// `F_□` per degree, with both complexes truncated at the same `k_max`.
pub fn chain_map_from_continuation(
    cd: &ContinuationData,
    k_max: Option<i64>,
) -> Result<ContinuationMap, ContinuationError> {
    let k = k_max.unwrap_or_else(|| shared_k_max(&[&cd.source, &cd.target]));
    let source = assemble(&cd.source, k)?;
    let target = assemble(&cd.target, k)?;
    let matrices = degree_matrices(&source, &target, 0, |g| cd.image(g));
    Ok(ContinuationMap {
        source,
        target,
        matrices,
    })
}

/// Exact `∂ F = F ∂` in every degree.
pub fn verify_chain_map(
    f: &ChainMapMatrices,
    source: &MorseBottComplex,
    target: &MorseBottComplex,
) -> bool {
    check_chain_map(f, &source.boundary, &target.boundary).is_ok()
}

/// Square of continuations `f1 -> f2 -> f4`, `f1 -> f3 -> f4` and the
/// homotopy moduli `H` from `f1` to `f4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyData {
    pub name: String,
    pub f21: ContinuationData,
    pub f31: ContinuationData,
    pub f42: ContinuationData,
    pub f43: ContinuationData,
    pub h: Vec<Bundle>,
}

impl HomotopyData {
    pub fn f1(&self) -> &FlowCategory {
        &self.f21.source
    }

    pub fn f4(&self) -> &FlowCategory {
        &self.f43.target
    }

    pub fn bundle(&self, from: usize, to: usize) -> Option<&Bundle> {
        bundle_in(&self.h, from, to)
    }

    pub fn image(&self, g: &MbGenerator) -> MbChain {
        push_all(&self.h, self.f1(), self.f4(), g)
    }

    /// The four continuations must chain through matching categories.
    pub fn check_references(&self) -> Result<(), String> {
        let ok = self.f21.source == self.f31.source
            && self.f21.target == self.f42.source
            && self.f31.target == self.f43.source
            && self.f42.target == self.f43.target;
        if ok {
            Ok(())
        } else {
            Err(format!(
                "{}: continuation endpoints do not form a square",
                self.name
            ))
        }
    }
}

/// Structure, labels and the symbolic cancellation for the `H` bundles.
pub fn homotopy_boundary_validate(hd: &HomotopyData) -> Report {
    let mut r = Report::default();
    if let Err(e) = hd.check_references() {
        r.push(Rule::Structure, e);
        return r;
    }
    let f1 = hd.f1();
    let f4 = hd.f4();
    let resolve = |fam: Family, i: usize, n: usize, t: usize| match fam {
        Family::A => Resolved {
            left: hd.f21.bundle(i, n),
            mid: hd.f21.target.level(n),
            right: hd.f42.bundle(n, t),
        },
        Family::B => Resolved {
            left: hd.f31.bundle(i, n),
            mid: hd.f31.target.level(n),
            right: hd.f43.bundle(n, t),
        },
        Family::C => Resolved {
            left: f1.bundle(i, n),
            mid: f1.level(n),
            right: hd.bundle(n, t),
        },
        Family::D => Resolved {
            left: hd.bundle(i, n),
            mid: f4.level(n),
            right: f4.bundle(n, t),
        },
        _ => Resolved {
            left: None,
            mid: None,
            right: None,
        },
    };
    r.extend(validate_bundles(
        &hd.h,
        BundleKind::Homotopy,
        f1,
        f4,
        "homotopy",
        &resolve,
    ));
    if !r.is_valid() {
        return r;
    }
    // categories f1..f4 = 0..3; families below index into `fams`
    let cats = vec![
        level_dims(f1),
        level_dims(&hd.f21.target),
        level_dims(&hd.f31.target),
        level_dims(f4),
    ];
    let mut fams: Vec<FamilyInfo> = (0..4)
        .map(|c| {
            let fc = [f1, &hd.f21.target, &hd.f31.target, f4][c];
            flow_family(fc, &format!("f{}", c + 1), c, c)
        })
        .collect();
    let cont = |name: &str, cd: &ContinuationData, s: usize, t: usize, me: usize| FamilyInfo {
        name: name.into(),
        shift: 0,
        src_cat: s,
        tgt_cat: t,
        present: cd.bundles.iter().map(|b| (b.from, b.to)).collect(),
        rules: vec![(1, s, me), (-1, me, t)],
    };
    fams.push(cont("F21", &hd.f21, 0, 1, 4));
    fams.push(cont("F31", &hd.f31, 0, 2, 5));
    fams.push(cont("F42", &hd.f42, 1, 3, 6));
    fams.push(cont("F43", &hd.f43, 2, 3, 7));
    fams.push(FamilyInfo {
        name: "H".into(),
        shift: 1,
        src_cat: 0,
        tgt_cat: 3,
        present: hd.h.iter().map(|b| (b.from, b.to)).collect(),
        rules: vec![(1, 4, 6), (-1, 5, 7), (1, 0, 8), (1, 8, 3)],
    });
    for msg in (FormalSystem {
        cats,
        families: fams,
    })
    .check()
    {
        r.push(Rule::DSquared, msg);
    }
    r
}

/// Both sides of `F43 F31 - F42 F21 = ∂H + H∂`, degree by degree.
#[derive(Clone, Debug)]
pub struct HomotopyCheck {
    pub lhs: ChainMapMatrices,
    pub rhs: ChainMapMatrices,
}

impl HomotopyCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn failing_degrees(&self) -> Vec<i64> {
        self.lhs
            .keys()
            .filter(|k| self.lhs.get(k) != self.rhs.get(k))
            .copied()
            .collect()
    }
}

pub fn chain_homotopy_sides(hd: &HomotopyData) -> Result<HomotopyCheck, ContinuationError> {
    let k = shared_k_max(&[hd.f1(), &hd.f21.target, &hd.f31.target, hd.f4()]);
    let m21 = chain_map_from_continuation(&hd.f21, Some(k))?;
    let m31 = chain_map_from_continuation(&hd.f31, Some(k))?;
    let m42 = chain_map_from_continuation(&hd.f42, Some(k))?;
    let m43 = chain_map_from_continuation(&hd.f43, Some(k))?;
    let c1 = &m21.source;
    let c4 = &m43.target;
    let h = degree_matrices(c1, c4, 1, |g| hd.image(g));
    let hm = |d: i64| {
        h.get(&d)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(c4.rank(d + 1), c1.rank(d)))
    };
    let mut lhs = BTreeMap::new();
    let mut rhs = BTreeMap::new();
    for d in 0..k {
        let a = &m43.matrices[&d] * &m31.matrices[&d];
        let b = &m42.matrices[&d] * &m21.matrices[&d];
        lhs.insert(d, a.sub(&b));
        let dh = &c4.boundary.matrix_at(d + 1) * &hm(d);
        let hd_ = &hm(d - 1) * &c1.boundary.matrix_at(d);
        rhs.insert(d, dh.add(&hd_));
    }
    Ok(HomotopyCheck { lhs, rhs })
}

/// `F43 F31 - F42 F21 = ∂H + H∂` exactly, in every untruncated degree.
pub fn verify_chain_homotopy(hd: &HomotopyData) -> Result<bool, ContinuationError> {
    if hd.check_references().is_err() {
        return Ok(false);
    }
    Ok(chain_homotopy_sides(hd)?.holds())
}

/// A domain `P` with its boundary `∂P = Σ n_k P_k` in terms of other domains.
#[derive(Clone, Debug)]
pub struct Domain {
    pub name: String,
    pub complex: Cubulation,
    pub boundary: Vec<(i64, String)>,
}

/// A chain `s_P` per domain with `∂ s_P = Σ n_k s_{P_k}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepresentingChainSystem {
    pub chains: BTreeMap<String, CellChain>,
}

impl RepresentingChainSystem {
    pub fn get(&self, name: &str) -> Option<&CellChain> {
        self.chains.get(name)
    }

    /// Whether every stored chain's boundary matches its domain's.
    pub fn is_compatible(&self, domains: &[Domain]) -> bool {
        domains.iter().all(|d| {
            let Some(s) = self.chains.get(&d.name) else {
                return false;
            };
            let mut expect = CellChain::zero();
            for (n, p) in &d.boundary {
                match self.chains.get(p) {
                    Some(c) => expect.add_scaled(c, *n),
                    None => return false,
                }
            }
            d.complex.chain_boundary(s) == expect
        })
    }
}

/// Induction on degree: lower domains first, then each domain takes its
/// signed top cells when they are compatible, else an integer solution of
/// `∂ s = Σ n_k s_{P_k}` among its top cells.
pub fn build_representing_chains(
    domains: &[Domain],
) -> Result<RepresentingChainSystem, ContinuationError> {
    let names: BTreeSet<&str> = domains.iter().map(|d| d.name.as_str()).collect();
    for d in domains {
        for (_, p) in &d.boundary {
            if !names.contains(p.as_str()) {
                return Err(ContinuationError::UnknownDomain {
                    domain: d.name.clone(),
                    missing: p.clone(),
                });
            }
        }
    }
    let mut order: Vec<&Domain> = domains.iter().collect();
    order.sort_by_key(|d| (d.complex.dim(), d.name.clone()));
    let mut sys = RepresentingChainSystem::default();
    for d in order {
        let mut target = CellChain::zero();
        for (n, p) in &d.boundary {
            let c = sys
                .chains
                .get(p)
                .ok_or_else(|| ContinuationError::NoFundamentalChain(p.clone()))?;
            target.add_scaled(c, *n);
        }
        if let Some(f) = d.complex.fundamental() {
            if d.complex.chain_boundary(f) == target {
                sys.chains.insert(d.name.clone(), f.clone());
                continue;
            }
        }
        let s = solve_top(&d.complex, &target)
            .ok_or_else(|| ContinuationError::NoFundamentalChain(d.name.clone()))?;
        sys.chains.insert(d.name.clone(), s);
    }
    Ok(sys)
}

fn solve_top(k: &Cubulation, target: &CellChain) -> Option<CellChain> {
    let top = k.dim()?;
    let cols = k.cells_of_dim(top);
    if top == 0 {
        return target
            .is_zero()
            .then(|| CellChain::from_terms(cols.iter().map(|c| (c.to_string(), 1))));
    }
    let rows = k.cells_of_dim(top - 1);
    let ix: BTreeMap<&str, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (t, x) in k.boundary(c).iter() {
            m.add_to(ix[t.as_str()], j, &x.into());
        }
    }
    let mut rhs = vec![0i64; rows.len()];
    for (t, x) in target.iter() {
        rhs[*ix.get(t.as_str())?] += x;
    }
    let sol = small_vec(&solve_integer(&m, &crate::algebra::big_vec(&rhs))?)?;
    // prefer a nonzero chain when the target is zero
    if sol.iter().all(|x| *x == 0) {
        return None;
    }
    Some(CellChain::from_terms(
        cols.iter().zip(sol).map(|(c, x)| (c.to_string(), x)),
    ))
}

/// `F + ∂K + K∂` for a degree-raising `K` given on generators.
pub fn perturb_by_boundary(
    map: &ContinuationMap,
    k: &BTreeMap<i64, IntMatrix>,
) -> ChainMapMatrices {
    let km = |d: i64| {
        k.get(&d)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(map.target.rank(d + 1), map.source.rank(d)))
    };
    map.matrices
        .iter()
        .map(|(d, f)| {
            let dk = &map.target.boundary.matrix_at(d + 1) * &km(*d);
            let kd = &km(d - 1) * &map.source.boundary.matrix_at(*d);
            (*d, f.add(&dk).add(&kd))
        })
        .collect()
}

/// Per-degree isomorphism flags of both composites and whether each
/// composite is the identity on homology.
#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub forward: Vec<InducedMap>,
    pub backward: Vec<InducedMap>,
    pub round_trip_a: Vec<InducedMap>,
    pub round_trip_b: Vec<InducedMap>,
}

impl IndependenceReport {
    pub fn all_iso(&self) -> bool {
        self.forward.iter().chain(&self.backward).all(|m| m.is_iso)
    }

    pub fn composites_identity(&self) -> bool {
        self.round_trip_a
            .iter()
            .chain(&self.round_trip_b)
            .all(|m| m.is_identity())
    }
}

fn compose(a: &ChainMapMatrices, b: &ChainMapMatrices) -> ChainMapMatrices {
    a.iter()
        .filter_map(|(d, m)| b.get(d).map(|n| (*d, n * m)))
        .collect()
}

/// Induced maps of `ab: A -> B`, `ba: B -> A` and of both composites.
pub fn independence_check(
    ab: &ContinuationData,
    ba: &ContinuationData,
) -> Result<IndependenceReport, ContinuationError> {
    let k = shared_k_max(&[&ab.source, &ab.target]);
    let f = chain_map_from_continuation(ab, Some(k))?;
    let g = chain_map_from_continuation(ba, Some(k))?;
    let trunc = |v: Vec<InducedMap>| v.into_iter().filter(|m| m.degree < k).collect::<Vec<_>>();
    let forward = trunc(induced_map_on_homology(
        &f.matrices,
        &f.source.boundary,
        &f.target.boundary,
    )?);
    let backward = trunc(induced_map_on_homology(
        &g.matrices,
        &g.source.boundary,
        &g.target.boundary,
    )?);
    let gf = compose(&f.matrices, &g.matrices);
    let fg = compose(&g.matrices, &f.matrices);
    let round_trip_a = trunc(induced_map_on_homology(
        &gf,
        &f.source.boundary,
        &f.source.boundary,
    )?);
    let round_trip_b = trunc(induced_map_on_homology(
        &fg,
        &g.source.boundary,
        &g.source.boundary,
    )?);
    Ok(IndependenceReport {
        forward,
        backward,
        round_trip_a,
        round_trip_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn dom(name: &str, complex: Cubulation, boundary: &[(i64, &str)]) -> Domain {
        Domain {
            name: name.into(),
            complex,
            boundary: boundary.iter().map(|(n, p)| (*n, p.to_string())).collect(),
        }
    }

    #[test]
    fn identity_is_literally_the_identity() {
        for fc in fixtures::categories() {
            let m = chain_map_from_continuation(&identity_continuation(&fc), None).unwrap();
            for (k, f) in &m.matrices {
                assert_eq!(
                    f,
                    &IntMatrix::identity(m.source.rank(*k)),
                    "{} degree {k}",
                    fc.name
                );
            }
        }
    }

    #[test]
    fn zero_perturbation_is_a_no_op() {
        let m = chain_map_from_continuation(&fixtures::z2_to_neg_z2(), None).unwrap();
        assert_eq!(perturb_by_boundary(&m, &BTreeMap::new()), m.matrices);
    }

    #[test]
    fn interval_extends_from_its_endpoints() {
        let ends = [
            dom("A", Cubulation::point("a"), &[]),
            dom("B", Cubulation::point("b"), &[]),
        ];
        let mut ds = ends.to_vec();
        ds.push(dom(
            "I",
            Cubulation::interval("a", "b", "e"),
            &[(1, "A"), (-1, "B")],
        ));
        let sys = build_representing_chains(&ds).unwrap();
        assert_eq!(sys.get("I"), Some(&CellChain::single("e".into(), 1)));
        assert!(sys.is_compatible(&ds));

        ds[2].boundary = vec![(1, "B".into()), (-1, "A".into())];
        let sys = build_representing_chains(&ds).unwrap();
        assert_eq!(sys.get("I"), Some(&CellChain::single("e".into(), -1)));

        ds[2].boundary = vec![(1, "A".into()), (1, "B".into())];
        assert!(
            matches!(build_representing_chains(&ds), Err(ContinuationError::NoFundamentalChain(n)) if n == "I")
        );
    }

    #[test]
    fn closed_domain_keeps_its_fundamental_chain() {
        let c = Cubulation::circle("v", "e", 3);
        let p = Cubulation::product(&c, &c, |a, b| format!("{a}.{b}"));
        let ds = [dom("T", p.clone(), &[])];
        let sys = build_representing_chains(&ds).unwrap();
        assert_eq!(sys.get("T"), p.fundamental());
        let bad = [dom("T", p, &[(1, "X")])];
        assert!(matches!(
            build_representing_chains(&bad),
            Err(ContinuationError::UnknownDomain { .. })
        ));
    }
}
