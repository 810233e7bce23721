use std::collections::{BTreeMap, BTreeSet};

use super::bundle::{landing, validate_piece_strata, Resolved};
use super::symbolic::{FamilyInfo, FormalSystem};
use super::{BundleKind, CriticalLevel, Family, FlowCategory, FlowError, Report, Rule};
use crate::chains::{FormalChain, GeneratorId, GeneratorKind};
use crate::complex::check_blocks;

fn pm(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Flow lines only go from higher to strictly lower index.
pub fn validate_weak_self_indexing(fc: &FlowCategory) -> Report {
    let mut r = Report::default();
    for b in &fc.moduli {
        if b.from <= b.to {
            r.push(
                Rule::WeakSelfIndexing,
                format!("bundle {}->{} does not lower the index", b.from, b.to),
            );
        }
    }
    r
}

/// Every piece of `M(i, t)` has fiber dimension `i - t - 1`.
pub fn validate_degrees(fc: &FlowCategory) -> Report {
    let mut r = Report::default();
    for b in &fc.moduli {
        r.extend(b.validate_degrees(BundleKind::Internal, fc.level(b.from), "moduli"));
    }
    r
}

/// Checks one critical level: ids, closed oriented pure-dimensional components.
fn validate_level(l: &CriticalLevel, what: &str) -> Report {
    let mut r = Report::default();
    let mut ids = BTreeSet::new();
    let mut cells = BTreeSet::new();
    for k in &l.components {
        let name = format!("{what} level {} component {}", l.index, k.id);
        if !ids.insert(&k.id) {
            r.push(Rule::Structure, format!("{name}: duplicate component id"));
        }
        for c in k.cubulation.cells() {
            if !cells.insert(&c.id) {
                r.push(
                    Rule::Structure,
                    format!("{name}: cell id {} reused in level", c.id),
                );
            }
        }
        if k.cubulation.is_empty() {
            r.push(Rule::Structure, format!("{name}: no cells"));
            continue;
        }
        if k.cubulation.dim() != Some(k.dim) {
            r.push(
                Rule::Structure,
                format!(
                    "{name}: declared dimension {} but cells reach {:?}",
                    k.dim,
                    k.cubulation.dim()
                ),
            );
        }
        if k.cubulation.has_boundary() {
            r.push(
                Rule::Structure,
                format!("{name}: critical components must be closed"),
            );
        }
        match k.cubulation.fundamental() {
            None => r.push(Rule::Structure, format!("{name}: no fundamental chain")),
            Some(f) => {
                for id in k.cubulation.cells_of_dim(k.dim) {
                    if f.coeff(&id.to_string()).abs() != 1 {
                        r.push(
                            Rule::Structure,
                            format!("{name}: top cell {id} must have coefficient +1 or -1"),
                        );
                    }
                }
            }
        }
        // pure dimension: every lower cell is a face of something
        let mut faces = BTreeSet::new();
        for c in k.cubulation.cells() {
            for e in &c.boundary {
                faces.insert(e.target.clone());
            }
        }
        for c in k.cubulation.cells() {
            if c.dim < k.dim && !faces.contains(&c.id) {
                r.push(
                    Rule::Structure,
                    format!("{name}: cell {} is not pure-dimensional", c.id),
                );
            }
        }
        if k.cubulation.components().len() != 1 {
            r.push(
                Rule::Structure,
                format!("{name}: component is not connected"),
            );
        }
    }
    r
}

/// References, coefficients, endpoint maps and stratum labels.
pub fn validate_structure(fc: &FlowCategory) -> Report {
    let mut r = Report::default();
    for (i, l) in &fc.levels {
        if l.index != *i {
            r.push(
                Rule::Structure,
                format!("level keyed {i} has index {}", l.index),
            );
        }
        if *i > fc.top_index && !l.is_empty() {
            r.push(
                Rule::Structure,
                format!("level {i} exceeds top index {}", fc.top_index),
            );
        }
        r.extend(validate_level(l, "category"));
    }
    let mut pairs = BTreeSet::new();
    for b in &fc.moduli {
        if !pairs.insert((b.from, b.to)) {
            r.push(
                Rule::Structure,
                format!("bundle {}->{} given twice", b.from, b.to),
            );
        }
        r.extend(b.validate(
            BundleKind::Internal,
            fc.level(b.from),
            fc.level(b.to),
            "moduli",
        ));
    }
    if !r.is_valid() {
        return r;
    }
    for b in &fc.moduli {
        let Some(src) = fc.level(b.from) else {
            continue;
        };
        let (i, t) = (b.from, b.to);
        let res = |_: Family, n: usize| Resolved {
            left: fc.bundle(i, n),
            mid: fc.level(n),
            right: fc.bundle(n, t),
        };
        for (pi, p) in b.pieces.iter().enumerate() {
            let pname = format!("moduli bundle {}->{} piece {pi}", b.from, b.to);
            r.extend(validate_piece_strata(
                p,
                BundleKind::Internal,
                b.from,
                src,
                &res,
                &pname,
            ));
        }
    }
    r
}

fn product_gen(n: usize, l: &str, r: &str, degree: i64) -> GeneratorId {
    GeneratorId::new(
        format!("{l} x_{n} {r}"),
        degree,
        GeneratorKind::FiberedProductComponent,
    )
}

/// Boundary of `M(i, i-j)` as a signed sum of glued cell pairs `l ×_{B_n} r`.
///
/// The glued pairs are enumerated from the formula `(-1)^{i+b_i} Σ_n
/// M(i,n) ×_{B_n} M(n,i-j)`, where a pair contributes when `r`'s piece sits
/// on a component that `l` lands on. The labels on the fiber boundary must
/// produce the same chain, else [`FlowError::StrataMismatch`].
pub fn moduli_boundary(fc: &FlowCategory, i: usize, j: usize) -> Result<FormalChain, FlowError> {
    if j == 0 || j > i {
        return Err(FlowError::UnknownLevel(i.saturating_sub(j)));
    }
    let t = i - j;
    let Some(src) = fc.level(i) else {
        return Ok(FormalChain::zero());
    };
    let mut total = FormalChain::zero();
    for k in &src.components {
        let b = k.dim;
        let g = pm((i + b) as i64);
        let mut formula = FormalChain::zero();
        for n in (t + 1)..i {
            let (Some(mid), Some(b1), Some(b2)) = (fc.level(n), fc.bundle(i, n), fc.bundle(n, t))
            else {
                continue;
            };
            for p1 in b1.pieces.iter().filter(|p| p.base_component == k.id) {
                let Some(f1) = p1.fiber.fundamental() else {
                    continue;
                };
                for (l, a_l) in f1.iter() {
                    let lands = landing(p1, &k.cubulation, l, mid);
                    for p2 in b2
                        .pieces
                        .iter()
                        .filter(|p| lands.contains(&p.base_component))
                    {
                        let Some(f2) = p2.fiber.fundamental() else {
                            continue;
                        };
                        let b_n = mid.component(&p2.base_component).map_or(0, |c| c.dim);
                        for (rr, r_r) in f2.iter() {
                            let c = g * p1.epsilon(b) * p2.epsilon(b_n) * a_l * r_r;
                            let deg = (b + p1.fiber_dim() + p2.fiber_dim()) as i64;
                            formula.add_term(product_gen(n, l, rr, deg), c);
                        }
                    }
                }
            }
        }
        let mut labelled = FormalChain::zero();
        if let Some(bundle) = fc.bundle(i, t) {
            for p in bundle.pieces.iter().filter(|p| p.base_component == k.id) {
                let eps = p.epsilon(b);
                for (x, c_x) in p.fiber_boundary().iter() {
                    let labs: Vec<_> = p
                        .strata
                        .iter()
                        .filter(|s| &s.fiber_boundary_cell == x)
                        .collect();
                    let [lab] = labs.as_slice() else {
                        return Err(FlowError::StrataMismatch(format!(
                            "M({i},{t}) over {}: fiber-boundary cell {x} carries {} labels",
                            k.id,
                            labs.len()
                        )));
                    };
                    let deg = (b + p.fiber_dim()) as i64 - 1;
                    labelled.add_term(
                        product_gen(lab.via_index, &lab.left_cell, &lab.right_cell, deg),
                        pm(b as i64) * eps * c_x,
                    );
                }
            }
        }
        if formula != labelled {
            let diff = &formula - &labelled;
            return Err(FlowError::StrataMismatch(format!(
                "M({i},{t}) over {}: boundary formula and labels differ by {diff}",
                k.id
            )));
        }
        total.add_scaled(&formula, 1);
    }
    Ok(total)
}

/// Formal boundary system of one category for the symbolic `∂∂` check.
pub(crate) fn flow_family(fc: &FlowCategory, name: &str, cat: usize, fam: usize) -> FamilyInfo {
    FamilyInfo {
        name: name.to_string(),
        shift: -1,
        src_cat: cat,
        tgt_cat: cat,
        present: fc.moduli.iter().map(|b| (b.from, b.to)).collect(),
        rules: vec![(1, fam, fam)],
    }
}

pub(crate) fn level_dims(fc: &FlowCategory) -> BTreeMap<usize, BTreeSet<usize>> {
    fc.levels
        .iter()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| (*i, l.components.iter().map(|c| c.dim).collect()))
        .collect()
}

/// `∂∂ = 0` for the moduli: the strata expansion agrees with the labels,
/// each three-step path appears twice with opposite signs, and the
/// assembled blocks satisfy `Σ_q ∂_q ∂_{j-q} = 0`.
pub fn validate_moduli_d_squared(fc: &FlowCategory) -> Report {
    let mut r = Report::default();
    for b in &fc.moduli {
        if b.from > b.to {
            if let Err(e) = moduli_boundary(fc, b.from, b.from - b.to) {
                r.push(Rule::Strata, e.to_string());
            }
        }
    }
    let sys = FormalSystem {
        cats: vec![level_dims(fc)],
        families: vec![flow_family(fc, "M", 0, 0)],
    };
    for msg in sys.check() {
        r.push(Rule::DSquared, msg);
    }
    if let Err(e) = check_blocks(fc) {
        r.push(Rule::DSquared, e.to_string());
    }
    r
}

/// Every validator; d-squared only runs once the structure is sound.
pub fn validate_all(fc: &FlowCategory) -> Report {
    let mut r = validate_weak_self_indexing(fc);
    r.extend(validate_degrees(fc));
    r.extend(validate_structure(fc));
    if r.is_valid() {
        r.extend(validate_moduli_d_squared(fc));
    }
    r
}
