//! Formal boundary bookkeeping for compactified moduli symbols.
//!
//! A symbol `M(i, t)` of some family has degree `b_i + i - t + δ` and a
//! boundary `(-1)^{i+b_i} Σ c · L ×_{B_n} R` read off a table of rules.
//! Applying the boundary twice with the fibered sign rule must cancel on
//! every three-step path.

use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Sym {
    pub fam: usize,
    pub from: usize,
    pub to: usize,
}

pub(crate) struct FamilyInfo {
    pub name: String,
    pub shift: i64,
    pub src_cat: usize,
    pub tgt_cat: usize,
    pub present: BTreeSet<(usize, usize)>,
    /// `(sign, left family, right family)` summands of the boundary.
    pub rules: Vec<(i64, usize, usize)>,
}

pub(crate) struct FormalSystem {
    /// Per category, per level index: dimensions of its components.
    pub cats: Vec<BTreeMap<usize, BTreeSet<usize>>>,
    pub families: Vec<FamilyInfo>,
}

fn pm(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl FormalSystem {
    fn base_dim(&self, cat: usize, level: usize) -> Option<i64> {
        self.cats[cat]
            .get(&level)
            .and_then(|d| d.iter().next())
            .map(|&d| d as i64)
    }

    fn degree(&self, s: Sym, b: i64) -> i64 {
        b + s.from as i64 - s.to as i64 + self.families[s.fam].shift
    }

    fn name(&self, s: Sym) -> String {
        format!("{}({},{})", self.families[s.fam].name, s.from, s.to)
    }

    /// Boundary summands without the global sign.
    fn expand(&self, s: Sym) -> Vec<(i64, Sym, usize, Sym)> {
        let f = &self.families[s.fam];
        let mut out = Vec::new();
        for &(c, lf, rf) in &f.rules {
            let mid_cat = self.families[lf].tgt_cat;
            for &(a, n) in &self.families[lf].present {
                if a != s.from || !self.families[rf].present.contains(&(n, s.to)) {
                    continue;
                }
                if self.base_dim(mid_cat, n).is_none() {
                    continue;
                }
                out.push((
                    c,
                    Sym {
                        fam: lf,
                        from: a,
                        to: n,
                    },
                    n,
                    Sym {
                        fam: rf,
                        from: n,
                        to: s.to,
                    },
                ));
            }
        }
        out
    }

    /// Returns the three-step paths whose two contributions fail to cancel.
    pub fn check(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for (fi, f) in self.families.iter().enumerate() {
            for &(i, t) in &f.present {
                let Some(dims) = self.cats[f.src_cat].get(&i) else {
                    continue;
                };
                for &bi in dims {
                    let bi = bi as i64;
                    let s = Sym {
                        fam: fi,
                        from: i,
                        to: t,
                    };
                    let g = pm(i as i64 + bi);
                    let mut acc: BTreeMap<(Sym, Sym, Sym), i64> = BTreeMap::new();
                    for (c, l, n, r) in self.expand(s) {
                        let bn = self.base_dim(self.families[l.fam].tgt_cat, n).unwrap_or(0);
                        let dl = self.degree(l, bi);
                        for (c2, l1, _, l2) in self.expand(l) {
                            *acc.entry((l1, l2, r)).or_default() += g * c * pm(i as i64 + bi) * c2;
                        }
                        let sr = pm(dl + bn);
                        for (c2, r1, _, r2) in self.expand(r) {
                            *acc.entry((l, r1, r2)).or_default() +=
                                g * c * sr * pm(n as i64 + bn) * c2;
                        }
                    }
                    for ((a, b, c), v) in acc {
                        if v != 0 {
                            bad.push(format!(
                                "{}: path {} x {} x {} has coefficient {v}",
                                self.name(s),
                                self.name(a),
                                self.name(b),
                                self.name(c)
                            ));
                        }
                    }
                }
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_system(rule_sign: i64) -> FormalSystem {
        let mut cat = BTreeMap::new();
        for i in 0..4 {
            cat.insert(i, BTreeSet::from([i % 2]));
        }
        let mut present = BTreeSet::new();
        for i in 0..4 {
            for t in 0..i {
                present.insert((i, t));
            }
        }
        FormalSystem {
            cats: vec![cat],
            families: vec![FamilyInfo {
                name: "M".into(),
                shift: -1,
                src_cat: 0,
                tgt_cat: 0,
                present,
                rules: vec![(rule_sign, 0, 0)],
            }],
        }
    }

    #[test]
    fn four_levels_cancel() {
        assert!(chain_system(1).check().is_empty());
    }

    #[test]
    fn flipped_rule_still_cancels_since_it_is_global() {
        // a global sign on the only rule appears twice on each path
        assert!(chain_system(-1).check().is_empty());
    }

    #[test]
    fn continuation_with_wrong_relative_sign_fails() {
        let mut s = chain_system(1);
        let cat1 = s.cats[0].clone();
        s.cats.push(cat1);
        let mut present = BTreeSet::new();
        for i in 0..4 {
            for t in 0..4 {
                present.insert((i, t));
            }
        }
        s.families.push(FamilyInfo {
            name: "T".into(),
            shift: -1,
            src_cat: 1,
            tgt_cat: 1,
            present: s.families[0].present.clone(),
            rules: vec![(1, 1, 1)],
        });
        s.families.push(FamilyInfo {
            name: "F".into(),
            shift: 0,
            src_cat: 0,
            tgt_cat: 1,
            present,
            rules: vec![(1, 0, 2), (-1, 2, 1)],
        });
        assert!(s.check().is_empty());
        s.families[2].rules[1].0 = 1;
        assert!(!s.check().is_empty());
    }
}
