//! Random small valid flow categories for property tests.
//!
//! Two shapes are produced. The first has points on levels 2 and 0 or a
//! circle on level 0, points and possibly a circle on level 1, and arcs of
//! unbroken flows from level 2 to level 0 whose ends are the broken ones.
//! Broken flows through each level-1 component come in cancelling pairs,
//! either on the incoming or on the outgoing side. The second shape is a
//! circle on level 0 with circle fibers from points on level 2 wrapping
//! once in either direction.

use std::collections::BTreeMap;

use rand::Rng;

use crate::cubical::{CellChain, Cubulation};
use crate::fixtures::{arcs, category, component, label, level};
use crate::flow::{Bundle, Component, Family, FlowCategory, Piece};

/// Upper bound on critical cells per generated category.
pub const MAX_CELLS: usize = 20;

fn sign<R: Rng>(rng: &mut R) -> i64 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

fn pick<'a, R: Rng>(rng: &mut R, xs: &'a [String]) -> &'a String {
    &xs[rng.gen_range(0..xs.len())]
}

fn vertices(c: &Component) -> Vec<String> {
    c.cubulation
        .cells_of_dim(0)
        .into_iter()
        .map(String::from)
        .collect()
}

/// A flow line to a vertex, with its sign in the fiber.
struct Flow {
    name: String,
    sign: i64,
    vertex: String,
}

fn point_piece(base: &Component, flows: &[&Flow], orientation: i64) -> Piece {
    let fiber = Cubulation::points(
        &flows
            .iter()
            .map(|f| (f.name.as_str(), f.sign))
            .collect::<Vec<_>>(),
    );
    let mut endpoint_map = BTreeMap::new();
    for a in base.cubulation.cells_of_dim(0) {
        for f in flows {
            endpoint_map.insert(
                (a.to_string(), f.name.clone()),
                CellChain::single(f.vertex.clone(), 1),
            );
        }
    }
    Piece {
        base_component: base.id.clone(),
        fiber,
        orientation_coeff: orientation,
        support: None,
        endpoint_map,
        strata: vec![],
    }
}

/// A random valid category with at most three levels and [`MAX_CELLS`]
/// critical cells.
pub fn random_category<R: Rng>(rng: &mut R, name: &str) -> FlowCategory {
    if rng.gen_ratio(1, 4) {
        wrapping(rng, name)
    } else {
        broken_pairs(rng, name)
    }
}

fn wrapping<R: Rng>(rng: &mut R, name: &str) -> FlowCategory {
    let n = rng.gen_range(1..=4);
    let base = component("W", Cubulation::circle("w", "f", n));
    let tops: Vec<Component> = (0..rng.gen_range(1..=3))
        .map(|k| component(&format!("Q{k}"), Cubulation::point(&format!("q{k}"))))
        .collect();
    let mut pieces = Vec::new();
    for (k, q) in tops.iter().enumerate() {
        let (v, e) = (format!("t{k}v"), format!("t{k}e"));
        let fiber = Cubulation::circle(&v, &e, n);
        let degree = sign(rng);
        let pt = format!("q{k}");
        let mut endpoint_map = BTreeMap::new();
        for i in 0..n {
            let (vi, ei) = if degree == 1 {
                (i, CellChain::single(format!("f{i}"), 1))
            } else {
                (
                    (n - i) % n,
                    CellChain::single(format!("f{}", (2 * n - i - 1) % n), -1),
                )
            };
            endpoint_map.insert(
                (pt.clone(), format!("{v}{i}")),
                CellChain::single(format!("w{vi}"), 1),
            );
            endpoint_map.insert((pt.clone(), format!("{e}{i}")), ei);
        }
        pieces.push(Piece {
            base_component: q.id.clone(),
            fiber,
            orientation_coeff: sign(rng),
            support: None,
            endpoint_map,
            strata: vec![],
        });
    }
    category(
        name,
        2,
        vec![level(0, vec![base]), level(2, tops)],
        vec![Bundle {
            from: 2,
            to: 0,
            pieces,
        }],
    )
}

fn broken_pairs<R: Rng>(rng: &mut R, name: &str) -> FlowCategory {
    let bottom: Vec<Component> = if rng.gen_bool(0.5) {
        vec![component(
            "W",
            Cubulation::circle("w", "f", rng.gen_range(1..=4)),
        )]
    } else {
        (0..rng.gen_range(1..=2))
            .map(|k| component(&format!("P{k}"), Cubulation::point(&format!("p{k}"))))
            .collect()
    };
    let mut middle: Vec<Component> = (0..rng.gen_range(0..=2))
        .map(|k| component(&format!("A{k}"), Cubulation::point(&format!("a{k}"))))
        .collect();
    if rng.gen_bool(0.4) {
        middle.push(component(
            "C",
            Cubulation::circle("c", "h", rng.gen_range(1..=3)),
        ));
    }
    let tops: Vec<Component> = (0..rng.gen_range(0..=2))
        .map(|k| component(&format!("Q{k}"), Cubulation::point(&format!("q{k}"))))
        .collect();
    let targets: Vec<String> = bottom.iter().flat_map(vertices).collect();

    // per middle component: outgoing flows and whether pairs sit on the outgoing side
    let mut outgoing: Vec<Vec<Flow>> = Vec::new();
    let mut out_paired = Vec::new();
    let mut fresh = 0usize;
    let mut next = |p: &str| {
        fresh += 1;
        format!("{p}{fresh}")
    };
    for _ in &middle {
        let paired = rng.gen_bool(0.5);
        let mut flows = Vec::new();
        if paired {
            for _ in 0..rng.gen_range(0..=2) {
                let t = pick(rng, &targets).clone();
                for s in [1, -1] {
                    flows.push(Flow {
                        name: next("r"),
                        sign: s,
                        vertex: t.clone(),
                    });
                }
            }
        } else {
            for _ in 0..rng.gen_range(0..=2) {
                let t = pick(rng, &targets).clone();
                flows.push(Flow {
                    name: next("r"),
                    sign: sign(rng),
                    vertex: t,
                });
            }
        }
        outgoing.push(flows);
        out_paired.push(paired);
    }
    // per top point: incoming flows into each middle component, grouped
    // into cancelling pairs when the outgoing side is free
    let mut incoming: Vec<Vec<(usize, Vec<Flow>)>> = Vec::new();
    for _ in &tops {
        let mut groups = Vec::new();
        for (ai, a) in middle.iter().enumerate() {
            let vs = vertices(a);
            if out_paired[ai] {
                for _ in 0..rng.gen_range(0..=2) {
                    let v = pick(rng, &vs).clone();
                    groups.push((
                        ai,
                        vec![Flow {
                            name: next("l"),
                            sign: sign(rng),
                            vertex: v,
                        }],
                    ));
                }
            } else {
                for _ in 0..rng.gen_range(0..=1) {
                    let v = pick(rng, &vs).clone();
                    let pair = [1, -1]
                        .map(|s| Flow {
                            name: next("l"),
                            sign: s,
                            vertex: v.clone(),
                        })
                        .into_iter()
                        .collect();
                    groups.push((ai, pair));
                }
            }
        }
        incoming.push(groups);
    }

    let mut moduli = Vec::new();
    let mut m10 = Vec::new();
    for (a, flows) in middle.iter().zip(&outgoing) {
        if !flows.is_empty() {
            m10.push(point_piece(a, &flows.iter().collect::<Vec<_>>(), sign(rng)));
        }
    }
    let mut m21 = Vec::new();
    let mut m20 = Vec::new();
    for (q, groups) in tops.iter().zip(&incoming) {
        let flows: Vec<&Flow> = groups.iter().flat_map(|(_, g)| g).collect();
        if flows.is_empty() {
            continue;
        }
        let p1 = point_piece(q, &flows, sign(rng));
        let eps1 = p1.epsilon(0);
        let eps = sign(rng);
        let mut ends: Vec<(String, String, String)> = Vec::new();
        let mut strata = Vec::new();
        let mut endpoint_map = BTreeMap::new();
        for (ai, g) in groups {
            let Some(p2) = m10.iter().find(|p| p.base_component == middle[*ai].id) else {
                continue;
            };
            let b_n = middle[*ai].dim;
            let eps2 = p2.epsilon(b_n);
            // the two broken ends of each arc
            let mut pairs: Vec<[(&Flow, &Flow); 2]> = Vec::new();
            if out_paired[*ai] {
                for l in g {
                    for rs in outgoing[*ai].chunks(2) {
                        pairs.push([(l, &rs[0]), (l, &rs[1])]);
                    }
                }
            } else {
                for r in &outgoing[*ai] {
                    pairs.push([(&g[0], r), (&g[1], r)]);
                }
            }
            for pair in pairs {
                let names = pair.map(|(l, r)| (format!("{}{}", l.name, r.name), l, r));
                // the start of an edge has boundary coefficient +1
                let coeff =
                    |(_, l, r): &(String, &Flow, &Flow)| eps * eps1 * eps2 * l.sign * r.sign;
                let [x, y] = if coeff(&names[0]) == 1 {
                    [&names[0], &names[1]]
                } else {
                    [&names[1], &names[0]]
                };
                let e = next("g");
                ends.push((e, x.0.clone(), y.0.clone()));
                for (cell, l, r) in [x, y] {
                    strata.push(label(cell, 1, &l.name, &r.name, Family::Internal));
                    endpoint_map.insert(
                        (q.cubulation.cells_of_dim(0)[0].to_string(), cell.clone()),
                        CellChain::single(r.vertex.clone(), 1),
                    );
                }
            }
        }
        m21.push(p1);
        if !ends.is_empty() {
            let spec: Vec<(&str, &str, &str)> = ends
                .iter()
                .map(|(e, a, b)| (e.as_str(), a.as_str(), b.as_str()))
                .collect();
            m20.push(Piece {
                base_component: q.id.clone(),
                fiber: arcs(&spec),
                orientation_coeff: eps,
                support: None,
                endpoint_map,
                strata,
            });
        }
    }
    for (from, to, pieces) in [(1, 0, m10), (2, 1, m21), (2, 0, m20)] {
        if !pieces.is_empty() {
            moduli.push(Bundle { from, to, pieces });
        }
    }
    let mut levels = vec![level(0, bottom)];
    if !middle.is_empty() {
        levels.push(level(1, middle));
    }
    if !tops.is_empty() {
        levels.push(level(2, tops));
    }
    let top = levels.last().map_or(0, |l| l.index);
    category(name, top, levels, moduli)
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;
    use crate::flow::validate_all;

    #[test]
    fn generated_categories_validate() {
        let mut rng = StdRng::seed_from_u64(7);
        let (mut with_arcs, mut with_circle_middle) = (0, 0);
        for n in 0..300 {
            let fc = random_category(&mut rng, &format!("random-{n}"));
            let cells: usize = fc
                .levels
                .values()
                .flat_map(|l| &l.components)
                .map(|c| c.cubulation.len())
                .sum();
            assert!(cells <= MAX_CELLS, "{cells} cells");
            assert!(fc.levels.len() <= 3);
            let r = validate_all(&fc);
            assert!(r.is_valid(), "{}:\n{r}", fc.name);
            if fc
                .bundle(2, 0)
                .is_some_and(|b| b.pieces.iter().any(|p| p.fiber.has_boundary()))
            {
                with_arcs += 1;
            }
            if fc
                .level(1)
                .is_some_and(|l| l.components.iter().any(|c| c.dim == 1))
            {
                with_circle_middle += 1;
            }
        }
        assert!(
            with_arcs > 30 && with_circle_middle > 30,
            "{with_arcs} {with_circle_middle}"
        );
    }
}
