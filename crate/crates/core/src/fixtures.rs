//! The bundled example categories, continuations and homotopy, built in code.
//!
//! The JSON files under `fixtures/` are serializations of these builders.

use std::collections::BTreeMap;

use crate::continuation::{identity_continuation, ContinuationData, HomotopyData};
use crate::cubical::{Cell, CellChain, Cubulation};
use crate::flow::{
    Bundle, Component, CriticalLevel, Family, FlowCategory, Piece, StratumLabel, SupportPoint,
};

pub fn component(id: &str, cubulation: Cubulation) -> Component {
    Component {
        id: id.to_string(),
        dim: cubulation.dim().unwrap_or(0),
        cubulation,
    }
}

pub fn level(index: usize, components: Vec<Component>) -> CriticalLevel {
    CriticalLevel { index, components }
}

pub fn category(
    name: &str,
    top_index: usize,
    levels: Vec<CriticalLevel>,
    moduli: Vec<Bundle>,
) -> FlowCategory {
    FlowCategory {
        name: name.to_string(),
        top_index,
        levels: levels.into_iter().map(|l| (l.index, l)).collect(),
        moduli,
    }
}

/// `(base cell, fiber cell, [(coeff, target)])`.
pub type EndpointEntry<'a> = (&'a str, &'a str, &'a [(i64, &'a str)]);

/// Endpoint map from its entries.
pub fn emap(entries: &[EndpointEntry]) -> BTreeMap<(String, String), CellChain> {
    entries
        .iter()
        .map(|(a, y, img)| {
            (
                (a.to_string(), y.to_string()),
                CellChain::from_terms(img.iter().map(|(c, t)| (t.to_string(), *c))),
            )
        })
        .collect()
}

pub fn label(x: &str, via: usize, l: &str, r: &str, family: Family) -> StratumLabel {
    StratumLabel {
        fiber_boundary_cell: x.to_string(),
        via_index: via,
        left_cell: l.to_string(),
        right_cell: r.to_string(),
        family,
    }
}

/// Disjoint oriented arcs `(edge, from, to)`, a 1-manifold with boundary.
pub fn arcs(spec: &[(&str, &str, &str)]) -> Cubulation {
    let mut cells = Vec::new();
    for (e, a, b) in spec {
        cells.push(Cell::vertex(*a));
        cells.push(Cell::vertex(*b));
        cells.push(Cell::edge(*e, a, b));
    }
    let fund = CellChain::from_terms(spec.iter().map(|(e, _, _)| (e.to_string(), 1)));
    Cubulation::new_with_boundary(cells, Some(fund)).expect("arcs")
}

pub fn piece(
    base: &str,
    fiber: Cubulation,
    orientation_coeff: i64,
    endpoint_map: BTreeMap<(String, String), CellChain>,
    strata: Vec<StratumLabel>,
) -> Piece {
    Piece {
        base_component: base.to_string(),
        fiber,
        orientation_coeff,
        support: None,
        endpoint_map,
        strata,
    }
}

/// Vertices `u0, u1` and edges `d0: u0 -> u1`, `d1: u1 -> u0`.
fn base_circle() -> Cubulation {
    Cubulation::circle("u", "d", 2)
}

/// Circle fiber over a point, wrapped once around the base circle.
fn wrapping_piece(base: &str, pt: &str, prefix: &str, sign: i64) -> Piece {
    let fiber = Cubulation::circle(&format!("{prefix}v"), &format!("{prefix}e"), 2);
    let v0 = format!("{prefix}v0");
    let v1 = format!("{prefix}v1");
    let e0 = format!("{prefix}e0");
    let e1 = format!("{prefix}e1");
    piece(
        base,
        fiber,
        sign,
        emap(&[
            (pt, &v0, &[(1, "u0")]),
            (pt, &v1, &[(1, "u1")]),
            (pt, &e0, &[(1, "d0")]),
            (pt, &e1, &[(1, "d1")]),
        ]),
        vec![],
    )
}

/// Height function on the sphere composed with `z²`: a circle at the
/// bottom, two points at index 2.
pub fn sphere_z2() -> FlowCategory {
    category(
        "sphere-z2",
        2,
        vec![
            level(0, vec![component("C", base_circle())]),
            level(
                2,
                vec![
                    component("N", Cubulation::point("n")),
                    component("S", Cubulation::point("s")),
                ],
            ),
        ],
        vec![Bundle {
            from: 2,
            to: 0,
            pieces: vec![
                wrapping_piece("N", "n", "fn", 1),
                wrapping_piece("S", "s", "fs", -1),
            ],
        }],
    )
}

/// Two points at index 0 and a circle at index 1.
pub fn sphere_neg_z2() -> FlowCategory {
    let fiber = Cubulation::points(&[("a", 1), ("b", -1)]);
    category(
        "sphere-neg-z2",
        2,
        vec![
            level(
                0,
                vec![
                    component("N", Cubulation::point("np")),
                    component("S", Cubulation::point("sp")),
                ],
            ),
            level(1, vec![component("C", Cubulation::circle("v", "e", 2))]),
        ],
        vec![Bundle {
            from: 1,
            to: 0,
            pieces: vec![piece(
                "C",
                fiber,
                1,
                emap(&[
                    ("v0", "a", &[(1, "np")]),
                    ("v1", "a", &[(1, "np")]),
                    ("v0", "b", &[(1, "sp")]),
                    ("v1", "b", &[(1, "sp")]),
                ]),
                vec![],
            )],
        }],
    )
}

/// Round sphere with a minimum `p` and a maximum `q`.
pub fn sphere_morse() -> FlowCategory {
    let fiber = Cubulation::circle("w", "c", 2);
    category(
        "sphere-morse",
        2,
        vec![
            level(0, vec![component("P", Cubulation::point("p"))]),
            level(2, vec![component("Q", Cubulation::point("q"))]),
        ],
        vec![Bundle {
            from: 2,
            to: 0,
            pieces: vec![piece(
                "Q",
                fiber,
                1,
                emap(&[("q", "w0", &[(1, "p")]), ("q", "w1", &[(1, "p")])]),
                vec![],
            )],
        }],
    )
}

/// Product of two 3-gon circles with cells named `x.y`.
pub fn torus_cubulation() -> Cubulation {
    Cubulation::product(
        &Cubulation::circle("x", "a", 3),
        &Cubulation::circle("y", "b", 3),
        |x, y| format!("{x}.{y}"),
    )
}

/// Constant function on the torus.
pub fn torus_constant() -> FlowCategory {
    category(
        "torus-constant",
        0,
        vec![level(0, vec![component("T", torus_cubulation())])],
        vec![],
    )
}

/// Perfect Morse function on the torus with critical points `p, a, b, q`.
pub fn torus_morse_smale() -> FlowCategory {
    let to_p = |base: &str, plus: &str, minus: &str| {
        piece(
            base,
            Cubulation::points(&[(plus, 1), (minus, -1)]),
            1,
            emap(&[
                (base_pt(base), plus, &[(1, "p")]),
                (base_pt(base), minus, &[(1, "p")]),
            ]),
            vec![],
        )
    };
    fn base_pt(b: &str) -> &'static str {
        match b {
            "A" => "a",
            "B" => "b",
            _ => "q",
        }
    }
    let m21 = piece(
        "Q",
        Cubulation::points(&[("qa1", 1), ("qa2", -1), ("qb1", 1), ("qb2", -1)]),
        1,
        emap(&[
            ("q", "qa1", &[(1, "a")]),
            ("q", "qa2", &[(1, "a")]),
            ("q", "qb1", &[(1, "b")]),
            ("q", "qb2", &[(1, "b")]),
        ]),
        vec![],
    );
    // broken flows q -> a -> p bound arcs of unbroken flows q -> p
    let fiber20 = arcs(&[
        ("g1", "qa1ap", "qa1am"),
        ("g2", "qa2am", "qa2ap"),
        ("g3", "qb1bp", "qb1bm"),
        ("g4", "qb2bm", "qb2bp"),
    ]);
    let mut ends = Vec::new();
    let mut strata = Vec::new();
    for (l, r, x) in [
        ("qa1", "ap", "qa1ap"),
        ("qa1", "am", "qa1am"),
        ("qa2", "ap", "qa2ap"),
        ("qa2", "am", "qa2am"),
        ("qb1", "bp", "qb1bp"),
        ("qb1", "bm", "qb1bm"),
        ("qb2", "bp", "qb2bp"),
        ("qb2", "bm", "qb2bm"),
    ] {
        ends.push(x);
        strata.push(label(x, 1, l, r, Family::Internal));
    }
    let em: Vec<EndpointEntry> = ends.iter().map(|x| ("q", *x, &[(1, "p")][..])).collect();
    let m20 = piece("Q", fiber20, 1, emap(&em), strata);
    category(
        "torus-morse-smale",
        2,
        vec![
            level(0, vec![component("P", Cubulation::point("p"))]),
            level(
                1,
                vec![
                    component("A", Cubulation::point("a")),
                    component("B", Cubulation::point("b")),
                ],
            ),
            level(2, vec![component("Q", Cubulation::point("q"))]),
        ],
        vec![
            Bundle {
                from: 1,
                to: 0,
                pieces: vec![to_p("A", "ap", "am"), to_p("B", "bp", "bm")],
            },
            Bundle {
                from: 2,
                to: 1,
                pieces: vec![m21],
            },
            Bundle {
                from: 2,
                to: 0,
                pieces: vec![m20],
            },
        ],
    )
}

/// Circle at index 0, points `r` at 1 and `q` at 2, with broken flows
/// `q -> r -> C` bounding the two arcs of `M(2, 0)`.
pub fn three_level() -> FlowCategory {
    let m21 = piece(
        "Q",
        Cubulation::points(&[("a", 1), ("b", -1)]),
        1,
        emap(&[("q", "a", &[(1, "r")]), ("q", "b", &[(1, "r")])]),
        vec![],
    );
    let m10 = piece(
        "R",
        Cubulation::points(&[("c", 1), ("d", -1)]),
        1,
        emap(&[("r", "c", &[(1, "u0")]), ("r", "d", &[(1, "u1")])]),
        vec![],
    );
    let m20 = piece(
        "Q",
        arcs(&[("g1", "qac", "qad"), ("g2", "qbd", "qbc")]),
        1,
        emap(&[
            ("q", "qac", &[(1, "u0")]),
            ("q", "qad", &[(1, "u1")]),
            ("q", "qbc", &[(1, "u0")]),
            ("q", "qbd", &[(1, "u1")]),
            ("q", "g1", &[(1, "d0")]),
            ("q", "g2", &[(1, "d1")]),
        ]),
        vec![
            label("qac", 1, "a", "c", Family::Internal),
            label("qad", 1, "a", "d", Family::Internal),
            label("qbc", 1, "b", "c", Family::Internal),
            label("qbd", 1, "b", "d", Family::Internal),
        ],
    );
    category(
        "three-level",
        2,
        vec![
            level(0, vec![component("C", base_circle())]),
            level(1, vec![component("R", Cubulation::point("r"))]),
            level(2, vec![component("Q", Cubulation::point("q"))]),
        ],
        vec![
            Bundle {
                from: 2,
                to: 1,
                pieces: vec![m21],
            },
            Bundle {
                from: 1,
                to: 0,
                pieces: vec![m10],
            },
            Bundle {
                from: 2,
                to: 0,
                pieces: vec![m20],
            },
        ],
    )
}

pub fn categories() -> Vec<FlowCategory> {
    vec![
        sphere_z2(),
        sphere_neg_z2(),
        sphere_morse(),
        torus_constant(),
        torus_morse_smale(),
        three_level(),
    ]
}

/// `sphere-z2 -> sphere-neg-z2`: the circle collapses to `np`, and over `n`
/// a circle of flows sweeps out the index-1 circle.
pub fn z2_to_neg_z2() -> ContinuationData {
    let collapse = piece(
        "C",
        Cubulation::point("k"),
        1,
        emap(&[("u0", "k", &[(1, "np")]), ("u1", "k", &[(1, "np")])]),
        vec![],
    );
    let sweep = piece(
        "N",
        Cubulation::circle("w", "h", 2),
        1,
        emap(&[
            ("n", "w0", &[(1, "v0")]),
            ("n", "w1", &[(1, "v1")]),
            ("n", "h0", &[(1, "e0")]),
            ("n", "h1", &[(1, "e1")]),
        ]),
        vec![],
    );
    ContinuationData {
        name: "z2-to-neg-z2".into(),
        source: sphere_z2(),
        target: sphere_neg_z2(),
        bundles: vec![
            Bundle {
                from: 0,
                to: 0,
                pieces: vec![collapse],
            },
            Bundle {
                from: 2,
                to: 1,
                pieces: vec![sweep],
            },
        ],
    }
}

/// `sphere-neg-z2 -> sphere-z2`: both points go to `u0`, and two isolated
/// flows from one point of the edge `e0` reach `n` and `s`.
pub fn neg_z2_to_z2() -> ContinuationData {
    let to_u0 = |base: &str, pt: &str, y: &str| {
        piece(
            base,
            Cubulation::point(y),
            1,
            emap(&[(pt, y, &[(1, "u0")])]),
            vec![],
        )
    };
    let lift = Piece {
        base_component: "C".into(),
        fiber: Cubulation::point("z"),
        orientation_coeff: 1,
        support: Some(vec![
            SupportPoint {
                id: "x".into(),
                sign: 1,
                cell: "e0".into(),
            },
            SupportPoint {
                id: "y".into(),
                sign: 1,
                cell: "e0".into(),
            },
        ]),
        endpoint_map: emap(&[("x", "z", &[(1, "n")]), ("y", "z", &[(1, "s")])]),
        strata: vec![],
    };
    ContinuationData {
        name: "neg-z2-to-z2".into(),
        source: sphere_neg_z2(),
        target: sphere_z2(),
        bundles: vec![
            Bundle {
                from: 0,
                to: 0,
                pieces: vec![to_u0("N", "np", "kn"), to_u0("S", "sp", "ks")],
            },
            Bundle {
                from: 1,
                to: 2,
                pieces: vec![lift],
            },
        ],
    }
}

pub fn identity_continuations() -> Vec<ContinuationData> {
    categories().iter().map(identity_continuation).collect()
}

/// A continuation of `sphere-neg-z2` to itself that sends `np` to `sp` and
/// moves the circle's vertices by a constant correction.
pub fn neg_z2_shift() -> ContinuationData {
    let fc = sphere_neg_z2();
    let to_sp = |base: &str, pt: &str, y: &str| {
        piece(
            base,
            Cubulation::point(y),
            1,
            emap(&[(pt, y, &[(1, "sp")])]),
            vec![],
        )
    };
    let ident = piece(
        "C",
        Cubulation::point("i1"),
        1,
        emap(&[
            ("v0", "i1", &[(1, "v0")]),
            ("v1", "i1", &[(1, "v1")]),
            ("e0", "i1", &[(1, "e0")]),
            ("e1", "i1", &[(1, "e1")]),
        ]),
        vec![],
    );
    let correction = piece(
        "C",
        Cubulation::point("i2"),
        -1,
        emap(&[("v0", "i2", &[(1, "v0")]), ("v1", "i2", &[(1, "v0")])]),
        vec![],
    );
    ContinuationData {
        name: "neg-z2-shift".into(),
        source: fc.clone(),
        target: fc,
        bundles: vec![
            Bundle {
                from: 0,
                to: 0,
                pieces: vec![to_sp("N", "np", "jn"), to_sp("S", "sp", "js")],
            },
            Bundle {
                from: 1,
                to: 1,
                pieces: vec![ident, correction],
            },
        ],
    }
}

/// Square with `F21` the shift and the other three identities; `H` is a
/// single flow from `np` to `v0`.
pub fn homotopy_square() -> HomotopyData {
    let id = identity_continuation(&sphere_neg_z2());
    let h = piece(
        "N",
        Cubulation::point("t"),
        1,
        emap(&[("np", "t", &[(1, "v0")])]),
        vec![],
    );
    HomotopyData {
        name: "neg-z2-square".into(),
        f21: neg_z2_shift(),
        f31: id.clone(),
        f42: id.clone(),
        f43: id,
        h: vec![Bundle {
            from: 0,
            to: 1,
            pieces: vec![h],
        }],
    }
}

/// Negative control: `H` with its orientation reversed.
pub fn homotopy_square_corrupted() -> HomotopyData {
    let mut hd = homotopy_square();
    hd.name = "neg-z2-square-corrupted".into();
    hd.h[0].pieces[0].orientation_coeff = -1;
    hd
}
