//! Worked examples checked against hand computations.

use mbhom::chains::{FormalChain, GeneratorId, GeneratorKind};
use mbhom::complex::{generator, partial0, partialj, total_boundary, MbChain};
use mbhom::continuation::{chain_map_from_continuation, verify_chain_homotopy, verify_chain_map};
use mbhom::fixtures;
use mbhom::flow::{moduli_boundary, validate_all, FlowError, Rule};
use mbhom::io::{
    continuation_from_document, fixtures_dir, from_json, load_homotopy,
    parse_flow_category_unchecked, ContinuationDocument,
};

fn gen(fc: &mbhom::flow::FlowCategory, i: usize, cell: &str) -> mbhom::complex::MbGenerator {
    generator(fc, i, cell).unwrap_or_else(|| panic!("{cell}@{i}"))
}

#[test]
fn index_one_point_bounds_n_minus_s() {
    let fc = fixtures::sphere_neg_z2();
    for v in ["v0", "v1"] {
        let d = partialj(&fc, &gen(&fc, 1, v), 1);
        let n_minus_s = MbChain::from_terms([(gen(&fc, 0, "np"), 1), (gen(&fc, 0, "sp"), -1)]);
        assert!(d == n_minus_s || d == n_minus_s.scaled(-1), "{d}");
        assert_eq!(total_boundary(&fc, &gen(&fc, 1, v)), d);
    }
}

#[test]
fn cellular_part_carries_the_degree_sign() {
    // d0: u0 -> u1 on level 0 has degree 1, so the sign is -1 times from - to
    let fc = fixtures::sphere_z2();
    let d = partial0(&fc, &gen(&fc, 0, "d0"));
    assert_eq!(
        d,
        MbChain::from_terms([(gen(&fc, 0, "u0"), -1), (gen(&fc, 0, "u1"), 1)])
    );
    // on level 1 of sphere-neg-z2 an edge has degree 2
    let fc = fixtures::sphere_neg_z2();
    let d = partial0(&fc, &gen(&fc, 1, "e0"));
    assert_eq!(
        d,
        MbChain::from_terms([(gen(&fc, 1, "v0"), 1), (gen(&fc, 1, "v1"), -1)])
    );
}

#[test]
fn wrapping_fibers_push_to_the_fundamental_cycle() {
    let fc = fixtures::sphere_z2();
    let cycle = MbChain::from_terms([(gen(&fc, 0, "d0"), 1), (gen(&fc, 0, "d1"), 1)]);
    assert_eq!(partialj(&fc, &gen(&fc, 2, "n"), 2), cycle);
    assert_eq!(partialj(&fc, &gen(&fc, 2, "s"), 2), cycle.scaled(-1));
    assert!(partialj(&fc, &gen(&fc, 2, "n"), 1).is_zero());
}

fn fp(l: &str, r: &str) -> GeneratorId {
    GeneratorId::new(
        format!("{l} x_1 {r}"),
        0,
        GeneratorKind::FiberedProductComponent,
    )
}

#[test]
fn three_level_moduli_boundary_by_hand() {
    // M(2,1) = {a+, b-} over q, M(1,0) = {c+, d-} over r, all orientations +1,
    // base dimension 0 and i = 2, so the sign of l x r is just a_l r_r.
    let fc = fixtures::three_level();
    let expect = FormalChain::from_terms([
        (fp("a", "c"), 1),
        (fp("a", "d"), -1),
        (fp("b", "c"), -1),
        (fp("b", "d"), 1),
    ]);
    assert_eq!(moduli_boundary(&fc, 2, 2).unwrap(), expect);
    // the same chain read off the labelled ends: an edge from x to y has
    // boundary x - y, and g1 = qac -> qad, g2 = qbd -> qbc
    let ends = [("a", "c", 1), ("a", "d", -1), ("b", "d", 1), ("b", "c", -1)];
    let from_labels = FormalChain::from_terms(ends.iter().map(|(l, r, c)| (fp(l, r), *c)));
    assert_eq!(from_labels, expect);
}

#[test]
fn moduli_boundary_of_a_single_step_is_empty() {
    for fc in fixtures::categories() {
        for b in &fc.moduli {
            if b.from == b.to + 1 {
                assert!(
                    moduli_boundary(&fc, b.from, 1).unwrap().is_zero(),
                    "{}",
                    fc.name
                );
            }
        }
    }
    // no index-1 level, so M(2,0) of sphere-z2 is closed
    assert!(moduli_boundary(&fixtures::sphere_z2(), 2, 2)
        .unwrap()
        .is_zero());
    assert!(matches!(
        moduli_boundary(&fixtures::sphere_z2(), 2, 0),
        Err(FlowError::UnknownLevel(_))
    ));
}

#[test]
fn three_level_differential_by_hand() {
    let fc = fixtures::three_level();
    // r flows to u0 with +1 and to u1 with -1
    let d = total_boundary(&fc, &gen(&fc, 1, "r"));
    assert_eq!(
        d,
        MbChain::from_terms([(gen(&fc, 0, "u0"), 1), (gen(&fc, 0, "u1"), -1)])
    );
    // q: the two flows to r cancel; the arcs sweep d0 + d1
    assert!(partialj(&fc, &gen(&fc, 2, "q"), 1).is_zero());
    let d = partialj(&fc, &gen(&fc, 2, "q"), 2);
    assert_eq!(
        d,
        MbChain::from_terms([(gen(&fc, 0, "d0"), 1), (gen(&fc, 0, "d1"), 1)])
    );
}

fn negative(name: &str) -> std::path::PathBuf {
    fixtures_dir().join("negative").join(name)
}

#[test]
fn permuted_labels_fail_the_strata_check() {
    let fc = parse_flow_category_unchecked(
        &std::fs::read_to_string(negative("three-level-permuted.json")).unwrap(),
    )
    .unwrap();
    let r = validate_all(&fc);
    assert!(r.has(Rule::Strata), "{r}");
    // the differential alone does not notice
    assert!(mbhom::complex::check_blocks(&fc).is_ok());
}

#[test]
fn flipped_continuation_is_not_a_chain_map() {
    let text = std::fs::read_to_string(negative("neg-z2-to-z2-flipped.json")).unwrap();
    let doc: ContinuationDocument = from_json(&text).unwrap();
    let cd = continuation_from_document(&doc, &fixtures::sphere_neg_z2(), &fixtures::sphere_z2())
        .unwrap();
    let m = chain_map_from_continuation(&cd, None).unwrap();
    assert!(!verify_chain_map(&m.matrices, &m.source, &m.target));
    let good = chain_map_from_continuation(&fixtures::neg_z2_to_z2(), None).unwrap();
    assert!(verify_chain_map(&good.matrices, &good.source, &good.target));
}

#[test]
fn corrupted_homotopy_file_fails() {
    let dirs = [fixtures_dir()];
    let good = load_homotopy(&fixtures_dir().join("neg-z2-square.json"), &dirs).unwrap();
    assert!(verify_chain_homotopy(&good).unwrap());
    let bad = load_homotopy(&negative("neg-z2-square-corrupted.json"), &dirs).unwrap();
    assert!(!verify_chain_homotopy(&bad).unwrap());
}
