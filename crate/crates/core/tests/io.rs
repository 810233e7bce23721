use mbhom::complex::morse_bott_homology;
use mbhom::fixtures;
use mbhom::flow::Rule;
use mbhom::io::{
    continuation_to_document, fixtures_dir, load_flow_category, load_homotopy, parse_continuation,
    parse_flow_category, parse_flow_category_unchecked, pretty, to_json, IoError,
};

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(format!("{name}.json"))).unwrap()
}

#[test]
fn categories_round_trip() {
    for fc in fixtures::categories() {
        let text = to_json(&fc);
        let back = parse_flow_category(&text).unwrap();
        assert_eq!(back, fc, "{}", fc.name);
        assert_eq!(to_json(&back), text);
    }
}

#[test]
fn bundled_files_load() {
    for fc in fixtures::categories() {
        let loaded = load_flow_category(&fixtures_dir().join(format!("{}.json", fc.name))).unwrap();
        assert_eq!(loaded, fc);
    }
}

#[test]
fn sphere_z2_levels() {
    let fc = parse_flow_category(&fixture_text("sphere-z2")).unwrap();
    let idx: Vec<usize> = fc.levels.keys().copied().collect();
    assert_eq!(idx, [0, 2]);
    let bottom = &fc.levels[&0].components;
    assert_eq!(bottom.len(), 1);
    assert_eq!(bottom[0].dim, 1);
    assert_eq!(fc.levels[&2].components.len(), 2);
    assert!(fc.levels[&2]
        .components
        .iter()
        .all(|c| c.dim == 0 && c.cubulation.len() == 1));
}

#[test]
fn boundary_sign_two_is_a_validation_error() {
    let text = fixture_text("sphere-z2");
    let needle = "[-1, 0, 1, \"u1\"]";
    assert!(text.contains(needle), "fixture layout changed");
    let bad = text.replacen(needle, "[2, 0, 1, \"u1\"]", 1);
    let err = parse_flow_category(&bad).unwrap_err();
    assert_eq!(err.kind(), "ValidationError", "{err}");
}

#[test]
fn truncated_text_is_a_schema_error() {
    let text = fixture_text("three-level");
    let err = parse_flow_category(&text[..text.len() / 2]).unwrap_err();
    assert!(matches!(err, IoError::Schema { .. }), "{err}");
    assert!(err.to_string().starts_with("SchemaError at $."));
}

#[test]
fn unknown_keys_and_wrong_types_are_schema_errors() {
    let err = parse_flow_category(
        r#"{"name": "x", "top_index": 0, "levels": [], "moduli": [], "extra": 1}"#,
    )
    .unwrap_err();
    assert_eq!(err.kind(), "SchemaError");
    let err =
        parse_flow_category(r#"{"name": "x", "top_index": "zero", "levels": [], "moduli": []}"#)
            .unwrap_err();
    match err {
        IoError::Schema { path, .. } => assert_eq!(path, "$.top_index"),
        e => panic!("{e}"),
    }
}

#[test]
fn empty_levels_give_zero_homology() {
    let fc =
        parse_flow_category(r#"{"name": "empty", "top_index": 0, "levels": [], "moduli": []}"#)
            .unwrap();
    let h = morse_bott_homology(&fc, None).unwrap();
    assert!(h.groups.values().all(|g| g.is_zero()));
    assert!(!h.groups.is_empty());
}

#[test]
fn self_loop_fails_validation_with_the_index_rule() {
    let text = std::fs::read_to_string(fixtures_dir().join("negative/self-loop.json")).unwrap();
    assert!(parse_flow_category_unchecked(&text).is_ok());
    let err = parse_flow_category(&text).unwrap_err();
    assert!(err.report().unwrap().has(Rule::WeakSelfIndexing));
}

#[test]
fn continuation_documents_round_trip() {
    let mut all = fixtures::identity_continuations();
    all.extend([
        fixtures::z2_to_neg_z2(),
        fixtures::neg_z2_to_z2(),
        fixtures::neg_z2_shift(),
    ]);
    for cd in all {
        let text = pretty(&continuation_to_document(&cd));
        let back = parse_continuation(&text, &cd.source, &cd.target).unwrap();
        assert_eq!(back, cd);
        assert_eq!(text, fixture_text(&cd.name));
    }
}

#[test]
fn continuation_against_wrong_categories_is_a_reference_error() {
    let cd = fixtures::z2_to_neg_z2();
    let text = pretty(&continuation_to_document(&cd));
    let err = parse_continuation(&text, &cd.source, &cd.source).unwrap_err();
    assert_eq!(err.kind(), "ReferenceError");
}

#[test]
fn homotopy_resolves_by_name() {
    let dir = fixtures_dir();
    let hd = load_homotopy(&dir.join("neg-z2-square.json"), std::slice::from_ref(&dir)).unwrap();
    assert_eq!(hd, fixtures::homotopy_square());
    let err = load_homotopy(&dir.join("neg-z2-square.json"), &[dir.join("negative")]).unwrap_err();
    assert_eq!(err.kind(), "ReferenceError");
}
