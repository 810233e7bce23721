//! The JSON fixtures are the serialized builders. Run with
//! `MBHOM_REGEN=1` to rewrite them after changing a builder.

use std::path::{Path, PathBuf};

use mbhom::continuation::{ContinuationData, HomotopyData};
use mbhom::fixtures;
use mbhom::flow::{Family, FlowCategory};
use mbhom::io::{continuation_to_document, homotopy_to_document, pretty, to_json};

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Category with a bundle from level 1 to itself.
pub fn self_loop() -> FlowCategory {
    let mut fc = fixtures::sphere_neg_z2();
    fc.name = "self-loop".into();
    fc.moduli[0].to = 1;
    fc
}

/// Three-level category with two stratum labels swapped.
pub fn permuted_labels() -> FlowCategory {
    let mut fc = fixtures::three_level();
    fc.name = "three-level-permuted".into();
    let strata = &mut fc.moduli[2].pieces[0].strata;
    let (a, b) = (
        strata[0].fiber_boundary_cell.clone(),
        strata[3].fiber_boundary_cell.clone(),
    );
    strata[0].fiber_boundary_cell = b;
    strata[3].fiber_boundary_cell = a;
    let _ = Family::Internal;
    fc
}

/// Continuation with the sign of one piece flipped.
pub fn flipped_continuation() -> ContinuationData {
    let mut cd = fixtures::neg_z2_to_z2();
    cd.name = "neg-z2-to-z2-flipped".into();
    cd.bundles[0].pieces[0].orientation_coeff = -1;
    cd
}

fn files() -> Vec<(PathBuf, String)> {
    let d = dir();
    let mut out = Vec::new();
    for fc in fixtures::categories() {
        out.push((d.join(format!("{}.json", fc.name)), to_json(&fc)));
    }
    let mut conts = fixtures::identity_continuations();
    conts.extend([
        fixtures::z2_to_neg_z2(),
        fixtures::neg_z2_to_z2(),
        fixtures::neg_z2_shift(),
    ]);
    for cd in conts {
        out.push((
            d.join(format!("{}.json", cd.name)),
            pretty(&continuation_to_document(&cd)),
        ));
    }
    let hd: HomotopyData = fixtures::homotopy_square();
    out.push((
        d.join(format!("{}.json", hd.name)),
        pretty(&homotopy_to_document(&hd)),
    ));
    let neg = d.join("negative");
    let hd = fixtures::homotopy_square_corrupted();
    out.push((
        neg.join(format!("{}.json", hd.name)),
        pretty(&homotopy_to_document(&hd)),
    ));
    for fc in [self_loop(), permuted_labels()] {
        out.push((neg.join(format!("{}.json", fc.name)), to_json(&fc)));
    }
    let cd = flipped_continuation();
    out.push((
        neg.join(format!("{}.json", cd.name)),
        pretty(&continuation_to_document(&cd)),
    ));
    out
}

#[test]
fn fixture_files_match_builders() {
    let regen = std::env::var_os("MBHOM_REGEN").is_some();
    for (path, text) in files() {
        if regen {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let on_disk =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(
            on_disk,
            text,
            "{} is stale; rerun with MBHOM_REGEN=1",
            path.display()
        );
    }
}
