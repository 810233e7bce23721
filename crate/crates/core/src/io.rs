//! JSON documents for categories, continuations and homotopies.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::IntMatrix;
use crate::complex::MorseBottComplex;
use crate::continuation::{
    continuation_boundary_validate, homotopy_boundary_validate, ContinuationData, HomotopyData,
};
use crate::cubical::{BoundaryEntry, Cell, CellChain, CubicalError, Cubulation};
use crate::flow::{
    validate_all, Bundle, Component, CriticalLevel, FlowCategory, Piece, Report, Rule,
    StratumLabel, SupportPoint,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("SchemaError at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("ValidationError: {}", first_line(.0))]
    Validation(Report),
    #[error("ReferenceError: {0}")]
    Reference(String),
    #[error("IoError: {path}: {message}")]
    Io { path: String, message: String },
}

fn first_line(r: &Report) -> String {
    match r.diagnostics.as_slice() {
        [] => "invalid".into(),
        [d] => d.to_string(),
        [d, rest @ ..] => format!("{d} (and {} more)", rest.len()),
    }
}

impl IoError {
    /// Machine-readable first token of the error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Schema { .. } => "SchemaError",
            Self::Validation(_) => "ValidationError",
            Self::Reference(_) => "ReferenceError",
            Self::Io { .. } => "IoError",
        }
    }

    pub fn report(&self) -> Option<&Report> {
        match self {
            Self::Validation(r) => Some(r),
            _ => None,
        }
    }
}

fn invalid(rule: Rule, msg: impl Into<String>) -> IoError {
    let mut r = Report::default();
    r.push(rule, msg);
    IoError::Validation(r)
}

// ---- document shapes ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub boundary: Vec<(i64, usize, u8, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub cells: Vec<CellDoc>,
    #[serde(default)]
    pub fundamental: Vec<(i64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub id: String,
    pub dim: usize,
    pub cells: Vec<CellDoc>,
    #[serde(default)]
    pub fundamental: Vec<(i64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDoc {
    pub index: usize,
    pub components: Vec<ComponentDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointDoc {
    pub cell_id: (String, String),
    pub image: Vec<(i64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub base_component: String,
    pub fiber: ComplexDoc,
    pub orientation_coeff: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<SupportPoint>>,
    #[serde(default)]
    pub endpoint_map: Vec<EndpointDoc>,
    #[serde(default)]
    pub strata: Vec<StratumLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub from: usize,
    pub to: usize,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowCategoryDocument {
    pub name: String,
    pub top_index: usize,
    #[serde(default)]
    pub levels: Vec<LevelDoc>,
    #[serde(default)]
    pub moduli: Vec<BundleDoc>,
}

/// Continuation between two categories named by `source` and `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuationDocument {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub bundles: Vec<BundleDoc>,
}

/// Square of continuations, each named, plus the homotopy bundles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyDocument {
    pub name: String,
    pub f21: String,
    pub f31: String,
    pub f42: String,
    pub f43: String,
    #[serde(default)]
    pub bundles: Vec<BundleDoc>,
}

// ---- parsing ----

/// Deserializes with the JSON path of the first schema error.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| IoError::Schema {
        path: match e.path().to_string().as_str() {
            "." | "" => "$".to_string(),
            p => format!("$.{p}"),
        },
        message: e.into_inner().to_string(),
    })
}

fn chain(terms: &[(i64, String)]) -> CellChain {
    CellChain::from_terms(terms.iter().map(|(c, id)| (id.clone(), *c)))
}

fn cells(docs: &[CellDoc]) -> Vec<Cell> {
    docs.iter()
        .map(|c| Cell {
            id: c.id.clone(),
            dim: c.dim,
            boundary: c
                .boundary
                .iter()
                .map(|(sign, axis, side, target)| BoundaryEntry {
                    sign: *sign,
                    axis: *axis,
                    side: *side,
                    target: target.clone(),
                })
                .collect(),
        })
        .collect()
}

fn cubical(e: CubicalError, what: &str) -> IoError {
    invalid(Rule::Structure, format!("{what}: {e}"))
}

fn fundamental(terms: &[(i64, String)]) -> Option<CellChain> {
    (!terms.is_empty()).then(|| chain(terms))
}

fn piece_from(d: &PieceDoc, what: &str) -> Result<Piece, IoError> {
    let fiber =
        Cubulation::new_with_boundary(cells(&d.fiber.cells), fundamental(&d.fiber.fundamental))
            .map_err(|e| cubical(e, &format!("{what} fiber")))?;
    let mut endpoint_map = BTreeMap::new();
    for e in &d.endpoint_map {
        if endpoint_map
            .insert(e.cell_id.clone(), chain(&e.image))
            .is_some()
        {
            return Err(invalid(
                Rule::Structure,
                format!(
                    "{what}: endpoint entry ({}, {}) given twice",
                    e.cell_id.0, e.cell_id.1
                ),
            ));
        }
    }
    Ok(Piece {
        base_component: d.base_component.clone(),
        fiber,
        orientation_coeff: d.orientation_coeff,
        support: d.support.clone(),
        endpoint_map,
        strata: d.strata.clone(),
    })
}

fn bundles_from(docs: &[BundleDoc], what: &str) -> Result<Vec<Bundle>, IoError> {
    docs.iter()
        .map(|b| {
            let pieces = b
                .pieces
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    piece_from(p, &format!("{what} bundle {}->{} piece {i}", b.from, b.to))
                })
                .collect::<Result<_, _>>()?;
            Ok(Bundle {
                from: b.from,
                to: b.to,
                pieces,
            })
        })
        .collect()
}

/// Document to category, checking only what construction needs.
pub fn category_from_document(d: &FlowCategoryDocument) -> Result<FlowCategory, IoError> {
    let mut levels = BTreeMap::new();
    for l in &d.levels {
        let mut components = Vec::new();
        for c in &l.components {
            let what = format!("level {} component {}", l.index, c.id);
            let cubulation = Cubulation::new(cells(&c.cells), fundamental(&c.fundamental))
                .map_err(|e| cubical(e, &what))?;
            components.push(Component {
                id: c.id.clone(),
                dim: c.dim,
                cubulation,
            });
        }
        if levels
            .insert(
                l.index,
                CriticalLevel {
                    index: l.index,
                    components,
                },
            )
            .is_some()
        {
            return Err(invalid(
                Rule::Structure,
                format!("level {} given twice", l.index),
            ));
        }
    }
    Ok(FlowCategory {
        name: d.name.clone(),
        top_index: d.top_index,
        levels,
        moduli: bundles_from(&d.moduli, "moduli")?,
    })
}

/// Parses without running the validators.
pub fn parse_flow_category_unchecked(text: &str) -> Result<FlowCategory, IoError> {
    category_from_document(&from_json(text)?)
}

/// Parses and runs every validator, rejecting on any diagnostic.
pub fn parse_flow_category(text: &str) -> Result<FlowCategory, IoError> {
    let fc = parse_flow_category_unchecked(text)?;
    let r = validate_all(&fc);
    if r.is_valid() {
        Ok(fc)
    } else {
        Err(IoError::Validation(r))
    }
}

// ---- serialization ----

fn chain_doc(c: &CellChain) -> Vec<(i64, String)> {
    c.iter().map(|(id, x)| (x, id.clone())).collect()
}

fn cell_docs(k: &Cubulation) -> Vec<CellDoc> {
    k.cells()
        .map(|c| {
            let mut b: Vec<_> = c
                .boundary
                .iter()
                .map(|e| (e.sign, e.axis, e.side, e.target.clone()))
                .collect();
            b.sort_by_key(|x| (x.1, x.2));
            CellDoc {
                id: c.id.clone(),
                dim: c.dim,
                boundary: b,
            }
        })
        .collect()
}

fn bundle_docs(bs: &[Bundle]) -> Vec<BundleDoc> {
    bs.iter()
        .map(|b| BundleDoc {
            from: b.from,
            to: b.to,
            pieces: b
                .pieces
                .iter()
                .map(|p| PieceDoc {
                    base_component: p.base_component.clone(),
                    fiber: ComplexDoc {
                        cells: cell_docs(&p.fiber),
                        fundamental: p.fiber.fundamental().map(chain_doc).unwrap_or_default(),
                    },
                    orientation_coeff: p.orientation_coeff,
                    support: p.support.clone(),
                    endpoint_map: p
                        .endpoint_map
                        .iter()
                        .filter(|(_, img)| !img.is_zero())
                        .map(|(k, img)| EndpointDoc {
                            cell_id: k.clone(),
                            image: chain_doc(img),
                        })
                        .collect(),
                    strata: p.strata.clone(),
                })
                .collect(),
        })
        .collect()
}

pub fn to_document(fc: &FlowCategory) -> FlowCategoryDocument {
    FlowCategoryDocument {
        name: fc.name.clone(),
        top_index: fc.top_index,
        levels: fc
            .levels
            .values()
            .map(|l| LevelDoc {
                index: l.index,
                components: l
                    .components
                    .iter()
                    .map(|c| ComponentDoc {
                        id: c.id.clone(),
                        dim: c.dim,
                        cells: cell_docs(&c.cubulation),
                        fundamental: c
                            .cubulation
                            .fundamental()
                            .map(chain_doc)
                            .unwrap_or_default(),
                    })
                    .collect(),
            })
            .collect(),
        moduli: bundle_docs(&fc.moduli),
    }
}

pub fn to_json(fc: &FlowCategory) -> String {
    pretty(&to_document(fc))
}

/// Indented JSON with scalar-only arrays kept on one line, so boundary and
/// chain entries read as `[1, 0, 0, "u0"]`.
pub fn pretty<T: Serialize>(t: &T) -> String {
    let v = serde_json::to_value(t).expect("documents serialize");
    let mut s = String::new();
    write_value(&v, 0, &mut s);
    s.push('\n');
    s
}

fn is_flat(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        serde_json::Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(depth + 1);
    let close = "  ".repeat(depth);
    match v {
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if is_flat(v) => {
            let items: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push('}');
        }
        x => out.push_str(&x.to_string()),
    }
}

pub fn continuation_to_document(cd: &ContinuationData) -> ContinuationDocument {
    ContinuationDocument {
        name: cd.name.clone(),
        source: cd.source.name.clone(),
        target: cd.target.name.clone(),
        bundles: bundle_docs(&cd.bundles),
    }
}

pub fn homotopy_to_document(hd: &HomotopyData) -> HomotopyDocument {
    HomotopyDocument {
        name: hd.name.clone(),
        f21: hd.f21.name.clone(),
        f31: hd.f31.name.clone(),
        f42: hd.f42.name.clone(),
        f43: hd.f43.name.clone(),
        bundles: bundle_docs(&hd.h),
    }
}

/// Builds continuation data against already loaded categories; the names in
/// the document must match them.
pub fn continuation_from_document(
    d: &ContinuationDocument,
    source: &FlowCategory,
    target: &FlowCategory,
) -> Result<ContinuationData, IoError> {
    if d.source != source.name || d.target != target.name {
        return Err(IoError::Reference(format!(
            "{} expects {} -> {}, given {} -> {}",
            d.name, d.source, d.target, source.name, target.name
        )));
    }
    Ok(ContinuationData {
        name: d.name.clone(),
        source: source.clone(),
        target: target.clone(),
        bundles: bundles_from(&d.bundles, "continuation")?,
    })
}

/// Parses and validates a continuation document.
pub fn parse_continuation(
    text: &str,
    source: &FlowCategory,
    target: &FlowCategory,
) -> Result<ContinuationData, IoError> {
    let cd = continuation_from_document(&from_json(text)?, source, target)?;
    let r = continuation_boundary_validate(&cd);
    if r.is_valid() {
        Ok(cd)
    } else {
        Err(IoError::Validation(r))
    }
}

pub fn homotopy_from_document(
    d: &HomotopyDocument,
    resolve: &dyn Fn(&str) -> Result<ContinuationData, IoError>,
) -> Result<HomotopyData, IoError> {
    let hd = HomotopyData {
        name: d.name.clone(),
        f21: resolve(&d.f21)?,
        f31: resolve(&d.f31)?,
        f42: resolve(&d.f42)?,
        f43: resolve(&d.f43)?,
        h: bundles_from(&d.bundles, "homotopy")?,
    };
    hd.check_references().map_err(IoError::Reference)?;
    Ok(hd)
}

/// Parses a homotopy document and runs its structural validators. The
/// chain-homotopy identity itself is checked by the caller.
pub fn parse_homotopy(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<ContinuationData, IoError>,
) -> Result<HomotopyData, IoError> {
    let hd = homotopy_from_document(&from_json(text)?, resolve)?;
    let r = homotopy_boundary_validate(&hd);
    if r.is_valid() {
        Ok(hd)
    } else {
        Err(IoError::Validation(r))
    }
}

// ---- files ----

pub fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_flow_category(path: &Path) -> Result<FlowCategory, IoError> {
    parse_flow_category(&read(path)?)
}

/// Directory of bundled fixtures, overridable by `MBHOM_FIXTURES`.
pub fn fixtures_dir() -> PathBuf {
    std::env::var_os("MBHOM_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
}

/// Looks up `<name>.json` in `dirs`, first hit wins.
pub fn find_named(name: &str, dirs: &[PathBuf]) -> Result<PathBuf, IoError> {
    dirs.iter()
        .map(|d| d.join(format!("{name}.json")))
        .find(|p| p.is_file())
        .ok_or_else(|| IoError::Reference(format!("no document named {name}")))
}

/// Loads a homotopy document, resolving continuations and their categories
/// by name in `dirs`.
pub fn load_homotopy(path: &Path, dirs: &[PathBuf]) -> Result<HomotopyData, IoError> {
    let resolve = |name: &str| -> Result<ContinuationData, IoError> {
        let p = find_named(name, dirs)?;
        let d: ContinuationDocument = from_json(&read(&p)?)?;
        let src = load_flow_category(&find_named(&d.source, dirs)?)?;
        let tgt = load_flow_category(&find_named(&d.target, dirs)?)?;
        let cd = continuation_from_document(&d, &src, &tgt)?;
        let r = continuation_boundary_validate(&cd);
        if r.is_valid() {
            Ok(cd)
        } else {
            Err(IoError::Validation(r))
        }
    };
    parse_homotopy(&read(path)?, &resolve)
}

/// Boundary matrices plus the generator basis of each degree.
#[derive(Clone, Debug, Serialize)]
pub struct MatricesExport {
    pub name: String,
    pub k_max: i64,
    pub generators: BTreeMap<i64, Vec<String>>,
    pub matrices: BTreeMap<i64, IntMatrix>,
}

pub fn export_matrices(name: &str, c: &MorseBottComplex) -> MatricesExport {
    MatricesExport {
        name: name.to_string(),
        k_max: c.k_max,
        generators: c
            .generators
            .iter()
            .map(|(k, gs)| (*k, gs.iter().map(|g| g.to_string()).collect()))
            .collect(),
        matrices: c
            .boundary
            .degrees()
            .map(|k| (k, c.boundary.matrix_at(k)))
            .collect(),
    }
}
