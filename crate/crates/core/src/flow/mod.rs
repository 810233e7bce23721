//! Critical levels, moduli bundles and the flow-category validators.

mod bundle;
mod symbolic;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bundle::{
    landing, validate_piece_strata, Bundle, BundleKind, Family, Piece, Resolved, StratumLabel,
    SupportPoint,
};
pub(crate) use symbolic::{FamilyInfo, FormalSystem};
pub(crate) use validate::{flow_family, level_dims};
pub use validate::{
    moduli_boundary, validate_all, validate_degrees, validate_moduli_d_squared, validate_structure,
    validate_weak_self_indexing,
};

use crate::cubical::{CellChain, Cubulation};

/// One connected critical submanifold with its cubulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    pub dim: usize,
    pub cubulation: Cubulation,
}

/// All components of Morse-Bott index `index`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CriticalLevel {
    pub index: usize,
    pub components: Vec<Component>,
}

impl CriticalLevel {
    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn component_of_cell(&self, cell: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.cubulation.contains(cell))
    }

    pub fn cell_dim(&self, cell: &str) -> Option<usize> {
        self.component_of_cell(cell)
            .and_then(|c| c.cubulation.cell(cell))
            .map(|c| c.dim)
    }

    /// Cellular boundary over the disjoint union of components.
    pub fn boundary(&self, c: &CellChain) -> CellChain {
        c.map_linear::<_, ()>(|id| {
            Ok(self
                .component_of_cell(id)
                .map_or_else(CellChain::zero, |k| k.cubulation.boundary(id)))
        })
        .unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Validated-on-demand flow category: levels by index plus moduli bundles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FlowCategory {
    pub name: String,
    pub top_index: usize,
    pub levels: BTreeMap<usize, CriticalLevel>,
    pub moduli: Vec<Bundle>,
}

impl FlowCategory {
    pub fn level(&self, i: usize) -> Option<&CriticalLevel> {
        self.levels.get(&i).filter(|l| !l.is_empty())
    }

    pub fn bundle(&self, from: usize, to: usize) -> Option<&Bundle> {
        self.moduli.iter().find(|b| b.from == from && b.to == to)
    }

    /// Largest Morse-Bott degree `dim + index` over all cells.
    pub fn max_degree(&self) -> Option<i64> {
        self.levels
            .values()
            .flat_map(|l| {
                l.components
                    .iter()
                    .filter_map(move |c| c.cubulation.dim().map(|d| (d + l.index) as i64))
            })
            .max()
    }
}

/// Which rule a diagnostic belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Flow lines only go down in index.
    WeakSelfIndexing,
    /// Piece degree against the dimension law.
    Degree,
    /// Ids, references, fundamental chains, coefficients.
    Structure,
    /// The endpoint map is a cellular chain map.
    EndpointChainMap,
    /// Labels on fiber-boundary cells.
    Strata,
    /// Boundary of boundary, symbolic or on the assembled blocks.
    DSquared,
    ChainMap,
    ChainHomotopy,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::WeakSelfIndexing => "weak-self-indexing",
            Self::Degree => "degree",
            Self::Structure => "structure",
            Self::EndpointChainMap => "endpoint-chain-map",
            Self::Strata => "strata",
            Self::DSquared => "d-squared",
            Self::ChainMap => "chain-map",
            Self::ChainHomotopy => "chain-homotopy",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn push(&mut self, rule: Rule, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            rule,
            message: message.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.diagnostics.extend(other.diagnostics);
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.diagnostics.iter().any(|d| d.rule == rule)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.diagnostics {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("strata mismatch: {0}")]
    StrataMismatch(String),
    #[error("unknown level {0}")]
    UnknownLevel(usize),
}
