//! Exact integer linear algebra: matrices over `BigInt`, Smith normal form,
//! homology of free chain complexes and induced maps.

mod homology;
mod matrix;
mod snf;

use thiserror::Error;

pub use homology::{
    big_vec, check_chain_map, homology_bases, homology_of_complex, induced_map_on_homology,
    small_vec, solve_integer, torsion_u64, ChainMapMatrices, GradedBoundaryMatrices, HomologyBasis,
    HomologyGroup, HomologyGroups, InducedMap,
};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("boundary composition nonzero at degree {0}")]
    CompositionNotZero(i64),
    #[error("not a chain map at degree {0}")]
    NotAChainMap(i64),
    #[error("shape mismatch at degree {degree}: expected {expected} rows, found {found}")]
    ShapeMismatch {
        degree: i64,
        expected: usize,
        found: usize,
    },
}

/// Serde helper: a list of big integers written as decimal strings when they
/// do not fit in an `i64`.
pub(crate) mod bigint_list {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Small(i64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<Entry> = v
            .iter()
            .map(|x| {
                x.to_i64()
                    .map_or_else(|| Entry::Big(x.to_string()), Entry::Small)
            })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Entry::Small(x) => Ok(BigInt::from(x)),
                Entry::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}
