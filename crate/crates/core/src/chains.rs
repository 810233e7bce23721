//! Graded generators, formal integer chains and boundary specifications.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Provenance tag used by degeneracy rules downstream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    CubeFace,
    Cell,
    ModuliComponent,
    FiberedProductComponent,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorId {
    pub name: String,
    pub degree: i64,
    pub kind: GeneratorKind,
}

impl GeneratorId {
    pub fn new(name: impl Into<String>, degree: i64, kind: GeneratorKind) -> Self {
        Self {
            name: name.into(),
            degree,
            kind,
        }
    }

    pub fn cell(name: impl Into<String>, degree: i64) -> Self {
        Self::new(name, degree, GeneratorKind::Cell)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Finite integer combination of keys with no zero coefficients stored.
///
/// The degree is not stored; the empty chain is the zero chain of whatever
/// degree the context asks for.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound(serialize = "K: Serialize", deserialize = "K: Deserialize<'de> + Ord"))]
pub struct Chain<K: Ord> {
    terms: BTreeMap<K, i64>,
}

pub type FormalChain = Chain<GeneratorId>;

impl<K: Ord> Default for Chain<K> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (K, i64)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, k: K, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: i64) {
        if c == 0 {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Linear extension of `f` on generators.
    pub fn map_linear<L: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<Chain<L>, E>,
    ) -> Result<Chain<L>, E> {
        let mut out = Chain::zero();
        for (k, c) in self.iter() {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }

    /// Relabels keys; terms that collide are summed.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Chain<L> {
        Chain::from_terms(self.iter().map(|(k, c)| (f(k), c)))
    }
}

impl<K: Ord + Clone> Add for &Chain<K> {
    type Output = Chain<K>;
    fn add(self, rhs: &Chain<K>) -> Chain<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl<K: Ord + Clone> Sub for &Chain<K> {
    type Output = Chain<K>;
    fn sub(self, rhs: &Chain<K>) -> Chain<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl<K: Ord + Clone> Neg for &Chain<K> {
    type Output = Chain<K>;
    fn neg(self) -> Chain<K> {
        self.scaled(-1)
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Chain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, &c)) in self.terms.iter().enumerate() {
            let (sgn, a) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sgn} ")?;
            }
            if a != 1 {
                write!(f, "{a}")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Chain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

/// Face lists for every registered generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub faces: BTreeMap<GeneratorId, Vec<(i64, GeneratorId)>>,
}

impl BoundarySpec {
    pub fn insert(&mut self, g: GeneratorId, faces: Vec<(i64, GeneratorId)>) {
        self.faces.insert(g, faces);
    }

    pub fn boundary_of(&self, g: &GeneratorId) -> Result<FormalChain, ChainError> {
        let faces = self
            .faces
            .get(g)
            .ok_or_else(|| ChainError::UnknownGenerator(g.name.clone()))?;
        if g.degree == 0 {
            return Ok(FormalChain::zero());
        }
        Ok(FormalChain::from_terms(
            faces.iter().map(|(s, f)| (f.clone(), *s)),
        ))
    }
}

/// Linear extension of the face lists; degree-0 generators go to zero.
pub fn chain_boundary(c: &FormalChain, b: &BoundarySpec) -> Result<FormalChain, ChainError> {
    c.map_linear(|g| b.boundary_of(g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    WrongFaceDegree { generator: String, face: String },
    BadCoefficient { generator: String, coeff: i64 },
    UnknownFace { generator: String, face: String },
    BoundarySquaredNonzero { generator: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongFaceDegree { generator, face } => {
                write!(f, "{generator}: face {face} has the wrong degree")
            }
            Self::BadCoefficient { generator, coeff } => {
                write!(f, "{generator}: coefficient {coeff} is not +1 or -1")
            }
            Self::UnknownFace { generator, face } => {
                write!(f, "{generator}: face {face} is not registered")
            }
            Self::BoundarySquaredNonzero { generator } => {
                write!(f, "{generator}: boundary of boundary is nonzero")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Collects every coefficient, degree and `∂∂` violation in `b`.
pub fn validate_boundary_spec(b: &BoundarySpec) -> ValidationReport {
    let mut violations = Vec::new();
    for (g, faces) in &b.faces {
        for (s, face) in faces {
            if *s != 1 && *s != -1 {
                violations.push(Violation::BadCoefficient {
                    generator: g.name.clone(),
                    coeff: *s,
                });
            }
            if face.degree != g.degree - 1 {
                violations.push(Violation::WrongFaceDegree {
                    generator: g.name.clone(),
                    face: face.name.clone(),
                });
            }
            if !b.faces.contains_key(face) {
                violations.push(Violation::UnknownFace {
                    generator: g.name.clone(),
                    face: face.name.clone(),
                });
            }
        }
        if let Ok(d) = b.boundary_of(g) {
            if let Ok(dd) = chain_boundary(&d, b) {
                if !dd.is_zero() {
                    violations.push(Violation::BoundarySquaredNonzero {
                        generator: g.name.clone(),
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}
