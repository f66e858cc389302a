//! The free complete graded Lie algebra over ℚ in bracket-length truncation.
//!
//! Elements are represented inside the truncated tensor algebra: a Lie
//! element is a rational combination of words over the generator alphabet,
//! with no word longer than the truncation `N`. Brackets, BCH products and
//! exponentials are computed associatively on words; membership in the Lie
//! algebra is characterized by the graded Dynkin operator.

mod basis;
mod derivation;
mod element;
mod morphism;

pub use basis::{lyndon_words, BasisMonomial, DegreeBasis, SliceBasis};
pub use derivation::{ad_derivation, LieDerivation};
pub use element::{bch, bch_list, bernoulli, LieElement};
pub use morphism::LieMorphism;

pub use crate::linalg::Rational;
use crate::{Error, Result};
use smallvec::SmallVec;
use std::sync::Arc;

/// Identifier of a generator inside its alphabet.
pub type GenId = u16;

/// A word over the generator alphabet. Words compare lexicographically,
/// which is the enumeration order used everywhere.
pub type Word = SmallVec<[GenId; 8]>;

/// A named generator with an integer homological degree.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }
}

/// Bracket-length truncation: all computation happens in the quotient by
/// words of length greater than `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Truncation(pub usize);

impl Truncation {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Other("truncation must be at least 1".into()));
        }
        Ok(Truncation(n))
    }
}

/// An ordered generator set. Generators are sorted lexicographically by
/// name; ids index into that order, so all enumerations are deterministic.
#[derive(Debug, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
}

impl Alphabet {
    pub fn new(mut gens: Vec<Generator>) -> Result<Arc<Alphabet>> {
        gens.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in gens.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(Error::DuplicateGenerator(pair[0].name.clone()));
            }
        }
        if gens.len() > GenId::MAX as usize {
            return Err(Error::Other("too many generators".into()));
        }
        Ok(Arc::new(Alphabet { gens }))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn degree(&self, id: GenId) -> i64 {
        self.gens[id as usize].degree
    }

    /// Parity bit of a generator's degree, driving all Koszul signs.
    pub fn parity(&self, id: GenId) -> bool {
        self.gens[id as usize].degree.rem_euclid(2) == 1
    }

    pub fn index_of(&self, name: &str) -> Option<GenId> {
        self.gens
            .binary_search_by(|g| g.name.as_str().cmp(name))
            .ok()
            .map(|i| i as GenId)
    }

    pub fn require(&self, name: &str) -> Result<GenId> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Degree of a word: the sum of its generator degrees.
    pub fn word_degree(&self, word: &[GenId]) -> i64 {
        word.iter().map(|&g| self.degree(g)).sum()
    }

    /// Parity of a word's degree.
    pub fn word_parity(&self, word: &[GenId]) -> bool {
        word.iter().filter(|&&g| self.parity(g)).count() % 2 == 1
    }

    /// Checks that two alphabets agree (pointer fast path, then content).
    pub fn same(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}
