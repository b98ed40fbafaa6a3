//! Bounded elementary generation: big cell, Bruhat, local rings, finite
//! products of local rings, and the `(U+ U-)^4` normal form.

mod bigcell;
mod bruhat;
mod smith;
mod tavgen;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{ElementaryWord, GroupElement, GroupError, LetterJson};
use crate::roots::{Family, RootSystem};

pub use bigcell::{big_cell_factor, torus_as_elementaries, unipotent_coordinates, BigCellFactorization, Sign};
pub use bruhat::{bruhat_decompose, decompose, local_decompose, product_merge_decompose, product_merge_words, project_to_factor};
pub use tavgen::{tavgen_decompose, tavgen_report, TavgenBlocks};

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("ring {0} is not local")]
    NotLocal(String),
    #[error("ring {0} is not a field")]
    NotField(String),
    #[error("element is not in the big cell")]
    NotInBigCell,
    #[error("element is not in the claimed unipotent subgroup")]
    NotUnipotent,
    #[error("torus part cannot be written with simple coroots")]
    TorusUnsolvable,
    #[error("decomposition does not cover type {0}")]
    Unsupported(String),
    #[error("no Weyl element puts the element in the big cell")]
    NoBruhatCell,
    #[error("word of length {length} exceeds the bound {bound}")]
    BoundExceeded { length: usize, bound: usize },
    #[error("word does not evaluate to the input")]
    VerificationFailed,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Word-length constants for a root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Big cell: `2|Φ+| + 4ℓ`.
    pub n1: usize,
    /// Bruhat over a field: `N1 + 3|Φ+|`.
    pub n2: usize,
    /// Local rings: `N1 + N2`.
    pub n: usize,
    /// Finite products of local rings: `N |Φ|`.
    pub product: usize,
    /// `(U+ U-)^4` with every block full: `4 |Φ|`.
    pub tavgen: usize,
}

impl Bounds {
    pub fn of(rs: &RootSystem) -> Bounds {
        let p = rs.num_positive();
        let n1 = 2 * p + 4 * rs.rank();
        let n2 = n1 + 3 * p;
        let n = n1 + n2;
        Bounds { n1, n2, n, product: n * rs.len(), tavgen: 4 * rs.len() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Prop2,
    Tavgen,
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prop2" => Ok(Algorithm::Prop2),
            "tavgen" => Ok(Algorithm::Tavgen),
            _ => Err(format!("unknown algorithm {s:?}; expected prop2 or tavgen")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub input: GroupElement,
    pub word: ElementaryWord,
    pub bound: usize,
    pub bound_name: &'static str,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReportJson {
    pub input: Vec<Vec<String>>,
    pub word: Vec<LetterJson>,
    pub length: usize,
    pub bound: usize,
    pub bound_name: &'static str,
    pub verified: bool,
}

impl DecompositionReport {
    /// Checks the word against the input and the bound.
    pub(crate) fn new(
        input: &GroupElement,
        word: ElementaryWord,
        bound: usize,
        bound_name: &'static str,
    ) -> Result<DecompositionReport, DecompositionError> {
        let word = word.trimmed();
        if GroupElement::evaluate(input.rep(), input.ring(), &word) != *input {
            return Err(DecompositionError::VerificationFailed);
        }
        if word.len() > bound {
            return Err(DecompositionError::BoundExceeded { length: word.len(), bound });
        }
        Ok(DecompositionReport { input: input.clone(), word, bound, bound_name, verified: true })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn to_json(&self) -> DecompositionReportJson {
        let rs = self.input.rep().root_system();
        DecompositionReportJson {
            input: self.input.rows_formatted(),
            word: self.word.to_json(rs, self.input.ring()),
            length: self.word.len(),
            bound: self.bound,
            bound_name: self.bound_name,
            verified: self.verified,
        }
    }
}

/// Types handled by the decomposition algorithms: rank at most 4, no E.
pub fn check_supported(rs: &RootSystem) -> Result<(), DecompositionError> {
    if rs.rank() > 4 || rs.cartan().family == Family::E {
        return Err(DecompositionError::Unsupported(rs.label()));
    }
    Ok(())
}
