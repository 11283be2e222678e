use std::fmt;

use thiserror::Error;

/// The modular-data axiom that a validation step found violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Symmetry,
    Unitarity,
    ChargeConjugation,
    ModularRelation,
    SFourthPower,
    FusionIntegrality,
    VacuumPhase,
    Conductor,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Symmetry => "symmetry",
            Axiom::Unitarity => "unitarity",
            Axiom::ChargeConjugation => "charge-conjugation",
            Axiom::ModularRelation => "modular-relation",
            Axiom::SFourthPower => "s-fourth-power",
            Axiom::FusionIntegrality => "fusion-integrality",
            Axiom::VacuumPhase => "vacuum-phase",
            Axiom::Conductor => "conductor",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: i64, modulus: u64 },

    #[error("cyclotomic order {from} does not divide {to}")]
    OrderMismatch { from: u64, to: u64 },

    #[error("value of order {order} does not lie in the cyclotomic field of order {sub}")]
    NotInSubfield { order: u64, sub: u64 },

    #[error("invalid Kac data: p={p}, q={q} (need coprime 2 <= p < q)")]
    InvalidKacData { p: u64, q: u64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("axiom violation ({axiom}) at {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<usize> },

    #[error("fusion coefficient N[{p}][{q}][{r}] = {value} is not a non-negative integer")]
    NonIntegerFusion {
        p: usize,
        q: usize,
        r: usize,
        value: String,
    },

    #[error("Galois image of S column {column} under l={l} is not a signed column of S")]
    NotMonomial { l: i64, column: usize },

    #[error("Lambda-matrix ratio for l={l}, r={r} is not diagonal (column {column})")]
    NotDiagonal { l: i64, r: String, column: usize },

    #[error("matrix is not unimodular modulo {modulus} (det = {det})")]
    NotUnimodular { modulus: u64, det: i64 },

    #[error("enumeration needs {required} group elements, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
