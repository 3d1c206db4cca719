use thiserror::Error;

use crate::poly::Variable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("assignment does not cover variable {0}")]
    MissingVariable(Variable),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("not a highest-weight vector of weight {weight}")]
    NotHighestWeight { weight: i64 },
    #[error("orbit does not close at dimension {dim}")]
    OrbitDoesNotClose { dim: usize },
    #[error("tensor index p={p} out of range for dimensions {n} and {m}")]
    IndexOutOfRange { p: usize, n: usize, m: usize },
    #[error("empty weight space: degree {degree}, weight {weight}")]
    EmptyWeightSpace { degree: u32, weight: i64 },
    #[error("module {label}: law `{law}` fails at basis index {index}")]
    ModuleLaw {
        label: String,
        law: &'static str,
        index: usize,
    },
    #[error("element of {label} is annihilated by neither e nor f")]
    NotExtremal { label: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoleError {
    #[error("element is zero; it has no valuation")]
    ZeroElement,
    #[error("no non-zero coefficient within the first {window} terms; increase N or element is 0")]
    WindowExhausted { window: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("illegal projection: {0}")]
    IllegalDimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error("structural error: {0}")]
    Structural(String),
}

/// Top-level error for the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Pole(#[from] PoleError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Input(String),
}
