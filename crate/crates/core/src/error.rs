use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series with constant term {constant} is not invertible")]
    InversionOfNonUnit { constant: Rat },
    #[error("coefficient of b^{index} requested but the series is only known to order {order}")]
    CoefficientBeyondOrder { index: usize, order: usize },
    #[error("resonant obstruction: coefficient {value} at resonant index {index} must vanish")]
    ResonantObstruction { index: usize, value: Rat },
    #[error("truncation order exhausted: {0}")]
    OrderUnderflow(String),
    #[error("divisor has non-unit leading a-coefficient")]
    NonMonicDivisor,
    #[error("not geometric: lambda_{index} + {index} = {value} <= rank {rank}")]
    NotGeometric {
        index: usize,
        value: Rat,
        rank: usize,
    },
    #[error("unit series for factor {index} has constant term {constant}, expected 1")]
    NonUnitSeries { index: usize, constant: Rat },
    #[error("presentation has no factors")]
    EmptyPresentation,
    #[error("numbers do not lie in a single class modulo the integers")]
    MixedPrimitiveClasses,
    #[error("element is not a generator: stage {stage} has vanishing leading constant")]
    NotAGenerator { stage: usize },
    #[error("index range [{i}, {j}] is invalid for rank {rank}")]
    IndexOutOfRange { i: usize, j: usize, rank: usize },
    #[error("presentation is not principal (lambda_j + j must be non decreasing)")]
    NotPrincipal,
    #[error("expected rank {expected}, got {actual}")]
    WrongRank { expected: usize, actual: usize },
    #[error("presentation is not [lambda]-primitive")]
    NotPrimitive,
    #[error("presentation is not in the class F0: {0}")]
    NotInF0(String),
    #[error("gap p_{index} is zero")]
    PValueZero { index: usize },
    #[error("alpha invariant vanishes")]
    AlphaZero,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("annihilator degree {degree} does not match module rank {rank} at this truncation")]
    NotMonogenicAtTruncation { degree: usize, rank: usize },
    #[error("degenerate truncation: {0}")]
    DegenerateTruncation(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Stable name of the variant, used in reports and exit diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InversionOfNonUnit { .. } => "InversionOfNonUnit",
            Error::CoefficientBeyondOrder { .. } => "CoefficientBeyondOrder",
            Error::ResonantObstruction { .. } => "ResonantObstruction",
            Error::OrderUnderflow(_) => "OrderUnderflow",
            Error::NonMonicDivisor => "NonMonicDivisor",
            Error::NotGeometric { .. } => "NotGeometric",
            Error::NonUnitSeries { .. } => "NonUnitSeries",
            Error::EmptyPresentation => "EmptyPresentation",
            Error::MixedPrimitiveClasses => "MixedPrimitiveClasses",
            Error::NotAGenerator { .. } => "NotAGenerator",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotPrincipal => "NotPrincipal",
            Error::WrongRank { .. } => "WrongRank",
            Error::NotPrimitive => "NotPrimitive",
            Error::NotInF0(_) => "NotInF0",
            Error::PValueZero { .. } => "PValueZero",
            Error::AlphaZero => "AlphaZero",
            Error::TruncationTooSmall(_) => "TruncationTooSmall",
            Error::NotMonogenicAtTruncation { .. } => "NotMonogenicAtTruncation",
            Error::DegenerateTruncation(_) => "DegenerateTruncation",
            Error::Syntax { .. } => "SyntaxError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
