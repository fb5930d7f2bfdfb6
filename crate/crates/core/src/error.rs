use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in two families: malformed input (bad moduli, bad
/// parameters, mismatched towers) and mathematical obstructions (a given
/// Ore polynomial is not a morphism, a linear system has no unique
/// solution, ...). [`Error::is_input_error`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("modulus is reducible over its base field")]
    ReducibleModulus,
    #[error("modulus has the wrong degree or is not monic: {0}")]
    WrongDegree(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("elements live in different field towers")]
    TowerMismatch,
    #[error("elements live at different levels of the tower")]
    LevelMismatch,
    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("division by the zero rational function")]
    DivisionByZeroRational,
    #[error("division by the zero Ore polynomial")]
    DivisionByZeroOre,
    #[error("the zero polynomial has no valuation")]
    ZeroPolynomial,

    #[error("a Drinfeld module needs at least one tau term")]
    RankZero,
    #[error("leading coefficient of phi_T must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("rank {0} is too small for this operation")]
    RankTooSmall(usize),
    #[error("invalid j-invariant parameter: {0}")]
    InvalidParameter(String),
    #[error("the parameterless j-invariant is only defined in rank 2 (rank is {0})")]
    RankNotTwo(usize),
    #[error("Drinfeld modules are not in the same category")]
    CategoryMismatch,
    #[error("the analytic module must have constant coefficient T")]
    NotAnalytic,

    #[error("Ore polynomial does not define a morphism")]
    NotAMorphism,
    #[error("the zero Ore polynomial does not determine a codomain")]
    ZeroOrePolynomial,
    #[error("domain of the left morphism differs from the codomain of the right one")]
    ComposabilityMismatch,
    #[error("morphisms do not belong to the same Hom space")]
    HomSetMismatch,
    #[error("morphism is not an isomorphism")]
    NotAnIsomorphism,
    #[error("no isogeny of degree <= {0} found although the Hom space is nonzero")]
    SearchCapExceeded(usize),

    #[error("domain and codomain ranks differ")]
    RankMismatch,
    #[error("the zero morphism has no norm")]
    ZeroMorphism,
    #[error("coefficient does not descend to F_q[T]")]
    DescentFailure,
    #[error("the element form of the norm needs an endomorphism")]
    ElementFormRequiresEndomorphism,
    #[error("morphism is not an endomorphism")]
    NotAnEndomorphism,
    #[error("the annihilating linear system has no unique solution")]
    AmbiguousSolution,
}

impl Error {
    /// True for errors caused by malformed input rather than by the
    /// mathematics of well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::ReducibleModulus
                | Error::WrongDegree(_)
                | Error::InvalidElement(_)
                | Error::TowerMismatch
                | Error::LevelMismatch
                | Error::Overflow(_)
                | Error::RankZero
                | Error::ZeroLeadingCoefficient
                | Error::RankTooSmall(_)
                | Error::InvalidParameter(_)
                | Error::NotAnalytic
        )
    }

    /// Stable identifier used by the JSON interface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ReducibleModulus => "ReducibleModulus",
            Error::WrongDegree(_) => "WrongDegree",
            Error::InvalidElement(_) => "InvalidElement",
            Error::TowerMismatch => "TowerMismatch",
            Error::LevelMismatch => "LevelMismatch",
            Error::Overflow(_) => "Overflow",
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::DivisionByZeroRational => "DivisionByZeroRational",
            Error::DivisionByZeroOre => "DivisionByZeroOre",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::RankZero => "RankZero",
            Error::ZeroLeadingCoefficient => "ZeroLeadingCoefficient",
            Error::RankTooSmall(_) => "RankTooSmall",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::RankNotTwo(_) => "RankNotTwo",
            Error::CategoryMismatch => "CategoryMismatch",
            Error::NotAnalytic => "NotAnalytic",
            Error::NotAMorphism => "NotAMorphism",
            Error::ZeroOrePolynomial => "ZeroOrePolynomial",
            Error::ComposabilityMismatch => "ComposabilityMismatch",
            Error::HomSetMismatch => "HomSetMismatch",
            Error::NotAnIsomorphism => "NotAnIsomorphism",
            Error::SearchCapExceeded(_) => "SearchCapExceeded",
            Error::RankMismatch => "RankMismatch",
            Error::ZeroMorphism => "ZeroMorphism",
            Error::DescentFailure => "DescentFailure",
            Error::ElementFormRequiresEndomorphism => "ElementFormRequiresEndomorphism",
            Error::NotAnEndomorphism => "NotAnEndomorphism",
            Error::AmbiguousSolution => "AmbiguousSolution",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
