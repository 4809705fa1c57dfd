use core::fmt;

/// Which brute-force budget an operation ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    FieldSize,
    BruteForce,
    N4,
    FullUniformity,
    CBound,
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BudgetKind::FieldSize => "field size",
            BudgetKind::BruteForce => "brute-force enumeration",
            BudgetKind::N4 => "N4 brute force",
            BudgetKind::FullUniformity => "full uniformity",
            BudgetKind::CBound => "c-bound sweep",
        };
        f.write_str(s)
    }
}

/// Residue class of q modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Residue {
    OneMod4,
    ThreeMod4,
}

impl Residue {
    pub fn of(q: u64) -> Residue {
        if q % 4 == 1 {
            Residue::OneMod4
        } else {
            Residue::ThreeMod4
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::OneMod4 => f.write_str("q = 1 mod 4"),
            Residue::ThreeMod4 => f.write_str("q = 3 mod 4"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    EvenCharacteristic(u64),
    /// p = 3 falls outside every closed form this crate evaluates.
    CharacteristicThree,
    CharacteristicTooSmall(u64),
    ZeroDegree,
    DegreeTooLarge(u32),
    ModulusWrongDegree {
        expected: u32,
        found: usize,
    },
    ModulusNotMonic,
    ModulusReducible,
    CoefficientOutOfRange {
        value: u64,
        p: u64,
    },
    Overflow(&'static str),
    BudgetExceeded {
        kind: BudgetKind,
        q: u64,
        limit: u64,
    },
    DivisionByZero,
    MixedFields,
    NotASquare,
    ZeroLeadingCoefficient,
    WrongResidue {
        expected: Residue,
        q: u64,
    },
    InvalidExponent {
        d: u64,
        q: u64,
    },
    InvalidMultiplier,
    /// A closed-form numerator that should be divisible was not.
    InexactDivision {
        what: &'static str,
        numerator: i128,
        divisor: i128,
    },
    InvariantViolated(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "p must be an odd prime (got {p}, not prime)"),
            Error::EvenCharacteristic(p) => write!(f, "p must be an odd prime (got {p})"),
            Error::CharacteristicThree => {
                f.write_str("p = 3 is excluded: the closed forms require p != 3")
            }
            Error::CharacteristicTooSmall(p) => write!(f, "p must be at least 5 (got {p})"),
            Error::ZeroDegree => f.write_str("degree n must be positive"),
            Error::DegreeTooLarge(n) => write!(f, "degree {n} is too large"),
            Error::ModulusWrongDegree { expected, found } => {
                write!(f, "modulus has degree {found}, expected {expected}")
            }
            Error::ModulusNotMonic => f.write_str("modulus must be monic"),
            Error::ModulusReducible => f.write_str("modulus is reducible"),
            Error::CoefficientOutOfRange { value, p } => {
                write!(f, "coefficient {value} is not reduced mod {p}")
            }
            Error::Overflow(what) => write!(f, "integer overflow in {what}"),
            Error::BudgetExceeded { kind, q, limit } => {
                write!(f, "{kind} budget exceeded: q = {q} > {limit}")
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::MixedFields => f.write_str("operands belong to different fields"),
            Error::NotASquare => f.write_str("element is not a square"),
            Error::ZeroLeadingCoefficient => f.write_str("leading coefficient must be nonzero"),
            Error::WrongResidue { expected, q } => {
                write!(f, "q = {q} is in the wrong residue class (need {expected})")
            }
            Error::InvalidExponent { d, q } => {
                write!(f, "exponent d = {d} must satisfy 1 <= d < {q}")
            }
            Error::InvalidMultiplier => {
                f.write_str("c = 1 requires classical mode (a != 0 enforced)")
            }
            Error::InexactDivision {
                what,
                numerator,
                divisor,
            } => {
                write!(f, "{what}: {numerator} is not divisible by {divisor}")
            }
            Error::InvariantViolated(what) => write!(f, "invariant violated: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
