use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, CoreError>;

#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    DimensionMismatch { expected: usize, found: usize },
    DimensionOutOfRange { n: usize, min: usize, max: usize },
    NotSymmetricPositiveDefinite,
    NotSkew,
    NotDegreeTwo,
    WrongDegree { expected: usize, found: Option<usize> },
    ParityMismatch,
    Singular,
    NotInPin,
    FrameMismatch,
    SeriesDiverged,
    DegenerateSubspace,
    NotPure { annihilator_dim: usize },
    ZeroSpinor,
    NegativeNorm(f64),
    InvalidDualityContext,
    RankInconclusive { expected: usize, found: usize },
    ChiralityMismatch,
    WrongDimensionForKind { kind: &'static str, n: usize },
    NotUnit(f64),
    NotReal,
    NotBasic,
    NotInvariant,
    NonCoordinateField,
    Parse(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CoreError::*;
        match self {
            DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            DimensionOutOfRange { n, min, max } => {
                write!(f, "dimension {n} outside supported range {min}..={max}")
            }
            NotSymmetricPositiveDefinite => write!(f, "matrix is not symmetric positive definite"),
            NotSkew => write!(f, "matrix is not skew-symmetric"),
            NotDegreeTwo => write!(f, "form is not homogeneous of degree 2"),
            WrongDegree { expected, found } => match found {
                Some(d) => write!(f, "expected a form of degree {expected}, found degree {d}"),
                None => write!(f, "expected a form of degree {expected}, found mixed degree"),
            },
            ParityMismatch => write!(f, "form parity does not match the pair dimension"),
            Singular => write!(f, "matrix is singular"),
            NotInPin => write!(f, "element is not in the Pin group (degree leak)"),
            FrameMismatch => write!(f, "Clifford elements live in different frames"),
            SeriesDiverged => write!(f, "power series did not converge within the iteration cap"),
            DegenerateSubspace => write!(f, "subspace basis is degenerate"),
            NotPure { annihilator_dim } => {
                write!(f, "spinor is not pure (annihilator dimension {annihilator_dim})")
            }
            ZeroSpinor => write!(f, "spinor is zero"),
            NegativeNorm(v) => write!(f, "negative Q-norm square {v}"),
            InvalidDualityContext => write!(f, "duality data must satisfy θ(X) = 1"),
            RankInconclusive { expected, found } => {
                write!(f, "rank test inconclusive: expected {expected}, found {found}")
            }
            ChiralityMismatch => write!(f, "spinor chirality does not match"),
            WrongDimensionForKind { kind, n } => write!(f, "{kind} structures need another dimension than {n}"),
            NotUnit(v) => write!(f, "spinor has norm {v}, expected 1"),
            NotReal => write!(f, "spinor is not fixed by charge conjugation"),
            NotBasic => write!(f, "form is not basic (contraction with the duality direction is nonzero)"),
            NotInvariant => write!(f, "form depends on the duality coordinate"),
            NonCoordinateField => write!(f, "only coordinate vector fields are supported"),
            Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
