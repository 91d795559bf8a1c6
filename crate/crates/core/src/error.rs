use thiserror::Error;

/// Which defining condition of a root basis failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    A,
    B,
    C,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Condition::A => 'a',
            Condition::B => 'b',
            Condition::C => 'c',
        };
        write!(f, "condition ({c})")
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("not a bijection on the vertex set: {0}")]
    NotABijection(String),

    #[error("permutation does not preserve the Coxeter matrix at pair ({s}, {t})")]
    LabelNotPreserved { s: String, t: String },

    #[error("group closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("automorphism search refused: {vertices} vertices exceeds the cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },

    #[error("root basis violates {condition}: {detail}")]
    RootBasis { condition: Condition, detail: String },

    #[error("root basis is not invariant under symmetry #{symmetry}: pair ({s}, {t})")]
    Equivariance { symmetry: usize, s: String, t: String },

    #[error("symmetry action on V is undefined: {0}")]
    UndefinedAction(String),

    #[error("orbit {0:?} generates an infinite parabolic subgroup")]
    InfiniteOrbit(Vec<String>),

    #[error("{0:?} is not an orbit of the symmetry group")]
    NotAnOrbit(Vec<String>),

    #[error("orbit {0:?} has a vertex with two or more neighbours inside the orbit")]
    InconsistentOrbit(Vec<String>),

    #[error("classification failure for bi-orbit ({x}, {y}): inner product {inner} matches no -cos(pi/k), k <= {k_max}")]
    Classification { x: String, y: String, inner: f64, k_max: u32 },

    #[error("numeric and combinatorial folded labels disagree on ({x}, {y}): {numeric} vs {combinatorial}")]
    ClassifierDisagreement { x: String, y: String, numeric: String, combinatorial: String },

    #[error("inner product via case formula {formula} differs from direct value {direct} on ({x}, {y})")]
    CaseFormulaMismatch { x: String, y: String, direct: f64, formula: f64 },

    #[error("folded root basis is invalid: {0}")]
    FoldedBasis(Box<Error>),

    #[error("restriction of w_{orbit} to the fixed subspace deviates from the folded reflection by {deviation}")]
    RestrictionMismatch { orbit: String, deviation: f64 },

    #[error("unknown letter `{0}` in word")]
    UnknownLetter(String),

    #[error("tolerance collapse: distinct matrices within {distance} share a fingerprint")]
    ToleranceCollapse { distance: f64 },

    #[error("enumeration was truncated; operation needs the full group")]
    Truncated,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::UnknownVertex(_)
            | Error::NotABijection(_)
            | Error::LabelNotPreserved { .. }
            | Error::GroupTooLarge { .. }
            | Error::TooManyVertices { .. }
            | Error::UnknownLetter(_) => 2,
            Error::Equivariance { .. } | Error::UndefinedAction(_) => 3,
            Error::InfiniteOrbit(_)
            | Error::NotAnOrbit(_)
            | Error::InconsistentOrbit(_)
            | Error::Classification { .. }
            | Error::ClassifierDisagreement { .. }
            | Error::CaseFormulaMismatch { .. } => 4,
            Error::RootBasis { .. } => 6,
            _ => 5,
        }
    }
}
