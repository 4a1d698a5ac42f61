use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    CompositeP(u32),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("F_{{{p}^{m}}} exceeds the supported field size")]
    FieldTooLarge { p: u32, m: usize },
    #[error("modulus {0:?} is not a monic polynomial of the requested degree with coefficients in [0, p)")]
    InvalidModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("coefficient vector {0:?} is not a field element")]
    InvalidCoefficients(Vec<u32>),
    #[error("element encoding {enc} is outside a field of order {order}")]
    ForeignElement { enc: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("the quadratic character is undefined at 0")]
    ZeroArgument,
    #[error("ring element does not belong to this ring")]
    ParamsMismatch,
    #[error("element is not in the defining set L")]
    NotInL,
    #[error("work estimate {required} exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("character-sum weight drifted {residual:e} from the nearest integer")]
    NumericalDrift { residual: f64 },
    #[error("class {class} is not weight-constant: saw weights {first} and {second}")]
    ClassNotConstant {
        class: &'static str,
        first: u64,
        second: u64,
    },
    #[error("optimality check needs m odd and p = 3 mod 4, got p = {p}, m = {m}")]
    WrongRegime { p: u32, m: usize },
    #[error("Gray image has a zero coordinate; dual distance 1 is not expected for this family")]
    Class1Anomaly,
    #[error("generator matrix rows have inconsistent lengths")]
    RaggedMatrix,
    #[error("{0}")]
    Io(#[from] std::io::Error),
}
