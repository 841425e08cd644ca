use crate::cyclo::CycError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid level parameter u = {0} (need u >= 3{1})")]
    BadLevel(i64, &'static str),
    #[error("{0} is not a dominant integral label at level {1}")]
    NotInAlcove(String, i64),
    #[error("{0} is not an admissible weight for u = {1}")]
    NotAdmissible(String, i64),
    #[error("semirelaxed constraint violated: <gamma, w3> = {got} but -j - u/6 = {want} (mod 1)")]
    Atypicality { got: String, want: String },
    #[error("pole: denominator factor vanishes ({0})")]
    Pole(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error("series error: {0}")]
    Series(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
