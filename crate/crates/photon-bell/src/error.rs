use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("truncation n_max = {n_max} leaves coherent tail mass {tail:.3e} for |alpha| = {alpha_abs} (limit {limit:e})")]
    Truncation {
        n_max: usize,
        alpha_abs: f64,
        tail: f64,
        limit: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("density operator has eigenvalue {value:.3e} below -{tolerance:e}")]
    Negativity { value: f64, tolerance: f64 },

    #[error("degenerate prior p = {0}")]
    DegeneratePrior(f64),

    #[error("post-selection has zero success probability")]
    ZeroSuccess,

    #[error("root bracketing failed in interval {0}")]
    Bracketing(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Truncation { .. } | Error::InvalidParameter(_) => 2,
            Error::NotHermitian { .. }
            | Error::Negativity { .. }
            | Error::DegeneratePrior(_)
            | Error::ZeroSuccess
            | Error::Bracketing(_) => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::config("grid.start", "negative").exit_code(), 2);
        assert_eq!(Error::InvalidParameter("x".into()).exit_code(), 2);
        let neg = Error::Negativity {
            value: -1e-6,
            tolerance: 1e-10,
        };
        assert_eq!(neg.exit_code(), 3);
        let herm = Error::NotHermitian {
            deviation: 1e-3,
            tolerance: 1e-12,
        };
        assert_eq!(herm.exit_code(), 3);
        assert_eq!(Error::Bracketing(4).exit_code(), 3);
        assert!(Error::config("grid.start", "negative")
            .to_string()
            .contains("grid.start"));
    }
}
