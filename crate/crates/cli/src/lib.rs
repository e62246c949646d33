//! Batch front-end: point counts, verification suites, the predicted leading
//! constant and the asymptotic fit, each producing a [`RunReport`].

mod constant;
mod count;
mod fit;
mod grid;
mod report;
mod verify;

pub use constant::{cmd_constant, ConstantResults};
pub use count::{cmd_count, rows_to_csv, CountRow, Method};
pub use fit::{
    cmd_fit, count_grid, fit_counts, refine_grid, FitResults, FitSummary, C_TOLERANCE, RESIDUAL_BOUND,
    RESIDUAL_EXPONENT, STABILITY_TOLERANCE,
};
pub use grid::{log_grid, parse_grid};
pub use report::{Check, Format, Output, RunReport, VERSION};
pub use verify::{cmd_verify, Suite};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] dp6a2::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad parameters, 1 for failures during computation.
    pub fn exit_code(&self) -> i32 {
        use dp6a2::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(
                E::InvalidHeight(_)
                | E::HeightTooLarge { .. }
                | E::InvalidCutoff { .. }
                | E::Domain { .. },
            ) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
