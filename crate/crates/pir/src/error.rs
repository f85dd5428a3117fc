use std::path::PathBuf;

/// Errors from file handling and reporting, wrapping numerical errors from
/// `pir-core`.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}: file is empty")]
    EmptyFile(String),
    #[error("{source_name}: missing column `{column}`")]
    MissingColumn { source_name: String, column: String },
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("{source_name}: row {row}, column `{column}`: cannot parse {value:?} as a number")]
    Parse { source_name: String, row: usize, column: String, value: String },
    #[error("{source_name}: malformed CSV: {message}")]
    Csv { source_name: String, message: String },
    #[error("fixture {}: {message}", path.display())]
    Fixture { path: PathBuf, message: String },
    #[error("fixture {}: checksum mismatch (pinned {expected}, found {found})", path.display())]
    Checksum { path: PathBuf, expected: String, found: String },
    /// A numerical error raised while turning parsed values into a dataset.
    #[error("{source_name}: {source}")]
    Data { source_name: String, source: pir_core::Error },
    #[error(transparent)]
    Compute(#[from] pir_core::Error),
}

impl Error {
    /// Process exit code for this error: 3 for input problems, 4 for
    /// computation failures, 5 when output cannot be written.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Compute(_) => 4,
            Error::Write { .. } => 5,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
