use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] stbc_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot read config {}: {source}", path.display())]
    Config { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Mismatch(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl LabError {
    /// 0 for help/version, 2 for usage errors, 3 for failed cross-checks,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use stbc_core::Error as E;
        match self {
            LabError::Clap(e) => e.exit_code(),
            LabError::Usage(_) | LabError::Config { .. } => 2,
            LabError::Core(
                E::UnknownCode(_) | E::InvalidStop | E::InvalidRate(_) | E::InvalidArgument(_) | E::NoOverlay(_),
            ) => 2,
            LabError::Mismatch(_) => 3,
            _ => 1,
        }
    }
}
