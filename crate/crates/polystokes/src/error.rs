use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed mesh file: {0}")]
    MeshFormat(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate basis on cell {cell}: {what}")]
    GramBreakdown { cell: usize, what: String },
    #[error("singular {what} on cell {cell}")]
    SingularLocal { cell: usize, what: String },
    #[error("singular saddle-point system: {0}")]
    SingularSystem(String),
    #[error("manufactured solution `{name}` is not compatible with the {bc} boundary condition")]
    IncompatibleBc { name: String, bc: String },
    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
