use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrError {
    #[error("singular jet: {0}")]
    SingularJet(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("syntax error at position {position}: expected {}", expected.join(", "))]
    Syntax { position: usize, expected: Vec<String> },
    #[error("evaluation failed at {path}: {message}")]
    Eval { path: String, message: String },
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("not pseudoconvex: {0}")]
    NotPseudoconvex(String),
    #[error("not star-shaped along direction {0}")]
    NotStarShaped(String),
    #[error("degenerate Levi form: {0}")]
    Degenerate(String),
    #[error("structure equation residual {residual:e} exceeds {tolerance:e}")]
    StructureResidual { residual: f64, tolerance: f64 },
    #[error("unsupported domain: {0}")]
    Unsupported(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("tolerance breach: {0}")]
    Tolerance(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, CrError>;

impl CrError {
    /// Exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            CrError::Syntax { .. } | CrError::Config { .. } | CrError::UnknownDomain(_) => 3,
            CrError::Eval { .. } => 3,
            _ => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CrError::SingularJet(_) => "singular_jet",
            CrError::Domain(_) => "domain",
            CrError::Truncation(_) => "truncation",
            CrError::Syntax { .. } => "syntax",
            CrError::Eval { .. } => "eval",
            CrError::Config { .. } => "config",
            CrError::UnknownDomain(_) => "unknown_domain",
            CrError::NotPseudoconvex(_) => "not_pseudoconvex",
            CrError::NotStarShaped(_) => "not_star_shaped",
            CrError::Degenerate(_) => "degenerate",
            CrError::StructureResidual { .. } => "structure_residual",
            CrError::Unsupported(_) => "unsupported",
            CrError::Fit(_) => "fit",
            CrError::Tolerance(_) => "tolerance",
            CrError::Contract(_) => "contract",
        }
    }
}
