use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial: {0}")]
    ZeroPolynomial(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point coincides with anchor p{anchor}")]
    AnchorCollision { anchor: usize },
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("anchors p1 and p2 coincide")]
    DegenerateAnchors,
    #[error("collinear frame (b = 0) requires collinear diagnostics mode")]
    CollinearFrame,
    #[error("curves belong to different frames")]
    MixedFrames,
    #[error("kappa = {kappa} exceeds the cap {cap}; raise the cap to override")]
    KappaCap { kappa: usize, cap: usize },
    #[error("membership does not hold for quadruple")]
    NotAMember,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
