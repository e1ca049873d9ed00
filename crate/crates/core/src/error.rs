use thiserror::Error;

/// Errors produced by state construction, evolution, and measurement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported photon number {0} (this simulator handles 0, 1 or 2 photons)")]
    UnsupportedPhotonNumber(u32),

    #[error("state vector is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max |UU† - I| entry = {0:.3e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("photon-number mismatch ({0} vs {1})")]
    PhotonNumberMismatch(u8, u8),

    #[error("inputs must occupy distinct ports")]
    PortCollision,

    #[error("state is not confined to a single port")]
    MixedPorts,

    #[error("expected exactly one photon in each input port")]
    NotOnePhotonPerPort,

    #[error("detection-event supports overlap: {0}")]
    SupportCollision(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
