use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode error: {0}")]
    Mode(String),
    #[error("state has (near-)zero norm")]
    ZeroState,
    #[error("photon number mismatch: {left} vs {right}")]
    PhotonNumberMismatch { left: u32, right: u32 },
    #[error("element `{name}` is not unitary (max deviation {deviation:e})")]
    NonUnitary { name: String, deviation: f64 },
    #[error("post-selection kept nothing (probability {probability:e})")]
    EmptyPostselection { probability: f64 },
    #[error("correlation tensor is identically zero")]
    DegenerateTensor,
    #[error("expected a {expected}-party register, got {found} parties")]
    PartyCount { expected: usize, found: usize },
    #[error("invalid phase settings: {0}")]
    Settings(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
