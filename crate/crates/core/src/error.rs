use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum CstError {
    #[error("invalid sigma {0}: must be finite and > 0")]
    InvalidSigma(f64),
    #[error("invalid order set: {0}")]
    InvalidOrder(String),
    #[error("invalid gamma {0}: must be finite and >= 0")]
    InvalidGamma(f64),
    #[error("invalid truncation factor {0}: must be finite and > 0")]
    InvalidTruncation(f64),
    #[error("invalid field shape {width}x{height} with {len} samples")]
    InvalidShape {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("kernel radius {radius} too large for {width}x{height} field")]
    KernelTooLarge {
        radius: usize,
        width: usize,
        height: usize,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid wave: {0}")]
    InvalidWave(String),
    #[error("window of radius {radius} at ({x}, {y}) does not fit in {width}x{height} field")]
    WindowTooLarge {
        radius: usize,
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("channel requires order {0}, which was not computed")]
    MissingOrder(u32),
    #[error("unknown channel label or preset: {0}")]
    UnknownLabel(String),
    #[error("duplicate channel label: {0}")]
    DuplicateLabel(String),
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CstError {
    /// Short name of the error class, used for one-line diagnostics.
    pub fn class(&self) -> &'static str {
        match self {
            CstError::InvalidSigma(_) => "InvalidSigma",
            CstError::InvalidOrder(_) => "InvalidOrder",
            CstError::InvalidGamma(_) => "InvalidGamma",
            CstError::InvalidTruncation(_) => "InvalidTruncation",
            CstError::InvalidShape { .. } => "InvalidShape",
            CstError::NonFinite(_) => "NonFinite",
            CstError::KernelTooLarge { .. } => "KernelTooLarge",
            CstError::ShapeMismatch(_) => "ShapeMismatch",
            CstError::InvalidWave(_) => "InvalidWave",
            CstError::WindowTooLarge { .. } => "WindowTooLarge",
            CstError::MissingOrder(_) => "MissingOrder",
            CstError::UnknownLabel(_) => "UnknownLabel",
            CstError::DuplicateLabel(_) => "DuplicateLabel",
            CstError::FileNotFound(_) => "FileNotFound",
            CstError::Decode(_) => "DecodeError",
            CstError::UnsupportedFormat(_) => "UnsupportedFormat",
            CstError::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, CstError>;
