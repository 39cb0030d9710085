//! Error types shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of configuration, ingestion, projection, rendering, and output.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration: bad gradient stops, degenerate bounding box,
    /// zero cell size, and similar.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed or unusable input data. Messages carry the 1-based record
    /// location where one is known.
    #[error("ingestion error: {0}")]
    Ingest(String),

    /// Coordinates outside the projectable range.
    #[error("projection error: {0}")]
    Projection(String),

    /// A render was asked for something undefined, e.g. interpolating an
    /// empty point set.
    #[error("render error: {0}")]
    Render(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Raster encoding failure.
    #[error("encode error: {0}")]
    Encode(String),
}
