//! Boolean lattices: vertices, blobs, truncated lattices and colorings.

mod blob;
mod coloring;
mod vertex;

use thiserror::Error;

pub use blob::{layer, volume, Blob, BlobIter, Combinations, GroundSet, Layer, TruncatedLattice};
pub use coloring::{
    parse_oracle, Color, ColorOracle, ColorTable, Coloring, ConstantOracle, FnOracle, HashOracle,
    LayeredOracle, MAX_TABLE_DIMENSION,
};
pub use vertex::{Members, Vertex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("oracle query budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("layer {level} out of range for dimension {dimension}")]
    LayerOutOfRange { level: usize, dimension: usize },
    #[error("blob base {base} and variable set {variable} overlap")]
    OverlappingBlob { base: Vertex, variable: Vertex },
    #[error("bad truncation {lower}..={upper} for dimension {dimension}")]
    BadTruncation { lower: usize, upper: usize, dimension: usize },
    #[error("vertex {vertex} lies outside Q([{dimension}])")]
    OutsideLattice { vertex: Vertex, dimension: usize },
    #[error("explicit color table of dimension {dimension} exceeds the limit of {}", MAX_TABLE_DIMENSION)]
    TableTooLarge { dimension: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
