use thiserror::Error;

use crate::assembly::Position;
use crate::assembly_tree::TreeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("tile set contains no tiles")]
    NoTiles,
    #[error("duplicate tile name `{0}`")]
    DuplicateTileName(String),
    #[error("glue label `{label}` used with strength {first} and strength {second}")]
    InconsistentStrength { label: String, first: u32, second: u32 },
    #[error("glue label `{0}` has strength 0; only the null glue `-` may be strength 0")]
    ZeroStrengthLabel(String),
    #[error("unknown tile `{0}`")]
    UnknownTileName(String),
    #[error("tile index {0} is not in the tile set")]
    UnknownTile(u32),
    #[error("assembly is empty")]
    EmptyAssembly,
    #[error("duplicate position {0}")]
    DuplicatePosition(Position),
    #[error("domain not connected")]
    DisconnectedDomain,
    #[error("coordinate overflow")]
    CoordinateOverflow,
    #[error("position {0} is not in the assembly")]
    PositionNotInAssembly(Position),
    #[error("assemblies disagree at {0}")]
    Conflict(Position),
    #[error("assemblies do not overlap")]
    EmptyOverlap,
    #[error("binding graph is not connected")]
    BindingGraphDisconnected,
    #[error("tile set has functionally null glues; normalize it first")]
    NotNormalized,
    #[error("seed position {0} is not in the assembly")]
    AnchorMissing(Position),
    #[error("seed position {position} holds tile {found}, expected {expected}")]
    AnchorWrongTile {
        position: Position,
        expected: u32,
        found: u32,
    },
    #[error("malformed merge log: {0}")]
    MalformedLog(String),
    #[error("invalid assembly tree: {0}")]
    InvalidTree(TreeViolation),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("size cap exceeded: {what} is {size}, limit {limit}")]
    SizeCap {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
