//! Verification tools for the abstract Tile Assembly Model.
//!
//! - [`producible`]: is an assembly producible in the hierarchical model at a
//!   given temperature, with a witness [`AssemblyTree`].
//! - [`upv`]: unique production verification at temperature 1, seeded and
//!   hierarchical.
//! - [`assembly_tree`]: validating and merging assembly trees.
//! - [`oracle`]: brute-force references for all of the above.

pub mod assembly;
pub mod assembly_tree;
pub mod bench;
pub mod binding;
pub mod error;
pub mod gen;
pub mod io;
pub mod oracle;
pub mod producible;
pub mod tile;
pub mod upv;

pub use assembly::{Assembly, Offset, Position};
pub use assembly_tree::{merge_trees, validate, AssemblyTree, TreeNode, TreeViolation};
pub use binding::{binding_graph, is_stable, BindingGraph};
pub use error::{Error, Result};
pub use producible::{is_producible_fast, is_producible_naive, replay_merge_log, MergeLog, TieBreak};
pub use tile::{normalize_tileset, Direction, GlueId, TileId, TileSet, TileSystem};
pub use upv::{build_glue_index, precedes, upv_hier_t1, upv_seeded_t1, UpvVerdict};
