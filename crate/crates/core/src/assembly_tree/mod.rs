//! Assembly trees: the certificates of hierarchical production.
//!
//! A tree is stored as an arena in which every child precedes its parent and
//! the root is the last node. This is also the order of the text format in
//! [`crate::io`].
//!
//! [`validate`] checks, for every join, that the two children cover disjoint
//! positions and that the glues across the seam between them sum to at
//! least the temperature. Stability of each internal assembly follows: a cut
//! of the join either splits one child (which is itself stable) or is exactly
//! the seam.

mod division;
mod surgery;

use std::collections::HashSet;
use std::fmt;

pub use division::{find_sibling_pair, DivisionNode, HierarchicalDivision, SiblingPair};
pub use surgery::{merge_trees, merge_trees_with, MergeOptions, MergeReport};

use crate::assembly::{Assembly, Position};
use crate::error::{Error, Result};
use crate::tile::{Direction, TileId, TileSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Leaf { position: Position, tile: TileId },
    Join { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyTree {
    nodes: Vec<TreeNode>,
}

impl AssemblyTree {
    pub fn leaf(position: Position, tile: TileId) -> Self {
        AssemblyTree {
            nodes: vec![TreeNode::Leaf { position, tile }],
        }
    }

    /// Joins two trees under a new root.
    pub fn join(left: AssemblyTree, right: AssemblyTree) -> Self {
        let offset = left.nodes.len();
        let mut nodes = left.nodes;
        let l_root = offset - 1;
        nodes.extend(right.nodes.into_iter().map(|n| match n {
            TreeNode::Join { left, right } => TreeNode::Join {
                left: left + offset,
                right: right + offset,
            },
            leaf => leaf,
        }));
        let r_root = nodes.len() - 1;
        nodes.push(TreeNode::Join {
            left: l_root,
            right: r_root,
        });
        AssemblyTree { nodes }
    }

    /// Builds a tree from an arena, checking that it is a full binary tree
    /// with children listed before parents and the root last.
    pub fn from_nodes(nodes: Vec<TreeNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::MalformedTree("no nodes".into()));
        }
        let mut has_parent = vec![false; nodes.len()];
        for (id, n) in nodes.iter().enumerate() {
            if let TreeNode::Join { left, right } = *n {
                for c in [left, right] {
                    if c >= id {
                        return Err(Error::MalformedTree(format!(
                            "node {id} references node {c}, which is not listed before it"
                        )));
                    }
                    if has_parent[c] {
                        return Err(Error::MalformedTree(format!("node {c} has two parents")));
                    }
                    has_parent[c] = true;
                }
            }
        }
        let root = nodes.len() - 1;
        if let Some(orphan) = (0..root).find(|&i| !has_parent[i]) {
            return Err(Error::MalformedTree(format!(
                "node {orphan} is not reachable from the root"
            )));
        }
        Ok(AssemblyTree { nodes })
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> TreeNode {
        self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    pub fn leaves(&self) -> impl Iterator<Item = (Position, TileId)> + '_ {
        self.nodes.iter().filter_map(|n| match *n {
            TreeNode::Leaf { position, tile } => Some((position, tile)),
            TreeNode::Join { .. } => None,
        })
    }

    /// The subtree rooted at `id`, renumbered.
    pub fn subtree(&self, id: usize) -> AssemblyTree {
        let mut out = Vec::new();
        let mut new_id = std::collections::HashMap::new();
        let mut stack = vec![(id, false)];
        while let Some((v, expanded)) = stack.pop() {
            match self.nodes[v] {
                leaf @ TreeNode::Leaf { .. } => {
                    new_id.insert(v, out.len());
                    out.push(leaf);
                }
                TreeNode::Join { left, right } if expanded => {
                    new_id.insert(v, out.len());
                    out.push(TreeNode::Join {
                        left: new_id[&left],
                        right: new_id[&right],
                    });
                }
                TreeNode::Join { left, right } => {
                    stack.push((v, true));
                    stack.push((right, false));
                    stack.push((left, false));
                }
            }
        }
        AssemblyTree { nodes: out }
    }

    /// Structural equality of the subtree at `a` in `self` with the subtree
    /// at `b` in `other`, respecting child order.
    fn same_shape(&self, a: usize, other: &AssemblyTree, b: usize) -> bool {
        let mut stack = vec![(a, b)];
        while let Some((x, y)) = stack.pop() {
            match (self.nodes[x], other.nodes[y]) {
                (l @ TreeNode::Leaf { .. }, m @ TreeNode::Leaf { .. }) => {
                    if l != m {
                        return false;
                    }
                }
                (TreeNode::Join { left: l1, right: r1 }, TreeNode::Join { left: l2, right: r2 }) => {
                    stack.push((l1, l2));
                    stack.push((r1, r2));
                }
                _ => return false,
            }
        }
        true
    }

    /// Node of `self` whose subtree is identical to `other`, if any.
    pub fn find_subtree(&self, other: &AssemblyTree) -> Option<usize> {
        let sizes = self.subtree_sizes();
        let want = other.len();
        (0..self.nodes.len())
            .filter(|&i| sizes[i] == want)
            .find(|&i| self.same_shape(i, other, other.root()))
    }

    pub fn contains_subtree(&self, other: &AssemblyTree) -> bool {
        self.find_subtree(other).is_some()
    }

    fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let TreeNode::Join { left, right } = *n {
                sizes[i] = 1 + sizes[left] + sizes[right];
            }
        }
        sizes
    }

    /// Position-set skeleton over the cell indices of `a`. Leaves whose
    /// position lies outside `a` are an error.
    pub fn division(&self, a: &Assembly) -> Result<HierarchicalDivision> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            nodes.push(match *n {
                TreeNode::Leaf { position, .. } => {
                    DivisionNode::Leaf(a.index_of(position).ok_or(Error::PositionNotInAssembly(position))?)
                }
                TreeNode::Join { left, right } => DivisionNode::Join(left, right),
            });
        }
        HierarchicalDivision::new(nodes)
    }
}

/// First problem found while validating a tree, in node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    LeafOutsideAssembly {
        node: usize,
        position: Position,
    },
    LeafTileMismatch {
        node: usize,
        position: Position,
        expected: TileId,
        found: TileId,
    },
    OverlappingChildren {
        node: usize,
        position: Position,
    },
    WeakSeam {
        node: usize,
        seam: u64,
        tau: u32,
    },
    MissingPositions {
        covered: usize,
        expected: usize,
    },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::LeafOutsideAssembly { node, position } => {
                write!(f, "leaf {node} at {position} is outside the assembly")
            }
            TreeViolation::LeafTileMismatch {
                node,
                position,
                expected,
                found,
            } => write!(
                f,
                "leaf {node} at {position} has tile {} but the assembly has {}",
                found.0, expected.0
            ),
            TreeViolation::OverlappingChildren { node, position } => {
                write!(f, "children of node {node} both contain {position}")
            }
            TreeViolation::WeakSeam { node, seam, tau } => {
                write!(f, "join {node} has seam strength {seam} < {tau}")
            }
            TreeViolation::MissingPositions { covered, expected } => {
                write!(f, "tree covers {covered} of {expected} positions")
            }
        }
    }
}

/// Total glue strength between two position sets of a consistent placement.
/// Positions present in both sets are counted as members of both.
pub(crate) fn seam_between<F>(ts: &TileSet, tile_at: F, small: &HashSet<Position>, large: &HashSet<Position>) -> u64
where
    F: Fn(Position) -> TileId,
{
    let mut seam = 0u64;
    for &p in small {
        let t = tile_at(p);
        for d in Direction::ALL {
            let Some(q) = p.step(d) else { continue };
            if large.contains(&q) && !small.contains(&q) {
                seam += ts.bond(t, d, tile_at(q)) as u64;
            }
        }
    }
    seam
}

/// Checks that `tree` certifies hierarchical production of `a` at `tau`.
pub fn validate(tree: &AssemblyTree, a: &Assembly, ts: &TileSet, tau: u32) -> std::result::Result<(), TreeViolation> {
    let mut sets: Vec<Option<HashSet<Position>>> = Vec::with_capacity(tree.len());
    let tile_at = |p: Position| a.tile_at(p).expect("validated leaf position");
    for (id, n) in tree.nodes.iter().enumerate() {
        let set = match *n {
            TreeNode::Leaf { position, tile } => {
                let expected = a
                    .tile_at(position)
                    .ok_or(TreeViolation::LeafOutsideAssembly { node: id, position })?;
                if expected != tile {
                    return Err(TreeViolation::LeafTileMismatch {
                        node: id,
                        position,
                        expected,
                        found: tile,
                    });
                }
                HashSet::from([position])
            }
            TreeNode::Join { left, right } => {
                let l = sets[left].take().expect("each node has one parent");
                let r = sets[right].take().expect("each node has one parent");
                let (mut large, small) = if l.len() >= r.len() { (l, r) } else { (r, l) };
                if let Some(&p) = small.iter().find(|p| large.contains(p)) {
                    return Err(TreeViolation::OverlappingChildren { node: id, position: p });
                }
                let seam = seam_between(ts, tile_at, &small, &large);
                if seam < tau as u64 {
                    return Err(TreeViolation::WeakSeam { node: id, seam, tau });
                }
                large.extend(small);
                large
            }
        };
        sets.push(Some(set));
    }
    let covered = sets.last().and_then(|s| s.as_ref()).map_or(0, |s| s.len());
    if covered != a.len() {
        return Err(TreeViolation::MissingPositions {
            covered,
            expected: a.len(),
        });
    }
    Ok(())
}
