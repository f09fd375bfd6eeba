//! Combining assembly trees of two consistent, overlapping assemblies into
//! one tree for their union.
//!
//! The tree for `alpha` replaces the leaf of the `beta` tree at the least
//! shared position. Every other shared position then has two leaves: `l1`
//! inside the spliced tree and `l2` outside it. Each pair is removed by one
//! rewrite around `a = lca(l1, l2)`: with `r1`/`r2` the children of `a`
//! towards `l1`/`l2`, `r1` takes the place of `l2` and `r2` takes the place
//! of `a`. The spliced subtree is never touched.

use std::collections::HashMap;

use super::{validate, AssemblyTree, TreeNode, TreeViolation};
use crate::assembly::{Assembly, Position};
use crate::binding::is_stable;
use crate::error::{Error, Result};
use crate::tile::{TileId, TileSet};

#[derive(Debug, Clone, Copy, Default)]
pub struct MergeOptions {
    /// After the splice and after every rewrite, check that each node's
    /// collapsed placement is a stable assembly and that the spliced subtree
    /// is unchanged. Cubic per node; meant for tests.
    pub check_rounds: bool,
}

#[derive(Debug, Clone)]
pub struct MergeReport {
    pub tree: AssemblyTree,
    /// Node of `tree` at which the `alpha` tree sits unchanged.
    pub alpha_root: usize,
    /// Number of duplicate-leaf rewrites performed.
    pub rounds: usize,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Leaf(Position, TileId),
    Join([usize; 2]),
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: Option<usize>,
    kind: Kind,
    alive: bool,
}

struct Surgery {
    nodes: Vec<Node>,
    root: usize,
}

impl Surgery {
    fn push_tree(&mut self, t: &AssemblyTree) -> usize {
        let base = self.nodes.len();
        for n in t.nodes() {
            let kind = match *n {
                TreeNode::Leaf { position, tile } => Kind::Leaf(position, tile),
                TreeNode::Join { left, right } => Kind::Join([left + base, right + base]),
            };
            self.nodes.push(Node {
                parent: None,
                kind,
                alive: true,
            });
        }
        for id in base..self.nodes.len() {
            if let Kind::Join(ch) = self.nodes[id].kind {
                for c in ch {
                    self.nodes[c].parent = Some(id);
                }
            }
        }
        self.nodes.len() - 1
    }

    /// Puts `new` where `old` hangs (or makes it the root).
    fn replace_child(&mut self, old: usize, new: usize) {
        let parent = self.nodes[old].parent;
        match parent {
            Some(p) => {
                let Kind::Join(ref mut ch) = self.nodes[p].kind else {
                    unreachable!("parents are joins")
                };
                let slot = ch.iter().position(|&c| c == old).expect("child of its parent");
                ch[slot] = new;
            }
            None => self.root = new,
        }
        self.nodes[new].parent = parent;
    }

    fn ancestors(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = self.nodes[v].parent {
            out.push(p);
            v = p;
        }
        out
    }

    /// Removes the duplicate leaf `l2` (outside the spliced subtree) of the
    /// leaf `l1` (inside it).
    fn eliminate(&mut self, l1: usize, l2: usize) {
        let up1 = self.ancestors(l1);
        let depth_of: HashMap<usize, usize> = up1.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // walk up from l2 until the path of l1 is met
        let mut below = l2;
        let mut a = self.nodes[l2].parent.expect("a duplicate leaf is never the root");
        while !depth_of.contains_key(&a) {
            below = a;
            a = self.nodes[a].parent.expect("both leaves share the root");
        }
        let r2 = below;
        let r1 = up1[depth_of[&a] - 1];
        if r2 == l2 {
            // l2 hangs directly off a; r1 simply replaces a
            self.replace_child(a, r1);
        } else {
            self.replace_child(l2, r1);
            self.replace_child(a, r2);
        }
        self.nodes[l2].alive = false;
        self.nodes[a].alive = false;
    }

    fn export(&self) -> (AssemblyTree, HashMap<usize, usize>) {
        let mut out = Vec::new();
        let mut new_id = HashMap::new();
        // iterative post-order
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            match self.nodes[v].kind {
                Kind::Leaf(position, tile) => {
                    new_id.insert(v, out.len());
                    out.push(TreeNode::Leaf { position, tile });
                }
                Kind::Join([l, r]) => {
                    if expanded {
                        new_id.insert(v, out.len());
                        out.push(TreeNode::Join {
                            left: new_id[&l],
                            right: new_id[&r],
                        });
                    } else {
                        stack.push((v, true));
                        stack.push((r, false));
                        stack.push((l, false));
                    }
                }
            }
        }
        let tree = AssemblyTree::from_nodes(out).expect("surgery keeps a full binary tree");
        (tree, new_id)
    }

    fn leaves_under(&self, v: usize) -> Vec<(Position, TileId)> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            match self.nodes[u].kind {
                Kind::Leaf(p, t) => out.push((p, t)),
                Kind::Join(ch) => stack.extend(ch),
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Every live node's collapsed placement is a stable assembly.
    fn check_stable(&self, ts: &TileSet, tau: u32) -> Result<()> {
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            let sub = Assembly::new(self.leaves_under(u))?;
            if !is_stable(&sub, ts, tau)? {
                return Err(Error::InvalidTree(TreeViolation::WeakSeam { node: u, seam: 0, tau }));
            }
            if let Kind::Join(ch) = self.nodes[u].kind {
                stack.extend(ch);
            }
        }
        Ok(())
    }
}

/// Assembly tree for `alpha ∪ beta` that contains `alpha_tree` unchanged.
pub fn merge_trees(
    alpha_tree: &AssemblyTree,
    alpha: &Assembly,
    beta_tree: &AssemblyTree,
    beta: &Assembly,
    ts: &TileSet,
    tau: u32,
) -> Result<AssemblyTree> {
    merge_trees_with(alpha_tree, alpha, beta_tree, beta, ts, tau, MergeOptions::default()).map(|r| r.tree)
}

pub fn merge_trees_with(
    alpha_tree: &AssemblyTree,
    alpha: &Assembly,
    beta_tree: &AssemblyTree,
    beta: &Assembly,
    ts: &TileSet,
    tau: u32,
    opts: MergeOptions,
) -> Result<MergeReport> {
    alpha.check_tiles(ts)?;
    beta.check_tiles(ts)?;
    validate(alpha_tree, alpha, ts, tau).map_err(Error::InvalidTree)?;
    validate(beta_tree, beta, ts, tau).map_err(Error::InvalidTree)?;
    let union = alpha.union(beta)?;
    let shared = alpha.overlap(beta);
    let Some(&splice_at) = shared.first() else {
        return Err(Error::EmptyOverlap);
    };

    let mut s = Surgery {
        nodes: Vec::with_capacity(alpha_tree.len() + beta_tree.len()),
        root: 0,
    };
    s.root = s.push_tree(beta_tree);
    let beta_len = s.nodes.len();
    let alpha_root = s.push_tree(alpha_tree);

    let leaf_map = |range: std::ops::Range<usize>, s: &Surgery| -> HashMap<Position, usize> {
        range
            .filter_map(|i| match s.nodes[i].kind {
                Kind::Leaf(p, _) => Some((p, i)),
                Kind::Join(_) => None,
            })
            .collect()
    };
    let beta_leaf = leaf_map(0..beta_len, &s);
    let alpha_leaf = leaf_map(beta_len..s.nodes.len(), &s);
    let alpha_snapshot: Vec<Node> = s.nodes[beta_len..].to_vec();

    let spliced = beta_leaf[&splice_at];
    s.replace_child(spliced, alpha_root);
    s.nodes[spliced].alive = false;
    if opts.check_rounds {
        s.check_stable(ts, tau)?;
    }

    let mut rounds = 0;
    for &x in &shared[1..] {
        s.eliminate(alpha_leaf[&x], beta_leaf[&x]);
        rounds += 1;
        if opts.check_rounds {
            s.check_stable(ts, tau)?;
            for (k, before) in alpha_snapshot.iter().enumerate() {
                let now = &s.nodes[beta_len + k];
                let same_kind = match (before.kind, now.kind) {
                    (Kind::Leaf(p, t), Kind::Leaf(q, u)) => p == q && t == u,
                    (Kind::Join(a), Kind::Join(b)) => a == b,
                    _ => false,
                };
                let same_parent = beta_len + k == alpha_root || before.parent == now.parent;
                assert!(now.alive && same_kind && same_parent, "spliced subtree was modified");
            }
        }
    }

    let (tree, ids) = s.export();
    debug_assert_eq!(validate(&tree, &union, ts, tau), Ok(()));
    Ok(MergeReport {
        alpha_root: ids[&alpha_root],
        tree,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tile::tileset_from_specs;

    fn p(x: i32, y: i32) -> Position {
        Position::new(x, y)
    }

    fn row_tileset() -> TileSet {
        tileset_from_specs(&[
            ("A", ["-", "a:2", "-", "-"]),
            ("B", ["-", "b:2", "-", "a:2"]),
            ("C", ["-", "-", "-", "b:2"]),
        ])
        .unwrap()
    }

    fn pair(x: i32, t: u32) -> AssemblyTree {
        AssemblyTree::join(
            AssemblyTree::leaf(p(x, 0), TileId(t)),
            AssemblyTree::leaf(p(x + 1, 0), TileId(t + 1)),
        )
    }

    #[test]
    fn single_shared_tile_is_a_splice() {
        let ts = row_tileset();
        let alpha = Assembly::new([(p(0, 0), TileId(0)), (p(1, 0), TileId(1))]).unwrap();
        let beta = Assembly::new([(p(1, 0), TileId(1)), (p(2, 0), TileId(2))]).unwrap();
        let (ta, tb) = (pair(0, 0), pair(1, 1));
        let r = merge_trees_with(&ta, &alpha, &tb, &beta, &ts, 2, MergeOptions { check_rounds: true }).unwrap();
        assert_eq!(r.rounds, 0);
        assert_eq!(r.tree.len(), 5);
        let union = alpha.union(&beta).unwrap();
        assert_eq!(union.len(), 3);
        assert_eq!(validate(&r.tree, &union, &ts, 2), Ok(()));
        assert_eq!(r.tree.subtree(r.alpha_root), ta);
        assert!(crate::oracle::producible_oracle(&union, &ts, 2).unwrap());
    }

    #[test]
    fn identical_assemblies() {
        let ts = row_tileset();
        let alpha = Assembly::new([(p(0, 0), TileId(0)), (p(1, 0), TileId(1)), (p(2, 0), TileId(2))]).unwrap();
        let left_first = AssemblyTree::join(pair(0, 0), AssemblyTree::leaf(p(2, 0), TileId(2)));
        let right_first = AssemblyTree::join(AssemblyTree::leaf(p(0, 0), TileId(0)), pair(1, 1));
        let r = merge_trees_with(
            &left_first,
            &alpha,
            &right_first,
            &alpha,
            &ts,
            2,
            MergeOptions { check_rounds: true },
        )
        .unwrap();
        assert_eq!(r.rounds, 2);
        assert_eq!(validate(&r.tree, &alpha, &ts, 2), Ok(()));
        assert_eq!(r.tree, left_first);
    }

    #[test]
    fn precondition_errors() {
        let ts = row_tileset();
        let alpha = Assembly::new([(p(0, 0), TileId(0)), (p(1, 0), TileId(1))]).unwrap();
        let far = Assembly::new([(p(5, 0), TileId(0)), (p(6, 0), TileId(1))]).unwrap();
        let tf = pair(5, 0);
        assert!(matches!(
            merge_trees(&pair(0, 0), &alpha, &tf, &far, &ts, 2),
            Err(Error::DisconnectedDomain) | Err(Error::EmptyOverlap)
        ));
        let adjacent = Assembly::new([(p(2, 0), TileId(2))]).unwrap();
        assert_eq!(
            merge_trees(
                &pair(0, 0),
                &alpha,
                &AssemblyTree::leaf(p(2, 0), TileId(2)),
                &adjacent,
                &ts,
                2
            ),
            Err(Error::EmptyOverlap)
        );
        let clash = Assembly::single(p(1, 0), TileId(2));
        assert_eq!(
            merge_trees(
                &pair(0, 0),
                &alpha,
                &AssemblyTree::leaf(p(1, 0), TileId(2)),
                &clash,
                &ts,
                2
            ),
            Err(Error::Conflict(p(1, 0)))
        );
        assert!(matches!(
            merge_trees(&pair(0, 0), &alpha, &pair(0, 0), &alpha, &ts, 3),
            Err(Error::InvalidTree(_))
        ));
    }
}
