use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisionNode {
    Leaf(usize),
    Join(usize, usize),
}

/// A full binary tree over a finite set whose leaves are singletons and
/// whose internal nodes are disjoint unions of their children. Stored with
/// children before parents and the root last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchicalDivision {
    nodes: Vec<DivisionNode>,
}

impl HierarchicalDivision {
    pub fn new(nodes: Vec<DivisionNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::MalformedTree("no nodes".into()));
        }
        let mut has_parent = vec![false; nodes.len()];
        let mut seen = BTreeSet::new();
        for (id, n) in nodes.iter().enumerate() {
            match *n {
                DivisionNode::Leaf(x) => {
                    if !seen.insert(x) {
                        return Err(Error::MalformedTree(format!("element {x} appears twice")));
                    }
                }
                DivisionNode::Join(l, r) => {
                    for c in [l, r] {
                        if c >= id || has_parent[c] {
                            return Err(Error::MalformedTree(format!("bad child {c} of node {id}")));
                        }
                        has_parent[c] = true;
                    }
                }
            }
        }
        if (0..nodes.len() - 1).any(|i| !has_parent[i]) {
            return Err(Error::MalformedTree("more than one root".into()));
        }
        Ok(HierarchicalDivision { nodes })
    }

    pub fn nodes(&self) -> &[DivisionNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn elements(&self) -> BTreeSet<usize> {
        self.node_set(self.root())
    }

    pub fn node_set(&self, id: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(u) = stack.pop() {
            match self.nodes[u] {
                DivisionNode::Leaf(x) => {
                    out.insert(x);
                }
                DivisionNode::Join(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        out
    }

    /// Whether `a` and `b` are the two children of one node.
    pub fn are_siblings(&self, a: usize, b: usize) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(*n, DivisionNode::Join(l, r) if (l, r) == (a, b) || (l, r) == (b, a)))
    }
}

/// Two distinct partition classes together with sibling nodes of the
/// division lying inside them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiblingPair {
    pub class_a: usize,
    pub class_b: usize,
    pub node_a: usize,
    pub node_b: usize,
}

/// For a partition `classes` of the division's ground set other than the
/// trivial one, finds classes `C1 != C2` and sibling nodes `C1' ⊆ C1`,
/// `C2' ⊆ C2`.
///
/// Leaves are labeled with their class and labels propagate to a parent
/// whose children carry the same label. The root stays unlabeled; walking
/// down through unlabeled children ends at a node whose two children are
/// labeled, necessarily with different classes.
pub fn find_sibling_pair(div: &HierarchicalDivision, classes: &[Vec<usize>]) -> Result<SiblingPair> {
    let ground = div.elements();
    let max = ground.iter().next_back().copied().unwrap_or(0);
    let mut class_of = vec![usize::MAX; max + 1];
    let mut covered = 0usize;
    for (c, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::InvalidPartition(format!("class {c} is empty")));
        }
        for &x in class {
            if !ground.contains(&x) {
                return Err(Error::InvalidPartition(format!("{x} is not in the ground set")));
            }
            if class_of[x] != usize::MAX {
                return Err(Error::InvalidPartition(format!("{x} is in two classes")));
            }
            class_of[x] = c;
            covered += 1;
        }
    }
    if covered != ground.len() {
        return Err(Error::InvalidPartition("classes do not cover the ground set".into()));
    }
    if classes.len() < 2 {
        return Err(Error::InvalidPartition("partition has a single class".into()));
    }

    let mut label: Vec<Option<usize>> = Vec::with_capacity(div.nodes.len());
    for n in &div.nodes {
        label.push(match *n {
            DivisionNode::Leaf(x) => Some(class_of[x]),
            DivisionNode::Join(l, r) => match (label[l], label[r]) {
                (Some(a), Some(b)) if a == b => Some(a),
                _ => None,
            },
        });
    }

    let mut u = div.root();
    loop {
        let DivisionNode::Join(l, r) = div.nodes[u] else {
            unreachable!("leaves are labeled, so the walk stops above them");
        };
        match (label[l], label[r]) {
            (Some(a), Some(b)) => {
                debug_assert_ne!(a, b);
                return Ok(SiblingPair {
                    class_a: a,
                    class_b: b,
                    node_a: l,
                    node_b: r,
                });
            }
            (None, _) => u = l,
            (_, None) => u = r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{all_divisions, all_partitions};

    #[test]
    fn enumeration_counts() {
        // (2n-3)!! divisions, Bell numbers of partitions
        let divs: Vec<usize> = (1..=6).map(|n| all_divisions(n).len()).collect();
        assert_eq!(divs, vec![1, 1, 3, 15, 105, 945]);
        let bells: Vec<usize> = (1..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(bells, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn two_leaves() {
        let div = HierarchicalDivision::new(vec![
            DivisionNode::Leaf(0),
            DivisionNode::Leaf(1),
            DivisionNode::Join(0, 1),
        ])
        .unwrap();
        let sp = find_sibling_pair(&div, &[vec![0], vec![1]]).unwrap();
        assert_eq!(
            sp,
            SiblingPair {
                class_a: 0,
                class_b: 1,
                node_a: 0,
                node_b: 1
            }
        );
    }

    #[test]
    fn balanced_four() {
        use DivisionNode::*;
        let div = HierarchicalDivision::new(vec![
            Leaf(1),
            Leaf(2),
            Join(0, 1),
            Leaf(3),
            Leaf(4),
            Join(3, 4),
            Join(2, 5),
        ])
        .unwrap();
        let classes = vec![vec![1, 3], vec![2, 4]];
        let sp = find_sibling_pair(&div, &classes).unwrap();
        let a = div.node_set(sp.node_a);
        let b = div.node_set(sp.node_b);
        let ok = [
            (BTreeSet::from([1]), BTreeSet::from([2])),
            (BTreeSet::from([3]), BTreeSet::from([4])),
        ];
        assert!(ok.contains(&(a, b)));
        assert_eq!((sp.class_a, sp.class_b), (0, 1));
    }

    #[test]
    fn rejects_bad_partitions() {
        use DivisionNode::*;
        let div = HierarchicalDivision::new(vec![Leaf(0), Leaf(1), Join(0, 1)]).unwrap();
        assert!(find_sibling_pair(&div, &[vec![0, 1]]).is_err());
        assert!(find_sibling_pair(&div, &[vec![0], vec![0, 1]]).is_err());
        assert!(find_sibling_pair(&div, &[vec![0]]).is_err());
        assert!(find_sibling_pair(&div, &[vec![0], vec![1], vec![]]).is_err());
        assert!(find_sibling_pair(&div, &[vec![0], vec![1, 2]]).is_err());
    }

    #[test]
    fn exhaustive_small() {
        for n in 2..=5 {
            for div in all_divisions(n) {
                for classes in all_partitions(n) {
                    if classes.len() < 2 {
                        continue;
                    }
                    let sp = find_sibling_pair(&div, &classes).unwrap();
                    assert_ne!(sp.class_a, sp.class_b);
                    assert!(div.are_siblings(sp.node_a, sp.node_b));
                    let ca: BTreeSet<usize> = classes[sp.class_a].iter().copied().collect();
                    let cb: BTreeSet<usize> = classes[sp.class_b].iter().copied().collect();
                    assert!(div.node_set(sp.node_a).is_subset(&ca));
                    assert!(div.node_set(sp.node_b).is_subset(&cb));
                }
            }
        }
    }
}
