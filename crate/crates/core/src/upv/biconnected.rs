//! Cut vertices and the precedence relation of a seeded temperature-1
//! assembly.
//!
//! `p ≺ q` holds when every producible assembly containing `q` also contains
//! `p`. From the seed this is the same as: deleting `p` from the binding
//! graph separates `q` from the seed. With a depth-first search rooted at
//! the seed that means `p` is the seed, or `q` lies below a child `c` of `p`
//! with `low(c) >= disc(p)`.
//!
//! The first search computes discovery and low-link numbers. The second
//! repeats the same search and, when it first reaches `q`, looks at each
//! grid neighbor `p` of `q`: `p` is an ancestor of `q` exactly when `p` is
//! still on the search stack, and the child it is currently exploring is the
//! one whose subtree holds `q`.

use crate::binding::BindingGraph;
use crate::error::{Error, Result};
use crate::tile::Direction;

const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mark {
    Unvisited,
    Visiting,
    Visited,
}

/// A maximal biconnected piece of the binding graph, attached to the rest of
/// the block tree at `attach` (the seed for root blocks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub attach: u32,
    pub vertices: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct BiconnectedDecomposition {
    pub root: u32,
    pub disc: Vec<u32>,
    pub low: Vec<u32>,
    pub parent: Vec<u32>,
    pub is_cut: Vec<bool>,
    pub blocks: Vec<Block>,
    /// Neighbor scans performed by the search.
    pub ops: u64,
}

/// Binding neighbors of `v` in direction order.
fn bound(g: &BindingGraph, v: u32, k: usize) -> Option<u32> {
    let d = Direction::from_index(k);
    if g.weight(v, d) > 0 {
        g.grid_neighbor(v, d)
    } else {
        None
    }
}

impl BiconnectedDecomposition {
    /// Iterative Hopcroft–Tarjan from `root`. Fails if some vertex is not
    /// reachable from the root.
    pub fn new(g: &BindingGraph, root: u32) -> Result<Self> {
        let n = g.vertex_count();
        let mut disc = vec![UNSEEN; n];
        let mut low = vec![UNSEEN; n];
        let mut parent = vec![UNSEEN; n];
        let mut is_cut = vec![false; n];
        let mut blocks = Vec::new();
        let mut edge_stack: Vec<(u32, u32)> = Vec::new();
        let mut root_children = 0;
        let mut ops = 0u64;
        let mut time = 0u32;

        // frames are (vertex, next direction to scan)
        let mut stack: Vec<(u32, usize)> = vec![(root, 0)];
        disc[root as usize] = time;
        low[root as usize] = time;
        time += 1;
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            if *k < 4 {
                let dir = *k;
                *k += 1;
                ops += 1;
                let Some(u) = bound(g, v, dir) else { continue };
                if disc[u as usize] == UNSEEN {
                    parent[u as usize] = v;
                    disc[u as usize] = time;
                    low[u as usize] = time;
                    time += 1;
                    edge_stack.push((v, u));
                    stack.push((u, 0));
                } else if u != parent[v as usize] && disc[u as usize] < disc[v as usize] {
                    edge_stack.push((v, u));
                    low[v as usize] = low[v as usize].min(disc[u as usize]);
                }
                continue;
            }
            stack.pop();
            let Some(&(p, _)) = stack.last() else { break };
            low[p as usize] = low[p as usize].min(low[v as usize]);
            if low[v as usize] >= disc[p as usize] {
                if p == root {
                    root_children += 1;
                } else {
                    is_cut[p as usize] = true;
                }
                let mut vertices = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    vertices.push(a);
                    vertices.push(b);
                    if (a, b) == (p, v) {
                        break;
                    }
                }
                vertices.sort_unstable();
                vertices.dedup();
                blocks.push(Block { attach: p, vertices });
            }
        }
        if root_children >= 2 {
            is_cut[root as usize] = true;
        }
        if disc.contains(&UNSEEN) {
            return Err(Error::BindingGraphDisconnected);
        }
        if n == 1 {
            blocks.push(Block {
                attach: root,
                vertices: vec![root],
            });
        }
        Ok(BiconnectedDecomposition {
            root,
            disc,
            low,
            parent,
            is_cut,
            blocks,
            ops,
        })
    }

    /// `p ≺ q` for an arbitrary pair, by walking up from `q`.
    pub fn precedes(&self, p: u32, q: u32) -> bool {
        if p == self.root {
            return true;
        }
        let mut child = q;
        let mut up = self.parent[q as usize];
        while up != UNSEEN {
            if up == p {
                return self.low[child as usize] >= self.disc[p as usize];
            }
            child = up;
            up = self.parent[up as usize];
        }
        false
    }
}

/// For every vertex `p` and direction `d` with a grid neighbor `q = p + d`
/// in the assembly, whether `p ≺ q`.
#[derive(Debug, Clone)]
pub struct PrecedenceMap {
    precedes: Vec<[bool; 4]>,
    pub decomposition: BiconnectedDecomposition,
    /// Neighbor scans over both searches plus the precedence checks.
    pub ops: u64,
}

impl PrecedenceMap {
    pub fn new(g: &BindingGraph, seed: u32) -> Result<Self> {
        let dec = BiconnectedDecomposition::new(g, seed)?;
        let n = g.vertex_count();
        let mut ops = dec.ops;
        let mut precedes = vec![[false; 4]; n];
        let mut mark = vec![Mark::Unvisited; n];
        // child each vertex is currently exploring
        let mut current = vec![UNSEEN; n];

        let mut reach = |q: u32, mark: &[Mark], current: &[u32], ops: &mut u64| {
            for d in Direction::ALL {
                *ops += 1;
                let Some(p) = g.grid_neighbor(q, d) else { continue };
                let pq = if p == seed {
                    true
                } else if mark[p as usize] == Mark::Visiting {
                    let c = current[p as usize];
                    dec.low[c as usize] >= dec.disc[p as usize]
                } else {
                    false
                };
                precedes[p as usize][d.opposite().index()] = pq;
            }
        };

        let mut stack: Vec<(u32, usize)> = vec![(seed, 0)];
        mark[seed as usize] = Mark::Visiting;
        reach(seed, &mark, &current, &mut ops);
        while let Some(&mut (v, ref mut k)) = stack.last_mut() {
            if *k < 4 {
                let dir = *k;
                *k += 1;
                ops += 1;
                let Some(u) = bound(g, v, dir) else { continue };
                if mark[u as usize] == Mark::Unvisited {
                    current[v as usize] = u;
                    mark[u as usize] = Mark::Visiting;
                    reach(u, &mark, &current, &mut ops);
                    stack.push((u, 0));
                }
                continue;
            }
            mark[v as usize] = Mark::Visited;
            stack.pop();
        }
        Ok(PrecedenceMap {
            precedes,
            decomposition: dec,
            ops,
        })
    }

    /// `p ≺ p + d`. False when there is no tile at `p + d`.
    pub fn precedes(&self, p: u32, d: Direction) -> bool {
        self.precedes[p as usize][d.index()]
    }
}
