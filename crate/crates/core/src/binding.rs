//! Binding graphs, bond strengths, and stability.

use std::collections::VecDeque;

use crate::assembly::{Assembly, Position};
use crate::error::{Error, Result};
use crate::tile::{Direction, TileSet};

pub const NO_VERTEX: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub weight: u32,
}

/// The grid graph of an assembly's domain with each abutment annotated by
/// the strength of the glue it shares. Vertices are cell indices of the
/// assembly (row-major). Abutments of strength zero are kept as grid
/// adjacency but are not binding edges.
#[derive(Debug, Clone)]
pub struct BindingGraph {
    grid: Vec<[u32; 4]>,
    weights: Vec<[u32; 4]>,
    edges: Vec<Edge>,
    mismatches: Vec<(u32, u32)>,
}

impl BindingGraph {
    pub fn new(a: &Assembly, ts: &TileSet) -> Result<BindingGraph> {
        a.check_tiles(ts)?;
        let n = a.len();
        let mut grid = vec![[NO_VERTEX; 4]; n];
        let mut weights = vec![[0u32; 4]; n];
        let mut edges = Vec::new();
        let mut mismatches = Vec::new();
        for (i, &(p, t)) in a.cells().iter().enumerate() {
            for d in Direction::ALL {
                let Some(j) = p.step(d).and_then(|q| a.index_of(q)) else {
                    continue;
                };
                let u = a.tile(j);
                let w = ts.bond(t, d, u);
                grid[i][d.index()] = j as u32;
                weights[i][d.index()] = w;
                if i < j {
                    if w > 0 {
                        edges.push(Edge {
                            u: i as u32,
                            v: j as u32,
                            weight: w,
                        });
                    } else {
                        let g = ts.tile(t).side(d);
                        let h = ts.tile(u).side(d.opposite());
                        if g != h {
                            mismatches.push((i as u32, j as u32));
                        }
                    }
                }
            }
        }
        Ok(BindingGraph {
            grid,
            weights,
            edges,
            mismatches,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.grid.len()
    }

    /// Binding edges with `u < v`, each listed once.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Abutting pairs whose glue labels differ.
    pub fn mismatches(&self) -> &[(u32, u32)] {
        &self.mismatches
    }

    /// Grid neighbor of `v` in direction `d`, whether or not they bind.
    pub fn grid_neighbor(&self, v: u32, d: Direction) -> Option<u32> {
        let j = self.grid[v as usize][d.index()];
        (j != NO_VERTEX).then_some(j)
    }

    /// Strength of the bond between `v` and its neighbor in direction `d`.
    pub fn weight(&self, v: u32, d: Direction) -> u32 {
        self.weights[v as usize][d.index()]
    }

    /// Binding neighbors of `v` with the bond strength.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = (u32, u32)> + '_ {
        let g = &self.grid[v as usize];
        let w = &self.weights[v as usize];
        (0..4).filter(move |&k| w[k] > 0).map(move |k| (g[k], w[k]))
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from(0, None).iter().all(|&r| r)
    }

    /// Vertices reachable from `start` along binding edges, never entering
    /// `removed`.
    pub fn reachable_from(&self, start: u32, removed: Option<u32>) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        if Some(start) == removed {
            return seen;
        }
        seen[start as usize] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (u, _) in self.neighbors(v) {
                if Some(u) != removed && !seen[u as usize] {
                    seen[u as usize] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Weight of a global minimum cut (Stoer–Wagner, cubic time), or `None`
    /// for a single vertex, which has no cut.
    pub fn min_cut_weight(&self) -> Option<u64> {
        let n = self.vertex_count();
        if n < 2 {
            return None;
        }
        let mut w = vec![vec![0u64; n]; n];
        for e in &self.edges {
            w[e.u as usize][e.v as usize] += e.weight as u64;
            w[e.v as usize][e.u as usize] += e.weight as u64;
        }
        let mut active: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        while active.len() > 1 {
            let m = active.len();
            let mut added = vec![false; m];
            let mut conn = vec![0u64; m];
            let (mut prev, mut last) = (0, 0);
            for _ in 0..m {
                let sel = (0..m)
                    .filter(|&k| !added[k])
                    .max_by_key(|&k| (conn[k], std::cmp::Reverse(k)))
                    .expect("an unadded vertex remains");
                added[sel] = true;
                prev = last;
                last = sel;
                for k in 0..m {
                    if !added[k] {
                        conn[k] += w[active[sel]][active[k]];
                    }
                }
            }
            best = best.min(conn[last]);
            // merge the last vertex into the one added before it
            let (s, t) = (active[prev], active[last]);
            #[allow(clippy::needless_range_loop)] // writes both w[s][k] and w[k][s]
            for k in 0..n {
                w[s][k] += w[t][k];
                w[k][s] = w[s][k];
            }
            w[s][s] = 0;
            active.remove(last);
        }
        Some(best)
    }
}

pub fn binding_graph(a: &Assembly, ts: &TileSet) -> Result<BindingGraph> {
    BindingGraph::new(a, ts)
}

/// Strength of the glue shared by the tiles at `p` and `q`; zero when they
/// are not adjacent or do not interact.
pub fn bond_strength(a: &Assembly, ts: &TileSet, p: Position, q: Position) -> Result<u32> {
    let tp = a.tile_at(p).ok_or(Error::PositionNotInAssembly(p))?;
    let tq = a.tile_at(q).ok_or(Error::PositionNotInAssembly(q))?;
    for t in [tp, tq] {
        if !ts.contains(t) {
            return Err(Error::UnknownTile(t.0));
        }
    }
    Ok(match p.direction_to(q) {
        Some(d) => ts.bond(tp, d, tq),
        None => 0,
    })
}

/// `true` iff every cut of the binding graph has weight at least `tau`.
/// Single tiles are stable.
pub fn is_stable(a: &Assembly, ts: &TileSet, tau: u32) -> Result<bool> {
    let g = BindingGraph::new(a, ts)?;
    Ok(g.min_cut_weight().is_none_or(|w| w >= tau as u64))
}
