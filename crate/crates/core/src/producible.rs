//! Deciding hierarchical producibility.
//!
//! Both deciders start from one component per tile and repeatedly merge two
//! components whose seam (summed glue strength between them) reaches the
//! temperature. If that gets stuck before everything is one component, the
//! assembly is not producible. Any order of merges reaches the same verdict,
//! so the greedy choice is safe.
//!
//! [`run_naive`] rescans every component pair each round. [`run_fast`] keeps
//! a graph of adjacent components with per-pair seam strengths and a
//! max-heap over pairs; merging folds the smaller component's neighbor map
//! into the larger one's, for `O(n log^2 n)` total.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::Assembly;
use crate::assembly_tree::{AssemblyTree, TreeNode};
use crate::binding::BindingGraph;
use crate::error::{Error, Result};
use crate::tile::TileSet;

/// How to choose among equally good merges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Least `(min id, max id)` pair first.
    #[default]
    LeastIds,
    /// Random choice seeded from the given value.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeStep {
    pub survivor: u32,
    pub absorbed: u32,
    pub seam: u64,
}

/// Merges in the order they happened. Component ids are the cell index of
/// the component's founding tile; after a merge the survivor keeps its id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeLog {
    pub steps: Vec<MergeStep>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub pops: u64,
    pub stale_pops: u64,
    pub pushes: u64,
    pub folds: u64,
}

#[derive(Debug, Clone)]
pub struct ProducibilityRun {
    pub producible: bool,
    pub log: MergeLog,
    pub counters: Counters,
    pub tree: Option<AssemblyTree>,
}

#[derive(Debug, Clone, Copy)]
pub struct FastOptions {
    pub tie_break: TieBreak,
    pub build_tree: bool,
    /// Recheck all seam weights after the 1st, 2nd, 4th, ... merge. On by
    /// default in debug builds.
    pub self_check: bool,
}

impl Default for FastOptions {
    fn default() -> Self {
        FastOptions {
            tie_break: TieBreak::LeastIds,
            build_tree: true,
            self_check: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    weight: u64,
    salt: u64,
    lo: Reverse<u32>,
    hi: Reverse<u32>,
}

/// Dynamic graph of merged components. Each live component keeps an ordered
/// map from neighboring component id to seam strength; pairs live in a
/// lazy-deletion max-heap and an entry is stale once its weight no longer
/// matches the map (weights only grow).
#[derive(Debug)]
pub struct ComponentGraph {
    adj: Vec<BTreeMap<u32, u64>>,
    size: Vec<u32>,
    members: Vec<Vec<u32>>,
    comp_of: Vec<u32>,
    alive: usize,
    heap: BinaryHeap<PairKey>,
    rng: Option<ChaCha8Rng>,
    pub counters: Counters,
}

impl ComponentGraph {
    pub fn new(g: &BindingGraph, tie_break: TieBreak) -> Self {
        let n = g.vertex_count();
        let mut cg = ComponentGraph {
            adj: vec![BTreeMap::new(); n],
            size: vec![1; n],
            members: (0..n as u32).map(|v| vec![v]).collect(),
            comp_of: (0..n as u32).collect(),
            alive: n,
            heap: BinaryHeap::with_capacity(2 * g.edges().len()),
            rng: match tie_break {
                TieBreak::LeastIds => None,
                TieBreak::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
            counters: Counters::default(),
        };
        for e in g.edges() {
            let w = e.weight as u64;
            cg.adj[e.u as usize].insert(e.v, w);
            cg.adj[e.v as usize].insert(e.u, w);
            cg.push(e.u, e.v, w);
        }
        cg
    }

    fn push(&mut self, a: u32, b: u32, weight: u64) {
        let salt = self.rng.as_mut().map_or(0, |r| r.gen());
        self.heap.push(PairKey {
            weight,
            salt,
            lo: Reverse(a.min(b)),
            hi: Reverse(a.max(b)),
        });
        self.counters.pushes += 1;
    }

    pub fn component_count(&self) -> usize {
        self.alive
    }

    /// Current component of cell `v`.
    pub fn component_of(&self, v: u32) -> u32 {
        self.comp_of[v as usize]
    }

    pub fn seam(&self, a: u32, b: u32) -> u64 {
        self.adj[a as usize].get(&b).copied().unwrap_or(0)
    }

    /// Removes and returns the strongest live pair, skipping stale entries.
    pub fn pop_max(&mut self) -> Option<(u32, u32, u64)> {
        while let Some(k) = self.heap.pop() {
            self.counters.pops += 1;
            let (a, b) = (k.lo.0, k.hi.0);
            if self.adj[a as usize].get(&b) == Some(&k.weight) {
                return Some((a, b, k.weight));
            }
            self.counters.stale_pops += 1;
        }
        None
    }

    /// Merges the smaller of `a`, `b` into the larger and returns
    /// `(survivor, absorbed)`.
    pub fn merge(&mut self, a: u32, b: u32) -> (u32, u32) {
        let (sa, sb) = (self.size[a as usize], self.size[b as usize]);
        let keep_a = match sa.cmp(&sb) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => match self.rng.as_mut() {
                Some(r) => r.gen(),
                None => a < b,
            },
        };
        let (big, small) = if keep_a { (a, b) } else { (b, a) };
        let small_adj = std::mem::take(&mut self.adj[small as usize]);
        self.adj[big as usize].remove(&small);
        for (c, w) in small_adj {
            if c == big {
                continue;
            }
            self.counters.folds += 1;
            self.adj[c as usize].remove(&small);
            let total = {
                let e = self.adj[big as usize].entry(c).or_insert(0);
                *e += w;
                *e
            };
            self.adj[c as usize].insert(big, total);
            self.push(big, c, total);
        }
        let moved = std::mem::take(&mut self.members[small as usize]);
        for &v in &moved {
            self.comp_of[v as usize] = big;
        }
        self.members[big as usize].extend(moved);
        self.size[big as usize] += self.size[small as usize];
        self.size[small as usize] = 0;
        self.alive -= 1;
        (big, small)
    }

    /// Recomputes every stored seam from the binding graph.
    pub fn check_seams(&self, g: &BindingGraph) -> bool {
        let mut want: HashMap<(u32, u32), u64> = HashMap::new();
        for e in g.edges() {
            let (a, b) = (self.comp_of[e.u as usize], self.comp_of[e.v as usize]);
            if a != b {
                *want.entry((a.min(b), a.max(b))).or_insert(0) += e.weight as u64;
            }
        }
        let mut stored = 0usize;
        for (a, m) in self.adj.iter().enumerate() {
            for (&b, &w) in m {
                if (a as u32) < b {
                    stored += 1;
                    if want.get(&(a as u32, b)) != Some(&w) {
                        return false;
                    }
                }
            }
        }
        stored == want.len()
    }
}

fn check_tau(tau: u32) -> Result<()> {
    if tau == 0 {
        return Err(Error::Parse {
            line: 0,
            message: "temperature must be positive".into(),
        });
    }
    Ok(())
}

pub fn run_fast(a: &Assembly, ts: &TileSet, tau: u32, opts: FastOptions) -> Result<ProducibilityRun> {
    check_tau(tau)?;
    let g = BindingGraph::new(a, ts)?;
    let mut cg = ComponentGraph::new(&g, opts.tie_break);
    let mut log = MergeLog {
        steps: Vec::with_capacity(a.len().saturating_sub(1)),
    };
    let mut producible = true;
    while cg.component_count() > 1 {
        let Some((x, y, w)) = cg.pop_max() else {
            producible = false;
            break;
        };
        if w < tau as u64 {
            producible = false;
            break;
        }
        let (survivor, absorbed) = cg.merge(x, y);
        log.steps.push(MergeStep {
            survivor,
            absorbed,
            seam: w,
        });
        if opts.self_check && log.steps.len().is_power_of_two() {
            assert!(cg.check_seams(&g), "seam bookkeeping diverged");
        }
    }
    let tree = if producible && opts.build_tree {
        Some(replay_merge_log(a, &log)?)
    } else {
        None
    };
    Ok(ProducibilityRun {
        producible,
        log,
        counters: cg.counters,
        tree,
    })
}

/// Fast decider with deterministic tie-breaking; returns the verdict and a
/// witness tree when producible.
pub fn is_producible_fast(a: &Assembly, ts: &TileSet, tau: u32) -> Result<(bool, Option<AssemblyTree>)> {
    let run = run_fast(a, ts, tau, FastOptions::default())?;
    Ok((run.producible, run.tree))
}

pub fn run_naive(a: &Assembly, ts: &TileSet, tau: u32, tie_break: TieBreak) -> Result<ProducibilityRun> {
    check_tau(tau)?;
    let g = BindingGraph::new(a, ts)?;
    let n = a.len();
    let mut comp_of: Vec<u32> = (0..n as u32).collect();
    let mut members: Vec<Vec<u32>> = (0..n as u32).map(|v| vec![v]).collect();
    let mut alive = n;
    let mut rng = match tie_break {
        TieBreak::LeastIds => None,
        TieBreak::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut log = MergeLog::default();
    let mut counters = Counters::default();
    let mut producible = true;
    while alive > 1 {
        // seam strength of every pair of components
        let mut seams: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        for e in g.edges() {
            counters.folds += 1;
            let (x, y) = (comp_of[e.u as usize], comp_of[e.v as usize]);
            if x != y {
                *seams.entry((x.min(y), x.max(y))).or_insert(0) += e.weight as u64;
            }
        }
        let eligible: Vec<((u32, u32), u64)> = seams.into_iter().filter(|&(_, w)| w >= tau as u64).collect();
        let pick = match rng.as_mut() {
            _ if eligible.is_empty() => None,
            Some(r) => Some(eligible[r.gen_range(0..eligible.len())]),
            None => Some(eligible[0]),
        };
        counters.pops += 1;
        let Some(((x, y), w)) = pick else {
            producible = false;
            break;
        };
        let (keep, drop) = if members[x as usize].len() >= members[y as usize].len() {
            (x, y)
        } else {
            (y, x)
        };
        let moved = std::mem::take(&mut members[drop as usize]);
        for &v in &moved {
            comp_of[v as usize] = keep;
        }
        members[keep as usize].extend(moved);
        alive -= 1;
        log.steps.push(MergeStep {
            survivor: keep,
            absorbed: drop,
            seam: w,
        });
    }
    let tree = if producible {
        Some(replay_merge_log(a, &log)?)
    } else {
        None
    };
    Ok(ProducibilityRun {
        producible,
        log,
        counters,
        tree,
    })
}

/// Reference decider that rescans all component pairs each round.
pub fn is_producible_naive(a: &Assembly, ts: &TileSet, tau: u32) -> Result<(bool, Option<AssemblyTree>)> {
    let run = run_naive(a, ts, tau, TieBreak::LeastIds)?;
    Ok((run.producible, run.tree))
}

/// Materializes the assembly tree described by a complete merge log.
pub fn replay_merge_log(a: &Assembly, log: &MergeLog) -> Result<AssemblyTree> {
    let n = a.len();
    let mut nodes: Vec<TreeNode> = a
        .cells()
        .iter()
        .map(|&(position, tile)| TreeNode::Leaf { position, tile })
        .collect();
    nodes.reserve(log.steps.len());
    // node currently holding each live component
    let mut top: Vec<Option<usize>> = (0..n).map(Some).collect();
    for (i, s) in log.steps.iter().enumerate() {
        let bad = |what: &str| Error::MalformedLog(format!("step {i}: {what}"));
        let (x, y) = (s.survivor as usize, s.absorbed as usize);
        if x >= n || y >= n || x == y {
            return Err(bad("unknown component"));
        }
        let left = top[x].ok_or_else(|| bad("survivor already merged away"))?;
        let right = top[y]
            .take()
            .ok_or_else(|| bad("absorbed component already merged away"))?;
        nodes.push(TreeNode::Join { left, right });
        top[x] = Some(nodes.len() - 1);
    }
    let live = top.iter().flatten().count();
    if live != 1 {
        return Err(Error::MalformedLog(format!("log leaves {live} components")));
    }
    AssemblyTree::from_nodes(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::Position;
    use crate::assembly_tree::validate;
    use crate::gen::generate_square;
    use crate::tile::{tileset_from_specs, TileId};

    fn p(x: i32, y: i32) -> Position {
        Position::new(x, y)
    }

    #[test]
    fn single_tile() {
        let ts = tileset_from_specs(&[("A", ["-", "-", "-", "-"])]).unwrap();
        let a = Assembly::single(p(0, 0), TileId(0));
        for tau in 1..4 {
            let (ok, tree) = is_producible_naive(&a, &ts, tau).unwrap();
            assert!(ok);
            assert_eq!(tree, Some(AssemblyTree::leaf(p(0, 0), TileId(0))));
            assert_eq!(is_producible_fast(&a, &ts, tau).unwrap(), (ok, tree));
        }
    }

    #[test]
    fn unit_square_depends_on_tau() {
        let (sys, a) = generate_square(2, 1);
        let ts = &sys.tileset;
        assert_eq!(is_producible_naive(&a, ts, 2).unwrap(), (false, None));
        assert_eq!(is_producible_fast(&a, ts, 2).unwrap(), (false, None));
        for (ok, tree) in [
            is_producible_naive(&a, ts, 1).unwrap(),
            is_producible_fast(&a, ts, 1).unwrap(),
        ] {
            assert!(ok);
            let tree = tree.unwrap();
            assert_eq!(tree.len(), 7);
            assert_eq!(tree.leaf_count(), 4);
            assert_eq!(validate(&tree, &a, ts, 1), Ok(()));
        }
    }

    #[test]
    fn cooperation_that_never_happens() {
        // A T-shape at tau=2: the bottom tile x needs both of its strength-1
        // neighbors l and r, which only meet through x itself.
        //   l x r      l.E=1 x.W, x.E=1 r, c.N=1 x.S
        //     c        l, r, c otherwise unbound
        let ts = tileset_from_specs(&[
            ("l", ["-", "a:1", "-", "-"]),
            ("x", ["-", "b:1", "c:1", "a:1"]),
            ("r", ["-", "-", "-", "b:1"]),
            ("c", ["c:1", "-", "-", "-"]),
        ])
        .unwrap();
        let a = Assembly::new([
            (p(0, 1), TileId(0)),
            (p(1, 1), TileId(1)),
            (p(2, 1), TileId(2)),
            (p(1, 0), TileId(3)),
        ])
        .unwrap();
        assert!(!crate::oracle::producible_oracle(&a, &ts, 2).unwrap());
        assert_eq!(is_producible_fast(&a, &ts, 2).unwrap(), (false, None));
        assert_eq!(is_producible_naive(&a, &ts, 2).unwrap(), (false, None));
        assert!(is_producible_fast(&a, &ts, 1).unwrap().0);
    }

    #[test]
    fn row_with_strength_tau_bonds() {
        for n in [1u32, 2, 5, 64] {
            let (sys, a) = crate::gen::generate_line(n, 3);
            let (ok, tree) = is_producible_fast(&a, &sys.tileset, 3).unwrap();
            assert!(ok);
            assert_eq!(validate(&tree.unwrap(), &a, &sys.tileset, 3), Ok(()));
            assert!(!is_producible_fast(&a, &sys.tileset, 4).unwrap().0 || n == 1);
        }
    }

    #[test]
    fn disconnected_binding_graph_is_not_producible() {
        let ts = tileset_from_specs(&[("A", ["-", "-", "-", "-"])]).unwrap();
        let a = Assembly::new([(p(0, 0), TileId(0)), (p(1, 0), TileId(0))]).unwrap();
        assert!(!is_producible_fast(&a, &ts, 1).unwrap().0);
        assert!(!is_producible_naive(&a, &ts, 1).unwrap().0);
    }

    #[test]
    fn unknown_tile_is_an_error() {
        let ts = tileset_from_specs(&[("A", ["-", "-", "-", "-"])]).unwrap();
        let a = Assembly::single(p(0, 0), TileId(3));
        assert_eq!(is_producible_fast(&a, &ts, 1), Err(Error::UnknownTile(3)));
        assert_eq!(is_producible_naive(&a, &ts, 1), Err(Error::UnknownTile(3)));
    }

    #[test]
    fn replay_examples() {
        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "g:1"])]).unwrap();
        let single = Assembly::single(p(0, 0), TileId(0));
        assert_eq!(
            replay_merge_log(&single, &MergeLog::default()).unwrap(),
            AssemblyTree::leaf(p(0, 0), TileId(0))
        );
        let dom = Assembly::new([(p(0, 0), TileId(0)), (p(1, 0), TileId(0))]).unwrap();
        let log = MergeLog {
            steps: vec![MergeStep {
                survivor: 0,
                absorbed: 1,
                seam: 1,
            }],
        };
        let t = replay_merge_log(&dom, &log).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(validate(&t, &dom, &ts, 1), Ok(()));
        assert!(replay_merge_log(&dom, &MergeLog::default()).is_err());
        let bad = MergeLog {
            steps: vec![MergeStep {
                survivor: 0,
                absorbed: 7,
                seam: 1,
            }],
        };
        assert!(matches!(replay_merge_log(&dom, &bad), Err(Error::MalformedLog(_))));
        let twice = MergeLog {
            steps: vec![
                MergeStep {
                    survivor: 0,
                    absorbed: 1,
                    seam: 1,
                },
                MergeStep {
                    survivor: 0,
                    absorbed: 1,
                    seam: 1,
                },
            ],
        };
        assert!(matches!(replay_merge_log(&dom, &twice), Err(Error::MalformedLog(_))));
    }

    #[test]
    fn seams_tracked_exactly() {
        let (sys, a) = generate_square(6, 2);
        let g = BindingGraph::new(&a, &sys.tileset).unwrap();
        let mut cg = ComponentGraph::new(&g, TieBreak::Shuffled(9));
        while cg.component_count() > 1 {
            let (x, y, _) = cg.pop_max().unwrap();
            cg.merge(x, y);
            assert!(cg.check_seams(&g));
        }
    }

    #[test]
    fn fold_work_is_n_log_n_on_squares() {
        for side in [16u32, 32, 64] {
            let (sys, a) = generate_square(side, 1);
            let run = run_fast(
                &a,
                &sys.tileset,
                1,
                FastOptions {
                    build_tree: false,
                    ..Default::default()
                },
            )
            .unwrap();
            let n = a.len() as f64;
            assert!((run.counters.folds as f64) <= 4.0 * n * n.log2());
        }
    }
}
