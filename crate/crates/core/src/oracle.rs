//! Brute-force reference implementations. Exponential and slow on purpose:
//! each one follows a definition directly so the fast algorithms can be
//! checked against it.
//!
//! `upv_hier_oracle` uses a bounded search. Suppose some producible assembly
//! does not embed in α, and take one of minimal size. Its two children are
//! smaller producibles, so they embed in α and have at most |α| tiles each.
//! Either it has at most |α| tiles itself, in which case enumeration to size
//! |α| already finds it, or it comes from joining two enumerated assemblies.
//! So enumerating to |α| and then trying every join of two enumerated
//! assemblies finds a counterexample whenever one exists.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use crate::assembly::{Assembly, Offset, Position};
use crate::assembly_tree::{DivisionNode, HierarchicalDivision};
use crate::binding::BindingGraph;
use crate::error::{Error, Result};
use crate::tile::{Direction, TileId, TileSet};

pub const PRODUCIBLE_ORACLE_LIMIT: usize = 20;
pub const SEEDED_ORACLE_LIMIT: usize = 16;
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;

fn cap(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::SizeCap { what, size, limit })
    } else {
        Ok(())
    }
}

/// Whether some assembly tree builds `a` at temperature `tau`.
///
/// Dynamic program over subsets of the domain: a subset is buildable if it
/// is a single tile, or splits into two buildable parts whose seam has
/// strength at least `tau`.
pub fn producible_oracle(a: &Assembly, ts: &TileSet, tau: u32) -> Result<bool> {
    let n = a.len();
    cap("assembly size", n, PRODUCIBLE_ORACLE_LIMIT)?;
    let g = BindingGraph::new(a, ts)?;
    let full = (1usize << n) - 1;

    // inner[m]: total bond strength inside m
    let mut inner = vec![0u64; full + 1];
    for m in 1..=full {
        let v = m.trailing_zeros();
        let rest = m & (m - 1);
        let mut w = inner[rest];
        for (u, weight) in g.neighbors(v) {
            if rest >> u & 1 == 1 {
                w += weight as u64;
            }
        }
        inner[m] = w;
    }

    let mut buildable = vec![false; full + 1];
    for m in 1..=full {
        if m & (m - 1) == 0 {
            buildable[m] = true;
            continue;
        }
        let low = m & m.wrapping_neg();
        let rest = m ^ low;
        // parts containing the lowest element, excluding m itself
        let mut s = rest;
        loop {
            let part = s | low;
            if part != m {
                let other = m ^ part;
                if buildable[part] && buildable[other] && inner[m] - inner[part] - inner[other] >= tau as u64 {
                    buildable[m] = true;
                    break;
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
    }
    Ok(buildable[full])
}

/// An assembly translated so its row-major least position is the origin.
#[derive(Debug, Clone)]
pub struct CanonicalAssembly(Assembly);

impl CanonicalAssembly {
    pub fn new(a: &Assembly) -> Self {
        let min = a.min_position();
        let shift = Offset::new(-min.x, -min.y);
        CanonicalAssembly(a.translate(shift).expect("shifting toward the origin cannot overflow"))
    }

    pub fn assembly(&self) -> &Assembly {
        &self.0
    }

    pub fn into_assembly(self) -> Assembly {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl PartialEq for CanonicalAssembly {
    fn eq(&self, other: &Self) -> bool {
        self.0.cells() == other.0.cells()
    }
}

impl Eq for CanonicalAssembly {}

impl Hash for CanonicalAssembly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.cells().hash(state);
    }
}

impl PartialOrd for CanonicalAssembly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalAssembly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), self.0.cells()).cmp(&(other.0.len(), other.0.cells()))
    }
}

/// Every placement of `b` next to `a` without overlap whose seam has
/// strength at least `tau`, as the combined assembly.
fn stable_joins(ts: &TileSet, tau: u32, a: &Assembly, b: &Assembly) -> Vec<Assembly> {
    let mut offsets = BTreeSet::new();
    for &(pa, _) in a.cells() {
        for d in Direction::ALL {
            let Some(target) = pa.step(d) else { continue };
            for &(pb, _) in b.cells() {
                if let Some(v) = target.offset_from(pb) {
                    offsets.insert(v);
                }
            }
        }
    }
    let mut out = Vec::new();
    'offsets: for v in offsets {
        let mut seam = 0u64;
        let mut moved = Vec::with_capacity(b.len());
        for &(pb, t) in b.cells() {
            let Some(p) = pb.checked_add(v) else { continue 'offsets };
            if a.contains(p) {
                continue 'offsets;
            }
            for d in Direction::ALL {
                if let Some(u) = p.step(d).and_then(|q| a.tile_at(q)) {
                    seam += ts.bond(t, d, u) as u64;
                }
            }
            moved.push((p, t));
        }
        if seam >= tau as u64 {
            let cells = a.cells().iter().copied().chain(moved);
            out.push(Assembly::new(cells).expect("adjacent parts form a connected domain"));
        }
    }
    out
}

enum Closure {
    Complete(Vec<CanonicalAssembly>),
    Rejected,
}

/// Closure of the singletons under stable joins, up to `max_size` tiles.
/// `keep` sees every new assembly within the bound; returning false stops the
/// search, as does any join beyond the bound when `reject_oversize` is set.
/// Otherwise joins beyond the bound are not built at all.
fn closure(
    ts: &TileSet,
    tau: u32,
    max_size: usize,
    limit: usize,
    mut keep: impl FnMut(&Assembly) -> bool,
    reject_oversize: bool,
) -> Result<Closure> {
    let mut all: Vec<CanonicalAssembly> = Vec::new();
    let mut seen: HashSet<CanonicalAssembly> = HashSet::new();
    for t in ts.tile_ids() {
        let c = CanonicalAssembly::new(&Assembly::single(Position::ORIGIN, t));
        if !keep(c.assembly()) {
            return Ok(Closure::Rejected);
        }
        seen.insert(c.clone());
        all.push(c);
    }
    let mut i = 0;
    while i < all.len() {
        for j in 0..=i {
            let (a, b) = (all[i].assembly(), all[j].assembly());
            if a.len() + b.len() > max_size {
                if reject_oversize && !stable_joins(ts, tau, a, b).is_empty() {
                    return Ok(Closure::Rejected);
                }
                continue;
            }
            for joined in stable_joins(ts, tau, a, b) {
                let c = CanonicalAssembly::new(&joined);
                if seen.contains(&c) {
                    continue;
                }
                if !keep(c.assembly()) {
                    return Ok(Closure::Rejected);
                }
                seen.insert(c.clone());
                all.push(c);
                cap("producible assemblies", all.len(), limit)?;
            }
        }
        i += 1;
    }
    Ok(Closure::Complete(all))
}

/// All producible assemblies of the hierarchical system `(ts, tau)` with at
/// most `max_size` tiles, up to translation. Fails rather than truncating
/// when more than `limit` are found.
pub fn enumerate_producible(
    ts: &TileSet,
    tau: u32,
    max_size: usize,
    limit: usize,
) -> Result<BTreeSet<CanonicalAssembly>> {
    match closure(ts, tau, max_size, limit, |_| true, false)? {
        Closure::Complete(all) => Ok(all.into_iter().collect()),
        Closure::Rejected => unreachable!("nothing is rejected"),
    }
}

/// No tile type can attach at temperature 1 to an empty neighbor of `a`.
fn terminal_t1(ts: &TileSet, a: &Assembly) -> bool {
    for &(p, _) in a.cells() {
        for d in Direction::ALL {
            let Some(q) = p.step(d) else { continue };
            if a.contains(q) {
                continue;
            }
            for t in ts.tile_ids() {
                let bound = Direction::ALL.iter().any(|&e| {
                    q.step(e)
                        .and_then(|r| a.tile_at(r))
                        .is_some_and(|u| ts.bond(t, e, u) > 0)
                });
                if bound {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether the hierarchical system `(ts, 1)` uniquely produces `a`: `a` is
/// producible and terminal, and every producible assembly embeds in it.
pub fn upv_hier_oracle(ts: &TileSet, a: &Assembly) -> Result<bool> {
    upv_hier_oracle_with_limit(ts, a, DEFAULT_ENUMERATION_CAP)
}

pub fn upv_hier_oracle_with_limit(ts: &TileSet, a: &Assembly, limit: usize) -> Result<bool> {
    a.check_tiles(ts)?;
    let target = CanonicalAssembly::new(a);
    let outcome = closure(ts, 1, a.len(), limit, |b| b.find_embedding(a).is_some(), true)?;
    let Closure::Complete(all) = outcome else {
        return Ok(false);
    };
    Ok(all.contains(&target) && terminal_t1(ts, a))
}

/// Whether the seeded system `(ts, seed, 1)`, with the seed placed at
/// `anchor`, uniquely produces `a`: single-tile accretion from the seed
/// never leaves `a`, and reaches all of it.
pub fn upv_seeded_oracle(ts: &TileSet, seed: TileId, a: &Assembly, anchor: Position) -> Result<bool> {
    let n = a.len();
    cap("assembly size", n, SEEDED_ORACLE_LIMIT)?;
    a.check_tiles(ts)?;
    let s = a.index_of(anchor).ok_or(Error::AnchorMissing(anchor))?;
    if a.tile(s) != seed {
        return Err(Error::AnchorWrongTile {
            position: anchor,
            expected: seed.0,
            found: a.tile(s).0,
        });
    }
    let full = (1u32 << n) - 1;
    let mut seen = HashSet::from([1u32 << s]);
    let mut queue = VecDeque::from([1u32 << s]);
    while let Some(m) = queue.pop_front() {
        let placed = |q: Position| a.index_of(q).filter(|&i| m >> i & 1 == 1).map(|i| a.tile(i));
        let mut frontier = BTreeSet::new();
        for i in (0..n).filter(|&i| m >> i & 1 == 1) {
            for d in Direction::ALL {
                if let Some(q) = a.position(i).step(d) {
                    if placed(q).is_none() {
                        frontier.insert(q);
                    }
                }
            }
        }
        for q in frontier {
            for t in ts.tile_ids() {
                let bound = Direction::ALL
                    .iter()
                    .any(|&e| q.step(e).and_then(placed).is_some_and(|u| ts.bond(t, e, u) > 0));
                if !bound {
                    continue;
                }
                match a.index_of(q) {
                    Some(i) if a.tile(i) == t => {
                        let next = m | 1 << i;
                        if seen.insert(next) {
                            queue.push_back(next);
                        }
                    }
                    _ => return Ok(false),
                }
            }
        }
    }
    Ok(seen.contains(&full))
}

/// Whether deleting `p` from the binding graph leaves `q` unreachable from
/// `seed`.
pub fn precedes_oracle(a: &Assembly, ts: &TileSet, seed: Position, p: Position, q: Position) -> Result<bool> {
    let idx = |x: Position| a.index_of(x).map(|i| i as u32).ok_or(Error::PositionNotInAssembly(x));
    let (s, p, q) = (idx(seed)?, idx(p)?, idx(q)?);
    let g = BindingGraph::new(a, ts)?;
    Ok(!g.reachable_from(s, Some(p))[q as usize])
}

#[derive(Debug, Clone)]
enum Shape {
    Leaf(usize),
    Join(Box<Shape>, Box<Shape>),
}

fn shapes(elements: &[usize]) -> Vec<Shape> {
    if elements.len() == 1 {
        return vec![Shape::Leaf(elements[0])];
    }
    let (first, rest) = (elements[0], &elements[1..]);
    let mut out = Vec::new();
    // the left part holds the first element; the right part is nonempty
    for mask in 0..(1usize << rest.len()) - 1 {
        let mut left = vec![first];
        let mut right = Vec::new();
        for (k, &x) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        for l in shapes(&left) {
            for r in shapes(&right) {
                out.push(Shape::Join(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

fn flatten(s: &Shape, nodes: &mut Vec<DivisionNode>) -> usize {
    let node = match s {
        Shape::Leaf(x) => DivisionNode::Leaf(*x),
        Shape::Join(l, r) => {
            let l = flatten(l, nodes);
            let r = flatten(r, nodes);
            DivisionNode::Join(l, r)
        }
    };
    nodes.push(node);
    nodes.len() - 1
}

/// Every hierarchical division of `{0, ..., n-1}`, with unordered children.
pub fn all_divisions(n: usize) -> Vec<HierarchicalDivision> {
    let elements: Vec<usize> = (0..n).collect();
    shapes(&elements)
        .iter()
        .map(|s| {
            let mut nodes = Vec::new();
            flatten(s, &mut nodes);
            HierarchicalDivision::new(nodes).expect("generated divisions are well formed")
        })
        .collect()
}

/// Every partition of `{0, ..., n-1}`, classes in order of least element.
pub fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(x: usize, n: usize, classes: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if x == n {
            out.push(classes.clone());
            return;
        }
        for c in 0..classes.len() {
            classes[c].push(x);
            grow(x + 1, n, classes, out);
            classes[c].pop();
        }
        classes.push(vec![x]);
        grow(x + 1, n, classes, out);
        classes.pop();
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::new(), &mut out);
    out
}
