//! Positions and assemblies on the integer lattice.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::tile::{Direction, TileId, TileSet};

/// A lattice point. Ordered row-major: by `y`, then by `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0, y: 0 };

    pub fn new(x: i32, y: i32) -> Self {
        Position { x, y }
    }

    /// The neighbor one step in direction `d`, or `None` at the edge of the
    /// coordinate range.
    pub fn step(self, d: Direction) -> Option<Position> {
        let (dx, dy) = d.offset();
        Some(Position {
            x: self.x.checked_add(dx)?,
            y: self.y.checked_add(dy)?,
        })
    }

    pub fn checked_add(self, v: Offset) -> Option<Position> {
        Some(Position {
            x: self.x.checked_add(v.dx)?,
            y: self.y.checked_add(v.dy)?,
        })
    }

    /// `self - other` as a vector; `None` if it does not fit in 32 bits.
    pub fn offset_from(self, other: Position) -> Option<Offset> {
        Some(Offset {
            dx: self.x.checked_sub(other.x)?,
            dy: self.y.checked_sub(other.y)?,
        })
    }

    pub fn is_adjacent(self, other: Position) -> bool {
        let dx = (self.x as i64 - other.x as i64).abs();
        let dy = (self.y as i64 - other.y as i64).abs();
        dx + dy == 1
    }

    /// Direction `d` with `self.step(d) == Some(other)`, if adjacent.
    pub fn direction_to(self, other: Position) -> Option<Direction> {
        Direction::ALL.into_iter().find(|&d| self.step(d) == Some(other))
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A translation vector. Ordered by `dy`, then `dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Offset {
    pub dx: i32,
    pub dy: i32,
}

impl Offset {
    pub const ZERO: Offset = Offset { dx: 0, dy: 0 };

    pub fn new(dx: i32, dy: i32) -> Self {
        Offset { dx, dy }
    }

    pub fn checked_neg(self) -> Option<Offset> {
        Some(Offset {
            dx: self.dx.checked_neg()?,
            dy: self.dy.checked_neg()?,
        })
    }
}

impl Ord for Offset {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dy, self.dx).cmp(&(other.dy, other.dx))
    }
}

impl PartialOrd for Offset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// A finite, nonempty placement of tiles whose domain is connected in the
/// full grid graph.
///
/// Cells are kept in row-major order, so a cell's index doubles as a dense
/// vertex id and index 0 is the row-major least position.
#[derive(Debug, Clone)]
pub struct Assembly {
    cells: Vec<(Position, TileId)>,
    index: HashMap<Position, u32>,
}

impl PartialEq for Assembly {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Assembly {}

impl Assembly {
    /// Builds an assembly, rejecting empty input, duplicate positions and
    /// disconnected domains.
    pub fn new<I>(cells: I) -> Result<Assembly>
    where
        I: IntoIterator<Item = (Position, TileId)>,
    {
        let a = Self::from_cells_unchecked_connectivity(cells)?;
        if !a.domain_connected() {
            return Err(Error::DisconnectedDomain);
        }
        Ok(a)
    }

    fn from_cells_unchecked_connectivity<I>(cells: I) -> Result<Assembly>
    where
        I: IntoIterator<Item = (Position, TileId)>,
    {
        let mut cells: Vec<(Position, TileId)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(Error::EmptyAssembly);
        }
        cells.sort_by_key(|c| c.0);
        if let Some(w) = cells.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicatePosition(w[0].0));
        }
        let index = cells.iter().enumerate().map(|(i, c)| (c.0, i as u32)).collect();
        Ok(Assembly { cells, index })
    }

    /// A one-tile assembly.
    pub fn single(p: Position, t: TileId) -> Assembly {
        Assembly::new([(p, t)]).expect("a single tile is a valid assembly")
    }

    fn domain_connected(&self) -> bool {
        let n = self.cells.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            let p = self.cells[i].0;
            for d in Direction::ALL {
                if let Some(j) = p.step(d).and_then(|q| self.index_of(q)) {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        count == n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Always false; assemblies are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> &[(Position, TileId)] {
        &self.cells
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.cells.iter().map(|c| c.0)
    }

    pub fn position(&self, i: usize) -> Position {
        self.cells[i].0
    }

    pub fn tile(&self, i: usize) -> TileId {
        self.cells[i].1
    }

    pub fn index_of(&self, p: Position) -> Option<usize> {
        self.index.get(&p).map(|&i| i as usize)
    }

    pub fn contains(&self, p: Position) -> bool {
        self.index.contains_key(&p)
    }

    pub fn tile_at(&self, p: Position) -> Option<TileId> {
        self.index_of(p).map(|i| self.cells[i].1)
    }

    /// Row-major least position.
    pub fn min_position(&self) -> Position {
        self.cells[0].0
    }

    /// Checks that every tile index refers to a tile of `ts`.
    pub fn check_tiles(&self, ts: &TileSet) -> Result<()> {
        match self.cells.iter().find(|c| !ts.contains(c.1)) {
            Some(c) => Err(Error::UnknownTile(c.1 .0)),
            None => Ok(()),
        }
    }

    pub fn translate(&self, v: Offset) -> Result<Assembly> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for &(p, t) in &self.cells {
            cells.push((p.checked_add(v).ok_or(Error::CoordinateOverflow)?, t));
        }
        // translation preserves row-major order and connectivity
        let index = cells.iter().enumerate().map(|(i, c)| (c.0, i as u32)).collect();
        Ok(Assembly { cells, index })
    }

    /// `true` iff the two assemblies agree on every shared position.
    pub fn consistent(&self, other: &Assembly) -> bool {
        self.first_conflict(other).is_none()
    }

    fn first_conflict(&self, other: &Assembly) -> Option<Position> {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .cells
            .iter()
            .find(|&&(p, t)| matches!(large.tile_at(p), Some(u) if u != t))
            .map(|c| c.0)
    }

    pub fn overlap(&self, other: &Assembly) -> Vec<Position> {
        self.cells.iter().filter(|c| other.contains(c.0)).map(|c| c.0).collect()
    }

    /// The union of two consistent assemblies. Fails on the first
    /// conflicting position, or if the combined domain is disconnected.
    pub fn union(&self, other: &Assembly) -> Result<Assembly> {
        if let Some(p) = self.first_conflict(other) {
            return Err(Error::Conflict(p));
        }
        let cells = self
            .cells
            .iter()
            .copied()
            .chain(other.cells.iter().copied().filter(|c| !self.contains(c.0)));
        Assembly::new(cells)
    }

    /// `self ⊑ other`.
    pub fn is_subassembly_of(&self, other: &Assembly) -> bool {
        self.len() <= other.len() && self.cells.iter().all(|&(p, t)| other.tile_at(p) == Some(t))
    }

    /// Least offset `v` (by `dy`, then `dx`) with `self + v ⊑ host`.
    pub fn find_embedding(&self, host: &Assembly) -> Option<Offset> {
        if self.len() > host.len() {
            return None;
        }
        let (anchor, anchor_tile) = self.cells[0];
        // host cells are row-major, so the first hit is the least offset
        host.cells
            .iter()
            .filter(|c| c.1 == anchor_tile)
            .filter_map(|&(p, _)| p.offset_from(anchor))
            .find(|&v| {
                self.cells
                    .iter()
                    .all(|&(q, t)| q.checked_add(v).and_then(|r| host.tile_at(r)) == Some(t))
            })
    }

    /// The restriction of `self` to the cells with the given indices, which
    /// must induce a connected domain.
    pub fn restrict(&self, indices: &[usize]) -> Result<Assembly> {
        Assembly::new(indices.iter().map(|&i| self.cells[i]))
    }
}
