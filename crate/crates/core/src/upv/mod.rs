//! Unique production verification at temperature 1, for seeded and
//! hierarchical systems.

mod biconnected;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::assembly::{Assembly, Position};
use crate::binding::BindingGraph;
use crate::error::{Error, Result};
use crate::tile::{Direction, GlueId, TileId, TileSet};

pub use biconnected::{BiconnectedDecomposition, Block, PrecedenceMap};

/// Tiles presenting each positive glue on each side.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GlueIndex {
    map: BTreeMap<(Direction, GlueId), BTreeSet<TileId>>,
}

impl GlueIndex {
    pub fn tiles(&self, d: Direction, g: GlueId) -> Option<&BTreeSet<TileId>> {
        self.map.get(&(d, g))
    }

    /// Some tile other than `except` with glue `g` on side `d`.
    pub fn alternative(&self, d: Direction, g: GlueId, except: TileId) -> Option<TileId> {
        self.tiles(d, g)?.iter().copied().find(|&t| t != except)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

pub fn build_glue_index(ts: &TileSet) -> GlueIndex {
    let mut map: BTreeMap<_, BTreeSet<TileId>> = BTreeMap::new();
    for t in ts.tile_ids() {
        for d in Direction::ALL {
            let g = ts.glue(t, d);
            if g.strength > 0 {
                map.entry((d, g.label)).or_default().insert(t);
            }
        }
    }
    GlueIndex { map }
}

/// Why an assembly is not the unique terminal assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpvDiagnostic {
    /// `alternative` can attach at `position` by binding to the neighbor in
    /// direction `via`, before the tile α places there.
    Alternative {
        position: Position,
        via: Direction,
        alternative: TileId,
    },
    /// A tile type that never occurs in α; as a lone tile it is producible
    /// and does not embed.
    UnusedTileType(TileId),
    /// Seeded check failed at this occurrence of `seed`.
    Seeded {
        seed: TileId,
        anchor: Position,
        position: Position,
        via: Direction,
        alternative: TileId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpvVerdict {
    Unique,
    /// Binding graph disconnected.
    NotProducible,
    /// A positive glue faces an empty position.
    NotTerminal {
        position: Position,
        direction: Direction,
    },
    NotUnique(UpvDiagnostic),
}

impl UpvVerdict {
    pub fn is_unique(&self) -> bool {
        matches!(self, UpvVerdict::Unique)
    }
}

impl fmt::Display for UpvVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpvVerdict::Unique => write!(f, "unique"),
            UpvVerdict::NotProducible => write!(f, "not-producible"),
            UpvVerdict::NotTerminal { .. } => write!(f, "not-terminal"),
            UpvVerdict::NotUnique(_) => write!(f, "not-unique"),
        }
    }
}

/// How [`upv_hier_t1_with`] decides uniqueness once α is known to use every
/// tile type and to be connected and terminal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum HierMethod {
    /// Exact: every one-tile deviation from α that some producible assembly
    /// can make must still embed in α.
    #[default]
    Exact,
    /// One seeded check per tile type, anchored at its row-major least
    /// occurrence.
    SeededLeast,
    /// One seeded check per occurrence of every tile type; all must pass.
    SeededEvery,
}

fn check_inputs(ts: &TileSet, a: &Assembly) -> Result<()> {
    if !ts.is_normalized() {
        return Err(Error::NotNormalized);
    }
    a.check_tiles(ts)
}

fn first_exposed_glue(ts: &TileSet, a: &Assembly, g: &BindingGraph) -> Option<UpvVerdict> {
    for v in 0..a.len() {
        for d in Direction::ALL {
            if g.grid_neighbor(v as u32, d).is_none() && !ts.glue(a.tile(v), d).label.is_null() {
                return Some(UpvVerdict::NotTerminal {
                    position: a.position(v),
                    direction: d,
                });
            }
        }
    }
    None
}

/// The alternative-attachment check for one seed vertex. Assumes the graph
/// is connected and α terminal.
fn seeded_alternatives(
    ts: &TileSet,
    index: &GlueIndex,
    a: &Assembly,
    g: &BindingGraph,
    seed: u32,
) -> Result<Option<(Position, Direction, TileId)>> {
    let pm = PrecedenceMap::new(g, seed)?;
    for p in 0..a.len() as u32 {
        for d in Direction::ALL {
            let Some(q) = g.grid_neighbor(p, d) else { continue };
            if pm.precedes(p, d) {
                continue;
            }
            let facing = ts.tile(a.tile(q as usize)).side(d.opposite());
            if facing.is_null() {
                continue;
            }
            if let Some(t) = index.alternative(d, facing, a.tile(p as usize)) {
                return Ok(Some((a.position(p as usize), d, t)));
            }
        }
    }
    Ok(None)
}

/// Whether the seeded system with seed tile `seed` placed at `anchor`
/// uniquely produces `a` at temperature 1.
pub fn upv_seeded_t1(ts: &TileSet, seed: TileId, a: &Assembly, anchor: Position) -> Result<UpvVerdict> {
    check_inputs(ts, a)?;
    if !ts.contains(seed) {
        return Err(Error::UnknownTile(seed.0));
    }
    let v = a.index_of(anchor).ok_or(Error::AnchorMissing(anchor))?;
    if a.tile(v) != seed {
        return Err(Error::AnchorWrongTile {
            position: anchor,
            expected: seed.0,
            found: a.tile(v).0,
        });
    }
    let g = BindingGraph::new(a, ts)?;
    if !g.is_connected() {
        return Ok(UpvVerdict::NotProducible);
    }
    if let Some(verdict) = first_exposed_glue(ts, a, &g) {
        return Ok(verdict);
    }
    let index = build_glue_index(ts);
    Ok(match seeded_alternatives(ts, &index, a, &g, v as u32)? {
        Some((position, via, alternative)) => UpvVerdict::NotUnique(UpvDiagnostic::Alternative {
            position,
            via,
            alternative,
        }),
        None => UpvVerdict::Unique,
    })
}

/// Looks for a producible assembly that does not embed in α, assuming α is
/// connected and terminal.
///
/// Take such an assembly of least size and drop a leaf of a spanning tree of
/// its binding graph. The rest embeds in α, so the counterexample is some
/// connected part of α containing a tile `y`, plus a tile `t != α(x)` at a
/// neighbor `x` of `y` that `t` binds to. Growing the part only makes
/// embedding harder, so it suffices to test the largest part: the component
/// of `y` once `x` is removed. That part is all of α but `x` unless `x` is a
/// cut vertex, and then nothing of α's size but α embeds. Likewise when
/// `α(y)` occurs only once, the embedding is forced to be the identity.
fn hier_alternatives(
    ts: &TileSet,
    index: &GlueIndex,
    a: &Assembly,
    g: &BindingGraph,
    occurrences: &[Vec<u32>],
) -> Result<Option<(Position, Direction, TileId)>> {
    let cuts = BiconnectedDecomposition::new(g, 0)?.is_cut;
    for y in 0..a.len() as u32 {
        let ty = a.tile(y as usize);
        for d in Direction::ALL {
            let glue = ts.tile(ty).side(d);
            if glue.is_null() {
                continue;
            }
            let x = g.grid_neighbor(y, d).expect("terminal: a positive glue faces a tile");
            let tx = a.tile(x as usize);
            let Some(alts) = index.tiles(d.opposite(), glue) else {
                continue;
            };
            for &t in alts.iter().filter(|&&t| t != tx) {
                let found = (a.position(x as usize), d.opposite(), t);
                if !cuts[x as usize] || occurrences[ty.index()].len() == 1 {
                    return Ok(Some(found));
                }
                let part = g.reachable_from(y, Some(x));
                let (py, px) = (a.position(y as usize), a.position(x as usize));
                let embeds = occurrences[ty.index()].iter().any(|&o| {
                    let Some(v) = a.position(o as usize).offset_from(py) else {
                        return false;
                    };
                    let at = |p: Position| p.checked_add(v).and_then(|q| a.tile_at(q));
                    at(px) == Some(t)
                        && part
                            .iter()
                            .enumerate()
                            .filter(|&(_, &inside)| inside)
                            .all(|(c, _)| at(a.position(c)) == Some(a.tile(c)))
                });
                if !embeds {
                    return Ok(Some(found));
                }
            }
        }
    }
    Ok(None)
}

/// Whether the hierarchical system over `ts` at temperature 1 uniquely
/// produces `a`.
pub fn upv_hier_t1(ts: &TileSet, a: &Assembly) -> Result<UpvVerdict> {
    upv_hier_t1_with(ts, a, HierMethod::Exact)
}

pub fn upv_hier_t1_with(ts: &TileSet, a: &Assembly, method: HierMethod) -> Result<UpvVerdict> {
    check_inputs(ts, a)?;
    let mut occurrences: Vec<Vec<u32>> = vec![Vec::new(); ts.len()];
    for (v, &(_, t)) in a.cells().iter().enumerate() {
        occurrences[t.index()].push(v as u32);
    }
    if let Some(t) = occurrences.iter().position(Vec::is_empty) {
        return Ok(UpvVerdict::NotUnique(UpvDiagnostic::UnusedTileType(TileId(t as u32))));
    }
    let g = BindingGraph::new(a, ts)?;
    if !g.is_connected() {
        return Ok(UpvVerdict::NotProducible);
    }
    if let Some(verdict) = first_exposed_glue(ts, a, &g) {
        return Ok(verdict);
    }
    let index = build_glue_index(ts);
    if method == HierMethod::Exact {
        return Ok(match hier_alternatives(ts, &index, a, &g, &occurrences)? {
            Some((position, via, alternative)) => UpvVerdict::NotUnique(UpvDiagnostic::Alternative {
                position,
                via,
                alternative,
            }),
            None => UpvVerdict::Unique,
        });
    }
    for (t, occ) in occurrences.iter().enumerate() {
        let anchors = match method {
            HierMethod::SeededEvery => &occ[..],
            _ => &occ[..1],
        };
        for &v in anchors {
            if let Some((position, via, alternative)) = seeded_alternatives(ts, &index, a, &g, v)? {
                return Ok(UpvVerdict::NotUnique(UpvDiagnostic::Seeded {
                    seed: TileId(t as u32),
                    anchor: a.position(v as usize),
                    position,
                    via,
                    alternative,
                }));
            }
        }
    }
    Ok(UpvVerdict::Unique)
}

/// Whether removing `p` from the binding graph separates `q` from `seed`.
pub fn precedes(a: &Assembly, ts: &TileSet, seed: Position, p: Position, q: Position) -> Result<bool> {
    let idx = |x: Position| a.index_of(x).map(|i| i as u32).ok_or(Error::PositionNotInAssembly(x));
    let (s, p, q) = (idx(seed)?, idx(p)?, idx(q)?);
    let g = BindingGraph::new(a, ts)?;
    let dec = BiconnectedDecomposition::new(&g, s)?;
    Ok(p != q && dec.precedes(p, q))
}

/// [`PrecedenceMap`] of `a` seeded at `seed`.
pub fn precedes_map(a: &Assembly, ts: &TileSet, seed: Position) -> Result<PrecedenceMap> {
    let s = a.index_of(seed).ok_or(Error::PositionNotInAssembly(seed))?;
    let g = BindingGraph::new(a, ts)?;
    PrecedenceMap::new(&g, s as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tile::tileset_from_specs;

    fn asm(ts: &TileSet, cells: &[(i32, i32, &str)]) -> Assembly {
        Assembly::new(
            cells
                .iter()
                .map(|&(x, y, n)| (Position::new(x, y), ts.tile_by_name(n).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn glue_index_lookup() {
        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "-"]), ("B", ["-", "-", "-", "g:1"])]).unwrap();
        let idx = build_glue_index(&ts);
        let g = ts.label_by_name("g").unwrap();
        assert_eq!(
            idx.tiles(Direction::E, g).unwrap().iter().copied().collect::<Vec<_>>(),
            vec![TileId(0)]
        );
        assert!(idx.tiles(Direction::N, g).is_none());
        assert!(idx.tiles(Direction::N, GlueId::NULL).is_none());
        assert_eq!(idx.len(), 2);
    }

    #[test]
    fn path_and_cycle_precedence() {
        let ts = tileset_from_specs(&[("X", ["g:1", "g:1", "g:1", "g:1"])]).unwrap();
        let path = asm(&ts, &[(0, 0, "X"), (1, 0, "X"), (2, 0, "X")]);
        let (s, a, b) = (Position::new(0, 0), Position::new(1, 0), Position::new(2, 0));
        assert!(precedes(&path, &ts, s, a, b).unwrap());
        assert!(!precedes(&path, &ts, s, b, a).unwrap());
        let pm = precedes_map(&path, &ts, s).unwrap();
        assert!(pm.precedes(1, Direction::E));
        assert!(!pm.precedes(2, Direction::W));
        assert!(pm.precedes(0, Direction::E));

        let cycle = asm(&ts, &[(0, 0, "X"), (1, 0, "X"), (0, 1, "X"), (1, 1, "X")]);
        let pm = precedes_map(&cycle, &ts, s).unwrap();
        for v in 1..4u32 {
            for d in Direction::ALL {
                assert!(!pm.precedes(v, d));
            }
        }
        assert!(pm.decomposition.is_cut.iter().all(|&c| !c));
        assert_eq!(pm.decomposition.blocks.len(), 1);
    }

    #[test]
    fn precedes_rejects_outside_positions() {
        let ts = tileset_from_specs(&[("X", ["-", "-", "-", "-"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "X")]);
        let o = Position::ORIGIN;
        assert_eq!(
            precedes(&a, &ts, o, Position::new(5, 5), o),
            Err(Error::PositionNotInAssembly(Position::new(5, 5)))
        );
    }

    #[test]
    fn seeded_examples() {
        let ts = tileset_from_specs(&[("s", ["-", "-", "-", "-"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "s")]);
        assert_eq!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::ORIGIN),
            Ok(UpvVerdict::Unique)
        );

        let ts = tileset_from_specs(&[("s", ["-", "g:1", "-", "-"]), ("t", ["-", "-", "-", "g:1"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "s"), (1, 0, "t")]);
        assert_eq!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::ORIGIN),
            Ok(UpvVerdict::Unique)
        );

        let ts = tileset_from_specs(&[
            ("s", ["-", "g:1", "-", "-"]),
            ("t", ["-", "-", "-", "g:1"]),
            ("u", ["-", "-", "-", "g:1"]),
        ])
        .unwrap();
        let a = asm(&ts, &[(0, 0, "s"), (1, 0, "t")]);
        assert_eq!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::ORIGIN),
            Ok(UpvVerdict::NotUnique(UpvDiagnostic::Alternative {
                position: Position::new(1, 0),
                via: Direction::W,
                alternative: TileId(2),
            }))
        );
    }

    #[test]
    fn seeded_errors() {
        let ts = tileset_from_specs(&[("s", ["-", "g:1", "-", "-"]), ("t", ["-", "-", "-", "g:1"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "s"), (1, 0, "t")]);
        assert_eq!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::new(3, 3)),
            Err(Error::AnchorMissing(Position::new(3, 3)))
        );
        assert!(matches!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::new(1, 0)),
            Err(Error::AnchorWrongTile { .. })
        ));
        // g on N of u never meets a matching S glue
        let raw = tileset_from_specs(&[("s", ["h:1", "-", "-", "-"]), ("u", ["-", "-", "-", "-"])]).unwrap();
        let single = asm(&raw, &[(0, 0, "s")]);
        assert_eq!(
            upv_seeded_t1(&raw, TileId(0), &single, Position::ORIGIN),
            Err(Error::NotNormalized)
        );
    }

    #[test]
    fn seeded_not_terminal_and_not_producible() {
        let ts = tileset_from_specs(&[("s", ["-", "g:1", "-", "-"]), ("t", ["-", "-", "-", "g:1"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "s")]);
        assert_eq!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::ORIGIN),
            Ok(UpvVerdict::NotTerminal {
                position: Position::ORIGIN,
                direction: Direction::E
            })
        );
        let ts = tileset_from_specs(&[("s", ["-", "-", "-", "-"]), ("t", ["-", "-", "-", "-"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "s"), (1, 0, "t")]);
        assert_eq!(
            upv_seeded_t1(&ts, TileId(0), &a, Position::ORIGIN),
            Ok(UpvVerdict::NotProducible)
        );
    }

    #[test]
    fn hierarchical_examples() {
        let ts = tileset_from_specs(&[("A", ["-", "-", "-", "-"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "A")]);
        assert_eq!(upv_hier_t1(&ts, &a), Ok(UpvVerdict::Unique));

        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "-"]), ("B", ["-", "-", "-", "g:1"])]).unwrap();
        let a = asm(&ts, &[(0, 0, "A"), (1, 0, "B")]);
        assert_eq!(upv_hier_t1(&ts, &a), Ok(UpvVerdict::Unique));
        let lone = asm(&ts, &[(0, 0, "A")]);
        assert_eq!(
            upv_hier_t1(&ts, &lone),
            Ok(UpvVerdict::NotUnique(UpvDiagnostic::UnusedTileType(TileId(1))))
        );

        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "g:1"])]).unwrap();
        for n in 1..5 {
            let row = Assembly::new((0..n).map(|x| (Position::new(x, 0), TileId(0)))).unwrap();
            assert!(matches!(upv_hier_t1(&ts, &row), Ok(UpvVerdict::NotTerminal { .. })));
        }
    }
}
