//! Tile types, glues, and tile sets.
//!
//! Glue labels and tile names are interned to dense integer ids when a
//! [`TileSet`] is built, so every comparison on the verification paths is an
//! integer comparison. A label's strength is global to the set.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// One of the four unit directions on the square lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    N,
    E,
    S,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::N, Direction::E, Direction::S, Direction::W];

    /// Unit vector `(dx, dy)`.
    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::N => (0, 1),
            Direction::E => (1, 0),
            Direction::S => (0, -1),
            Direction::W => (-1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::N => Direction::S,
            Direction::E => Direction::W,
            Direction::S => Direction::N,
            Direction::W => Direction::E,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Direction {
        Direction::ALL[i]
    }

    pub fn letter(self) -> char {
        match self {
            Direction::N => 'N',
            Direction::E => 'E',
            Direction::S => 'S',
            Direction::W => 'W',
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Interned glue label. Id 0 is the null label `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlueId(pub u32);

impl GlueId {
    pub const NULL: GlueId = GlueId(0);

    pub fn is_null(self) -> bool {
        self == GlueId::NULL
    }
}

/// Index of a tile type within its [`TileSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileId(pub u32);

impl TileId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A glue as seen on a tile side: label plus the label's strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Glue {
    pub label: GlueId,
    pub strength: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileType {
    pub name: String,
    /// Glue labels indexed by [`Direction::index`].
    pub sides: [GlueId; 4],
}

impl TileType {
    pub fn side(&self, d: Direction) -> GlueId {
        self.sides[d.index()]
    }
}

/// A positive glue that was replaced by the null glue during normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NulledGlue {
    pub tile: TileId,
    pub direction: Direction,
    pub label: GlueId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSet {
    tiles: Vec<TileType>,
    labels: Vec<String>,
    strengths: Vec<u32>,
    tile_ids: HashMap<String, TileId>,
    label_ids: HashMap<String, GlueId>,
}

impl TileSet {
    pub fn builder() -> TileSetBuilder {
        TileSetBuilder::new()
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn tile_ids(&self) -> impl Iterator<Item = TileId> {
        (0..self.tiles.len() as u32).map(TileId)
    }

    pub fn tile(&self, id: TileId) -> &TileType {
        &self.tiles[id.index()]
    }

    pub fn get(&self, id: TileId) -> Option<&TileType> {
        self.tiles.get(id.index())
    }

    pub fn contains(&self, id: TileId) -> bool {
        id.index() < self.tiles.len()
    }

    pub fn tile_by_name(&self, name: &str) -> Option<TileId> {
        self.tile_ids.get(name).copied()
    }

    pub fn name(&self, id: TileId) -> &str {
        &self.tiles[id.index()].name
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, g: GlueId) -> &str {
        &self.labels[g.0 as usize]
    }

    pub fn label_by_name(&self, label: &str) -> Option<GlueId> {
        self.label_ids.get(label).copied()
    }

    pub fn strength(&self, g: GlueId) -> u32 {
        self.strengths[g.0 as usize]
    }

    pub fn glue(&self, t: TileId, d: Direction) -> Glue {
        let label = self.tiles[t.index()].side(d);
        Glue {
            label,
            strength: self.strength(label),
        }
    }

    /// Strength with which `t` binds to `u` placed one step in direction `d`
    /// from it; zero when they do not interact.
    pub fn bond(&self, t: TileId, d: Direction, u: TileId) -> u32 {
        let a = self.tiles[t.index()].side(d);
        let b = self.tiles[u.index()].side(d.opposite());
        if a == b {
            self.strength(a)
        } else {
            0
        }
    }

    /// `true` iff `t`'s glue facing `d` equals `u`'s glue facing back and is
    /// positive.
    pub fn interacts(&self, t: TileId, d: Direction, u: TileId) -> bool {
        self.bond(t, d, u) > 0
    }

    fn presented(&self) -> HashSet<(Direction, GlueId)> {
        let mut present = HashSet::new();
        for t in &self.tiles {
            for d in Direction::ALL {
                present.insert((d, t.side(d)));
            }
        }
        present
    }

    /// Positive glues facing `d` that appear on no tile facing `-d`.
    pub fn functionally_null_glues(&self) -> Vec<NulledGlue> {
        let present = self.presented();
        let mut out = Vec::new();
        for (i, t) in self.tiles.iter().enumerate() {
            for d in Direction::ALL {
                let g = t.side(d);
                if self.strength(g) > 0 && !present.contains(&(d.opposite(), g)) {
                    out.push(NulledGlue {
                        tile: TileId(i as u32),
                        direction: d,
                        label: g,
                    });
                }
            }
        }
        out
    }

    pub fn is_normalized(&self) -> bool {
        self.functionally_null_glues().is_empty()
    }

    /// Replaces every functionally null glue with the null glue and reports
    /// what was replaced. Labels stay interned even if no longer used.
    pub fn normalized_with_report(&self) -> (TileSet, Vec<NulledGlue>) {
        let nulled = self.functionally_null_glues();
        let mut out = self.clone();
        for n in &nulled {
            out.tiles[n.tile.index()].sides[n.direction.index()] = GlueId::NULL;
        }
        (out, nulled)
    }

    pub fn normalized(&self) -> TileSet {
        self.normalized_with_report().0
    }

    /// The same tiles listed in a different order: tile `i` of the result is
    /// tile `order[i]` of `self`.
    pub fn permuted(&self, order: &[TileId]) -> TileSet {
        let mut b = TileSetBuilder::new();
        for &t in order {
            let tile = self.tile(t);
            let sides = tile.sides.map(|g| {
                b.glue(self.label(g), self.strength(g))
                    .expect("labels of a valid tile set are consistent")
            });
            b.tile(&tile.name, sides)
                .expect("names of a valid tile set are distinct");
        }
        b.build().expect("permutation of a nonempty tile set")
    }
}

/// Normalizes a tile set by nulling its functionally null glues.
pub fn normalize_tileset(ts: &TileSet) -> TileSet {
    ts.normalized()
}

#[derive(Debug, Clone)]
pub struct TileSetBuilder {
    tiles: Vec<TileType>,
    labels: Vec<String>,
    strengths: Vec<u32>,
    tile_ids: HashMap<String, TileId>,
    label_ids: HashMap<String, GlueId>,
}

impl Default for TileSetBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl TileSetBuilder {
    pub fn new() -> Self {
        let mut label_ids = HashMap::new();
        label_ids.insert("-".to_string(), GlueId::NULL);
        TileSetBuilder {
            tiles: Vec::new(),
            labels: vec!["-".to_string()],
            strengths: vec![0],
            tile_ids: HashMap::new(),
            label_ids,
        }
    }

    /// Interns `label` with `strength`. The null label `-` always has
    /// strength 0, and any other label must be positive and keep the
    /// strength it was first given.
    pub fn glue(&mut self, label: &str, strength: u32) -> Result<GlueId> {
        if label == "-" {
            if strength != 0 {
                return Err(Error::InconsistentStrength {
                    label: label.to_string(),
                    first: 0,
                    second: strength,
                });
            }
            return Ok(GlueId::NULL);
        }
        if strength == 0 {
            return Err(Error::ZeroStrengthLabel(label.to_string()));
        }
        if let Some(&id) = self.label_ids.get(label) {
            let first = self.strengths[id.0 as usize];
            if first != strength {
                return Err(Error::InconsistentStrength {
                    label: label.to_string(),
                    first,
                    second: strength,
                });
            }
            return Ok(id);
        }
        let id = GlueId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.strengths.push(strength);
        self.label_ids.insert(label.to_string(), id);
        Ok(id)
    }

    /// Parses `-` or `label:strength` and interns it.
    pub fn glue_spec(&mut self, spec: &str) -> Result<GlueId> {
        if spec == "-" {
            return Ok(GlueId::NULL);
        }
        let bad = || Error::Parse {
            line: 0,
            message: format!("bad glue `{spec}`, expected `-` or `label:strength`"),
        };
        let (label, strength) = spec.rsplit_once(':').ok_or_else(bad)?;
        if label.is_empty() {
            return Err(bad());
        }
        let strength: u32 = strength.parse().map_err(|_| bad())?;
        self.glue(label, strength)
    }

    /// Adds a tile with sides in N, E, S, W order.
    pub fn tile(&mut self, name: &str, sides: [GlueId; 4]) -> Result<TileId> {
        if self.tile_ids.contains_key(name) {
            return Err(Error::DuplicateTileName(name.to_string()));
        }
        let id = TileId(self.tiles.len() as u32);
        self.tiles.push(TileType {
            name: name.to_string(),
            sides,
        });
        self.tile_ids.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds a tile whose sides (N, E, S, W) are given as glue specs.
    pub fn tile_spec(&mut self, name: &str, sides: [&str; 4]) -> Result<TileId> {
        let mut ids = [GlueId::NULL; 4];
        for (slot, spec) in ids.iter_mut().zip(sides) {
            *slot = self.glue_spec(spec)?;
        }
        self.tile(name, ids)
    }

    pub fn has_tile(&self, name: &str) -> bool {
        self.tile_ids.contains_key(name)
    }

    pub fn build(self) -> Result<TileSet> {
        if self.tiles.is_empty() {
            return Err(Error::NoTiles);
        }
        Ok(TileSet {
            tiles: self.tiles,
            labels: self.labels,
            strengths: self.strengths,
            tile_ids: self.tile_ids,
            label_ids: self.label_ids,
        })
    }
}

/// Shorthand for building a tile set from `(name, [N, E, S, W])` glue specs.
pub fn tileset_from_specs(specs: &[(&str, [&str; 4])]) -> Result<TileSet> {
    let mut b = TileSetBuilder::new();
    for (name, sides) in specs {
        b.tile_spec(name, *sides)?;
    }
    b.build()
}

/// A tile set together with a temperature and an optional seed tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSystem {
    pub tileset: TileSet,
    pub temperature: u32,
    pub seed: Option<TileId>,
}

impl TileSystem {
    pub fn new(tileset: TileSet, temperature: u32, seed: Option<TileId>) -> Result<Self> {
        if temperature == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "temperature must be positive".into(),
            });
        }
        if let Some(s) = seed {
            if !tileset.contains(s) {
                return Err(Error::UnknownTile(s.0));
            }
        }
        Ok(TileSystem {
            tileset,
            temperature,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions() {
        for d in Direction::ALL {
            assert_eq!(d.opposite().opposite(), d);
            let (x, y) = d.offset();
            let (ox, oy) = d.opposite().offset();
            assert_eq!((x + ox, y + oy), (0, 0));
        }
        let offsets: HashSet<_> = Direction::ALL.iter().map(|d| d.offset()).collect();
        assert_eq!(offsets.len(), 4);
    }

    #[test]
    fn interacts_examples() {
        let ts = tileset_from_specs(&[
            ("t", ["-", "g:1", "-", "-"]),
            ("u", ["-", "-", "-", "g:1"]),
            ("v", ["-", "-", "-", "h:1"]),
        ])
        .unwrap();
        let (t, u, v) = (TileId(0), TileId(1), TileId(2));
        assert!(ts.interacts(t, Direction::E, u));
        assert!(!ts.interacts(t, Direction::E, v));
        assert!(!ts.interacts(u, Direction::W, v));
        // null against null
        assert!(!ts.interacts(u, Direction::N, t));
    }

    #[test]
    fn label_strength_is_global() {
        let mut b = TileSetBuilder::new();
        b.tile_spec("A", ["g:1", "-", "-", "-"]).unwrap();
        let err = b.tile_spec("B", ["g:2", "-", "-", "-"]).unwrap_err();
        assert!(matches!(
            err,
            Error::InconsistentStrength {
                first: 1,
                second: 2,
                ..
            }
        ));
        assert!(matches!(b.glue("h", 0), Err(Error::ZeroStrengthLabel(_))));
        assert!(matches!(
            b.tile_spec("A", ["-", "-", "-", "-"]),
            Err(Error::DuplicateTileName(_))
        ));
        assert_eq!(TileSetBuilder::new().build(), Err(Error::NoTiles));
    }

    #[test]
    fn normalize_nulls_unmatched_glue() {
        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "-"])]).unwrap();
        let (n, report) = ts.normalized_with_report();
        assert_eq!(n.tile(TileId(0)).side(Direction::E), GlueId::NULL);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].direction, Direction::E);
        assert!(n.is_normalized());
    }

    #[test]
    fn normalize_keeps_matched_glue() {
        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "-"]), ("B", ["-", "-", "-", "g:1"])]).unwrap();
        assert!(ts.is_normalized());
        assert_eq!(ts.normalized(), ts);
    }

    #[test]
    fn normalize_all_null_is_fixed_point() {
        let ts = tileset_from_specs(&[("A", ["-", "-", "-", "-"])]).unwrap();
        assert_eq!(ts.normalized(), ts);
        // a glue matched only on the same side is still functionally null
        let ts = tileset_from_specs(&[("A", ["-", "g:1", "-", "-"]), ("B", ["-", "g:1", "-", "-"])]).unwrap();
        let n = ts.normalized();
        assert!(n.is_normalized());
        assert_eq!(n.normalized(), n);
        assert_eq!(n.tile(TileId(1)).side(Direction::E), GlueId::NULL);
    }

    #[test]
    fn normalization_preserves_interactions() {
        let ts = tileset_from_specs(&[
            ("A", ["a:1", "g:2", "b:1", "-"]),
            ("B", ["b:1", "-", "-", "g:2"]),
            ("C", ["-", "c:1", "a:1", "c:1"]),
        ])
        .unwrap();
        let n = ts.normalized();
        for t in ts.tile_ids() {
            for u in ts.tile_ids() {
                for d in Direction::ALL {
                    assert_eq!(ts.bond(t, d, u), n.bond(t, d, u));
                }
            }
        }
    }
}
