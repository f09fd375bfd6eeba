//! Instance generators: benchmark families and randomized corpora.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::assembly::{Assembly, Position};
use crate::tile::{Direction, GlueId, TileId, TileSet, TileSetBuilder, TileSystem};

/// An `width x height` rectangle where every tile has its own type and every
/// internal abutment carries its own glue label of strength `tau`.
pub fn generate_rectangle(width: u32, height: u32, tau: u32) -> (TileSystem, Assembly) {
    assert!(width > 0 && height > 0 && tau > 0);
    let mut b = TileSetBuilder::new();
    let mut cells = Vec::with_capacity((width * height) as usize);
    let (w, h) = (width as i32, height as i32);
    for y in 0..h {
        for x in 0..w {
            // vertical glue v_x_y joins (x,y) and (x,y+1); horizontal h_x_y
            // joins (x,y) and (x+1,y)
            let mut sides = [GlueId::NULL; 4];
            if y + 1 < h {
                sides[Direction::N.index()] = b.glue(&format!("v{x}_{y}"), tau).unwrap();
            }
            if x + 1 < w {
                sides[Direction::E.index()] = b.glue(&format!("h{x}_{y}"), tau).unwrap();
            }
            if y > 0 {
                sides[Direction::S.index()] = b.glue(&format!("v{x}_{}", y - 1), tau).unwrap();
            }
            if x > 0 {
                sides[Direction::W.index()] = b.glue(&format!("h{}_{y}", x - 1), tau).unwrap();
            }
            let id = b.tile(&format!("t{x}_{y}"), sides).unwrap();
            cells.push((Position::new(x, y), id));
        }
    }
    let ts = b.build().unwrap();
    let system = TileSystem::new(ts, tau, None).unwrap();
    (system, Assembly::new(cells).unwrap())
}

/// `n x n` square benchmark instance, producible at `tau` by construction.
pub fn generate_square(n: u32, tau: u32) -> (TileSystem, Assembly) {
    generate_rectangle(n, n, tau)
}

/// `1 x n` row benchmark instance.
pub fn generate_line(n: u32, tau: u32) -> (TileSystem, Assembly) {
    generate_rectangle(n, 1, tau)
}

/// A uniformly grown random polyomino with `n` cells containing the origin.
pub fn random_shape<R: Rng>(rng: &mut R, n: usize) -> Vec<Position> {
    assert!(n > 0);
    let mut cells = vec![Position::ORIGIN];
    let mut taken: HashSet<Position> = cells.iter().copied().collect();
    while cells.len() < n {
        let frontier: BTreeSet<Position> = cells
            .iter()
            .flat_map(|p| Direction::ALL.into_iter().filter_map(|d| p.step(d)))
            .filter(|q| !taken.contains(q))
            .collect();
        let frontier: Vec<_> = frontier.into_iter().collect();
        let q = *frontier.choose(rng).expect("a finite shape has a frontier");
        taken.insert(q);
        cells.push(q);
    }
    cells
}

/// Gives every cell of `shape` its own tile type. Each abutment binds with
/// probability `p_bind` through a fresh label of random strength in
/// `1..=max_strength`; otherwise it is a label mismatch or a null pair.
pub fn random_glues<R: Rng>(rng: &mut R, shape: &[Position], max_strength: u32, p_bind: f64) -> (TileSet, Assembly) {
    let mut sorted = shape.to_vec();
    sorted.sort();
    let index = |p: Position| sorted.binary_search(&p).ok();
    let mut sides: Vec<[String; 4]> = vec![std::array::from_fn(|_| String::from("-")); sorted.len()];
    let mut strengths = std::collections::HashMap::new();
    let mut fresh = 0usize;
    for (i, &p) in sorted.iter().enumerate() {
        for d in [Direction::N, Direction::E] {
            let Some(j) = p.step(d).and_then(index) else {
                continue;
            };
            let roll: f64 = rng.gen();
            if roll < p_bind {
                let label = format!("g{fresh}");
                fresh += 1;
                strengths.insert(label.clone(), rng.gen_range(1..=max_strength));
                sides[i][d.index()] = label.clone();
                sides[j][d.opposite().index()] = label;
            } else if roll < p_bind + (1.0 - p_bind) / 2.0 {
                for (k, dd) in [(i, d), (j, d.opposite())] {
                    let label = format!("g{fresh}");
                    fresh += 1;
                    strengths.insert(label.clone(), rng.gen_range(1..=max_strength));
                    sides[k][dd.index()] = label;
                }
            }
        }
    }
    let mut b = TileSetBuilder::new();
    let mut cells = Vec::with_capacity(sorted.len());
    for (i, &p) in sorted.iter().enumerate() {
        let mut ids = [GlueId::NULL; 4];
        for d in Direction::ALL {
            let label = &sides[i][d.index()];
            if label != "-" {
                ids[d.index()] = b.glue(label, strengths[label]).unwrap();
            }
        }
        let t = b.tile(&format!("t{i}"), ids).unwrap();
        cells.push((p, t));
    }
    (b.build().unwrap(), Assembly::new(cells).unwrap())
}

/// A random tile set of `n_tiles` types whose sides are null with
/// probability `p_null` and otherwise draw from `n_labels` labels of
/// strength 1. Not normalized.
pub fn random_tileset<R: Rng>(rng: &mut R, n_tiles: usize, n_labels: usize, p_null: f64) -> TileSet {
    let mut b = TileSetBuilder::new();
    for i in 0..n_tiles {
        let mut ids = [GlueId::NULL; 4];
        for slot in ids.iter_mut() {
            if !rng.gen_bool(p_null) {
                let l = rng.gen_range(0..n_labels);
                *slot = b.glue(&format!("l{l}"), 1).unwrap();
            }
        }
        b.tile(&format!("T{i}"), ids).unwrap();
    }
    b.build().unwrap()
}

/// Grows a temperature-1 assembly from `seed` at the origin by random
/// single-tile attachments, stopping when nothing can attach or after
/// `max_tiles` tiles.
pub fn random_seeded_growth<R: Rng>(rng: &mut R, ts: &TileSet, seed: TileId, max_tiles: usize) -> Assembly {
    let mut cells: Vec<(Position, TileId)> = vec![(Position::ORIGIN, seed)];
    let mut at: std::collections::HashMap<Position, TileId> = cells.iter().copied().collect();
    while cells.len() < max_tiles {
        let mut options = Vec::new();
        for &(p, t) in &cells {
            for d in Direction::ALL {
                let Some(q) = p.step(d) else { continue };
                if at.contains_key(&q) {
                    continue;
                }
                for u in ts.tile_ids() {
                    if ts.interacts(t, d, u) {
                        options.push((q, u));
                    }
                }
            }
        }
        options.sort();
        options.dedup();
        let Some(&(q, u)) = options.choose(rng) else {
            break;
        };
        cells.push((q, u));
        at.insert(q, u);
    }
    Assembly::new(cells).unwrap()
}

/// Random assembly over a fixed tile set: random shape, random tile per cell.
pub fn random_assembly_over<R: Rng>(rng: &mut R, ts: &TileSet, n: usize) -> Assembly {
    let shape = random_shape(rng, n);
    Assembly::new(
        shape
            .into_iter()
            .map(|p| (p, TileId(rng.gen_range(0..ts.len() as u32)))),
    )
    .unwrap()
}

/// All fixed polyominoes with exactly `n` cells, each anchored with its
/// row-major least cell at the origin.
pub fn fixed_polyominoes(n: usize) -> Vec<Vec<Position>> {
    let mut level: BTreeSet<Vec<Position>> = BTreeSet::new();
    level.insert(vec![Position::ORIGIN]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for shape in &level {
            for p in shape {
                for d in Direction::ALL {
                    let q = p.step(d).unwrap();
                    if shape.contains(&q) {
                        continue;
                    }
                    let mut grown = shape.clone();
                    grown.push(q);
                    grown.sort();
                    let base = grown[0];
                    let canon: Vec<Position> = grown
                        .iter()
                        .map(|c| Position::new(c.x - base.x, c.y - base.y))
                        .collect();
                    next.insert(canon);
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}
