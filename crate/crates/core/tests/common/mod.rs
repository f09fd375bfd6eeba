#![allow(dead_code)]

use rand::Rng;
use tam_core::gen::{random_glues, random_seeded_growth, random_shape, random_tileset};
use tam_core::{Assembly, TileId, TileSet};

/// A normalized temperature-1 system with at most four tile types and an
/// assembly of at most eight tiles over it.
pub fn upv_case<R: Rng>(rng: &mut R) -> (TileSet, Assembly) {
    match rng.gen_range(0..3) {
        0 => {
            // one type per cell, so uniqueness is common
            let n = rng.gen_range(1..=4);
            let shape = random_shape(rng, n);
            let (ts, a) = random_glues(rng, &shape, 1, 0.8);
            (ts.normalized(), a)
        }
        _ => {
            let n_tiles = rng.gen_range(1..=4);
            let n_labels = rng.gen_range(1..=3);
            let p_null = rng.gen_range(0.45..0.85);
            let ts = random_tileset(rng, n_tiles, n_labels, p_null).normalized();
            let seed = TileId(rng.gen_range(0..n_tiles as u32));
            let max = rng.gen_range(1..=8);
            let a = random_seeded_growth(rng, &ts, seed, max);
            (ts, a)
        }
    }
}
