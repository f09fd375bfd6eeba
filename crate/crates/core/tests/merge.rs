use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tam_core::assembly_tree::{merge_trees_with, MergeOptions};
use tam_core::gen::{generate_rectangle, random_glues, random_shape};
use tam_core::producible::{run_fast, FastOptions, TieBreak};
use tam_core::{is_producible_fast, merge_trees, validate, Assembly, Error};

/// Two windows of a producible host, each producible on its own.
fn overlapping_windows(seed: u64) -> Option<(tam_core::TileSet, Assembly, Assembly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=14);
    let shape = random_shape(&mut rng, n);
    let tau = rng.gen_range(1..=2);
    let (ts, host) = random_glues(&mut rng, &shape, 2, 0.95);
    let pick = |rng: &mut ChaCha8Rng| {
        let mut idx: Vec<usize> = (0..host.len()).collect();
        idx.shuffle(rng);
        let k = rng.gen_range(1..=host.len());
        idx.truncate(k);
        idx.sort_unstable();
        idx
    };
    for _ in 0..20 {
        let (ia, ib) = (pick(&mut rng), pick(&mut rng));
        if !ia.iter().any(|i| ib.contains(i)) {
            continue;
        }
        let (Ok(a), Ok(b)) = (host.restrict(&ia), host.restrict(&ib)) else {
            continue;
        };
        if is_producible_fast(&a, &ts, tau).unwrap().0 && is_producible_fast(&b, &ts, tau).unwrap().0 {
            return Some((ts, a, b, tau));
        }
    }
    None
}

proptest! {
    #[test]
    fn merged_tree_is_valid_and_keeps_alpha(seed in any::<u64>(), shuffle in any::<u64>()) {
        let Some((ts, a, b, tau)) = overlapping_windows(seed) else { return Ok(()) };
        let opts = FastOptions { tie_break: TieBreak::Shuffled(shuffle), ..FastOptions::default() };
        let ta = run_fast(&a, &ts, tau, opts).unwrap().tree.unwrap();
        let tb = run_fast(&b, &ts, tau, FastOptions::default()).unwrap().tree.unwrap();
        let report = merge_trees_with(&ta, &a, &tb, &b, &ts, tau, MergeOptions { check_rounds: true }).unwrap();
        let union = a.union(&b).unwrap();
        prop_assert!(validate(&report.tree, &union, &ts, tau).is_ok());
        prop_assert!(report.tree.contains_subtree(&ta));
        prop_assert_eq!(report.tree.subtree(report.alpha_root), ta.subtree(ta.root()));
    }
}

#[test]
fn contained_assembly_gives_back_the_alpha_tree() {
    let (sys, r) = generate_rectangle(4, 3, 1);
    let ts = &sys.tileset;
    let t = is_producible_fast(&r, ts, 1).unwrap().1.unwrap();
    let part = r.restrict(&[0, 1, 2]).unwrap();
    let tp = is_producible_fast(&part, ts, 1).unwrap().1.unwrap();
    let merged = merge_trees(&t, &r, &tp, &part, ts, 1).unwrap();
    assert_eq!(merged.subtree(merged.root()), t.subtree(t.root()));
}

#[test]
fn inconsistent_or_disjoint_inputs_are_rejected() {
    let (sys, r) = generate_rectangle(3, 1, 1);
    let ts = &sys.tileset;
    let single = |i: usize| r.restrict(&[i]).unwrap();
    let leaf = |i: usize| is_producible_fast(&single(i), ts, 1).unwrap().1.unwrap();
    assert!(matches!(
        merge_trees(&leaf(0), &single(0), &leaf(1), &single(1), ts, 1),
        Err(Error::EmptyOverlap)
    ));
    let moved = Assembly::single(r.position(0), r.tile(1));
    let tm = is_producible_fast(&moved, ts, 1).unwrap().1.unwrap();
    assert!(matches!(
        merge_trees(&leaf(0), &single(0), &tm, &moved, ts, 1),
        Err(Error::Conflict(p)) if p == r.position(0)
    ));
}
