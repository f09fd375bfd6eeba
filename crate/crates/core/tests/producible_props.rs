use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tam_core::gen::{generate_line, generate_rectangle, generate_square, random_glues, random_shape};
use tam_core::io::{parse_tree, write_tree};
use tam_core::oracle::producible_oracle;
use tam_core::producible::{replay_merge_log, run_fast, run_naive, FastOptions, TieBreak};
use tam_core::{is_producible_fast, is_producible_naive, is_stable, validate, Assembly, Offset, TileSet};

fn instance(seed: u64) -> (TileSet, Assembly, u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=9);
    let shape = random_shape(&mut rng, n);
    let p = rng.gen_range(0.4..1.0);
    let (ts, a) = random_glues(&mut rng, &shape, 3, p);
    (ts, a, rng.gen_range(1..=3))
}

proptest! {
    #[test]
    fn fast_naive_and_oracle_agree(seed in any::<u64>()) {
        let (ts, a, tau) = instance(seed);
        let want = producible_oracle(&a, &ts, tau).unwrap();
        prop_assert_eq!(is_producible_fast(&a, &ts, tau).unwrap().0, want);
        prop_assert_eq!(is_producible_naive(&a, &ts, tau).unwrap().0, want);
    }

    #[test]
    fn producible_implies_stable(seed in any::<u64>()) {
        let (ts, a, tau) = instance(seed);
        if is_producible_fast(&a, &ts, tau).unwrap().0 {
            prop_assert!(is_stable(&a, &ts, tau).unwrap());
        }
    }

    #[test]
    fn verdict_ignores_translation(seed in any::<u64>(), dx in -1000i32..1000, dy in -1000i32..1000) {
        let (ts, a, tau) = instance(seed);
        let b = a.translate(Offset::new(dx, dy)).unwrap();
        prop_assert_eq!(is_producible_fast(&a, &ts, tau).unwrap().0, is_producible_fast(&b, &ts, tau).unwrap().0);
    }

    #[test]
    fn witness_validates_and_round_trips(seed in any::<u64>()) {
        let (ts, a, tau) = instance(seed);
        let run = run_fast(&a, &ts, tau, FastOptions::default()).unwrap();
        if let Some(tree) = &run.tree {
            prop_assert!(validate(tree, &a, &ts, tau).is_ok());
            prop_assert_eq!(&replay_merge_log(&a, &run.log).unwrap(), tree);
            prop_assert_eq!(&parse_tree(&write_tree(tree, &ts), &ts).unwrap(), tree);
        } else {
            prop_assert!(!run.producible);
        }
    }

    #[test]
    fn shuffled_tie_breaks_agree(seed in any::<u64>(), shuffle in any::<u64>()) {
        let (ts, a, tau) = instance(seed);
        let base = is_producible_fast(&a, &ts, tau).unwrap().0;
        let opts = FastOptions { tie_break: TieBreak::Shuffled(shuffle), ..FastOptions::default() };
        prop_assert_eq!(run_fast(&a, &ts, tau, opts).unwrap().producible, base);
        prop_assert_eq!(run_naive(&a, &ts, tau, TieBreak::Shuffled(shuffle)).unwrap().producible, base);
    }
}

#[test]
fn generated_families_are_producible() {
    for tau in 1..=3 {
        for n in [1, 2, 3, 7, 16] {
            let (sys, sq) = generate_square(n, tau);
            assert_eq!(sq.len(), (n * n) as usize);
            let (ok, tree) = is_producible_fast(&sq, &sys.tileset, tau).unwrap();
            assert!(ok, "square {n} at {tau}");
            validate(&tree.unwrap(), &sq, &sys.tileset, tau).unwrap();
            let (sys, line) = generate_line(n * 3, tau);
            assert!(is_producible_naive(&line, &sys.tileset, tau).unwrap().0);
        }
        let (sys, r) = generate_rectangle(5, 2, tau);
        assert!(is_producible_fast(&r, &sys.tileset, tau).unwrap().0);
    }
}

#[test]
fn counters_grow_with_size() {
    let mut last = (0, 0);
    for n in [4, 8, 16, 32] {
        let (sys, sq) = generate_square(n, 1);
        let run = run_fast(&sq, &sys.tileset, 1, FastOptions::default()).unwrap();
        assert!(run.counters.pops >= last.0 && run.counters.folds >= last.1);
        assert_eq!(run.log.steps.len(), sq.len() - 1);
        last = (run.counters.pops, run.counters.folds);
    }
}
