use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tam_core::gen::{random_glues, random_shape};
use tam_core::io::{parse_assembly, parse_tileset, parse_tree, write_assembly, write_tileset, write_tree};
use tam_core::{is_producible_fast, Error, TileSystem};

proptest! {
    #[test]
    fn tileset_assembly_and_tree_round_trip(seed in any::<u64>(), tau in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=12);
        let shape = random_shape(&mut rng, n);
        let (ts, a) = random_glues(&mut rng, &shape, tau, 1.0);
        let sys = TileSystem::new(ts.normalized(), tau, None).unwrap();

        let text = write_tileset(&sys);
        let parsed = parse_tileset(&text).unwrap();
        prop_assert!(parsed.nulled.is_empty());
        prop_assert_eq!(&parsed.system, &sys);
        prop_assert_eq!(write_tileset(&parsed.system), text);

        let ts = &sys.tileset;
        let back = parse_assembly(&write_assembly(&a, ts), ts).unwrap();
        prop_assert_eq!(&back, &a);

        if let (true, Some(tree)) = is_producible_fast(&a, ts, tau).unwrap() {
            let text = write_tree(&tree, ts);
            let back = parse_tree(&text, ts).unwrap();
            prop_assert_eq!(&back, &tree);
            prop_assert_eq!(write_tree(&back, ts), text);
        }
    }

    #[test]
    fn parsers_never_panic(text in "[ -~\n]{0,200}") {
        let _ = parse_tileset(&text);
        let ts = parse_tileset("temperature 1\ntile A N=- E=- S=- W=-").unwrap().system.tileset;
        let _ = parse_assembly(&text, &ts);
        let _ = parse_tree(&text, &ts);
    }
}

#[test]
fn errors_carry_line_numbers() {
    let err = parse_tileset("temperature 1\ntile A N=g:1 E=- S=- W=-\n\ntile B N=- E=- S=g:2 W=-").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, Error::Parse { line: 4, .. }), "{msg}");
    assert!(msg.contains('g') && msg.contains("line 2"), "{msg}");
    assert!(parse_tileset("").unwrap_err().to_string().contains("no tiles"));
    let ts = parse_tileset("temperature 1\ntile A N=- E=- S=- W=-")
        .unwrap()
        .system
        .tileset;
    assert!(parse_assembly("0 0 A\n2 0 A", &ts)
        .unwrap_err()
        .to_string()
        .contains("domain not connected"));
    assert!(matches!(
        parse_assembly("0 0 A\n0 0 A", &ts),
        Err(Error::DuplicatePosition(_))
    ));
}
