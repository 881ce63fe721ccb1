mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempora_cli::{parse_scale, render, Expr, ScaleExpr};

proptest! {
    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let ts = common::random_scale(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = render(&ts);
        let back = parse_scale(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, ts);
    }

    #[test]
    fn parsers_never_panic(text in "[-0-9.,/{}\\[\\]@()UZRPqhtx+*^ e]{0,24}") {
        let _ = ScaleExpr::parse(&text).map(|e| e.eval());
        let _ = Expr::parse(&text).map(|e| e.eval(1.0, &[1.0]));
    }

    #[test]
    fn parse_errors_point_inside_the_input(text in "[-0-9,\\[\\]{}U ]{0,16}") {
        if let Err(e) = ScaleExpr::parse(&text) {
            prop_assert!(e.offset <= text.len());
            prop_assert!(!e.expected.is_empty());
        }
    }

    #[test]
    fn spacing_is_insignificant(seed in any::<u64>()) {
        let ts = common::random_scale(&mut ChaCha8Rng::seed_from_u64(seed));
        let spaced = render(&ts).replace(',', " ,  ").replace('[', "[ ").replace("U", "\t∪ ");
        prop_assert_eq!(parse_scale(&spaced).unwrap(), ts);
    }
}
