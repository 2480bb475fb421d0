mod common;

use pdaverify::lang::{
    classify, expand_macros, parse_program, pretty_print, validate, Command, Program,
};
use pdaverify::protocol::CancelTable;
use pdaverify::verifier::{gen_pathfinder, gen_verifier};
use proptest::prelude::*;

fn only_core_forms(p: &Program) -> bool {
    p.commands().iter().all(|c| !c.is_sugar())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let p = common::random_program(&mut common::rng(seed));
        let text = pretty_print(&p);
        let back = parse_program(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, p);
    }

    #[test]
    fn expansion_is_idempotent_and_sugar_free(seed in any::<u64>()) {
        let p = common::random_program(&mut common::rng(seed));
        let once = expand_macros(&p);
        prop_assert!(only_core_forms(&once));
        prop_assert!(validate(&once).is_ok());
        prop_assert_eq!(expand_macros(&once), once);
    }
}

#[test]
fn listings_parse_and_round_trip() {
    for name in ["fig4-pathfinder.pda", "fig5-verifier.pda", "balanced.pda"] {
        let p = parse_program(&common::fixture(name)).unwrap();
        assert_eq!(parse_program(&pretty_print(&p)).unwrap(), p, "{name}");
        let e = expand_macros(&p);
        assert_eq!(parse_program(&pretty_print(&e)).unwrap(), e, "{name}");
    }
}

#[test]
fn generated_programs_round_trip() {
    for p in [
        gen_pathfinder(),
        gen_verifier(&CancelTable::default()),
        gen_verifier(&CancelTable::empty()),
    ] {
        assert_eq!(parse_program(&pretty_print(&p)).unwrap(), p);
    }
}

#[test]
fn verifier_is_one_head_two_way_nondeterministic() {
    let c = classify(&gen_verifier(&CancelTable::default()));
    assert_eq!(c.head_count, 1);
    assert!(!c.one_way);
    assert!(!c.deterministic);
}

#[test]
fn move_to_leftend_unrolls_to_a_loop() {
    let p = expand_macros(&parse_program("a: right; move-to-leftend; accept").unwrap());
    let lp = &p.blocks[1];
    assert!(matches!(lp.body[0], Command::Left(1)));
    assert!(matches!(lp.body[1], Command::If(..)));
}
