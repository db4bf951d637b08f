//! The worklist fixpoint against bounded path exploration.

mod common;

use std::collections::BTreeMap;

use analysis_kit::analysis::analyze_fixpoint;
use analysis_kit::bytecode::parse_program;
use analysis_kit::interp::MachineEnv;
use analysis_kit::sign::{JoinSemiLattice, Sign};
use common::fixpoint::{explore, joined, table_of, Env};
use proptest::prelude::*;

#[test]
fn countdown_table_equals_depth_40_join() {
    let program = parse_program(include_str!("../examples/countdown_abs.bc")).unwrap();
    let seen = explore(&program, 40).unwrap();
    let oracle = joined(&seen);
    assert_eq!(table_of(&program).unwrap(), oracle);

    use Sign::*;
    let expected: BTreeMap<u32, Env> = BTreeMap::from([
        (0, vec![]),
        (1, vec![Pos]),
        (2, vec![Pos, Pos]),
        (3, vec![Top]),
        (4, vec![Neg, Top]),
        (5, vec![Top]),
        (6, vec![Top, Top]),
        (9, vec![Top]),
    ]);
    assert_eq!(oracle, expected);
}

#[test]
fn iteration_bound() {
    let program = parse_program(include_str!("../examples/countdown_abs.bc")).unwrap();
    let state = analyze_fixpoint(&program, 0, MachineEnv::default()).unwrap();
    let height = state.per_pc.values().map(|e| e.stack.len()).max().unwrap();
    assert!(
        state.iterations <= program.len() * (height + 1) * 3,
        "{} iterations",
        state.iterations
    );
}

fn random_program() -> impl Strategy<Value = String> {
    let konst = prop_oneof![Just("pos"), Just("neg"), Just("0"), Just("top")];
    (4usize..10).prop_flat_map(move |n| {
        let op = prop_oneof![
            2 => konst.clone().prop_map(|c| format!("iconst({c})")),
            1 => prop_oneof![Just("iop(*)".to_string()), Just("iop(+)".to_string())],
            1 => Just("dup".to_string()),
            1 => (prop_oneof![Just("<="), Just(">")], konst.clone(), 0..n)
                .prop_map(|(c, k, t)| format!("if1('{c}',{k},{t})")),
        ];
        // two pushes up front keep most programs clear of underflow
        let prelude = (konst.clone(), konst.clone())
            .prop_map(|(a, b)| vec![format!("iconst({a})"), format!("iconst({b})")]);
        (prelude, prop::collection::vec(op, n - 3)).prop_map(move |(mut ops, rest)| {
            ops.extend(rest);
            let mut text: String = ops
                .iter()
                .enumerate()
                .map(|(pc, o)| format!("instr({pc},{o},1).\n"))
                .collect();
            text.push_str(&format!("instr({},return,0).\n", n - 1));
            text
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn every_bounded_path_env_is_below_the_table(src in random_program()) {
        let program = parse_program(&src).unwrap();
        let Ok(table) = table_of(&program) else { return Ok(()) };
        let Some(seen) = explore(&program, 40) else { return Ok(()) };
        for (pc, env) in &seen {
            let t = &table[pc];
            prop_assert_eq!(t.len(), env.len());
            prop_assert!(env.iter().zip(t).all(|(a, b)| a.leq(b)), "pc {} {:?} vs {:?}\n{}", pc, env, t, src);
        }
    }

    #[test]
    fn fixpoint_is_deterministic(src in random_program()) {
        let program = parse_program(&src).unwrap();
        prop_assert_eq!(
            format!("{:?}", analyze_fixpoint(&program, 0, MachineEnv::default())),
            format!("{:?}", analyze_fixpoint(&program, 0, MachineEnv::default()))
        );
    }
}
