use analysis_kit::analysis::enumerate_paths;
use analysis_kit::bytecode::parse_program;
use analysis_kit::interp::MachineEnv;
use analysis_kit::stream::Stream;
use proptest::prelude::*;

fn s(v: &[i32]) -> Stream<'static, i32> {
    let owned = v.to_vec();
    Stream::new(owned.into_iter())
}

fn f(x: i32) -> Stream<'static, i32> {
    // zero, one or two answers depending on x
    Stream::new((0..x.rem_euclid(3)).map(move |k| x * 10 + k))
}

proptest! {
    #[test]
    fn disj_associative(a in prop::collection::vec(any::<i32>(), 0..5),
                        b in prop::collection::vec(any::<i32>(), 0..5),
                        c in prop::collection::vec(any::<i32>(), 0..5)) {
        let (b2, c2) = (b.clone(), c.clone());
        let left: Vec<_> = s(&a).disj(move || s(&b)).disj(move || s(&c)).collect();
        let right: Vec<_> = s(&a).disj(move || s(&b2).disj(move || s(&c2))).collect();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn empty_is_identity(a in prop::collection::vec(any::<i32>(), 0..8)) {
        let a2 = a.clone();
        prop_assert_eq!(Stream::empty().disj(move || s(&a2)).collect::<Vec<_>>(), a.clone());
        prop_assert_eq!(s(&a).disj(Stream::empty).collect::<Vec<_>>(), a.clone());
        prop_assert_eq!(s(&a).bind(Stream::once).collect::<Vec<_>>(), a);
    }

    #[test]
    fn bind_distributes_over_disj(a in prop::collection::vec(-50i32..50, 0..5),
                                  b in prop::collection::vec(-50i32..50, 0..5)) {
        let b2 = b.clone();
        let left: Vec<_> = s(&a).disj(move || s(&b)).bind(f).collect();
        let right: Vec<_> = s(&a).bind(f).disj(move || s(&b2).bind(f)).collect();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bind_associative(a in prop::collection::vec(-50i32..50, 0..5)) {
        let left: Vec<_> = s(&a).bind(f).bind(f).collect();
        let right: Vec<_> = s(&a).bind(|x| f(x).bind(f)).collect();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn take_terminates_on_infinite_path_stream(k in 0usize..60) {
        let program = parse_program(include_str!("../examples/countdown_abs.bc")).unwrap();
        let paths = enumerate_paths(&program, MachineEnv::default(), k);
        prop_assert_eq!(paths.len(), k);
        for (i, p) in paths.iter().enumerate() {
            // the n-th path goes round the loop n times
            prop_assert_eq!(p.as_ref().unwrap().trace.len(), 8 + 4 * i);
        }
    }
}
