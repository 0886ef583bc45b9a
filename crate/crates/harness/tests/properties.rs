use proptest::prelude::*;

use secretary_core::ElemSet;
use secretary_harness::estimate::{utility_estimate, verdict, Verdict};
use secretary_harness::runs::{parse_set, read_csv, write_csv, TrialRecord};

fn record() -> impl Strategy<Value = TrialRecord> {
    (any::<u64>(), any::<u64>(), 0.0f64..100.0, 0.1f64..100.0, any::<u128>(), proptest::option::of(any::<bool>())).prop_map(
        |(trial, seed, w_alg, w_opt, bits, bound_ok)| {
            let sel = ElemSet::from_bits(bits);
            TrialRecord {
                trial,
                seed,
                w_alg,
                w_opt,
                ratio: w_alg / w_opt,
                selected: if sel.is_empty() {
                    "-".into()
                } else {
                    sel.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(".")
                },
                bound_ok,
            }
        },
    )
}

proptest! {
    #[test]
    fn csv_round_trips(rows in proptest::collection::vec(record(), 1..20)) {
        let mut bytes = Vec::new();
        write_csv(&mut bytes, &rows).unwrap();
        let back = read_csv(std::str::from_utf8(&bytes).unwrap()).unwrap();
        prop_assert_eq!(&back, &rows);
        for r in &back {
            prop_assert!(parse_set(&r.selected).is_some());
        }
    }

    #[test]
    fn verdicts_are_ordered(mean in 0.0f64..1.0, half in 0.0f64..0.5, bound in 0.0f64..1.0) {
        let v = verdict(mean, half, bound);
        match v {
            Verdict::Pass => prop_assert!(mean - half >= bound),
            Verdict::Fail => prop_assert!(mean + half < bound),
            Verdict::Inconclusive => prop_assert!(mean - half < bound && bound <= mean + half),
        }
        // Raising the bound never improves the verdict.
        let rank = |v: Verdict| match v { Verdict::Fail => 0, Verdict::Inconclusive => 1, Verdict::Pass => 2 };
        prop_assert!(rank(verdict(mean, half, bound + 0.1)) <= rank(v));
    }

    #[test]
    fn constant_samples_have_zero_width(x in 0.0f64..1.0, n in 2usize..200) {
        let a = utility_estimate(&vec![x; n], 0.0, 3.0);
        prop_assert!(a.half_width < 1e-12);
        prop_assert!((a.mean - x).abs() < 1e-12);
    }
}
