use std::collections::BTreeMap;

use proptest::prelude::*;
use symkit_dc::report::{Kind, Outcome, Record, RunConfig, VerificationReport, WitnessPoint};
use symkit_dc::schema;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::Generator),
        Just(Kind::Solution),
        Just(Kind::Resolver),
        Just(Kind::TransformationIdentity)
    ]
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![
        Just(Outcome::Pass),
        Just(Outcome::Fail),
        Just(Outcome::Inconclusive),
        Just(Outcome::OutOfScope)
    ]
}

fn witness() -> impl Strategy<Value = WitnessPoint> {
    (
        prop::collection::btree_map("[tuvwx]|mu", -1e6f64..1e6, 1..5),
        -1e3f64..1e3,
        0.0f64..1e12,
    )
        .prop_map(
            |(point, value, scale): (BTreeMap<String, f64>, f64, f64)| WitnessPoint {
                point,
                value,
                scale,
            },
        )
}

fn record() -> impl Strategy<Value = Record> {
    (
        "[a-z0-9/~-]{1,24}",
        kind(),
        outcome(),
        prop::option::of(0.0f64..1e3),
        prop::option::of(witness()),
        prop::option::of("[ -~]{0,40}"),
    )
        .prop_map(|(id, k, o, r, w, d)| Record {
            id,
            kind: k,
            verdict: o,
            worst_residual: r,
            witness: w,
            detail: d,
        })
}

fn report(records: Vec<Record>, seed: u64) -> VerificationReport {
    let config = RunConfig {
        trials: 200,
        param_samples: 5,
        rtol: 1e-8,
        fail_tol: 1e-4,
        solution_pass: 1e-10,
        solution_fail: 1e-6,
    };
    VerificationReport::new("verify-all", seed, config, records)
}

proptest! {
    #[test]
    fn reports_round_trip_through_json(records in prop::collection::vec(record(), 0..12), seed in any::<u64>()) {
        let r = report(records, seed);
        let text = r.to_json();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert!(schema::validate(schema::REPORT, &doc).is_ok());
        let back: VerificationReport = serde_json::from_value(doc).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn summary_and_exit_code_follow_the_records(records in prop::collection::vec(record(), 0..12)) {
        let r = report(records.clone(), 1);
        let count = |o: Outcome| records.iter().filter(|x| x.verdict == o).count();
        prop_assert_eq!(r.summary.total, records.len());
        prop_assert_eq!(r.summary.pass + r.summary.fail + r.summary.inconclusive + r.summary.out_of_scope, records.len());
        let expected = if count(Outcome::Fail) > 0 {
            1
        } else if count(Outcome::Inconclusive) > 0 {
            3
        } else {
            0
        };
        prop_assert_eq!(r.exit_code(), expected);
    }
}
