use holodual_cli::{render, run, Command, Format};
use proptest::prelude::*;
use serde_json::Value;

fn builder() -> impl Strategy<Value = String> {
    prop_oneof![
        (prop_oneof![Just(2u64), Just(3)], 1usize..=3).prop_map(|(p, d)| format!(r#"{{"builder":"padic","p":{p},"depth":{d}}}"#)),
        (prop_oneof![Just(2u64), Just(5)], 1usize..=3).prop_map(|(p, d)| format!(r#"{{"builder":"pruefer","p":{p},"depth":{d}}}"#)),
        (2u64..=3, 1usize..=2).prop_map(|(d, n)| format!(r#"{{"builder":"product_pro","d":{d},"depth":{n}}}"#)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identical_inputs_give_identical_bytes(doc in builder(), seed in any::<u64>(), depth in proptest::option::of(1usize..=3)) {
        let a = render(&run(Command::Report, &doc, depth, seed).unwrap(), Format::Json);
        let b = render(&run(Command::Report, &doc, depth, seed).unwrap(), Format::Json);
        prop_assert_eq!(&a, &b);
        // verdict is pass iff every record passes
        let v: Value = serde_json::from_str(&a).unwrap();
        let all = v["report"]["records"].as_array().unwrap().iter().all(|r| r["passed"] == true);
        prop_assert_eq!(v["report"]["verdict"] == "pass", all);
        prop_assert!(v["report"]["records"].as_array().unwrap().iter().all(|r| r["anchor"].as_str().is_some_and(|s| !s.is_empty())));
    }
}
