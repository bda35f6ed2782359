use degplanar::surgery::closure::{closure_campaign, OPERATORS};

#[test]
fn every_operator_survives_a_thousand_random_applications() {
    for case in OPERATORS {
        let start = std::time::Instant::now();
        let out = closure_campaign(case, 1000, 7);
        eprintln!("{case:?}: applied {} redrawn {} in {:?}", out.applied, out.redrawn, start.elapsed());
        assert!(out.failures.is_empty(), "{case:?}: {:#?}", out.failures);
        assert_eq!(out.applied, 1000, "{case:?}");
    }
}

#[test]
fn campaigns_are_reproducible() {
    for case in OPERATORS {
        assert_eq!(closure_campaign(case, 50, 11), closure_campaign(case, 50, 11));
    }
}
