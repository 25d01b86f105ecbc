use cubesense::certificate::{RowStatus, Verdict};
use cubesense::constructions::min_irreducible_size;
use cubesense::search::{min_size_search, DegreeMode, SearchConfig, SearchOutcome, Strategy};
use cubesense::verify::{recheck_counterexample, verify, Claim, VerifyOptions};
use cubesense::CubeDim;

fn size_or_infeasible(out: &SearchOutcome) -> Option<u64> {
    match out {
        SearchOutcome::Found { size, .. } => Some(*size),
        SearchOutcome::Infeasible { .. } => None,
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn branch_and_bound_matches_enumeration() {
    for n in 0..=4 {
        for d in 0..=n {
            for mode in [DegreeMode::Exact, DegreeMode::AtLeast] {
                for irreducible in [false, true] {
                    let cfg = SearchConfig::new(CubeDim::new(n).unwrap(), d)
                        .mode(mode)
                        .irreducible(irreducible);
                    let plain = min_size_search(&cfg).unwrap();
                    let pruned =
                        min_size_search(&cfg.clone().strategy(Strategy::CanonicalBnb)).unwrap();
                    assert_eq!(
                        size_or_infeasible(&plain),
                        size_or_infeasible(&pruned),
                        "n={n} d={d} {mode:?} irreducible={irreducible}"
                    );
                    if let SearchOutcome::Found { witness, .. } = &pruned {
                        let delta = witness.min_degree().unwrap();
                        match mode {
                            DegreeMode::Exact => assert_eq!(delta, d),
                            DegreeMode::AtLeast => assert!(delta >= d),
                        }
                        assert!(!irreducible || witness.is_irreducible());
                    }
                }
            }
        }
    }
}

#[test]
fn main_claim_at_five_reaches_the_formula_for_high_degrees() {
    let opts = VerifyOptions {
        allow_large: true,
        budget: Some(2_000_000),
        ..VerifyOptions::default()
    };
    let cert = verify(Claim::Main, 5, &opts).unwrap();
    assert_ne!(cert.verdict, Verdict::Refuted);
    for row in &cert.per_d {
        if row.status == RowStatus::Confirmed {
            assert_eq!(row.found, min_irreducible_size(5, row.d).ok());
        }
    }
    let top = cert.per_d.iter().find(|r| r.d == 5).unwrap();
    assert_eq!(top.found, Some(32));
}

#[test]
fn resumed_rows_are_kept() {
    let opts = VerifyOptions {
        allow_large: true,
        budget: Some(1_000),
        ..VerifyOptions::default()
    };
    let first = verify(Claim::Main, 5, &opts).unwrap();
    let confirmed = first
        .per_d
        .iter()
        .filter(|r| r.status == RowStatus::Confirmed)
        .count();
    let again = verify(
        Claim::Main,
        5,
        &VerifyOptions {
            resume: Some(first.clone()),
            ..opts
        },
    )
    .unwrap();
    assert_eq!(again.per_d, first.per_d);
    if confirmed > 0 {
        assert_eq!(again.counts["resumed_rows"], confirmed as u64);
    }
}

#[test]
fn refutations_recheck_with_set_operations() {
    for n in 2..=4 {
        let cert = verify(Claim::LemmaFancy, n, &VerifyOptions::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Refuted);
        assert!(recheck_counterexample(&cert).unwrap(), "n={n}");
    }
    let cert = verify(Claim::Simon, 3, &VerifyOptions::default()).unwrap();
    assert!(!recheck_counterexample(&cert).unwrap());
}
