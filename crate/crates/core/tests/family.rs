use std::time::Instant;

use occ_core::classifier::BType;
use occ_core::par::Exec;
use occ_core::tqft::family::{self, FamilyBounds};
use occ_core::tqft::{evaluate, ShadowAssignment};

#[test]
fn classifier_is_sound_on_the_family() {
    let start = Instant::now();
    let report = family::check_classifier_consistency(FamilyBounds::default(), Exec::Parallel);
    println!("{report}");
    println!("elapsed: {:?}", start.elapsed());
    assert_eq!(report.counterexample_count, 0);
    assert!(report.passed());
}

#[test]
fn stated_witnesses_are_family_members() {
    let bounds = FamilyBounds::default();
    let shadow = ShadowAssignment::new(bounds.d, bounds.chi_m, &family::brane_table());
    let expected = ["1 ↦ 2·c", "1 ↦ u", "u ↦ 2·c⊗c", "1 ↦ o", "o ↦ o"];
    for ((t, c), want) in family::stated_witnesses().into_iter().zip(expected) {
        assert!(family::contains(&c, bounds), "{t:?}");
        let verdict = occ_core::classifier::classify(&c, bounds.d, occ_core::classifier::DimRegime::Strict);
        assert_eq!(verdict.components[0].verdict.btype(), Some(t));
        assert_eq!(evaluate(&c, &shadow).unwrap().to_string(), want);
    }
    assert_eq!(BType::ALL.len(), 5);
}
