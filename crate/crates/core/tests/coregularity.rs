mod common;

use std::sync::Arc;

use codepth::budget::Budget;
use codepth::coregular::{
    codepth_search, coregular_extensions, default_pool, hellus_check, is_coregular_definition, Status,
};
use codepth::localcoh::local_cohomology_module;
use codepth::module::{InverseSystem, ModuleRef};
use codepth::{PrimeField, Rationals};
use common::*;
use proptest::prelude::*;

fn split() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    prop::array::uniform4(0u8..3).prop_filter_map("some negative variable", |roles| {
        let neg: Vec<usize> = (0..4).filter(|&i| roles[i] == 0).collect();
        let free: Vec<usize> = (0..4).filter(|&i| roles[i] == 1).collect();
        (!neg.is_empty()).then_some((neg, free))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn codepth_of_an_inverse_system_counts_its_inverted_variables((neg, free) in split()) {
        let r = fine4(Rationals);
        let m: ModuleRef<Q> = Arc::new(InverseSystem::new(&r, &neg, &free).unwrap());
        let budget = Budget::fine(-3, 1);
        let pool = default_pool(m.as_ref(), &[], 1).unwrap();
        // degree-one monomials of the ambient ideal are exactly the inverted variables
        prop_assert_eq!(pool.len(), neg.len());
        let rep = codepth_search(&m, &pool, 4, &budget).unwrap();
        prop_assert_eq!(rep.length, neg.len());
        prop_assert!(rep.inconclusive.is_empty());
        prop_assert!(rep.length <= r.nvars());
    }
}

#[test]
fn codepth_search_stops_at_failing_squares() {
    let r = fine4(Rationals);
    let m: ModuleRef<Q> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
    let pool = parse_all(&r, &["x", "x^2", "y"]);
    let rep = codepth_search(&m, &pool, 3, &Budget::fine(-3, 1)).unwrap();
    assert_eq!(rep.length, 2);
    assert_eq!(rep.witnesses, vec![vec!["x".to_string(), "y".to_string()], vec!["x^2".to_string(), "y".to_string()]]);
}

#[test]
fn extensions_report_each_candidate() {
    let r = fine4(Rationals);
    let m: ModuleRef<Q> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
    let budget = Budget::fine(-3, 1);
    let prefix = parse_all(&r, &["x"]);
    let rep = coregular_extensions(&m, &prefix, &parse_all(&r, &["x^2", "y"]), &budget).unwrap();
    assert!(rep.prefix.holds());
    assert_eq!(rep.extensions.len(), 2);
    assert!(rep.extensions[0].fails());
    assert!(rep.extensions[1].holds());
    assert_eq!(rep.status(), Status::Holds);
    let rep = coregular_extensions(&m, &prefix, &parse_all(&r, &["x^2", "x*y"]), &budget).unwrap();
    assert_eq!(rep.status(), Status::Fails);
}

#[test]
fn local_cohomology_of_a_complete_intersection_is_coregular() {
    let r = fine4(Rationals);
    let gens = parse_all(&r, &["x", "y"]);
    let m: ModuleRef<Q> = local_cohomology_module(&r, &gens, 2).unwrap();
    let v = is_coregular_definition(&gens, &m, &Budget::fine(-3, 2)).unwrap();
    assert!(v.holds(), "{}", v.describe());
}

#[test]
fn radical_criterion_on_monomial_ideals() {
    let r = fine4(Rationals);
    let budget = Budget::fine(-3, 2);
    let gens = parse_all(&r, &["x", "y"]);
    let ok = hellus_check(&r, &gens, &gens, &budget).unwrap();
    assert_eq!(ok.status, Status::Holds, "{}", ok.describe());
    assert!(!ok.discrepancy);
    let short = hellus_check(&r, &gens, &parse_all(&r, &["x"]), &budget).unwrap();
    assert_eq!(short.radical, Status::Fails);
    assert_eq!(short.cohomology_side(), Status::Fails);
    assert_eq!(short.status, Status::Fails);
    // powers do not change the radical
    let sq = hellus_check(&r, &gens, &parse_all(&r, &["x^2", "y^3"]), &budget).unwrap();
    assert_eq!(sq.status, Status::Holds, "{}", sq.describe());
    assert_eq!(sq.certificates.iter().map(|c| c.exponent).collect::<Vec<_>>(), vec![Some(2), Some(3)]);
}

#[test]
fn verdicts_agree_over_rationals_and_prime_field() {
    let budget = Budget::fine(-3, 1);
    let rq = fine4(Rationals);
    let rp = fine4(PrimeField::default());
    let mq: ModuleRef<Q> = Arc::new(InverseSystem::named(&rq, &["x", "y", "z"], &[]).unwrap());
    let mp: ModuleRef<PrimeField> = Arc::new(InverseSystem::named(&rp, &["x", "y", "z"], &[]).unwrap());
    for seq in [vec!["x", "y*z"], vec!["x*y", "y"], vec!["x^2", "y", "z"]] {
        let a = is_coregular_definition(&parse_all(&rq, &seq), &mq, &budget).unwrap();
        let b = is_coregular_definition(&parse_all(&rp, &seq), &mp, &budget).unwrap();
        assert_eq!(a.status, b.status, "{seq:?}");
        assert!(a.status.is_conclusive());
    }
    assert!(mq.ring().grading().is_fine());
}
