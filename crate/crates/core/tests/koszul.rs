mod common;

use std::sync::Arc;

use codepth::budget::Budget;
use codepth::coregular::{is_coregular_definition, is_coregular_koszul, koszul_shift, Status};
use codepth::grading::grade_add;
use codepth::koszul::{koszul_module, KoszulComplex};
use codepth::module::{FreeModule, GradedModule, InverseSystem, Key, ModuleRef};
use codepth::{Field, Polynomial, PrimeField, Rationals};
use common::*;
use proptest::prelude::*;

fn monomial<F: Field>(field: &F, e: &[u32]) -> Polynomial<F> {
    let s: Vec<String> = e
        .iter()
        .zip(VARS)
        .filter(|(a, _)| **a > 0)
        .map(|(a, v)| format!("{v}^{a}"))
        .collect();
    codepth::poly::parse_polynomial(field, &names(), &s.join("*")).unwrap()
}

fn arb_monomials(max: usize) -> impl Strategy<Value = Vec<[u32; 4]>> {
    prop::collection::vec(prop::array::uniform4(0u32..3), 1..=max)
        .prop_filter("nonconstant", |v| v.iter().all(|e| e.iter().any(|&a| a > 0)))
}

/// `dim (A / (seq) A)_g` for monomial `seq`: one monomial, unless a generator divides it.
fn quotient_oracle(seq: &[[u32; 4]], g: &[i64]) -> usize {
    if g.iter().any(|&a| a < 0) {
        return 0;
    }
    let divides = |e: &[u32; 4]| e.iter().zip(g).all(|(&a, &b)| a as i64 <= b);
    (!seq.iter().any(divides)) as usize
}

fn free(r: &codepth::ring::RingRef<Rationals>) -> ModuleRef<Rationals> {
    Arc::new(FreeModule::new(r))
}

fn inverse_xy<F: Field>(field: F) -> ModuleRef<F> {
    let r = fine4(field);
    Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn top_cohomology_of_a_free_module_is_the_quotient(seq in arb_monomials(3), g in prop::array::uniform4(-1i64..4)) {
        let r = fine4(Rationals);
        let polys: Vec<_> = seq.iter().map(|e| monomial(&Rationals, e)).collect();
        let shift = koszul_shift(&r, &polys).unwrap();
        let h = koszul_module(&polys, &free(&r), polys.len()).unwrap();
        let k = Key::new(grade_add(&Key::exact(&g).grade, &shift), 0);
        prop_assert_eq!(h.dim(&k).unwrap(), quotient_oracle(&seq, &g));
        // a domain has no elements killed by a nonzero form
        let h0 = koszul_module(&polys, &free(&r), 0).unwrap();
        prop_assert_eq!(h0.dim(&Key::exact(&g)).unwrap(), 0);
    }

    #[test]
    fn koszul_differentials_square_to_zero(seq in arb_monomials(3), g in prop::array::uniform4(-3i64..2)) {
        let f = Rationals;
        let polys: Vec<_> = seq
            .iter()
            .map(|e| monomial(&f, &[e[0].max(1), e[1], 0, 0]))
            .collect();
        let c = KoszulComplex::new(inverse_xy(f), &polys).unwrap();
        for p in 0..polys.len().saturating_sub(1) {
            prop_assert!(c.check_dd(p, &Key::exact(&g)).unwrap());
        }
    }

    #[test]
    fn powers_of_variables_are_regular(a in prop::array::uniform4(1u32..3), g in prop::array::uniform4(-1i64..4)) {
        let r = fine4(Rationals);
        let polys: Vec<_> = (0..4)
            .map(|i| {
                let mut e = [0; 4];
                e[i] = a[i];
                monomial(&Rationals, &e)
            })
            .collect();
        for i in 0..4 {
            let h = koszul_module(&polys, &free(&r), i).unwrap();
            prop_assert_eq!(h.dim(&Key::exact(&g)).unwrap(), 0);
        }
    }

    #[test]
    fn definition_and_koszul_agree_on_inverse_systems(seq in prop::collection::vec((0u32..3, 0u32..3), 1..3)) {
        let f = Rationals;
        let polys: Vec<_> = seq
            .iter()
            .filter(|(a, b)| a + b > 0)
            .map(|&(a, b)| monomial(&f, &[a, b, 0, 0]))
            .collect();
        prop_assume!(!polys.is_empty());
        let m = inverse_xy(f);
        let budget = Budget::fine(-3, 1);
        let d = is_coregular_definition(&polys, &m, &budget).unwrap();
        let k = is_coregular_koszul(&polys, &m, &budget).unwrap();
        prop_assert!(d.status.is_conclusive() && k.status.is_conclusive());
        prop_assert_eq!(d.status, k.status, "{} / {}", d.describe(), k.describe());
    }

    #[test]
    fn koszul_verdicts_ignore_order(seq in prop::collection::vec((0u32..3, 0u32..3), 2..4)) {
        let f = Rationals;
        let polys: Vec<_> = seq
            .iter()
            .filter(|(a, b)| a + b > 0)
            .map(|&(a, b)| monomial(&f, &[a, b, 0, 0]))
            .collect();
        prop_assume!(polys.len() >= 2);
        let m = inverse_xy(f);
        let budget = Budget::fine(-3, 1);
        let mut rev = polys.clone();
        rev.reverse();
        let a = is_coregular_koszul(&polys, &m, &budget).unwrap();
        let b = is_coregular_koszul(&rev, &m, &budget).unwrap();
        prop_assert_eq!(a.status, b.status);
    }
}

#[test]
fn variables_are_coregular_and_repeats_are_not() {
    let m = inverse_xy(Rationals);
    let r = m.ring().clone();
    let budget = Budget::fine(-3, 1);
    let xy = parse_all(&r, &["x", "y"]);
    assert_eq!(is_coregular_definition(&xy, &m, &budget).unwrap().status, Status::Holds);
    assert_eq!(is_coregular_koszul(&xy, &m, &budget).unwrap().status, Status::Holds);
    let xx = parse_all(&r, &["x", "x^2"]);
    let v = is_coregular_definition(&xx, &m, &budget).unwrap();
    assert_eq!(v.status, Status::Fails);
    assert!(v.counterexample.is_some_and(|c| c.stable && c.step == 1));
    assert_eq!(is_coregular_koszul(&xx, &m, &budget).unwrap().status, Status::Fails);
}

#[test]
fn rationals_and_prime_field_agree() {
    let q = inverse_xy(Rationals);
    let p = inverse_xy(PrimeField::default());
    let sq = parse_all(q.ring(), &["x*y", "x^2"]);
    let sp = parse_all(p.ring(), &["x*y", "x^2"]);
    for i in 0..=2 {
        let hq = koszul_module(&sq, &q, i).unwrap();
        let hp = koszul_module(&sp, &p, i).unwrap();
        for g in Budget::fine(-3, 1).grades(q.ring().grading()).unwrap() {
            let k = Key::new(g, 0);
            assert_eq!(hq.dim(&k).unwrap(), hp.dim(&k).unwrap());
        }
    }
}
