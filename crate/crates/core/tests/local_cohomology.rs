mod common;

use std::sync::Arc;

use codepth::budget::{probe, Budget};
use codepth::localcoh::{
    cech_cohomology, local_cohomology_module, localization_transition, mayer_vietoris_check,
    truncated_localization_slice, CechComplex,
};
use codepth::module::{GradedModule, Key};
use codepth::poly::binomial;
use codepth::{PrimeField, Rationals};
use common::*;
use proptest::prelude::*;

fn arb_ideal() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..16, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomial_slices_match_the_combinatorial_oracle(masks in arb_ideal(), g in prop::array::uniform4(-2i64..2)) {
        let r = fine4(Rationals);
        let sup = supports_of(&masks);
        let srcs: Vec<String> = sup.iter().map(|s| monomial_from_support(s)).collect();
        let gens: Vec<_> = srcs.iter().map(|s| r.parse(s).unwrap()).collect();
        for i in 0..=gens.len() {
            let m = local_cohomology_module(&r, &gens, i).unwrap();
            let got = m.dim(&Key::exact(&g)).unwrap();
            prop_assert_eq!(got, monomial_lc_oracle(&sup, &g, i), "H^{} of {:?} at {:?}", i, srcs, g);
        }
    }

    #[test]
    fn cech_differentials_square_to_zero(masks in arb_ideal(), g in prop::array::uniform4(-2i64..2)) {
        let r = fine4(Rationals);
        let srcs: Vec<String> = supports_of(&masks).iter().map(|s| monomial_from_support(s)).collect();
        let gens: Vec<_> = srcs.iter().map(|s| r.parse(s).unwrap()).collect();
        let c = CechComplex::new(&r, &gens).unwrap();
        for p in 0..gens.len().saturating_sub(1) {
            prop_assert!(c.check_dd(p, &Key::exact(&g)).unwrap());
        }
    }

    #[test]
    fn powers_of_generators_do_not_change_cohomology(masks in arb_ideal(), e in 2u32..4, g in prop::array::uniform4(-3i64..2)) {
        let r = fine4(Rationals);
        let gens: Vec<_> = supports_of(&masks).iter().map(|s| r.parse(&monomial_from_support(s)).unwrap()).collect();
        let mut powered = gens.clone();
        powered[0] = powered[0].pow(e);
        for i in 0..=gens.len() {
            let a = local_cohomology_module(&r, &gens, i).unwrap().dim(&Key::exact(&g)).unwrap();
            let b = local_cohomology_module(&r, &powered, i).unwrap().dim(&Key::exact(&g)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn localization_slices_count_monomials(d in -4i64..3, n in 1u32..4) {
        let (r, gens) = twisted_cubic(Rationals);
        let s = truncated_localization_slice(&r, &gens, &[0, 2], d, n).unwrap();
        let top = d + 4 * n as i64;
        let expect = if top < 0 { 0 } else { binomial(top + 3, 3) as usize };
        prop_assert_eq!(s.numerators.len(), expect);
        let t = localization_transition(&r, &gens, &[0, 2], &s).unwrap();
        prop_assert_eq!(t.cols(), expect);
        // multiplication by a nonzero form is injective
        prop_assert_eq!(t.rank(&Rationals), expect);
    }
}

#[test]
fn complete_intersection_lives_in_degree_two() {
    let r = fine4(Rationals);
    let gens = parse_all(&r, &["x", "y"]);
    let b = Budget::fine(-3, 3);
    for g in b.grades(r.grading()).unwrap() {
        for i in 0..=2 {
            let s = cech_cohomology(&r, &gens, i, &g, &b).unwrap();
            let expect = (i == 2 && g[0] <= -1 && g[1] <= -1 && g[2] >= 0 && g[3] >= 0) as usize;
            assert_eq!(s.dim(), Some(expect), "H^{i} at {g:?}");
        }
    }
}

#[test]
fn skew_lines_mayer_vietoris() {
    let r = fine4(Rationals);
    let i1 = parse_all(&r, &["x", "y"]);
    let i2 = parse_all(&r, &["z", "w"]);
    let rep = mayer_vietoris_check(&r, &i1, &i2, 2, &Budget::fine(-3, 3)).unwrap();
    assert!(rep.violations.is_empty());
    assert!(rep.sum_ideal_vanishes);
    assert!(rep.rows.iter().any(|row| row.intersection == 1));
    // H^3 of the skew lines is H^4 of the maximal ideal
    let skew = parse_all(&r, &["x*z", "x*w", "y*z", "y*w"]);
    let m = parse_all(&r, &["x", "y", "z", "w"]);
    let h3 = local_cohomology_module(&r, &skew, 3).unwrap();
    let h4m = local_cohomology_module(&r, &m, 4).unwrap();
    for g in Budget::fine(-2, 1).grades(r.grading()).unwrap() {
        let k = Key::new(g, 0);
        assert_eq!(h3.dim(&k).unwrap(), h4m.dim(&k).unwrap());
    }
}

#[test]
fn index_beyond_generator_count_is_rejected() {
    let r = fine4(Rationals);
    let gens = parse_all(&r, &["x", "y"]);
    assert!(matches!(local_cohomology_module(&r, &gens, 3), Err(codepth::Error::Precondition(_))));
}

#[test]
fn cohomology_depends_only_on_the_radical() {
    let r = fine4(Rationals);
    let a = parse_all(&r, &["x*y", "y*z", "x*z"]);
    let b = parse_all(&r, &["x^2*y", "y*z^3", "x*z", "x*y*z"]);
    let budget = Budget::fine(-3, 2);
    for i in 0..=3 {
        let ma = local_cohomology_module(&r, &a, i).unwrap();
        let mb = local_cohomology_module(&r, &b, i).unwrap();
        for g in budget.grades(r.grading()).unwrap() {
            let k = Key::exact(&g);
            assert_eq!(ma.dim(&k).unwrap(), mb.dim(&k).unwrap(), "H^{i} at {g:?}");
        }
    }
}

#[test]
fn twisted_cubic_over_q_and_fp_agree() {
    let (rq, gq) = twisted_cubic(Rationals);
    let (rp, gp) = twisted_cubic(PrimeField::default());
    let mq = local_cohomology_module(&rq, &gq, 2).unwrap();
    let mp = local_cohomology_module(&rp, &gp, 2).unwrap();
    let b = Budget::total(-5, -2, 1, 6);
    for g in b.grades(rq.grading()).unwrap() {
        let a = probe(mq.as_ref(), &g, &b).unwrap();
        let c = probe(mp.as_ref(), &g, &b).unwrap();
        assert_eq!(a.estimate(), c.estimate(), "{g:?}");
        assert_eq!(a.dims, c.dims, "{g:?}");
    }
}

#[test]
fn twisted_cubic_differentials_square_to_zero() {
    let (r, gens) = twisted_cubic(Rationals);
    let c = Arc::new(CechComplex::new(&r, &gens).unwrap());
    for d in [-5, -3, 0] {
        let g = r.grading().center(d);
        for n in 1..3 {
            for p in 0..2 {
                assert!(c.check_dd(p, &Key::new(g.clone(), n)).unwrap());
            }
        }
    }
}
