//! Cyclic covers of element pairs: the constructive cover for modules with a
//! coregular pair, a bounded search for a common generator, and the
//! structural obstruction for a sum of inverse systems on disjoint variables.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::budget::Budget;
use crate::coregular::{is_coregular_definition, preimage, Status};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{grade_sub, render_grade, Grade};
use crate::linalg::{Echelon, SparseVec};
use crate::module::{
    annihilating_power, apply_mult, push_to_level, render_element, DirectSum,
    ElementHandle, GradedModule, InverseSystem, KernelModule, Key, ModuleRef,
};
use crate::poly::{monomials_of_degree, Polynomial};

/// `alpha = m' + n'` with `x^i alpha = n` and `y^j alpha = m`.
#[derive(Clone, Debug)]
pub struct CyclicCoverWitness<E> {
    pub i: u32,
    pub j: u32,
    /// `m'` with `y^j m' = m` and `x^i m' = 0`.
    pub m_prime: ElementHandle<E>,
    /// `n'` with `x^i n' = n` and `y^j n' = 0`.
    pub n_prime: ElementHandle<E>,
    pub alpha: String,
    pub transcripts: Vec<String>,
}

impl<E: Clone> CyclicCoverWitness<E> {
    /// Components of `alpha`, one per grade.
    pub fn alpha_parts(&self) -> Vec<ElementHandle<E>> {
        if self.m_prime.key == self.n_prime.key {
            return vec![self.m_prime.clone()];
        }
        vec![self.m_prime.clone(), self.n_prime.clone()]
    }
}

fn single<E: Clone>(parts: &[ElementHandle<E>], what: &str) -> Result<ElementHandle<E>> {
    match parts {
        [h] => Ok(h.clone()),
        _ => Err(Error::NotInSlice(format!("{what} must lie in a single slice"))),
    }
}

/// `f * (sum of parts)` gathered by target key.
fn apply_to_parts<F: Field>(
    m: &dyn GradedModule<F>,
    f: &Polynomial<F>,
    parts: &[ElementHandle<F::Elem>],
) -> Result<Vec<ElementHandle<F::Elem>>> {
    let field = m.field();
    let mut out: Vec<ElementHandle<F::Elem>> = Vec::new();
    for p in parts {
        let img = apply_mult(m, f, p)?;
        match out.iter_mut().find(|o| o.key == img.key) {
            Some(o) => o.coeffs = o.coeffs.add(field, &img.coeffs),
            None => out.push(img),
        }
    }
    out.retain(|o| !o.is_zero());
    Ok(out)
}

fn equals_element<F: Field>(
    m: &dyn GradedModule<F>,
    parts: &[ElementHandle<F::Elem>],
    target: &ElementHandle<F::Elem>,
) -> Result<bool> {
    let mut rest = Vec::new();
    let mut hit = target.is_zero();
    for p in parts {
        let p = push_to_level(m, p, target.key.level)?;
        if p.key == target.key {
            hit = p.coeffs == target.coeffs;
        } else {
            rest.push(p);
        }
    }
    Ok(hit && rest.iter().all(|p| p.is_zero()))
}

fn render_parts<F: Field>(m: &dyn GradedModule<F>, parts: &[ElementHandle<F::Elem>]) -> Result<String> {
    let nz: Vec<String> = parts
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| render_element(m, p))
        .collect::<Result<_>>()?;
    Ok(if nz.is_empty() { "0".into() } else { nz.join(" + ") })
}

/// Solves `f * v = target` inside `0 :_M e` and returns `v` in the
/// coordinates of `M`.
fn solve_in_annihilator<F: Field>(
    m: &ModuleRef<F>,
    e: &Polynomial<F>,
    f: &Polynomial<F>,
    target: &ElementHandle<F::Elem>,
    max_level: u32,
) -> Result<Option<ElementHandle<F::Elem>>> {
    let n = KernelModule::new(m.clone(), std::slice::from_ref(e))?;
    let t = ElementHandle {
        key: target.key.clone(),
        coeffs: n.coords_of_parent(&target.key, &target.coeffs)?,
    };
    let deg = m.ring().degree_of(f)?;
    Ok(match preimage(&n, f, &t, max_level)? {
        Some((level, v)) => {
            let key = Key::new(grade_sub(&target.key.grade, &deg), level);
            Some(ElementHandle {
                coeffs: n.to_parent(&key, &v)?,
                key,
            })
        }
        None => None,
    })
}

/// A common generator for `m` and `n` built from the coregular pair `(x, y)`.
pub fn cyclic_cover<F: Field>(
    m: &ModuleRef<F>,
    mh: &ElementHandle<F::Elem>,
    nh: &ElementHandle<F::Elem>,
    x: &Polynomial<F>,
    y: &Polynomial<F>,
    budget: &Budget,
) -> Result<CyclicCoverWitness<F::Elem>> {
    let ring = m.ring();
    for seq in [[x.clone(), y.clone()], [y.clone(), x.clone()]] {
        let v = is_coregular_definition(&seq, m, budget)?;
        if v.status != Status::Holds {
            return Err(Error::Precondition(format!(
                "coregularity of ({}, {}) is not verified: {}",
                ring.render(&seq[0]),
                ring.render(&seq[1]),
                v.status.as_str()
            )));
        }
    }
    let i = annihilating_power(m.as_ref(), x, mh, budget.cap)?.max(1);
    let j = annihilating_power(m.as_ref(), y, nh, budget.cap)?.max(1);
    let (xi, yj) = (x.pow(i), y.pow(j));
    let infeasible = |what: &str| Error::BudgetExhausted(format!("no solution for {what} up to level {}", budget.max_level));
    let m_prime = solve_in_annihilator(m, &xi, &yj, mh, budget.max_level)?.ok_or_else(|| infeasible("y^j m' = m"))?;
    let n_prime = solve_in_annihilator(m, &yj, &xi, nh, budget.max_level)?.ok_or_else(|| infeasible("x^i n' = n"))?;
    let level = m_prime.key.level.max(n_prime.key.level);
    let m_prime = push_to_level(m.as_ref(), &m_prime, level)?;
    let n_prime = push_to_level(m.as_ref(), &n_prime, level)?;
    let mut w = CyclicCoverWitness {
        i,
        j,
        alpha: String::new(),
        transcripts: Vec::new(),
        m_prime,
        n_prime,
    };
    let parts = w.alpha_parts();
    w.alpha = render_parts(m.as_ref(), &parts)?;
    for (p, target, name) in [(&xi, nh, "n"), (&yj, mh, "m")] {
        let img = apply_to_parts(m.as_ref(), p, &parts)?;
        if !equals_element(m.as_ref(), &img, &push_to_level(m.as_ref(), target, level)?)? {
            return Err(Error::Validation(format!("transcript for {name} does not verify")));
        }
        w.transcripts.push(format!(
            "({}) * ({}) = {} = {name}",
            ring.render(p),
            w.alpha,
            render_parts(m.as_ref(), &img)?
        ));
    }
    Ok(w)
}

/// Bounds of [`pair_in_cyclic_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Total degree window for the generator.
    pub alpha_lo: i64,
    pub alpha_hi: i64,
    /// Degree cap for the multipliers `f` and `g`.
    pub deg_cap: i64,
}

impl SearchBounds {
    pub fn describe(&self, budget: &Budget) -> String {
        format!(
            "generator degrees [{}, {}], multiplier degree <= {}, levels <= {}",
            self.alpha_lo, self.alpha_hi, self.deg_cap, budget.max_level
        )
    }
}

#[derive(Clone, Debug)]
pub struct PairWitness<E> {
    pub alpha: ElementHandle<E>,
    pub alpha_text: String,
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug)]
pub enum PairSearch<E> {
    Witness(PairWitness<E>),
    NoneUnderBounds {
        bounds: String,
        grades: usize,
        candidates: usize,
    },
}

impl<E> PairSearch<E> {
    pub fn found(&self) -> bool {
        matches!(self, PairSearch::Witness(_))
    }

    pub fn describe(&self) -> String {
        match self {
            PairSearch::Witness(w) => format!("witness alpha = {} with f = {}, g = {}", w.alpha_text, w.f, w.g),
            PairSearch::NoneUnderBounds { bounds, grades, candidates } => {
                format!("none under bounds ({bounds}; {grades} grades, {candidates} candidates)")
            }
        }
    }
}

/// Some `f` of grade `target - grade(alpha)` with `f * alpha = target`,
/// combining the monomials of that grade.
fn solve_multiplier<F: Field>(
    m: &dyn GradedModule<F>,
    alpha: &ElementHandle<F::Elem>,
    target: &ElementHandle<F::Elem>,
) -> Result<Option<Polynomial<F>>> {
    let ring = m.ring();
    let field = ring.field();
    let grading = ring.grading();
    let diff = grade_sub(&target.key.grade, &alpha.key.grade);
    if target.is_zero() {
        return Ok(Some(Polynomial::zero(field, ring.nvars())));
    }
    if grading.total_degree(&diff) < 0 {
        return Ok(None);
    }
    let monos = grading.monomials(&diff);
    let mut ech = Echelon::new(field, m.dim(&target.key)?, true);
    for e in monos.iter() {
        let mu = Polynomial::monomial(field, e.clone(), field.one());
        ech.insert(&apply_mult(m, &mu, alpha)?.coeffs);
    }
    Ok(ech.solve(&target.coeffs).map(|c| {
        let mut f = Polynomial::zero(field, ring.nvars());
        for (k, v) in &c.entries {
            f.add_term(monos[*k].clone(), v);
        }
        f
    }))
}

/// Looks for a homogeneous `alpha` and `f, g` of degree at most the cap with
/// `f alpha = m` and `g alpha = n`. Generators are enumerated by increasing
/// total degree, then grade, then level; inside a slice the basis vectors
/// come first and then their pairwise sums. A negative answer only speaks
/// for these bounds.
pub fn pair_in_cyclic_search<F: Field>(
    m: &dyn GradedModule<F>,
    mh: &ElementHandle<F::Elem>,
    nh: &ElementHandle<F::Elem>,
    bounds: &SearchBounds,
    budget: &Budget,
) -> Result<PairSearch<F::Elem>> {
    let ring = m.ring();
    let field = ring.field();
    let grading = ring.grading();
    if mh.is_zero() || nh.is_zero() {
        let (alpha, f, g) = if mh.is_zero() { (nh, "0", "1") } else { (mh, "1", "0") };
        return Ok(PairSearch::Witness(PairWitness {
            alpha: alpha.clone(),
            alpha_text: render_element(m, alpha)?,
            f: f.into(),
            g: g.into(),
        }));
    }
    let mut shifts: BTreeSet<Grade> = BTreeSet::new();
    for d in 0..=bounds.deg_cap {
        for e in monomials_of_degree(ring.nvars(), d) {
            shifts.insert(grading.grade_of(&e));
        }
    }
    let from_m: BTreeSet<Grade> = shifts.iter().map(|s| grade_sub(&mh.key.grade, s)).collect();
    let mut grades: Vec<Grade> = shifts
        .iter()
        .map(|s| grade_sub(&nh.key.grade, s))
        .filter(|g| from_m.contains(g))
        .filter(|g| {
            let t = grading.total_degree(g);
            bounds.alpha_lo <= t && t <= bounds.alpha_hi
        })
        .collect();
    grades.sort_by_key(|g| (grading.total_degree(g), g.clone()));
    let lo = mh.key.level.max(nh.key.level);
    let hi = if m.is_exact() { lo } else { budget.max_level.max(lo) };
    let mut candidates = 0;
    for g in &grades {
        for level in lo..=hi {
            let key = Key::new(g.clone(), level);
            let d = m.dim(&key)?;
            let (mt, nt) = (push_to_level(m, mh, level)?, push_to_level(m, nh, level)?);
            let mut vecs: Vec<SparseVec<F::Elem>> = (0..d).map(|i| SparseVec::unit(field, i)).collect();
            for a in 0..d {
                for b in a + 1..d {
                    vecs.push(SparseVec::unit(field, a).add(field, &SparseVec::unit(field, b)));
                }
            }
            for v in vecs {
                candidates += 1;
                let alpha = ElementHandle { key: key.clone(), coeffs: v };
                let Some(f) = solve_multiplier(m, &alpha, &mt)? else { continue };
                let Some(gp) = solve_multiplier(m, &alpha, &nt)? else { continue };
                return Ok(PairSearch::Witness(PairWitness {
                    alpha_text: render_element(m, &alpha)?,
                    alpha,
                    f: ring.render(&f),
                    g: ring.render(&gp),
                }));
            }
        }
    }
    Ok(PairSearch::NoneUnderBounds {
        bounds: bounds.describe(budget),
        grades: grades.len(),
        candidates,
    })
}

/// Negative claim backed by the verified premises of the case analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub m: String,
    pub n: String,
    pub bounds: String,
    pub premises: Vec<String>,
}

impl Obstruction {
    pub fn describe(&self) -> String {
        let mut s = format!("{} and {} lie in no cyclic submodule (structural certificate)", self.m, self.n);
        for p in &self.premises {
            s.push_str("\n  verified: ");
            s.push_str(p);
        }
        s.push_str("\n  premises checked on ");
        s.push_str(&self.bounds);
        s
    }
}

#[derive(Clone, Debug)]
pub enum SocleOutcome<E> {
    Structural(Obstruction),
    /// Both elements sit in one summand; no obstruction is claimed and the
    /// bounded search runs instead.
    Search(PairSearch<E>),
}

/// The component of a sum element in each summand.
fn split<F: Field>(
    a: &dyn GradedModule<F>,
    h: &ElementHandle<F::Elem>,
) -> Result<(SparseVec<F::Elem>, SparseVec<F::Elem>)> {
    let d1 = a.dim(&h.key)?;
    let first = h.coeffs.reindex(|i| (i < d1).then_some(i));
    let second = h.coeffs.reindex(|i| i.checked_sub(d1));
    Ok((first, second))
}

/// For `m` in the socle of `M1` and `n` in the socle of `M2`, where `M1` and
/// `M2` are inverse systems on disjoint variable sets with each one's
/// negative variables free in the other:
///
/// 1. `f alpha = m` with `f` in the ideal of `M2`'s negative variables is
///    impossible, because those variables never reach `m`'s fine grade
///    from `M1`;
/// 2. so `f` is outside that ideal, and such `f` are injective on `M2`
///    (the free variables of `M2` act injectively on its one-dimensional
///    slices), which forces the `M2` component of `alpha` to vanish;
/// 3. then `g alpha` lies in `M1` and cannot equal the nonzero `n` in `M2`.
///
/// Each premise is an exact slice computation on the box of the budget.
pub fn skew_socle_obstruction<F: Field>(
    m1: &Arc<InverseSystem<F>>,
    m2: &Arc<InverseSystem<F>>,
    mh: &ElementHandle<F::Elem>,
    nh: &ElementHandle<F::Elem>,
    bounds: &SearchBounds,
    budget: &Budget,
) -> Result<SocleOutcome<F::Elem>> {
    let ring = m1.ring().clone();
    let names = ring.names();
    let sum = DirectSum::new(m1.clone(), m2.clone())?;
    let premise = |s: String| Error::Precondition(format!("premise failed: {s}"));
    for (a, b) in [(m1, m2), (m2, m1)] {
        for v in a.neg_vars() {
            if !b.free_vars().contains(v) {
                return Err(premise(format!(
                    "{} is negative in {} but not free in {}",
                    names[*v],
                    a.descriptor(),
                    b.descriptor()
                )));
            }
        }
    }
    let (m_a, m_b) = split(m1.as_ref(), mh)?;
    let (n_a, n_b) = split(m1.as_ref(), nh)?;
    if mh.is_zero() || nh.is_zero() {
        return Err(premise("both elements must be nonzero".into()));
    }
    let in_first = |a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>| !a.is_zero() && b.is_zero();
    let in_second = |a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>| a.is_zero() && !b.is_zero();
    if !(in_first(&m_a, &m_b) && in_second(&n_a, &n_b)) {
        if (in_first(&m_a, &m_b) && in_first(&n_a, &n_b)) || (in_second(&m_a, &m_b) && in_second(&n_a, &n_b)) {
            return Ok(SocleOutcome::Search(pair_in_cyclic_search(&sum, mh, nh, bounds, budget)?));
        }
        return Err(premise("m must lie in the first summand and n in the second".into()));
    }
    let mut premises = Vec::new();
    // socle: the negative variables of each summand kill its element
    for (sys, key, h, name) in [(m1, &mh.key, &m_a, "m"), (m2, &nh.key, &n_b, "n")] {
        let e = ElementHandle { key: key.clone(), coeffs: h.clone() };
        for v in sys.neg_vars() {
            if !apply_mult(sys.as_ref(), &ring.var(*v), &e)?.is_zero() {
                return Err(premise(format!("{name} is not killed by {}", names[*v])));
            }
        }
        premises.push(format!(
            "{name} = {} is killed by {}",
            render_element(sys.as_ref(), &e)?,
            sys.neg_vars().iter().map(|v| names[*v].as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    // step 1: the ideal of M2's negative variables misses m's fine grade in M1
    for v in m2.neg_vars() {
        let x = ring.var(*v);
        let src = grade_sub(&mh.key.grade, &ring.degree_of(&x)?);
        if m1.dim(&Key::new(src.clone(), 0))? != 0 {
            return Err(premise(format!("{} reaches m from {}", names[*v], render_grade(&src))));
        }
    }
    premises.push(format!(
        "({}) M1 meets the grade of m only in 0, so f alpha = m forces f outside ({})",
        m2.neg_vars().iter().map(|v| names[*v].as_str()).collect::<Vec<_>>().join(", "),
        m2.neg_vars().iter().map(|v| names[*v].as_str()).collect::<Vec<_>>().join(", ")
    ));
    // step 2: free variables of M2 act injectively on its slices in the box
    let mut checked = 0;
    for g in budget.grades(ring.grading())? {
        let key = Key::new(g.clone(), 0);
        let d = m2.dim(&key)?;
        if d > 1 {
            return Err(premise(format!("slice {} of M2 is not one-dimensional", render_grade(&g))));
        }
        if d == 0 {
            continue;
        }
        for v in m2.free_vars() {
            if m2.mult(&ring.var(*v), &key)?.rank(ring.field()) != d {
                return Err(premise(format!("{} is not injective at {}", names[*v], render_grade(&g))));
            }
        }
        checked += 1;
    }
    premises.push(format!(
        "{} act injectively on the {checked} nonzero one-dimensional slices of M2, so every f outside ({}) is injective on M2 and the M2 component of alpha is 0",
        m2.free_vars().iter().map(|v| names[*v].as_str()).collect::<Vec<_>>().join(", "),
        m2.neg_vars().iter().map(|v| names[*v].as_str()).collect::<Vec<_>>().join(", ")
    ));
    premises.push("g alpha then lies in M1, which meets M2 only in 0, while n is a nonzero element of M2".into());
    Ok(SocleOutcome::Structural(Obstruction {
        m: render_element(&sum, mh)?,
        n: render_element(&sum, nh)?,
        bounds: budget.describe(),
        premises,
    }))
}

/// Single-slice element from an expression in the module's basis labels.
pub fn slice_element<F: Field>(m: &dyn GradedModule<F>, expr: &str, level: u32) -> Result<ElementHandle<F::Elem>> {
    let parts = crate::module::element_handle(m, expr, level)?;
    if parts.is_empty() {
        return Err(Error::NotInSlice(format!("`{expr}` is zero; give its grade explicitly")));
    }
    single(&parts, expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::localcoh::local_cohomology_module;
    use crate::ring::{Ring, RingRef};

    type Q = Rationals;

    fn ring4() -> RingRef<Q> {
        Ring::fine(Rationals, 4)
    }

    fn skew(r: &RingRef<Q>) -> (Arc<InverseSystem<Q>>, Arc<InverseSystem<Q>>, DirectSum<Q>) {
        let a = Arc::new(InverseSystem::named(r, &["x", "y"], &["z", "w"]).unwrap());
        let b = Arc::new(InverseSystem::named(r, &["z", "w"], &["x", "y"]).unwrap());
        let s = DirectSum::new(a.clone(), b.clone()).unwrap();
        (a, b, s)
    }

    fn bounds() -> SearchBounds {
        SearchBounds { alpha_lo: -6, alpha_hi: 0, deg_cap: 6 }
    }

    #[test]
    fn cover_on_inverse_system() {
        let r = ring4();
        let m: ModuleRef<Q> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let mh = slice_element(m.as_ref(), "x^-1*y^-2", 0).unwrap();
        let nh = slice_element(m.as_ref(), "x^-2*y^-1", 0).unwrap();
        let (x, y) = (r.parse("x").unwrap(), r.parse("y").unwrap());
        let w = cyclic_cover(&m, &mh, &nh, &x, &y, &Budget::fine(-4, 1)).unwrap();
        assert_eq!((w.i, w.j), (1, 1));
        assert_eq!(w.alpha, "x^-1*y^-3 + x^-3*y^-1");
        assert_eq!(w.transcripts.len(), 2);
    }

    #[test]
    fn cover_of_an_element_with_itself() {
        let r = ring4();
        let m: ModuleRef<Q> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let h = slice_element(m.as_ref(), "x^-1*y^-1", 0).unwrap();
        let (x, y) = (r.parse("x").unwrap(), r.parse("y").unwrap());
        let w = cyclic_cover(&m, &h, &h, &x, &y, &Budget::fine(-3, 1)).unwrap();
        assert_eq!((w.i, w.j), (1, 1));
    }

    #[test]
    fn cover_needs_a_coregular_pair() {
        let r = ring4();
        let (_, _, s) = skew(&r);
        let m: ModuleRef<Q> = Arc::new(s);
        let mh = slice_element(m.as_ref(), "x^-1*y^-1", 0).unwrap();
        let (x, y) = (r.parse("x*z").unwrap(), r.parse("y*w").unwrap());
        let e = cyclic_cover(&m, &mh, &mh, &x, &y, &Budget::fine(-2, 1));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn search_finds_a_common_generator() {
        let r = ring4();
        let m = InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap();
        let mh = slice_element(&m, "x^-1*y^-2", 0).unwrap();
        let nh = slice_element(&m, "x^-2*y^-1", 0).unwrap();
        let out = pair_in_cyclic_search(&m, &mh, &nh, &bounds(), &Budget::fine(-4, 1)).unwrap();
        match out {
            PairSearch::Witness(w) => {
                // lowest total degree comes first
                assert_eq!(w.alpha_text, "x^-4*y^-2");
                let f = r.parse(&w.f).unwrap();
                let g = r.parse(&w.g).unwrap();
                assert_eq!(apply_mult(&m, &f, &w.alpha).unwrap(), mh);
                assert_eq!(apply_mult(&m, &g, &w.alpha).unwrap(), nh);
            }
            other => panic!("{}", other.describe()),
        }
    }

    #[test]
    fn skew_socles_are_obstructed() {
        let r = ring4();
        let (a, b, s) = skew(&r);
        let mh = slice_element(&s, "x^-1*y^-1", 0).unwrap();
        let nh = slice_element(&s, "z^-1*w^-1", 0).unwrap();
        let budget = Budget::fine(-4, 4);
        let out = skew_socle_obstruction(&a, &b, &mh, &nh, &bounds(), &budget).unwrap();
        assert!(matches!(out, SocleOutcome::Structural(_)));
        assert!(!pair_in_cyclic_search(&s, &mh, &nh, &bounds(), &budget).unwrap().found());
    }

    #[test]
    fn same_summand_falls_back_to_search() {
        let r = ring4();
        let (a, b, s) = skew(&r);
        let mh = slice_element(&s, "x^-1*y^-1", 0).unwrap();
        let nh = slice_element(&s, "x^-1*y^-1*z", 0).unwrap();
        match skew_socle_obstruction(&a, &b, &mh, &nh, &bounds(), &Budget::fine(-3, 3)).unwrap() {
            SocleOutcome::Search(p) => assert!(p.found()),
            SocleOutcome::Structural(o) => panic!("{}", o.describe()),
        }
    }

    #[test]
    fn overlapping_summands_are_rejected() {
        let r = ring4();
        let a = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let s = DirectSum::new(a.clone(), a.clone()).unwrap();
        let mh = slice_element(&s, "x^-1*y^-1", 0).unwrap();
        let e = skew_socle_obstruction(&a, &a, &mh, &mh, &bounds(), &Budget::fine(-2, 2));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_element_is_covered_by_the_other() {
        let r = ring4();
        let m = InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap();
        let nh = slice_element(&m, "x^-2*y^-1", 0).unwrap();
        let zero = ElementHandle { key: nh.key.clone(), coeffs: SparseVec::new() };
        match pair_in_cyclic_search(&m, &zero, &nh, &bounds(), &Budget::fine(-2, 2)).unwrap() {
            PairSearch::Witness(w) => assert_eq!(w.alpha, nh),
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn localization_modulo_ring_is_covered_by_a_power() {
        // A_x / A in k[x, y]: any two elements are covered by a single x^-N y^b
        let r = Ring::fine(Rationals, 2);
        let x = r.parse("x").unwrap();
        let m = local_cohomology_module(&r, &[x], 1).unwrap();
        let key = |g: &[i64]| Key::exact(g);
        let mh = ElementHandle { key: key(&[-1, 2]), coeffs: SparseVec::unit(&Rationals, 0) };
        let nh = ElementHandle { key: key(&[-3, 0]), coeffs: SparseVec::unit(&Rationals, 0) };
        let b = SearchBounds { alpha_lo: -4, alpha_hi: 2, deg_cap: 4 };
        assert!(pair_in_cyclic_search(m.as_ref(), &mh, &nh, &b, &Budget::fine(-4, 3)).unwrap().found());
    }
}
