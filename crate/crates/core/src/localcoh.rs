//! Local cohomology through the Čech complex on the generators of `I`.
//!
//! Under the fine grading (monomial generators) each localization slice is a
//! single Laurent monomial or zero, so the complex is combinatorial and exact.
//! Otherwise the level-`N` subcomplex has `m / f_S^N` as basis of its `S`
//! component; raising the level multiplies numerators by `f_S`, and local
//! cohomology is the colimit over levels.

use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::{probe, Budget, Probe};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{grade_add, grade_scale, Grade};
use crate::linalg::{Matrix, SparseVec, Subquotient};
use crate::module::{check_key, Backend, GradedModule, Key, Memo, ModuleRef};
use crate::poly::{Exponent, Polynomial};
use crate::ring::RingRef;
use crate::store::{SliceStore, StoredSlice};

/// Index subsets of `0..s` of size `p`, lexicographic.
pub fn subsets(s: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, s: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..s {
            cur.push(i);
            go(i + 1, s, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, s, p, &mut Vec::new(), &mut out);
    out
}

/// Sign of the face map `S -> S ∪ {t}`: `(-1)^(position of t)`.
pub fn face_sign(s: &[usize], t: usize) -> bool {
    s.iter().filter(|&&i| i < t).count() % 2 == 1
}

struct Component {
    subset: Vec<usize>,
    offset: usize,
    basis: Arc<Vec<Exponent>>,
    index: HashMap<Exponent, usize>,
}

struct Layout {
    comps: Vec<Component>,
    dim: usize,
}

impl Layout {
    fn comp_of(&self, subset: &[usize]) -> Option<&Component> {
        self.comps.iter().find(|c| c.subset == subset)
    }
}

pub struct CechComplex<F: Field> {
    ring: RingRef<F>,
    gens: Vec<Polynomial<F>>,
    degs: Vec<Grade>,
    exact: bool,
    supports: Vec<Vec<bool>>,
    powers: Memo<(Vec<usize>, u32), Polynomial<F>>,
    layouts: Memo<(usize, Key), Arc<Layout>>,
    diffs: Memo<(usize, Key), Arc<Matrix<F::Elem>>>,
}

impl<F: Field> CechComplex<F> {
    pub fn new(ring: &RingRef<F>, gens: &[Polynomial<F>]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Precondition("Čech complex needs at least one generator".into()));
        }
        let mut degs = Vec::new();
        for g in gens {
            if g.is_zero() {
                return Err(Error::Precondition("zero generator".into()));
            }
            if !g.is_polynomial() {
                return Err(Error::Precondition(format!("{} is not a polynomial", ring.render(g))));
            }
            degs.push(ring.degree_of(g)?);
        }
        let exact = ring.grading().is_fine();
        let supports = gens
            .iter()
            .map(|g| {
                let (e, _) = g.leading_term().expect("nonzero");
                e.0.iter().map(|&a| a > 0).collect()
            })
            .collect();
        Ok(CechComplex {
            ring: ring.clone(),
            gens: gens.to_vec(),
            degs,
            exact,
            supports,
            powers: Memo::new(),
            layouts: Memo::new(),
            diffs: Memo::new(),
        })
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn norm(&self, key: &Key) -> Key {
        if self.exact {
            key.at_level(0)
        } else {
            key.clone()
        }
    }

    fn subset_degree(&self, s: &[usize]) -> Grade {
        let mut d = Grade::from_elem(0, self.ring.grading().rank());
        for &i in s {
            d = grade_add(&d, &self.degs[i]);
        }
        d
    }

    /// `(prod_{i in S} f_i)^n`.
    fn power(&self, s: &[usize], n: u32) -> Result<Polynomial<F>> {
        self.powers.get_or(&(s.to_vec(), n), || {
            let mut p = Polynomial::one(self.ring.field(), self.ring.nvars());
            for &i in s {
                p = p.checked_mul(&self.gens[i])?;
            }
            Ok(p.pow(n))
        })
    }

    fn component_basis(&self, s: &[usize], key: &Key) -> Arc<Vec<Exponent>> {
        if self.exact {
            let ok = key.grade.iter().enumerate().all(|(j, &a)| {
                a >= 0 || s.iter().any(|&i| self.supports[i][j])
            });
            let e = Exponent(key.grade.iter().map(|&a| a as i32).collect());
            Arc::new(if ok { vec![e] } else { Vec::new() })
        } else {
            let shift = grade_scale(&self.subset_degree(s), key.level as i64);
            self.ring.grading().monomials(&grade_add(&key.grade, &shift))
        }
    }

    fn layout(&self, p: usize, key: &Key) -> Result<Arc<Layout>> {
        check_grade(&self.ring, key)?;
        let key = self.norm(key);
        self.layouts.get_or(&(p, key.clone()), || {
            let mut comps = Vec::new();
            let mut offset = 0;
            if p <= self.gens.len() {
                for s in subsets(self.gens.len(), p) {
                    let basis = self.component_basis(&s, &key);
                    let index = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
                    let n = basis.len();
                    comps.push(Component {
                        subset: s,
                        offset,
                        basis,
                        index,
                    });
                    offset += n;
                }
            }
            Ok(Arc::new(Layout { comps, dim: offset }))
        })
    }

    /// Dimension of `C^p` at the slice.
    pub fn term_dim(&self, p: usize, key: &Key) -> Result<usize> {
        Ok(self.layout(p, key)?.dim)
    }

    /// Basis labels of `C^p`: `m/(f_S)^N`, or the Laurent monomial when exact.
    pub fn term_labels(&self, p: usize, key: &Key) -> Result<Vec<String>> {
        let l = self.layout(p, key)?;
        let mut out = Vec::with_capacity(l.dim);
        for c in &l.comps {
            let names: Vec<String> = c.subset.iter().map(|i| format!("f{}", i + 1)).collect();
            for m in c.basis.iter() {
                let num = self.ring.render_monomial(m);
                if self.exact || c.subset.is_empty() {
                    out.push(format!("{num}[{}]", names.join("")));
                } else {
                    out.push(format!("{num}/({})^{}", names.join(""), key.level));
                }
            }
        }
        Ok(out)
    }

    /// Builds the matrix from `C^p` at `src` to `C^q` at `dst` where each
    /// source component `S` contributes `sign * multiplier` into target components.
    fn assemble(
        &self,
        src: &Layout,
        dst: &Layout,
        targets: impl Fn(&[usize]) -> Result<Vec<(Vec<usize>, bool, Polynomial<F>)>>,
    ) -> Result<Matrix<F::Elem>> {
        let field = self.ring.field();
        let mut cols: Vec<SparseVec<F::Elem>> = Vec::with_capacity(src.dim);
        for c in &src.comps {
            let tgts = targets(&c.subset)?;
            let resolved: Vec<(&Component, bool, &Polynomial<F>)> = tgts
                .iter()
                .filter_map(|(t, neg, p)| dst.comp_of(t).map(|tc| (tc, *neg, p)))
                .collect();
            for m in c.basis.iter() {
                let mut acc: std::collections::BTreeMap<usize, F::Elem> = Default::default();
                for (tc, neg, p) in &resolved {
                    for (e, coef) in p.terms() {
                        let target = e.add(m);
                        if let Some(&i) = tc.index.get(&target) {
                            let v = if *neg { field.neg(coef) } else { coef.clone() };
                            let slot = acc.entry(tc.offset + i).or_insert_with(|| field.zero());
                            *slot = field.add(slot, &v);
                        } else {
                            debug_assert!(self.exact, "level numerator left its slice");
                        }
                    }
                }
                cols.push(SparseVec::from_map(field, acc));
            }
        }
        Ok(Matrix::from_columns(dst.dim, cols))
    }

    /// The differential `C^p -> C^{p+1}` at the slice.
    pub fn differential(&self, p: usize, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        let key = self.norm(key);
        self.diffs.get_or(&(p, key.clone()), || {
            let src = self.layout(p, &key)?;
            let dst = self.layout(p + 1, &key)?;
            let s = self.gens.len();
            let m = self.assemble(&src, &dst, |subset| {
                let mut out = Vec::new();
                for t in (0..s).filter(|t| !subset.contains(t)) {
                    let mut tgt = subset.to_vec();
                    tgt.push(t);
                    tgt.sort_unstable();
                    let mult = if self.exact {
                        Polynomial::one(self.ring.field(), self.ring.nvars())
                    } else {
                        self.power(&[t], key.level)?
                    };
                    out.push((tgt, face_sign(subset, t), mult));
                }
                Ok(out)
            })?;
            Ok(Arc::new(m))
        })
    }

    /// Multiplication by `f` on `C^p`, same level.
    pub fn term_mult(&self, p: usize, f: &Polynomial<F>, key: &Key) -> Result<Matrix<F::Elem>> {
        let deg = self.ring.degree_of(f)?;
        let src = self.layout(p, key)?;
        let dst = self.layout(p, &key.shifted(&deg))?;
        self.assemble(&src, &dst, |s| Ok(vec![(s.to_vec(), false, f.clone())]))
    }

    /// Level transition on `C^p`: numerators times `f_S`.
    pub fn term_transition(&self, p: usize, key: &Key) -> Result<Matrix<F::Elem>> {
        let src = self.layout(p, key)?;
        if self.exact {
            return Ok(Matrix::identity(self.ring.field(), src.dim));
        }
        let dst = self.layout(p, &key.at_level(key.level + 1))?;
        self.assemble(&src, &dst, |s| Ok(vec![(s.to_vec(), false, self.power(s, 1)?)]))
    }

    /// `d^{p+1} ∘ d^p` vanishes at the slice.
    pub fn check_dd(&self, p: usize, key: &Key) -> Result<bool> {
        let d0 = self.differential(p, key)?;
        let d1 = self.differential(p + 1, key)?;
        Ok(d1.mul(self.ring.field(), &d0).is_zero())
    }

    fn cohomology(&self, i: usize, key: &Key) -> Result<Subquotient<F>> {
        let field = self.ring.field();
        let n = self.term_dim(i, key)?;
        let cycles: Vec<SparseVec<F::Elem>> = if i >= self.gens.len() {
            (0..n).map(|k| SparseVec::unit(field, k)).collect()
        } else {
            self.differential(i, key)?.kernel(field)
        };
        let boundaries: Vec<SparseVec<F::Elem>> = if i == 0 {
            Vec::new()
        } else {
            self.differential(i - 1, key)?.columns().to_vec()
        };
        Ok(Subquotient::new(field, n, &boundaries, &cycles))
    }
}

fn check_grade<F: Field>(ring: &RingRef<F>, key: &Key) -> Result<()> {
    ring.grading().check_grade(&key.grade)
}

/// `H^i_I(A)` as a graded module; slices are Čech cohomology slices.
pub struct CechCohomology<F: Field> {
    complex: Arc<CechComplex<F>>,
    index: usize,
    slices: Memo<Key, Arc<Subquotient<F>>>,
    mults: Memo<(Polynomial<F>, Key), Arc<Matrix<F::Elem>>>,
    trans: Memo<Key, Arc<Matrix<F::Elem>>>,
    store: Option<Arc<dyn SliceStore>>,
}

impl<F: Field> CechCohomology<F> {
    pub fn new(complex: Arc<CechComplex<F>>, index: usize) -> Result<Self> {
        if index > complex.len() {
            return Err(Error::Precondition(format!(
                "cohomological index {index} exceeds the number of generators {}",
                complex.len()
            )));
        }
        Ok(CechCohomology {
            complex,
            index,
            slices: Memo::new(),
            mults: Memo::new(),
            trans: Memo::new(),
            store: None,
        })
    }

    pub fn with_store(mut self, store: Arc<dyn SliceStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn complex(&self) -> &Arc<CechComplex<F>> {
        &self.complex
    }

    pub fn index(&self) -> usize {
        self.index
    }

    fn store_id(&self) -> String {
        format!("{} {}", self.complex.ring.describe(), self.descriptor())
    }

    pub fn slice(&self, key: &Key) -> Result<Arc<Subquotient<F>>> {
        check_key(self, key)?;
        let key = self.complex.norm(key);
        self.slices.get_or(&key, || {
            let field = self.field();
            if let Some(store) = &self.store {
                if let Some(s) = store.load(&self.store_id(), &key.to_string()) {
                    if let Ok(sq) = s.to_subquotient(field) {
                        if sq.ambient() == self.complex.term_dim(self.index, &key)? {
                            return Ok(Arc::new(sq));
                        }
                    }
                }
            }
            let sq = self.complex.cohomology(self.index, &key)?;
            if let Some(store) = &self.store {
                store.save(
                    &self.store_id(),
                    &key.to_string(),
                    &StoredSlice::from_subquotient(field, &sq),
                );
            }
            Ok(Arc::new(sq))
        })
    }

    /// A cocycle representing the class with the given coordinates.
    pub fn cocycle(&self, key: &Key, coords: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
        Ok(self.slice(key)?.lift(self.field(), coords))
    }

    /// Rendering of a cocycle as a sum of fractions.
    pub fn render_cocycle(&self, key: &Key, v: &SparseVec<F::Elem>) -> Result<String> {
        let labels = self.complex.term_labels(self.index, key)?;
        Ok(crate::module::render_combination(self.field(), &labels, v))
    }

    fn induced(&self, map: &Matrix<F::Elem>, src: &Key, dst: &Key) -> Result<Matrix<F::Elem>> {
        let s = self.slice(src)?;
        let t = self.slice(dst)?;
        let field = self.field();
        let cols = s
            .reps()
            .iter()
            .map(|r| t.coords(&map.apply(field, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(t.dim(), cols))
    }
}

impl<F: Field> GradedModule<F> for CechCohomology<F> {
    fn ring(&self) -> &RingRef<F> {
        &self.complex.ring
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        &self.complex.gens
    }

    fn descriptor(&self) -> String {
        let g: Vec<String> = self.complex.gens.iter().map(|p| self.ring().render(p)).collect();
        format!("H^{}_({})", self.index, g.join(", "))
    }

    fn backend(&self) -> Backend {
        Backend::TruncatedLocalizationQuotient
    }

    fn is_exact(&self) -> bool {
        self.complex.exact
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        Ok(self.slice(key)?.dim())
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        let d = self.dim(key)?;
        if self.complex.exact {
            let e = Exponent(key.grade.iter().map(|&a| a as i32).collect());
            let m = self.ring().render_monomial(&e);
            if d == 1 {
                return Ok(vec![m]);
            }
            return Ok((0..d).map(|k| format!("{m}#{k}")).collect());
        }
        Ok((0..d).map(|k| format!("c{k}")).collect())
    }

    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        check_key(self, key)?;
        let key = self.complex.norm(key);
        let deg = self.ring().degree_of(f)?;
        self.mults.get_or(&(f.clone(), key.clone()), || {
            let dst = key.shifted(&deg);
            let m = self.complex.term_mult(self.index, f, &key)?;
            Ok(Arc::new(self.induced(&m, &key, &dst)?))
        })
    }

    fn transition(&self, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        if self.is_exact() {
            return crate::module::identity_transition(self, key);
        }
        self.trans.get_or(key, || {
            let m = self.complex.term_transition(self.index, key)?;
            Ok(Arc::new(self.induced(&m, key, &key.at_level(key.level + 1))?))
        })
    }
}

/// `H^i_I(A)` for `I = (gens)` as a module over the ring's grading.
pub fn local_cohomology_module<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    i: usize,
) -> Result<Arc<CechCohomology<F>>> {
    let complex = Arc::new(CechComplex::new(ring, gens)?);
    let m = CechCohomology::new(complex, i)?;
    Ok(Arc::new(match crate::store::installed() {
        Some(store) => m.with_store(store),
        None => m,
    }))
}

/// Basis of a localization slice `m / (prod_{s in S} f_s)^N` in total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationSlice {
    pub degree: i64,
    pub level: u32,
    pub numerators: Vec<Exponent>,
    pub labels: Vec<String>,
}

/// The `S` term of the level-`N` Čech complex at total degree `d`.
pub fn truncated_localization_slice<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    subset: &[usize],
    d: i64,
    level: u32,
) -> Result<LocalizationSlice> {
    if subset.is_empty() {
        return Err(Error::Precondition("empty subset".into()));
    }
    let mut shift = 0;
    for &i in subset {
        let g = gens
            .get(i)
            .ok_or_else(|| Error::Validation(format!("subset index {i} out of range")))?;
        shift += g
            .homogeneous_degree()
            .ok_or_else(|| Error::NotHomogeneous(ring.render(g)))?;
    }
    let numerators = crate::poly::monomials_of_degree(ring.nvars(), d + level as i64 * shift);
    let den: Vec<String> = subset.iter().map(|i| format!("f{}", i + 1)).collect();
    let labels = numerators
        .iter()
        .map(|m| format!("{}/({})^{}", ring.render_monomial(m), den.join(""), level))
        .collect();
    Ok(LocalizationSlice {
        degree: d,
        level,
        numerators,
        labels,
    })
}

/// Transition of a localization slice to the next level: numerators times `f_S`,
/// columns over the source basis.
pub fn localization_transition<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    subset: &[usize],
    src: &LocalizationSlice,
) -> Result<Matrix<F::Elem>> {
    let dst = truncated_localization_slice(ring, gens, subset, src.degree, src.level + 1)?;
    let mut f = Polynomial::one(ring.field(), ring.nvars());
    for &i in subset {
        f = f.checked_mul(&gens[i])?;
    }
    let index: HashMap<&Exponent, usize> = dst.numerators.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let cols = src
        .numerators
        .iter()
        .map(|m| {
            let mut entries: Vec<(usize, F::Elem)> =
                f.terms().map(|(e, c)| (index[&e.add(m)], c.clone())).collect();
            entries.sort_by_key(|e| e.0);
            SparseVec { entries }
        })
        .collect();
    Ok(Matrix::from_columns(dst.numerators.len(), cols))
}

/// A Čech cohomology slice with its colimit data.
#[derive(Clone, Debug)]
pub struct LocalCohomologySlice<E> {
    pub index: usize,
    pub grade: Grade,
    pub probe: Probe<E>,
    pub labels: Vec<String>,
}

impl<E> LocalCohomologySlice<E> {
    pub fn dim(&self) -> Option<usize> {
        self.probe.estimate()
    }
}

/// Cohomology `H^i` of the Čech complex at one grade under the budget.
pub fn cech_cohomology<F: Field>(
    ring: &RingRef<F>,
    gens: &[Polynomial<F>],
    i: usize,
    grade: &Grade,
    budget: &Budget,
) -> Result<LocalCohomologySlice<F::Elem>> {
    let m = local_cohomology_module(ring, gens, i)?;
    let p = probe(m.as_ref(), grade, budget)?;
    let top = Key::new(grade.clone(), p.top_level());
    Ok(LocalCohomologySlice {
        index: i,
        grade: grade.clone(),
        labels: m.labels(&top)?,
        probe: p,
    })
}

/// One slice of a Mayer-Vietoris additivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityRow {
    pub grade: Grade,
    pub intersection: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Debug)]
pub struct MayerVietorisReport {
    pub index: usize,
    pub rows: Vec<AdditivityRow>,
    pub violations: Vec<AdditivityRow>,
    pub sum_ideal_vanishes: bool,
}

/// Compares `dim H^i_{I1 ∩ I2}` with `dim H^i_{I1} + dim H^i_{I2}` on every
/// fine grade of the box. The intersection of monomial ideals is generated
/// by the pairwise lcms.
pub fn mayer_vietoris_check<F: Field>(
    ring: &RingRef<F>,
    i1: &[Polynomial<F>],
    i2: &[Polynomial<F>],
    i: usize,
    budget: &Budget,
) -> Result<MayerVietorisReport> {
    if !ring.grading().is_fine() {
        return Err(Error::Precondition("Mayer-Vietoris check runs on monomial ideals".into()));
    }
    let field = ring.field();
    let mut inter: Vec<Polynomial<F>> = Vec::new();
    for f in i1.iter().chain(i2) {
        if !f.is_monomial() {
            return Err(Error::Precondition(format!("{} is not a monomial", ring.render(f))));
        }
    }
    for f in i1 {
        for g in i2 {
            let (a, _) = f.leading_term().expect("monomial");
            let (b, _) = g.leading_term().expect("monomial");
            let l = Exponent(a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect());
            let p = Polynomial::monomial(field, l, field.one());
            if !inter.contains(&p) {
                inter.push(p);
            }
        }
    }
    let sum: Vec<Polynomial<F>> = i1.iter().chain(i2).cloned().collect();
    let m_int = local_cohomology_module(ring, &inter, i)?;
    let m1 = local_cohomology_module(ring, i1, i)?;
    let m2 = local_cohomology_module(ring, i2, i)?;
    // the boundary terms H^i_{I1+I2} and H^{i+1}_{I1+I2}
    let s_i = local_cohomology_module(ring, &sum, i)?;
    let s_next = local_cohomology_module(ring, &sum, i + 1)?;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut sum_ideal_vanishes = true;
    for grade in budget.grades(ring.grading())? {
        let key = Key::new(grade.clone(), 0);
        if s_i.dim(&key)? != 0 || s_next.dim(&key)? != 0 {
            sum_ideal_vanishes = false;
        }
        let row = AdditivityRow {
            intersection: m_int.dim(&key)?,
            first: m1.dim(&key)?,
            second: m2.dim(&key)?,
            grade,
        };
        if row.intersection != row.first + row.second {
            violations.push(row.clone());
        }
        rows.push(row);
    }
    Ok(MayerVietorisReport {
        index: i,
        rows,
        violations,
        sum_ideal_vanishes,
    })
}

/// Convenience: the module handle as a trait object.
pub fn as_module<F: Field>(m: Arc<CechCohomology<F>>) -> ModuleRef<F> {
    m
}
