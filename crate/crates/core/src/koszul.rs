//! Koszul cohomology `H^i(x_1..x_r; M)` over any graded module.
//!
//! The term `K^p` at grade `g` is the sum over `p`-subsets `S` (lexicographic)
//! of `M` at `g + deg x_S`, and the differential sends the `S` block to the
//! `S ∪ {t}` block by `(-1)^(position of t) * x_t`. With this twist every
//! differential preserves `g`, `H^0 = 0 :_M (x)` and `H^r = M / (x)M` at `g + deg x`.
//! For truncated modules the complex is built levelwise and the transitions of
//! `M` act blockwise.

use std::sync::Arc;

use crate::budget::{probe, Budget, Probe};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{grade_add, render_grade, Grade};
use crate::linalg::{Matrix, SparseVec, Subquotient};
use crate::localcoh::{face_sign, subsets};
use crate::module::{check_key, norm_key, require_in_ambient, Backend, GradedModule, Key, Memo, ModuleRef};
use crate::poly::Polynomial;
use crate::ring::RingRef;

struct Block {
    subset: Vec<usize>,
    key: Key,
    offset: usize,
}

struct Layout {
    blocks: Vec<Block>,
    dim: usize,
}

impl Layout {
    fn block(&self, subset: &[usize]) -> Option<&Block> {
        self.blocks.iter().find(|b| b.subset == subset)
    }
}

pub struct KoszulComplex<F: Field> {
    module: ModuleRef<F>,
    seq: Vec<Polynomial<F>>,
    degs: Vec<Grade>,
    layouts: Memo<(usize, Key), Arc<Layout>>,
    diffs: Memo<(usize, Key), Arc<Matrix<F::Elem>>>,
}

impl<F: Field> KoszulComplex<F> {
    /// The empty sequence gives `M` in degree 0.
    pub fn new(module: ModuleRef<F>, seq: &[Polynomial<F>]) -> Result<Self> {
        let degs = seq
            .iter()
            .map(|x| module.ring().degree_of(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(KoszulComplex {
            module,
            seq: seq.to_vec(),
            degs,
            layouts: Memo::new(),
            diffs: Memo::new(),
        })
    }

    pub fn module(&self) -> &ModuleRef<F> {
        &self.module
    }

    pub fn seq(&self) -> &[Polynomial<F>] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn field(&self) -> &F {
        self.module.field()
    }

    fn norm(&self, key: &Key) -> Key {
        norm_key(self.module.as_ref(), key)
    }

    fn layout(&self, p: usize, key: &Key) -> Result<Arc<Layout>> {
        check_key(self.module.as_ref(), key)?;
        let key = self.norm(key);
        self.layouts.get_or(&(p, key.clone()), || {
            let mut blocks = Vec::new();
            let mut offset = 0;
            if p <= self.seq.len() {
                for s in subsets(self.seq.len(), p) {
                    let mut g = key.grade.clone();
                    for &i in &s {
                        g = grade_add(&g, &self.degs[i]);
                    }
                    let bkey = Key::new(g, key.level);
                    let dim = self.module.dim(&bkey)?;
                    blocks.push(Block {
                        subset: s,
                        key: bkey,
                        offset,
                    });
                    offset += dim;
                }
            }
            Ok(Arc::new(Layout { blocks, dim: offset }))
        })
    }

    pub fn term_dim(&self, p: usize, key: &Key) -> Result<usize> {
        Ok(self.layout(p, key)?.dim)
    }

    /// Labels `e_S ⊗ label` of `K^p`.
    pub fn term_labels(&self, p: usize, key: &Key) -> Result<Vec<String>> {
        let l = self.layout(p, key)?;
        let mut out = Vec::with_capacity(l.dim);
        for b in &l.blocks {
            let s: Vec<String> = b.subset.iter().map(|i| (i + 1).to_string()).collect();
            for lab in self.module.labels(&b.key)? {
                out.push(format!("e{{{}}}*{lab}", s.join(",")));
            }
        }
        Ok(out)
    }

    /// The differential `K^p -> K^{p+1}` at the slice.
    pub fn differential(&self, p: usize, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        let key = self.norm(key);
        self.diffs.get_or(&(p, key.clone()), || {
            let src = self.layout(p, &key)?;
            let dst = self.layout(p + 1, &key)?;
            let mut parts = Vec::new();
            for b in &src.blocks {
                for t in (0..self.seq.len()).filter(|t| !b.subset.contains(t)) {
                    let mut s = b.subset.clone();
                    s.push(t);
                    s.sort_unstable();
                    let tb = dst.block(&s).expect("target block");
                    let m = self.module.mult(&self.seq[t], &b.key)?;
                    parts.push((tb.offset, b.offset, m, face_sign(&b.subset, t)));
                }
            }
            let refs: Vec<(usize, usize, &Matrix<F::Elem>, bool)> =
                parts.iter().map(|(r, c, m, n)| (*r, *c, m.as_ref(), *n)).collect();
            Ok(Arc::new(Matrix::from_blocks(self.field(), dst.dim, src.dim, &refs)))
        })
    }

    fn blockwise(
        &self,
        src: &Layout,
        dst: &Layout,
        map: impl Fn(&Block) -> Result<Arc<Matrix<F::Elem>>>,
    ) -> Result<Matrix<F::Elem>> {
        let mut parts = Vec::new();
        for b in &src.blocks {
            let tb = dst.block(&b.subset).expect("matching block");
            parts.push((tb.offset, b.offset, map(b)?));
        }
        let refs: Vec<(usize, usize, &Matrix<F::Elem>, bool)> =
            parts.iter().map(|(r, c, m)| (*r, *c, m.as_ref(), false)).collect();
        Ok(Matrix::from_blocks(self.field(), dst.dim, src.dim, &refs))
    }

    /// Multiplication by `f` on `K^p`, same level.
    pub fn term_mult(&self, p: usize, f: &Polynomial<F>, key: &Key) -> Result<Matrix<F::Elem>> {
        let deg = self.module.ring().degree_of(f)?;
        let src = self.layout(p, key)?;
        let dst = self.layout(p, &key.shifted(&deg))?;
        self.blockwise(&src, &dst, |b| self.module.mult(f, &b.key))
    }

    /// Level transition on `K^p`.
    pub fn term_transition(&self, p: usize, key: &Key) -> Result<Matrix<F::Elem>> {
        let src = self.layout(p, key)?;
        if self.module.is_exact() {
            return Ok(Matrix::identity(self.field(), src.dim));
        }
        let dst = self.layout(p, &key.at_level(key.level + 1))?;
        self.blockwise(&src, &dst, |b| self.module.transition(&b.key))
    }

    /// `d^{p+1} ∘ d^p` vanishes at the slice.
    pub fn check_dd(&self, p: usize, key: &Key) -> Result<bool> {
        let d0 = self.differential(p, key)?;
        let d1 = self.differential(p + 1, key)?;
        Ok(d1.mul(self.field(), &d0).is_zero())
    }

    fn cohomology(&self, i: usize, key: &Key) -> Result<Subquotient<F>> {
        let field = self.field();
        let n = self.term_dim(i, key)?;
        let cycles: Vec<SparseVec<F::Elem>> = if i >= self.seq.len() {
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

/// `H^i(x; M)` as a graded module, with multiplication and transitions induced
/// from the complex.
pub struct KoszulCohomology<F: Field> {
    complex: Arc<KoszulComplex<F>>,
    index: usize,
    slices: Memo<Key, Arc<Subquotient<F>>>,
    mults: Memo<(Polynomial<F>, Key), Arc<Matrix<F::Elem>>>,
    trans: Memo<Key, Arc<Matrix<F::Elem>>>,
}

impl<F: Field> KoszulCohomology<F> {
    pub fn new(complex: Arc<KoszulComplex<F>>, index: usize) -> Result<Self> {
        if index > complex.len() {
            return Err(Error::Precondition(format!(
                "Koszul index {index} exceeds the sequence length {}",
                complex.len()
            )));
        }
        Ok(KoszulCohomology {
            complex,
            index,
            slices: Memo::new(),
            mults: Memo::new(),
            trans: Memo::new(),
        })
    }

    pub fn complex(&self) -> &Arc<KoszulComplex<F>> {
        &self.complex
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn slice(&self, key: &Key) -> Result<Arc<Subquotient<F>>> {
        check_key(self, key)?;
        let key = self.complex.norm(key);
        self.slices
            .get_or(&key, || Ok(Arc::new(self.complex.cohomology(self.index, &key)?)))
    }

    /// Rendering of a cocycle of `K^i` over the term labels.
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

impl<F: Field> GradedModule<F> for KoszulCohomology<F> {
    fn ring(&self) -> &RingRef<F> {
        self.complex.module.ring()
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        self.complex.module.ambient_ideal()
    }

    fn descriptor(&self) -> String {
        let s: Vec<String> = self.complex.seq.iter().map(|p| self.ring().render(p)).collect();
        format!("H^{}({}; {})", self.index, s.join(", "), self.complex.module.descriptor())
    }

    fn backend(&self) -> Backend {
        Backend::Koszul
    }

    fn is_exact(&self) -> bool {
        self.complex.module.is_exact()
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        Ok(self.slice(key)?.dim())
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        let s = self.slice(key)?;
        s.reps().iter().map(|r| self.render_cocycle(key, r)).collect()
    }

    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        check_key(self, key)?;
        let key = self.complex.norm(key);
        let deg = self.ring().degree_of(f)?;
        self.mults.get_or(&(f.clone(), key.clone()), || {
            let m = self.complex.term_mult(self.index, f, &key)?;
            Ok(Arc::new(self.induced(&m, &key, &key.shifted(&deg))?))
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

/// `H^i(seq; M)` as a module. Every element of `seq` must lie in the ambient
/// ideal of `M` (modules without an ambient ideal accept any sequence).
pub fn koszul_module<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    i: usize,
) -> Result<Arc<KoszulCohomology<F>>> {
    for x in seq {
        require_in_ambient(m.as_ref(), x)?;
    }
    let complex = Arc::new(KoszulComplex::new(m.clone(), seq)?);
    Ok(Arc::new(KoszulCohomology::new(complex, i)?))
}

/// A Koszul cohomology slice with its colimit data.
#[derive(Clone, Debug)]
pub struct KoszulSlice<E> {
    pub index: usize,
    pub grade: Grade,
    pub probe: Probe<E>,
    pub labels: Vec<String>,
}

impl<E> KoszulSlice<E> {
    pub fn dim(&self) -> Option<usize> {
        self.probe.estimate()
    }
}

pub fn koszul_cohomology<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    i: usize,
    grade: &Grade,
    budget: &Budget,
) -> Result<KoszulSlice<F::Elem>> {
    if seq.is_empty() {
        return Err(Error::Precondition("empty Koszul sequence".into()));
    }
    let h = koszul_module(seq, m, i)?;
    let p = probe(h.as_ref(), grade, budget)?;
    let top = Key::new(grade.clone(), p.top_level());
    Ok(KoszulSlice {
        index: i,
        grade: grade.clone(),
        labels: h.labels(&top)?,
        probe: p,
    })
}

/// One position of the long exact sequence
/// `H^{j-1}(x'; M)(+d_r) -> H^j(x; M) -> H^j(x'; M) --δ_j--> H^j(x'; M)(+d_r)`
/// where `x' = x_1..x_{r-1}` and `δ_j = ±x_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesRow {
    pub j: usize,
    /// `dim H^j(x'; M)` at the slice.
    pub short: usize,
    /// `dim H^j(x'; M)` at the slice shifted by `deg x_r`.
    pub short_shifted: usize,
    /// `dim H^j(x; M)` at the slice.
    pub full: usize,
    /// Rank of `δ_j`.
    pub delta_rank: usize,
    /// `full = coker δ_{j-1} + ker δ_j`.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub key: Key,
    pub rows: Vec<LesRow>,
    /// Rank of the connecting map at the requested index.
    pub delta_rank: usize,
    /// The shorter sequence is empty, so the complex is `M --x--> M` only.
    pub two_term: bool,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }

    pub fn describe(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "j={} H'={} H'(+d)={} H={} rank δ={}{}",
                    r.j,
                    r.short,
                    r.short_shifted,
                    r.full,
                    r.delta_rank,
                    if r.exact { "" } else { " NOT EXACT" }
                )
            })
            .collect();
        format!("{} {}", render_grade(&self.key.grade), rows.join("; "))
    }
}

/// Ranks of the connecting maps relating `K(x_1..x_{r-1}; M)` and
/// `K(x_1..x_r; M)` at one slice, with the exactness bookkeeping.
pub fn koszul_les_probe<F: Field>(
    seq: &[Polynomial<F>],
    m: &ModuleRef<F>,
    i: usize,
    key: &Key,
) -> Result<LesReport> {
    let r = seq.len();
    if r == 0 {
        return Err(Error::Precondition("empty Koszul sequence".into()));
    }
    if i > r {
        return Err(Error::Precondition(format!("index {i} exceeds the sequence length {r}")));
    }
    let last = &seq[r - 1];
    let deg = m.ring().degree_of(last)?;
    let shifted = key.shifted(&deg);
    let short = Arc::new(KoszulComplex::new(m.clone(), &seq[..r - 1])?);
    let full = Arc::new(KoszulComplex::new(m.clone(), seq)?);
    let field = m.field();
    let mut rows = Vec::new();
    let mut prev_coker = 0;
    for j in 0..=r {
        let (a, b, rank) = if j < r {
            let h = KoszulCohomology::new(short.clone(), j)?;
            let delta = h.mult(last, key)?;
            (h.dim(key)?, h.dim(&shifted)?, delta.rank(field))
        } else {
            (0, 0, 0)
        };
        let c = KoszulCohomology::new(full.clone(), j)?.dim(key)?;
        rows.push(LesRow {
            j,
            short: a,
            short_shifted: b,
            full: c,
            delta_rank: rank,
            exact: c == prev_coker + (a - rank),
        });
        prev_coker = b - rank;
    }
    let delta_rank = rows[i.min(r - 1)].delta_rank;
    Ok(LesReport {
        key: key.clone(),
        rows,
        delta_rank,
        two_term: r == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::module::{FreeModule, InverseSystem, QuotientModule};
    use crate::ring::Ring;

    fn ring(n: usize) -> RingRef<Rationals> {
        Ring::fine(Rationals, n)
    }

    #[test]
    fn principal_on_free_module() {
        let r = ring(1);
        let a: ModuleRef<Rationals> = Arc::new(FreeModule::new(&r));
        let x = r.parse("x").unwrap();
        // H^1 at g is (A/xA) at g + 1
        let h1 = koszul_module(&[x.clone()], &a, 1).unwrap();
        assert_eq!(h1.dim(&Key::exact(&[-1])).unwrap(), 1);
        assert_eq!(h1.dim(&Key::exact(&[0])).unwrap(), 0);
        assert_eq!(h1.dim(&Key::exact(&[1])).unwrap(), 0);
        let h0 = koszul_module(&[x], &a, 0).unwrap();
        assert_eq!(h0.dim(&Key::exact(&[2])).unwrap(), 0);
    }

    #[test]
    fn inverse_system_pair() {
        let r = ring(4);
        let m: ModuleRef<Rationals> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let seq = [r.parse("x").unwrap(), r.parse("y").unwrap()];
        let h0 = koszul_module(&seq, &m, 0).unwrap();
        let h1 = koszul_module(&seq, &m, 1).unwrap();
        let h2 = koszul_module(&seq, &m, 2).unwrap();
        assert_eq!(h0.dim(&Key::exact(&[-1, -1, 2, 0])).unwrap(), 1);
        assert_eq!(h0.dim(&Key::exact(&[-2, -1, 0, 0])).unwrap(), 0);
        for g in [[-1, -1, 0, 0], [-2, -1, 1, 0], [-3, -2, 0, 0], [-2, -2, -1, 0]] {
            let k = Key::exact(&g);
            assert_eq!(h1.dim(&k).unwrap(), 0);
            assert_eq!(h2.dim(&k).unwrap(), 0);
            for p in 0..2 {
                assert!(h2.complex().check_dd(p, &k).unwrap());
            }
        }
    }

    #[test]
    fn top_cohomology_is_quotient() {
        let r = ring(2);
        let a: ModuleRef<Rationals> = Arc::new(FreeModule::new(&r));
        let seq = [r.parse("x^2").unwrap(), r.parse("y").unwrap()];
        let h2 = koszul_module(&seq, &a, 2).unwrap();
        let q = QuotientModule::by_elements(a.clone(), &seq).unwrap();
        for g in [[0, 0], [1, 0], [2, 0], [1, 3]] {
            // H^2 at g is (M/(x)M) at g + deg x_1 + deg x_2
            let shifted = Key::exact(&[g[0] + 2, g[1] + 1]);
            assert_eq!(h2.dim(&Key::exact(&g)).unwrap(), q.dim(&shifted).unwrap());
        }
    }

    #[test]
    fn les_is_exact_on_inverse_system() {
        let r = ring(4);
        let m: ModuleRef<Rationals> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let seq = [r.parse("x").unwrap(), r.parse("y").unwrap()];
        for g in [[-1, -1, 0, 0], [-2, -3, 1, 0], [-1, -2, 0, 2]] {
            let rep = koszul_les_probe(&seq, &m, 1, &Key::exact(&g)).unwrap();
            assert!(rep.exact(), "{}", rep.describe());
            assert!(!rep.two_term);
        }
    }

    #[test]
    fn rejects_sequence_outside_ideal() {
        let r = ring(4);
        let m: ModuleRef<Rationals> = Arc::new(InverseSystem::named(&r, &["x", "y"], &["z", "w"]).unwrap());
        let z = r.parse("z").unwrap();
        assert!(matches!(koszul_module(&[z], &m, 1), Err(Error::Precondition(_))));
    }
}
