//! Graded modules presented slice by slice.
//!
//! A slice is indexed by a [`Key`]: a grade for the ring's grading and a
//! truncation level. Exact backends ignore the level. Truncated backends form a
//! directed system in the level, with [`GradedModule::transition`] maps, and the
//! module is its colimit.

mod free;
mod inverse;
mod kernel;
mod memo;
mod quotient;
mod sum;

use std::fmt;
use std::sync::Arc;

pub use free::FreeModule;
pub use inverse::InverseSystem;
pub use kernel::KernelModule;
pub use memo::Memo;
pub use quotient::QuotientModule;
pub use sum::DirectSum;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{grade_add, render_grade, Grade};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::poly::{ideal_membership_bounded, Polynomial};
use crate::ring::RingRef;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub grade: Grade,
    pub level: u32,
}

impl Key {
    pub fn new(grade: Grade, level: u32) -> Self {
        Key { grade, level }
    }

    pub fn exact(grade: &[i64]) -> Self {
        Key {
            grade: Grade::from_slice(grade),
            level: 0,
        }
    }

    pub fn shifted(&self, by: &Grade) -> Key {
        Key {
            grade: grade_add(&self.grade, by),
            level: self.level,
        }
    }

    pub fn at_level(&self, level: u32) -> Key {
        Key {
            grade: self.grade.clone(),
            level,
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", render_grade(&self.grade), self.level)
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    InverseSystem,
    TruncatedLocalizationQuotient,
    Kernel,
    Quotient,
    DirectSum,
    FreeTwist,
    Koszul,
}

pub trait GradedModule<F: Field>: Send + Sync {
    fn ring(&self) -> &RingRef<F>;
    fn ambient_ideal(&self) -> &[Polynomial<F>];
    /// Stable text identifying the module; used for cache keys and reports.
    fn descriptor(&self) -> String;
    fn backend(&self) -> Backend;
    /// Slices do not depend on the truncation level.
    fn is_exact(&self) -> bool;
    fn dim(&self, key: &Key) -> Result<usize>;
    fn labels(&self, key: &Key) -> Result<Vec<String>>;
    /// Matrix of multiplication by `f` from the slice at `key` to the slice at
    /// `key` shifted by `deg f`, at the same level.
    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>>;
    /// Map from the slice at `key` to the slice at the next level.
    fn transition(&self, key: &Key) -> Result<Arc<Matrix<F::Elem>>>;

    fn field(&self) -> &F {
        self.ring().field()
    }
}

pub type ModuleRef<F> = Arc<dyn GradedModule<F>>;

/// Level used for memo keys: exact modules collapse every level to 0.
pub(crate) fn norm_key<F: Field>(m: &dyn GradedModule<F>, key: &Key) -> Key {
    if m.is_exact() {
        key.at_level(0)
    } else {
        key.clone()
    }
}

pub(crate) fn check_key<F: Field>(m: &dyn GradedModule<F>, key: &Key) -> Result<()> {
    m.ring().grading().check_grade(&key.grade)
}

/// An element of a single slice, as coordinates over the slice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementHandle<E> {
    pub key: Key,
    pub coeffs: SparseVec<E>,
}

impl<E: Clone> ElementHandle<E> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// A finite sum of slice elements at distinct keys, handled componentwise.
pub type GradedElement<E> = Vec<ElementHandle<E>>;

/// `mult_matrix(M, f, d)` together with the target key.
pub fn mult_matrix<F: Field>(
    m: &dyn GradedModule<F>,
    f: &Polynomial<F>,
    key: &Key,
) -> Result<(Arc<Matrix<F::Elem>>, Key)> {
    let deg = m.ring().degree_of(f)?;
    Ok((m.mult(f, key)?, key.shifted(&deg)))
}

pub fn apply_mult<F: Field>(
    m: &dyn GradedModule<F>,
    f: &Polynomial<F>,
    h: &ElementHandle<F::Elem>,
) -> Result<ElementHandle<F::Elem>> {
    let (mat, key) = mult_matrix(m, f, &h.key)?;
    Ok(ElementHandle {
        key,
        coeffs: mat.apply(m.field(), &h.coeffs),
    })
}

/// Pushes an element along transition maps up to `level`.
pub fn push_to_level<F: Field>(
    m: &dyn GradedModule<F>,
    h: &ElementHandle<F::Elem>,
    level: u32,
) -> Result<ElementHandle<F::Elem>> {
    let mut cur = h.clone();
    if m.is_exact() {
        cur.key.level = level;
        return Ok(cur);
    }
    while cur.key.level < level {
        let t = m.transition(&cur.key)?;
        cur = ElementHandle {
            key: cur.key.at_level(cur.key.level + 1),
            coeffs: t.apply(m.field(), &cur.coeffs),
        };
    }
    Ok(cur)
}

/// Some `v` at `key` with `f * v = target`, the target living at `key + deg f`.
pub fn solve_mult<F: Field>(
    m: &dyn GradedModule<F>,
    f: &Polynomial<F>,
    key: &Key,
    target: &SparseVec<F::Elem>,
) -> Result<Option<SparseVec<F::Elem>>> {
    let mat = m.mult(f, key)?;
    let ech = Echelon::from_vectors(m.field(), mat.rows(), mat.columns(), true);
    Ok(ech.solve(target))
}

/// Fails unless `x` lies in the ambient ideal of `m`. Modules with an empty
/// ambient ideal (free modules) carry no support condition and accept anything.
pub fn require_in_ambient<F: Field>(m: &dyn GradedModule<F>, x: &Polynomial<F>) -> Result<()> {
    if m.ambient_ideal().is_empty() {
        return Ok(());
    }
    let deg = x.homogeneous_degree().ok_or_else(|| Error::NotHomogeneous(m.ring().render(x)))?;
    if !ideal_membership_bounded(x, m.ambient_ideal(), deg)?.is_member() {
        return Err(Error::Precondition(format!(
            "{} is not in the ambient ideal of {}",
            m.ring().render(x),
            m.descriptor()
        )));
    }
    Ok(())
}

/// Least `e <= cap` with `x^e * m = 0` at the element's level.
///
/// `x` must lie in the ambient ideal of the module.
pub fn annihilating_power<F: Field>(
    m: &dyn GradedModule<F>,
    x: &Polynomial<F>,
    h: &ElementHandle<F::Elem>,
    cap: u32,
) -> Result<u32> {
    if m.ambient_ideal().is_empty() {
        return Err(Error::Precondition(format!(
            "{} has no ambient ideal",
            m.descriptor()
        )));
    }
    require_in_ambient(m, x)?;
    let mut cur = h.clone();
    for e in 0..=cap {
        if cur.is_zero() {
            return Ok(e);
        }
        if e < cap {
            cur = apply_mult(m, x, &cur)?;
        }
    }
    Err(Error::CapExceeded { cap })
}

/// `c1*label1 + c2*label2 + ...` over the slice basis.
pub fn render_element<F: Field>(m: &dyn GradedModule<F>, h: &ElementHandle<F::Elem>) -> Result<String> {
    let labels = m.labels(&h.key)?;
    Ok(render_combination(m.field(), &labels, &h.coeffs))
}

pub fn render_combination<F: Field>(field: &F, labels: &[String], v: &SparseVec<F::Elem>) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (n, (i, c)) in v.entries.iter().enumerate() {
        let mut cs = field.render(c);
        let neg = cs.starts_with('-');
        if neg {
            cs.remove(0);
        }
        if n == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if cs != "1" {
            s.push_str(&cs);
            s.push('*');
        }
        s.push_str(&labels[*i]);
    }
    s
}

/// Parses a (Laurent) polynomial expression whose monomials are basis labels
/// of the module, splitting it into its graded components at `level`.
pub fn element_handle<F: Field>(
    m: &dyn GradedModule<F>,
    expr: &str,
    level: u32,
) -> Result<GradedElement<F::Elem>> {
    let ring = m.ring();
    let p = ring.parse(expr)?;
    let grading = ring.grading();
    let mut parts: std::collections::BTreeMap<Key, Vec<(usize, F::Elem)>> = Default::default();
    for (e, c) in p.terms() {
        let key = Key::new(grading.grade_of(e), level);
        let labels = m.labels(&key)?;
        let label = ring.render_monomial(e);
        let idx = labels.iter().position(|l| *l == label).ok_or_else(|| {
            Error::NotInSlice(format!("`{label}` is not a basis label at {key}"))
        })?;
        parts.entry(key).or_default().push((idx, c.clone()));
    }
    Ok(parts
        .into_iter()
        .map(|(key, mut entries)| {
            entries.sort_by_key(|e| e.0);
            ElementHandle {
                key,
                coeffs: SparseVec { entries },
            }
        })
        .collect())
}

/// Slice dump: key, dimension, basis labels, and the requested matrices as
/// sparse triplets `row col value`.
pub fn dump_slice<F: Field>(
    m: &dyn GradedModule<F>,
    key: &Key,
    mults: &[Polynomial<F>],
) -> Result<String> {
    use std::fmt::Write;
    let ring = m.ring();
    let field = m.field();
    let labels = m.labels(key)?;
    let mut out = String::new();
    let _ = writeln!(out, "slice {}", m.descriptor());
    let _ = writeln!(out, "key {} level {}", render_grade(&key.grade), key.level);
    let _ = writeln!(out, "dim {}", labels.len());
    let _ = writeln!(
        out,
        "basis {}",
        if labels.is_empty() { "-".to_string() } else { labels.join(" ; ") }
    );
    let write_matrix = |out: &mut String, head: String, mat: &Matrix<F::Elem>| {
        let _ = writeln!(out, "{head} rows {} cols {} nnz {}", mat.rows(), mat.cols(), mat.nnz());
        for (i, j, v) in mat.triplets() {
            let _ = writeln!(out, "{i} {j} {}", field.render(v));
        }
    };
    for f in mults {
        let (mat, target) = mult_matrix(m, f, key)?;
        write_matrix(
            &mut out,
            format!("mult {} -> {}", ring.render(f), render_grade(&target.grade)),
            &mat,
        );
    }
    if !m.is_exact() {
        let t = m.transition(key)?;
        write_matrix(&mut out, format!("transition -> level {}", key.level + 1), &t);
    }
    out.push_str("end\n");
    Ok(out)
}

/// Identity transition for exact modules.
pub(crate) fn identity_transition<F: Field>(m: &dyn GradedModule<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
    let d = m.dim(key)?;
    Ok(Arc::new(Matrix::identity(m.field(), d)))
}
