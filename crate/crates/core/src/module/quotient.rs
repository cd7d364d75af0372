use std::sync::Arc;

use super::{check_key, norm_key, Backend, GradedModule, Key, Memo, ModuleRef};
use crate::error::Result;
use crate::field::Field;
use crate::grading::grade_sub;
use crate::linalg::{Matrix, Subquotient};
use crate::poly::Polynomial;
use crate::ring::RingRef;

/// `M / (h_1, ..., h_k)M`: the slice at `d` is the cokernel of the maps `h_i`
/// from `d - deg h_i`, with the non-pivot coordinates of the image's echelon
/// form as basis.
pub struct QuotientModule<F: Field> {
    parent: ModuleRef<F>,
    hs: Vec<Polynomial<F>>,
    ideal: Option<Vec<Polynomial<F>>>,
    slices: Memo<Key, Arc<Subquotient<F>>>,
    mults: Memo<(Polynomial<F>, Key), Arc<Matrix<F::Elem>>>,
    trans: Memo<Key, Arc<Matrix<F::Elem>>>,
}

impl<F: Field> QuotientModule<F> {
    pub fn new(parent: ModuleRef<F>, h: &Polynomial<F>) -> Result<Self> {
        Self::by_elements(parent, std::slice::from_ref(h))
    }

    pub fn by_elements(parent: ModuleRef<F>, hs: &[Polynomial<F>]) -> Result<Self> {
        for h in hs {
            parent.ring().degree_of(h)?;
        }
        Ok(QuotientModule {
            parent,
            hs: hs.to_vec(),
            ideal: None,
            slices: Memo::new(),
            mults: Memo::new(),
            trans: Memo::new(),
        })
    }

    /// Overrides the ambient ideal, e.g. `(x, y)` for `A/(x, y)`.
    pub fn with_ideal(mut self, ideal: Vec<Polynomial<F>>) -> Self {
        self.ideal = Some(ideal);
        self
    }

    pub fn parent(&self) -> &ModuleRef<F> {
        &self.parent
    }

    pub fn slice(&self, key: &Key) -> Result<Arc<Subquotient<F>>> {
        check_key(self, key)?;
        let key = norm_key(self, key);
        self.slices.get_or(&key, || {
            let mut image = Vec::new();
            for h in &self.hs {
                let deg = self.ring().degree_of(h)?;
                let src = key_with_grade(&key, grade_sub(&key.grade, &deg));
                image.extend(self.parent.mult(h, &src)?.columns().iter().cloned());
            }
            let n = self.parent.dim(&key)?;
            Ok(Arc::new(Subquotient::quotient(self.field(), n, &image)))
        })
    }

    fn induced(&self, parent_map: &Matrix<F::Elem>, src: &Key, dst: &Key) -> Result<Matrix<F::Elem>> {
        let s = self.slice(src)?;
        let t = self.slice(dst)?;
        let field = self.field();
        let cols = s
            .reps()
            .iter()
            .map(|r| t.coords(&parent_map.apply(field, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(t.dim(), cols))
    }
}

fn key_with_grade(key: &Key, grade: crate::grading::Grade) -> Key {
    Key {
        grade,
        level: key.level,
    }
}

impl<F: Field> GradedModule<F> for QuotientModule<F> {
    fn ring(&self) -> &RingRef<F> {
        self.parent.ring()
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        match &self.ideal {
            Some(i) => i,
            None => self.parent.ambient_ideal(),
        }
    }

    fn descriptor(&self) -> String {
        let hs: Vec<String> = self.hs.iter().map(|h| self.ring().render(h)).collect();
        format!("({} / {})", self.parent.descriptor(), hs.join(", "))
    }

    fn backend(&self) -> Backend {
        Backend::Quotient
    }

    fn is_exact(&self) -> bool {
        self.parent.is_exact()
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        Ok(self.slice(key)?.dim())
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        let s = self.slice(key)?;
        let labels = self.parent.labels(key)?;
        Ok(s.reps()
            .iter()
            .map(|r| super::render_combination(self.field(), &labels, r))
            .collect())
    }

    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        let key = norm_key(self, key);
        let deg = self.ring().degree_of(f)?;
        self.mults.get_or(&(f.clone(), key.clone()), || {
            let pm = self.parent.mult(f, &key)?;
            Ok(Arc::new(self.induced(&pm, &key, &key.shifted(&deg))?))
        })
    }

    fn transition(&self, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        if self.is_exact() {
            return super::identity_transition(self, key);
        }
        self.trans.get_or(key, || {
            let pt = self.parent.transition(key)?;
            Ok(Arc::new(self.induced(&pt, key, &key.at_level(key.level + 1))?))
        })
    }
}
