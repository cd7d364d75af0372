use std::collections::HashMap;
use std::sync::Arc;

use super::{check_key, identity_transition, Backend, GradedModule, Key, Memo};
use crate::error::Result;
use crate::field::Field;
use crate::grading::{grade_add, render_grade, Grade};
use crate::linalg::{Matrix, SparseVec};
use crate::poly::Polynomial;
use crate::ring::RingRef;

/// The twisted free module `A(shift)`: its slice at `g` is `A_{g + shift}`
/// with the monomial basis.
pub struct FreeModule<F: Field> {
    ring: RingRef<F>,
    shift: Grade,
    ideal: Vec<Polynomial<F>>,
    mults: Memo<(Polynomial<F>, Key), Arc<Matrix<F::Elem>>>,
}

impl<F: Field> FreeModule<F> {
    pub fn new(ring: &RingRef<F>) -> Self {
        let shift = Grade::from_elem(0, ring.grading().rank());
        Self::twisted(ring, shift)
    }

    pub fn twisted(ring: &RingRef<F>, shift: Grade) -> Self {
        FreeModule {
            ring: ring.clone(),
            shift,
            ideal: Vec::new(),
            mults: Memo::new(),
        }
    }

    fn basis(&self, key: &Key) -> Arc<Vec<crate::poly::Exponent>> {
        self.ring.grading().monomials(&grade_add(&key.grade, &self.shift))
    }
}

impl<F: Field> GradedModule<F> for FreeModule<F> {
    fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        &self.ideal
    }

    fn descriptor(&self) -> String {
        if self.shift.iter().all(|&s| s == 0) {
            "A".to_string()
        } else {
            format!("A{}", render_grade(&self.shift))
        }
    }

    fn backend(&self) -> Backend {
        Backend::FreeTwist
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        check_key(self, key)?;
        Ok(self.basis(key).len())
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        check_key(self, key)?;
        Ok(self.basis(key).iter().map(|e| self.ring.render_monomial(e)).collect())
    }

    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        check_key(self, key)?;
        let deg = self.ring.degree_of(f)?;
        let key = key.at_level(0);
        self.mults.get_or(&(f.clone(), key.clone()), || {
            let src = self.basis(&key);
            let dst = self.basis(&key.shifted(&deg));
            let index: HashMap<_, usize> = dst.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
            let cols = src
                .iter()
                .map(|m| {
                    let mut entries: Vec<(usize, F::Elem)> =
                        f.terms().map(|(e, c)| (index[&e.add(m)], c.clone())).collect();
                    entries.sort_by_key(|e| e.0);
                    SparseVec { entries }
                })
                .collect();
            Ok(Arc::new(Matrix::from_columns(dst.len(), cols)))
        })
    }

    fn transition(&self, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        identity_transition(self, key)
    }
}
