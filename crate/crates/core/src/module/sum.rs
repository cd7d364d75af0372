use std::sync::Arc;

use super::{Backend, GradedModule, Key, ModuleRef};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::ring::RingRef;

/// `M1 ⊕ M2` with concatenated bases and block-diagonal matrices. The ambient
/// ideal is the product of the summands' ideals.
pub struct DirectSum<F: Field> {
    a: ModuleRef<F>,
    b: ModuleRef<F>,
    ideal: Vec<Polynomial<F>>,
}

impl<F: Field> DirectSum<F> {
    pub fn new(a: ModuleRef<F>, b: ModuleRef<F>) -> Result<Self> {
        if !Arc::ptr_eq(a.ring(), b.ring()) && a.ring().describe() != b.ring().describe() {
            return Err(Error::Validation("summands live over different rings".into()));
        }
        let mut ideal = Vec::new();
        for f in a.ambient_ideal() {
            for g in b.ambient_ideal() {
                let p = f * g;
                if !ideal.contains(&p) {
                    ideal.push(p);
                }
            }
        }
        Ok(DirectSum { a, b, ideal })
    }

    pub fn summands(&self) -> (&ModuleRef<F>, &ModuleRef<F>) {
        (&self.a, &self.b)
    }
}

impl<F: Field> GradedModule<F> for DirectSum<F> {
    fn ring(&self) -> &RingRef<F> {
        self.a.ring()
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        &self.ideal
    }

    fn descriptor(&self) -> String {
        format!("({} + {})", self.a.descriptor(), self.b.descriptor())
    }

    fn backend(&self) -> Backend {
        Backend::DirectSum
    }

    fn is_exact(&self) -> bool {
        self.a.is_exact() && self.b.is_exact()
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        Ok(self.a.dim(key)? + self.b.dim(key)?)
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        let mut l = self.a.labels(key)?;
        l.extend(self.b.labels(key)?);
        Ok(l)
    }

    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        let ma = self.a.mult(f, key)?;
        let mb = self.b.mult(f, key)?;
        Ok(Arc::new(Matrix::block_diag(&[&ma, &mb])))
    }

    fn transition(&self, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        let ta = self.a.transition(key)?;
        let tb = self.b.transition(key)?;
        Ok(Arc::new(Matrix::block_diag(&[&ta, &tb])))
    }
}
