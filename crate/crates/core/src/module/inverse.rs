use std::sync::Arc;

use super::{check_key, identity_transition, Backend, GradedModule, Key};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::Grade;
use crate::linalg::{Matrix, SparseVec};
use crate::poly::{Exponent, Polynomial};
use crate::ring::RingRef;

/// Inverse system: spanned by the Laurent monomials with negative exponents on
/// `neg`, nonnegative exponents on `free` and zero exponents elsewhere.
/// Products leaving that region are zero. Fine graded.
pub struct InverseSystem<F: Field> {
    ring: RingRef<F>,
    neg: Vec<usize>,
    free: Vec<usize>,
    ideal: Vec<Polynomial<F>>,
}

impl<F: Field> InverseSystem<F> {
    pub fn new(ring: &RingRef<F>, neg: &[usize], free: &[usize]) -> Result<Self> {
        if !ring.grading().is_fine() {
            return Err(Error::Precondition("inverse systems need the fine grading".into()));
        }
        if let Some(v) = neg.iter().find(|v| free.contains(v)) {
            return Err(Error::OverlappingVariables(ring.names()[*v].clone()));
        }
        if let Some(v) = neg.iter().chain(free).find(|&&v| v >= ring.nvars()) {
            return Err(Error::Validation(format!("variable index {v} out of range")));
        }
        let ideal = neg.iter().map(|&v| ring.var(v)).collect();
        Ok(InverseSystem {
            ring: ring.clone(),
            neg: neg.to_vec(),
            free: free.to_vec(),
            ideal,
        })
    }

    /// Same, naming variables.
    pub fn named(ring: &RingRef<F>, neg: &[&str], free: &[&str]) -> Result<Self> {
        let idx = |names: &[&str]| -> Result<Vec<usize>> {
            names.iter().map(|n| ring.var_index(n)).collect()
        };
        Self::new(ring, &idx(neg)?, &idx(free)?)
    }

    pub fn contains(&self, g: &Grade) -> bool {
        g.iter().enumerate().all(|(i, &a)| {
            if self.neg.contains(&i) {
                a < 0
            } else if self.free.contains(&i) {
                a >= 0
            } else {
                a == 0
            }
        })
    }

    pub fn neg_vars(&self) -> &[usize] {
        &self.neg
    }

    pub fn free_vars(&self) -> &[usize] {
        &self.free
    }
}

impl<F: Field> GradedModule<F> for InverseSystem<F> {
    fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        &self.ideal
    }

    fn descriptor(&self) -> String {
        let names = |v: &[usize]| -> String {
            v.iter().map(|&i| self.ring.names()[i].as_str()).collect::<Vec<_>>().join(",")
        };
        format!("inverse{{{}|{}}}", names(&self.neg), names(&self.free))
    }

    fn backend(&self) -> Backend {
        Backend::InverseSystem
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        check_key(self, key)?;
        Ok(self.contains(&key.grade) as usize)
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        check_key(self, key)?;
        if self.contains(&key.grade) {
            let e = Exponent(key.grade.iter().map(|&a| a as i32).collect());
            Ok(vec![self.ring.render_monomial(&e)])
        } else {
            Ok(Vec::new())
        }
    }

    fn mult(&self, f: &Polynomial<F>, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        check_key(self, key)?;
        let deg = self.ring.degree_of(f)?;
        let target = key.shifted(&deg);
        let rows = self.dim(&target)?;
        let cols = self.dim(key)?;
        let mut columns = Vec::with_capacity(cols);
        if cols == 1 {
            // fine homogeneous means a single term
            let (_, c) = f.leading_term().expect("nonzero");
            columns.push(if rows == 1 {
                SparseVec {
                    entries: vec![(0, c.clone())],
                }
            } else {
                SparseVec::new()
            });
        }
        Ok(Arc::new(Matrix::from_columns(rows, columns)))
    }

    fn transition(&self, key: &Key) -> Result<Arc<Matrix<F::Elem>>> {
        identity_transition(self, key)
    }
}
