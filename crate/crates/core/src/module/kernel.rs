use std::sync::Arc;

use super::{check_key, norm_key, Backend, GradedModule, Key, Memo, ModuleRef};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::poly::Polynomial;
use crate::ring::RingRef;

struct Slice<F: Field> {
    basis: Vec<SparseVec<F::Elem>>,
    solver: Echelon<F>,
}

/// `0 :_M (e_1, ..., e_k)`: slices are the common kernels of the
/// multiplication maps, as subspaces of the parent slices.
pub struct KernelModule<F: Field> {
    parent: ModuleRef<F>,
    elems: Vec<Polynomial<F>>,
    slices: Memo<Key, Arc<Slice<F>>>,
    mults: Memo<(Polynomial<F>, Key), Arc<Matrix<F::Elem>>>,
    trans: Memo<Key, Arc<Matrix<F::Elem>>>,
}

impl<F: Field> KernelModule<F> {
    pub fn new(parent: ModuleRef<F>, elems: &[Polynomial<F>]) -> Result<Self> {
        for e in elems {
            parent.ring().degree_of(e)?;
        }
        Ok(KernelModule {
            parent,
            elems: elems.to_vec(),
            slices: Memo::new(),
            mults: Memo::new(),
            trans: Memo::new(),
        })
    }

    pub fn parent(&self) -> &ModuleRef<F> {
        &self.parent
    }

    fn slice(&self, key: &Key) -> Result<Arc<Slice<F>>> {
        check_key(self, key)?;
        let key = norm_key(self, key);
        self.slices.get_or(&key, || {
            let field = self.field();
            let n = self.parent.dim(&key)?;
            let mut rows = 0;
            let mut cols: Vec<SparseVec<F::Elem>> = vec![SparseVec::new(); n];
            for e in &self.elems {
                let m = self.parent.mult(e, &key)?;
                for (j, c) in m.columns().iter().enumerate() {
                    cols[j] = SparseVec {
                        entries: cols[j]
                            .entries
                            .iter()
                            .cloned()
                            .chain(c.shift(rows).entries)
                            .collect(),
                    };
                }
                rows += m.rows();
            }
            let basis = if self.elems.is_empty() {
                (0..n).map(|i| SparseVec::unit(field, i)).collect()
            } else {
                Matrix::from_columns(rows, cols).kernel(field)
            };
            let solver = Echelon::from_vectors(field, n, &basis, true);
            Ok(Arc::new(Slice { basis, solver }))
        })
    }

    /// Coordinates in this module of a parent element lying in the submodule.
    pub fn coords_of_parent(&self, key: &Key, v: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
        self.slice(key)?
            .solver
            .solve(v)
            .ok_or_else(|| Error::NotInSlice(format!("element at {key} is not in the annihilator")))
    }

    /// Parent coordinates of a basis combination.
    pub fn to_parent(&self, key: &Key, v: &SparseVec<F::Elem>) -> Result<SparseVec<F::Elem>> {
        let s = self.slice(key)?;
        let field = self.field();
        let mut acc = SparseVec::new();
        for (i, c) in &v.entries {
            acc = acc.axpy(field, c, &s.basis[*i]);
        }
        Ok(acc)
    }

    fn induced(&self, parent_map: &Matrix<F::Elem>, src: &Key, dst: &Key) -> Result<Matrix<F::Elem>> {
        let s = self.slice(src)?;
        let t = self.slice(dst)?;
        let field = self.field();
        let cols = s
            .basis
            .iter()
            .map(|b| {
                t.solver
                    .solve(&parent_map.apply(field, b))
                    .ok_or_else(|| Error::NotInSlice(format!("image at {dst} left the annihilator")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(t.basis.len(), cols))
    }
}

impl<F: Field> GradedModule<F> for KernelModule<F> {
    fn ring(&self) -> &RingRef<F> {
        self.parent.ring()
    }

    fn ambient_ideal(&self) -> &[Polynomial<F>] {
        self.parent.ambient_ideal()
    }

    fn descriptor(&self) -> String {
        let e: Vec<String> = self.elems.iter().map(|p| self.ring().render(p)).collect();
        format!("(0 :_{{{}}} ({}))", self.parent.descriptor(), e.join(", "))
    }

    fn backend(&self) -> Backend {
        Backend::Kernel
    }

    fn is_exact(&self) -> bool {
        self.parent.is_exact()
    }

    fn dim(&self, key: &Key) -> Result<usize> {
        Ok(self.slice(key)?.basis.len())
    }

    fn labels(&self, key: &Key) -> Result<Vec<String>> {
        let s = self.slice(key)?;
        let labels = self.parent.labels(key)?;
        Ok(s.basis
            .iter()
            .map(|b| super::render_combination(self.field(), &labels, b))
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
