//! Hook for persisting computed cohomology slices between runs.

use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::field::Field;
use crate::linalg::{SparseVec, Subquotient};

/// A cohomology slice in portable form: field elements are rendered as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredSlice {
    pub ambient: usize,
    pub boundaries: Vec<Vec<(usize, String)>>,
    pub reps: Vec<Vec<(usize, String)>>,
}

/// Persistent slice storage. `module` identifies ring and module, `key` the slice.
pub trait SliceStore: Send + Sync {
    fn load(&self, module: &str, key: &str) -> Option<StoredSlice>;
    fn save(&self, module: &str, key: &str, slice: &StoredSlice);
}

static INSTALLED: RwLock<Option<Arc<dyn SliceStore>>> = RwLock::new(None);

/// Installs a process-wide store picked up by every Čech cohomology module
/// built afterwards. `None` removes it.
pub fn install(store: Option<Arc<dyn SliceStore>>) {
    *INSTALLED.write().expect("store lock") = store;
}

pub fn installed() -> Option<Arc<dyn SliceStore>> {
    INSTALLED.read().expect("store lock").clone()
}

fn encode<F: Field>(field: &F, v: &SparseVec<F::Elem>) -> Vec<(usize, String)> {
    v.entries.iter().map(|(i, c)| (*i, field.render(c))).collect()
}

fn decode<F: Field>(field: &F, v: &[(usize, String)]) -> Result<SparseVec<F::Elem>> {
    let entries = v
        .iter()
        .map(|(i, s)| Ok((*i, field.parse_elem(s)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseVec { entries })
}

impl StoredSlice {
    pub fn from_subquotient<F: Field>(field: &F, sq: &Subquotient<F>) -> Self {
        StoredSlice {
            ambient: sq.ambient(),
            boundaries: sq.boundaries().rows().iter().map(|r| encode(field, r)).collect(),
            reps: sq.reps().iter().map(|r| encode(field, r)).collect(),
        }
    }

    pub fn to_subquotient<F: Field>(&self, field: &F) -> Result<Subquotient<F>> {
        let b = self
            .boundaries
            .iter()
            .map(|r| decode(field, r))
            .collect::<Result<Vec<_>>>()?;
        let reps = self
            .reps
            .iter()
            .map(|r| decode(field, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subquotient::from_parts(field, self.ambient, &b, reps))
    }
}
