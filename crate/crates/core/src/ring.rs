use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{Grade, Grading};
use crate::poly::{default_names, parse_polynomial, Exponent, Polynomial};

/// A polynomial ring `k[x_0..x_n]` with variable names and an active grading.
#[derive(Debug)]
pub struct Ring<F: Field> {
    field: F,
    names: Vec<String>,
    grading: Arc<Grading>,
}

pub type RingRef<F> = Arc<Ring<F>>;

impl<F: Field> Ring<F> {
    pub fn new(field: F, names: Vec<String>, grading: Arc<Grading>) -> Result<RingRef<F>> {
        if grading.nvars() != names.len() {
            return Err(Error::VariableCountMismatch {
                left: names.len(),
                right: grading.nvars(),
            });
        }
        Ok(Arc::new(Ring {
            field,
            names,
            grading,
        }))
    }

    /// `x, y, z, w` (or `x0..`) with the fine grading.
    pub fn fine(field: F, nvars: usize) -> RingRef<F> {
        Arc::new(Ring {
            field,
            names: default_names(nvars),
            grading: Grading::fine(nvars),
        })
    }

    /// Ring whose grading is the finest one making all `polys` homogeneous.
    pub fn detect(field: F, names: Vec<String>, polys: &[Polynomial<F>]) -> Result<RingRef<F>> {
        let grading = Grading::detect(names.len(), polys)?;
        Self::new(field, names, grading)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial<F>> {
        parse_polynomial(&self.field, &self.names, src)
    }

    pub fn render(&self, p: &Polynomial<F>) -> String {
        p.render(&self.names)
    }

    pub fn render_monomial(&self, e: &Exponent) -> String {
        e.render(&self.names)
    }

    pub fn degree_of(&self, f: &Polynomial<F>) -> Result<Grade> {
        self.grading.degree_of(f)
    }

    pub fn var(&self, i: usize) -> Polynomial<F> {
        Polynomial::var(&self.field, self.nvars(), i)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Validation(format!("unknown variable `{name}`")))
    }

    pub fn describe(&self) -> String {
        format!(
            "{}[{}] {}",
            self.field.name(),
            self.names.join(","),
            self.grading.describe()
        )
    }
}
