use std::collections::BTreeMap;
use std::fmt;

use super::monomial::{default_names, Exponent};
use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::rat::Rat;

/// Sparse multivariate Laurent polynomial with exact coefficients.
///
/// Terms are kept in a map ordered by graded reverse-lexicographic order;
/// zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}
impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> std::hash::Hash for Polynomial<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        for (e, c) in &self.terms {
            e.hash(state);
            c.hash(state);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        Polynomial {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, Exponent::zero(nvars), c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Exponent::unit(nvars, i), field.one())
    }

    pub fn monomial(field: &F, exp: Exponent, c: F::Elem) -> Self {
        let nvars = exp.nvars();
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponent, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.nvars(), nvars, "exponent length");
            p.add_term(e, &c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &Exponent) -> F::Elem {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Adds `c * x^e` in place.
    pub fn add_term(&mut self, e: Exponent, c: &F::Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = self.field.add(v, c);
                if self.field.is_zero(v) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// Total degree when all terms share one, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let d = it.next()?.total_degree();
        it.all(|e| e.total_degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.is_nonnegative())
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), &f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// Exact binary arithmetic; `Add` and `Mul` on two polynomials.
    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.checked_add(other),
            ArithOp::Mul => self.checked_mul(other),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.nvars);
        }
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), f.mul(v, c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn mul_monomial(&self, e: &Exponent) -> Self {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.add(e), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = base.checked_mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Replaces variable `i` by `images[i]` and expands. Images may live in a
    /// different number of variables (e.g. parameters `t, u`).
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        if images.len() != self.nvars {
            return Err(Error::ImageCountMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let target_vars = images.first().map(|p| p.nvars).unwrap_or(0);
        if let Some(bad) = images.iter().find(|p| p.nvars != target_vars) {
            return Err(Error::VariableCountMismatch {
                left: target_vars,
                right: bad.nvars,
            });
        }
        let f = &self.field;
        let mut out = Polynomial::zero(f, target_vars);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(f, target_vars, c.clone());
            for (i, &a) in e.0.iter().enumerate() {
                if a < 0 {
                    return Err(Error::Precondition(
                        "substitution into a Laurent monomial".into(),
                    ));
                }
                if a > 0 {
                    term = term.checked_mul(&images[i].pow(a as u32))?;
                }
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut s = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let mut cs = f.render(c);
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = e.render(names);
            if mono == "1" {
                s.push_str(&cs);
            } else if cs == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&cs);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }

    pub fn map_field<G: Field>(
        &self,
        target: &G,
        conv: impl Fn(&F::Elem) -> Result<G::Elem>,
    ) -> Result<Polynomial<G>> {
        let mut out = Polynomial::zero(target, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &conv(c)?);
        }
        Ok(out)
    }
}

impl Polynomial<Rationals> {
    /// Coefficientwise image in another field; fails if a denominator is not invertible there.
    pub fn to_field<G: Field>(&self, target: &G) -> Result<Polynomial<G>> {
        self.map_field(target, |c| target.from_rational(&c.to_big()))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rat> {
        self.terms.values()
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars)))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> std::ops::Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("polynomials from the same ring")
    }
}

impl<F: Field> std::ops::Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("polynomials from the same ring")
    }
}

impl<F: Field> std::ops::Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("polynomials from the same ring")
    }
}

impl<F: Field> std::ops::Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(self)
    }
}
