//! Sparse multivariate (Laurent) polynomials, their text syntax, and the
//! bounded-degree ideal membership oracle.

mod ideal;
mod monomial;
mod parse;
mod polynomial;

pub use ideal::{
    ideal_membership_bounded, parameterization_kernel, radical_exponent, Membership,
};
pub use monomial::{binomial, default_names, monomials_of_degree, Exponent};
pub use parse::{parse_polynomial, parse_polynomial_at};
pub use polynomial::{ArithOp, Polynomial};

use crate::error::Result;
use crate::field::Field;

/// `f` with each variable replaced by its image, e.g. `(t^4, t^3*u, t*u^3, u^4)`.
pub fn substitute_parameterization<F: Field>(
    f: &Polynomial<F>,
    images: &[Polynomial<F>],
) -> Result<Polynomial<F>> {
    f.substitute(images)
}

/// Exact `a op b`.
pub fn poly_arith<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, op: ArithOp) -> Result<Polynomial<F>> {
    a.arith(b, op)
}
