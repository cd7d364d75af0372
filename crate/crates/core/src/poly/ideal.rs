use std::collections::HashMap;

use super::monomial::{monomials_of_degree, Exponent};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, SparseVec};

/// Outcome of a bounded membership search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<F: Field> {
    /// `f = sum_i certificate[i] * gens[i]`, each product homogeneous of degree `deg f`.
    Member { certificate: Vec<Polynomial<F>> },
    NotFoundUnderCap { cap: i64 },
}

impl<F: Field> Membership<F> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

fn require_homogeneous<F: Field>(p: &Polynomial<F>) -> Result<()> {
    if p.is_homogeneous() && p.is_polynomial() {
        Ok(())
    } else {
        Err(Error::NotHomogeneous(p.to_string()))
    }
}

/// Index of each monomial of degree `deg` in descending grevlex order.
fn monomial_index(nvars: usize, deg: i64) -> (Vec<Exponent>, HashMap<Exponent, usize>) {
    let monos = monomials_of_degree(nvars, deg);
    let idx = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    (monos, idx)
}

fn coords<F: Field>(p: &Polynomial<F>, idx: &HashMap<Exponent, usize>) -> SparseVec<F::Elem> {
    let mut entries: Vec<(usize, F::Elem)> = p.terms().map(|(e, c)| (idx[e], c.clone())).collect();
    entries.sort_by_key(|e| e.0);
    SparseVec { entries }
}

/// Decides `f ∈ (gens)` for homogeneous input by solving the exact linear
/// system over the monomial basis in degree `deg f`, provided `deg f <= cap`.
pub fn ideal_membership_bounded<F: Field>(
    f: &Polynomial<F>,
    gens: &[Polynomial<F>],
    cap: i64,
) -> Result<Membership<F>> {
    require_homogeneous(f)?;
    for g in gens {
        require_homogeneous(g)?;
        if g.nvars() != f.nvars() {
            return Err(Error::VariableCountMismatch {
                left: f.nvars(),
                right: g.nvars(),
            });
        }
    }
    let field = f.field().clone();
    let n = f.nvars();
    if f.is_zero() {
        return Ok(Membership::Member {
            certificate: gens.iter().map(|_| Polynomial::zero(&field, n)).collect(),
        });
    }
    let deg = f.homogeneous_degree().expect("homogeneous nonzero");
    if deg > cap {
        return Ok(Membership::NotFoundUnderCap { cap });
    }
    let (_, idx) = monomial_index(n, deg);
    // unknowns: (generator, multiplier monomial)
    let mut unknowns: Vec<(usize, Exponent)> = Vec::new();
    let mut ech = Echelon::new(&field, idx.len(), true);
    for (gi, g) in gens.iter().enumerate() {
        let Some(dg) = g.homogeneous_degree() else {
            continue; // zero generator
        };
        if dg > deg {
            continue;
        }
        for m in monomials_of_degree(n, deg - dg) {
            ech.insert(&coords(&g.mul_monomial(&m), &idx));
            unknowns.push((gi, m));
        }
    }
    match ech.solve(&coords(f, &idx)) {
        None => Ok(Membership::NotFoundUnderCap { cap }),
        Some(sol) => {
            let mut certificate: Vec<Polynomial<F>> =
                gens.iter().map(|_| Polynomial::zero(&field, n)).collect();
            for (u, c) in &sol.entries {
                let (gi, m) = &unknowns[*u];
                certificate[*gi].add_term(m.clone(), c);
            }
            Ok(Membership::Member { certificate })
        }
    }
}

/// Least `e >= 1` with `g^e ∈ (gens)` and `e * deg g <= cap`, with its certificate.
pub fn radical_exponent<F: Field>(
    g: &Polynomial<F>,
    gens: &[Polynomial<F>],
    cap: i64,
) -> Result<Option<(u32, Vec<Polynomial<F>>)>> {
    require_homogeneous(g)?;
    let d = match g.homogeneous_degree() {
        Some(d) if d > 0 => d,
        _ => {
            // constants: only 0 has a power in a proper homogeneous ideal
            return match ideal_membership_bounded(g, gens, cap)? {
                Membership::Member { certificate } => Ok(Some((1, certificate))),
                _ => Ok(None),
            };
        }
    };
    let mut e = 1u32;
    while e as i64 * d <= cap {
        if let Membership::Member { certificate } = ideal_membership_bounded(&g.pow(e), gens, cap)? {
            return Ok(Some((e, certificate)));
        }
        e += 1;
    }
    Ok(None)
}

/// Minimal homogeneous generators, up to `max_degree`, of the kernel of the
/// ring map sending variable `i` to `images[i]`. Each degree is solved as an
/// exact linear system; new generators are the reduced echelon kernel
/// vectors not already in the ideal generated in lower degrees.
pub fn parameterization_kernel<F: Field>(
    images: &[Polynomial<F>],
    max_degree: i64,
) -> Result<Vec<Polynomial<F>>> {
    let n = images.len();
    let Some(first) = images.first() else {
        return Ok(Vec::new());
    };
    let field = first.field().clone();
    let mut gens: Vec<Polynomial<F>> = Vec::new();
    for deg in 1..=max_degree {
        let (monos, idx) = monomial_index(n, deg);
        // image coordinates: collect parameter monomials on the fly
        let mut param_idx: HashMap<Exponent, usize> = HashMap::new();
        let mut cols = Vec::with_capacity(monos.len());
        for m in &monos {
            let img = Polynomial::monomial(&field, m.clone(), field.one()).substitute(images)?;
            let mut entries: Vec<(usize, F::Elem)> = img
                .terms()
                .map(|(e, c)| {
                    let next = param_idx.len();
                    (*param_idx.entry(e.clone()).or_insert(next), c.clone())
                })
                .collect();
            entries.sort_by_key(|e| e.0);
            cols.push(SparseVec { entries });
        }
        let map = crate::linalg::Matrix::from_columns(param_idx.len(), cols);
        let kernel = map.kernel(&field);
        let kernel_ech = Echelon::from_vectors(&field, monos.len(), &kernel, false);
        let mut lower = Echelon::new(&field, monos.len(), false);
        for g in &gens {
            let dg = g.homogeneous_degree().expect("homogeneous generator");
            for m in monomials_of_degree(n, deg - dg) {
                lower.insert(&coords(&g.mul_monomial(&m), &idx));
            }
        }
        for row in kernel_ech.reduced_basis() {
            if lower.contains(&row) {
                continue;
            }
            lower.insert(&row);
            let mut p = Polynomial::zero(&field, n);
            for (i, c) in &row.entries {
                p.add_term(monos[*i].clone(), c);
            }
            gens.push(p);
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::poly::{default_names, parse_polynomial};

    fn p(s: &str) -> Polynomial<Rationals> {
        parse_polynomial(&Rationals, &default_names(4), s).unwrap()
    }

    fn check_certificate(f: &Polynomial<Rationals>, gens: &[Polynomial<Rationals>], cert: &[Polynomial<Rationals>]) {
        let mut sum = Polynomial::zero(&Rationals, 4);
        for (c, g) in cert.iter().zip(gens) {
            sum = &sum + &(c * g);
        }
        assert_eq!(&sum, f);
    }

    #[test]
    fn linear_member() {
        let gens = [p("x"), p("y")];
        match ideal_membership_bounded(&p("x"), &gens, 1).unwrap() {
            Membership::Member { certificate } => {
                assert_eq!(certificate, vec![p("1"), Polynomial::zero(&Rationals, 4)]);
            }
            other => panic!("{other:?}"),
        }
        assert!(!ideal_membership_bounded(&p("z"), &gens, 4).unwrap().is_member());
    }

    #[test]
    fn twisted_cubic_square_is_member() {
        let gens = [p("x*z - y^2"), p("z^3 - 2*y*z*w + x*w^2")];
        let f = p("y*w - z^2").pow(2);
        match ideal_membership_bounded(&f, &gens, 6).unwrap() {
            Membership::Member { certificate } => check_certificate(&f, &gens, &certificate),
            other => panic!("{other:?}"),
        }
        // but the quadric itself is not in the ideal
        assert!(!ideal_membership_bounded(&p("y*w - z^2"), &gens, 6).unwrap().is_member());
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        assert!(ideal_membership_bounded(&p("x + y^2"), &[p("x")], 4).is_err());
    }

    #[test]
    fn twisted_cubic_kernel() {
        let names = vec!["t".to_string(), "u".to_string()];
        let img: Vec<_> = ["t^3", "t^2*u", "t*u^2", "u^3"]
            .iter()
            .map(|s| parse_polynomial(&Rationals, &names, s).unwrap())
            .collect();
        let gens = parameterization_kernel(&img, 3).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens.iter().all(|g| g.homogeneous_degree() == Some(2)));
        for g in &gens {
            assert!(g.substitute(&img).unwrap().is_zero());
        }
    }
}
