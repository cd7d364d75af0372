//! Gradings of the polynomial ring by integer weight matrices.
//!
//! A grade is the vector `W * a` for a monomial with exponent `a`. The fine
//! grading uses the identity matrix; torus gradings have the all-ones total
//! degree as their first row followed by extra weight rows.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::rat::Rat;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::poly::{monomials_of_degree, Exponent, Polynomial};

pub type Grade = SmallVec<[i64; 6]>;

pub fn render_grade(g: &Grade) -> String {
    let parts: Vec<String> = g.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn grade_add(a: &Grade, b: &Grade) -> Grade {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn grade_sub(a: &Grade, b: &Grade) -> Grade {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn grade_scale(a: &Grade, k: i64) -> Grade {
    a.iter().map(|x| x * k).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradingKind {
    Fine,
    Torus,
}

type Buckets = HashMap<Grade, Arc<Vec<Exponent>>>;

pub struct Grading {
    kind: GradingKind,
    nvars: usize,
    rows: Vec<Vec<i64>>,
    by_degree: Mutex<HashMap<i64, Arc<Buckets>>>,
}

impl fmt::Debug for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for Grading {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.rows == other.rows
    }
}

impl Grading {
    pub fn fine(nvars: usize) -> Arc<Self> {
        let rows = (0..nvars)
            .map(|i| (0..nvars).map(|j| (i == j) as i64).collect())
            .collect();
        Arc::new(Self::build(GradingKind::Fine, nvars, rows))
    }

    /// Total degree plus the given extra weight rows.
    pub fn torus(nvars: usize, extra: Vec<Vec<i64>>) -> Arc<Self> {
        let mut rows = vec![vec![1; nvars]];
        rows.extend(extra);
        Arc::new(Self::build(GradingKind::Torus, nvars, rows))
    }

    pub fn total(nvars: usize) -> Arc<Self> {
        Self::torus(nvars, Vec::new())
    }

    fn build(kind: GradingKind, nvars: usize, rows: Vec<Vec<i64>>) -> Self {
        Grading {
            kind,
            nvars,
            rows,
            by_degree: Mutex::new(HashMap::new()),
        }
    }

    /// The finest grading making every polynomial homogeneous: the weights
    /// orthogonal to all exponent differences within each polynomial. Full
    /// rank gives the fine grading.
    pub fn detect<F: Field>(nvars: usize, polys: &[Polynomial<F>]) -> Result<Arc<Self>> {
        let q = Rationals;
        let mut diffs: Vec<SparseVec<Rat>> = Vec::new();
        for p in polys {
            if p.nvars() != nvars {
                return Err(Error::VariableCountMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
            if !p.is_homogeneous() {
                return Err(Error::NotHomogeneous(p.to_string()));
            }
            let mut terms = p.terms();
            if let Some((lead, _)) = terms.next() {
                for (e, _) in terms {
                    let d: Vec<Rat> = e
                        .sub(lead)
                        .0
                        .iter()
                        .map(|&v| Rat::from_i64(v as i64))
                        .collect();
                    diffs.push(SparseVec::from_dense(&q, &d));
                }
            }
        }
        // weights w with <w, diff> = 0: kernel of the map whose rows are diffs
        let columns: Vec<SparseVec<Rat>> = (0..nvars)
            .map(|j| {
                let col: Vec<Rat> = diffs.iter().map(|d| d.get(&q, j)).collect();
                SparseVec::from_dense(&q, &col)
            })
            .collect();
        let kernel = Matrix::from_columns(diffs.len(), columns).kernel(&q);
        if kernel.len() == nvars {
            return Ok(Self::fine(nvars));
        }
        let mut ech = Echelon::new(&q, nvars, false);
        for v in &kernel {
            let v0 = v.get(&q, 0);
            let ones = SparseVec::from_dense(&q, &vec![v0; nvars]);
            let shifted = v.sub(&q, &ones);
            if !shifted.is_zero() {
                ech.insert(&shifted);
            }
        }
        let extra = ech.reduced_basis().iter().map(|r| primitive(r, nvars)).collect();
        Ok(Self::torus(nvars, extra))
    }

    pub fn kind(&self) -> GradingKind {
        self.kind
    }

    pub fn is_fine(&self) -> bool {
        self.kind == GradingKind::Fine
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn describe(&self) -> String {
        match self.kind {
            GradingKind::Fine => "fine".to_string(),
            GradingKind::Torus => {
                let rows: Vec<String> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let v: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                        format!("[{}]", v.join(","))
                    })
                    .collect();
                format!("torus{}", rows.join(""))
            }
        }
    }

    pub fn grade_of(&self, e: &Exponent) -> Grade {
        self.rows
            .iter()
            .map(|r| r.iter().zip(&e.0).map(|(w, &a)| w * a as i64).sum())
            .collect()
    }

    /// Grade of a nonzero polynomial homogeneous for this grading.
    pub fn degree_of<F: Field>(&self, f: &Polynomial<F>) -> Result<Grade> {
        let mut it = f.terms();
        let (lead, _) = it
            .next()
            .ok_or_else(|| Error::NotHomogeneous("zero polynomial has no degree".into()))?;
        let g = self.grade_of(lead);
        if it.any(|(e, _)| self.grade_of(e) != g) {
            return Err(Error::NotHomogeneous(format!("{f} under {}", self.describe())));
        }
        Ok(g)
    }

    pub fn total_degree(&self, g: &Grade) -> i64 {
        match self.kind {
            GradingKind::Fine => g.iter().sum(),
            GradingKind::Torus => g[0],
        }
    }

    pub fn check_grade(&self, g: &Grade) -> Result<()> {
        if g.len() != self.rank() {
            return Err(Error::DegreeKey(format!(
                "grade {} has length {}, grading {} needs {}",
                render_grade(g),
                g.len(),
                self.describe(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// Monomials (nonnegative exponents) of the given grade, in descending
    /// graded reverse-lexicographic order.
    pub fn monomials(&self, g: &Grade) -> Arc<Vec<Exponent>> {
        if self.is_fine() {
            let e = Exponent(g.iter().map(|&v| v as i32).collect());
            return Arc::new(if e.is_nonnegative() { vec![e] } else { Vec::new() });
        }
        let d = g[0];
        let buckets = {
            let cached = self.by_degree.lock().expect("grading cache").get(&d).cloned();
            match cached {
                Some(b) => b,
                None => {
                    let mut map: HashMap<Grade, Vec<Exponent>> = HashMap::new();
                    for m in monomials_of_degree(self.nvars, d) {
                        map.entry(self.grade_of(&m)).or_default().push(m);
                    }
                    let b: Arc<Buckets> =
                        Arc::new(map.into_iter().map(|(k, v)| (k, Arc::new(v))).collect());
                    self.by_degree
                        .lock()
                        .expect("grading cache")
                        .entry(d)
                        .or_insert(b)
                        .clone()
                }
            }
        };
        buckets.get(g).cloned().unwrap_or_default()
    }

    /// Rough center of the grades of total degree `d`, used to place torus windows.
    pub fn center(&self, d: i64) -> Grade {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if i == 0 && self.kind == GradingKind::Torus {
                    d
                } else {
                    let s: i64 = r.iter().sum();
                    Integer::div_floor(&(s * d), &(self.nvars as i64))
                }
            })
            .collect()
    }
}

fn primitive(r: &SparseVec<Rat>, n: usize) -> Vec<i64> {
    let q = Rationals;
    let dense = r.to_dense(&q, n);
    let lcm = dense
        .iter()
        .fold(BigInt::from(1), |acc, v| acc.lcm(&v.denom()));
    let ints: Vec<BigInt> = dense.iter().map(|v| (v.to_big() * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let sign = ints
        .iter()
        .find(|v| !v.is_zero())
        .map(|v| if v.is_negative() { -1 } else { 1 })
        .unwrap_or(1);
    ints.iter()
        .map(|v| (v / &g).to_i64().expect("small weight") * sign)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{default_names, parse_polynomial};

    fn polys(src: &[&str]) -> Vec<Polynomial<Rationals>> {
        src.iter()
            .map(|s| parse_polynomial(&Rationals, &default_names(4), s).unwrap())
            .collect()
    }

    #[test]
    fn twisted_cubic_weights() {
        let g = Grading::detect(4, &polys(&["x*z - y^2", "y*w - z^2", "x*w - y*z"])).unwrap();
        assert_eq!(g.rows(), &[vec![1, 1, 1, 1], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn rational_quartic_weights() {
        let g = Grading::detect(4, &polys(&["x*w - y*z", "y^3 - x^2*z", "z^3 - y*w^2"])).unwrap();
        assert_eq!(g.rows(), &[vec![1, 1, 1, 1], vec![0, 1, 3, 4]]);
    }

    #[test]
    fn monomials_give_fine_grading() {
        let g = Grading::detect(4, &polys(&["x*z", "y*w"])).unwrap();
        assert!(g.is_fine());
        assert_eq!(g.monomials(&Grade::from_slice(&[1, 0, 2, 0])).len(), 1);
        assert!(g.monomials(&Grade::from_slice(&[-1, 0, 2, 0])).is_empty());
    }

    #[test]
    fn torus_buckets_partition_degree() {
        let g = Grading::torus(4, vec![vec![0, 1, 2, 3]]);
        let total: usize = (0..=15)
            .map(|w| g.monomials(&Grade::from_slice(&[5, w])).len())
            .sum();
        assert_eq!(total, 56);
    }

    #[test]
    fn inhomogeneous_rejected() {
        assert!(Grading::detect(4, &polys(&["x + y^2"])).is_err());
        let g = Grading::total(4);
        assert!(g.degree_of(&polys(&["x + y^2"])[0]).is_err());
    }
}
