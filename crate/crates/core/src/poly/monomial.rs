use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector of a (Laurent) monomial. Entries may be negative.
///
/// `Ord` is graded reverse-lexicographic with the first variable largest,
/// so `x > y > z > w` among the degree-one monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Exponent(pub SmallVec<[i32; 6]>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(SmallVec::from_elem(0, nvars))
    }

    pub fn from_slice(e: &[i32]) -> Self {
        Exponent(SmallVec::from_slice(e))
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = Self::zero(nvars);
        e.0[var] = 1;
        e
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&a| a as i64).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.nvars(), other.nvars());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.nvars(), other.nvars());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i32) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    /// `self` divides `other` (componentwise `<=`).
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    /// Renders as `x^2*y^-1*z`; the empty product is `1`.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &a) in self.0.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], a)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable is larger
                return b.cmp(a);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Default variable names: `x, y, z, w` for up to four variables, else `x0, x1, ...`.
pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars <= 4 {
        ["x", "y", "z", "w"][..nvars]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }
}

/// All exponent vectors in `nvars` variables of total degree `deg`, in
/// descending graded reverse-lexicographic order.
pub fn monomials_of_degree(nvars: usize, deg: i64) -> Vec<Exponent> {
    let mut out = Vec::new();
    if deg < 0 || nvars == 0 {
        if deg == 0 && nvars == 0 {
            out.push(Exponent::zero(0));
        }
        return out;
    }
    let mut cur = vec![0i32; nvars];
    fill(&mut cur, 0, deg as i32, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn fill(cur: &mut Vec<i32>, idx: usize, left: i32, out: &mut Vec<Exponent>) {
    if idx + 1 == cur.len() {
        cur[idx] = left;
        out.push(Exponent::from_slice(cur));
        return;
    }
    for a in 0..=left {
        cur[idx] = a;
        fill(cur, idx + 1, left - a, out);
    }
}

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_orders_variables() {
        let x = Exponent::from_slice(&[1, 0, 0, 0]);
        let y = Exponent::from_slice(&[0, 1, 0, 0]);
        let z = Exponent::from_slice(&[0, 0, 1, 0]);
        let w = Exponent::from_slice(&[0, 0, 0, 1]);
        assert!(x > y && y > z && z > w);
        // grevlex: x*z < y^2
        let xz = Exponent::from_slice(&[1, 0, 1, 0]);
        let yy = Exponent::from_slice(&[0, 2, 0, 0]);
        assert!(yy > xz);
    }

    #[test]
    fn monomial_counts_match_binomials() {
        for n in 1..5 {
            for d in 0..7 {
                assert_eq!(
                    monomials_of_degree(n, d).len() as u64,
                    binomial(d + n as i64 - 1, n as i64 - 1)
                );
            }
        }
        assert_eq!(monomials_of_degree(4, 5).len(), 56);
    }

    #[test]
    fn render_laurent() {
        let names = default_names(4);
        assert_eq!(Exponent::from_slice(&[-1, -2, 0, 1]).render(&names), "x^-1*y^-2*w");
        assert_eq!(Exponent::zero(4).render(&names), "1");
    }
}
