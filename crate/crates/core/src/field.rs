//! Exact scalar fields: the rationals and prime fields `F_p`.
//!
//! Fields are small context objects; elements are plain values that carry no
//! reference to their field. All arithmetic goes through the field so that the
//! modulus of `F_p` can be chosen at runtime.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Image of an exact rational; fails when the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Canonical exact text, `p/q` for rationals and the residue in `[0, p)` otherwise.
    fn render(&self, a: &Self::Elem) -> String;
    /// Parses what `render` produces.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    /// Short name used in reports and cache keys, e.g. `Q` or `F_32003`.
    fn name(&self) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// `acc += a * b`
    fn add_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let prod = self.mul(a, b);
        *acc = self.add(acc, &prod);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The field of rational numbers, exact at any size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(b)
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a.sub(b)
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg()
    }
    fn inv(&self, a: &Rat) -> Rat {
        a.recip()
    }
    fn from_rational(&self, q: &BigRational) -> Result<Rat> {
        Ok(Rat::from_big(q.clone()))
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from_i64(n)
    }
    fn render(&self, a: &Rat) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<Rat> {
        parse_rational(s).map(Rat::from_big)
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn is_one(&self, a: &Rat) -> bool {
        a.is_one()
    }
    fn add_mul_assign(&self, acc: &mut Rat, a: &Rat, b: &Rat) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *acc = acc.add(&a.mul(b));
    }
}

/// The prime field `F_p` for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

pub const DEFAULT_PRIME: u64 = 32003;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "{p} is not a prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_int(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        n.mod_floor(&m).to_u64().expect("residue fits in u64")
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return Err(Error::InvalidField(format!(
                "denominator of {} is divisible by {}",
                render_rational(q),
                self.p
            )));
        }
        let num = self.reduce_int(q.numer());
        Ok(self.mul(&num, &self.inv(&den)))
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
    fn add_mul_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 1,
        column: 1,
        message: format!("invalid rational `{s}`"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// True when `q` has a denominator coprime to `p`.
pub fn denominator_safe(q: &BigRational, p: u64) -> bool {
    !(q.denom().abs() % BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(32003).unwrap();
        for a in [1u64, 2, 17, 32002, 12345] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn rational_reduction_mod_p() {
        let f = PrimeField::new(7).unwrap();
        let q = parse_rational("3/2").unwrap();
        let r = f.from_rational(&q).unwrap();
        assert_eq!(f.mul(&r, &2), 3);
        assert!(f.from_rational(&parse_rational("1/14").unwrap()).is_err());
    }

    #[test]
    fn rational_render_roundtrip() {
        for s in ["0", "-3", "5/7", "-12/5"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(render_rational(&q), s);
        }
        assert_eq!(render_rational(&parse_rational("4/6").unwrap()), "2/3");
    }
}
