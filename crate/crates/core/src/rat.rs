//! Rational numbers that stay in machine words while they fit.
//!
//! Matrix entries in the cohomology computations are mostly tiny integers, and
//! arbitrary-precision arithmetic there costs far more than the elimination
//! itself. `Rat` keeps a reduced `i64` fraction and falls back to
//! [`BigRational`] only on overflow. The representation is canonical, so
//! derived equality and hashing agree with numeric equality.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    /// `n / d` with `d > 0`, `gcd(n, d) = 1` and `n != i64::MIN`.
    Small(i64, i64),
    /// Never representable as `Small`.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u128(a.unsigned_abs() as u128, b.unsigned_abs() as u128) as i64
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn from_i64(n: i64) -> Self {
        if n == i64::MIN {
            Rat::Big(Box::new(BigRational::from_integer(BigInt::from(n))))
        } else {
            Rat::Small(n, 1)
        }
    }

    /// `n / d` for `d != 0`, reduced.
    fn from_i128(mut n: i128, mut d: i128) -> Self {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if fits(n) && fits(d) {
            Rat::Small(n as i64, d as i64)
        } else {
            Rat::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    pub fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(Box::new(q)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(q) => (**q).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(q) => q.denom().is_one(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(q) => q.denom().clone(),
        }
    }

    pub fn add(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if b == d {
                    Rat::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Rat::from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => Rat::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(q) => Rat::from_big(-(**q).clone()),
        }
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rat::zero();
                }
                let g1 = gcd_i64(*a, *d);
                let g2 = gcd_i64(*c, *b);
                let n = (*a / g1) as i128 * (*c / g2) as i128;
                let m = (*b / g2) as i128 * (*d / g1) as i128;
                if fits(n) && fits(m) {
                    Rat::Small(n as i64, m as i64)
                } else {
                    Rat::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(m))))
                }
            }
            _ => Rat::from_big(self.to_big() * other.to_big()),
        }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(0, _) => panic!("inverse of zero"),
            Rat::Small(n, d) => {
                if *n < 0 {
                    Rat::Small(-d, -n)
                } else {
                    Rat::Small(*d, *n)
                }
            }
            Rat::Big(q) => Rat::from_big(q.recip()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(q) => q.is_negative(),
        }
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Self {
        Rat::from_big(q)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_i64(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Rat::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn overflow_falls_back_and_returns() {
        let a = Rat::from_i64(i64::MAX);
        let s = a.add(&a);
        assert!(matches!(s, Rat::Big(_)));
        assert_eq!(s.sub(&a), a);
        assert!(matches!(s.sub(&a), Rat::Small(..)));
        let m = Rat::from_i64(i64::MIN);
        assert!(matches!(m, Rat::Big(_)));
        assert_eq!(m.neg().to_big(), -m.to_big());
    }

    #[test]
    fn reduces_and_renders() {
        let r = Rat::from_big(big(4, -6));
        assert_eq!(r, Rat::Small(-2, 3));
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(r.recip(), Rat::Small(-3, 2));
    }

    fn arb() -> impl Strategy<Value = (i64, i64)> {
        prop_oneof![
            (-50i64..50, 1i64..50),
            (any::<i64>().prop_filter("min", |v| *v != i64::MIN), 1i64..i64::MAX),
        ]
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational((a, b) in arb(), (c, d) in arb()) {
            let (x, y) = (big(a, b), big(c, d));
            let (rx, ry) = (Rat::from_big(x.clone()), Rat::from_big(y.clone()));
            prop_assert_eq!(rx.add(&ry), Rat::from_big(&x + &y));
            prop_assert_eq!(rx.sub(&ry), Rat::from_big(&x - &y));
            prop_assert_eq!(rx.mul(&ry), Rat::from_big(&x * &y));
            if !y.is_zero() {
                prop_assert_eq!(ry.recip(), Rat::from_big(y.recip()));
            }
        }
    }
}
