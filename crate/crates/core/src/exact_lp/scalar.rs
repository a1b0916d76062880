//! Solver-internal rational with a machine-word fast path.
//!
//! Tableau entries for cell-incidence problems are almost always small
//! fractions; they stay in `Ratio<i64>` and are promoted to a boxed
//! `BigRational` only when a checked operation overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub(crate) enum Scalar {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Small(Ratio::new_raw(0, 1));

    pub fn one() -> Self {
        Scalar::Small(Ratio::one())
    }

    pub fn from_big(r: &BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(Ratio::new_raw(n, d)),
            _ => Scalar::Big(Box::new(r.clone())),
        }
    }

    fn demote(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(Ratio::new_raw(n, d)),
            _ => Scalar::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Scalar::Big(b) => (**b).clone(),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(r) => *r.numer() == 0,
            Scalar::Big(b) => b.is_zero(),
        }
    }

    #[inline]
    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Small(r) => *r.numer() > 0,
            Scalar::Big(b) => b.is_positive(),
        }
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(r) => *r.numer() < 0,
            Scalar::Big(b) => b.is_negative(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Small(r) => match r.numer().checked_neg() {
                Some(n) => Scalar::Small(Ratio::new_raw(n, *r.denom())),
                None => Scalar::demote(-self.to_big()),
            },
            Scalar::Big(b) => Scalar::demote(-(**b).clone()),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, o) {
            if let Some(r) = a.checked_add(b) {
                return Scalar::Small(r);
            }
        }
        Scalar::demote(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, o) {
            if let Some(r) = a.checked_sub(b) {
                return Scalar::Small(r);
            }
        }
        Scalar::demote(self.to_big() - o.to_big())
    }

    #[cfg(test)]
    pub fn mul(&self, o: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, o) {
            if let Some(r) = a.checked_mul(b) {
                return Scalar::Small(r);
            }
        }
        Scalar::demote(self.to_big() * o.to_big())
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        debug_assert!(!o.is_zero());
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, o) {
            if let Some(r) = a.checked_div(b) {
                return Scalar::Small(r);
            }
        }
        Scalar::demote(self.to_big() / o.to_big())
    }

    /// `self - f * x`, the tableau row update.
    #[inline]
    pub fn sub_mul(&self, f: &Scalar, x: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(fs), Scalar::Small(xs)) = (self, f, x) {
            if let Some(r) = fs.checked_mul(xs).and_then(|p| a.checked_sub(&p)) {
                return Scalar::Small(r);
            }
        }
        Scalar::demote(self.to_big() - f.to_big() * x.to_big())
    }

    pub fn cmp(&self, o: &Scalar) -> Ordering {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, o) {
            // cross-multiply in i128; denominators are positive
            let l = *a.numer() as i128 * *b.denom() as i128;
            let r = *b.numer() as i128 * *a.denom() as i128;
            return l.cmp(&r);
        }
        self.to_big().cmp(&o.to_big())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::Small(Ratio::new(n, d))
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = s(i64::MAX, 1);
        let sum = big.add(&big);
        assert!(matches!(sum, Scalar::Big(_)));
        let back = sum.sub(&big);
        assert!(matches!(back, Scalar::Small(_)));
        assert_eq!(back.cmp(&big), Ordering::Equal);
    }

    #[test]
    fn arithmetic_matches_bigrational() {
        let a = s(3, 7);
        let b = s(-5, 11);
        let ab = a.to_big() * b.to_big();
        assert_eq!(a.mul(&b).to_big(), ab);
        assert_eq!(a.sub_mul(&b, &a).to_big(), a.to_big() - b.to_big() * a.to_big());
        assert_eq!(a.div(&b).to_big(), a.to_big() / b.to_big());
        assert_eq!(b.neg().to_big(), -b.to_big());
        assert_eq!(a.cmp(&b), Ordering::Greater);
    }
}
