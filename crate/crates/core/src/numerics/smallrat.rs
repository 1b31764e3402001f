//! Fixed-width rational arithmetic on i128 with overflow detection, used as
//! the fast path inside the simplex. Every operation reports `None` on
//! overflow so callers can retry with arbitrary precision.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::rat::Rat;

/// Reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallRat {
    pub num: i128,
    pub den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl SmallRat {
    pub const ZERO: SmallRat = SmallRat { num: 0, den: 1 };
    pub const ONE: SmallRat = SmallRat { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Option<SmallRat> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den);
        let (mut num, mut den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if den < 0 {
            num = num.checked_neg()?;
            den = den.checked_neg()?;
        }
        Some(SmallRat { num, den })
    }

    pub fn from_rat(x: &Rat) -> Option<SmallRat> {
        let num = x.numer().to_i128()?;
        let den = x.denom().to_i128()?;
        SmallRat::new(num, den)
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }

    pub fn is_negative(self) -> bool {
        self.num < 0
    }

    pub fn neg(self) -> Option<SmallRat> {
        Some(SmallRat { num: self.num.checked_neg()?, den: self.den })
    }

    pub fn add(self, o: SmallRat) -> Option<SmallRat> {
        // (a/b) + (c/d) with cross reduction
        let g = gcd(self.den, o.den);
        let lb = self.den / g;
        let rb = o.den / g;
        let num = self.num.checked_mul(rb)?.checked_add(o.num.checked_mul(lb)?)?;
        let den = self.den.checked_mul(rb)?;
        SmallRat::new(num, den)
    }

    pub fn sub(self, o: SmallRat) -> Option<SmallRat> {
        self.add(o.neg()?)
    }

    pub fn mul(self, o: SmallRat) -> Option<SmallRat> {
        let g1 = gcd(self.num, o.den);
        let g2 = gcd(o.num, self.den);
        let num = (self.num / g1).checked_mul(o.num / g2)?;
        let den = (self.den / g2).checked_mul(o.den / g1)?;
        SmallRat::new(num, den)
    }

    pub fn div(self, o: SmallRat) -> Option<SmallRat> {
        if o.num == 0 {
            return None;
        }
        self.mul(SmallRat::new(o.den, o.num)?)
    }

    pub fn recip(self) -> Option<SmallRat> {
        if self.num == 0 {
            None
        } else {
            SmallRat::new(self.den, self.num)
        }
    }
}

impl PartialOrd for SmallRat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // denominators are positive; compare a*d' vs c*b in i128 if safe
        let l = self.num.checked_mul(other.den)?;
        let r = other.num.checked_mul(self.den)?;
        l.partial_cmp(&r)
    }
}

impl SmallRat {
    /// Total comparison that can fail on overflow.
    pub fn cmp_checked(self, other: SmallRat) -> Option<std::cmp::Ordering> {
        self.partial_cmp(&other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat::rat;

    #[test]
    fn arithmetic_matches_bigrational() {
        let a = SmallRat::new(3, -6).unwrap();
        assert_eq!((a.num, a.den), (-1, 2));
        let b = SmallRat::new(5, 4).unwrap();
        assert_eq!(a.add(b).unwrap(), SmallRat::new(3, 4).unwrap());
        assert_eq!(a.mul(b).unwrap(), SmallRat::new(-5, 8).unwrap());
        assert_eq!(a.sub(b).unwrap().to_rat(), rat(-7, 4));
        assert_eq!(b.recip().unwrap(), SmallRat::new(4, 5).unwrap());
        assert!(a.cmp_checked(b) == Some(std::cmp::Ordering::Less));
    }

    #[test]
    fn overflow_is_detected() {
        let big = SmallRat::new(i128::MAX, 1).unwrap();
        assert!(big.mul(big).is_none());
        assert!(big.add(big).is_none());
    }
}
