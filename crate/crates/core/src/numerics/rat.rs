//! Arbitrary-precision rationals. Backed by `num_rational::BigRational`,
//! which keeps values reduced with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}

/// Parse "a/b" or "a".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Render as "a" or "a/b".
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Nearest f64; good enough for diagnostics and eigen seeding.
pub fn rat_to_f64(x: &Rat) -> f64 {
    let n = x.numer();
    let d = x.denom();
    // Try exact small path first.
    if let (Some(n), Some(d)) = (to_i128(n), to_i128(d)) {
        return n as f64 / d as f64;
    }
    let sn = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let sd = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    sn / sd
}

fn to_i128(x: &BigInt) -> Option<i128> {
    let (sign, digits) = x.to_u64_digits();
    if digits.len() > 2 {
        return None;
    }
    let mut v: i128 = 0;
    for &d in digits.iter().rev() {
        v = v.checked_shl(64)?.checked_add(d as i128)?;
    }
    Some(match sign {
        num_bigint::Sign::Minus => -v,
        _ => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-4", "5/3", "-7/2", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn canonical_form() {
        let r = rat(-4, -6);
        assert_eq!(r, rat(2, 3));
        assert!(r.denom() > &num_bigint::BigInt::from(0));
    }
}
