//! Exact rational scalars over the ground field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The ground field: arbitrary-precision rationals, always reduced, with a
/// positive denominator (both invariants are maintained by `BigRational`).
pub type Scalar = BigRational;

/// Integer scalar.
pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Reduced fraction `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `x^e` for any integer exponent; negative exponents invert. Panics when
/// raising zero to a negative power.
pub fn scalar_pow(x: &Scalar, e: i64) -> Scalar {
    if e == 0 {
        return Scalar::one();
    }
    let base = if e > 0 {
        x.clone()
    } else {
        assert!(!x.is_zero(), "zero has no negative powers");
        x.recip()
    };
    let mut out = Scalar::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// `m^e` for a machine integer base and natural exponent.
pub fn int_pow(m: i64, e: u32) -> Scalar {
    Scalar::from_integer(BigInt::from(m).pow(e))
}

/// Renders as `p` or `p/q` with the sign on the numerator.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed). Returns `None` on malformed
/// input or a zero denominator.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Scalar::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Scalar::new(p, q))
            }
        }
    }
}

/// True when `x` is a (nonnegative) integer that fits in `u32`.
pub fn as_u32(x: &Scalar) -> Option<u32> {
    if !x.denom().is_one() || x.is_negative() {
        return None;
    }
    u32::try_from(x.numer()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_reduces() {
        assert_eq!(format_scalar(&ratio(2, 4)), "1/2");
        assert_eq!(format_scalar(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_scalar(&int(7)), "7");
   }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "5", "-5", "3/4", "-3/4", "10/4"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&format_scalar(&v)).unwrap(), v);
        }
        assert!(parse_scalar("1/0").is_none());
        assert!(parse_scalar("x").is_none());
    }

    #[test]
    fn powers() {
        assert_eq!(scalar_pow(&int(2), 10), int(1024));
        assert_eq!(scalar_pow(&int(2), -2), ratio(1, 4));
        assert_eq!(scalar_pow(&ratio(2, 3), 0), int(1));
    }
}
