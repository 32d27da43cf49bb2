//! Arbitrary-precision rationals and their textual `"p/q"` form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_int(n: &Int) -> Rational {
    BigRational::from_integer(n.clone())
}

/// Formats as `"p"` when the denominator is one, `"p/q"` otherwise.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

pub fn floor_int(x: &Rational) -> Int {
    x.numer().div_floor(x.denom())
}

pub fn ceil_int(x: &Rational) -> Int {
    -((-x.numer()).div_floor(x.denom()))
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Int {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive_integer_ray(v: &[Rational]) -> Option<Vec<Int>> {
    let d = common_denominator(v.iter());
    let scaled: Vec<Int> = v.iter().map(|x| (x * from_int(&d)).to_integer()).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    Some(scaled.into_iter().map(|x| x / &g).collect())
}

pub fn to_i64(x: &Int) -> i64 {
    x.to_i64().expect("integer does not fit in i64")
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Exact integer square root (floor) of a non-negative integer.
pub fn isqrt(x: &Int) -> Int {
    assert!(!x.is_negative(), "isqrt of negative number");
    x.sqrt()
}

/// Returns `Some(r)` when the non-negative rational `x` is the square of a rational `r >= 0`.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Canonical representative of `x` modulo `m` in `[0, m)`.
pub fn rational_mod(x: &Rational, m: &Rational) -> Rational {
    let q = floor_int(&(x / m));
    x - m * from_int(&q)
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect()
        }
    }

    pub mod mat {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let rows: Vec<Vec<String>> = xs.iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
            serde::Serialize::serialize(&rows, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
            let v = Vec::<Vec<String>>::deserialize(d)?;
            v.iter()
                .map(|r| r.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(-4, 2)), "-2");
        assert_eq!(parse_rational("-17/2").unwrap(), rat(-17, 2));
        assert_eq!(parse_rational("5").unwrap(), rat_int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floor_ceil_and_mod() {
        assert_eq!(floor_int(&rat(-3, 2)), int(-2));
        assert_eq!(ceil_int(&rat(-3, 2)), int(-1));
        assert_eq!(ceil_int(&rat(4, 2)), int(2));
        assert_eq!(rational_mod(&rat(-1, 4), &rat_int(2)), rat(7, 4));
    }

    #[test]
    fn rays_and_roots() {
        let v = vec![rat(1, 2), rat(-3, 4), rat_int(0)];
        assert_eq!(primitive_integer_ray(&v).unwrap(), vec![int(2), int(-3), int(0)]);
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }
}
