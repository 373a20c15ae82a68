//! Exact rational helpers shared by the closed-form modules.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half(x: &Rational) -> Rational {
    x / int(2)
}

pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // numerator/denominator too large for a direct conversion
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits().max(d.bits()) as i64 - 60;
    let scale = |b: &BigInt| -> f64 {
        if shift > 0 {
            (b >> shift as usize).to_f64().unwrap_or(f64::NAN)
        } else {
            b.to_f64().unwrap_or(f64::NAN)
        }
    };
    scale(n) / scale(d)
}

/// Parses "3", "-2", "3.25", "1e-3", "7/2" into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse(0, "empty number"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad numerator in {t:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::parse(t.find('/').unwrap() + 1, format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::parse(t.find('/').unwrap() + 1, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..]
                .parse()
                .map_err(|_| Error::parse(pos + 1, format!("bad exponent in {t:?}")))?;
            if e.abs() > 4000 {
                return Err(Error::parse(pos + 1, "exponent too large"));
            }
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(Error::parse(0, format!("no digits in {t:?}")));
    }
    if let Some(bad) = whole.chars().chain(frac.chars()).position(|c| !c.is_ascii_digit()) {
        return Err(Error::parse(bad, format!("unexpected character in {t:?}")));
    }
    let digits: BigInt = format!("{whole}{frac}0").parse().unwrap();
    let digits = digits / BigInt::from(10);
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if sign < 0 { -value } else { value })
}

/// Rounds to 15 significant digits so that every encoder prints the same value.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn exact_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A computed quantity: exact when every input was rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => to_f64(q),
            Value::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Approx(_) => None,
        }
    }

    pub fn recip(&self) -> Value {
        match self {
            Value::Exact(q) => Value::Exact(q.recip()),
            Value::Approx(x) => Value::Approx(1.0 / x),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_positive(),
            Value::Approx(x) => *x > 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_one(),
            Value::Approx(x) => *x == 1.0,
        }
    }
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Exact(q)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{}", exact_string(q)),
            Value::Approx(x) => write!(f, "{}", round15(*x)),
        }
    }
}

/// Serialized as `{"value": <decimal>, "exact": "num/den"}` (exact omitted for floats).
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("value", &round15(self.to_f64()))?;
        if let Value::Exact(q) = self {
            map.serialize_entry("exact", &exact_string(q))?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("3.25").unwrap(), ratio(13, 4));
        assert_eq!(parse_rational("3.0").unwrap(), int(3));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7/2").unwrap(), ratio(7, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e", "1e99999", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn huge_rationals_convert() {
        let big = num_traits::pow(int(10), 400) / (num_traits::pow(int(10), 400) * int(3));
        assert!((to_f64(&big) - 1.0 / 3.0).abs() < 1e-15);
        let big2 = (num_traits::pow(int(7), 500) + int(1)) / num_traits::pow(int(7), 499);
        assert!((to_f64(&big2) - 7.0).abs() < 1e-12);
    }
}
