//! Exact rational scalars and their wire format.
//!
//! Every quantity in the exact engines (weights, degrees, Euler numbers,
//! cone angles) is a reduced `i64` rational. On the wire a rational is the
//! string `"p/q"` (or just `"p"` when the denominator is one), parsed and
//! printed bit-exactly.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub type Rat = num_rational::Rational64;

/// Shorthand constructor for a reduced rational. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

pub fn is_integer(r: Rat) -> bool {
    r.is_integer()
}

/// Exact conversion to an integer; `None` when the denominator is not one.
pub fn to_integer(r: Rat) -> Option<i64> {
    r.is_integer().then(|| r.to_integer())
}

/// Floor of a rational as an integer.
pub fn floor(r: Rat) -> i64 {
    r.floor().to_integer()
}

/// Fractional part `{r}` in `[0, 1)`.
pub fn fract(r: Rat) -> Rat {
    r - r.floor()
}

/// Nearest double; exact for the denominators in play.
pub fn to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact square root, defined only on squares of rationals.
pub fn sqrt_exact(r: Rat) -> Option<Rat> {
    if *r.numer() < 0 {
        return None;
    }
    let num = isqrt(*r.numer())?;
    let den = isqrt(*r.denom())?;
    Some(Rat::new(num, den))
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut root = (n as f64).sqrt().round() as i64;
    while root > 0 && root * root > n {
        root -= 1;
    }
    while (root + 1) * (root + 1) <= n {
        root += 1;
    }
    (root * root == n).then_some(root)
}

pub fn format_rat(r: Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: i64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid rational numerator in {s:?}"))?;
    let den: i64 = den
        .trim()
        .parse()
        .map_err(|_| format!("invalid rational denominator in {s:?}"))?;
    if den == 0 {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rat::new(num, den))
}

/// Serde adapter: `#[serde(with = "crate::rat::serde_rat")]` on a `Rat`
/// field stores it as the `"p/q"` string.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Newtype used where a bare rational is (de)serialized outside a struct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WireRat(pub Rat);

impl Serialize for WireRat {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rat(self.0))
    }
}

impl<'de> Deserialize<'de> for WireRat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map(WireRat).map_err(de::Error::custom)
    }
}

impl fmt::Display for WireRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(self.0))
    }
}
