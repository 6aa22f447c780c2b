//! Scalar fields used by the matrix kernels.
//!
//! Exact work happens over [`Rat`] (arbitrary precision rationals) and
//! [`GaussRat`] (rationals adjoined `i`). The float types exist for the
//! numeric path only; converting into them is always an explicit call.

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LaError;

pub type Rat = BigRational;
pub type GaussRat = Complex<Rat>;

/// Arithmetic needed by the dense kernels.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + 'static
{
    /// Whether equality and zero tests are exact.
    const EXACT: bool;
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;
    /// Absolute value as a float, used for pivot selection and tolerances.
    fn modulus(&self) -> f64;
    fn to_c64(&self) -> Complex64;
}

impl Field for Rat {
    const EXACT: bool = true;
    const MODE: Mode = Mode::Rational;

    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn modulus(&self) -> f64 {
        rat_to_f64(self).abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl Field for GaussRat {
    const EXACT: bool = true;
    const MODE: Mode = Mode::Gaussian;

    fn from_i64(v: i64) -> Self {
        Complex::new(Rat::from_i64(v), Rat::zero())
    }
    fn from_rat(r: &Rat) -> Self {
        Complex::new(r.clone(), Rat::zero())
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rat(r: &Rat) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rat, im: Rat) -> GaussRat {
    Complex::new(re, im)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerators/denominators: fall back to a scaled quotient
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Nearest rational with the given denominator.
pub fn f64_to_rat_with_denominator(x: f64, denom: i64) -> Option<Rat> {
    let scaled = (x * denom as f64).round();
    if !scaled.is_finite() || scaled.abs() > 9.0e15 {
        return None;
    }
    Some(rat(scaled as i64, denom))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a Gaussian rational as `p/q`, `r/s i` or `p/q+r/s i`.
pub fn format_gauss(z: &GaussRat) -> String {
    if z.im.is_zero() {
        return format_rat(&z.re);
    }
    let im = if z.im.abs().is_one() {
        String::new()
    } else {
        format!("{} ", format_rat(&z.im.abs()))
    };
    let sign = if z.im.is_negative() { "-" } else { "+" };
    if z.re.is_zero() {
        let lead = if z.im.is_negative() { "-" } else { "" };
        format!("{lead}{im}i")
    } else {
        format!("{}{sign}{im}i", format_rat(&z.re))
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, LaError> {
    let t = s.trim();
    let bad = || LaError::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    } else {
        Ok(Rat::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
    }
}

/// Parses `a`, `b i`, `a+b i`, `a-b i`, `i`, `-i` with `a`, `b` rationals.
pub fn parse_gauss(s: &str) -> Result<GaussRat, LaError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || LaError::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(gauss(parse_rat(&t)?, Rat::zero()));
    };
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k);
    let (re, im) = match split {
        Some(k) => (parse_rat(&body[..k])?, &body[k..]),
        None => (Rat::zero(), body),
    };
    let im = match im {
        "" | "+" => Rat::one(),
        "-" => -Rat::one(),
        other => parse_rat(other.strip_prefix('+').unwrap_or(other)).map_err(|_| bad())?,
    };
    Ok(gauss(re, im))
}

/// Exactness mode of a value or matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Gaussian,
    Float,
}

/// A tagged scalar as it appears at the I/O boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rat),
    Gaussian(GaussRat),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Rational(_) => Mode::Rational,
            Scalar::Gaussian(_) => Mode::Gaussian,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    /// Parses the string form; a purely real value is reported as rational.
    pub fn parse(s: &str) -> Result<Scalar, LaError> {
        let z = parse_gauss(s)?;
        Ok(if z.im.is_zero() {
            Scalar::Rational(z.re)
        } else {
            Scalar::Gaussian(z)
        })
    }

    pub fn to_gauss(&self) -> Result<GaussRat, LaError> {
        match self {
            Scalar::Rational(r) => Ok(GaussRat::from_rat(r)),
            Scalar::Gaussian(z) => Ok(z.clone()),
            Scalar::Float(_) => Err(LaError::Mode("float scalar in exact context")),
        }
    }

    pub fn to_rat(&self) -> Result<Rat, LaError> {
        match self {
            Scalar::Rational(r) => Ok(r.clone()),
            Scalar::Gaussian(z) if z.im.is_zero() => Ok(z.re.clone()),
            Scalar::Gaussian(_) => Err(LaError::Mode("gaussian scalar in rational context")),
            Scalar::Float(_) => Err(LaError::Mode("float scalar in exact context")),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => f.write_str(&format_rat(r)),
            Scalar::Gaussian(z) => f.write_str(&format_gauss(z)),
            Scalar::Float(x) => write!(f, "{x:e}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Float(x) => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => Scalar::parse(&s).map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Scalar::Rational(int(i)))
                } else {
                    Err(serde::de::Error::custom(
                        "non-integer JSON numbers are not accepted; write rationals as \"p/q\"",
                    ))
                }
            }
            _ => Err(serde::de::Error::custom("expected a scalar string")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format_rat(&r), "-3/2");
    }

    #[test]
    fn gaussian_strings() {
        for (s, re, im) in [
            ("1/2+3/4 i", rat(1, 2), rat(3, 4)),
            ("-1/2-3/4i", rat(-1, 2), rat(-3, 4)),
            ("i", int(0), int(1)),
            ("-i", int(0), int(-1)),
            ("2 i", int(0), int(2)),
            ("-5", int(-5), int(0)),
            ("3-i", int(3), int(-1)),
        ] {
            assert_eq!(parse_gauss(s).unwrap(), gauss(re, im), "{s}");
        }
        for z in ["1/2+3/4 i", "-i", "7", "-2/3 i", "1-i"] {
            let v = parse_gauss(z).unwrap();
            assert_eq!(parse_gauss(&format_gauss(&v)).unwrap(), v);
        }
        assert!(parse_gauss("1/0").is_err());
        assert!(parse_gauss("abc").is_err());
    }

    #[test]
    fn scalar_modes() {
        assert_eq!(Scalar::parse("3/4").unwrap().mode(), Mode::Rational);
        assert_eq!(Scalar::parse("3/4 i").unwrap().mode(), Mode::Gaussian);
        assert!(Scalar::Float(1.0).to_rat().is_err());
        assert!(!Scalar::Float(1.0).is_exact());
    }
}
