//! Exact integer, rational and 2×2 matrix arithmetic.
//!
//! Every integer is a [`BigInt`]; nothing here can overflow. Matrices are
//! compared field by field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::word::Letter;

pub type Int = BigInt;

/// Serde adapter writing integers as decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(de)?;
        super::parse_int(&text, "integer", 0).map_err(de::Error::custom)
    }

    pub mod option {
        use num_bigint::BigInt;
        use serde::{de, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<BigInt>, ser: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => ser.collect_str(v),
                None => ser.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigInt>, D::Error> {
            let text = Option::<String>::deserialize(de)?;
            text.map(|t| super::super::parse_int(&t, "integer", 0).map_err(de::Error::custom))
                .transpose()
        }
    }
}

/// Parses `-?[0-9]+` strictly. `offset` is added to error positions so
/// callers can report positions relative to a larger input.
pub(crate) fn parse_int(
    text: &str,
    what: &'static str,
    offset: usize,
) -> std::result::Result<BigInt, ParseError> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    let sign_len = text.len() - digits.len();
    if digits.is_empty() {
        return Err(ParseError::new(what, offset + sign_len, "expected digits"));
    }
    if let Some((i, ch)) = digits.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        return Err(ParseError::new(
            what,
            offset + sign_len + i,
            format!("unexpected character {ch:?}"),
        ));
    }
    Ok(text.parse().expect("validated decimal literal"))
}

/// Sign of a nonzero integer as ±1.
pub fn sgn(x: &BigInt) -> BigInt {
    debug_assert!(!x.is_zero(), "sgn is only defined for nonzero integers");
    if x.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rational {
        Rational {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    fn normalized(mut num: BigInt, mut den: BigInt) -> Rational {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Rational { num, den }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rational> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Rational> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseError::new("rational", 0, "empty input").into());
        }
        match t.split_once('/') {
            None => Ok(Rational::from_integer(parse_int(t, "rational", lead)?)),
            Some((n, d)) => {
                let num = parse_int(n.trim_end(), "rational", lead)?;
                let d_off = lead + n.len() + 1;
                let d_trim = d.trim_start();
                let den = parse_int(d_trim, "rational", d_off + d.len() - d_trim.len())?;
                Rational::new(num, den)
            }
        }
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::normalized(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::normalized(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// The 2×2 integer matrix `(a b; c d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    #[serde(with = "decimal")]
    pub a: BigInt,
    #[serde(with = "decimal")]
    pub b: BigInt,
    #[serde(with = "decimal")]
    pub c: BigInt,
    #[serde(with = "decimal")]
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Mat2 {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Mat2 {
        Mat2::new(1, 0, 0, 1)
    }

    /// `A = (1 1; 0 1)`
    pub fn gen_a() -> Mat2 {
        Mat2::new(1, 1, 0, 1)
    }

    /// `B = (1 0; 1 1)`
    pub fn gen_b() -> Mat2 {
        Mat2::new(1, 0, 1, 1)
    }

    /// `C = (1 0; 0 -1)`
    pub fn gen_c() -> Mat2 {
        Mat2::new(1, 0, 0, -1)
    }

    /// `S = B⁻¹AB⁻¹ = (0 1; -1 0)`
    pub fn mat_s() -> Mat2 {
        Mat2::new(0, 1, -1, 0)
    }

    /// `T = B`
    pub fn mat_t() -> Mat2 {
        Mat2::gen_b()
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Integer power of a generator in closed form: `A^n = (1 n; 0 1)`,
    /// `B^n = (1 0; n 1)`, and `C^n` is `I` or `C` by parity.
    pub fn generator_power(letter: Letter, n: &BigInt) -> Mat2 {
        match letter {
            Letter::A => Mat2::new(1, n.clone(), 0, 1),
            Letter::B => Mat2::new(1, 0, n.clone(), 1),
            Letter::C if n.is_odd() => Mat2::gen_c(),
            Letter::C => Mat2::identity(),
        }
    }

    /// Multiplies every entry by `k`.
    pub fn scaled(&self, k: &BigInt) -> Mat2 {
        Mat2 {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, y: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &y.a + &self.b * &y.c,
            b: &self.a * &y.b + &self.b * &y.d,
            c: &self.c * &y.a + &self.d * &y.c,
            d: &self.c * &y.b + &self.d * &y.d,
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, y: Mat2) -> Mat2 {
        &self * &y
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scaled(&-BigInt::one())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = ParseError;

    /// Accepts `a b; c d` with optional surrounding `[...]` and either
    /// commas or whitespace between the entries of a row.
    fn from_str(s: &str) -> std::result::Result<Mat2, ParseError> {
        const WHAT: &str = "matrix";
        let base = s.as_ptr() as usize;
        let offset_of = |piece: &str| piece.as_ptr() as usize - base;

        let mut body = s.trim();
        if body.is_empty() {
            return Err(ParseError::new(WHAT, 0, "empty input"));
        }
        if let Some(rest) = body.strip_prefix('[') {
            body = rest
                .strip_suffix(']')
                .ok_or_else(|| ParseError::new(WHAT, s.trim_end().len(), "missing closing ']'"))?;
        } else if body.ends_with(']') {
            return Err(ParseError::new(
                WHAT,
                offset_of(body),
                "missing opening '['",
            ));
        }

        let rows: Vec<&str> = body.split(';').collect();
        if rows.len() != 2 {
            return Err(ParseError::new(
                WHAT,
                offset_of(body),
                format!("expected 2 rows separated by ';', found {}", rows.len()),
            ));
        }

        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let tokens: Vec<&str> = if row.contains(',') {
                row.split(',').map(str::trim).collect()
            } else {
                row.split_whitespace().collect()
            };
            if tokens.len() != 2 || tokens.iter().any(|t| t.is_empty()) {
                return Err(ParseError::new(
                    WHAT,
                    offset_of(row),
                    "expected 2 entries in row",
                ));
            }
            for tok in tokens {
                entries.push(parse_int(tok, WHAT, offset_of(tok))?);
            }
        }
        let mut it = entries.into_iter();
        let mut next = || it.next().expect("four entries");
        Ok(Mat2 {
            a: next(),
            b: next(),
            c: next(),
            d: next(),
        })
    }
}
