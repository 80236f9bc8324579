//! Simple finite continued fractions `[n1; n2, ..., nj]` and their
//! convergents.
//!
//! Every rational has exactly two expansions: the *first* one, whose last
//! quotient is at least 2 (or which has a single quotient), and the
//! *second* one, which ends in a 1. [`expand`] always produces the first;
//! [`ContinuedFraction::alternate`] switches between them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::exact::{parse_int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    First,
    Second,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::First => "first",
            Representation::Second => "second",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    quotients: Vec<BigInt>,
    representation: Representation,
}

#[allow(clippy::len_without_is_empty)]
impl ContinuedFraction {
    /// Validates the quotient list and infers which representation it is.
    pub fn new(quotients: Vec<BigInt>) -> Result<ContinuedFraction> {
        if quotients.is_empty() {
            return Err(Error::InvalidContinuedFraction("no quotients".into()));
        }
        if let Some((i, n)) = quotients
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, n)| !n.is_positive())
        {
            return Err(Error::InvalidContinuedFraction(format!(
                "quotient n{} = {} must be at least 1",
                i + 1,
                n
            )));
        }
        let representation = if quotients.len() >= 2 && quotients.last().is_some_and(One::is_one) {
            Representation::Second
        } else {
            Representation::First
        };
        Ok(ContinuedFraction {
            quotients,
            representation,
        })
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// `n_k` for `1 <= k <= j`.
    pub fn quotient(&self, k: usize) -> &BigInt {
        &self.quotients[k - 1]
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Number of quotients `j`.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    /// The other expansion of the same rational:
    /// `[.., n] -> [.., n - 1, 1]` and `[.., n, 1] -> [.., n + 1]`.
    pub fn alternate(&self) -> ContinuedFraction {
        let mut q = self.quotients.clone();
        let representation = match self.representation {
            Representation::First => {
                let last = q.last_mut().expect("nonempty");
                *last -= 1;
                q.push(BigInt::one());
                Representation::Second
            }
            Representation::Second => {
                q.pop();
                *q.last_mut().expect("second representation has j >= 2") += 1;
                Representation::First
            }
        };
        ContinuedFraction {
            quotients: q,
            representation,
        }
    }

    /// Returns this fraction in the requested representation.
    pub fn to_representation(&self, rep: Representation) -> ContinuedFraction {
        if rep == self.representation {
            self.clone()
        } else {
            self.alternate()
        }
    }

    pub fn convergents(&self) -> ConvergentTable {
        let mut pairs = Vec::with_capacity(self.quotients.len() + 1);
        pairs.push((BigInt::one(), BigInt::zero()));
        pairs.push((self.quotients[0].clone(), BigInt::one()));
        for n in &self.quotients[1..] {
            let k = pairs.len();
            let (p1, q1) = &pairs[k - 1];
            let (p2, q2) = &pairs[k - 2];
            let next = (n * p1 + p2, n * q1 + q2);
            pairs.push(next);
        }
        ConvergentTable { pairs }
    }

    /// Exact value `p_j / q_j`, folded from the innermost quotient outwards.
    pub fn value(&self) -> Rational {
        let mut rev = self.quotients.iter().rev();
        let last = rev.next().expect("nonempty");
        // (num, den) of the tail fraction
        let (mut num, mut den) = (last.clone(), BigInt::one());
        for n in rev {
            let next_num = n * &num + &den;
            den = num;
            num = next_num;
        }
        Rational::new(num, den).expect("tail denominators are positive")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.quotients[0])?;
        for (i, n) in self.quotients[1..].iter().enumerate() {
            write!(f, "{}{}", if i == 0 { "; " } else { ", " }, n)?;
        }
        write!(f, "]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    /// Parses `[n1]` or `[n1; n2, ..., nj]`.
    fn from_str(s: &str) -> Result<ContinuedFraction> {
        const WHAT: &str = "continued fraction";
        let base = s.as_ptr() as usize;
        let offset_of = |piece: &str| piece.as_ptr() as usize - base;
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| ParseError::new(WHAT, offset_of(t), "expected [n1; n2, ..., nj]"))?;
        let (head, tail) = match inner.split_once(';') {
            Some((h, rest)) => (h, Some(rest)),
            None => (inner, None),
        };
        let mut quotients = Vec::new();
        let h = head.trim();
        quotients.push(parse_int(h, WHAT, offset_of(h))?);
        if let Some(rest) = tail {
            for piece in rest.split(',') {
                let p = piece.trim();
                quotients.push(parse_int(p, WHAT, offset_of(p))?);
            }
        }
        ContinuedFraction::new(quotients)
    }
}

/// Floor-Euclid expansion, returning the first representation.
pub fn expand(x: &Rational) -> ContinuedFraction {
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut quotients = Vec::new();
    loop {
        let (n, rem) = num.div_mod_floor(&den);
        quotients.push(n);
        if rem.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, rem);
    }
    ContinuedFraction {
        quotients,
        representation: Representation::First,
    }
}

/// Convergent pairs `(p_k, q_k)` for `k = 0..=j`, with `(p_0, q_0) = (1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvergentTable {
    pairs: Vec<(BigInt, BigInt)>,
}

impl ConvergentTable {
    /// Wraps externally supplied pairs, e.g. from a deserialized trace.
    /// Only the `(1, 0)` sentinel and a nonzero length are checked.
    pub fn from_pairs(pairs: Vec<(BigInt, BigInt)>) -> Result<ConvergentTable> {
        match pairs.first() {
            Some((p, q)) if p.is_one() && q.is_zero() && pairs.len() >= 2 => {
                Ok(ConvergentTable { pairs })
            }
            _ => Err(Error::InvalidContinuedFraction(
                "convergent table must start with (1, 0) and have j >= 1".into(),
            )),
        }
    }

    pub fn pairs(&self) -> &[(BigInt, BigInt)] {
        &self.pairs
    }

    /// Index of the last convergent.
    pub fn j(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn p(&self, k: usize) -> &BigInt {
        &self.pairs[k].0
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.pairs[k].1
    }

    pub fn get(&self, k: usize) -> Option<&(BigInt, BigInt)> {
        self.pairs.get(k)
    }

    /// The convergent `p_k / q_k` for `k >= 1`.
    pub fn ratio(&self, k: usize) -> Rational {
        Rational::new(self.p(k).clone(), self.q(k).clone()).expect("q_k >= 1 for k >= 1")
    }
}

/// `(-1)^floor(k/2)` as ±1, for an index already known to be nonnegative.
pub(crate) fn half_parity(k: usize) -> i32 {
    if k % 4 < 2 {
        1
    } else {
        -1
    }
}

/// `(-1)^k` as ±1.
pub(crate) fn parity(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^floor(k/2)`: +1 when `k ≡ 0, 1 (mod 4)`, -1 when `k ≡ 2, 3`.
pub fn parity_sign(k: i64) -> Result<i32> {
    usize::try_from(k)
        .map(half_parity)
        .map_err(|_| Error::NegativeIndex(k))
}
