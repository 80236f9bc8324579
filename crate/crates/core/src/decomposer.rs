//! Factorization of `M = (a b; c d)` in GL2(Z) into a word over `A, B, C`.
//!
//! For `d != 0` the word is
//!
//! ```text
//! (A B^-1 A)^s · A · Π_{k=1..j} (A^-(2 + (-1)^k n_k) B) · (C A^2)^e · A^{b_j} · B^-1 · A
//! ```
//!
//! where `[n1; ...; nj]` expands `b/d`, `s = 1 - (-1)^⌊j/2⌋ sgn(d)`,
//! `e = (1 - det M)/2` and `b_j = (-1)^j sgn(d) (p_{j-1} c - q_{j-1} a)`.
//! The matrices `P_0 = A^-1 M A^-1 B`, `P_k = B^-1 A^{2 + (-1)^k n_k} P_{k-1}`
//! are kept in the trace; they also have a closed form in terms of the
//! convergents (see [`coefficient_matrix`]), which [`verify`] compares
//! against.
//!
//! The `d = 0` case has four explicit families, see [`decompose_d_zero`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cfrac::{
    expand, half_parity, parity, ContinuedFraction, ConvergentTable, Representation,
};
use crate::error::{Error, Result};
use crate::exact::{decimal, sgn, Mat2, Rational};
use crate::word::{Letter, Word};

/// Everything computed while decomposing one matrix.
///
/// For `d = 0` inputs `cf`, `table` and `b_j` are `None` and `chain` is
/// empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTrace {
    pub input: Mat2,
    pub cf: Option<ContinuedFraction>,
    pub table: Option<ConvergentTable>,
    /// Power of `A B^-1 A` in front of the word, 0 or 2.
    pub sign_exponent: u8,
    /// Power of `C A^2`, 0 or 1.
    pub det_exponent: u8,
    pub b_j: Option<BigInt>,
    /// `P_0 .. P_j`.
    pub chain: Vec<Mat2>,
    /// Freely reduced.
    pub word: Word,
}

fn det_exponent(m: &Mat2) -> Result<u8> {
    let det = m.det();
    if det.is_one() {
        Ok(0)
    } else if (-&det).is_one() {
        Ok(1)
    } else {
        Err(Error::NotUnimodular(det))
    }
}

fn signed(sign: i32, x: BigInt) -> BigInt {
    if sign < 0 {
        -x
    } else {
        x
    }
}

/// `(α_k(u, v), γ_k(u, v))` where
/// `α_k = (-1)^⌊k/2⌋ (q_k u - p_k v + (-1)^k (q_{k-1} u - p_{k-1} v))` and
/// `γ_k = (-1)^⌊k/2⌋ (p_k v - q_k u)`.
pub fn alpha_gamma(
    k: usize,
    table: &ConvergentTable,
    u: &BigInt,
    v: &BigInt,
) -> Result<(BigInt, BigInt)> {
    if k == 0 || k > table.j() {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: table.j(),
        });
    }
    let (pk, qk) = (table.p(k), table.q(k));
    let (pk1, qk1) = (table.p(k - 1), table.q(k - 1));
    let s = half_parity(k);
    let prev = signed(parity(k), qk1 * u - pk1 * v);
    let alpha = signed(s, qk * u - pk * v + prev);
    let gamma = signed(s, pk * v - qk * u);
    Ok((alpha, gamma))
}

/// `P_k` from its coefficients:
/// `(α_k(b, d), α_k(b-a, d-c); γ_k(b, d), γ_k(b-a, d-c))`.
pub fn coefficient_matrix(k: usize, table: &ConvergentTable, m: &Mat2) -> Result<Mat2> {
    let (a1, g1) = alpha_gamma(k, table, &m.b, &m.d)?;
    let (a2, g2) = alpha_gamma(k, table, &(&m.b - &m.a), &(&m.d - &m.c))?;
    Ok(Mat2 {
        a: a1,
        b: a2,
        c: g1,
        d: g2,
    })
}

/// `P_0 = (b-d, b+c-(a+d); d, d-c)`.
pub fn initial_closed_form(m: &Mat2) -> Mat2 {
    Mat2 {
        a: &m.b - &m.d,
        b: &m.b + &m.c - (&m.a + &m.d),
        c: m.d.clone(),
        d: &m.d - &m.c,
    }
}

/// `P_j = (-1)^⌊j/2⌋ sgn(d) (1, 1 - det M + b_j; 0, det M)`.
pub fn final_closed_form(m: &Mat2, table: &ConvergentTable) -> Result<Mat2> {
    let b_j = compute_bj(m, table)?;
    let det = m.det();
    let upper = Mat2 {
        a: BigInt::one(),
        b: BigInt::one() - &det + b_j,
        c: BigInt::zero(),
        d: det,
    };
    Ok(upper.scaled(&signed(half_parity(table.j()), sgn(&m.d))))
}

/// `B^-1 A^{2 + (-1)^k n_k}`.
fn step_matrix(k: usize, n_k: &BigInt) -> Mat2 {
    let exp = BigInt::from(2) + signed(parity(k), n_k.clone());
    &Mat2::generator_power(Letter::B, &-BigInt::one()) * &Mat2::generator_power(Letter::A, &exp)
}

fn require_d_nonzero(m: &Mat2) -> Result<()> {
    if m.d.is_zero() {
        Err(Error::ZeroLowerRight)
    } else {
        Ok(())
    }
}

/// `P_0 = A^-1 M A^-1 B` by direct multiplication.
fn initial_product(m: &Mat2) -> Mat2 {
    let a_inv = Mat2::generator_power(Letter::A, &-BigInt::one());
    &(&(&a_inv * m) * &a_inv) * &Mat2::gen_b()
}

/// The chain `P_0 .. P_j` by the recurrence `P_k = B^-1 A^{2 + (-1)^k n_k} P_{k-1}`.
pub fn chain(m: &Mat2, cf: &ContinuedFraction) -> Result<Vec<Mat2>> {
    det_exponent(m)?;
    require_d_nonzero(m)?;
    let expected = Rational::new(m.b.clone(), m.d.clone())?;
    let found = cf.value();
    if found != expected {
        return Err(Error::ValueMismatch {
            found: found.to_string(),
            expected: expected.to_string(),
        });
    }
    let mut out = Vec::with_capacity(cf.len() + 1);
    out.push(initial_product(m));
    for (i, n) in cf.quotients().iter().enumerate() {
        let next = &step_matrix(i + 1, n) * out.last().expect("P_0 pushed");
        out.push(next);
    }
    Ok(out)
}

/// `b_j = (-1)^j sgn(d) (p_{j-1} c - q_{j-1} a)`.
pub fn compute_bj(m: &Mat2, table: &ConvergentTable) -> Result<BigInt> {
    require_d_nonzero(m)?;
    let j = table.j();
    let inner = table.p(j - 1) * &m.c - table.q(j - 1) * &m.a;
    Ok(signed(parity(j), inner) * sgn(&m.d))
}

/// `1 - (-1)^⌊j/2⌋ sgn(d)`, either 0 or 2.
fn sign_exponent(j: usize, d: &BigInt) -> u8 {
    if (half_parity(j) > 0) == d.is_positive() {
        0
    } else {
        2
    }
}

fn push_neg_identity(word: &mut Word) {
    for _ in 0..2 {
        word.push(Letter::A, 1);
        word.push(Letter::B, -1);
        word.push(Letter::A, 1);
    }
}

/// Decomposes `m` using the requested expansion of `b/d`.
/// `rep` is ignored when `d = 0`.
pub fn decompose(m: &Mat2, rep: Representation) -> Result<DecompositionTrace> {
    let det_exp = det_exponent(m)?;
    if m.d.is_zero() {
        let word = decompose_d_zero(m)?;
        let sign_exp = if m.b.is_negative() && m.c.is_negative() {
            2
        } else {
            0
        };
        return Ok(DecompositionTrace {
            input: m.clone(),
            cf: None,
            table: None,
            sign_exponent: sign_exp,
            det_exponent: det_exp,
            b_j: None,
            chain: Vec::new(),
            word,
        });
    }

    let ratio = Rational::new(m.b.clone(), m.d.clone())?;
    let cf = expand(&ratio).to_representation(rep);
    let table = cf.convergents();
    let j = cf.len();
    let sign_exp = sign_exponent(j, &m.d);
    let b_j = compute_bj(m, &table)?;
    let chain = chain(m, &cf)?;

    let mut raw = Word::identity();
    if sign_exp == 2 {
        push_neg_identity(&mut raw);
    }
    raw.push(Letter::A, 1);
    for (i, n) in cf.quotients().iter().enumerate() {
        let exp = -(BigInt::from(2) + signed(parity(i + 1), n.clone()));
        raw.push(Letter::A, exp);
        raw.push(Letter::B, 1);
    }
    if det_exp == 1 {
        raw.push(Letter::C, 1);
        raw.push(Letter::A, 2);
    }
    raw.push(Letter::A, b_j.clone());
    raw.push(Letter::B, -1);
    raw.push(Letter::A, 1);

    Ok(DecompositionTrace {
        input: m.clone(),
        cf: Some(cf),
        table: Some(table),
        sign_exponent: sign_exp,
        det_exponent: det_exp,
        b_j: Some(b_j),
        chain,
        word: raw.reduce(),
    })
}

/// The four `d = 0` families, determined by `(b, c)`:
///
/// | `(b, c)`   | word                               |
/// |------------|------------------------------------|
/// | `(1, 1)`   | `C B^-1 A B^{a-1}`                 |
/// | `(-1, -1)` | `A B^-1 A^2 B^-1 A C B^-1 A B^{-a-1}` |
/// | `(1, -1)`  | `A^{1-a} B^-1 A`                   |
/// | `(-1, 1)`  | `B A^-1 B^{1-a}`                   |
pub fn decompose_d_zero(m: &Mat2) -> Result<Word> {
    det_exponent(m)?;
    if !m.d.is_zero() {
        return Err(Error::NonZeroLowerRight(m.d.clone()));
    }
    let a = &m.a;
    let one = BigInt::one;
    let mut w = Word::identity();
    match (m.b.is_positive(), m.c.is_positive()) {
        (true, true) => {
            w.push(Letter::C, 1);
            w.push(Letter::B, -1);
            w.push(Letter::A, 1);
            w.push(Letter::B, a - one());
        }
        (false, false) => {
            push_neg_identity(&mut w);
            w.push(Letter::C, 1);
            w.push(Letter::B, -1);
            w.push(Letter::A, 1);
            w.push(Letter::B, -a - one());
        }
        (true, false) => {
            w.push(Letter::A, one() - a);
            w.push(Letter::B, -1);
            w.push(Letter::A, 1);
        }
        (false, true) => {
            w.push(Letter::B, 1);
            w.push(Letter::A, -1);
            w.push(Letter::B, one() - a);
        }
    }
    Ok(w.reduce())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

/// Outcome of [`verify`]; one entry per check, failures included.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn record(&mut self, name: &'static str, passed: bool) {
        self.checks.push(Check { name, passed });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}", if c.passed { "pass" } else { "FAIL" }, c.name)?;
        }
        Ok(())
    }
}

pub const CHECK_EVALUATION: &str = "word evaluates to input";
pub const CHECK_DETERMINANT: &str = "input determinant is ±1";
pub const CHECK_C_FREE: &str = "word is C-free when det = +1";
pub const CHECK_DET_EXPONENT: &str = "det exponent is (1 - det)/2";
pub const CHECK_CF_VALUE: &str = "continued fraction equals b/d";
pub const CHECK_CONVERGENTS: &str = "convergent table matches continued fraction";
pub const CHECK_SIGN_EXPONENT: &str = "sign exponent is 1 - (-1)^⌊j/2⌋ sgn(d)";
pub const CHECK_BJ: &str = "b_j matches convergents";
pub const CHECK_CHAIN_LENGTH: &str = "chain has j + 1 entries";
pub const CHECK_P0_PRODUCT: &str = "P_0 equals A^-1 M A^-1 B";
pub const CHECK_P0_CLOSED: &str = "P_0 matches closed form";
pub const CHECK_RECURRENCE: &str = "chain follows P_k = B^-1 A^(2+(-1)^k n_k) P_(k-1)";
pub const CHECK_COEFFICIENTS: &str = "chain matches alpha/gamma coefficients";
pub const CHECK_PJ_CLOSED: &str = "P_j matches upper-triangular closed form";
pub const CHECK_CHAIN_DET: &str = "det(P_k) = det(M) for all k";
pub const CHECK_D_ZERO_WORD: &str = "word matches d = 0 family";

/// Re-derives every quantity in `trace` from `trace.input` and compares.
pub fn verify(trace: &DecompositionTrace) -> VerificationReport {
    let mut r = VerificationReport::default();
    let m = &trace.input;
    let det = m.det();
    r.record(CHECK_EVALUATION, trace.word.evaluate() == *m);
    r.record(CHECK_DETERMINANT, m.is_unimodular());
    r.record(CHECK_C_FREE, !det.is_one() || !trace.word.contains_c());
    r.record(
        CHECK_DET_EXPONENT,
        det_exponent(m).is_ok_and(|e| e == trace.det_exponent),
    );

    if m.d.is_zero() {
        r.record(CHECK_CHAIN_LENGTH, trace.chain.is_empty());
        r.record(
            CHECK_D_ZERO_WORD,
            decompose_d_zero(m).is_ok_and(|w| w == trace.word),
        );
        return r;
    }

    let (Some(cf), Some(table)) = (&trace.cf, &trace.table) else {
        r.record(CHECK_CF_VALUE, false);
        return r;
    };
    let j = cf.len();
    r.record(
        CHECK_CF_VALUE,
        Rational::new(m.b.clone(), m.d.clone()).is_ok_and(|x| x == cf.value()),
    );
    let table_ok = cf.convergents() == *table;
    r.record(CHECK_CONVERGENTS, table_ok);
    r.record(
        CHECK_SIGN_EXPONENT,
        sign_exponent(j, &m.d) == trace.sign_exponent,
    );
    r.record(CHECK_BJ, table_ok && compute_bj(m, table).ok() == trace.b_j);

    let length_ok = trace.chain.len() == j + 1;
    r.record(CHECK_CHAIN_LENGTH, length_ok);
    if !length_ok || !table_ok {
        r.record(CHECK_RECURRENCE, false);
        return r;
    }
    let ch = &trace.chain;
    r.record(CHECK_P0_PRODUCT, ch[0] == initial_product(m));
    r.record(CHECK_P0_CLOSED, ch[0] == initial_closed_form(m));
    r.record(
        CHECK_RECURRENCE,
        (1..=j).all(|k| ch[k] == &step_matrix(k, cf.quotient(k)) * &ch[k - 1]),
    );
    r.record(
        CHECK_COEFFICIENTS,
        (1..=j).all(|k| coefficient_matrix(k, table, m).is_ok_and(|p| p == ch[k])),
    );
    r.record(
        CHECK_PJ_CLOSED,
        final_closed_form(m, table).is_ok_and(|p| p == ch[j]),
    );
    r.record(CHECK_CHAIN_DET, ch.iter().all(|p| p.det() == det));
    r
}

/// A reproducible product of `length` factors drawn uniformly from
/// `A, A^-1, B, B^-1` (and `C` when `allow_c`).
pub fn random_unimodular(seed: u64, length: usize, allow_c: bool) -> Mat2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = if allow_c { 5 } else { 4 };
    let mut m = Mat2::identity();
    for _ in 0..length {
        let factor = match rng.gen_range(0..choices) {
            0 => Mat2::gen_a(),
            1 => Mat2::generator_power(Letter::A, &-BigInt::one()),
            2 => Mat2::gen_b(),
            3 => Mat2::generator_power(Letter::B, &-BigInt::one()),
            _ => Mat2::gen_c(),
        };
        m = &m * &factor;
    }
    m
}

/// Integer wrapper serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Decimal(#[serde(with = "decimal")] pub BigInt);

/// The JSON shape of a trace. For `d = 0` the list fields are empty and
/// `b_j` is `null`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub input: Mat2,
    pub cf: Vec<Decimal>,
    pub convergents: Vec<[Decimal; 2]>,
    pub sign_exponent: u8,
    pub det_exponent: u8,
    #[serde(with = "decimal::option")]
    pub b_j: Option<BigInt>,
    pub chain: Vec<Mat2>,
    pub word: Word,
    pub verified: bool,
}

impl TraceRecord {
    pub fn new(trace: &DecompositionTrace, verified: bool) -> TraceRecord {
        TraceRecord {
            input: trace.input.clone(),
            cf: trace
                .cf
                .iter()
                .flat_map(|cf| cf.quotients().iter().cloned().map(Decimal))
                .collect(),
            convergents: trace
                .table
                .iter()
                .flat_map(|t| {
                    t.pairs()
                        .iter()
                        .map(|(p, q)| [Decimal(p.clone()), Decimal(q.clone())])
                })
                .collect(),
            sign_exponent: trace.sign_exponent,
            det_exponent: trace.det_exponent,
            b_j: trace.b_j.clone(),
            chain: trace.chain.clone(),
            word: trace.word.clone(),
            verified,
        }
    }

    /// Verifies `trace` and records the outcome.
    pub fn verified(trace: &DecompositionTrace) -> TraceRecord {
        TraceRecord::new(trace, verify(trace).passed())
    }

    pub fn into_trace(self) -> Result<DecompositionTrace> {
        let cf = if self.cf.is_empty() {
            None
        } else {
            Some(ContinuedFraction::new(
                self.cf.into_iter().map(|d| d.0).collect(),
            )?)
        };
        let table = if self.convergents.is_empty() {
            None
        } else {
            let pairs = self
                .convergents
                .into_iter()
                .map(|[p, q]| (p.0, q.0))
                .collect();
            Some(ConvergentTable::from_pairs(pairs)?)
        };
        Ok(DecompositionTrace {
            input: self.input,
            cf,
            table,
            sign_exponent: self.sign_exponent,
            det_exponent: self.det_exponent,
            b_j: self.b_j,
            chain: self.chain,
            word: self.word,
        })
    }
}
