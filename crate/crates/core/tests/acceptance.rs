//! Exit criteria. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion fails. All comparisons are exact.

use gl2word::decomposer::{final_closed_form, initial_closed_form};
use gl2word::{
    decompose, expand, parity_sign, random_unimodular, verify, ContinuedFraction, Mat2, Rational,
    Representation, Word,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 2000;
const CORPUS_SEED: u64 = 0x6c32_776f_7264;
const MAX_WORD_LENGTH: usize = 30;
const RATIONAL_COUNT: usize = 10_000;
const RATIONAL_BOUND: i64 = 1_000_000;

type Outcome = Result<String, String>;

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worked_example() -> Mat2 {
    Mat2::new(-65, 17, 42, -11)
}

/// Lengths cycle through 0..=30 and C is allowed on every other entry.
fn corpus() -> Vec<Mat2> {
    (0..CORPUS_SIZE)
        .map(|i| {
            random_unimodular(
                CORPUS_SEED.wrapping_add(i as u64),
                i % (MAX_WORD_LENGTH + 1),
                i % 2 == 1,
            )
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let m = worked_example();
    let t = decompose(&m, Representation::First).map_err(|e| e.to_string())?;
    let printed = t.word.to_string();
    ensure(printed == "A^-3 B A^-4 B A^3 B A^4 B^-1 A", || {
        format!("printed {printed}")
    })?;
    ensure(t.word.evaluate() == m, || "re-evaluation differs".into())?;
    Ok(printed)
}

fn criterion_2() -> Outcome {
    let m = worked_example();
    let t = decompose(&m, Representation::Second).map_err(|e| e.to_string())?;
    let printed = t.word.to_string();
    ensure(
        printed == "A B^-1 A^2 B^-1 A^-2 B A^-4 B A^2 B A^-3 B A^3 B^-1 A",
        || format!("printed {printed}"),
    )?;
    ensure(t.word.evaluate() == m, || "re-evaluation differs".into())?;
    Ok(printed)
}

fn criterion_3() -> Outcome {
    let x = Rational::new(-17, 11).unwrap();
    let first = expand(&x);
    ensure(first.to_string() == "[-2; 2, 5]", || {
        format!("cf = {first}")
    })?;
    let second = first.alternate();
    ensure(second.to_string() == "[-2; 2, 4, 1]", || {
        format!("alternate = {second}")
    })?;
    let t1 = first.convergents();
    ensure((t1.p(2), t1.q(2)) == (&int(-3), &int(2)), || {
        "(p_2, q_2)".into()
    })?;
    let t2 = second.convergents();
    ensure((t2.p(3), t2.q(3)) == (&int(-14), &int(9)), || {
        "(p_3, q_3)".into()
    })?;

    let m = worked_example();
    let d1 = decompose(&m, Representation::First).unwrap();
    let d2 = decompose(&m, Representation::Second).unwrap();
    ensure(d1.b_j == Some(int(4)), || format!("b_3 = {:?}", d1.b_j))?;
    ensure(d2.b_j == Some(int(3)), || format!("b_4 = {:?}", d2.b_j))?;
    ensure(d1.sign_exponent == 0 && d2.sign_exponent == 2, || {
        format!("sign exponents {} {}", d1.sign_exponent, d2.sign_exponent)
    })?;
    Ok("cf, alternate, convergents, b_3 = 4, b_4 = 3, sign exponents 0/2".into())
}

fn criterion_4() -> Outcome {
    for n in -20i64..=20 {
        let m = Mat2::new(1, n, 0, 1);
        let t = decompose(&m, Representation::First).map_err(|e| e.to_string())?;
        let want = if n == 0 {
            "I".to_string()
        } else if n == 1 {
            "A".into()
        } else {
            format!("A^{n}")
        };
        ensure(t.word.to_string() == want, || {
            format!("n = {n}: {}", t.word)
        })?;
        ensure(t.b_j == Some(BigInt::zero()), || {
            format!("n = {n}: b_1 = {:?}", t.b_j)
        })?;
        ensure(t.word.evaluate() == m, || format!("n = {n}: evaluation"))?;
    }
    Ok("n in [-20, 20]".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for a in -10i64..=10 {
        let families = [
            (Mat2::new(a, 1, 1, 0), format!("C B^-1 A B^{}", a - 1)),
            (
                Mat2::new(a, -1, -1, 0),
                format!("A B^-1 A^2 B^-1 A C B^-1 A B^{}", -a - 1),
            ),
            (Mat2::new(a, 1, -1, 0), format!("A^{} B^-1 A", 1 - a)),
            (Mat2::new(a, -1, 1, 0), format!("B A^-1 B^{}", 1 - a)),
        ];
        for (m, lemma_word) in families {
            let t = decompose(&m, Representation::First).map_err(|e| e.to_string())?;
            let want = w(&lemma_word).reduce();
            ensure(t.word == want, || {
                format!("{m}: got {}, want {want}", t.word)
            })?;
            ensure(t.word.evaluate() == m, || format!("{m}: evaluation"))?;
            if m.det().is_one() {
                ensure(!t.word.contains_c(), || format!("{m}: C in SL2 word"))?;
            }
            ensure(verify(&t).passed(), || format!("{m}: verify"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} matrices"))
}

fn criterion_6(corpus: &[Mat2]) -> Outcome {
    let mut failures = Vec::new();
    let mut with_c = 0;
    for m in corpus {
        if !m.det().is_one() {
            with_c += 1;
        }
        for rep in [Representation::First, Representation::Second] {
            match decompose(m, rep) {
                Ok(t) if t.word.evaluate() == *m => {}
                Ok(t) => failures.push(format!("{m} ({rep}): {}", t.word)),
                Err(e) => failures.push(format!("{m} ({rep}): {e}")),
            }
        }
    }
    ensure(with_c > 0, || "corpus has no det = -1 matrices".into())?;
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    Ok(format!(
        "{} matrices x 2 representations, {with_c} with det = -1",
        corpus.len()
    ))
}

fn criterion_7(corpus: &[Mat2]) -> Outcome {
    let mut chains = 0;
    for m in corpus.iter().filter(|m| !m.d.is_zero()) {
        for rep in [Representation::First, Representation::Second] {
            let t = decompose(m, rep).map_err(|e| e.to_string())?;
            let table = t.table.as_ref().unwrap();
            let det = m.det();
            ensure(t.chain[0] == initial_closed_form(m), || format!("{m}: P_0"))?;
            ensure(t.chain.iter().all(|p| p.det() == det), || {
                format!("{m}: det(P_k)")
            })?;
            ensure(
                final_closed_form(m, table).is_ok_and(|pj| pj == *t.chain.last().unwrap()),
                || format!("{m}: P_j"),
            )?;
            let report = verify(&t);
            ensure(report.passed(), || format!("{m} ({rep}):\n{report}"))?;
            chains += 1;
        }
    }
    Ok(format!("{chains} chains"))
}

fn check_lemma3(cf: &ContinuedFraction) -> Result<(), String> {
    let table = cf.convergents();
    let j = table.j();
    ensure(table.p(0).is_one() && table.q(0).is_zero(), || {
        "(p_0, q_0) != (1, 0)".into()
    })?;
    for k in 1..=j {
        let (pk, qk) = (table.p(k), table.q(k));
        let (pk1, qk1) = (table.p(k - 1), table.q(k - 1));
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        // (i): definition by truncation, and the recurrence
        let truncated = ContinuedFraction::new(cf.quotients()[..k].to_vec())
            .unwrap()
            .value();
        ensure(table.ratio(k) == truncated, || {
            format!("{cf}: convergent {k} != truncation")
        })?;
        if k >= 2 {
            let n = cf.quotient(k);
            ensure(
                *pk == n * pk1 + table.p(k - 2) && *qk == n * qk1 + table.q(k - 2),
                || format!("{cf}: recurrence at {k}"),
            )?;
        }
        // (ii)
        ensure(pk * qk1 - pk1 * qk == sign, || {
            format!("{cf}: determinant at {k}")
        })?;
        // (iii)
        ensure(pk.abs().gcd(qk).is_one(), || format!("{cf}: gcd at {k}"))?;
        // (iv)
        ensure(qk >= &int(1), || format!("{cf}: q_{k} < 1"))?;
        if k == 1 {
            ensure(qk.is_one(), || format!("{cf}: q_1 != 1"))?;
        }
        if k >= 3 {
            ensure(qk > qk1, || format!("{cf}: q not increasing at {k}"))?;
        }
        // (v)
        if k >= 2 {
            let diff = &table.ratio(k) - &table.ratio(k - 1);
            let want = Rational::new(sign.clone(), qk * qk1).unwrap();
            ensure(diff == want, || format!("{cf}: difference at {k}"))?;
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for _ in 0..RATIONAL_COUNT {
        let num = rng.gen_range(-RATIONAL_BOUND..=RATIONAL_BOUND);
        let den = rng.gen_range(1..=RATIONAL_BOUND);
        let x = Rational::new(num, den).unwrap();
        let first = expand(&x);
        ensure(first.value() == x, || format!("{x}: round trip"))?;
        check_lemma3(&first)?;
        check_lemma3(&first.alternate())?;
    }
    for k in 0i64..=1000 {
        let sign_k = if k % 2 == 0 { 1 } else { -1 };
        let lhs = parity_sign(k + 1).map_err(|e| e.to_string())?;
        let rhs = sign_k * parity_sign(k).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("lemma 4 at k = {k}"))?;
    }
    Ok(format!(
        "{RATIONAL_COUNT} rationals x 2 representations, k <= 1000"
    ))
}

fn criterion_9(corpus: &[Mat2]) -> Outcome {
    let mut n = 0;
    for m in corpus.iter().filter(|m| !m.d.is_zero()) {
        for rep in [Representation::First, Representation::Second] {
            let t = decompose(m, rep).map_err(|e| e.to_string())?;
            let table = t.table.as_ref().unwrap();
            let j = table.j();
            let sgn_d = if m.d.is_negative() { int(-1) } else { int(1) };
            ensure(table.q(j) == &m.d.abs(), || {
                format!("{m}: q_j = {}", table.q(j))
            })?;
            ensure(*table.p(j) == &sgn_d * &m.b, || {
                format!("{m}: p_j = {}", table.p(j))
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} endpoints"))
}

#[test]
fn acceptance() {
    let corpus = corpus();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 worked example, first representation", criterion_1()),
        ("2 worked example, second representation", criterion_2()),
        ("3 worked example intermediates", criterion_3()),
        ("4 powers of A", criterion_4()),
        ("5 d = 0 families", criterion_5()),
        ("6 random round trip", criterion_6(&corpus)),
        ("7 chain invariants", criterion_7(&corpus)),
        ("8 convergent identities", criterion_8()),
        ("9 endpoint divisibility", criterion_9(&corpus)),
    ];
    let mut failed = Vec::new();
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name}: {why}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
