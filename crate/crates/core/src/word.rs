//! Words over the alphabet `{A, B, C}`.
//!
//! A word is a list of `(letter, exponent)` terms multiplied left to right.
//! Reduction is free reduction only (merge neighbours, drop zero powers,
//! `C² = I`); no other group relation is applied.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::exact::{decimal, parse_int, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::C => 'C',
        }
    }

    pub fn from_symbol(ch: char) -> Option<Letter> {
        match ch {
            'A' => Some(Letter::A),
            'B' => Some(Letter::B),
            'C' => Some(Letter::C),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordTerm {
    pub letter: Letter,
    #[serde(rename = "exp", with = "decimal")]
    pub exponent: BigInt,
}

impl WordTerm {
    pub fn new(letter: Letter, exponent: impl Into<BigInt>) -> WordTerm {
        WordTerm {
            letter,
            exponent: exponent.into(),
        }
    }
}

impl fmt::Display for WordTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.is_one() {
            write!(f, "{}", self.letter)
        } else {
            write!(f, "{}^{}", self.letter, self.exponent)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    terms: Vec<WordTerm>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Wraps terms as given, without reducing.
    pub fn from_terms(terms: Vec<WordTerm>) -> Word {
        Word { terms }
    }

    pub fn terms(&self) -> &[WordTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, letter: Letter, exponent: impl Into<BigInt>) {
        self.terms.push(WordTerm::new(letter, exponent));
    }

    pub fn extend(&mut self, other: &Word) {
        self.terms.extend_from_slice(&other.terms);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn contains_c(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.letter == Letter::C && t.exponent.is_odd())
    }

    /// Multiplies the terms out left to right; the empty word gives `I`.
    pub fn evaluate(&self) -> Mat2 {
        self.terms.iter().fold(Mat2::identity(), |acc, t| {
            &acc * &Mat2::generator_power(t.letter, &t.exponent)
        })
    }

    /// Free reduction to a fixed point.
    ///
    /// A single stack pass suffices: whenever a merge empties the top term
    /// the new top is compared against the next incoming term.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<WordTerm> = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut incoming = term.clone();
            if incoming.letter == Letter::C {
                incoming.exponent = incoming.exponent.mod_floor(&BigInt::from(2));
            }
            if incoming.exponent.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.letter == incoming.letter => {
                    top.exponent += incoming.exponent;
                    if top.letter == Letter::C {
                        top.exponent = top.exponent.mod_floor(&BigInt::from(2));
                    }
                    if top.exponent.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(incoming),
            }
        }
        Word { terms: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.terms
            .iter()
            .all(|t| !t.exponent.is_zero() && (t.letter != Letter::C || t.exponent.is_one()))
            && self.terms.windows(2).all(|w| w[0].letter != w[1].letter)
    }
}

impl From<Vec<WordTerm>> for Word {
    fn from(terms: Vec<WordTerm>) -> Word {
        Word::from_terms(terms)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "I");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    /// Grammar: `word := "I" | term+`, `term := letter ("^" integer)?`,
    /// whitespace allowed between terms.
    fn from_str(s: &str) -> Result<Word, ParseError> {
        const WHAT: &str = "word";
        if s.trim() == "I" {
            return Ok(Word::identity());
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut terms = Vec::new();
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == bytes.len() {
                break;
            }
            let ch = s[pos..].chars().next().expect("in bounds");
            let letter = Letter::from_symbol(ch)
                .ok_or_else(|| ParseError::new(WHAT, pos, format!("unknown letter {ch:?}")))?;
            pos += 1;
            let exponent = if bytes.get(pos) == Some(&b'^') {
                pos += 1;
                let start = pos;
                if bytes.get(pos) == Some(&b'-') {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                parse_int(&s[start..pos], WHAT, start)
                    .map_err(|e| ParseError::new(WHAT, e.position, "missing exponent digits"))?
            } else {
                BigInt::one()
            };
            terms.push(WordTerm { letter, exponent });
        }
        if terms.is_empty() {
            return Err(ParseError::new(
                WHAT,
                s.len(),
                "empty word (write I for the identity)",
            ));
        }
        Ok(Word { terms })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.terms.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Word, D::Error> {
        let terms = Vec::<WordTerm>::deserialize(de).map_err(de::Error::custom)?;
        Ok(Word { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_worked_example_word() {
        assert_eq!(
            w("A^-3 B A^-4 B A^3 B A^4 B^-1 A").evaluate(),
            Mat2::new(-65, 17, 42, -11)
        );
        assert_eq!(Word::identity().evaluate(), Mat2::identity());
        assert_eq!(w("A B^-1 A A B^-1 A").evaluate(), Mat2::new(-1, 0, 0, -1));
    }

    #[test]
    fn reduction() {
        assert_eq!(w("A A^-2 B A^0 B^-1 A").reduce(), Word::identity());
        assert_eq!(w("A^2 A^3").reduce(), w("A^5"));
        assert_eq!(w("C C B").reduce(), w("B"));
        assert_eq!(w("C^-1 A").reduce(), w("C A"));
        assert_eq!(w("C^3 C^2").reduce(), w("C"));
        assert_eq!(w("A B B^-1 A^-1 C").reduce(), w("C"));
        assert!(w("A B^2 C A^-7").is_reduced());
        assert!(!w("C^3").is_reduced());
    }

    #[test]
    fn parsing() {
        assert_eq!(
            w("A^-3 B").terms(),
            &[WordTerm::new(Letter::A, -3), WordTerm::new(Letter::B, 1)]
        );
        assert_eq!(
            w("AB^-1A").terms(),
            &[
                WordTerm::new(Letter::A, 1),
                WordTerm::new(Letter::B, -1),
                WordTerm::new(Letter::A, 1)
            ]
        );
        assert_eq!(w(" I "), Word::identity());
        assert_eq!(w("A^0").terms(), &[WordTerm::new(Letter::A, 0)]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = "D^2".parse::<Word>().unwrap_err();
        assert_eq!(e.position, 0);
        assert!(e.message.contains("unknown letter"));
        let e = "A B^".parse::<Word>().unwrap_err();
        assert_eq!(e.position, 4);
        assert!(e.message.contains("missing exponent"));
        let e = "A^-x".parse::<Word>().unwrap_err();
        assert_eq!(e.position, 3);
        assert!("".parse::<Word>().is_err());
        assert!("I A".parse::<Word>().is_err());
        assert!("A^+2".parse::<Word>().is_err());
    }

    #[test]
    fn formatting() {
        let word = Word::from_terms(vec![
            WordTerm::new(Letter::A, -3),
            WordTerm::new(Letter::B, 1),
        ]);
        assert_eq!(word.to_string(), "A^-3 B");
        assert_eq!(Word::identity().to_string(), "I");
        let word = Word::from_terms(vec![
            WordTerm::new(Letter::C, 1),
            WordTerm::new(Letter::A, 2),
        ]);
        assert_eq!(word.to_string(), "C A^2");
    }

    #[test]
    fn json_form() {
        let word = w("A^-3 B");
        let json = serde_json::to_string(&word).unwrap();
        assert_eq!(
            json,
            r#"[{"letter":"A","exp":"-3"},{"letter":"B","exp":"1"}]"#
        );
        assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), word);
        assert!(serde_json::from_str::<Word>(r#"[{"letter":"D","exp":"1"}]"#).is_err());
    }

    #[test]
    fn c_detection() {
        assert!(w("A C B").contains_c());
        assert!(!w("A B^-1 A").contains_c());
        assert!(!w("C^2 A").contains_c());
    }
}
