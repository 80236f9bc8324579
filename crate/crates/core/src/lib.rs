//! Factorization of matrices in GL2(Z) into words over
//! `A = (1 1; 0 1)`, `B = (1 0; 1 1)` and `C = (1 0; 0 -1)`, driven by the
//! continued fraction of `b/d`.
//!
//! ```
//! use gl2word::{decompose, Mat2, Representation};
//!
//! let m: Mat2 = "[-65, 17; 42, -11]".parse().unwrap();
//! let trace = decompose(&m, Representation::First).unwrap();
//! assert_eq!(trace.word.to_string(), "A^-3 B A^-4 B A^3 B A^4 B^-1 A");
//! assert_eq!(trace.word.evaluate(), m);
//! ```

pub mod cfrac;
pub mod cli;
pub mod decomposer;
pub mod error;
pub mod exact;
pub mod word;

pub use cfrac::{expand, parity_sign, ContinuedFraction, ConvergentTable, Representation};
pub use decomposer::{
    alpha_gamma, chain, compute_bj, decompose, decompose_d_zero, random_unimodular, verify,
    DecompositionTrace, TraceRecord, VerificationReport,
};
pub use error::{Error, ParseError, Result};
pub use exact::{Int, Mat2, Rational};
pub use word::{Letter, Word, WordTerm};
