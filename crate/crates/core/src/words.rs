//! Combinatorics-on-words layer: the two-sided sequences u(alpha), their
//! hat expansion (letter at index k repeated |k|+1 times), and exact letter
//! frequency counts.
//!
//! The letter of u(alpha) at index k is
//! `0  iff  k*alpha mod 1 in [0, 1-alpha)`,
//! equivalently `floor((k+1) alpha) - floor(k alpha) = 0`. Rational alpha is
//! handled with exact integer arithmetic; the algebraic parameter
//! sqrt(2)-1 with interval arithmetic (an undecidable floor raises an error
//! instead of guessing; for this parameter it never straddles in practical
//! index ranges).

use crate::interval::{constant, ConstantName, Interval};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alpha must lie in [0, 1)")]
    AlphaOutOfRange,
    #[error("empty window")]
    EmptyWindow,
    #[error("letter at index {0} is undecidable at 53-bit precision")]
    Undecidable(i64),
}

/// Word parameter: an exact rational in [0, 1) or the algebraic constant
/// sqrt(2) - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alpha {
    Rational { num: i64, den: i64 },
    SqrtTwoMinusOne,
}

impl Alpha {
    pub fn rational(num: i64, den: i64) -> Result<Alpha, WordError> {
        if den <= 0 || num < 0 || num >= den {
            return Err(WordError::AlphaOutOfRange);
        }
        Ok(Alpha::Rational { num, den })
    }

    pub fn value(self) -> f64 {
        match self {
            Alpha::Rational { num, den } => num as f64 / den as f64,
            Alpha::SqrtTwoMinusOne => constant(ConstantName::R).midpoint(),
        }
    }
}

/// The two-sided word u(alpha) over {0, 1}.
#[derive(Debug, Clone, Copy)]
pub struct StandardWord {
    alpha: Alpha,
}

impl StandardWord {
    pub fn new(alpha: Alpha) -> StandardWord {
        StandardWord { alpha }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    /// Letter at index k (any integer).
    pub fn letter(&self, k: i64) -> Result<u8, WordError> {
        match self.alpha {
            Alpha::Rational { num, den } => {
                // k*num mod den, mapped into [0, den)
                let m = (k as i128 * num as i128).rem_euclid(den as i128) as i64;
                Ok(if m < den - num { 0 } else { 1 })
            }
            Alpha::SqrtTwoMinusOne => {
                let r = constant(ConstantName::R);
                let a = floor_interval(Interval::from_int(k).mul(r), k)?;
                let b = floor_interval(Interval::from_int(k + 1).mul(r), k)?;
                Ok((b - a) as u8)
            }
        }
    }
}

/// Floor of a thin interval, defined only when both endpoints agree.
fn floor_interval(x: Interval, k: i64) -> Result<i64, WordError> {
    let lo = x.lo().floor();
    let hi = x.hi().floor();
    if lo == hi {
        Ok(lo as i64)
    } else {
        Err(WordError::Undecidable(k))
    }
}

/// The hat expansion of a standard word: the letter of source index k is
/// repeated |k|+1 times.
///
/// Block layout: for k >= 0, block k occupies positions
/// [k(k+1)/2, (k+1)(k+2)/2); position 0 starts block 0. For k <= -1, blocks
/// extend leftward from position -1, block k occupying the |k|+1 positions
/// immediately left of block k+1.
#[derive(Debug, Clone, Copy)]
pub struct ExpandedWord {
    base: StandardWord,
}

impl ExpandedWord {
    pub fn new(base: StandardWord) -> ExpandedWord {
        ExpandedWord { base }
    }

    pub fn base(&self) -> &StandardWord {
        &self.base
    }

    /// Source index whose block contains position p.
    pub fn source_index(&self, p: i64) -> i64 {
        if p >= 0 {
            block_index(p)
        } else {
            // position -s (s >= 1) lies in block -m where T(m) <= s < T(m+1),
            // i.e. block -m covers s in [T(m), T(m+1) - 1].
            -block_index(-p)
        }
    }

    /// Letter at position p of the expanded word.
    pub fn letter(&self, p: i64) -> Result<u8, WordError> {
        self.base.letter(self.source_index(p))
    }
}

/// Largest k >= 0 with k(k+1)/2 <= x (x >= 0).
fn block_index(x: i64) -> i64 {
    debug_assert!(x >= 0);
    let mut k = (((8.0 * x as f64 + 1.0).sqrt() - 1.0) / 2.0) as i64;
    // fix up float error
    while k > 0 && k * (k + 1) / 2 > x {
        k -= 1;
    }
    while (k + 1) * (k + 2) / 2 <= x {
        k += 1;
    }
    k
}

/// Exact letter-0 frequency over a half-open window of positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frequency {
    pub zeros: u64,
    pub len: u64,
}

impl Frequency {
    pub fn value(self) -> f64 {
        self.zeros as f64 / self.len as f64
    }
}

/// Count letter 0 over positions `lo..hi` of any letter accessor.
pub fn letter_frequency(
    letter: impl Fn(i64) -> Result<u8, WordError>,
    lo: i64,
    hi: i64,
) -> Result<Frequency, WordError> {
    if lo >= hi {
        return Err(WordError::EmptyWindow);
    }
    let mut zeros = 0u64;
    for p in lo..hi {
        if letter(p)? == 0 {
            zeros += 1;
        }
    }
    Ok(Frequency {
        zeros,
        len: (hi - lo) as u64,
    })
}
