//! Environment paths: the ω in the skew product `S(ω, x) = (θω, T_ω x)`.
//!
//! A path is a finite window of symbols indexed by a range of integers that
//! may extend below zero — transfer-operator constructions condition on the
//! past `ω_{-n}, …, ω_{-1}` as well as the future.  Symbols are generated
//! per index from a counter-based stream, so the symbol at index `i` is a
//! pure function of `(model, seed, i)`: regenerating a window, or a longer
//! window containing it, reproduces the same symbols bit for bit.

use alloc::vec::Vec;
use core::fmt;

use crate::rng::CounterStream;

/// Errors from environment construction and lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvError {
    /// A symbol was requested outside the generated window.
    OutOfRange { index: i64, first: i64, last: i64 },
    /// A sub-range request with `from > to`, or an empty window.
    EmptyRange,
    /// The i.i.d. model needs at least two symbols to be random.
    AlphabetTooSmall(u32),
    /// `generate` was asked to draw from a non-generative (explicit) model.
    NotGenerative,
}

impl fmt::Display for EnvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvError::OutOfRange { index, first, last } => write!(
                f,
                "environment index {index} outside generated window [{first}, {last}]"
            ),
            EnvError::EmptyRange => write!(f, "empty environment range"),
            EnvError::AlphabetTooSmall(a) => {
                write!(f, "environment alphabet size {a} is too small (need at least 2)")
            }
            EnvError::NotGenerative => {
                write!(f, "explicit symbol paths cannot be regenerated from a seed")
            }
        }
    }
}

impl core::error::Error for EnvError {}

/// How the driving symbols are distributed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvModel {
    /// Independent symbols, uniform on `{0, …, alphabet−1}`.
    IidUniform { alphabet: u32 },
    /// The same symbol at every index: deterministic driving, which turns
    /// the skew product into iteration of a single map.
    Singleton { symbol: u8 },
    /// Symbols supplied literally via [`EnvPath::from_symbols`]; such a
    /// path cannot be regenerated or widened.
    Explicit,
}

/// A generated window `ω_first, …, ω_last` of an environment path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvPath {
    model: EnvModel,
    seed: u64,
    first: i64,
    symbols: Vec<u8>,
}

impl EnvPath {
    /// Generates the window of `len` symbols starting at index `first`.
    ///
    /// Indices below `first` or beyond the window are not materialized but
    /// are still well defined: generating a wider window with the same
    /// model and seed agrees on the overlap.
    pub fn generate(
        model: EnvModel,
        seed: u64,
        first: i64,
        len: usize,
    ) -> Result<Self, EnvError> {
        if len == 0 {
            return Err(EnvError::EmptyRange);
        }
        match model {
            EnvModel::IidUniform { alphabet } if alphabet < 2 => {
                return Err(EnvError::AlphabetTooSmall(alphabet));
            }
            EnvModel::Explicit => return Err(EnvError::NotGenerative),
            _ => {}
        }
        let stream = CounterStream::new(seed);
        let mut symbols = Vec::with_capacity(len);
        for k in 0..len {
            let index = first + k as i64;
            symbols.push(Self::symbol_at(model, &stream, index));
        }
        Ok(EnvPath { model, seed, first, symbols })
    }

    fn symbol_at(model: EnvModel, stream: &CounterStream, index: i64) -> u8 {
        match model {
            // `as u64` maps i64 two's-complement bijectively onto u64, so
            // negative indices get their own draw positions.
            EnvModel::IidUniform { alphabet } => {
                stream.below_at(index as u64, u64::from(alphabet)) as u8
            }
            EnvModel::Singleton { symbol } => symbol,
            EnvModel::Explicit => unreachable!("generate() rejects Explicit"),
        }
    }

    /// Wraps literal symbols as a path window starting at index `first`.
    pub fn from_symbols(first: i64, symbols: Vec<u8>) -> Result<Self, EnvError> {
        if symbols.is_empty() {
            return Err(EnvError::EmptyRange);
        }
        Ok(EnvPath { model: EnvModel::Explicit, seed: 0, first, symbols })
    }

    pub fn model(&self) -> EnvModel {
        self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Inclusive index range `(first, last)` of the window.
    pub fn range(&self) -> (i64, i64) {
        (self.first, self.first + self.symbols.len() as i64 - 1)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty windows
    }

    /// Whether the window covers the inclusive range `[from, to]`.
    pub fn covers(&self, from: i64, to: i64) -> bool {
        let (lo, hi) = self.range();
        lo <= from && to <= hi && from <= to
    }

    pub fn symbol(&self, index: i64) -> Result<u8, EnvError> {
        let (lo, hi) = self.range();
        if index < lo || index > hi {
            return Err(EnvError::OutOfRange { index, first: lo, last: hi });
        }
        Ok(self.symbols[(index - lo) as usize])
    }

    /// The symbols of the inclusive sub-range `[from, to]`.
    pub fn slice(&self, from: i64, to: i64) -> Result<&[u8], EnvError> {
        if from > to {
            return Err(EnvError::EmptyRange);
        }
        let (lo, hi) = self.range();
        if from < lo || to > hi {
            return Err(EnvError::OutOfRange {
                index: if from < lo { from } else { to },
                first: lo,
                last: hi,
            });
        }
        let a = (from - lo) as usize;
        let b = (to - lo) as usize;
        Ok(&self.symbols[a..=b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widening_the_window_preserves_symbols() {
        let model = EnvModel::IidUniform { alphabet: 2 };
        let narrow = EnvPath::generate(model, 99, 0, 50).unwrap();
        let wide = EnvPath::generate(model, 99, -20, 100).unwrap();
        for i in 0..50 {
            assert_eq!(narrow.symbol(i).unwrap(), wide.symbol(i).unwrap());
        }
    }

    #[test]
    fn negative_indices_have_their_own_draws() {
        let model = EnvModel::IidUniform { alphabet: 2 };
        let path = EnvPath::generate(model, 7, -64, 128).unwrap();
        assert_eq!(path.range(), (-64, 63));
        // Not all symbols equal: the negative side is genuinely random.
        let slice = path.slice(-64, -1).unwrap();
        assert!(slice.iter().any(|&s| s != slice[0]));
    }

    #[test]
    fn out_of_range_lookup_is_an_error() {
        let path =
            EnvPath::generate(EnvModel::IidUniform { alphabet: 2 }, 1, 0, 10).unwrap();
        assert!(matches!(path.symbol(10), Err(EnvError::OutOfRange { .. })));
        assert!(matches!(path.symbol(-1), Err(EnvError::OutOfRange { .. })));
        assert!(path.symbol(9).is_ok());
        assert!(matches!(path.slice(5, 4), Err(EnvError::EmptyRange)));
    }

    #[test]
    fn singleton_model_is_constant() {
        let path =
            EnvPath::generate(EnvModel::Singleton { symbol: 3 }, 5, -5, 11).unwrap();
        for i in -5..6 {
            assert_eq!(path.symbol(i).unwrap(), 3);
        }
    }

    #[test]
    fn uniform_symbols_are_roughly_balanced() {
        let path =
            EnvPath::generate(EnvModel::IidUniform { alphabet: 2 }, 2024, 0, 20_000)
                .unwrap();
        let ones: usize = path.slice(0, 19_999).unwrap().iter().map(|&s| s as usize).sum();
        assert!((9_400..10_600).contains(&ones), "ones = {ones}");
    }

    #[test]
    fn explicit_paths_carry_given_symbols() {
        let path = EnvPath::from_symbols(-1, vec![1, 0, 1]).unwrap();
        assert_eq!(path.range(), (-1, 1));
        assert_eq!(path.symbol(-1).unwrap(), 1);
        assert_eq!(path.symbol(0).unwrap(), 0);
        assert_eq!(path.symbol(1).unwrap(), 1);
        assert!(matches!(
            EnvPath::generate(EnvModel::Explicit, 0, 0, 3),
            Err(EnvError::NotGenerative)
        ));
    }

    #[test]
    fn rejects_degenerate_models() {
        assert!(matches!(
            EnvPath::generate(EnvModel::IidUniform { alphabet: 1 }, 0, 0, 4),
            Err(EnvError::AlphabetTooSmall(1))
        ));
        assert!(matches!(
            EnvPath::generate(EnvModel::IidUniform { alphabet: 2 }, 0, 0, 0),
            Err(EnvError::EmptyRange)
        ));
    }
}
