//! Metric spaces for orbit experiments: full shifts and the unit circle.
//!
//! Circle points are held *exactly*, as either a dyadic `mant / 2^prec` or
//! an arbitrary rational in `[0, 1)`.  Exactness matters because the circle
//! maps `x ↦ ℓx mod 1` are expanding: in floating point, two orbits started
//! at nearby points lose all correlation after ~53 steps, and a doubling
//! orbit of any binary64 value collapses to 0.  With an integer mantissa of
//! `n·log₂ℓ + slack` bits, an orbit segment of length `n` is exact, and so
//! are all pairwise distances between two such segments.
//!
//! The same enum doubles as the exact result type for circle distances
//! (which live in `[0, 1/2] ⊂ [0, 1)`), so minimum searches can compare and
//! combine distances without rounding.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[allow(unused_imports)]
use num_traits::Float; // no_std builds take ln/log2/exp2 from libm via this trait

/// Errors from space construction and point arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceError {
    /// Alphabet sizes below 2 leave no room for disagreement.
    AlphabetTooSmall(u32),
    /// The symbolic metric base must be > 1 and finite.
    BadMetricBase,
    /// A fraction with zero denominator.
    ZeroDenominator,
    /// Mantissa precision of zero bits cannot represent a point.
    ZeroPrecision,
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::AlphabetTooSmall(a) => {
                write!(f, "alphabet size {a} is too small (need at least 2)")
            }
            SpaceError::BadMetricBase => write!(f, "metric base must be finite and > 1"),
            SpaceError::ZeroDenominator => write!(f, "fraction has zero denominator"),
            SpaceError::ZeroPrecision => write!(f, "mantissa precision must be positive"),
        }
    }
}

impl core::error::Error for SpaceError {}

// ── full shifts ────────────────────────────────────────────────────────────

/// The full shift on `alphabet_size` symbols with metric `b^{-k}`, where
/// `k` is the first index at which two sequences disagree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolicSpace {
    alphabet_size: u32,
    metric_base: f64,
}

impl SymbolicSpace {
    pub fn new(alphabet_size: u32, metric_base: f64) -> Result<Self, SpaceError> {
        if alphabet_size < 2 {
            return Err(SpaceError::AlphabetTooSmall(alphabet_size));
        }
        if !(metric_base.is_finite() && metric_base > 1.0) {
            return Err(SpaceError::BadMetricBase);
        }
        Ok(SymbolicSpace { alphabet_size, metric_base })
    }

    /// The two-symbol shift with base-2 metric, the default everywhere.
    pub fn binary() -> Self {
        SymbolicSpace { alphabet_size: 2, metric_base: 2.0 }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn metric_base(&self) -> f64 {
        self.metric_base
    }

    /// First index at which the slices disagree, or `None` if one is a
    /// prefix of the other (including equality).
    pub fn first_disagreement(x: &[u8], y: &[u8]) -> Option<usize> {
        x.iter().zip(y).position(|(a, b)| a != b)
    }

    /// Distance `b^{-k}` between two finite windows.
    ///
    /// Windows stand for infinite sequences, so if one is a proper prefix
    /// of the other the best that can be said is that the disagreement is
    /// not visible yet; the distance of the shorter length is returned.
    /// Equal windows of equal length give exactly 0.
    pub fn distance(&self, x: &[u8], y: &[u8]) -> f64 {
        match Self::first_disagreement(x, y) {
            Some(k) => self.metric_base.powi(-(k as i32)),
            None if x.len() == y.len() => 0.0,
            None => self.metric_base.powi(-(x.len().min(y.len()) as i32)),
        }
    }
}

/// A point of a shift space: a shared symbol buffer viewed from `offset`.
///
/// Orbit windows under the shift are suffixes of one sample, so points
/// share the buffer instead of owning `n` overlapping copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicPoint {
    buf: Arc<[u8]>,
    offset: usize,
}

impl SymbolicPoint {
    pub fn new(symbols: Vec<u8>) -> Self {
        SymbolicPoint { buf: symbols.into(), offset: 0 }
    }

    /// The same underlying sequence shifted `k` more symbols to the left.
    /// Saturates at the end of the buffer (an empty view).
    pub fn shifted(&self, k: usize) -> Self {
        SymbolicPoint {
            buf: Arc::clone(&self.buf),
            offset: (self.offset + k).min(self.buf.len()),
        }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.buf[self.offset..]
    }

    pub fn len(&self) -> usize {
        self.buf.len() - self.offset
    }

    pub fn is_empty(&self) -> bool {
        self.offset == self.buf.len()
    }
}

// ── the unit circle ────────────────────────────────────────────────────────

/// The unit circle `R/Z` with distance `min(|x−y|, 1−|x−y|)`.
///
/// Stateless; it exists so call sites can name the space they work in and
/// reach its float-level helpers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CircleSpace;

impl CircleSpace {
    /// Circle distance between two floats in `[0, 1)`.
    pub fn distance_f64(x: f64, y: f64) -> f64 {
        let d = (x - y).abs();
        d.min(1.0 - d)
    }
}

/// An exact number in `[0, 1)`: a point of the circle, or an exact circle
/// distance (those lie in `[0, 1/2]`).
///
/// `Dyadic` is the working representation for sampled points and for
/// orbits under `x ↦ ℓx mod 1`; multiplication by `ℓ` is a shift-free
/// `mant·ℓ mod 2^prec`.  `Rational` covers seeds like 1/5 whose orbits
/// never become dyadic; under `ℓx mod 1` the denominator never grows.
#[derive(Clone, Debug)]
pub enum CirclePoint {
    Dyadic { mant: BigUint, prec: u64 },
    Rational(BigRational),
}

impl CirclePoint {
    pub fn zero() -> Self {
        CirclePoint::Dyadic { mant: BigUint::zero(), prec: 1 }
    }

    /// The point `num/den mod 1`, stored as a dyadic when `den` is a power
    /// of two and as a reduced rational otherwise.
    pub fn from_fraction(num: u64, den: u64) -> Result<Self, SpaceError> {
        if den == 0 {
            return Err(SpaceError::ZeroDenominator);
        }
        let num = num % den;
        if den.is_power_of_two() {
            Ok(CirclePoint::Dyadic {
                mant: BigUint::from(num),
                prec: u64::from(den.trailing_zeros()),
            })
        } else {
            Ok(CirclePoint::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))
        }
    }

    /// A uniform dyadic point with `prec` mantissa bits, drawn from the
    /// stream at word indices `base_index, base_index+1, ...`.  The number
    /// of 64-bit words consumed is `ceil(prec/64)`.
    pub fn uniform(
        stream: &crate::rng::CounterStream,
        base_index: u64,
        prec: u64,
    ) -> Result<Self, SpaceError> {
        if prec == 0 {
            return Err(SpaceError::ZeroPrecision);
        }
        let words = prec.div_ceil(64);
        let mut bytes = Vec::with_capacity((words * 8) as usize);
        for w in 0..words {
            let mut draw = stream.u64_at(base_index + w);
            if w == words - 1 && prec % 64 != 0 {
                draw &= (1u64 << (prec % 64)) - 1;
            }
            bytes.extend_from_slice(&draw.to_le_bytes());
        }
        Ok(CirclePoint::Dyadic { mant: BigUint::from_bytes_le(&bytes), prec })
    }

    /// Exact image under `x ↦ ℓx mod 1`.
    pub fn times_mod1(&self, l: u32) -> CirclePoint {
        match self {
            CirclePoint::Dyadic { mant, prec } => {
                let mut m = mant * l;
                // reduce mod 2^prec by truncating to the low `prec` bits
                if m.bits() > *prec {
                    let mask = (BigUint::one() << *prec) - BigUint::one();
                    m &= mask;
                }
                CirclePoint::Dyadic { mant: m, prec: *prec }
            }
            CirclePoint::Rational(r) => {
                let p = r * BigInt::from(l);
                CirclePoint::Rational(p.fract())
            }
        }
    }

    /// Exact circle distance `min(|x−y|, 1−|x−y|)`, itself a number in
    /// `[0, 1/2]` in the same representation family.
    pub fn circle_distance(&self, other: &CirclePoint) -> CirclePoint {
        match (self, other) {
            (
                CirclePoint::Dyadic { mant: a, prec: p },
                CirclePoint::Dyadic { mant: b, prec: q },
            ) => {
                // Align to the common precision P = max(p, q).
                let pp = (*p).max(*q);
                let av = a << (pp - p);
                let bv = b << (pp - q);
                let diff = if av >= bv { &av - &bv } else { &bv - &av };
                let whole = BigUint::one() << pp;
                let wrap = &whole - &diff;
                CirclePoint::Dyadic { mant: diff.min(wrap), prec: pp }
            }
            _ => {
                let d = (self.to_rational() - other.to_rational()).abs();
                let wrap = BigRational::one() - &d;
                CirclePoint::Rational(d.min(wrap))
            }
        }
    }

    /// `self + d mod 1`, exact.
    pub fn add_mod1(&self, d: &CirclePoint) -> CirclePoint {
        match (self, d) {
            (
                CirclePoint::Dyadic { mant: a, prec: p },
                CirclePoint::Dyadic { mant: b, prec: q },
            ) => {
                let pp = (*p).max(*q);
                let mut m = (a << (pp - p)) + (b << (pp - q));
                let whole = BigUint::one() << pp;
                if m >= whole {
                    m -= whole;
                }
                CirclePoint::Dyadic { mant: m, prec: pp }
            }
            _ => {
                let s = self.to_rational() + d.to_rational();
                CirclePoint::Rational(s.fract())
            }
        }
    }

    /// `self − d mod 1`, exact.
    pub fn sub_mod1(&self, d: &CirclePoint) -> CirclePoint {
        match (self, d) {
            (
                CirclePoint::Dyadic { mant: a, prec: p },
                CirclePoint::Dyadic { mant: b, prec: q },
            ) => {
                let pp = (*p).max(*q);
                let av = a << (pp - p);
                let bv = b << (pp - q);
                let m = if av >= bv {
                    av - bv
                } else {
                    (BigUint::one() << pp) + av - bv
                };
                CirclePoint::Dyadic { mant: m, prec: pp }
            }
            _ => {
                let s = self.to_rational() - d.to_rational();
                let f = s.fract();
                let f = if f.is_negative() { f + BigRational::one() } else { f };
                CirclePoint::Rational(f)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CirclePoint::Dyadic { mant, .. } => mant.is_zero(),
            CirclePoint::Rational(r) => r.is_zero(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            CirclePoint::Dyadic { mant, prec } => BigRational::new(
                BigInt::from(mant.clone()),
                BigInt::from(BigUint::one() << *prec),
            ),
            CirclePoint::Rational(r) => r.clone(),
        }
    }

    /// Nearest-enough double, via the top 53 bits of the mantissa.  Exact
    /// magnitudes below ~2^-1021 underflow to a subnormal or zero; use
    /// [`CirclePoint::log2`] when the scale is what matters.
    pub fn to_f64(&self) -> f64 {
        match self {
            CirclePoint::Dyadic { mant, prec } => {
                if mant.is_zero() {
                    return 0.0;
                }
                let bits = mant.bits();
                let shift = bits.saturating_sub(53);
                let top = (mant >> shift).to_u64().expect("top bits fit in u64");
                top as f64 * (shift as f64 - *prec as f64).exp2()
            }
            CirclePoint::Rational(r) => {
                r.to_f64().expect("small rational converts to f64")
            }
        }
    }

    /// `log2` of the value as a double; `-inf` for zero.  Robust for
    /// mantissas of any size, unlike `to_f64().log2()`.
    pub fn log2(&self) -> f64 {
        fn log2_biguint(v: &BigUint) -> f64 {
            let bits = v.bits();
            let shift = bits.saturating_sub(53);
            let top = (v >> shift).to_u64().expect("top bits fit in u64") as f64;
            top.log2() + shift as f64
        }
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        match self {
            CirclePoint::Dyadic { mant, prec } => log2_biguint(mant) - *prec as f64,
            CirclePoint::Rational(r) => {
                log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude())
            }
        }
    }
}

impl PartialEq for CirclePoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CirclePoint {}

impl PartialOrd for CirclePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CirclePoint {
    /// Numeric order on `[0, 1)`, across representations.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (
                CirclePoint::Dyadic { mant: a, prec: p },
                CirclePoint::Dyadic { mant: b, prec: q },
            ) => {
                if p == q {
                    a.cmp(b)
                } else {
                    let pp = (*p).max(*q);
                    (a << (pp - p)).cmp(&(b << (pp - q)))
                }
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::Dyadic { mant, prec } => write!(f, "{mant}/2^{prec}"),
            CirclePoint::Rational(r) => write!(f, "{r}"),
        }
    }
}
