//! Constrained match statistics between two orbit windows.
//!
//! For windows of length `n`, the object of interest is the closest
//! approach between the two orbits over index pairs `(i, j)` drawn from a
//! constrained set: all pairs, the diagonal `i = j`, a band `|i−j| ≤ α`,
//! its complement `|i−j| > α`, or "far thirds" (`i` in the first third,
//! `j` in the last).  On shift spaces with metric `b^{-k}` the minimal
//! distance is equivalent to a longest-common-substring length, computed
//! here by [`lcs_match`]; for circle orbits [`min_dist_match`] finds the
//! constrained nearest pair in exact arithmetic.
//!
//! Every search algorithm in this module is exact; hashing, when used, is
//! always confirmed by direct comparison.  The expensive part of a match
//! is `O(n log n)` or better, which matters because exponent experiments
//! evaluate millions of these searches.

mod automaton;
mod hashed;
mod metric;
mod scan;

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::space::CirclePoint;

/// Errors from match searches.
#[derive(Clone, Debug, PartialEq)]
pub enum MatchError {
    /// A sequence shorter than the window count `n`.
    TooShort { len: usize, n: usize },
    /// Windows must contain at least one index.
    EmptyWindow,
    /// Metric inputs of different lengths.
    LengthMismatch { xs: usize, ys: usize },
    /// FarThirds needs `n ≥ 3` so both thirds are nonempty.
    FarThirdsNeedsThree(usize),
    /// The constraint admits no index pair at all (`OffBand(α)` with
    /// `α ≥ n − 1`).
    EmptyConstraint { alpha: u64, n: usize },
    /// Exponent statistics need `n ≥ 2` (`log n` in the denominator).
    BadWindow(usize),
    /// Symbolic metric base must exceed 1.
    BadBase(f64),
}

impl fmt::Display for MatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchError::TooShort { len, n } => {
                write!(f, "sequence of length {len} cannot host {n} window starts")
            }
            MatchError::EmptyWindow => write!(f, "window count must be >= 1"),
            MatchError::LengthMismatch { xs, ys } => {
                write!(f, "point sets of different lengths: {xs} vs {ys}")
            }
            MatchError::FarThirdsNeedsThree(n) => {
                write!(f, "FarThirds needs n >= 3, got {n}")
            }
            MatchError::EmptyConstraint { alpha, n } => {
                write!(f, "OffBand({alpha}) admits no pairs for n = {n}")
            }
            MatchError::BadWindow(n) => {
                write!(f, "exponent statistic needs n >= 2, got {n}")
            }
            MatchError::BadBase(b) => write!(f, "metric base must be > 1, got {b}"),
        }
    }
}

impl core::error::Error for MatchError {}

/// The admissible index-pair set of a match search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchConstraint {
    /// All pairs `i, j < n`.
    All,
    /// `i = j` only.
    Diagonal,
    /// `|i − j| ≤ α` (includes the diagonal).
    Band(u64),
    /// `|i − j| > α`.
    OffBand(u64),
    /// `i < n/3` and `2n/3 ≤ j < n`.
    FarThirds,
}

impl MatchConstraint {
    /// Whether the pair `(i, j)` is admissible at window length `n`.
    pub fn admits(&self, i: usize, j: usize, n: usize) -> bool {
        if i >= n || j >= n {
            return false;
        }
        match *self {
            MatchConstraint::All => true,
            MatchConstraint::Diagonal => i == j,
            MatchConstraint::Band(alpha) => i.abs_diff(j) as u64 <= alpha,
            MatchConstraint::OffBand(alpha) => i.abs_diff(j) as u64 > alpha,
            MatchConstraint::FarThirds => 3 * i < n && 3 * j >= 2 * n,
        }
    }

    /// The lexicographically smallest admissible pair, used as the witness
    /// when nothing matches (`m = 0`).  `None` when the set is empty.
    fn smallest_pair(&self, n: usize) -> Option<(usize, usize)> {
        match *self {
            MatchConstraint::All | MatchConstraint::Diagonal | MatchConstraint::Band(_) => {
                Some((0, 0))
            }
            MatchConstraint::OffBand(alpha) => {
                let j = alpha.checked_add(1)? as usize;
                (j < n).then_some((0, j))
            }
            MatchConstraint::FarThirds => Some((0, (2 * n).div_ceil(3))),
        }
    }
}

/// The value attained by a match search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatchValue {
    /// Symbolic: greatest common-substring length over admissible pairs.
    Length(u64),
    /// Metric: smallest circle distance over admissible pairs, with its
    /// base-2 log carried separately so sub-normal-range distances from
    /// high-precision orbits keep their scale.
    Distance { value: f64, log2: f64 },
}

/// Outcome of a constrained match search.
///
/// Ties are broken by preferring witnesses whose maximality is certified
/// by a visible mismatch (`truncated = false`), then by smallest `(i, j)`
/// lexicographically; metric searches have no truncation and use the
/// lexicographic rule alone.  `truncated = true` therefore means every
/// optimal match ran into a sequence end, i.e. the reported length is
/// only a lower bound and the caller should lengthen its buffers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchResult {
    pub value: MatchValue,
    /// Index pair attaining the value.
    pub witness: (usize, usize),
    /// Whether the witness hit a sequence end before a mismatch.
    pub truncated: bool,
    /// Window length the search was constrained to.
    pub n: usize,
}

impl MatchResult {
    /// The symbolic match length, if this is a symbolic result.
    pub fn length(&self) -> Option<u64> {
        match self.value {
            MatchValue::Length(m) => Some(m),
            MatchValue::Distance { .. } => None,
        }
    }
}

/// Symbolic candidate ordering: greater length first, then certified
/// (untruncated) before truncated, then smallest `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SymCandidate {
    pub m: u64,
    pub truncated: bool,
    pub i: usize,
    pub j: usize,
}

impl SymCandidate {
    pub(crate) fn better_than(&self, other: &SymCandidate) -> bool {
        (
            core::cmp::Reverse(self.m),
            self.truncated,
            self.i,
            self.j,
        ) < (
            core::cmp::Reverse(other.m),
            other.truncated,
            other.i,
            other.j,
        )
    }
}

/// Length of the extension tail callers should append after the `n`
/// window starts: `max(64, ⌈8·log₂ n⌉)`.
///
/// Typical optimal match lengths grow like `c·log₂ n` with `c ≤ 2/H₂`,
/// so an 8·log₂ n tail makes running off the end (and the rerun it
/// triggers) vanishingly rare without inflating memory.
pub fn match_cap(n: u64) -> u64 {
    if n < 2 {
        return 64;
    }
    64u64.max((8.0 * (n as f64).log2()).ceil() as u64)
}

/// Greatest common-substring length between `x` and `y` over admissible
/// start pairs `(i, j)`, `i, j < n`.
///
/// Matches may extend past the window into the remainder of the
/// sequences; `x` and `y` only need `|x|, |y| ≥ n`, but see [`match_cap`]
/// for the tail length that keeps truncation rare.
pub fn lcs_match(
    x: &[u8],
    y: &[u8],
    n: usize,
    constraint: MatchConstraint,
) -> Result<MatchResult, MatchError> {
    if n == 0 {
        return Err(MatchError::EmptyWindow);
    }
    if x.len() < n {
        return Err(MatchError::TooShort { len: x.len(), n });
    }
    if y.len() < n {
        return Err(MatchError::TooShort { len: y.len(), n });
    }
    let cand = match constraint {
        MatchConstraint::All => lcs_windowed(x, y, n, n, 0, constraint),
        MatchConstraint::FarThirds => {
            if n < 3 {
                return Err(MatchError::FarThirdsNeedsThree(n));
            }
            lcs_windowed(x, y, n, n.div_ceil(3), (2 * n).div_ceil(3), constraint)
        }
        MatchConstraint::Diagonal => scan::band_best(x, y, n, 0),
        MatchConstraint::Band(alpha) => {
            if alpha >= n as u64 - 1 {
                // The band covers every pair; the automaton path is
                // O(N) instead of O(n²) and tie-breaks identically.
                lcs_windowed(x, y, n, n, 0, constraint)
            } else {
                scan::band_best(x, y, n, alpha as usize)
            }
        }
        MatchConstraint::OffBand(alpha) => {
            if alpha >= n as u64 - 1 {
                return Err(MatchError::EmptyConstraint { alpha, n });
            }
            hashed::offband_best(x, y, n, alpha as usize)
        }
    };
    let cand = match cand {
        Some(c) => c,
        None => {
            let (i, j) = constraint
                .smallest_pair(n)
                .expect("nonempty constraint checked above");
            SymCandidate { m: 0, truncated: false, i, j }
        }
    };
    Ok(MatchResult {
        value: MatchValue::Length(cand.m),
        witness: (cand.i, cand.j),
        truncated: cand.truncated,
        n,
    })
}

/// All/FarThirds search: suffix automaton over `x` streamed against `y`
/// yields the optimal length; the canonical witness is then selected by a
/// verified hash pass so tie-breaking matches the other algorithms.
fn lcs_windowed(
    x: &[u8],
    y: &[u8],
    n: usize,
    x_hi: usize,
    y_lo: usize,
    constraint: MatchConstraint,
) -> Option<SymCandidate> {
    let m = automaton::constrained_lcs(x, y, x_hi, y_lo, n);
    if m == 0 {
        return None;
    }
    Some(hashed::select_witness(x, y, n, m, constraint))
}

/// Smallest circle distance between `xs[i]` and `ys[j]` over admissible
/// pairs, in exact arithmetic; the witness is the lexicographically
/// smallest attaining pair.
pub fn min_dist_match(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
    constraint: MatchConstraint,
) -> Result<MatchResult, MatchError> {
    if xs.len() != ys.len() {
        return Err(MatchError::LengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    let n = xs.len();
    if n == 0 {
        return Err(MatchError::EmptyWindow);
    }
    match constraint {
        MatchConstraint::FarThirds if n < 3 => {
            return Err(MatchError::FarThirdsNeedsThree(n))
        }
        MatchConstraint::OffBand(alpha) if alpha >= n as u64 - 1 => {
            return Err(MatchError::EmptyConstraint { alpha, n })
        }
        _ => {}
    }
    let (dist, witness) = metric::min_dist(xs, ys, constraint);
    Ok(MatchResult {
        value: MatchValue::Distance { value: dist.to_f64(), log2: dist.log2() },
        witness,
        truncated: false,
        n,
    })
}

/// The distance `base^{-m}` a symbolic match length stands for.
///
/// Exact for base 2 out to the subnormal floor (`m ≈ 1074`); beyond any
/// double's range, work in the log domain via [`exponent_statistic`].
pub fn to_distance(m: u64, base: f64) -> f64 {
    if base == 2.0 {
        (-(m as f64)).exp2()
    } else {
        base.powf(-(m as f64))
    }
}

/// `−log₂ to_distance(m, base)`, exact in the log domain for any `m`.
pub fn to_distance_log2(m: u64, base: f64) -> f64 {
    m as f64 * base.log2()
}

/// The normalized exponent `−log(distance) / log(n)` of a match result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentStatistic {
    /// `m·log b / log n` (symbolic) or `−log value / log n` (metric);
    /// `+∞` on an exact metric collision.
    pub value: f64,
    /// Whether the metric value was exactly zero.
    pub exact_collision: bool,
}

/// The exponent statistic of a match result at its window length.
///
/// The log base cancels between numerator and denominator; `base` is the
/// metric base of the symbolic space and is ignored for metric results.
pub fn exponent_statistic(
    result: &MatchResult,
    base: f64,
) -> Result<ExponentStatistic, MatchError> {
    if result.n < 2 {
        return Err(MatchError::BadWindow(result.n));
    }
    let log2_n = (result.n as f64).log2();
    match result.value {
        MatchValue::Length(m) => {
            if !(base > 1.0) {
                return Err(MatchError::BadBase(base));
            }
            Ok(ExponentStatistic {
                value: m as f64 * base.log2() / log2_n,
                exact_collision: false,
            })
        }
        MatchValue::Distance { log2, .. } => {
            if log2 == f64::NEG_INFINITY {
                return Ok(ExponentStatistic { value: f64::INFINITY, exact_collision: true });
            }
            Ok(ExponentStatistic { value: -log2 / log2_n, exact_collision: false })
        }
    }
}

/// Brute-force reference for the symbolic search: `O(n²·m)` direct
/// extension over all admissible pairs, with the same tie-breaking.
/// Exposed for oracle testing; do not use at experiment scale.
pub fn lcs_match_brute(
    x: &[u8],
    y: &[u8],
    n: usize,
    constraint: MatchConstraint,
) -> Result<MatchResult, MatchError> {
    if n == 0 {
        return Err(MatchError::EmptyWindow);
    }
    if x.len() < n {
        return Err(MatchError::TooShort { len: x.len(), n });
    }
    if y.len() < n {
        return Err(MatchError::TooShort { len: y.len(), n });
    }
    if let MatchConstraint::FarThirds = constraint {
        if n < 3 {
            return Err(MatchError::FarThirdsNeedsThree(n));
        }
    }
    let mut best: Option<SymCandidate> = None;
    let mut any_pair = false;
    for i in 0..n {
        for j in 0..n {
            if !constraint.admits(i, j, n) {
                continue;
            }
            any_pair = true;
            let mut k = 0usize;
            while i + k < x.len() && j + k < y.len() && x[i + k] == y[j + k] {
                k += 1;
            }
            let cand = SymCandidate {
                m: k as u64,
                truncated: k > 0 && (i + k == x.len() || j + k == y.len()),
                i,
                j,
            };
            if best.map_or(true, |b| cand.better_than(&b)) {
                best = Some(cand);
            }
        }
    }
    if !any_pair {
        let alpha = match constraint {
            MatchConstraint::OffBand(a) => a,
            _ => 0,
        };
        return Err(MatchError::EmptyConstraint { alpha, n });
    }
    let cand = best.expect("nonempty admissible set");
    let cand = if cand.m == 0 {
        let (i, j) = constraint.smallest_pair(n).expect("nonempty");
        SymCandidate { m: 0, truncated: false, i, j }
    } else {
        cand
    };
    Ok(MatchResult {
        value: MatchValue::Length(cand.m),
        witness: (cand.i, cand.j),
        truncated: cand.truncated,
        n,
    })
}

/// Brute-force reference for the metric search: all admissible pairs in
/// exact arithmetic, lexicographic tie-break.  Oracle use only.
pub fn min_dist_match_brute(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
    constraint: MatchConstraint,
) -> Result<MatchResult, MatchError> {
    if xs.len() != ys.len() {
        return Err(MatchError::LengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    let n = xs.len();
    if n == 0 {
        return Err(MatchError::EmptyWindow);
    }
    if let MatchConstraint::FarThirds = constraint {
        if n < 3 {
            return Err(MatchError::FarThirdsNeedsThree(n));
        }
    }
    let mut best: Option<(CirclePoint, (usize, usize))> = None;
    for i in 0..n {
        for j in 0..n {
            if !constraint.admits(i, j, n) {
                continue;
            }
            let d = xs[i].circle_distance(&ys[j]);
            let replace = match &best {
                None => true,
                Some((bd, _)) => d < *bd,
            };
            if replace {
                best = Some((d, (i, j)));
            }
        }
    }
    match best {
        Some((d, witness)) => Ok(MatchResult {
            value: MatchValue::Distance { value: d.to_f64(), log2: d.log2() },
            witness,
            truncated: false,
            n,
        }),
        None => {
            let alpha = match constraint {
                MatchConstraint::OffBand(a) => a,
                _ => 0,
            };
            Err(MatchError::EmptyConstraint { alpha, n })
        }
    }
}

#[cfg(test)]
mod tests;
