//! Random orbits of skew products, and the gap function `α(n)`.
//!
//! A [`RandomSystem`] is a finite family of fiber maps selected by
//! environment symbols: either the full shift (every fiber map is the left
//! shift, the environment only shuffles measures) or a family of expanding
//! circle maps `x ↦ ℓ_i x mod 1`.  [`iterate_orbit`] produces the window
//! `x, T_ω x, …, T_ω^{n-1} x` exactly; for circle systems this relies on
//! the exact arithmetic of [`CirclePoint`].

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::env::EnvPath;
use crate::space::{CirclePoint, SymbolicPoint, SymbolicSpace};

/// Errors from orbit generation and the gap function.
#[derive(Clone, Debug, PartialEq)]
pub enum OrbitError {
    /// Orbit windows must contain at least one point.
    EmptyWindow,
    /// The environment window does not cover the indices the orbit needs.
    EnvTooShort { needed_last: i64, have_last: i64 },
    /// Start point from the wrong space for this system.
    SpaceMismatch,
    /// A start sequence carries a symbol outside the shift alphabet.
    BadSymbol { position: usize, symbol: u8, alphabet: u32 },
    /// An environment symbol does not select any map of the family.
    BadMapIndex { index: i64, symbol: u8, family_size: usize },
    /// Circle map degrees must be at least 2 (expansion), family nonempty.
    BadFamily,
    /// `α(n)` is defined for n ≥ 3 (below that `ln n` is too small to gap).
    GapTooShort(u64),
    /// The gap exponent must be finite and positive.
    BadGapExponent(f64),
}

impl fmt::Display for OrbitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitError::EmptyWindow => write!(f, "orbit window must have length >= 1"),
            OrbitError::EnvTooShort { needed_last, have_last } => write!(
                f,
                "environment window ends at {have_last} but the orbit needs index {needed_last}"
            ),
            OrbitError::SpaceMismatch => {
                write!(f, "start point does not belong to the system's space")
            }
            OrbitError::BadSymbol { position, symbol, alphabet } => write!(
                f,
                "symbol {symbol} at position {position} outside alphabet of size {alphabet}"
            ),
            OrbitError::BadMapIndex { index, symbol, family_size } => write!(
                f,
                "environment symbol {symbol} at index {index} selects no map (family has {family_size})"
            ),
            OrbitError::BadFamily => {
                write!(f, "circle family must be nonempty with all degrees >= 2")
            }
            OrbitError::GapTooShort(n) => write!(f, "gap alpha needs n >= 3, got {n}"),
            OrbitError::BadGapExponent(c) => {
                write!(f, "gap exponent must be finite and positive, got {c}")
            }
        }
    }
}

impl core::error::Error for OrbitError {}

/// A finite family of fiber maps, selected per step by the environment.
#[derive(Clone, Debug, PartialEq)]
pub enum RandomSystem {
    /// The left shift on a symbolic space; the fiber map does not depend
    /// on the environment symbol.
    Shift(SymbolicSpace),
    /// Circle maps `x ↦ degrees[ω_i]·x mod 1`.
    CircleFamily { degrees: Vec<u32> },
}

impl RandomSystem {
    pub fn shift(space: SymbolicSpace) -> Self {
        RandomSystem::Shift(space)
    }

    pub fn circle_family(degrees: Vec<u32>) -> Result<Self, OrbitError> {
        if degrees.is_empty() || degrees.iter().any(|&l| l < 2) {
            return Err(OrbitError::BadFamily);
        }
        Ok(RandomSystem::CircleFamily { degrees })
    }
}

/// A point of whichever space the system acts on.
#[derive(Clone, Debug, PartialEq)]
pub enum SpacePoint {
    Symbolic(SymbolicPoint),
    Circle(CirclePoint),
}

/// The orbit window `x, T_ω x, …, T_ω^{n-1} x`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitWindow {
    points: Vec<SpacePoint>,
}

impl OrbitWindow {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &SpacePoint {
        &self.points[i]
    }

    pub fn points(&self) -> &[SpacePoint] {
        &self.points
    }

    /// The window as exact circle points, if this is a circle orbit.
    pub fn circle_points(&self) -> Option<Vec<CirclePoint>> {
        self.points
            .iter()
            .map(|p| match p {
                SpacePoint::Circle(c) => Some(c.clone()),
                SpacePoint::Symbolic(_) => None,
            })
            .collect()
    }
}

/// Iterates the skew product for `n - 1` steps, returning all `n` points.
///
/// The environment must cover indices `[0, n)`; the final symbol is not
/// consumed but keeping the window aligned with the orbit length avoids a
/// class of off-by-one slips in callers that pair orbits with paths.
pub fn iterate_orbit(
    system: &RandomSystem,
    env: &EnvPath,
    start: &SpacePoint,
    n: usize,
) -> Result<OrbitWindow, OrbitError> {
    if n == 0 {
        return Err(OrbitError::EmptyWindow);
    }
    let needed_last = n as i64 - 1;
    if !env.covers(0, needed_last) {
        return Err(OrbitError::EnvTooShort { needed_last, have_last: env.range().1 });
    }
    match (system, start) {
        (RandomSystem::Shift(space), SpacePoint::Symbolic(x0)) => {
            if let Some(position) = x0
                .symbols()
                .iter()
                .position(|&s| u32::from(s) >= space.alphabet_size())
            {
                return Err(OrbitError::BadSymbol {
                    position,
                    symbol: x0.symbols()[position],
                    alphabet: space.alphabet_size(),
                });
            }
            let points = (0..n)
                .map(|i| SpacePoint::Symbolic(x0.shifted(i)))
                .collect();
            Ok(OrbitWindow { points })
        }
        (RandomSystem::CircleFamily { degrees }, SpacePoint::Circle(x0)) => {
            let mut points = Vec::with_capacity(n);
            let mut x = x0.clone();
            for i in 0..n {
                points.push(SpacePoint::Circle(x.clone()));
                if i + 1 < n {
                    let sym = env.symbol(i as i64).expect("coverage checked above");
                    let l = *degrees.get(usize::from(sym)).ok_or(
                        OrbitError::BadMapIndex {
                            index: i as i64,
                            symbol: sym,
                            family_size: degrees.len(),
                        },
                    )?;
                    x = x.times_mod1(l);
                }
            }
            Ok(OrbitWindow { points })
        }
        _ => Err(OrbitError::SpaceMismatch),
    }
}

/// The gap radius `α(n) = ⌊(ln n)^c⌋`, clamped into `[0, n]`.
///
/// Grows slower than any power of `n`, so the off-band pair set keeps full
/// asymptotic weight while the band still absorbs short-range recurrence.
pub fn gap_alpha(n: u64, c: f64) -> Result<u64, OrbitError> {
    if n < 3 {
        return Err(OrbitError::GapTooShort(n));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(OrbitError::BadGapExponent(c));
    }
    let v = (n as f64).ln().powf(c);
    if !v.is_finite() {
        return Ok(n);
    }
    Ok((v.floor() as u64).min(n))
}

/// Mantissa bits needed so a circle orbit of length `n` under maps of
/// degree at most `max_degree` stays exact, with 64 bits of slack.
///
/// Each application of `x ↦ ℓx mod 1` consumes `log₂ℓ` leading mantissa
/// bits; once they are gone the orbit is determined by fewer and fewer
/// random bits and eventually collapses (a dyadic of `P` bits hits 0 after
/// at most `P` doublings).  The slack keeps the final points generic.
pub fn orbit_precision(n: usize, max_degree: u32) -> u64 {
    let per_step = f64::from(max_degree.max(2)).log2();
    (n as f64 * per_step).ceil() as u64 + 64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::EnvModel;
    use crate::rng::CounterStream;

    fn const_env(symbol: u8, len: usize) -> EnvPath {
        EnvPath::generate(EnvModel::Singleton { symbol }, 0, 0, len).unwrap()
    }

    #[test]
    fn doubling_orbit_of_three_eighths() {
        let sys = RandomSystem::circle_family(vec![2]).unwrap();
        let env = const_env(0, 4);
        let x0 = SpacePoint::Circle(CirclePoint::from_fraction(3, 8).unwrap());
        let orbit = iterate_orbit(&sys, &env, &x0, 4).unwrap();
        let expected = [(3u64, 8u64), (6, 8), (4, 8), (0, 8)];
        for (i, &(p, q)) in expected.iter().enumerate() {
            match orbit.point(i) {
                SpacePoint::Circle(c) => {
                    assert_eq!(*c, CirclePoint::from_fraction(p, q).unwrap())
                }
                _ => panic!("expected a circle point"),
            }
        }
    }

    #[test]
    fn mixed_family_follows_environment_symbols() {
        // Maps ℓ=2 (symbol 0) and ℓ=3 (symbol 1) applied to 1/5:
        // symbols 1,0,1 give 1/5 → 3/5 → 6/5 mod 1 = 1/5 → 3/5.
        let sys = RandomSystem::circle_family(vec![2, 3]).unwrap();
        let env = EnvPath::from_symbols(0, vec![1, 0, 1, 0]).unwrap();
        let x0 = SpacePoint::Circle(CirclePoint::from_fraction(1, 5).unwrap());
        let orbit = iterate_orbit(&sys, &env, &x0, 4).unwrap();
        let expected = [(1u64, 5u64), (3, 5), (1, 5), (3, 5)];
        for (i, &(p, q)) in expected.iter().enumerate() {
            assert_eq!(
                *orbit.point(i),
                SpacePoint::Circle(CirclePoint::from_fraction(p, q).unwrap())
            );
        }
    }

    #[test]
    fn shift_orbit_views_are_suffixes() {
        let sys = RandomSystem::shift(SymbolicSpace::binary());
        let env = const_env(0, 3);
        let x0 = SpacePoint::Symbolic(SymbolicPoint::new(vec![0, 1, 1, 0, 1]));
        let orbit = iterate_orbit(&sys, &env, &x0, 3).unwrap();
        let views: Vec<&[u8]> = orbit
            .points()
            .iter()
            .map(|p| match p {
                SpacePoint::Symbolic(s) => s.symbols(),
                _ => panic!("expected symbolic"),
            })
            .collect();
        assert_eq!(views, vec![&[0, 1, 1, 0, 1][..], &[1, 1, 0, 1], &[1, 0, 1]]);
    }

    #[test]
    fn orbit_preconditions_are_enforced() {
        let sys = RandomSystem::circle_family(vec![2]).unwrap();
        let env = const_env(0, 3);
        let x0 = SpacePoint::Circle(CirclePoint::from_fraction(1, 2).unwrap());
        assert_eq!(iterate_orbit(&sys, &env, &x0, 0).unwrap_err(), OrbitError::EmptyWindow);
        assert!(matches!(
            iterate_orbit(&sys, &env, &x0, 5).unwrap_err(),
            OrbitError::EnvTooShort { needed_last: 4, have_last: 2 }
        ));
        let sym = SpacePoint::Symbolic(SymbolicPoint::new(vec![0, 1]));
        assert_eq!(iterate_orbit(&sys, &env, &sym, 2).unwrap_err(), OrbitError::SpaceMismatch);

        let shift = RandomSystem::shift(SymbolicSpace::binary());
        let bad = SpacePoint::Symbolic(SymbolicPoint::new(vec![0, 2, 1]));
        assert!(matches!(
            iterate_orbit(&shift, &env, &bad, 2).unwrap_err(),
            OrbitError::BadSymbol { position: 1, symbol: 2, alphabet: 2 }
        ));

        assert_eq!(RandomSystem::circle_family(vec![]).unwrap_err(), OrbitError::BadFamily);
        assert_eq!(RandomSystem::circle_family(vec![2, 1]).unwrap_err(), OrbitError::BadFamily);
    }

    #[test]
    fn environment_symbol_outside_family_is_reported() {
        let sys = RandomSystem::circle_family(vec![2, 3]).unwrap();
        let env = const_env(2, 4); // symbol 2, but only maps 0 and 1 exist
        let x0 = SpacePoint::Circle(CirclePoint::from_fraction(1, 4).unwrap());
        assert!(matches!(
            iterate_orbit(&sys, &env, &x0, 3).unwrap_err(),
            OrbitError::BadMapIndex { index: 0, symbol: 2, family_size: 2 }
        ));
    }

    #[test]
    fn gap_alpha_matches_hand_values() {
        // ln(4096) = 12 ln 2 ≈ 8.3178, squared ≈ 69.185.
        assert_eq!(gap_alpha(4096, 2.0).unwrap(), 69);
        assert_eq!(gap_alpha(4096, 1.0).unwrap(), 8);
        assert_eq!(gap_alpha(3, 2.0).unwrap(), 1);
        assert_eq!(gap_alpha(2, 2.0).unwrap_err(), OrbitError::GapTooShort(2));
        assert_eq!(gap_alpha(10, -1.0).unwrap_err(), OrbitError::BadGapExponent(-1.0));
        // Clamped to n when the power explodes.
        assert_eq!(gap_alpha(3, 1e6).unwrap(), 3);
    }

    #[test]
    fn precision_budget_keeps_long_doubling_orbits_alive() {
        let n = 100;
        let prec = orbit_precision(n, 2);
        assert_eq!(prec, 164);
        let stream = CounterStream::new(31415);
        let x0 = CirclePoint::uniform(&stream, 0, prec).unwrap();
        let sys = RandomSystem::circle_family(vec![2]).unwrap();
        let env = const_env(0, n);
        let orbit =
            iterate_orbit(&sys, &env, &SpacePoint::Circle(x0), n).unwrap();
        let pts = orbit.circle_points().unwrap();
        // With 64 bits of slack every point keeps nonzero low bits, so the
        // orbit never collapses and stays pairwise distinct here.
        assert!(pts.iter().all(|p| !p.is_zero()));
        for i in 1..n {
            assert_ne!(pts[i], pts[0], "orbit returned to start at step {i}");
        }
    }
}
