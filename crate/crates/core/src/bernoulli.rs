//! An exactly solvable random Bernoulli shift.
//!
//! The environment is a fair i.i.d. sequence over `{A, B}` (encoded 0/1);
//! conditioned on the path ω, fiber symbols are independent with
//! `P(x_i = 0) = p_{ω_i}`.  Both Rényi entropies of order 2 then close
//! form: with `s = pA + pB`,
//!
//! ```text
//! H₂ᵃⁿ = −log₂( (s² − 2s + 2) / 2 )
//! H₂ᑫᵘ = −log₂( (pA² + pB² + (1−pA)² + (1−pB)²) / 2 )
//! ```
//!
//! in bits per symbol, and the limiting decay exponent of the minimal
//! distance between two independent length-`n` orbit windows is
//! `max(2/H₂ᵃⁿ, 1/H₂ᑫᵘ)`.  Which term wins splits the parameter square
//! into annealed and quenched phases; along the corner-to-corner line
//! `pB = 1 − pA` the annealed entropy is identically 1 and the phase
//! boundary reduces to `H₂ᑫᵘ = 1/2`, crossed at
//! `c± = 1/2 ± (1/2)·√(√2 − 1) ≈ 0.178203, 0.821797`.
//!
//! A commonly quoted alternative closed form for the quenched entropy,
//! `−log₂((pA² − 1/2)² + (pB² − 1/2)² + 1/2)`, does not agree with the
//! cylinder-sum definition (at `pA = pB = 1/2` it gives `−log₂(5/8)`
//! instead of 1), and its boundary root is ≈ 0.232048 instead.  This
//! module implements the cylinder-sum form; reporting code is expected to
//! surface both numbers rather than silently pick one.  See
//! [`ALT_QUENCHED_BOUNDARY`].

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::env::{EnvModel, EnvPath};
use crate::rng::{stream_seed, CounterStream};

/// Diagonal phase-boundary value implied by the alternative (inconsistent)
/// quenched closed form: `1/2 − (1/2)·√(2√(√2−1) − 1)`.  Kept only so
/// reports can print it next to [`phase_boundary_diag`]'s value when
/// documenting the discrepancy.
pub const ALT_QUENCHED_BOUNDARY: f64 = 0.232_048;

/// Relative tolerance inside which the two exponent candidates are
/// declared tied and the regime reported as `Boundary`.
pub const REGIME_TOL: f64 = 1e-9;

/// Errors from parameter validation, samplers and the boundary solver.
#[derive(Clone, Debug, PartialEq)]
pub enum BernoulliError {
    /// A probability parameter outside the open interval (0, 1).
    BadProbability { name: &'static str, value: f64 },
    /// Cylinder probabilities need at least one symbol.
    EmptyWord,
    /// Environment word and fiber word of different lengths.
    LengthMismatch { env_len: usize, word_len: usize },
    /// A fiber word carries a symbol other than 0 or 1.
    BadWordSymbol { position: usize, symbol: u8 },
    /// Phase grids need enough resolution to resolve the phases.
    ResolutionTooSmall(u32),
    /// Solver tolerance below what bisection on doubles can honor.
    BadTolerance(f64),
    /// The bracketing interval showed no sign change.
    NoSignChange,
    /// The environment window does not cover the requested indices.
    EnvTooShort { needed: usize, have: usize },
}

impl fmt::Display for BernoulliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BernoulliError::BadProbability { name, value } => {
                write!(f, "{name} = {value} is not in the open interval (0, 1)")
            }
            BernoulliError::EmptyWord => write!(f, "cylinder word must be nonempty"),
            BernoulliError::LengthMismatch { env_len, word_len } => write!(
                f,
                "environment word length {env_len} != fiber word length {word_len}"
            ),
            BernoulliError::BadWordSymbol { position, symbol } => {
                write!(f, "fiber symbol {symbol} at position {position} is not 0/1")
            }
            BernoulliError::ResolutionTooSmall(r) => {
                write!(f, "phase grid resolution {r} too small (need >= 16)")
            }
            BernoulliError::BadTolerance(t) => {
                write!(f, "tolerance {t} outside [1e-12, inf)")
            }
            BernoulliError::NoSignChange => {
                write!(f, "no sign change in the bracketing interval")
            }
            BernoulliError::EnvTooShort { needed, have } => {
                write!(f, "environment covers {have} symbols, need {needed}")
            }
        }
    }
}

impl core::error::Error for BernoulliError {}

/// Conditional probabilities of fiber symbol 0 under the two maps,
/// validated into the open unit square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernoulliParams {
    p_a: f64,
    p_b: f64,
}

impl BernoulliParams {
    pub fn new(p_a: f64, p_b: f64) -> Result<Self, BernoulliError> {
        if !(p_a.is_finite() && p_a > 0.0 && p_a < 1.0) {
            return Err(BernoulliError::BadProbability { name: "pA", value: p_a });
        }
        if !(p_b.is_finite() && p_b > 0.0 && p_b < 1.0) {
            return Err(BernoulliError::BadProbability { name: "pB", value: p_b });
        }
        Ok(BernoulliParams { p_a, p_b })
    }

    pub fn p_a(&self) -> f64 {
        self.p_a
    }

    pub fn p_b(&self) -> f64 {
        self.p_b
    }

    /// P(symbol 0) under environment letter `w` (0 = A, 1 = B).
    fn p_zero(&self, w: u8) -> f64 {
        if w == 0 {
            self.p_a
        } else {
            self.p_b
        }
    }
}

/// Which term attains `max(2/H₂ᵃⁿ, 1/H₂ᑫᵘ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    Annealed,
    Quenched,
    /// The two candidates agree to within the stored relative tolerance.
    Boundary { tol: f64 },
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Annealed => "annealed",
            Regime::Quenched => "quenched",
            Regime::Boundary { .. } => "boundary",
        }
    }
}

/// Entropies, limiting exponent and phase classification at one parameter
/// pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub params: BernoulliParams,
    /// Annealed Rényi entropy of order 2, bits per symbol.
    pub h2_an: f64,
    /// Quenched Rényi entropy of order 2, bits per symbol.
    pub h2_qu: f64,
    /// `max(2/h2_an, 1/h2_qu)`: limiting value of `−log m_n / log n`.
    pub exponent: f64,
    pub regime: Regime,
}

/// Annealed Rényi entropy `−log₂((s² − 2s + 2)/2)`, `s = pA + pB`.
///
/// This is the per-symbol rate of `−log₂ Σ_C μ̄(C_k)²` where `μ̄` is the
/// annealed (environment-averaged) measure; the binomial identity
/// collapses the cylinder sum to a single power.
pub fn renyi_annealed(params: BernoulliParams) -> f64 {
    let s = params.p_a + params.p_b;
    -((s * s - 2.0 * s + 2.0) / 2.0).log2()
}

/// Quenched Rényi entropy `−log₂((pA² + pB² + (1−pA)² + (1−pB)²)/2)`.
///
/// Per-symbol rate of `−log₂ Σ_C E_ω[μ_ω(C_k)²]`: by independence the
/// environment average factorizes over positions, one factor per symbol.
pub fn renyi_quenched(params: BernoulliParams) -> f64 {
    let (a, b) = (params.p_a, params.p_b);
    let q = (a * a + b * b + (1.0 - a) * (1.0 - a) + (1.0 - b) * (1.0 - b)) / 2.0;
    -q.log2()
}

/// Entropies, limiting exponent `max(2/H₂ᵃⁿ, 1/H₂ᑫᵘ)` and regime.
pub fn exponent(params: BernoulliParams) -> PhasePoint {
    let h2_an = renyi_annealed(params);
    let h2_qu = renyi_quenched(params);
    let annealed = 2.0 / h2_an;
    let quenched = 1.0 / h2_qu;
    let value = annealed.max(quenched);
    let regime = if (annealed - quenched).abs() <= REGIME_TOL * value {
        Regime::Boundary { tol: REGIME_TOL }
    } else if annealed > quenched {
        Regime::Annealed
    } else {
        Regime::Quenched
    };
    PhasePoint { params, h2_an, h2_qu, exponent: value, regime }
}

/// Annealed probability of the cylinder `[word]`:
/// `(1/2^k)·s^{#0}·(2−s)^{#1}` with `s = pA + pB`.
pub fn mu_cylinder_annealed(
    params: BernoulliParams,
    word: &[u8],
) -> Result<f64, BernoulliError> {
    validate_word(word)?;
    let s = params.p_a + params.p_b;
    let mut p = 1.0;
    for &x in word {
        p *= if x == 0 { s } else { 2.0 - s } / 2.0;
    }
    Ok(p)
}

/// Quenched probability of `[word]` given the environment letters
/// `env_word` (0 = A, 1 = B): the product of per-site conditionals.
pub fn mu_cylinder_quenched(
    params: BernoulliParams,
    env_word: &[u8],
    word: &[u8],
) -> Result<f64, BernoulliError> {
    if env_word.len() != word.len() {
        return Err(BernoulliError::LengthMismatch {
            env_len: env_word.len(),
            word_len: word.len(),
        });
    }
    validate_word(word)?;
    let mut p = 1.0;
    for (&w, &x) in env_word.iter().zip(word) {
        let p0 = params.p_zero(w);
        p *= if x == 0 { p0 } else { 1.0 - p0 };
    }
    Ok(p)
}

fn validate_word(word: &[u8]) -> Result<(), BernoulliError> {
    if word.is_empty() {
        return Err(BernoulliError::EmptyWord);
    }
    if let Some(position) = word.iter().position(|&x| x > 1) {
        return Err(BernoulliError::BadWordSymbol { position, symbol: word[position] });
    }
    Ok(())
}

/// Phase-boundary crossings on the line `pB = 1 − pA`, found by bisection.
///
/// On that line the annealed entropy is identically 1 bit, so the boundary
/// condition `H₂ᵃⁿ = 2·H₂ᑫᵘ` reduces to `H₂ᑫᵘ(p, 1−p) = 1/2`, which has
/// exactly two roots `c₋ < 1/2 < c₊ = 1 − c₋` (closed form
/// `1/2 ∓ (1/2)√(√2−1)`, but the solver does not assume it).
pub fn phase_boundary_diag(tol: f64) -> Result<(f64, f64), BernoulliError> {
    phase_boundary_diag_with(
        |p| {
            let params = BernoulliParams::new(p, 1.0 - p).expect("p in (0,1)");
            (renyi_annealed(params), renyi_quenched(params))
        },
        tol,
    )
}

/// [`phase_boundary_diag`] with a caller-supplied entropy evaluator
/// `p ↦ (h2_an, h2_qu)` on the line `pB = 1 − pA`, so the boundary can be
/// cross-checked against e.g. finite-depth cylinder-sum entropies.
pub fn phase_boundary_diag_with<F>(
    mut entropies: F,
    tol: f64,
) -> Result<(f64, f64), BernoulliError>
where
    F: FnMut(f64) -> (f64, f64),
{
    if !(tol.is_finite() && tol >= 1e-12) {
        return Err(BernoulliError::BadTolerance(tol));
    }
    // Positive where the annealed term wins: 2·h_qu − h_an.
    let mut g = move |p: f64| {
        let (h_an, h_qu) = entropies(p);
        2.0 * h_qu - h_an
    };
    let c_minus = bisect(&mut g, 1e-9, 0.5, tol)?;
    let c_plus = bisect(&mut g, 0.5, 1.0 - 1e-9, tol)?;
    Ok((c_minus, c_plus))
}

/// Bisection to an interval of width `tol·1e−3`, then a residual check
/// `|g(root)| ≤ tol` (the defining-equation tolerance the caller asked
/// for, which is stricter than interval width when `g` is steep).
fn bisect<F>(g: &mut F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, BernoulliError>
where
    F: FnMut(f64) -> f64,
{
    let mut glo = g(lo);
    let ghi = g(hi);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() {
        return Err(BernoulliError::NoSignChange);
    }
    let width_goal = (tol * 1e-3).max(1e-15);
    while hi - lo > width_goal {
        let mid = 0.5 * (lo + hi);
        let gmid = g(mid);
        if gmid == 0.0 {
            return Ok(mid);
        }
        if gmid.signum() == glo.signum() {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if g(root).abs() <= tol {
        Ok(root)
    } else {
        Err(BernoulliError::NoSignChange)
    }
}

/// The full boundary locus `H₂ᵃⁿ = 2·H₂ᑫᵘ` inside the open unit square.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCurve {
    /// `(pA, pB)` samples, each satisfying the defining equation within
    /// the solver tolerance used to produce the curve.
    pub samples: Vec<(f64, f64)>,
}

/// Traces the boundary curve by scanning `pA` over `pa_steps` interior
/// values and bisecting in `pB` wherever `2·h2_qu − h2_an` changes sign.
pub fn boundary_curve(pa_steps: u32, tol: f64) -> Result<BoundaryCurve, BernoulliError> {
    if pa_steps < 16 {
        return Err(BernoulliError::ResolutionTooSmall(pa_steps));
    }
    if !(tol.is_finite() && tol >= 1e-12) {
        return Err(BernoulliError::BadTolerance(tol));
    }
    let mut samples = Vec::new();
    // Probe resolution in pB; the sign function has at most a few roots.
    let probes = 512;
    for i in 0..pa_steps {
        let p_a = f64::from(i + 1) / f64::from(pa_steps + 1);
        let mut g = |p_b: f64| {
            let params = BernoulliParams::new(p_a, p_b).expect("interior point");
            2.0 * renyi_quenched(params) - renyi_annealed(params)
        };
        let mut prev_pb = 1e-9;
        let mut prev_g = g(prev_pb);
        for j in 1..=probes {
            let p_b = if j == probes {
                1.0 - 1e-9
            } else {
                f64::from(j) / f64::from(probes)
            };
            let cur_g = g(p_b);
            if prev_g == 0.0 || prev_g.signum() != cur_g.signum() {
                let root = bisect(&mut g, prev_pb, p_b, tol)?;
                samples.push((p_a, root));
            }
            prev_pb = p_b;
            prev_g = cur_g;
        }
    }
    Ok(BoundaryCurve { samples })
}

/// Evaluates [`exponent`] on a uniform `resolution × resolution` grid of
/// interior points `(i+1)/(resolution+1)`, rows in `pA`-major order.
pub fn phase_grid(resolution: u32) -> Result<Vec<PhasePoint>, BernoulliError> {
    if resolution < 16 {
        return Err(BernoulliError::ResolutionTooSmall(resolution));
    }
    let denom = f64::from(resolution + 1);
    let mut grid = Vec::with_capacity((resolution as usize).pow(2));
    for i in 0..resolution {
        let p_a = f64::from(i + 1) / denom;
        for j in 0..resolution {
            let p_b = f64::from(j + 1) / denom;
            grid.push(exponent(BernoulliParams::new(p_a, p_b)?));
        }
    }
    Ok(grid)
}

/// A fair i.i.d. environment path over `{A, B}` (encoded 0/1) covering
/// indices `[0, length)`.  The seed is expanded through a labeled stream,
/// so the same raw seed passed here and to [`sample_fiber_sequence`]
/// still yields independent randomness.
pub fn sample_environment(seed: u64, length: usize) -> Result<EnvPath, BernoulliError> {
    EnvPath::generate(
        EnvModel::IidUniform { alphabet: 2 },
        stream_seed(seed, 0, "bernoulli-env"),
        0,
        length,
    )
    .map_err(|_| BernoulliError::EnvTooShort { needed: 1, have: 0 })
}

/// Fiber symbols `x_0, …, x_{length−1}` with `P(x_i = 0) = p_{ω_i}`,
/// conditionally independent given the environment.
///
/// Site `i` is a pure function of `(params, ω_i, seed, i)`: regenerating
/// with a larger `length` (environment permitting) extends the sequence
/// without changing the prefix.
pub fn sample_fiber_sequence(
    params: BernoulliParams,
    env: &EnvPath,
    seed: u64,
    length: usize,
) -> Result<Vec<u8>, BernoulliError> {
    if length == 0 {
        return Ok(Vec::new());
    }
    if !env.covers(0, length as i64 - 1) {
        let (lo, hi) = env.range();
        let have = if lo > 0 { 0 } else { (hi.min(length as i64 - 1) + 1).max(0) as usize };
        return Err(BernoulliError::EnvTooShort { needed: length, have });
    }
    let stream = CounterStream::new(stream_seed(seed, 0, "bernoulli-fiber"));
    let mut out = Vec::with_capacity(length);
    for i in 0..length {
        let w = env.symbol(i as i64).expect("coverage checked");
        let p0 = params.p_zero(w);
        out.push(u8::from(stream.unit_f64_at(i as u64) >= p0));
    }
    Ok(out)
}
