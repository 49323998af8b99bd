//! Fiberwise transfer operators on a discretised circle.
//!
//! A family of full-branch expanding maps `T_i(x) = ℓ_i·x mod 1` with
//! potentials `φ_i` induces transfer operators
//! `(L_i f)(x) = Σ_{T_i y = x} e^{φ_i(y)} f(y)`.  Functions live on a
//! uniform grid of `G` nodes with wraparound linear interpolation; the
//! `ℓ` preimages of a node land on the refined grid of size `ℓG`, where
//! both `φ` and `f` are interpolated.  Normalised quotients of operator
//! chains along an environment path converge to integrals against the
//! fiber (sample) measures `μ_ω`, with the cross-node sup-variation of
//! the quotient reported as a convergence residual.
//!
//! Everything here is exact about what it computes: a [`GridFunction`]
//! *is* its piecewise-linear interpolant, and fiber integrals converge
//! to integrals of that interpolant.  For functions that are smooth and
//! periodic the difference from the intended function is `O(G⁻²)`; a
//! node-sampled sawtooth `x ↦ x`, discontinuous on the circle, instead
//! acquires a wrap segment whose integral shifts by `1/(2G)` — compare
//! against [`GridFunction::mean`] (the exact interpolant integral), not
//! the unit-interval value.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dimension::MeasureSampler;
use crate::env::EnvPath;
use crate::rng::CounterStream;
use crate::space::CircleSpace;

/// Errors from transfer-operator construction and iteration.
#[derive(Clone, Debug, PartialEq)]
pub enum TransferError {
    /// Grid with fewer nodes than supported (functions need ≥ 2,
    /// families ≥ 256).
    BadGrid(usize),
    /// Branch count below 2 is not expanding.
    BadDegree(u32),
    /// A family needs at least one map.
    EmptyFamily,
    /// Degree and potential counts differ.
    PotentialCount { degrees: usize, potentials: usize },
    /// A function or potential lives on the wrong grid.
    GridMismatch { expected: usize, got: usize },
    /// Non-finite node value in a function, potential, or weight.
    NonFinite,
    /// Environment symbol does not index a map of the family.
    MapIndex { index: usize, maps: usize },
    /// Fiber chains need at least one past and one forward symbol.
    ZeroDepth,
    /// The environment window does not cover the required range.
    WindowNotCovered { from: i64, to: i64 },
    /// The forward window is too short for the requested operation.
    ForwardTooShort { fwd: usize, need: usize },
    /// CDF bin count outside `[64, G]`.
    BadBins(usize),
    /// Argument expected inside the unit interval.
    BadUnit(f64),
    /// Convergence tolerance must be positive and finite.
    BadTolerance(f64),
    /// Pushforward residuals need at least one test function.
    NoProbes,
    /// A CDF sampler needs at least one table.
    NoTables,
    /// Operator chain overflowed, degenerated, or its residual stopped
    /// improving.
    NonConvergence,
}

impl fmt::Display for TransferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferError::BadGrid(g) => write!(f, "unsupported grid size {g}"),
            TransferError::BadDegree(l) => write!(f, "map degree must be >= 2, got {l}"),
            TransferError::EmptyFamily => write!(f, "family needs at least one map"),
            TransferError::PotentialCount { degrees, potentials } => {
                write!(f, "{degrees} degrees but {potentials} potentials")
            }
            TransferError::GridMismatch { expected, got } => {
                write!(f, "expected grid size {expected}, got {got}")
            }
            TransferError::NonFinite => write!(f, "non-finite node value"),
            TransferError::MapIndex { index, maps } => {
                write!(f, "map index {index} out of range for {maps} maps")
            }
            TransferError::ZeroDepth => write!(f, "fiber chains need back >= 1 and fwd >= 1"),
            TransferError::WindowNotCovered { from, to } => {
                write!(f, "environment window does not cover [{from}, {to}]")
            }
            TransferError::ForwardTooShort { fwd, need } => {
                write!(f, "forward window {fwd} too short, need >= {need}")
            }
            TransferError::BadBins(b) => write!(f, "bin count {b} outside [64, grid]"),
            TransferError::BadUnit(u) => write!(f, "expected a unit-interval value, got {u}"),
            TransferError::BadTolerance(t) => write!(f, "tolerance must be positive, got {t}"),
            TransferError::NoProbes => write!(f, "need at least one test function"),
            TransferError::NoTables => write!(f, "need at least one CDF table"),
            TransferError::NonConvergence => write!(f, "operator chain failed to converge"),
        }
    }
}

/// A function on the circle stored at nodes `k/G` and evaluated by
/// wraparound linear interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps node values; rejects grids shorter than 2 and non-finite
    /// entries.
    pub fn from_values(values: Vec<f64>) -> Result<Self, TransferError> {
        if values.len() < 2 {
            return Err(TransferError::BadGrid(values.len()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(TransferError::NonFinite);
        }
        Ok(GridFunction { values })
    }

    /// Samples `f` at the nodes `k/grid`.
    pub fn from_fn(grid: usize, f: impl Fn(f64) -> f64) -> Result<Self, TransferError> {
        let values = (0..grid).map(|k| f(k as f64 / grid as f64)).collect();
        GridFunction::from_values(values)
    }

    pub fn constant(grid: usize, c: f64) -> Result<Self, TransferError> {
        GridFunction::from_values(vec![c; grid])
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// Evaluates the interpolant at any real `x` (taken mod 1).
    pub fn eval(&self, x: f64) -> f64 {
        let g = self.values.len();
        let t = x.rem_euclid(1.0) * g as f64;
        let k = (t as usize) % g;
        let frac = t - t.floor();
        if frac == 0.0 {
            self.values[k]
        } else {
            self.values[k] * (1.0 - frac) + self.values[(k + 1) % g] * frac
        }
    }

    /// Mean of the node values — exactly the integral of the
    /// piecewise-linear interpolant over the circle (cyclic trapezoid
    /// rule collapses to the node mean).
    pub fn mean(&self) -> f64 {
        let sum: f64 = self.values.iter().sum();
        sum / self.values.len() as f64
    }

    fn product(&self, other: &GridFunction) -> GridFunction {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        GridFunction { values }
    }

    fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }
}

/// Interpolates `values` (a `G`-grid) at the refined node `j/(ℓG)`.
///
/// The refined position in grid units is `j/ℓ`, computed in integer
/// arithmetic so nodes (`j % ℓ == 0`) reproduce stored values exactly.
fn refined_interp(values: &[f64], l: usize, j: usize) -> f64 {
    let base = j / l;
    let s = j % l;
    if s == 0 {
        values[base]
    } else {
        let frac = s as f64 / l as f64;
        values[base] * (1.0 - frac) + values[(base + 1) % values.len()] * frac
    }
}

/// A finite family of full-branch maps `x ↦ ℓ_i·x mod 1` with Lipschitz
/// potentials, discretised on a common grid.
///
/// The weights `e^{φ_i}` at all refined nodes are precomputed at
/// construction, so [`apply`](Self::apply) is a plain weighted sum with
/// a fixed per-node summation order (deterministic across runs and
/// worker counts).
#[derive(Clone, Debug)]
pub struct CircleMapFamily {
    degrees: Vec<u32>,
    potentials: Vec<GridFunction>,
    grid: usize,
    /// `weights[i][j] = exp(φ_i(j / (ℓ_i·G)))` on the refined grid.
    weights: Vec<Vec<f64>>,
}

impl CircleMapFamily {
    pub fn new(degrees: Vec<u32>, potentials: Vec<GridFunction>) -> Result<Self, TransferError> {
        if degrees.is_empty() {
            return Err(TransferError::EmptyFamily);
        }
        if degrees.len() != potentials.len() {
            return Err(TransferError::PotentialCount {
                degrees: degrees.len(),
                potentials: potentials.len(),
            });
        }
        if let Some(&l) = degrees.iter().find(|&&l| l < 2) {
            return Err(TransferError::BadDegree(l));
        }
        let grid = potentials[0].grid_size();
        if grid < 256 {
            return Err(TransferError::BadGrid(grid));
        }
        for p in &potentials {
            if p.grid_size() != grid {
                return Err(TransferError::GridMismatch { expected: grid, got: p.grid_size() });
            }
        }
        let mut weights = Vec::with_capacity(degrees.len());
        for (&l, phi) in degrees.iter().zip(&potentials) {
            let l = l as usize;
            let w: Vec<f64> = (0..grid * l)
                .map(|j| refined_interp(&phi.values, l, j).exp())
                .collect();
            if !w.iter().all(|v| v.is_finite()) {
                return Err(TransferError::NonFinite);
            }
            weights.push(w);
        }
        Ok(CircleMapFamily { degrees, potentials, grid, weights })
    }

    /// The conformal (maximal-entropy) family: `φ_i = −log ℓ_i`, whose
    /// fiber measures are all Lebesgue.
    pub fn conformal(degrees: &[u32], grid: usize) -> Result<Self, TransferError> {
        let potentials = degrees
            .iter()
            .map(|&l| GridFunction::constant(grid, -(f64::from(l)).ln()))
            .collect::<Result<Vec<_>, _>>()?;
        CircleMapFamily::new(degrees.to_vec(), potentials)
    }

    /// A single map of the given degree with potential
    /// `−log ℓ + amplitude·cos(2πx)` — the standard non-conformal test
    /// case.
    pub fn cosine_perturbed(
        degree: u32,
        amplitude: f64,
        grid: usize,
    ) -> Result<Self, TransferError> {
        let base = -(f64::from(degree)).ln();
        let phi = GridFunction::from_fn(grid, |x| base + amplitude * (TAU * x).cos())?;
        CircleMapFamily::new(vec![degree], vec![phi])
    }

    pub fn map_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn potential(&self, index: usize) -> Option<&GridFunction> {
        self.potentials.get(index)
    }

    /// One transfer step: `(L_i f)(k/G) = Σ_m e^{φ_i(y)} f(y)` over the
    /// preimages `y = (k + mG)/(ℓ_i G)` of node `k/G`.
    pub fn apply(&self, index: usize, f: &GridFunction) -> Result<GridFunction, TransferError> {
        if index >= self.degrees.len() {
            return Err(TransferError::MapIndex { index, maps: self.degrees.len() });
        }
        if f.grid_size() != self.grid {
            return Err(TransferError::GridMismatch { expected: self.grid, got: f.grid_size() });
        }
        let l = self.degrees[index] as usize;
        let w = &self.weights[index];
        let mut out = vec![0.0; self.grid];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for m in 0..l {
                let j = k + m * self.grid;
                acc += w[j] * refined_interp(&f.values, l, j);
            }
            *slot = acc;
        }
        Ok(GridFunction { values: out })
    }
}

/// A fiber-measure integral together with its convergence residual (the
/// sup-variation of the defining quotient across grid nodes; the limit
/// is node-independent, so the variation bounds the truncation error).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberValue {
    pub value: f64,
    pub residual: f64,
}

fn checked_symbols(
    family: &CircleMapFamily,
    env: &EnvPath,
    from: i64,
    to: i64,
) -> Result<Vec<usize>, TransferError> {
    if !env.covers(from, to) {
        return Err(TransferError::WindowNotCovered { from, to });
    }
    (from..=to)
        .map(|t| {
            let s = env
                .symbol(t)
                .map_err(|_| TransferError::WindowNotCovered { from, to })?
                as usize;
            if s >= family.map_count() {
                Err(TransferError::MapIndex { index: s, maps: family.map_count() })
            } else {
                Ok(s)
            }
        })
        .collect()
}

/// Rescales `den` (and `num`, when present) by `1/max|den|`, failing on
/// overflow or a vanished denominator.  The rescaling is shared, so the
/// quotient `num/den` is untouched.
fn renormalize(num: Option<&mut GridFunction>, den: &mut GridFunction) -> Result<(), TransferError> {
    let mut sup = 0.0f64;
    for &v in &den.values {
        if !v.is_finite() {
            return Err(TransferError::NonConvergence);
        }
        sup = sup.max(v.abs());
    }
    if !(sup > 0.0) {
        return Err(TransferError::NonConvergence);
    }
    let inv = 1.0 / sup;
    den.scale(inv);
    if let Some(num) = num {
        if !num.values.iter().all(|v| v.is_finite()) {
            return Err(TransferError::NonConvergence);
        }
        num.scale(inv);
    }
    Ok(())
}

/// Shared chain driver.  With `insert = Some((k, g))` the numerator is
/// multiplied pointwise by `g` after `k` forward applications, which by
/// the exact identity `L_ω^k(F·(g∘T_ω^k)) = g·L_ω^k(F)` computes
/// `μ(f·g∘T^k)` without ever forming the aliasing-prone composition
/// `g∘T^k` on the grid.
fn fiber_chain(
    family: &CircleMapFamily,
    env: &EnvPath,
    base: i64,
    back: usize,
    fwd: usize,
    f: &GridFunction,
    insert: Option<(usize, &GridFunction)>,
) -> Result<FiberValue, TransferError> {
    if back == 0 || fwd == 0 {
        return Err(TransferError::ZeroDepth);
    }
    let grid = family.grid_size();
    if f.grid_size() != grid {
        return Err(TransferError::GridMismatch { expected: grid, got: f.grid_size() });
    }
    if let Some((_, g)) = insert {
        if g.grid_size() != grid {
            return Err(TransferError::GridMismatch { expected: grid, got: g.grid_size() });
        }
    }
    let from = base - back as i64;
    let to = base + fwd as i64;
    let sym = checked_symbols(family, env, from, to)?;

    // Past chain: den = L_{ω_{base−1}} … L_{ω_{base−back}} 1.
    let mut den = GridFunction { values: vec![1.0; grid] };
    for &s in &sym[..back] {
        den = family.apply(s, &den)?;
        renormalize(None, &mut den)?;
    }

    // Forward chain on the pair (f·den, den); identical operations on
    // both keep f ≡ 1 at quotient exactly 1.
    let mut num = den.product(f);
    for (i, &s) in sym[back..].iter().enumerate() {
        if let Some((k, g)) = insert {
            if i == k {
                num = num.product(g);
            }
        }
        num = family.apply(s, &num)?;
        den = family.apply(s, &den)?;
        renormalize(Some(&mut num), &mut den)?;
    }

    let mut value = 0.0;
    let mut residual = 0.0;
    for k in 0..grid {
        if !(den.values[k] > 0.0) {
            return Err(TransferError::NonConvergence);
        }
        let q = num.values[k] / den.values[k];
        if !q.is_finite() {
            return Err(TransferError::NonConvergence);
        }
        if k == 0 {
            value = q;
        } else {
            residual = residual.max((q - value).abs());
        }
    }
    Ok(FiberValue { value, residual })
}

/// Integral of `f` against the fiber measure at environment position
/// `base`, approximated by the normalised quotient
/// `L_{ω_{base+fwd}} … L_{ω_base}(f·g) / L_{ω_{base+fwd}} … L_{ω_{base−back}}(1)`
/// with `g = L_{ω_{base−1}} … L_{ω_{base−back}}(1)`, evaluated at node
/// 0.  The window must cover symbols `base−back ..= base+fwd`; deepening
/// both sides at an equal rate converges geometrically.
pub fn fiber_measure_at(
    family: &CircleMapFamily,
    env: &EnvPath,
    base: i64,
    back: usize,
    fwd: usize,
    f: &GridFunction,
) -> Result<FiberValue, TransferError> {
    fiber_chain(family, env, base, back, fwd, f, None)
}

/// [`fiber_measure_at`] at the window origin `base = 0`.
pub fn fiber_measure(
    family: &CircleMapFamily,
    env: &EnvPath,
    back: usize,
    fwd: usize,
    f: &GridFunction,
) -> Result<FiberValue, TransferError> {
    fiber_chain(family, env, 0, back, fwd, f, None)
}

/// Doubles the window depth until the residual drops to `tol`, capped
/// by the environment window.  Fails with
/// [`TransferError::NonConvergence`] once five successive doublings
/// bring no improvement, or the window is exhausted short of `tol`.
pub fn fiber_measure_auto(
    family: &CircleMapFamily,
    env: &EnvPath,
    f: &GridFunction,
    tol: f64,
) -> Result<FiberValue, TransferError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(TransferError::BadTolerance(tol));
    }
    let (lo, hi) = env.range();
    if lo > -1 || hi < 1 {
        return Err(TransferError::WindowNotCovered { from: -1, to: 1 });
    }
    let max_back = (-lo) as usize;
    let max_fwd = hi as usize;
    let mut depth = 1usize;
    let mut best = f64::INFINITY;
    let mut stalled = 0u32;
    loop {
        let back = depth.min(max_back);
        let fwd = depth.min(max_fwd);
        let fv = fiber_measure_at(family, env, 0, back, fwd, f)?;
        if fv.residual <= tol {
            return Ok(fv);
        }
        if fv.residual < best {
            best = fv.residual;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 5 {
                return Err(TransferError::NonConvergence);
            }
        }
        if back == max_back && fwd == max_fwd {
            return Err(TransferError::NonConvergence);
        }
        depth *= 2;
    }
}

/// The smoothed indicator of `[0, t]` used for CDF evaluation: ramps of
/// width `1/grid` centred at both discontinuities (0 and `t`), so the
/// function is continuous on the circle and its interpolant integrates
/// to `t` up to `O(G⁻²)`.  Requires `1/grid ≤ t ≤ 1 − 1/grid`.
pub fn smoothed_step(grid: usize, t: f64) -> Result<GridFunction, TransferError> {
    if grid < 2 {
        return Err(TransferError::BadGrid(grid));
    }
    let w = 1.0 / grid as f64;
    if !t.is_finite() || t < w || t > 1.0 - w {
        return Err(TransferError::BadUnit(t));
    }
    GridFunction::from_fn(grid, |x| {
        if x < 0.5 * w {
            0.5 + x / w
        } else if x <= t - 0.5 * w {
            1.0
        } else if x < t + 0.5 * w {
            (t + 0.5 * w - x) / w
        } else if x <= 1.0 - 0.5 * w {
            0.0
        } else {
            (x - (1.0 - 0.5 * w)) / w
        }
    })
}

/// An evaluated fiber CDF `F(j/B) = μ_ω([0, j/B])`, nondecreasing with
/// `F(0) = 0` and `F(1) = 1` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct CdfTable {
    thresholds: Vec<f64>,
    values: Vec<f64>,
}

impl CdfTable {
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Inverse-CDF sampling: maps `u ∈ [0, 1]` to the circle by linear
    /// interpolation inside the first bin whose CDF value reaches `u`.
    pub fn sample(&self, u: f64) -> Result<f64, TransferError> {
        if !u.is_finite() || !(0.0..=1.0).contains(&u) {
            return Err(TransferError::BadUnit(u));
        }
        if u <= self.values[0] {
            return Ok(self.thresholds[0]);
        }
        let j = self.values.partition_point(|&v| v < u);
        let (f0, f1) = (self.values[j - 1], self.values[j]);
        let (t0, t1) = (self.thresholds[j - 1], self.thresholds[j]);
        if f1 > f0 {
            Ok(t0 + (u - f0) / (f1 - f0) * (t1 - t0))
        } else {
            Ok(t1)
        }
    }
}

/// Tabulates the fiber CDF at thresholds `j/bins` by integrating
/// [`smoothed_step`] functions; endpoints use the exact constants 0 and
/// 1.  Positivity of the quotient functional makes the raw values
/// nondecreasing up to rounding; decreases beyond `1e−9` are treated as
/// convergence failures, smaller ones are clamped away.
pub fn fiber_cdf(
    family: &CircleMapFamily,
    env: &EnvPath,
    back: usize,
    fwd: usize,
    bins: usize,
) -> Result<CdfTable, TransferError> {
    let grid = family.grid_size();
    if bins < 64 || bins > grid {
        return Err(TransferError::BadBins(bins));
    }
    let mut thresholds = Vec::with_capacity(bins + 1);
    let mut values = Vec::with_capacity(bins + 1);
    for j in 0..=bins {
        let t = j as f64 / bins as f64;
        let f = if j == 0 {
            GridFunction::constant(grid, 0.0)?
        } else if j == bins {
            GridFunction::constant(grid, 1.0)?
        } else {
            smoothed_step(grid, t)?
        };
        let v = fiber_measure(family, env, back, fwd, &f)?.value;
        thresholds.push(t);
        values.push(v);
    }
    let mut clamped = 0.0f64;
    for v in &mut values {
        if *v < clamped - 1e-9 {
            return Err(TransferError::NonConvergence);
        }
        clamped = clamped.max(v.clamp(0.0, 1.0));
        *v = clamped;
    }
    Ok(CdfTable { thresholds, values })
}

/// Inverse-CDF sampling over a fixed collection of fiber CDFs, one per
/// environment, for feeding the correlation-dimension estimators: the
/// environment seed picks a table, the point seed the uniform variate.
#[derive(Clone, Debug)]
pub struct FiberCdfSampler {
    tables: Vec<CdfTable>,
}

impl FiberCdfSampler {
    pub fn new(tables: Vec<CdfTable>) -> Result<Self, TransferError> {
        if tables.is_empty() {
            return Err(TransferError::NoTables);
        }
        Ok(FiberCdfSampler { tables })
    }
}

impl MeasureSampler for FiberCdfSampler {
    type Point = f64;

    fn draw(&self, env_seed: u64, point_seed: u64) -> f64 {
        let table = &self.tables[(env_seed % self.tables.len() as u64) as usize];
        let u = CounterStream::new(point_seed).unit_f64_at(0);
        table.sample(u).expect("unit variate is in [0, 1)")
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        CircleSpace::distance_f64(*a, *b)
    }
}

/// Smooth periodic probes (low trigonometric harmonics) for the
/// equivariance and mixing diagnostics.  Smoothness matters: node
/// sampling of `f∘T` aliases discontinuous or high-frequency functions,
/// while harmonics below `G/2` cancel exactly under it.
pub fn standard_test_functions(grid: usize) -> Result<Vec<GridFunction>, TransferError> {
    Ok(vec![
        GridFunction::from_fn(grid, |x| (TAU * x).cos())?,
        GridFunction::from_fn(grid, |x| (TAU * x).sin())?,
        GridFunction::from_fn(grid, |x| (2.0 * TAU * x).cos())?,
        GridFunction::from_fn(grid, |x| (3.0 * TAU * x).sin())?,
    ])
}

/// Equivariance defect `max_f |μ_ω(f∘T_{ω_0}) − μ_{θω}(f)|` over the
/// test functions.  `f∘T_{ω_0}` is sampled exactly: `T(k/G)` is again a
/// node, namely `(ℓ_0·k mod G)/G`.  Both sides use the same total
/// symbol window `[−back, fwd]`, so `fwd ≥ 2` is required.
pub fn pushforward_residual(
    family: &CircleMapFamily,
    env: &EnvPath,
    back: usize,
    fwd: usize,
    test_functions: &[GridFunction],
) -> Result<f64, TransferError> {
    if test_functions.is_empty() {
        return Err(TransferError::NoProbes);
    }
    if fwd < 2 {
        return Err(TransferError::ForwardTooShort { fwd, need: 2 });
    }
    let grid = family.grid_size();
    let sym0 = checked_symbols(family, env, 0, 0)?[0];
    let l0 = family.degrees[sym0] as usize;
    let mut worst = 0.0f64;
    for f in test_functions {
        if f.grid_size() != grid {
            return Err(TransferError::GridMismatch { expected: grid, got: f.grid_size() });
        }
        let composed =
            GridFunction { values: (0..grid).map(|k| f.values[(l0 * k) % grid]).collect() };
        let lhs = fiber_chain(family, env, 0, back, fwd, &composed, None)?.value;
        let rhs = fiber_chain(family, env, 1, back + 1, fwd - 1, f, None)?.value;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Fiber correlation decay `|μ_ω(f·g∘T_ω^k) − μ_ω(f)·μ_{θ^kω}(g)|` for
/// `k = 0..=k_max`.  The composition is transported through the chain
/// in dual form (see [`fiber_chain`]); the product term reuses the same
/// symbol window, so `k_max < fwd` is required.
pub fn fiber_mixing_curve(
    family: &CircleMapFamily,
    env: &EnvPath,
    back: usize,
    fwd: usize,
    f: &GridFunction,
    g: &GridFunction,
    k_max: usize,
) -> Result<Vec<f64>, TransferError> {
    if k_max >= fwd {
        return Err(TransferError::ForwardTooShort { fwd, need: k_max + 1 });
    }
    let mu_f = fiber_chain(family, env, 0, back, fwd, f, None)?.value;
    let mut curve = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let joint = fiber_chain(family, env, 0, back, fwd, f, Some((k, g)))?.value;
        let mu_g = fiber_chain(family, env, k as i64, back + k, fwd - k, g, None)?.value;
        curve.push((joint - mu_f * mu_g).abs());
    }
    Ok(curve)
}

/// Least-squares slope of `ln(max(value, floor))` against the index —
/// the decay-rate summary used for mixing curves.  `None` for fewer
/// than two points or a nonpositive floor.
pub fn fitted_log_slope(values: &[f64], floor: f64) -> Option<f64> {
    if values.len() < 2 || !(floor > 0.0) {
        return None;
    }
    let n = values.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (k, &v) in values.iter().enumerate() {
        let x = k as f64;
        let y = v.max(floor).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}
