//! Correlation-dimension estimation for random measures.
//!
//! The correlation sum `C(r)` — the fraction of ordered sample pairs at
//! distance ≤ r — scales like `r^{D₂}` for measures with correlation
//! dimension `D₂`, so a log–log slope over a geometric radius grid
//! estimates the dimension.  Two averaging orders exist for a random
//! measure: the *annealed* curve pools points drawn with an independent
//! environment each, while the *quenched* curve fixes an environment,
//! computes its own correlation sum, and averages the sums afterwards.
//!
//! For Bernoulli models the corresponding Rényi entropies have closed
//! forms, and [`renyi_exact_annealed`]/[`renyi_exact_quenched`] recover
//! them by exact enumeration of all `2^k` cylinders — an oracle the
//! empirical plug-in estimators ([`renyi_empirical_annealed`],
//! [`renyi_empirical_quenched`]) and the sampling curves are judged
//! against.  Plug-in estimators carry the usual positive bias at small
//! samples; acceptance-grade checks use the exact enumerations.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bernoulli::{sample_environment, sample_fiber_sequence, BernoulliParams};
use crate::rng::{stream_seed, CounterStream};
use crate::space::{CircleSpace, SymbolicSpace};

/// Errors from dimension estimation.
#[derive(Clone, Debug, PartialEq)]
pub enum DimensionError {
    /// Radius grid with nonpositive or non-finite `r_max`.
    BadRadius(f64),
    /// Decay ratio outside `(0, 1)`.
    BadRatio(f64),
    /// Fewer than 4 radii cannot support a slope fit.
    TooFewRadii(usize),
    /// Correlation sums need at least `need` points.
    TooFewPoints { got: usize, need: usize },
    /// Quenched curves need at least 10 environments.
    TooFewEnvironments(usize),
    /// Exact cylinder enumeration is capped at `k ≤ 24`.
    KTooLarge(u32),
    /// Cylinder depth must be at least 1.
    ZeroDepth,
    /// No word in the sample is long enough to contain a `k`-gram.
    EmptyWordSample,
    /// Fewer than 4 curve points with `C > 0` inside the fit range.
    FitUnderdetermined { usable: usize },
    /// Fit range with `r_lo > r_hi` or non-finite endpoints.
    BadFitRange { r_lo: f64, r_hi: f64 },
}

impl fmt::Display for DimensionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionError::BadRadius(r) => write!(f, "r_max must be positive, got {r}"),
            DimensionError::BadRatio(q) => write!(f, "ratio must lie in (0, 1), got {q}"),
            DimensionError::TooFewRadii(c) => write!(f, "need >= 4 radii, got {c}"),
            DimensionError::TooFewPoints { got, need } => {
                write!(f, "need >= {need} sample points, got {got}")
            }
            DimensionError::TooFewEnvironments(k) => {
                write!(f, "need >= 10 environments, got {k}")
            }
            DimensionError::KTooLarge(k) => {
                write!(f, "exact enumeration is capped at k <= 24, got {k}")
            }
            DimensionError::ZeroDepth => write!(f, "cylinder depth must be >= 1"),
            DimensionError::EmptyWordSample => {
                write!(f, "no word in the sample contains a k-gram")
            }
            DimensionError::FitUnderdetermined { usable } => {
                write!(f, "only {usable} usable points in the fit range, need >= 4")
            }
            DimensionError::BadFitRange { r_lo, r_hi } => {
                write!(f, "invalid fit range [{r_lo}, {r_hi}]")
            }
        }
    }
}

impl core::error::Error for DimensionError {}

/// A geometric radius grid `r_max · ratio^k`, `k = 0..count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusGrid {
    r_max: f64,
    ratio: f64,
    count: usize,
}

impl RadiusGrid {
    pub fn new(r_max: f64, ratio: f64, count: usize) -> Result<Self, DimensionError> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(DimensionError::BadRadius(r_max));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(DimensionError::BadRatio(ratio));
        }
        if count < 4 {
            return Err(DimensionError::TooFewRadii(count));
        }
        Ok(RadiusGrid { r_max, ratio, count })
    }

    /// Radii in increasing order (the fit works in `log r`, where an
    /// ascending grid reads naturally).
    pub fn radii(&self) -> Vec<f64> {
        let mut rs: Vec<f64> = (0..self.count)
            .map(|k| self.r_max * self.ratio.powi(k as i32))
            .collect();
        rs.reverse();
        rs
    }
}

/// Which averaging order produced a correlation curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Annealed,
    Quenched,
}

/// A correlation curve `r ↦ C(r)` over a radius grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationCurve {
    pub kind: CurveKind,
    /// `(r, C(r))` pairs with `r` strictly increasing.
    pub points: Vec<(f64, f64)>,
    /// Environments averaged over (pooled curves count one per point).
    pub environments: usize,
    /// Points drawn per environment.
    pub points_per_env: usize,
}

/// Least-squares slope of `log C` against `log r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    /// Intercept in the natural-log domain.
    pub intercept: f64,
    pub fit_range: (f64, f64),
    /// Root-mean-square residual of the fit, in nats.
    pub residual: f64,
}

/// Fraction of ordered pairs `(a, b)`, `a ≠ b`, with `d(a, b) ≤ r`.
pub fn correlation_sum<P>(
    points: &[P],
    dist: impl Fn(&P, &P) -> f64,
    r: f64,
) -> Result<f64, DimensionError> {
    let sums = correlation_sums(points, dist, &[r])?;
    Ok(sums[0])
}

/// Correlation sums for several radii in one pass over the pairs.
///
/// `radii` must be ascending.  Each unordered pair is measured once and
/// bucketed into the smallest radius that contains it; a suffix sum then
/// yields every `C(r)`.  The ordered-pair convention of the definition
/// cancels in the fraction.
pub fn correlation_sums<P>(
    points: &[P],
    dist: impl Fn(&P, &P) -> f64,
    radii: &[f64],
) -> Result<Vec<f64>, DimensionError> {
    let m = points.len();
    if m < 2 {
        return Err(DimensionError::TooFewPoints { got: m, need: 2 });
    }
    let mut hist = alloc::vec![0u64; radii.len() + 1];
    for a in 0..m {
        for b in (a + 1)..m {
            let d = dist(&points[a], &points[b]);
            let idx = radii.partition_point(|&r| r < d);
            hist[idx] += 1;
        }
    }
    // hist[idx] counts pairs with radii[idx−1] < d ≤ radii[idx]; pairs in
    // the overflow bucket lie beyond every radius.
    let total = (m * (m - 1) / 2) as f64;
    let mut cum = 0u64;
    let mut out = Vec::with_capacity(radii.len());
    for &h in &hist[..radii.len()] {
        cum += h;
        out.push(cum as f64 / total);
    }
    Ok(out)
}

/// A random measure that can be sampled: an environment seed selects the
/// fiber measure, a point seed individuates the draw from it.
pub trait MeasureSampler {
    type Point;
    fn draw(&self, env_seed: u64, point_seed: u64) -> Self::Point;
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;
}

/// Annealed curve: `m` points, each drawn with its own independent
/// environment, pooled into a single correlation sum per radius.
pub fn annealed_curve<S: MeasureSampler>(
    sampler: &S,
    m: usize,
    grid: &RadiusGrid,
    seed: u64,
) -> Result<CorrelationCurve, DimensionError> {
    if m < 100 {
        return Err(DimensionError::TooFewPoints { got: m, need: 100 });
    }
    let points: Vec<S::Point> = (0..m as u64)
        .map(|a| {
            sampler.draw(
                stream_seed(seed, a, "an-env"),
                stream_seed(seed, a, "an-point"),
            )
        })
        .collect();
    let radii = grid.radii();
    let sums = correlation_sums(&points, |a, b| sampler.distance(a, b), &radii)?;
    Ok(CorrelationCurve {
        kind: CurveKind::Annealed,
        points: radii.into_iter().zip(sums).collect(),
        environments: m,
        points_per_env: 1,
    })
}

/// Quenched curve: `k` environments, `m` points each; per-environment
/// correlation sums are averaged — the other order of limits.
pub fn quenched_curve<S: MeasureSampler>(
    sampler: &S,
    k: usize,
    m: usize,
    grid: &RadiusGrid,
    seed: u64,
) -> Result<CorrelationCurve, DimensionError> {
    if k < 10 {
        return Err(DimensionError::TooFewEnvironments(k));
    }
    if m < 100 {
        return Err(DimensionError::TooFewPoints { got: m, need: 100 });
    }
    let radii = grid.radii();
    let mut avg = alloc::vec![0.0f64; radii.len()];
    for env in 0..k as u64 {
        let env_seed = stream_seed(seed, env, "qu-env");
        let points: Vec<S::Point> = (0..m as u64)
            .map(|a| sampler.draw(env_seed, stream_seed(env_seed, a, "qu-point")))
            .collect();
        let sums = correlation_sums(&points, |a, b| sampler.distance(a, b), &radii)?;
        for (acc, s) in avg.iter_mut().zip(sums) {
            *acc += s;
        }
    }
    for acc in avg.iter_mut() {
        *acc /= k as f64;
    }
    Ok(CorrelationCurve {
        kind: CurveKind::Quenched,
        points: radii.into_iter().zip(avg).collect(),
        environments: k,
        points_per_env: m,
    })
}

/// Bernoulli fiber words of a fixed depth under the symbolic `2^{-k}`
/// metric; the canonical sampler for both curve kinds.
#[derive(Clone, Copy, Debug)]
pub struct BernoulliWordSampler {
    params: BernoulliParams,
    depth: usize,
    space: SymbolicSpace,
}

impl BernoulliWordSampler {
    pub fn new(params: BernoulliParams, depth: usize) -> Result<Self, DimensionError> {
        if depth == 0 {
            return Err(DimensionError::ZeroDepth);
        }
        Ok(BernoulliWordSampler { params, depth, space: SymbolicSpace::binary() })
    }
}

impl MeasureSampler for BernoulliWordSampler {
    type Point = Vec<u8>;

    fn draw(&self, env_seed: u64, point_seed: u64) -> Vec<u8> {
        let env = sample_environment(env_seed, self.depth)
            .expect("depth >= 1 checked at construction");
        sample_fiber_sequence(self.params, &env, point_seed, self.depth)
            .expect("environment covers the word by construction")
    }

    fn distance(&self, a: &Vec<u8>, b: &Vec<u8>) -> f64 {
        self.space.distance(a, b)
    }
}

/// Uniform (Lebesgue) points on the circle; the environment seed is
/// unused because the measure is not random.
#[derive(Clone, Copy, Debug, Default)]
pub struct LebesgueCircleSampler;

impl MeasureSampler for LebesgueCircleSampler {
    type Point = f64;

    fn draw(&self, _env_seed: u64, point_seed: u64) -> f64 {
        CounterStream::new(point_seed).unit_f64_at(0)
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        CircleSpace::distance_f64(*a, *b)
    }
}

/// A single atom: every draw is the same point.  `C(r) = 1` for all r,
/// the degenerate dimension-zero fixture.
#[derive(Clone, Copy, Debug)]
pub struct AtomSampler(pub f64);

impl MeasureSampler for AtomSampler {
    type Point = f64;

    fn draw(&self, _env_seed: u64, _point_seed: u64) -> f64 {
        self.0
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        CircleSpace::distance_f64(*a, *b)
    }
}

fn check_k(k: u32) -> Result<(), DimensionError> {
    if k == 0 {
        return Err(DimensionError::ZeroDepth);
    }
    if k > 24 {
        return Err(DimensionError::KTooLarge(k));
    }
    Ok(())
}

/// Exact annealed Rényi entropy at depth `k`: enumerates all `2^k`
/// cylinders of the averaged measure and returns `−(1/k)·log₂ Σ μ(C)²`.
///
/// The cylinder weight depends only on the zero count, so the squared
/// weights come from precomputed power tables and each cylinder costs a
/// popcount; the sum still walks every cylinder, which is the point of
/// an enumeration oracle.
pub fn renyi_exact_annealed(params: BernoulliParams, k: u32) -> Result<f64, DimensionError> {
    check_k(k)?;
    let q0 = (params.p_a() + params.p_b()) / 2.0;
    Ok(cylinder_sum_entropy(q0 * q0, (1.0 - q0) * (1.0 - q0), k))
}

/// Exact quenched Rényi entropy at depth `k`.
///
/// For each cylinder the average of `μ_ω(C)²` over all `2^k` environment
/// words factorizes per symbol into `(p_A(c)² + p_B(c)²)/2`, so the
/// enumeration runs over cylinders with the environment average exact.
pub fn renyi_exact_quenched(params: BernoulliParams, k: u32) -> Result<f64, DimensionError> {
    check_k(k)?;
    let (pa, pb) = (params.p_a(), params.p_b());
    let a0 = (pa * pa + pb * pb) / 2.0;
    let a1 = ((1.0 - pa) * (1.0 - pa) + (1.0 - pb) * (1.0 - pb)) / 2.0;
    Ok(cylinder_sum_entropy(a0, a1, k))
}

/// `−(1/k)·log₂ Σ_w w0^{#0(w)} · w1^{#1(w)}` over all `2^k` words.
fn cylinder_sum_entropy(w0: f64, w1: f64, k: u32) -> f64 {
    let pow0: Vec<f64> = (0..=k).map(|z| w0.powi(z as i32)).collect();
    let pow1: Vec<f64> = (0..=k).map(|z| w1.powi(z as i32)).collect();
    let mut sum = 0.0f64;
    for word in 0u32..(1u32 << k) {
        let ones = word.count_ones();
        sum += pow0[(k - ones) as usize] * pow1[ones as usize];
    }
    -sum.log2() / f64::from(k)
}

/// Pooled plug-in entropy: all `k`-grams of all words feed one empirical
/// distribution, `−(1/k)·log₂ Σ μ̂(C)²`.
pub fn renyi_empirical_annealed<W: AsRef<[u8]>>(
    words: &[W],
    k: u32,
) -> Result<f64, DimensionError> {
    check_k(k)?;
    let mut counts: BTreeMap<&[u8], u64> = BTreeMap::new();
    let mut total = 0u64;
    for w in words {
        for gram in w.as_ref().windows(k as usize) {
            *counts.entry(gram).or_insert(0) += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(DimensionError::EmptyWordSample);
    }
    let norm = total as f64;
    let sum: f64 = counts.values().map(|&c| (c as f64 / norm).powi(2)).sum();
    Ok(-sum.log2() / f64::from(k))
}

/// Quenched plug-in entropy: each word gets its own empirical k-gram
/// distribution; the squared sums are averaged *before* the log.
pub fn renyi_empirical_quenched<W: AsRef<[u8]>>(
    words: &[W],
    k: u32,
) -> Result<f64, DimensionError> {
    check_k(k)?;
    let mut avg = 0.0f64;
    let mut used = 0usize;
    for w in words {
        let mut counts: BTreeMap<&[u8], u64> = BTreeMap::new();
        let mut total = 0u64;
        for gram in w.as_ref().windows(k as usize) {
            *counts.entry(gram).or_insert(0) += 1;
            total += 1;
        }
        if total == 0 {
            continue;
        }
        let norm = total as f64;
        avg += counts.values().map(|&c| (c as f64 / norm).powi(2)).sum::<f64>();
        used += 1;
    }
    if used == 0 {
        return Err(DimensionError::EmptyWordSample);
    }
    Ok(-(avg / used as f64).log2() / f64::from(k))
}

/// Default fit window: the middle half of the curve's radii.
pub fn default_fit_range(curve: &CorrelationCurve) -> (f64, f64) {
    let n = curve.points.len();
    (curve.points[n / 4].0, curve.points[(3 * n) / 4 - 1].0)
}

/// Least squares of `ln C` on `ln r` over points inside `fit_range` with
/// `C > 0`; refuses ranges with fewer than 4 survivors.
pub fn fit_dimension(
    curve: &CorrelationCurve,
    fit_range: (f64, f64),
) -> Result<SlopeFit, DimensionError> {
    let (r_lo, r_hi) = fit_range;
    if !(r_lo.is_finite() && r_hi.is_finite()) || r_lo > r_hi {
        return Err(DimensionError::BadFitRange { r_lo, r_hi });
    }
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|&&(r, c)| r >= r_lo && r <= r_hi && c > 0.0)
        .map(|&(r, c)| (r.ln(), c.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(DimensionError::FitUnderdetermined { usable: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    Ok(SlopeFit { slope, intercept, fit_range, residual: (ss / n).sqrt() })
}

/// Per-step slopes `Δln C / Δln r` between consecutive positive-`C`
/// points, located at the geometric midpoint radius.  Divergence between
/// the small-r and large-r ends is how a liminf/limsup gap shows up.
pub fn local_slopes(curve: &CorrelationCurve) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|&&(_, c)| c > 0.0)
        .copied()
        .collect();
    pts.windows(2)
        .map(|w| {
            let (r0, c0) = w[0];
            let (r1, c1) = w[1];
            ((r0 * r1).sqrt(), (c1.ln() - c0.ln()) / (r1.ln() - r0.ln()))
        })
        .collect()
}
