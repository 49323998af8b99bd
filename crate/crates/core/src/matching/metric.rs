//! Exact minimum circle distance over admissible index pairs.
//!
//! The unconstrained minimum is found by sorting both orbits together:
//! any minimizing pair has no third point strictly inside the arc that
//! realizes its distance (such a point would form a strictly closer
//! cross pair with one endpoint), so scanning adjacent cross-orbit
//! neighbours in circular order suffices.  A second pass recovers the
//! lexicographically smallest witness by probing `x_i ± v` for each `i`
//! in order — duplicates mean not every minimizing pair is adjacent, so
//! the value pass alone cannot name the right one.
//!
//! Band and Diagonal enumerate their O(nα) pairs directly; OffBand
//! walks outward from each `x_i` through the sorted `ys`, skipping the
//! banned index window, and stops a side once its arc length can no
//! longer improve the running minimum.

use alloc::vec::Vec;

use super::MatchConstraint;
use crate::space::CirclePoint;

/// Minimum distance and lexicographically smallest witness.  The caller
/// has already rejected empty windows, mismatched lengths and empty
/// constraints, so a minimizer always exists.
pub(super) fn min_dist(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
    constraint: MatchConstraint,
) -> (CirclePoint, (usize, usize)) {
    let n = xs.len();
    match constraint {
        MatchConstraint::All => windowed_min(xs, ys, n, 0),
        MatchConstraint::FarThirds => {
            windowed_min(xs, ys, n.div_ceil(3), (2 * n).div_ceil(3))
        }
        MatchConstraint::Diagonal => diagonal_min(xs, ys),
        // A band covering every pair is the unconstrained problem.
        MatchConstraint::Band(alpha) if alpha >= n as u64 - 1 => {
            windowed_min(xs, ys, n, 0)
        }
        MatchConstraint::Band(alpha) => band_min(xs, ys, alpha as usize),
        MatchConstraint::OffBand(alpha) => offband_min(xs, ys, alpha as usize),
    }
}

/// Unconstrained minimum between `xs[..x_hi]` and `ys[y_lo..]`, with
/// absolute indices in the witness.  `All` is `x_hi = n`, `y_lo = 0`.
fn windowed_min(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
    x_hi: usize,
    y_lo: usize,
) -> (CirclePoint, (usize, usize)) {
    // Value pass: any two equal points of opposite orbits end up with a
    // cross-orbit adjacency somewhere inside their tied run, so ties
    // need no special order here.
    let mut merged: Vec<(&CirclePoint, bool)> = Vec::new();
    merged.extend(xs[..x_hi].iter().map(|p| (p, false)));
    merged.extend(ys[y_lo..].iter().map(|p| (p, true)));
    merged.sort_by(|a, b| a.0.cmp(b.0));
    let len = merged.len();
    let mut v: Option<CirclePoint> = None;
    for k in 0..len {
        let (p, side) = merged[k];
        let (q, other) = merged[(k + 1) % len];
        if side == other {
            continue;
        }
        let d = p.circle_distance(q);
        if v.as_ref().map_or(true, |b| d < *b) {
            v = Some(d);
        }
    }
    let v = v.expect("both windows are nonempty");

    // Witness pass: the points at distance exactly `v` from `x_i` are
    // `x_i ± v`; the sort is by (value, index), so the head of an equal
    // run carries the smallest admissible `j`.
    let mut order: Vec<u32> = (y_lo as u32..ys.len() as u32).collect();
    order.sort_by(|&a, &b| {
        ys[a as usize].cmp(&ys[b as usize]).then(a.cmp(&b))
    });
    for (i, x) in xs[..x_hi].iter().enumerate() {
        let mut best_j: Option<usize> = None;
        probe(&order, ys, &x.add_mod1(&v), &mut best_j);
        if !v.is_zero() {
            probe(&order, ys, &x.sub_mod1(&v), &mut best_j);
        }
        if let Some(j) = best_j {
            return (v, (i, j));
        }
    }
    unreachable!("the minimum is attained by construction")
}

/// Records the smallest index in `order` whose point equals `target`.
fn probe(
    order: &[u32],
    ys: &[CirclePoint],
    target: &CirclePoint,
    best_j: &mut Option<usize>,
) {
    let pos = order.partition_point(|&k| ys[k as usize] < *target);
    if let Some(&k) = order.get(pos) {
        let j = k as usize;
        if ys[j] == *target && best_j.map_or(true, |b| j < b) {
            *best_j = Some(j);
        }
    }
}

fn diagonal_min(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
) -> (CirclePoint, (usize, usize)) {
    let mut best: Option<(CirclePoint, usize)> = None;
    for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
        let d = x.circle_distance(y);
        if best.as_ref().map_or(true, |(b, _)| d < *b) {
            best = Some((d, i));
        }
    }
    let (d, i) = best.expect("window is nonempty");
    (d, (i, i))
}

/// Direct enumeration of the O(nα) pairs with `|i − j| ≤ alpha`; the
/// strict-less update keeps the lexicographically first minimizer.
fn band_min(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
    alpha: usize,
) -> (CirclePoint, (usize, usize)) {
    let n = xs.len();
    let mut best: Option<(CirclePoint, usize, usize)> = None;
    for i in 0..n {
        for j in i.saturating_sub(alpha)..=(i + alpha).min(n - 1) {
            let d = xs[i].circle_distance(&ys[j]);
            if best.as_ref().map_or(true, |(b, _, _)| d < *b) {
                best = Some((d, i, j));
            }
        }
    }
    let (d, i, j) = best.expect("alpha < n - 1 leaves admissible pairs");
    (d, (i, j))
}

/// Minimum over pairs with `|i − j| > alpha`, one `x_i` at a time.
///
/// Walking the sorted `ys` outward from `x_i`'s insertion point visits
/// each side in nondecreasing arc length, so a side is exhausted the
/// moment its arc exceeds the running minimum: every later point on
/// that side either lies further along the same arc or is closer the
/// other way round, and the opposite walk sees it at that smaller arc.
/// The walk only pauses — without stopping — while skipping banned
/// indices, which cluster near `i` and cost O(α) extra steps at worst.
fn offband_min(
    xs: &[CirclePoint],
    ys: &[CirclePoint],
    alpha: usize,
) -> (CirclePoint, (usize, usize)) {
    let n = xs.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        ys[a as usize].cmp(&ys[b as usize]).then(a.cmp(&b))
    });
    let mut global: Option<(CirclePoint, usize, usize)> = None;
    for (i, x) in xs.iter().enumerate() {
        let mut local: Option<(CirclePoint, usize)> = None;
        let pos = order.partition_point(|&k| ys[k as usize] < *x);
        // Forward side: ys in ascending circular order from x_i, ties in
        // ascending j; backward side symmetric with ties descending, so
        // both tie directions funnel through the same min-j update.
        for backward in [false, true] {
            let mut at = (if backward { pos + n - 1 } else { pos }) % n;
            for _ in 0..n {
                let j = order[at] as usize;
                let arc = if backward {
                    x.sub_mod1(&ys[j])
                } else {
                    ys[j].sub_mod1(x)
                };
                if let Some((b, _)) = &local {
                    if arc > *b {
                        break;
                    }
                }
                if i.abs_diff(j) > alpha {
                    match &mut local {
                        Some((b, bj)) if arc < *b => {
                            *b = arc;
                            *bj = j;
                        }
                        Some((b, bj)) if arc == *b && j < *bj => *bj = j,
                        Some(_) => {}
                        None => local = Some((arc, j)),
                    }
                }
                at = (if backward { at + n - 1 } else { at + 1 }) % n;
            }
        }
        // A middle index can have both band complements empty (large α);
        // the constraint itself stays nonempty via i = 0.
        let Some((d, j)) = local else { continue };
        if global.as_ref().map_or(true, |(g, _, _)| d < *g) {
            global = Some((d, i, j));
        }
    }
    let (d, i, j) = global.expect("alpha < n - 1 leaves admissible pairs");
    (d, (i, j))
}
