//! Per-diagonal common-extension scans for the Diagonal and Band
//! statistics.
//!
//! On a fixed diagonal `j − i = d`, consecutive extension lengths obey
//! `ext(i+1) ≥ ext(i) − 1` (drop the first symbol of a common block), so
//! one pointer never moves backwards by more than a step and a whole
//! diagonal costs O(n + max extension).  Band(α) is 2α+1 diagonals.

use super::SymCandidate;

/// Best candidate over all pairs with `|i − j| ≤ alpha`, or `None` when
/// nothing matches even one symbol.  Diagonal is `alpha = 0`.
pub(super) fn band_best(
    x: &[u8],
    y: &[u8],
    n: usize,
    alpha: usize,
) -> Option<SymCandidate> {
    let mut best: Option<SymCandidate> = None;
    let a = alpha.min(n - 1) as i64;
    for d in -a..=a {
        diagonal_scan(x, y, n, d, &mut best);
    }
    best.filter(|c| c.m > 0)
}

/// Scans the diagonal `j = i + d`, folding each pair's extension into
/// `best` under the (length, certified, lexicographic) order.
fn diagonal_scan(
    x: &[u8],
    y: &[u8],
    n: usize,
    d: i64,
    best: &mut Option<SymCandidate>,
) {
    let i_lo = if d < 0 { (-d) as usize } else { 0 };
    let i_hi = if d > 0 { n - d as usize } else { n };
    let mut k = 0usize;
    for i in i_lo..i_hi {
        let j = (i as i64 + d) as usize;
        // Inherit what the previous pair already proved: ext ≥ k − 1.
        k = k.saturating_sub(1).max(0);
        while i + k < x.len() && j + k < y.len() && x[i + k] == y[j + k] {
            k += 1;
        }
        if k == 0 {
            continue;
        }
        let cand = SymCandidate {
            m: k as u64,
            truncated: i + k == x.len() || j + k == y.len(),
            i,
            j,
        };
        if best.map_or(true, |b| cand.better_than(&b)) {
            *best = Some(cand);
        }
    }
}
