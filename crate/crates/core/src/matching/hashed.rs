//! Rolling-hash search paths: the off-band statistic, and canonical
//! witness selection for the automaton-based searches.
//!
//! Match lengths are tiny (O(log n)) while the pair space is huge, so
//! binary search on the length m with an m-gram index answers "is there
//! an admissible pair matching m symbols?" in O(n log n) per probe.  Two
//! independent 61-bit hashes keep false positives out of the search path
//! in practice, and every hash hit is confirmed by direct comparison
//! before it can influence a result, so answers are exact regardless.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{MatchConstraint, SymCandidate};

/// 2^61 − 1, a Mersenne prime; u128 products reduce with one division.
const MOD: u64 = (1 << 61) - 1;
const BASE1: u64 = 1_000_000_007;
const BASE2: u64 = 998_244_353;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MOD {
        s - MOD
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MOD - b
    }
}

/// Prefix hashes of one sequence under both bases; `h[i]` covers `s[..i]`.
struct Prefix {
    h1: Vec<u64>,
    h2: Vec<u64>,
}

impl Prefix {
    fn new(s: &[u8]) -> Self {
        let mut h1 = Vec::with_capacity(s.len() + 1);
        let mut h2 = Vec::with_capacity(s.len() + 1);
        h1.push(0);
        h2.push(0);
        for &c in s {
            // +1 keeps the zero symbol from hashing like an empty slot.
            let v = u64::from(c) + 1;
            h1.push(addmod(mulmod(*h1.last().expect("nonempty"), BASE1), v));
            h2.push(addmod(mulmod(*h2.last().expect("nonempty"), BASE2), v));
        }
        Prefix { h1, h2 }
    }
}

/// Shared context: prefix hashes of both sequences and base powers long
/// enough for any gram either can host.
struct HashContext {
    x: Prefix,
    y: Prefix,
    pow1: Vec<u64>,
    pow2: Vec<u64>,
}

impl HashContext {
    fn new(x: &[u8], y: &[u8]) -> Self {
        let max_len = x.len().max(y.len());
        let mut pow1 = Vec::with_capacity(max_len + 1);
        let mut pow2 = Vec::with_capacity(max_len + 1);
        pow1.push(1);
        pow2.push(1);
        for _ in 0..max_len {
            pow1.push(mulmod(*pow1.last().expect("nonempty"), BASE1));
            pow2.push(mulmod(*pow2.last().expect("nonempty"), BASE2));
        }
        HashContext { x: Prefix::new(x), y: Prefix::new(y), pow1, pow2 }
    }

    fn gram(&self, p: &Prefix, at: usize, m: usize) -> (u64, u64) {
        (
            submod(p.h1[at + m], mulmod(p.h1[at], self.pow1[m])),
            submod(p.h2[at + m], mulmod(p.h2[at], self.pow2[m])),
        )
    }

    fn gram_x(&self, i: usize, m: usize) -> (u64, u64) {
        self.gram(&self.x, i, m)
    }

    fn gram_y(&self, j: usize, m: usize) -> (u64, u64) {
        self.gram(&self.y, j, m)
    }
}

/// Best off-band match: binary search on the length with per-length
/// feasibility checks, then canonical witness selection at the optimum.
pub(super) fn offband_best(
    x: &[u8],
    y: &[u8],
    n: usize,
    alpha: usize,
) -> Option<SymCandidate> {
    let ctx = HashContext::new(x, y);
    let max_m = x.len().min(y.len());
    if feasible(&ctx, x, y, n, alpha, 1).is_none() {
        return None;
    }
    let mut lb = 1usize; // feasible
    let mut ub = 2usize; // first length not known feasible
    while ub <= max_m && feasible(&ctx, x, y, n, alpha, ub).is_some() {
        lb = ub;
        ub *= 2;
    }
    let mut ub = ub.min(max_m + 1); // lengths beyond max_m are vacuously infeasible
    while ub - lb > 1 {
        let mid = lb + (ub - lb) / 2;
        if feasible(&ctx, x, y, n, alpha, mid).is_some() {
            lb = mid;
        } else {
            ub = mid;
        }
    }
    Some(select_witness(x, y, n, lb, MatchConstraint::OffBand(alpha as u64)))
}

/// Is there an admissible pair matching `m` symbols?  Indexes the x-side
/// m-grams and probes each y-gram; because the admissible i for a given
/// j form the complement of one interval, an admissible occurrence
/// exists iff one of the index list's extremes is admissible.
fn feasible(
    ctx: &HashContext,
    x: &[u8],
    y: &[u8],
    n: usize,
    alpha: usize,
    m: usize,
) -> Option<(usize, usize)> {
    if m > x.len() || m > y.len() {
        return None;
    }
    let i_end = n.min(x.len() - m + 1);
    let j_end = n.min(y.len() - m + 1);
    let mut index: BTreeMap<(u64, u64), Vec<u32>> = BTreeMap::new();
    for i in 0..i_end {
        index.entry(ctx.gram_x(i, m)).or_default().push(i as u32);
    }
    let admissible = |i: usize, j: usize| i.abs_diff(j) > alpha;
    for j in 0..j_end {
        let Some(list) = index.get(&ctx.gram_y(j, m)) else {
            continue;
        };
        let lo = list[0] as usize;
        let hi = *list.last().expect("nonempty list") as usize;
        let lo_real = x[lo..lo + m] == y[j..j + m];
        let hi_real = x[hi..hi + m] == y[j..j + m];
        if lo_real && admissible(lo, j) {
            return Some((lo, j));
        }
        if hi_real && admissible(hi, j) {
            return Some((hi, j));
        }
        // If both extremes are true occurrences and banned, the whole
        // list sits inside the one banned interval: genuinely infeasible
        // for this j.  A fake extreme (hash collision, vanishingly rare)
        // voids that argument, so fall back to scanning the list.
        if !(lo_real && hi_real) {
            for &i in list {
                let i = i as usize;
                if admissible(i, j) && x[i..i + m] == y[j..j + m] {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

/// The canonical witness of a known-optimal length `m ≥ 1`: certified
/// (mismatch-terminated) witnesses first, then smallest `(i, j)`.
///
/// Every admissible pair sharing an m-gram is automatically optimal —
/// a longer extension would contradict the optimality of `m` — so this
/// pass only has to order them, not re-maximize.
pub(super) fn select_witness(
    x: &[u8],
    y: &[u8],
    n: usize,
    m: usize,
    constraint: MatchConstraint,
) -> SymCandidate {
    let ctx = HashContext::new(x, y);
    let j_end = n.min(y.len().saturating_sub(m) + 1);
    let mut index: BTreeMap<(u64, u64), Vec<u32>> = BTreeMap::new();
    for j in 0..j_end {
        index.entry(ctx.gram_y(j, m)).or_default().push(j as u32);
    }
    let i_end = n.min(x.len().saturating_sub(m) + 1);
    let mut first_truncated: Option<(usize, usize)> = None;
    for i in 0..i_end {
        let Some(list) = index.get(&ctx.gram_x(i, m)) else {
            continue;
        };
        for &j in list {
            let j = j as usize;
            if !constraint.admits(i, j, n) || x[i..i + m] != y[j..j + m] {
                continue;
            }
            if i + m < x.len() && j + m < y.len() {
                return SymCandidate { m: m as u64, truncated: false, i, j };
            }
            if first_truncated.is_none() {
                first_truncated = Some((i, j));
            }
        }
    }
    let (i, j) = first_truncated
        .expect("a confirmed match length must have at least one witness");
    SymCandidate { m: m as u64, truncated: true, i, j }
}
