//! Cross-checks the constrained match searches against oracles written
//! from scratch for this test target: direct pair enumeration with an
//! explicitly sorted candidate list for the symbolic statistics, and
//! exact integer fraction arithmetic for the metric ones.  No search,
//! tie-break, or arithmetic code is shared with the library.

use orbitmin_core::matching::{
    lcs_match, min_dist_match, MatchConstraint, MatchError, MatchValue,
};
use orbitmin_core::space::CirclePoint;

/// xorshift64* — deliberately a different generator family from the
/// library's counter-based stream.
struct TestRng(u64);

impl TestRng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        self.0.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Admissibility restated from the definitions: all pairs, the diagonal,
/// `|i−j| ≤ α`, `|i−j| > α`, and first-third × last-third.
fn admits(constraint: MatchConstraint, i: usize, j: usize, n: usize) -> bool {
    if i >= n || j >= n {
        return false;
    }
    let gap = i.abs_diff(j) as u64;
    match constraint {
        MatchConstraint::All => true,
        MatchConstraint::Diagonal => i == j,
        MatchConstraint::Band(a) => gap <= a,
        MatchConstraint::OffBand(a) => gap > a,
        MatchConstraint::FarThirds => 3 * i < n && 3 * j >= 2 * n,
    }
}

/// Best symbolic match over admissible pairs: longest, then certified by
/// a visible mismatch before truncated, then smallest `(i, j)`.  Returns
/// `None` when the constraint admits no pair at all.
fn oracle_lcs(
    x: &[u8],
    y: &[u8],
    n: usize,
    constraint: MatchConstraint,
) -> Option<(u64, (usize, usize), bool)> {
    let mut candidates = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !admits(constraint, i, j, n) {
                continue;
            }
            let mut m = 0usize;
            while i + m < x.len() && j + m < y.len() && x[i + m] == y[j + m] {
                m += 1;
            }
            let truncated = i + m == x.len() || j + m == y.len();
            candidates.push((m as u64, truncated, i, j));
        }
    }
    candidates.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
    candidates.first().map(|&(m, truncated, i, j)| (m, (i, j), truncated))
}

fn constraints_for(n: usize, rng: &mut TestRng) -> Vec<MatchConstraint> {
    let mut cs = vec![MatchConstraint::All, MatchConstraint::Diagonal];
    for alpha in [0, 1, 3, 7, 16] {
        cs.push(MatchConstraint::Band(alpha));
        cs.push(MatchConstraint::OffBand(alpha));
    }
    if n >= 2 {
        cs.push(MatchConstraint::Band(rng.below(n as u64)));
        cs.push(MatchConstraint::OffBand(rng.below(n as u64)));
    }
    if n >= 3 {
        cs.push(MatchConstraint::FarThirds);
    }
    cs
}

#[test]
fn symbolic_search_agrees_with_enumeration() {
    let mut rng = TestRng(0x5eed_0001);
    let mut checked = 0usize;
    for case in 0..300 {
        let n = 1 + rng.below(48) as usize;
        let alphabet = 1 + rng.below(4) as u8;
        let x_tail = rng.below(9) as usize;
        let y_tail = rng.below(9) as usize;
        let mut x: Vec<u8> = (0..n + x_tail).map(|_| rng.below(alphabet as u64) as u8).collect();
        let mut y: Vec<u8> = (0..n + y_tail).map(|_| rng.below(alphabet as u64) as u8).collect();
        // Every third case plants a shared run so that deep matches and
        // truncation at the sequence ends actually occur.
        if case % 3 == 0 && n >= 2 {
            let len = 1 + rng.below(n as u64) as usize;
            let from = rng.below((x.len() - len + 1) as u64) as usize;
            let to = rng.below((y.len() - len + 1) as u64) as usize;
            let run: Vec<u8> = x[from..from + len].to_vec();
            y[to..to + len].copy_from_slice(&run);
        }
        if case % 7 == 0 {
            // Identical sequences: everything is one long truncated run.
            y = x.clone();
        }
        if case % 11 == 0 {
            x.truncate(n);
            y.truncate(n);
        }

        for constraint in constraints_for(n, &mut rng) {
            // Cross-check the restated admissibility against the
            // library's while we are at it.
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(
                        admits(constraint, i, j, n),
                        constraint.admits(i, j, n),
                        "admissibility mismatch at ({i},{j}), n={n}, {constraint:?}"
                    );
                }
            }

            let expected = oracle_lcs(&x, &y, n, constraint);
            let got = lcs_match(&x, &y, n, constraint);
            match (expected, got) {
                (None, Err(MatchError::EmptyConstraint { .. })) => {}
                (None, other) => panic!("expected empty-constraint error, got {other:?}"),
                (Some((m, witness, truncated)), Ok(result)) => {
                    assert_eq!(result.value, MatchValue::Length(m), "case {case} {constraint:?}");
                    assert_eq!(result.witness, witness, "case {case} {constraint:?} m={m}");
                    assert_eq!(result.truncated, truncated, "case {case} {constraint:?} m={m}");
                    assert_eq!(result.n, n);
                    checked += 1;
                }
                (Some(exp), Err(e)) => panic!("expected {exp:?}, got error {e} (case {case})"),
            }
        }
    }
    assert!(checked > 2000, "only {checked} comparisons ran");
}

/// Exact circle distance between `a/qa` and `b/qb` as a fraction over
/// `qa·qb`: `min(|a·qb − b·qa|, qa·qb − |…|)`.
fn frac_circle_dist(a: (u64, u64), b: (u64, u64)) -> (u128, u128) {
    let den = a.1 as u128 * b.1 as u128;
    let va = a.0 as u128 * b.1 as u128;
    let vb = b.0 as u128 * a.1 as u128;
    let diff = va.abs_diff(vb);
    (diff.min(den - diff), den)
}

fn frac_less(x: (u128, u128), y: (u128, u128)) -> bool {
    x.0 * y.1 < y.0 * x.1
}

fn frac_equal(x: (u128, u128), y: (u128, u128)) -> bool {
    x.0 * y.1 == y.0 * x.1
}

/// Lexicographically first admissible pair attaining the smallest exact
/// circle distance.
fn oracle_min_dist(
    xs: &[(u64, u64)],
    ys: &[(u64, u64)],
    constraint: MatchConstraint,
) -> Option<((u128, u128), (usize, usize))> {
    let n = xs.len();
    let mut best: Option<((u128, u128), (usize, usize))> = None;
    for i in 0..n {
        for j in 0..n {
            if !admits(constraint, i, j, n) {
                continue;
            }
            let d = frac_circle_dist(xs[i], ys[j]);
            let better = match &best {
                None => true,
                Some((cur, _)) => frac_less(d, *cur),
            };
            if better {
                best = Some((d, (i, j)));
            }
        }
    }
    best
}

#[test]
fn metric_search_agrees_with_exact_fractions() {
    let mut rng = TestRng(0x5eed_0002);
    let mut collisions = 0usize;
    for case in 0..200 {
        let n = 1 + rng.below(24) as usize;
        // Small denominators make exact collisions and circular wrap
        // ties common enough to matter.
        let q = [8, 16, 64, 97, 1000][rng.below(5) as usize];
        let fracs = |rng: &mut TestRng| -> Vec<(u64, u64)> {
            (0..n).map(|_| (rng.below(q), q)).collect()
        };
        let xf = fracs(&mut rng);
        let mut yf = fracs(&mut rng);
        if case % 4 == 0 && n >= 2 {
            // Planted exact duplicate across the two orbits.
            let i = rng.below(n as u64) as usize;
            let j = rng.below(n as u64) as usize;
            yf[j] = xf[i];
        }
        let xs: Vec<CirclePoint> =
            xf.iter().map(|&(p, q)| CirclePoint::from_fraction(p, q).unwrap()).collect();
        let ys: Vec<CirclePoint> =
            yf.iter().map(|&(p, q)| CirclePoint::from_fraction(p, q).unwrap()).collect();

        let mut constraints = vec![MatchConstraint::All, MatchConstraint::Diagonal];
        for alpha in [0u64, 1, 3] {
            constraints.push(MatchConstraint::Band(alpha));
            constraints.push(MatchConstraint::OffBand(alpha));
        }
        if n >= 3 {
            constraints.push(MatchConstraint::FarThirds);
        }

        for constraint in constraints {
            let expected = oracle_min_dist(&xf, &yf, constraint);
            let got = min_dist_match(&xs, &ys, constraint);
            let Some((min_frac, witness)) = expected else {
                assert!(
                    matches!(got, Err(MatchError::EmptyConstraint { .. })),
                    "expected empty-constraint error, got {got:?}"
                );
                continue;
            };
            let result = got.unwrap_or_else(|e| panic!("case {case} {constraint:?}: {e}"));
            assert_eq!(result.witness, witness, "case {case} {constraint:?}");
            // The reported witness must attain the oracle minimum
            // exactly, fraction against fraction.
            let at_witness = frac_circle_dist(xf[result.witness.0], yf[result.witness.1]);
            assert!(frac_equal(at_witness, min_frac), "witness does not attain the minimum");
            let MatchValue::Distance { value, log2 } = result.value else {
                panic!("metric search returned a symbolic value")
            };
            let oracle_value = min_frac.0 as f64 / min_frac.1 as f64;
            if min_frac.0 == 0 {
                assert_eq!(value, 0.0);
                assert_eq!(log2, f64::NEG_INFINITY);
                collisions += 1;
            } else {
                assert!(
                    (value - oracle_value).abs() <= 1e-12 * oracle_value.max(1e-300),
                    "value {value} vs oracle {oracle_value}"
                );
                assert!((log2 - oracle_value.log2()).abs() <= 1e-9);
            }
        }
    }
    assert!(collisions >= 20, "only {collisions} exact collisions exercised");
}

#[test]
fn error_paths_match_the_contracts() {
    let x = vec![0u8, 1, 0, 1];
    let pts: Vec<CirclePoint> =
        (0..4).map(|p| CirclePoint::from_fraction(p, 7).unwrap()).collect();

    assert!(matches!(
        lcs_match(&x, &x, 0, MatchConstraint::All),
        Err(MatchError::EmptyWindow)
    ));
    assert!(matches!(
        lcs_match(&x, &x, 5, MatchConstraint::All),
        Err(MatchError::TooShort { len: 4, n: 5 })
    ));
    assert!(matches!(
        lcs_match(&x, &x, 2, MatchConstraint::FarThirds),
        Err(MatchError::FarThirdsNeedsThree(2))
    ));
    assert!(matches!(
        lcs_match(&x, &x, 4, MatchConstraint::OffBand(3)),
        Err(MatchError::EmptyConstraint { alpha: 3, n: 4 })
    ));
    assert!(matches!(
        min_dist_match(&pts, &pts[..3], MatchConstraint::All),
        Err(MatchError::LengthMismatch { xs: 4, ys: 3 })
    ));
    assert!(matches!(
        min_dist_match(&pts, &pts, MatchConstraint::OffBand(9)),
        Err(MatchError::EmptyConstraint { alpha: 9, n: 4 })
    ));

    // Band(α ≥ n−1) is the whole square, not an error.
    let wide = lcs_match(&x, &x, 4, MatchConstraint::Band(99)).unwrap();
    let all = lcs_match(&x, &x, 4, MatchConstraint::All).unwrap();
    assert_eq!(wide, all);
}
