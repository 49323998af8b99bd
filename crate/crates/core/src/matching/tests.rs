use super::*;
use crate::rng::CounterStream;
use crate::space::CirclePoint;

fn random_word(stream: &CounterStream, base: u64, len: usize, alphabet: u64) -> Vec<u8> {
    (0..len)
        .map(|k| stream.below_at(base + k as u64, alphabet) as u8)
        .collect()
}

/// Every constraint that is well-formed at window length `n`.
fn valid_constraints(n: usize) -> Vec<MatchConstraint> {
    let mut out = vec![MatchConstraint::All, MatchConstraint::Diagonal];
    if n >= 3 {
        out.push(MatchConstraint::FarThirds);
    }
    for alpha in [0u64, 1, 2, 5, n as u64] {
        out.push(MatchConstraint::Band(alpha));
        if alpha + 1 < n as u64 {
            out.push(MatchConstraint::OffBand(alpha));
        }
    }
    out
}

#[test]
fn unconstrained_search_finds_the_certified_optimum() {
    let x = [0, 0, 1, 0, 1];
    let y = [1, 0, 1, 0, 0];
    let r = lcs_match(&x, &y, 3, MatchConstraint::All).unwrap();
    assert_eq!(r.value, MatchValue::Length(3));
    assert_eq!(r.witness, (1, 1));
    assert!(!r.truncated);
}

#[test]
fn certified_witness_beats_earlier_truncated_tie() {
    // (0, 2) matches "ab" into the end of y; (1, 0) matches "bc" and is
    // stopped by a visible mismatch.  Both have length 2, and the
    // certified pair wins despite being lexicographically later.
    let x = b"abcde";
    let y = b"bcab";
    let r = lcs_match(x, y, 3, MatchConstraint::All).unwrap();
    assert_eq!(r.value, MatchValue::Length(2));
    assert_eq!(r.witness, (1, 0));
    assert!(!r.truncated);
    let b = lcs_match_brute(x, y, 3, MatchConstraint::All).unwrap();
    assert_eq!(r, b);
}

#[test]
fn fully_truncated_optimum_reports_the_flag() {
    let r = lcs_match(b"ab", b"ab", 2, MatchConstraint::All).unwrap();
    assert_eq!(r.value, MatchValue::Length(2));
    assert_eq!(r.witness, (0, 0));
    assert!(r.truncated);
}

#[test]
fn single_window_matches_to_the_end() {
    let x = [0, 1, 1, 0];
    let r = lcs_match(&x, &x, 1, MatchConstraint::All).unwrap();
    assert_eq!(r.value, MatchValue::Length(4));
    assert_eq!(r.witness, (0, 0));
    assert!(r.truncated);
}

#[test]
fn diagonal_finds_the_longest_aligned_run() {
    let r = lcs_match(&[0, 0, 1, 0], &[0, 0, 1, 1], 4, MatchConstraint::Diagonal).unwrap();
    assert_eq!(r.value, MatchValue::Length(3));
    assert_eq!(r.witness, (0, 0));
    assert!(!r.truncated);
}

#[test]
fn diagonal_miss_reports_zero_at_the_first_pair() {
    let r = lcs_match(&[0, 0, 1, 1], &[1, 1, 0, 0], 4, MatchConstraint::Diagonal).unwrap();
    assert_eq!(r.value, MatchValue::Length(0));
    assert_eq!(r.witness, (0, 0));
    assert!(!r.truncated);
}

#[test]
fn far_thirds_ignores_matches_outside_its_windows() {
    let x = b"abcdefgh";
    let y = b"abcdzzab";
    let all = lcs_match(x, y, 8, MatchConstraint::All).unwrap();
    assert_eq!(all.value, MatchValue::Length(4));
    assert_eq!(all.witness, (0, 0));
    let far = lcs_match(x, y, 8, MatchConstraint::FarThirds).unwrap();
    assert_eq!(far.value, MatchValue::Length(2));
    assert_eq!(far.witness, (0, 6));
    assert!(far.truncated);
}

#[test]
fn off_band_miss_reports_its_smallest_admissible_pair() {
    let r = lcs_match(b"aabb", b"aabb", 4, MatchConstraint::OffBand(1)).unwrap();
    assert_eq!(r.value, MatchValue::Length(0));
    assert_eq!(r.witness, (0, 2));
    assert!(!r.truncated);
}

#[test]
fn far_thirds_miss_reports_its_smallest_admissible_pair() {
    let r = lcs_match(b"aaab", b"bbba", 3, MatchConstraint::FarThirds).unwrap();
    assert_eq!(r.value, MatchValue::Length(0));
    assert_eq!(r.witness, (0, 2));
}

#[test]
fn empty_off_band_is_rejected() {
    let err = lcs_match(b"abcd", b"abcd", 4, MatchConstraint::OffBand(3)).unwrap_err();
    assert_eq!(err, MatchError::EmptyConstraint { alpha: 3, n: 4 });
    let p = CirclePoint::zero();
    let xs = vec![p.clone(), p.clone()];
    let err = min_dist_match(&xs, &xs, MatchConstraint::OffBand(5)).unwrap_err();
    assert_eq!(err, MatchError::EmptyConstraint { alpha: 5, n: 2 });
}

#[test]
fn degenerate_windows_are_rejected() {
    assert_eq!(
        lcs_match(b"ab", b"ab", 0, MatchConstraint::All).unwrap_err(),
        MatchError::EmptyWindow
    );
    assert_eq!(
        lcs_match(b"ab", b"ab", 3, MatchConstraint::All).unwrap_err(),
        MatchError::TooShort { len: 2, n: 3 }
    );
    assert_eq!(
        lcs_match(b"ab", b"ab", 2, MatchConstraint::FarThirds).unwrap_err(),
        MatchError::FarThirdsNeedsThree(2)
    );
}

#[test]
fn wide_band_equals_unconstrained() {
    let stream = CounterStream::new(41);
    for (case, n) in (1usize..=12).enumerate() {
        let len = n + 6;
        let base = (case * 2 * len) as u64;
        let x = random_word(&stream, base, len, 2);
        let y = random_word(&stream, base + len as u64, len, 2);
        let all = lcs_match(&x, &y, n, MatchConstraint::All).unwrap();
        for alpha in [n as u64 - 1, n as u64, n as u64 + 7] {
            let band = lcs_match(&x, &y, n, MatchConstraint::Band(alpha)).unwrap();
            assert_eq!(band.value, all.value);
            assert_eq!(band.witness, all.witness);
            assert_eq!(band.truncated, all.truncated);
        }
    }
}

#[test]
fn symbolic_search_agrees_with_brute_force() {
    let stream = CounterStream::new(907);
    let mut base = 0u64;
    for case in 0..250u64 {
        let n = 1 + (stream.below_at(base, 40) as usize);
        let extra_x = stream.below_at(base + 1, 12) as usize;
        let extra_y = stream.below_at(base + 2, 12) as usize;
        let alphabet = 1 + stream.below_at(base + 3, 3);
        base += 4;
        let x = random_word(&stream, base, n + extra_x, alphabet);
        base += (n + extra_x) as u64;
        let y = random_word(&stream, base, n + extra_y, alphabet);
        base += (n + extra_y) as u64;
        for constraint in valid_constraints(n) {
            let fast = lcs_match(&x, &y, n, constraint).unwrap();
            let brute = lcs_match_brute(&x, &y, n, constraint).unwrap();
            assert_eq!(fast, brute, "case {case}, n {n}, {constraint:?}");
        }
    }
}

#[test]
fn unconstrained_value_splits_into_band_and_off_band() {
    let stream = CounterStream::new(5225);
    let mut base = 0u64;
    for _ in 0..120 {
        let n = 4 + (stream.below_at(base, 60) as usize);
        base += 1;
        let x = random_word(&stream, base, n + 8, 2);
        base += (n + 8) as u64;
        let y = random_word(&stream, base, n + 8, 2);
        base += (n + 8) as u64;
        let all = lcs_match(&x, &y, n, MatchConstraint::All).unwrap();
        for alpha in [0u64, 1, 4, 16] {
            if alpha + 1 >= n as u64 {
                continue;
            }
            let band = lcs_match(&x, &y, n, MatchConstraint::Band(alpha)).unwrap();
            let off = lcs_match(&x, &y, n, MatchConstraint::OffBand(alpha)).unwrap();
            let m = band.length().unwrap().max(off.length().unwrap());
            assert_eq!(all.value, MatchValue::Length(m));
        }
    }
}

fn random_points(stream: &CounterStream, base: u64, n: usize, grid: Option<u64>) -> Vec<CirclePoint> {
    (0..n)
        .map(|k| {
            let at = base + 2 * k as u64;
            match grid {
                Some(g) => CirclePoint::from_fraction(stream.below_at(at, g), g).unwrap(),
                None => CirclePoint::uniform(stream, at, 48).unwrap(),
            }
        })
        .collect()
}

#[test]
fn metric_search_agrees_with_brute_force() {
    let stream = CounterStream::new(7321);
    let mut base = 0u64;
    for case in 0..150u64 {
        let n = 1 + (stream.below_at(base, 24) as usize);
        // Coarse grids force exact collisions and distance ties; uniform
        // 48-bit points exercise the generic path.
        let grid = match stream.below_at(base + 1, 3) {
            0 => Some(8),
            1 => Some(64),
            _ => None,
        };
        base += 2;
        let xs = random_points(&stream, base, n, grid);
        base += 2 * n as u64;
        let ys = random_points(&stream, base, n, grid);
        base += 2 * n as u64;
        for constraint in valid_constraints(n) {
            let fast = min_dist_match(&xs, &ys, constraint).unwrap();
            let brute = min_dist_match_brute(&xs, &ys, constraint).unwrap();
            assert_eq!(fast, brute, "case {case}, n {n}, {constraint:?}");
        }
    }
}

#[test]
fn metric_example_pair() {
    let xs = vec![
        CirclePoint::from_fraction(1, 10).unwrap(),
        CirclePoint::from_fraction(2, 5).unwrap(),
    ];
    let ys = vec![
        CirclePoint::from_fraction(9, 20).unwrap(),
        CirclePoint::from_fraction(4, 5).unwrap(),
    ];
    let r = min_dist_match(&xs, &ys, MatchConstraint::All).unwrap();
    assert_eq!(r.witness, (1, 0));
    match r.value {
        MatchValue::Distance { value, .. } => assert_eq!(value, 0.05),
        other => panic!("expected a distance, got {other:?}"),
    }
}

#[test]
fn identical_orbits_collide_at_distance_zero() {
    let xs = vec![
        CirclePoint::from_fraction(1, 3).unwrap(),
        CirclePoint::from_fraction(2, 3).unwrap(),
    ];
    let r = min_dist_match(&xs, &xs, MatchConstraint::Diagonal).unwrap();
    assert_eq!(r.witness, (0, 0));
    match r.value {
        MatchValue::Distance { value, log2 } => {
            assert_eq!(value, 0.0);
            assert_eq!(log2, f64::NEG_INFINITY);
        }
        other => panic!("expected a distance, got {other:?}"),
    }
    let e = exponent_statistic(&r, 2.0).unwrap();
    assert!(e.exact_collision);
    assert_eq!(e.value, f64::INFINITY);
}

#[test]
fn planted_long_match_is_recovered() {
    let stream = CounterStream::new(99);
    let mut x = random_word(&stream, 0, 1000, 3);
    let mut y = random_word(&stream, 1000, 1000, 3);
    let pattern = random_word(&stream, 2000, 200, 3);
    x[500..700].copy_from_slice(&pattern);
    y[100..300].copy_from_slice(&pattern);
    let r = lcs_match(&x, &y, 800, MatchConstraint::All).unwrap();
    assert!(r.length().unwrap() >= 200);
    let brute = lcs_match_brute(&x, &y, 800, MatchConstraint::All).unwrap();
    assert_eq!(r, brute);
}

#[test]
fn exponent_statistic_normalizes_by_window_length() {
    let r = MatchResult {
        value: MatchValue::Length(36),
        witness: (0, 0),
        truncated: false,
        n: 1 << 18,
    };
    let e = exponent_statistic(&r, 2.0).unwrap();
    assert_eq!(e.value, 2.0);
    assert!(!e.exact_collision);

    let small = MatchResult { n: 1, ..r };
    assert_eq!(exponent_statistic(&small, 2.0).unwrap_err(), MatchError::BadWindow(1));
    assert_eq!(exponent_statistic(&r, 1.0).unwrap_err(), MatchError::BadBase(1.0));
}

#[test]
fn distance_conversions_are_exact_for_base_two() {
    assert_eq!(to_distance(0, 2.0), 1.0);
    assert_eq!(to_distance(3, 2.0), 0.125);
    assert!(to_distance(1074, 2.0) > 0.0);
    assert_eq!(to_distance_log2(36, 2.0), 36.0);
    assert_eq!(to_distance(2, 4.0), 0.0625);
}

#[test]
fn cap_has_a_floor_and_grows_logarithmically() {
    assert_eq!(match_cap(1), 64);
    assert_eq!(match_cap(2), 64);
    assert_eq!(match_cap(1 << 8), 64);
    assert_eq!(match_cap((1 << 8) + 1), 65);
    assert_eq!(match_cap(1 << 18), 144);
}

#[test]
fn caller_side_truncation_shows_up_at_the_cap() {
    // A worst-case pair (constant sequences) overruns any tail the
    // caller appends; the flag is how they learn the value is a floor.
    let n = 32usize;
    let len = n + match_cap(n as u64) as usize;
    let x = vec![0u8; len];
    let r = lcs_match(&x, &x, n, MatchConstraint::All).unwrap();
    assert_eq!(r.value, MatchValue::Length(len as u64));
    assert_eq!(r.witness, (0, 0));
    assert!(r.truncated);
}
