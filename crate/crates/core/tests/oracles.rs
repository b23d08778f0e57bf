//! Checks against small independent computations: exhaustive scans, naive
//! point counts and nearest-codeword search.

use std::time::{Duration, Instant};

use num_bigint::BigInt;

use ellcode_core::curve::{Curve, Divisor, Point};
use ellcode_core::ecp::{build_pair, channel_corrupt, ecp_decode, DecodeStatus};
use ellcode_core::field::{make_field, Field, FieldElem};
use ellcode_core::linalg::hamming_distance;
use ellcode_core::seed::rng_for;

/// Monic polynomials of degree 2 or 3 are irreducible iff they have no root.
fn has_root(coeffs: &[u64], p: u64) -> bool {
    (0..p).any(|x| coeffs.iter().rev().fold(0, |acc, c| (acc * x + c) % p) == 0)
}

fn smallest_rootless(p: u64, deg: usize) -> Vec<u64> {
    for idx in 0..p.pow(deg as u32) {
        let mut f: Vec<u64> = (0..deg).map(|i| idx / p.pow(i as u32) % p).collect();
        f.push(1);
        if !has_root(&f, p) {
            return f;
        }
    }
    unreachable!()
}

#[test]
fn moduli_match_an_exhaustive_scan() {
    for (p, deg) in [(5, 2), (5, 3), (7, 2), (7, 3), (11, 2), (2, 3)] {
        let f = make_field(p, deg).unwrap();
        let want: Vec<u32> = smallest_rootless(p, deg).into_iter().map(|c| c as u32).collect();
        assert_eq!(f.modulus(), &want[..], "F_{p}^{deg}");
    }
    assert_eq!(make_field(5, 2).unwrap().modulus(), &[2, 0, 1]);
}

fn naive_count(e: &Curve, f: Field) -> usize {
    let lc = e.at(f).unwrap();
    let elems: Vec<FieldElem> = f.elements().collect();
    let mut n = 1;
    for x in &elems {
        let rhs = lc.rhs(x);
        n += elems.iter().filter(|y| y.square() == rhs).count();
    }
    n
}

#[test]
fn point_counts_match_naive_enumeration() {
    for (p, a, b) in [(5u64, 0i64, 1i64), (5, 1, 1), (7, 3, 2), (11, 1, 6)] {
        let e = Curve::from_ints(p, 1, a, b).unwrap();
        for m in 1..=3usize {
            if p.pow(m as u32) > 400 {
                continue;
            }
            let f = e.level(m).unwrap();
            let naive = naive_count(&e, f);
            assert_eq!(e.count_points_ext(m as u32), BigInt::from(naive), "p = {p}, m = {m}");
            assert_eq!(e.enumerate_points(f).unwrap().len(), naive);
        }
    }
    let e = Curve::from_ints(5, 1, 0, 1).unwrap();
    assert_eq!(naive_count(&e, e.base()), 6);
    assert_eq!(e.trace(), 0);
}

/// A [7, 2] code over `F_25` with capacity 1, small enough to search.
fn small_pair() -> ellcode_core::ecp::ECPair {
    let e = Curve::from_ints(5, 1, 0, 1).unwrap();
    let k = e.level(2).unwrap();
    let o = Point::infinity(k);
    let d = Divisor::zero(k).with_point(o.clone(), 3).unwrap();
    let sigma: Vec<Point> = e.enumerate_points(k).unwrap().into_iter().filter(|z| *z != o).take(8).collect();
    let pair = build_pair(&e, &d, &sigma, &sigma[0]).unwrap();
    assert_eq!((pair.code.length(), pair.code.dimension(), pair.t), (7, 2, 1));
    pair
}

fn nearest(code: &ellcode_core::codes::LinearCode, y: &[FieldElem]) -> (usize, Vec<Vec<FieldElem>>) {
    let f = code.field;
    let q = f.size().unwrap();
    let mut best = (usize::MAX, Vec::new());
    for i in 0..q * q {
        let c = code.encode(&[f.from_index(i % q), f.from_index(i / q)]).unwrap();
        let dist = hamming_distance(&c, y);
        if dist < best.0 {
            best = (dist, vec![c]);
        } else if dist == best.0 {
            best.1.push(c);
        }
    }
    best
}

#[test]
fn decoder_agrees_with_nearest_codeword_search() {
    let pair = small_pair();
    let f = pair.code.field;
    let mut rng = rng_for(11, "oracle");
    for w in 0..=7 {
        for _ in 0..20 {
            let msg = vec![f.random(&mut rng), f.random(&mut rng)];
            let c = pair.code.encode(&msg).unwrap();
            let y = channel_corrupt(&c, w, &mut rng).unwrap();
            let (dist, near) = nearest(&pair.code, &y);
            let res = ecp_decode(&y, &pair).unwrap();
            if dist <= pair.t {
                assert_eq!(near.len(), 1);
                assert_eq!(res.codeword.as_ref(), Some(&near[0]), "w = {w}");
            } else {
                // beyond capacity the decoder must say so instead of guessing
                assert_eq!(res.status, DecodeStatus::Failure, "w = {w}, nearest at {dist}");
            }
        }
    }
}

/// Best-of-five decode time for a code of length `n` over `F_625`.
fn decode_time(n: usize) -> Duration {
    let e = Curve::from_ints(5, 1, 0, 1).unwrap();
    let k = e.level(4).unwrap();
    let o = Point::infinity(k);
    let d = Divisor::zero(k).with_point(o.clone(), (n / 4) as u32).unwrap();
    let sigma: Vec<Point> = e.enumerate_points(k).unwrap().into_iter().filter(|z| *z != o).take(n + 1).collect();
    let pair = build_pair(&e, &d, &sigma, &sigma[0]).unwrap();
    let mut rng = rng_for(n as u64, "timing");
    let msg: Vec<FieldElem> = (0..pair.code.dimension()).map(|_| k.random(&mut rng)).collect();
    let c = pair.code.encode(&msg).unwrap();
    let y = channel_corrupt(&c, pair.t, &mut rng).unwrap();
    (0..5)
        .map(|_| {
            let t = Instant::now();
            let res = ecp_decode(&y, &pair).unwrap();
            let el = t.elapsed();
            assert_eq!(res.codeword.as_ref(), Some(&c));
            el
        })
        .min()
        .unwrap()
}

#[test]
fn decode_time_scales_roughly_cubically() {
    let t: Vec<f64> = [30, 60, 120].iter().map(|&n| decode_time(n).as_secs_f64().max(1e-6)).collect();
    // 8x per doubling in theory; allow 10
    for w in t.windows(2) {
        assert!(w[1] / w[0] <= 10.0, "per-doubling ratio {} (times {t:?})", w[1] / w[0]);
    }
}
