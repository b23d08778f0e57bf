//! Fixed-size subset enumeration with incremental group sums.
//!
//! [`RevolvingDoor`] walks all `k`-subsets of `{0, .., n-1}` so that
//! consecutive subsets differ by one element swapped in and one swapped out
//! (Knuth's Algorithm R), which keeps the running group sum to two point
//! additions per step. [`MitmTable`] answers "does some `k`-subset sum to `T`"
//! for many `(k, T)` at once by splitting the points in two halves.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::curve::{LevelCurve, Point};

/// Bitmask iterator over the `k`-subsets of `{0, .., n-1}`, `n <= 64`, in
/// revolving-door order.
pub struct RevolvingDoor {
    n: usize,
    k: usize,
    /// 1-indexed `c[1..=k]`, `c[k+1] = n`, plus a sentinel.
    c: Vec<usize>,
    started: bool,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, k: usize) -> RevolvingDoor {
        assert!(n <= 64, "bitmask subsets need n <= 64");
        let mut c = vec![0usize; k + 3];
        for (j, cj) in c.iter_mut().enumerate().take(k + 1).skip(1) {
            *cj = j - 1;
        }
        c[k + 1] = n;
        c[k + 2] = usize::MAX;
        RevolvingDoor { n, k, c, started: false, done: k > n }
    }

    fn mask(&self) -> u64 {
        self.c[1..=self.k].iter().fold(0u64, |m, &i| m | (1u64 << i))
    }

    /// Advances `c`; returns false when the walk is over.
    fn step(&mut self) -> bool {
        let k = self.k;
        if k == 0 || k == self.n {
            return false;
        }
        let c = &mut self.c;
        let mut j;
        if k % 2 == 1 {
            if c[1] + 1 < c[2] {
                c[1] += 1;
                return true;
            }
            j = 2;
        } else {
            if c[1] > 0 {
                c[1] -= 1;
                return true;
            }
            j = 2;
            // fall through to R5
            if j > k {
                return false;
            }
            if c[j] + 1 < c[j + 1] {
                c[j - 1] = c[j];
                c[j] += 1;
                return true;
            }
            j += 1;
        }
        loop {
            if j > k {
                return false;
            }
            // R4: c[j] = c[j-1] + 1
            if c[j] >= j {
                c[j] = c[j - 1];
                c[j - 1] = j - 2;
                return true;
            }
            j += 1;
            if j > k {
                return false;
            }
            // R5: c[j-1] = j - 2
            if c[j] + 1 < c[j + 1] {
                c[j - 1] = c[j];
                c[j] += 1;
                return true;
            }
            j += 1;
        }
    }
}

impl Iterator for RevolvingDoor {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.step() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(self.mask())
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Outcome of an exhaustive subset-sum scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    /// Lexicographically smallest index set (ascending) hitting the target.
    pub witness: Option<Vec<usize>>,
    pub checked: u64,
}

/// Scans every `k`-subset of `points` for one summing to `target`.
///
/// Work is split by the smallest chosen index; each part is a revolving-door
/// walk over the remaining suffix, so the witness is the minimum over parts.
pub fn scan_subset_sums(lc: &LevelCurve, points: &[Point], k: usize, target: &Point) -> ScanResult {
    let n = points.len();
    if k > n {
        return ScanResult { witness: None, checked: 0 };
    }
    if k == 0 {
        let hit = target.is_infinity();
        return ScanResult { witness: hit.then(Vec::new), checked: 1 };
    }
    let parts: Vec<(Option<Vec<usize>>, u64)> = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let rest = &points[first + 1..];
            let base = &points[first];
            let mut best: Option<Vec<usize>> = None;
            let mut checked = 0u64;
            let mut prev = 0u64;
            let mut sum = Point::infinity(lc.level());
            for mask in RevolvingDoor::new(rest.len(), k - 1) {
                if checked == 0 {
                    sum = lc.add(base, &lc.sum(mask_indices(mask).iter().map(|&i| &rest[i])));
                } else {
                    let out = (prev & !mask).trailing_zeros() as usize;
                    let inn = (mask & !prev).trailing_zeros() as usize;
                    sum = lc.add(&lc.sub(&sum, &rest[out]), &rest[inn]);
                }
                prev = mask;
                checked += 1;
                if &sum == target {
                    let mut idx = vec![first];
                    idx.extend(mask_indices(mask).into_iter().map(|i| i + first + 1));
                    if best.as_ref().is_none_or(|b| idx < *b) {
                        best = Some(idx);
                    }
                }
            }
            (best, checked)
        })
        .collect();
    let checked = parts.iter().map(|p| p.1).sum();
    let witness = parts.into_iter().find_map(|p| p.0);
    ScanResult { witness, checked }
}

/// Subset sums of the two halves of a point list, for meet-in-the-middle
/// queries. Needs `points.len() <= 2 * MITM_HALF_MAX`.
pub struct MitmTable<'a> {
    lc: &'a LevelCurve,
    split: usize,
    points: &'a [Point],
    left: HashMap<(u32, Point), u64>,
}

pub const MITM_HALF_MAX: usize = 20;

/// Running sums of all subsets of `pts` in Gray-code order: `(mask, sum)`.
fn all_subset_sums(lc: &LevelCurve, pts: &[Point]) -> Vec<(u64, Point)> {
    let total = 1u64 << pts.len();
    let mut out = Vec::with_capacity(total as usize);
    let mut sum = Point::infinity(lc.level());
    let mut mask = 0u64;
    out.push((0, sum.clone()));
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        if mask >> bit & 1 == 1 {
            sum = lc.sub(&sum, &pts[bit]);
        } else {
            sum = lc.add(&sum, &pts[bit]);
        }
        mask ^= 1 << bit;
        out.push((mask, sum.clone()));
    }
    out
}

impl<'a> MitmTable<'a> {
    pub fn new(lc: &'a LevelCurve, points: &'a [Point]) -> MitmTable<'a> {
        assert!(points.len() <= 2 * MITM_HALF_MAX, "meet-in-the-middle limited to {} points", 2 * MITM_HALF_MAX);
        let split = points.len() / 2;
        let mut left = HashMap::new();
        for (mask, s) in all_subset_sums(lc, &points[..split]) {
            left.entry((mask.count_ones(), s)).or_insert(mask);
        }
        MitmTable { lc, split, points, left }
    }

    /// Finds some index set of size `k` whose points sum to `target`, for each
    /// query in turn; returns the first query index that has one.
    pub fn find_any(&self, queries: &[(usize, Point)]) -> Option<(usize, Vec<usize>)> {
        let right = &self.points[self.split..];
        for (mask_r, s_r) in all_subset_sums(self.lc, right) {
            let j = mask_r.count_ones() as usize;
            for (qi, (k, target)) in queries.iter().enumerate() {
                if j > *k || k - j > self.split {
                    continue;
                }
                let need = self.lc.sub(target, &s_r);
                if let Some(&mask_l) = self.left.get(&(((k - j) as u32), need)) {
                    let mut idx = mask_indices(mask_l);
                    idx.extend(mask_indices(mask_r).into_iter().map(|i| i + self.split));
                    return Some((qi, idx));
                }
            }
        }
        None
    }
}
