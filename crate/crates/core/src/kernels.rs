//! Frobenius-trace endomorphisms `tau_{m/1} = 1 + F + ... + F^{m-1}`, their
//! products `pi_m` over the prime factors of `m`, and the point sets built
//! from their kernels.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Divisor, Point, PointRepr};
use crate::error::{Error, Result};
use crate::field::Field;

/// Prime factors of a square-free `m`, ascending.
pub fn squarefree_primes(m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::NotSquareFree(0));
    }
    let mut out = Vec::new();
    let mut n = m;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Err(Error::NotSquareFree(m));
            }
            out.push(d);
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    Ok(out)
}

/// `sum_{i<m} F^i(P)`.
pub fn tau_apply(curve: &Curve, p: &Point, m: u64) -> Result<Point> {
    if !curve.is_on_curve(p) {
        return Err(Error::OffCurve);
    }
    tau_unchecked(curve, p, m)
}

fn tau_unchecked(curve: &Curve, p: &Point, m: u64) -> Result<Point> {
    if p.is_infinity() || m == 0 {
        return Ok(if m == 0 { Point::infinity(p.level()) } else { p.clone() });
    }
    let lc = curve.at(p.level())?;
    let mut acc = p.clone();
    let mut cur = p.clone();
    for _ in 1..m {
        cur = curve.frobenius_point(&cur, 1)?;
        acc = lc.add(&acc, &cur);
    }
    Ok(acc)
}

/// `pi_m(P)`: the composition of `tau_{r/1}` over primes `r | m`.
pub fn pi_apply(curve: &Curve, p: &Point, m: u64) -> Result<Point> {
    if !curve.is_on_curve(p) {
        return Err(Error::OffCurve);
    }
    let mut cur = p.clone();
    for r in squarefree_primes(m)? {
        cur = tau_unchecked(curve, &cur, r)?;
    }
    Ok(cur)
}

/// A finite subgroup of `E`, embedded at a common level in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub label: u64,
    pub level: Field,
    pub points: Vec<Point>,
}

impl KernelData {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn to_repr(&self) -> PointSetRepr {
        PointSetRepr {
            m: self.label,
            order: self.points.len(),
            level: self.level.degree(),
            points: self.points.iter().map(Point::to_repr).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetRepr {
    pub m: u64,
    pub order: usize,
    pub level: usize,
    pub points: Vec<PointRepr>,
}

fn ratio(curve: &Curve, r: u64) -> BigInt {
    let (q, rem) = curve.count_points_ext(r as u32).div_rem(&curve.count_points_ext(1));
    debug_assert_eq!(rem, BigInt::from(0));
    q
}

/// `G_r = ker tau_{r/1}` by filtering `E(k_r)`, embedded at `target`.
pub fn kernel_g(curve: &Curve, r: u64, target: Field) -> Result<KernelData> {
    let lvl = curve.level(r as usize)?;
    if !lvl.divides(target) {
        return Err(Error::NotSubfield { from: lvl.degree(), to: target.degree() });
    }
    let expected = ratio(curve, r);
    let mut points = Vec::new();
    for p in curve.enumerate_points(lvl)? {
        if tau_unchecked(curve, &p, r)?.is_infinity() {
            points.push(curve.embed_point(&p, target)?);
        }
    }
    if BigInt::from(points.len()) != expected {
        return Err(Error::KernelOrder { r, found: points.len(), expected: expected.to_string() });
    }
    points.sort();
    Ok(KernelData { label: r, level: target, points })
}

/// `Ker pi_m`, built as the direct sum of the `G_r` for primes `r | m`.
pub fn kernel_pi(curve: &Curve, m: u64, target: Field) -> Result<KernelData> {
    let primes = squarefree_primes(m)?;
    let lc = curve.at(target)?;
    let mut sums = vec![Point::infinity(target)];
    for r in primes {
        let g = kernel_g(curve, r, target)?;
        sums = sums.iter().flat_map(|s| g.points.iter().map(|p| lc.add(s, p))).collect();
    }
    sums.sort();
    Ok(KernelData { label: m, level: target, points: sums })
}

/// `X_m` (the union of the `G_r`, `r | m` prime) together with `D_m = (X_m)`.
#[derive(Clone, Debug)]
pub struct SupportSet {
    pub m: u64,
    pub points: Vec<Point>,
    pub divisor: Divisor,
}

impl SupportSet {
    pub fn degree(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn to_repr(&self) -> PointSetRepr {
        PointSetRepr {
            m: self.m,
            order: self.points.len(),
            level: self.divisor.level().degree(),
            points: self.points.iter().map(Point::to_repr).collect(),
        }
    }
}

/// For `m = 1` the union is empty; we take `X_1 = {O}` so that `deg D_1 = 1`.
pub fn support_set(curve: &Curve, m: u64, target: Field) -> Result<SupportSet> {
    let mut set = BTreeSet::new();
    set.insert(Point::infinity(target));
    for r in squarefree_primes(m)? {
        set.extend(kernel_g(curve, r, target)?.points);
    }
    let points: Vec<Point> = set.into_iter().collect();
    let divisor = Divisor::from_points(target, &points)?;
    Ok(SupportSet { m, points, divisor })
}

/// `|G_r| = |E(k_r)| / |E(k)|` for every prime `r | m`.
pub fn kernel_orders(curve: &Curve, m: u64) -> Result<Vec<(u64, BigInt)>> {
    Ok(squarefree_primes(m)?.into_iter().map(|r| (r, ratio(curve, r))).collect())
}

/// Whether every `deg tau_{r/1} = |G_r|`, `r | m`, is prime to `p`.
pub fn check_deg_coprime_p(curve: &Curve, m: u64) -> Result<bool> {
    let p = BigInt::from(curve.base().characteristic());
    Ok(kernel_orders(curve, m)?.iter().all(|(_, g)| g.gcd(&p) == BigInt::from(1)))
}

/// Like [`check_deg_coprime_p`] but reports the first offending factor.
pub fn require_deg_coprime_p(curve: &Curve, m: u64) -> Result<()> {
    let p = curve.base().characteristic();
    for (r, g) in kernel_orders(curve, m)? {
        if (&g % BigInt::from(p)).to_u64() == Some(0) {
            return Err(Error::DegreeNotCoprime { r, order: g.to_u64().unwrap_or(u64::MAX), p });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e0() -> Curve {
        Curve::from_ints(5, 1, 0, 1).unwrap()
    }

    #[test]
    fn squarefree_factorisation() {
        assert_eq!(squarefree_primes(6).unwrap(), vec![2, 3]);
        assert_eq!(squarefree_primes(1).unwrap(), Vec::<u64>::new());
        assert_eq!(squarefree_primes(4).unwrap_err(), Error::NotSquareFree(4));
    }

    #[test]
    fn tau_on_rational_points_is_multiplication() {
        let e = e0();
        let p = e.point_from_ints(e.base(), 2, 2).unwrap();
        assert_eq!(tau_apply(&e, &p, 1).unwrap(), p);
        assert_eq!(tau_apply(&e, &p, 3).unwrap(), e.point_from_ints(e.base(), 4, 0).unwrap());
    }

    #[test]
    fn kernel_orders_of_e0() {
        let e = e0();
        let l6 = e.level(6).unwrap();
        assert_eq!(kernel_g(&e, 1, l6).unwrap().order(), 1);
        let g2 = kernel_g(&e, 2, l6).unwrap();
        let g3 = kernel_g(&e, 3, l6).unwrap();
        assert_eq!((g2.order(), g3.order()), (6, 21));
        let common: Vec<_> = g2.points.iter().filter(|p| g3.points.contains(p)).collect();
        assert_eq!(common, vec![&Point::infinity(l6)]);
        assert_eq!(kernel_pi(&e, 6, l6).unwrap().order(), 126);
        assert_eq!(support_set(&e, 6, l6).unwrap().degree(), 26);
        assert_eq!(support_set(&e, 2, l6).unwrap().degree(), 6);
    }

    #[test]
    fn coprimality_gate() {
        let e = e0();
        assert!(check_deg_coprime_p(&e, 6).unwrap());
        // t = -4: |E(F_5)| = 10, |E(F_{5^5})| = 3050, |G_5| = 305 = 5 * 61
        let ord = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter_map(|(a, b)| Curve::from_ints(5, 1, a, b).ok())
            .find(|c| c.trace() == -4)
            .expect("a curve with trace -4 over F_5");
        assert_eq!(kernel_orders(&ord, 5).unwrap()[0].1, BigInt::from(305));
        assert!(!check_deg_coprime_p(&ord, 5).unwrap());
        assert!(matches!(require_deg_coprime_p(&ord, 5), Err(Error::DegreeNotCoprime { r: 5, order: 305, p: 5 })));
    }
}
