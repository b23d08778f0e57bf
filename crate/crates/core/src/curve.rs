//! Short Weierstrass curves `y^2 = x^3 + ax + b` over `F_q`, `q = p^e`, `p >= 5`,
//! with points living at explicit levels `F_{q^m}` of the field tower.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_field, ElemRepr, Embedding, Field, FieldElem};

/// Largest field scanned exhaustively (point enumeration, trace computation).
pub const ENUMERATION_GUARD: u64 = 10_000_000;

#[derive(Clone)]
pub struct Curve(Arc<CurveInner>);

struct CurveInner {
    a: FieldElem,
    b: FieldElem,
    q: u64,
    t: i64,
    levels: Mutex<HashMap<usize, Arc<LevelCurve>>>,
}

/// The curve's coefficients embedded at one level; the hot-path group law.
#[derive(Clone, Debug)]
pub struct LevelCurve {
    level: Field,
    a: FieldElem,
    b: FieldElem,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    level: Field,
    xy: Option<(FieldElem, FieldElem)>,
}

impl Point {
    pub fn infinity(level: Field) -> Point {
        Point { level, xy: None }
    }

    /// Affine point without an on-curve check; callers must guarantee it.
    pub(crate) fn affine_unchecked(x: FieldElem, y: FieldElem) -> Point {
        Point { level: x.field(), xy: Some((x, y)) }
    }

    pub fn is_infinity(&self) -> bool {
        self.xy.is_none()
    }

    pub fn level(&self) -> Field {
        self.level
    }

    pub fn x(&self) -> Option<&FieldElem> {
        self.xy.as_ref().map(|(x, _)| x)
    }

    pub fn y(&self) -> Option<&FieldElem> {
        self.xy.as_ref().map(|(_, y)| y)
    }

    pub fn coords(&self) -> Option<(&FieldElem, &FieldElem)> {
        self.xy.as_ref().map(|(x, y)| (x, y))
    }

    pub fn to_repr(&self) -> PointRepr {
        match &self.xy {
            None => PointRepr { inf: Some(true), x: None, y: None, level: Some(self.level.degree()) },
            Some((x, y)) => {
                PointRepr { inf: None, x: Some(x.to_repr()), y: Some(y.to_repr()), level: Some(self.level.degree()) }
            }
        }
    }
}

/// Infinity first, then by `x`, then by `y`.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level.degree().cmp(&other.level.degree()).then_with(|| match (&self.xy, &other.xy) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(b),
        })
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.xy {
            None => write!(f, "O"),
            Some((x, y)) => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// JSON form: `{"inf": true}` or `{"x": .., "y": .., "level": degree}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inf: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<ElemRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ElemRepr>,
    /// Absolute degree of the level field over `F_p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: u64,
    pub e: usize,
    pub a: ElemRepr,
    pub b: ElemRepr,
}

impl LevelCurve {
    pub fn level(&self) -> Field {
        self.level
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn rhs(&self, x: &FieldElem) -> FieldElem {
        &(&(x * x) + &self.a) * x + &self.b
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        if p.level != self.level {
            return false;
        }
        match &p.xy {
            None => true,
            Some((x, y)) => y * y == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match &p.xy {
            None => p.clone(),
            Some((x, y)) => Point { level: p.level, xy: Some((x.clone(), -y)) },
        }
    }

    /// Chord-tangent addition. Both points must be at this level.
    pub fn add(&self, p: &Point, q: &Point) -> Point {
        debug_assert!(p.level == self.level && q.level == self.level);
        let ((x1, y1), (x2, y2)) = match (&p.xy, &q.xy) {
            (None, _) => return q.clone(),
            (_, None) => return p.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::infinity(self.level);
            }
            self.tangent_slope(x1, y1)
        } else {
            (y2 - y1) * (x2 - x1).inv().expect("distinct x")
        };
        let x3 = &(&(&lambda * &lambda) - x1) - x2;
        let y3 = &(&lambda * &(x1 - &x3)) - y1;
        Point { level: self.level, xy: Some((x3, y3)) }
    }

    pub(crate) fn tangent_slope(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let three = self.level.from_int(3);
        let num = &(&three * &x.square()) + &self.a;
        num * (y + y).inv().expect("tangent at a non-2-torsion point")
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, n: i64, p: &Point) -> Point {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::infinity(self.level);
        let mut cur = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &cur);
            }
            k >>= 1;
            if k > 0 {
                cur = self.double(&cur);
            }
        }
        acc
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Point>>(&self, points: I) -> Point {
        points.into_iter().fold(Point::infinity(self.level), |acc, p| self.add(&acc, p))
    }
}

fn small_characteristic_check(p: u32) -> Result<()> {
    if p < 5 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    Ok(())
}

impl Curve {
    /// Builds `y^2 = x^3 + ax + b` over the field of `a` and `b`, computing the
    /// Frobenius trace by counting `E(F_q)`.
    pub fn new(a: FieldElem, b: FieldElem) -> Result<Curve> {
        let base = a.field();
        if b.field() != base {
            return Err(Error::MixedFields);
        }
        small_characteristic_check(base.characteristic())?;
        let disc = &(&base.from_int(4) * &a.pow(3)) + &(&base.from_int(27) * &b.square());
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let q = base.size().filter(|&q| q <= ENUMERATION_GUARD).ok_or_else(|| Error::GuardExceeded {
            what: "point count of the base field",
            size: base.order().to_string(),
            guard: ENUMERATION_GUARD,
        })?;
        let lc = LevelCurve { level: base, a: a.clone(), b: b.clone() };
        let mut count: i64 = 1;
        for x in base.elements() {
            let r = lc.rhs(&x);
            count += if r.is_zero() {
                1
            } else if r.is_square()? {
                2
            } else {
                0
            };
        }
        let t = q as i64 + 1 - count;
        debug_assert!((t as i128).pow(2) <= 4 * q as i128, "Hasse bound");
        let mut levels = HashMap::new();
        levels.insert(base.degree(), Arc::new(lc));
        Ok(Curve(Arc::new(CurveInner { a, b, q, t, levels: Mutex::new(levels) })))
    }

    /// Convenience constructor from integer coefficients in the prime field
    /// `F_p` (`e = 1`) or in `F_{p^e}` via their base-`p` indices.
    pub fn from_ints(p: u64, e: usize, a: i64, b: i64) -> Result<Curve> {
        let f = make_field(p, e)?;
        Curve::new(f.from_int(a), f.from_int(b))
    }

    pub fn from_spec(spec: &CurveSpec) -> Result<Curve> {
        let f = make_field(spec.p, spec.e)?;
        Curve::new(f.parse(&spec.a)?, f.parse(&spec.b)?)
    }

    pub fn spec(&self) -> CurveSpec {
        let base = self.base();
        CurveSpec { p: base.characteristic() as u64, e: base.degree(), a: self.0.a.to_repr(), b: self.0.b.to_repr() }
    }

    pub fn a(&self) -> &FieldElem {
        &self.0.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.0.b
    }

    pub fn base(&self) -> Field {
        self.0.a.field()
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn trace(&self) -> i64 {
        self.0.t
    }

    /// The level `F_{q^m}`.
    pub fn level(&self, m: usize) -> Result<Field> {
        let base = self.base();
        make_field(base.characteristic() as u64, base.degree() * m)
    }

    /// Coefficients embedded at `level`, cached.
    pub fn at(&self, level: Field) -> Result<Arc<LevelCurve>> {
        let base = self.base();
        if !base.divides(level) {
            return Err(Error::NotSubfield { from: base.degree(), to: level.degree() });
        }
        if let Some(lc) = self.0.levels.lock().expect("level cache poisoned").get(&level.degree()) {
            return Ok(lc.clone());
        }
        let emb = Embedding::new(base, level)?;
        let lc = Arc::new(LevelCurve { level, a: emb.apply(&self.0.a)?, b: emb.apply(&self.0.b)? });
        self.0.levels.lock().expect("level cache poisoned").insert(level.degree(), lc.clone());
        Ok(lc)
    }

    fn at_point(&self, p: &Point) -> Result<Arc<LevelCurve>> {
        self.at(p.level)
    }

    /// Validated affine point.
    pub fn point(&self, x: FieldElem, y: FieldElem) -> Result<Point> {
        if x.field() != y.field() {
            return Err(Error::MixedFields);
        }
        let lc = self.at(x.field())?;
        let p = Point::affine_unchecked(x, y);
        if !lc.is_on_curve(&p) {
            return Err(Error::OffCurve);
        }
        Ok(p)
    }

    /// Affine point over the prime field from integer coordinates.
    pub fn point_from_ints(&self, level: Field, x: i64, y: i64) -> Result<Point> {
        self.point(level.from_int(x), level.from_int(y))
    }

    pub fn parse_point(&self, repr: &PointRepr) -> Result<Point> {
        let base = self.base();
        let level = match repr.level {
            Some(d) => make_field(base.characteristic() as u64, d)?,
            None => base,
        };
        if repr.inf == Some(true) {
            return Ok(Point::infinity(level));
        }
        match (&repr.x, &repr.y) {
            (Some(x), Some(y)) => self.point(level.parse(x)?, level.parse(y)?),
            _ => Err(Error::Parse("point needs either inf or both x and y".into())),
        }
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        self.at_point(p).map(|lc| lc.is_on_curve(p)).unwrap_or(false)
    }

    fn same_level(&self, p: &Point, q: &Point) -> Result<Arc<LevelCurve>> {
        if p.level != q.level {
            return Err(Error::MixedLevels);
        }
        self.at_point(p)
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        Ok(self.same_level(p, q)?.add(p, q))
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Result<Point> {
        Ok(self.same_level(p, q)?.sub(p, q))
    }

    pub fn neg(&self, p: &Point) -> Point {
        match &p.xy {
            None => p.clone(),
            Some((x, y)) => Point { level: p.level, xy: Some((x.clone(), -y)) },
        }
    }

    pub fn double(&self, p: &Point) -> Result<Point> {
        Ok(self.at_point(p)?.double(p))
    }

    pub fn scalar_mul(&self, n: i64, p: &Point) -> Result<Point> {
        Ok(self.at_point(p)?.scalar_mul(n, p))
    }

    /// `(x^{q^i}, y^{q^i})`.
    pub fn frobenius_point(&self, p: &Point, i: u64) -> Result<Point> {
        match &p.xy {
            None => Ok(p.clone()),
            Some((x, y)) => Ok(Point {
                level: p.level,
                xy: Some((x.frobenius_power(self.0.q, i)?, y.frobenius_power(self.0.q, i)?)),
            }),
        }
    }

    /// `|E(F_{q^m})| = q^m + 1 - s_m` with `s_m = t s_{m-1} - q s_{m-2}`.
    pub fn count_points_ext(&self, m: u32) -> BigInt {
        let t = BigInt::from(self.0.t);
        let q = BigInt::from(self.0.q);
        let (mut s_prev, mut s) = (BigInt::from(2), t.clone());
        for _ in 1..m {
            let next = &t * &s - &q * &s_prev;
            s_prev = std::mem::replace(&mut s, next);
        }
        if m == 0 {
            s = s_prev;
        }
        q.pow(m) + 1 - s
    }

    /// All points over `level` in canonical order, infinity first.
    pub fn enumerate_points(&self, level: Field) -> Result<Vec<Point>> {
        let lc = self.at(level)?;
        let size = level.size().filter(|&s| s <= ENUMERATION_GUARD).ok_or_else(|| Error::GuardExceeded {
            what: "point enumeration",
            size: level.order().to_string(),
            guard: ENUMERATION_GUARD,
        })?;
        // roots[i] = 1 + index of the smaller square root of element i, or 0
        let mut roots = vec![0u32; size as usize];
        for y in level.elements() {
            let yi = y.index().expect("guarded size") as u32;
            let sq = y.square().index().expect("guarded size") as usize;
            if roots[sq] == 0 {
                roots[sq] = yi + 1;
            }
        }
        let mut pts = vec![Point::infinity(level)];
        let affine: Vec<Point> = (0..size)
            .into_par_iter()
            .flat_map_iter(|xi| {
                let x = level.from_index(xi);
                let r = lc.rhs(&x);
                let root = roots[r.index().expect("guarded size") as usize];
                let mut out = Vec::new();
                if root != 0 {
                    let y = level.from_index(root as u64 - 1);
                    if y.is_zero() {
                        out.push(Point::affine_unchecked(x, y));
                    } else {
                        let ny = -&y;
                        let (lo, hi) = if y < ny { (y, ny) } else { (ny, y) };
                        out.push(Point::affine_unchecked(x.clone(), lo));
                        out.push(Point::affine_unchecked(x, hi));
                    }
                }
                out
            })
            .collect();
        pts.extend(affine);
        Ok(pts)
    }

    /// Random affine point: random `x` until `x^3 + ax + b` is a square, canonical
    /// root, then a coin flip for the sign.
    pub fn random_point<R: Rng + ?Sized>(&self, level: Field, rng: &mut R) -> Result<Point> {
        let lc = self.at(level)?;
        loop {
            let x = level.random(rng);
            let r = lc.rhs(&x);
            if let Some(y) = r.sqrt()? {
                let y = if rng.gen::<bool>() { -y } else { y };
                return Ok(Point::affine_unchecked(x, y));
            }
        }
    }

    pub fn random_point_seeded(&self, level: Field, seed: u64) -> Result<Point> {
        self.random_point(level, &mut crate::seed::rng_from(seed))
    }

    /// Group-law sum of the divisor's points weighted by multiplicity.
    pub fn group_sum(&self, d: &Divisor) -> Result<Point> {
        let lc = self.at(d.level)?;
        let mut acc = Point::infinity(d.level);
        for (p, &m) in &d.entries {
            acc = lc.add(&acc, &lc.scalar_mul(m as i64, p));
        }
        Ok(acc)
    }

    pub fn sum_points(&self, level: Field, points: &[Point]) -> Result<Point> {
        if points.iter().any(|p| p.level != level) {
            return Err(Error::MixedLevels);
        }
        Ok(self.at(level)?.sum(points))
    }

    /// Views a point at a higher level of the tower.
    pub fn embed_point(&self, p: &Point, target: Field) -> Result<Point> {
        if p.level == target {
            return Ok(p.clone());
        }
        match &p.xy {
            None => Ok(Point::infinity(target)),
            Some((x, y)) => {
                let emb = Embedding::new(p.level, target)?;
                Ok(Point::affine_unchecked(emb.apply(x)?, emb.apply(y)?))
            }
        }
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}x + {} over {}", self.0.a, self.0.b, self.base())
    }
}

/// Effective divisor: points at one level with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    level: Field,
    entries: BTreeMap<Point, u32>,
}

impl Divisor {
    pub fn zero(level: Field) -> Divisor {
        Divisor { level, entries: BTreeMap::new() }
    }

    /// Reduced divisor `(X)`.
    pub fn from_points<'a, I: IntoIterator<Item = &'a Point>>(level: Field, points: I) -> Result<Divisor> {
        let mut d = Divisor::zero(level);
        for p in points {
            d.add_point(p.clone(), 1)?;
        }
        Ok(d)
    }

    pub fn add_point(&mut self, p: Point, mult: u32) -> Result<()> {
        if p.level != self.level {
            return Err(Error::MixedLevels);
        }
        if mult > 0 {
            *self.entries.entry(p).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn with_point(mut self, p: Point, mult: u32) -> Result<Divisor> {
        self.add_point(p, mult)?;
        Ok(self)
    }

    pub fn plus(&self, other: &Divisor) -> Result<Divisor> {
        let mut d = self.clone();
        for (p, &m) in &other.entries {
            d.add_point(p.clone(), m)?;
        }
        Ok(d)
    }

    pub fn level(&self) -> Field {
        self.level
    }

    pub fn degree(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    pub fn multiplicity(&self, p: &Point) -> u32 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.entries.contains_key(p)
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Point, u32)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn to_repr(&self) -> Vec<DivisorEntry> {
        self.entries.iter().map(|(p, &m)| DivisorEntry { point: p.to_repr(), mult: m }).collect()
    }

    pub fn parse(curve: &Curve, level: Field, repr: &[DivisorEntry]) -> Result<Divisor> {
        let mut d = Divisor::zero(level);
        for e in repr {
            let p = curve.parse_point(&e.point)?;
            d.add_point(p, e.mult)?;
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub point: PointRepr,
    pub mult: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e0() -> Curve {
        Curve::from_ints(5, 1, 0, 1).unwrap()
    }

    #[test]
    fn e0_over_f5() {
        let e = e0();
        assert_eq!(e.trace(), 0);
        let f5 = e.base();
        let pts = e.enumerate_points(f5).unwrap();
        let listed: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(listed, ["O", "(0, 1)", "(0, 4)", "(2, 2)", "(2, 3)", "(4, 0)"]);
    }

    #[test]
    fn singular_and_small_characteristic() {
        assert_eq!(Curve::from_ints(5, 1, 0, 0).unwrap_err(), Error::SingularCurve);
        assert_eq!(Curve::from_ints(3, 1, 1, 1).unwrap_err(), Error::UnsupportedCharacteristic(3));
    }

    #[test]
    fn group_law_examples() {
        let e = e0();
        let f5 = e.base();
        let p01 = e.point_from_ints(f5, 0, 1).unwrap();
        let p04 = e.point_from_ints(f5, 0, 4).unwrap();
        let p22 = e.point_from_ints(f5, 2, 2).unwrap();
        assert!(e.add(&p01, &p04).unwrap().is_infinity());
        assert_eq!(e.add(&p01, &p22).unwrap(), e.point_from_ints(f5, 2, 3).unwrap());
        assert_eq!(e.scalar_mul(2, &p22).unwrap(), p04);
        assert!(e.scalar_mul(6, &p22).unwrap().is_infinity());
    }

    #[test]
    fn off_curve_point_rejected() {
        let e = e0();
        assert_eq!(e.point_from_ints(e.base(), 1, 1).unwrap_err(), Error::OffCurve);
    }

    #[test]
    fn counts_over_extensions() {
        let e = e0();
        assert_eq!(e.count_points_ext(1), BigInt::from(6));
        assert_eq!(e.count_points_ext(2), BigInt::from(36));
        assert_eq!(e.count_points_ext(3), BigInt::from(126));
        for m in 1..=3 {
            let lvl = e.level(m).unwrap();
            assert_eq!(BigInt::from(e.enumerate_points(lvl).unwrap().len()), e.count_points_ext(m as u32));
        }
    }

    #[test]
    fn mixed_levels_rejected() {
        let e = e0();
        let a = Point::infinity(e.base());
        let b = Point::infinity(e.level(2).unwrap());
        assert_eq!(e.add(&a, &b).unwrap_err(), Error::MixedLevels);
    }

    #[test]
    fn group_sum_of_divisors() {
        let e = e0();
        let f5 = e.base();
        let p22 = e.point_from_ints(f5, 2, 2).unwrap();
        let d = Divisor::zero(f5).with_point(p22, 2).unwrap();
        assert_eq!(e.group_sum(&d).unwrap(), e.point_from_ints(f5, 0, 4).unwrap());
        assert!(e.group_sum(&Divisor::zero(f5)).unwrap().is_infinity());
    }

    #[test]
    fn point_json_round_trip() {
        let e = e0();
        let lvl = e.level(2).unwrap();
        let p = e.random_point_seeded(lvl, 3).unwrap();
        let s = serde_json::to_string(&p.to_repr()).unwrap();
        let back: PointRepr = serde_json::from_str(&s).unwrap();
        assert_eq!(e.parse_point(&back).unwrap(), p);
    }
}
