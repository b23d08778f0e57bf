//! Riemann-Roch spaces on an elliptic curve.
//!
//! A function is stored as `g * prod l_i^{e_i}` where `g` is a polynomial in
//! the monomial basis `x^i y^j` (`j <= 1`) of `L(M (O))` ordered by pole order
//! `0, 2, 3, ..., M`, and each `l_i = u x + v y + w` is a line. Bases of
//! `L(D)` share one line product `1/h` with `h` produced by chord-tangent
//! reduction of `D`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Divisor, LevelCurve, Point};
use crate::error::{Error, Result};
use crate::field::{ElemRepr, Field, FieldElem};
use crate::linalg::{dot, Matrix};

/// Pole orders at `O` of the monomial basis of `L(M (O))`.
pub fn pole_orders(m: usize) -> Vec<usize> {
    std::iter::once(0).chain(2..=m).collect()
}

/// `(i, j)` with `x^i y^j` of the given pole order `2i + 3j`.
fn monomial(order: usize) -> (usize, usize) {
    if order.is_multiple_of(2) {
        (order / 2, 0)
    } else {
        ((order - 3) / 2, 1)
    }
}

/// Values of the monomial basis of `L(M (O))` at an affine point.
pub fn monomial_values(x: &FieldElem, y: &FieldElem, m: usize) -> Vec<FieldElem> {
    let orders = pole_orders(m);
    let max_i = m / 2;
    let mut xp = Vec::with_capacity(max_i + 1);
    xp.push(x.field().one());
    for i in 1..=max_i {
        xp.push(&xp[i - 1] * x);
    }
    orders
        .into_iter()
        .map(|o| match monomial(o) {
            (i, 0) => xp[i].clone(),
            (i, _) => &xp[i] * y,
        })
        .collect()
}

/// The line `u x + v y + w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub u: FieldElem,
    pub v: FieldElem,
    pub w: FieldElem,
}

impl Line {
    pub fn vertical(x0: &FieldElem) -> Line {
        let f = x0.field();
        Line { u: f.one(), v: f.zero(), w: -x0 }
    }

    /// `y - lambda (x - x0) - y0`.
    pub fn through(lambda: &FieldElem, x0: &FieldElem, y0: &FieldElem) -> Line {
        let f = x0.field();
        Line { u: -lambda, v: f.one(), w: &(lambda * x0) - y0 }
    }

    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        &(&(&self.u * x) + &(&self.v * y)) + &self.w
    }

    /// Pole order at `O`.
    pub fn pole_order(&self) -> i64 {
        if !self.v.is_zero() {
            3
        } else if !self.u.is_zero() {
            2
        } else {
            0
        }
    }

    fn leading(&self) -> &FieldElem {
        if !self.v.is_zero() {
            &self.v
        } else if !self.u.is_zero() {
            &self.u
        } else {
            &self.w
        }
    }

    /// Order of vanishing at a point (negative at `O`).
    pub fn order_at(&self, lc: &LevelCurve, p: &Point) -> i64 {
        let Some((x, y)) = p.coords() else {
            return -self.pole_order();
        };
        if !self.eval(x, y).is_zero() {
            return 0;
        }
        if self.v.is_zero() {
            return if y.is_zero() { 2 } else { 1 };
        }
        // y = lam x + nu; multiplicity of x as a root of x^3 + ax + b - (lam x + nu)^2
        let vinv = self.v.inv().expect("nonzero");
        let lam = -(&self.u * &vinv);
        let nu = -(&self.w * &vinv);
        let f = x.field();
        let c2 = -(&lam * &lam);
        let c1 = lc.a() - &(&f.from_int(2) * &(&lam * &nu));
        // c(x) = x^3 + c2 x^2 + c1 x + c0, c(x) = 0 already
        let d1 = &(&(&f.from_int(3) * &x.square()) + &(&f.from_int(2) * &(&c2 * x))) + &c1;
        if !d1.is_zero() {
            return 1;
        }
        let d2 = &(&f.from_int(6) * x) + &(&f.from_int(2) * &c2);
        if !d2.is_zero() {
            2
        } else {
            3
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRepr(pub ElemRepr, pub ElemRepr, pub ElemRepr, pub i64);

/// `prod l_i^{e_i}` with signed exponents; factors are kept merged and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineProduct {
    level: Field,
    factors: Vec<(Line, i64)>,
    /// The curve's `a`, needed to expand factors at points where they cancel.
    curve_a: Option<FieldElem>,
}

impl LineProduct {
    pub fn one(level: Field) -> LineProduct {
        LineProduct { level, factors: Vec::new(), curve_a: None }
    }

    pub fn from_factors(level: Field, factors: impl IntoIterator<Item = (Line, i64)>) -> LineProduct {
        let mut merged: BTreeMap<Line, i64> = BTreeMap::new();
        for (l, e) in factors {
            *merged.entry(l).or_insert(0) += e;
        }
        LineProduct { level, factors: merged.into_iter().filter(|(_, e)| *e != 0).collect(), curve_a: None }
    }

    pub fn level(&self) -> Field {
        self.level
    }

    pub fn factors(&self) -> &[(Line, i64)] {
        &self.factors
    }

    pub fn inverse(&self) -> LineProduct {
        LineProduct {
            level: self.level,
            factors: self.factors.iter().map(|(l, e)| (l.clone(), -e)).collect(),
            curve_a: self.curve_a.clone(),
        }
    }

    /// Attaches the curve coefficient `a` so that values at points where
    /// factors cancel can be recovered from local expansions.
    pub fn on_curve(mut self, a: FieldElem) -> LineProduct {
        self.curve_a = Some(a);
        self
    }

    pub fn curve_a(&self) -> Option<&FieldElem> {
        self.curve_a.as_ref()
    }

    /// Order and leading coefficient at an affine point, in the uniformizer
    /// of [`local_xy`]. Needs the curve coefficient.
    fn local(&self, x0: &FieldElem, y0: &FieldElem) -> Result<(i64, FieldElem)> {
        let a = self.curve_a.as_ref().ok_or(Error::Indeterminate)?;
        let (xs, ys) = local_xy(a, x0, y0, LOCAL_PRECISION);
        let mut ord = 0;
        let mut num = self.level.one();
        let mut den = self.level.one();
        for (l, e) in &self.factors {
            let s: Vec<FieldElem> = xs.iter().zip(&ys).map(|(x, y)| &(&l.u * x) + &(&l.v * y)).collect();
            let mut s = s;
            s[0] += &l.w;
            let (o, lead) = series_order(&s).expect("a line does not vanish to high order on the curve");
            ord += e * o as i64;
            let vp = lead.pow(e.unsigned_abs());
            if *e > 0 {
                num *= &vp;
            } else {
                den *= &vp;
            }
        }
        Ok((ord, num * den.inv().expect("leading coefficients are nonzero")))
    }

    pub fn pole_order(&self) -> i64 {
        self.factors.iter().map(|(l, e)| e * l.pole_order()).sum()
    }

    /// Value at an affine point. A vanishing factor with negative exponent is
    /// [`Error::Indeterminate`]; otherwise a vanishing factor gives zero.
    pub fn eval_affine(&self, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
        let f = self.level;
        let mut num = f.one();
        let mut den = f.one();
        let mut zero = false;
        for (l, e) in &self.factors {
            let v = l.eval(x, y);
            if v.is_zero() {
                if *e < 0 {
                    return Err(Error::Indeterminate);
                }
                zero = true;
                continue;
            }
            let vp = v.pow(e.unsigned_abs());
            if *e > 0 {
                num *= &vp;
            } else {
                den *= &vp;
            }
        }
        if zero {
            return Ok(f.zero());
        }
        Ok(num * den.inv().expect("nonzero factors"))
    }

    /// Leading coefficient at `O` with respect to the uniformizer `x/y`.
    fn leading(&self) -> FieldElem {
        let f = self.level;
        let mut num = f.one();
        let mut den = f.one();
        for (l, e) in &self.factors {
            let vp = l.leading().pow(e.unsigned_abs());
            if *e > 0 {
                num *= &vp;
            } else {
                den *= &vp;
            }
        }
        num * den.inv().expect("leading coefficients are nonzero")
    }

    /// Formal divisor restricted to `points` (which should include `O`).
    pub fn divisor_on(&self, lc: &LevelCurve, points: &[Point]) -> BTreeMap<Point, i64> {
        let mut out = BTreeMap::new();
        for p in points {
            let ord: i64 = self.factors.iter().map(|(l, e)| e * l.order_at(lc, p)).sum();
            if ord != 0 {
                out.insert(p.clone(), ord);
            }
        }
        out
    }

    pub fn to_repr(&self) -> Vec<LineRepr> {
        self.factors.iter().map(|(l, e)| LineRepr(l.u.to_repr(), l.v.to_repr(), l.w.to_repr(), *e)).collect()
    }

    pub fn parse(level: Field, repr: &[LineRepr]) -> Result<LineProduct> {
        let mut factors = Vec::with_capacity(repr.len());
        for LineRepr(u, v, w, e) in repr {
            factors.push((Line { u: level.parse(u)?, v: level.parse(v)?, w: level.parse(w)? }, *e));
        }
        Ok(LineProduct::from_factors(level, factors))
    }
}

/// `g * lines` with `g` in the monomial basis of `L(M (O))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub m: usize,
    pub numerator: Vec<FieldElem>,
    pub lines: LineProduct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRepr {
    #[serde(rename = "M")]
    pub m: usize,
    pub numerator: Vec<ElemRepr>,
    pub lines: Vec<LineRepr>,
    /// Curve coefficient `a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ElemRepr>,
}

impl RationalFunction {
    pub fn constant(level: Field, c: FieldElem) -> RationalFunction {
        RationalFunction { m: 0, numerator: vec![c], lines: LineProduct::one(level) }
    }

    pub fn level(&self) -> Field {
        self.lines.level
    }

    fn numerator_pole_order(&self) -> Option<(usize, &FieldElem)> {
        pole_orders(self.m).into_iter().zip(&self.numerator).rfind(|(_, c)| !c.is_zero())
    }

    pub fn to_repr(&self) -> FunctionRepr {
        FunctionRepr {
            m: self.m,
            numerator: self.numerator.iter().map(FieldElem::to_repr).collect(),
            lines: self.lines.to_repr(),
            a: self.lines.curve_a.as_ref().map(FieldElem::to_repr),
        }
    }

    pub fn parse(level: Field, repr: &FunctionRepr) -> Result<RationalFunction> {
        let numerator = repr.numerator.iter().map(|c| level.parse(c)).collect::<Result<Vec<_>>>()?;
        if numerator.len() != pole_orders(repr.m).len() {
            return Err(Error::Parse(format!("numerator of length {} for M = {}", numerator.len(), repr.m)));
        }
        let mut lines = LineProduct::parse(level, &repr.lines)?;
        if let Some(a) = &repr.a {
            lines = lines.on_curve(level.parse(a)?);
        }
        Ok(RationalFunction { m: repr.m, numerator, lines })
    }
}

/// `f(z)`.
pub fn evaluate(f: &RationalFunction, z: &Point) -> Result<FieldElem> {
    if z.level() != f.level() {
        return Err(Error::MixedLevels);
    }
    match z.coords() {
        Some((x, y)) => match f.lines.eval_affine(x, y) {
            Ok(den) => Ok(dot(&f.numerator, &monomial_values(x, y, f.m)) * den),
            Err(Error::Indeterminate) => evaluate_local(f, x, y),
            Err(e) => Err(e),
        },
        None => {
            let Some((ord, lead)) = f.numerator_pole_order() else {
                return Ok(f.level().zero());
            };
            let total = ord as i64 + f.lines.pole_order();
            match total {
                t if t > 0 => Err(Error::Pole),
                t if t < 0 => Ok(f.level().zero()),
                _ => Ok(lead * &f.lines.leading()),
            }
        }
    }
}

const LOCAL_PRECISION: usize = 8;

fn series_mul(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len();
    let mut out = vec![a[0].field().zero(); n];
    for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, bj) in b.iter().take(n - i).enumerate() {
            out[i + j] += &(ai * bj);
        }
    }
    out
}

/// First nonzero coefficient, if any within the precision.
fn series_order(s: &[FieldElem]) -> Option<(usize, FieldElem)> {
    s.iter().position(|c| !c.is_zero()).map(|i| (i, s[i].clone()))
}

/// Expansions of `x` and `y` at the affine point `(x0, y0)` of
/// `y^2 = x^3 + a x + b`, in the uniformizer `x - x0` when `y0 != 0` and `y`
/// otherwise.
fn local_xy(a: &FieldElem, x0: &FieldElem, y0: &FieldElem, prec: usize) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let f = x0.field();
    // y^2 = F(s) with s = x - x0
    let f1 = &(&f.from_int(3) * &x0.square()) + a;
    let f2 = &f.from_int(3) * x0;
    let mut xs = vec![f.zero(); prec];
    let mut ys = vec![f.zero(); prec];
    xs[0] = x0.clone();
    if !y0.is_zero() {
        xs[1] = f.one();
        let fk = [y0.square(), f1, f2, f.one()];
        let inv2y = (&f.from_int(2) * y0).inv().expect("y0 != 0");
        ys[0] = y0.clone();
        for k in 1..prec {
            let mut c = fk.get(k).cloned().unwrap_or_else(|| f.zero());
            for i in 1..k {
                c -= &(&ys[i] * &ys[k - i]);
            }
            ys[k] = c * &inv2y;
        }
    } else {
        // t^2 = f1 s + f2 s^2 + s^3, solved for s by fixed-point iteration
        ys[1] = f.one();
        let inv_f1 = f1.inv().expect("nonsingular curve");
        let mut t2 = vec![f.zero(); prec];
        if prec > 2 {
            t2[2] = f.one();
        }
        let mut s = vec![f.zero(); prec];
        for _ in 0..prec {
            let s2 = series_mul(&s, &s);
            let s3 = series_mul(&s2, &s);
            s = (0..prec).map(|k| &(&(&t2[k] - &(&f2 * &s2[k])) - &s3[k]) * &inv_f1).collect();
        }
        xs[1..prec].clone_from_slice(&s[1..prec]);
    }
    (xs, ys)
}

/// `f(x0, y0)` through local expansions, for points where factors of the line
/// product cancel.
fn evaluate_local(f: &RationalFunction, x0: &FieldElem, y0: &FieldElem) -> Result<FieldElem> {
    let level = f.level();
    let (ord_h, lead_h) = f.lines.local(x0, y0)?;
    let a = f.lines.curve_a.as_ref().expect("checked by local");
    let (xs, ys) = local_xy(a, x0, y0, LOCAL_PRECISION);
    let mut xp = vec![{
        let mut one = vec![level.zero(); LOCAL_PRECISION];
        one[0] = level.one();
        one
    }];
    let mut g = vec![level.zero(); LOCAL_PRECISION];
    for (o, c) in pole_orders(f.m).into_iter().zip(&f.numerator) {
        if c.is_zero() {
            continue;
        }
        let (i, j) = monomial(o);
        while xp.len() <= i {
            let next = series_mul(xp.last().expect("nonempty"), &xs);
            xp.push(next);
        }
        let term = if j == 0 { xp[i].clone() } else { series_mul(&xp[i], &ys) };
        for (gk, tk) in g.iter_mut().zip(term) {
            *gk += &(c * &tk);
        }
    }
    let Some((ord_g, lead_g)) = series_order(&g) else {
        return Ok(level.zero());
    };
    match ord_g as i64 + ord_h {
        t if t > 0 => Ok(level.zero()),
        0 => Ok(lead_g * lead_h),
        _ => Err(Error::Pole),
    }
}

/// `(h, Q)` with `div(h) = D - d (O)` if `D` sums to `O` (then `Q = O`), and
/// `div(h) = D + (Q) - (d+1) (O)` with `Q = -sum(D)` otherwise.
pub fn principal_function(curve: &Curve, d: &Divisor) -> Result<(LineProduct, Point)> {
    if d.degree() == 0 {
        return Err(Error::Precondition("principal_function needs a divisor of positive degree".into()));
    }
    let level = d.level();
    let lc = curve.at(level)?;
    let mut factors: Vec<(Line, i64)> = Vec::new();
    let mut acc = Point::infinity(level);
    // Miller: div(h_k) = sum_{i<=k} (P_i) - (R_k) - (k-1)(O)
    for (p, mult) in d.entries() {
        for _ in 0..mult {
            if acc.is_infinity() || p.is_infinity() {
                acc = lc.add(&acc, p);
                continue;
            }
            let (x1, y1) = acc.coords().expect("affine");
            let (x2, y2) = p.coords().expect("affine");
            let next = lc.add(&acc, p);
            if next.is_infinity() {
                factors.push((Line::vertical(x1), 1));
            } else {
                let lambda =
                    if x1 == x2 { lc.tangent_slope(x1, y1) } else { (y2 - y1) * (x2 - x1).inv().expect("distinct x") };
                factors.push((Line::through(&lambda, x1, y1), 1));
                factors.push((Line::vertical(next.x().expect("affine")), -1));
            }
            acc = next;
        }
    }
    let q = lc.neg(&acc);
    if let Some(xs) = acc.x() {
        factors.push((Line::vertical(xs), 1));
    }
    Ok((LineProduct::from_factors(level, factors).on_curve(lc.a().clone()), q))
}

/// A basis of `L(D)` (or `L_0(D)`): functions `g_i / h` sharing `1/h`.
#[derive(Clone, Debug)]
pub struct RRBasis {
    pub divisor: Divisor,
    pub m: usize,
    pub denominator: LineProduct,
    /// `numerators[i]` holds `g_i` in the monomial basis of `L(m (O))`.
    pub numerators: Vec<Vec<FieldElem>>,
    /// For `L_0(D)`: the point where all functions vanish, and the basis
    /// vectors expressed in the parent `L(D)` basis.
    pub base_point: Option<Point>,
    pub parent_coords: Option<Matrix>,
}

impl RRBasis {
    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn level(&self) -> Field {
        self.denominator.level
    }

    pub fn function(&self, i: usize) -> RationalFunction {
        RationalFunction { m: self.m, numerator: self.numerators[i].clone(), lines: self.denominator.clone() }
    }

    pub fn functions(&self) -> Vec<RationalFunction> {
        (0..self.dim()).map(|i| self.function(i)).collect()
    }

    /// The function with the given coordinates.
    pub fn combination(&self, coords: &[FieldElem]) -> RationalFunction {
        assert_eq!(coords.len(), self.dim());
        let mut num = vec![self.level().zero(); pole_orders(self.m).len()];
        for (c, row) in coords.iter().zip(&self.numerators) {
            if c.is_zero() {
                continue;
            }
            for (n, r) in num.iter_mut().zip(row) {
                *n += &(c * r);
            }
        }
        RationalFunction { m: self.m, numerator: num, lines: self.denominator.clone() }
    }

    /// Values of every basis function at `z`.
    pub fn eval_point(&self, z: &Point) -> Result<Vec<FieldElem>> {
        if z.level() != self.level() {
            return Err(Error::MixedLevels);
        }
        match z.coords() {
            Some((x, y)) => match self.denominator.eval_affine(x, y) {
                Ok(den) => {
                    let mono = monomial_values(x, y, self.m);
                    Ok(self.numerators.iter().map(|g| dot(g, &mono) * &den).collect())
                }
                Err(Error::Indeterminate) => self.functions().iter().map(|f| evaluate(f, z)).collect(),
                Err(e) => Err(e),
            },
            None => self.functions().iter().map(|f| evaluate(f, z)).collect(),
        }
    }

    pub fn eval_combination(&self, coords: &[FieldElem], z: &Point) -> Result<FieldElem> {
        Ok(dot(coords, &self.eval_point(z)?))
    }

    /// `dim x |points|` matrix of values.
    pub fn evaluation_matrix(&self, points: &[Point]) -> Result<Matrix> {
        let cols: Vec<Vec<FieldElem>> = points.iter().map(|z| self.eval_point(z)).collect::<Result<_>>()?;
        let mut m = Matrix::zeros(self.level(), self.dim(), points.len());
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Coordinates of the function taking `values` at `points`, if it lies in
    /// the span and the points separate the basis.
    pub fn interpolate(&self, points: &[Point], values: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let v = self.evaluation_matrix(points)?;
        v.solve_left_unique(values)
            .ok_or_else(|| Error::Singular("interpolation nodes do not determine a unique element".into()))
    }

    /// Coordinates in this `L_0` basis of an `L(D)` coordinate vector that
    /// vanishes at the base point.
    pub fn from_parent_coords(&self, parent: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let pc = self.parent_coords.as_ref().ok_or_else(|| Error::Precondition("not an L_0 basis".into()))?;
        pc.solve_left_unique(parent)
            .ok_or_else(|| Error::Precondition("vector does not vanish at the base point".into()))
    }

    pub fn to_parent_coords(&self, coords: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let pc = self.parent_coords.as_ref().ok_or_else(|| Error::Precondition("not an L_0 basis".into()))?;
        Ok(pc.vec_mul(coords))
    }
}

/// Monomial basis of `L(d (O))` at `level`.
pub fn lbasis_o(curve: &Curve, level: Field, d: usize) -> Result<RRBasis> {
    if d == 0 {
        return Err(Error::Precondition("L(d O) needs d >= 1".into()));
    }
    curve.at(level)?;
    let divisor = Divisor::zero(level).with_point(Point::infinity(level), d as u32)?;
    let numerators = Matrix::identity(level, d).to_rows();
    Ok(RRBasis {
        divisor,
        m: d,
        denominator: LineProduct::one(level),
        numerators,
        base_point: None,
        parent_coords: None,
    })
}

/// Basis of `L(D)` for effective `D` of positive degree.
pub fn lbasis(curve: &Curve, d: &Divisor) -> Result<RRBasis> {
    let deg = d.degree() as usize;
    let level = d.level();
    let (h, q) = principal_function(curve, d)?;
    let (m, numerators) = match q.coords() {
        None => (deg, Matrix::identity(level, deg).to_rows()),
        Some((x, y)) => {
            // g in L((d+1) O) with g(Q) = 0
            let row = monomial_values(x, y, deg + 1);
            (deg + 1, Matrix::from_rows(level, vec![row]).null_space())
        }
    };
    debug_assert_eq!(numerators.len(), deg);
    Ok(RRBasis { divisor: d.clone(), m, denominator: h.inverse(), numerators, base_point: None, parent_coords: None })
}

/// Basis of `L_0(D) = {f in L(D) : f(P) = 0}` for `P` outside `supp D`.
pub fn l0basis(curve: &Curve, d: &Divisor, p: &Point) -> Result<RRBasis> {
    let full = lbasis(curve, d)?;
    l0_from(&full, p)
}

/// Restricts an `L(D)` basis to the functions vanishing at `p`.
pub fn l0_from(full: &RRBasis, p: &Point) -> Result<RRBasis> {
    if full.divisor.contains(p) {
        return Err(Error::Precondition(format!("base point {p} lies in the support of D")));
    }
    let row = full.eval_point(p)?;
    let null = Matrix::from_rows(full.level(), vec![row]).null_space();
    let parent = Matrix::from_rows(full.level(), null.clone());
    let numerators = null
        .iter()
        .map(|c| {
            let mut g = vec![full.level().zero(); pole_orders(full.m).len()];
            for (ci, row) in c.iter().zip(&full.numerators) {
                if ci.is_zero() {
                    continue;
                }
                for (gi, r) in g.iter_mut().zip(row) {
                    *gi += &(ci * r);
                }
            }
            g
        })
        .collect();
    let mut parent_coords = parent;
    if null.is_empty() {
        parent_coords = Matrix::zeros(full.level(), 0, full.dim());
    }
    Ok(RRBasis {
        divisor: full.divisor.clone(),
        m: full.m,
        denominator: full.denominator.clone(),
        numerators,
        base_point: Some(p.clone()),
        parent_coords: Some(parent_coords),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e0() -> Curve {
        Curve::from_ints(5, 1, 0, 1).unwrap()
    }

    fn pt(e: &Curve, x: i64, y: i64) -> Point {
        e.point_from_ints(e.base(), x, y).unwrap()
    }

    #[test]
    fn monomial_pole_orders() {
        assert_eq!(pole_orders(1), vec![0]);
        assert_eq!(pole_orders(2), vec![0, 2]);
        assert_eq!(pole_orders(5), vec![0, 2, 3, 4, 5]);
        assert_eq!((monomial(4), monomial(5)), ((2, 0), (1, 1)));
    }

    #[test]
    fn principal_function_examples() {
        let e = e0();
        let f5 = e.base();
        let x = |c: i64| Line::vertical(&f5.from_int(c));

        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let (h, q) = principal_function(&e, &d).unwrap();
        assert!(q.is_infinity());
        assert_eq!(h.factors(), &[(x(0), 1)]);

        let d = Divisor::zero(f5).with_point(pt(&e, 4, 0), 2).unwrap();
        let (h, q) = principal_function(&e, &d).unwrap();
        assert!(q.is_infinity());
        assert_eq!(h.factors(), &[(x(4), 1)]);

        let d = Divisor::from_points(f5, &[pt(&e, 2, 2)]).unwrap();
        let (h, q) = principal_function(&e, &d).unwrap();
        assert_eq!(q, pt(&e, 2, 3));
        assert_eq!(h.factors(), &[(x(2), 1)]);
    }

    #[test]
    fn lbasis_of_inverse_pair() {
        let e = e0();
        let f5 = e.base();
        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let b = lbasis(&e, &d).unwrap();
        assert_eq!(b.dim(), 2);
        // {1/x, x/x}
        let z = pt(&e, 2, 2);
        assert_eq!(b.eval_point(&z).unwrap(), vec![f5.from_int(3), f5.one()]);
        assert!(matches!(b.eval_point(&pt(&e, 0, 1)), Err(Error::Pole)));
    }

    #[test]
    fn l0basis_of_inverse_pair() {
        let e = e0();
        let f5 = e.base();
        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let p = pt(&e, 2, 2);
        let b = l0basis(&e, &d, &p).unwrap();
        assert_eq!(b.dim(), 1);
        // proportional to 1/x - 3: zero at (2, 2) and (2, 3), 1 at (4, 0)
        let v: Vec<FieldElem> =
            [pt(&e, 2, 2), pt(&e, 2, 3), pt(&e, 4, 0)].iter().map(|z| b.eval_point(z).unwrap()[0].clone()).collect();
        assert!(v[0].is_zero() && v[1].is_zero() && !v[2].is_zero());
        assert!(matches!(l0basis(&e, &d, &pt(&e, 0, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn evaluation_at_infinity() {
        let e = e0();
        let f5 = e.base();
        let o = Point::infinity(f5);
        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let b = lbasis(&e, &d).unwrap();
        // 1/x vanishes at O, x/x is 1 there
        assert_eq!(b.eval_point(&o).unwrap(), vec![f5.zero(), f5.one()]);
        let x = lbasis_o(&e, f5, 2).unwrap().function(1);
        assert_eq!(evaluate(&x, &o).unwrap_err(), Error::Pole);
    }

    #[test]
    fn lbasis_o_is_monomial() {
        let e = e0();
        let b = lbasis_o(&e, e.base(), 5).unwrap();
        assert_eq!(b.dim(), 5);
        let z = pt(&e, 2, 3);
        let v: Vec<u64> = b.eval_point(&z).unwrap().iter().map(|c| c.index().unwrap()).collect();
        // 1, x, y, x^2, xy at (2, 3)
        assert_eq!(v, vec![1, 2, 3, 4, 1]);
        assert!(lbasis_o(&e, e.base(), 0).is_err());
    }

    #[test]
    fn miller_divisor_matches_by_zero_count() {
        let e = e0();
        let l2 = e.level(2).unwrap();
        let lc = e.at(l2).unwrap();
        let pts = e.enumerate_points(l2).unwrap();
        let d = Divisor::from_points(l2, &pts[3..9]).unwrap().with_point(pts[4].clone(), 2).unwrap();
        let (h, q) = principal_function(&e, &d).unwrap();
        let got = h.divisor_on(&lc, &pts);
        let mut want: BTreeMap<Point, i64> = BTreeMap::new();
        for (p, m) in d.entries() {
            *want.entry(p.clone()).or_insert(0) += m as i64;
        }
        let deg = d.degree() as i64;
        if q.is_infinity() {
            *want.entry(q).or_insert(0) -= deg;
        } else {
            *want.entry(q).or_insert(0) += 1;
            *want.entry(Point::infinity(l2)).or_insert(0) -= deg + 1;
        }
        want.retain(|_, v| *v != 0);
        assert_eq!(got, want);
    }

    #[test]
    fn products_of_multiples_of_a_point_stay_in_the_sum_space() {
        // the bases of L(k (P)) are built from chords through the multiples of
        // P, so evaluation at those multiples goes through local expansions
        let e = e0();
        let l2 = e.level(2).unwrap();
        let pts = e.enumerate_points(l2).unwrap();
        let p = pts.iter().find(|z| !z.is_infinity() && !z.y().unwrap().is_zero()).unwrap().clone();
        let at = |k: u32| lbasis(&e, &Divisor::zero(l2).with_point(p.clone(), k).unwrap()).unwrap();
        let (b3, b4, b7) = (at(3), at(4), at(7));
        let rest: Vec<Point> = pts.iter().filter(|z| **z != p).cloned().collect();
        let m7 = b7.evaluation_matrix(&rest).unwrap();
        assert_eq!(m7.rank(), 7);
        let (m3, m4) = (b3.evaluation_matrix(&rest).unwrap(), b4.evaluation_matrix(&rest).unwrap());
        for i in 0..3 {
            for j in 0..4 {
                let prod: Vec<FieldElem> = m3.row(i).iter().zip(m4.row(j)).map(|(a, b)| a * b).collect();
                assert!(m7.solve_left_unique(&prod).is_some(), "({i}, {j})");
            }
        }
    }

    #[test]
    fn function_json_round_trip() {
        let e = e0();
        let f5 = e.base();
        let d = Divisor::from_points(f5, &[pt(&e, 2, 2), pt(&e, 0, 1)]).unwrap();
        let f = lbasis(&e, &d).unwrap().function(1);
        let s = serde_json::to_string(&f.to_repr()).unwrap();
        assert!(s.contains("\"M\""));
        let back = RationalFunction::parse(f5, &serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
