//! Error-correcting pairs for the vanishing codes and the decoder they give,
//! plus the composite scheme that sends one codeword per prime factor.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{build_code, dual_code, evaluation_code, punctured, CodeRepr, LinearCode};
use crate::curve::{Curve, Divisor, Point, PointRepr};
use crate::error::{Error, Result};
use crate::field::{ElemRepr, Field, FieldElem, FieldSpec};
use crate::linalg::{dot, hamming_distance, Matrix};
use crate::projectors::ProjectorFamily;

/// Error capacity `floor((|S*| - deg D) / 2) - 1`. May be `<= 0`.
pub fn dstar(sigma_star_size: usize, deg: u64) -> i64 {
    (sigma_star_size as i64 - deg as i64).div_euclid(2) - 1
}

/// The same capacity written with `|S| = |S*| + 1`; agrees with [`dstar`]
/// whenever `|S| - deg D` is odd.
pub fn dstar_full(sigma_size: usize, deg: u64) -> i64 {
    (sigma_size as i64 - deg as i64).div_euclid(2) - 1
}

/// A `t`-error-correcting pair `(A, B)` for `code`.
#[derive(Clone, Debug)]
pub struct ECPair {
    pub a: Matrix,
    pub b: Matrix,
    pub t: usize,
    pub code: LinearCode,
}

/// Componentwise product.
pub fn star(x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
    x.iter().zip(y).map(|(a, b)| a * b).collect()
}

/// Builds the pair for `C_L^0(D, S*)` (which also serves `C_L(D, S*)`):
/// `A = C_L((t+1)(P), S*)` and `B` the dual of `C_L(D + (t+1)(P), S*)`.
pub fn build_pair(curve: &Curve, d: &Divisor, sigma: &[Point], p: &Point) -> Result<ECPair> {
    let (code, _) = build_code(curve, d, sigma, p)?;
    pair_for_code(curve, d, sigma, p, code)
}

/// Like [`build_pair`] but for an already built `C_L^0(D, S*)`.
pub fn pair_for_code(curve: &Curve, d: &Divisor, sigma: &[Point], p: &Point, code: LinearCode) -> Result<ECPair> {
    let star_pts = punctured(sigma, p);
    let n = star_pts.len();
    let t = dstar(n, d.degree());
    if t < 1 {
        return Err(Error::Precondition(format!(
            "error capacity d* = {t} is not positive (|S*| = {n}, deg D = {})",
            d.degree()
        )));
    }
    let t = t as usize;
    let level = d.level();
    let tp = Divisor::zero(level).with_point(p.clone(), t as u32 + 1)?;
    let (a_code, _) = evaluation_code(curve, &tp, &star_pts)?;
    let (b_perp, _) = evaluation_code(curve, &d.plus(&tp)?, &star_pts)?;
    let b_code = dual_code(&b_perp);
    let pair = ECPair { a: a_code.generator, b: b_code.generator, t, code };

    // the four defining conditions, with designed distances for (3) and (4)
    if !pair.products_orthogonal() {
        return Err(Error::PairCondition("A * B is not orthogonal to the code".into()));
    }
    if pair.a.rows() <= t {
        return Err(Error::PairCondition(format!("dim A = {} is not > t = {t}", pair.a.rows())));
    }
    if a_code.designed_distance + pair.code.designed_distance <= n {
        return Err(Error::PairCondition("d(A) + d(C) <= n".into()));
    }
    if b_perp.designed_distance <= t {
        return Err(Error::PairCondition(format!("d(B^perp) = {} is not > t", b_perp.designed_distance)));
    }
    Ok(pair)
}

impl ECPair {
    pub fn length(&self) -> usize {
        self.code.length()
    }

    /// Every `a_i * b_j` is orthogonal to every generator row.
    pub fn products_orthogonal(&self) -> bool {
        let a = self.a.to_rows();
        let b = self.b.to_rows();
        let g = self.code.generator.to_rows();
        a.iter().all(|ai| {
            b.iter().all(|bj| {
                let ab = star(ai, bj);
                g.iter().all(|c| dot(&ab, c).is_zero())
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeStatus {
    Decoded,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub codeword: Option<Vec<FieldElem>>,
    pub error_positions: Option<Vec<usize>>,
    pub error_weight: Option<usize>,
}

impl DecodeResult {
    fn failure() -> DecodeResult {
        DecodeResult { status: DecodeStatus::Failure, codeword: None, error_positions: None, error_weight: None }
    }

    pub fn is_decoded(&self) -> bool {
        self.status == DecodeStatus::Decoded
    }
}

/// Decodes `y` with the pair: find `a` in `A` with `a * y` orthogonal to `B`,
/// treat the zeros of `a` as erasures, and fill them from the code.
pub fn ecp_decode(y: &[FieldElem], pair: &ECPair) -> Result<DecodeResult> {
    let n = pair.length();
    if y.len() != n {
        return Err(Error::Precondition(format!("received word of length {} for n = {n}", y.len())));
    }
    let field = pair.code.field;
    let a_rows = pair.a.to_rows();
    let b_rows = pair.b.to_rows();
    // s[i][j] = <a_i * y, b_j>
    let s = Matrix::from_rows(
        field,
        a_rows
            .iter()
            .map(|ai| {
                let ay = star(ai, y);
                b_rows.iter().map(|bj| dot(&ay, bj)).collect()
            })
            .collect(),
    );
    let kernel = if b_rows.is_empty() { Matrix::identity(field, a_rows.len()).to_rows() } else { s.left_null_space() };
    let Some(x) = kernel.first() else { return Ok(DecodeResult::failure()) };
    let a = pair.a.vec_mul(x);
    let outside: Vec<usize> = (0..n).filter(|&i| !a[i].is_zero()).collect();

    let g = pair.code.generator.select_cols(&outside).transpose();
    let y_out: Vec<FieldElem> = outside.iter().map(|&i| y[i].clone()).collect();
    let Some(msg) = g.solve(&y_out) else { return Ok(DecodeResult::failure()) };
    let c = pair.code.generator.vec_mul(&msg);
    let dist = hamming_distance(&c, y);
    if dist > pair.t {
        return Ok(DecodeResult::failure());
    }
    let positions = (0..n).filter(|&i| c[i] != y[i]).collect();
    Ok(DecodeResult {
        status: DecodeStatus::Decoded,
        codeword: Some(c),
        error_positions: Some(positions),
        error_weight: Some(dist),
    })
}

/// Adds an error of weight exactly `w` at uniform positions with uniform
/// nonzero symbols.
pub fn channel_corrupt<R: Rng + ?Sized>(c: &[FieldElem], w: usize, rng: &mut R) -> Result<Vec<FieldElem>> {
    if w > c.len() {
        return Err(Error::Precondition(format!("error weight {w} exceeds length {}", c.len())));
    }
    let mut out = c.to_vec();
    if c.is_empty() {
        return Ok(out);
    }
    let field = c[0].field();
    let mut pos = sample(rng, c.len(), w).into_vec();
    pos.sort_unstable();
    for i in pos {
        out[i] += &field.random_nonzero(rng);
    }
    Ok(out)
}

/// One factor of a [`CompositeScheme`].
#[derive(Clone, Debug)]
pub struct FactorScheme {
    pub r: u64,
    /// `phi0_{N/r}` on `L_0(D_N)` coordinates.
    pub split: Matrix,
    /// `L_0(D_r) -> L_0(D_N)`.
    pub inclusion: Matrix,
    pub pair: ECPair,
}

/// One vanishing code and pair per prime factor of `N`, sharing `S` and `P`,
/// with the projectors stored as dense matrices.
#[derive(Clone, Debug)]
pub struct CompositeScheme {
    pub n_total: u64,
    pub base_point: Point,
    pub sigma: Vec<Point>,
    pub factors: Vec<FactorScheme>,
}

/// Outcome of decoding every factor.
#[derive(Clone, Debug)]
pub struct CompositeDecode {
    /// The recovered `L_0(D_N)` coordinates, when every factor decoded.
    pub word: Option<Vec<FieldElem>>,
    pub factors: Vec<(u64, DecodeResult)>,
}

impl CompositeDecode {
    pub fn failed_factors(&self) -> Vec<u64> {
        self.factors.iter().filter(|(_, d)| !d.is_decoded()).map(|(r, _)| *r).collect()
    }
}

impl CompositeScheme {
    pub fn new(curve: &Curve, family: &ProjectorFamily, sigma: &[Point]) -> Result<CompositeScheme> {
        let p = &family.base_point;
        if !sigma.contains(p) {
            return Err(Error::Precondition("the family's base point is not in S".into()));
        }
        let star_pts = punctured(sigma, p);
        let mut factors = Vec::new();
        for pr in &family.projectors {
            let d_r = &pr.target_basis.divisor;
            let (code, basis) = build_code(curve, d_r, sigma, p)?;
            // message coordinates must be the projector's L_0(D_r) coordinates
            if basis.evaluation_matrix(&star_pts)? != pr.target_l0.evaluation_matrix(&star_pts)? {
                return Err(Error::Precondition(format!("basis mismatch for r = {}", pr.r)));
            }
            factors.push(FactorScheme {
                r: pr.r,
                split: family.split_matrix(pr.r)?,
                inclusion: family.include_matrix(pr.r)?,
                pair: pair_for_code(curve, d_r, sigma, p, code)?,
            });
        }
        Ok(CompositeScheme { n_total: family.n_total, base_point: p.clone(), sigma: sigma.to_vec(), factors })
    }

    /// Smallest per-factor capacity.
    pub fn capacity(&self) -> usize {
        self.factors.iter().map(|f| f.pair.t).min().unwrap_or(0)
    }

    pub fn factor(&self, r: u64) -> Option<&FactorScheme> {
        self.factors.iter().find(|f| f.r == r)
    }

    pub fn word_dim(&self) -> usize {
        self.factors.first().map_or(0, |f| f.split.rows())
    }

    /// `f -> (phi0_{N/r}(f))_r`.
    pub fn split(&self, f: &[FieldElem]) -> Result<Vec<(u64, Vec<FieldElem>)>> {
        if f.len() != self.word_dim() {
            return Err(Error::Precondition(format!("word of length {} for dim {}", f.len(), self.word_dim())));
        }
        Ok(self.factors.iter().map(|fs| (fs.r, fs.split.vec_mul(f))).collect())
    }

    pub fn recombine(&self, parts: &[(u64, Vec<FieldElem>)]) -> Result<Vec<FieldElem>> {
        let field = self.base_point.level();
        let mut acc = vec![field.zero(); self.word_dim()];
        for (r, c) in parts {
            let fs = self.factor(*r).ok_or_else(|| Error::Precondition(format!("no factor r = {r}")))?;
            if c.len() != fs.inclusion.rows() {
                return Err(Error::Precondition(format!("part for r = {r} has the wrong length")));
            }
            for (a, v) in acc.iter_mut().zip(fs.inclusion.vec_mul(c)) {
                *a += &v;
            }
        }
        Ok(acc)
    }

    pub fn encode(&self, f: &[FieldElem]) -> Result<Vec<(u64, Vec<FieldElem>)>> {
        composite_encode(f, self)
    }

    pub fn decode(&self, received: &[(u64, Vec<FieldElem>)]) -> Result<CompositeDecode> {
        composite_decode(received, self)
    }

    pub fn to_repr(&self) -> SchemeRepr {
        SchemeRepr {
            n: self.n_total,
            field: self.base_point.level().spec(),
            base_point: self.base_point.to_repr(),
            sigma: self.sigma.iter().map(Point::to_repr).collect(),
            factors: self
                .factors
                .iter()
                .map(|f| FactorRepr {
                    r: f.r,
                    split: f.split.to_repr(),
                    inclusion: f.inclusion.to_repr(),
                    pair: f.pair.to_repr(),
                })
                .collect(),
        }
    }

    pub fn from_repr(curve: &Curve, repr: &SchemeRepr) -> Result<CompositeScheme> {
        let field = Field::from_spec(&repr.field)?;
        let base_point = curve.parse_point(&repr.base_point)?;
        let sigma = repr.sigma.iter().map(|p| curve.parse_point(p)).collect::<Result<Vec<_>>>()?;
        if base_point.level() != field || sigma.iter().any(|p| p.level() != field) {
            return Err(Error::MixedLevels);
        }
        let mut factors = Vec::new();
        let mut dim_n = None;
        for f in &repr.factors {
            let pair = ECPair::from_repr(&f.pair)?;
            let k_r = pair.code.dimension();
            let n0 = *dim_n.get_or_insert(f.split.len());
            factors.push(FactorScheme {
                r: f.r,
                split: Matrix::from_repr(field, &f.split, k_r)?,
                inclusion: Matrix::from_repr(field, &f.inclusion, n0)?,
                pair,
            });
        }
        Ok(CompositeScheme { n_total: repr.n, base_point, sigma, factors })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRepr {
    pub t: usize,
    pub a: Vec<Vec<ElemRepr>>,
    pub b: Vec<Vec<ElemRepr>>,
    pub code: CodeRepr,
}

impl ECPair {
    pub fn to_repr(&self) -> PairRepr {
        PairRepr { t: self.t, a: self.a.to_repr(), b: self.b.to_repr(), code: self.code.to_repr() }
    }

    pub fn from_repr(repr: &PairRepr) -> Result<ECPair> {
        let code = LinearCode::from_repr(&repr.code)?;
        let n = code.length();
        Ok(ECPair {
            a: Matrix::from_repr(code.field, &repr.a, n)?,
            b: Matrix::from_repr(code.field, &repr.b, n)?,
            t: repr.t,
            code,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRepr {
    pub r: u64,
    pub split: Vec<Vec<ElemRepr>>,
    pub inclusion: Vec<Vec<ElemRepr>>,
    pub pair: PairRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeRepr {
    #[serde(rename = "N")]
    pub n: u64,
    pub field: FieldSpec,
    pub base_point: PointRepr,
    pub sigma: Vec<PointRepr>,
    pub factors: Vec<FactorRepr>,
}

pub fn composite_encode(f: &[FieldElem], scheme: &CompositeScheme) -> Result<Vec<(u64, Vec<FieldElem>)>> {
    scheme
        .split(f)?
        .into_iter()
        .map(|(r, part)| {
            let fs = scheme.factor(r).expect("split yields known factors");
            Ok((r, fs.pair.code.encode(&part)?))
        })
        .collect()
}

pub fn composite_decode(received: &[(u64, Vec<FieldElem>)], scheme: &CompositeScheme) -> Result<CompositeDecode> {
    let mut factors = Vec::with_capacity(scheme.factors.len());
    let mut parts = Vec::with_capacity(scheme.factors.len());
    for fs in &scheme.factors {
        let y = received
            .iter()
            .find(|(s, _)| *s == fs.r)
            .map(|(_, y)| y)
            .ok_or_else(|| Error::Precondition(format!("no received word for r = {}", fs.r)))?;
        let res = ecp_decode(y, &fs.pair)?;
        if let Some(c) = &res.codeword {
            parts.push((fs.r, fs.pair.code.message_of(c).expect("decoder returns codewords")));
        }
        factors.push((fs.r, res));
    }
    let word = if parts.len() == scheme.factors.len() { Some(scheme.recombine(&parts)?) } else { None };
    Ok(CompositeDecode { word, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::seed::rng_for;

    #[test]
    fn capacities() {
        assert_eq!(dstar(59, 26), 15);
        assert_eq!(dstar(59, 6), 25);
        assert_eq!(dstar(59, 21), 18);
        assert_eq!(dstar(3, 2), -1);
        for s in 2..40 {
            for deg in 1..s as u64 {
                if (s as u64 - deg) % 2 == 1 {
                    assert_eq!(dstar(s - 1, deg), dstar_full(s, deg));
                }
            }
        }
    }

    #[test]
    fn corruption_has_exact_weight() {
        let f = make_field(7, 1).unwrap();
        let c: Vec<_> = (0..12).map(|i| f.from_int(i)).collect();
        let mut rng = rng_for(1, "c");
        for w in 0..=12 {
            let y = channel_corrupt(&c, w, &mut rng).unwrap();
            assert_eq!(hamming_distance(&c, &y), w);
        }
        assert!(channel_corrupt(&c, 13, &mut rng).is_err());
    }

    fn e0_pair() -> (Curve, ECPair) {
        // small instance over F_25 with a handful of points off D = (O)+(G_2)
        let e = Curve::from_ints(5, 1, 0, 1).unwrap();
        let l2 = e.level(2).unwrap();
        let d = crate::kernels::support_set(&e, 2, l2).unwrap().divisor;
        let sigma: Vec<Point> =
            e.enumerate_points(l2).unwrap().into_iter().filter(|z| !d.contains(z)).take(16).collect();
        let p = sigma[0].clone();
        let pair = build_pair(&e, &d, &sigma, &p).unwrap();
        (e, pair)
    }

    #[test]
    fn decodes_up_to_capacity() {
        let (_, pair) = e0_pair();
        assert_eq!(pair.t, dstar(15, 6) as usize);
        let field = pair.code.field;
        let mut rng = rng_for(2, "dec");
        for w in 0..=pair.t {
            for _ in 0..10 {
                let msg: Vec<_> = (0..pair.code.dimension()).map(|_| field.random(&mut rng)).collect();
                let c = pair.code.encode(&msg).unwrap();
                let y = channel_corrupt(&c, w, &mut rng).unwrap();
                let res = ecp_decode(&y, &pair).unwrap();
                assert_eq!(res.codeword.as_ref(), Some(&c), "w = {w}");
                assert_eq!(res.error_weight, Some(w));
            }
        }
    }

    #[test]
    fn beyond_capacity_never_miscorrects_silently() {
        let (_, pair) = e0_pair();
        let field = pair.code.field;
        let mut rng = rng_for(3, "over");
        for _ in 0..30 {
            let msg: Vec<_> = (0..pair.code.dimension()).map(|_| field.random(&mut rng)).collect();
            let c = pair.code.encode(&msg).unwrap();
            let y = channel_corrupt(&c, pair.t + 3, &mut rng).unwrap();
            let res = ecp_decode(&y, &pair).unwrap();
            if let Some(d) = &res.codeword {
                assert!(pair.code.contains(d));
                assert!(hamming_distance(d, &y) <= pair.t);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_capacity() {
        let e = Curve::from_ints(5, 1, 0, 1).unwrap();
        let l2 = e.level(2).unwrap();
        let d = crate::kernels::support_set(&e, 2, l2).unwrap().divisor;
        let sigma: Vec<Point> =
            e.enumerate_points(l2).unwrap().into_iter().filter(|z| !d.contains(z)).take(9).collect();
        assert!(matches!(build_pair(&e, &d, &sigma, &sigma[0]), Err(Error::Precondition(_))));
    }
}
