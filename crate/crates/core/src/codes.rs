//! Evaluation codes `C_L(D, S)` and `C_L^0(D, S*)`, MDS checks, brute-force
//! minimum distance, the search for evaluation sets, duals, and the
//! field-size bound for supersingular instances.

use std::collections::BTreeSet;
use std::env;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, CurveSpec, Divisor, DivisorEntry, Point, PointRepr};
use crate::error::{Error, Result};
use crate::field::{ElemRepr, Field, FieldElem, FieldSpec};
use crate::kernels::{squarefree_primes, support_set};
use crate::linalg::{hamming_weight, Matrix};
use crate::rrspace::{l0_from, lbasis, RRBasis};
use crate::subsets::{binomial, scan_subset_sums, MitmTable, MITM_HALF_MAX};

pub const GUARD_ENV: &str = "ELLCODE_GUARD_OVERRIDE";

/// Work limits for exhaustive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// Subset group-sum checks (MDS tests, exact evaluation-set search).
    pub subsets: u64,
    /// Codewords enumerated by the brute-force distance.
    pub codewords: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { subsets: 100_000_000, codewords: 10_000_000 }
    }
}

impl Guards {
    /// Applies `ELLCODE_GUARD_OVERRIDE`, either a bare integer for both limits
    /// or `subsets=N,codewords=M`.
    pub fn with_env_override(self) -> Result<Guards> {
        match env::var(GUARD_ENV) {
            Ok(s) => self.apply_override(&s),
            Err(_) => Ok(self),
        }
    }

    pub fn apply_override(mut self, s: &str) -> Result<Guards> {
        let bad = || Error::Parse(format!("bad {GUARD_ENV} value {s:?}"));
        let s = s.trim();
        if let Ok(v) = s.parse::<u64>() {
            return Ok(Guards { subsets: v, codewords: v });
        }
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "subsets" => self.subsets = v,
                "codewords" => self.codewords = v,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    /// `C_L(D, S)`
    Evaluation,
    /// `C_L^0(D, S*)`, evaluated away from the base point
    Vanishing,
    Dual,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: CodeKind,
    pub divisor: Vec<DivisorEntry>,
    /// Evaluation points in coordinate order.
    pub sigma: Vec<PointRepr>,
    pub base_point: Option<PointRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    pub field: Field,
    pub generator: Matrix,
    /// Lower bound on the minimum distance (`0` when none is known).
    pub designed_distance: usize,
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRepr {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub designed_distance: usize,
    pub generator: Vec<Vec<ElemRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl LinearCode {
    pub fn new(generator: Matrix, designed_distance: usize) -> LinearCode {
        LinearCode { field: generator.field(), generator, designed_distance, provenance: None }
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn encode(&self, message: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if message.len() != self.dimension() {
            return Err(Error::Precondition(format!(
                "message of length {} for a code of dimension {}",
                message.len(),
                self.dimension()
            )));
        }
        Ok(self.generator.vec_mul(message))
    }

    /// The message encoding to `word`, if `word` is a codeword.
    pub fn message_of(&self, word: &[FieldElem]) -> Option<Vec<FieldElem>> {
        if word.len() != self.length() {
            return None;
        }
        self.generator.solve_left_unique(word)
    }

    pub fn contains(&self, word: &[FieldElem]) -> bool {
        self.message_of(word).is_some()
    }

    pub fn to_repr(&self) -> CodeRepr {
        CodeRepr {
            field: self.field.spec(),
            n: self.length(),
            k: self.dimension(),
            designed_distance: self.designed_distance,
            generator: self.generator.to_rows().iter().map(|r| r.iter().map(|c| c.to_repr()).collect()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_repr(repr: &CodeRepr) -> Result<LinearCode> {
        let field = Field::from_spec(&repr.field)?;
        let rows = repr
            .generator
            .iter()
            .map(|r| {
                if r.len() != repr.n {
                    return Err(Error::Parse(format!("generator row of length {} for n = {}", r.len(), repr.n)));
                }
                r.iter().map(|c| field.parse(c)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != repr.k {
            return Err(Error::Parse(format!("{} generator rows for k = {}", rows.len(), repr.k)));
        }
        let mut generator = Matrix::from_rows(field, rows);
        if repr.k == 0 {
            generator = Matrix::zeros(field, 0, repr.n);
        }
        Ok(LinearCode {
            field,
            generator,
            designed_distance: repr.designed_distance,
            provenance: repr.provenance.clone(),
        })
    }
}

/// Row `i` holds basis function `i` evaluated along `sigma`.
pub fn evaluation_matrix(basis: &RRBasis, sigma: &[Point]) -> Result<Matrix> {
    basis.evaluation_matrix(sigma)
}

/// `S` without `P`, order preserved.
pub fn punctured(sigma: &[Point], p: &Point) -> Vec<Point> {
    sigma.iter().filter(|s| *s != p).cloned().collect()
}

fn check_points(d: &Divisor, points: &[Point]) -> Result<()> {
    let distinct: BTreeSet<&Point> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::Precondition("evaluation points must be distinct".into()));
    }
    if let Some(s) = points.iter().find(|s| d.contains(s)) {
        return Err(Error::Precondition(format!("evaluation point {s} lies in the support of D")));
    }
    if points.iter().any(|s| s.level() != d.level()) {
        return Err(Error::MixedLevels);
    }
    Ok(())
}

fn provenance(curve: &Curve, kind: CodeKind, d: &Divisor, points: &[Point], p: Option<&Point>) -> Provenance {
    Provenance {
        curve: Some(curve.spec()),
        kind,
        divisor: d.to_repr(),
        sigma: points.iter().map(Point::to_repr).collect(),
        base_point: p.map(Point::to_repr),
    }
}

/// `C_L(D, points)`, with the basis used for the generator rows.
pub fn evaluation_code(curve: &Curve, d: &Divisor, points: &[Point]) -> Result<(LinearCode, RRBasis)> {
    check_points(d, points)?;
    let deg = d.degree() as usize;
    if points.len() <= deg {
        return Err(Error::Precondition(format!(
            "evaluation is injective only for more than deg D = {deg} points, got {}",
            points.len()
        )));
    }
    let basis = lbasis(curve, d)?;
    let generator = evaluation_matrix(&basis, points)?;
    if generator.rank() != basis.dim() {
        return Err(Error::Singular("evaluation matrix is rank deficient".into()));
    }
    let code = LinearCode {
        field: generator.field(),
        generator,
        designed_distance: points.len() - deg,
        provenance: Some(provenance(curve, CodeKind::Evaluation, d, points, None)),
    };
    Ok((code, basis))
}

/// `C_L^0(D, S*)` with `S* = S \ {P}`, together with the `L_0(D)` basis.
pub fn build_code(curve: &Curve, d: &Divisor, sigma: &[Point], p: &Point) -> Result<(LinearCode, RRBasis)> {
    check_points(d, sigma)?;
    let deg = d.degree() as usize;
    if deg == 0 {
        return Err(Error::Precondition("D must have positive degree".into()));
    }
    if sigma.len() <= deg {
        return Err(Error::Precondition(format!(
            "need |S| > deg D for an injective evaluation map (|S| = {}, deg D = {deg})",
            sigma.len()
        )));
    }
    if !sigma.contains(p) {
        return Err(Error::Precondition(format!("base point {p} is not in S")));
    }
    let star = punctured(sigma, p);
    let basis = l0_from(&lbasis(curve, d)?, p)?;
    let generator = evaluation_matrix(&basis, &star)?;
    if generator.rank() != deg - 1 {
        return Err(Error::Singular("generator of the vanishing code is rank deficient".into()));
    }
    let code = LinearCode {
        field: generator.field(),
        generator,
        designed_distance: star.len() - (deg - 1),
        provenance: Some(provenance(curve, CodeKind::Vanishing, d, &star, Some(p))),
    };
    Ok((code, basis))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsCheck {
    pub mds: bool,
    /// First subset `X` (canonical order) with `D - (X)` principal.
    pub witness: Option<Vec<Point>>,
    pub checked: u64,
}

/// `C_L(D, S)` is MDS iff no `deg D`-subset of `S` has the same group sum as `D`.
pub fn is_mds(curve: &Curve, d: &Divisor, sigma: &[Point], guards: &Guards) -> Result<MdsCheck> {
    let k = d.degree();
    if k == 0 {
        return Ok(MdsCheck { mds: true, witness: None, checked: 0 });
    }
    let total = binomial(sigma.len() as u64, k);
    if total > guards.subsets as u128 {
        return Err(Error::GuardExceeded { what: "MDS subset scan", size: total.to_string(), guard: guards.subsets });
    }
    if sigma.len() > 64 {
        return Err(Error::Precondition("subset scans support at most 64 points".into()));
    }
    let lc = curve.at(d.level())?;
    let target = curve.group_sum(d)?;
    let res = scan_subset_sums(&lc, sigma, k as usize, &target);
    let witness = res.witness.map(|idx| idx.into_iter().map(|i| sigma[i].clone()).collect::<Vec<_>>());
    Ok(MdsCheck { mds: witness.is_none(), witness, checked: res.checked })
}

/// Exact minimum weight over all nonzero codewords.
pub fn min_distance_bruteforce(code: &LinearCode, guards: &Guards) -> Result<usize> {
    let k = code.dimension();
    if k == 0 {
        return Err(Error::Precondition("minimum distance of the zero code is undefined".into()));
    }
    let q = code.field.size().ok_or(Error::GuardExceeded {
        what: "codeword enumeration",
        size: format!("|F|^{k}"),
        guard: guards.codewords,
    })?;
    let total = (q as u128).checked_pow(k as u32).filter(|&t| t <= guards.codewords as u128).ok_or_else(|| {
        Error::GuardExceeded { what: "codeword enumeration", size: format!("{q}^{k}"), guard: guards.codewords }
    })? as u64;
    let f = code.field;
    let best = (1..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut msg = Vec::with_capacity(k);
            for _ in 0..k {
                msg.push(f.from_index(idx % q));
                idx /= q;
            }
            hamming_weight(&code.generator.vec_mul(&msg))
        })
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// The orthogonal complement under `sum x_i y_i`.
pub fn dual_code(code: &LinearCode) -> LinearCode {
    let null = code.generator.null_space();
    let n = code.length();
    let generator = if null.is_empty() { Matrix::zeros(code.field, 0, n) } else { Matrix::from_rows(code.field, null) };
    // the dual of C_L(D, S) is C_Omega with distance >= deg D on genus one
    let designed_distance = match &code.provenance {
        Some(p) if p.kind == CodeKind::Evaluation => code.dimension(),
        _ => 0,
    };
    let provenance = code.provenance.as_ref().map(|p| Provenance { kind: CodeKind::Dual, ..p.clone() });
    LinearCode { field: code.field, generator, designed_distance, provenance }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    Exact,
    Probabilistic,
}

#[derive(Clone, Debug)]
pub struct SigmaSearch {
    /// Canonically sorted evaluation set.
    pub sigma: Vec<Point>,
    /// Whether the subset-sum condition was checked (exact mode).
    pub verified: bool,
    pub attempts: usize,
}

pub const DEFAULT_SIGMA_ATTEMPTS: usize = 32;

/// Draws `m` distinct points of `E(level)` outside every `Y_i` such that no
/// `|Y_i|`-subset has the group sum of `Y_i` (exact mode), resampling the whole
/// set on failure.
#[allow(clippy::too_many_arguments)]
pub fn sigma_search<R: Rng + ?Sized>(
    curve: &Curve,
    y_family: &[Vec<Point>],
    m: usize,
    level: Field,
    mode: SigmaMode,
    rng: &mut R,
    guards: &Guards,
    max_attempts: usize,
) -> Result<SigmaSearch> {
    let forbidden: BTreeSet<&Point> = y_family.iter().flatten().collect();
    if m <= forbidden.len() {
        return Err(Error::Precondition(format!(
            "need more evaluation points ({m}) than the union of the Y_i ({})",
            forbidden.len()
        )));
    }
    if forbidden.iter().any(|p| p.level() != level) {
        return Err(Error::MixedLevels);
    }
    if let Some(size) = level.size() {
        if (size as u128) < 2 * (m + forbidden.len()) as u128 {
            return Err(Error::Precondition(format!("{level} is too small for {m} points")));
        }
    }
    let lc = curve.at(level)?;
    let queries: Vec<(usize, Point)> = y_family.iter().map(|y| (y.len(), lc.sum(y))).collect();
    if mode == SigmaMode::Exact {
        let total: u128 = queries.iter().map(|(k, _)| binomial(m as u64, *k as u64)).sum();
        if total > guards.subsets as u128 {
            return Err(Error::GuardExceeded {
                what: "exact evaluation-set search",
                size: total.to_string(),
                guard: guards.subsets,
            });
        }
    }
    for attempt in 1..=max_attempts {
        let mut chosen: BTreeSet<Point> = BTreeSet::new();
        while chosen.len() < m {
            let p = curve.random_point(level, rng)?;
            if !forbidden.contains(&p) {
                chosen.insert(p);
            }
        }
        let sigma: Vec<Point> = chosen.into_iter().collect();
        let ok = match mode {
            SigmaMode::Probabilistic => true,
            SigmaMode::Exact if queries.is_empty() => true,
            SigmaMode::Exact if m <= 2 * MITM_HALF_MAX => MitmTable::new(&lc, &sigma).find_any(&queries).is_none(),
            SigmaMode::Exact => queries.iter().all(|(k, t)| scan_subset_sums(&lc, &sigma, *k, t).witness.is_none()),
        };
        if ok {
            return Ok(SigmaSearch { sigma, verified: mode == SigmaMode::Exact, attempts: attempt });
        }
    }
    Err(Error::RetryExhausted {
        attempts: max_attempts,
        what: format!("no {m}-point evaluation set over {level} avoided every bad subset sum"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetReport {
    pub size: usize,
    pub checked: u64,
    pub witness: Option<Vec<Point>>,
}

/// Independent exhaustive re-check of a search result with the revolving-door
/// enumerator.
pub fn verify_sigma(
    curve: &Curve,
    y_family: &[Vec<Point>],
    sigma: &[Point],
    guards: &Guards,
) -> Result<Vec<SubsetReport>> {
    let mut out = Vec::new();
    for y in y_family {
        let level = sigma.first().map(Point::level).unwrap_or_else(|| curve.base());
        let d = Divisor::from_points(level, y)?;
        let r = is_mds(curve, &d, sigma, guards)?;
        out.push(SubsetReport { size: y.len(), checked: r.checked, witness: r.witness });
    }
    Ok(out)
}

/// `|E(k_N) \ X_N|` and `deg D_N`; the construction needs the former larger.
pub fn outside_margin(curve: &Curve, n: u64) -> Result<(u64, u64)> {
    let level = curve.level(n as usize)?;
    let x = support_set(curve, n, level)?;
    let outside = curve.enumerate_points(level)?.iter().filter(|p| !x.divisor.contains(p)).count() as u64;
    Ok((outside, x.degree()))
}

/// Field-size arithmetic for supersingular base extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSizeBound {
    pub p: u64,
    pub e: u32,
    pub variant: u8,
    /// `deg D_r` for each prime `r | N`.
    pub kernel_degrees: Vec<(u64, String)>,
    pub deg_dn: String,
    /// The right-hand side that the field-size term must exceed.
    pub rhs: String,
    /// Smallest odd `n > N` meeting the inequality.
    pub n: u64,
    /// Lower bound on the number of good `m`-tuples over `E(k_n)`.
    pub good_tuples_lower: String,
}

fn big_binomial(n: &BigInt, k: &BigInt) -> BigInt {
    if k > n || k.sign() == num_bigint::Sign::Minus {
        return BigInt::zero();
    }
    let k = std::cmp::min(k.clone(), n - k);
    let mut acc = BigInt::one();
    let mut i = BigInt::zero();
    while i < k {
        acc = acc * (n - &i) / (&i + 1);
        i += 1;
    }
    acc
}

/// `(x)_r = 1 + x + ... + x^{r-1}`.
fn bracket(x: &BigInt, r: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut pw = BigInt::one();
    for _ in 0..r {
        acc += &pw;
        pw *= x;
    }
    acc
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut v = q;
    while v.is_multiple_of(p) {
        v /= p;
        e += 1;
    }
    (v == 1).then_some((p, e))
}

/// Smallest odd `n > N` for which the counting bound guarantees an MDS
/// evaluation set of size `m` over `E(k_n)`.
///
/// Variant 1: `p = 1 mod 4`, `e` odd, `deg D_r = (-q)_r`, condition
/// `q^n > m + C(m,2) + sum_r {m (deg D_r - 1) + C(m, deg D_r)} - 1`.
/// Variant 2: `e = 2f`, `f` odd, `deg D_r = ((-sqrt q)_r)^2`, condition
/// `(1 + sqrt(q)^n)^2 > m + C(m,2) + sum_r {...}`.
pub fn field_size_bound(q: u64, big_n: u64, m: u64, variant: u8) -> Result<FieldSizeBound> {
    let (p, e) = prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
    if p < 5 {
        return Err(Error::UnsupportedCharacteristic(p as u32));
    }
    if big_n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("N = {big_n} must be odd")));
    }
    let primes = squarefree_primes(big_n)?;
    let bq = BigInt::from(q);
    let sqrt_q = BigInt::from(p).pow(e / 2);
    let degs: Vec<(u64, BigInt)> = match variant {
        1 => {
            if e % 2 == 0 || p % 4 != 1 {
                return Err(Error::Precondition("variant 1 needs p = 1 (mod 4) and e odd".into()));
            }
            primes.iter().map(|&r| (r, bracket(&-&bq, r))).collect()
        }
        2 => {
            if e % 2 != 0 || (e / 2) % 2 == 0 {
                return Err(Error::Precondition("variant 2 needs e = 2f with f odd".into()));
            }
            primes.iter().map(|&r| (r, bracket(&-&sqrt_q, r).pow(2))).collect()
        }
        v => return Err(Error::Precondition(format!("unknown variant {v}"))),
    };
    let deg_dn = degs.iter().fold(BigInt::one(), |acc, (_, d)| acc + d - 1);
    let bm = BigInt::from(m);
    if bm <= deg_dn {
        return Err(Error::Precondition(format!("m = {m} must exceed deg D_N = {deg_dn}")));
    }
    let mut bad = &bm + big_binomial(&bm, &BigInt::from(2));
    for (_, d) in &degs {
        bad += &bm * (d - 1) + big_binomial(&bm, d);
    }
    let rhs = if variant == 1 { &bad - 1 } else { bad.clone() };
    let size_term = |n: u64| -> BigInt {
        if variant == 1 {
            bq.pow(n as u32)
        } else {
            (BigInt::one() + sqrt_q.pow(n as u32)).pow(2)
        }
    };
    let mut n = big_n + 2;
    while size_term(n) <= rhs {
        n += 2;
    }
    let group = if variant == 1 { BigInt::one() + bq.pow(n as u32) } else { size_term(n) };
    let exponent = (m - 1) as u32;
    let good = group.pow(exponent) * (&group - &bad);
    Ok(FieldSizeBound {
        p,
        e,
        variant,
        kernel_degrees: degs.iter().map(|(r, d)| (*r, d.to_string())).collect(),
        deg_dn: deg_dn.to_string(),
        rhs: rhs.to_string(),
        n,
        good_tuples_lower: good.to_string(),
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
    fn guard_override_syntax() {
        let g = Guards::default();
        assert_eq!(g.apply_override("5").unwrap(), Guards { subsets: 5, codewords: 5 });
        assert_eq!(g.apply_override("codewords=7").unwrap().codewords, 7);
        assert!(g.apply_override("bogus=1").is_err());
    }

    #[test]
    fn bound_example() {
        let b = field_size_bound(5, 3, 22, 1).unwrap();
        assert_eq!(b.rhs, "714");
        assert_eq!(b.n, 5);
        assert_eq!(b.kernel_degrees, vec![(3, "21".to_string())]);
        assert!(field_size_bound(5, 3, 21, 1).is_err());
        assert!(field_size_bound(5, 3, 22, 2).is_err());
    }

    #[test]
    fn mds_examples() {
        let e = e0();
        let f5 = e.base();
        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let bad = [pt(&e, 2, 2), pt(&e, 2, 3), pt(&e, 4, 0)];
        let r = is_mds(&e, &d, &bad, &Guards::default()).unwrap();
        assert!(!r.mds);
        assert_eq!(r.witness.unwrap(), vec![pt(&e, 2, 2), pt(&e, 2, 3)]);
        let good = [Point::infinity(f5), pt(&e, 2, 2), pt(&e, 4, 0)];
        assert!(is_mds(&e, &d, &good, &Guards::default()).unwrap().mds);
        assert!(is_mds(&e, &Divisor::zero(f5), &good, &Guards::default()).unwrap().mds);
    }

    #[test]
    fn build_code_preconditions() {
        let e = e0();
        let f5 = e.base();
        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let sigma = [pt(&e, 2, 2), pt(&e, 2, 3)];
        assert!(matches!(build_code(&e, &d, &sigma, &sigma[0]), Err(Error::Precondition(_))));
        let sigma = [pt(&e, 2, 2), pt(&e, 2, 3), pt(&e, 0, 1)];
        assert!(matches!(build_code(&e, &d, &sigma, &sigma[0]), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_code_distance_is_an_error() {
        let f5 = crate::field::make_field(5, 1).unwrap();
        let c = LinearCode::new(Matrix::zeros(f5, 0, 3), 0);
        assert!(min_distance_bruteforce(&c, &Guards::default()).is_err());
    }

    #[test]
    fn dual_of_small_code() {
        let f5 = crate::field::make_field(5, 1).unwrap();
        let g = Matrix::from_rows(
            f5,
            vec![
                vec![f5.from_int(1), f5.from_int(1), f5.from_int(1)],
                vec![f5.from_int(3), f5.from_int(3), f5.from_int(4)],
            ],
        );
        let c = LinearCode::new(g, 1);
        let d = dual_code(&c);
        assert_eq!(d.dimension(), 1);
        // proportional to (1, 4, 0)
        let row = d.generator.row(0);
        let k = row[0].clone();
        let scaled: Vec<u64> = row.iter().map(|x| (x / &k).index().unwrap()).collect();
        assert_eq!(scaled, vec![1, 4, 0]);
        assert_eq!(dual_code(&d).generator.rank(), 2);
    }

    #[test]
    fn code_json_round_trip() {
        let e = e0();
        let f5 = e.base();
        let d = Divisor::from_points(f5, &[pt(&e, 0, 1), pt(&e, 0, 4)]).unwrap();
        let sigma = [pt(&e, 2, 2), pt(&e, 2, 3), pt(&e, 4, 0)];
        let (c, _) = build_code(&e, &d, &sigma, &sigma[0]).unwrap();
        let s = serde_json::to_string(&c.to_repr()).unwrap();
        let back = LinearCode::from_repr(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.to_repr(), c.to_repr());
    }
}
