//! Instance configuration and the end-to-end construction: kernels, supports,
//! evaluation set, codes, projectors and decoding pairs, plus the reports and
//! self-checks built on top of them.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{
    build_code, dual_code, field_size_bound, outside_margin, sigma_search, verify_sigma, FieldSizeBound, Guards,
    LinearCode, SigmaMode, SigmaSearch, DEFAULT_SIGMA_ATTEMPTS,
};
use crate::curve::{Curve, CurveSpec, Point, PointRepr, ENUMERATION_GUARD};
use crate::ecp::{channel_corrupt, dstar, ecp_decode, pair_for_code, CompositeScheme, ECPair, PairRepr, SchemeRepr};
use crate::error::{Error, Result};
use crate::field::{ElemRepr, Field, FieldElem};
use crate::kernels::{kernel_orders, require_deg_coprime_p, squarefree_primes, support_set, SupportSet};
use crate::linalg::{dot, Matrix};
use crate::projectors::ProjectorFamily;
use crate::rrspace::RRBasis;
use crate::seed::rng_for;

/// One JSON file describing an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub p: u64,
    #[serde(default = "one")]
    pub e: usize,
    pub a: ElemRepr,
    pub b: ElemRepr,
    #[serde(rename = "N")]
    pub n: u64,
    /// `|S|`
    pub m: usize,
    /// Degree of the working field over the base field.
    pub level_degree: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub guards: Guards,
    pub mode: SigmaMode,
    /// Defaults to the smallest point of `S`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<PointRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_attempts: Option<usize>,
}

fn one() -> usize {
    1
}

impl InstanceConfig {
    pub fn from_json(s: &str) -> Result<InstanceConfig> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn curve(&self) -> Result<Curve> {
        Curve::from_spec(&CurveSpec { p: self.p, e: self.e, a: self.a.clone(), b: self.b.clone() })
    }

    /// Checks that do not need the curve's kernels.
    pub fn validate(&self) -> Result<()> {
        squarefree_primes(self.n)?;
        if self.n < 2 {
            return Err(Error::Precondition("N must be at least 2".into()));
        }
        if self.level_degree == 0 || !(self.level_degree as u64).is_multiple_of(self.n) {
            return Err(Error::Precondition(format!(
                "level degree {} must be a positive multiple of N = {}",
                self.level_degree, self.n
            )));
        }
        Ok(())
    }

    /// Guards after applying the environment override.
    pub fn effective_guards(&self) -> Result<Guards> {
        self.guards.with_env_override()
    }
}

/// Divisors `> 1` of a square-free `n`, ascending.
pub fn nontrivial_divisors(n: u64) -> Result<Vec<u64>> {
    let primes = squarefree_primes(n)?;
    let mut out: Vec<u64> = (1u64..1 << primes.len())
        .map(|mask| primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, r)| r).product())
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// The vanishing code of one `D_m` with its decoding pair.
#[derive(Clone, Debug)]
pub struct FactorCode {
    pub m: u64,
    pub degree: u64,
    pub code: LinearCode,
    pub basis: RRBasis,
    pub dstar: i64,
    pub pair: Option<ECPair>,
}

/// Everything the pipeline builds.
#[derive(Clone, Debug)]
pub struct Instance {
    pub config: InstanceConfig,
    pub guards: Guards,
    pub curve: Curve,
    pub level: Field,
    /// `X_m` for every divisor `m > 1` of `N`, ascending; the last is `X_N`.
    pub supports: Vec<SupportSet>,
    pub sigma: SigmaSearch,
    pub base_point: Point,
    /// Codes in the order of `supports`.
    pub codes: Vec<FactorCode>,
    /// Present when `N` has at least two prime factors.
    pub family: Option<ProjectorFamily>,
    pub scheme: Option<CompositeScheme>,
}

impl Instance {
    pub fn build(config: &InstanceConfig) -> Result<Instance> {
        config.validate()?;
        let guards = config.effective_guards()?;
        let curve = config.curve()?;
        let level = curve.level(config.level_degree)?;
        require_deg_coprime_p(&curve, config.n)?;
        let supports = nontrivial_divisors(config.n)?
            .into_iter()
            .map(|m| support_set(&curve, m, level))
            .collect::<Result<Vec<_>>>()?;
        let deg_n = supports.last().expect("N > 1").degree();
        if config.m as u64 <= deg_n {
            return Err(Error::Precondition(format!("m = {} must exceed deg D_N = {deg_n}", config.m)));
        }
        let y_family: Vec<Vec<Point>> = supports.iter().map(|s| s.points.clone()).collect();
        let sigma = sigma_search(
            &curve,
            &y_family,
            config.m,
            level,
            config.mode,
            &mut rng_for(config.seed, "sigma"),
            &guards,
            config.max_attempts.unwrap_or(DEFAULT_SIGMA_ATTEMPTS),
        )?;
        let base_point = match &config.base_point {
            Some(r) => {
                let p = curve.embed_point(&curve.parse_point(r)?, level)?;
                if !sigma.sigma.contains(&p) {
                    return Err(Error::Precondition(format!("base point {p} is not in the evaluation set")));
                }
                p
            }
            None => sigma.sigma[0].clone(),
        };
        let n_star = sigma.sigma.len() - 1;
        let mut codes = Vec::new();
        for s in &supports {
            let (code, basis) = build_code(&curve, &s.divisor, &sigma.sigma, &base_point)?;
            let t = dstar(n_star, s.degree());
            let pair = if t >= 1 {
                Some(pair_for_code(&curve, &s.divisor, &sigma.sigma, &base_point, code.clone())?)
            } else {
                None
            };
            codes.push(FactorCode { m: s.m, degree: s.degree(), code, basis, dstar: t, pair });
        }
        let (family, scheme) = if squarefree_primes(config.n)?.len() >= 2 {
            let family =
                ProjectorFamily::build(&curve, config.n, level, &base_point, &mut rng_for(config.seed, "projectors"))?;
            let scheme = CompositeScheme::new(&curve, &family, &sigma.sigma)?;
            (Some(family), Some(scheme))
        } else {
            (None, None)
        };
        Ok(Instance {
            config: config.clone(),
            guards,
            curve,
            level,
            supports,
            sigma,
            base_point,
            codes,
            family,
            scheme,
        })
    }

    /// The code of `D_N`.
    pub fn main_code(&self) -> &FactorCode {
        self.codes.last().expect("at least one code")
    }

    pub fn code_for(&self, m: u64) -> Option<&FactorCode> {
        self.codes.iter().find(|c| c.m == m)
    }

    pub fn mds_status(&self) -> &'static str {
        if self.sigma.verified {
            "yes"
        } else {
            "unverified"
        }
    }

    pub fn report(&self) -> PipelineReport {
        let rows = self
            .codes
            .iter()
            .map(|c| CodeRow {
                m: c.m,
                degree: c.degree,
                length: c.code.length(),
                dimension: c.code.dimension(),
                designed_distance: c.code.designed_distance,
                dstar: c.dstar,
                mds: self.mds_status().to_string(),
            })
            .collect();
        PipelineReport {
            curve: self.curve.spec(),
            q: self.curve.q(),
            trace: self.curve.trace(),
            n: self.config.n,
            level_degree: self.config.level_degree,
            m: self.config.m,
            mode: self.config.mode,
            sigma_verified: self.sigma.verified,
            sigma_attempts: self.sigma.attempts,
            base_point: self.base_point.to_repr(),
            codes: rows,
            composite_capacity: self.scheme.as_ref().map(CompositeScheme::capacity),
            monolithic_capacity: self.main_code().pair.as_ref().map(|p| p.t),
        }
    }

    /// `family.json`: the curve, the composite scheme and the monolithic pair.
    pub fn family_file(&self) -> Option<FamilyFile> {
        let scheme = self.scheme.as_ref()?;
        Some(FamilyFile {
            curve: self.curve.spec(),
            scheme: scheme.to_repr(),
            monolithic: self.main_code().pair.as_ref().map(ECPair::to_repr),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub curve: CurveSpec,
    pub scheme: SchemeRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monolithic: Option<PairRepr>,
}

impl FamilyFile {
    pub fn load(&self) -> Result<(Curve, CompositeScheme)> {
        let curve = Curve::from_spec(&self.curve)?;
        let scheme = CompositeScheme::from_repr(&curve, &self.scheme)?;
        Ok((curve, scheme))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRow {
    pub m: u64,
    pub degree: u64,
    pub length: usize,
    pub dimension: usize,
    pub designed_distance: usize,
    pub dstar: i64,
    pub mds: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub curve: CurveSpec,
    pub q: u64,
    pub trace: i64,
    #[serde(rename = "N")]
    pub n: u64,
    pub level_degree: usize,
    pub m: usize,
    pub mode: SigmaMode,
    pub sigma_verified: bool,
    pub sigma_attempts: usize,
    pub base_point: PointRepr,
    pub codes: Vec<CodeRow>,
    pub composite_capacity: Option<usize>,
    pub monolithic_capacity: Option<usize>,
}

impl PipelineReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "E: y^2 = x^3 + {} x + {} over F_{}  (t = {}), N = {}, level {}, |S| = {} ({})",
            elem_str(&self.curve.a),
            elem_str(&self.curve.b),
            self.q,
            self.trace,
            self.n,
            self.level_degree,
            self.m,
            if self.sigma_verified { "verified" } else { "unverified" }
        );
        let _ = writeln!(s, "{:>4} {:>6} {:>5} {:>5} {:>6} {:>4} {:>10}", "m", "deg D", "n", "k", "d >=", "d*", "MDS");
        for r in &self.codes {
            let _ = writeln!(
                s,
                "{:>4} {:>6} {:>5} {:>5} {:>6} {:>4} {:>10}",
                r.m, r.degree, r.length, r.dimension, r.designed_distance, r.dstar, r.mds
            );
        }
        if let (Some(c), Some(m)) = (self.composite_capacity, self.monolithic_capacity) {
            let _ = writeln!(s, "composite capacity {c} per factor, monolithic capacity {m}");
        }
        s
    }
}

fn elem_str(e: &ElemRepr) -> String {
    match e {
        ElemRepr::Scalar(v) => v.to_string(),
        ElemRepr::Coeffs(c) => format!("{c:?}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorInfo {
    pub r: u64,
    /// `|E(k_r)|`
    pub points: String,
    /// `|G_r| = |E(k_r)| / |E(k)|`
    pub kernel_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfoReport {
    pub p: u64,
    pub e: usize,
    pub q: u64,
    pub trace: i64,
    pub points: String,
    pub factors: Vec<FactorInfo>,
    /// `(m, deg D_m)` for every divisor `m > 1` of `N`.
    pub degrees: Vec<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<FieldSizeBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_note: Option<String>,
}

/// Point counts, kernel orders, support degrees and, for odd `N`, the
/// field-size bound. Degrees come from the kernel orders, so nothing is
/// enumerated beyond `E(k_r)`.
pub fn info(config: &InstanceConfig) -> Result<InfoReport> {
    config.validate()?;
    let curve = config.curve()?;
    let orders = kernel_orders(&curve, config.n)?;
    let factors = orders
        .iter()
        .map(|(r, g)| FactorInfo {
            r: *r,
            points: curve.count_points_ext(*r as u32).to_string(),
            kernel_order: g.to_string(),
        })
        .collect();
    let degrees = nontrivial_divisors(config.n)?
        .into_iter()
        .map(|m| {
            let deg: BigInt =
                orders.iter().filter(|(r, _)| m % r == 0).fold(BigInt::from(1), |acc, (_, g)| acc + g - 1);
            (m, u64::try_from(deg).unwrap_or(u64::MAX))
        })
        .collect();
    let (bound, bound_note) = if config.n % 2 == 1 {
        let (p, e) = (config.p, config.e as u32);
        let variant = if e % 2 == 1 { 1 } else { 2 };
        match field_size_bound(curve.q(), config.n, config.m as u64, variant) {
            Ok(b) if curve.trace() == 0 => (Some(b), None),
            Ok(b) => (Some(b), Some("the curve is not supersingular with t = 0; the bound does not apply".into())),
            Err(err) => (None, Some(format!("no field-size bound for p = {p}, e = {e}: {err}"))),
        }
    } else {
        (None, None)
    };
    Ok(InfoReport {
        p: config.p,
        e: config.e,
        q: curve.q(),
        trace: curve.trace(),
        points: curve.count_points_ext(1).to_string(),
        factors,
        degrees,
        bound,
        bound_note,
    })
}

impl InfoReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "q = {} (p = {}, e = {}), t = {}, |E(k)| = {}",
            self.q, self.p, self.e, self.trace, self.points
        );
        for f in &self.factors {
            let _ = writeln!(s, "r = {:>3}: |E(k_r)| = {}, |G_r| = {}", f.r, f.points, f.kernel_order);
        }
        for (m, d) in &self.degrees {
            let _ = writeln!(s, "deg D_{m} = {d}");
        }
        if let Some(b) = &self.bound {
            let _ = writeln!(s, "field-size bound: smallest odd n = {} (threshold {})", b.n, b.rhs);
        }
        if let Some(n) = &self.bound_note {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

/// Test hooks for [`selftest`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SelftestOptions {
    /// Perturb the first projector's trace matrix before checking.
    pub corrupt_projector: bool,
    /// Random trials per randomized check.
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<ElemRepr>>,
}

impl CheckResult {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), pass, detail: detail.into(), witness: None }
    }

    fn failed_with(name: &str, detail: impl Into<String>, witness: &[FieldElem]) -> CheckResult {
        CheckResult {
            name: name.into(),
            pass: false,
            detail: detail.into(),
            witness: Some(witness.iter().map(FieldElem::to_repr).collect()),
        }
    }
}

fn random_vec<R: Rng + ?Sized>(f: Field, n: usize, rng: &mut R) -> Vec<FieldElem> {
    (0..n).map(|_| f.random(rng)).collect()
}

/// Runs the invariant checks on a built instance. Failures are reported, not
/// returned as errors.
pub fn selftest_instance(inst: &mut Instance, opts: SelftestOptions) -> Vec<CheckResult> {
    let trials = if opts.trials == 0 { 10 } else { opts.trials };
    let mut out = Vec::new();
    let curve = inst.curve.clone();
    let level = inst.level;
    let seed = inst.config.seed;

    // supports
    match kernel_orders(&curve, inst.config.n) {
        Ok(orders) => {
            let want = orders.iter().fold(BigInt::from(1), |acc, (_, g)| acc + g - 1);
            let got = inst.supports.last().map(SupportSet::degree).unwrap_or(0);
            out.push(CheckResult::new(
                "support_degree",
                BigInt::from(got) == want,
                format!("deg D_N = {got}, 1 + sum(|G_r| - 1) = {want}"),
            ));
        }
        Err(e) => out.push(CheckResult::new("support_degree", false, e.to_string())),
    }

    // codes
    let dims_ok = inst
        .codes
        .iter()
        .all(|c| c.code.dimension() as u64 == c.degree - 1 && c.code.generator.rank() == c.code.dimension());
    out.push(CheckResult::new(
        "generator_rank",
        dims_ok,
        inst.codes
            .iter()
            .map(|c| format!("m={}: k={} deg={}", c.m, c.code.dimension(), c.degree))
            .collect::<Vec<_>>()
            .join(", "),
    ));
    let sigma_ok = inst.sigma.sigma.iter().all(|p| inst.supports.iter().all(|s| !s.divisor.contains(p)));
    out.push(CheckResult::new("sigma_disjoint", sigma_ok, format!("|S| = {}", inst.sigma.sigma.len())));
    if inst.sigma.verified {
        let y: Vec<Vec<Point>> = inst.supports.iter().map(|s| s.points.clone()).collect();
        match verify_sigma(&curve, &y, &inst.sigma.sigma, &inst.guards) {
            Ok(reps) => {
                let ok = reps.iter().all(|r| r.witness.is_none());
                let checked: u64 = reps.iter().map(|r| r.checked).sum();
                out.push(CheckResult::new("sigma_reverify", ok, format!("{checked} subsets")));
            }
            Err(e) => out.push(CheckResult::new("sigma_reverify", true, format!("skipped: {e}"))),
        }
    }
    let main = inst.main_code();
    let dual = dual_code(&main.code);
    let orth = main.code.generator.mul(&dual.generator.transpose()).to_rows().iter().flatten().all(FieldElem::is_zero);
    out.push(CheckResult::new("dual_orthogonal", orth, format!("dual dimension {}", dual.dimension())));
    if let Ok(n_level) = curve.level(inst.config.n as usize) {
        let size = n_level.size().unwrap_or(u64::MAX);
        if size <= ENUMERATION_GUARD {
            match outside_margin(&curve, inst.config.n) {
                Ok((outside, deg)) => out.push(CheckResult::new(
                    "outside_points_exceed_degree",
                    outside > deg,
                    format!("|E(k_N) \\ X_N| = {outside}, deg D_N = {deg}"),
                )),
                Err(e) => out.push(CheckResult::new("outside_points_exceed_degree", false, e.to_string())),
            }
        }
    }

    // decoding
    let mut rng = rng_for(seed, "selftest/decode");
    for c in &inst.codes {
        let Some(pair) = &c.pair else { continue };
        let name = format!("decode_m{}", c.m);
        let pass = pair.products_orthogonal()
            && (0..trials).all(|_| {
                let msg = random_vec(level, pair.code.dimension(), &mut rng);
                let cw = pair.code.encode(&msg).expect("dimension matches");
                let y = channel_corrupt(&cw, pair.t, &mut rng).expect("t < n");
                ecp_decode(&y, pair).map(|r| r.codeword.as_ref() == Some(&cw)).unwrap_or(false)
            });
        out.push(CheckResult::new(&name, pass, format!("{trials} words with {} errors", pair.t)));
    }

    // projectors
    if let Some(family) = inst.family.as_mut() {
        if opts.corrupt_projector {
            if let Some(pr) = family.projectors.first_mut() {
                let bump = pr.p_matrix.get(0, 0) + &level.one();
                pr.p_matrix.set(0, 0, bump);
                if let Some(inv) = pr.p_matrix.inverse() {
                    pr.p_inverse = inv;
                }
            }
        }
        let family = &*family;
        let mut rng = rng_for(seed, "selftest/projectors");
        for pr in &family.projectors {
            let deg = BigInt::from(pr.kernel.order());
            let k = level.from_int(i64::try_from(&deg % BigInt::from(level.characteristic())).unwrap_or(0));
            let pushed = pr.p_matrix.mul_vec(&pr.one_coords);
            let want: Vec<FieldElem> = pr.one_coords.iter().map(|c| c * &k).collect();
            out.push(CheckResult::new(
                &format!("trace_of_one_r{}", pr.r),
                pushed == want,
                format!("deg pi = {}", pr.kernel.order()),
            ));

            let mut fixed = CheckResult::new(&format!("projector_fixes_r{}", pr.r), true, format!("{trials} elements"));
            for _ in 0..trials {
                let g = random_vec(level, pr.target_l0.dim(), &mut rng);
                let res = family
                    .include_l0(pr.r, &g)
                    .and_then(|c| family.l0_n.to_parent_coords(&c))
                    .and_then(|f| pr.phi0(&f));
                if res.as_ref() != Ok(&g) {
                    fixed = CheckResult::failed_with(&fixed.name, "phi0 does not fix an element of its factor", &g);
                    break;
                }
            }
            out.push(fixed);

            for other in family.projectors.iter().filter(|o| o.r != pr.r) {
                let mut killed = CheckResult::new(
                    &format!("projector_r{}_kills_r{}", pr.r, other.r),
                    true,
                    format!("{trials} elements"),
                );
                for _ in 0..trials {
                    let h = random_vec(level, other.target_basis.dim(), &mut rng);
                    let res = family.include_full(other.r, &h).and_then(|f| pr.phi0(&f));
                    if !res.map(|v| v.iter().all(FieldElem::is_zero)).unwrap_or(false) {
                        killed = CheckResult::failed_with(&killed.name, "phi0 does not kill the other factor", &h);
                        break;
                    }
                }
                out.push(killed);
            }
        }
        let mut split = CheckResult::new("decomposition", true, format!("{trials} words"));
        for _ in 0..trials {
            let f = random_vec(level, family.l0_n.dim(), &mut rng);
            let ok = family.split_word(&f).and_then(|parts| family.recombine(&parts)).map(|g| g == f).unwrap_or(false);
            if !ok {
                split = CheckResult::failed_with("decomposition", "sum of the projections differs from f", &f);
                break;
            }
        }
        out.push(split);
        let stacked: Vec<Vec<FieldElem>> = family
            .projectors
            .iter()
            .filter_map(|pr| family.include_matrix(pr.r).ok())
            .flat_map(|m| m.to_rows())
            .collect();
        let rank = if stacked.is_empty() { 0 } else { Matrix::from_rows(level, stacked).rank() };
        out.push(CheckResult::new(
            "direct_sum_rank",
            rank == family.l0_n.dim(),
            format!("rank {rank} of dim {}", family.l0_n.dim()),
        ));
    }

    if let Some(scheme) = &inst.scheme {
        let mut rng = rng_for(seed, "selftest/composite");
        let t = scheme.capacity();
        let mut comp = CheckResult::new("composite_decode", true, format!("{trials} words with {t} errors per factor"));
        for _ in 0..trials {
            let f = random_vec(level, scheme.word_dim(), &mut rng);
            let ok = scheme
                .encode(&f)
                .and_then(|cws| {
                    cws.into_iter().map(|(r, c)| Ok((r, channel_corrupt(&c, t, &mut rng)?))).collect::<Result<Vec<_>>>()
                })
                .and_then(|rx| scheme.decode(&rx))
                .map(|d| d.word.as_ref() == Some(&f))
                .unwrap_or(false);
            if !ok {
                comp = CheckResult::failed_with("composite_decode", "composite decoding did not recover f", &f);
                break;
            }
        }
        out.push(comp);
    }
    out
}

/// Builds the instance and runs [`selftest_instance`]. Construction failures
/// become a single failing check.
pub fn selftest(config: &InstanceConfig, opts: SelftestOptions) -> Vec<CheckResult> {
    match Instance::build(config) {
        Ok(mut inst) => selftest_instance(&mut inst, opts),
        Err(e) => vec![CheckResult::new("build", false, e.to_string())],
    }
}

/// Evaluation-vector equality of `f` and `g` (in `L_0(D_N)` coordinates) on
/// random points.
pub fn agree_on_points<R: Rng + ?Sized>(
    curve: &Curve,
    basis: &RRBasis,
    f: &[FieldElem],
    g: &[FieldElem],
    count: usize,
    rng: &mut R,
) -> Result<bool> {
    let mut seen = 0;
    let mut tries = 0;
    while seen < count {
        tries += 1;
        if tries > 50 * count {
            return Err(Error::RetryExhausted { attempts: tries, what: "evaluable comparison points".into() });
        }
        let z = curve.random_point(basis.level(), rng)?;
        let Ok(v) = basis.eval_point(&z) else { continue };
        if dot(f, &v) != dot(g, &v) {
            return Ok(false);
        }
        seen += 1;
    }
    Ok(true)
}

/// The construction data recorded in a code's provenance.
#[derive(Clone, Debug)]
pub struct CodeContext {
    pub curve: Curve,
    pub divisor: crate::curve::Divisor,
    /// The full evaluation set, including the base point for vanishing codes.
    pub sigma: Vec<Point>,
    pub base_point: Option<Point>,
}

impl CodeContext {
    pub fn of(code: &LinearCode) -> Result<CodeContext> {
        let prov = code.provenance.as_ref().ok_or_else(|| Error::Precondition("code has no provenance".into()))?;
        let spec = prov.curve.as_ref().ok_or_else(|| Error::Precondition("code provenance has no curve".into()))?;
        let curve = Curve::from_spec(spec)?;
        let divisor = crate::curve::Divisor::parse(&curve, code.field, &prov.divisor)?;
        let mut sigma = prov.sigma.iter().map(|p| curve.parse_point(p)).collect::<Result<Vec<_>>>()?;
        let base_point = prov.base_point.as_ref().map(|p| curve.parse_point(p)).transpose()?;
        if let Some(p) = &base_point {
            sigma.push(p.clone());
            sigma.sort();
        }
        Ok(CodeContext { curve, divisor, sigma, base_point })
    }

    /// The decoding pair of a vanishing code, rebuilt from its provenance.
    pub fn pair(&self, code: &LinearCode) -> Result<ECPair> {
        let p = self.base_point.as_ref().ok_or_else(|| Error::Precondition("not a vanishing code".into()))?;
        let pair = pair_for_code(&self.curve, &self.divisor, &self.sigma, p, code.clone())?;
        let (rebuilt, _) = build_code(&self.curve, &self.divisor, &self.sigma, p)?;
        if rebuilt.generator != code.generator {
            return Err(Error::Precondition("generator does not match its provenance".into()));
        }
        Ok(pair)
    }
}
