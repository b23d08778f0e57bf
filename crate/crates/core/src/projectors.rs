//! Trace maps along `pi_n` and the projectors `phi_{N/r}`, `phi0_{N/r}` that
//! split `L_0(D_N)` into the factors `L_0(D_r)`.
//!
//! A pushforward is never computed symbolically. We pick nodes `z_j`, push
//! them forward to `y_j = pi_n(z_j)`, sum the function over the fiber
//! `z_j + Ker pi_n`, and interpolate the result in a basis of the target
//! space from its values at the `y_j`.

use rand::Rng;

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::kernels::{kernel_pi, pi_apply, require_deg_coprime_p, squarefree_primes, support_set, KernelData};
use crate::linalg::{dot, Matrix};
use crate::rrspace::{l0_from, lbasis, RRBasis};

/// Extra interpolation nodes beyond the target dimension.
pub const NODE_MARGIN: usize = 4;
const SAMPLE_BUDGET: usize = 50;

/// Coordinates `X` with `X * E = values`, where `E` is the `dim x K` matrix of
/// `basis` evaluated at `K` points. Uses the first independent points and
/// checks the rest for consistency.
fn interpolate_rows(basis_at_points: &Matrix, values: &Matrix) -> Result<Matrix> {
    let dim = basis_at_points.rows();
    let cols = basis_at_points.transpose().independent_rows();
    if cols.len() < dim {
        return Err(Error::Singular(format!("only {} of {dim} interpolation conditions are independent", cols.len())));
    }
    let square = basis_at_points.select_cols(&cols);
    let inv = square.inverse().expect("independent columns");
    let coords = values.select_cols(&cols).mul(&inv);
    if coords.mul(basis_at_points) != *values {
        return Err(Error::Singular("values are not those of an element of the target space".into()));
    }
    Ok(coords)
}

/// Random points at which `basis` evaluates without indeterminacy.
fn sample_points<R: Rng + ?Sized>(curve: &Curve, basis: &[&RRBasis], count: usize, rng: &mut R) -> Result<Vec<Point>> {
    let level = basis[0].level();
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > SAMPLE_BUDGET * count.max(1) {
            return Err(Error::RetryExhausted { attempts: tries, what: "sampling evaluable points".into() });
        }
        let z = curve.random_point(level, rng)?;
        if basis.iter().all(|b| b.eval_point(&z).is_ok()) && !out.contains(&z) {
            out.push(z);
        }
    }
    Ok(out)
}

/// Expresses functions, given as values on random points, in `target`.
/// `values_at(z)` returns the values of every function at `z`.
pub fn interpolate_functions<R, F>(
    curve: &Curve,
    target: &RRBasis,
    nfuncs: usize,
    values_at: F,
    rng: &mut R,
) -> Result<Matrix>
where
    R: Rng + ?Sized,
    F: Fn(&Point) -> Result<Vec<FieldElem>>,
{
    let k = target.dim() + NODE_MARGIN;
    let mut pts = Vec::with_capacity(k);
    let mut vals = Vec::with_capacity(k);
    for z in sample_points(curve, &[target], SAMPLE_BUDGET * k, rng)? {
        if pts.len() == k {
            break;
        }
        if let Ok(v) = values_at(&z) {
            pts.push(z);
            vals.push(v);
        }
    }
    if pts.len() < k {
        return Err(Error::RetryExhausted { attempts: SAMPLE_BUDGET * k, what: "interpolation points".into() });
    }
    let e = target.evaluation_matrix(&pts)?;
    let values = Matrix::from_rows(target.level(), vals).transpose();
    debug_assert_eq!(values.rows(), nfuncs);
    interpolate_rows(&e, &values)
}

/// Interpolation nodes for a pushforward along `pi_n` into `target`.
#[derive(Clone, Debug)]
pub struct PushNodes {
    /// `z_j`
    pub nodes: Vec<Point>,
    /// `z_j + Ker pi_n`
    pub fibers: Vec<Vec<Point>>,
    /// `target` evaluated at `pi_n(z_j)`: `dim x nodes`
    pub target_at_images: Matrix,
}

impl PushNodes {
    /// Picks `dim + NODE_MARGIN` nodes whose images and fibers evaluate cleanly
    /// for `target` and for every basis in `sources`.
    pub fn sample<R: Rng + ?Sized>(
        curve: &Curve,
        n: u64,
        kernel: &KernelData,
        target: &RRBasis,
        sources: &[&RRBasis],
        rng: &mut R,
    ) -> Result<PushNodes> {
        let level = target.level();
        let lc = curve.at(level)?;
        let want = target.dim() + NODE_MARGIN;
        let mut nodes = Vec::new();
        let mut fibers = Vec::new();
        let mut cols = Vec::new();
        let mut tries = 0;
        while nodes.len() < want {
            tries += 1;
            if tries > SAMPLE_BUDGET * want {
                return Err(Error::RetryExhausted { attempts: tries, what: "pushforward nodes".into() });
            }
            let z = curve.random_point(level, rng)?;
            let y = pi_apply(curve, &z, n)?;
            let Ok(col) = target.eval_point(&y) else { continue };
            let fiber: Vec<Point> = kernel.points.iter().map(|g| lc.add(&z, g)).collect();
            if !fiber.iter().all(|w| sources.iter().all(|b| b.eval_point(w).is_ok())) {
                continue;
            }
            if nodes.contains(&z) {
                continue;
            }
            nodes.push(z);
            fibers.push(fiber);
            cols.push(col);
        }
        let target_at_images = Matrix::from_rows(level, cols).transpose();
        Ok(PushNodes { nodes, fibers, target_at_images })
    }

    /// Fiber sums of each basis function of `source`: `dim(source) x nodes`.
    pub fn fiber_sums(&self, source: &RRBasis) -> Result<Matrix> {
        let level = source.level();
        let mut m = Matrix::zeros(level, source.dim(), self.nodes.len());
        for (j, fiber) in self.fibers.iter().enumerate() {
            let mut acc = vec![level.zero(); source.dim()];
            for w in fiber {
                for (a, v) in acc.iter_mut().zip(source.eval_point(w)?) {
                    *a += &v;
                }
            }
            for (i, a) in acc.into_iter().enumerate() {
                m.set(i, j, a);
            }
        }
        Ok(m)
    }

    /// Pushforward of functions given by their fiber sums (`funcs x nodes`),
    /// as coordinates in the target basis (`funcs x dim`).
    pub fn interpolate(&self, sums: &Matrix) -> Result<Matrix> {
        interpolate_rows(&self.target_at_images, sums)
    }
}

/// `(pi_n)_* f` for the functions `coords * source` (one per row of
/// `coords`), expressed in `target`. Fresh random nodes are drawn; the result
/// does not depend on them.
pub fn pushforward<R: Rng + ?Sized>(
    curve: &Curve,
    source: &RRBasis,
    coords: &Matrix,
    n: u64,
    kernel: &KernelData,
    target: &RRBasis,
    rng: &mut R,
) -> Result<Matrix> {
    let nodes = PushNodes::sample(curve, n, kernel, target, &[source], rng)?;
    let sums = coords.mul(&nodes.fiber_sums(source)?);
    nodes.interpolate(&sums)
}

/// The projector onto the `r`-factor of `L(D_N)`.
#[derive(Clone, Debug)]
pub struct ProjectorData {
    pub n_total: u64,
    pub r: u64,
    /// `Ker pi_{N/r}`
    pub kernel: KernelData,
    /// Basis of `L(D_r)`.
    pub target_basis: RRBasis,
    /// Basis of `L_0(D_r)`.
    pub target_l0: RRBasis,
    /// Column `j`: the pushforward of basis function `j` of `L(D_r)`.
    pub p_matrix: Matrix,
    pub p_inverse: Matrix,
    pub base_point: Point,
    /// The constant function 1 in `L(D_r)` coordinates.
    pub one_coords: Vec<FieldElem>,
    /// Pushforward of the `L(D_N)` basis: `dim L(D_N) x dim L(D_r)`.
    push_n: Matrix,
    /// `L(D_r) -> L(D_N)` coordinates.
    pub inclusion: Matrix,
}

impl ProjectorData {
    /// `phi_{N/r}(f)` in `L(D_r)` coordinates, for `f` in `L(D_N)` coordinates.
    pub fn phi(&self, f: &[FieldElem]) -> Vec<FieldElem> {
        let pushed = self.push_n.vec_mul(f);
        self.p_inverse.mul_vec(&pushed)
    }

    /// `phi0_{N/r}(f) = phi(f) - phi(f)(P)`, in `L_0(D_r)` coordinates.
    pub fn phi0(&self, f: &[FieldElem]) -> Result<Vec<FieldElem>> {
        self.phi0_from_pushed(&self.push_n.vec_mul(f))
    }

    /// `phi0_{N/r}` of `coords * source` for any basis of functions on the
    /// working level, through a fresh pushforward on random nodes instead of
    /// the stored one.
    pub fn phi0_fresh<R: Rng + ?Sized>(
        &self,
        curve: &Curve,
        source: &RRBasis,
        coords: &[FieldElem],
        rng: &mut R,
    ) -> Result<Vec<FieldElem>> {
        let c = Matrix::from_rows(source.level(), vec![coords.to_vec()]);
        let pushed = pushforward(curve, source, &c, self.n_total / self.r, &self.kernel, &self.target_basis, rng)?;
        self.phi0_from_pushed(pushed.row(0))
    }

    fn phi0_from_pushed(&self, pushed: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let g = self.p_inverse.mul_vec(pushed);
        let at_p = self.target_basis.eval_combination(&g, &self.base_point)?;
        let shifted: Vec<FieldElem> = g.iter().zip(&self.one_coords).map(|(a, o)| a - &(&at_p * o)).collect();
        self.target_l0.from_parent_coords(&shifted)
    }

    /// Dense matrix of `phi0` on `L(D_N)` coordinates: `dim L(D_N) x dim L_0(D_r)`.
    pub fn phi0_matrix(&self, dim_n: usize) -> Result<Matrix> {
        let field = self.p_matrix.field();
        let rows = (0..dim_n)
            .map(|i| {
                let mut e = vec![field.zero(); dim_n];
                e[i] = field.one();
                self.phi0(&e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(field, rows))
    }
}

/// Builds `phi_{N/r}` against the given basis of `L(D_N)`.
pub fn build_projector<R: Rng + ?Sized>(
    curve: &Curve,
    full_n: &RRBasis,
    n_total: u64,
    r: u64,
    base_point: &Point,
    rng: &mut R,
) -> Result<ProjectorData> {
    let primes = squarefree_primes(n_total)?;
    if !primes.contains(&r) {
        return Err(Error::Precondition(format!("{r} is not a prime factor of N = {n_total}")));
    }
    let comp = n_total / r;
    if comp == 1 {
        return Err(Error::Precondition("N/r must be > 1: a single prime has no complementary factor".into()));
    }
    require_deg_coprime_p(curve, n_total)?;
    let level = full_n.level();
    let kernel = kernel_pi(curve, comp, level)?;
    let d_r = support_set(curve, r, level)?;
    let target_basis = lbasis(curve, &d_r.divisor)?;
    let target_l0 = l0_from(&target_basis, base_point)?;

    let nodes = PushNodes::sample(curve, comp, &kernel, &target_basis, &[full_n, &target_basis], rng)?;
    let p_matrix = nodes.interpolate(&nodes.fiber_sums(&target_basis)?)?.transpose();
    let p_inverse =
        p_matrix.inverse().ok_or_else(|| Error::Singular(format!("p_{{{n_total}/{r}}} is not invertible")))?;
    let push_n = nodes.interpolate(&nodes.fiber_sums(full_n)?)?;

    let one_coords = interpolate_functions(curve, &target_basis, 1, |_| Ok(vec![level.one()]), rng)?.row(0).to_vec();
    let inclusion = interpolate_functions(curve, full_n, target_basis.dim(), |z| target_basis.eval_point(z), rng)?;
    Ok(ProjectorData {
        n_total,
        r,
        kernel,
        target_basis,
        target_l0,
        p_matrix,
        p_inverse,
        base_point: base_point.clone(),
        one_coords,
        push_n,
        inclusion,
    })
}

/// All projectors of `N` with one shared base point.
#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    pub n_total: u64,
    pub base_point: Point,
    /// `L(D_N)`
    pub full_n: RRBasis,
    /// `L_0(D_N)`
    pub l0_n: RRBasis,
    pub projectors: Vec<ProjectorData>,
}

impl ProjectorFamily {
    pub fn build<R: Rng + ?Sized>(
        curve: &Curve,
        n_total: u64,
        level: Field,
        base_point: &Point,
        rng: &mut R,
    ) -> Result<ProjectorFamily> {
        let primes = squarefree_primes(n_total)?;
        if primes.len() < 2 {
            return Err(Error::Precondition(format!("N = {n_total} needs at least two prime factors")));
        }
        require_deg_coprime_p(curve, n_total)?;
        let x_n = support_set(curve, n_total, level)?;
        let full_n = lbasis(curve, &x_n.divisor)?;
        let l0_n = l0_from(&full_n, base_point)?;
        let projectors = primes
            .iter()
            .map(|&r| build_projector(curve, &full_n, n_total, r, base_point, rng))
            .collect::<Result<_>>()?;
        Ok(ProjectorFamily { n_total, base_point: base_point.clone(), full_n, l0_n, projectors })
    }

    pub fn primes(&self) -> Vec<u64> {
        self.projectors.iter().map(|p| p.r).collect()
    }

    pub fn projector(&self, r: u64) -> Option<&ProjectorData> {
        self.projectors.iter().find(|p| p.r == r)
    }

    /// `L_0(D_r) -> L_0(D_N)` coordinates.
    pub fn include_l0(&self, r: u64, coords: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let pr = self.projector(r).ok_or_else(|| Error::Precondition(format!("no projector for r = {r}")))?;
        let in_lr = pr.target_l0.to_parent_coords(coords)?;
        let in_ln = pr.inclusion.vec_mul(&in_lr);
        self.l0_n.from_parent_coords(&in_ln)
    }

    /// `L(D_r) -> L(D_N)` coordinates.
    pub fn include_full(&self, r: u64, coords: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let pr = self.projector(r).ok_or_else(|| Error::Precondition(format!("no projector for r = {r}")))?;
        Ok(pr.inclusion.vec_mul(coords))
    }

    /// `f -> (phi0_{N/r}(f))_r` for `f` in `L_0(D_N)` coordinates.
    pub fn split_word(&self, f: &[FieldElem]) -> Result<Vec<(u64, Vec<FieldElem>)>> {
        let full = self.l0_n.to_parent_coords(f)?;
        self.projectors.iter().map(|p| Ok((p.r, p.phi0(&full)?))).collect()
    }

    /// Sum of the parts under the inclusions `L_0(D_r) -> L_0(D_N)`.
    pub fn recombine(&self, parts: &[(u64, Vec<FieldElem>)]) -> Result<Vec<FieldElem>> {
        let mut acc = vec![self.full_n.level().zero(); self.l0_n.dim()];
        for (r, c) in parts {
            let pr = self.projector(*r).ok_or_else(|| Error::Precondition(format!("no projector for r = {r}")))?;
            if pr.base_point != self.base_point {
                return Err(Error::Precondition("projectors disagree on the base point".into()));
            }
            if c.len() != pr.target_l0.dim() {
                return Err(Error::Precondition(format!("part for r = {r} has the wrong length")));
            }
            for (a, v) in acc.iter_mut().zip(self.include_l0(*r, c)?) {
                *a += &v;
            }
        }
        Ok(acc)
    }

    /// `phi0_{N/r}` on `L_0(D_N)` coordinates: `dim L_0(D_N) x dim L_0(D_r)`.
    pub fn split_matrix(&self, r: u64) -> Result<Matrix> {
        let pr = self.projector(r).ok_or_else(|| Error::Precondition(format!("no projector for r = {r}")))?;
        let parent = self.l0_n.parent_coords.as_ref().expect("L_0 basis");
        Ok(parent.mul(&pr.phi0_matrix(self.full_n.dim())?))
    }

    /// The inclusion `L_0(D_r) -> L_0(D_N)`: `dim L_0(D_r) x dim L_0(D_N)`.
    pub fn include_matrix(&self, r: u64) -> Result<Matrix> {
        let pr = self.projector(r).ok_or_else(|| Error::Precondition(format!("no projector for r = {r}")))?;
        let level = self.full_n.level();
        let dim = pr.target_l0.dim();
        let rows = (0..dim)
            .map(|i| {
                let mut e = vec![level.zero(); dim];
                e[i] = level.one();
                self.include_l0(r, &e)
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Ok(Matrix::zeros(level, 0, self.l0_n.dim()));
        }
        Ok(Matrix::from_rows(level, rows))
    }

    /// Value at `z` of the `L_0(D_N)` element with coordinates `f`.
    pub fn eval_l0(&self, f: &[FieldElem], z: &Point) -> Result<FieldElem> {
        Ok(dot(f, &self.l0_n.eval_point(z)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_for;

    fn setup() -> (Curve, Field, Point) {
        let e = Curve::from_ints(5, 1, 0, 1).unwrap();
        let l6 = e.level(6).unwrap();
        let x6 = support_set(&e, 6, l6).unwrap();
        let mut rng = rng_for(7, "base");
        let p = loop {
            let z = e.random_point(l6, &mut rng).unwrap();
            if !x6.divisor.contains(&z) {
                break z;
            }
        };
        (e, l6, p)
    }

    #[test]
    fn constants_push_forward_to_the_degree() {
        let (e, l6, p) = setup();
        let fam = ProjectorFamily::build(&e, 6, l6, &p, &mut rng_for(1, "fam")).unwrap();
        for pr in &fam.projectors {
            // |Ker pi_{6/r}| is 21 or 6, both 1 mod 5
            assert_eq!(pr.p_matrix.mul_vec(&pr.one_coords), pr.one_coords);
        }
    }

    #[test]
    fn phi0_is_identity_on_its_factor_and_kills_the_other() {
        let (e, l6, p) = setup();
        let fam = ProjectorFamily::build(&e, 6, l6, &p, &mut rng_for(2, "fam")).unwrap();
        let mut rng = rng_for(3, "words");
        for pr in &fam.projectors {
            let g: Vec<_> = (0..pr.target_l0.dim()).map(|_| l6.random(&mut rng)).collect();
            let in_n = fam.l0_n.to_parent_coords(&fam.include_l0(pr.r, &g).unwrap()).unwrap();
            assert_eq!(pr.phi0(&in_n).unwrap(), g);
            for other in fam.projectors.iter().filter(|o| o.r != pr.r) {
                let h: Vec<_> = (0..other.target_basis.dim()).map(|_| l6.random(&mut rng)).collect();
                let h_n = fam.include_full(other.r, &h).unwrap();
                assert!(pr.phi0(&h_n).unwrap().iter().all(|c| c.is_zero()));
            }
        }
        let f: Vec<_> = (0..fam.l0_n.dim()).map(|_| l6.random(&mut rng)).collect();
        let parts = fam.split_word(&f).unwrap();
        let back = fam.recombine(&parts).unwrap();
        assert_eq!(fam.split_word(&back).unwrap(), parts);
    }

    #[test]
    fn pushforward_does_not_depend_on_nodes() {
        let (e, l6, _) = setup();
        let x6 = support_set(&e, 6, l6).unwrap();
        let full = lbasis(&e, &x6.divisor).unwrap();
        let d2 = lbasis(&e, &support_set(&e, 2, l6).unwrap().divisor).unwrap();
        let ker = kernel_pi(&e, 3, l6).unwrap();
        let mut rng = rng_for(4, "f");
        let coords = Matrix::from_rows(l6, vec![(0..full.dim()).map(|_| l6.random(&mut rng)).collect()]);
        let a = pushforward(&e, &full, &coords, 3, &ker, &d2, &mut rng_for(5, "a")).unwrap();
        let b = pushforward(&e, &full, &coords, 3, &ker, &d2, &mut rng_for(6, "b")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_trivial_complement() {
        let (e, l6, p) = setup();
        let x6 = support_set(&e, 6, l6).unwrap();
        let full = lbasis(&e, &x6.divisor).unwrap();
        assert!(matches!(build_projector(&e, &full, 3, 3, &p, &mut rng_for(0, "x")), Err(Error::Precondition(_))));
        assert!(matches!(ProjectorFamily::build(&e, 3, l6, &p, &mut rng_for(0, "x")), Err(Error::Precondition(_))));
    }
}
