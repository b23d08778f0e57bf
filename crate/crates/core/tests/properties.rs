use proptest::prelude::*;
use rand::Rng;

use ellcode_core::codes::{dual_code, evaluation_code, outside_margin};
use ellcode_core::curve::{Curve, Divisor, Point};
use ellcode_core::field::Embedding;
use ellcode_core::field::{make_field, FieldElem};
use ellcode_core::kernels::{kernel_pi, pi_apply, support_set};
use ellcode_core::linalg::{dot, Matrix};
use ellcode_core::projectors::pushforward;
use ellcode_core::rrspace::{evaluate, lbasis};
use ellcode_core::seed::rng_from;

fn e0() -> Curve {
    Curve::from_ints(5, 1, 0, 1).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn field_axioms(seed: u64, deg in 1usize..=6) {
        let f = make_field(5, deg).unwrap();
        let mut rng = rng_from(seed);
        let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, f.zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), f.one());
        }
        prop_assert_eq!(a.frobenius(), a.pow(5));
    }

    #[test]
    fn embeddings_are_ring_maps(seed: u64, (s, t) in prop_oneof![Just((1usize, 2usize)), Just((2, 4)), Just((2, 6)), Just((3, 6)), Just((4, 12))]) {
        let (fs, ft) = (make_field(5, s).unwrap(), make_field(5, t).unwrap());
        let emb = Embedding::new(fs, ft).unwrap();
        let mut rng = rng_from(seed);
        let (a, b) = (fs.random(&mut rng), fs.random(&mut rng));
        let m = |x: &FieldElem| emb.apply(x).unwrap();
        prop_assert_eq!(m(&(&a + &b)), &m(&a) + &m(&b));
        prop_assert_eq!(m(&(&a * &b)), &m(&a) * &m(&b));
        prop_assert_eq!(m(&fs.one()), ft.one());
    }

    #[test]
    fn group_law(seed: u64, level in 1usize..=8) {
        let e = e0();
        let k = e.level(level).unwrap();
        let lc = e.at(k).unwrap();
        let mut rng = rng_from(seed);
        let p = e.random_point(k, &mut rng).unwrap();
        let q = e.random_point(k, &mut rng).unwrap();
        let r = e.random_point(k, &mut rng).unwrap();
        prop_assert_eq!(lc.add(&lc.add(&p, &q), &r), lc.add(&p, &lc.add(&q, &r)));
        prop_assert_eq!(lc.add(&p, &q), lc.add(&q, &p));
        prop_assert_eq!(lc.add(&p, &lc.neg(&p)), Point::infinity(k));
        prop_assert_eq!(lc.scalar_mul(3, &p), lc.add(&p, &lc.double(&p)));
        prop_assert!(lc.is_on_curve(&lc.add(&p, &q)));
    }

    #[test]
    fn frobenius_is_an_endomorphism(seed: u64, level in 2usize..=6) {
        let e = e0();
        let k = e.level(level).unwrap();
        let mut rng = rng_from(seed);
        let p = e.random_point(k, &mut rng).unwrap();
        let q = e.random_point(k, &mut rng).unwrap();
        let fr = |z: &Point, i| e.frobenius_point(z, i).unwrap();
        prop_assert_eq!(fr(&e.add(&p, &q).unwrap(), 1), e.add(&fr(&p, 1), &fr(&q, 1)).unwrap());
        prop_assert_eq!(fr(&p, level as u64), p.clone());
        // pi^2 - t pi + q = 0
        let t = e.trace();
        let lhs = e.add(&fr(&p, 2), &e.scalar_mul(-t, &fr(&p, 1)).unwrap()).unwrap();
        prop_assert_eq!(e.add(&lhs, &e.scalar_mul(5, &p).unwrap()).unwrap(), Point::infinity(k));
    }

    #[test]
    fn trace_map_lands_in_the_base(seed: u64, m in prop_oneof![Just(2u64), Just(3)]) {
        let e = e0();
        let k = e.level(m as usize).unwrap();
        let p = e.random_point(k, &mut rng_from(seed)).unwrap();
        let img = pi_apply(&e, &p, m).unwrap();
        prop_assert_eq!(e.frobenius_point(&img, 1).unwrap(), img);
    }
}

#[test]
fn hasse_bound_over_small_fields() {
    for (p, a, b) in [(5u64, 0i64, 1i64), (5, 1, 1), (5, 1, 2), (7, 3, 2), (11, 1, 6)] {
        let e = Curve::from_ints(p, 1, a, b).unwrap();
        for m in 1..=4u32 {
            let n = e.count_points_ext(m);
            let q = (p as f64).powi(m as i32);
            let dev = (n - num_bigint::BigInt::from(q as u64 + 1)).to_string().parse::<f64>().unwrap().abs();
            assert!(dev <= 2.0 * q.sqrt(), "p = {p}, m = {m}: deviation {dev}");
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn riemann_roch_dimension(seed: u64) {
        let e = e0();
        let k = e.level(2).unwrap();
        let pts = e.enumerate_points(k).unwrap();
        let mut rng = rng_from(seed);
        let mut d = Divisor::zero(k);
        for _ in 0..rng.gen_range(1..=6) {
            d.add_point(pts[rng.gen_range(0..pts.len())].clone(), rng.gen_range(1..=3)).unwrap();
        }
        let basis = lbasis(&e, &d).unwrap();
        prop_assert_eq!(basis.dim() as u64, d.degree());
        let outside: Vec<Point> = pts.iter().filter(|z| !d.contains(z)).cloned().collect();
        prop_assert_eq!(basis.evaluation_matrix(&outside).unwrap().rank(), basis.dim());
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn evaluation_is_linear(seed: u64) {
        let e = e0();
        let k = e.level(4).unwrap();
        let mut rng = rng_from(seed);
        let d = support_set(&e, 2, k).unwrap().divisor;
        let basis = lbasis(&e, &d).unwrap();
        let f: Vec<FieldElem> = (0..basis.dim()).map(|_| k.random(&mut rng)).collect();
        let g: Vec<FieldElem> = (0..basis.dim()).map(|_| k.random(&mut rng)).collect();
        let (a, b) = (k.random(&mut rng), k.random(&mut rng));
        let h: Vec<FieldElem> = f.iter().zip(&g).map(|(x, y)| &(&a * x) + &(&b * y)).collect();
        let z = loop {
            let z = e.random_point(k, &mut rng).unwrap();
            if !d.contains(&z) { break z; }
        };
        let v = |c: &[FieldElem]| evaluate(&basis.combination(c), &z).unwrap();
        prop_assert_eq!(v(&h), &(&a * &v(&f)) + &(&b * &v(&g)));
        prop_assert_eq!(v(&h), dot(&h, &basis.eval_point(&z).unwrap()));
    }

    #[test]
    fn dual_is_orthogonal(seed: u64, n in 8usize..30, deg in 1usize..7) {
        let e = e0();
        let k = e.level(2).unwrap();
        let mut pts: Vec<Point> = e.enumerate_points(k).unwrap().into_iter().filter(|z| !z.is_infinity()).collect();
        let mut rng = rng_from(seed);
        for i in (1..pts.len()).rev() {
            pts.swap(i, rng.gen_range(0..=i));
        }
        pts.truncate(n);
        pts.sort();
        let d = Divisor::zero(k).with_point(Point::infinity(k), deg as u32).unwrap();
        let (code, _) = evaluation_code(&e, &d, &pts).unwrap();
        let dual = dual_code(&code);
        prop_assert_eq!(code.dimension() + dual.dimension(), n);
        let gram = code.generator.mul(&dual.generator.transpose());
        prop_assert!(gram.to_rows().iter().flatten().all(FieldElem::is_zero));
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn pushforward_ignores_the_nodes(seed: u64, s1: u64, s2: u64) {
        let e = e0();
        let k = e.level(6).unwrap();
        let full = lbasis(&e, &support_set(&e, 6, k).unwrap().divisor).unwrap();
        let target = lbasis(&e, &support_set(&e, 3, k).unwrap().divisor).unwrap();
        let ker = kernel_pi(&e, 2, k).unwrap();
        let mut rng = rng_from(seed);
        let c = Matrix::from_rows(k, vec![(0..full.dim()).map(|_| k.random(&mut rng)).collect()]);
        let a = pushforward(&e, &full, &c, 2, &ker, &target, &mut rng_from(s1)).unwrap();
        let b = pushforward(&e, &full, &c, 2, &ker, &target, &mut rng_from(s2)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn outside_points_exceed_the_support_degree() {
    for (p, a, b) in [(5u64, 0i64, 1i64), (5, 1, 1), (7, 3, 2)] {
        let e = Curve::from_ints(p, 1, a, b).unwrap();
        for n in [2u64, 3, 5, 6] {
            if let Ok((outside, deg)) = outside_margin(&e, n) {
                assert!(outside > deg, "p = {p}, N = {n}: {outside} <= {deg}");
            }
        }
    }
}
