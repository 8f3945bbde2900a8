use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use tritri::kernel::{orient2d, orient3d};
use tritri::{
    Axis, ExplicitPoint3, FloatKernel, ImplicitKernel, ImplicitLpi, ImplicitSsi, Kernel, KernelConfig, Point3, PointHandle,
    PredicateCounters, RationalKernel, Sign,
};

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn sign_of(d: BigRational) -> Sign {
    Sign::of(&d)
}

fn reference3(p: [[f64; 3]; 4]) -> Sign {
    let r: Vec<Vec<BigRational>> = p[1..].iter().map(|v| (0..3).map(|k| q(v[k]) - q(p[0][k])).collect()).collect();
    sign_of(
        &r[0][0] * (&r[1][1] * &r[2][2] - &r[1][2] * &r[2][1]) - &r[0][1] * (&r[1][0] * &r[2][2] - &r[1][2] * &r[2][0])
            + &r[0][2] * (&r[1][0] * &r[2][1] - &r[1][1] * &r[2][0]),
    )
}

fn reference2(p: [[f64; 2]; 3]) -> Sign {
    sign_of((q(p[1][0]) - q(p[0][0])) * (q(p[2][1]) - q(p[0][1])) - (q(p[1][1]) - q(p[0][1])) * (q(p[2][0]) - q(p[0][0])))
}

fn nudged(x: f64, k: i8) -> f64 {
    (0..k.unsigned_abs()).fold(x, |y, _| if k > 0 { y.next_up() } else { y.next_down() })
}

/// Small dyadic coordinates, with the last point forced near the span of the
/// others and then nudged by a few ulps.
fn near_coplanar() -> impl Strategy<Value = [[f64; 3]; 4]> {
    (
        prop::array::uniform3(prop::array::uniform3(-64i32..64)),
        -8i32..8,
        -8i32..8,
        0usize..3,
        -3i8..=3,
        prop::sample::select(vec![-1060, -600, -20, 0, 40, 900]),
    )
        .prop_map(|(g, s, t, k, ulps, e)| {
            let p = g.map(|v| v.map(|x| x as f64 / 16.0));
            let mut d = [0.0; 3];
            for i in 0..3 {
                d[i] = p[0][i] + s as f64 / 4.0 * (p[1][i] - p[0][i]) + t as f64 / 4.0 * (p[2][i] - p[0][i]);
            }
            d[k] = nudged(d[k], ulps);
            let scale = 2f64.powi(e.max(-1022)) * 2f64.powi((e + 1022).min(0));
            [p[0], p[1], p[2], d].map(|v| v.map(|x| x * scale))
        })
}

fn kernels() -> [FloatKernel; 2] {
    [
        FloatKernel::new(KernelConfig::default()),
        FloatKernel::new(KernelConfig::default().with_force_exact(true)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn orient3d_matches_reference(p in near_coplanar()) {
        let want = reference3(p);
        prop_assert_eq!(orient3d(p[0], p[1], p[2], p[3]).unwrap(), want);
        for k in kernels() {
            let v = p.map(Point3::from);
            prop_assert_eq!(k.orient3d(&v[0], &v[1], &v[2], &v[3]), want);
        }
    }

    #[test]
    fn orient2d_matches_reference(p in near_coplanar()) {
        let flat = [p[0], p[1], p[3]].map(|v| [v[0], v[1]]);
        let want = reference2(flat);
        prop_assert_eq!(orient2d(flat[0], flat[1], flat[2]).unwrap(), want);
        let v = [p[0], p[1], p[3]].map(Point3::from);
        for k in kernels() {
            prop_assert_eq!(k.orient2d(&v[0], &v[1], &v[2], Axis::Z), want);
        }
    }

    #[test]
    fn orient3d_antisymmetric(p in near_coplanar()) {
        let s = orient3d(p[0], p[1], p[2], p[3]).unwrap();
        prop_assert_eq!(orient3d(p[1], p[0], p[2], p[3]).unwrap(), -s);
        prop_assert_eq!(orient3d(p[0], p[1], p[3], p[2]).unwrap(), -s);
        prop_assert_eq!(orient3d(p[1], p[2], p[0], p[3]).unwrap(), s);
    }

    #[test]
    fn orient_translation_invariant(
        g in prop::array::uniform4(prop::array::uniform3(-1000i32..1000)),
        t in prop::array::uniform3(-1000i32..1000),
    ) {
        let p = g.map(|v| v.map(f64::from));
        let moved = p.map(|v| [v[0] + t[0] as f64, v[1] + t[1] as f64, v[2] + t[2] as f64]);
        prop_assert_eq!(orient3d(p[0], p[1], p[2], p[3]).unwrap(), orient3d(moved[0], moved[1], moved[2], moved[3]).unwrap());
        let f = |v: [f64; 3]| [v[0], v[1]];
        prop_assert_eq!(orient2d(f(p[0]), f(p[1]), f(p[2])).unwrap(), orient2d(f(moved[0]), f(moved[1]), f(moved[2])).unwrap());
    }

    #[test]
    fn backends_agree_on_predicates(p in near_coplanar(), axis in 0usize..3) {
        let axis = [Axis::X, Axis::Y, Axis::Z][axis];
        let f = FloatKernel::default();
        let r = RationalKernel::default();
        let i = ImplicitKernel::default();
        let fp = p.map(Point3::from);
        let rp = fp.map(|v| v.to_rational());
        let ip = fp.map(PointHandle::from);
        let s = f.orient3d(&fp[0], &fp[1], &fp[2], &fp[3]);
        prop_assert_eq!(r.orient3d(&rp[0], &rp[1], &rp[2], &rp[3]), s);
        prop_assert_eq!(i.orient3d(&ip[0], &ip[1], &ip[2], &ip[3]), s);
        let s = f.orient2d(&fp[0], &fp[1], &fp[3], axis);
        prop_assert_eq!(r.orient2d(&rp[0], &rp[1], &rp[3], axis), s);
        prop_assert_eq!(i.orient2d(&ip[0], &ip[1], &ip[3], axis), s);
    }

    /// Implicit line-plane points answer predicates exactly like their
    /// rational coordinates do.
    #[test]
    fn lpi_points_are_coherent(
        g in prop::array::uniform4(prop::array::uniform3(-16i32..16)),
        h in prop::array::uniform2(prop::array::uniform3(-16i32..16)),
        force_exact: bool,
    ) {
        let e = |v: [i32; 3]| ExplicitPoint3::float(v[0] as f64 / 4.0, v[1] as f64 / 4.0, v[2] as f64 / 4.0).unwrap();
        let Ok(lpi) = ImplicitLpi::new(e(h[0]), e(h[1]), e(g[0]), e(g[1]), e(g[2])) else { return Ok(()) };
        let x = PointHandle::lpi(lpi);
        let exact = x.exact_coordinates();
        let ik = ImplicitKernel::new(KernelConfig::default().with_force_exact(force_exact));
        let rk = RationalKernel::default();
        let pts = g.map(|v| PointHandle::from(Point3::new(v[0] as f64 / 4.0, v[1] as f64 / 4.0, v[2] as f64 / 4.0)));
        let rat = pts.clone().map(|p| p.exact_coordinates());
        // the constructed point lies on its plane
        prop_assert_eq!(ik.orient3d(&pts[0], &pts[1], &pts[2], &x), Sign::Zero);
        prop_assert_eq!(ik.orient3d(&pts[0], &pts[1], &pts[3], &x), rk.orient3d(&rat[0], &rat[1], &rat[3], &exact));
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            prop_assert_eq!(ik.orient2d(&pts[0], &x, &pts[3], axis), rk.orient2d(&rat[0], &exact, &rat[3], axis));
        }
        prop_assert!(ik.same_point(&x, &PointHandle::rational(exact.clone())));
    }

    /// Same for segment-segment points built from two coplanar segments.
    #[test]
    fn ssi_points_are_coherent(
        g in prop::array::uniform3(prop::array::uniform3(-16i32..16)),
        s in prop::array::uniform4(-8i32..8),
        probe in prop::array::uniform2(prop::array::uniform3(-16i32..16)),
        force_exact: bool,
    ) {
        let f = |v: [i32; 3]| [v[0] as f64 / 4.0, v[1] as f64 / 4.0, v[2] as f64 / 4.0];
        let [a, b, c] = g.map(f);
        // four points in the plane of a, b, c
        let at = |u: i32, v: i32| {
            let (u, v) = (u as f64 / 4.0, v as f64 / 4.0);
            ExplicitPoint3::float(a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]), a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1]), a[2] + u * (b[2] - a[2]) + v * (c[2] - a[2])).unwrap()
        };
        let Ok(ssi) = ImplicitSsi::with_best_axis(at(s[0], s[1]), at(s[1], s[2]), at(s[2], s[3]), at(s[3], s[0])) else { return Ok(()) };
        let x = PointHandle::ssi(ssi);
        let exact = x.exact_coordinates();
        let ik = ImplicitKernel::new(KernelConfig::default().with_force_exact(force_exact));
        let rk = RationalKernel::default();
        let pts = [a, b, c, f(probe[0]), f(probe[1])].map(|v| PointHandle::from(Point3::from(v)));
        let rat = pts.clone().map(|p| p.exact_coordinates());
        prop_assert_eq!(ik.orient3d(&pts[3], &pts[4], &pts[0], &x), rk.orient3d(&rat[3], &rat[4], &rat[0], &exact));
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            prop_assert_eq!(ik.orient2d(&pts[3], &x, &pts[4], axis), rk.orient2d(&rat[3], &exact, &rat[4], axis));
        }
    }
}

#[test]
fn extreme_magnitudes() {
    let tiny = f64::from_bits(1);
    let huge = f64::MAX / 4.0;
    let cases = [
        [[0.0, 0.0], [tiny, 0.0], [0.0, tiny]],
        [[0.0, 0.0], [tiny, tiny], [2.0 * tiny, 2.0 * tiny]],
        [[-huge, -huge], [huge, huge], [0.0, 0.0]],
        [[-huge, -huge], [huge, huge], [0.0, f64::MIN_POSITIVE]],
        [[1.0, 1.0], [1.0 + f64::EPSILON, 1.0 + f64::EPSILON], [1.0 + 2.0 * f64::EPSILON, 1.0 + 2.0 * f64::EPSILON]],
        [[0.5, 0.5], [12.0, 12.0], [24.0, nudged(24.0, 1)]],
    ];
    for p in cases {
        assert_eq!(orient2d(p[0], p[1], p[2]).unwrap(), reference2(p), "{p:?}");
    }
    assert!(orient2d([f64::NAN, 0.0], [0.0, 0.0], [1.0, 1.0]).is_err());
    assert!(orient3d([0.0; 3], [0.0; 3], [f64::INFINITY, 0.0, 0.0], [0.0; 3]).is_err());
}

#[test]
fn counters_record_paths() {
    let counters = Arc::new(PredicateCounters::new());
    let k = FloatKernel::new(KernelConfig::default().with_counters(counters.clone()));
    let p = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.3, 0.3, 0.0]].map(Point3::from);
    k.orient3d(&p[0], &p[1], &p[2], &p[3]);
    k.orient3d(&p[0], &p[1], &p[2], &Point3::new(0.0, 0.0, 1.0));
    k.orient2d(&p[0], &p[1], &p[2], Axis::Z);
    let c = counters.snapshot();
    assert_eq!((c.orient3d.total, c.orient3d.exact_fallback), (2, 1));
    assert_eq!((c.orient2d.total, c.orient2d.exact_fallback), (1, 0));
    counters.reset();
    assert_eq!(counters.snapshot().total(), 0);
}
