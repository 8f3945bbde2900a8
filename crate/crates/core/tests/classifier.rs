use std::sync::Arc;

use proptest::prelude::*;
use tritri::oracle::{canonicalize, OracleReport};
use tritri::{
    classify, FloatKernel, ImplicitKernel, KernelConfig, Point3, PointHandle, PredicateCounters, RationalKernel,
    Triangle,
};

type Tri = Triangle<Point3<f64>>;

/// Triangles on a coarse lattice, so that shared vertices, collinear edges
/// and coplanar pairs are common.
fn lattice_pair() -> impl Strategy<Value = (Tri, Tri)> {
    let tri = || {
        prop::array::uniform3(prop::array::uniform3(0i32..4))
            .prop_map(|v| Triangle::new(Point3::from(v[0].map(f64::from)), Point3::from(v[1].map(f64::from)), Point3::from(v[2].map(f64::from))))
    };
    (tri(), tri(), any::<bool>()).prop_map(|(a, b, flat)| {
        if flat {
            (a.map(|p| Point3::new(p.x, p.y, 1.0)), b.map(|p| Point3::new(p.x, p.y, 1.0)))
        } else {
            (a, b)
        }
    })
}

fn report(k: &FloatKernel, t0: &Tri, t1: &Tri) -> Option<OracleReport> {
    let r = classify(k, t0, t1).ok()?;
    r.validate().unwrap();
    Some(canonicalize(k, &r, t0, t1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5000))]

    #[test]
    fn argument_order_does_not_change_geometry((t0, t1) in lattice_pair()) {
        let k = FloatKernel::default();
        let a = report(&k, &t0, &t1);
        let b = report(&k, &t1, &t0);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn vertex_order_does_not_change_geometry((t0, t1) in lattice_pair(), rot in 0usize..3, flip: bool) {
        let k = FloatKernel::default();
        let v = t1.vertices;
        let mut w = [v[rot], v[(rot + 1) % 3], v[(rot + 2) % 3]];
        if flip {
            w.swap(1, 2);
        }
        let permuted = Triangle::new(w[0], w[1], w[2]);
        prop_assert_eq!(report(&k, &t0, &t1), report(&k, &t0, &permuted));
    }

    #[test]
    fn backends_return_identical_results((t0, t1) in lattice_pair(), force_exact: bool) {
        let config = KernelConfig::default().with_force_exact(force_exact);
        let f = classify(&FloatKernel::new(config.clone()), &t0, &t1).map_err(|e| e.to_string());
        let r = classify(&RationalKernel::new(config.clone()), &t0.map(|p| p.to_rational()), &t1.map(|p| p.to_rational()))
            .map_err(|e| e.to_string());
        let i = classify(&ImplicitKernel::new(config), &t0.map(|p| PointHandle::from(*p)), &t1.map(|p| PointHandle::from(*p)))
            .map_err(|e| e.to_string());
        prop_assert_eq!(&f, &r);
        prop_assert_eq!(&f, &i);
    }

    #[test]
    fn counters_do_not_change_results((t0, t1) in lattice_pair()) {
        let counters = Arc::new(PredicateCounters::new());
        let plain = classify(&FloatKernel::default(), &t0, &t1).map_err(|e| e.to_string());
        let counted = classify(&FloatKernel::new(KernelConfig::default().with_counters(counters.clone())), &t0, &t1)
            .map_err(|e| e.to_string());
        prop_assert_eq!(plain, counted);
    }
}
