//! Rational determinants and exact constructions.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Axis, Point3, RationalPoint3, Sign};

pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn diff(a: &RationalPoint3, b: &RationalPoint3) -> [BigRational; 3] {
    [&a.x - &b.x, &a.y - &b.y, &a.z - &b.z]
}

fn cross(u: &[BigRational; 3], v: &[BigRational; 3]) -> [BigRational; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn dot(u: &[BigRational; 3], v: &[BigRational; 3]) -> BigRational {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

/// Sign of `det[b - a, c - a, d - a]` over rationals.
pub fn orient3d(
    a: &RationalPoint3,
    b: &RationalPoint3,
    c: &RationalPoint3,
    d: &RationalPoint3,
) -> Sign {
    let u = diff(b, a);
    let v = diff(c, a);
    let w = diff(d, a);
    Sign::of(&dot(&u, &cross(&v, &w)))
}

/// Sign of `det[b - a, c - a]` in the projection dropping `axis`.
pub fn orient2d(a: &RationalPoint3, b: &RationalPoint3, c: &RationalPoint3, axis: Axis) -> Sign {
    let (u, v) = axis.kept();
    let det = (&b[u] - &a[u]) * (&c[v] - &a[v]) - (&b[v] - &a[v]) * (&c[u] - &a[u]);
    Sign::of(&det)
}

/// `(b - a) x (c - a)`.
pub fn normal(a: &RationalPoint3, b: &RationalPoint3, c: &RationalPoint3) -> [BigRational; 3] {
    cross(&diff(b, a), &diff(c, a))
}

/// Index of the largest-magnitude entry (ties towards the lower index);
/// `None` if all entries are zero.
pub fn dominant_axis<T: Signed + PartialOrd>(n: &[T; 3]) -> Option<Axis> {
    let mut best = 0;
    for k in 1..3 {
        if n[k].abs() > n[best].abs() {
            best = k;
        }
    }
    if n[best].is_zero() {
        None
    } else {
        Some(Axis::ALL[best])
    }
}

/// Intersection of line `pq` with the plane through `a, b, c`, or `None` when
/// the line is parallel to the plane (or the plane is undefined).
pub fn line_plane_intersection(
    p: &RationalPoint3,
    q: &RationalPoint3,
    a: &RationalPoint3,
    b: &RationalPoint3,
    c: &RationalPoint3,
) -> Option<RationalPoint3> {
    let n = normal(a, b, c);
    let dir = diff(q, p);
    let denom = dot(&n, &dir);
    if denom.is_zero() {
        return None;
    }
    let t = dot(&n, &diff(a, p)) / denom;
    Some(Point3::new(
        &p.x + &t * &dir[0],
        &p.y + &t * &dir[1],
        &p.z + &t * &dir[2],
    ))
}

/// Intersection of lines `p0 p1` and `q0 q1`, solved in the projection
/// dropping `axis` and lifted along `p0 p1`. Returns `None` when the projected
/// lines are parallel. The caller is responsible for coplanarity.
pub fn segment_segment_intersection(
    p0: &RationalPoint3,
    p1: &RationalPoint3,
    q0: &RationalPoint3,
    q1: &RationalPoint3,
    axis: Axis,
) -> Option<RationalPoint3> {
    let (u, v) = axis.kept();
    let d = diff(p1, p0);
    let e = diff(q1, q0);
    let w = diff(q0, p0);
    let denom = &d[u] * &e[v] - &d[v] * &e[u];
    if denom.is_zero() {
        return None;
    }
    let t = (&w[u] * &e[v] - &w[v] * &e[u]) / denom;
    Some(Point3::new(
        &p0.x + &t * &d[0],
        &p0.y + &t * &d[1],
        &p0.z + &t * &d[2],
    ))
}
