//! Filtered `f64` predicates.
//!
//! The float determinant is certified against a static forward error bound;
//! when it cannot be certified the sign is recomputed exactly by scaling
//! every coordinate to a common power of two and evaluating the determinant
//! over big integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Axis, Point3, Sign};

/// Unit roundoff, 2^-53.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
const ORIENT2D_BOUND: f64 = (3.0 + 16.0 * UNIT_ROUNDOFF) * UNIT_ROUNDOFF;
const ORIENT3D_BOUND: f64 = (7.0 + 56.0 * UNIT_ROUNDOFF) * UNIT_ROUNDOFF;
/// Below this permanent the relative bound no longer covers gradual underflow.
const MIN_CERTIFIED_PERMANENT: f64 = 1e-180;
/// Absolute slack covering the few products that may still underflow.
const UNDERFLOW_SLACK: f64 = 1e-300;

#[inline]
fn certify(det: f64, permanent: f64, bound: f64) -> Option<Sign> {
    if !(permanent >= MIN_CERTIFIED_PERMANENT) || !permanent.is_finite() || !det.is_finite() {
        return None;
    }
    let err = bound * permanent + UNDERFLOW_SLACK;
    if det > err {
        Some(Sign::Positive)
    } else if -det > err {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Filtered `orient2d` of the projections dropping `axis`. `None` means the
/// float value could not be certified.
#[inline]
pub fn orient2d_filtered(
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
    axis: Axis,
) -> Option<Sign> {
    let (u, v) = axis.kept();
    let left = (b[u] - a[u]) * (c[v] - a[v]);
    let right = (b[v] - a[v]) * (c[u] - a[u]);
    certify(left - right, left.abs() + right.abs(), ORIENT2D_BOUND)
}

/// Filtered `orient3d`: sign of `det[b - a, c - a, d - a]`.
#[inline]
pub fn orient3d_filtered(
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
    d: &Point3<f64>,
) -> Option<Sign> {
    let (ux, uy, uz) = (b.x - a.x, b.y - a.y, b.z - a.z);
    let (vx, vy, vz) = (c.x - a.x, c.y - a.y, c.z - a.z);
    let (wx, wy, wz) = (d.x - a.x, d.y - a.y, d.z - a.z);

    let vywz = vy * wz;
    let vzwy = vz * wy;
    let vzwx = vz * wx;
    let vxwz = vx * wz;
    let vxwy = vx * wy;
    let vywx = vy * wx;

    let det = ux * (vywz - vzwy) + uy * (vzwx - vxwz) + uz * (vxwy - vywx);
    let permanent = (vywz.abs() + vzwy.abs()) * ux.abs()
        + (vzwx.abs() + vxwz.abs()) * uy.abs()
        + (vxwy.abs() + vywx.abs()) * uz.abs();
    certify(det, permanent, ORIENT3D_BOUND)
}

/// Splits a finite float into `m * 2^e` with `m` odd (or zero).
fn decompose(x: f64) -> (i64, i32) {
    debug_assert!(x.is_finite());
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let tz = m.trailing_zeros();
    let m = (m >> tz) as i64;
    let m = if bits >> 63 != 0 { -m } else { m };
    (m, e + tz as i32)
}

/// Exact integer images of `values`, all scaled by the same power of two.
fn scale_to_integers<const N: usize>(values: [f64; N]) -> [BigInt; N] {
    let parts = values.map(decompose);
    let min_exp = parts
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|&(_, e)| e)
        .min()
        .unwrap_or(0);
    parts.map(|(m, e)| {
        if m == 0 {
            BigInt::zero()
        } else {
            BigInt::from(m) << ((e - min_exp) as usize)
        }
    })
}

/// Exact `orient2d` over floats.
pub fn orient2d_exact(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>, axis: Axis) -> Sign {
    let (u, v) = axis.kept();
    let [au, av, bu, bv, cu, cv] = scale_to_integers([a[u], a[v], b[u], b[v], c[u], c[v]]);
    let det = (&bu - &au) * (&cv - &av) - (&bv - &av) * (&cu - &au);
    Sign::of(&det)
}

/// Exact `orient3d` over floats.
pub fn orient3d_exact(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>, d: &Point3<f64>) -> Sign {
    let [ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz] =
        scale_to_integers([a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z, d.x, d.y, d.z]);
    let (ux, uy, uz) = (&bx - &ax, &by - &ay, &bz - &az);
    let (vx, vy, vz) = (&cx - &ax, &cy - &ay, &cz - &az);
    let (wx, wy, wz) = (&dx - &ax, &dy - &ay, &dz - &az);
    let det = &ux * (&vy * &wz - &vz * &wy)
        + &uy * (&vz * &wx - &vx * &wz)
        + &uz * (&vx * &wy - &vy * &wx);
    Sign::of(&det)
}

/// Axis of the largest-magnitude component of the normal of `abc`, ties
/// resolved towards X then Y. `None` when the normal is zero. The boolean is
/// true when the exact path was needed.
pub fn normal_axis(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> (Option<Axis>, bool) {
    if let Some(axis) = normal_axis_filtered(a, b, c) {
        return (Some(axis), false);
    }
    let [ax, ay, az, bx, by, bz, cx, cy, cz] =
        scale_to_integers([a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z]);
    let (ux, uy, uz) = (&bx - &ax, &by - &ay, &bz - &az);
    let (vx, vy, vz) = (&cx - &ax, &cy - &ay, &cz - &az);
    let n = [
        (&uy * &vz - &uz * &vy).abs(),
        (&uz * &vx - &ux * &vz).abs(),
        (&ux * &vy - &uy * &vx).abs(),
    ];
    (super::exact::dominant_axis(&n), true)
}

fn normal_axis_filtered(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>) -> Option<Axis> {
    // Component k of the normal is the orient2d determinant dropping axis k.
    let mut lo = [0.0f64; 3];
    let mut hi = [0.0f64; 3];
    for axis in Axis::ALL {
        let (u, v) = axis.kept();
        let left = (b[u] - a[u]) * (c[v] - a[v]);
        let right = (b[v] - a[v]) * (c[u] - a[u]);
        let permanent = left.abs() + right.abs();
        let det = (left - right).abs();
        if !permanent.is_finite() || (permanent != 0.0 && permanent < MIN_CERTIFIED_PERMANENT) {
            return None;
        }
        let err = ORIENT2D_BOUND * permanent
            + if permanent == 0.0 {
                0.0
            } else {
                UNDERFLOW_SLACK
            };
        lo[axis.index()] = (det - err).max(0.0);
        hi[axis.index()] = det + err;
    }
    let mut best = 0;
    for k in 1..3 {
        if lo[k] > hi[best] {
            best = k;
        } else if hi[k] <= lo[best] {
            // not strictly larger
        } else {
            return None;
        }
    }
    if lo[best] > 0.0 {
        Some(Axis::ALL[best])
    } else {
        None
    }
}
