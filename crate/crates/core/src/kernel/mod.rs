//! Exact orientation predicates over three point representations.
//!
//! Orientation convention: `orient3d(a, b, c, d)` is the sign of
//! `det[b - a, c - a, d - a]`. It is positive when `d` lies on the side of
//! the plane from which `a, b, c` appear counter-clockwise, so
//! `orient3d((0,0,0), (1,0,0), (0,1,0), (0,0,1))` is positive.
//! `orient2d(a, b, c, axis)` is the sign of `det[b - a, c - a]` in the
//! projection that drops `axis` (see [`Axis::kept`]); it is positive when `c`
//! lies to the left of the directed line `a -> b`.

mod counters;
pub mod exact;
pub mod float;
pub mod interval;
mod point;
mod sign;

use std::fmt;
use std::sync::Arc;

pub use counters::{PathCounts, PredicateCounters, PredicateCounts};
pub use point::{ExplicitPoint3, ImplicitLpi, ImplicitSsi, Point3, PointHandle, RationalPoint3};
pub use sign::{Axis, Sign};

use crate::error::{Error, Result};

/// Environment variable that forces every predicate onto its exact path.
pub const FORCE_EXACT_ENV: &str = "TRITRI_FORCE_EXACT";

/// Options shared by all kernels.
#[derive(Debug, Clone, Default)]
pub struct KernelConfig {
    /// Skip the float and interval filters.
    pub force_exact: bool,
    pub counters: Option<Arc<PredicateCounters>>,
}

impl KernelConfig {
    /// Default configuration, with `force_exact` set when
    /// `TRITRI_FORCE_EXACT=1`.
    pub fn from_env() -> Self {
        KernelConfig {
            force_exact: std::env::var(FORCE_EXACT_ENV).is_ok_and(|v| v == "1"),
            counters: None,
        }
    }

    pub fn with_counters(mut self, counters: Arc<PredicateCounters>) -> Self {
        self.counters = Some(counters);
        self
    }

    pub fn with_force_exact(mut self, force_exact: bool) -> Self {
        self.force_exact = force_exact;
        self
    }

    #[inline]
    fn record2(&self, exact: bool) {
        if let Some(c) = &self.counters {
            c.record_orient2d(exact);
        }
    }

    #[inline]
    fn record3(&self, exact: bool) {
        if let Some(c) = &self.counters {
            c.record_orient3d(exact);
        }
    }

    #[inline]
    fn float_orient2d(
        &self,
        a: &Point3<f64>,
        b: &Point3<f64>,
        c: &Point3<f64>,
        axis: Axis,
    ) -> Sign {
        if !self.force_exact {
            if let Some(s) = float::orient2d_filtered(a, b, c, axis) {
                self.record2(false);
                return s;
            }
        }
        self.record2(true);
        float::orient2d_exact(a, b, c, axis)
    }

    #[inline]
    fn float_orient3d(
        &self,
        a: &Point3<f64>,
        b: &Point3<f64>,
        c: &Point3<f64>,
        d: &Point3<f64>,
    ) -> Sign {
        if !self.force_exact {
            if let Some(s) = float::orient3d_filtered(a, b, c, d) {
                self.record3(false);
                return s;
            }
        }
        self.record3(true);
        float::orient3d_exact(a, b, c, d)
    }
}

/// A numeric backend: exact predicates over one point representation.
///
/// Implementations must be exact: every predicate returns the sign of the
/// determinant evaluated on the exact coordinates of its operands.
pub trait Kernel: Send + Sync {
    type Point: Clone + fmt::Debug + Send + Sync;

    fn name(&self) -> &'static str;

    fn orient3d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, d: &Self::Point) -> Sign;

    fn orient2d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, axis: Axis) -> Sign;

    /// Exact coordinate equality.
    fn same_point(&self, a: &Self::Point, b: &Self::Point) -> bool;

    /// Axis of the largest-magnitude component of the exact normal of `abc`
    /// (ties towards X, then Y); `None` if `a, b, c` are collinear.
    fn normal_axis(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point) -> Option<Axis>;

    fn exact_coordinates(&self, p: &Self::Point) -> RationalPoint3;

    /// Rejects points that violate the representation's invariants.
    fn check_point(&self, p: &Self::Point) -> Result<()>;
}

/// `f64` coordinates with a static filter and exact fallback.
#[derive(Debug, Clone, Default)]
pub struct FloatKernel {
    pub config: KernelConfig,
}

impl FloatKernel {
    pub fn new(config: KernelConfig) -> Self {
        FloatKernel { config }
    }
}

impl Kernel for FloatKernel {
    type Point = Point3<f64>;

    fn name(&self) -> &'static str {
        "float"
    }

    #[inline]
    fn orient3d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, d: &Self::Point) -> Sign {
        self.config.float_orient3d(a, b, c, d)
    }

    #[inline]
    fn orient2d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, axis: Axis) -> Sign {
        self.config.float_orient2d(a, b, c, axis)
    }

    #[inline]
    fn same_point(&self, a: &Self::Point, b: &Self::Point) -> bool {
        a == b
    }

    fn normal_axis(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point) -> Option<Axis> {
        float::normal_axis(a, b, c).0
    }

    fn exact_coordinates(&self, p: &Self::Point) -> RationalPoint3 {
        p.to_rational()
    }

    fn check_point(&self, p: &Self::Point) -> Result<()> {
        if p.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidCoordinate)
        }
    }
}

/// Arbitrary-precision rational coordinates. Every call is exact.
#[derive(Debug, Clone, Default)]
pub struct RationalKernel {
    pub config: KernelConfig,
}

impl RationalKernel {
    pub fn new(config: KernelConfig) -> Self {
        RationalKernel { config }
    }
}

impl Kernel for RationalKernel {
    type Point = RationalPoint3;

    fn name(&self) -> &'static str {
        "rational"
    }

    fn orient3d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, d: &Self::Point) -> Sign {
        self.config.record3(true);
        exact::orient3d(a, b, c, d)
    }

    fn orient2d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, axis: Axis) -> Sign {
        self.config.record2(true);
        exact::orient2d(a, b, c, axis)
    }

    fn same_point(&self, a: &Self::Point, b: &Self::Point) -> bool {
        a == b
    }

    fn normal_axis(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point) -> Option<Axis> {
        exact::dominant_axis(&exact::normal(a, b, c))
    }

    fn exact_coordinates(&self, p: &Self::Point) -> RationalPoint3 {
        p.clone()
    }

    fn check_point(&self, _p: &Self::Point) -> Result<()> {
        Ok(())
    }
}

/// [`PointHandle`] operands: explicit points use the float path, anything
/// else goes through an interval filter and then the rational determinant
/// over the exact coordinates of the constructions.
#[derive(Debug, Clone, Default)]
pub struct ImplicitKernel {
    pub config: KernelConfig,
}

impl ImplicitKernel {
    pub fn new(config: KernelConfig) -> Self {
        ImplicitKernel { config }
    }
}

impl Kernel for ImplicitKernel {
    type Point = PointHandle;

    fn name(&self) -> &'static str {
        "implicit"
    }

    fn orient3d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, d: &Self::Point) -> Sign {
        if let (Some(a), Some(b), Some(c), Some(d)) =
            (a.as_float(), b.as_float(), c.as_float(), d.as_float())
        {
            return self.config.float_orient3d(a, b, c, d);
        }
        if !self.config.force_exact {
            if let (Some(ia), Some(ib), Some(ic), Some(id)) =
                (a.interval(), b.interval(), c.interval(), d.interval())
            {
                if let Some(s) = interval::orient3d(&ia, &ib, &ic, &id).sign() {
                    self.config.record3(false);
                    return s;
                }
            }
        }
        self.config.record3(true);
        exact::orient3d(
            &a.exact_coordinates(),
            &b.exact_coordinates(),
            &c.exact_coordinates(),
            &d.exact_coordinates(),
        )
    }

    fn orient2d(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point, axis: Axis) -> Sign {
        if let (Some(a), Some(b), Some(c)) = (a.as_float(), b.as_float(), c.as_float()) {
            return self.config.float_orient2d(a, b, c, axis);
        }
        if !self.config.force_exact {
            if let (Some(ia), Some(ib), Some(ic)) = (a.interval(), b.interval(), c.interval()) {
                if let Some(s) = interval::orient2d(&ia, &ib, &ic, axis.kept()).sign() {
                    self.config.record2(false);
                    return s;
                }
            }
        }
        self.config.record2(true);
        exact::orient2d(
            &a.exact_coordinates(),
            &b.exact_coordinates(),
            &c.exact_coordinates(),
            axis,
        )
    }

    fn same_point(&self, a: &Self::Point, b: &Self::Point) -> bool {
        match (a.as_float(), b.as_float()) {
            (Some(a), Some(b)) => a == b,
            _ => a.exact_coordinates() == b.exact_coordinates(),
        }
    }

    fn normal_axis(&self, a: &Self::Point, b: &Self::Point, c: &Self::Point) -> Option<Axis> {
        if let (Some(a), Some(b), Some(c)) = (a.as_float(), b.as_float(), c.as_float()) {
            return float::normal_axis(a, b, c).0;
        }
        exact::dominant_axis(&exact::normal(
            &a.exact_coordinates(),
            &b.exact_coordinates(),
            &c.exact_coordinates(),
        ))
    }

    fn exact_coordinates(&self, p: &Self::Point) -> RationalPoint3 {
        p.exact_coordinates()
    }

    fn check_point(&self, p: &Self::Point) -> Result<()> {
        if p.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidCoordinate)
        }
    }
}

/// Checked `orient2d` on raw float coordinates.
pub fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Result<Sign> {
    if [a, b, c].iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidCoordinate);
    }
    let lift = |p: [f64; 2]| Point3::new(p[0], p[1], 0.0);
    Ok(FloatKernel::default().orient2d(&lift(a), &lift(b), &lift(c), Axis::Z))
}

/// Checked `orient3d` on raw float coordinates.
pub fn orient3d(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Result<Sign> {
    if [a, b, c, d].iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidCoordinate);
    }
    Ok(FloatKernel::default().orient3d(&a.into(), &b.into(), &c.into(), &d.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forced() -> FloatKernel {
        FloatKernel::new(KernelConfig::default().with_force_exact(true))
    }

    #[test]
    fn orient2d_examples() {
        assert_eq!(
            orient2d([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]),
            Ok(Sign::Positive)
        );
        assert_eq!(
            orient2d([0.5, 0.5], [12.0, 12.0], [24.0, 24.0]),
            Ok(Sign::Zero)
        );
        assert_eq!(
            orient2d([0.0, f64::NAN], [1.0, 0.0], [0.0, 1.0]),
            Err(Error::InvalidCoordinate)
        );
    }

    #[test]
    fn orient3d_examples() {
        let o = [0.0, 0.0, 0.0];
        let (x, y) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        assert_eq!(orient3d(o, x, y, [0.0, 0.0, 1.0]), Ok(Sign::Positive));
        assert_eq!(orient3d(o, x, y, [0.0, 0.0, -1.0]), Ok(Sign::Negative));
        assert_eq!(orient3d(o, x, y, [0.3, 0.4, 0.0]), Ok(Sign::Zero));
        assert_eq!(
            orient3d(o, x, y, [0.0, 0.0, f64::INFINITY]),
            Err(Error::InvalidCoordinate)
        );
    }

    #[test]
    fn all_equal_points_are_zero() {
        let p = Point3::new(0.3, -1.7, 2.5);
        assert_eq!(forced().orient3d(&p, &p, &p, &p), Sign::Zero);
        assert_eq!(forced().orient2d(&p, &p, &p, Axis::Y), Sign::Zero);
    }

    #[test]
    fn implicit_point_on_its_plane_is_zero() {
        let f = |x, y, z| ExplicitPoint3::float(x, y, z).unwrap();
        let lpi = ImplicitLpi::new(
            f(1.0, 1.0, -1.0),
            f(1.0, 1.0, 2.0),
            f(0.0, 0.0, 0.0),
            f(1.0, 0.0, 0.0),
            f(0.0, 1.0, 0.0),
        )
        .unwrap();
        let k = ImplicitKernel::default();
        let h = |x, y, z| PointHandle::float(x, y, z).unwrap();
        let p = PointHandle::lpi(lpi);
        assert_eq!(
            k.orient3d(&h(0.0, 0.0, 0.0), &h(1.0, 0.0, 0.0), &h(0.0, 1.0, 0.0), &p),
            Sign::Zero
        );
        assert_eq!(
            k.orient3d(
                &h(0.0, 0.0, 0.0),
                &h(1.0, 0.0, 0.0),
                &h(0.0, 1.0, 0.0),
                &h(1.0, 1.0, 0.5)
            ),
            Sign::Positive
        );
    }

    #[test]
    fn counters_split_paths() {
        let counters = Arc::new(PredicateCounters::new());
        let k = FloatKernel::new(KernelConfig::default().with_counters(counters.clone()));
        let (a, b, c) = (
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        );
        k.orient3d(&a, &b, &c, &Point3::new(0.0, 0.0, 1.0));
        k.orient3d(&a, &b, &c, &Point3::new(0.5, 0.5, 0.0));
        let snap = counters.snapshot();
        assert_eq!(
            snap.orient3d,
            PathCounts {
                total: 2,
                exact_fallback: 1
            }
        );
        assert_eq!(snap.orient2d.total, 0);
    }
}
