use std::fmt;
use std::ops::Index;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::Zero;

use super::interval::{self, Interval, IntervalPoint};
use super::{exact, float, Axis, Sign};
use crate::error::{Error, Result};

/// A point in 3D with coordinates of type `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> Point3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Point3 { x, y, z }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Point3<U> {
        Point3::new(f(&self.x), f(&self.y), f(&self.z))
    }
}

impl<T> Index<usize> for Point3<T> {
    type Output = T;

    #[inline]
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("coordinate index {i} out of range"),
        }
    }
}

impl Point3<f64> {
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Exact rational embedding. Panics on non-finite coordinates.
    pub fn to_rational(&self) -> RationalPoint3 {
        self.map(|&v| exact::rational_from_f64(v))
    }
}

impl From<[f64; 3]> for Point3<f64> {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Point3::new(x, y, z)
    }
}

impl fmt::Display for Point3<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub type RationalPoint3 = Point3<BigRational>;

/// An explicitly stored point, in either float or rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum ExplicitPoint3 {
    Float(Point3<f64>),
    Rational(RationalPoint3),
}

impl ExplicitPoint3 {
    pub fn float(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Point3::new(x, y, z);
        if p.is_finite() {
            Ok(ExplicitPoint3::Float(p))
        } else {
            Err(Error::InvalidCoordinate)
        }
    }

    pub fn exact_coordinates(&self) -> RationalPoint3 {
        match self {
            ExplicitPoint3::Float(p) => p.to_rational(),
            ExplicitPoint3::Rational(p) => p.clone(),
        }
    }

    fn is_valid(&self) -> bool {
        match self {
            ExplicitPoint3::Float(p) => p.is_finite(),
            ExplicitPoint3::Rational(_) => true,
        }
    }

    fn interval(&self) -> IntervalPoint {
        match self {
            ExplicitPoint3::Float(p) => [
                Interval::point(p.x),
                Interval::point(p.y),
                Interval::point(p.z),
            ],
            ExplicitPoint3::Rational(p) => [
                Interval::from_rational(&p.x),
                Interval::from_rational(&p.y),
                Interval::from_rational(&p.z),
            ],
        }
    }
}

/// Intersection of the line through `p, q` with the plane through `a, b, c`,
/// stored by its defining points.
#[derive(Clone)]
pub struct ImplicitLpi {
    pub p: ExplicitPoint3,
    pub q: ExplicitPoint3,
    pub a: ExplicitPoint3,
    pub b: ExplicitPoint3,
    pub c: ExplicitPoint3,
    exact: OnceLock<RationalPoint3>,
    approx: OnceLock<Option<IntervalPoint>>,
}

impl fmt::Debug for ImplicitLpi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitLpi")
            .field("p", &self.p)
            .field("q", &self.q)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("c", &self.c)
            .finish()
    }
}

impl ImplicitLpi {
    /// Fails with `DegenerateConstruction` if the line is parallel to the
    /// plane or the plane is undefined.
    pub fn new(
        p: ExplicitPoint3,
        q: ExplicitPoint3,
        a: ExplicitPoint3,
        b: ExplicitPoint3,
        c: ExplicitPoint3,
    ) -> Result<Self> {
        if ![&p, &q, &a, &b, &c].iter().all(|x| x.is_valid()) {
            return Err(Error::InvalidCoordinate);
        }
        let lpi = ImplicitLpi {
            p,
            q,
            a,
            b,
            c,
            exact: OnceLock::new(),
            approx: OnceLock::new(),
        };
        if !lpi.straddles() {
            let point = exact::line_plane_intersection(
                &lpi.p.exact_coordinates(),
                &lpi.q.exact_coordinates(),
                &lpi.a.exact_coordinates(),
                &lpi.b.exact_coordinates(),
                &lpi.c.exact_coordinates(),
            )
            .ok_or(Error::DegenerateConstruction("line parallel to plane"))?;
            let _ = lpi.exact.set(point);
        }
        Ok(lpi)
    }

    /// Cheap sufficient condition for a well-defined construction: `p` and
    /// `q` lie strictly on opposite sides of the plane.
    fn straddles(&self) -> bool {
        match (&self.p, &self.q, &self.a, &self.b, &self.c) {
            (
                ExplicitPoint3::Float(p),
                ExplicitPoint3::Float(q),
                ExplicitPoint3::Float(a),
                ExplicitPoint3::Float(b),
                ExplicitPoint3::Float(c),
            ) => {
                let sp = float::orient3d_filtered(a, b, c, p);
                let sq = float::orient3d_filtered(a, b, c, q);
                matches!((sp, sq), (Some(x), Some(y)) if x.strictly_opposite(y))
            }
            _ => false,
        }
    }

    pub fn exact_coordinates(&self) -> &RationalPoint3 {
        self.exact.get_or_init(|| {
            exact::line_plane_intersection(
                &self.p.exact_coordinates(),
                &self.q.exact_coordinates(),
                &self.a.exact_coordinates(),
                &self.b.exact_coordinates(),
                &self.c.exact_coordinates(),
            )
            .expect("validated at construction")
        })
    }

    fn interval(&self) -> Option<IntervalPoint> {
        *self.approx.get_or_init(|| {
            interval::line_plane(
                &self.p.interval(),
                &self.q.interval(),
                &self.a.interval(),
                &self.b.interval(),
                &self.c.interval(),
            )
        })
    }
}

/// Intersection of two coplanar, non-parallel lines `p0 p1` and `q0 q1`,
/// solved in the projection dropping `drop_axis`.
#[derive(Clone)]
pub struct ImplicitSsi {
    pub p0: ExplicitPoint3,
    pub p1: ExplicitPoint3,
    pub q0: ExplicitPoint3,
    pub q1: ExplicitPoint3,
    pub drop_axis: Axis,
    exact: OnceLock<RationalPoint3>,
    approx: OnceLock<Option<IntervalPoint>>,
}

impl fmt::Debug for ImplicitSsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitSsi")
            .field("p0", &self.p0)
            .field("p1", &self.p1)
            .field("q0", &self.q0)
            .field("q1", &self.q1)
            .field("drop_axis", &self.drop_axis)
            .finish()
    }
}

impl ImplicitSsi {
    /// Fails with `DegenerateConstruction` if the lines are skew, or parallel
    /// in the chosen projection.
    pub fn new(
        p0: ExplicitPoint3,
        p1: ExplicitPoint3,
        q0: ExplicitPoint3,
        q1: ExplicitPoint3,
        drop_axis: Axis,
    ) -> Result<Self> {
        if ![&p0, &p1, &q0, &q1].iter().all(|x| x.is_valid()) {
            return Err(Error::InvalidCoordinate);
        }
        let (e0, e1, f0, f1) = (
            p0.exact_coordinates(),
            p1.exact_coordinates(),
            q0.exact_coordinates(),
            q1.exact_coordinates(),
        );
        if exact::orient3d(&e0, &e1, &f0, &f1) != Sign::Zero {
            return Err(Error::DegenerateConstruction("skew segments"));
        }
        let point = exact::segment_segment_intersection(&e0, &e1, &f0, &f1, drop_axis)
            .ok_or(Error::DegenerateConstruction("parallel segments"))?;
        Ok(ImplicitSsi {
            p0,
            p1,
            q0,
            q1,
            drop_axis,
            exact: OnceLock::from(point),
            approx: OnceLock::new(),
        })
    }

    /// Like [`ImplicitSsi::new`], with the projection chosen from the plane
    /// spanned by the two directions.
    pub fn with_best_axis(
        p0: ExplicitPoint3,
        p1: ExplicitPoint3,
        q0: ExplicitPoint3,
        q1: ExplicitPoint3,
    ) -> Result<Self> {
        let (e0, e1, f0, f1) = (
            p0.exact_coordinates(),
            p1.exact_coordinates(),
            q0.exact_coordinates(),
            q1.exact_coordinates(),
        );
        let d = [&e1.x - &e0.x, &e1.y - &e0.y, &e1.z - &e0.z];
        let e = [&f1.x - &f0.x, &f1.y - &f0.y, &f1.z - &f0.z];
        let n = [
            &d[1] * &e[2] - &d[2] * &e[1],
            &d[2] * &e[0] - &d[0] * &e[2],
            &d[0] * &e[1] - &d[1] * &e[0],
        ];
        if n.iter().all(|v| v.is_zero()) {
            return Err(Error::DegenerateConstruction("parallel segments"));
        }
        let axis = exact::dominant_axis(&n).expect("nonzero normal");
        ImplicitSsi::new(p0, p1, q0, q1, axis)
    }

    pub fn exact_coordinates(&self) -> &RationalPoint3 {
        self.exact.get().expect("computed at construction")
    }

    fn interval(&self) -> Option<IntervalPoint> {
        *self.approx.get_or_init(|| {
            interval::segment_segment(
                &self.p0.interval(),
                &self.p1.interval(),
                &self.q0.interval(),
                &self.q1.interval(),
                self.drop_axis.kept(),
            )
        })
    }
}

/// A point in any of the supported representations.
#[derive(Debug, Clone)]
pub enum PointHandle {
    Explicit(ExplicitPoint3),
    Lpi(Arc<ImplicitLpi>),
    Ssi(Arc<ImplicitSsi>),
}

impl PointHandle {
    pub fn float(x: f64, y: f64, z: f64) -> Result<Self> {
        ExplicitPoint3::float(x, y, z).map(PointHandle::Explicit)
    }

    pub fn rational(p: RationalPoint3) -> Self {
        PointHandle::Explicit(ExplicitPoint3::Rational(p))
    }

    pub fn lpi(lpi: ImplicitLpi) -> Self {
        PointHandle::Lpi(Arc::new(lpi))
    }

    pub fn ssi(ssi: ImplicitSsi) -> Self {
        PointHandle::Ssi(Arc::new(ssi))
    }

    pub fn as_float(&self) -> Option<&Point3<f64>> {
        match self {
            PointHandle::Explicit(ExplicitPoint3::Float(p)) => Some(p),
            _ => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            PointHandle::Explicit(p) => p.is_valid(),
            _ => true,
        }
    }

    /// Exact rational coordinates; derived from the construction for
    /// implicit points.
    pub fn exact_coordinates(&self) -> RationalPoint3 {
        match self {
            PointHandle::Explicit(p) => p.exact_coordinates(),
            PointHandle::Lpi(p) => p.exact_coordinates().clone(),
            PointHandle::Ssi(p) => p.exact_coordinates().clone(),
        }
    }

    pub(crate) fn interval(&self) -> Option<IntervalPoint> {
        match self {
            PointHandle::Explicit(p) => Some(p.interval()),
            PointHandle::Lpi(p) => p.interval(),
            PointHandle::Ssi(p) => p.interval(),
        }
    }
}

impl From<Point3<f64>> for PointHandle {
    fn from(p: Point3<f64>) -> Self {
        PointHandle::Explicit(ExplicitPoint3::Float(p))
    }
}
