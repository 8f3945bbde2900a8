//! Brute-force verifier.
//!
//! [`oracle_classify`] computes the exact point set and segment set of two
//! triangles by construction: it intersects every vertex, edge and face of
//! one triangle with the other by exact clipping, without looking at any
//! predicate sign logic of the classifier. [`canonicalize`] maps a
//! classifier result to the same exact form so the two can be compared as
//! sets with [`compare`].
//!
//! Inputs are scaled to integers and every constructed point is kept in
//! homogeneous integer form until the end, so no arithmetic rounds and no
//! fraction needs reducing in the inner loops.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{DegenerateReason, Error, Result};
use crate::geometry::{IntersectionResult, Triangle};
use crate::kernel::{Kernel, Point3, RationalPoint3};

/// Exact coordinates of an intersection point.
pub type OraclePoint = RationalPoint3;

/// Exact description of an intersection, for set comparison.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleReport {
    pub points: BTreeSet<OraclePoint>,
    /// Unordered endpoint pairs, stored as `(min, max)`.
    pub segments: BTreeSet<(OraclePoint, OraclePoint)>,
    pub coplanar: bool,
}

impl OracleReport {
    fn insert_segment(&mut self, a: OraclePoint, b: OraclePoint) {
        if a < b {
            self.segments.insert((a, b));
        } else {
            self.segments.insert((b, a));
        }
    }
}

type Z = BigInt;
type V = [Z; 3];

fn sub(a: &V, b: &V) -> V {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn scale(a: &V, s: &Z) -> V {
    [&a[0] * s, &a[1] * s, &a[2] * s]
}

fn add(a: &V, b: &V) -> V {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

fn cross(u: &V, v: &V) -> V {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn dot(u: &V, v: &V) -> Z {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn is_zero(v: &V) -> bool {
    v.iter().all(Zero::is_zero)
}

/// The point `c / w` with `w > 0`, reduced so that equal points have equal
/// representations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct HPoint {
    c: V,
    w: Z,
}

impl HPoint {
    fn integer(v: &V) -> HPoint {
        HPoint {
            c: v.clone(),
            w: Z::one(),
        }
    }

    /// `p + (num / den) d`, for `den > 0`.
    fn along(p: &V, d: &V, num: &Z, den: &Z) -> HPoint {
        let mut h = HPoint {
            c: add(&scale(p, den), &scale(d, num)),
            w: den.clone(),
        };
        let g = h.c.iter().fold(h.w.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            h.c = h.c.map(|x| x / &g);
            h.w /= &g;
        }
        h
    }

    fn to_rational(&self, denominator: &Z) -> [BigRational; 3] {
        let w = &self.w * denominator;
        self.c.clone().map(|x| BigRational::new(x, w.clone()))
    }
}

/// A fraction `num / den` with `den > 0`.
#[derive(Clone)]
struct Frac {
    num: Z,
    den: Z,
}

impl Frac {
    fn new(num: Z, den: Z) -> Frac {
        if den.is_negative() {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    fn int(n: i32) -> Frac {
        Frac {
            num: n.into(),
            den: Z::one(),
        }
    }

    fn less(&self, o: &Frac) -> bool {
        &self.num * &o.den < &o.num * &self.den
    }

    fn same(&self, o: &Frac) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    fn in_unit(&self) -> bool {
        !self.num.is_negative() && self.num <= self.den
    }
}

/// A triangle with its plane, `normal . x = offset`, and inward edge normals
/// within that plane, `inward[k] . x >= inward_offset[k]`.
struct Face {
    v: [V; 3],
    normal: V,
    offset: Z,
    inward: [V; 3],
    inward_offset: [Z; 3],
}

impl Face {
    fn new(v: [V; 3]) -> Result<Face> {
        if v[0] == v[1] || v[1] == v[2] || v[2] == v[0] {
            return Err(Error::DegenerateTriangle(DegenerateReason::RepeatedVertex));
        }
        let normal = cross(&sub(&v[1], &v[0]), &sub(&v[2], &v[0]));
        if is_zero(&normal) {
            return Err(Error::DegenerateTriangle(DegenerateReason::Collinear));
        }
        let offset = dot(&normal, &v[0]);
        let inward = [0, 1, 2].map(|k| cross(&normal, &sub(&v[(k + 1) % 3], &v[k])));
        let inward_offset = [0, 1, 2].map(|k| dot(&inward[k], &v[k]));
        Ok(Face {
            v,
            normal,
            offset,
            inward,
            inward_offset,
        })
    }

    fn edge(&self, k: usize) -> (&V, &V) {
        (&self.v[k], &self.v[(k + 1) % 3])
    }

    fn side(&self, x: &V) -> Z {
        dot(&self.normal, x) - &self.offset
    }

    /// For a point already known to lie in the plane.
    fn contains_in_plane(&self, x: &HPoint) -> bool {
        (0..3).all(|k| dot(&self.inward[k], &x.c) >= &self.inward_offset[k] * &x.w)
    }

    fn contains(&self, x: &V) -> bool {
        self.side(x).is_zero() && self.contains_in_plane(&HPoint::integer(x))
    }

    /// Closed segment `[p, q]` clipped against the closed face.
    fn clip(&self, p: &V, q: &V) -> Clip {
        let d = sub(q, p);
        let alpha = self.side(p);
        let beta = dot(&self.normal, &d);
        if !beta.is_zero() {
            let t = Frac::new(-alpha, beta);
            if !t.in_unit() {
                return Clip::Empty;
            }
            let x = HPoint::along(p, &d, &t.num, &t.den);
            return if self.contains_in_plane(&x) {
                Clip::Point(x)
            } else {
                Clip::Empty
            };
        }
        if !alpha.is_zero() {
            return Clip::Empty;
        }
        // Cyrus-Beck against the three edge half-planes
        let mut lo = Frac::int(0);
        let mut hi = Frac::int(1);
        for k in 0..3 {
            let g0 = dot(&self.inward[k], p) - &self.inward_offset[k];
            let g1 = dot(&self.inward[k], &d);
            if g1.is_zero() {
                if g0.is_negative() {
                    return Clip::Empty;
                }
                continue;
            }
            let positive = g1.is_positive();
            let t = Frac::new(-g0, g1);
            if positive {
                if lo.less(&t) {
                    lo = t;
                }
            } else if t.less(&hi) {
                hi = t;
            }
        }
        if hi.less(&lo) {
            Clip::Empty
        } else if lo.same(&hi) {
            Clip::Point(HPoint::along(p, &d, &lo.num, &lo.den))
        } else {
            Clip::Segment(
                HPoint::along(p, &d, &lo.num, &lo.den),
                HPoint::along(p, &d, &hi.num, &hi.den),
            )
        }
    }
}

enum Clip {
    Empty,
    Point(HPoint),
    Segment(HPoint, HPoint),
}

/// Intersection of closed segments `[p, q]` and `[r, s]`.
fn segment_segment(p: &V, q: &V, r: &V, s: &V) -> Clip {
    let d = sub(q, p);
    let e = sub(s, r);
    let w = sub(r, p);
    let n = cross(&d, &e);
    if !is_zero(&n) {
        if !dot(&w, &n).is_zero() {
            return Clip::Empty;
        }
        let nn = dot(&n, &n);
        let t = Frac::new(dot(&cross(&w, &e), &n), nn.clone());
        let u = Frac::new(dot(&cross(&w, &d), &n), nn);
        return if t.in_unit() && u.in_unit() {
            Clip::Point(HPoint::along(p, &d, &t.num, &t.den))
        } else {
            Clip::Empty
        };
    }
    if !is_zero(&cross(&w, &d)) {
        return Clip::Empty;
    }
    // collinear: both parameters share the denominator |d|^2
    let dd = dot(&d, &d);
    let tr = dot(&w, &d);
    let ts = dot(&sub(s, p), &d);
    let (a, b) = if tr < ts { (tr, ts) } else { (ts, tr) };
    let lo = if a.is_negative() { Z::zero() } else { a };
    let hi = if b > dd { dd.clone() } else { b };
    if lo > hi {
        Clip::Empty
    } else if lo == hi {
        Clip::Point(HPoint::along(p, &d, &lo, &dd))
    } else {
        Clip::Segment(HPoint::along(p, &d, &lo, &dd), HPoint::along(p, &d, &hi, &dd))
    }
}

/// Least common multiple of every coordinate denominator.
fn common_denominator(tris: &[&Triangle<RationalPoint3>; 2]) -> Z {
    let mut l = Z::one();
    for t in tris {
        for v in &t.vertices {
            for c in [&v.x, &v.y, &v.z] {
                if !c.denom().is_one() {
                    l = l.lcm(c.denom());
                }
            }
        }
    }
    l
}

fn overlapping_boxes(a: &[V; 3], b: &[V; 3]) -> bool {
    (0..3).all(|axis| {
        let lo = |t: &[V; 3]| t.iter().map(|v| &v[axis]).min().cloned().unwrap();
        let hi = |t: &[V; 3]| t.iter().map(|v| &v[axis]).max().cloned().unwrap();
        lo(a) <= hi(b) && lo(b) <= hi(a)
    })
}

/// True if the plane of `f` has all of `other` strictly on one side.
fn separated_by_plane(f: &Face, other: &Face) -> bool {
    let s = other.v.each_ref().map(|v| f.side(v).signum());
    !s[0].is_zero() && s[0] == s[1] && s[1] == s[2]
}

type Q = BigRational;
type QV = [Q; 3];

fn qsub(a: &QV, b: &QV) -> QV {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn qcross(u: &QV, v: &QV) -> QV {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn qdot(u: &QV, v: &QV) -> Q {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

/// `a`, the points strictly between `a` and `b` in order, then `b`.
fn chain<'a>(a: &QV, b: &QV, points: impl Iterator<Item = &'a QV>) -> Vec<QV> {
    let ab = qsub(b, a);
    let len = qdot(&ab, &ab);
    let mut inner: Vec<(Q, QV)> = points
        .filter_map(|x| {
            let ax = qsub(x, a);
            if !qcross(&ax, &ab).iter().all(Zero::is_zero) {
                return None;
            }
            let t = qdot(&ax, &ab);
            (t.is_positive() && t < len).then(|| (t, x.clone()))
        })
        .collect();
    inner.sort();
    let mut out = vec![a.clone()];
    out.extend(inner.into_iter().map(|(_, x)| x));
    out.push(b.clone());
    out
}

/// Exact intersection of two triangles by direct construction.
pub fn oracle_classify(
    t0: &Triangle<RationalPoint3>,
    t1: &Triangle<RationalPoint3>,
) -> Result<OracleReport> {
    // work on integer coordinates, scaled back at the end
    let denominator = common_denominator(&[t0, t1]);
    let lift = |t: &Triangle<RationalPoint3>| {
        t.vertices.each_ref().map(|p| {
            [&p.x, &p.y, &p.z].map(|c| c.numer() * (&denominator / c.denom()))
        })
    };
    let faces = [Face::new(lift(t0))?, Face::new(lift(t1))?];
    let coplanar = faces[1].v.iter().all(|v| faces[0].side(v).is_zero());

    let mut report = OracleReport {
        coplanar,
        ..Default::default()
    };
    if !overlapping_boxes(&faces[0].v, &faces[1].v)
        || separated_by_plane(&faces[0], &faces[1])
        || separated_by_plane(&faces[1], &faces[0])
    {
        return Ok(report);
    }

    let mut points: Vec<HPoint> = Vec::new();
    let add = |x: HPoint, points: &mut Vec<HPoint>| {
        if !points.contains(&x) {
            points.push(x);
        }
    };
    let mut pieces: Vec<(HPoint, HPoint)> = Vec::new();

    // vertex-vertex
    for a in &faces[0].v {
        for b in &faces[1].v {
            if a == b {
                add(HPoint::integer(a), &mut points);
            }
        }
    }
    for (this, other) in [(&faces[0], &faces[1]), (&faces[1], &faces[0])] {
        // vertex against the closed face, which covers vertex-edge contacts
        for v in &this.v {
            if other.contains(v) {
                add(HPoint::integer(v), &mut points);
            }
        }
        // edge against the closed face
        for k in 0..3 {
            let (p, q) = this.edge(k);
            match other.clip(p, q) {
                Clip::Empty => {}
                Clip::Point(x) => add(x, &mut points),
                Clip::Segment(a, b) => {
                    add(a.clone(), &mut points);
                    add(b.clone(), &mut points);
                    pieces.push((a, b));
                }
            }
        }
    }
    // edge-edge
    for i in 0..3 {
        for j in 0..3 {
            let (p, q) = faces[0].edge(i);
            let (r, s) = faces[1].edge(j);
            match segment_segment(p, q, r, s) {
                Clip::Empty => {}
                Clip::Point(x) => add(x, &mut points),
                Clip::Segment(a, b) => {
                    add(a, &mut points);
                    add(b, &mut points);
                }
            }
        }
    }

    let exact: Vec<QV> = points.iter().map(|p| p.to_rational(&denominator)).collect();
    let mut segments: Vec<(QV, QV)> = Vec::new();
    if coplanar {
        for (a, b) in &pieces {
            let c = chain(&a.to_rational(&denominator), &b.to_rational(&denominator), exact.iter());
            segments.extend(c.windows(2).map(|w| (w[0].clone(), w[1].clone())));
        }
    } else if exact.len() >= 2 {
        // all points lie on the line shared by both planes
        let dir = cross(&faces[0].normal, &faces[1].normal);
        let dir = dir.map(Q::from_integer);
        let lo = exact.iter().min_by_key(|x| qdot(&dir, x)).unwrap();
        let hi = exact.iter().max_by_key(|x| qdot(&dir, x)).unwrap();
        let c = chain(lo, hi, exact.iter());
        segments.extend(c.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    }

    let point = |[x, y, z]: QV| Point3::new(x, y, z);
    report.points = exact.into_iter().map(point).collect();
    for (a, b) in segments {
        report.insert_segment(point(a), point(b));
    }
    Ok(report)
}

/// Exact form of a classifier result.
pub fn canonicalize<K: Kernel>(
    k: &K,
    result: &IntersectionResult,
    t0: &Triangle<K::Point>,
    t1: &Triangle<K::Point>,
) -> Result<OracleReport> {
    let coords = result
        .points
        .iter()
        .map(|p| p.exact_coordinates(k, t0, t1))
        .collect::<Result<Vec<_>>>()?;
    let mut report = OracleReport {
        coplanar: result.coplanar,
        ..Default::default()
    };
    for (p, x) in result.points.iter().zip(&coords) {
        if !report.points.insert(x.clone()) {
            return Err(Error::MalformedDescriptor(format!(
                "{p:?} duplicates the point {x}"
            )));
        }
    }
    for s in &result.segments {
        let (Some(a), Some(b)) = (coords.get(s.p0), coords.get(s.p1)) else {
            return Err(Error::MalformedDescriptor(format!(
                "segment {s:?} out of range"
            )));
        };
        if a == b {
            return Err(Error::MalformedDescriptor(format!(
                "segment {s:?} has zero length"
            )));
        }
        report.insert_segment(a.clone(), b.clone());
    }
    Ok(report)
}

/// Symmetric difference of two reports.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Mismatch {
    pub coplanar: Option<(bool, bool)>,
    pub only_in_first: Vec<OraclePoint>,
    pub only_in_second: Vec<OraclePoint>,
    pub segments_only_in_first: Vec<(OraclePoint, OraclePoint)>,
    pub segments_only_in_second: Vec<(OraclePoint, OraclePoint)>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.coplanar {
            writeln!(f, "coplanar: {a} vs {b}")?;
        }
        for p in &self.only_in_first {
            writeln!(f, "point only in first: {p}")?;
        }
        for p in &self.only_in_second {
            writeln!(f, "point only in second: {p}")?;
        }
        for (a, b) in &self.segments_only_in_first {
            writeln!(f, "segment only in first: {a} - {b}")?;
        }
        for (a, b) in &self.segments_only_in_second {
            writeln!(f, "segment only in second: {a} - {b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Match,
    Mismatch(Mismatch),
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        matches!(self, Comparison::Match)
    }
}

pub fn compare(a: &OracleReport, b: &OracleReport) -> Comparison {
    let m = Mismatch {
        coplanar: (a.coplanar != b.coplanar).then_some((a.coplanar, b.coplanar)),
        only_in_first: a.points.difference(&b.points).cloned().collect(),
        only_in_second: b.points.difference(&a.points).cloned().collect(),
        segments_only_in_first: a.segments.difference(&b.segments).cloned().collect(),
        segments_only_in_second: b.segments.difference(&a.segments).cloned().collect(),
    };
    if m == Mismatch::default() {
        Comparison::Match
    } else {
        Comparison::Mismatch(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn ip(x: i64, y: i64, z: i64) -> RationalPoint3 {
        Point3::new(q(x, 1), q(y, 1), q(z, 1))
    }

    fn tri(v: [[i64; 3]; 3]) -> Triangle<RationalPoint3> {
        Triangle::new(
            ip(v[0][0], v[0][1], v[0][2]),
            ip(v[1][0], v[1][1], v[1][2]),
            ip(v[2][0], v[2][1], v[2][2]),
        )
    }

    const UNIT: [[i64; 3]; 3] = [[0, 0, 0], [1, 0, 0], [0, 1, 0]];

    #[test]
    fn disjoint_is_empty() {
        let r =
            oracle_classify(&tri(UNIT), &tri([[10, 10, 10], [11, 10, 10], [10, 11, 10]])).unwrap();
        assert!(r.points.is_empty() && r.segments.is_empty() && !r.coplanar);
    }

    #[test]
    fn axis_aligned_piercing() {
        let r = oracle_classify(
            &tri([[0, 0, 0], [4, 0, 0], [0, 4, 0]]),
            &tri([[1, 1, -1], [1, 1, 2], [3, 3, 2]]),
        )
        .unwrap();
        let expected: BTreeSet<_> = [ip(1, 1, 0), Point3::new(q(5, 3), q(5, 3), q(0, 1))].into();
        assert_eq!(r.points, expected);
        assert_eq!(r.segments.len(), 1);
        assert!(!r.coplanar);
    }

    #[test]
    fn star_of_david_hexagon() {
        let r = oracle_classify(
            &tri([[0, 0, 0], [4, 0, 0], [2, 3, 0]]),
            &tri([[0, 2, 0], [4, 2, 0], [2, -1, 0]]),
        )
        .unwrap();
        assert!(r.coplanar);
        assert_eq!(r.points.len(), 6);
        assert_eq!(r.segments.len(), 6);
    }

    #[test]
    fn identical_triangles_boundary() {
        let r = oracle_classify(&tri(UNIT), &tri(UNIT)).unwrap();
        assert_eq!(r.points.len(), 3);
        assert_eq!(r.segments.len(), 3);
    }

    #[test]
    fn scaling_preserves_fractional_input() {
        let half = |v: [[i64; 3]; 3]| {
            Triangle::new(
                Point3::new(q(v[0][0], 2), q(v[0][1], 2), q(v[0][2], 3)),
                Point3::new(q(v[1][0], 2), q(v[1][1], 2), q(v[1][2], 3)),
                Point3::new(q(v[2][0], 2), q(v[2][1], 2), q(v[2][2], 3)),
            )
        };
        let r = oracle_classify(
            &half([[0, 0, 0], [4, 0, 0], [0, 4, 0]]),
            &half([[1, 1, -1], [1, 1, 2], [3, 3, 2]]),
        )
        .unwrap();
        assert!(r.points.contains(&Point3::new(q(1, 2), q(1, 2), q(0, 1))));
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(
            oracle_classify(&tri(UNIT), &tri([[0, 0, 0], [1, 1, 1], [2, 2, 2]])),
            Err(Error::DegenerateTriangle(DegenerateReason::Collinear))
        );
    }

    #[test]
    fn compare_reports() {
        let mut a = OracleReport::default();
        a.points.insert(ip(0, 0, 0));
        assert!(compare(&a, &a).is_match());
        match compare(&a, &OracleReport::default()) {
            Comparison::Mismatch(m) => assert_eq!(m.only_in_first, vec![ip(0, 0, 0)]),
            Comparison::Match => panic!("expected a mismatch"),
        }
    }
}
