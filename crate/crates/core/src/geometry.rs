//! Triangles, sub-simplex references and the intersection result container.
//!
//! Sub-simplices of the two input triangles share one flat id space:
//!
//! | id     | simplex                                   |
//! |--------|-------------------------------------------|
//! | 0..=2  | vertices of T0                            |
//! | 3..=5  | vertices of T1                            |
//! | 6..=8  | edges of T0, edge `k = (v_k, v_(k+1)%3)`  |
//! | 9..=11 | edges of T1, same rule                    |
//! | 12     | face of T0                                |
//! | 13     | face of T1                                |
//! | -1     | unused slot                               |

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DegenerateReason, Error, Result};
use crate::kernel::{exact, Axis, Kernel, RationalPoint3, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriangleTag {
    T0,
    T1,
}

impl TriangleTag {
    pub fn other(self) -> TriangleTag {
        match self {
            TriangleTag::T0 => TriangleTag::T1,
            TriangleTag::T1 => TriangleTag::T0,
        }
    }

    fn offset(self) -> i32 {
        match self {
            TriangleTag::T0 => 0,
            TriangleTag::T1 => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimplexDim {
    Vertex,
    Edge,
    Face,
}

/// A sub-simplex of one of the two input triangles, or the `-1` sentinel.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct SimplexRef(i32);

impl SimplexRef {
    pub const NONE: SimplexRef = SimplexRef(-1);

    pub fn vertex(tag: TriangleTag, k: usize) -> SimplexRef {
        debug_assert!(k < 3);
        SimplexRef(3 * tag.offset() + k as i32)
    }

    pub fn edge(tag: TriangleTag, k: usize) -> SimplexRef {
        debug_assert!(k < 3);
        SimplexRef(6 + 3 * tag.offset() + k as i32)
    }

    pub fn face(tag: TriangleTag) -> SimplexRef {
        SimplexRef(12 + tag.offset())
    }

    /// Accepts `-1..=13`.
    pub fn from_raw(id: i32) -> Result<SimplexRef> {
        if (-1..=13).contains(&id) {
            Ok(SimplexRef(id))
        } else {
            Err(Error::OutOfRange(id))
        }
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn is_none(self) -> bool {
        self.0 == -1
    }

    pub fn decode(self) -> Result<(TriangleTag, SimplexDim, usize)> {
        decode_simplex_ref(self.0)
    }

    fn tag_dim(self) -> Option<(TriangleTag, SimplexDim)> {
        self.decode().ok().map(|(t, d, _)| (t, d))
    }
}

impl fmt::Debug for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<i32> for SimplexRef {
    type Error = Error;

    fn try_from(id: i32) -> Result<Self> {
        SimplexRef::from_raw(id)
    }
}

impl From<SimplexRef> for i32 {
    fn from(s: SimplexRef) -> i32 {
        s.0
    }
}

/// Decodes an id into `(triangle, dimension, local index)`. The `-1`
/// sentinel is not decodable.
pub fn decode_simplex_ref(id: i32) -> Result<(TriangleTag, SimplexDim, usize)> {
    let tag = |t: i32| {
        if t == 0 {
            TriangleTag::T0
        } else {
            TriangleTag::T1
        }
    };
    match id {
        0..=5 => Ok((tag(id / 3), SimplexDim::Vertex, (id % 3) as usize)),
        6..=11 => Ok((tag((id - 6) / 3), SimplexDim::Edge, ((id - 6) % 3) as usize)),
        12 | 13 => Ok((tag(id - 12), SimplexDim::Face, 0)),
        _ => Err(Error::OutOfRange(id)),
    }
}

/// The five intersection taxa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntersectionKind {
    /// Coincident vertices.
    VV,
    /// Vertex in the open interior of an edge.
    VE,
    /// Vertex in the open interior of the other face.
    VF,
    /// Two edge interiors crossing at a single point.
    EE,
    /// Edge interior piercing the interior of the other face.
    EF,
}

impl IntersectionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntersectionKind::VV => "VV",
            IntersectionKind::VE => "VE",
            IntersectionKind::VF => "VF",
            IntersectionKind::EE => "EE",
            IntersectionKind::EF => "EF",
        }
    }
}

impl fmt::Display for IntersectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(kind, id0, id1)`: the pair of sub-simplices generating a point.
///
/// * `VV`: `id0` a vertex of T0, `id1` a vertex of T1.
/// * `VE`: `id0` a vertex, `id1` an edge of the other triangle.
/// * `VF`: `id0` a vertex, `id1 = -1` (the face of the other triangle).
/// * `EE`: `id0` an edge of T0, `id1` an edge of T1.
/// * `EF`: `id0` an edge, `id1 = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub kind: IntersectionKind,
    pub id0: SimplexRef,
    pub id1: SimplexRef,
}

impl IntersectionPoint {
    pub fn new(kind: IntersectionKind, id0: SimplexRef, id1: SimplexRef) -> Self {
        IntersectionPoint { kind, id0, id1 }
    }

    /// Checks the kind-specific id constraints.
    pub fn validate(&self) -> Result<()> {
        use IntersectionKind::*;
        use SimplexDim::*;
        use TriangleTag::*;
        let a = self.id0.tag_dim();
        let b = self.id1.tag_dim();
        let ok = match self.kind {
            VV => a == Some((T0, Vertex)) && b == Some((T1, Vertex)),
            VE => match (a, b) {
                (Some((ta, Vertex)), Some((tb, Edge))) => ta != tb,
                _ => false,
            },
            VF => matches!(a, Some((_, Vertex))) && self.id1.is_none(),
            EE => a == Some((T0, Edge)) && b == Some((T1, Edge)),
            EF => matches!(a, Some((_, Edge))) && self.id1.is_none(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedDescriptor(format!(
                "({}, {}, {})",
                self.kind,
                self.id0.raw(),
                self.id1.raw()
            )))
        }
    }

    /// Exact coordinates of the point this descriptor names: the vertex for
    /// `VV`/`VE`/`VF`, a segment-segment construction for `EE` and a
    /// line-plane construction for `EF`.
    pub fn exact_coordinates<K: Kernel>(
        &self,
        k: &K,
        t0: &Triangle<K::Point>,
        t1: &Triangle<K::Point>,
    ) -> Result<RationalPoint3> {
        self.validate()?;
        let tri = |tag: TriangleTag| match tag {
            TriangleTag::T0 => t0,
            TriangleTag::T1 => t1,
        };
        let (tag0, _, i0) = self.id0.decode()?;
        let malformed = |why: &str| Error::MalformedDescriptor(format!("{self:?}: {why}"));
        match self.kind {
            IntersectionKind::VV | IntersectionKind::VE | IntersectionKind::VF => {
                Ok(k.exact_coordinates(tri(tag0).vertex(i0)))
            }
            IntersectionKind::EE => {
                let (_, _, i1) = self.id1.decode()?;
                let (p, q) = t0.edge(i0);
                let (r, s) = t1.edge(i1);
                let [p, q, r, s] = [p, q, r, s].map(|v| k.exact_coordinates(v));
                if exact::orient3d(&p, &q, &r, &s) != Sign::Zero {
                    return Err(malformed("skew edges"));
                }
                let d = [&q.x - &p.x, &q.y - &p.y, &q.z - &p.z];
                let e = [&s.x - &r.x, &s.y - &r.y, &s.z - &r.z];
                let n = [
                    &d[1] * &e[2] - &d[2] * &e[1],
                    &d[2] * &e[0] - &d[0] * &e[2],
                    &d[0] * &e[1] - &d[1] * &e[0],
                ];
                let axis = exact::dominant_axis(&n).ok_or_else(|| malformed("parallel edges"))?;
                exact::segment_segment_intersection(&p, &q, &r, &s, axis)
                    .ok_or_else(|| malformed("parallel edges"))
            }
            IntersectionKind::EF => {
                let (p, q) = tri(tag0).edge(i0);
                let [a, b, c] = &tri(tag0.other()).vertices;
                let [p, q, a, b, c] = [p, q, a, b, c].map(|v| k.exact_coordinates(v));
                exact::line_plane_intersection(&p, &q, &a, &b, &c)
                    .ok_or_else(|| malformed("edge parallel to face"))
            }
        }
    }
}

/// A segment between two entries of the result's point list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct IntersectionSegment {
    pub p0: usize,
    pub p1: usize,
}

impl IntersectionSegment {
    /// Normalised so that `p0 < p1`.
    pub fn new(a: usize, b: usize) -> Self {
        IntersectionSegment {
            p0: a.min(b),
            p1: a.max(b),
        }
    }
}

impl From<[usize; 2]> for IntersectionSegment {
    fn from([p0, p1]: [usize; 2]) -> Self {
        IntersectionSegment { p0, p1 }
    }
}

impl From<IntersectionSegment> for [usize; 2] {
    fn from(s: IntersectionSegment) -> Self {
        [s.p0, s.p1]
    }
}

/// Everything the classifier reports for one triangle pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionResult {
    pub coplanar: bool,
    pub points: Vec<IntersectionPoint>,
    pub segments: Vec<IntersectionSegment>,
    pub metadata: BTreeMap<String, String>,
}

impl IntersectionResult {
    pub fn empty(coplanar: bool) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("coplanar".to_owned(), coplanar.to_string());
        IntersectionResult {
            coplanar,
            points: Vec::new(),
            segments: Vec::new(),
            metadata,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Schema check: descriptor constraints, uniqueness, segment indices and
    /// the cardinality bounds of the two regimes.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InternalInvariantViolation(msg));
        let mut seen = HashSet::new();
        for p in &self.points {
            p.validate()?;
            if !seen.insert(*p) {
                return bad(format!("duplicate descriptor {p:?}"));
            }
            if self.coplanar && p.kind == IntersectionKind::EF {
                return bad("EF point in a coplanar result".into());
            }
        }
        let max_points = if self.coplanar { 6 } else { 2 };
        if self.points.len() > max_points {
            return bad(format!("{} points", self.points.len()));
        }
        if !self.coplanar && self.segments.len() > 1 {
            return bad(format!(
                "{} segments in a non-coplanar result",
                self.segments.len()
            ));
        }
        let mut seen = HashSet::new();
        for s in &self.segments {
            if s.p0 == s.p1 || s.p0 >= self.points.len() || s.p1 >= self.points.len() {
                return bad(format!("invalid segment {s:?}"));
            }
            if !seen.insert(IntersectionSegment::new(s.p0, s.p1)) {
                return bad(format!("duplicate segment {s:?}"));
            }
        }
        Ok(())
    }
}

/// Three vertices in any point representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangle<P> {
    pub vertices: [P; 3],
}

impl<P> Triangle<P> {
    pub fn new(v0: P, v1: P, v2: P) -> Self {
        Triangle {
            vertices: [v0, v1, v2],
        }
    }

    #[inline]
    pub fn vertex(&self, k: usize) -> &P {
        &self.vertices[k]
    }

    /// Endpoints of edge `k`: `(v_k, v_(k+1)%3)`.
    #[inline]
    pub fn edge(&self, k: usize) -> (&P, &P) {
        (&self.vertices[k], &self.vertices[(k + 1) % 3])
    }

    pub fn map<Q>(&self, f: impl FnMut(&P) -> Q) -> Triangle<Q> {
        let [a, b, c] = self.vertices.each_ref().map(f);
        Triangle::new(a, b, c)
    }
}

/// Rejects triangles with invalid coordinates, repeated vertices or
/// collinear vertices. On success returns the projection axis of the
/// triangle's plane (largest-magnitude normal component).
pub fn validate_triangle<K: Kernel>(kernel: &K, t: &Triangle<K::Point>) -> Result<Axis> {
    for v in &t.vertices {
        kernel.check_point(v)?;
    }
    let [a, b, c] = &t.vertices;
    if kernel.same_point(a, b) || kernel.same_point(b, c) || kernel.same_point(c, a) {
        return Err(Error::DegenerateTriangle(DegenerateReason::RepeatedVertex));
    }
    kernel
        .normal_axis(a, b, c)
        .ok_or(Error::DegenerateTriangle(DegenerateReason::Collinear))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{FloatKernel, Point3};
    use proptest::prelude::*;

    #[test]
    fn decode_examples() {
        assert_eq!(
            decode_simplex_ref(0),
            Ok((TriangleTag::T0, SimplexDim::Vertex, 0))
        );
        assert_eq!(
            decode_simplex_ref(9),
            Ok((TriangleTag::T1, SimplexDim::Edge, 0))
        );
        assert_eq!(
            decode_simplex_ref(13),
            Ok((TriangleTag::T1, SimplexDim::Face, 0))
        );
        assert_eq!(decode_simplex_ref(-1), Err(Error::OutOfRange(-1)));
        assert_eq!(decode_simplex_ref(14), Err(Error::OutOfRange(14)));
    }

    #[test]
    fn encode_decode_identity() {
        for id in 0..=13 {
            let (tag, dim, k) = decode_simplex_ref(id).unwrap();
            let back = match dim {
                SimplexDim::Vertex => SimplexRef::vertex(tag, k),
                SimplexDim::Edge => SimplexRef::edge(tag, k),
                SimplexDim::Face => SimplexRef::face(tag),
            };
            assert_eq!(back.raw(), id);
        }
    }

    fn tri(v: [[f64; 3]; 3]) -> Triangle<Point3<f64>> {
        Triangle::new(v[0].into(), v[1].into(), v[2].into())
    }

    #[test]
    fn validate_triangle_examples() {
        let k = FloatKernel::default();
        assert_eq!(
            validate_triangle(
                &k,
                &tri([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
            ),
            Ok(Axis::Z)
        );
        assert_eq!(
            validate_triangle(
                &k,
                &tri([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [2.0, 2.0, 2.0]])
            ),
            Err(Error::DegenerateTriangle(DegenerateReason::Collinear))
        );
        assert_eq!(
            validate_triangle(
                &k,
                &tri([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
            ),
            Err(Error::DegenerateTriangle(DegenerateReason::RepeatedVertex))
        );
        assert_eq!(
            validate_triangle(
                &k,
                &tri([[0.0, 0.0, f64::NAN], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
            ),
            Err(Error::InvalidCoordinate)
        );
    }

    #[test]
    fn descriptor_constraints() {
        let p = |k, a, b| {
            IntersectionPoint::new(
                k,
                SimplexRef::from_raw(a).unwrap(),
                SimplexRef::from_raw(b).unwrap(),
            )
        };
        use IntersectionKind::*;
        assert!(p(VV, 0, 3).validate().is_ok());
        assert!(p(VV, 3, 0).validate().is_err());
        assert!(p(VE, 4, 7).validate().is_ok());
        assert!(p(VE, 1, 7).validate().is_err());
        assert!(p(VF, 5, -1).validate().is_ok());
        assert!(p(VF, 5, 12).validate().is_err());
        assert!(p(EE, 8, 11).validate().is_ok());
        assert!(p(EE, 9, 6).validate().is_err());
        assert!(p(EF, 10, -1).validate().is_ok());
        assert!(p(EF, 2, -1).validate().is_err());
    }

    #[test]
    fn serde_shape() {
        let mut r = IntersectionResult::empty(false);
        r.points.push(IntersectionPoint::new(
            IntersectionKind::EF,
            SimplexRef::edge(TriangleTag::T1, 0),
            SimplexRef::NONE,
        ));
        r.segments.push(IntersectionSegment::new(1, 0));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"coplanar":false,"points":[{"kind":"EF","id0":9,"id1":-1}],"segments":[[0,1]],"metadata":{"coplanar":"false"}}"#
        );
        let back: IntersectionResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<SimplexRef>("14").is_err());
    }

    proptest! {
        #[test]
        fn simplex_ref_raw_round_trip(id in -1i32..=13) {
            let s = SimplexRef::from_raw(id).unwrap();
            let json = serde_json::to_string(&s).unwrap();
            prop_assert_eq!(serde_json::from_str::<SimplexRef>(&json).unwrap(), s);
        }
    }
}
