//! Detection and classification of all intersections between two triangles.
//!
//! The scan runs in a fixed order, which is also the order of the emitted
//! points:
//!
//! 1. six `orient3d` calls (each vertex against the other triangle's plane)
//!    and the early rejection test;
//! 2. coincident vertices (`VV`), pairs `(i, j)` in lexicographic order;
//! 3. T0 vertices, then T1 vertices, lying on an open edge (`VE`) or in the
//!    open face (`VF`) of the other triangle;
//! 4. edge pairs `(i, j)` crossing at a single interior point (`EE`);
//! 5. non-coplanar only: T0 edges, then T1 edges, piercing the interior of
//!    the other face (`EF`).
//!
//! Every taxon is defined on open simplices, so one geometric point is never
//! described twice and the lower-dimensional description always wins.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::geometry::{
    validate_triangle, IntersectionKind, IntersectionPoint, IntersectionResult,
    IntersectionSegment, SimplexDim, SimplexRef, Triangle, TriangleTag,
};
use crate::kernel::{Axis, Kernel, RationalPoint3, Sign};

const TAGS: [TriangleTag; 2] = [TriangleTag::T0, TriangleTag::T1];

/// Orientation of every vertex against the other triangle's plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationCache {
    /// T0 vertices against the plane of T1.
    pub o01: [Sign; 3],
    /// T1 vertices against the plane of T0.
    pub o10: [Sign; 3],
}

impl OrientationCache {
    /// Exactly six `orient3d` calls.
    pub fn compute<K: Kernel>(k: &K, t0: &Triangle<K::Point>, t1: &Triangle<K::Point>) -> Self {
        let [a1, b1, c1] = &t1.vertices;
        let [a0, b0, c0] = &t0.vertices;
        OrientationCache {
            o01: t0.vertices.each_ref().map(|v| k.orient3d(a1, b1, c1, v)),
            o10: t1.vertices.each_ref().map(|v| k.orient3d(a0, b0, c0, v)),
        }
    }

    /// All six signs zero.
    pub fn coplanar(&self) -> bool {
        self.o01.iter().chain(&self.o10).all(|s| s.is_zero())
    }

    /// True when all vertices of one triangle lie strictly on the same side of
    /// the other triangle's plane.
    pub fn early_reject(&self) -> bool {
        let same_side = |s: &[Sign; 3]| s[0] != Sign::Zero && s[0] == s[1] && s[1] == s[2];
        same_side(&self.o01) || same_side(&self.o10)
    }
}

/// Where a point of a triangle's plane lies relative to that triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Location {
    Outside,
    Vertex(usize),
    Edge(usize),
    Interior,
}

struct Pair<'a, K: Kernel> {
    k: &'a K,
    tris: [&'a Triangle<K::Point>; 2],
    axes: [Axis; 2],
    /// `orient[t][i]`: vertex `i` of triangle `t` against the other plane.
    orient: [[Sign; 3]; 2],
    coplanar: bool,
}

impl<K: Kernel> Pair<'_, K> {
    /// Locates `p`, known to lie in the plane of triangle `t`.
    fn locate(&self, t: usize, p: &K::Point) -> Location {
        let tri = self.tris[t];
        let axis = self.axes[t];
        let s = [0, 1, 2].map(|e| {
            let (a, b) = tri.edge(e);
            self.k.orient2d(a, b, p, axis)
        });
        let zeros: Vec<usize> = (0..3).filter(|&e| s[e].is_zero()).collect();
        match zeros.as_slice() {
            [] if s[0] == s[1] && s[1] == s[2] => Location::Interior,
            [e] => {
                let (u, v) = ((e + 1) % 3, (e + 2) % 3);
                if s[u] == s[v] {
                    Location::Edge(*e)
                } else {
                    Location::Outside
                }
            }
            // edges e and e+1 meet at vertex e+1
            [0, 1] => Location::Vertex(1),
            [1, 2] => Location::Vertex(2),
            [0, 2] => Location::Vertex(0),
            _ => Location::Outside,
        }
    }

    /// Proper crossing of two segments lying in the plane of triangle `t`.
    fn crosses_in_plane(
        &self,
        t: usize,
        p: &K::Point,
        q: &K::Point,
        r: &K::Point,
        s: &K::Point,
    ) -> bool {
        let axis = self.axes[t];
        let k = self.k;
        k.orient2d(p, q, r, axis)
            .strictly_opposite(k.orient2d(p, q, s, axis))
            && k.orient2d(r, s, p, axis)
                .strictly_opposite(k.orient2d(r, s, q, axis))
    }

    fn coincident_vertices(&self, out: &mut Vec<IntersectionPoint>, claimed: &mut [[bool; 3]; 2]) {
        let [t0, t1] = self.tris;
        for i in 0..3 {
            if !self.orient[0][i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if self.orient[1][j].is_zero() && self.k.same_point(t0.vertex(i), t1.vertex(j)) {
                    out.push(IntersectionPoint::new(
                        IntersectionKind::VV,
                        SimplexRef::vertex(TriangleTag::T0, i),
                        SimplexRef::vertex(TriangleTag::T1, j),
                    ));
                    claimed[0][i] = true;
                    claimed[1][j] = true;
                }
            }
        }
    }

    fn vertices_in_simplices(
        &self,
        t: usize,
        out: &mut Vec<IntersectionPoint>,
        claimed: &[[bool; 3]; 2],
    ) {
        let other = 1 - t;
        for i in 0..3 {
            if claimed[t][i] || !self.orient[t][i].is_zero() {
                continue;
            }
            let vertex = SimplexRef::vertex(TAGS[t], i);
            match self.locate(other, self.tris[t].vertex(i)) {
                Location::Edge(e) => out.push(IntersectionPoint::new(
                    IntersectionKind::VE,
                    vertex,
                    SimplexRef::edge(TAGS[other], e),
                )),
                Location::Interior => out.push(IntersectionPoint::new(
                    IntersectionKind::VF,
                    vertex,
                    SimplexRef::NONE,
                )),
                // an exactly coincident vertex is already a VV point
                Location::Vertex(_) | Location::Outside => {}
            }
        }
    }

    fn edge_crossings(&self, out: &mut Vec<IntersectionPoint>) {
        let [t0, t1] = self.tris;
        for i in 0..3 {
            let (p, q) = t0.edge(i);
            let (sp, sq) = (self.orient[0][i], self.orient[0][(i + 1) % 3]);
            for j in 0..3 {
                let (r, s) = t1.edge(j);
                let (sr, ss) = (self.orient[1][j], self.orient[1][(j + 1) % 3]);
                let crossing = if self.coplanar {
                    self.crosses_in_plane(0, p, q, r, s)
                } else {
                    let e_straddles = sp.strictly_opposite(sq);
                    let f_straddles = sr.strictly_opposite(ss);
                    let e_in_plane = sp.is_zero() && sq.is_zero();
                    let f_in_plane = sr.is_zero() && ss.is_zero();
                    if e_straddles && f_straddles {
                        // both cross the line shared by the two planes; they
                        // meet iff their supporting lines are coplanar
                        self.k.orient3d(p, q, r, s).is_zero()
                    } else if e_straddles && f_in_plane {
                        self.crosses_in_plane(0, p, q, r, s)
                    } else if e_in_plane && f_straddles {
                        self.crosses_in_plane(1, p, q, r, s)
                    } else {
                        false
                    }
                };
                if crossing {
                    out.push(IntersectionPoint::new(
                        IntersectionKind::EE,
                        SimplexRef::edge(TriangleTag::T0, i),
                        SimplexRef::edge(TriangleTag::T1, j),
                    ));
                }
            }
        }
    }

    fn edges_through_face(&self, t: usize, out: &mut Vec<IntersectionPoint>) {
        let [a, b, c] = &self.tris[1 - t].vertices;
        for e in 0..3 {
            if !self.orient[t][e].strictly_opposite(self.orient[t][(e + 1) % 3]) {
                continue;
            }
            let (p, q) = self.tris[t].edge(e);
            let s = self.k.orient3d(p, q, a, b);
            if s.is_zero() || self.k.orient3d(p, q, b, c) != s || self.k.orient3d(p, q, c, a) != s {
                continue;
            }
            out.push(IntersectionPoint::new(
                IntersectionKind::EF,
                SimplexRef::edge(TAGS[t], e),
                SimplexRef::NONE,
            ));
        }
    }
}

/// Whether `point` lies on the closed edge `edge` of triangle `tag`, decided
/// from the descriptor alone. Only meaningful for coplanar results.
fn lies_on_edge(point: &IntersectionPoint, tag: TriangleTag, edge: usize) -> bool {
    let endpoint = |id: SimplexRef| match id.decode() {
        Ok((t, SimplexDim::Vertex, v)) => t == tag && (v == edge || v == (edge + 1) % 3),
        _ => false,
    };
    let this_edge = SimplexRef::edge(tag, edge);
    match point.kind {
        IntersectionKind::VV => endpoint(point.id0) || endpoint(point.id1),
        IntersectionKind::VE => endpoint(point.id0) || point.id1 == this_edge,
        IntersectionKind::VF => endpoint(point.id0),
        IntersectionKind::EE => point.id0 == this_edge || point.id1 == this_edge,
        IntersectionKind::EF => false,
    }
}

fn coplanar_segments<K: Kernel>(
    k: &K,
    t0: &Triangle<K::Point>,
    t1: &Triangle<K::Point>,
    points: &[IntersectionPoint],
) -> Result<Vec<IntersectionSegment>> {
    let mut segments = BTreeSet::new();
    for (t, tri) in [t0, t1].into_iter().enumerate() {
        for e in 0..3 {
            let mut on_edge: Vec<usize> = (0..points.len())
                .filter(|&p| lies_on_edge(&points[p], TAGS[t], e))
                .collect();
            if on_edge.len() > 2 {
                // convexity keeps this to two points; ordering is kept general
                let (a, b) = tri.edge(e);
                let a = k.exact_coordinates(a);
                let b = k.exact_coordinates(b);
                let mut keyed = on_edge
                    .iter()
                    .map(|&p| {
                        let x = points[p].exact_coordinates(k, t0, t1)?;
                        Ok((edge_parameter(&a, &b, &x), p))
                    })
                    .collect::<Result<Vec<(BigRational, usize)>>>()?;
                keyed.sort();
                on_edge = keyed.into_iter().map(|(_, p)| p).collect();
            }
            for w in on_edge.windows(2) {
                segments.insert(IntersectionSegment::new(w[0], w[1]));
            }
        }
    }
    Ok(segments.into_iter().collect())
}

/// Unnormalised position of `x` along `a -> b`.
fn edge_parameter(a: &RationalPoint3, b: &RationalPoint3, x: &RationalPoint3) -> BigRational {
    (0..3).map(|i| (&x[i] - &a[i]) * (&b[i] - &a[i])).sum()
}

/// Detects and classifies every intersection between `t0` and `t1`.
///
/// Both triangles are validated first; degenerate input is an error. The
/// returned result is empty iff the triangles share no point.
pub fn classify<K: Kernel>(
    k: &K,
    t0: &Triangle<K::Point>,
    t1: &Triangle<K::Point>,
) -> Result<IntersectionResult> {
    let axes = [validate_triangle(k, t0)?, validate_triangle(k, t1)?];
    let cache = OrientationCache::compute(k, t0, t1);
    if cache.early_reject() {
        return Ok(IntersectionResult::empty(false));
    }
    let coplanar = cache.coplanar();
    let pair = Pair {
        k,
        tris: [t0, t1],
        axes,
        orient: [cache.o01, cache.o10],
        coplanar,
    };

    let mut points = Vec::new();
    let mut claimed = [[false; 3]; 2];
    pair.coincident_vertices(&mut points, &mut claimed);
    pair.vertices_in_simplices(0, &mut points, &claimed);
    pair.vertices_in_simplices(1, &mut points, &claimed);
    pair.edge_crossings(&mut points);

    let segments = if coplanar {
        coplanar_segments(k, t0, t1, &points)?
    } else {
        pair.edges_through_face(0, &mut points);
        pair.edges_through_face(1, &mut points);
        match points.len() {
            0 | 1 => Vec::new(),
            2 => vec![IntersectionSegment::new(0, 1)],
            n => {
                return Err(Error::InternalInvariantViolation(format!(
                    "{n} intersection points between non-coplanar triangles"
                )))
            }
        }
    };

    let mut result = IntersectionResult::empty(coplanar);
    result.points = points;
    result.segments = segments;
    Ok(result)
}
