//! Exact detection and classification of the intersections between two
//! triangles in 3D.
//!
//! The classifier is generic over a [`Kernel`], which supplies exact
//! `orient2d`/`orient3d` predicates for one point representation. Three
//! kernels ship with the crate:
//!
//! * [`FloatKernel`]: `f64` coordinates, static filter plus exact fallback.
//! * [`RationalKernel`]: arbitrary-precision rational coordinates.
//! * [`ImplicitKernel`]: [`PointHandle`]s, which may be explicit points or
//!   implicit line-plane / segment-segment intersection points.
//!
//! Results are reported as `(kind, id0, id1)` descriptors naming the pair of
//! sub-simplices that generate each intersection point, plus the segments
//! joining them. The [`oracle`] module holds an independent constructive
//! verifier used by the test-suites and the fuzzer.

pub mod classify;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod oracle;

pub use classify::{classify, OrientationCache};
pub use geometry::{
    decode_simplex_ref, validate_triangle, IntersectionKind, IntersectionPoint, IntersectionResult,
    IntersectionSegment, SimplexDim, SimplexRef, Triangle, TriangleTag,
};

pub use error::{DegenerateReason, Error, Result};
pub use kernel::{
    Axis, ExplicitPoint3, FloatKernel, ImplicitKernel, ImplicitLpi, ImplicitSsi, Kernel,
    KernelConfig, Point3, PointHandle, PredicateCounters, PredicateCounts, RationalKernel,
    RationalPoint3, Sign,
};
