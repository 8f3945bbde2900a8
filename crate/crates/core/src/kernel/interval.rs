//! Outward-rounded interval arithmetic, used as a cheap pre-filter for
//! predicates over implicit points.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::Sign;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    fn widened(lo: f64, hi: f64) -> Interval {
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    /// An interval certainly containing `r`.
    pub fn from_rational(r: &BigRational) -> Interval {
        match r.to_f64() {
            Some(x) if x.is_finite() => {
                // to_f64 is not guaranteed to round correctly; two ulps either
                // side covers it.
                Interval {
                    lo: x.next_down().next_down(),
                    hi: x.next_up().next_up(),
                }
            }
            _ => Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn is_valid(&self) -> bool {
        !self.lo.is_nan() && !self.hi.is_nan()
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<Sign> {
        if !self.is_valid() {
            None
        } else if self.lo > 0.0 {
            Some(Sign::Positive)
        } else if self.hi < 0.0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    /// Quotient; `None` when the divisor straddles zero.
    pub fn checked_div(self, rhs: Interval) -> Option<Interval> {
        if rhs.contains_zero() || !rhs.is_valid() || !self.is_valid() {
            return None;
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Interval::widened(lo, hi))
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval::widened(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval::widened(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        if p.iter().any(|x| x.is_nan()) {
            return Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            };
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::widened(lo, hi)
    }
}

pub type IntervalPoint = [Interval; 3];

fn diff(a: &IntervalPoint, b: &IntervalPoint) -> IntervalPoint {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn orient3d(
    a: &IntervalPoint,
    b: &IntervalPoint,
    c: &IntervalPoint,
    d: &IntervalPoint,
) -> Interval {
    let u = diff(b, a);
    let v = diff(c, a);
    let w = diff(d, a);
    u[0] * (v[1] * w[2] - v[2] * w[1])
        + u[1] * (v[2] * w[0] - v[0] * w[2])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
}

pub fn orient2d(
    a: &IntervalPoint,
    b: &IntervalPoint,
    c: &IntervalPoint,
    kept: (usize, usize),
) -> Interval {
    let (u, v) = kept;
    (b[u] - a[u]) * (c[v] - a[v]) - (b[v] - a[v]) * (c[u] - a[u])
}

/// Enclosure of the intersection of line `pq` with plane `abc`.
pub fn line_plane(
    p: &IntervalPoint,
    q: &IntervalPoint,
    a: &IntervalPoint,
    b: &IntervalPoint,
    c: &IntervalPoint,
) -> Option<IntervalPoint> {
    let u = diff(b, a);
    let v = diff(c, a);
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let dir = diff(q, p);
    let ap = diff(a, p);
    let num = n[0] * ap[0] + n[1] * ap[1] + n[2] * ap[2];
    let den = n[0] * dir[0] + n[1] * dir[1] + n[2] * dir[2];
    let t = num.checked_div(den)?;
    Some([p[0] + t * dir[0], p[1] + t * dir[1], p[2] + t * dir[2]])
}

/// Enclosure of the intersection of lines `p0 p1` and `q0 q1` solved in the
/// projection keeping `kept`.
pub fn segment_segment(
    p0: &IntervalPoint,
    p1: &IntervalPoint,
    q0: &IntervalPoint,
    q1: &IntervalPoint,
    kept: (usize, usize),
) -> Option<IntervalPoint> {
    let (u, v) = kept;
    let d = diff(p1, p0);
    let e = diff(q1, q0);
    let w = diff(q0, p0);
    let den = d[u] * e[v] - d[v] * e[u];
    let num = w[u] * e[v] - w[v] * e[u];
    let t = num.checked_div(den)?;
    Some([p0[0] + t * d[0], p0[1] + t * d[1], p0[2] + t * d[2]])
}
