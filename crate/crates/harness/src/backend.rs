use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tritri::{
    classify, validate_triangle, FloatKernel, ImplicitKernel, IntersectionResult, KernelConfig,
    Point3, PointHandle, RationalKernel, Triangle,
};

/// Numeric representation used to run the classifier on `f64` input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Float,
    Rational,
    Implicit,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Float, Backend::Rational, Backend::Implicit];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Rational => "rational",
            Backend::Implicit => "implicit",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "float" => Ok(Backend::Float),
            "rational" => Ok(Backend::Rational),
            "implicit" => Ok(Backend::Implicit),
            _ => Err(format!(
                "unknown backend {s:?} (expected float, rational or implicit)"
            )),
        }
    }
}

/// One kernel of each kind, sharing a configuration.
#[derive(Debug, Clone, Default)]
pub struct Engine {
    pub float: FloatKernel,
    pub rational: RationalKernel,
    pub implicit: ImplicitKernel,
}

impl Engine {
    pub fn new(config: KernelConfig) -> Self {
        Engine {
            float: FloatKernel::new(config.clone()),
            rational: RationalKernel::new(config.clone()),
            implicit: ImplicitKernel::new(config),
        }
    }

    pub fn classify(
        &self,
        backend: Backend,
        t0: &Triangle<Point3<f64>>,
        t1: &Triangle<Point3<f64>>,
    ) -> tritri::Result<IntersectionResult> {
        match backend {
            Backend::Float => classify(&self.float, t0, t1),
            Backend::Rational => classify(&self.rational, &to_rational(t0), &to_rational(t1)),
            Backend::Implicit => classify(&self.implicit, &to_handles(t0), &to_handles(t1)),
        }
    }

    pub fn validate(&self, backend: Backend, t: &Triangle<Point3<f64>>) -> tritri::Result<()> {
        match backend {
            Backend::Float => validate_triangle(&self.float, t),
            Backend::Rational => validate_triangle(&self.rational, &to_rational(t)),
            Backend::Implicit => validate_triangle(&self.implicit, &to_handles(t)),
        }
        .map(|_| ())
    }
}

pub fn to_rational(t: &Triangle<Point3<f64>>) -> Triangle<tritri::RationalPoint3> {
    t.map(|p| p.to_rational())
}

pub fn to_handles(t: &Triangle<Point3<f64>>) -> Triangle<PointHandle> {
    t.map(|&p| PointHandle::from(p))
}
