//! Seeded generators of triangle pairs.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use tritri::{validate_triangle, FloatKernel, Point3, Triangle};

pub type FloatTriangle = Triangle<Point3<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    GeneralPosition,
    CoplanarRandom,
    SharedVertex,
    SharedEdge,
    Identical,
    /// Grid points perturbed by small multiples of `2^ulp_log2`.
    NearDegenerate {
        ulp_log2: i32,
    },
    GridSnapped,
}

impl Family {
    pub const DEFAULT_ULP_LOG2: i32 = -52;

    pub const ALL: [Family; 7] = [
        Family::GeneralPosition,
        Family::CoplanarRandom,
        Family::SharedVertex,
        Family::SharedEdge,
        Family::Identical,
        Family::NearDegenerate {
            ulp_log2: Family::DEFAULT_ULP_LOG2,
        },
        Family::GridSnapped,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::GeneralPosition => f.write_str("generalPosition"),
            Family::CoplanarRandom => f.write_str("coplanarRandom"),
            Family::SharedVertex => f.write_str("sharedVertex"),
            Family::SharedEdge => f.write_str("sharedEdge"),
            Family::Identical => f.write_str("identical"),
            Family::NearDegenerate { ulp_log2 } if *ulp_log2 == Family::DEFAULT_ULP_LOG2 => {
                f.write_str("nearDegenerate")
            }
            Family::NearDegenerate { ulp_log2 } => write!(f, "nearDegenerate:{ulp_log2}"),
            Family::GridSnapped => f.write_str("gridSnapped"),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let f = match s {
            "generalPosition" => Family::GeneralPosition,
            "coplanarRandom" => Family::CoplanarRandom,
            "sharedVertex" => Family::SharedVertex,
            "sharedEdge" => Family::SharedEdge,
            "identical" => Family::Identical,
            "nearDegenerate" => Family::NearDegenerate {
                ulp_log2: Family::DEFAULT_ULP_LOG2,
            },
            "gridSnapped" => Family::GridSnapped,
            _ => match s.strip_prefix("nearDegenerate:").map(str::parse::<i32>) {
                Some(Ok(e)) if (-1074..=0).contains(&e) => Family::NearDegenerate { ulp_log2: e },
                _ => return Err(format!("unknown generator family {s:?}")),
            },
        };
        Ok(f)
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
    pub count: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64, count: usize) -> Self {
        GeneratorSpec {
            family,
            seed,
            count,
        }
    }

    /// The pair sequence; identical specs give bit-identical sequences.
    pub fn pairs(&self) -> Vec<(FloatTriangle, FloatTriangle)> {
        let mut g = Generator {
            rng: ChaCha8Rng::seed_from_u64(self.seed),
            kernel: FloatKernel::default(),
        };
        (0..self.count).map(|_| g.pair(self.family)).collect()
    }
}

struct Generator {
    rng: ChaCha8Rng,
    kernel: FloatKernel,
}

fn p3(c: [f64; 3]) -> Point3<f64> {
    Point3::new(c[0], c[1], c[2])
}

impl Generator {
    /// `k * step` with `|k| <= steps`.
    fn grid(&mut self, steps: i64, step: f64) -> f64 {
        self.rng.gen_range(-steps..=steps) as f64 * step
    }

    fn grid_point(&mut self, steps: i64, step: f64) -> Point3<f64> {
        p3([(); 3].map(|_| self.grid(steps, step)))
    }

    fn valid(&self, t: &FloatTriangle) -> bool {
        validate_triangle(&self.kernel, t).is_ok()
    }

    /// Draws until `make` yields a non-degenerate pair.
    fn until_valid(
        &mut self,
        mut make: impl FnMut(&mut Self) -> (FloatTriangle, FloatTriangle),
    ) -> (FloatTriangle, FloatTriangle) {
        loop {
            let (a, b) = make(self);
            if self.valid(&a) && self.valid(&b) {
                return (a, b);
            }
        }
    }

    fn general_triangle(&mut self) -> FloatTriangle {
        const STEPS: i64 = 1 << 20;
        let step = 1.0 / STEPS as f64;
        Triangle::new(
            self.grid_point(STEPS, step),
            self.grid_point(STEPS, step),
            self.grid_point(STEPS, step),
        )
    }

    fn rotate(&mut self, v: [Point3<f64>; 3]) -> FloatTriangle {
        let r = self.rng.gen_range(0..3);
        Triangle::new(v[r], v[(r + 1) % 3], v[(r + 2) % 3])
    }

    fn pair(&mut self, family: Family) -> (FloatTriangle, FloatTriangle) {
        match family {
            Family::GeneralPosition => {
                self.until_valid(|g| (g.general_triangle(), g.general_triangle()))
            }
            Family::CoplanarRandom => self.until_valid(|g| {
                // exact lattice points of one plane
                let o = g.grid_point(1 << 10, 1.0 / 1024.0);
                let u = [(); 3].map(|_| g.rng.gen_range(-3..=3) as f64);
                let v = [(); 3].map(|_| g.rng.gen_range(-3..=3) as f64);
                let mut corner = || {
                    let (a, b) = (g.grid(8, 1.0 / 16.0), g.grid(8, 1.0 / 16.0));
                    Point3::new(
                        o.x + a * u[0] + b * v[0],
                        o.y + a * u[1] + b * v[1],
                        o.z + a * u[2] + b * v[2],
                    )
                };
                let t0 = Triangle::new(corner(), corner(), corner());
                let t1 = Triangle::new(corner(), corner(), corner());
                (t0, t1)
            }),
            Family::SharedVertex => self.until_valid(|g| {
                let t0 = g.general_triangle();
                let shared = t0.vertices[g.rng.gen_range(0..3)];
                let other = g.general_triangle();
                let t1 = g.rotate([shared, other.vertices[0], other.vertices[1]]);
                (t0, t1)
            }),
            Family::SharedEdge => self.until_valid(|g| {
                let t0 = g.general_triangle();
                let i = g.rng.gen_range(0..3);
                let (a, b, c) = (
                    t0.vertices[i],
                    t0.vertices[(i + 1) % 3],
                    t0.vertices[(i + 2) % 3],
                );
                let third = if g.rng.gen_bool(0.25) {
                    // completes a flat parallelogram; exact on this grid
                    Point3::new(a.x + b.x - c.x, a.y + b.y - c.y, a.z + b.z - c.z)
                } else {
                    g.general_triangle().vertices[0]
                };
                let (a, b) = if g.rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                let t1 = g.rotate([a, b, third]);
                (t0, t1)
            }),
            Family::Identical => self.until_valid(|g| {
                let t0 = g.general_triangle();
                let mut v = t0.vertices;
                v.shuffle(&mut g.rng);
                (t0, Triangle::new(v[0], v[1], v[2]))
            }),
            Family::NearDegenerate { ulp_log2 } => self.until_valid(|g| {
                let ulp = 2f64.powi(ulp_log2);
                let t0 = Triangle::new(
                    g.grid_point(8, 0.125),
                    g.grid_point(8, 0.125),
                    g.grid_point(8, 0.125),
                );
                let corner = |g: &mut Generator| {
                    let base = match g.rng.gen_range(0..3) {
                        0 => t0.vertices[g.rng.gen_range(0..3)],
                        1 => {
                            let k = g.rng.gen_range(0..3);
                            let (a, b) = t0.edge(k);
                            Point3::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0, (a.z + b.z) / 2.0)
                        }
                        _ => g.grid_point(8, 0.125),
                    };
                    let mut c = [base.x, base.y, base.z];
                    for x in &mut c {
                        if g.rng.gen_bool(0.5) {
                            *x += g.rng.gen_range(-2..=2) as f64 * ulp;
                        }
                    }
                    p3(c)
                };
                let t1 = Triangle::new(corner(g), corner(g), corner(g));
                (t0, t1)
            }),
            Family::GridSnapped => self.until_valid(|g| {
                let mut int_point = || p3([(); 3].map(|_| g.rng.gen_range(0..=4) as f64));
                let t0 = Triangle::new(int_point(), int_point(), int_point());
                let t1 = Triangle::new(int_point(), int_point(), int_point());
                (t0, t1)
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert_eq!(
            "nearDegenerate:-40".parse::<Family>().unwrap(),
            Family::NearDegenerate { ulp_log2: -40 }
        );
        assert!("nearDegenerate:5".parse::<Family>().is_err());
        assert!("bogus".parse::<Family>().is_err());
    }

    #[test]
    fn same_spec_same_pairs() {
        for f in Family::ALL {
            let spec = GeneratorSpec::new(f, 42, 50);
            assert_eq!(spec.pairs(), spec.pairs());
            assert_ne!(spec.pairs(), GeneratorSpec::new(f, 43, 50).pairs());
        }
    }

    #[test]
    fn coplanar_family_is_coplanar() {
        let k = FloatKernel::default();
        for (t0, t1) in GeneratorSpec::new(Family::CoplanarRandom, 1, 200).pairs() {
            let [a, b, c] = &t0.vertices;
            for d in &t1.vertices {
                assert!(tritri::Kernel::orient3d(&k, a, b, c, d).is_zero());
            }
        }
    }
}
