//! Uniform-grid broad phase.

use serde::{Deserialize, Serialize};

use crate::mesh::Mesh;

/// Two faces whose closed bounding boxes overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CandidatePair {
    pub f0: usize,
    pub f1: usize,
    /// Number of vertex indices the two faces have in common.
    pub shared_simplices: u8,
}

#[derive(Debug, Clone, Copy)]
struct Aabb {
    lo: [f64; 3],
    hi: [f64; 3],
}

impl Aabb {
    fn of_face(m: &Mesh, f: usize) -> Aabb {
        let mut b = Aabb {
            lo: [f64::INFINITY; 3],
            hi: [f64::NEG_INFINITY; 3],
        };
        for &v in &m.faces[f] {
            let p = m.vertices[v];
            for (a, c) in [p.x, p.y, p.z].into_iter().enumerate() {
                b.lo[a] = b.lo[a].min(c);
                b.hi[a] = b.hi[a].max(c);
            }
        }
        b
    }

    fn overlaps(&self, o: &Aabb) -> bool {
        (0..3).all(|a| self.lo[a] <= o.hi[a] && o.lo[a] <= self.hi[a])
    }
}

fn shared(m: &Mesh, f0: usize, f1: usize) -> u8 {
    let a = m.faces[f0];
    m.faces[f1].iter().filter(|v| a.contains(v)).count() as u8
}

/// Every face pair with overlapping bounding boxes, in ascending `(f0, f1)`
/// order.
pub fn candidate_pairs(m: &Mesh) -> Vec<CandidatePair> {
    let n = m.faces.len();
    if n < 2 {
        return Vec::new();
    }
    let boxes: Vec<Aabb> = (0..n).map(|f| Aabb::of_face(m, f)).collect();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for b in &boxes {
        for a in 0..3 {
            lo[a] = lo[a].min(b.lo[a]);
            hi[a] = hi[a].max(b.hi[a]);
        }
    }
    let grid = Grid::new(lo, hi, n);

    // cell ranges per face; cells hold face lists
    let ranges: Vec<[[usize; 3]; 2]> = boxes
        .iter()
        .map(|b| [grid.cell(&b.lo), grid.cell(&b.hi)])
        .collect();
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); grid.len()];
    for (f, [a, b]) in ranges.iter().enumerate() {
        for i in a[0]..=b[0] {
            for j in a[1]..=b[1] {
                for k in a[2]..=b[2] {
                    cells[grid.index([i, j, k])].push(f as u32);
                }
            }
        }
    }

    let mut pairs = Vec::new();
    for i in 0..grid.dims[0] {
        for j in 0..grid.dims[1] {
            for k in 0..grid.dims[2] {
                let cell = &cells[grid.index([i, j, k])];
                for (x, &f0) in cell.iter().enumerate() {
                    for &f1 in &cell[x + 1..] {
                        let (f0, f1) = (f0 as usize, f1 as usize);
                        // report each pair only from the lowest cell both faces cover
                        let first = (0..3).map(|a| ranges[f0][0][a].max(ranges[f1][0][a]));
                        if !first.eq([i, j, k]) || !boxes[f0].overlaps(&boxes[f1]) {
                            continue;
                        }
                        let (f0, f1) = (f0.min(f1), f0.max(f1));
                        pairs.push(CandidatePair {
                            f0,
                            f1,
                            shared_simplices: shared(m, f0, f1),
                        });
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Reference all-pairs scan, quadratic in the face count.
pub fn brute_force_pairs(m: &Mesh) -> Vec<CandidatePair> {
    let n = m.faces.len();
    let boxes: Vec<Aabb> = (0..n).map(|f| Aabb::of_face(m, f)).collect();
    let mut pairs = Vec::new();
    for f0 in 0..n {
        for f1 in f0 + 1..n {
            if boxes[f0].overlaps(&boxes[f1]) {
                pairs.push(CandidatePair {
                    f0,
                    f1,
                    shared_simplices: shared(m, f0, f1),
                });
            }
        }
    }
    pairs
}

struct Grid {
    origin: [f64; 3],
    inv_cell: f64,
    dims: [usize; 3],
}

impl Grid {
    /// About one cell per two faces, spread over the non-flat axes.
    fn new(lo: [f64; 3], hi: [f64; 3], faces: usize) -> Grid {
        let target = (faces as f64 / 2.0).max(1.0);
        let ext: Vec<f64> = (0..3).map(|a| hi[a] - lo[a]).collect();
        let spread: Vec<f64> = ext.iter().copied().filter(|&e| e > 0.0).collect();
        let cell = if spread.is_empty() {
            1.0
        } else {
            let volume: f64 = spread.iter().product();
            (volume / target).powf(1.0 / spread.len() as f64)
        };
        let mut inv_cell = if cell > 0.0 && cell.is_finite() {
            1.0 / cell
        } else {
            0.0
        };
        let dims_for =
            |inv: f64| [0, 1, 2].map(|a| ((ext[a] * inv).ceil() as usize).clamp(1, 1 << 10));
        let mut dims = dims_for(inv_cell);
        // a nearly flat axis shrinks the cell; coarsen until the grid is small
        while dims.iter().product::<usize>() as f64 > 4.0 * target + 8.0 {
            inv_cell /= 2.0;
            dims = dims_for(inv_cell);
        }
        Grid {
            origin: lo,
            inv_cell,
            dims,
        }
    }

    fn len(&self) -> usize {
        self.dims.iter().product()
    }

    /// Monotone in each coordinate, so overlapping boxes share a cell.
    fn cell(&self, p: &[f64; 3]) -> [usize; 3] {
        [0, 1, 2].map(|a| {
            let t = ((p[a] - self.origin[a]) * self.inv_cell).floor();
            (t.max(0.0) as usize).min(self.dims[a] - 1)
        })
    }

    fn index(&self, [i, j, k]: [usize; 3]) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tritri::Point3;

    fn mesh(tris: &[[[f64; 3]; 3]]) -> Mesh {
        let mut vertices = Vec::new();
        let mut faces = Vec::new();
        for t in tris {
            let base = vertices.len();
            vertices.extend(t.iter().map(|&p| Point3::from(p)));
            faces.push([base, base + 1, base + 2]);
        }
        Mesh::new("m", vertices, faces)
    }

    #[test]
    fn far_apart_is_empty() {
        let m = mesh(&[
            [[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            [[10.0; 3], [11.0, 10.0, 10.0], [10.0, 11.0, 10.0]],
        ]);
        assert!(candidate_pairs(&m).is_empty());
    }

    #[test]
    fn identical_triangles_one_pair() {
        let t = [[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert_eq!(
            candidate_pairs(&mesh(&[t, t])),
            vec![CandidatePair {
                f0: 0,
                f1: 1,
                shared_simplices: 0
            }]
        );
    }

    #[test]
    fn abutting_grid_matches_brute_force() {
        // a flat strip of right triangles, each touching its neighbors
        let mut tris = Vec::new();
        for i in 0..30 {
            for j in 0..10 {
                let (x, y) = (i as f64, j as f64);
                tris.push([[x, y, 0.0], [x + 1.0, y, 0.0], [x, y + 1.0, 0.0]]);
                tris.push([
                    [x + 1.0, y, 0.0],
                    [x + 1.0, y + 1.0, 0.0],
                    [x, y + 1.0, 0.0],
                ]);
            }
        }
        let m = mesh(&tris);
        assert_eq!(candidate_pairs(&m), brute_force_pairs(&m));
    }

    #[test]
    fn shared_vertex_count() {
        let m = Mesh::new(
            "m",
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(1.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [1, 3, 2]],
        );
        assert_eq!(candidate_pairs(&m)[0].shared_simplices, 2);
    }
}
