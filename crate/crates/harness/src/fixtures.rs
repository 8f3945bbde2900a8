//! Generated meshes used by tests, examples and the performance smoke run.

use std::collections::HashMap;

use tritri::Point3;

use crate::mesh::Mesh;

pub fn tetrahedron() -> Mesh {
    Mesh::new(
        "tetrahedron",
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ],
        vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
    )
}

/// Subdivided icosahedron. Only `+ - * / sqrt` are used, so the
/// coordinates are identical on every IEEE-754 platform.
pub fn icosphere(center: [f64; 3], radius: f64, subdivisions: u32) -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for v in vertices.iter_mut() {
        *v = normalize(*v);
    }
    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 3]>| {
            *midpoints.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                vertices.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let vertices = vertices
        .into_iter()
        .map(|v| {
            Point3::new(
                center[0] + radius * v[0],
                center[1] + radius * v[1],
                center[2] + radius * v[2],
            )
        })
        .collect();
    Mesh::new("icosphere", vertices, faces)
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Disjoint union of two meshes.
pub fn union(name: &str, a: &Mesh, b: &Mesh) -> Mesh {
    let offset = a.vertices.len();
    let vertices = a.vertices.iter().chain(&b.vertices).copied().collect();
    let faces = a
        .faces
        .iter()
        .copied()
        .chain(b.faces.iter().map(|f| f.map(|v| v + offset)))
        .collect();
    Mesh::new(name, vertices, faces)
}

/// Two interpenetrating unit icospheres, 1280 faces each.
pub fn two_spheres() -> Mesh {
    let a = icosphere([0.0, 0.0, 0.0], 1.0, 3);
    let b = icosphere([0.75, 0.375, 0.25], 1.0, 3);
    union("two_spheres", &a, &b)
}

/// Heightfield over the unit square, `n` by `n` quads split into triangles.
pub fn heightfield(n: usize, offset: [f64; 2], height: impl Fn(f64, f64) -> f64) -> Mesh {
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            let (x, y) = (offset[0] + i as f64 * h, offset[1] + j as f64 * h);
            vertices.push(Point3::new(x, y, height(x, y)));
        }
    }
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let mut faces = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::new("heightfield", vertices, faces)
}

/// A flat sheet and an egg-crate sheet crossing it along a grid of curves.
/// `4 n^2` faces in total.
pub fn wavy_sheets(n: usize, waves: f64) -> Mesh {
    let k = waves * std::f64::consts::PI;
    let flat = heightfield(n, [0.0, 0.0], |_, _| 0.0);
    let shift = 0.37 / n as f64;
    let wavy = heightfield(n, [shift, shift], |x, y| {
        0.05 * (k * x + 0.3).sin() * (k * y + 0.7).sin()
    });
    union("wavy_sheets", &flat, &wavy)
}
