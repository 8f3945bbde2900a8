//! Triangle mesh loading: OFF, OBJ, ASCII and binary STL.
//!
//! Coordinates are parsed to the nearest `f64` and never normalized. STL
//! stores a separate copy of each corner, so STL vertices are merged when
//! their coordinates are bitwise equal.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use tritri::{Point3, Triangle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
    StlBinary,
    StlAscii,
}

impl FromStr for MeshFormat {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, MeshError> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MeshFormat::Off),
            "obj" => Ok(MeshFormat::Obj),
            "stl" | "stl-binary" => Ok(MeshFormat::StlBinary),
            "stl-ascii" => Ok(MeshFormat::StlAscii),
            _ => Err(MeshError::UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Line(usize),
    Byte(usize),
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Line(n) => write!(f, "line {n}"),
            Position::Byte(n) => write!(f, "byte {n}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("cannot read mesh: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at {at}: {message}")]
    Parse { at: Position, message: String },
    #[error("unsupported mesh format: {0}")]
    UnsupportedFormat(String),
}

fn parse_error(at: Position, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        at,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Split faces with more than three corners into triangle fans instead
    /// of rejecting them.
    pub triangulate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub name: String,
    pub vertices: Vec<Point3<f64>>,
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Point3<f64>>,
        faces: Vec<[usize; 3]>,
    ) -> Self {
        Mesh {
            name: name.into(),
            vertices,
            faces,
        }
    }

    pub fn triangle(&self, f: usize) -> Triangle<Point3<f64>> {
        let [a, b, c] = self.faces[f];
        Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// OFF text for this mesh. Coordinates round-trip exactly.
    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.faces.len());
        for v in &self.vertices {
            s.push_str(&format!("{:?} {:?} {:?}\n", v.x, v.y, v.z));
        }
        for [a, b, c] in &self.faces {
            s.push_str(&format!("3 {a} {b} {c}\n"));
        }
        s
    }
}

/// Guesses the format from the file extension and, for STL, the contents.
pub fn detect_format(path: &Path, bytes: &[u8]) -> Result<MeshFormat, MeshError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "off" => Ok(MeshFormat::Off),
        "obj" => Ok(MeshFormat::Obj),
        "stl" => Ok(if looks_like_ascii_stl(bytes) {
            MeshFormat::StlAscii
        } else {
            MeshFormat::StlBinary
        }),
        _ => Err(MeshError::UnsupportedFormat(format!(
            "cannot infer format of {}",
            path.display()
        ))),
    }
}

fn looks_like_ascii_stl(bytes: &[u8]) -> bool {
    if !bytes.starts_with(b"solid") {
        return false;
    }
    // binary files may also start with "solid"; trust the size field
    if bytes.len() >= 84 {
        let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
        if 84 + 50 * n == bytes.len() {
            return false;
        }
    }
    true
}

pub fn load_mesh(
    path: &Path,
    format: Option<MeshFormat>,
    opts: LoadOptions,
) -> Result<Mesh, MeshError> {
    let bytes = std::fs::read(path)?;
    let format = match format {
        Some(f) => f,
        None => detect_format(path, &bytes)?,
    };
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("mesh")
        .to_string();
    parse_mesh(&name, &bytes, format, opts)
}

pub fn parse_mesh(
    name: &str,
    bytes: &[u8],
    format: MeshFormat,
    opts: LoadOptions,
) -> Result<Mesh, MeshError> {
    if format == MeshFormat::StlBinary {
        return parse_stl_binary(name, bytes);
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|e| parse_error(Position::Byte(e.valid_up_to()), "invalid UTF-8"))?;
    match format {
        MeshFormat::Off => parse_off(name, text, opts),
        MeshFormat::Obj => parse_obj(name, text, opts),
        MeshFormat::StlAscii => parse_stl_ascii(name, text),
        MeshFormat::StlBinary => unreachable!(),
    }
}

fn number<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, MeshError> {
    let tok = tok.ok_or_else(|| parse_error(Position::Line(line), format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_error(Position::Line(line), format!("invalid {what} {tok:?}")))
}

fn point(toks: &mut dyn Iterator<Item = &str>, line: usize) -> Result<Point3<f64>, MeshError> {
    let p = Point3::new(
        number(toks.next(), line, "coordinate")?,
        number(toks.next(), line, "coordinate")?,
        number(toks.next(), line, "coordinate")?,
    );
    if !p.is_finite() {
        return Err(parse_error(Position::Line(line), "non-finite coordinate"));
    }
    Ok(p)
}

fn push_polygon(
    faces: &mut Vec<[usize; 3]>,
    corners: &[usize],
    line: usize,
    opts: LoadOptions,
) -> Result<(), MeshError> {
    match corners.len() {
        3 => faces.push([corners[0], corners[1], corners[2]]),
        n if n > 3 && opts.triangulate => {
            for k in 1..n - 1 {
                faces.push([corners[0], corners[k], corners[k + 1]]);
            }
        }
        n if n > 3 => {
            return Err(parse_error(
                Position::Line(line),
                format!("face with {n} corners (triangulation disabled)"),
            ))
        }
        n => {
            return Err(parse_error(
                Position::Line(line),
                format!("face with {n} corners"),
            ))
        }
    }
    Ok(())
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_off(name: &str, text: &str, opts: LoadOptions) -> Result<Mesh, MeshError> {
    let mut lines = content_lines(text);
    let (n, header) = lines
        .next()
        .ok_or_else(|| parse_error(Position::Line(1), "empty file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("OFF") {
        return Err(parse_error(Position::Line(n), "missing OFF header"));
    }
    // the counts may follow the keyword on the same line
    let counts: Vec<&str> = toks.collect();
    let (n, counts) = if counts.is_empty() {
        let (n, l) = lines
            .next()
            .ok_or_else(|| parse_error(Position::Line(n), "missing counts"))?;
        (n, l.split_whitespace().collect())
    } else {
        (n, counts)
    };
    let mut counts = counts.into_iter();
    let nv: usize = number(counts.next(), n, "vertex count")?;
    let nf: usize = number(counts.next(), n, "face count")?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines
            .next()
            .ok_or_else(|| parse_error(Position::Line(n), "unexpected end of vertex list"))?;
        vertices.push(point(&mut l.split_whitespace(), n)?);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, l) = lines
            .next()
            .ok_or_else(|| parse_error(Position::Line(n), "unexpected end of face list"))?;
        let mut toks = l.split_whitespace();
        let k: usize = number(toks.next(), n, "corner count")?;
        let corners = (0..k)
            .map(|_| {
                let i: usize = number(toks.next(), n, "vertex index")?;
                if i >= nv {
                    return Err(parse_error(
                        Position::Line(n),
                        format!("vertex index {i} out of range"),
                    ));
                }
                Ok(i)
            })
            .collect::<Result<Vec<_>, _>>()?;
        push_polygon(&mut faces, &corners, n, opts)?;
    }
    Ok(Mesh::new(name, vertices, faces))
}

fn parse_obj(name: &str, text: &str, opts: LoadOptions) -> Result<Mesh, MeshError> {
    let mut vertices = Vec::new();
    let mut polygons = Vec::new();
    for (n, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("v") => vertices.push(point(&mut toks, n)?),
            Some("f") => {
                let corners = toks
                    .map(|t| {
                        let idx: i64 = number(t.split('/').next(), n, "vertex index")?;
                        // 1-based, negative values count back from the latest vertex
                        let resolved = if idx < 0 {
                            vertices.len() as i64 + idx
                        } else {
                            idx - 1
                        };
                        if resolved < 0 || resolved >= vertices.len() as i64 {
                            return Err(parse_error(
                                Position::Line(n),
                                format!("vertex index {idx} out of range"),
                            ));
                        }
                        Ok(resolved as usize)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                polygons.push((n, corners));
            }
            _ => {}
        }
    }
    let mut faces = Vec::with_capacity(polygons.len());
    for (n, corners) in polygons {
        push_polygon(&mut faces, &corners, n, opts)?;
    }
    Ok(Mesh::new(name, vertices, faces))
}

#[derive(Default)]
struct Welder {
    index: HashMap<[u64; 3], usize>,
    vertices: Vec<Point3<f64>>,
}

impl Welder {
    fn insert(&mut self, p: Point3<f64>) -> usize {
        let key = [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()];
        *self.index.entry(key).or_insert_with(|| {
            self.vertices.push(p);
            self.vertices.len() - 1
        })
    }
}

fn parse_stl_ascii(name: &str, text: &str) -> Result<Mesh, MeshError> {
    let mut welder = Welder::default();
    let mut faces = Vec::new();
    let mut corners = Vec::with_capacity(3);
    let mut last = 0;
    for (n, l) in content_lines(text) {
        last = n;
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("vertex") => {
                if corners.len() == 3 {
                    return Err(parse_error(
                        Position::Line(n),
                        "more than three vertices in facet",
                    ));
                }
                corners.push(welder.insert(point(&mut toks, n)?));
            }
            Some("endloop") => {
                if corners.len() != 3 {
                    return Err(parse_error(
                        Position::Line(n),
                        format!("facet with {} vertices", corners.len()),
                    ));
                }
                faces.push([corners[0], corners[1], corners[2]]);
                corners.clear();
            }
            Some("solid" | "facet" | "outer" | "endfacet" | "endsolid") => {}
            Some(t) => {
                return Err(parse_error(
                    Position::Line(n),
                    format!("unexpected keyword {t:?}"),
                ))
            }
            None => {}
        }
    }
    if !corners.is_empty() {
        return Err(parse_error(Position::Line(last), "unterminated facet"));
    }
    Ok(Mesh::new(name, welder.vertices, faces))
}

fn parse_stl_binary(name: &str, bytes: &[u8]) -> Result<Mesh, MeshError> {
    if bytes.len() < 84 {
        return Err(parse_error(Position::Byte(bytes.len()), "truncated header"));
    }
    let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let expected = 84 + 50 * n;
    if bytes.len() < expected {
        return Err(parse_error(
            Position::Byte(bytes.len()),
            format!("truncated: {n} facets need {expected} bytes"),
        ));
    }
    let mut welder = Welder::default();
    let mut faces = Vec::with_capacity(n);
    for f in 0..n {
        let base = 84 + 50 * f;
        let float = |k: usize| {
            let at = base + 12 + 4 * k;
            f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as f64
        };
        let mut tri = [0; 3];
        for (c, slot) in tri.iter_mut().enumerate() {
            let p = Point3::new(float(3 * c), float(3 * c + 1), float(3 * c + 2));
            if !p.is_finite() {
                return Err(parse_error(
                    Position::Byte(base + 12 + 12 * c),
                    "non-finite coordinate",
                ));
            }
            *slot = welder.insert(p);
        }
        faces.push(tri);
    }
    Ok(Mesh::new(name, welder.vertices, faces))
}

/// Binary STL bytes for a mesh. Coordinates are narrowed to `f32`.
pub fn to_stl_binary(mesh: &Mesh) -> Vec<u8> {
    let mut out = vec![0u8; 80];
    out.extend((mesh.faces.len() as u32).to_le_bytes());
    for f in &mesh.faces {
        out.extend([0u8; 12]);
        for &v in f {
            let p = mesh.vertices[v];
            for c in [p.x, p.y, p.z] {
                out.extend((c as f32).to_le_bytes());
            }
        }
        out.extend([0u8; 2]);
    }
    out
}
