//! Conforming planar triangulations: construction, validation, generators,
//! text serialization and uniform refinement.
//!
//! Invariants enforced at construction: positively oriented triangles, a
//! watertight boundary (every boundary vertex has exactly two incident
//! boundary edges), and `0 ∉ ∂Ω` within `τ_geom = 1e-12 · diameter`.

use crate::error::Error;
use crate::quad::{self, Pt};
use crate::tol;
use crate::Result;
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    /// Vertex pair, oriented so the domain lies on the left.
    pub v: [usize; 2],
    pub marker: i32,
}

/// Immutable conforming triangulation of a planar domain.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<Pt>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    diameter: f64,
    max_edge: f64,
}

impl TriMesh {
    /// Build and validate a mesh from raw vertices and triangles. Boundary
    /// edges are derived from the triangulation; `markers` optionally
    /// assigns a marker per derived edge given its endpoints.
    pub fn new(
        vertices: Vec<Pt>,
        triangles: Vec<[usize; 3]>,
        markers: Option<&dyn Fn(Pt, Pt) -> i32>,
    ) -> Result<Self> {
        if vertices.is_empty() || triangles.is_empty() {
            return Err(Error::InvalidMesh("empty vertex or triangle list".into()));
        }
        let nv = vertices.len();
        let mut triangles = triangles;
        for t in triangles.iter_mut() {
            if t[0] >= nv || t[1] >= nv || t[2] >= nv {
                return Err(Error::InvalidMesh(format!("vertex index out of range in {t:?}")));
            }
            let area = quad::signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if area == 0.0 {
                return Err(Error::InvalidMesh(format!("degenerate triangle {t:?}")));
            }
            if area < 0.0 {
                t.swap(1, 2);
            }
        }

        // Undirected edge counts; boundary edges appear exactly once.
        let mut counts: HashMap<(usize, usize), (usize, (usize, usize))> = HashMap::new();
        for t in &triangles {
            for (i, j) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = (i.min(j), i.max(j));
                let e = counts.entry(key).or_insert((0, (i, j)));
                e.0 += 1;
                if e.0 > 2 {
                    return Err(Error::InvalidMesh(format!(
                        "edge {key:?} shared by more than two triangles"
                    )));
                }
            }
        }
        let mut boundary: Vec<BoundaryEdge> = counts
            .values()
            .filter(|(c, _)| *c == 1)
            .map(|&(_, (i, j))| BoundaryEdge {
                v: [i, j],
                marker: markers.map_or(0, |m| m(vertices[i], vertices[j])),
            })
            .collect();
        boundary.sort_by_key(|e| e.v);
        if boundary.is_empty() {
            return Err(Error::OpenBoundary);
        }
        // Watertight: every boundary vertex must be the head of exactly one
        // boundary edge and the tail of exactly one.
        let mut outdeg: HashMap<usize, i32> = HashMap::new();
        for e in &boundary {
            *outdeg.entry(e.v[0]).or_insert(0) += 1;
            *outdeg.entry(e.v[1]).or_insert(0) -= 1;
        }
        if outdeg.values().any(|&d| d != 0) {
            return Err(Error::OpenBoundary);
        }

        let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
        for v in &vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
        let diameter = quad::norm([hi[0] - lo[0], hi[1] - lo[1]]);
        let max_edge = triangles
            .iter()
            .flat_map(|t| {
                [
                    quad::norm(quad::sub(vertices[t[1]], vertices[t[0]])),
                    quad::norm(quad::sub(vertices[t[2]], vertices[t[1]])),
                    quad::norm(quad::sub(vertices[t[0]], vertices[t[2]])),
                ]
            })
            .fold(0.0f64, f64::max);

        let mesh = Self {
            vertices,
            triangles,
            boundary,
            diameter,
            max_edge,
        };
        let tau = tol::TAU_GEOM_REL * mesh.diameter;
        let d = mesh.boundary_origin_distance();
        if d < tau {
            return Err(Error::OriginOnBoundary { dist: d, tol: tau });
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Pt] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Longest edge in the mesh (the resolution h used by tolerance models).
    pub fn mesh_size(&self) -> f64 {
        self.max_edge
    }

    pub fn tri_coords(&self, k: usize) -> (Pt, Pt, Pt) {
        let t = self.triangles[k];
        (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])
    }

    pub fn edge_coords(&self, e: &BoundaryEdge) -> (Pt, Pt) {
        (self.vertices[e.v[0]], self.vertices[e.v[1]])
    }

    /// Minimal distance from the origin to the boundary polyline.
    pub fn boundary_origin_distance(&self) -> f64 {
        self.boundary
            .iter()
            .map(|e| quad::dist_origin_segment(self.vertices[e.v[0]], self.vertices[e.v[1]]))
            .fold(f64::MAX, f64::min)
    }

    /// Index of a triangle whose closure contains the origin, if any.
    pub fn origin_element(&self) -> Option<usize> {
        (0..self.triangles.len()).find(|&k| {
            let (a, b, c) = self.tri_coords(k);
            quad::dist_origin_triangle(a, b, c) == 0.0
        })
    }

    /// Lebesgue area (sum of triangle areas).
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| quad::signed_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]))
            .sum()
    }

    /// Locate the triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: Pt) -> Option<(usize, [f64; 3])> {
        for (k, t) in self.triangles.iter().enumerate() {
            let (a, b, c) = (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]);
            let area = quad::signed_area(a, b, c);
            let l0 = quad::signed_area(p, b, c) / area;
            let l1 = quad::signed_area(a, p, c) / area;
            let l2 = 1.0 - l0 - l1;
            let eps = -1e-12;
            if l0 >= eps && l1 >= eps && l2 >= eps {
                return Some((k, [l0, l1, l2]));
            }
        }
        None
    }

    /// Uniform midpoint refinement: every triangle splits into four.
    pub fn refined(&self) -> TriMesh {
        let mut verts = self.vertices.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |verts: &mut Vec<Pt>, i: usize, j: usize| -> usize {
            let key = (i.min(j), i.max(j));
            *midpoint.entry(key).or_insert_with(|| {
                let p = [
                    0.5 * (verts[i][0] + verts[j][0]),
                    0.5 * (verts[i][1] + verts[j][1]),
                ];
                verts.push(p);
                verts.len() - 1
            })
        };
        let mut tris = Vec::with_capacity(4 * self.triangles.len());
        for t in &self.triangles {
            let (m01, m12, m20) = (
                mid(&mut verts, t[0], t[1]),
                mid(&mut verts, t[1], t[2]),
                mid(&mut verts, t[2], t[0]),
            );
            tris.push([t[0], m01, m20]);
            tris.push([m01, t[1], m12]);
            tris.push([m20, m12, t[2]]);
            tris.push([m01, m12, m20]);
        }
        // Markers transfer through midpoint lookup on parent boundary edges.
        let mut marker_of: HashMap<(usize, usize), i32> = HashMap::new();
        for e in &self.boundary {
            let key = (e.v[0].min(e.v[1]), e.v[0].max(e.v[1]));
            if let Some(&m) = midpoint.get(&key) {
                marker_of.insert((e.v[0].min(m), e.v[0].max(m)), e.marker);
                marker_of.insert((e.v[1].min(m), e.v[1].max(m)), e.marker);
            }
        }
        let vclone = verts.clone();
        let index_of: HashMap<(u64, u64), usize> = vclone
            .iter()
            .enumerate()
            .map(|(i, p)| ((p[0].to_bits(), p[1].to_bits()), i))
            .collect();
        let markers = move |a: Pt, b: Pt| -> i32 {
            let ia = index_of[&(a[0].to_bits(), a[1].to_bits())];
            let ib = index_of[&(b[0].to_bits(), b[1].to_bits())];
            marker_of
                .get(&(ia.min(ib), ia.max(ib)))
                .copied()
                .unwrap_or(0)
        };
        TriMesh::new(verts, tris, Some(&markers)).expect("refinement preserves validity")
    }

    // ── text format ─────────────────────────────────────────────────

    /// Serialize in the `symmmesh v1` text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "symmmesh v1 {} {} {}",
            self.vertices.len(),
            self.triangles.len(),
            self.boundary.len()
        );
        for v in &self.vertices {
            let _ = writeln!(s, "{} {}", v[0], v[1]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        for e in &self.boundary {
            let _ = writeln!(s, "{} {} {}", e.v[0], e.v[1], e.marker);
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidMesh("missing header".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("symmmesh") || it.next() != Some("v1") {
            return Err(Error::InvalidMesh("bad header, expected `symmmesh v1`".into()));
        }
        let parse_usize = |s: Option<&str>| -> Result<usize> {
            s.and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::InvalidMesh("bad header counts".into()))
        };
        let nv = parse_usize(it.next())?;
        let nt = parse_usize(it.next())?;
        let nb = parse_usize(it.next())?;
        let mut vertices = Vec::with_capacity(nv);
        for k in 0..nv {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidMesh(format!("missing vertex line {k}")))?;
            let mut f = line.split_whitespace().map(|x| x.parse::<f64>());
            match (f.next(), f.next()) {
                (Some(Ok(x)), Some(Ok(y))) => vertices.push([x, y]),
                _ => return Err(Error::InvalidMesh(format!("bad vertex line {k}: `{line}`"))),
            }
        }
        let mut triangles = Vec::with_capacity(nt);
        for k in 0..nt {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidMesh(format!("missing triangle line {k}")))?;
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidMesh(format!("bad triangle line {k}: `{line}`")))?;
            if v.len() != 3 {
                return Err(Error::InvalidMesh(format!("bad triangle line {k}: `{line}`")));
            }
            triangles.push([v[0], v[1], v[2]]);
        }
        let mut given: HashMap<(usize, usize), i32> = HashMap::new();
        for k in 0..nb {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidMesh(format!("missing boundary line {k}")))?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::InvalidMesh(format!("bad boundary line {k}: `{line}`")));
            }
            let i: usize = parts[0]
                .parse()
                .map_err(|_| Error::InvalidMesh(format!("bad boundary line {k}")))?;
            let j: usize = parts[1]
                .parse()
                .map_err(|_| Error::InvalidMesh(format!("bad boundary line {k}")))?;
            let m: i32 = parts[2]
                .parse()
                .map_err(|_| Error::InvalidMesh(format!("bad boundary line {k}")))?;
            given.insert((i.min(j), i.max(j)), m);
        }
        let verts = vertices.clone();
        let index_of: HashMap<(u64, u64), usize> = verts
            .iter()
            .enumerate()
            .map(|(i, p)| ((p[0].to_bits(), p[1].to_bits()), i))
            .collect();
        let markers = move |a: Pt, b: Pt| -> i32 {
            let ia = index_of[&(a[0].to_bits(), a[1].to_bits())];
            let ib = index_of[&(b[0].to_bits(), b[1].to_bits())];
            given.get(&(ia.min(ib), ia.max(ib))).copied().unwrap_or(0)
        };
        TriMesh::new(vertices, triangles, Some(&markers))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_text(&text)
    }
}

// ── generators ──────────────────────────────────────────────────────

/// Shape specification for the built-in generators. `offset` translates
/// the canonical shape; `h` is the target edge length.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    /// Disk of radius `r`.
    Disk { r: f64, offset: Pt, h: f64 },
    /// Annulus with inner radius `r0` and outer radius `r1`.
    Annulus { r0: f64, r1: f64, offset: Pt, h: f64 },
    /// Square [-a, a]².
    Square { a: f64, offset: Pt, h: f64 },
    /// Rectangle [-a, a] × [-b, b].
    Rectangle { a: f64, b: f64, offset: Pt, h: f64 },
    /// Ellipse with semi-axes (a, b).
    Ellipse { a: f64, b: f64, offset: Pt, h: f64 },
    /// L-shape: [-a, a]² minus the open quadrant (0, a] × (0, a].
    LShape { a: f64, offset: Pt, h: f64 },
}

pub fn generate(spec: &ShapeSpec) -> Result<TriMesh> {
    match *spec {
        ShapeSpec::Disk { r, offset, h } => disk_mesh(r, offset, h),
        ShapeSpec::Annulus { r0, r1, offset, h } => annulus_mesh(r0, r1, offset, h),
        ShapeSpec::Square { a, offset, h } => grid_mesh(a, a, offset, h, None),
        ShapeSpec::Rectangle { a, b, offset, h } => grid_mesh(a, b, offset, h, None),
        ShapeSpec::Ellipse { a, b, offset, h } => ellipse_mesh(a, b, offset, h),
        ShapeSpec::LShape { a, offset, h } => {
            grid_mesh(a, a, offset, h, Some(&|cx: f64, cy: f64| cx > 0.0 && cy > 0.0))
        }
    }
}

fn shift(p: Pt, offset: Pt) -> Pt {
    [p[0] + offset[0], p[1] + offset[1]]
}

/// Spiderweb disk mesh: m concentric rings, ring j carrying 8j vertices
/// (the extra angular resolution keeps the inscribed-polygon measure
/// deficit below 1e-3 at h = 0.05 on the unit disk).
const RING_FACTOR: usize = 8;

fn disk_mesh(r: f64, offset: Pt, h: f64) -> Result<TriMesh> {
    if r <= 0.0 || h <= 0.0 {
        return Err(Error::InvalidInput("disk requires r > 0 and h > 0".into()));
    }
    let m = (r / h).round().max(1.0) as usize;
    let mut verts: Vec<Pt> = vec![shift([0.0, 0.0], offset)];
    let mut ring_start = vec![0usize; m + 1];
    for j in 1..=m {
        ring_start[j] = verts.len();
        let nj = RING_FACTOR * j;
        let rj = r * j as f64 / m as f64;
        for i in 0..nj {
            let th = 2.0 * std::f64::consts::PI * i as f64 / nj as f64;
            verts.push(shift([rj * th.cos(), rj * th.sin()], offset));
        }
    }
    let mut tris: Vec<[usize; 3]> = Vec::new();
    // center fan
    for i in 0..RING_FACTOR {
        tris.push([0, ring_start[1] + i, ring_start[1] + (i + 1) % RING_FACTOR]);
    }
    // bands
    for j in 2..=m {
        let (n1, n2) = (RING_FACTOR * (j - 1), RING_FACTOR * j);
        let (s1, s2) = (ring_start[j - 1], ring_start[j]);
        let mut i1 = 0usize;
        let mut i2 = 0usize;
        while i1 < n1 || i2 < n2 {
            let a1 = (i1 + 1) as f64 / n1 as f64;
            let a2 = (i2 + 1) as f64 / n2 as f64;
            if i1 < n1 && (i2 >= n2 || a1 <= a2) {
                tris.push([s1 + i1 % n1, s2 + i2 % n2, s1 + (i1 + 1) % n1]);
                i1 += 1;
            } else {
                tris.push([s1 + i1 % n1, s2 + i2 % n2, s2 + (i2 + 1) % n2]);
                i2 += 1;
            }
        }
    }
    TriMesh::new(verts, tris, None)
}

/// Structured annulus mesh with a fixed angular node count.
fn annulus_mesh(r0: f64, r1: f64, offset: Pt, h: f64) -> Result<TriMesh> {
    if !(0.0 < r0 && r0 < r1) || h <= 0.0 {
        return Err(Error::InvalidInput("annulus requires 0 < r0 < r1, h > 0".into()));
    }
    let m = ((r1 - r0) / h).round().max(1.0) as usize;
    let ntheta = ((2.0 * std::f64::consts::PI * r1) / h).round().max(8.0) as usize;
    let mut verts: Vec<Pt> = Vec::with_capacity((m + 1) * ntheta);
    for j in 0..=m {
        let rj = r0 + (r1 - r0) * j as f64 / m as f64;
        for i in 0..ntheta {
            let th = 2.0 * std::f64::consts::PI * i as f64 / ntheta as f64;
            verts.push(shift([rj * th.cos(), rj * th.sin()], offset));
        }
    }
    let mut tris = Vec::with_capacity(2 * m * ntheta);
    for j in 0..m {
        for i in 0..ntheta {
            let i1 = (i + 1) % ntheta;
            let (v00, v01, v10, v11) = (
                j * ntheta + i,
                j * ntheta + i1,
                (j + 1) * ntheta + i,
                (j + 1) * ntheta + i1,
            );
            tris.push([v00, v01, v11]);
            tris.push([v00, v11, v10]);
        }
    }
    let rmid = 0.5 * (r0 + r1);
    let markers = move |a: Pt, b: Pt| -> i32 {
        let p = [0.5 * (a[0] + b[0]) - offset[0], 0.5 * (a[1] + b[1]) - offset[1]];
        if quad::norm(p) < rmid {
            1
        } else {
            0
        }
    };
    TriMesh::new(verts, tris, Some(&markers))
}

/// Structured grid on [-a, a] × [-b, b] with alternating diagonals; `skip`
/// drops cells by their center in shape-local coordinates (for the L-shape).
fn grid_mesh(
    a: f64,
    b: f64,
    offset: Pt,
    h: f64,
    skip: Option<&dyn Fn(f64, f64) -> bool>,
) -> Result<TriMesh> {
    if a <= 0.0 || b <= 0.0 || h <= 0.0 {
        return Err(Error::InvalidInput("grid shapes require a, b, h > 0".into()));
    }
    let nx = (2.0 * a / h).round().max(2.0) as usize;
    let ny = (2.0 * b / h).round().max(2.0) as usize;
    // Even cell counts keep the origin a grid vertex for centered shapes.
    let nx = nx + nx % 2;
    let ny = ny + ny % 2;
    let mut verts = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = -a + 2.0 * a * i as f64 / nx as f64;
            let y = -b + 2.0 * b * j as f64 / ny as f64;
            verts.push(shift([x, y], offset));
        }
    }
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut tris = Vec::new();
    let mut used = vec![false; verts.len()];
    for j in 0..ny {
        for i in 0..nx {
            let cx = -a + 2.0 * a * (i as f64 + 0.5) / nx as f64;
            let cy = -b + 2.0 * b * (j as f64 + 0.5) / ny as f64;
            if skip.is_some_and(|s| s(cx, cy)) {
                continue;
            }
            let (v00, v10, v01, v11) = (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
            if (i + j) % 2 == 0 {
                tris.push([v00, v10, v11]);
                tris.push([v00, v11, v01]);
            } else {
                tris.push([v00, v10, v01]);
                tris.push([v10, v11, v01]);
            }
            for v in [v00, v10, v01, v11] {
                used[v] = true;
            }
        }
    }
    // Compact out unused vertices (the removed quadrant of the L-shape).
    let mut remap = vec![usize::MAX; verts.len()];
    let mut compact = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        if used[i] {
            remap[i] = compact.len();
            compact.push(*v);
        }
    }
    for t in tris.iter_mut() {
        for v in t.iter_mut() {
            *v = remap[*v];
        }
    }
    TriMesh::new(compact, tris, None)
}

/// Ellipse mesh: anisotropically scaled spiderweb disk.
fn ellipse_mesh(a: f64, b: f64, offset: Pt, h: f64) -> Result<TriMesh> {
    if a <= 0.0 || b <= 0.0 || h <= 0.0 {
        return Err(Error::InvalidInput("ellipse requires a, b, h > 0".into()));
    }
    let href = h / a.max(b);
    let disk = disk_mesh(1.0, [0.0, 0.0], href)?;
    let verts = disk
        .vertices
        .iter()
        .map(|p| shift([a * p[0], b * p[1]], offset))
        .collect();
    TriMesh::new(verts, disk.triangles, None)
}
