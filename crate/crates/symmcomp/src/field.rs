//! Vertex-sampled piecewise-linear scalar fields on a [`TriMesh`].

use crate::error::Error;
use crate::mesh::TriMesh;
use crate::quad::Pt;
use crate::Result;
use std::fmt::Write as _;

/// P1 field: one value per mesh vertex, linear on each triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(mesh: &TriMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.vertices().len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values for {} vertices",
                values.len(),
                mesh.vertices().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("field contains non-finite values".into()));
        }
        Ok(Self { values })
    }

    /// Interpolate a function of coordinates at the mesh vertices.
    pub fn from_fn(mesh: &TriMesh, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = mesh.vertices().iter().map(|p| f(p[0], p[1])).collect();
        Self::new(mesh, values)
    }

    pub fn constant(mesh: &TriMesh, c: f64) -> Self {
        Self {
            values: vec![c; mesh.vertices().len()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::MAX, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Values at the three corners of triangle `k`.
    pub fn tri_values(&self, mesh: &TriMesh, k: usize) -> [f64; 3] {
        let t = mesh.triangles()[k];
        [self.values[t[0]], self.values[t[1]], self.values[t[2]]]
    }

    /// Evaluate inside triangle `k` at barycentric coordinates.
    pub fn eval_bary(&self, mesh: &TriMesh, k: usize, l: [f64; 3]) -> f64 {
        let v = self.tri_values(mesh, k);
        l[0] * v[0] + l[1] * v[1] + l[2] * v[2]
    }

    /// Evaluate at a point of triangle `k` by inverting the affine map.
    pub fn eval_in_tri(&self, mesh: &TriMesh, k: usize, p: Pt) -> f64 {
        let (a, b, c) = mesh.tri_coords(k);
        let area = crate::quad::signed_area(a, b, c);
        let l0 = crate::quad::signed_area(p, b, c) / area;
        let l1 = crate::quad::signed_area(a, p, c) / area;
        self.eval_bary(mesh, k, [l0, l1, 1.0 - l0 - l1])
    }

    /// CSV serialization: `vertex,x,y,value`.
    pub fn to_csv(&self, mesh: &TriMesh) -> String {
        let mut s = String::from("vertex,x,y,value\n");
        for (i, (p, v)) in mesh.vertices().iter().zip(&self.values).enumerate() {
            let _ = writeln!(s, "{},{},{},{}", i, p[0], p[1], v);
        }
        s
    }

    /// Companion `.field` text format: `symmfield v1 <nv>` then one value per line.
    pub fn to_field_text(&self) -> String {
        let mut s = format!("symmfield v1 {}\n", self.values.len());
        for v in &self.values {
            let _ = writeln!(s, "{v}");
        }
        s
    }

    pub fn parse_field_text(mesh: &TriMesh, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("missing field header".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("symmfield") || it.next() != Some("v1") {
            return Err(Error::InvalidInput("bad field header".into()));
        }
        let n: usize = it
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::InvalidInput("bad field header count".into()))?;
        let values: Vec<f64> = lines
            .take(n)
            .map(|l| l.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad field value: {e}")))?;
        if values.len() != n {
            return Err(Error::InvalidInput("truncated field file".into()));
        }
        ScalarField::new(mesh, values)
    }
}
