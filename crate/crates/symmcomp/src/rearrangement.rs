//! Weighted distribution functions, decreasing and weighted (radial)
//! rearrangements, weighted Lebesgue and Lorentz norms.
//!
//! Level-set measures are computed exactly per triangle by clipping the
//! P1 interpolant at the level line, so the distribution curve converges
//! at the FEM rate. Curves are piecewise linear between computed levels
//! and the generalized inverse uses the same rule with the inf convention
//! on plateaus.

use crate::error::Error;
use crate::field::ScalarField;
use crate::geometry;
use crate::mesh::TriMesh;
use crate::params::WeightParams;
use crate::quad::{self, Pt, GAUSS7};
use crate::Result;
use std::fmt::Write as _;

/// Interpolation rule tag for curves and profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Right-continuous step.
    Step,
    /// Piecewise linear between nodes.
    Linear,
}

// ── distribution curve ──────────────────────────────────────────────

/// The weighted distribution function t ↦ μ(t) as a monotone node table.
///
/// Nodes may repeat a `t` value to encode a vertical drop (plateau of the
/// source field). The final node must reach μ = 0.
#[derive(Debug, Clone)]
pub struct DistributionCurve {
    ts: Vec<f64>,
    mus: Vec<f64>,
    total_measure: f64,
    pub interp: Interpolation,
}

impl DistributionCurve {
    pub fn from_points(
        ts: Vec<f64>,
        mus: Vec<f64>,
        total_measure: f64,
        interp: Interpolation,
    ) -> Result<Self> {
        if ts.len() != mus.len() || ts.len() < 2 {
            return Err(Error::InvalidInput("curve needs matching node arrays, ≥ 2 nodes".into()));
        }
        if ts.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("curve levels must be nondecreasing".into()));
        }
        if mus.windows(2).any(|w| w[1] > w[0] + 1e-12 * total_measure.abs()) {
            return Err(Error::InvalidInput("distribution values must be nonincreasing".into()));
        }
        if mus[0] > total_measure * (1.0 + 1e-9) {
            return Err(Error::InvalidInput("μ(0) exceeds the total measure".into()));
        }
        if *mus.last().unwrap() != 0.0 {
            return Err(Error::InvalidInput("curve must reach μ = 0 at its last node".into()));
        }
        Ok(Self { ts, mus, total_measure, interp })
    }

    pub fn levels(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[f64] {
        &self.mus
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    /// ess sup |u|: the first level where μ vanishes.
    pub fn max_level(&self) -> f64 {
        let i = self.mus.iter().position(|&m| m == 0.0).unwrap_or(self.mus.len() - 1);
        self.ts[i]
    }

    /// Evaluate μ(t) (right-continuous).
    pub fn eval(&self, t: f64) -> f64 {
        if t < self.ts[0] {
            return self.mus[0];
        }
        if t >= *self.ts.last().unwrap() {
            return *self.mus.last().unwrap();
        }
        // rightmost node with ts[i] <= t
        let i = match self.ts.partition_point(|&x| x <= t) {
            0 => 0,
            k => k - 1,
        };
        match self.interp {
            Interpolation::Step => self.mus[i],
            Interpolation::Linear => {
                let (t0, t1) = (self.ts[i], self.ts[i + 1]);
                if t1 == t0 {
                    self.mus[i + 1]
                } else {
                    let w = (t - t0) / (t1 - t0);
                    self.mus[i] + w * (self.mus[i + 1] - self.mus[i])
                }
            }
        }
    }

    /// Cavalieri integral `q ∫ t^{q-1} μ(t) dt`, exact on each linear piece.
    pub fn cavalieri(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.ts.len() - 1 {
            let (t0, t1) = (self.ts[i], self.ts[i + 1]);
            if t1 <= t0 {
                continue;
            }
            let (m0, m1) = match self.interp {
                Interpolation::Step => (self.mus[i], self.mus[i]),
                Interpolation::Linear => (self.mus[i], self.mus[i + 1]),
            };
            let b = (m1 - m0) / (t1 - t0);
            let a = m0 - b * t0;
            acc += a * (t1.powf(q) - t0.powf(q))
                + b * q / (q + 1.0) * (t1.powf(q + 1.0) - t0.powf(q + 1.0));
        }
        acc
    }

    /// Weighted Lorentz quasi-norm
    /// `p^{1/q} (∫ t^{q-1} μ(t)^{q/p} dt)^{1/q}`, or `sup_t t^p μ(t)` for q = ∞.
    pub fn lorentz_norm(&self, p: f64, q: f64) -> Result<f64> {
        if p <= 0.0 || (q <= 0.0 && !q.is_infinite()) {
            return Err(Error::InvalidInput("Lorentz exponents must be positive".into()));
        }
        if q.is_infinite() {
            let mut best = 0.0f64;
            for i in 0..self.ts.len() - 1 {
                let (t0, t1) = (self.ts[i], self.ts[i + 1]);
                let (m0, m1) = (self.mus[i], self.mus[i + 1]);
                let b = if t1 == t0 { 0.0 } else { (m1 - m0) / (t1 - t0) };
                let a = m0 - b * t0;
                let g = |t: f64| t.powf(p) * (a + b * t);
                best = best.max(g(t0)).max(g(t1));
                if b != 0.0 {
                    let t_star = -p * a / ((p + 1.0) * b);
                    if t_star > t0 && t_star < t1 {
                        best = best.max(g(t_star));
                    }
                }
            }
            return Ok(best);
        }
        let mut acc = 0.0;
        for i in 0..self.ts.len() - 1 {
            let (t0, t1) = (self.ts[i], self.ts[i + 1]);
            if t1 <= t0 {
                continue;
            }
            let (m0, m1) = (self.mus[i], self.mus[i + 1]);
            let b = (m1 - m0) / (t1 - t0);
            let a = m0 - b * t0;
            let piece = |lo: f64, hi: f64| -> f64 {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let mut s = 0.0;
                for &(x, w) in &GAUSS7 {
                    let t = mid + half * x;
                    s += w * t.powf(q - 1.0) * (a + b * t).max(0.0).powf(q / p);
                }
                s * half
            };
            // fractional powers make the integrand's derivatives unbounded
            // where t = 0 (for q < 1) and where μ vanishes (for q < p):
            // grade dyadically into such ends
            let singular_left = t0 == 0.0 && q < 1.0;
            let singular_right = m1 == 0.0 && q < p && b != 0.0;
            let mid = 0.5 * (t0 + t1);
            if singular_left {
                let mut hi = mid;
                for _ in 0..48 {
                    let lo = t0 + 0.5 * (hi - t0);
                    acc += piece(lo, hi);
                    hi = lo;
                }
                // remainder: exact power integral against μ frozen near t0
                let rem = hi - t0;
                acc += (a + b * (t0 + 0.5 * rem)).max(0.0).powf(q / p) * rem.powf(q) / q;
            } else {
                acc += piece(t0, mid);
            }
            if singular_right {
                let mut lo = mid;
                for _ in 0..48 {
                    let hi = t1 - 0.5 * (t1 - lo);
                    acc += piece(lo, hi);
                    lo = hi;
                }
                // remainder: exact power integral of (a+bt)^{q/p} against
                // t^{q-1} frozen near t1
                let rem = t1 - lo;
                let qp = q / p;
                acc += (t1 - 0.5 * rem).powf(q - 1.0) * (-b * rem).max(0.0).powf(qp) * rem
                    / (qp + 1.0);
            } else {
                acc += piece(mid, t1);
            }
        }
        if !acc.is_finite() {
            return Err(Error::NotInLorentzSpace);
        }
        Ok(p.powf(1.0 / q) * acc.powf(1.0 / q))
    }

    /// CSV rows `t,mu`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,mu\n");
        for (t, m) in self.ts.iter().zip(&self.mus) {
            let _ = writeln!(s, "{t},{m}");
        }
        s
    }
}

// ── level-set clipping ──────────────────────────────────────────────

/// Polygon {u > t} inside a triangle with P1 values `v` (convex, ≤ 4 pts).
fn clip_superlevel(p: [Pt; 3], v: [f64; 3], t: f64) -> Vec<Pt> {
    let mut out: Vec<Pt> = Vec::with_capacity(4);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (vi, vj) = (v[i], v[j]);
        if vi > t {
            out.push(p[i]);
        }
        if (vi > t) != (vj > t) {
            let w = (t - vi) / (vj - vi);
            out.push([
                p[i][0] + w * (p[j][0] - p[i][0]),
                p[i][1] + w * (p[j][1] - p[i][1]),
            ]);
        }
    }
    out
}

/// ∫ over {|field| > t} ∩ triangle of `|x|^ℓ g dx` (both signs of the field).
fn clipped_integral(
    p: [Pt; 3],
    v: [f64; 3],
    t: f64,
    ell: f64,
    g: &mut impl FnMut(Pt) -> f64,
) -> f64 {
    let mut acc = 0.0;
    let poly = clip_superlevel(p, v, t);
    if poly.len() >= 3 {
        acc += quad::convex_polygon_quad_weighted(&poly, ell, &mut *g);
    }
    let neg = [-v[0], -v[1], -v[2]];
    let poly = clip_superlevel(p, neg, t);
    if poly.len() >= 3 {
        acc += quad::convex_polygon_quad_weighted(&poly, ell, &mut *g);
    }
    acc
}

// ── distribution function of a P1 field ─────────────────────────────

/// Graded level grid on [0, t_max]: smoothstep clustering toward both ends,
/// where μ varies fastest.
pub fn graded_levels(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            let x = j as f64 / n as f64;
            t_max * (3.0 * x * x - 2.0 * x * x * x)
        })
        .collect()
}

/// Weighted distribution function `μ(t) = |{ |field| > t }|_ℓ` of a P1
/// field, exact per triangle via polygon clipping at each grid level.
pub fn distribution_function(
    mesh: &TriMesh,
    field: &ScalarField,
    params: &WeightParams,
    n_levels: usize,
) -> Result<DistributionCurve> {
    let t_max = field.max_abs();
    if t_max == 0.0 {
        return DistributionCurve::from_points(
            vec![0.0, 1.0],
            vec![0.0, 0.0],
            geometry::weighted_measure(mesh, params.ell)?,
            Interpolation::Linear,
        );
    }
    distribution_function_grid(mesh, field, params, &graded_levels(t_max, n_levels.max(2)))
}

/// Same as [`distribution_function`] on a caller-supplied level grid
/// (must be strictly increasing from 0 and cover [0, max |field|]).
pub fn distribution_function_grid(
    mesh: &TriMesh,
    field: &ScalarField,
    params: &WeightParams,
    levels: &[f64],
) -> Result<DistributionCurve> {
    if levels.len() < 2 || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("level grid must be strictly increasing".into()));
    }
    let t_max = field.max_abs();
    if levels[0] != 0.0 || *levels.last().unwrap() < t_max * (1.0 - 1e-14) {
        return Err(Error::InvalidInput("level grid must cover [0, max|field|]".into()));
    }
    let ell = params.ell;
    let measures = geometry::triangle_measures(mesh, ell)?;
    let total: f64 = measures.iter().sum();
    let n = levels.len();
    // full[j] holds difference-array contributions of whole triangles
    let mut full = vec![0.0f64; n + 1];
    let mut mus = vec![0.0f64; n];
    for (k, m_t) in measures.iter().enumerate() {
        let vals = field.tri_values(mesh, k);
        let avals = [vals[0].abs(), vals[1].abs(), vals[2].abs()];
        let same_sign = vals.iter().all(|&v| v >= 0.0) || vals.iter().all(|&v| v <= 0.0);
        let vmin = if same_sign {
            avals[0].min(avals[1]).min(avals[2])
        } else {
            0.0
        };
        let vmax = avals[0].max(avals[1]).max(avals[2]);
        let (p0, p1, p2) = mesh.tri_coords(k);
        // levels strictly below vmin: the whole triangle is in the set
        let j_lo = levels.partition_point(|&t| t < vmin);
        full[0] += m_t;
        full[j_lo] -= m_t;
        // levels in [vmin, vmax): exact clipping
        let j_hi = levels.partition_point(|&t| t < vmax);
        for j in j_lo..j_hi {
            mus[j] += clipped_integral([p0, p1, p2], vals, levels[j], ell, &mut |_| 1.0);
        }
    }
    let mut run = 0.0;
    for j in 0..n {
        run += full[j];
        mus[j] += run;
    }
    // quadrature round-off can break monotonicity at the 1e-15 level
    for j in 1..n {
        mus[j] = mus[j].min(mus[j - 1]);
    }
    *mus.last_mut().unwrap() = 0.0;
    DistributionCurve::from_points(levels.to_vec(), mus, total, Interpolation::Linear)
}

// ── decreasing rearrangement ────────────────────────────────────────

/// The decreasing rearrangement u*(s) as a node table on [0, |Ω|_ℓ];
/// exact generalized inverse of the distribution curve (inf convention).
#[derive(Debug, Clone)]
pub struct DecreasingProfile {
    ss: Vec<f64>,
    us: Vec<f64>,
    pub interp: Interpolation,
}

impl DecreasingProfile {
    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.ss, &self.us)
    }

    pub fn domain_end(&self) -> f64 {
        *self.ss.last().unwrap()
    }

    /// ess sup of the source field.
    pub fn sup(&self) -> f64 {
        self.us[0]
    }

    /// Evaluate u*(s), right-continuous and nonincreasing.
    pub fn eval(&self, s: f64) -> f64 {
        if s <= self.ss[0] {
            return self.us[0];
        }
        if s >= *self.ss.last().unwrap() {
            return *self.us.last().unwrap();
        }
        let mut i = match self.ss.partition_point(|&x| x <= s) {
            0 => 0,
            k => k - 1,
        };
        // at a duplicated s (vertical drop) take the later = smaller value
        while i + 1 < self.ss.len() && self.ss[i + 1] == self.ss[i] {
            i += 1;
        }
        if i + 1 >= self.ss.len() {
            return *self.us.last().unwrap();
        }
        match self.interp {
            Interpolation::Step => self.us[i],
            Interpolation::Linear => {
                let (s0, s1) = (self.ss[i], self.ss[i + 1]);
                let w = (s - s0) / (s1 - s0);
                self.us[i] + w * (self.us[i + 1] - self.us[i])
            }
        }
    }

    /// `∫_0^{s_up} u*(s)^q ds`, closed form on each linear piece.
    pub fn integral_power(&self, q: f64, s_up: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.ss.len() - 1 {
            let (s0, s1) = (self.ss[i], self.ss[i + 1]);
            if s0 >= s_up {
                break;
            }
            let cut = s1.min(s_up);
            if cut <= s0 {
                continue;
            }
            let (u0, u1) = (self.us[i], self.us[i + 1]);
            let b = if s1 == s0 { 0.0 } else { (u1 - u0) / (s1 - s0) };
            let ua = u0;
            let ub = u0 + b * (cut - s0);
            if b == 0.0 || ua == ub {
                acc += ua.max(0.0).powf(q) * (cut - s0);
            } else {
                acc += (ub.max(0.0).powf(q + 1.0) - ua.max(0.0).powf(q + 1.0)) / (b * (q + 1.0));
            }
        }
        acc
    }

    /// L^q norm on (0, |Ω|_ℓ) with plain Lebesgue measure.
    pub fn lp_norm(&self, q: f64) -> f64 {
        self.integral_power(q, self.domain_end()).powf(1.0 / q)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("s,u_star\n");
        for (a, b) in self.ss.iter().zip(&self.us) {
            let _ = writeln!(s, "{a},{b}");
        }
        s
    }
}

/// Exact generalized inverse of the distribution curve:
/// `u*(s) = inf { t : μ(t) ≤ s }`.
pub fn decreasing_rearrangement(curve: &DistributionCurve) -> DecreasingProfile {
    let (ts, mus) = (&curve.ts, &curve.mus);
    let mut ss: Vec<f64> = Vec::with_capacity(ts.len() + 1);
    let mut us: Vec<f64> = Vec::with_capacity(ts.len() + 1);
    // Walk from the top level down; s runs from 0 upward. Plateaus of μ
    // (equal consecutive values) become vertical drops of u*, where the
    // inf convention keeps the smallest level.
    let k = ts.len() - 1;
    ss.push(mus[k]);
    us.push(ts[k]);
    for i in (0..k).rev() {
        let n = ss.len();
        if mus[i] == mus[i + 1] && n >= 2 && ss[n - 1] == mus[i] && ss[n - 2] == mus[i] {
            // extend an existing vertical drop down to the smaller level
            us[n - 1] = us[n - 1].min(ts[i]);
        } else {
            ss.push(mus[i]);
            us.push(ts[i]);
        }
    }
    // leading duplicates collapse: u*(s₀) takes the bottom of the drop
    while ss.len() >= 2 && ss[0] == ss[1] {
        ss.remove(0);
        us.remove(0);
    }
    if curve.total_measure > *ss.last().unwrap() {
        ss.push(curve.total_measure);
        us.push(0.0);
    }
    DecreasingProfile {
        ss,
        us,
        interp: curve.interp,
    }
}

// ── radial (weighted) rearrangement ─────────────────────────────────

/// Function of the radius on the symmetrized ball [0, r♯].
#[derive(Debug, Clone)]
pub struct RadialProfile {
    rs: Vec<f64>,
    vs: Vec<f64>,
    pub params: WeightParams,
}

impl RadialProfile {
    pub fn new(rs: Vec<f64>, vs: Vec<f64>, params: WeightParams) -> Result<Self> {
        if rs.len() != vs.len() || rs.len() < 2 {
            return Err(Error::InvalidInput("radial profile needs matching arrays".into()));
        }
        if rs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("radial grid must be nondecreasing".into()));
        }
        Ok(Self { rs, vs, params })
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.rs, &self.vs)
    }

    pub fn max_radius(&self) -> f64 {
        *self.rs.last().unwrap()
    }

    pub fn boundary_value(&self) -> f64 {
        *self.vs.last().unwrap()
    }

    pub fn max_value(&self) -> f64 {
        self.vs.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.vs.iter().cloned().fold(f64::MAX, f64::min)
    }

    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.vs.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    /// Piecewise-linear evaluation in r (clamped at the ends).
    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.rs[0] {
            return self.vs[0];
        }
        if r >= *self.rs.last().unwrap() {
            return *self.vs.last().unwrap();
        }
        let mut i = match self.rs.partition_point(|&x| x <= r) {
            0 => 0,
            k => k - 1,
        };
        while i + 1 < self.rs.len() && self.rs[i + 1] == self.rs[i] {
            i += 1;
        }
        let (r0, r1) = (self.rs[i], self.rs[i + 1]);
        let w = (r - r0) / (r1 - r0);
        self.vs[i] + w * (self.vs[i + 1] - self.vs[i])
    }

    /// `(∫ |v|^q |x|^ℓ dx)^{1/q}` over the ball, by per-cell quadrature in
    /// the measure variable σ = nω_n r^{n+ℓ}/(n+ℓ) (constant Jacobian).
    pub fn lp_norm(&self, q: f64) -> f64 {
        let p = &self.params;
        let mut acc = 0.0;
        for i in 0..self.rs.len() - 1 {
            let (r0, r1) = (self.rs[i], self.rs[i + 1]);
            if r1 <= r0 {
                continue;
            }
            let (s0, s1) = (p.measure_of_radius(r0), p.measure_of_radius(r1));
            let (v0, v1) = (self.vs[i], self.vs[i + 1]);
            let cell = |a: f64, b: f64, acc: &mut f64| {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (b + a);
                for &(x, w) in &GAUSS7 {
                    let s = mid + half * x;
                    let r = p.radius_of_measure(s);
                    let v = v0 + (v1 - v0) * (r - r0) / (r1 - r0);
                    *acc += w * half * v.abs().powf(q);
                }
            };
            if i == 0 && r0 == 0.0 {
                // r(σ) has a mildly singular derivative at σ = 0
                let mut hi = s1;
                for _ in 0..24 {
                    let lo = 0.5 * hi;
                    cell(lo, hi, &mut acc);
                    hi = lo;
                }
                acc += self.vs[0].abs().powf(q) * hi;
            } else {
                cell(s0, s1, &mut acc);
            }
        }
        acc.powf(1.0 / q)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (a, b) in self.rs.iter().zip(&self.vs) {
            let _ = writeln!(s, "{a},{b}");
        }
        s
    }
}

/// Weighted rearrangement `u♯(x) = u*( nω_n/(ℓ+n) |x|^{ℓ+n} )` as a radial
/// profile; the node radii are the exact preimages of the u* node measures.
pub fn weighted_rearrangement(profile: &DecreasingProfile, params: &WeightParams) -> RadialProfile {
    let (ss, us) = profile.nodes();
    let rs: Vec<f64> = ss.iter().map(|&s| params.radius_of_measure(s.max(0.0))).collect();
    RadialProfile {
        rs,
        vs: us.to_vec(),
        params: *params,
    }
}

// ── weighted Lp norm of mesh fields ─────────────────────────────────

fn p1_eval(abc: (Pt, Pt, Pt), v: [f64; 3], p: Pt) -> f64 {
    let (a, b, c) = abc;
    let area = quad::signed_area(a, b, c);
    let l0 = quad::signed_area(p, b, c) / area;
    let l1 = quad::signed_area(a, p, c) / area;
    l0 * v[0] + l1 * v[1] + (1.0 - l0 - l1) * v[2]
}

/// `(∫_Ω |u|^q |x|^ℓ dx)^{1/q}` for a P1 field. Triangles where the field
/// changes sign are split along the zero line so |u|^q stays smooth on
/// each quadrature region.
pub fn weighted_lp_norm(
    mesh: &TriMesh,
    field: &ScalarField,
    params: &WeightParams,
    q: f64,
) -> Result<f64> {
    if q < 1.0 {
        return Err(Error::InvalidInput(format!("norm exponent q = {q} must be ≥ 1")));
    }
    let ell = params.ell;
    let mut acc = 0.0;
    for k in 0..mesh.triangles().len() {
        let (a, b, c) = mesh.tri_coords(k);
        let v = field.tri_values(mesh, k);
        let vmin = v[0].min(v[1]).min(v[2]);
        let vmax = v[0].max(v[1]).max(v[2]);
        if vmin >= 0.0 || vmax <= 0.0 {
            acc += quad::tri_quad_weighted(a, b, c, ell, |p| {
                p1_eval((a, b, c), v, p).abs().powf(q)
            });
        } else {
            for sign in [1.0f64, -1.0] {
                let sv = [sign * v[0], sign * v[1], sign * v[2]];
                let poly = clip_superlevel([a, b, c], sv, 0.0);
                if poly.len() >= 3 {
                    acc += quad::convex_polygon_quad_weighted(&poly, ell, |p| {
                        p1_eval((a, b, c), v, p).abs().powf(q)
                    });
                }
            }
        }
    }
    Ok(acc.powf(1.0 / q))
}

// ── Hardy-Littlewood ────────────────────────────────────────────────

/// Subregion over which the Hardy-Littlewood inequality is tested.
#[derive(Debug, Clone)]
pub enum Subregion {
    /// Union of whole mesh triangles.
    Triangles(Vec<usize>),
    /// Super-level set { field > t }.
    SuperLevel(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct HardyLittlewoodReport {
    /// ∫_E u |x|^ℓ dx.
    pub lhs: f64,
    /// ∫_0^{|E|_ℓ} u*(s) ds.
    pub rhs: f64,
    pub subset_measure: f64,
    /// rhs - lhs (≥ 0 up to quadrature tolerance).
    pub margin: f64,
}

/// Check `∫_E u |x|^ℓ dx ≤ ∫_0^{|E|_ℓ} u*(s) ds` for a nonnegative field.
pub fn hardy_littlewood_check(
    mesh: &TriMesh,
    field: &ScalarField,
    subset: &Subregion,
    params: &WeightParams,
    n_levels: usize,
) -> Result<HardyLittlewoodReport> {
    if field.min() < 0.0 {
        return Err(Error::InvalidInput("Hardy-Littlewood requires a nonnegative field".into()));
    }
    let ell = params.ell;
    let (mut lhs, mut measure_e) = (0.0, 0.0);
    match subset {
        Subregion::Triangles(idx) => {
            for &k in idx {
                let (a, b, c) = mesh.tri_coords(k);
                let v = field.tri_values(mesh, k);
                lhs += quad::tri_quad_weighted(a, b, c, ell, |p| p1_eval((a, b, c), v, p));
                measure_e += quad::tri_quad_weighted(a, b, c, ell, |_| 1.0);
            }
        }
        Subregion::SuperLevel(t) => {
            for k in 0..mesh.triangles().len() {
                let (a, b, c) = mesh.tri_coords(k);
                let v = field.tri_values(mesh, k);
                lhs += clipped_integral([a, b, c], v, *t, ell, &mut |p| p1_eval((a, b, c), v, p));
                measure_e += clipped_integral([a, b, c], v, *t, ell, &mut |_| 1.0);
            }
        }
    }
    let curve = distribution_function(mesh, field, params, n_levels)?;
    let star = decreasing_rearrangement(&curve);
    let rhs = star.integral_power(1.0, measure_e);
    Ok(HardyLittlewoodReport {
        lhs,
        rhs,
        subset_measure: measure_e,
        margin: rhs - lhs,
    })
}
