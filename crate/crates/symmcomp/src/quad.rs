//! Quadrature rules: plain Gauss rules on triangles and edges, and graded
//! singular rules for integrands carrying the radial weight `|x|^ℓ`.
//!
//! The weight is integrable but unbounded near the origin, so elements
//! whose closure meets the origin are decomposed into apex triangles and
//! integrated with a geometrically graded (ratio 0.5) tensor rule in polar
//! scaling; elements merely near the origin go through the same signed
//! apex decomposition, which keeps the relative error at the [`crate::tol::QUAD_REL`]
//! level regardless of how close the origin is.

pub type Pt = [f64; 2];

#[inline]
pub fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn norm(a: Pt) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn cross(a: Pt, b: Pt) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn dot(a: Pt, b: Pt) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Signed area of the triangle (a, b, c); positive when counterclockwise.
#[inline]
pub fn signed_area(a: Pt, b: Pt, c: Pt) -> f64 {
    0.5 * cross(sub(b, a), sub(c, a))
}

/// Distance from the origin to the segment [a, b].
pub fn dist_origin_segment(a: Pt, b: Pt) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return norm(a);
    }
    let t = (-dot(a, ab) / len2).clamp(0.0, 1.0);
    norm([a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// Distance from the origin to the closed triangle (0 if inside).
pub fn dist_origin_triangle(a: Pt, b: Pt, c: Pt) -> f64 {
    let s1 = signed_area(a, b, [0.0, 0.0]);
    let s2 = signed_area(b, c, [0.0, 0.0]);
    let s3 = signed_area(c, a, [0.0, 0.0]);
    if (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0) {
        return 0.0;
    }
    dist_origin_segment(a, b)
        .min(dist_origin_segment(b, c))
        .min(dist_origin_segment(c, a))
}

// ── Gauss-Legendre rules on [-1, 1] ─────────────────────────────────

pub const GAUSS5: [(f64, f64); 5] = [
    (-0.9061798459386640, 0.2369268850561891),
    (-0.5384693101056831, 0.4786286704993665),
    (0.0, 0.5688888888888889),
    (0.5384693101056831, 0.4786286704993665),
    (0.9061798459386640, 0.2369268850561891),
];

pub const GAUSS7: [(f64, f64); 7] = [
    (-0.9491079123427585, 0.1294849661688697),
    (-0.7415311855993945, 0.2797053914892766),
    (-0.4058451513773972, 0.3818300505051189),
    (0.0, 0.4179591836734694),
    (0.4058451513773972, 0.3818300505051189),
    (0.7415311855993945, 0.2797053914892766),
    (0.9491079123427585, 0.1294849661688697),
];

// Radon's degree-5 rule: centroid + two symmetric orbits.
const TRI7: [(f64, f64, f64); 7] = [
    (1.0 / 3.0, 1.0 / 3.0, 0.225),
    (0.797426985353087, 0.101286507323456, 0.125939180544827),
    (0.101286507323456, 0.797426985353087, 0.125939180544827),
    (0.101286507323456, 0.101286507323456, 0.125939180544827),
    (0.059715871789770, 0.470142064105115, 0.132394152788506),
    (0.470142064105115, 0.059715871789770, 0.132394152788506),
    (0.470142064105115, 0.470142064105115, 0.132394152788506),
];

/// Plain 7-point (degree 5) rule on the triangle (a, b, c).
pub fn tri_quad<F: FnMut(Pt) -> f64>(a: Pt, b: Pt, c: Pt, mut f: F) -> f64 {
    let area = signed_area(a, b, c);
    let mut acc = 0.0;
    for &(l1, l2, w) in &TRI7 {
        let l0 = 1.0 - l1 - l2;
        let x = [
            l0 * a[0] + l1 * b[0] + l2 * c[0],
            l0 * a[1] + l1 * b[1] + l2 * c[1],
        ];
        acc += w * f(x);
    }
    acc * area
}

/// Plain 5-point Gauss rule on the segment [a, b] (with respect to arc length).
pub fn edge_quad<F: FnMut(Pt) -> f64>(a: Pt, b: Pt, mut f: F) -> f64 {
    let len = norm(sub(b, a));
    let mut acc = 0.0;
    for &(x, w) in &GAUSS5 {
        let t = 0.5 * (1.0 + x);
        let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        acc += w * f(p);
    }
    acc * 0.5 * len
}

// ── Weighted (singular) rules ───────────────────────────────────────

/// Number of dyadic radial levels so the dropped-core error of the apex
/// rule stays below ~1e-10 relative: 2^{-K(3+ℓ)} ≤ 1e-10.
fn apex_levels(ell: f64) -> usize {
    let denom = (3.0 + ell).max(0.05);
    ((10.0 * std::f64::consts::LN_10) / (denom * std::f64::consts::LN_2)).ceil() as usize
}

/// Apex-triangle rule for ∫ over (0, b, c) of |x|^ℓ g(x) dx, signed by
/// the orientation of (0, b, c), emitted as nodes and weights.
///
/// Uses the parametrization x = s·((1-t)b + t c), under which the area
/// element is s·det[b,c] ds dt and the radial weight factorizes as
/// s^{1+ℓ} |p(t)|^ℓ. The s-integral is done on dyadic panels graded
/// toward 0; the mildly varying t-integral uses composite Gauss panels
/// scaled to the segment's aspect ratio.
fn apex_quad_weighted_nodes(b: Pt, c: Pt, ell: f64, sink: &mut impl FnMut(Pt, f64)) {
    let det = cross(b, c);
    if det == 0.0 {
        return;
    }
    let d_seg = dist_origin_segment(b, c);
    if d_seg <= 0.0 {
        // Degenerate: far edge through the origin. The caller guards this;
        // the integral of the slab collapses to zero width anyway.
        return;
    }
    let seg_len = norm(sub(c, b));
    let aspect = seg_len / d_seg;

    // t-quadrature nodes with total weight |p(t)|^ℓ dt. For well-separated
    // segments a few uniform Gauss panels suffice; skinny apex triangles
    // (segment passing near the origin) get dyadic panels graded toward
    // the closest-approach parameter.
    let mut t_panels: Vec<(f64, f64)> = Vec::new();
    if aspect <= 8.0 {
        let m_t = (aspect.ceil() as usize).clamp(2, 8);
        for j in 0..m_t {
            t_panels.push((j as f64 / m_t as f64, (j + 1) as f64 / m_t as f64));
        }
    } else {
        let e = sub(c, b);
        let t_star = (-dot(b, e) / (seg_len * seg_len)).clamp(0.0, 1.0);
        let d_rel = 1.0 / aspect;
        for (lo, hi) in [(0.0f64, t_star), (t_star, 1.0f64)] {
            let side = hi - lo;
            if side <= 0.0 {
                continue;
            }
            let levels = ((side / d_rel).log2().ceil().max(0.0) as usize).min(60);
            let mut frac = 1.0f64;
            for _ in 0..levels {
                let next = 0.5 * frac;
                if lo == t_star {
                    t_panels.push((lo + next * side, lo + frac * side));
                } else {
                    t_panels.push((hi - frac * side, hi - next * side));
                }
                frac = next;
            }
            if lo == t_star {
                t_panels.push((lo, lo + frac * side));
            } else {
                t_panels.push((hi - frac * side, hi));
            }
        }
    }
    let mut t_nodes: Vec<(Pt, f64)> = Vec::with_capacity(t_panels.len() * 7);
    for &(t0, t1) in &t_panels {
        let half = 0.5 * (t1 - t0);
        let mid = 0.5 * (t0 + t1);
        for &(x, w) in &GAUSS7 {
            let t = mid + half * x;
            let p = [(1.0 - t) * b[0] + t * c[0], (1.0 - t) * b[1] + t * c[1]];
            t_nodes.push((p, w * half * norm(p).powf(ell)));
        }
    }

    // Tensor nodes: s-panels against the cached t-rule, each emitted with
    // the combined weight det · w_s · s^{1+ℓ} · w_t.
    let emit_slice = |s: f64, ws: f64, sink: &mut dyn FnMut(Pt, f64)| {
        for &(p, wt) in &t_nodes {
            sink([s * p[0], s * p[1]], det * ws * wt);
        }
    };
    let levels = apex_levels(ell);
    let mut hi = 1.0f64;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for &(x, w) in &GAUSS7 {
            let s = mid + half * x;
            emit_slice(s, w * half * s.powf(1.0 + ell), sink);
        }
        hi = lo;
    }
    // Core [0, hi]: s^{1+ℓ} integrated exactly against the slice frozen
    // at s = hi/2.
    emit_slice(0.5 * hi, hi.powf(2.0 + ell) / (2.0 + ell), sink);
}

/// ∫_T |x|^ℓ g(x) dx over the triangle (a, b, c), robust to the origin
/// lying inside, on, or near the element.
pub fn tri_quad_weighted<F: FnMut(Pt) -> f64>(a: Pt, b: Pt, c: Pt, ell: f64, g: F) -> f64 {
    let mut g = g;
    let mut acc = 0.0;
    tri_quad_weighted_nodes(a, b, c, ell, &mut |p, w| acc += w * g(p));
    acc
}

/// Emit the quadrature nodes and weights (weight already multiplied by
/// |x|^ℓ and the area element) that [`tri_quad_weighted`] integrates
/// against; lets hot loops cache the rule instead of rebuilding it.
pub fn tri_quad_weighted_nodes(a: Pt, b: Pt, c: Pt, ell: f64, sink: &mut impl FnMut(Pt, f64)) {
    let area = signed_area(a, b, c);
    if area == 0.0 {
        return;
    }
    let h = norm(sub(b, a)).max(norm(sub(c, b))).max(norm(sub(a, c)));
    let d = dist_origin_triangle(a, b, c);
    if ell == 0.0 || d >= 4.0 * h {
        // Far from the singularity: one midpoint split + 7-point rule.
        let mab = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let mbc = [0.5 * (b[0] + c[0]), 0.5 * (b[1] + c[1])];
        let mca = [0.5 * (c[0] + a[0]), 0.5 * (c[1] + a[1])];
        for (p0, p1, p2) in [(a, mab, mca), (mab, b, mbc), (mca, mbc, c), (mab, mbc, mca)] {
            let sub_area = signed_area(p0, p1, p2);
            for &(l1, l2, w) in &TRI7 {
                let l0 = 1.0 - l1 - l2;
                let x = [
                    l0 * p0[0] + l1 * p1[0] + l2 * p2[0],
                    l0 * p0[1] + l1 * p1[1] + l2 * p2[1],
                ];
                sink(x, w * sub_area * norm(x).powf(ell));
            }
        }
        return;
    }
    // Signed polar decomposition about the origin. Works whether the
    // origin is inside the triangle (three positive parts), on its
    // boundary (degenerate parts vanish), or outside (signed parts).
    apex_quad_weighted_nodes(a, b, ell, sink);
    apex_quad_weighted_nodes(b, c, ell, sink);
    apex_quad_weighted_nodes(c, a, ell, sink);
}

/// ∫ over the convex polygon (counterclockwise vertices) of |x|^ℓ g dx.
pub fn convex_polygon_quad_weighted<F: FnMut(Pt) -> f64>(pts: &[Pt], ell: f64, mut g: F) -> f64 {
    let mut acc = 0.0;
    for i in 1..pts.len().saturating_sub(1) {
        acc += tri_quad_weighted(pts[0], pts[i], pts[i + 1], ell, &mut g);
    }
    acc
}

/// ∫ over the segment [a, b] of |x|^k g(x) dH¹, graded toward the point
/// of the segment closest to the origin.
pub fn edge_quad_weighted<F: FnMut(Pt) -> f64>(a: Pt, b: Pt, k: f64, mut g: F) -> f64 {
    let ab = sub(b, a);
    let len = norm(ab);
    if len == 0.0 {
        return 0.0;
    }
    let point_at = |t: f64| -> Pt { [a[0] + t * ab[0], a[1] + t * ab[1]] };
    let gauss_panel = |t0: f64, t1: f64, g: &mut F| -> f64 {
        let half = 0.5 * (t1 - t0);
        let mid = 0.5 * (t0 + t1);
        let mut acc = 0.0;
        for &(x, w) in &GAUSS5 {
            let p = point_at(mid + half * x);
            acc += w * norm(p).powf(k) * g(p);
        }
        acc * half * len
    };

    let d = dist_origin_segment(a, b);
    if k == 0.0 || d >= 2.0 * len {
        return gauss_panel(0.0, 0.5, &mut g) + gauss_panel(0.5, 1.0, &mut g);
    }
    // Foot of the perpendicular from the origin, clamped to the segment.
    let t_star = (-dot(a, ab) / (len * len)).clamp(0.0, 1.0);
    let d_rel = (d / len).max(1e-14);
    let mut acc = 0.0;
    for (lo, hi) in [(0.0f64, t_star), (t_star, 1.0f64)] {
        let side = hi - lo;
        if side <= 0.0 {
            continue;
        }
        // Dyadic panels shrinking toward the near end; stop once the panel
        // is comparable to the standoff distance, where the integrand is smooth.
        let levels = ((side / d_rel).log2().ceil().max(0.0) as usize).min(60);
        let mut frac = 1.0f64;
        for _ in 0..levels {
            let next = 0.5 * frac;
            let (t0, t1) = if lo == t_star {
                // grading toward lo
                (lo + next * side, lo + frac * side)
            } else {
                // grading toward hi
                (hi - frac * side, hi - next * side)
            };
            acc += gauss_panel(t0, t1, &mut g);
            frac = next;
        }
        let (t0, t1) = if lo == t_star {
            (lo, lo + frac * side)
        } else {
            (hi - frac * side, hi)
        };
        acc += gauss_panel(t0, t1, &mut g);
    }
    acc
}

// ── 1-D adaptive quadrature (oracle-grade) ──────────────────────────

fn simpson(f0: f64, fm: f64, f1: f64, h: f64) -> f64 {
    h / 6.0 * (f0 + 4.0 * fm + f1)
}

fn adaptive_step<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over [a, b] with absolute tolerance.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&mut f, a, b, fa, fm, fb, whole, tol.max(1e-300), 52)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plain_rule_is_degree_five() {
        // x^3 y^2 over the unit reference triangle: exact value 1/280... use
        // known monomial integral: ∫ x^a y^b = a! b! / (a+b+2)!
        let exact = 6.0 * 2.0 / 5040.0;
        let got = tri_quad([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], |p| {
            p[0].powi(3) * p[1].powi(2)
        });
        assert!((got - exact).abs() < 1e-15);
    }

    #[test]
    fn apex_rule_matches_ball_measure() {
        // Regular polygon fan around the origin: sum of apex triangles.
        // With many sides it converges to the disk value 2π R^{2+ℓ}/(2+ℓ),
        // but a single apex triangle already has an exact polar value:
        // ∫_T |x|^ℓ dx over (0,b,c) = ∫ dθ ρ(θ)^{2+ℓ}/(2+ℓ).
        // Cross-check against adaptive 1-D quadrature in the angle.
        let b = [1.0, 0.0];
        let c = [0.4, 0.9];
        for ell in [-1.5, -1.0, -0.5, 0.0] {
            let mut got = 0.0;
            apex_quad_weighted_nodes(b, c, ell, &mut |_, w| got += w);
            let th0 = 0.0f64;
            let th1 = c[1].atan2(c[0]);
            // ρ(θ): distance to the segment bc along direction θ.
            let exact = adaptive_simpson(
                |th| {
                    let dir = [th.cos(), th.sin()];
                    // segment bc: points b + u (c-b); solve cross(dir, b + u(c-b)) = 0
                    let e = sub(c, b);
                    let u = -cross(dir, b) / cross(dir, e);
                    let p = [b[0] + u * e[0], b[1] + u * e[1]];
                    norm(p).powf(2.0 + ell) / (2.0 + ell)
                },
                th0,
                th1,
                1e-13,
            );
            assert!(
                (got - exact).abs() <= 1e-9 * exact.abs(),
                "ell={ell}: got {got}, exact {exact}"
            );
        }
    }

    #[test]
    fn weighted_triangle_near_origin() {
        // Triangle close to but not containing the origin; compare the
        // signed apex decomposition against a brute-force graded sum.
        let (a, b, c) = ([0.01, 0.01], [1.0, 0.0], [0.3, 1.1]);
        for ell in [-1.2, -0.7] {
            let got = tri_quad_weighted(a, b, c, ell, |_| 1.0);
            // Oracle: polar integral over the angular extent of the triangle.
            let oracle = polar_oracle_triangle(a, b, c, ell);
            assert!(
                (got - oracle).abs() <= 2e-8 * oracle.abs(),
                "ell={ell}: got {got} oracle {oracle}"
            );
        }
    }

    // ∫_T |x|^ℓ dx by signed apex decomposition with angular adaptive
    // quadrature per apex triangle (independent of the tensor rule).
    fn polar_oracle_triangle(a: Pt, b: Pt, c: Pt, ell: f64) -> f64 {
        let mut total = 0.0;
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let det = cross(u, v);
            if det == 0.0 {
                continue;
            }
            let e = sub(v, u);
            let span = (cross(u, v) / (norm(u) * norm(v))).asin();
            let th_u = (u[1]).atan2(u[0]);
            let val = adaptive_simpson(
                |s| {
                    let th = th_u + s * span;
                    let dir = [th.cos(), th.sin()];
                    let w = -cross(dir, u) / cross(dir, e);
                    let p = [u[0] + w * e[0], u[1] + w * e[1]];
                    norm(p).powf(2.0 + ell) / (2.0 + ell) * span
                },
                0.0,
                1.0,
                1e-13,
            );
            total += val;
        }
        total
    }

    #[test]
    fn weighted_edge_against_adaptive() {
        // Side of the square [-1,1]^2 at x = 1, weight |x|^{-1/2}.
        let got = edge_quad_weighted([1.0, -1.0], [1.0, 1.0], -0.25, |_| 1.0);
        let exact = adaptive_simpson(|t: f64| (1.0 + t * t).powf(-0.125), -1.0, 1.0, 1e-13);
        assert!((got - exact).abs() < 1e-8 * exact);
        // Unit circle chord far from origin, weight |x|^0: plain length.
        let got0 = edge_quad_weighted([2.0, 0.0], [2.0, 1.0], 0.0, |_| 1.0);
        assert!((got0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_simpson_handles_integrable_singularity() {
        // ∫_0^1 t^{-1/2} dt = 2 (endpoint singularity).
        let got = adaptive_simpson(|t: f64| if t > 0.0 { t.powf(-0.5) } else { 0.0 }, 0.0, 1.0, 1e-10);
        assert!((got - 2.0).abs() < 1e-6);
        // Smooth case to tight tolerance.
        let got = adaptive_simpson(|t: f64| (PI * t).sin(), 0.0, 1.0, 1e-13);
        assert!((got - 2.0 / PI).abs() < 1e-12);
    }
}
