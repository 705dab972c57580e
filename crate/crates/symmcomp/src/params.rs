//! Weight and exponent bookkeeping: the tuple (n, p, ℓ) with derived
//! quantities and hypothesis flags.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// The parameter triple (n, p, ℓ) together with derived constants.
///
/// Hypotheses:
/// - (H1): `p ≥ n`;
/// - (H2): `-n < ℓ < 0`. The classical limit `ℓ = 0` is accepted
///   everywhere as a cross-check mode, flagged as not satisfying (H2).
///
/// Meshing supports n = 2 only, but every formula below is written for
/// general n so the radial and curve paths stay dimension-agnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    /// Spatial dimension, ≥ 2.
    pub n: u32,
    /// Growth exponent of the p-Laplacian.
    pub p: f64,
    /// Weight exponent of `|x|^ℓ`.
    pub ell: f64,
}

impl WeightParams {
    pub fn new(n: u32, p: f64, ell: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension n = {n} must be >= 2")));
        }
        if !p.is_finite() || !ell.is_finite() {
            return Err(Error::InvalidInput("p and ell must be finite".into()));
        }
        if ell <= -(n as f64) {
            return Err(Error::HypothesisViolated {
                name: "(H2)",
                detail: format!("ℓ = {ell} ≤ -n = -{n}: the weight |x|^ℓ is not integrable"),
            });
        }
        if ell > 0.0 {
            return Err(Error::HypothesisViolated {
                name: "(H2)",
                detail: format!("ℓ = {ell} > 0 is outside the admissible range (-{n}, 0]"),
            });
        }
        if p < n as f64 {
            return Err(Error::HypothesisViolated {
                name: "(H1)",
                detail: format!("p = {p} < n = {n}"),
            });
        }
        Ok(Self { n, p, ell })
    }

    /// Hölder conjugate p' = p/(p-1).
    pub fn p_prime(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// (H1): p ≥ n.
    pub fn h1(&self) -> bool {
        self.p >= self.n as f64
    }

    /// (H2): -n < ℓ < 0 (strict; ℓ = 0 is the classical limit).
    pub fn h2(&self) -> bool {
        self.ell > -(self.n as f64) && self.ell < 0.0
    }

    /// Lebesgue volume of the unit ball of R^n.
    ///
    /// Computed by the recursion ω_1 = 2, ω_2 = π, ω_n = ω_{n-2}·2π/n,
    /// which avoids a gamma-function dependency.
    pub fn omega_n(&self) -> f64 {
        unit_ball_volume(self.n)
    }

    /// n·ω_n, the surface measure of the unit sphere.
    pub fn n_omega_n(&self) -> f64 {
        self.n as f64 * self.omega_n()
    }

    /// Exponent of the measure in the isoperimetric inequality:
    /// `(ℓ(p-1) + (n-1)p) / (p(n+ℓ))`.
    pub fn iso_exponent(&self) -> f64 {
        let (n, p, ell) = (self.n as f64, self.p, self.ell);
        (ell * (p - 1.0) + (n - 1.0) * p) / (p * (n + ell))
    }

    /// The sharp isoperimetric constant
    /// `γ_{n,ℓ,p} = (nω_n)^{(ℓ+p)/(p(n+ℓ))} (ℓ+n)^{(ℓ(p-1)+(n-1)p)/(p(n+ℓ))}`.
    pub fn gamma(&self) -> f64 {
        let (n, p, ell) = (self.n as f64, self.p, self.ell);
        let a = (ell + p) / (p * (n + ell));
        self.n_omega_n().powf(a) * (ell + n).powf(self.iso_exponent())
    }

    /// ℓ-weighted measure of the centered ball of radius r:
    /// `nω_n r^{n+ℓ}/(n+ℓ)`.
    pub fn ball_measure(&self, r: f64) -> f64 {
        let ne = self.n as f64 + self.ell;
        self.n_omega_n() * r.powf(ne) / ne
    }

    /// k-weighted perimeter of the centered ball of radius r:
    /// `nω_n r^{n-1+k}`.
    pub fn ball_perimeter(&self, r: f64, k: f64) -> f64 {
        self.n_omega_n() * r.powf(self.n as f64 - 1.0 + k)
    }

    /// The measure map `m(r) = |B_r|_ℓ` used by the weighted rearrangement.
    pub fn measure_of_radius(&self, r: f64) -> f64 {
        self.ball_measure(r)
    }

    /// Inverse of [`Self::measure_of_radius`].
    pub fn radius_of_measure(&self, s: f64) -> f64 {
        let ne = self.n as f64 + self.ell;
        (ne * s / self.n_omega_n()).powf(1.0 / ne)
    }
}

fn unit_ball_volume(n: u32) -> f64 {
    let mut vols = [0.0f64; 2];
    vols[0] = 2.0; // ω_1
    vols[1] = std::f64::consts::PI; // ω_2
    if n <= 2 {
        return vols[(n - 1) as usize];
    }
    let mut v = vols[((n - 1) % 2) as usize];
    let mut k = 1 + (n - 1) % 2;
    while k < n {
        k += 2;
        v *= 2.0 * std::f64::consts::PI / k as f64;
    }
    v
}
