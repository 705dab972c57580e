//! The differential (Gronwall-type) lemma as a testable analytic fact:
//! if `τ ξ'(τ) ≤ (p-1) ξ(τ) + C` on [τ₀, ∞), τ₀ > 0, C ≥ 0, then
//!
//! (i)  `ξ(τ) ≤ (ξ(τ₀) + C/(p-1)) (τ/τ₀)^{p-1} - C/(p-1)`,
//! (ii) `ξ'(τ) ≤ ((p-1)ξ(τ₀) + C)/τ₀ · (τ/τ₀)^{p-2}`.

use crate::error::Error;
use crate::rng::SplitMix64;
use crate::Result;
use serde::Serialize;

/// A differentiable scalar function with its derivative: either a member
/// of the closed-form power family or a sampled table from the
/// constructive generator.
#[derive(Debug, Clone)]
enum Shape {
    /// ξ(τ) = a τ^{p-1} - C/(p-1); satisfies the hypothesis with equality.
    Power { a: f64 },
    /// Node table (τ, ξ, ξ'); ξ' stores the defining slope so the
    /// hypothesis margin is explicit at every node.
    Table { taus: Vec<f64>, xis: Vec<f64>, dxis: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct GronwallInstance {
    pub p: f64,
    pub c: f64,
    pub tau0: f64,
    shape: Shape,
}

impl GronwallInstance {
    /// The extremal member ξ(τ) = τ^{p-1} with C = 0 (equality throughout).
    pub fn extremal(p: f64, tau0: f64) -> Self {
        Self { p, c: 0.0, tau0, shape: Shape::Power { a: 1.0 } }
    }

    /// ξ(τ) = a τ^{p-1} - C/(p-1), a > 0: equality in the hypothesis and
    /// in both conclusions.
    pub fn power_family(a: f64, c: f64, p: f64, tau0: f64) -> Self {
        Self { p, c, tau0, shape: Shape::Power { a } }
    }

    /// Random instance satisfying the hypothesis strictly: integrates
    /// `ξ' = ((p-1)ξ + C)/τ - slack(τ)` with a positive oscillating slack,
    /// by RK4 on [τ₀, τ_max].
    pub fn random_concave(seed: u64, p: f64, tau0: f64, tau_max: f64) -> Self {
        let mut rng = SplitMix64::new(seed);
        let c = rng.range(0.0, 2.0);
        let xi0 = rng.range(0.1, 3.0);
        let s0 = rng.range(0.05, 1.0);
        let omega = rng.range(0.5, 4.0) / tau0;
        let phase = rng.range(0.0, std::f64::consts::TAU);
        let slack = move |tau: f64| s0 * (1.05 + (omega * tau + phase).sin());
        let n = 2048usize;
        let dt = (tau_max - tau0) / n as f64;
        let rhs = |tau: f64, xi: f64| ((p - 1.0) * xi + c) / tau - slack(tau);
        let mut taus = Vec::with_capacity(n + 1);
        let mut xis = Vec::with_capacity(n + 1);
        let mut dxis = Vec::with_capacity(n + 1);
        let mut xi = xi0;
        for i in 0..=n {
            let tau = tau0 + i as f64 * dt;
            taus.push(tau);
            xis.push(xi);
            dxis.push(rhs(tau, xi));
            if i < n {
                let k1 = rhs(tau, xi);
                let k2 = rhs(tau + 0.5 * dt, xi + 0.5 * dt * k1);
                let k3 = rhs(tau + 0.5 * dt, xi + 0.5 * dt * k2);
                let k4 = rhs(tau + dt, xi + dt * k3);
                xi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        Self { p, c, tau0, shape: Shape::Table { taus, xis, dxis } }
    }

    /// (ξ, ξ') at τ.
    pub fn eval(&self, tau: f64) -> (f64, f64) {
        match &self.shape {
            Shape::Power { a } => {
                let xi = a * tau.powf(self.p - 1.0) - self.c / (self.p - 1.0);
                let dxi = a * (self.p - 1.0) * tau.powf(self.p - 2.0);
                (xi, dxi)
            }
            Shape::Table { taus, xis, dxis } => {
                if tau <= taus[0] {
                    return (xis[0], dxis[0]);
                }
                if tau >= *taus.last().unwrap() {
                    return (*xis.last().unwrap(), *dxis.last().unwrap());
                }
                let i = taus.partition_point(|&t| t <= tau) - 1;
                let w = (tau - taus[i]) / (taus[i + 1] - taus[i]);
                (
                    xis[i] + w * (xis[i + 1] - xis[i]),
                    dxis[i] + w * (dxis[i + 1] - dxis[i]),
                )
            }
        }
    }

    /// τ sample points for checks over [τ₀, τ_max]: table nodes when
    /// available (where the hypothesis holds exactly by construction),
    /// otherwise a geometric grid.
    pub fn sample_taus(&self, tau_max: f64, n: usize) -> Vec<f64> {
        match &self.shape {
            Shape::Table { taus, .. } => {
                taus.iter().copied().filter(|&t| t <= tau_max).collect()
            }
            Shape::Power { .. } => (0..=n)
                .map(|i| self.tau0 * (tau_max / self.tau0).powf(i as f64 / n as f64))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GronwallReport {
    /// min over the grid of `(p-1)ξ + C - τξ'` (≥ 0 required to proceed).
    pub hypothesis_margin: f64,
    /// min over the grid of `bound_i(τ) - ξ(τ)`, relative to the scale.
    pub conclusion_i_margin: f64,
    /// min over the grid of `bound_ii(τ) - ξ'(τ)`, relative to the scale.
    pub conclusion_ii_margin: f64,
    pub pass: bool,
}

/// Check the hypothesis on the grid, then both conclusions on [τ₀, τ_max].
/// A hypothesis violation is a refusal, not a lemma failure.
pub fn verify_gronwall(
    inst: &GronwallInstance,
    tau_max: f64,
    slack: f64,
) -> Result<GronwallReport> {
    let p = inst.p;
    let c = inst.c;
    let tau0 = inst.tau0;
    if !(tau0 > 0.0) || c < 0.0 {
        return Err(Error::InvalidInput("Gronwall requires τ₀ > 0 and C ≥ 0".into()));
    }
    let taus = inst.sample_taus(tau_max, 512);
    let (xi0, _) = inst.eval(tau0);
    let scale = xi0.abs() + c / (p - 1.0) + 1.0;
    let mut hyp_margin = f64::MAX;
    for &tau in &taus {
        let (xi, dxi) = inst.eval(tau);
        hyp_margin = hyp_margin.min((p - 1.0) * xi + c - tau * dxi);
    }
    if hyp_margin < -slack * scale {
        return Err(Error::HypothesisViolated {
            name: "Gronwall differential inequality",
            detail: format!("margin {hyp_margin:.3e} on the τ-grid"),
        });
    }
    let mut m_i = f64::MAX;
    let mut m_ii = f64::MAX;
    for &tau in &taus {
        let (xi, dxi) = inst.eval(tau);
        let ratio = tau / tau0;
        let bound_i = (xi0 + c / (p - 1.0)) * ratio.powf(p - 1.0) - c / (p - 1.0);
        let bound_ii = ((p - 1.0) * xi0 + c) / tau0 * ratio.powf(p - 2.0);
        let s_i = bound_i.abs().max(scale);
        let s_ii = bound_ii.abs().max(scale);
        m_i = m_i.min((bound_i - xi) / s_i);
        m_ii = m_ii.min((bound_ii - dxi) / s_ii);
    }
    Ok(GronwallReport {
        hypothesis_margin: hyp_margin,
        conclusion_i_margin: m_i,
        conclusion_ii_margin: m_ii,
        pass: m_i >= -slack && m_ii >= -slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    #[test]
    fn extremal_family_achieves_equality() {
        for p in [2.0, 3.0, 4.5] {
            let inst = GronwallInstance::extremal(p, 0.7);
            let rep = verify_gronwall(&inst, 7.0, tol::GRONWALL_EQ).unwrap();
            assert!(rep.pass);
            assert!(rep.conclusion_i_margin.abs() < 1e-10, "(i) margin {}", rep.conclusion_i_margin);
            assert!(rep.conclusion_ii_margin.abs() < 1e-10, "(ii) margin {}", rep.conclusion_ii_margin);
        }
    }

    #[test]
    fn shifted_power_family_equality() {
        let inst = GronwallInstance::power_family(2.5, 1.3, 3.0, 1.0);
        let rep = verify_gronwall(&inst, 10.0, tol::GRONWALL_EQ).unwrap();
        assert!(rep.pass);
        assert!(rep.conclusion_i_margin.abs() < 1e-10);
        assert!(rep.conclusion_ii_margin.abs() < 1e-10);
    }

    #[test]
    fn random_instances_strict_inequalities() {
        for seed in 0..25 {
            let p = 2.0 + (seed % 5) as f64 * 0.5;
            let inst = GronwallInstance::random_concave(seed, p, 0.5, 5.0);
            let rep = verify_gronwall(&inst, 5.0, tol::GRONWALL_EQ).unwrap();
            assert!(rep.pass, "seed {seed}: {rep:?}");
            assert!(rep.hypothesis_margin > 0.0, "seed {seed} hypothesis not strict");
            // both conclusions are equalities at τ₀ and strict beyond it
            assert!(rep.conclusion_i_margin > -1e-12, "seed {seed}: {rep:?}");
            let tau_max = 5.0;
            let (xi0, _) = inst.eval(inst.tau0);
            let (xi, dxi) = inst.eval(tau_max);
            let ratio = tau_max / inst.tau0;
            let bound_i =
                (xi0 + inst.c / (p - 1.0)) * ratio.powf(p - 1.0) - inst.c / (p - 1.0);
            let bound_ii = ((p - 1.0) * xi0 + inst.c) / inst.tau0 * ratio.powf(p - 2.0);
            assert!(bound_i > xi, "seed {seed}: (i) not strict at τ_max");
            assert!(bound_ii > dxi, "seed {seed}: (ii) not strict at τ_max");
        }
    }

    #[test]
    fn hypothesis_violation_is_refused() {
        // ξ = τ⁴ grows too fast for the p = 3 inequality with C = 0
        let taus: Vec<f64> = (0..=100).map(|i| 1.0 + i as f64 * 0.05).collect();
        let xis: Vec<f64> = taus.iter().map(|t| t.powi(4)).collect();
        let dxis: Vec<f64> = taus.iter().map(|t| 4.0 * t.powi(3)).collect();
        let inst = GronwallInstance {
            p: 3.0,
            c: 0.0,
            tau0: 1.0,
            shape: Shape::Table { taus, xis, dxis },
        };
        assert!(matches!(
            verify_gronwall(&inst, 6.0, tol::GRONWALL_EQ),
            Err(Error::HypothesisViolated { .. })
        ));
    }
}
