//! Faber-Krahn inequality for the first Robin eigenvalue of the weighted
//! Rayleigh quotient: among domains of equal ℓ-measure, the centered ball
//! with the matched constant coefficient has the smallest λ₁.
//!
//! ```bash
//! cargo run --example faber_krahn
//! ```

use symmcomp::geometry::{symmetrized_ball, weighted_measure};
use symmcomp::harness::{equality_configuration, verify_faber_krahn, VerifyConfig};
use symmcomp::mesh::{generate, ShapeSpec};
use symmcomp::params::WeightParams;
use symmcomp::radial::beta_tilde;
use symmcomp::solver::RobinCoefficient;
use symmcomp::spectral::{min_rayleigh, radial_eigen, EigenConfig};

fn main() -> symmcomp::Result<()> {
    let params = WeightParams::new(2, 2.0, -1.0)?;
    let cfg = VerifyConfig::for_params(&params);

    // square vs its symmetrized disk
    let mesh = generate(&ShapeSpec::Square { a: 1.0, offset: [0.0, 0.0], h: 0.05 })?;
    let beta = RobinCoefficient::constant(&mesh, 1.0)?;
    let ecfg = EigenConfig::default();
    let lam = min_rayleigh(&mesh, &beta, &params, &ecfg)?;
    let measure = weighted_measure(&mesh, params.ell)?;
    let ball = symmetrized_ball(measure, &params)?;
    let bt = beta_tilde(&mesh, &beta, &params)?;
    let beta_eff = bt * ball.radius.powf(params.ell / params.p_prime());
    let lam_ball = radial_eigen(&ball, beta_eff, &params, &ecfg)?;
    println!("square [-1,1]^2, β ≡ 1, (2,2,-1):");
    println!("  λ₁(square) = {:.8}  ({} iterations, residual {:.1e})", lam.lambda, lam.iterations, lam.residual);
    println!("  λ₁(ball r♯={:.5}, β_eff={:.5}) = {:.8}  (shooting)", ball.radius, beta_eff, lam_ball.lambda);
    println!("  margin = {:+.6e}\n", lam.lambda - lam_ball.lambda);

    // monotonicity of λ₁ in β on the disk
    let disk = generate(&ShapeSpec::Disk { r: 1.0, offset: [0.0, 0.0], h: 0.06 })?;
    print!("λ₁(disk) for β ∈ {{0.5, 1, 2}}: ");
    for b in [0.5, 1.0, 2.0] {
        let beta = RobinCoefficient::constant(&disk, b)?;
        let l = min_rayleigh(&disk, &beta, &params, &ecfg)?;
        print!("{:.6}  ", l.lambda);
    }
    println!("(increasing in β)");

    // equality configuration: the two eigenvalues coincide
    let eq = equality_configuration(1.0, 0.04, &params, 1.0)?;
    let rep = verify_faber_krahn(&eq.mesh, &eq.beta, &params, &cfg)?;
    println!(
        "\nequality configuration: λ₁(mesh) = {:.8}, λ₁(ball) = {:.8}, |margin| = {:.2e}",
        rep.rows[0].rhs, rep.rows[0].lhs, rep.rows[0].margin.abs()
    );
    Ok(())
}
