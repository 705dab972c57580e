//! Weighted distribution function, decreasing and radial rearrangements,
//! weighted Lebesgue and Lorentz norms for the cone u = 1 - |x| on the
//! unit disk (everything has a closed form to compare against).
//!
//! ```bash
//! cargo run --example rearrangement
//! ```

use std::f64::consts::PI;
use symmcomp::field::ScalarField;
use symmcomp::mesh::{generate, ShapeSpec};
use symmcomp::params::WeightParams;
use symmcomp::rearrangement::{
    decreasing_rearrangement, distribution_function, weighted_lp_norm, weighted_rearrangement,
};

fn main() -> symmcomp::Result<()> {
    let params = WeightParams::new(2, 2.0, -1.0)?;
    let mesh = generate(&ShapeSpec::Disk { r: 1.0, offset: [0.0, 0.0], h: 0.03 })?;
    let u = ScalarField::from_fn(&mesh, |x, y| 1.0 - x.hypot(y))?;

    let mu = distribution_function(&mesh, &u, &params, 512)?;
    println!("μ(t) vs the analytic 2π(1-t):");
    for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
        println!(
            "  μ({t:.1}) = {:>9.6}   exact {:>9.6}",
            mu.eval(t),
            2.0 * PI * (1.0 - t)
        );
    }

    let star = decreasing_rearrangement(&mu);
    let sharp = weighted_rearrangement(&star, &params);
    println!("\nu*(s) = 1 - s/2π, u#(r) = 1 - r:");
    println!("  u*(π)  = {:>9.6}   exact {:>9.6}", star.eval(PI), 0.5);
    println!("  u#(0.5) = {:>8.6}   exact {:>9.6}", sharp.eval(0.5), 0.5);

    println!("\nequimeasurability of the q-norms (u on mesh, u* on (0,|Ω|_ℓ), u# on the ball):");
    for q in [1.0, 2.0] {
        let nu = weighted_lp_norm(&mesh, &u, &params, q)?;
        println!(
            "  q={q}: ||u|| = {:.8}  ||u*|| = {:.8}  ||u#|| = {:.8}",
            nu,
            star.lp_norm(q),
            sharp.lp_norm(q)
        );
    }

    println!("\nLorentz quasi-norms of the distribution curve:");
    println!("  L(1,1) = {:.8} (exact π = {:.8})", mu.lorentz_norm(1.0, 1.0)?, PI);
    println!(
        "  L(2,2) = {:.8}  vs L² via Cavalieri = {:.8}",
        mu.lorentz_norm(2.0, 2.0)?,
        mu.cavalieri(2.0).sqrt()
    );
    println!("  L(1,∞) = {:.8}", mu.lorentz_norm(1.0, f64::INFINITY)?);

    let out = std::path::Path::new("target/example_out");
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("mu.csv"), mu.to_csv())?;
    std::fs::write(out.join("u_star.csv"), star.to_csv())?;
    std::fs::write(out.join("u_sharp.csv"), sharp.to_csv())?;
    println!("\ncurves written to target/example_out/{{mu,u_star,u_sharp}}.csv");
    Ok(())
}
