//! Weighted measures, perimeters and the isoperimetric inequality with
//! explicit constant, across the built-in domain generators.
//!
//! ```bash
//! cargo run --example weighted_geometry
//! ```

use symmcomp::geometry::{isoperimetric_check, symmetrized_ball, weighted_measure, weighted_perimeter};
use symmcomp::mesh::{generate, ShapeSpec};
use symmcomp::params::WeightParams;

fn main() -> symmcomp::Result<()> {
    let params = WeightParams::new(2, 2.0, -1.0)?;
    println!(
        "(n, p, ℓ) = (2, 2, -1):  p' = {:.3},  γ = {:.6} (= sqrt(2π))\n",
        params.p_prime(),
        params.gamma()
    );

    let shapes: Vec<(&str, ShapeSpec)> = vec![
        ("unit disk", ShapeSpec::Disk { r: 1.0, offset: [0.0, 0.0], h: 0.02 }),
        ("square [-1,1]^2", ShapeSpec::Square { a: 1.0, offset: [0.0, 0.0], h: 0.05 }),
        ("off-center disk", ShapeSpec::Disk { r: 0.4, offset: [0.5, 0.0], h: 0.02 }),
        ("ellipse", ShapeSpec::Ellipse { a: 1.3, b: 0.8, offset: [0.2, 0.1], h: 0.05 }),
        ("L-shape", ShapeSpec::LShape { a: 1.0, offset: [0.4, 0.35], h: 0.05 }),
    ];

    println!(
        "{:<18} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "domain", "|Ω|_ℓ", "P_{ℓ/p'}", "γ|Ω|^e", "margin", "r♯"
    );
    for (name, shape) in shapes {
        let mesh = generate(&shape)?;
        let rep = isoperimetric_check(&mesh, &params)?;
        let ball = symmetrized_ball(rep.measure, &params)?;
        println!(
            "{:<18} {:>12.6} {:>12.6} {:>12.6} {:>12.3e} {:>10.5}",
            name, rep.measure, rep.lhs, rep.rhs, rep.margin, ball.radius
        );
    }

    // individual quantities on demand
    let sq = generate(&ShapeSpec::Square { a: 1.0, offset: [0.0, 0.0], h: 0.05 })?;
    println!(
        "\nsquare: area (ℓ=0) = {:.6}, P_0 = {:.6}, P_(-1/2) = {:.6}",
        weighted_measure(&sq, 0.0)?,
        weighted_perimeter(&sq, 0.0)?,
        weighted_perimeter(&sq, -0.5)?
    );
    println!("centered balls saturate the inequality; every other domain has margin > 0");
    Ok(())
}
