//! Pointwise comparison for constant sources: the weighted rearrangement
//! u# of the solution sits below the radial solution v everywhere on the
//! symmetrized ball. Writes both curves and a gnuplot script.
//!
//! ```bash
//! cargo run --example pointwise_comparison
//! gnuplot target/example_out/pointwise.gp
//! ```

use symmcomp::field::ScalarField;
use symmcomp::harness::{solve_pair, verify_pointwise_comparison, VerifyConfig};
use symmcomp::mesh::{generate, ShapeSpec};
use symmcomp::params::WeightParams;
use symmcomp::rearrangement::{
    decreasing_rearrangement, distribution_function, weighted_rearrangement,
};
use symmcomp::solver::{RobinCoefficient, RobinProblem};

fn main() -> symmcomp::Result<()> {
    for (p, ell) in [(2.0, -1.0), (3.0, -1.0), (3.0, -1.3)] {
        let params = WeightParams::new(2, p, ell)?;
        let mesh = generate(&ShapeSpec::Square { a: 1.0, offset: [0.0, 0.0], h: 0.08 })?;
        let f = ScalarField::constant(&mesh, 1.0);
        let beta = RobinCoefficient::constant(&mesh, 1.0)?;
        let prob = RobinProblem::new(mesh, params, f, beta)?;
        let cfg = VerifyConfig::for_params(&params);
        let pair = solve_pair(&prob, &cfg)?;
        let rep = verify_pointwise_comparison(&prob, &pair, &cfg)?;
        let row = &rep.rows[0];
        println!(
            "square (p={p}, ℓ={ell}): max(u# - v) = {:+.4e} (tolerance {:.2e})  {}",
            row.lhs,
            row.tolerance,
            if row.pass { "holds" } else { "violated" }
        );

        if (p, ell) == (2.0, -1.0) {
            let curve = distribution_function(&prob.mesh, &pair.u.field, &params, 512)?;
            let sharp = weighted_rearrangement(&decreasing_rearrangement(&curve), &params);
            let out = std::path::Path::new("target/example_out");
            std::fs::create_dir_all(out)?;
            std::fs::write(out.join("u_sharp.csv"), sharp.to_csv())?;
            std::fs::write(out.join("v.csv"), pair.v.to_csv())?;
            std::fs::write(
                out.join("pointwise.gp"),
                "set datafile separator ','\nset xlabel 'r'\nset key left bottom\n\
                 plot 'target/example_out/u_sharp.csv' skip 1 using 1:2 with lines title 'u#', \\\n\
                 \t'target/example_out/v.csv' skip 1 using 1:2 with lines title 'v'\npause -1\n",
            )?;
            println!("  curves written to target/example_out/{{u_sharp,v}}.csv");
        }
    }
    // p > 2 needs ℓ ≤ -n + (p-n)/(p-2): (3, -0.5) is refused
    let params = WeightParams::new(2, 3.0, -0.5)?;
    let mesh = generate(&ShapeSpec::Square { a: 1.0, offset: [0.0, 0.0], h: 0.2 })?;
    let f = ScalarField::constant(&mesh, 1.0);
    let beta = RobinCoefficient::constant(&mesh, 1.0)?;
    let prob = RobinProblem::new(mesh, params, f, beta)?;
    let cfg = VerifyConfig::for_params(&params);
    let pair = solve_pair(&prob, &cfg)?;
    match verify_pointwise_comparison(&prob, &pair, &cfg) {
        Err(e) => println!("\n(p, ℓ) = (3, -0.5) refused as expected: {e}"),
        Ok(_) => println!("\nunexpected acceptance"),
    }
    Ok(())
}
