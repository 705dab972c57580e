//! Norm comparison between the solution on a general domain and the
//! solution of the symmetrized radial problem: the weighted L¹ norm and
//! the p-th power of the weighted L^p norm of u are dominated by those
//! of v, with Lorentz-norm comparisons as informational extras.
//!
//! ```bash
//! cargo run --example norm_comparison
//! ```

use symmcomp::expr::Expr;
use symmcomp::field::ScalarField;
use symmcomp::harness::{solve_pair, verify_norm_comparison, VerifyConfig};
use symmcomp::mesh::{generate, ShapeSpec};
use symmcomp::params::WeightParams;
use symmcomp::solver::{CoefRule, RobinCoefficient, RobinProblem};

fn main() -> symmcomp::Result<()> {
    let configs: Vec<(&str, ShapeSpec, f64, f64, &str, &str)> = vec![
        (
            "square, variable β",
            ShapeSpec::Square { a: 1.0, offset: [0.0, 0.0], h: 0.08 },
            2.0,
            -1.0,
            "1 + x*x",
            "1",
        ),
        (
            "off-center ellipse, bump source",
            ShapeSpec::Ellipse { a: 1.3, b: 0.8, offset: [0.2, 0.1], h: 0.1 },
            2.0,
            -0.5,
            "2 + 0.5*sin(3*x)",
            "exp(-2*r*r)",
        ),
        (
            "rectangle, p = 3",
            ShapeSpec::Rectangle { a: 1.2, b: 0.7, offset: [0.0, 0.0], h: 0.1 },
            3.0,
            -1.2,
            "1 + x*x",
            "1",
        ),
    ];
    for (name, shape, p, ell, beta_s, f_s) in configs {
        let params = WeightParams::new(2, p, ell)?;
        let mesh = generate(&shape)?;
        let fe = Expr::parse(f_s)?;
        let f = ScalarField::from_fn(&mesh, |x, y| fe.eval(x, y))?;
        let beta = RobinCoefficient::new(&mesh, CoefRule::Formula(Expr::parse(beta_s)?))?;
        let prob = RobinProblem::new(mesh, params, f, beta)?;
        let cfg = VerifyConfig::for_params(&params);
        let pair = solve_pair(&prob, &cfg)?;
        let rep = verify_norm_comparison(&prob, &pair, &cfg)?;
        println!("{name}  (p={p}, ℓ={ell}):");
        for row in &rep.rows {
            let tag = if row.informational { "info" } else { "check" };
            println!(
                "  [{tag}] {:<28} lhs {:>12.6}  rhs {:>12.6}  margin {:>+10.3e}",
                row.name, row.lhs, row.rhs, row.margin
            );
        }
        println!("  => {}\n", rep.summary_line());
    }
    Ok(())
}
