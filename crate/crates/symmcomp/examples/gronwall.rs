//! The differential Gronwall-type lemma as a numerical check: extremal
//! families achieve equality, random admissible instances hold strictly.
//!
//! ```bash
//! cargo run --example gronwall
//! ```

use symmcomp::gronwall::{verify_gronwall, GronwallInstance};

fn main() -> symmcomp::Result<()> {
    println!("extremal family ξ(τ) = τ^(p-1), C = 0 (equality throughout):");
    for p in [2.0, 3.0, 4.5] {
        let inst = GronwallInstance::extremal(p, 0.7);
        let rep = verify_gronwall(&inst, 7.0, 1e-10)?;
        println!(
            "  p = {p}: conclusion margins (i) {:+.2e}, (ii) {:+.2e}",
            rep.conclusion_i_margin, rep.conclusion_ii_margin
        );
    }
    println!("\nshifted family ξ(τ) = a τ^(p-1) - C/(p-1):");
    let inst = GronwallInstance::power_family(2.5, 1.3, 3.0, 1.0);
    let rep = verify_gronwall(&inst, 10.0, 1e-10)?;
    println!(
        "  a=2.5, C=1.3, p=3: (i) {:+.2e}, (ii) {:+.2e}",
        rep.conclusion_i_margin, rep.conclusion_ii_margin
    );

    println!("\nrandom instances (hypothesis strict by construction):");
    for seed in 0..5 {
        let inst = GronwallInstance::random_concave(seed, 2.5 + seed as f64 * 0.4, 0.5, 5.0);
        let rep = verify_gronwall(&inst, 5.0, 1e-10)?;
        println!(
            "  seed {seed}: hypothesis margin {:+.3e}, (i) {:+.3e}, (ii) {:+.3e} -> {}",
            rep.hypothesis_margin,
            rep.conclusion_i_margin,
            rep.conclusion_ii_margin,
            if rep.pass { "pass" } else { "fail" }
        );
    }
    Ok(())
}
