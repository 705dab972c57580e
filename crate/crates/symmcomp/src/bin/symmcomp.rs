//! Command-line front end: `run <cfg>`, `mesh <spec> -o <file>`,
//! `refine <file> [-o <file>]`, `report --dir <dir>`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use symmcomp::config::ExperimentConfig;
use symmcomp::runner;

const USAGE: &str = "\
symmcomp — weighted symmetrization toolkit for the Robin p-Poisson problem

USAGE:
  symmcomp run <config>              run the experiment described by a config
                                     (flat key-value or JSON); exit 0 iff all
                                     non-informational checks pass
  symmcomp mesh <spec> -o <file>     generate a mesh, e.g. 'disk r=1 h=0.05'
  symmcomp refine <file> [-o <out>]  uniform midpoint refinement
  symmcomp report --dir <dir>        summarize report.json files under <dir>

Environment: SYMMCOMP_THREADS caps the worker count (default 2).
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(args: &[String]) -> symmcomp::Result<ExitCode> {
    match args.first().map(String::as_str) {
        Some("run") => {
            let path = expect_arg(args, 1, "config path")?;
            let cfg = ExperimentConfig::load(Path::new(&path))?;
            let outcome = runner::run(&cfg)?;
            for r in &outcome.reports {
                println!("{}", r.summary_line());
            }
            match &outcome.golden_status {
                runner::GoldenStatus::Created => println!("golden margins recorded"),
                runner::GoldenStatus::Matched => println!("golden margins matched"),
                runner::GoldenStatus::Drifted(d) => println!("golden drift: {d}"),
                runner::GoldenStatus::Disabled => {}
            }
            println!("artifacts in {}", outcome.out_dir.display());
            Ok(if outcome.all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Some("mesh") => {
            let spec = expect_arg(args, 1, "shape spec")?;
            let out = flag_value(args, "-o")
                .ok_or_else(|| symmcomp::Error::InvalidInput("mesh requires -o <file>".into()))?;
            runner::mesh_command(&spec, Path::new(&out))?;
            println!("wrote {out}");
            Ok(ExitCode::SUCCESS)
        }
        Some("refine") => {
            let input = expect_arg(args, 1, "mesh path")?;
            let out = flag_value(args, "-o").map(PathBuf::from);
            let written = runner::refine_command(Path::new(&input), out.as_deref())?;
            println!("wrote {}", written.display());
            Ok(ExitCode::SUCCESS)
        }
        Some("report") => {
            let dir = flag_value(args, "--dir").ok_or_else(|| {
                symmcomp::Error::InvalidInput("report requires --dir <dir>".into())
            })?;
            let summary = runner::report_command(Path::new(&dir))?;
            print!("{summary}");
            let ok = summary.trim_end().ends_with("PASS");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Some("--help" | "-h" | "help") | None => {
            print!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        Some(other) => {
            eprintln!("unknown command `{other}`\n\n{USAGE}");
            Ok(ExitCode::from(2))
        }
    }
}

fn expect_arg(args: &[String], idx: usize, what: &str) -> symmcomp::Result<String> {
    args.get(idx)
        .cloned()
        .ok_or_else(|| symmcomp::Error::InvalidInput(format!("missing {what}")))
}

fn flag_value(args: &[String], flag: &str) -> Option<String> {
    args.iter()
        .position(|a| a == flag)
        .and_then(|i| args.get(i + 1).cloned())
}
