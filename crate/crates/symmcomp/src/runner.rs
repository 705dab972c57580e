//! Experiment orchestration: run a validated config end to end, write
//! artifacts (mesh, fields, curves, reports, plot scripts), and the mesh
//! generation / refinement / report-summary commands behind the CLI.

use crate::config::{parse_shape_spec, ExperimentConfig};
use crate::error::Error;
use crate::harness::{
    self, solve_pair, ComparisonReport, SolvedPair, VerifyConfig, CSV_HEADER,
};
use crate::mesh::{self, TriMesh};
use crate::rearrangement::{decreasing_rearrangement, distribution_function, weighted_rearrangement};
use crate::solver::RobinProblem;
use crate::spectral::EigenResult;
use crate::Result;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Worker cap from SYMMCOMP_THREADS (default 2, clamped to [1, 8]).
pub fn thread_cap() -> usize {
    std::env::var("SYMMCOMP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(2)
        .clamp(1, 8)
}

/// Run closures on at most `max_threads` workers; results are returned in
/// input order regardless of scheduling.
pub fn run_jobs<T, F>(jobs: Vec<F>, max_threads: usize) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let n = jobs.len();
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    let queue: Mutex<Vec<(usize, F)>> = Mutex::new(jobs.into_iter().enumerate().rev().collect());
    let active = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let workers = max_threads.max(1).min(n.max(1));
        for _ in 0..workers {
            active.fetch_add(1, Ordering::SeqCst);
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop();
                match job {
                    Some((idx, f)) => {
                        let out = f();
                        results.lock().unwrap()[idx] = Some(out);
                    }
                    None => break,
                }
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|o| o.expect("job completed"))
        .collect()
}

#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<ComparisonReport>,
    pub all_pass: bool,
    pub golden_status: GoldenStatus,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GoldenStatus {
    Disabled,
    Created,
    Matched,
    Drifted(String),
}

/// Execute the experiment described by the config and write all artifacts
/// under the configured output directory.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (problem, vc) = config.build_problem()?;
    let out_dir = PathBuf::from(&config.output.dir);
    std::fs::create_dir_all(&out_dir)?;
    problem.mesh.save(&out_dir.join("mesh.symmmesh"))?;

    let checks = &config.verify.checks;
    let known = ["norm_comparison", "pointwise", "faber_krahn", "minima", "flux"];
    for c in checks {
        if !known.contains(&c.as_str()) {
            return Err(Error::InvalidInput(format!("unknown check `{c}`")));
        }
    }
    let needs_pair = checks.iter().any(|c| c != "faber_krahn");
    let wants_fk = checks.iter().any(|c| c == "faber_krahn");

    // the pair pipeline and the eigenvalue pipeline are independent: run
    // them on separate workers when allowed
    let threads = thread_cap();
    enum JobOut {
        Pair(Result<SolvedPair>),
        Fk(Box<Result<(ComparisonReport, EigenResult, EigenResult)>>),
        None,
    }
    let jobs: Vec<Box<dyn FnOnce() -> JobOut + Send>> = vec![
        Box::new(|| {
            if needs_pair {
                JobOut::Pair(solve_pair(&problem, &vc))
            } else {
                JobOut::None
            }
        }),
        Box::new(|| {
            if wants_fk {
                JobOut::Fk(Box::new(harness::faber_krahn_with_fields(
                    &problem.mesh,
                    &problem.beta,
                    &problem.params,
                    &vc,
                )))
            } else {
                JobOut::None
            }
        }),
    ];
    let mut outs = run_jobs(jobs, threads);
    let fk_out = outs.pop().expect("two jobs");
    let pair_out = outs.pop().expect("two jobs");

    let pair = match pair_out {
        JobOut::Pair(r) => Some(r?),
        _ => None,
    };
    let fk = match fk_out {
        JobOut::Fk(r) => Some((*r)?),
        _ => None,
    };

    let mut reports: Vec<ComparisonReport> = Vec::new();
    for check in checks {
        match check.as_str() {
            "norm_comparison" => {
                reports.push(harness::verify_norm_comparison(&problem, pair.as_ref().unwrap(), &vc)?)
            }
            "pointwise" => {
                reports.push(harness::verify_pointwise_comparison(&problem, pair.as_ref().unwrap(), &vc)?)
            }
            "faber_krahn" => reports.push(fk.as_ref().expect("fk computed").0.clone()),
            "minima" => {
                reports.push(harness::verify_minima(&problem, pair.as_ref().unwrap(), &vc)?)
            }
            "flux" => reports.push(harness::verify_flux(&problem, pair.as_ref().unwrap(), &vc)?),
            _ => unreachable!(),
        }
    }

    write_artifacts(&out_dir, &problem, pair.as_ref(), &vc)?;
    if let Some((_, lam_mesh, lam_ball)) = &fk {
        let summary = serde_json::json!({
            "mesh": lam_mesh.summary(),
            "ball": lam_ball.summary(),
        });
        std::fs::write(out_dir.join("eigen.json"), serde_json::to_string_pretty(&summary).unwrap())?;
        std::fs::write(out_dir.join("eigen_mesh.csv"), lam_mesh.field_csv(Some(&problem.mesh)))?;
        std::fs::write(out_dir.join("eigen_ball.csv"), lam_ball.field_csv(None))?;
    }
    write_reports(&out_dir, &reports)?;
    let golden_status = golden_compare(config, &reports)?;
    let all_pass = reports.iter().all(|r| r.pass)
        && !matches!(golden_status, GoldenStatus::Drifted(_));
    Ok(RunOutcome { reports, all_pass, golden_status, out_dir })
}

fn write_artifacts(
    out: &Path,
    problem: &RobinProblem,
    pair: Option<&SolvedPair>,
    vc: &VerifyConfig,
) -> Result<()> {
    if let Some(pair) = pair {
        std::fs::write(out.join("u.csv"), pair.u.field.to_csv(&problem.mesh))?;
        std::fs::write(out.join("u.field"), pair.u.field.to_field_text())?;
        std::fs::write(out.join("v.csv"), pair.v.to_csv())?;
        let curve =
            distribution_function(&problem.mesh, &pair.u.field, &problem.params, vc.levels)?;
        std::fs::write(out.join("mu.csv"), curve.to_csv())?;
        let sharp = weighted_rearrangement(&decreasing_rearrangement(&curve), &problem.params);
        std::fs::write(out.join("usharp.csv"), sharp.to_csv())?;
        std::fs::write(out.join("f_star.csv"), {
            let (ss, us) = pair.sp.f_star.nodes();
            let mut s = String::from("s,f_star\n");
            for (a, b) in ss.iter().zip(us) {
                let _ = writeln!(s, "{a},{b}");
            }
            s
        })?;
        std::fs::write(out.join("plot.gp"), plot_script())?;
    }
    Ok(())
}

fn plot_script() -> &'static str {
    "# gnuplot script: pointwise comparison of the rearranged solution\n\
     set datafile separator ','\n\
     set key left bottom\n\
     set xlabel 'r'\n\
     set ylabel 'value'\n\
     plot 'usharp.csv' skip 1 using 1:2 with lines title 'u#', \\\n\
     	'v.csv' skip 1 using 1:2 with lines title 'v'\n\
     pause -1\n"
}

fn write_reports(out: &Path, reports: &[ComparisonReport]) -> Result<()> {
    let json = serde_json::to_string_pretty(reports).expect("reports serialize");
    std::fs::write(out.join("report.json"), json)?;
    let mut csv = String::from(CSV_HEADER);
    for r in reports {
        csv.push_str(&r.to_csv());
    }
    std::fs::write(out.join("report.csv"), csv)?;
    Ok(())
}

/// First-verified margins are stored under the golden directory; later
/// runs compare against them within a relative drift band.
fn golden_compare(config: &ExperimentConfig, reports: &[ComparisonReport]) -> Result<GoldenStatus> {
    if config.output.golden.is_empty() {
        return Ok(GoldenStatus::Disabled);
    }
    let dir = PathBuf::from(&config.output.golden);
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("margins.json");
    let current: Vec<(String, String, f64)> = reports
        .iter()
        .flat_map(|r| {
            r.rows
                .iter()
                .map(|row| (r.experiment.clone(), row.name.clone(), row.margin))
        })
        .collect();
    if !path.exists() {
        std::fs::write(&path, serde_json::to_string_pretty(&current).unwrap())?;
        return Ok(GoldenStatus::Created);
    }
    let stored: Vec<(String, String, f64)> =
        serde_json::from_str(&std::fs::read_to_string(&path)?).map_err(|e| {
            Error::ConfigParse {
                line: e.line(),
                field: "golden".into(),
                message: e.to_string(),
            }
        })?;
    if stored.len() != current.len() {
        return Ok(GoldenStatus::Drifted(format!(
            "row count changed: {} vs {}",
            stored.len(),
            current.len()
        )));
    }
    for ((se, sn, sm), (ce, cn, cm)) in stored.iter().zip(&current) {
        if se != ce || sn != cn {
            return Ok(GoldenStatus::Drifted(format!("row mismatch: {se}/{sn} vs {ce}/{cn}")));
        }
        let scale = sm.abs().max(1e-9);
        if (sm - cm).abs() > 1e-6 * scale {
            return Ok(GoldenStatus::Drifted(format!(
                "margin drift on {se}/{sn}: {sm} -> {cm}"
            )));
        }
    }
    Ok(GoldenStatus::Matched)
}

// ── mesh / refine / report commands ─────────────────────────────────

pub fn mesh_command(spec: &str, out: &Path) -> Result<()> {
    let shape = parse_shape_spec(spec)?;
    let mesh = mesh::generate(&shape)?;
    mesh.save(out)?;
    Ok(())
}

pub fn refine_command(input: &Path, out: Option<&Path>) -> Result<PathBuf> {
    let mesh = TriMesh::load(input)?;
    let refined = mesh.refined();
    let out_path = out.map(PathBuf::from).unwrap_or_else(|| {
        let mut p = input.to_path_buf();
        let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("mesh").to_string();
        p.set_file_name(format!("{stem}.refined.symmmesh"));
        p
    });
    refined.save(&out_path)?;
    Ok(out_path)
}

/// Aggregate report JSONs found under a directory into a summary string.
pub fn report_command(dir: &Path) -> Result<String> {
    let mut out = String::new();
    let mut entries: Vec<PathBuf> = Vec::new();
    collect_reports(dir, &mut entries)?;
    entries.sort();
    if entries.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no report.json files under {}",
            dir.display()
        )));
    }
    let mut all_pass = true;
    // margins across every collected run, keyed by (experiment, row, h),
    // for the margin-vs-h figure
    let mut margin_rows: Vec<(String, String, f64, f64)> = Vec::new();
    for path in &entries {
        let reports: Vec<ComparisonReport> =
            serde_json::from_str(&std::fs::read_to_string(path)?).map_err(|e| {
                Error::ConfigParse {
                    line: e.line(),
                    field: path.display().to_string(),
                    message: e.to_string(),
                }
            })?;
        let _ = writeln!(out, "{}:", path.display());
        for r in &reports {
            let _ = writeln!(out, "  {}", r.summary_line());
            all_pass &= r.pass;
            for row in &r.rows {
                margin_rows.push((r.experiment.clone(), row.name.clone(), r.h, row.margin));
            }
        }
    }
    let mut csv = String::from("experiment,row,h,margin\n");
    for (e, n, h, m) in &margin_rows {
        let _ = writeln!(csv, "{e},{},{h},{m}", n.replace(',', ";"));
    }
    std::fs::write(dir.join("margins_vs_h.csv"), csv)?;
    std::fs::write(
        dir.join("margin_vs_h.gp"),
        "# plot comparison margins against the mesh size collected by `report`\n\
         set datafile separator ','\nset logscale x\nset xlabel 'h'\nset ylabel 'margin'\n\
         plot 'margins_vs_h.csv' skip 1 using 3:4 with points title 'margins'\npause -1\n",
    )?;
    let _ = writeln!(out, "margins_vs_h.csv and margin_vs_h.gp written to {}", dir.display());
    let _ = writeln!(out, "overall: {}", if all_pass { "PASS" } else { "FAIL" });
    Ok(out)
}

fn collect_reports(dir: &Path, found: &mut Vec<PathBuf>) -> Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if path.is_dir() {
            collect_reports(&path, found)?;
        } else if path.file_name().is_some_and(|n| n == "report.json") {
            found.push(path);
        }
    }
    Ok(())
}
