//! Command-line front end: parse an experiment config, run the
//! requested experiments, emit one CSV per experiment plus a
//! human-readable PASS/FAIL summary.
//!
//! Exit-code contract (mapped by the binary): 0 all checks pass,
//! 1 some check failed, 2 configuration errors (with line/column),
//! 3 missing model capability, 4 numerical non-convergence.

pub mod config;
mod experiments;

pub use experiments::CheckResult;

use crate::error::Result;
use crate::numerics::quad::QuadratureSettings;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Output directory; overrides the config's `out_dir`.
    pub out_dir: Option<PathBuf>,
    /// Suppress the timestamp metadata line so reruns are byte-identical.
    pub reproducible: bool,
    /// Overrides every experiment's seed.
    pub seed: Option<u64>,
    /// Overrides every experiment's primary tolerance.
    pub tol: Option<f64>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub checks: Vec<CheckResult>,
    pub csv_files: Vec<PathBuf>,
    pub summary_path: PathBuf,
    pub summary_text: String,
    pub all_passed: bool,
}

pub fn run(config_path: &Path, opts: &RunOptions) -> Result<RunOutcome> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg = config::parse(&text)?;
    let out_dir = opts
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(cfg.global.str_or("out_dir", ".")));
    std::fs::create_dir_all(&out_dir)?;
    let global_seed = cfg.global.u64_opt("seed")?.unwrap_or(0);
    let global_tol = cfg.global.f64_opt("tol")?;
    let settings = QuadratureSettings::default();

    let mut checks = Vec::new();
    let mut csv_files = Vec::new();
    let mut name_counts: BTreeMap<String, usize> = BTreeMap::new();
    for section in &cfg.sections {
        let seed = match opts.seed {
            Some(s) => s,
            None => section.u64_opt("seed")?.unwrap_or(global_seed),
        };
        let tol = match opts.tol {
            Some(t) => Some(t),
            None => section.f64_opt("tol")?.or(global_tol),
        };
        let output = experiments::run_experiment(section, seed, tol, &settings)?;
        for mut table in output.tables {
            table.tag("experiment", &section.name);
            for (k, v) in section.echo() {
                table.tag(format!("config.{k}"), v);
            }
            table.tag("seed", seed);
            table.tag("version", env!("CARGO_PKG_VERSION"));
            if !opts.reproducible {
                let stamp = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                table.tag("timestamp", stamp);
            }
            let count = name_counts.entry(table.name.clone()).or_insert(0);
            *count += 1;
            let file_name = if *count == 1 {
                format!("{}.csv", table.name)
            } else {
                format!("{}-{}.csv", table.name, count)
            };
            let path = out_dir.join(file_name);
            table.write_csv(&path)?;
            csv_files.push(path);
        }
        checks.extend(output.checks);
    }

    let all_passed = checks.iter().all(|c| c.passed);
    let mut summary = String::new();
    let _ = writeln!(summary, "sbq experiment summary");
    let _ = writeln!(summary, "======================");
    for check in &checks {
        let _ = writeln!(
            summary,
            "{}  {} :: {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.experiment,
            check.name,
            check.detail
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(summary, "result: {passed}/{} checks passed", checks.len());
    let summary_path = out_dir.join("summary.txt");
    std::fs::write(&summary_path, &summary)?;

    Ok(RunOutcome {
        checks,
        csv_files,
        summary_path,
        summary_text: summary,
        all_passed,
    })
}

/// Plain-text catalogue mapping each experiment to the statement it
/// verifies. Stable across runs.
pub fn list_experiments() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "available experiments:");
    for (name, description, anchor) in experiments::catalogue() {
        let _ = writeln!(out, "  {name:<16} {description}");
        let _ = writeln!(out, "  {:16} verifies: {anchor}", "");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("exp.cfg");
        std::fs::write(&path, body).unwrap();
        path
    }

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("sbq-harness-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn catalogue_lists_eight_experiments() {
        let text = list_experiments();
        for name in config::EXPERIMENT_NAMES {
            assert!(text.contains(name), "missing {name}");
        }
        assert_eq!(text.matches("verifies:").count(), 8);
        assert_eq!(text, list_experiments());
    }

    #[test]
    fn small_run_produces_csv_and_summary() {
        let dir = temp_dir("run");
        let cfg = write_config(
            &dir,
            "seed = 5\n[surjectivity]\nmodel = circle\nn_modes = 16\nactive_modes = 4\nmax_mode = 8\nt = 0.4\n",
        );
        let opts = RunOptions {
            out_dir: Some(dir.clone()),
            reproducible: true,
            ..Default::default()
        };
        let outcome = run(&cfg, &opts).unwrap();
        assert!(outcome.all_passed, "{}", outcome.summary_text);
        assert_eq!(outcome.csv_files.len(), 1);
        let csv = std::fs::read_to_string(&outcome.csv_files[0]).unwrap();
        assert!(csv.starts_with("n,lambda,"));
        assert!(csv.contains("# experiment = surjectivity"));
        assert!(!csv.contains("timestamp"));
        let summary = std::fs::read_to_string(&outcome.summary_path).unwrap();
        assert!(summary.contains("PASS"));
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn reproducible_runs_are_byte_identical() {
        let dir = temp_dir("repro");
        let cfg = write_config(
            &dir,
            "[holo-change]\npairs = 2\nmodes = 3\nr = 0.1\nseed = 11\n",
        );
        let opts = RunOptions {
            out_dir: Some(dir.clone()),
            reproducible: true,
            ..Default::default()
        };
        let first = run(&cfg, &opts).unwrap();
        let csv1 = std::fs::read(&first.csv_files[0]).unwrap();
        let second = run(&cfg, &opts).unwrap();
        let csv2 = std::fs::read(&second.csv_files[0]).unwrap();
        assert_eq!(csv1, csv2);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn malformed_config_is_a_config_error() {
        let dir = temp_dir("bad");
        let cfg = write_config(&dir, "[multiplier-curve]\nnot a pair\n");
        let err = run(&cfg, &RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn seed_override_changes_draws() {
        let dir = temp_dir("seed");
        let cfg = write_config(&dir, "[holo-change]\npairs = 1\nmodes = 3\nseed = 1\n");
        let base = RunOptions {
            out_dir: Some(dir.clone()),
            reproducible: true,
            ..Default::default()
        };
        let with_seed = RunOptions {
            seed: Some(99),
            ..base.clone()
        };
        let a = run(&cfg, &base).unwrap();
        let csv_a = std::fs::read_to_string(&a.csv_files[0]).unwrap();
        let b = run(&cfg, &with_seed).unwrap();
        let csv_b = std::fs::read_to_string(&b.csv_files[0]).unwrap();
        assert_ne!(csv_a, csv_b);
        assert!(csv_b.contains("# seed = 99"));
        let _ = std::fs::remove_dir_all(&dir);
    }
}
