use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::Result;
use crate::harness::config_file::parse_config;
use crate::harness::experiment::run_experiment;

/// One line of the suite summary.
#[derive(Debug)]
pub struct SuiteRow {
    pub file: String,
    pub config_hash: String,
    pub algorithm: String,
    pub schedule: String,
    pub error_mode: String,
    pub slope: Option<f64>,
    pub majorant_ok: Option<bool>,
    pub certificate_ok: Option<bool>,
    /// "ok", "aborted: ...", or "error: ..." for configs that failed to
    /// parse or run at all.
    pub status: String,
}

#[derive(Debug)]
pub struct SuiteSummary {
    pub rows: Vec<SuiteRow>,
    pub summary_path: PathBuf,
}

impl SuiteSummary {
    /// True when any run aborted, failed outright, or flunked one of its
    /// enabled checks.
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| {
            r.status != "ok"
                || r.majorant_ok == Some(false)
                || r.certificate_ok == Some(false)
        })
    }
}

/// Run every `.cfg` file in `dir` (sorted by name, `jobs` in parallel) and
/// write `summary.csv` into `out_dir`. Individual failures become summary
/// rows instead of aborting the sweep.
pub fn run_suite(dir: &Path, out_dir: &Path, jobs: usize) -> Result<SuiteSummary> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "cfg"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(crate::error::Error::Config {
            key: "suite".into(),
            message: format!("no .cfg files found in {}", dir.display()),
        });
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let rows: Vec<SuiteRow> = pool.install(|| {
        files
            .par_iter()
            .map(|path| run_one(path, out_dir))
            .collect()
    });

    std::fs::create_dir_all(out_dir)?;
    let summary_path = out_dir.join("summary.csv");
    std::fs::write(&summary_path, summary_csv(&rows))?;
    Ok(SuiteSummary { rows, summary_path })
}

fn run_one(path: &Path, out_dir: &Path) -> SuiteRow {
    let file = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let cfg = match parse_config(path) {
        Ok(cfg) => cfg,
        Err(e) => {
            return SuiteRow {
                file,
                config_hash: String::new(),
                algorithm: String::new(),
                schedule: String::new(),
                error_mode: String::new(),
                slope: None,
                majorant_ok: None,
                certificate_ok: None,
                status: format!("error: {e}"),
            }
        }
    };
    let schedule = cfg.algorithm.schedule.describe();
    let error_mode = cfg.algorithm.error_mode.name().to_string();
    match run_experiment(&cfg, out_dir) {
        Ok(out) => SuiteRow {
            file,
            config_hash: out.report.config_hash.clone(),
            algorithm: out.report.algorithm.clone(),
            schedule,
            error_mode,
            slope: out.report.slope,
            majorant_ok: out.report.majorant_ok,
            certificate_ok: out.report.certificate_ok,
            status: match out.abort_message {
                None => "ok".into(),
                Some(msg) => format!("aborted: {msg}"),
            },
        },
        Err(e) => SuiteRow {
            file,
            config_hash: cfg.hash(),
            algorithm: cfg.algorithm.algorithm.name().into(),
            schedule,
            error_mode,
            slope: None,
            majorant_ok: None,
            certificate_ok: None,
            status: format!("error: {e}"),
        },
    }
}

fn summary_csv(rows: &[SuiteRow]) -> String {
    let mut out =
        String::from("file,config_hash,algorithm,schedule,error_mode,slope,majorant_ok,certificate_ok,status\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},\"{}\"",
            r.file,
            r.config_hash,
            r.algorithm,
            r.schedule,
            r.error_mode,
            r.slope.map(|s| s.to_string()).unwrap_or_default(),
            opt_bool(r.majorant_ok),
            opt_bool(r.certificate_ok),
            r.status.replace('"', "'"),
        );
    }
    out
}

fn opt_bool(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_cfg(dir: &Path, name: &str, body: &str) {
        std::fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn suite_runs_sorted_and_collects_failures() {
        let dir = tempfile::tempdir().unwrap();
        let out = tempfile::tempdir().unwrap();
        write_cfg(
            dir.path(),
            "b_wrga.cfg",
            "objective.f = 0.5, 0.5\nalgorithm.name = wrga\nrun.max_iterations = 40\nbref.mode = analytic\nanalysis.fit_lo = 5\n",
        );
        write_cfg(
            dir.path(),
            "a_broken.cfg",
            "objective.f = 0.5\nalgorithm.name = nonsense\nrun.max_iterations = 5\n",
        );
        write_cfg(dir.path(), "ignored.txt", "not a config");

        let summary = run_suite(dir.path(), out.path(), 2).unwrap();
        assert_eq!(summary.rows.len(), 2);
        assert_eq!(summary.rows[0].file, "a_broken.cfg");
        assert!(summary.rows[0].status.starts_with("error:"));
        assert_eq!(summary.rows[1].file, "b_wrga.cfg");
        assert_eq!(summary.rows[1].status, "ok");
        assert_eq!(summary.rows[1].majorant_ok, Some(true));
        assert!(summary.any_failed());

        let csv = std::fs::read_to_string(&summary.summary_path).unwrap();
        assert!(csv.starts_with("file,config_hash,algorithm"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn clean_suite_reports_success() {
        let dir = tempfile::tempdir().unwrap();
        let out = tempfile::tempdir().unwrap();
        write_cfg(
            dir.path(),
            "run.cfg",
            "objective.f = 0.3, 0.4\nalgorithm.name = rega\nrun.max_iterations = 40\nbref.mode = analytic\nanalysis.fit_lo = 5\n",
        );
        let summary = run_suite(dir.path(), out.path(), 1).unwrap();
        assert!(!summary.any_failed(), "{:?}", summary.rows);
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = tempfile::tempdir().unwrap();
        assert!(run_suite(dir.path(), out.path(), 1).is_err());
    }
}
