//! Persisted reports under the run directory.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::report::VerificationReport;

pub const RUN_DIR_ENV: &str = "SYMKIT_RUN_DIR";
pub const DEFAULT_RUN_DIR: &str = "symkit-runs";

pub fn run_dir() -> PathBuf {
    std::env::var_os(RUN_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_RUN_DIR))
}

/// `<timestamp>-<seed>`, with a UTC timestamp that sorts chronologically.
pub fn run_name(now: chrono::DateTime<chrono::Utc>, seed: u64) -> String {
    format!("{}-{}", now.format("%Y%m%dT%H%M%S%3fZ"), seed)
}

pub fn save(dir: &Path, report: &VerificationReport) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!(
        "{}.json",
        run_name(chrono::Utc::now(), report.seed)
    ));
    fs::write(&path, report.to_json())?;
    Ok(path)
}

fn runs(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

/// Finds a run by stem, file name, path, or `latest`.
pub fn locate(dir: &Path, run: &str) -> Option<PathBuf> {
    if run == "latest" {
        return runs(dir).ok()?.pop();
    }
    let direct = Path::new(run);
    if direct.components().count() > 1 && direct.is_file() {
        return Some(direct.to_path_buf());
    }
    let name = if run.ends_with(".json") {
        run.to_string()
    } else {
        format!("{}.json", run)
    };
    let p = dir.join(name);
    p.is_file().then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn names_sort_by_time() {
        let a = run_name(
            chrono::Utc.with_ymd_and_hms(2026, 1, 2, 3, 4, 5).unwrap(),
            7,
        );
        let b = run_name(
            chrono::Utc.with_ymd_and_hms(2026, 1, 2, 3, 4, 6).unwrap(),
            1,
        );
        assert_eq!(a, "20260102T030405000Z-7");
        assert!(a < b);
    }
}
