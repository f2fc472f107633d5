//! Aggregated run reports. Keys come out sorted and floats in shortest
//! round-trip form, so reports diff cleanly and are stable across runs.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::checks::{run_check, run_global, Check, CheckResult, GlobalCheck, Options, Status};
use igusa_core::Result;

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    /// `entry/check` for every failure, in report order.
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub entries: Vec<EntryReport>,
    pub global: Vec<CheckResult>,
    pub summary: Summary,
    pub status: Status,
}

impl RunReport {
    pub fn new(entries: Vec<EntryReport>, global: Vec<CheckResult>) -> Self {
        let mut summary = Summary::default();
        let tagged = entries
            .iter()
            .flat_map(|e| e.checks.iter().map(move |c| (e.name.as_str(), c)))
            .chain(global.iter().map(|c| ("global", c)));
        for (name, c) in tagged {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Vacuous => summary.vacuous += 1,
                Status::Fail => {
                    summary.fail += 1;
                    summary.failed.push(format!("{name}/{}", c.check));
                }
            }
        }
        let status = if summary.fail > 0 { Status::Fail } else { Status::Pass };
        RunReport { entries, global, summary, status }
    }

    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Fail {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs checks over entries in parallel; aggregation follows input order.
pub fn run(entries: &[CatalogEntry], checks: &[Check], globals: &[GlobalCheck], opts: &Options) -> Result<RunReport> {
    let per_entry: Vec<Result<EntryReport>> = entries
        .par_iter()
        .map(|e| {
            let checks = checks.iter().map(|&c| run_check(c, e, opts)).collect::<Result<Vec<_>>>()?;
            Ok(EntryReport { name: e.name.clone(), checks })
        })
        .collect();
    let global: Vec<Result<CheckResult>> = globals.par_iter().map(|&g| run_global(g, opts)).collect();
    let entries = per_entry.into_iter().collect::<Result<Vec<_>>>()?;
    let global = global.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RunReport::new(entries, global))
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    fn r(check: &str, status: Status) -> CheckResult {
        CheckResult { check: check.into(), status, details: json!({}), seconds: None }
    }

    #[test]
    fn summary_names_failures() {
        let rep = RunReport::new(
            vec![EntryReport { name: "xsq".into(), checks: vec![r("decay", Status::Pass), r("denef", Status::Fail)] }],
            vec![r("gauss", Status::Vacuous)],
        );
        assert_eq!(rep.summary.failed, vec!["xsq/denef".to_string()]);
        assert_eq!((rep.summary.pass, rep.summary.vacuous), (1, 1));
        assert_eq!(rep.exit_code(), 1);
        let text = rep.to_json();
        assert!(text.find("\"entries\"").unwrap() < text.find("\"global\"").unwrap());
        assert!(!text.contains("seconds"));
    }
}
