use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::{csv_string, ReportFile, SummaryRow};
use crate::error::{CliError, EXIT_PASS};

pub const TABLE_FILE: &str = "summary.csv";
pub const MARGINS_FILE: &str = "margins.dat";

fn schema(path: &Path, what: &str) -> CliError {
    CliError::input(format!("{}: {what}", path.display()))
}

fn row(path: &Path, text: &str) -> Result<SummaryRow, CliError> {
    let file: ReportFile<Value> =
        serde_json::from_str(text).map_err(|e| schema(path, &format!("not a report file: {e}")))?;
    let margin_key = match file.command.as_str() {
        "check" => "worst_margin",
        "verify" => "tightness",
        other => return Err(schema(path, &format!("unknown command `{other}`"))),
    };
    let report = &file.report;
    let passed = report["passed"].as_bool().ok_or_else(|| schema(path, "missing `passed`"))?;
    let margin = report[margin_key].as_f64().ok_or_else(|| schema(path, &format!("missing `{margin_key}`")))?;
    let points_checked =
        report["points_checked"].as_u64().ok_or_else(|| schema(path, "missing `points_checked`"))? as usize;
    let witness: Vec<f64> = report["witness"]
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_f64).collect())
        .filter(|v: &Vec<f64>| v.len() == 4)
        .ok_or_else(|| schema(path, "`witness` is not a quaternion"))?;
    Ok(SummaryRow {
        command: file.command,
        kind: file.kind,
        series: file.series,
        passed,
        margin,
        witness_w: witness[0],
        witness_x: witness[1],
        witness_y: witness[2],
        witness_z: witness[3],
        points_checked,
    })
}

/// Rows of every `*.json` report in `dir`, ordered by kind and series name.
pub fn collect(dir: &Path) -> Result<Vec<SummaryRow>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut rows = paths
        .iter()
        .map(|p| row(p, &fs::read_to_string(p)?))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| (&a.kind, &a.series).cmp(&(&b.kind, &b.series)));
    Ok(rows)
}

/// Whitespace-separated columns for gnuplot; strings are quoted.
pub fn margins_text(rows: &[SummaryRow]) -> String {
    let mut s = String::from("# index margin passed kind series\n");
    for (i, r) in rows.iter().enumerate() {
        let esc = |t: &str| t.replace('"', "'");
        writeln!(s, "{i} {:e} {} \"{}\" \"{}\"", r.margin, u8::from(r.passed), esc(&r.kind), esc(&r.series)).unwrap();
    }
    s
}

pub fn run(dir: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let rows = collect(dir)?;
    let target = out.unwrap_or(dir);
    fs::create_dir_all(target)?;
    fs::write(target.join(TABLE_FILE), csv_string(&rows)?)?;
    fs::write(target.join(MARGINS_FILE), margins_text(&rows))?;
    Ok(EXIT_PASS)
}
