//! Emits standalone plotting scripts for result files. The harness never
//! executes them, so plotting stacks stay out of the build.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::records::{read_records, ResultRecord};

fn experiment_of(records: &[ResultRecord]) -> Result<&str> {
    let first = records
        .first()
        .ok_or_else(|| Error::Config("no records to plot".into()))?;
    for r in records {
        if r.experiment != first.experiment {
            return Err(Error::Config(format!(
                "mixed experiments in one results file: {} and {}",
                first.experiment, r.experiment
            )));
        }
    }
    Ok(&first.experiment)
}

/// Writes a python script next to `records_csv` that plots its contents.
/// Threshold runs get one crossing-probability series per (q, n); decay runs
/// get log-probability scatters with the fitted line per (q, p).
pub fn emit_plot_script(records_csv: &Path) -> Result<PathBuf> {
    let records = read_records(records_csv)?;
    let experiment = experiment_of(&records)?.to_string();
    let csv_name = records_csv
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::Config(format!("bad results path {records_csv:?}")))?;
    let body = match experiment.as_str() {
        "threshold" => threshold_script(csv_name),
        "decay" => decay_script(csv_name),
        other => {
            return Err(Error::Config(format!(
                "no plot layout for experiment {other:?}; plots exist for threshold and decay"
            )))
        }
    };
    let out = records_csv.with_file_name(format!("plot_{experiment}.py"));
    std::fs::write(&out, body)?;
    Ok(out)
}

fn preamble(csv_name: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Plots {csv_name}; run from the directory that holds it."""
import csv
from collections import defaultdict

import matplotlib.pyplot as plt

rows = []
with open("{csv_name}") as fh:
    for row in csv.DictReader(fh):
        rows.append(row)
"#
    )
}

fn threshold_script(csv_name: &str) -> String {
    preamble(csv_name)
        + r#"
series = defaultdict(list)
for row in rows:
    if row["metric"] != "P(Ch)":
        continue
    key = (float(row["q"]), int(row["n"]))
    series[key].append((float(row["p"]), float(row["value"]), float(row["stderr"] or 0.0)))

fig, ax = plt.subplots()
for (q, n), points in sorted(series.items()):
    points.sort()
    ps = [p for p, _, _ in points]
    vals = [v for _, v, _ in points]
    errs = [e for _, _, e in points]
    ax.errorbar(ps, vals, yerr=errs, marker="o", capsize=2, label=f"q={q:g}, n={n}")
ax.set_xlabel("p")
ax.set_ylabel("crossing probability")
ax.axhline(0.5, color="gray", lw=0.5)
ax.legend()
fig.savefig("threshold.png", dpi=150)
print("wrote threshold.png")
"#
}

fn decay_script(csv_name: &str) -> String {
    preamble(csv_name)
        + r#"
import math

points = defaultdict(list)
fits = defaultdict(dict)
for row in rows:
    key = (float(row["q"]), float(row["p"]))
    if row["metric"] == "P(connection)":
        points[key].append((int(row["a"]), float(row["value"])))
    elif row["metric"] in ("slope", "intercept"):
        fits[key][row["metric"]] = float(row["value"])

fig, ax = plt.subplots()
for key, pts in sorted(points.items()):
    q, p = key
    pts.sort()
    ds = [d for d, _ in pts]
    logs = [math.log(v) for _, v in pts]
    (line,) = ax.plot(ds, logs, "o", label=f"q={q:g}, p={p:g}")
    fit = fits.get(key)
    if fit and "slope" in fit and "intercept" in fit:
        ys = [fit["intercept"] + fit["slope"] * d for d in ds]
        ax.plot(ds, ys, "-", color=line.get_color())
ax.set_xlabel("distance d")
ax.set_ylabel("log P[0 <-> (d,0)]")
ax.legend()
fig.savefig("decay.png", dpi=150)
print("wrote decay.png")
"#
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::write_records;

    fn record(experiment: &str, metric: &str) -> ResultRecord {
        let mut r = ResultRecord::bare(experiment, 1, metric, 0.5);
        r.p = Some(0.5);
        r.q = Some(1.0);
        r.n = Some(4);
        r.a = Some(4);
        r.stderr = Some(0.01);
        r
    }

    #[test]
    fn threshold_script_references_csv_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("threshold.csv");
        write_records(&csv, &[record("threshold", "P(Ch)")]).unwrap();
        let script = emit_plot_script(&csv).unwrap();
        assert!(script.ends_with("plot_threshold.py"));
        let text = std::fs::read_to_string(&script).unwrap();
        assert!(text.contains("open(\"threshold.csv\")"), "{text}");
        assert!(text.contains("errorbar"));
    }

    #[test]
    fn decay_script_has_fit_line() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("decay.csv");
        let mut rows = vec![record("decay", "P(connection)")];
        rows.push(record("decay", "slope"));
        rows.push(record("decay", "intercept"));
        write_records(&csv, &rows).unwrap();
        let script = emit_plot_script(&csv).unwrap();
        let text = std::fs::read_to_string(&script).unwrap();
        assert!(text.contains("intercept"), "{text}");
    }

    #[test]
    fn empty_mixed_and_unplottable_inputs_error() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("x.csv");
        write_records(&csv, &[]).unwrap();
        assert!(emit_plot_script(&csv).is_err());
        write_records(&csv, &[record("threshold", "m"), record("decay", "m")]).unwrap();
        let err = emit_plot_script(&csv).unwrap_err();
        assert!(err.to_string().contains("mixed"), "{err}");
        write_records(&csv, &[record("menger-check", "mismatches")]).unwrap();
        assert!(emit_plot_script(&csv).is_err());
    }
}
