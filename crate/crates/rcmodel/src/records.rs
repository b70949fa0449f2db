//! Self-describing CSV results: one schema for every experiment, each row
//! carrying its seed and full parameter echo.

use std::path::Path;

use crate::error::{Error, Result};
use crate::exact::Bc;

/// Column names, in order. The header line must match this exactly.
pub const CSV_COLUMNS: [&str; 20] = [
    "experiment",
    "kind",
    "p",
    "q",
    "bc",
    "n",
    "a",
    "b",
    "margin",
    "sweeps",
    "burnin",
    "thin",
    "seed",
    "generator",
    "metric",
    "value",
    "stderr",
    "nsamples",
    "wallclock_s",
    "version",
];

/// One output row. Inapplicable parameters stay `None` and serialize as
/// empty fields; seed, metric, and value are always present.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRecord {
    pub experiment: String,
    /// how the value was produced: "exact", "heatbath", or "sw"
    pub kind: String,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub bc: Option<Bc>,
    pub n: Option<i32>,
    pub a: Option<i32>,
    pub b: Option<i32>,
    pub margin: Option<i32>,
    pub sweeps: Option<u64>,
    pub burnin: Option<u64>,
    pub thin: Option<u64>,
    pub seed: u64,
    /// RNG family behind sampled values; empty for exact computation
    pub generator: String,
    pub metric: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub nsamples: Option<u64>,
    pub wallclock_s: f64,
    pub version: String,
}

impl ResultRecord {
    /// A record with only the always-present fields filled in.
    pub fn bare(experiment: &str, seed: u64, metric: &str, value: f64) -> ResultRecord {
        ResultRecord {
            experiment: experiment.to_string(),
            kind: "exact".to_string(),
            p: None,
            q: None,
            bc: None,
            n: None,
            a: None,
            b: None,
            margin: None,
            sweeps: None,
            burnin: None,
            thin: None,
            seed,
            generator: String::new(),
            metric: metric.to_string(),
            value,
            stderr: None,
            nsamples: None,
            wallclock_s: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn fields(&self) -> [String; 20] {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        [
            self.experiment.clone(),
            self.kind.clone(),
            opt(&self.p),
            opt(&self.q),
            opt(&self.bc),
            opt(&self.n),
            opt(&self.a),
            opt(&self.b),
            opt(&self.margin),
            opt(&self.sweeps),
            opt(&self.burnin),
            opt(&self.thin),
            self.seed.to_string(),
            self.generator.clone(),
            self.metric.clone(),
            self.value.to_string(),
            opt(&self.stderr),
            opt(&self.nsamples),
            self.wallclock_s.to_string(),
            self.version.clone(),
        ]
    }

    /// Sort key making output order a function of parameters, not timing.
    pub fn sort_key(&self) -> impl Ord {
        (
            self.experiment.clone(),
            self.q.map(f64::to_bits),
            self.p.map(f64::to_bits),
            self.bc.map(|b| b.to_string()),
            self.n,
            self.a,
            self.b,
            self.metric.clone(),
        )
    }
}

/// Writes records (sorted by parameter tuple) with the fixed header.
pub fn write_records(path: &Path, records: &[ResultRecord]) -> Result<()> {
    let mut sorted: Vec<&ResultRecord> = records.iter().collect();
    sorted.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_COLUMNS)?;
    for r in sorted {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

fn parse_opt<T: std::str::FromStr>(s: &str, col: &str, line: usize) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<T>()
        .map(Some)
        .map_err(|_| Error::Config(format!("row {line}: column {col} holds unparsable {s:?}")))
}

/// Reads a results CSV back, enforcing the schema.
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut rows = reader.records();
    let header = rows
        .next()
        .ok_or_else(|| Error::Config("results file is empty".into()))?
        .map_err(|e| Error::Config(format!("results read: {e}")))?;
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Config(format!(
            "header mismatch: expected {}, got {}",
            CSV_COLUMNS.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in rows.enumerate() {
        let row = row.map_err(|e| Error::Config(format!("results read: {e}")))?;
        let line = i + 2;
        if row.len() != CSV_COLUMNS.len() {
            return Err(Error::Config(format!(
                "row {line}: {} fields, schema has {}",
                row.len(),
                CSV_COLUMNS.len()
            )));
        }
        let get = |j: usize| row.get(j).unwrap();
        let required = |j: usize| -> Result<&str> {
            let s = row.get(j).unwrap();
            if s.is_empty() {
                return Err(Error::Config(format!(
                    "row {line}: required column {} is empty",
                    CSV_COLUMNS[j]
                )));
            }
            Ok(s)
        };
        let bc = match get(4) {
            "" => None,
            other => Some(
                other
                    .parse::<Bc>()
                    .map_err(|_| Error::Config(format!("row {line}: bad bc {other:?}")))?,
            ),
        };
        out.push(ResultRecord {
            experiment: required(0)?.to_string(),
            kind: required(1)?.to_string(),
            p: parse_opt(get(2), "p", line)?,
            q: parse_opt(get(3), "q", line)?,
            bc,
            n: parse_opt(get(5), "n", line)?,
            a: parse_opt(get(6), "a", line)?,
            b: parse_opt(get(7), "b", line)?,
            margin: parse_opt(get(8), "margin", line)?,
            sweeps: parse_opt(get(9), "sweeps", line)?,
            burnin: parse_opt(get(10), "burnin", line)?,
            thin: parse_opt(get(11), "thin", line)?,
            seed: required(12)?
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("row {line}: bad seed")))?,
            generator: get(13).to_string(),
            metric: required(14)?.to_string(),
            value: required(15)?
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("row {line}: bad value")))?,
            stderr: parse_opt(get(16), "stderr", line)?,
            nsamples: parse_opt(get(17), "nsamples", line)?,
            wallclock_s: required(18)?
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("row {line}: bad wallclock_s")))?,
            version: required(19)?.to_string(),
        });
    }
    Ok(out)
}

/// Checks a results file against the schema: exact header, parsable types,
/// no missing seeds or metrics. Returns the row count.
pub fn validate_schema(path: &Path) -> Result<usize> {
    Ok(read_records(path)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultRecord {
        let mut r = ResultRecord::bare("threshold", 9, "P(Ch)", 0.5);
        r.kind = "heatbath".into();
        r.p = Some(0.45);
        r.q = Some(2.0);
        r.bc = Some(Bc::Wired);
        r.n = Some(8);
        r.margin = Some(2);
        r.sweeps = Some(1000);
        r.burnin = Some(100);
        r.thin = Some(5);
        r.generator = "chacha12".into();
        r.stderr = Some(0.003);
        r.nsamples = Some(180);
        r.wallclock_s = 1.25;
        r
    }

    #[test]
    fn write_read_roundtrip_and_sorting() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut second = sample();
        second.p = Some(0.4);
        second.metric = "P(Ch)".into();
        write_records(&path, &[sample(), second.clone()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&(CSV_COLUMNS.join(",") + "\n")), "{text}");
        let back = read_records(&path).unwrap();
        assert_eq!(back.len(), 2);
        // sorted by p, so the 0.4 row leads regardless of input order
        assert_eq!(back[0], second);
        assert_eq!(back[1], sample());
        assert_eq!(validate_schema(&path).unwrap(), 2);
    }

    #[test]
    fn schema_rejects_missing_seed_and_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let header = CSV_COLUMNS.join(",");
        let row_no_seed = "threshold,heatbath,0.5,1,,8,,,2,1000,100,5,,chacha12,m,0.5,,180,0.1,0.1.0";
        std::fs::write(&path, format!("{header}\n{row_no_seed}\n")).unwrap();
        let err = validate_schema(&path).unwrap_err();
        assert!(err.to_string().contains("seed"), "{err}");
        std::fs::write(&path, "a,b,c\n1,2,3\n").unwrap();
        let err = validate_schema(&path).unwrap_err();
        assert!(err.to_string().contains("header"), "{err}");
    }

    #[test]
    fn schema_rejects_unparsable_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let header = CSV_COLUMNS.join(",");
        let row = "threshold,heatbath,half,1,,8,,,2,1000,100,5,3,chacha12,m,0.5,,180,0.1,0.1.0";
        std::fs::write(&path, format!("{header}\n{row}\n")).unwrap();
        let err = validate_schema(&path).unwrap_err();
        assert!(err.to_string().contains("column p"), "{err}");
    }
}
