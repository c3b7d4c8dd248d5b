//! Long-format CSV tables with a `#` comment header.
//!
//! The second column is named after the swept variable. Analytic rows
//! carry `trials = 0` and `std_err = 0`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const COLUMNS: [&str; 8] = ["series", "x", "scheme", "destination", "method", "outage", "std_err", "trials"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub series: String,
    pub x: f64,
    pub scheme: String,
    pub destination: String,
    pub method: String,
    pub outage: f64,
    pub std_err: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub variable: String,
    /// Comment lines, without the leading `# `.
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Writes `# `-prefixed header lines, then a CSV table.
pub fn write_commented_csv<W: Write, S: AsRef<str>>(
    mut out: W,
    header: &[S],
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    for line in header {
        writeln!(out, "# {}", line.as_ref())?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut names = COLUMNS;
        names[1] = &self.variable;
        let rows = self.rows.iter().map(|r| {
            vec![
                r.series.clone(),
                r.x.to_string(),
                r.scheme.clone(),
                r.destination.clone(),
                r.method.clone(),
                r.outage.to_string(),
                r.std_err.to_string(),
                r.trials.to_string(),
            ]
        });
        write_commented_csv(out, &self.header, &names, rows)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Self> {
        let mut header = Vec::new();
        let mut body = String::new();
        let mut line = String::new();
        while input.read_line(&mut line)? > 0 {
            match line.strip_prefix('#') {
                Some(rest) if body.is_empty() => {
                    let rest = rest.trim_end_matches(['\n', '\r']);
                    header.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
                }
                _ => body.push_str(&line),
            }
            line.clear();
        }
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let names = rdr.headers()?.clone();
        if names.len() != COLUMNS.len() {
            return Err(Error::Parse { line: header.len() + 1, reason: format!("expected {} columns", COLUMNS.len()) });
        }
        let variable = names[1].to_string();
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = header.len() + i + 2;
            let num = |j: usize| {
                rec[j].parse::<f64>().map_err(|_| Error::Parse { line, reason: format!("bad number `{}`", &rec[j]) })
            };
            rows.push(SweepRow {
                series: rec[0].to_string(),
                x: num(1)?,
                scheme: rec[2].to_string(),
                destination: rec[3].to_string(),
                method: rec[4].to_string(),
                outage: num(5)?,
                std_err: num(6)?,
                trials: rec[7].parse().map_err(|_| Error::Parse { line, reason: format!("bad count `{}`", &rec[7]) })?,
            });
        }
        Ok(Self { variable, header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(outage: f64) -> SweepRow {
        SweepRow {
            series: "a1=0.8".into(),
            x: 1.0 / 3.0,
            scheme: "noma".into(),
            destination: "d1".into(),
            method: "monte-carlo".into(),
            outage,
            std_err: 1.234e-5,
            trials: 100_000,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let t = SweepTable {
            variable: "lambda_common".into(),
            header: vec!["sweep = figure 3".into(), "  beta = 0.0095".into()],
            rows: vec![row(0.123456789012345), row(1.0), row(0.0), row(f64::MIN_POSITIVE)],
        };
        let text = t.to_csv_string().unwrap();
        assert!(text.starts_with("# sweep = figure 3\n#   beta = 0.0095\nseries,lambda_common,"));
        let back = SweepTable::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn labels_with_commas_are_quoted() {
        let mut r = row(0.5);
        r.series = "rates=1.2,4".into();
        let t = SweepTable { variable: "x".into(), header: vec![], rows: vec![r] };
        let back = SweepTable::read_csv(t.to_csv_string().unwrap().as_bytes()).unwrap();
        assert_eq!(back, t);
    }
}
