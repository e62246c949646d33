use std::time::Instant;

use serde::Serialize;

use dp6a2::surface::direct_count;
use dp6a2::torsor::{torsor_count, zero_coordinate_count};

use crate::report::{decimal, decimal_opt, RunReport};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Torsor,
    Both,
}

/// One height bound of a count sweep; also a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    #[serde(rename = "B")]
    pub bound: i64,
    #[serde(rename = "N_direct", serialize_with = "decimal_opt")]
    pub n_direct: Option<u64>,
    #[serde(rename = "T", serialize_with = "decimal_opt")]
    pub torsor: Option<u64>,
    #[serde(rename = "N_zero", serialize_with = "decimal_opt")]
    pub n_zero: Option<u64>,
    #[serde(rename = "N_torsor_total", serialize_with = "decimal_opt")]
    pub n_torsor_total: Option<u64>,
    pub seconds_direct: Option<f64>,
    pub seconds_torsor: Option<f64>,
}

impl CountRow {
    /// `None` unless both methods ran.
    pub fn equal(&self) -> Option<bool> {
        Some(self.n_direct? == self.n_torsor_total?)
    }
}

#[derive(Serialize)]
struct CountResults<'a> {
    rows: &'a [CountRow],
    #[serde(skip_serializing_if = "Option::is_none")]
    equal: Option<bool>,
    #[serde(serialize_with = "decimal")]
    points_counted: u64,
}

/// Counts `N_U(B)` for each bound by the chosen method(s). With
/// [`Method::Both`] the report fails unless `N_U = 2T + N_zero` everywhere.
pub fn cmd_count(bounds: &[i64], method: Method) -> Result<(RunReport, Vec<CountRow>)> {
    let mut rows = Vec::with_capacity(bounds.len());
    for &b in bounds {
        let mut row = CountRow {
            bound: b,
            n_direct: None,
            torsor: None,
            n_zero: None,
            n_torsor_total: None,
            seconds_direct: None,
            seconds_torsor: None,
        };
        if method != Method::Direct {
            let t0 = Instant::now();
            let t = torsor_count(b)?;
            let z = zero_coordinate_count(b)?.total();
            row.seconds_torsor = Some(t0.elapsed().as_secs_f64());
            row.torsor = Some(t);
            row.n_zero = Some(z);
            row.n_torsor_total = Some(2 * t + z);
        }
        if method != Method::Torsor {
            let t0 = Instant::now();
            row.n_direct = Some(direct_count(b)?.total);
            row.seconds_direct = Some(t0.elapsed().as_secs_f64());
        }
        rows.push(row);
    }

    let equal = (method == Method::Both).then(|| rows.iter().all(|r| r.equal() == Some(true)));
    let mut report = RunReport::new("count")
        .param("max_height", bounds)
        .param("method", method);
    report.results = serde_json::to_value(CountResults {
        rows: &rows,
        equal,
        points_counted: rows
            .iter()
            .filter_map(|r| r.n_torsor_total.or(r.n_direct))
            .sum(),
    })?;
    for (key, pick) in [
        ("direct", (|r: &CountRow| r.seconds_direct) as fn(&CountRow) -> Option<f64>),
        ("torsor", |r: &CountRow| r.seconds_torsor),
    ] {
        let secs: Vec<f64> = rows.iter().filter_map(pick).collect();
        if !secs.is_empty() {
            report.timings.insert(key.to_string(), secs.iter().sum());
        }
    }
    report.passed = equal.unwrap_or(true);
    Ok((report, rows))
}

/// The rows as CSV with the header
/// `B,N_direct,T,N_zero,N_torsor_total,seconds_direct,seconds_torsor`.
pub fn rows_to_csv(rows: &[CountRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
