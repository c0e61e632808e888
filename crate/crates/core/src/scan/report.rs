use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use super::ScanRecord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "text" => Ok(ReportFormat::Text),
            _ => Err(Error::BadArgs(format!("unknown report format '{s}'"))),
        }
    }
}

pub const COLUMNS: [&str; 13] = [
    "label",
    "order",
    "sd_num",
    "sd_den",
    "sdstar_num",
    "sdstar_den",
    "iwasawa",
    "schmidt",
    "nilpotent",
    "solvable",
    "verdict",
    "boundary_hit",
    "argmin_section",
];

/// One report row; field order is the column order.
#[derive(Serialize)]
struct Row<'a> {
    label: &'a str,
    order: usize,
    sd_num: String,
    sd_den: String,
    sdstar_num: String,
    sdstar_den: String,
    iwasawa: bool,
    schmidt: bool,
    nilpotent: bool,
    solvable: bool,
    verdict: &'static str,
    boundary_hit: bool,
    argmin_section: &'a str,
}

impl<'a> From<&'a ScanRecord> for Row<'a> {
    fn from(r: &'a ScanRecord) -> Self {
        Row {
            label: &r.label,
            order: r.order,
            sd_num: r.sd.numer().to_string(),
            sd_den: r.sd.denom().to_string(),
            sdstar_num: r.sd_star.numer().to_string(),
            sdstar_den: r.sd_star.denom().to_string(),
            iwasawa: r.iwasawa,
            schmidt: r.schmidt,
            nilpotent: r.nilpotent,
            solvable: r.solvable,
            verdict: r.verdict.as_str(),
            boundary_hit: r.boundary_hit,
            argmin_section: &r.argmin_section,
        }
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub fn emit_report(records: &[ScanRecord], format: ReportFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(COLUMNS).map_err(io)?;
            for r in records {
                w.serialize(Row::from(r)).map_err(io)?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let rows: Vec<Row> = records.iter().map(Row::from).collect();
            serde_json::to_writer_pretty(&mut *out, &rows).map_err(io)?;
            writeln!(out)?;
        }
        ReportFormat::Text => {
            let header = ["label", "order", "sd", "sd*", "flags", "verdict", "argmin"];
            let body: Vec<[String; 7]> = records
                .iter()
                .map(|r| {
                    let flags: String = [(r.iwasawa, 'I'), (r.schmidt, 'S'), (r.nilpotent, 'N'), (r.solvable, 'R')]
                        .iter()
                        .map(|&(on, c)| if on { c } else { '-' })
                        .collect();
                    let star = if r.boundary_hit { format!("{} *", r.sd_star) } else { r.sd_star.to_string() };
                    [
                        r.label.clone(),
                        r.order.to_string(),
                        r.sd.to_string(),
                        star,
                        flags,
                        r.verdict.to_string(),
                        r.argmin_section.clone(),
                    ]
                })
                .collect();
            let mut widths = header.map(str::len);
            for row in &body {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| -> String {
                let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(&header.map(String::from)))?;
            for row in &body {
                writeln!(out, "{}", line(row))?;
            }
            writeln!(out, "flags: I iwasawa, S schmidt, N nilpotent, R solvable; * marks sd* = 23/25")?;
            writeln!(out, "catalog: constructed families plus ingested files, not every group of each order")?;
        }
    }
    Ok(())
}
