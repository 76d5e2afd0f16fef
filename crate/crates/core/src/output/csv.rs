use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::analysis::{ConvergenceReport, ErrorColumn, LevelRecord};
use crate::{Error, Result};

pub const HEADER: [&str; 14] = [
    "p",
    "i",
    "sigma0",
    "sigma1",
    "n",
    "h",
    "l2_u",
    "rate_l2_u",
    "energy_u",
    "rate_energy_u",
    "l2_v",
    "rate_l2_v",
    "j_semi",
    "max_uh",
];

/// Shortest scientific representation that parses back to the same bits.
fn sci(x: f64) -> String {
    format!("{x:e}")
}

fn rate_field(rate: Option<f64>) -> String {
    rate.map(sci).unwrap_or_default()
}

/// Serialises `report` as CSV text.
pub fn to_csv_string(report: &ConvergenceReport) -> Result<String> {
    if report.levels.is_empty() {
        return Err(Error::NotEnoughLevels { needed: 1, got: 0 });
    }
    let rate_l2 = report.rates(ErrorColumn::L2U);
    let rate_energy = report.rates(ErrorColumn::EnergyU);
    let rate_v = report.rates(ErrorColumn::L2V);
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(HEADER)?;
    for (k, level) in report.levels.iter().enumerate() {
        writer.write_record([
            report.degree.to_string(),
            report.exponent.to_string(),
            sci(report.sigma0),
            sci(report.sigma1),
            level.n.to_string(),
            sci(level.h),
            sci(level.l2_u),
            rate_field(rate_l2[k]),
            sci(level.energy_u),
            rate_field(rate_energy[k]),
            sci(level.l2_v),
            rate_field(rate_v[k]),
            sci(level.j_semi),
            sci(level.max_uh),
        ])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn emit_csv(report: &ConvergenceReport, path: &Path) -> Result<()> {
    let text = to_csv_string(report)?;
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = File::create(path).map_err(io)?;
    file.write_all(text.as_bytes()).map_err(io)
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub degree: usize,
    pub exponent: i32,
    pub sigma0: f64,
    pub sigma1: f64,
    pub n: usize,
    pub h: f64,
    pub l2_u: f64,
    pub rate_l2_u: Option<f64>,
    pub energy_u: f64,
    pub rate_energy_u: Option<f64>,
    pub l2_v: f64,
    pub rate_l2_v: Option<f64>,
    pub j_semi: f64,
    pub max_uh: f64,
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize) -> Result<T> {
    let raw = record.get(idx).unwrap_or("");
    raw.parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value {raw:?} in column {}", HEADER[idx])))
}

fn optional(record: &csv::StringRecord, idx: usize) -> Result<Option<f64>> {
    match record.get(idx) {
        Some("") | None => Ok(None),
        Some(_) => field(record, idx).map(Some),
    }
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(Error::InvalidConfig(format!("unexpected CSV header {header:?}")));
    }
    reader
        .records()
        .map(|record| {
            let r = record?;
            Ok(CsvRow {
                degree: field(&r, 0)?,
                exponent: field(&r, 1)?,
                sigma0: field(&r, 2)?,
                sigma1: field(&r, 3)?,
                n: field(&r, 4)?,
                h: field(&r, 5)?,
                l2_u: field(&r, 6)?,
                rate_l2_u: optional(&r, 7)?,
                energy_u: field(&r, 8)?,
                rate_energy_u: optional(&r, 9)?,
                l2_v: field(&r, 10)?,
                rate_l2_v: optional(&r, 11)?,
                j_semi: field(&r, 12)?,
                max_uh: field(&r, 13)?,
            })
        })
        .collect()
}

impl CsvRow {
    /// `true` when the row carries exactly the values of `level`.
    pub fn matches(&self, level: &LevelRecord) -> bool {
        self.n == level.n
            && self.h.to_bits() == level.h.to_bits()
            && self.l2_u.to_bits() == level.l2_u.to_bits()
            && self.energy_u.to_bits() == level.energy_u.to_bits()
            && self.l2_v.to_bits() == level.l2_v.to_bits()
            && self.j_semi.to_bits() == level.j_semi.to_bits()
            && self.max_uh.to_bits() == level.max_uh.to_bits()
    }
}
