//! Signal files: two-column CSV, one `re,im` row per index.
//!
//! The header names the domain, `spectrum_re,spectrum_im` for Fourier
//! coefficients (index `i` is frequency `i` or `i - N` past the midpoint) and
//! `time_re,time_im` for samples `f(2πi/N)`.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Spectrum,
    Time,
}

impl Domain {
    fn header(self) -> [&'static str; 2] {
        match self {
            Domain::Spectrum => ["spectrum_re", "spectrum_im"],
            Domain::Time => ["time_re", "time_im"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::Spectrum => "spectrum",
            Domain::Time => "time",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub domain: Domain,
    pub values: Vec<Complex64>,
}

pub fn read_signal<R: Read>(reader: R) -> Result<Signal> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().context("reading CSV header")?.clone();
    let fields: Vec<&str> = headers.iter().collect();
    let domain = [Domain::Spectrum, Domain::Time]
        .into_iter()
        .find(|d| fields == d.header())
        .with_context(|| {
            format!(
                "header must be `spectrum_re,spectrum_im` or `time_re,time_im`, found `{}`",
                fields.join(",")
            )
        })?;

    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.with_context(|| format!("line {line}"))?;
        if record.len() != 2 {
            bail!("line {line}: expected 2 fields, found {}", record.len());
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .with_context(|| format!("line {line}: `{s}` is not a number"))?;
            if !v.is_finite() {
                bail!("line {line}: non-finite value `{s}`");
            }
            Ok(v)
        };
        values.push(Complex64::new(parse(&record[0])?, parse(&record[1])?));
    }
    if values.is_empty() {
        bail!("signal file has no rows");
    }
    Ok(Signal { domain, values })
}

pub fn write_signal<W: Write>(writer: W, domain: Domain, values: &[Complex64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(domain.header())?;
    for v in values {
        wtr.write_record([v.re.to_string(), v.im.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
