//! JSON and CSV output.

use std::io::{self, Write};

use ccindex_core::CensusReport;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::commands::ClassIndex;

pub const TOOL: &str = "ccindex";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seventeen significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

/// Pretty JSON whose floats are written by [`fmt_f64`]. Non-finite values
/// become `null`.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Compact JSON with default float formatting; used only for hashing.
pub fn canonical_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CompactFormatter);
    value.serialize(&mut ser).expect("problem types serialize");
    buf
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    SolverFailure,
    VerificationFailure,
}

/// Envelope shared by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub problem_sha256: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub result: Option<T>,
}

/// One row per census class.
pub fn census_csv(report: &CensusReport, indices: &[ClassIndex]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "class",
        "u_value",
        "lambda",
        "residual",
        "isotropy_rank",
        "hits",
        "first_start",
        "morse_index",
        "fixed_point_index",
        "formula_index",
        "index_note",
        "distance_signature",
    ])?;
    for (k, (c, ix)) in report.classes.iter().zip(indices).enumerate() {
        let r = &c.record;
        let (morse, fpi, formula, note) = match ix {
            ClassIndex::Computed(rec) => (
                rec.morse_index.to_string(),
                rec.fixed_point_index.to_string(),
                rec.formula_index.to_string(),
                String::new(),
            ),
            ClassIndex::Refused(why) => (String::new(), String::new(), String::new(), why.clone()),
        };
        let sig: Vec<String> = r.distance_signature.iter().map(|v| fmt_f64(*v)).collect();
        w.write_record([
            k.to_string(),
            fmt_f64(r.u_value),
            fmt_f64(r.lambda),
            fmt_f64(r.residual),
            r.isotropy_rank.to_string(),
            c.hits.to_string(),
            c.first_start.to_string(),
            morse,
            fpi,
            formula,
            note,
            sig.join(";"),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}
