//! Report envelope and JSON output.
//!
//! Every float in a report is written in scientific notation with 17
//! significant digits, so residuals survive a round trip bit for bit.

use std::io;

use hspan::FamilyKind;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

pub const REPORT_SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Serialize)]
pub struct InstanceEcho {
    pub n: usize,
    pub k: usize,
    pub kind: FamilyKind,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

/// One report per command invocation and input file.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile<P: Serialize> {
    pub schema_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<P>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub exit_code: i32,
    pub wall_time_ms: f64,
}

struct FullPrecision(CompactFormatter);

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{value:.8e}")
    }
}

/// Compact JSON with full-precision floats.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FullPrecision(CompactFormatter));
    value.serialize(&mut ser).expect("report serializes");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let line = to_json_line(&vec![1e-16, 0.1, 0.0, 3.0]);
        assert_eq!(
            line,
            "[9.9999999999999998e-17,1.0000000000000001e-1,0.0000000000000000e0,3.0000000000000000e0]"
        );
        let back: Vec<f64> = serde_json::from_str(&line).unwrap();
        assert_eq!(back, vec![1e-16, 0.1, 0.0, 3.0]);
    }
}
