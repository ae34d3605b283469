use std::io::Write;

use serde::Serialize;

use super::config::OutputFormat;
use super::HarnessError;

/// CSV with a header row, or one JSON object per line.
pub fn write_records<T: Serialize, W: Write>(records: &[T], format: OutputFormat, out: W) -> Result<(), HarnessError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn records_to_string<T: Serialize>(records: &[T], format: OutputFormat) -> Result<String, HarnessError> {
    let mut buf = Vec::new();
    write_records(records, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv and json output are utf-8"))
}

/// Two-column CSV such as `cell,first_visit` for plotting.
pub fn two_column_csv<A: std::fmt::Display, B: std::fmt::Display>(
    header: (&str, &str),
    rows: impl IntoIterator<Item = (A, B)>,
) -> String {
    let mut s = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        s.push_str(&format!("{a},{b}\n"));
    }
    s
}
