//! Point CSV reading and writing.
//!
//! Input: header `v,x`, one point per row, decimal reals, LF or CRLF.
//! Output: header `v,x,value,method`, values with 17 significant digits.
//! Row numbers in errors count data rows from 1.

use std::io::{Read, Write};

use logbessel::{EvalPoint, LogValue};

use crate::{format_value, CliError, Result};

fn row_error(row: usize, message: impl Into<String>) -> CliError {
    CliError::Row {
        row,
        message: message.into(),
    }
}

pub fn read_points<R: Read>(input: R) -> Result<Vec<EvalPoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let headers = reader.headers().map_err(|e| row_error(0, e.to_string()))?;
    if headers.len() != 2 || &headers[0] != "v" || &headers[1] != "x" {
        return Err(CliError::Usage(format!(
            "expected header `v,x`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| row_error(row, e.to_string()))?;
        if record.len() != 2 {
            return Err(row_error(row, format!("expected 2 fields, found {}", record.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| row_error(row, format!("`{s}` is not a number")))
        };
        points.push(EvalPoint::new(parse(&record[0])?, parse(&record[1])?));
    }
    Ok(points)
}

pub fn write_results<W: Write>(output: W, points: &[EvalPoint], values: &[LogValue]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output);
    let csv_err = |e: csv::Error| CliError::Output(e.into());
    writer.write_record(["v", "x", "value", "method"]).map_err(csv_err)?;
    for (p, r) in points.iter().zip(values) {
        writer
            .write_record([
                format_value(p.v),
                format_value(p.x),
                format_value(r.value),
                r.method.name().to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}
