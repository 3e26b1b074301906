//! CSV tables. Numbers are written with 17 significant digits so that files
//! are byte-identical across identical runs.

use std::path::Path;

use crate::error::{CliError, Result};

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_table<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(err) => CliError::io(path, err),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format_number(*v)))
            .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
