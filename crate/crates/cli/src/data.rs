//! CSV ingestion and output of numeric data.

use std::path::Path;

use pcsel::stats::DataMatrix;

use crate::error::{io_err, CliError, CliResult};

/// Reads a CSV with a header row of variable names and numeric cells.
pub fn read_csv(path: &Path) -> CliResult<DataMatrix> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    read_csv_from(file, &path.display().to_string())
}

pub fn read_csv_from<R: std::io::Read>(input: R, label: &str) -> CliResult<DataMatrix> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let names: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::Data(format!("{label}: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    if let Some(dup) = names.iter().enumerate().find(|(k, n)| names[..*k].contains(n)) {
        return Err(CliError::Data(format!("{label}: duplicate column name `{}`", dup.1)));
    }
    let mut columns = vec![Vec::new(); names.len()];
    for (r, rec) in rdr.records().enumerate() {
        // header is line 1
        let line = r + 2;
        let rec = rec.map_err(|e| CliError::Data(format!("{label}: line {line}: {e}")))?;
        for (c, cell) in rec.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!(
                    "{label}: row {}, column {} (`{}`): cannot parse `{cell}` as a number",
                    r + 1,
                    c + 1,
                    names[c]
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Data(format!(
                    "{label}: row {}, column {} (`{}`): non-finite value",
                    r + 1,
                    c + 1,
                    names[c]
                )));
            }
            columns[c].push(v);
        }
    }
    DataMatrix::new(names, columns).map_err(|e| CliError::Data(format!("{label}: {e}")))
}

/// Writes `x` with shortest round-trip formatting, so reading it back is exact.
pub fn write_csv<W: std::io::Write>(x: &DataMatrix, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let werr = |e: csv::Error| CliError::Data(e.to_string());
    w.write_record(x.names()).map_err(werr)?;
    for r in 0..x.n_samples() {
        w.write_record((0..x.n_vars()).map(|c| format!("{:?}", x.column(c)[r])))
            .map_err(werr)?;
    }
    w.flush().map_err(|e| CliError::Data(e.to_string()))
}
