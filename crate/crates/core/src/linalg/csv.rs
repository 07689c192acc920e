//! Plain-text matrix codec: one row per line, comma separated.

use std::io::{Read, Write};

use super::Matrix;
use crate::error::{Error, Result};

/// Parses a matrix; the first line is skipped when `has_header` is set.
pub fn read_matrix<R: Read>(reader: R, has_header: bool) -> Result<Matrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("row {}: cannot parse {field:?}", line + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    Matrix::from_rows(&rows)
}

pub fn read_matrix_file(path: impl AsRef<std::path::Path>, has_header: bool) -> Result<Matrix> {
    let file = std::fs::File::open(path)?;
    read_matrix(std::io::BufReader::new(file), has_header)
}

/// Writes every entry with 17 significant digits.
pub fn write_matrix<W: Write>(mut writer: W, m: &Matrix) -> Result<()> {
    for i in 0..m.rows() {
        let line = m
            .row(i)
            .iter()
            .map(|x| format!("{x:.16e}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_skipped_when_flagged() {
        let text = "a,b\n1, 2.5\n-3,4e-2\n";
        let m = read_matrix(text.as_bytes(), true).unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m[(1, 1)], 0.04);
        assert!(read_matrix(text.as_bytes(), false).is_err());
    }

    #[test]
    fn writer_round_trips_exactly() {
        let m = Matrix::from_rows(&[vec![0.1, -1.0 / 3.0], vec![1e-300, 6.02e23]]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("1.0000000000000001e-1,"));
        assert_eq!(read_matrix(text.as_bytes(), false).unwrap(), m);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(read_matrix("1,2\n3\n".as_bytes(), false).is_err());
    }
}
