//! Matrix ingestion and output: Matrix Market `array complex general` and a
//! row-major JSON object `{"rows": n, "cols": n, "data": [[re, im], ...]}`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Json,
}

impl MatrixFormat {
    /// `.mtx` and `.json` extensions, case-insensitive.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "mtx" => Some(Self::MatrixMarket),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

pub fn read_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<ComplexMatrix> {
    let format = match format.or_else(|| MatrixFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(Error::InvalidParameter(format!(
                "cannot infer matrix format from '{}'; use .mtx or .json",
                path.display()
            )))
        }
    };
    let text = fs::read_to_string(path)?;
    match format {
        MatrixFormat::MatrixMarket => parse_matrix_market(&text),
        MatrixFormat::Json => parse_json(&text),
    }
}

pub fn write_matrix(path: &Path, a: &ComplexMatrix, format: MatrixFormat) -> Result<()> {
    let text = match format {
        MatrixFormat::MatrixMarket => to_matrix_market(a),
        MatrixFormat::Json => to_json(a),
    };
    fs::write(path, text)?;
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid number '{tok}'")))
}

/// Parses the dense `array` Matrix Market layout (column-major). `real` and
/// `complex` fields with `general` symmetry are accepted.
pub fn parse_matrix_market(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let fields: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(
            hline,
            "expected '%%MatrixMarket matrix array complex general' header",
        ));
    }
    if fields[2] != "array" {
        return Err(parse_err(
            hline,
            format!("unsupported layout '{}', only 'array' is read", fields[2]),
        ));
    }
    let complex = match fields[3].as_str() {
        "complex" => true,
        "real" => false,
        other => return Err(parse_err(hline, format!("unsupported field '{other}'"))),
    };
    if fields[4] != "general" {
        return Err(parse_err(
            hline,
            format!("unsupported symmetry '{}'", fields[4]),
        ));
    }

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body
        .next()
        .ok_or_else(|| parse_err(hline + 1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_err(sline, "size line must hold 'rows cols'"));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|_| parse_err(sline, "invalid row count"))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|_| parse_err(sline, "invalid column count"))?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(sline, "matrix dimensions must be positive"));
    }

    let expected = rows * cols;
    let mut col_major = Vec::with_capacity(expected);
    let mut last_line = sline;
    for (lno, line) in body {
        last_line = lno;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let want = if complex { 2 } else { 1 };
        if toks.len() != want {
            return Err(parse_err(
                lno,
                format!("expected {want} value(s), found {}", toks.len()),
            ));
        }
        if col_major.len() == expected {
            return Err(parse_err(lno, format!("more than {expected} entries")));
        }
        let re = parse_f64(toks[0], lno)?;
        let im = if complex {
            parse_f64(toks[1], lno)?
        } else {
            0.0
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err(lno, "non-finite entry"));
        }
        col_major.push(Complex64::new(re, im));
    }
    if col_major.len() != expected {
        return Err(parse_err(
            last_line,
            format!("expected {expected} entries, found {}", col_major.len()),
        ));
    }
    let data = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| col_major[j * rows + i])
        .collect();
    ComplexMatrix::new(rows, cols, data)
}

pub fn to_matrix_market(a: &ComplexMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array complex general\n");
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let z = a[(i, j)];
            let _ = writeln!(out, "{:.16e} {:.16e}", z.re, z.im);
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

pub fn parse_json(text: &str) -> Result<ComplexMatrix> {
    let raw: JsonMatrix =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    ComplexMatrix::new(
        raw.rows,
        raw.cols,
        raw.data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
    )
}

/// Shortest round-trip decimal form of every component, so a re-read is
/// bit-identical.
pub fn to_json(a: &ComplexMatrix) -> String {
    let raw = JsonMatrix {
        rows: a.rows(),
        cols: a.cols(),
        data: a.as_slice().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&raw).expect("finite matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const JORDAN_MTX: &str = "%%MatrixMarket matrix array complex general\n\
        % 2x2 Jordan block, column-major\n\
        2 2\n\
        0 0\n\
        0 0\n\
        1.0E0 0\n\
        0.0e+00 0\n";

    #[test]
    fn reads_jordan_block_column_major() {
        let j = parse_matrix_market(JORDAN_MTX).unwrap();
        assert_eq!(
            j,
            ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
        );
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "%%MatrixMarket matrix array complex general\n2 2\n0 0\n0 x\n1 0\n0 0\n";
        match parse_matrix_market(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let short = "%%MatrixMarket matrix array complex general\n2 2\n0 0\n";
        assert!(matches!(
            parse_matrix_market(short),
            Err(Error::Parse { line: 3, .. })
        ));
        let header = "%%MatrixMarket matrix coordinate complex general\n";
        assert!(matches!(
            parse_matrix_market(header),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn real_array_is_accepted() {
        let text = "%%MatrixMarket matrix array real general\n2 1\n1.5\n-2e-3\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m[(1, 0)], Complex64::new(-2e-3, 0.0));
    }

    #[test]
    fn matrix_market_round_trip_is_exact() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.1, -1.0 / 3.0),
                Complex64::new(1e-300, 2.0f64.sqrt()),
                Complex64::new(-7.25, 0.0),
                Complex64::new(std::f64::consts::PI, 1e17),
            ],
        )
        .unwrap();
        assert_eq!(parse_matrix_market(&to_matrix_market(&a)).unwrap(), a);
        assert_eq!(parse_json(&to_json(&a)).unwrap(), a);
    }

    #[test]
    fn json_shape_errors() {
        let bad = r#"{"rows": 2, "cols": 2, "data": [[1, 0]]}"#;
        assert!(matches!(parse_json(bad), Err(Error::DimensionMismatch(_))));
        assert!(matches!(parse_json("{"), Err(Error::Parse { .. })));
        let ident = r#"{"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [1, 0]]}"#;
        assert_eq!(parse_json(ident).unwrap(), ComplexMatrix::identity(2));
    }
}
