//! Matrix Market (array and coordinate, real) and whitespace-separated rows.

use std::fmt::Write as _;
use std::path::Path;

use blockexp::Mat;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Array,
    Coordinate,
    PlainRows,
}

fn parse_f64(path: &Path, line: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| CliError::parse(path, line, format!("not a number: {tok:?}")))
}

fn parse_usize(path: &Path, line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| CliError::parse(path, line, format!("not a nonnegative integer: {tok:?}")))
}

/// Numbered lines with comments and blanks removed.
fn data_lines(text: &str, comment: char) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

pub fn parse(text: &str, path: &Path) -> Result<(Mat<f64>, Format)> {
    let first = text.lines().next().unwrap_or("");
    if first.starts_with("%%MatrixMarket") {
        parse_matrix_market(text, path)
    } else {
        parse_rows(text, path).map(|m| (m, Format::PlainRows))
    }
}

fn parse_matrix_market(text: &str, path: &Path) -> Result<(Mat<f64>, Format)> {
    let header: Vec<String> = text
        .lines()
        .next()
        .unwrap_or("")
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if header.len() != 5 || header[1] != "matrix" {
        return Err(CliError::parse(path, 1, "malformed Matrix Market header"));
    }
    let format = match header[2].as_str() {
        "array" => Format::Array,
        "coordinate" => Format::Coordinate,
        other => return Err(CliError::parse(path, 1, format!("unsupported layout {other:?}"))),
    };
    if !matches!(header[3].as_str(), "real" | "integer" | "double") {
        return Err(CliError::parse(path, 1, format!("unsupported field {:?}", header[3])));
    }
    let symmetric = match header[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(CliError::parse(path, 1, format!("unsupported symmetry {other:?}"))),
    };

    let mut lines = data_lines(text, '%').skip_while(|(n, _)| *n == 1);
    let (size_line, size) = lines.next().ok_or_else(|| CliError::parse(path, 1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let want = if format == Format::Array { 2 } else { 3 };
    if dims.len() != want {
        return Err(CliError::parse(
            path,
            size_line,
            format!("expected {want} integers on the size line"),
        ));
    }
    let rows = parse_usize(path, size_line, dims[0])?;
    let cols = parse_usize(path, size_line, dims[1])?;
    let mut m = Mat::zeros(rows, cols);

    match format {
        Format::Array => {
            let total = if symmetric { rows * (rows + 1) / 2 } else { rows * cols };
            let mut vals = Vec::with_capacity(total);
            let mut last = size_line;
            for (n, l) in lines {
                for tok in l.split_whitespace() {
                    vals.push(parse_f64(path, n, tok)?);
                }
                last = n;
            }
            if vals.len() != total {
                return Err(CliError::parse(
                    path,
                    last,
                    format!("expected {total} values, found {}", vals.len()),
                ));
            }
            if symmetric {
                if rows != cols {
                    return Err(CliError::parse(path, size_line, "symmetric matrix must be square"));
                }
                let mut it = vals.into_iter();
                for j in 0..cols {
                    for i in j..rows {
                        let v = it.next().expect("counted above");
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
            } else {
                m = Mat::from_col_major(rows, cols, vals)?;
            }
        }
        Format::Coordinate => {
            let nnz = parse_usize(path, size_line, dims[2])?;
            let mut seen = 0;
            for (n, l) in lines {
                let t: Vec<&str> = l.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(CliError::parse(path, n, "expected `row col value`"));
                }
                let (i, j) = (parse_usize(path, n, t[0])?, parse_usize(path, n, t[1])?);
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(CliError::parse(path, n, format!("index ({i}, {j}) out of range")));
                }
                let v = parse_f64(path, n, t[2])?;
                m[(i - 1, j - 1)] = v;
                if symmetric {
                    m[(j - 1, i - 1)] = v;
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(CliError::parse(
                    path,
                    size_line,
                    format!("header promises {nnz} entries, found {seen}"),
                ));
            }
        }
        Format::PlainRows => unreachable!(),
    }
    Ok((m, format))
}

fn parse_rows(text: &str, path: &Path) -> Result<Mat<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (n, l) in data_lines(text, '#') {
        let row = l.split_whitespace().map(|t| parse_f64(path, n, t)).collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::parse(
                    path,
                    n,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(Mat::from_rows(&rows))
}

pub fn read(path: &Path) -> Result<Mat<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text, path).map(|(m, _)| m)
}

/// 17 significant digits, so every finite double reads back bitwise.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_string(m: &Mat<f64>, format: Format) -> String {
    let (r, c) = m.shape();
    let mut out = String::new();
    match format {
        Format::Array => {
            out.push_str("%%MatrixMarket matrix array real general\n");
            let _ = writeln!(out, "{r} {c}");
            for v in m.as_slice() {
                let _ = writeln!(out, "{}", num(*v));
            }
        }
        Format::Coordinate => {
            out.push_str("%%MatrixMarket matrix coordinate real general\n");
            let nnz = m.as_slice().iter().filter(|v| **v != 0.0).count();
            let _ = writeln!(out, "{r} {c} {nnz}");
            for j in 0..c {
                for i in 0..r {
                    if m[(i, j)] != 0.0 {
                        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, num(m[(i, j)]));
                    }
                }
            }
        }
        Format::PlainRows => {
            for i in 0..r {
                let row: Vec<String> = (0..c).map(|j| num(m[(i, j)])).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    out
}

pub fn write(path: &Path, m: &Mat<f64>, format: Format) -> Result<()> {
    std::fs::write(path, to_string(m, format)).map_err(|e| CliError::io(path, e))
}
