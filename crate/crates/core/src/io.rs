//! Reading spaces from CSV or JSON and writing distance matrices.
//!
//! A CSV file is read as a distance matrix when it has a header row of labels
//! and `n` rows of `n` numbers, or, without a header, when the numbers form a
//! square matrix with zero diagonal. Anything else is a point cloud whose
//! rows are coordinates; its points are labelled `p0, p1, ...`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::metric::{FiniteMetricSpace, MetricError, Norm};
use crate::verify::padded_labels;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Auto,
    Matrix,
    Points,
    Json,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(InputFormat::Auto),
            "matrix" => Ok(InputFormat::Matrix),
            "points" => Ok(InputFormat::Points),
            "json" => Ok(InputFormat::Json),
            _ => Err(format!("unknown input format `{s}` (expected auto, matrix, points or json)")),
        }
    }
}

impl FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" => Ok(Norm::Euclidean),
            "manhattan" => Ok(Norm::Manhattan),
            "chebyshev" => Ok(Norm::Chebyshev),
            _ => Err(format!("unknown metric `{s}` (expected euclidean, manhattan or chebyshev)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestOptions {
    pub format: InputFormat,
    pub norm: Norm,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            format: InputFormat::Auto,
            norm: Norm::Euclidean,
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line} (data row {row}) has {len} fields, expected {expected}")]
    Ragged {
        line: usize,
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("header has {labels} labels but the matrix has {rows} rows of {columns} values")]
    HeaderMismatch { labels: usize, rows: usize, columns: usize },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

pub fn ingest(path: &Path, options: IngestOptions) -> Result<FiniteMetricSpace, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let json_name = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let options = match options.format {
        InputFormat::Auto if json_name => IngestOptions {
            format: InputFormat::Json,
            ..options
        },
        _ => options,
    };
    parse_space(&text, options)
}

pub fn parse_space(text: &str, options: IngestOptions) -> Result<FiniteMetricSpace, IngestError> {
    let format = match options.format {
        InputFormat::Auto if text.trim_start().starts_with('{') => InputFormat::Json,
        f => f,
    };
    if format == InputFormat::Json {
        return serde_json::from_str(text).map_err(|e| IngestError::Json(e.to_string()));
    }
    let table = read_table(text)?;
    let n = table.rows.len();
    let square = table.rows.iter().all(|r| r.len() == n);
    let as_matrix = match format {
        InputFormat::Matrix => true,
        InputFormat::Points => false,
        _ => match &table.header {
            Some(h) => square && h.len() == n,
            None => square && n > 0 && (0..n).all(|i| table.rows[i][i] == 0.0),
        },
    };
    if as_matrix {
        let labels = match table.header {
            Some(h) if h.len() == n && square => h,
            Some(h) => {
                return Err(IngestError::HeaderMismatch {
                    labels: h.len(),
                    rows: n,
                    columns: table.rows.first().map_or(0, Vec::len),
                })
            }
            None => padded_labels("p", n),
        };
        Ok(FiniteMetricSpace::new(labels, table.rows)?)
    } else {
        Ok(FiniteMetricSpace::from_points(padded_labels("p", n), &table.rows, options.norm)?)
    }
}

struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<f64>>,
}

fn read_table(text: &str) -> Result<Table, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, (usize, &str)> = record
            .iter()
            .enumerate()
            .map(|(col, field)| field.parse::<f64>().map_err(|_| (col, field)))
            .collect();
        match parsed {
            Ok(values) => {
                if let Some(expected) = rows.first().map(Vec::len) {
                    if values.len() != expected {
                        return Err(IngestError::Ragged {
                            line,
                            row: rows.len(),
                            len: values.len(),
                            expected,
                        });
                    }
                }
                rows.push(values);
            }
            Err(_) if header.is_none() && rows.is_empty() => {
                header = Some(record.iter().map(str::to_string).collect());
            }
            Err((col, field)) => {
                return Err(IngestError::Parse {
                    line,
                    message: format!("field {} (`{field}`) is not a number", col + 1),
                })
            }
        }
    }
    Ok(Table { header, rows })
}

/// Labelled matrix CSV: a header of labels, then one row per point. Numbers
/// use the shortest representation that parses back to the same value.
pub fn matrix_csv(x: &FiniteMetricSpace) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(x.labels().iter()).expect("in-memory write");
    for i in 0..x.len() {
        w.write_record(x.row(i).iter().map(|d| d.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Auto => "auto",
            InputFormat::Matrix => "matrix",
            InputFormat::Points => "points",
            InputFormat::Json => "json",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X3: &str = "a,b,c\n0,1,2\n1,0,1\n2,1,0\n";

    fn auto(text: &str) -> Result<FiniteMetricSpace, IngestError> {
        parse_space(text, IngestOptions::default())
    }

    #[test]
    fn matrix_with_header() {
        let x = auto(X3).unwrap();
        assert_eq!(x.labels().as_ref(), ["a", "b", "c"]);
        assert_eq!(x.dist(0, 2), 2.0);
    }

    #[test]
    fn headerless_matrix_and_points() {
        let m = auto("0,1,2\n1,0,1\n2,1,0\n").unwrap();
        assert_eq!(m.labels().as_ref(), ["p0", "p1", "p2"]);
        let p = auto("0,0\n1,0\n2,0\n").unwrap();
        assert_eq!(p.to_matrix(), m.to_matrix());
        let manhattan = parse_space(
            "0,0\n1,1\n",
            IngestOptions { format: InputFormat::Points, norm: Norm::Manhattan },
        )
        .unwrap();
        assert_eq!(manhattan.dist(0, 1), 2.0);
    }

    #[test]
    fn ragged_rows_report_their_line() {
        match auto("a,b,c\n0,1,2\n1,0\n2,1,0\n") {
            Err(IngestError::Ragged { line: 3, row: 1, len: 2, expected: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagnostics() {
        assert!(matches!(auto("a,b\n0,x\n1,0\n"), Err(IngestError::Parse { line: 2, .. })));
        assert!(matches!(
            auto("a,b,c\n0,1,5\n1,0,1\n5,1,0\n"),
            Err(IngestError::Metric(MetricError::TriangleViolation { .. }))
        ));
        assert!(matches!(
            auto("a,b\n0,1\n2,0\n"),
            Err(IngestError::Metric(MetricError::AsymmetricMatrix { .. }))
        ));
        let forced = IngestOptions { format: InputFormat::Matrix, ..Default::default() };
        assert!(matches!(
            parse_space("a,b\n0,1,2\n1,0,1\n", forced),
            Err(IngestError::HeaderMismatch { .. })
        ));
        // a non-square table with a header is a point cloud with column names
        assert_eq!(auto("x,y,z\n0,1,2\n1,0,1\n").unwrap().len(), 2);
    }

    #[test]
    fn json_and_round_trip() {
        let x = auto(X3).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(auto(&text).unwrap(), x);
        let odd = FiniteMetricSpace::new(
            vec!["u".into(), "v, w".into()],
            vec![vec![0.0, 0.1 + 0.2], vec![0.1 + 0.2, 0.0]],
        )
        .unwrap();
        assert_eq!(auto(&matrix_csv(&odd)).unwrap(), odd);
    }
}
