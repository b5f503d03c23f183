//! Curve files. Two formats are accepted: a line-oriented text format with a
//! `d n` header followed by `n` rows of `d` whitespace-separated coordinates
//! (`#` starts a comment), and a JSON object `{"dim": d, "vertices": [[..],
//! ..]}`. Input starting with `{` is treated as JSON. Numbers are written
//! with round-trip formatting, so write-then-parse is the identity.

use crate::error::{Error, Result};
use crate::geometry::{Curve, Point};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct CurveJson {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

fn parse_usize(field: &str, line: usize, what: &str) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("bad {what} `{field}`"),
    })
}

/// Parse a curve from either accepted format, sniffing JSON by the first
/// non-whitespace byte.
pub fn parse_curve(input: &str) -> Result<Curve> {
    if input.trim_start().starts_with('{') {
        parse_curve_json(input)
    } else {
        parse_curve_text(input)
    }
}

pub fn parse_curve_text(input: &str) -> Result<Curve> {
    let mut dim = 0usize;
    let mut expected = 0usize;
    let mut vertices: Vec<Point> = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !seen_header {
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    reason: "header must be `d n`".into(),
                });
            }
            dim = parse_usize(fields[0], line_no, "dimension")?;
            expected = parse_usize(fields[1], line_no, "vertex count")?;
            if dim == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    reason: "dimension must be at least 1".into(),
                });
            }
            seen_header = true;
            continue;
        }
        if vertices.len() == expected {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("more than the declared {expected} vertices"),
            });
        }
        if fields.len() != dim {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected {dim} coordinates, found {}", fields.len()),
            });
        }
        let mut coords = Vec::with_capacity(dim);
        for f in fields {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line: line_no,
                reason: format!("bad coordinate `{f}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("non-finite coordinate `{f}`"),
                });
            }
            coords.push(v);
        }
        vertices.push(Point::new(coords));
    }
    if !seen_header {
        return Err(Error::Parse {
            line: 1,
            reason: "missing `d n` header".into(),
        });
    }
    if vertices.len() != expected {
        return Err(Error::Parse {
            line: input.lines().count(),
            reason: format!("declared {expected} vertices, found {}", vertices.len()),
        });
    }
    Curve::new(vertices)
}

pub fn parse_curve_json(input: &str) -> Result<Curve> {
    let parsed: CurveJson = serde_json::from_str(input).map_err(|e| Error::Parse {
        line: e.line(),
        reason: e.to_string(),
    })?;
    for (idx, v) in parsed.vertices.iter().enumerate() {
        if v.len() != parsed.dim {
            return Err(Error::Parse {
                line: 0,
                reason: format!(
                    "vertex {idx} has {} coordinates, expected {}",
                    v.len(),
                    parsed.dim
                ),
            });
        }
    }
    Curve::new(parsed.vertices.into_iter().map(Point::new).collect())
}

/// Render in the text format with round-trip decimal formatting.
pub fn write_curve_text(curve: &Curve) -> String {
    let mut out = format!("{} {}\n", curve.dim(), curve.len());
    for v in curve.vertices() {
        let row: Vec<String> = v.coords().iter().map(|c| format!("{c}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_curve_json(curve: &Curve) -> String {
    let j = CurveJson {
        dim: curve.dim(),
        vertices: curve
            .vertices()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("curve serialization cannot fail")
}

pub fn read_curve_file(path: &std::path::Path) -> Result<Curve> {
    parse_curve(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_file() {
        let c = parse_curve("2 2\n0 0\n1.5 -2\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.vertex(1).coords(), &[1.5, -2.0]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_curve("# a curve\n2 2\n\n0 0 # origin\n1 1\n").unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn repeated_vertex_rejected_with_diagnostic() {
        let err = parse_curve("2 3\n0 0\n0 0\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateVertex { index: 1 }));
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        let err = parse_curve("2 2\n0 zero\n1 1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_curve("2 2\n0 0 0\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn vertex_count_must_match_header() {
        assert!(parse_curve("2 3\n0 0\n1 1\n").is_err());
        assert!(parse_curve("2 1\n0 0\n1 1\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = parse_curve("3 2\n0 0 1\n1 2 3\n").unwrap();
        let j = write_curve_json(&c);
        let back = parse_curve(&j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let c = parse_curve("2 3\n0.1 -0.2\n1e-9 2.5\n3.25 0.333333333333333314829616256247\n")
            .unwrap();
        let again = parse_curve(&write_curve_text(&c)).unwrap();
        assert_eq!(again, c);
    }
}
