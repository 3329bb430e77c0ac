//! Plain-text instance files and random instance generation.
//!
//! Instance format: a header line `n m k`, then `m` lines `i j w1 ... wk`.
//! Vertices are 1-based, weights strictly positive. Blank lines are ignored,
//! and `#` starts a comment that runs to the end of the line.

mod generate;

use std::collections::HashSet;
use std::fmt::Write;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, WeightVector};
use crate::text::format_number;

pub use generate::{random_instance, GeneratorConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: GraphError },
    #[error("bad generator configuration: {0}")]
    BadConfig(String),
}

impl InstanceError {
    /// The graph-level error behind this one, if any.
    pub fn graph_error(&self) -> Option<&GraphError> {
        match self {
            InstanceError::Invalid { source, .. } => Some(source),
            _ => None,
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((idx + 1, tokens))
    })
}

fn parse_field<T: std::str::FromStr>(
    tok: &str,
    what: &str,
    line: usize,
) -> Result<T, InstanceError> {
    tok.parse().map_err(|_| InstanceError::Parse {
        line,
        message: format!("expected {what}, found `{tok}`"),
    })
}

pub fn parse_instance(text: &str) -> Result<Graph, InstanceError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(InstanceError::Parse {
        line: 1,
        message: "missing header `n m k`".into(),
    })?;
    let [n, m, k] = header.as_slice() else {
        return Err(InstanceError::Parse {
            line: header_line,
            message: format!("header needs 3 fields `n m k`, found {}", header.len()),
        });
    };
    let n: usize = parse_field(n, "vertex count", header_line)?;
    let m: usize = parse_field(m, "edge count", header_line)?;
    let k: usize = parse_field(k, "weight dimension", header_line)?;
    if n < 2 {
        return Err(InstanceError::Invalid {
            line: header_line,
            source: GraphError::TooFewVertices(n),
        });
    }
    if k == 0 {
        return Err(InstanceError::Invalid {
            line: header_line,
            source: GraphError::DimensionMismatch {
                expected: 1,
                found: 0,
            },
        });
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    let mut last_line = header_line;
    for (line, tokens) in lines {
        last_line = line;
        if edges.len() == m {
            return Err(InstanceError::Parse {
                line,
                message: format!("more than the {m} edges announced in the header"),
            });
        }
        let invalid = |source| InstanceError::Invalid { line, source };
        if tokens.len() < 2 {
            return Err(InstanceError::Parse {
                line,
                message: "edge line needs `i j w1 ... wk`".into(),
            });
        }
        let a: Vertex = parse_field(tokens[0], "a vertex", line)?;
        let b: Vertex = parse_field(tokens[1], "a vertex", line)?;
        let weights = tokens[2..]
            .iter()
            .map(|t| parse_field::<f64>(t, "a weight", line))
            .collect::<Result<Vec<_>, _>>()?;
        if weights.len() != k {
            return Err(invalid(GraphError::DimensionMismatch {
                expected: k,
                found: weights.len(),
            }));
        }
        for v in [a, b] {
            if v == 0 || v > n {
                return Err(invalid(GraphError::BadEndpoint { vertex: v, n }));
            }
        }
        if a == b {
            return Err(invalid(GraphError::SelfLoop(a)));
        }
        let (tail, head) = (a.min(b), a.max(b));
        if let Err(GraphError::NonPositiveWeight {
            coordinate, value, ..
        }) = WeightVector::new(weights.clone())
        {
            return Err(invalid(GraphError::NonPositiveWeight {
                tail,
                head,
                coordinate,
                value,
            }));
        }
        if !seen.insert((tail, head)) {
            return Err(invalid(GraphError::DuplicateEdge(tail, head)));
        }
        edges.push((tail, head, weights));
    }
    if edges.len() != m {
        return Err(InstanceError::Parse {
            line: last_line + 1,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::with_dimension(n, k, edges).map_err(|source| InstanceError::Invalid {
        line: last_line,
        source,
    })
}

/// Canonical text: header, then edges in canonical order.
pub fn write_instance(g: &Graph) -> String {
    let mut out = format!(
        "{} {} {}\n",
        g.vertex_count(),
        g.edge_count(),
        g.dimension()
    );
    for e in g.edges() {
        let _ = write!(out, "{} {}", e.tail, e.head);
        for w in e.weight.values() {
            let _ = write!(out, " {}", format_number(*w));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let g = parse_instance("2 1 2\n1 2 5 3").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.dimension(), 2);
        assert_eq!(write_instance(&g), "2 1 2\n1 2 5 3\n");
    }

    #[test]
    fn reversed_endpoints_normalised() {
        let g = parse_instance("# comment\n\n3 2 1\n2 1 4 # trailing\n3 2 1.5\n").unwrap();
        assert_eq!(g.edges()[0].endpoints(), (1, 2));
        assert_eq!(write_instance(&g), "3 2 1\n1 2 4\n2 3 1.5\n");
    }

    #[test]
    fn zero_weight_rejected() {
        let err = parse_instance("4 4 2\n1 2 0 3\n").unwrap_err();
        assert!(matches!(
            err,
            InstanceError::Invalid {
                line: 2,
                source: GraphError::NonPositiveWeight { .. }
            }
        ));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_instance("2 1 2\n1 2 5\n"),
            Err(InstanceError::Invalid {
                line: 2,
                source: GraphError::DimensionMismatch {
                    expected: 2,
                    found: 1
                }
            })
        ));
        assert!(matches!(
            parse_instance("2 1\n1 2 5\n"),
            Err(InstanceError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("4 2 1\n1 2 5\n"),
            Err(InstanceError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_instance("4 1 1\n1 2 5\n2 3 1\n"),
            Err(InstanceError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_instance("4 1 1\n1 x 5\n"),
            Err(InstanceError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("4 2 1\n1 2 5\n2 1 3\n"),
            Err(InstanceError::Invalid {
                line: 3,
                source: GraphError::DuplicateEdge(1, 2)
            })
        ));
        assert!(matches!(
            parse_instance("4 1 1\n1 9 5\n"),
            Err(InstanceError::Invalid {
                source: GraphError::BadEndpoint { vertex: 9, n: 4 },
                ..
            })
        ));
        assert!(matches!(
            parse_instance(""),
            Err(InstanceError::Parse { .. })
        ));
    }
}
