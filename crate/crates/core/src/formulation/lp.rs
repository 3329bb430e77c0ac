//! LP text format writer and the matching reader.
//!
//! The writer produces CPLEX-style LP text with sections `Maximize`,
//! `Subject To`, `Bounds`, `Binaries` and `End`. The reader accepts what the
//! writer produces (plus blank lines and `\` comments) and rebuilds the model,
//! including the graph, which is recovered from the cut-weight rows.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use super::{
    variable_layout, Domain, ExtendedGraph, FormulationError, LinearConstraint, MilpModel,
    Relation, Tag, Variable, VariableId,
};
use crate::graph::Graph;
use crate::text::format_number;

fn write_terms(out: &mut String, terms: &[(VariableId, f64)]) {
    if terms.is_empty() {
        out.push_str("0 U");
        return;
    }
    for (pos, &(id, coef)) in terms.iter().enumerate() {
        let magnitude = coef.abs();
        match (pos, coef < 0.0) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        if magnitude != 1.0 {
            out.push_str(&format_number(magnitude));
            out.push(' ');
        }
        let _ = write!(out, "{id}");
    }
}

/// Renders `model` as LP text.
pub fn emit_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("Maximize\nU\nSubject To\n");
    for row in &model.constraints {
        let _ = write!(out, "{}: ", row.name());
        write_terms(&mut out, &row.terms);
        let _ = writeln!(out, " {} {}", row.relation, format_number(row.rhs));
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        if let Domain::Continuous { lower, upper } = v.domain {
            let line = match (lower.is_finite(), upper.is_finite()) {
                (true, true) => format!(
                    "{} <= {} <= {}",
                    format_number(lower),
                    v.id,
                    format_number(upper)
                ),
                (true, false) => format!("{} >= {}", v.id, format_number(lower)),
                (false, true) => format!("-inf <= {} <= {}", v.id, format_number(upper)),
                (false, false) => format!("{} free", v.id),
            };
            out.push_str(&line);
            out.push('\n');
        }
    }
    out.push_str("Binaries\n");
    for v in &model.variables {
        if v.domain == Domain::Binary {
            let _ = writeln!(out, "{}", v.id);
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    Start,
    Objective,
    Rows,
    Bounds,
    Binaries,
    Done,
}

fn err(line: usize, message: impl Into<String>) -> FormulationError {
    FormulationError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(token: &str, line: usize) -> Result<f64, FormulationError> {
    match token.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => token
            .parse::<f64>()
            .map_err(|_| err(line, format!("expected a number, found `{token}`"))),
    }
}

fn parse_relation(token: &str) -> Option<Relation> {
    match token {
        "<=" | "=<" | "<" => Some(Relation::Le),
        ">=" | "=>" | ">" => Some(Relation::Ge),
        "=" => Some(Relation::Eq),
        _ => None,
    }
}

fn parse_terms(tokens: &[&str], line: usize) -> Result<Vec<(VariableId, f64)>, FormulationError> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for &tok in tokens {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ if tok
                .starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+') =>
            {
                if coef.is_some() {
                    return Err(err(line, format!("two coefficients in a row at `{tok}`")));
                }
                coef = Some(parse_number(tok, line)?);
            }
            _ => {
                let id: VariableId = tok
                    .parse()
                    .map_err(|_| err(line, format!("bad variable name `{tok}`")))?;
                let value = sign * coef.take().unwrap_or(1.0);
                if value != 0.0 {
                    terms.push((id, value));
                }
                sign = 1.0;
            }
        }
    }
    if coef.is_some() || sign != 1.0 {
        return Err(err(line, "dangling coefficient or sign"));
    }
    Ok(terms)
}

fn parse_row(text: &str, line: usize) -> Result<LinearConstraint, FormulationError> {
    let (name, body) = text
        .split_once(':')
        .ok_or_else(|| err(line, "constraint row needs a `name:` prefix"))?;
    let name = name.trim();
    let (tag, index) = name
        .strip_prefix('c')
        .and_then(|rest| rest.split_once('_'))
        .and_then(|(t, i)| Some((t.parse::<u8>().ok()?, i.parse::<usize>().ok()?)))
        .and_then(|(t, i)| Some((Tag::from_number(t)?, i)))
        .ok_or_else(|| {
            err(
                line,
                format!("row name `{name}` is not of the form c<tag>_<index>"),
            )
        })?;
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let rel_pos = tokens
        .iter()
        .position(|t| parse_relation(t).is_some())
        .ok_or_else(|| err(line, "constraint row has no relation"))?;
    if rel_pos + 2 != tokens.len() {
        return Err(err(
            line,
            "expected exactly one right-hand side after the relation",
        ));
    }
    Ok(LinearConstraint {
        tag,
        index,
        terms: parse_terms(&tokens[..rel_pos], line)?,
        relation: parse_relation(tokens[rel_pos]).unwrap_or(Relation::Eq),
        rhs: parse_number(tokens[rel_pos + 1], line)?,
    })
}

fn parse_bound(text: &str, line: usize) -> Result<(VariableId, f64, f64), FormulationError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let var = |tok: &str| -> Result<VariableId, FormulationError> {
        tok.parse()
            .map_err(|_| err(line, format!("bad variable name `{tok}`")))
    };
    match tokens.as_slice() {
        [lo, "<=", name, "<=", hi] => {
            Ok((var(name)?, parse_number(lo, line)?, parse_number(hi, line)?))
        }
        [name, ">=", lo] => Ok((var(name)?, parse_number(lo, line)?, f64::INFINITY)),
        [name, "<=", hi] => Ok((var(name)?, 0.0, parse_number(hi, line)?)),
        [name, "free"] => Ok((var(name)?, f64::NEG_INFINITY, f64::INFINITY)),
        _ => Err(err(line, format!("unrecognised bound `{text}`"))),
    }
}

/// Reads LP text produced by [`emit_lp`] back into a model.
pub fn parse_lp(text: &str) -> Result<MilpModel, FormulationError> {
    let mut section = Section::Start;
    let mut rows: Vec<LinearConstraint> = Vec::new();
    let mut declared: BTreeMap<VariableId, Domain> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('\\') {
            continue;
        }
        let keyword = content.to_ascii_lowercase();
        let next = match keyword.as_str() {
            "maximize" | "maximise" | "max" => Some(Section::Objective),
            "subject to" | "st" | "s.t." | "such that" => Some(Section::Rows),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" | "bin" => Some(Section::Binaries),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(next) = next {
            let expected_before = match next {
                Section::Objective => Section::Start,
                Section::Rows => Section::Objective,
                Section::Bounds => Section::Rows,
                Section::Binaries => Section::Bounds,
                _ => Section::Binaries,
            };
            if section != expected_before {
                return Err(err(line, format!("section `{content}` out of order")));
            }
            section = next;
            continue;
        }
        match section {
            Section::Start => return Err(err(line, "expected `Maximize`")),
            Section::Done => return Err(err(line, "content after `End`")),
            Section::Objective => {
                let body = content.split_once(':').map_or(content, |(_, b)| b).trim();
                if body != "U" {
                    return Err(err(line, format!("objective must be `U`, found `{body}`")));
                }
            }
            Section::Rows => rows.push(parse_row(content, line)?),
            Section::Bounds => {
                let (id, lower, upper) = parse_bound(content, line)?;
                declared.insert(id, Domain::Continuous { lower, upper });
            }
            Section::Binaries => {
                for tok in content.split_whitespace() {
                    let id: VariableId = tok
                        .parse()
                        .map_err(|_| err(line, format!("bad variable name `{tok}`")))?;
                    declared.insert(id, Domain::Binary);
                }
            }
        }
    }
    if section != Section::Done {
        return Err(err(
            last_line + 1,
            "unexpected end of input, expected `End`",
        ));
    }
    for row in &rows {
        for &(id, _) in &row.terms {
            declared.entry(id).or_insert(Domain::Continuous {
                lower: 0.0,
                upper: f64::INFINITY,
            });
        }
    }

    let graph = recover_graph(&declared, &rows, last_line)?;
    let layout = variable_layout(&ExtendedGraph::new(graph.clone()));
    let position: HashMap<VariableId, usize> =
        layout.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
    if let Some(extra) = declared.keys().find(|id| !position.contains_key(id)) {
        return Err(FormulationError::UnknownVariableName(extra.to_string()));
    }
    if let Some(missing) = layout.iter().find(|v| !declared.contains_key(&v.id)) {
        return Err(err(
            last_line,
            format!("variable {} is never declared", missing.id),
        ));
    }
    let variables = layout
        .into_iter()
        .map(|v| Variable {
            id: v.id,
            domain: declared[&v.id],
        })
        .collect();
    Ok(MilpModel {
        graph,
        variables,
        constraints: rows,
    })
}

/// Rebuilds the graph: vertices from the `x` variables, edges from the `t`
/// variables and weights from the negated coefficients of the cut-weight rows.
fn recover_graph(
    declared: &BTreeMap<VariableId, Domain>,
    rows: &[LinearConstraint],
    line: usize,
) -> Result<Graph, FormulationError> {
    let members: Vec<usize> = declared
        .keys()
        .filter_map(|id| match id {
            VariableId::Member(v) => Some(*v),
            _ => None,
        })
        .collect();
    let n = members.len();
    if members.iter().copied().ne(1..=n) {
        return Err(err(line, "x variables must be numbered 1..n without gaps"));
    }
    let mut weight_rows: Vec<&LinearConstraint> =
        rows.iter().filter(|r| r.tag == Tag::CutWeight).collect();
    weight_rows.sort_by_key(|r| r.index);
    if weight_rows.is_empty() {
        return Err(err(line, "no cut-weight rows (c7_*) present"));
    }
    let mut edges = Vec::new();
    for id in declared.keys() {
        if let VariableId::Cut(e) = id {
            let weights = weight_rows
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .find(|(t, _)| t == id)
                        .map(|&(_, c)| -c)
                        .ok_or_else(|| err(line, format!("{id} missing from row {}", r.name())))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            edges.push((e.tail, e.head, weights));
        }
    }
    Graph::with_dimension(n, weight_rows.len(), edges)
        .map_err(|e| err(line, format!("invalid graph in model: {e}")))
}
