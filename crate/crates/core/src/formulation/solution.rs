use super::{Assignment, FormulationError, MilpModel, VariableId};

/// Reads a `name value` listing (whitespace separated, any line layout) into
/// an assignment over `model`. Variables not mentioned are 0. Lines starting
/// with `#` are comments.
pub fn read_external_solution(
    model: &MilpModel,
    text: &str,
) -> Result<Assignment, FormulationError> {
    let mut assignment = Assignment::zeros(model);
    let mut pending: Option<(VariableId, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.starts_with('#') {
            continue;
        }
        for tok in content.split_whitespace() {
            match pending.take() {
                None => {
                    let id: VariableId = tok
                        .parse()
                        .map_err(|_| FormulationError::UnknownVariableName(tok.to_string()))?;
                    if !model.has_variable(id) {
                        return Err(FormulationError::UnknownVariableName(tok.to_string()));
                    }
                    pending = Some((id, line));
                }
                Some((id, _)) => {
                    let value: f64 = tok.parse().map_err(|_| FormulationError::Parse {
                        line,
                        message: format!("expected a value for {id}, found `{tok}`"),
                    })?;
                    assignment.set(id, value);
                }
            }
        }
    }
    if let Some((id, line)) = pending {
        return Err(FormulationError::Parse {
            line,
            message: format!("variable {id} has no value"),
        });
    }
    Ok(assignment)
}
