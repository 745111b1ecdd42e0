//! Problem documents: the JSON input format and its validation into library
//! objects.

use std::sync::Arc;

use ruelle::{LocallyConstantFn, TransitionMatrix, Word};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordValue {
    pub word: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub memory: usize,
    pub values: Vec<WordValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDocument {
    pub name: String,
    pub memory: usize,
    pub values: Vec<WordValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub alphabet_size: usize,
    pub transition: Vec<Vec<u8>>,
    pub theta: f64,
    pub potential: TableDocument,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<ObservableDocument>,
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct Problem {
    pub document: ProblemDocument,
    pub matrix: Arc<TransitionMatrix>,
    pub potential: LocallyConstantFn,
    pub observables: Vec<(String, LocallyConstantFn)>,
}

impl Problem {
    pub fn observable(&self, name: &str) -> Result<&LocallyConstantFn, CliError> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| CliError::Usage(format!("no observable named {name:?}")))
    }
}

pub fn parse_document(text: &str) -> Result<ProblemDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::InputParse {
        context: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn invalid(context: impl Into<String>, err: impl std::fmt::Display) -> CliError {
    CliError::InputParse {
        context: context.into(),
        message: err.to_string(),
    }
}

fn build_table(
    context: &str,
    matrix: &Arc<TransitionMatrix>,
    theta: f64,
    memory: usize,
    values: &[WordValue],
) -> Result<LocallyConstantFn, CliError> {
    if let Some(bad) = values.iter().find(|e| !e.value.is_finite()) {
        return Err(invalid(
            context,
            format!("value for word {} is not finite", Word::new(bad.word.clone())),
        ));
    }
    let entries = values.iter().map(|e| (Word::new(e.word.clone()), e.value));
    LocallyConstantFn::from_table(matrix.clone(), theta, memory, entries).map_err(|e| invalid(context, e))
}

pub fn validate(document: ProblemDocument) -> Result<Problem, CliError> {
    let q = document.alphabet_size;
    if document.transition.len() != q {
        return Err(invalid(
            "transition",
            format!("expected {q} rows, found {}", document.transition.len()),
        ));
    }
    if !(document.theta > 0.0 && document.theta < 1.0) {
        return Err(invalid("theta", format!("{} is not in (0, 1)", document.theta)));
    }
    let matrix = Arc::new(TransitionMatrix::new(&document.transition).map_err(|e| invalid("transition", e))?);
    let potential = build_table(
        "potential",
        &matrix,
        document.theta,
        document.potential.memory,
        &document.potential.values,
    )?;
    let mut observables: Vec<(String, LocallyConstantFn)> = Vec::new();
    for (i, obs) in document.observables.iter().enumerate() {
        let context = format!("observables[{i}] ({})", obs.name);
        if observables.iter().any(|(n, _)| n == &obs.name) {
            return Err(invalid(context, "duplicate observable name"));
        }
        let g = build_table(&context, &matrix, document.theta, obs.memory, &obs.values)?;
        observables.push((obs.name.clone(), g));
    }
    Ok(Problem {
        document,
        matrix,
        potential,
        observables,
    })
}

/// Word/value rows of a function, in canonical word order.
pub fn table_rows(g: &LocallyConstantFn) -> Vec<WordValue> {
    g.iter()
        .map(|(w, value)| WordValue {
            word: w.symbols().to_vec(),
            value,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(theta: f64, rows: Vec<Vec<u8>>, values: &[(Vec<usize>, f64)]) -> ProblemDocument {
        ProblemDocument {
            alphabet_size: 2,
            transition: rows,
            theta,
            potential: TableDocument {
                memory: values[0].0.len(),
                values: values
                    .iter()
                    .map(|(w, v)| WordValue {
                        word: w.clone(),
                        value: *v,
                    })
                    .collect(),
            },
            observables: Vec::new(),
        }
    }

    fn message(err: CliError) -> String {
        err.to_string()
    }

    #[test]
    fn valid_document_builds_functions() {
        let d = doc(0.5, vec![vec![1, 1], vec![1, 0]], &[(vec![2], 1.0), (vec![1], -1.0)]);
        let p = validate(d).unwrap();
        assert_eq!(p.potential.values(), &[-1.0, 1.0]);
        assert_eq!(table_rows(&p.potential)[0].word, vec![1]);
    }

    #[test]
    fn invalid_documents_name_the_field() {
        let one = &[(vec![1], 0.0), (vec![2], 0.0)];
        let e = message(validate(doc(1.0, vec![vec![1, 1], vec![1, 1]], one)).unwrap_err());
        assert!(e.contains("theta"), "{e}");
        let e = message(validate(doc(0.5, vec![vec![1, 1]], one)).unwrap_err());
        assert!(e.contains("transition") && e.contains("2 rows"), "{e}");
        let e = message(validate(doc(0.5, vec![vec![0, 1], vec![1, 0]], one)).unwrap_err());
        assert!(e.contains("transition"), "{e}");
        let pairs = &[(vec![1, 1], 0.0), (vec![1, 2], 0.0), (vec![2, 1], 0.0), (vec![2, 2], 0.0)];
        let e = message(validate(doc(0.5, vec![vec![1, 1], vec![1, 0]], pairs)).unwrap_err());
        assert!(e.contains("potential") && e.contains("[2, 2]"), "{e}");
        let dup = &[(vec![1], 0.0), (vec![1], 1.0), (vec![2], 0.0)];
        let e = message(validate(doc(0.5, vec![vec![1, 1], vec![1, 1]], dup)).unwrap_err());
        assert!(e.contains("duplicate"), "{e}");
    }

    #[test]
    fn observables_are_validated() {
        let mut d = doc(0.5, vec![vec![1, 1], vec![1, 1]], &[(vec![1], 0.0), (vec![2], 0.0)]);
        let obs = ObservableDocument {
            name: "a".into(),
            memory: 1,
            values: vec![WordValue { word: vec![3], value: 1.0 }],
        };
        d.observables = vec![obs];
        let e = message(validate(d.clone()).unwrap_err());
        assert!(e.contains("observables[0] (a)"), "{e}");
        d.observables[0].values = vec![
            WordValue { word: vec![1], value: 1.0 },
            WordValue { word: vec![2], value: 2.0 },
        ];
        d.observables.push(d.observables[0].clone());
        let e = message(validate(d).unwrap_err());
        assert!(e.contains("duplicate observable"), "{e}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse_document(r#"{"alphabet_size": 2, "extra": 1}"#).unwrap_err();
        assert!(message(err).contains("line 1"));
    }
}
