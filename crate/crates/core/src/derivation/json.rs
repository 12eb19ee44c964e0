use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::formula::{parse_formula, Formula};

use super::{Derivation, Label};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("at {path}: {message}")]
    Shape { path: String, message: String },
    #[error("at {path}: stored conclusion `{stored}` but the rule gives `{computed}`")]
    ConclusionMismatch {
        path: String,
        stored: Formula,
        computed: Formula,
    },
}

fn shape(path: &str, message: impl Into<String>) -> JsonError {
    JsonError::Shape {
        path: if path.is_empty() { "root".into() } else { path.into() },
        message: message.into(),
    }
}

pub fn proof_to_json(d: &Derivation) -> Value {
    crate::deep(|| match d {
        Derivation::Hyp { formula, label } => {
            let mut m = Map::new();
            m.insert("formula".into(), json!(formula.to_string()));
            if let Some(l) = label {
                m.insert("label".into(), json!(l.0));
            }
            json!({ "hyp": m })
        }
        Derivation::Intro {
            label,
            discharged,
            premise,
            conclusion,
        } => json!({
            "intro": {
                "label": label.0,
                "discharged": discharged.to_string(),
                "premise": proof_to_json(premise),
                "conclusion": conclusion.to_string(),
            }
        }),
        Derivation::Elim {
            minor,
            major,
            conclusion,
        } => json!({
            "elim": {
                "minor": proof_to_json(minor),
                "major": proof_to_json(major),
                "conclusion": conclusion.to_string(),
            }
        }),
    })
}

impl Serialize for Derivation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        proof_to_json(self).serialize(s)
    }
}

/// Parses proof JSON text. Nesting depth is not limited by the parser.
pub fn proof_from_str(text: &str) -> Result<Derivation, JsonError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let v = Value::deserialize(serde_stacker::Deserializer::new(&mut de))?;
    de.end()?;
    proof_from_json(&v)
}

/// Conclusions are recomputed from the premises. A stored `"conclusion"`
/// must agree with the recomputed one. An elimination whose major premise
/// is not an implication keeps its stored conclusion so that the checker
/// can report it.
pub fn proof_from_json(v: &Value) -> Result<Derivation, JsonError> {
    load(v, "")
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, path: &str) -> Result<&'a Value, JsonError> {
    obj.get(name)
        .ok_or_else(|| shape(path, format!("missing field `{name}`")))
}

fn formula_field(obj: &Map<String, Value>, name: &str, path: &str) -> Result<Formula, JsonError> {
    let text = field(obj, name, path)?
        .as_str()
        .ok_or_else(|| shape(path, format!("`{name}` must be a string")))?;
    parse_formula(text).map_err(|e| shape(path, format!("`{name}`: {e}")))
}

fn opt_formula(obj: &Map<String, Value>, name: &str, path: &str) -> Result<Option<Formula>, JsonError> {
    match obj.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => formula_field(obj, name, path).map(Some),
    }
}

fn label_value(v: &Value, path: &str) -> Result<Label, JsonError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .map(Label)
        .ok_or_else(|| shape(path, "label must be a non-negative integer"))
}

fn join(path: &str, step: &str) -> String {
    if path.is_empty() {
        step.to_string()
    } else {
        format!("{path}.{step}")
    }
}

fn load(v: &Value, path: &str) -> Result<Derivation, JsonError> {
    crate::deep(|| load_node(v, path))
}

fn load_node(v: &Value, path: &str) -> Result<Derivation, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape(path, "expected an object"))?;
    if obj.len() != 1 {
        return Err(shape(path, "expected exactly one of `hyp`, `intro`, `elim`"));
    }
    let (tag, body) = obj.iter().next().unwrap();
    let body = body
        .as_object()
        .ok_or_else(|| shape(path, format!("`{tag}` must be an object")))?;
    match tag.as_str() {
        "hyp" => {
            let formula = formula_field(body, "formula", path)?;
            let label = match body.get("label") {
                None | Some(Value::Null) => None,
                Some(l) => Some(label_value(l, path)?),
            };
            Ok(Derivation::Hyp { formula, label })
        }
        "intro" => {
            let label = label_value(field(body, "label", path)?, path)?;
            let discharged = formula_field(body, "discharged", path)?;
            let premise = load(field(body, "premise", path)?, &join(path, "premise"))?;
            let stored = opt_formula(body, "conclusion", path)?;
            let d = Derivation::intro(label.0, discharged, premise);
            if let Some(s) = stored {
                if &s != d.conclusion() {
                    return Err(JsonError::ConclusionMismatch {
                        path: if path.is_empty() { "root".into() } else { path.into() },
                        stored: s,
                        computed: d.conclusion().clone(),
                    });
                }
            }
            Ok(d)
        }
        "elim" => {
            let minor = load(field(body, "minor", path)?, &join(path, "minor"))?;
            let major = load(field(body, "major", path)?, &join(path, "major"))?;
            let stored = opt_formula(body, "conclusion", path)?;
            let computed = major.conclusion().consequent().cloned();
            let conclusion = match (stored, computed) {
                (Some(s), Some(c)) if s != c => {
                    return Err(JsonError::ConclusionMismatch {
                        path: if path.is_empty() { "root".into() } else { path.into() },
                        stored: s,
                        computed: c,
                    })
                }
                (_, Some(c)) => c,
                (Some(s), None) => s,
                (None, None) => {
                    return Err(shape(
                        path,
                        format!(
                            "major premise `{}` is not an implication and no conclusion is given",
                            major.conclusion()
                        ),
                    ))
                }
            };
            Ok(Derivation::elim_unchecked(minor, major, conclusion))
        }
        other => Err(shape(path, format!("unknown node kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn round_trip() {
        let b = Derivation::elim(Derivation::assume(f("A"), 1), Derivation::hyp(f("A -> B"))).unwrap();
        let d = Derivation::intro(1, f("A"), b);
        let v = proof_to_json(&d);
        assert_eq!(proof_from_json(&v).unwrap(), d);
        assert_eq!(proof_from_str(&v.to_string()).unwrap(), d);
    }

    #[test]
    fn conclusions_are_recomputed() {
        let v = json!({"intro": {"label": 1, "discharged": "A", "premise": {"hyp": {"formula": "A", "label": 1}}}});
        assert_eq!(proof_from_json(&v).unwrap().conclusion(), &f("A -> A"));
        let bad = json!({"intro": {"label": 1, "discharged": "A", "conclusion": "A -> B",
            "premise": {"hyp": {"formula": "A", "label": 1}}}});
        assert!(matches!(
            proof_from_json(&bad),
            Err(JsonError::ConclusionMismatch { .. })
        ));
    }

    #[test]
    fn shape_errors_name_the_path() {
        let v = json!({"elim": {"minor": {"hyp": {"formula": "A"}}, "major": {"hyp": {}}}});
        match proof_from_json(&v) {
            Err(JsonError::Shape { path, .. }) => assert_eq!(path, "major"),
            other => panic!("{other:?}"),
        }
        assert!(proof_from_str("{\"hyp\": ").is_err());
        assert!(proof_from_str("{\"lemma\": {}}").is_err());
    }

    #[test]
    fn deep_nesting_loads() {
        let mut text = String::from(r#"{"hyp":{"formula":"q"}}"#);
        for _ in 0..600 {
            text = format!(r#"{{"elim":{{"minor":{text},"major":{{"hyp":{{"formula":"q -> q"}}}}}}}}"#);
        }
        assert_eq!(proof_from_str(&text).unwrap().height(), 600);
    }
}
