//! Solution documents: `{instance, assignment: name -> value, objective?}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use xcore::{Assignment, Instance, Value};

use crate::doc::DocError;
use crate::json::to_compact;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    /// Free-form label of the instance, usually its file name.
    pub instance: String,
    pub assignment: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Value>,
}

impl SolutionDoc {
    pub fn from_assignment(label: &str, inst: &Instance, a: &Assignment) -> SolutionDoc {
        SolutionDoc {
            instance: label.to_string(),
            assignment: inst.variables.iter().map(|v| (v.name.clone(), a[v.id])).collect(),
            objective: inst.objective.as_ref().and_then(|o| o.evaluate(a.values()).ok()),
        }
    }

    /// Resolves names against `inst`; every variable needs a value and
    /// every name must exist.
    pub fn to_assignment(&self, inst: &Instance) -> Result<Assignment, DocError> {
        for name in self.assignment.keys() {
            if inst.var_by_name(name).is_none() {
                return Err(DocError::At {
                    path: format!("$.assignment.{name}"),
                    message: format!("unknown variable `{name}`"),
                });
            }
        }
        let mut values = Vec::with_capacity(inst.n_vars());
        for v in &inst.variables {
            match self.assignment.get(&v.name) {
                Some(&x) => values.push(x),
                None => {
                    return Err(DocError::At {
                        path: "$.assignment".into(),
                        message: format!("no value for variable `{}`", v.name),
                    })
                }
            }
        }
        Ok(Assignment(values))
    }

    pub fn to_text(&self) -> String {
        to_compact(&serde_json::to_value(self).expect("solution documents serialize")) + "\n"
    }

    pub fn parse(text: &str) -> Result<SolutionDoc, DocError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use xcore::{Domain, InstanceBuilder, ObjectiveForm, Sense};

    #[test]
    fn names_resolve() {
        let mut b = InstanceBuilder::new();
        let x = b.array("x", 2, |_| Domain::range(0, 3));
        b.objective(Sense::Minimize, ObjectiveForm::Sum { scope: x, coeffs: vec![1, 10] });
        let inst = b.build().unwrap();
        let a = Assignment(vec![2, 1]);
        let doc = SolutionDoc::from_assignment("t", &inst, &a);
        assert_eq!(doc.objective, Some(12));
        let back = SolutionDoc::parse(&doc.to_text()).unwrap();
        assert_eq!(back.to_assignment(&inst).unwrap(), a);

        let mut missing = doc.clone();
        missing.assignment.remove("x[1]");
        assert!(missing.to_assignment(&inst).unwrap_err().to_string().contains("x[1]"));
        let mut extra = doc;
        extra.assignment.insert("y".into(), 0);
        assert_eq!(extra.to_assignment(&inst).unwrap_err().path(), Some("$.assignment.y"));
    }
}
