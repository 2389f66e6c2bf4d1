//! Instances, assignments, objectives and whole-instance checking.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Index;

use crate::check::check_constraint;
use crate::constraint::Constraint;
use crate::domain::{Domain, Value, VarId, Variable};
use crate::error::{CheckError, EvalError, ModelError};
use crate::expr::Expr;

/// Tag marking symmetry-breaking constraint groups.
pub const SYMMETRY_BREAKING: &str = "symmetry-breaking";
/// Tag marking redundant (implied) constraint groups.
pub const REDUNDANT: &str = "redundant-constraints";

/// A constraint as posted in a model, with its group label and tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Posted {
    pub constraint: Constraint,
    pub group: Option<String>,
    pub tags: Vec<String>,
}

impl Posted {
    pub fn new(constraint: Constraint) -> Self {
        Posted { constraint, group: None, tags: Vec::new() }
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// `true` when `a` is strictly better than `b`.
    pub fn better(self, a: Value, b: Value) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectiveForm {
    Var(VarId),
    Sum { scope: Vec<VarId>, coeffs: Vec<Value> },
    Maximum(Vec<Expr>),
    Minimum(Vec<Expr>),
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub form: ObjectiveForm,
}

impl Objective {
    pub fn vars(&self) -> Vec<VarId> {
        match &self.form {
            ObjectiveForm::Var(v) => vec![*v],
            ObjectiveForm::Sum { scope, .. } => scope.clone(),
            ObjectiveForm::Maximum(es) | ObjectiveForm::Minimum(es) => {
                let mut seen = HashSet::new();
                es.iter().flat_map(|e| e.vars()).filter(|v| seen.insert(*v)).collect()
            }
            ObjectiveForm::Expr(e) => e.vars(),
        }
    }

    /// The objective as a single expression tree.
    pub fn to_expr(&self) -> Expr {
        match &self.form {
            ObjectiveForm::Var(v) => Expr::Var(*v),
            ObjectiveForm::Sum { scope, coeffs } => Expr::add(
                scope
                    .iter()
                    .zip(coeffs)
                    .map(|(&v, &c)| {
                        if c == 1 {
                            Expr::Var(v)
                        } else {
                            Expr::nary(crate::expr::NaryOp::Mul, vec![Expr::Const(c), Expr::Var(v)])
                        }
                    })
                    .collect(),
            ),
            ObjectiveForm::Maximum(es) => Expr::nary(crate::expr::NaryOp::Max, es.clone()),
            ObjectiveForm::Minimum(es) => Expr::nary(crate::expr::NaryOp::Min, es.clone()),
            ObjectiveForm::Expr(e) => e.clone(),
        }
    }

    pub fn evaluate(&self, a: &[Value]) -> Result<Value, EvalError> {
        match &self.form {
            ObjectiveForm::Var(v) => Ok(a[v.index()]),
            ObjectiveForm::Sum { scope, coeffs } => scope
                .iter()
                .zip(coeffs)
                .try_fold(0 as Value, |acc, (v, &c)| acc.checked_add(c.checked_mul(a[v.index()])?))
                .ok_or_else(|| EvalError::Overflow { expr: "objective sum".into() }),
            _ => self.to_expr().eval(a),
        }
    }
}

/// A complete model: variables, constraints and an optional objective.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Posted>,
    pub objective: Option<Objective>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Instance {
    pub fn is_cop(&self) -> bool {
        self.objective.is_some()
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn domain(&self, v: VarId) -> &Domain {
        &self.variables[v.index()].domain
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.variables[v.index()].name
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().find(|v| v.name == name).map(|v| v.id)
    }

    pub fn constraint(&self, i: usize) -> &Constraint {
        &self.constraints[i].constraint
    }

    /// Checks every structural invariant: dense ids, unique names, non-empty
    /// domains, closed variable references and per-form shape rules.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut names = HashSet::new();
        for (i, v) in self.variables.iter().enumerate() {
            if v.id.index() != i {
                return Err(ModelError::NonDenseIds { position: i, found: v.id });
            }
            if !names.insert(v.name.as_str()) {
                return Err(ModelError::DuplicateName(v.name.clone()));
            }
            if v.domain.is_empty() {
                return Err(ModelError::EmptyDomain(v.name.clone()));
            }
            if v.domain.contains(crate::domain::STAR) {
                return Err(ModelError::ReservedValue(v.name.clone()));
            }
        }
        let dom = |v: VarId| self.variables.get(v.index()).map(|x| x.domain.clone());
        for (index, p) in self.constraints.iter().enumerate() {
            for v in p.constraint.var_refs() {
                if v.index() >= self.variables.len() {
                    return Err(ModelError::UnknownVariable { index, var: v });
                }
            }
            p.constraint
                .validate(&dom)
                .map_err(|message| ModelError::Invalid { index, message })?;
        }
        if let Some(obj) = &self.objective {
            for v in obj.vars() {
                if v.index() >= self.variables.len() {
                    return Err(ModelError::Objective(format!("unknown variable {v}")));
                }
            }
            match &obj.form {
                ObjectiveForm::Sum { scope, coeffs } if scope.len() != coeffs.len() => {
                    return Err(ModelError::Objective("coefficient/scope length mismatch".into()))
                }
                ObjectiveForm::Maximum(es) | ObjectiveForm::Minimum(es) if es.is_empty() => {
                    return Err(ModelError::Objective("empty maximum/minimum".into()))
                }
                ObjectiveForm::Expr(e) => e.type_check(&dom).map_err(ModelError::Objective)?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Copy without the constraints carrying `tag`.
    pub fn without_tag(&self, tag: &str) -> Instance {
        let mut out = self.clone();
        out.constraints.retain(|p| !p.has_tag(tag));
        out
    }

    /// Number of posted constraints per form.
    pub fn form_counts(&self) -> BTreeMap<crate::constraint::ConstraintKind, usize> {
        let mut m = BTreeMap::new();
        for p in &self.constraints {
            *m.entry(p.constraint.kind()).or_insert(0) += 1;
        }
        m
    }
}

/// A total assignment, one value per variable id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<Value>);

impl Assignment {
    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Index<VarId> for Assignment {
    type Output = Value;
    fn index(&self, v: VarId) -> &Value {
        &self.0[v.index()]
    }
}

impl From<Vec<Value>> for Assignment {
    fn from(v: Vec<Value>) -> Self {
        Assignment(v)
    }
}

/// Outcome of checking an assignment against a whole instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    /// Indices of violated constraints, increasing.
    pub violated: Vec<usize>,
    /// Variables whose value lies outside their declared domain.
    pub out_of_domain: Vec<VarId>,
    pub objective: Option<Value>,
}

pub fn check_instance(inst: &Instance, a: &Assignment) -> Result<Verdict, CheckError> {
    if a.len() != inst.n_vars() {
        return Err(CheckError::WrongLength { expected: inst.n_vars(), got: a.len() });
    }
    let out_of_domain: Vec<VarId> = inst
        .variables
        .iter()
        .filter(|v| !v.domain.contains(a[v.id]))
        .map(|v| v.id)
        .collect();
    let violated: Vec<usize> = inst
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, p)| !check_constraint(&p.constraint, a.values()))
        .map(|(i, _)| i)
        .collect();
    let objective = inst.objective.as_ref().and_then(|o| o.evaluate(a.values()).ok());
    Ok(Verdict { ok: violated.is_empty() && out_of_domain.is_empty(), violated, out_of_domain, objective })
}

pub fn objective_value(inst: &Instance, a: &Assignment) -> Result<Value, CheckError> {
    let obj = inst.objective.as_ref().ok_or(CheckError::NoObjective)?;
    if a.len() != inst.n_vars() {
        return Err(CheckError::WrongLength { expected: inst.n_vars(), got: a.len() });
    }
    Ok(obj.evaluate(a.values())?)
}

/// Incremental construction of an [`Instance`].
#[derive(Debug, Default)]
pub struct InstanceBuilder {
    variables: Vec<Variable>,
    constraints: Vec<Posted>,
    objective: Option<Objective>,
    metadata: BTreeMap<String, serde_json::Value>,
    group: Option<String>,
    tags: Vec<String>,
    names: HashMap<String, VarId>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, name: impl Into<String>, domain: Domain) -> VarId {
        let id = VarId(self.variables.len() as u32);
        let name = name.into();
        self.names.insert(name.clone(), id);
        self.variables.push(Variable { id, name, domain });
        id
    }

    /// One-dimensional array `name[i]`.
    pub fn array(&mut self, name: &str, n: usize, dom: impl Fn(usize) -> Domain) -> Vec<VarId> {
        (0..n).map(|i| self.var(format!("{name}[{i}]"), dom(i))).collect()
    }

    /// Two-dimensional array `name[i][j]`; `None` from `dom` leaves a hole.
    pub fn matrix(
        &mut self,
        name: &str,
        rows: usize,
        cols: usize,
        dom: impl Fn(usize, usize) -> Option<Domain>,
    ) -> Vec<Vec<Option<VarId>>> {
        (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| dom(i, j).map(|d| self.var(format!("{name}[{i}][{j}]"), d)))
                    .collect()
            })
            .collect()
    }

    /// Dense two-dimensional array.
    pub fn grid(&mut self, name: &str, rows: usize, cols: usize, dom: impl Fn(usize, usize) -> Domain) -> Vec<Vec<VarId>> {
        self.matrix(name, rows, cols, |i, j| Some(dom(i, j)))
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.unwrap()).collect())
            .collect()
    }

    pub fn domain(&self, v: VarId) -> &Domain {
        &self.variables[v.index()].domain
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.names.get(name).copied()
    }

    /// Sets the group label and tags applied to subsequently posted constraints.
    pub fn group(&mut self, label: &str, tags: &[&str]) -> &mut Self {
        self.group = Some(label.to_string());
        self.tags = tags.iter().map(|t| t.to_string()).collect();
        self
    }

    pub fn post(&mut self, c: Constraint) -> usize {
        self.constraints.push(Posted { constraint: c, group: self.group.clone(), tags: self.tags.clone() });
        self.constraints.len() - 1
    }

    pub fn post_all(&mut self, cs: impl IntoIterator<Item = Constraint>) {
        for c in cs {
            self.post(c);
        }
    }

    pub fn objective(&mut self, sense: Sense, form: ObjectiveForm) {
        self.objective = Some(Objective { sense, form });
    }

    pub fn meta(&mut self, key: &str, value: serde_json::Value) {
        self.metadata.insert(key.to_string(), value);
    }

    pub fn build(self) -> Result<Instance, ModelError> {
        let inst = Instance {
            variables: self.variables,
            constraints: self.constraints,
            objective: self.objective,
            metadata: self.metadata,
        };
        inst.validate()?;
        Ok(inst)
    }
}
