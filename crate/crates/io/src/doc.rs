//! The `xcore-json/1` instance document.
//!
//! Variables are referenced by name everywhere. Expressions use the
//! functional syntax of [`crate::expr`]; slide templates name their
//! placeholders `%0`, `%1`, ...

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value as Json};
use thiserror::Error;
use xcore::{
    Automaton, BinLoads, ChannelTarget, CmpOp, Condition, Constraint, ConstraintKind, Direction, Domain, Expr, Instance,
    Mdd, ModelError, Objective, ObjectiveForm, Posted, Sense, Term, Value, VarId, Variable, STAR,
};

use crate::expr::{parse_expr, valid_name};
use crate::json::{path_to_pointer, write_canonical};

pub const FORMAT: &str = "xcore-json/1";

#[derive(Debug, Error, PartialEq)]
pub enum DocError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    At { path: String, message: String },
}

impl DocError {
    pub fn path(&self) -> Option<&str> {
        match self {
            DocError::At { path, .. } => Some(path),
            DocError::Syntax { .. } => None,
        }
    }
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Unknown fields are errors.
    #[default]
    Strict,
    /// Unknown fields are kept and reported.
    Lax,
}

/// A field the reader did not recognise, kept for writing back.
#[derive(Clone, Debug, PartialEq)]
pub struct Extra {
    /// Path of the enclosing object, e.g. `$.constraints[2]`.
    pub parent: String,
    pub key: String,
    pub value: Json,
}

impl Extra {
    pub fn path(&self) -> String {
        format!("{}.{}", self.parent, self.key)
    }
}

/// Instance plus the unknown fields met in lax mode.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceDoc {
    pub instance: Instance,
    pub extras: Vec<Extra>,
}

impl InstanceDoc {
    /// Canonical text with the extras put back in place.
    pub fn to_text(&self) -> String {
        let mut doc = instance_to_json(&self.instance);
        for x in &self.extras {
            if let Some(Json::Object(m)) = doc.pointer_mut(&path_to_pointer(&x.parent)) {
                m.entry(x.key.clone()).or_insert_with(|| x.value.clone());
            }
        }
        write_canonical(&doc)
    }
}

// ---------------------------------------------------------------- writing

fn domain_json(d: &Domain) -> Json {
    Json::Array(
        d.intervals().iter().map(|&(lo, hi)| if lo == hi { json!(lo) } else { json!([lo, hi]) }).collect(),
    )
}

fn term_json(t: &Term, name: &dyn Fn(VarId) -> String) -> Json {
    match t {
        Term::Val(v) => json!(v),
        Term::Var(x) => json!(name(*x)),
    }
}

fn condition_json(c: &Condition, name: &dyn Fn(VarId) -> String) -> Json {
    match c {
        Condition::Cmp(op, t) => json!({"op": op.name(), "rhs": term_json(t, name)}),
        Condition::In(d) => json!({"op": "in", "set": domain_json(d)}),
        Condition::NotIn(d) => json!({"op": "notin", "set": domain_json(d)}),
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Increasing => "increasing",
        Direction::Decreasing => "decreasing",
    }
}

fn constraint_json(c: &Constraint, name: &dyn Fn(VarId) -> String) -> Json {
    let names = |vs: &[VarId]| -> Json { Json::Array(vs.iter().map(|&v| json!(name(v))).collect()) };
    let lists = |ls: &[Vec<VarId>]| -> Json { Json::Array(ls.iter().map(|l| names(l)).collect()) };
    let mut m = match c {
        Constraint::Intension(e) => json!({"function": e.to_functional(name)}),
        Constraint::Extension { scope, tuples, supports, starred } => {
            let rows: Vec<Json> = tuples
                .iter()
                .map(|t| Json::Array(t.iter().map(|&v| if v == STAR { json!("*") } else { json!(v) }).collect()))
                .collect();
            json!({"scope": names(scope), "tuples": rows, "supports": supports, "starred": starred})
        }
        Constraint::Regular { scope, automaton: a } => {
            let st = |i: usize| json!(a.states[i]);
            json!({
                "scope": names(scope),
                "states": a.states,
                "start": st(a.start),
                "finals": a.finals.iter().map(|&f| st(f)).collect::<Vec<_>>(),
                "transitions": a.transitions.iter().map(|&(p, v, q)| json!([st(p), v, st(q)])).collect::<Vec<_>>(),
            })
        }
        Constraint::Mdd { scope, diagram: d } => {
            let nd = |i: usize| json!(d.nodes[i]);
            json!({
                "scope": names(scope),
                "nodes": d.nodes,
                "root": nd(d.root),
                "terminal": nd(d.terminal),
                "transitions": d.transitions.iter().map(|&(p, v, q)| json!([nd(p), v, nd(q)])).collect::<Vec<_>>(),
            })
        }
        Constraint::AllDifferent { scope, except } => {
            let mut m = json!({"scope": names(scope)});
            if let Some(e) = except {
                m["except"] = json!(e);
            }
            m
        }
        Constraint::AllDifferentList { lists: ls } => json!({"lists": lists(ls)}),
        Constraint::AllEqual { scope } => json!({"scope": names(scope)}),
        Constraint::Ordered { scope, strict, direction } => {
            json!({"scope": names(scope), "strict": strict, "direction": direction_name(*direction)})
        }
        Constraint::Lex { lists: ls, strict, direction } => {
            json!({"lists": lists(ls), "strict": strict, "direction": direction_name(*direction)})
        }
        Constraint::Precedence { scope, values, covered } => {
            json!({"scope": names(scope), "values": values, "covered": covered})
        }
        Constraint::Sum { scope, coeffs, condition } => {
            json!({"scope": names(scope), "coeffs": coeffs, "condition": condition_json(condition, name)})
        }
        Constraint::Count { scope, values, condition } => {
            json!({"scope": names(scope), "values": values, "condition": condition_json(condition, name)})
        }
        Constraint::NValues { scope, condition } | Constraint::Maximum { scope, condition } | Constraint::Minimum { scope, condition } => {
            json!({"scope": names(scope), "condition": condition_json(condition, name)})
        }
        Constraint::Cardinality { scope, values, occurs, closed } => {
            let occ: Vec<Json> = occurs.iter().map(|&(lo, hi)| json!([lo, hi])).collect();
            json!({"scope": names(scope), "values": values, "occurs": occ, "closed": closed})
        }
        Constraint::Element { list, index, value } => json!({
            "list": list.iter().map(|t| term_json(t, name)).collect::<Vec<_>>(),
            "index": name(*index),
            "value": term_json(value, name),
        }),
        Constraint::Channel { list, target } => {
            let mut m = json!({"list": names(list)});
            match target {
                ChannelTarget::SelfInverse => {}
                ChannelTarget::List(other) => m["other"] = names(other),
                ChannelTarget::Value(v) => m["valueVar"] = json!(name(*v)),
            }
            m
        }
        Constraint::NoOverlap { origins, lengths, zero_ignored } => {
            json!({"origins": lists(origins), "lengths": lengths, "zeroIgnored": zero_ignored})
        }
        Constraint::Cumulative { origins, lengths, heights, condition } => json!({
            "origins": names(origins),
            "lengths": lengths,
            "heights": heights,
            "condition": condition_json(condition, name),
        }),
        Constraint::BinPacking { scope, sizes, loads } => {
            let mut m = json!({"scope": names(scope), "sizes": sizes});
            match loads {
                BinLoads::Condition(c) => m["condition"] = condition_json(c, name),
                BinLoads::Loads(l) => m["loads"] = names(l),
            }
            m
        }
        Constraint::Knapsack { scope, weights, profits, limit, condition } => json!({
            "scope": names(scope),
            "weights": weights,
            "profits": profits,
            "limit": term_json(limit, name),
            "condition": condition_json(condition, name),
        }),
        Constraint::Circuit { scope } => json!({"scope": names(scope)}),
        Constraint::Instantiation { scope, values } => json!({"scope": names(scope), "values": values}),
        Constraint::Slide { scope, arity, offset, circular, template } => json!({
            "scope": names(scope),
            "arity": arity,
            "offset": offset,
            "circular": circular,
            "template": constraint_json(template, &|v| format!("%{}", v.0)),
        }),
    };
    m["type"] = json!(c.kind().name());
    m
}

fn objective_json(o: &Objective, name: &dyn Fn(VarId) -> String) -> Json {
    let exprs = |es: &[Expr]| -> Json { Json::Array(es.iter().map(|e| json!(e.to_functional(name))).collect()) };
    let mut m = match &o.form {
        ObjectiveForm::Var(v) => json!({"kind": "var", "var": name(*v)}),
        ObjectiveForm::Sum { scope, coeffs } => json!({
            "kind": "sum",
            "scope": scope.iter().map(|&v| name(v)).collect::<Vec<_>>(),
            "coeffs": coeffs,
        }),
        ObjectiveForm::Maximum(es) => json!({"kind": "maximum", "terms": exprs(es)}),
        ObjectiveForm::Minimum(es) => json!({"kind": "minimum", "terms": exprs(es)}),
        ObjectiveForm::Expr(e) => json!({"kind": "expr", "function": e.to_functional(name)}),
    };
    m["sense"] = json!(o.sense.name());
    m
}

pub fn instance_to_json(inst: &Instance) -> Json {
    let name = |v: VarId| inst.name(v).to_string();
    let variables: Vec<Json> =
        inst.variables.iter().map(|v| json!({"name": v.name, "domain": domain_json(&v.domain)})).collect();
    let constraints: Vec<Json> = inst
        .constraints
        .iter()
        .map(|p| {
            let mut c = constraint_json(&p.constraint, &name);
            if let Some(g) = &p.group {
                c["group"] = json!(g);
            }
            if !p.tags.is_empty() {
                c["tags"] = json!(p.tags);
            }
            c
        })
        .collect();
    let mut doc = json!({
        "format": FORMAT,
        "variables": variables,
        "constraints": constraints,
        "metadata": Json::Object(inst.metadata.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
    });
    if let Some(o) = &inst.objective {
        doc["objective"] = objective_json(o, &name);
    }
    doc
}

/// Canonical text: sorted keys, one variable or constraint per line, so
/// equal instances give byte-equal output.
pub fn write_instance(inst: &Instance) -> String {
    write_canonical(&instance_to_json(inst))
}

// ---------------------------------------------------------------- reading

struct Reader {
    mode: Mode,
    extras: Vec<Extra>,
}

fn at<T>(path: &str, message: impl Into<String>) -> Result<T, DocError> {
    Err(DocError::At { path: path.to_string(), message: message.into() })
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn key(path: &str, k: &str) -> String {
    format!("{path}.{k}")
}

fn obj<'j>(v: &'j Json, path: &str) -> Result<&'j Map<String, Json>, DocError> {
    v.as_object().map_or_else(|| at(path, "expected an object"), Ok)
}

fn arr<'j>(v: &'j Json, path: &str) -> Result<&'j Vec<Json>, DocError> {
    v.as_array().map_or_else(|| at(path, "expected an array"), Ok)
}

fn int(v: &Json, path: &str) -> Result<Value, DocError> {
    match v.as_i64() {
        Some(x) if x != STAR => Ok(x),
        Some(_) => at(path, "integer out of range"),
        None => at(path, "expected an integer"),
    }
}

fn uint(v: &Json, path: &str) -> Result<usize, DocError> {
    v.as_u64().map_or_else(|| at(path, "expected a non-negative integer"), |x| Ok(x as usize))
}

fn boolean(v: &Json, path: &str) -> Result<bool, DocError> {
    v.as_bool().map_or_else(|| at(path, "expected a boolean"), Ok)
}

fn string<'j>(v: &'j Json, path: &str) -> Result<&'j str, DocError> {
    v.as_str().map_or_else(|| at(path, "expected a string"), Ok)
}

fn ints(v: &Json, path: &str) -> Result<Vec<Value>, DocError> {
    arr(v, path)?.iter().enumerate().map(|(i, x)| int(x, &idx(path, i))).collect()
}

fn domain(v: &Json, path: &str) -> Result<Domain, DocError> {
    let mut parts = Vec::new();
    for (i, x) in arr(v, path)?.iter().enumerate() {
        let p = idx(path, i);
        match x {
            Json::Array(pair) if pair.len() == 2 => {
                let (lo, hi) = (int(&pair[0], &idx(&p, 0))?, int(&pair[1], &idx(&p, 1))?);
                if lo > hi {
                    return at(&p, format!("empty range [{lo}, {hi}]"));
                }
                parts.push((lo, hi));
            }
            Json::Array(_) => return at(&p, "a range is a pair [lo, hi]"),
            _ => {
                let v = int(x, &p)?;
                parts.push((v, v));
            }
        }
    }
    Ok(Domain::from_intervals(parts))
}

fn direction(v: &Json, path: &str) -> Result<Direction, DocError> {
    match string(v, path)? {
        "increasing" => Ok(Direction::Increasing),
        "decreasing" => Ok(Direction::Decreasing),
        other => at(path, format!("unknown direction `{other}`")),
    }
}

type Resolve<'r> = &'r dyn Fn(&str) -> Option<VarId>;

fn same_len(path: &str, what: &str, got: usize, want: usize) -> Result<(), DocError> {
    if got == want {
        Ok(())
    } else {
        at(path, format!("length mismatch: {what} has {got} entries, scope has {want}"))
    }
}

impl Reader {
    fn allow(&mut self, m: &Map<String, Json>, allowed: &[&str], path: &str) -> Result<(), DocError> {
        for (k, v) in m {
            if allowed.contains(&k.as_str()) {
                continue;
            }
            match self.mode {
                Mode::Strict => return at(&key(path, k), "unknown field"),
                Mode::Lax => self.extras.push(Extra { parent: path.to_string(), key: k.clone(), value: v.clone() }),
            }
        }
        Ok(())
    }

    fn var(&self, v: &Json, path: &str, resolve: Resolve) -> Result<VarId, DocError> {
        let s = string(v, path)?;
        resolve(s).map_or_else(|| at(path, format!("unknown variable `{s}`")), Ok)
    }

    fn vars(&self, v: &Json, path: &str, resolve: Resolve) -> Result<Vec<VarId>, DocError> {
        arr(v, path)?.iter().enumerate().map(|(i, x)| self.var(x, &idx(path, i), resolve)).collect()
    }

    fn lists(&self, v: &Json, path: &str, resolve: Resolve) -> Result<Vec<Vec<VarId>>, DocError> {
        arr(v, path)?.iter().enumerate().map(|(i, x)| self.vars(x, &idx(path, i), resolve)).collect()
    }

    fn term(&self, v: &Json, path: &str, resolve: Resolve) -> Result<Term, DocError> {
        if v.is_string() {
            Ok(Term::Var(self.var(v, path, resolve)?))
        } else {
            Ok(Term::Val(int(v, path)?))
        }
    }

    fn condition(&mut self, v: &Json, path: &str, resolve: Resolve) -> Result<Condition, DocError> {
        let m = obj(v, path)?;
        let op = string(m.get("op").unwrap_or(&Json::Null), &key(path, "op"))?;
        match op {
            "in" | "notin" => {
                self.allow(m, &["op", "set"], path)?;
                let set = domain(m.get("set").unwrap_or(&Json::Null), &key(path, "set"))?;
                Ok(if op == "in" { Condition::In(set) } else { Condition::NotIn(set) })
            }
            _ => {
                self.allow(m, &["op", "rhs"], path)?;
                let cmp = CmpOp::from_name(op).map_or_else(|| at(&key(path, "op"), format!("unknown operator `{op}`")), Ok)?;
                Ok(Condition::Cmp(cmp, self.term(m.get("rhs").unwrap_or(&Json::Null), &key(path, "rhs"), resolve)?))
            }
        }
    }

    fn constraint(&mut self, v: &Json, path: &str, resolve: Resolve, extra: &[&str]) -> Result<Constraint, DocError> {
        let m = obj(v, path)?;
        let kind_path = key(path, "type");
        let tag = string(m.get("type").unwrap_or(&Json::Null), &kind_path)?;
        let kind = ConstraintKind::from_name(tag)
            .map_or_else(|| at(&kind_path, format!("unknown constraint type `{tag}`")), Ok)?;
        let fields: &[&str] = match kind {
            ConstraintKind::Intension => &["function"],
            ConstraintKind::Extension => &["scope", "tuples", "supports", "starred"],
            ConstraintKind::Regular => &["scope", "states", "start", "finals", "transitions"],
            ConstraintKind::Mdd => &["scope", "nodes", "root", "terminal", "transitions"],
            ConstraintKind::AllDifferent => &["scope", "except"],
            ConstraintKind::AllDifferentList => &["lists"],
            ConstraintKind::AllEqual | ConstraintKind::Circuit => &["scope"],
            ConstraintKind::Ordered => &["scope", "strict", "direction"],
            ConstraintKind::Lex => &["lists", "strict", "direction"],
            ConstraintKind::Precedence => &["scope", "values", "covered"],
            ConstraintKind::Sum => &["scope", "coeffs", "condition"],
            ConstraintKind::Count => &["scope", "values", "condition"],
            ConstraintKind::NValues | ConstraintKind::Maximum | ConstraintKind::Minimum => &["scope", "condition"],
            ConstraintKind::Cardinality => &["scope", "values", "occurs", "closed"],
            ConstraintKind::Element => &["list", "index", "value"],
            ConstraintKind::Channel => &["list", "other", "valueVar"],
            ConstraintKind::NoOverlap => &["origins", "lengths", "zeroIgnored"],
            ConstraintKind::Cumulative => &["origins", "lengths", "heights", "condition"],
            ConstraintKind::BinPacking => &["scope", "sizes", "condition", "loads"],
            ConstraintKind::Knapsack => &["scope", "weights", "profits", "limit", "condition"],
            ConstraintKind::Instantiation => &["scope", "values"],
            ConstraintKind::Slide => &["scope", "arity", "offset", "circular", "template"],
        };
        let mut allowed: Vec<&str> = vec!["type"];
        allowed.extend_from_slice(fields);
        allowed.extend_from_slice(extra);
        self.allow(m, &allowed, path)?;

        let null = Json::Null;
        let get = |k: &str| m.get(k).unwrap_or(&null);
        let p = |k: &str| key(path, k);
        let opt_bool = |k: &str| -> Result<bool, DocError> { m.get(k).map_or(Ok(false), |v| boolean(v, &key(path, k))) };

        Ok(match kind {
            ConstraintKind::Intension => {
                let text = string(get("function"), &p("function"))?;
                let e = parse_expr(text, resolve).or_else(|e| at(&p("function"), e.to_string()))?;
                Constraint::Intension(e)
            }
            ConstraintKind::Extension => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let starred = opt_bool("starred")?;
                let supports = m.get("supports").map_or(Ok(true), |v| boolean(v, &p("supports")))?;
                let mut tuples = Vec::new();
                for (i, row) in arr(get("tuples"), &p("tuples"))?.iter().enumerate() {
                    let rp = idx(&p("tuples"), i);
                    let row = arr(row, &rp)?;
                    same_len(&rp, "tuple", row.len(), scope.len())?;
                    let mut t = Vec::with_capacity(row.len());
                    for (j, x) in row.iter().enumerate() {
                        if x.as_str() == Some("*") {
                            if !starred {
                                return at(&idx(&rp, j), "wildcard `*` in a table that is not starred");
                            }
                            t.push(STAR);
                        } else {
                            t.push(int(x, &idx(&rp, j))?);
                        }
                    }
                    tuples.push(t);
                }
                Constraint::Extension { scope, tuples: Arc::new(tuples), supports, starred }
            }
            ConstraintKind::Regular => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let states: Vec<String> = arr(get("states"), &p("states"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| string(s, &idx(&p("states"), i)).map(str::to_string))
                    .collect::<Result<_, _>>()?;
                let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
                let state = |v: &Json, path: &str| -> Result<usize, DocError> {
                    let s = string(v, path)?;
                    index.get(s).copied().map_or_else(|| at(path, format!("undeclared state `{s}`")), Ok)
                };
                let start = state(get("start"), &p("start"))?;
                let finals = arr(get("finals"), &p("finals"))?
                    .iter()
                    .enumerate()
                    .map(|(i, f)| state(f, &idx(&p("finals"), i)))
                    .collect::<Result<_, _>>()?;
                let transitions = triples(get("transitions"), &p("transitions"), &state)?;
                let a = Automaton { states: states.clone(), start, finals, transitions };
                a.validate().or_else(|e| at(path, e))?;
                Constraint::Regular { scope, automaton: Arc::new(a) }
            }
            ConstraintKind::Mdd => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let nodes: Vec<String> = arr(get("nodes"), &p("nodes"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| string(s, &idx(&p("nodes"), i)).map(str::to_string))
                    .collect::<Result<_, _>>()?;
                let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
                let node = |v: &Json, path: &str| -> Result<usize, DocError> {
                    let s = string(v, path)?;
                    index.get(s).copied().map_or_else(|| at(path, format!("undeclared node `{s}`")), Ok)
                };
                let root = node(get("root"), &p("root"))?;
                let terminal = node(get("terminal"), &p("terminal"))?;
                let transitions = triples(get("transitions"), &p("transitions"), &node)?;
                let d = Mdd { nodes: nodes.clone(), root, terminal, transitions };
                d.layers(scope.len()).or_else(|e| at(path, e))?;
                Constraint::Mdd { scope, diagram: Arc::new(d) }
            }
            ConstraintKind::AllDifferent => Constraint::AllDifferent {
                scope: self.vars(get("scope"), &p("scope"), resolve)?,
                except: m.get("except").map(|v| int(v, &p("except"))).transpose()?,
            },
            ConstraintKind::AllDifferentList => {
                Constraint::AllDifferentList { lists: self.lists(get("lists"), &p("lists"), resolve)? }
            }
            ConstraintKind::AllEqual => Constraint::AllEqual { scope: self.vars(get("scope"), &p("scope"), resolve)? },
            ConstraintKind::Circuit => Constraint::Circuit { scope: self.vars(get("scope"), &p("scope"), resolve)? },
            ConstraintKind::Ordered => Constraint::Ordered {
                scope: self.vars(get("scope"), &p("scope"), resolve)?,
                strict: opt_bool("strict")?,
                direction: direction(get("direction"), &p("direction"))?,
            },
            ConstraintKind::Lex => Constraint::Lex {
                lists: self.lists(get("lists"), &p("lists"), resolve)?,
                strict: opt_bool("strict")?,
                direction: direction(get("direction"), &p("direction"))?,
            },
            ConstraintKind::Precedence => Constraint::Precedence {
                scope: self.vars(get("scope"), &p("scope"), resolve)?,
                values: ints(get("values"), &p("values"))?,
                covered: opt_bool("covered")?,
            },
            ConstraintKind::Sum => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let coeffs = ints(get("coeffs"), &p("coeffs"))?;
                same_len(&p("coeffs"), "coeffs", coeffs.len(), scope.len())?;
                let condition = self.condition(get("condition"), &p("condition"), resolve)?;
                Constraint::Sum { scope, coeffs, condition }
            }
            ConstraintKind::Count => Constraint::Count {
                scope: self.vars(get("scope"), &p("scope"), resolve)?,
                values: ints(get("values"), &p("values"))?,
                condition: self.condition(get("condition"), &p("condition"), resolve)?,
            },
            ConstraintKind::NValues | ConstraintKind::Maximum | ConstraintKind::Minimum => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let condition = self.condition(get("condition"), &p("condition"), resolve)?;
                match kind {
                    ConstraintKind::NValues => Constraint::NValues { scope, condition },
                    ConstraintKind::Maximum => Constraint::Maximum { scope, condition },
                    _ => Constraint::Minimum { scope, condition },
                }
            }
            ConstraintKind::Cardinality => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let values = ints(get("values"), &p("values"))?;
                let mut occurs = Vec::new();
                for (i, o) in arr(get("occurs"), &p("occurs"))?.iter().enumerate() {
                    let op = idx(&p("occurs"), i);
                    let pair = ints(o, &op)?;
                    if pair.len() != 2 {
                        return at(&op, "occurrence bounds are a pair [lo, hi]");
                    }
                    occurs.push((pair[0], pair[1]));
                }
                same_len(&p("occurs"), "occurs", occurs.len(), values.len())
                    .or_else(|_| at(&p("occurs"), "length mismatch: one occurrence range per value"))?;
                Constraint::Cardinality { scope, values, occurs, closed: opt_bool("closed")? }
            }
            ConstraintKind::Element => Constraint::Element {
                list: arr(get("list"), &p("list"))?
                    .iter()
                    .enumerate()
                    .map(|(i, t)| self.term(t, &idx(&p("list"), i), resolve))
                    .collect::<Result<_, _>>()?,
                index: self.var(get("index"), &p("index"), resolve)?,
                value: self.term(get("value"), &p("value"), resolve)?,
            },
            ConstraintKind::Channel => {
                let list = self.vars(get("list"), &p("list"), resolve)?;
                let target = match (m.get("other"), m.get("valueVar")) {
                    (None, None) => ChannelTarget::SelfInverse,
                    (Some(o), None) => ChannelTarget::List(self.vars(o, &p("other"), resolve)?),
                    (None, Some(v)) => ChannelTarget::Value(self.var(v, &p("valueVar"), resolve)?),
                    _ => return at(path, "`other` and `valueVar` are exclusive"),
                };
                Constraint::Channel { list, target }
            }
            ConstraintKind::NoOverlap => {
                let origins = self.lists(get("origins"), &p("origins"), resolve)?;
                let lp = p("lengths");
                let lengths: Vec<Vec<Value>> = arr(get("lengths"), &lp)?
                    .iter()
                    .enumerate()
                    .map(|(i, l)| ints(l, &idx(&lp, i)))
                    .collect::<Result<_, _>>()?;
                same_len(&lp, "lengths", lengths.len(), origins.len())?;
                Constraint::NoOverlap { origins, lengths, zero_ignored: opt_bool("zeroIgnored")? }
            }
            ConstraintKind::Cumulative => {
                let origins = self.vars(get("origins"), &p("origins"), resolve)?;
                let lengths = ints(get("lengths"), &p("lengths"))?;
                same_len(&p("lengths"), "lengths", lengths.len(), origins.len())?;
                let heights = ints(get("heights"), &p("heights"))?;
                same_len(&p("heights"), "heights", heights.len(), origins.len())?;
                let condition = self.condition(get("condition"), &p("condition"), resolve)?;
                Constraint::Cumulative { origins, lengths, heights, condition }
            }
            ConstraintKind::BinPacking => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let sizes = ints(get("sizes"), &p("sizes"))?;
                same_len(&p("sizes"), "sizes", sizes.len(), scope.len())?;
                let loads = match (m.get("condition"), m.get("loads")) {
                    (Some(c), None) => BinLoads::Condition(self.condition(c, &p("condition"), resolve)?),
                    (None, Some(l)) => BinLoads::Loads(self.vars(l, &p("loads"), resolve)?),
                    _ => return at(path, "exactly one of `condition` and `loads` is required"),
                };
                Constraint::BinPacking { scope, sizes, loads }
            }
            ConstraintKind::Knapsack => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let weights = ints(get("weights"), &p("weights"))?;
                same_len(&p("weights"), "weights", weights.len(), scope.len())?;
                let profits = ints(get("profits"), &p("profits"))?;
                same_len(&p("profits"), "profits", profits.len(), scope.len())?;
                Constraint::Knapsack {
                    scope,
                    weights,
                    profits,
                    limit: self.term(get("limit"), &p("limit"), resolve)?,
                    condition: self.condition(get("condition"), &p("condition"), resolve)?,
                }
            }
            ConstraintKind::Instantiation => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let values = ints(get("values"), &p("values"))?;
                same_len(&p("values"), "values", values.len(), scope.len())?;
                Constraint::Instantiation { scope, values }
            }
            ConstraintKind::Slide => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let arity = uint(get("arity"), &p("arity"))?;
                let placeholder = |s: &str| -> Option<VarId> {
                    let k: usize = s.strip_prefix('%')?.parse().ok()?;
                    (k < arity).then_some(VarId(k as u32))
                };
                let template = self.constraint(get("template"), &p("template"), &placeholder, &[])?;
                Constraint::Slide {
                    scope,
                    arity,
                    offset: uint(get("offset"), &p("offset"))?,
                    circular: opt_bool("circular")?,
                    template: Box::new(template),
                }
            }
        })
    }

    fn objective(&mut self, v: &Json, path: &str, resolve: Resolve) -> Result<Objective, DocError> {
        let m = obj(v, path)?;
        let null = Json::Null;
        let get = |k: &str| m.get(k).unwrap_or(&null);
        let p = |k: &str| key(path, k);
        let sense = match string(get("sense"), &p("sense"))? {
            "minimize" => Sense::Minimize,
            "maximize" => Sense::Maximize,
            other => return at(&p("sense"), format!("unknown sense `{other}`")),
        };
        let expr = |v: &Json, path: &str| -> Result<Expr, DocError> {
            parse_expr(string(v, path)?, resolve).or_else(|e| at(path, e.to_string()))
        };
        let exprs = |v: &Json, path: &str| -> Result<Vec<Expr>, DocError> {
            arr(v, path)?.iter().enumerate().map(|(i, e)| expr(e, &idx(path, i))).collect()
        };
        let kind = string(get("kind"), &p("kind"))?;
        let (fields, form): (&[&str], ObjectiveForm) = match kind {
            "var" => (&["var"], ObjectiveForm::Var(self.var(get("var"), &p("var"), resolve)?)),
            "sum" => {
                let scope = self.vars(get("scope"), &p("scope"), resolve)?;
                let coeffs = ints(get("coeffs"), &p("coeffs"))?;
                same_len(&p("coeffs"), "coeffs", coeffs.len(), scope.len())?;
                (&["scope", "coeffs"], ObjectiveForm::Sum { scope, coeffs })
            }
            "maximum" => (&["terms"], ObjectiveForm::Maximum(exprs(get("terms"), &p("terms"))?)),
            "minimum" => (&["terms"], ObjectiveForm::Minimum(exprs(get("terms"), &p("terms"))?)),
            "expr" => (&["function"], ObjectiveForm::Expr(expr(get("function"), &p("function"))?)),
            other => return at(&p("kind"), format!("unknown objective kind `{other}`")),
        };
        let mut allowed = vec!["sense", "kind"];
        allowed.extend_from_slice(fields);
        self.allow(m, &allowed, path)?;
        Ok(Objective { sense, form })
    }
}

fn triples(
    v: &Json,
    path: &str,
    state: &dyn Fn(&Json, &str) -> Result<usize, DocError>,
) -> Result<Vec<(usize, Value, usize)>, DocError> {
    let mut out = Vec::new();
    for (i, t) in arr(v, path)?.iter().enumerate() {
        let tp = idx(path, i);
        let t = arr(t, &tp)?;
        if t.len() != 3 {
            return at(&tp, "a transition is [from, value, to]");
        }
        out.push((state(&t[0], &idx(&tp, 0))?, int(&t[1], &idx(&tp, 1))?, state(&t[2], &idx(&tp, 2))?));
    }
    Ok(out)
}

fn model_error_path(e: &ModelError, inst: &Instance) -> (String, String) {
    let var_path = |name: &str| {
        inst.variables.iter().position(|v| v.name == name).map_or("$.variables".to_string(), |i| format!("$.variables[{i}]"))
    };
    match e {
        ModelError::EmptyDomain(n) | ModelError::DuplicateName(n) | ModelError::ReservedValue(n) => {
            (var_path(n), e.to_string())
        }
        ModelError::UnknownVariable { index, .. } | ModelError::Invalid { index, .. } => {
            (format!("$.constraints[{index}]"), e.to_string())
        }
        ModelError::Objective(_) => ("$.objective".into(), e.to_string()),
        ModelError::NonDenseIds { .. } => ("$.variables".into(), e.to_string()),
    }
}

/// Reads a document and validates the instance it describes.
pub fn parse_document(text: &str, mode: Mode) -> Result<InstanceDoc, DocError> {
    let doc: Json = serde_json::from_str(text)?;
    let root = obj(&doc, "$")?;
    let mut r = Reader { mode, extras: Vec::new() };
    r.allow(root, &["format", "variables", "constraints", "objective", "metadata"], "$")?;
    match root.get("format").map(|f| string(f, "$.format")).transpose()? {
        Some(FORMAT) => {}
        Some(other) => return at("$.format", format!("unsupported format `{other}`, expected `{FORMAT}`")),
        None => return at("$.format", "missing format tag"),
    }
    let null = Json::Null;
    let mut variables = Vec::new();
    for (i, v) in arr(root.get("variables").unwrap_or(&null), "$.variables")?.iter().enumerate() {
        let p = idx("$.variables", i);
        let m = obj(v, &p)?;
        r.allow(m, &["name", "domain"], &p)?;
        let name = string(m.get("name").unwrap_or(&null), &key(&p, "name"))?;
        if !valid_name(name) {
            return at(&key(&p, "name"), format!("`{name}` is not a usable variable name"));
        }
        let dom = domain(m.get("domain").unwrap_or(&null), &key(&p, "domain"))?;
        if dom.is_empty() {
            return at(&key(&p, "domain"), "empty domain");
        }
        variables.push(Variable { id: VarId(i as u32), name: name.to_string(), domain: dom });
    }
    let mut names: HashMap<String, VarId> = HashMap::new();
    for v in &variables {
        if names.insert(v.name.clone(), v.id).is_some() {
            return at(&format!("$.variables[{}].name", v.id.0), format!("duplicate variable name `{}`", v.name));
        }
    }
    let resolve = |s: &str| names.get(s).copied();
    let mut constraints = Vec::new();
    for (i, c) in arr(root.get("constraints").unwrap_or(&null), "$.constraints")?.iter().enumerate() {
        let p = idx("$.constraints", i);
        let constraint = r.constraint(c, &p, &resolve, &["group", "tags"])?;
        let m = obj(c, &p)?;
        let group = m.get("group").map(|g| string(g, &key(&p, "group")).map(str::to_string)).transpose()?;
        let tags = match m.get("tags") {
            None => Vec::new(),
            Some(t) => arr(t, &key(&p, "tags"))?
                .iter()
                .enumerate()
                .map(|(j, s)| string(s, &idx(&key(&p, "tags"), j)).map(str::to_string))
                .collect::<Result<_, _>>()?,
        };
        constraints.push(Posted { constraint, group, tags });
    }
    let objective = root.get("objective").map(|o| r.objective(o, "$.objective", &resolve)).transpose()?;
    let metadata: BTreeMap<String, Json> = match root.get("metadata") {
        None => BTreeMap::new(),
        Some(m) => obj(m, "$.metadata")?.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
    };
    let instance = Instance { variables, constraints, objective, metadata };
    if let Err(e) = instance.validate() {
        let (path, message) = model_error_path(&e, &instance);
        return at(&path, message);
    }
    Ok(InstanceDoc { instance, extras: r.extras })
}

/// Strict read.
pub fn parse_instance(text: &str) -> Result<Instance, DocError> {
    parse_document(text, Mode::Strict).map(|d| d.instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use xcore::InstanceBuilder;

    fn small() -> Instance {
        let mut b = InstanceBuilder::new();
        let x = b.array("x", 3, |_| Domain::from_values([1, 2, 5, 6, 7]));
        b.group("sum", &["redundant-constraints"]);
        b.post(Constraint::Sum { scope: x.clone(), coeffs: vec![1, 2, -1], condition: Condition::In(Domain::range(0, 9)) });
        b.group("table", &[]);
        b.post(Constraint::Extension {
            scope: x[..2].to_vec(),
            tuples: Arc::new(vec![vec![1, STAR], vec![5, 6]]),
            supports: false,
            starred: true,
        });
        b.post(Constraint::Slide {
            scope: x.clone(),
            arity: 2,
            offset: 1,
            circular: true,
            template: Box::new(Constraint::Intension(Expr::ne(Expr::Var(VarId(0)), Expr::Var(VarId(1))))),
        });
        b.objective(Sense::Maximize, ObjectiveForm::Maximum(x.iter().map(|&v| Expr::Var(v)).collect()));
        b.meta("note", json!({"b": 1, "a": [2, 3]}));
        b.build().unwrap()
    }

    #[test]
    fn round_trip() {
        let inst = small();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write_instance(&back), text);
        assert!(text.contains(r#"[1,"*"]"#));
        assert!(text.contains(r#""template":{"function":"ne(%0,%1)","type":"intension"}"#));
    }

    #[test]
    fn strict_and_lax() {
        let text = write_instance(&small()).replacen(r#""coeffs""#, r#""colour":"red","coeffs""#, 1);
        let err = parse_instance(&text).unwrap_err();
        assert_eq!(err.path(), Some("$.constraints[0].colour"));
        let doc = parse_document(&text, Mode::Lax).unwrap();
        assert_eq!(doc.extras.len(), 1);
        assert_eq!(doc.extras[0].path(), "$.constraints[0].colour");
        assert_eq!(doc.instance, small());
        let again = doc.to_text();
        assert!(again.contains(r#""colour":"red""#));
        assert_eq!(parse_document(&again, Mode::Lax).unwrap(), doc);
    }

    #[test]
    fn errors_name_their_path() {
        let text = write_instance(&small());
        let bad = text.replacen(r#""coeffs":[1,2,-1]"#, r#""coeffs":[1,2]"#, 1);
        let e = parse_instance(&bad).unwrap_err();
        assert_eq!(e.path(), Some("$.constraints[0].coeffs"));
        assert!(e.to_string().contains("length mismatch"));

        let bad = text.replacen(r#""starred":true"#, r#""starred":false"#, 1);
        assert_eq!(parse_instance(&bad).unwrap_err().path(), Some("$.constraints[1].tuples[0][1]"));

        let bad = text.replacen(r#""type":"sum""#, r#""type":"summ""#, 1);
        assert_eq!(parse_instance(&bad).unwrap_err().path(), Some("$.constraints[0].type"));

        let bad = text.replacen(r#""domain":[[1,2],[5,7]]"#, r#""domain":[]"#, 1);
        assert_eq!(parse_instance(&bad).unwrap_err().path(), Some("$.variables[0].domain"));

        assert!(matches!(parse_instance("{\"format\": "), Err(DocError::Syntax { .. })));
        let bad = text.replacen(FORMAT, "xcore-json/9", 1);
        assert_eq!(parse_instance(&bad).unwrap_err().path(), Some("$.format"));
    }
}
