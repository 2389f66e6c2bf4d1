//! Expression trees for intension constraints and objectives.
//!
//! Booleans are the integers 0 and 1 everywhere, so comparisons can be summed
//! and 0/1 variables can appear under logical connectives.

use std::fmt;

use crate::domain::{Domain, Value, VarId};
use crate::error::EvalError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Abs,
    Not,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Sub,
    /// Floor division.
    Div,
    /// Remainder of floor division; takes the sign of the divisor.
    Mod,
    /// `|a - b|`
    Dist,
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
    Iff,
    Imp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum NaryOp {
    Add,
    Mul,
    Min,
    Max,
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Value),
    Var(VarId),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Nary(NaryOp, Vec<Expr>),
    /// `ift(cond, then, else)`
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    /// Membership in a constant set.
    In(Box<Expr>, Vec<Value>),
}

/// Static type of an expression position.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Int,
    Bool,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Abs => "abs",
            UnaryOp::Not => "not",
        }
    }
}

impl BinaryOp {
    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Sub => "sub",
            BinaryOp::Div => "div",
            BinaryOp::Mod => "mod",
            BinaryOp::Dist => "dist",
            BinaryOp::Lt => "lt",
            BinaryOp::Le => "le",
            BinaryOp::Eq => "eq",
            BinaryOp::Ne => "ne",
            BinaryOp::Ge => "ge",
            BinaryOp::Gt => "gt",
            BinaryOp::Iff => "iff",
            BinaryOp::Imp => "imp",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Ge | BinaryOp::Gt
        )
    }
}

impl NaryOp {
    pub fn name(self) -> &'static str {
        match self {
            NaryOp::Add => "add",
            NaryOp::Mul => "mul",
            NaryOp::Min => "min",
            NaryOp::Max => "max",
            NaryOp::And => "and",
            NaryOp::Or => "or",
        }
    }
}

/// Floor division, `None` on a zero divisor or overflow.
pub fn floor_div(a: Value, b: Value) -> Option<Value> {
    if b == 0 || (a == Value::MIN && b == -1) {
        return None;
    }
    Some(num_integer::Integer::div_floor(&a, &b))
}

/// Floor modulo (result has the sign of `b`), `None` on a zero divisor.
pub fn floor_mod(a: Value, b: Value) -> Option<Value> {
    if b == 0 {
        return None;
    }
    if b == -1 {
        return Some(0);
    }
    Some(num_integer::Integer::mod_floor(&a, &b))
}

impl Expr {
    pub fn var(v: VarId) -> Expr {
        Expr::Var(v)
    }

    pub fn cst(v: Value) -> Expr {
        Expr::Const(v)
    }

    pub fn unary(op: UnaryOp, a: Expr) -> Expr {
        Expr::Unary(op, Box::new(a))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn nary(op: NaryOp, args: Vec<Expr>) -> Expr {
        Expr::Nary(op, args)
    }

    pub fn add(args: Vec<Expr>) -> Expr {
        Expr::Nary(NaryOp::Add, args)
    }

    pub fn and(args: Vec<Expr>) -> Expr {
        Expr::Nary(NaryOp::And, args)
    }

    pub fn or(args: Vec<Expr>) -> Expr {
        Expr::Nary(NaryOp::Or, args)
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Eq, a, b)
    }

    pub fn ne(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Ne, a, b)
    }

    pub fn lt(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Lt, a, b)
    }

    pub fn le(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Le, a, b)
    }

    pub fn ge(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Ge, a, b)
    }

    pub fn gt(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Gt, a, b)
    }

    pub fn imp(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Imp, a, b)
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::Sub, a, b)
    }

    pub fn ift(c: Expr, a: Expr, b: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(a), Box::new(b))
    }

    /// Evaluates under a value lookup. Booleans come back as 0/1.
    ///
    /// `and`, `or`, `imp` and `if` evaluate left to right and stop early, so a
    /// guarded operand is never evaluated when the guard decides the result.
    pub fn eval_with<F: Fn(VarId) -> Value + Copy>(&self, value: F) -> Result<Value, EvalError> {
        let b = |x: bool| x as Value;
        let overflow = || EvalError::Overflow { expr: self.to_string() };
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => value(*v),
            Expr::Unary(op, a) => {
                let a = a.eval_with(value)?;
                match op {
                    UnaryOp::Neg => a.checked_neg().ok_or_else(overflow)?,
                    UnaryOp::Abs => a.checked_abs().ok_or_else(overflow)?,
                    UnaryOp::Not => b(a == 0),
                }
            }
            Expr::Binary(op, l, r) => {
                let x = l.eval_with(value)?;
                match op {
                    BinaryOp::Imp => b(x == 0 || r.eval_with(value)? != 0),
                    _ => {
                        let y = r.eval_with(value)?;
                        match op {
                            BinaryOp::Sub => x.checked_sub(y).ok_or_else(overflow)?,
                            BinaryOp::Div => floor_div(x, y).ok_or_else(|| self.div_error(y))?,
                            BinaryOp::Mod => floor_mod(x, y).ok_or_else(|| self.div_error(y))?,
                            BinaryOp::Dist => x.checked_sub(y).and_then(|d| d.checked_abs()).ok_or_else(overflow)?,
                            BinaryOp::Lt => b(x < y),
                            BinaryOp::Le => b(x <= y),
                            BinaryOp::Eq => b(x == y),
                            BinaryOp::Ne => b(x != y),
                            BinaryOp::Ge => b(x >= y),
                            BinaryOp::Gt => b(x > y),
                            BinaryOp::Iff => b((x != 0) == (y != 0)),
                            BinaryOp::Imp => unreachable!(),
                        }
                    }
                }
            }
            Expr::Nary(NaryOp::And, args) => {
                for a in args {
                    if a.eval_with(value)? == 0 {
                        return Ok(0);
                    }
                }
                1
            }
            Expr::Nary(NaryOp::Or, args) => {
                for a in args {
                    if a.eval_with(value)? != 0 {
                        return Ok(1);
                    }
                }
                0
            }
            Expr::Nary(op, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(a.eval_with(value)?);
                }
                match op {
                    NaryOp::Add => vals
                        .iter()
                        .try_fold(0 as Value, |acc, &v| acc.checked_add(v))
                        .ok_or_else(overflow)?,
                    NaryOp::Mul => vals
                        .iter()
                        .try_fold(1 as Value, |acc, &v| acc.checked_mul(v))
                        .ok_or_else(overflow)?,
                    NaryOp::Min | NaryOp::Max => {
                        let it = vals.iter().copied();
                        let r = if *op == NaryOp::Min { it.min() } else { it.max() };
                        r.ok_or_else(|| EvalError::EmptyOperands { expr: self.to_string() })?
                    }
                    NaryOp::And | NaryOp::Or => unreachable!(),
                }
            }
            Expr::If(c, t, e) => {
                if c.eval_with(value)? != 0 {
                    t.eval_with(value)?
                } else {
                    e.eval_with(value)?
                }
            }
            Expr::In(a, set) => b(set.contains(&a.eval_with(value)?)),
        })
    }

    fn div_error(&self, divisor: Value) -> EvalError {
        debug_assert!(divisor == 0 || divisor == -1);
        if divisor == 0 {
            EvalError::DivisionByZero { expr: self.to_string() }
        } else {
            EvalError::Overflow { expr: self.to_string() }
        }
    }

    /// Evaluates against a dense value slice indexed by variable id.
    pub fn eval(&self, values: &[Value]) -> Result<Value, EvalError> {
        self.eval_with(|v| values[v.index()])
    }

    /// Distinct variables in first-occurrence order.
    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        let mut seen = std::collections::HashSet::new();
        out.retain(|v| seen.insert(*v));
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => out.push(*v),
            Expr::Unary(_, a) => a.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Nary(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Expr::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::In(a, _) => a.collect_vars(out),
        }
    }

    /// Rewrites every variable reference.
    pub fn map_vars(&self, f: &dyn Fn(VarId) -> VarId) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(v) => Expr::Var(f(*v)),
            Expr::Unary(op, a) => Expr::unary(*op, a.map_vars(f)),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.map_vars(f), b.map_vars(f)),
            Expr::Nary(op, args) => Expr::Nary(*op, args.iter().map(|a| a.map_vars(f)).collect()),
            Expr::If(c, a, b) => Expr::ift(c.map_vars(f), a.map_vars(f), b.map_vars(f)),
            Expr::In(a, s) => Expr::In(Box::new(a.map_vars(f)), s.clone()),
        }
    }

    /// Natural result type of the root operator.
    pub fn result_type(&self) -> Type {
        match self {
            Expr::Const(_) | Expr::Var(_) => Type::Int,
            Expr::Unary(UnaryOp::Not, _) => Type::Bool,
            Expr::Unary(_, _) => Type::Int,
            Expr::Binary(op, _, _) => match op {
                BinaryOp::Sub | BinaryOp::Div | BinaryOp::Mod | BinaryOp::Dist => Type::Int,
                _ => Type::Bool,
            },
            Expr::Nary(NaryOp::And | NaryOp::Or, _) => Type::Bool,
            Expr::Nary(_, _) => Type::Int,
            Expr::If(_, a, b) => {
                if a.result_type() == Type::Bool && b.result_type() == Type::Bool {
                    Type::Bool
                } else {
                    Type::Int
                }
            }
            Expr::In(_, _) => Type::Bool,
        }
    }

    /// Checks that every boolean position holds a boolean-valued expression.
    ///
    /// Integer expressions are accepted where a boolean is expected when they
    /// can only take the values 0 and 1 (0/1 variables and the constants 0, 1).
    pub fn type_check(&self, domain_of: &dyn Fn(VarId) -> Option<Domain>) -> Result<(), String> {
        let is_bool = |e: &Expr| -> bool {
            match e {
                Expr::Const(c) => *c == 0 || *c == 1,
                Expr::Var(v) => domain_of(*v)
                    .map(|d| d.min().is_some_and(|m| m >= 0) && d.max().is_some_and(|m| m <= 1))
                    .unwrap_or(false),
                other => other.result_type() == Type::Bool,
            }
        };
        let need_bool = |e: &Expr, ctx: &str| -> Result<(), String> {
            if is_bool(e) {
                Ok(())
            } else {
                Err(format!("operand `{e}` of {ctx} is not boolean"))
            }
        };
        match self {
            Expr::Const(_) => Ok(()),
            Expr::Var(v) => {
                if domain_of(*v).is_none() {
                    Err(format!("unknown variable {v}"))
                } else {
                    Ok(())
                }
            }
            Expr::Unary(op, a) => {
                if *op == UnaryOp::Not {
                    need_bool(a, "not")?;
                }
                a.type_check(domain_of)
            }
            Expr::Binary(op, a, b) => {
                if matches!(op, BinaryOp::Iff | BinaryOp::Imp) {
                    need_bool(a, op.name())?;
                    need_bool(b, op.name())?;
                }
                a.type_check(domain_of)?;
                b.type_check(domain_of)
            }
            Expr::Nary(op, args) => {
                if matches!(op, NaryOp::Min | NaryOp::Max) && args.is_empty() {
                    return Err(format!("{} needs at least one operand", op.name()));
                }
                for a in args {
                    if matches!(op, NaryOp::And | NaryOp::Or) {
                        need_bool(a, op.name())?;
                    }
                    a.type_check(domain_of)?;
                }
                Ok(())
            }
            Expr::If(c, a, b) => {
                need_bool(c, "ift")?;
                c.type_check(domain_of)?;
                a.type_check(domain_of)?;
                b.type_check(domain_of)
            }
            Expr::In(a, _) => a.type_check(domain_of),
        }
    }

    pub fn is_boolean(&self, domain_of: &dyn Fn(VarId) -> Option<Domain>) -> bool {
        match self {
            Expr::Const(c) => *c == 0 || *c == 1,
            Expr::Var(v) => domain_of(*v).is_some_and(|d| d.min() >= Some(0) && d.max() <= Some(1)),
            other => other.result_type() == Type::Bool,
        }
    }

    /// Functional notation with a custom rendering of variables.
    pub fn write_functional(
        &self,
        out: &mut dyn fmt::Write,
        name: &dyn Fn(VarId) -> String,
    ) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(out, "{c}"),
            Expr::Var(v) => write!(out, "{}", name(*v)),
            Expr::Unary(op, a) => {
                write!(out, "{}(", op.name())?;
                a.write_functional(out, name)?;
                write!(out, ")")
            }
            Expr::Binary(op, a, b) => {
                write!(out, "{}(", op.name())?;
                a.write_functional(out, name)?;
                write!(out, ",")?;
                b.write_functional(out, name)?;
                write!(out, ")")
            }
            Expr::Nary(op, args) => {
                write!(out, "{}(", op.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(out, ",")?;
                    }
                    a.write_functional(out, name)?;
                }
                write!(out, ")")
            }
            Expr::If(c, a, b) => {
                write!(out, "if(")?;
                c.write_functional(out, name)?;
                write!(out, ",")?;
                a.write_functional(out, name)?;
                write!(out, ",")?;
                b.write_functional(out, name)?;
                write!(out, ")")
            }
            Expr::In(a, set) => {
                write!(out, "in(")?;
                a.write_functional(out, name)?;
                write!(out, ",set(")?;
                for (k, v) in set.iter().enumerate() {
                    if k > 0 {
                        write!(out, ",")?;
                    }
                    write!(out, "{v}")?;
                }
                write!(out, "))")
            }
        }
    }

    pub fn to_functional(&self, name: &dyn Fn(VarId) -> String) -> String {
        let mut s = String::new();
        self.write_functional(&mut s, name).expect("writing to a String cannot fail");
        s
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_functional(f, &|v| v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: Value) -> Expr {
        Expr::Const(v)
    }

    #[test]
    fn examples() {
        let e = Expr::ift(Expr::lt(c(1), c(2)), c(10), c(20));
        assert_eq!(e.eval(&[]).unwrap(), 10);
        assert_eq!(Expr::binary(BinaryOp::Dist, c(3), c(7)).eval(&[]).unwrap(), 4);
        assert_eq!(Expr::binary(BinaryOp::Div, c(13), c(8)).eval(&[]).unwrap(), 1);
    }

    #[test]
    fn floor_semantics_at_negatives() {
        let div = |a, b| Expr::binary(BinaryOp::Div, c(a), c(b)).eval(&[]).unwrap();
        let md = |a, b| Expr::binary(BinaryOp::Mod, c(a), c(b)).eval(&[]).unwrap();
        assert_eq!(div(-7, 2), -4);
        assert_eq!(div(7, -2), -4);
        assert_eq!(div(-7, -2), 3);
        assert_eq!(md(-7, 2), 1);
        assert_eq!(md(7, -2), -1);
        assert_eq!(md(-7, -2), -1);
        for a in -9..=9 {
            for b in [-4, -3, -1, 1, 2, 5] {
                assert_eq!(div(a, b) * b + md(a, b), a);
            }
        }
    }

    #[test]
    fn division_by_zero_names_subexpression() {
        let inner = Expr::binary(BinaryOp::Mod, Expr::var(VarId(0)), c(0));
        let e = Expr::add(vec![c(1), inner]);
        match e.eval(&[5]) {
            Err(EvalError::DivisionByZero { expr }) => assert_eq!(expr, "mod(%0,0)"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn logic_and_membership() {
        let x = Expr::var(VarId(0));
        let y = Expr::var(VarId(1));
        let e = Expr::and(vec![
            Expr::In(Box::new(x.clone()), vec![1, 3]),
            Expr::imp(Expr::gt(x.clone(), c(2)), Expr::eq(y.clone(), c(0))),
        ]);
        assert_eq!(e.eval(&[1, 9]).unwrap(), 1);
        assert_eq!(e.eval(&[3, 9]).unwrap(), 0);
        assert_eq!(e.eval(&[3, 0]).unwrap(), 1);
        assert_eq!(e.eval(&[2, 0]).unwrap(), 0);
        assert_eq!(e.vars(), vec![VarId(0), VarId(1)]);
    }

    #[test]
    fn type_check_rejects_integer_under_logic() {
        let dom = |v: VarId| Some(if v.0 == 0 { Domain::range(0, 1) } else { Domain::range(0, 5) });
        let ok = Expr::and(vec![Expr::var(VarId(0)), Expr::lt(Expr::var(VarId(1)), c(3))]);
        assert!(ok.type_check(&dom).is_ok());
        let bad = Expr::or(vec![Expr::var(VarId(1)), c(1)]);
        assert!(bad.type_check(&dom).is_err());
    }
}
