//! Reader for the functional expression syntax, e.g. `eq(add(x[0],x[1]),3)`.

use xcore::{BinaryOp, Expr, NaryOp, UnaryOp, Value, VarId};

/// Byte offset plus message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

fn is_delim(c: char) -> bool {
    matches!(c, '(' | ')' | ',') || c.is_whitespace()
}

/// Characters that cannot appear in a variable name used inside expressions.
pub fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(is_delim) && name.parse::<Value>().is_err()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<VarId>,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.err(format!("expected `{c}`, found `{d}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn atom(&mut self) -> Result<&str, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..].find(is_delim).unwrap_or(self.src.len() - start);
        if len == 0 {
            return self.err("expected a name or a number");
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn args(&mut self) -> Result<Vec<Expr>, ExprError> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.peek() == Some(')') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.err("expected `,` or `)`"),
            }
        }
    }

    fn int(&mut self) -> Result<Value, ExprError> {
        let at = self.pos;
        let a = self.atom()?;
        a.parse().map_err(|_| ExprError { offset: at, message: format!("`{a}` is not an integer") })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let a = self.atom()?.to_string();
        if self.peek() != Some('(') {
            if let Ok(v) = a.parse::<Value>() {
                return Ok(Expr::Const(v));
            }
            return match (self.resolve)(&a) {
                Some(v) => Ok(Expr::Var(v)),
                None => Err(ExprError { offset: start, message: format!("unknown variable `{a}`") }),
            };
        }
        if a == "in" {
            self.expect('(')?;
            let x = self.expr()?;
            self.expect(',')?;
            let kw = self.atom()?;
            if kw != "set" {
                return self.err("expected `set(...)`");
            }
            self.expect('(')?;
            let mut set = Vec::new();
            if self.peek() != Some(')') {
                loop {
                    set.push(self.int()?);
                    if self.peek() == Some(',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(')')?;
            self.expect(')')?;
            return Ok(Expr::In(Box::new(x), set));
        }
        let args = self.args()?;
        let check = |n: usize| -> Result<(), ExprError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(ExprError { offset: start, message: format!("`{a}` takes {n} arguments, got {}", args.len()) })
            }
        };
        let unary = [UnaryOp::Neg, UnaryOp::Abs, UnaryOp::Not];
        let binary = [
            BinaryOp::Sub,
            BinaryOp::Div,
            BinaryOp::Mod,
            BinaryOp::Dist,
            BinaryOp::Lt,
            BinaryOp::Le,
            BinaryOp::Eq,
            BinaryOp::Ne,
            BinaryOp::Ge,
            BinaryOp::Gt,
            BinaryOp::Iff,
            BinaryOp::Imp,
        ];
        let nary = [NaryOp::Add, NaryOp::Mul, NaryOp::Min, NaryOp::Max, NaryOp::And, NaryOp::Or];
        let mut it = args.clone().into_iter();
        if let Some(op) = unary.into_iter().find(|o| o.name() == a) {
            check(1)?;
            return Ok(Expr::unary(op, it.next().unwrap()));
        }
        if let Some(op) = binary.into_iter().find(|o| o.name() == a) {
            check(2)?;
            return Ok(Expr::binary(op, it.next().unwrap(), it.next().unwrap()));
        }
        if let Some(op) = nary.into_iter().find(|o| o.name() == a) {
            return Ok(Expr::nary(op, args));
        }
        if a == "if" {
            check(3)?;
            let (c, t, e) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            return Ok(Expr::ift(c, t, e));
        }
        Err(ExprError { offset: start, message: format!("unknown operator `{a}`") })
    }
}

/// Parses one expression; `resolve` maps variable names to ids.
pub fn parse_expr(src: &str, resolve: &dyn Fn(&str) -> Option<VarId>) -> Result<Expr, ExprError> {
    let mut p = Parser { src, pos: 0, resolve };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &str) -> Option<VarId> {
        s.strip_prefix('v').and_then(|k| k.parse().ok()).map(VarId)
    }

    #[test]
    fn reads_what_is_written() {
        let e = Expr::and(vec![
            Expr::In(Box::new(Expr::Var(VarId(0))), vec![-1, 3]),
            Expr::imp(Expr::gt(Expr::Var(VarId(1)), Expr::Const(-2)), Expr::ift(Expr::Const(1), Expr::Var(VarId(2)), Expr::Const(0))),
            Expr::unary(UnaryOp::Abs, Expr::binary(BinaryOp::Mod, Expr::Var(VarId(0)), Expr::Const(3))),
            Expr::add(vec![]),
        ]);
        let text = e.to_functional(&|v| format!("v{}", v.0));
        assert_eq!(parse_expr(&text, &names).unwrap(), e);
        assert_eq!(parse_expr(" eq( v0 , 3 ) ", &names).unwrap(), Expr::eq(Expr::Var(VarId(0)), Expr::Const(3)));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_expr("eq(v0,w)", &names).unwrap_err();
        assert_eq!(e.offset, 6);
        assert!(e.message.contains("unknown variable"));
        assert!(parse_expr("eq(v0)", &names).unwrap_err().message.contains("takes 2"));
        assert!(parse_expr("frob(v0)", &names).unwrap_err().message.contains("unknown operator"));
        assert!(parse_expr("eq(v0,1) x", &names).is_err());
        assert!(parse_expr("eq(v0,1", &names).is_err());
    }

    #[test]
    fn name_rules() {
        assert!(valid_name("x[0][1]"));
        assert!(valid_name("next_a[3]"));
        assert!(!valid_name("a b"));
        assert!(!valid_name("f(x)"));
        assert!(!valid_name("-3"));
        assert!(!valid_name(""));
    }
}
