//! A small arithmetic expression language for nonlinearities and
//! lower-bound functions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?                  // right-associative
//! atom   := number | variable | func '(' expr (',' expr)? ')' | '(' expr ')'
//! ```
//!
//! so `^` binds tighter than unary minus (`-2^2 = -4`) and is
//! right-associative (`2^3^2 = 512`). Variables are `t`, `x`, `y`, `u`,
//! `v`, `r1`, `r2`; unary functions are `sin`, `cos`, `exp`, `ln`,
//! `sqrt`, `abs`; `min` and `max` take two arguments. Identifiers are
//! case-sensitive. Numbers use standard float syntax including `1.5e-3`.
//!
//! Evaluation is pure: variables are bound through an [`EvalEnv`], and a
//! variable missing from the environment is an evaluation-time error (so
//! an interval nonlinearity written with `x` instead of `t` parses fine
//! but fails when evaluated on an interval grid).

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Variables recognized by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// Spatial variable of interval problems.
    T,
    /// First spatial coordinate of disk problems.
    X,
    /// Second spatial coordinate of disk problems.
    Y,
    /// First solution component.
    U,
    /// Second solution component.
    V,
    /// Prescribed norm of the first component.
    R1,
    /// Prescribed norm of the second component.
    R2,
}

impl Var {
    pub fn name(&self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X => "x",
            Var::Y => "y",
            Var::U => "u",
            Var::V => "v",
            Var::R1 => "r1",
            Var::R2 => "r2",
        }
    }

    fn from_name(s: &str) -> Option<Var> {
        Some(match s {
            "t" => Var::T,
            "x" => Var::X,
            "y" => Var::Y,
            "u" => Var::U,
            "v" => Var::V,
            "r1" => Var::R1,
            "r2" => Var::R2,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(&self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func1 {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func1 {
    fn name(&self) -> &'static str {
        match self {
            Func1::Sin => "sin",
            Func1::Cos => "cos",
            Func1::Exp => "exp",
            Func1::Ln => "ln",
            Func1::Sqrt => "sqrt",
            Func1::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func2 {
    Min,
    Max,
}

impl Func2 {
    fn name(&self) -> &'static str {
        match self {
            Func2::Min => "min",
            Func2::Max => "max",
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call1(Func1, Box<Expr>),
    Call2(Func2, Box<Expr>, Box<Expr>),
}

/// Variable bindings for evaluation. Unset fields are unbound.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalEnv {
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub u: Option<f64>,
    pub v: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
}

impl EvalEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_xy(mut self, x: f64, y: f64) -> Self {
        self.x = Some(x);
        self.y = Some(y);
        self
    }

    pub fn with_uv(mut self, u: f64, v: f64) -> Self {
        self.u = Some(u);
        self.v = Some(v);
        self
    }

    pub fn with_radii(mut self, r1: f64, r2: f64) -> Self {
        self.r1 = Some(r1);
        self.r2 = Some(r2);
        self
    }

    fn get(&self, var: Var) -> Result<f64> {
        match var {
            Var::T => self.t,
            Var::X => self.x,
            Var::Y => self.y,
            Var::U => self.u,
            Var::V => self.v,
            Var::R1 => self.r1,
            Var::R2 => self.r2,
        }
        .ok_or(Error::UnboundVariable { name: var.name() })
    }
}

impl Expr {
    /// Parse an expression from text.
    pub fn parse(src: &str) -> Result<Expr> {
        if src.trim().is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                msg: "empty expression".into(),
            });
        }
        let tokens = lex(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.expr()?;
        match parser.peek() {
            None => Ok(expr),
            Some(tok) => Err(Error::Syntax {
                pos: tok.pos,
                msg: format!("unexpected {}", tok.kind.describe()),
            }),
        }
    }

    /// Evaluate with the given bindings.
    ///
    /// Division by zero, `ln` of a nonpositive value, `sqrt` of a negative
    /// value, a fractional power of a negative base and overflow to
    /// infinity are all reported as errors naming the offending
    /// subexpression.
    pub fn eval(&self, env: &EvalEnv) -> Result<f64> {
        let v = match self {
            Expr::Num(c) => *c,
            Expr::Var(var) => env.get(*var)?,
            Expr::Neg(inner) => -inner.eval(env)?,
            Expr::Bin(op, lhs, rhs) => {
                let a = lhs.eval(env)?;
                let b = rhs.eval(env)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::EvalDomain {
                                what: "division by zero".into(),
                                expr: self.to_string(),
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        // small integral exponents go through repeated
                        // multiplication, the semantics a hand-coded x^2
                        // compiles to; powf otherwise
                        let p = if b.fract() == 0.0 && b.abs() <= 512.0 {
                            a.powi(b as i32)
                        } else {
                            a.powf(b)
                        };
                        if p.is_nan() && !a.is_nan() && !b.is_nan() {
                            return Err(Error::EvalDomain {
                                what: format!("non-real power {a}^{b}"),
                                expr: self.to_string(),
                            });
                        }
                        p
                    }
                }
            }
            Expr::Call1(f, arg) => {
                let a = arg.eval(env)?;
                match f {
                    Func1::Sin => a.sin(),
                    Func1::Cos => a.cos(),
                    Func1::Exp => a.exp(),
                    Func1::Ln => {
                        if a <= 0.0 {
                            return Err(Error::EvalDomain {
                                what: format!("ln of nonpositive value {a}"),
                                expr: self.to_string(),
                            });
                        }
                        a.ln()
                    }
                    Func1::Sqrt => {
                        if a < 0.0 {
                            return Err(Error::EvalDomain {
                                what: format!("sqrt of negative value {a}"),
                                expr: self.to_string(),
                            });
                        }
                        a.sqrt()
                    }
                    Func1::Abs => a.abs(),
                }
            }
            Expr::Call2(f, lhs, rhs) => {
                let a = lhs.eval(env)?;
                let b = rhs.eval(env)?;
                match f {
                    Func2::Min => a.min(b),
                    Func2::Max => a.max(b),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                expr: self.to_string(),
            })
        }
    }

    /// The set of variables appearing in the tree.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars = Vec::new();
        self.collect_vars(&mut vars);
        vars
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Expr::Neg(e) => e.collect_vars(out),
            Expr::Bin(_, a, b) | Expr::Call2(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Call1(_, a) => a.collect_vars(out),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

impl Expr {
    /// Literals, variables and calls never need grouping when used as an
    /// operand.
    fn is_atom(&self) -> bool {
        matches!(
            self,
            Expr::Num(_) | Expr::Var(_) | Expr::Call1(..) | Expr::Call2(..)
        )
    }
}

struct Operand<'a>(&'a Expr);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atom() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

// Every compound operand is parenthesized at its use site, so reparsing
// the output reproduces the tree exactly regardless of precedence.
// Literals use Rust's shortest round-trip float formatting.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(e) => write!(f, "-{}", Operand(e)),
            Expr::Bin(op, a, b) => {
                write!(f, "{} {} {}", Operand(a), op.symbol(), Operand(b))
            }
            Expr::Call1(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Call2(func, a, b) => write!(f, "{}({a}, {b})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Num(v) => format!("number `{v}`"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '+' => tokens.push(Token { kind: TokenKind::Plus, pos }),
            '-' => tokens.push(Token { kind: TokenKind::Minus, pos }),
            '*' => tokens.push(Token { kind: TokenKind::Star, pos }),
            '/' => tokens.push(Token { kind: TokenKind::Slash, pos }),
            '^' => tokens.push(Token { kind: TokenKind::Caret, pos }),
            '(' => tokens.push(Token { kind: TokenKind::LParen, pos }),
            ')' => tokens.push(Token { kind: TokenKind::RParen, pos }),
            ',' => tokens.push(Token { kind: TokenKind::Comma, pos }),
            '0'..='9' | '.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                // optional exponent: e/E, optional sign, at least one digit
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        j = k;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let text = &src[i..j];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    pos,
                    msg: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Num(value),
                    pos,
                });
                i = j;
                continue;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(src[i..j].to_string()),
                    pos,
                });
                i = j;
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_pos(&self) -> usize {
        self.tokens.last().map(|t| t.pos + 1).unwrap_or(0)
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<()> {
        match self.next() {
            Some(tok) if tok.kind == kind => Ok(()),
            Some(tok) => Err(Error::Syntax {
                pos: tok.pos,
                msg: format!("expected {what}, found {}", tok.kind.describe()),
            }),
            None => Err(Error::Syntax {
                pos: self.end_pos(),
                msg: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.next();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            self.next();
            // right-associative; the exponent may carry a unary minus
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.next().ok_or_else(|| Error::Syntax {
            pos: self.end_pos(),
            msg: "unexpected end of input".into(),
        })?;
        match tok.kind {
            TokenKind::Num(v) => Ok(Expr::Num(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident(name) => self.ident(name, tok.pos),
            other => Err(Error::Syntax {
                pos: tok.pos,
                msg: format!("unexpected {}", other.describe()),
            }),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Expr> {
        let is_call = matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen));
        let func1 = match name.as_str() {
            "sin" => Some(Func1::Sin),
            "cos" => Some(Func1::Cos),
            "exp" => Some(Func1::Exp),
            "ln" => Some(Func1::Ln),
            "sqrt" => Some(Func1::Sqrt),
            "abs" => Some(Func1::Abs),
            _ => None,
        };
        let func2 = match name.as_str() {
            "min" => Some(Func2::Min),
            "max" => Some(Func2::Max),
            _ => None,
        };
        if let Some(f) = func1 {
            if !is_call {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("function `{name}` must be called with parentheses"),
                });
            }
            self.next();
            let arg = self.expr()?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(Expr::Call1(f, Box::new(arg)));
        }
        if let Some(f) = func2 {
            if !is_call {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("function `{name}` must be called with parentheses"),
                });
            }
            self.next();
            let a = self.expr()?;
            self.expect(TokenKind::Comma, "`,` (this function takes two arguments)")?;
            let b = self.expr()?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(Expr::Call2(f, Box::new(a), Box::new(b)));
        }
        if let Some(var) = Var::from_name(&name) {
            if is_call {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("`{name}` is a variable, not a function"),
                });
            }
            return Ok(Expr::Var(var));
        }
        Err(Error::Syntax {
            pos,
            msg: format!("unknown identifier `{name}`"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_str(src: &str, env: &EvalEnv) -> Result<f64> {
        Expr::parse(src)?.eval(env)
    }

    #[test]
    fn builtin_nonlinearities_parse() {
        assert!(Expr::parse("(1+x^2)*exp(u)*(2+cos(v))").is_ok());
        assert!(Expr::parse("t*exp(u*v)").is_ok());
        assert!(Expr::parse("t*(1+u^2*v^2)").is_ok());
        assert!(Expr::parse("(1+y^2)*(1+v^2)*(2+sin(u))").is_ok());
    }

    #[test]
    fn malformed_input_reports_position() {
        match Expr::parse("2 +* u") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(Expr::parse("(1+u").is_err());
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("foo(2)").is_err());
        assert!(Expr::parse("min(u)").is_err());
        assert!(Expr::parse("sin u").is_err());
    }

    #[test]
    fn precedence_table() {
        let env = EvalEnv::new();
        assert_eq!(eval_str("2+3*4^2", &env).unwrap(), 50.0);
        assert_eq!(eval_str("2^3^2", &env).unwrap(), 512.0);
        assert_eq!(eval_str("-2^2", &env).unwrap(), -4.0);
        assert_eq!(eval_str("2^-3", &env).unwrap(), 0.125);
        assert_eq!(eval_str("(2+3)*4", &env).unwrap(), 20.0);
        assert_eq!(eval_str("6/3/2", &env).unwrap(), 1.0);
        assert_eq!(eval_str("2-3-4", &env).unwrap(), -5.0);
        assert_eq!(eval_str("2*-3", &env).unwrap(), -6.0);
        assert_eq!(eval_str("-(1+1)", &env).unwrap(), -2.0);
        assert_eq!(eval_str("1.5e2", &env).unwrap(), 150.0);
    }

    #[test]
    fn builtin_point_values() {
        let env = EvalEnv::new().with_uv(0.0, 1.0);
        assert_eq!(eval_str("(1+v^2)*(2+sin(u))", &env).unwrap(), 4.0);

        let env = EvalEnv::new().with_t(1.0).with_uv(0.0, 5.0);
        assert_eq!(eval_str("t*exp(u*v)", &env).unwrap(), 1.0);
    }

    #[test]
    fn unbound_variable_is_eval_time() {
        let e = Expr::parse("x+1").unwrap();
        let err = e.eval(&EvalEnv::new().with_t(0.5)).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable { name: "x" }));
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let env = EvalEnv::new().with_uv(-1.0, 0.0);
        for (src, needle) in [
            ("ln(u)", "ln"),
            ("sqrt(u)", "sqrt"),
            ("1/v", "division"),
        ] {
            let err = eval_str(src, &env).unwrap_err();
            let msg = err.to_string();
            assert!(msg.contains(needle), "{src}: {msg}");
        }
        assert!(matches!(
            eval_str("exp(1000)*exp(1000)", &EvalEnv::new()),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for src in [
            "(1+x^2)*exp(u)*(2+cos(v))",
            "t*exp(u*v)",
            "-2^-3 + max(u, min(v, 1))",
            "sqrt(abs(t - 0.5)) / (1 + r1*r2)",
        ] {
            let e = Expr::parse(src).unwrap();
            let printed = e.to_string();
            let reparsed = Expr::parse(&printed).unwrap();
            assert_eq!(e, reparsed, "round trip failed for `{src}` -> `{printed}`");
        }
    }

    #[test]
    fn hand_coded_agreement_on_builtin_nonlinearities() {
        // The oracle writes squares as plain products, matching how the
        // evaluator treats integral exponents, so agreement is bit-exact.
        let f_ode = Expr::parse("t*(1+u^2*v^2)").unwrap();
        let g_ode = Expr::parse("t*exp(u*v)").unwrap();
        let f_pde = Expr::parse("(1+x^2)*exp(u)*(2+cos(v))").unwrap();
        let g_pde = Expr::parse("(1+y^2)*(1+v^2)*(2+sin(u))").unwrap();

        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            // xorshift, mapped to [-2, 2]
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for _ in 0..1000 {
            let (t, x, y, u, v) = (
                next().abs() / 2.0,
                next() / 2.0,
                next() / 2.0,
                next(),
                next(),
            );
            let env = EvalEnv::new().with_t(t).with_xy(x, y).with_uv(u, v);
            assert_eq!(
                f_ode.eval(&env).unwrap(),
                t * (1.0 + (u * u) * (v * v))
            );
            assert_eq!(g_ode.eval(&env).unwrap(), t * (u * v).exp());
            assert_eq!(
                f_pde.eval(&env).unwrap(),
                (1.0 + x * x) * u.exp() * (2.0 + v.cos())
            );
            assert_eq!(
                g_pde.eval(&env).unwrap(),
                (1.0 + y * y) * (1.0 + v * v) * (2.0 + u.sin())
            );
        }
    }
}
