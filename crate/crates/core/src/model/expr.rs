//! A small arithmetic expression language over the declared input variables.
//!
//! Grammar (standard precedence, `^` binds tightest and is
//! right-associative, then unary minus, then `*` `/`, then `+` `-`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | variable | function '(' expr ')' | '(' expr ')'
//! ```
//!
//! Supported functions: `sin`, `cos`, `tan`, `exp`, `log` (natural), `abs`,
//! `sqrt`. Evaluation is plain IEEE-754 double arithmetic; non-finite
//! results propagate and are classified Outside downstream.

use std::fmt;

use crate::domain::{OutputModel, VariableSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Abs,
    Sqrt,
}

impl UnaryFn {
    fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "tan" => UnaryFn::Tan,
            "exp" => UnaryFn::Exp,
            "log" => UnaryFn::Log,
            "abs" => UnaryFn::Abs,
            "sqrt" => UnaryFn::Sqrt,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Tan => "tan",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Abs => "abs",
            UnaryFn::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            UnaryFn::Sin => x.sin(),
            UnaryFn::Cos => x.cos(),
            UnaryFn::Tan => x.tan(),
            UnaryFn::Exp => x.exp(),
            UnaryFn::Log => x.ln(),
            UnaryFn::Abs => x.abs(),
            UnaryFn::Sqrt => x.sqrt(),
        }
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
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
            BinOp::Pow => a.powf(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Const(f64),
    /// Index into the declared variable list.
    Var(usize),
    Neg(Box<Ast>),
    Call(UnaryFn, Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
}

/// A parsed expression bound to a fixed variable list.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    ast: Ast,
    variables: Vec<String>,
}

impl Expression {
    /// Parses `source` against the declared variables. Every identifier
    /// that is not a function name must match a variable name.
    pub fn parse(source: &str, variables: &[VariableSpec]) -> Result<Expression> {
        if source.trim().is_empty() {
            return Err(Error::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let names: Vec<String> = variables.iter().map(|v| v.name.clone()).collect();
        let mut parser = Parser {
            src: source.as_bytes(),
            pos: 0,
            names: &names,
        };
        parser.skip_ws();
        let ast = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.err("unexpected trailing input"));
        }
        Ok(Expression {
            ast,
            variables: names,
        })
    }

    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    /// Evaluates at `point`, which must carry one value per declared
    /// variable. Non-finite results (`log(0)`, `0/0`, overflow) propagate.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.check_arity(point)?;
        Ok(eval_ast(&self.ast, point))
    }
}

fn eval_ast(ast: &Ast, point: &[f64]) -> f64 {
    match ast {
        Ast::Const(c) => *c,
        Ast::Var(i) => point[*i],
        Ast::Neg(inner) => -eval_ast(inner, point),
        Ast::Call(f, arg) => f.apply(eval_ast(arg, point)),
        Ast::Bin(op, a, b) => op.apply(eval_ast(a, point), eval_ast(b, point)),
    }
}

impl OutputModel for Expression {
    fn arity(&self) -> usize {
        self.variables.len()
    }

    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        self.eval(point)
    }

    fn concurrent_safe(&self) -> bool {
        true
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Ast::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Ast::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Ast::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Ast::Bin(BinOp::Div, Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(b'-') {
            Ok(Ast::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat(b'^') {
            // Right-associative; the exponent may start with a unary minus.
            let exponent = self.unary()?;
            Ok(Ast::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Ast> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                // Not an exponent after all (for example `2e` followed by `x`).
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("bad number literal `{text}`"),
        })?;
        self.skip_ws();
        Ok(Ast::Const(value))
    }

    fn identifier(&mut self) -> Result<Ast> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii identifier")
            .to_owned();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            let func = UnaryFn::from_name(&name).ok_or(Error::UnknownFunction(name))?;
            self.pos += 1;
            self.skip_ws();
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)` after function argument"));
            }
            return Ok(Ast::Call(func, Box::new(arg)));
        }
        match self.names.iter().position(|n| *n == name) {
            Some(index) => Ok(Ast::Var(index)),
            None => Err(Error::UnknownVariable(name)),
        }
    }
}

// Precedence levels for the printer; parenthesize any child that binds
// looser than its context requires.
fn precedence(ast: &Ast) -> u8 {
    match ast {
        Ast::Const(_) | Ast::Var(_) | Ast::Call(..) => 4,
        Ast::Bin(BinOp::Pow, ..) => 3,
        Ast::Neg(_) => 2,
        Ast::Bin(BinOp::Mul, ..) | Ast::Bin(BinOp::Div, ..) => 1,
        Ast::Bin(BinOp::Add, ..) | Ast::Bin(BinOp::Sub, ..) => 0,
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(ast: &Ast, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match ast {
                Ast::Const(c) => write!(f, "{c}"),
                Ast::Var(i) => write!(f, "{}", names[*i]),
                Ast::Neg(inner) => {
                    write!(f, "-")?;
                    wrap(inner, precedence(ast), names, f)
                }
                Ast::Call(func, arg) => {
                    write!(f, "{}(", func.name())?;
                    go(arg, names, f)?;
                    write!(f, ")")
                }
                Ast::Bin(op, a, b) => {
                    let level = precedence(ast);
                    match op {
                        // Left-associative: the right child needs parens at
                        // the same level.
                        BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => {
                            wrap_at(a, level, names, f)?;
                            write!(f, " {} ", op.symbol())?;
                            wrap(b, level, names, f)
                        }
                        // Right-associative.
                        BinOp::Pow => {
                            wrap(a, level, names, f)?;
                            write!(f, "{}", op.symbol())?;
                            wrap_at(b, level, names, f)
                        }
                    }
                }
            }
        }

        // Parenthesize children that bind strictly looser.
        fn wrap(
            child: &Ast,
            parent_level: u8,
            names: &[String],
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            if precedence(child) <= parent_level {
                write!(f, "(")?;
                go(child, names, f)?;
                write!(f, ")")
            } else {
                go(child, names, f)
            }
        }

        // Parenthesize children that bind looser, allowing equal levels
        // (the associative side).
        fn wrap_at(
            child: &Ast,
            parent_level: u8,
            names: &[String],
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            if precedence(child) < parent_level {
                write!(f, "(")?;
                go(child, names, f)?;
                write!(f, ")")
            } else {
                go(child, names, f)
            }
        }

        go(&self.ast, &self.variables, f)
    }
}
