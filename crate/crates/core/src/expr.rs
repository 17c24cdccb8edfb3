//! Lift expressions.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | 'y' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
//! ```
//!
//! There are no user-defined names and no `floor`/`mod`, so every parsed lift
//! is continuous. Rationals are written as quotients (`1/3`).

use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Neg(e) => -e.eval(x, y),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x, y), b.eval(x, y));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(Func::Sin, e) => e.eval(x, y).sin(),
            Expr::Call(Func::Cos, e) => e.eval(x, y).cos(),
        }
    }

    fn uses(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(e) | Expr::Call(_, e) => e.uses(v),
            Expr::Bin(_, a, b) => a.uses(v) || b.uses(v),
        }
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Expr {
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::Var(Var::X) => Expr::Var(Var::Y),
            Expr::Var(Var::Y) => Expr::Var(Var::X),
            Expr::Neg(e) => Expr::Neg(Box::new(e.swap_vars())),
            Expr::Call(f, e) => Expr::Call(*f, Box::new(e.swap_vars())),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.swap_vars()), Box::new(b.swap_vars())),
        }
    }
}

/// A parsed expression together with its source text.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedExpr {
    source: String,
    root: Expr,
}

impl ParsedExpr {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.root.eval(x, 0.0)
    }

    pub fn eval2(&self, x: f64, y: f64) -> f64 {
        self.root.eval(x, y)
    }

    pub fn uses_y(&self) -> bool {
        self.root.uses(Var::Y)
    }

    pub fn swap_vars(&self) -> ParsedExpr {
        ParsedExpr {
            source: format!("swap({})", self.source),
            root: self.root.swap_vars(),
        }
    }
}

impl fmt::Display for ParsedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Parses an expression in `x` (and optionally `y`).
///
/// Error positions are 0-based byte offsets into `source`; running off the
/// end reports `source.len()`.
pub fn parse(source: &str) -> Result<ParsedExpr> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: source.len(),
    };
    let root = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(syntax(t.pos, "operator or end of input"));
    }
    Ok(ParsedExpr {
        source: source.to_string(),
        root,
    })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(position: usize, expected: &str) -> Error {
    Error::Syntax {
        position,
        expected: expected.to_string(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| syntax(start, "a number"))?;
            out.push(Token {
                tok: Tok::Num(v),
                pos: start,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                pos: start,
            });
        } else if "+-*/^()".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                pos: i,
            });
            i += 1;
        } else {
            return Err(syntax(i, "number, name, operator or parenthesis"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

const ATOM: &str = "number, x, y, pi, sin, cos or '('";

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(syntax(self.here(), &format!("'{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_sym('^') {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(self.end, ATOM));
        };
        self.pos += 1;
        match tok.tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var(Var::X)),
                "y" => Ok(Expr::Var(Var::Y)),
                "pi" => Ok(Expr::Num(PI)),
                "sin" | "cos" => {
                    let f = if name == "sin" { Func::Sin } else { Func::Cos };
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(Expr::Call(f, Box::new(arg)))
                }
                _ => Err(syntax(tok.pos, ATOM)),
            },
            Tok::Sym(_) => Err(syntax(tok.pos, ATOM)),
        }
    }
}
