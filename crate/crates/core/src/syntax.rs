//! Surface term grammar.
//!
//! ```text
//! expr  := '\' name+ '.' expr | atom+ [ '\' ... ]
//! atom  := name | '(' expr ')' | 'num:' digits | '#' digits | 'seq[' [expr (',' expr)*] ']'
//! name  := [A-Za-z_][A-Za-z0-9_'-]*
//! ```
//! Application is juxtaposition and associates to the left; an abstraction
//! extends as far right as possible.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::bracket::{self, Term};
use crate::kernel::{Element, Fuel, Halt, Pca};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("parse error at column {}: {msg}", pos + 1)]
    Parse { pos: usize, msg: String },
    #[error("unbound name `{name}` at column {}", pos + 1)]
    Unbound { name: String, pos: usize },
    #[error("{0}")]
    Eval(Halt),
}

/// Parsed, unresolved surface syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String, usize),
    Num(u64),
    Code(BigUint),
    Seq(Vec<Expr>),
    App(Box<Expr>, Box<Expr>),
    Lam(Vec<String>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Num(u64),
    Code(BigUint),
    SeqOpen,
    LParen,
    RParen,
    RBracket,
    Comma,
    Lambda,
    Dot,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-')
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| SyntaxError::Parse {
        pos,
        msg: msg.to_string(),
    };
    let digits = |mut j: usize| {
        let start = j;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        (start, j)
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::LParen, pos));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, pos));
                i += 1
            }
            ']' => {
                out.push((Tok::RBracket, pos));
                i += 1
            }
            ',' => {
                out.push((Tok::Comma, pos));
                i += 1
            }
            '\\' | 'λ' => {
                out.push((Tok::Lambda, pos));
                i += 1
            }
            '.' => {
                out.push((Tok::Dot, pos));
                i += 1
            }
            '#' => {
                let (s, e) = digits(i + 1);
                if s == e {
                    return Err(err(pos, "expected digits after `#`"));
                }
                let text: String = chars[s..e].iter().map(|(_, c)| c).collect();
                out.push((Tok::Code(BigUint::from_str(&text).unwrap()), pos));
                i = e;
            }
            c if is_name_start(c) => {
                let mut j = i;
                while j < chars.len() && is_name_char(chars[j].1) {
                    j += 1;
                }
                let name: String = chars[i..j].iter().map(|(_, c)| c).collect();
                if name == "num" && j < chars.len() && chars[j].1 == ':' {
                    let (s, e) = digits(j + 1);
                    if s == e {
                        return Err(err(pos, "expected digits after `num:`"));
                    }
                    let text: String = chars[s..e].iter().map(|(_, c)| c).collect();
                    let n = text.parse().map_err(|_| err(pos, "numeral too large"))?;
                    out.push((Tok::Num(n), pos));
                    i = e;
                } else if name == "seq" && j < chars.len() && chars[j].1 == '[' {
                    out.push((Tok::SeqOpen, pos));
                    i = j + 1;
                } else {
                    out.push((Tok::Name(name), pos));
                    i = j;
                }
            }
            other => return Err(err(pos, &format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut acc = match self.atom()? {
            Some(a) => a,
            None => return self.fail("expected a term"),
        };
        loop {
            if self.peek() == Some(&Tok::Lambda) {
                let lam = self.lambda()?;
                return Ok(Expr::App(Box::new(acc), Box::new(lam)));
            }
            match self.atom()? {
                Some(a) => acc = Expr::App(Box::new(acc), Box::new(a)),
                None => return Ok(acc),
            }
        }
    }

    fn lambda(&mut self) -> Result<Expr, SyntaxError> {
        self.at += 1;
        let mut vars = Vec::new();
        while let Some(Tok::Name(n)) = self.peek() {
            vars.push(n.clone());
            self.at += 1;
        }
        if vars.is_empty() {
            return self.fail("expected a variable after `\\`");
        }
        if self.peek() != Some(&Tok::Dot) {
            return self.fail("expected `.`");
        }
        self.at += 1;
        let body = self.expr()?;
        Ok(Expr::Lam(vars, Box::new(body)))
    }

    fn atom(&mut self) -> Result<Option<Expr>, SyntaxError> {
        let pos = self.pos();
        let e = match self.peek().cloned() {
            Some(Tok::Name(n)) => Expr::Name(n, pos),
            Some(Tok::Num(n)) => Expr::Num(n),
            Some(Tok::Code(c)) => Expr::Code(c),
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected `)`");
                }
                e
            }
            Some(Tok::SeqOpen) => {
                self.at += 1;
                let mut items = Vec::new();
                if self.peek() != Some(&Tok::RBracket) {
                    loop {
                        items.push(self.expr()?);
                        match self.peek() {
                            Some(Tok::Comma) => self.at += 1,
                            Some(Tok::RBracket) => break,
                            _ => return self.fail("expected `,` or `]`"),
                        }
                    }
                }
                Expr::Seq(items)
            }
            _ => return Ok(None),
        };
        self.at += 1;
        Ok(Some(e))
    }
}

pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

/// Named elements visible to the resolver.
pub type Env = HashMap<String, Element>;

/// Resolves names and compiles abstractions. `K`, `S` denote the target
/// model's combinators; numerals and sequences use its kit.
pub fn resolve(pca: &dyn Pca, env: &Env, e: &Expr) -> Result<Term, SyntaxError> {
    let mut scope = Vec::new();
    resolve_in(pca, env, e, &mut scope)
}

fn resolve_in(
    pca: &dyn Pca,
    env: &Env,
    e: &Expr,
    scope: &mut Vec<String>,
) -> Result<Term, SyntaxError> {
    Ok(match e {
        Expr::Name(n, pos) => {
            if scope.iter().any(|s| s == n) {
                Term::Var(n.clone())
            } else if n == "K" {
                Term::K
            } else if n == "S" {
                Term::S
            } else if let Some(v) = env.get(n) {
                Term::Const(v.clone())
            } else {
                return Err(SyntaxError::Unbound {
                    name: n.clone(),
                    pos: *pos,
                });
            }
        }
        Expr::Num(n) => {
            let v = pca
                .kit()
                .numeral(pca, *n, &mut Fuel::new(1_000 + 100 * n))
                .map_err(SyntaxError::Eval)?;
            Term::Const(v)
        }
        Expr::Code(c) => Term::Const(Element::code(c.clone())),
        Expr::Seq(items) => {
            let kit = pca.kit();
            let mut acc = Term::Const(kit.nil.clone());
            for item in items.iter().rev() {
                let t = resolve_in(pca, env, item, scope)?;
                acc = Term::apps(Term::Const(kit.cons.clone()), [t, acc]);
            }
            acc
        }
        Expr::App(f, x) => Term::app(
            resolve_in(pca, env, f, scope)?,
            resolve_in(pca, env, x, scope)?,
        ),
        Expr::Lam(vars, body) => {
            let depth = scope.len();
            scope.extend(vars.iter().cloned());
            let body = resolve_in(pca, env, body, scope);
            scope.truncate(depth);
            let mut t = body?;
            for v in vars.iter().rev() {
                t = bracket::abstract_var(v, &t);
            }
            t
        }
    })
}

/// Parses, resolves and evaluates `src` in `pca`.
pub fn eval_source(
    pca: &dyn Pca,
    env: &Env,
    src: &str,
    fuel: &mut Fuel,
) -> Result<Element, SyntaxError> {
    let expr = parse(src)?;
    let term = resolve(pca, env, &expr)?;
    bracket::compile(pca, &term, fuel).map_err(|e| match e {
        bracket::CompileError::Halt(h) => SyntaxError::Eval(h),
        bracket::CompileError::Unbound(name) => SyntaxError::Unbound { name, pos: 0 },
    })
}

/// Budget for [`define`].
pub const DEFINE_FUEL: u64 = 100_000_000;

/// Evaluates `src` in `pca` with the kit's names plus `extras` in scope.
pub fn define(
    pca: &dyn Pca,
    extras: &[(&str, &Element)],
    src: &str,
) -> Result<Element, SyntaxError> {
    let mut env = pca.kit().env();
    for (name, e) in extras {
        env.insert(name.to_string(), (*e).clone());
    }
    eval_source(pca, &env, src, &mut Fuel::new(DEFINE_FUEL))
}
