//! Property expressions: atoms over the property vocabulary combined with
//! `&`/`and`, `|`/`or`, `!`/`not` and parentheses.
//!
//! An atom is `name` or `name(subject)` or `name(subject, subject)`.
//! Subjects are `self` (or `m`), `a`, `b` and `a+b`. A relative property
//! with two subjects `(x, y)` quantifies over `Hom(x, y)`; with one subject
//! it is the self-property. A bare name applies to `self` when searching
//! single modules and to `a+b` when searching pairs.

use std::fmt;

use crate::error::{Error, Result};
use crate::properties::Property;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subject {
    /// The module under test; `a+b` in pair searches.
    Module,
    A,
    B,
    Sum,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subject::Module => "self",
            Subject::A => "a",
            Subject::B => "b",
            Subject::Sum => "a+b",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom {
        prop: Property,
        subjects: Vec<Subject>,
    },
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(Error::MalformedExpression(format!(
                "unexpected `{}` in `{text}`",
                p.tokens[p.pos]
            )));
        }
        Ok(e)
    }

    /// Whether the expression talks about a pair `a`, `b`.
    pub fn mentions_pair(&self) -> bool {
        self.atoms().iter().any(|(_, s)| {
            s.iter()
                .any(|s| matches!(s, Subject::A | Subject::B | Subject::Sum))
        })
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<(Property, Vec<Subject>)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<(Property, Vec<Subject>)>) {
        match self {
            Expr::Atom { prop, subjects } => out.push((*prop, subjects.clone())),
            Expr::Not(e) => e.collect(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Evaluates with `atom` deciding each atom.
    pub fn eval(
        &self,
        atom: &mut impl FnMut(Property, &[Subject]) -> Result<bool>,
    ) -> Result<bool> {
        match self {
            Expr::Atom { prop, subjects } => atom(*prop, subjects),
            Expr::Not(e) => Ok(!e.eval(atom)?),
            Expr::And(a, b) => Ok(a.eval(atom)? && b.eval(atom)?),
            Expr::Or(a, b) => Ok(a.eval(atom)? || b.eval(atom)?),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom { prop, subjects } if subjects.is_empty() => write!(f, "{prop}"),
            Expr::Atom { prop, subjects } => {
                let s: Vec<String> = subjects.iter().map(Subject::to_string).collect();
                write!(f, "{prop}({})", s.join(","))
            }
            Expr::Not(e) => write!(f, "!{e}"),
            Expr::And(a, b) => write!(f, "({a} & {b})"),
            Expr::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if "()&|!,+".contains(c) {
            out.push(c.to_string());
            chars.next();
        } else if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                    word.push(c.to_ascii_lowercase());
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(word);
        } else {
            return Err(Error::MalformedExpression(format!(
                "unexpected character `{c}`"
            )));
        }
    }
    if out.is_empty() {
        return Err(Error::MalformedExpression("empty expression".into()));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<String>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Result<String> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::MalformedExpression("unexpected end of expression".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<()> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(Error::MalformedExpression(format!(
                "expected `{want}`, found `{t}`"
            )))
        }
    }

    fn or(&mut self) -> Result<Expr> {
        let mut e = self.and()?;
        while matches!(self.peek(), Some("|") | Some("or")) {
            self.pos += 1;
            e = Expr::Or(Box::new(e), Box::new(self.and()?));
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while matches!(self.peek(), Some("&") | Some("and")) {
            self.pos += 1;
            e = Expr::And(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some("!") | Some("not") => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Some("(") => {
                self.pos += 1;
                let e = self.or()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let name = self.next()?;
        let prop = Property::from_name(&name)
            .ok_or_else(|| Error::MalformedExpression(format!("unknown property `{name}`")))?;
        let mut subjects = Vec::new();
        if self.peek() == Some("(") {
            self.pos += 1;
            loop {
                subjects.push(self.subject()?);
                match self.next()?.as_str() {
                    "," => continue,
                    ")" => break,
                    t => {
                        return Err(Error::MalformedExpression(format!(
                            "expected `,` or `)`, found `{t}`"
                        )))
                    }
                }
            }
        }
        if subjects.len() > 2 {
            return Err(Error::MalformedExpression(format!(
                "{name} takes at most two subjects"
            )));
        }
        if subjects.len() == 2 && !prop.is_relative() {
            return Err(Error::MalformedExpression(format!(
                "{name} is a property of a single module"
            )));
        }
        Ok(Expr::Atom { prop, subjects })
    }

    fn subject(&mut self) -> Result<Subject> {
        let first = self.next()?;
        let s = match first.as_str() {
            "self" | "m" => Subject::Module,
            "a" => Subject::A,
            "b" => Subject::B,
            t => return Err(Error::MalformedExpression(format!("unknown subject `{t}`"))),
        };
        if self.peek() == Some("+") {
            self.pos += 1;
            let second = self.next()?;
            return match (s, second.as_str()) {
                (Subject::A, "b") | (Subject::B, "a") => Ok(Subject::Sum),
                _ => Err(Error::MalformedExpression(format!(
                    "unsupported sum `{first}+{second}`"
                ))),
            };
        }
        Ok(s)
    }
}
