//! Combinator terms: named variables and application, with bracket
//! abstraction into `s`/`k` form.
//!
//! The names `k` and `s` are ordinary variables as far as the syntax goes;
//! models give them their combinator meaning at compile time, and the
//! reduction rules in the term model treat them specially. Everything else is
//! an inert atom.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(Box<Term>, Box<Term>),
}

pub fn var(name: impl Into<String>) -> Term {
    Term::Var(name.into())
}

pub fn app(u: Term, v: Term) -> Term {
    Term::App(Box::new(u), Box::new(v))
}

/// Left-nested application of several terms: `apps(f, [a, b])` is `((f a) b)`.
pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(head, app)
}

pub fn k() -> Term {
    var("k")
}

pub fn s() -> Term {
    var("s")
}

impl Term {
    pub fn mentions(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::App(u, v) => u.mentions(x) || v.mentions(x),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(y) => {
                out.insert(y.as_str());
            }
            Term::App(u, v) => {
                u.collect_vars(out);
                v.collect_vars(out);
            }
        }
    }

    /// True when every free variable is `k` or `s`, so the term can be
    /// compiled into any model without an environment.
    pub fn is_combinator(&self) -> bool {
        self.free_vars().iter().all(|v| *v == "k" || *v == "s")
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(u, v) => 1 + u.size() + v.size(),
        }
    }

    /// Capture-free substitution — terms have no binders, so this is plain
    /// replacement.
    pub fn subst(&self, x: &str, with: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => with.clone(),
            Term::Var(_) => self.clone(),
            Term::App(u, v) => app(u.subst(x, with), v.subst(x, with)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(y) => write!(f, "{y}"),
            Term::App(u, v) => write!(f, "({u} {v})"),
        }
    }
}

/// Bracket abstraction, without the η shortcut: the result never mentions
/// `x`, and applying it to any term `a` reduces to `t[x := a]`.
pub fn abstract_var(x: &str, t: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => apps(s(), [k(), k()]),
        _ if !t.mentions(x) => app(k(), t.clone()),
        Term::App(u, v) => apps(s(), [abstract_var(x, u), abstract_var(x, v)]),
        Term::Var(_) => unreachable!("a variable either is x or does not mention it"),
    }
}

/// Abstract several parameters at once; the first parameter binds outermost.
pub fn abstract_many<S: AsRef<str>>(params: &[S], body: &Term) -> Term {
    let mut t = body.clone();
    for p in params.iter().rev() {
        t = abstract_var(p.as_ref(), &t);
    }
    t
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct TermParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Open,
    Close,
    Dot,
    End,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Scanner<'a> {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> TermParseError {
        TermParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = *self.src.get(self.pos)?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_space(&mut self) {
        while let Some(c) = self.src.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<(Token, u32, u32), TermParseError> {
        self.skip_space();
        let (line, col) = (self.line, self.col);
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Token::End, line, col));
        };
        let tok = match c {
            b'(' => {
                self.bump();
                Token::Open
            }
            b')' => {
                self.bump();
                Token::Close
            }
            b'.' => {
                self.bump();
                Token::Dot
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while let Some(&c) = self.src.get(self.pos) {
                    if c.is_ascii_alphanumeric() || c == b'_' {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii range")
                    .to_string();
                Token::Ident(name)
            }
            c => return Err(self.err(format!("unexpected character {:?}", c as char))),
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    scanner: Scanner<'a>,
    peeked: Option<(Token, u32, u32)>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser {
            scanner: Scanner::new(src),
            peeked: None,
        }
    }

    fn peek(&mut self) -> Result<&(Token, u32, u32), TermParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.scanner.next_token()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn advance(&mut self) -> Result<(Token, u32, u32), TermParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.scanner.next_token(),
        }
    }

    fn fail<T>(&self, line: u32, col: u32, msg: impl Into<String>) -> Result<T, TermParseError> {
        Err(TermParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    /// One or more atoms, applied left to right.
    fn term(&mut self) -> Result<Term, TermParseError> {
        let (_, line, col) = *self.peek()?;
        let mut acc = match self.atom()? {
            Some(t) => t,
            None => return self.fail(line, col, "expected a term"),
        };
        while let Some(next) = self.atom()? {
            acc = app(acc, next);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Option<Term>, TermParseError> {
        match self.peek()? {
            (Token::Ident(_), ..) => {
                let (tok, ..) = self.advance()?;
                let Token::Ident(name) = tok else {
                    unreachable!()
                };
                Ok(Some(var(name)))
            }
            (Token::Open, ..) => {
                self.advance()?;
                let inner = self.term()?;
                let (tok, line, col) = self.advance()?;
                if tok != Token::Close {
                    return self.fail(line, col, "expected ')'");
                }
                Ok(Some(inner))
            }
            _ => Ok(None),
        }
    }

    fn expect_end(&mut self) -> Result<(), TermParseError> {
        let (tok, line, col) = self.advance()?;
        match tok {
            Token::End => Ok(()),
            Token::Close => self.fail(line, col, "unmatched ')'"),
            other => self.fail(line, col, format!("unexpected {other:?} after the term")),
        }
    }
}

/// Parse an applicative term: identifiers, parentheses, application by
/// juxtaposition associating left.
pub fn parse(src: &str) -> Result<Term, TermParseError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Parse either a plain term or `lambda x y. body`, abstracting the
/// parameters away so the result is closed over them.
pub fn parse_lambda(src: &str) -> Result<Term, TermParseError> {
    let mut p = Parser::new(src);
    let leading = p.peek()?.clone();
    if let (Token::Ident(word), ..) = &leading {
        if word == "lambda" {
            p.advance()?;
            let mut params: Vec<String> = Vec::new();
            loop {
                let (tok, line, col) = p.advance()?;
                match tok {
                    Token::Ident(name) => {
                        if name == "k" || name == "s" {
                            return p.fail(line, col, format!("parameter {name} is reserved"));
                        }
                        if params.contains(&name) {
                            return p.fail(line, col, format!("duplicate parameter {name}"));
                        }
                        params.push(name);
                    }
                    Token::Dot => break,
                    other => {
                        return p.fail(line, col, format!("expected parameter or '.', got {other:?}"))
                    }
                }
            }
            if params.is_empty() {
                return p.fail(1, 1, "lambda needs at least one parameter");
            }
            let body = p.term()?;
            p.expect_end()?;
            return Ok(abstract_many(&params, &body));
        }
    }
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn application_associates_left_and_prints_with_full_parens() {
        let t = parse("k x y").unwrap();
        assert_eq!(t, app(app(k(), var("x")), var("y")));
        assert_eq!(t.to_string(), "((k x) y)");
        assert_eq!(parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn parens_regroup() {
        let t = parse("k (x y)").unwrap();
        assert_eq!(t, app(k(), app(var("x"), var("y"))));
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let e = parse("k (x").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        let e = parse("k\n  x)").unwrap_err();
        assert_eq!((e.line, e.col), (2, 4));
        assert!(e.to_string().contains("line 2"));
        let e = parse("f $x").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }

    #[test]
    fn abstraction_worked_examples() {
        // [x]x = ((s k) k)
        assert_eq!(
            abstract_var("x", &var("x")),
            apps(s(), [k(), k()])
        );
        // [x]y = (k y) when x is not free
        assert_eq!(abstract_var("x", &var("y")), app(k(), var("y")));
        // [x](x y) = ((s [x]x) [x]y)
        assert_eq!(
            abstract_var("x", &parse("x y").unwrap()),
            apps(s(), [apps(s(), [k(), k()]), app(k(), var("y"))])
        );
    }

    #[test]
    fn abstraction_takes_no_eta_shortcut() {
        // [x](f x) stays an s-form rather than collapsing to f.
        let t = abstract_var("x", &parse("f x").unwrap());
        assert_eq!(
            t,
            apps(s(), [app(k(), var("f")), apps(s(), [k(), k()])])
        );
        assert!(!t.mentions("x"));
    }

    #[test]
    fn abstraction_result_never_mentions_the_variable() {
        let body = parse("x (y x) (x x z)").unwrap();
        let t = abstract_var("x", &body);
        assert!(!t.mentions("x"));
        assert!(t.mentions("y") && t.mentions("z"));
    }

    #[test]
    fn lambda_form_abstracts_parameters() {
        let t = parse_lambda("lambda x y. y x").unwrap();
        assert!(t.is_combinator());
        let plain = parse_lambda("a b c").unwrap();
        assert_eq!(plain, parse("a b c").unwrap());
        assert!(parse_lambda("lambda k. k").is_err());
        assert!(parse_lambda("lambda x x. x").is_err());
    }

    #[test]
    fn substitution_replaces_every_occurrence() {
        let t = parse("x (y x)").unwrap();
        assert_eq!(t.subst("x", &parse("a b").unwrap()).to_string(), "((a b) (y (a b)))");
    }
}
