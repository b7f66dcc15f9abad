use std::fmt;

use thiserror::Error;

use super::{Atom, BodyElement, ExtLiteral, Modal, ObjectiveLiteral, Program, Rule, RuleKind, SubjectiveElement, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A structural problem in an otherwise well-formed program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: usize,
    pub line: usize,
    pub col: usize,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: rule {}: {}", self.line, self.col, self.rule, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("invalid program: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// A rule as written. Heads are kept as general elements so that
/// misplaced constructs can be reported by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRule {
    pub kind: RuleKind,
    pub head: Vec<BodyElement>,
    pub body: Vec<BodyElement>,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceProgram {
    pub rules: Vec<SourceRule>,
}

impl SourceProgram {
    /// Lower to the typed AST. Call only on programs without diagnostics.
    fn lower(self) -> Program {
        Program::from_rules(self.rules.into_iter().map(|r| {
            Rule {
                kind: r.kind,
                head: r
                    .head
                    .into_iter()
                    .map(|e| match e {
                        BodyElement::Ext(x) => x.lit,
                        BodyElement::Subjective(s) => s.inner.lit,
                    })
                    .collect(),
                body: r.body,
            }
        }))
    }
}

/// Every structural violation of a parsed program, one per offending element.
pub fn validate(p: &SourceProgram) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (idx, r) in p.rules.iter().enumerate() {
        let mut report =
            |reason: &str| out.push(Diagnostic { rule: idx, line: r.line, col: r.col, reason: reason.to_string() });
        match r.kind {
            RuleKind::Wvc => {
                if !r.head.is_empty() {
                    report("world view constraint with a head");
                }
                for e in &r.body {
                    if matches!(e, BodyElement::Ext(_)) {
                        report("objective literal in WVC body");
                    }
                }
            }
            RuleKind::Regular => {
                for (i, e) in r.head.iter().enumerate() {
                    match e {
                        BodyElement::Subjective(_) => report("subjective element in head"),
                        BodyElement::Ext(x) if x.depth > 0 => report("default negation in head"),
                        BodyElement::Ext(x) => {
                            if r.head[..i].iter().any(|o| matches!(o, BodyElement::Ext(y) if y.lit == x.lit)) {
                                report("duplicate head literal");
                            }
                        }
                    }
                }
            }
        }
        for e in &r.body {
            if let BodyElement::Subjective(s) = e {
                if s.inner.depth > 1 {
                    report("subjective element over a doubly negated literal");
                }
            }
        }
    }
    out
}

/// Parse, validate and lower program text.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let src = parse_source(text)?;
    let diags = validate(&src);
    if !diags.is_empty() {
        return Err(ParseError::Invalid(diags));
    }
    Ok(src.lower())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Not,
    K,
    M,
    If,
    Wvc,
    Bar,
    Comma,
    Dot,
    LParen,
    RParen,
    Minus,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "'{s}'"),
            Tok::Not => f.write_str("'not'"),
            Tok::K => f.write_str("'K'"),
            Tok::M => f.write_str("'M'"),
            Tok::If => f.write_str("':-'"),
            Tok::Wvc => f.write_str("'!-'"),
            Tok::Bar => f.write_str("'|'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '%' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            ':' | '!' => {
                bump(&mut chars);
                if chars.peek() != Some(&'-') {
                    return Err(SyntaxError { line: tl, col: tc, message: format!("expected '-' after '{c}'") });
                }
                bump(&mut chars);
                if c == ':' {
                    Tok::If
                } else {
                    Tok::Wvc
                }
            }
            '|' | ',' | '.' | '(' | ')' | '-' => {
                bump(&mut chars);
                match c {
                    '|' => Tok::Bar,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Minus,
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "not" => Tok::Not,
                    "K" => Tok::K,
                    "M" => Tok::M,
                    _ if word.starts_with(|c: char| c.is_ascii_uppercase()) => Tok::Var(word),
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(SyntaxError { line: tl, col: tc, message: format!("unexpected character '{other}'") }),
        };
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError { line: t.line, col: t.col, message: message.into() }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {t}, found {}", self.peek())))
        }
    }

    fn program(&mut self) -> Result<SourceProgram, SyntaxError> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(SourceProgram { rules })
    }

    fn rule(&mut self) -> Result<SourceRule, SyntaxError> {
        let Token { line, col, .. } = self.toks[self.pos];
        let (kind, head, body) = if self.eat(&Tok::Wvc) {
            let body = self.elements(&Tok::Comma)?;
            if body.is_empty() {
                return Err(self.error("world view constraint needs a body"));
            }
            (RuleKind::Wvc, Vec::new(), body)
        } else if self.eat(&Tok::If) {
            (RuleKind::Regular, Vec::new(), self.elements(&Tok::Comma)?)
        } else {
            let head = self.elements(&Tok::Bar)?;
            if head.is_empty() {
                return Err(self.error(format!("expected a rule, found {}", self.peek())));
            }
            let body = if self.eat(&Tok::If) { self.elements(&Tok::Comma)? } else { Vec::new() };
            (RuleKind::Regular, head, body)
        };
        self.expect(Tok::Dot)?;
        Ok(SourceRule { kind, head, body, line, col })
    }

    // Possibly empty `sep`-separated element list, ended by '.' or ':-'.
    fn elements(&mut self, sep: &Tok) -> Result<Vec<BodyElement>, SyntaxError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Dot | Tok::If) {
            return Ok(out);
        }
        out.push(self.element()?);
        while self.eat(sep) {
            out.push(self.element()?);
        }
        Ok(out)
    }

    fn nots(&mut self) -> u32 {
        let mut n = 0;
        while self.eat(&Tok::Not) {
            n += 1;
        }
        n
    }

    fn element(&mut self) -> Result<BodyElement, SyntaxError> {
        let outer = self.nots();
        let modal = match self.peek() {
            Tok::K => Some(Modal::K),
            Tok::M => Some(Modal::M),
            _ => None,
        };
        match modal {
            Some(modal) => {
                if outer > 1 {
                    return Err(self.error("double default negation before a modal operator"));
                }
                self.advance();
                let inner = self.nots();
                if inner > 1 {
                    return Err(self.error("at most one default negation may follow a modal operator"));
                }
                let lit = self.objective()?;
                Ok(BodyElement::Subjective(SubjectiveElement::new(
                    outer == 1,
                    modal,
                    ExtLiteral::new(lit, inner as u8),
                )))
            }
            None => {
                let depth = if outer <= 2 { outer as u8 } else { super::collapse_depth(outer) };
                Ok(BodyElement::Ext(ExtLiteral::new(self.objective()?, depth)))
            }
        }
    }

    fn objective(&mut self) -> Result<ObjectiveLiteral, SyntaxError> {
        let strong_neg = self.eat(&Tok::Minus);
        let predicate = match self.advance() {
            Tok::Ident(s) => s,
            Tok::Var(s) => {
                self.pos -= 1;
                return Err(self.error(format!("predicate '{s}' must not start with an uppercase letter")));
            }
            other => {
                self.pos -= 1;
                return Err(self.error(format!("expected a literal, found {other}")));
            }
        };
        let mut terms = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                match self.advance() {
                    Tok::Ident(s) => terms.push(Term::Const(s)),
                    Tok::Var(s) => terms.push(Term::Var(s)),
                    other => {
                        self.pos -= 1;
                        return Err(self.error(format!("expected a term, found {other}")));
                    }
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(ObjectiveLiteral::new(Atom::new(predicate, terms), strong_neg))
    }
}

/// Parse program text without structural validation.
pub fn parse_source(text: &str) -> Result<SourceProgram, SyntaxError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.program()
}
