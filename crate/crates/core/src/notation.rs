//! Text syntax for game forms and universes.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := count 'x' factor | factor
//! factor := '~' factor | atom
//! atom   := INT | '-' INT | '*' | '(' expr ')' | '{' list '|' list '}'
//! list   := ε | '.' | item (',' item)*
//! item   := expr | '#'
//! ```
//!
//! `~` is conjugation, `#` a tombstone, `x` repetition and `.` an empty side.
//! Integers are game integers. Whitespace is ignored.
//!
//! Universes are written `D`, `E`, `M` or `cl(<expr>;<expr>;...)`; the
//! oracle also accepts plain additive monoids `mon(<expr>;...)`.

use std::fmt;

use crate::augmented::{aug_conjugate, aug_sum, mk_aug, AugId};
use crate::games::{integer, GameId, MAX_INTEGER};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Star,
    Braces { lefts: Vec<Item>, rights: Vec<Item> },
    Conj(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Repeat(u64, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Expr(Expr),
    Tomb,
}

impl Expr {
    pub fn has_tombstone(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Star => false,
            Expr::Braces { lefts, rights } => lefts.iter().chain(rights).any(|item| match item {
                Item::Tomb => true,
                Item::Expr(e) => e.has_tombstone(),
            }),
            Expr::Conj(e) | Expr::Repeat(_, e) => e.has_tombstone(),
            Expr::Sum(a, b) => a.has_tombstone() || b.has_tombstone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected {
        found: String,
        expected: &'static str,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    UnbalancedBraces,
    TombstoneOutsideBraces,
    DuplicateTombstone,
    NegativeCount,
    IntegerTooLarge,
    NotPlain,
    NotLeftEnd,
    UnknownUniverse(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: ", self.pos)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::UnbalancedBraces => f.write_str("unbalanced braces"),
            ParseErrorKind::TombstoneOutsideBraces => {
                f.write_str("`#` is only allowed inside braces")
            }
            ParseErrorKind::DuplicateTombstone => f.write_str("`#` appears twice on one side"),
            ParseErrorKind::NegativeCount => f.write_str("repetition count must be non-negative"),
            ParseErrorKind::IntegerTooLarge => write!(f, "integer exceeds {MAX_INTEGER}"),
            ParseErrorKind::NotPlain => f.write_str("expected a form without tombstones"),
            ParseErrorKind::NotLeftEnd => f.write_str("universe generators must be Left ends"),
            ParseErrorKind::UnknownUniverse(s) => write!(f, "unknown universe {s:?}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Minus,
    Tilde,
    Plus,
    Star,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Bar,
    Comma,
    Dot,
    Hash,
    Times,
    Semi,
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            other => {
                let s = match other {
                    Tok::Minus => "-",
                    Tok::Tilde => "~",
                    Tok::Plus => "+",
                    Tok::Star => "*",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Bar => "|",
                    Tok::Comma => ",",
                    Tok::Dot => ".",
                    Tok::Hash => "#",
                    Tok::Times => "x",
                    Tok::Semi => ";",
                    Tok::Int(_) | Tok::Ident(_) => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while let Some(&(_, d)) = chars.peek() {
                let Some(digit) = d.to_digit(10) else { break };
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(u64::from(digit)))
                    .ok_or(ParseError {
                        pos,
                        kind: ParseErrorKind::IntegerTooLarge,
                    })?;
                chars.next();
            }
            out.push((pos, Tok::Int(value)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_alphanumeric() {
                    break;
                }
                word.push(d);
                chars.next();
            }
            // `3x{.|2}` lexes `x` as repetition even when glued to the count
            let tok = if word == "x" {
                Tok::Times
            } else {
                Tok::Ident(word)
            };
            out.push((pos, tok));
            continue;
        }
        let tok = match c {
            '-' => Tok::Minus,
            '~' => Tok::Tilde,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '.' | '·' => Tok::Dot,
            '#' => Tok::Hash,
            ';' => Tok::Semi,
            other => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        };
        out.push((pos, tok));
        chars.next();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            end: text.len(),
            depth: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.at + offset).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let kind = match self.peek() {
            None if self.depth > 0 => ParseErrorKind::UnbalancedBraces,
            None => ParseErrorKind::UnexpectedEnd { expected },
            Some(Tok::Hash) => ParseErrorKind::TombstoneOutsideBraces,
            Some(Tok::RBrace) if self.depth == 0 => ParseErrorKind::UnbalancedBraces,
            Some(t) => ParseErrorKind::Unexpected {
                found: t.to_string(),
                expected,
            },
        };
        ParseError {
            pos: self.pos(),
            kind,
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        while self.peek() == Some(&Tok::Plus) {
            self.at += 1;
            let rhs = self.term()?;
            acc = Expr::Sum(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Some(Tok::Int(n)), Some(Tok::Times), _) => {
                let n = *n;
                self.at += 2;
                Ok(Expr::Repeat(n, Box::new(self.factor()?)))
            }
            (Some(Tok::Minus), Some(Tok::Int(_)), Some(Tok::Times)) => Err(ParseError {
                pos: self.pos(),
                kind: ParseErrorKind::NegativeCount,
            }),
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.at += 1;
            return Ok(Expr::Conj(Box::new(self.factor()?)));
        }
        self.atom()
    }

    fn int(&mut self, negative: bool) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(Tok::Int(n)) = self.bump() else {
            unreachable!()
        };
        let n = i64::try_from(n)
            .ok()
            .filter(|&n| n <= MAX_INTEGER)
            .ok_or(ParseError {
                pos,
                kind: ParseErrorKind::IntegerTooLarge,
            })?;
        Ok(Expr::Int(if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => self.int(false),
            Some(Tok::Minus) if matches!(self.peek_at(1), Some(Tok::Int(_))) => {
                self.at += 1;
                self.int(true)
            }
            Some(Tok::Star) => {
                self.at += 1;
                Ok(Expr::Star)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::LBrace) => {
                self.at += 1;
                self.depth += 1;
                let lefts = self.list()?;
                self.expect(Tok::Bar, "`|`")?;
                let rights = self.list()?;
                self.expect(Tok::RBrace, "`}`")?;
                self.depth -= 1;
                Ok(Expr::Braces { lefts, rights })
            }
            _ => Err(self.unexpected("a game expression")),
        }
    }

    fn list(&mut self) -> Result<Vec<Item>, ParseError> {
        match self.peek() {
            Some(Tok::Bar | Tok::RBrace) => return Ok(Vec::new()),
            Some(Tok::Dot) => {
                self.at += 1;
                return Ok(Vec::new());
            }
            _ => {}
        }
        let mut items = Vec::new();
        let mut tomb_at = None;
        loop {
            if self.peek() == Some(&Tok::Hash) {
                if tomb_at.is_some() {
                    return Err(ParseError {
                        pos: self.pos(),
                        kind: ParseErrorKind::DuplicateTombstone,
                    });
                }
                tomb_at = Some(self.pos());
                self.at += 1;
                items.push(Item::Tomb);
            } else {
                items.push(Item::Expr(self.expr()?));
            }
            if self.peek() != Some(&Tok::Comma) {
                return Ok(items);
            }
            self.at += 1;
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.toks.len() {
            return Err(self.unexpected("end of input"));
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Result of elaborating an expression: a plain game when no tombstone
/// occurs, an augmented form otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Game(GameId),
    Aug(AugId),
}

impl Form {
    pub fn aug(self) -> AugId {
        match self {
            Form::Game(g) => g.into(),
            Form::Aug(a) => a,
        }
    }
}

pub fn elaborate(expr: &Expr) -> Form {
    let a = elaborate_aug(expr);
    if expr.has_tombstone() {
        Form::Aug(a)
    } else {
        Form::Game(a.as_game().expect("tombstone-free expression"))
    }
}

fn elaborate_aug(expr: &Expr) -> AugId {
    match expr {
        Expr::Int(n) => integer(*n)
            .expect("integer range checked while parsing")
            .into(),
        Expr::Star => GameId::star().into(),
        Expr::Braces { lefts, rights } => {
            let side = |items: &[Item]| {
                let tomb = items.iter().any(|i| matches!(i, Item::Tomb));
                let opts: Vec<AugId> = items
                    .iter()
                    .filter_map(|i| match i {
                        Item::Expr(e) => Some(elaborate_aug(e)),
                        Item::Tomb => None,
                    })
                    .collect();
                (opts, tomb)
            };
            let (l, lt) = side(lefts);
            let (r, rt) = side(rights);
            mk_aug(l, r, lt, rt)
        }
        Expr::Conj(e) => aug_conjugate(elaborate_aug(e)),
        Expr::Sum(a, b) => aug_sum(elaborate_aug(a), elaborate_aug(b)),
        Expr::Repeat(n, e) => {
            let g = elaborate_aug(e);
            (0..*n).fold(AugId::zero(), |acc, _| aug_sum(acc, g))
        }
    }
}

pub fn parse_form(text: &str) -> Result<Form, ParseError> {
    parse(text).map(|e| elaborate(&e))
}

pub fn parse_aug(text: &str) -> Result<AugId, ParseError> {
    parse_form(text).map(Form::aug)
}

pub fn parse_game(text: &str) -> Result<GameId, ParseError> {
    match parse_form(text)? {
        Form::Game(g) => Ok(g),
        Form::Aug(_) => Err(ParseError {
            pos: 0,
            kind: ParseErrorKind::NotPlain,
        }),
    }
}

/// Canonical text: the outer form always in braces, options in interned
/// order, `#` first on the Left and last on the Right, `.` for an empty
/// side. Nested integers and `*` are abbreviated.
pub fn print(a: AugId) -> String {
    let mut out = String::new();
    write_braces(a, &mut out);
    out
}

pub fn print_game(g: GameId) -> String {
    print(g.into())
}

fn write_braces(a: AugId, out: &mut String) {
    out.push('{');
    let mut first = true;
    let mut sep = |out: &mut String| {
        if !std::mem::take(&mut first) {
            out.push(',');
        }
    };
    if a.left_tomb() {
        sep(out);
        out.push('#');
    }
    for l in a.lefts() {
        sep(out);
        write_nested(l, out);
    }
    if first {
        out.push('.');
    }
    out.push('|');
    let mut first = true;
    for r in a.rights() {
        if !std::mem::take(&mut first) {
            out.push(',');
        }
        write_nested(r, out);
    }
    if a.right_tomb() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push('#');
    }
    if first {
        out.push('.');
    }
    out.push('}');
}

fn write_nested(a: AugId, out: &mut String) {
    if let Some(g) = a.as_game() {
        if g == GameId::star() {
            out.push('*');
            return;
        }
        if let Some(n) = g.as_integer() {
            if n < 0 {
                out.push('~');
            }
            out.push_str(&n.abs().to_string());
            return;
        }
    }
    write_braces(a, out);
}

/// Parsed universe or monoid description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniverseText {
    Dicot,
    DeadEnding,
    FullMisere,
    EndClosure(Vec<GameId>),
    Monoid(Vec<GameId>),
}

pub fn parse_universe(text: &str) -> Result<UniverseText, ParseError> {
    let mut p = Parser::new(text)?;
    let pos = p.pos();
    let name = match p.bump() {
        Some(Tok::Ident(s)) => s,
        Some(t) => {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::Unexpected {
                    found: t.to_string(),
                    expected: "a universe",
                },
            })
        }
        None => {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::UnexpectedEnd {
                    expected: "a universe",
                },
            })
        }
    };
    let u = match name.as_str() {
        "D" => UniverseText::Dicot,
        "E" => UniverseText::DeadEnding,
        "M" => UniverseText::FullMisere,
        "cl" | "mon" => {
            p.expect(Tok::LParen, "`(`")?;
            let mut gens = Vec::new();
            if p.peek() != Some(&Tok::RParen) {
                loop {
                    let at = p.pos();
                    let e = p.expr()?;
                    if e.has_tombstone() {
                        return Err(ParseError {
                            pos: at,
                            kind: ParseErrorKind::NotPlain,
                        });
                    }
                    let Form::Game(g) = elaborate(&e) else {
                        unreachable!()
                    };
                    if name == "cl" && !g.is_left_end() {
                        return Err(ParseError {
                            pos: at,
                            kind: ParseErrorKind::NotLeftEnd,
                        });
                    }
                    gens.push(g);
                    if p.peek() != Some(&Tok::Semi) {
                        break;
                    }
                    p.at += 1;
                }
            }
            p.expect(Tok::RParen, "`)`")?;
            if name == "cl" {
                UniverseText::EndClosure(gens)
            } else {
                UniverseText::Monoid(gens)
            }
        }
        _ => {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::UnknownUniverse(name),
            })
        }
    };
    p.finish()?;
    Ok(u)
}
