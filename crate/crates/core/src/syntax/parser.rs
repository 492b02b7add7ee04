//! Recursive-descent parser for the surface grammar.
//!
//! A program is a sequence of `name [: type] = term` definitions. A
//! definition starts at column 1; continuation lines are indented.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::lexer::{lex, Token, TokenKind};
use super::{Command, CommandKind, Definition, Pattern, Pos, Program, Scalar, Term, TermKind, TypeExpr};

#[derive(Clone, Debug, Error, PartialEq)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, expected: Vec<String>, message: String) -> Self {
        ParseError { pos, expected, message }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expected.len() {
            0 => write!(f, "{}", self.message),
            1 => write!(f, "expected {}, {}", self.expected[0], self.message),
            _ => write!(f, "expected one of {}, {}", self.expected.join(", "), self.message),
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    toks: Vec<Token>,
    idx: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, idx: 0 }
    }

    fn peek(&self) -> &TokenKind {
        &self.toks[self.idx].kind
    }

    fn peek_at(&self, n: usize) -> &TokenKind {
        let i = (self.idx + n).min(self.toks.len() - 1);
        &self.toks[i].kind
    }

    fn pos(&self) -> Pos {
        self.toks[self.idx].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.idx].clone();
        if self.idx < self.toks.len() - 1 {
            self.idx += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.pos(),
            expected.iter().map(|s| s.to_string()).collect(),
            format!("found {}", self.peek()),
        )
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if *self.peek() == kind {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&kind.to_string()]))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of definition"]))
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        match self.peek().clone() {
            TokenKind::Ident(x) => {
                self.bump();
                Ok((x, pos))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<TypeExpr> {
        let lhs = self.ty_app()?;
        if self.eat(&TokenKind::RArrow) {
            let rhs = self.ty()?;
            Ok(TypeExpr::fun(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_app(&mut self) -> PResult<TypeExpr> {
        match self.peek() {
            TokenKind::TyVec => {
                self.bump();
                Ok(TypeExpr::vec(self.ty_atom()?))
            }
            TokenKind::TyDens => {
                self.bump();
                Ok(TypeExpr::dens(self.ty_atom()?))
            }
            TokenKind::TyLin => {
                self.bump();
                let a = self.ty_atom()?;
                let b = self.ty_atom()?;
                Ok(TypeExpr::lin(a, b))
            }
            TokenKind::TySuper => {
                self.bump();
                let a = self.ty_atom()?;
                let b = self.ty_atom()?;
                Ok(TypeExpr::sup(a, b))
            }
            _ => self.ty_atom(),
        }
    }

    fn ty_atom(&mut self) -> PResult<TypeExpr> {
        match self.peek() {
            TokenKind::TyBool => {
                self.bump();
                Ok(TypeExpr::Bool)
            }
            TokenKind::LParen => {
                self.bump();
                let mut items = vec![self.ty()?];
                while self.eat(&TokenKind::Comma) {
                    items.push(self.ty()?);
                }
                self.expect(TokenKind::RParen)?;
                Ok(right_nest(items, TypeExpr::prod))
            }
            _ => Err(self.unexpected(&["`Bool`", "`(`"])),
        }
    }

    // ---- patterns ----

    fn pattern(&mut self) -> PResult<Pattern> {
        let pos = self.pos();
        let p = self.pattern_inner()?;
        let mut seen = HashSet::new();
        for v in p.vars() {
            if !seen.insert(v) {
                return Err(ParseError::new(pos, vec![], format!("variable `{v}` bound twice in pattern")));
            }
        }
        Ok(p)
    }

    fn pattern_inner(&mut self) -> PResult<Pattern> {
        match self.peek() {
            TokenKind::Ident(_) => Ok(Pattern::Var(self.ident()?.0)),
            TokenKind::LParen => {
                self.bump();
                let mut items = vec![self.pattern_inner()?];
                while self.eat(&TokenKind::Comma) {
                    items.push(self.pattern_inner()?);
                }
                self.expect(TokenKind::RParen)?;
                Ok(right_nest(items, Pattern::pair))
            }
            _ => Err(self.unexpected(&["identifier", "`(`"])),
        }
    }

    fn binder(&mut self) -> PResult<(Pattern, Option<TypeExpr>)> {
        let p = self.pattern()?;
        let ty = if self.eat(&TokenKind::Colon) { Some(self.ty()?) } else { None };
        self.expect(TokenKind::Dot)?;
        Ok((p, ty))
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek() {
            TokenKind::Lambda => {
                self.bump();
                let (p, ty) = self.binder()?;
                let body = self.term()?;
                Ok(Term::at(TermKind::Lam(p, ty, Box::new(body)), pos))
            }
            TokenKind::ArrowLambda => {
                self.bump();
                let (p, ty) = self.binder()?;
                let body = self.command()?;
                Ok(Term::at(TermKind::ArrowAbs(p, ty, Box::new(body)), pos))
            }
            TokenKind::Let => {
                self.bump();
                let p = self.pattern()?;
                let monadic = match self.peek() {
                    TokenKind::Equals => false,
                    TokenKind::LArrow => true,
                    _ => return Err(self.unexpected(&["`=`", "`<-`"])),
                };
                self.bump();
                let bound = self.term()?;
                self.expect(TokenKind::In)?;
                let body = self.term()?;
                let kind = if monadic {
                    TermKind::VecLet(p, Box::new(bound), Box::new(body))
                } else {
                    TermKind::Let(p, Box::new(bound), Box::new(body))
                };
                Ok(Term::at(kind, pos))
            }
            TokenKind::If => {
                self.bump();
                let c = self.term()?;
                self.expect(TokenKind::Then)?;
                let t = self.term()?;
                self.expect(TokenKind::Else)?;
                let e = self.term()?;
                Ok(Term::at(TermKind::If(Box::new(c), Box::new(t), Box::new(e)), pos))
            }
            _ => self.eq_expr(),
        }
    }

    fn eq_expr(&mut self) -> PResult<Term> {
        let pos = self.pos();
        let lhs = self.sum()?;
        if self.eat(&TokenKind::EqEq) {
            let rhs = self.sum()?;
            Ok(Term::at(TermKind::Eq(Box::new(lhs), Box::new(rhs)), pos))
        } else {
            Ok(lhs)
        }
    }

    fn sum(&mut self) -> PResult<Term> {
        let pos = self.pos();
        let mut acc = self.scaled()?;
        loop {
            let kind = match self.peek() {
                TokenKind::Plus => {
                    self.bump();
                    let rhs = self.scaled()?;
                    TermKind::VecAdd(Box::new(acc), Box::new(rhs))
                }
                TokenKind::Minus => {
                    self.bump();
                    let rhs = self.scaled()?;
                    TermKind::VecSub(Box::new(acc), Box::new(rhs))
                }
                _ => return Ok(acc),
            };
            acc = Term::at(kind, pos);
        }
    }

    fn scalar(&mut self) -> PResult<Option<Scalar>> {
        let start = self.idx;
        let negate = |s: Scalar, neg: bool| if neg { Scalar(-s.0) } else { s };
        let neg = matches!(self.peek(), TokenKind::Minus)
            && matches!(self.peek_at(1), TokenKind::Num(_) | TokenKind::Imag(_) | TokenKind::InvSqrt2);
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            TokenKind::Num(x) => {
                self.bump();
                return Ok(Some(negate(Scalar::real(x), neg)));
            }
            TokenKind::Imag(y) => {
                self.bump();
                return Ok(Some(negate(Scalar::new(0.0, y), neg)));
            }
            TokenKind::InvSqrt2 => {
                self.bump();
                return Ok(Some(negate(Scalar::INV_SQRT2, neg)));
            }
            _ => {}
        }
        // ( [-] re (+|-) im i )
        if *self.peek() == TokenKind::LParen {
            self.bump();
            let re_neg = self.eat(&TokenKind::Minus);
            if let TokenKind::Num(re) = self.peek().clone() {
                self.bump();
                let im_neg = match self.peek() {
                    TokenKind::Plus => false,
                    TokenKind::Minus => true,
                    _ => {
                        self.idx = start;
                        return Ok(None);
                    }
                };
                self.bump();
                if let TokenKind::Imag(im) = self.peek().clone() {
                    self.bump();
                    if self.eat(&TokenKind::RParen) {
                        let re = if re_neg { -re } else { re };
                        let im = if im_neg { -im } else { im };
                        return Ok(Some(Scalar::new(re, im)));
                    }
                }
            }
        }
        self.idx = start;
        Ok(None)
    }

    fn scaled(&mut self) -> PResult<Term> {
        let pos = self.pos();
        if let Some(s) = self.scalar()? {
            self.expect(TokenKind::Star)?;
            let body = self.scaled()?;
            return Ok(Term::at(TermKind::VecScale(s, Box::new(body)), pos));
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            TokenKind::Ident(_)
                | TokenKind::True
                | TokenKind::False
                | TokenKind::MZero
                | TokenKind::LBracket
                | TokenKind::LParen
        )
    }

    fn app(&mut self) -> PResult<Term> {
        let pos = self.pos();
        let mut acc = match self.peek() {
            TokenKind::Fst => {
                self.bump();
                Term::at(TermKind::Fst(Box::new(self.atom()?)), pos)
            }
            TokenKind::Snd => {
                self.bump();
                Term::at(TermKind::Snd(Box::new(self.atom()?)), pos)
            }
            _ => self.atom()?,
        };
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = Term::at(TermKind::App(Box::new(acc), Box::new(arg)), pos);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            TokenKind::Ident(x) => {
                self.bump();
                Ok(Term::at(TermKind::Var(x), pos))
            }
            TokenKind::True => {
                self.bump();
                Ok(Term::at(TermKind::Bool(true), pos))
            }
            TokenKind::False => {
                self.bump();
                Ok(Term::at(TermKind::Bool(false), pos))
            }
            TokenKind::MZero => {
                self.bump();
                Ok(Term::at(TermKind::MZero, pos))
            }
            TokenKind::LBracket => {
                self.bump();
                let inner = self.term()?;
                self.expect(TokenKind::RBracket)?;
                Ok(Term::at(TermKind::VecUnit(Box::new(inner)), pos))
            }
            TokenKind::LParen => {
                self.bump();
                let mut items = vec![self.term()?];
                while self.eat(&TokenKind::Comma) {
                    items.push(self.term()?);
                }
                self.expect(TokenKind::RParen)?;
                if items.len() == 1 {
                    let mut t = items.pop().unwrap();
                    t.pos = pos;
                    Ok(t)
                } else {
                    let mut t = right_nest(items, Term::pair);
                    t.pos = pos;
                    Ok(t)
                }
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }

    // ---- commands ----

    fn command(&mut self) -> PResult<Command> {
        let pos = self.pos();
        match self.peek() {
            TokenKind::Let => {
                self.bump();
                let p = self.pattern()?;
                self.expect(TokenKind::Equals)?;
                let bound = self.command()?;
                self.expect(TokenKind::In)?;
                let body = self.command()?;
                Ok(Command::at(CommandKind::Let(p, Box::new(bound), Box::new(body)), pos))
            }
            TokenKind::LBracket => {
                self.bump();
                let inner = self.term()?;
                self.expect(TokenKind::RBracket)?;
                Ok(Command::at(CommandKind::Unit(Box::new(inner)), pos))
            }
            TokenKind::Meas | TokenKind::TrL => {
                let is_meas = *self.peek() == TokenKind::Meas;
                self.bump();
                self.eat(&TokenKind::Bullet);
                let arg = self.app()?;
                let kind = if is_meas {
                    CommandKind::Meas(Box::new(arg))
                } else {
                    CommandKind::TrL(Box::new(arg))
                };
                Ok(Command::at(kind, pos))
            }
            TokenKind::LParen => {
                // a parenthesised command, unless it is the arrow of `L • M`
                let start = self.idx;
                self.bump();
                if let Ok(mut inner) = self.command() {
                    if self.eat(&TokenKind::RParen) && *self.peek() != TokenKind::Bullet {
                        inner.pos = pos;
                        return Ok(inner);
                    }
                }
                self.idx = start;
                self.arrow_app()
            }
            _ => self.arrow_app(),
        }
    }

    fn arrow_app(&mut self) -> PResult<Command> {
        let pos = self.pos();
        let arrow = self.app()?;
        if *self.peek() != TokenKind::Bullet {
            return Err(self.unexpected(&["`•`"]));
        }
        self.bump();
        let arg = self.term()?;
        Ok(Command::at(CommandKind::App(Box::new(arrow), Box::new(arg)), pos))
    }

    // ---- definitions ----

    fn definition(&mut self) -> PResult<Definition> {
        let (name, pos) = self.ident()?;
        let ty = if self.eat(&TokenKind::Colon) { Some(self.ty()?) } else { None };
        self.expect(TokenKind::Equals)?;
        let body = self.term()?;
        self.expect_eof()?;
        Ok(Definition { name, ty, body, pos })
    }
}

fn right_nest<T>(mut items: Vec<T>, pair: impl Fn(T, T) -> T) -> T {
    let mut acc = items.pop().expect("non-empty");
    while let Some(prev) = items.pop() {
        acc = pair(prev, acc);
    }
    acc
}

/// Parses a whole `.qarr` source file.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    let eof = toks.last().cloned().expect("lexer always emits Eof");

    // split at tokens in column 1
    let mut groups: Vec<Vec<Token>> = Vec::new();
    for tok in toks.into_iter().filter(|t| t.kind != TokenKind::Eof) {
        if tok.pos.col == 1 || groups.is_empty() {
            if tok.pos.col != 1 {
                return Err(ParseError::new(tok.pos, vec![], "definitions must start in column 1".into()));
            }
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(tok);
    }

    let mut defs: Vec<Definition> = Vec::new();
    for i in 0..groups.len() {
        let end_pos = groups.get(i + 1).map(|g| g[0].pos).unwrap_or(eof.pos);
        let mut group = std::mem::take(&mut groups[i]);
        group.push(Token { kind: TokenKind::Eof, pos: end_pos });
        let def = Parser::new(group).definition()?;
        if defs.iter().any(|d| d.name == def.name) {
            return Err(ParseError::new(def.pos, vec![], format!("duplicate definition `{}`", def.name)));
        }
        defs.push(def);
    }
    Ok(Program { defs })
}

/// Parses a single term, ignoring layout.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(lex(src)?);
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a single command, ignoring layout.
pub fn parse_command(src: &str) -> Result<Command, ParseError> {
    let mut p = Parser::new(lex(src)?);
    let c = p.command()?;
    p.expect_eof()?;
    Ok(c)
}

pub fn parse_type(src: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(lex(src)?);
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}
