//! Abstract syntax of the quantum arrow calculus.
//!
//! The language has two sorts. [`Term`]s are the simply-typed lambda
//! calculus over booleans and pairs, extended with the vector monad
//! (`[M]`, `let x <- M in N`, `+`, `-`, scaling, `mzero`) and with arrow
//! abstraction `\•x. Q`. [`Command`]s are the bodies of arrow abstractions:
//! arrow application `L • M`, unit `[M]`, command `let`, `meas` and `trL`.
//!
//! The surface grammar is handled by [`parse_program`], [`parse_term`] and
//! friends; [`pretty`] prints terms back in a form the parser accepts.

mod lexer;
mod parser;
pub mod pretty;
mod subst;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

pub use lexer::{is_keyword, lex, Token, TokenKind};
pub use parser::{parse_command, parse_program, parse_term, parse_type, ParseError};
pub use subst::{
    alpha_eq, alpha_eq_command, alpha_eq_term, free_vars_command, free_vars_term, fresh_name,
    subst_command, subst_command_many, subst_term, subst_term_many,
};

/// Source position, 1-based. `Pos::default()` (0:0) marks synthesized nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub fn new(line: u32, col: u32) -> Self {
        Pos { line, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Types of the calculus.
///
/// `Meta` is an inference variable. It only exists while the typechecker is
/// solving constraints and never escapes a successful check.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    Bool,
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Fun(Box<TypeExpr>, Box<TypeExpr>),
    Vec(Box<TypeExpr>),
    Lin(Box<TypeExpr>, Box<TypeExpr>),
    Dens(Box<TypeExpr>),
    Super(Box<TypeExpr>, Box<TypeExpr>),
    Meta(u32),
}

impl TypeExpr {
    pub fn prod(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn fun(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Fun(Box::new(a), Box::new(b))
    }

    pub fn vec(a: TypeExpr) -> Self {
        TypeExpr::Vec(Box::new(a))
    }

    pub fn lin(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Lin(Box::new(a), Box::new(b))
    }

    pub fn dens(a: TypeExpr) -> Self {
        TypeExpr::Dens(Box::new(a))
    }

    pub fn sup(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Super(Box::new(a), Box::new(b))
    }

    /// Right-nested tuple of `n >= 1` booleans: `Bool`, `(Bool, Bool)`,
    /// `(Bool, (Bool, Bool))`, ...
    pub fn bools(n: usize) -> Self {
        assert!(n >= 1);
        let mut ty = TypeExpr::Bool;
        for _ in 1..n {
            ty = TypeExpr::prod(TypeExpr::Bool, ty);
        }
        ty
    }

    /// Classical types are the finite bases: `Bool` and products of them.
    pub fn is_classical(&self) -> bool {
        match self {
            TypeExpr::Bool => true,
            TypeExpr::Prod(a, b) => a.is_classical() && b.is_classical(),
            _ => false,
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            TypeExpr::Meta(_) => true,
            TypeExpr::Bool => false,
            TypeExpr::Vec(a) | TypeExpr::Dens(a) => a.has_meta(),
            TypeExpr::Prod(a, b)
            | TypeExpr::Fun(a, b)
            | TypeExpr::Lin(a, b)
            | TypeExpr::Super(a, b) => a.has_meta() || b.has_meta(),
        }
    }

    /// Unfolds `Lin A B` into its definition `A -> Vec B`, everywhere.
    pub fn normalize(&self) -> TypeExpr {
        match self {
            TypeExpr::Bool | TypeExpr::Meta(_) => self.clone(),
            TypeExpr::Prod(a, b) => TypeExpr::prod(a.normalize(), b.normalize()),
            TypeExpr::Fun(a, b) => TypeExpr::fun(a.normalize(), b.normalize()),
            TypeExpr::Lin(a, b) => TypeExpr::fun(a.normalize(), TypeExpr::vec(b.normalize())),
            TypeExpr::Vec(a) => TypeExpr::vec(a.normalize()),
            TypeExpr::Dens(a) => TypeExpr::dens(a.normalize()),
            TypeExpr::Super(a, b) => TypeExpr::sup(a.normalize(), b.normalize()),
        }
    }

    /// Equality up to the `Lin` synonym.
    pub fn equiv(&self, other: &TypeExpr) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn mentions_super(&self) -> bool {
        match self {
            TypeExpr::Super(..) => true,
            TypeExpr::Bool | TypeExpr::Meta(_) => false,
            TypeExpr::Vec(a) | TypeExpr::Dens(a) => a.mentions_super(),
            TypeExpr::Prod(a, b) | TypeExpr::Fun(a, b) | TypeExpr::Lin(a, b) => {
                a.mentions_super() || b.mentions_super()
            }
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, TypeExpr::Bool | TypeExpr::Prod(..) | TypeExpr::Meta(_))
    }

    fn fmt_arg(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Bool => write!(f, "Bool"),
            TypeExpr::Meta(n) => write!(f, "?{n}"),
            TypeExpr::Prod(a, b) => {
                // right-nested tuples print flat, as the parser reads them
                write!(f, "({a}")?;
                let mut rest: &TypeExpr = b;
                while let TypeExpr::Prod(x, y) = rest {
                    write!(f, ", {x}")?;
                    rest = y;
                }
                write!(f, ", {rest})")
            }
            TypeExpr::Fun(a, b) => {
                if matches!(**a, TypeExpr::Fun(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            TypeExpr::Vec(a) => {
                write!(f, "Vec ")?;
                a.fmt_arg(f)
            }
            TypeExpr::Dens(a) => {
                write!(f, "Dens ")?;
                a.fmt_arg(f)
            }
            TypeExpr::Lin(a, b) => {
                write!(f, "Lin ")?;
                a.fmt_arg(f)?;
                write!(f, " ")?;
                b.fmt_arg(f)
            }
            TypeExpr::Super(a, b) => {
                write!(f, "Super ")?;
                a.fmt_arg(f)?;
                write!(f, " ")?;
                b.fmt_arg(f)
            }
        }
    }
}

/// Binder patterns: a variable or a pair of patterns. Triples are
/// right-nested pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(String),
    Pair(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    pub fn var(name: impl Into<String>) -> Self {
        Pattern::Var(name.into())
    }

    pub fn pair(a: Pattern, b: Pattern) -> Self {
        Pattern::Pair(Box::new(a), Box::new(b))
    }

    /// Bound variables, left to right.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Pattern::Var(x) => out.push(x),
            Pattern::Pair(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn binds(&self, name: &str) -> bool {
        match self {
            Pattern::Var(x) => x == name,
            Pattern::Pair(a, b) => a.binds(name) || b.binds(name),
        }
    }

    /// The pattern read back as a term: `(x, y)` becomes the pair term.
    pub fn to_term(&self) -> Term {
        match self {
            Pattern::Var(x) => Term::var(x.clone()),
            Pattern::Pair(a, b) => Term::pair(a.to_term(), b.to_term()),
        }
    }

    /// Each bound variable paired with the projection of `scrutinee` that
    /// it names, e.g. `(x, y)` against `M` gives `x ↦ fst M`, `y ↦ snd M`.
    pub fn projections(&self, scrutinee: &Term) -> Vec<(String, Term)> {
        let mut out = Vec::new();
        self.collect_projections(scrutinee.clone(), &mut out);
        out
    }

    fn collect_projections(&self, at: Term, out: &mut Vec<(String, Term)>) {
        match self {
            Pattern::Var(x) => out.push((x.clone(), at)),
            Pattern::Pair(a, b) => {
                // project a literal pair directly
                if let TermKind::Pair(l, r) = &at.kind {
                    a.collect_projections((**l).clone(), out);
                    b.collect_projections((**r).clone(), out);
                } else {
                    a.collect_projections(Term::fst(at.clone()), out);
                    b.collect_projections(Term::snd(at), out);
                }
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(x) => write!(f, "{x}"),
            Pattern::Pair(a, b) => {
                write!(f, "({a}")?;
                let mut rest: &Pattern = b;
                while let Pattern::Pair(x, y) = rest {
                    write!(f, ", {x}")?;
                    rest = y;
                }
                write!(f, ", {rest})")
            }
        }
    }
}

/// Complex scalar literal used by `c * M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar(pub Complex64);

impl Scalar {
    pub const INV_SQRT2: Scalar = Scalar(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));

    pub fn real(re: f64) -> Self {
        Scalar(Complex64::new(re, 0.0))
    }

    pub fn new(re: f64, im: f64) -> Self {
        Scalar(Complex64::new(re, im))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if *self == Scalar::INV_SQRT2 {
            write!(f, "invsqrt2")
        } else if im == 0.0 {
            write!(f, "{re}")
        } else if re == 0.0 {
            write!(f, "{im}i")
        } else if im < 0.0 {
            write!(f, "({re}-{}i)", -im)
        } else {
            write!(f, "({re}+{im}i)")
        }
    }
}

/// A term with its source position. Equality ignores positions.
#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    Var(String),
    Bool(bool),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    /// `\p. N`, optionally annotated with the parameter type.
    Lam(Pattern, Option<TypeExpr>, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// Classical `let p = M in N`.
    Let(Pattern, Box<Term>, Box<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    /// Structural equality on classical values, `M == N`.
    Eq(Box<Term>, Box<Term>),
    /// Monadic unit `[M] : Vec A`.
    VecUnit(Box<Term>),
    /// Monadic bind `let p <- M in N`.
    VecLet(Pattern, Box<Term>, Box<Term>),
    VecAdd(Box<Term>, Box<Term>),
    VecSub(Box<Term>, Box<Term>),
    VecScale(Scalar, Box<Term>),
    MZero,
    /// Arrow abstraction `\•p. Q`.
    ArrowAbs(Pattern, Option<TypeExpr>, Box<Command>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug)]
pub struct Command {
    pub kind: CommandKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CommandKind {
    /// Arrow application `L • M`; `L` never mentions arrow-bound variables.
    App(Box<Term>, Box<Term>),
    /// Arrow unit `[M]`.
    Unit(Box<Term>),
    Let(Pattern, Box<Command>, Box<Command>),
    Meas(Box<Term>),
    TrL(Box<Term>),
}

impl PartialEq for Command {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Term {
    pub fn new(kind: TermKind) -> Self {
        Term { kind, pos: Pos::default() }
    }

    pub fn at(kind: TermKind, pos: Pos) -> Self {
        Term { kind, pos }
    }

    pub fn var(x: impl Into<String>) -> Self {
        Term::new(TermKind::Var(x.into()))
    }

    pub fn bool(b: bool) -> Self {
        Term::new(TermKind::Bool(b))
    }

    pub fn pair(a: Term, b: Term) -> Self {
        Term::new(TermKind::Pair(Box::new(a), Box::new(b)))
    }

    pub fn fst(a: Term) -> Self {
        Term::new(TermKind::Fst(Box::new(a)))
    }

    pub fn snd(a: Term) -> Self {
        Term::new(TermKind::Snd(Box::new(a)))
    }

    pub fn lam(p: Pattern, body: Term) -> Self {
        Term::new(TermKind::Lam(p, None, Box::new(body)))
    }

    pub fn lam_typed(p: Pattern, ty: TypeExpr, body: Term) -> Self {
        Term::new(TermKind::Lam(p, Some(ty), Box::new(body)))
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::new(TermKind::App(Box::new(f), Box::new(a)))
    }

    pub fn let_(p: Pattern, m: Term, n: Term) -> Self {
        Term::new(TermKind::Let(p, Box::new(m), Box::new(n)))
    }

    pub fn if_(c: Term, t: Term, e: Term) -> Self {
        Term::new(TermKind::If(Box::new(c), Box::new(t), Box::new(e)))
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Term::new(TermKind::Eq(Box::new(a), Box::new(b)))
    }

    pub fn vunit(a: Term) -> Self {
        Term::new(TermKind::VecUnit(Box::new(a)))
    }

    pub fn vlet(p: Pattern, m: Term, n: Term) -> Self {
        Term::new(TermKind::VecLet(p, Box::new(m), Box::new(n)))
    }

    pub fn vadd(a: Term, b: Term) -> Self {
        Term::new(TermKind::VecAdd(Box::new(a), Box::new(b)))
    }

    pub fn vsub(a: Term, b: Term) -> Self {
        Term::new(TermKind::VecSub(Box::new(a), Box::new(b)))
    }

    pub fn vscale(s: Scalar, a: Term) -> Self {
        Term::new(TermKind::VecScale(s, Box::new(a)))
    }

    pub fn mzero() -> Self {
        Term::new(TermKind::MZero)
    }

    pub fn arrow(p: Pattern, body: Command) -> Self {
        Term::new(TermKind::ArrowAbs(p, None, Box::new(body)))
    }

    pub fn arrow_typed(p: Pattern, ty: TypeExpr, body: Command) -> Self {
        Term::new(TermKind::ArrowAbs(p, Some(ty), Box::new(body)))
    }

    /// Number of AST nodes, commands included.
    pub fn size(&self) -> usize {
        1 + match &self.kind {
            TermKind::Var(_) | TermKind::Bool(_) | TermKind::MZero => 0,
            TermKind::Fst(a)
            | TermKind::Snd(a)
            | TermKind::Lam(_, _, a)
            | TermKind::VecUnit(a)
            | TermKind::VecScale(_, a) => a.size(),
            TermKind::Pair(a, b)
            | TermKind::App(a, b)
            | TermKind::Let(_, a, b)
            | TermKind::Eq(a, b)
            | TermKind::VecLet(_, a, b)
            | TermKind::VecAdd(a, b)
            | TermKind::VecSub(a, b) => a.size() + b.size(),
            TermKind::If(a, b, c) => a.size() + b.size() + c.size(),
            TermKind::ArrowAbs(_, _, q) => q.size(),
        }
    }
}

impl Command {
    pub fn new(kind: CommandKind) -> Self {
        Command { kind, pos: Pos::default() }
    }

    pub fn at(kind: CommandKind, pos: Pos) -> Self {
        Command { kind, pos }
    }

    pub fn app(l: Term, m: Term) -> Self {
        Command::new(CommandKind::App(Box::new(l), Box::new(m)))
    }

    pub fn unit(m: Term) -> Self {
        Command::new(CommandKind::Unit(Box::new(m)))
    }

    pub fn let_(p: Pattern, bound: Command, body: Command) -> Self {
        Command::new(CommandKind::Let(p, Box::new(bound), Box::new(body)))
    }

    pub fn meas(m: Term) -> Self {
        Command::new(CommandKind::Meas(Box::new(m)))
    }

    pub fn trl(m: Term) -> Self {
        Command::new(CommandKind::TrL(Box::new(m)))
    }

    pub fn size(&self) -> usize {
        1 + match &self.kind {
            CommandKind::App(l, m) => l.size() + m.size(),
            CommandKind::Unit(m) | CommandKind::Meas(m) | CommandKind::TrL(m) => m.size(),
            CommandKind::Let(_, p, q) => p.size() + q.size(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty::term(self))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty::command(self))
    }
}

/// Either syntactic sort. The rewriter and `alpha_eq` work over both.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Term(Term),
    Command(Command),
}

impl Expr {
    pub fn size(&self) -> usize {
        match self {
            Expr::Term(t) => t.size(),
            Expr::Command(c) => c.size(),
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Expr::Term(t) => Some(t),
            Expr::Command(_) => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => write!(f, "{t}"),
            Expr::Command(c) => write!(f, "{c}"),
        }
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}

impl From<Command> for Expr {
    fn from(c: Command) -> Self {
        Expr::Command(c)
    }
}

/// One `name [: type] = term` clause.
#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub name: String,
    pub ty: Option<TypeExpr>,
    pub body: Term,
    pub pos: Pos,
}

/// Definitions in source order. Each may only mention earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub defs: Vec<Definition>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.iter().find(|d| d.name == name)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.defs {
            match &d.ty {
                Some(ty) => writeln!(f, "{} : {} = {}", d.name, ty, d.body)?,
                None => writeln!(f, "{} = {}", d.name, d.body)?,
            }
        }
        Ok(())
    }
}
