use crate::syntax::{Command, CommandKind, Pattern, Pos, Scalar, Term, TermKind, TypeExpr};

/// How a command unit `[M]` lifts its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitMode {
    /// `M : A`, lifted with `arr`.
    Classical,
    /// `M : Vec A`, lifted as a linear map.
    Quantum,
}

/// A term annotated with its type. Children appear in the same order as
/// in [`Term`], so AST paths carry over unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct TTerm {
    pub kind: TTermKind,
    pub ty: TypeExpr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TTermKind {
    Var(String),
    Bool(bool),
    Pair(Box<TTerm>, Box<TTerm>),
    Fst(Box<TTerm>),
    Snd(Box<TTerm>),
    /// Pattern and parameter type.
    Lam(Pattern, TypeExpr, Box<TTerm>),
    App(Box<TTerm>, Box<TTerm>),
    Let(Pattern, Box<TTerm>, Box<TTerm>),
    If(Box<TTerm>, Box<TTerm>, Box<TTerm>),
    Eq(Box<TTerm>, Box<TTerm>),
    VecUnit(Box<TTerm>),
    VecLet(Pattern, Box<TTerm>, Box<TTerm>),
    VecAdd(Box<TTerm>, Box<TTerm>),
    VecSub(Box<TTerm>, Box<TTerm>),
    VecScale(Scalar, Box<TTerm>),
    MZero,
    /// Pattern, input type and body.
    ArrowAbs(Pattern, TypeExpr, Box<TCommand>),
}

/// A command annotated with `A` from `P ! Dens A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TCommand {
    pub kind: TCommandKind,
    pub ty: TypeExpr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TCommandKind {
    App(Box<TTerm>, Box<TTerm>),
    Unit(Box<TTerm>, UnitMode),
    Let(Pattern, Box<TCommand>, Box<TCommand>),
    Meas(Box<TTerm>),
    TrL(Box<TTerm>),
}

impl TTerm {
    pub(crate) fn new(kind: TTermKind, ty: TypeExpr, pos: Pos) -> Self {
        TTerm { kind, ty, pos }
    }

    /// Drops types, keeping binder annotations on abstractions.
    pub fn erase(&self) -> Term {
        let b = |t: &TTerm| Box::new(t.erase());
        let kind = match &self.kind {
            TTermKind::Var(x) => TermKind::Var(x.clone()),
            TTermKind::Bool(v) => TermKind::Bool(*v),
            TTermKind::Pair(x, y) => TermKind::Pair(b(x), b(y)),
            TTermKind::Fst(x) => TermKind::Fst(b(x)),
            TTermKind::Snd(x) => TermKind::Snd(b(x)),
            TTermKind::Lam(p, ty, body) => TermKind::Lam(p.clone(), Some(ty.clone()), b(body)),
            TTermKind::App(x, y) => TermKind::App(b(x), b(y)),
            TTermKind::Let(p, x, y) => TermKind::Let(p.clone(), b(x), b(y)),
            TTermKind::If(x, y, z) => TermKind::If(b(x), b(y), b(z)),
            TTermKind::Eq(x, y) => TermKind::Eq(b(x), b(y)),
            TTermKind::VecUnit(x) => TermKind::VecUnit(b(x)),
            TTermKind::VecLet(p, x, y) => TermKind::VecLet(p.clone(), b(x), b(y)),
            TTermKind::VecAdd(x, y) => TermKind::VecAdd(b(x), b(y)),
            TTermKind::VecSub(x, y) => TermKind::VecSub(b(x), b(y)),
            TTermKind::VecScale(s, x) => TermKind::VecScale(*s, b(x)),
            TTermKind::MZero => TermKind::MZero,
            TTermKind::ArrowAbs(p, ty, body) => TermKind::ArrowAbs(p.clone(), Some(ty.clone()), Box::new(body.erase())),
        };
        Term::at(kind, self.pos)
    }

    /// Applies `f` to every type in the tree.
    pub(crate) fn map_types(&mut self, f: &mut impl FnMut(&TypeExpr) -> TypeExpr) {
        self.ty = f(&self.ty);
        match &mut self.kind {
            TTermKind::Var(_) | TTermKind::Bool(_) | TTermKind::MZero => {}
            TTermKind::Fst(x) | TTermKind::Snd(x) | TTermKind::VecUnit(x) | TTermKind::VecScale(_, x) => {
                x.map_types(f)
            }
            TTermKind::Lam(_, ty, x) => {
                *ty = f(ty);
                x.map_types(f);
            }
            TTermKind::Pair(x, y)
            | TTermKind::App(x, y)
            | TTermKind::Let(_, x, y)
            | TTermKind::Eq(x, y)
            | TTermKind::VecLet(_, x, y)
            | TTermKind::VecAdd(x, y)
            | TTermKind::VecSub(x, y) => {
                x.map_types(f);
                y.map_types(f);
            }
            TTermKind::If(x, y, z) => {
                x.map_types(f);
                y.map_types(f);
                z.map_types(f);
            }
            TTermKind::ArrowAbs(_, ty, body) => {
                *ty = f(ty);
                body.map_types(f);
            }
        }
    }
}

impl TCommand {
    pub(crate) fn new(kind: TCommandKind, ty: TypeExpr, pos: Pos) -> Self {
        TCommand { kind, ty, pos }
    }

    pub fn erase(&self) -> Command {
        let kind = match &self.kind {
            TCommandKind::App(l, m) => CommandKind::App(Box::new(l.erase()), Box::new(m.erase())),
            TCommandKind::Unit(m, _) => CommandKind::Unit(Box::new(m.erase())),
            TCommandKind::Let(p, x, y) => CommandKind::Let(p.clone(), Box::new(x.erase()), Box::new(y.erase())),
            TCommandKind::Meas(m) => CommandKind::Meas(Box::new(m.erase())),
            TCommandKind::TrL(m) => CommandKind::TrL(Box::new(m.erase())),
        };
        Command::at(kind, self.pos)
    }

    pub(crate) fn map_types(&mut self, f: &mut impl FnMut(&TypeExpr) -> TypeExpr) {
        self.ty = f(&self.ty);
        match &mut self.kind {
            TCommandKind::App(l, m) => {
                l.map_types(f);
                m.map_types(f);
            }
            TCommandKind::Unit(m, _) | TCommandKind::Meas(m) | TCommandKind::TrL(m) => m.map_types(f),
            TCommandKind::Let(_, x, y) => {
                x.map_types(f);
                y.map_types(f);
            }
        }
    }
}
