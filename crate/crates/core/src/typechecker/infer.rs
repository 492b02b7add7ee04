use crate::syntax::{Command, CommandKind, Definition, Pattern, Pos, Term, TermKind, TypeExpr};

use super::typed::{TCommand, TCommandKind, TTerm, TTermKind, UnitMode};
use super::{EnvPair, TypeError, TypeErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sort {
    Gamma,
    Delta,
    /// A Δ entry while checking the arrow of `L • M`.
    Hidden,
}

type Res<T> = Result<T, TypeError>;

pub(super) struct Checker {
    scope: Vec<(String, TypeExpr, Sort)>,
    metas: Vec<Option<TypeExpr>>,
}

impl Checker {
    pub(super) fn new(env: &EnvPair) -> Self {
        let mut scope: Vec<_> = env.gamma.iter().map(|(n, t)| (n.clone(), t.normalize(), Sort::Gamma)).collect();
        scope.extend(env.delta.iter().map(|(n, t)| (n.clone(), t.normalize(), Sort::Delta)));
        Checker { scope, metas: Vec::new() }
    }

    pub(super) fn finish_term(mut self, t: &Term) -> Res<TTerm> {
        let mut tt = self.term(t)?;
        tt.map_types(&mut |t| self.resolve(t));
        validate_term(&tt)?;
        Ok(tt)
    }

    pub(super) fn finish_command(mut self, c: &Command) -> Res<TCommand> {
        let mut tc = self.command(c)?;
        tc.map_types(&mut |t| self.resolve(t));
        validate_command(&tc)?;
        Ok(tc)
    }

    /// Resolves all metas, defaulting the unconstrained ones to `Bool`.
    fn resolve(&self, ty: &TypeExpr) -> TypeExpr {
        default_metas(&self.zonk(ty))
    }

    // ---- unification ----

    fn fresh(&mut self) -> TypeExpr {
        self.metas.push(None);
        TypeExpr::Meta(self.metas.len() as u32 - 1)
    }

    fn zonk(&self, ty: &TypeExpr) -> TypeExpr {
        match ty {
            TypeExpr::Meta(m) => match &self.metas[*m as usize] {
                Some(t) => self.zonk(t),
                None => ty.clone(),
            },
            TypeExpr::Bool => TypeExpr::Bool,
            TypeExpr::Prod(a, b) => TypeExpr::prod(self.zonk(a), self.zonk(b)),
            TypeExpr::Fun(a, b) => TypeExpr::fun(self.zonk(a), self.zonk(b)),
            TypeExpr::Lin(a, b) => TypeExpr::fun(self.zonk(a), TypeExpr::vec(self.zonk(b))),
            TypeExpr::Vec(a) => TypeExpr::vec(self.zonk(a)),
            TypeExpr::Dens(a) => TypeExpr::dens(self.zonk(a)),
            TypeExpr::Super(a, b) => TypeExpr::sup(self.zonk(a), self.zonk(b)),
        }
    }

    fn occurs(&self, m: u32, ty: &TypeExpr) -> bool {
        match self.zonk(ty) {
            TypeExpr::Meta(n) => n == m,
            TypeExpr::Bool => false,
            TypeExpr::Vec(a) | TypeExpr::Dens(a) => self.occurs(m, &a),
            TypeExpr::Prod(a, b) | TypeExpr::Fun(a, b) | TypeExpr::Lin(a, b) | TypeExpr::Super(a, b) => {
                self.occurs(m, &a) || self.occurs(m, &b)
            }
        }
    }

    fn unify_inner(&mut self, a: &TypeExpr, b: &TypeExpr) -> bool {
        let (a, b) = (self.zonk(a), self.zonk(b));
        match (&a, &b) {
            (TypeExpr::Meta(m), TypeExpr::Meta(n)) if m == n => true,
            (TypeExpr::Meta(m), t) | (t, TypeExpr::Meta(m)) => {
                if self.occurs(*m, t) {
                    return false;
                }
                self.metas[*m as usize] = Some(t.clone());
                true
            }
            (TypeExpr::Bool, TypeExpr::Bool) => true,
            (TypeExpr::Vec(x), TypeExpr::Vec(y)) | (TypeExpr::Dens(x), TypeExpr::Dens(y)) => self.unify_inner(x, y),
            (TypeExpr::Prod(a1, a2), TypeExpr::Prod(b1, b2))
            | (TypeExpr::Fun(a1, a2), TypeExpr::Fun(b1, b2))
            | (TypeExpr::Super(a1, a2), TypeExpr::Super(b1, b2)) => {
                self.unify_inner(a1, b1) && self.unify_inner(a2, b2)
            }
            _ => false,
        }
    }

    /// Unifies `found` with `expected`, reporting a mismatch at `pos`.
    fn unify(&mut self, pos: Pos, expected: &TypeExpr, found: &TypeExpr) -> Res<()> {
        let snapshot = self.metas.clone();
        if self.unify_inner(expected, found) {
            Ok(())
        } else {
            self.metas = snapshot;
            Err(TypeError::mismatch(pos, self.zonk(expected), self.zonk(found)))
        }
    }

    // ---- scope ----

    fn lookup(&self, x: &str, pos: Pos) -> Res<TypeExpr> {
        match self.scope.iter().rev().find(|(n, _, _)| n == x) {
            None => Err(TypeError::new(TypeErrorKind::Unbound, pos, format!("unbound variable `{x}`"))),
            Some((_, _, Sort::Hidden)) => Err(TypeError::new(
                TypeErrorKind::DeltaMisuse,
                pos,
                format!("arrow-bound variable `{x}` used in the arrow position of `•`"),
            )),
            Some((_, ty, _)) => Ok(ty.clone()),
        }
    }

    fn bind(&mut self, p: &Pattern, ty: &TypeExpr, sort: Sort, pos: Pos) -> Res<()> {
        match p {
            Pattern::Var(x) => {
                self.scope.push((x.clone(), ty.clone(), sort));
                Ok(())
            }
            Pattern::Pair(pa, pb) => {
                let (a, b) = match self.zonk(ty) {
                    TypeExpr::Prod(a, b) => (*a, *b),
                    TypeExpr::Meta(_) => {
                        let (a, b) = (self.fresh(), self.fresh());
                        self.unify(pos, &TypeExpr::prod(a.clone(), b.clone()), ty)?;
                        (a, b)
                    }
                    other => {
                        return Err(TypeError {
                            kind: TypeErrorKind::PatternArity,
                            pos,
                            expected: None,
                            found: Some(other.clone()),
                            detail: format!("pattern `{p}` cannot match a value of type {other}"),
                            definition: None,
                        })
                    }
                };
                self.bind(pa, &a, sort, pos)?;
                self.bind(pb, &b, sort, pos)
            }
        }
    }

    fn scoped<T>(&mut self, f: impl FnOnce(&mut Self) -> Res<T>) -> Res<T> {
        let n = self.scope.len();
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    /// Runs `f` with every visible Δ entry re-sorted to `to`.
    fn with_delta_as<T>(&mut self, to: Sort, f: impl FnOnce(&mut Self) -> Res<T>) -> Res<T> {
        let changed: Vec<usize> =
            (0..self.scope.len()).filter(|&i| self.scope[i].2 == Sort::Delta).collect();
        for &i in &changed {
            self.scope[i].2 = to;
        }
        let r = f(self);
        for &i in &changed {
            self.scope[i].2 = Sort::Delta;
        }
        r
    }

    // ---- terms ----

    fn term(&mut self, t: &Term) -> Res<TTerm> {
        let pos = t.pos;
        let (kind, ty) = match &t.kind {
            TermKind::Var(x) => (TTermKind::Var(x.clone()), self.lookup(x, pos)?),
            TermKind::Bool(b) => (TTermKind::Bool(*b), TypeExpr::Bool),
            TermKind::Pair(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                let ty = TypeExpr::prod(a.ty.clone(), b.ty.clone());
                (TTermKind::Pair(Box::new(a), Box::new(b)), ty)
            }
            TermKind::Fst(a) | TermKind::Snd(a) => {
                let a = self.term(a)?;
                let (l, r) = (self.fresh(), self.fresh());
                self.unify(a.pos, &TypeExpr::prod(l.clone(), r.clone()), &a.ty)?;
                if matches!(t.kind, TermKind::Fst(_)) {
                    (TTermKind::Fst(Box::new(a)), l)
                } else {
                    (TTermKind::Snd(Box::new(a)), r)
                }
            }
            TermKind::Lam(p, ann, body) => {
                let param = match ann {
                    Some(ty) => ty.normalize(),
                    None => self.fresh(),
                };
                let body = self.scoped(|c| {
                    c.bind(p, &param, Sort::Gamma, pos)?;
                    c.term(body)
                })?;
                let ty = TypeExpr::fun(param.clone(), body.ty.clone());
                (TTermKind::Lam(p.clone(), param, Box::new(body)), ty)
            }
            TermKind::App(f, a) => {
                let f = self.term(f)?;
                let a = self.term(a)?;
                let ty = match self.zonk(&f.ty) {
                    TypeExpr::Fun(dom, cod) => {
                        self.unify(a.pos, &dom, &a.ty)?;
                        *cod
                    }
                    TypeExpr::Meta(_) => {
                        let r = self.fresh();
                        self.unify(f.pos, &TypeExpr::fun(a.ty.clone(), r.clone()), &f.ty)?;
                        r
                    }
                    other => {
                        let expected = TypeExpr::fun(self.zonk(&a.ty), self.fresh());
                        return Err(TypeError::mismatch(f.pos, expected, other));
                    }
                };
                (TTermKind::App(Box::new(f), Box::new(a)), ty)
            }
            TermKind::Let(p, m, n) => {
                let m = self.term(m)?;
                let n = self.scoped(|c| {
                    c.bind(p, &m.ty, Sort::Gamma, pos)?;
                    c.term(n)
                })?;
                let ty = n.ty.clone();
                (TTermKind::Let(p.clone(), Box::new(m), Box::new(n)), ty)
            }
            TermKind::If(c, a, b) => {
                let c = self.term(c)?;
                self.unify(c.pos, &TypeExpr::Bool, &c.ty)?;
                let a = self.term(a)?;
                let b = self.term(b)?;
                self.unify(b.pos, &a.ty, &b.ty)?;
                let ty = a.ty.clone();
                (TTermKind::If(Box::new(c), Box::new(a), Box::new(b)), ty)
            }
            TermKind::Eq(a, b) => {
                let a = self.term(a)?;
                let b = self.term(b)?;
                self.unify(b.pos, &a.ty, &b.ty)?;
                (TTermKind::Eq(Box::new(a), Box::new(b)), TypeExpr::Bool)
            }
            TermKind::VecUnit(m) => {
                let m = self.term(m)?;
                let ty = TypeExpr::vec(m.ty.clone());
                (TTermKind::VecUnit(Box::new(m)), ty)
            }
            TermKind::VecLet(p, m, n) => {
                let m = self.term(m)?;
                let elem = self.fresh();
                self.unify(m.pos, &TypeExpr::vec(elem.clone()), &m.ty)?;
                let n = self.scoped(|c| {
                    c.bind(p, &elem, Sort::Gamma, pos)?;
                    c.term(n)
                })?;
                let out = self.fresh();
                self.unify(n.pos, &TypeExpr::vec(out), &n.ty)?;
                let ty = n.ty.clone();
                (TTermKind::VecLet(p.clone(), Box::new(m), Box::new(n)), ty)
            }
            TermKind::VecAdd(a, b) | TermKind::VecSub(a, b) => {
                let a = self.term(a)?;
                let elem = self.fresh();
                self.unify(a.pos, &TypeExpr::vec(elem), &a.ty)?;
                let b = self.term(b)?;
                self.unify(b.pos, &a.ty, &b.ty)?;
                let ty = a.ty.clone();
                let kind = if matches!(t.kind, TermKind::VecAdd(..)) {
                    TTermKind::VecAdd(Box::new(a), Box::new(b))
                } else {
                    TTermKind::VecSub(Box::new(a), Box::new(b))
                };
                (kind, ty)
            }
            TermKind::VecScale(s, m) => {
                let m = self.term(m)?;
                let elem = self.fresh();
                self.unify(m.pos, &TypeExpr::vec(elem), &m.ty)?;
                let ty = m.ty.clone();
                (TTermKind::VecScale(*s, Box::new(m)), ty)
            }
            TermKind::MZero => {
                let elem = self.fresh();
                (TTermKind::MZero, TypeExpr::vec(elem))
            }
            TermKind::ArrowAbs(p, ann, body) => {
                let param = match ann {
                    Some(ty) => ty.normalize(),
                    None => self.fresh(),
                };
                let body = self.scoped(|c| {
                    c.bind(p, &param, Sort::Delta, pos)?;
                    c.command(body)
                })?;
                let ty = TypeExpr::sup(param.clone(), body.ty.clone());
                (TTermKind::ArrowAbs(p.clone(), param, Box::new(body)), ty)
            }
        };
        Ok(TTerm::new(kind, ty, pos))
    }

    // ---- commands ----

    fn command(&mut self, c: &Command) -> Res<TCommand> {
        let pos = c.pos;
        let (kind, ty) = match &c.kind {
            CommandKind::App(l, m) => {
                let l = self.with_delta_as(Sort::Hidden, |c| c.term(l))?;
                let m = self.with_delta_as(Sort::Gamma, |c| c.term(m))?;
                let ty = match self.zonk(&l.ty) {
                    TypeExpr::Super(dom, cod) => {
                        self.unify(m.pos, &dom, &m.ty)?;
                        *cod
                    }
                    TypeExpr::Meta(_) => {
                        let r = self.fresh();
                        self.unify(l.pos, &TypeExpr::sup(m.ty.clone(), r.clone()), &l.ty)?;
                        r
                    }
                    other => {
                        let expected = TypeExpr::sup(self.zonk(&m.ty), self.fresh());
                        return Err(TypeError::mismatch(l.pos, expected, other));
                    }
                };
                (TCommandKind::App(Box::new(l), Box::new(m)), ty)
            }
            CommandKind::Unit(m) => {
                let m = self.with_delta_as(Sort::Gamma, |c| c.term(m))?;
                match self.zonk(&m.ty) {
                    TypeExpr::Vec(a) => (TCommandKind::Unit(Box::new(m), UnitMode::Quantum), *a),
                    _ => {
                        let ty = m.ty.clone();
                        (TCommandKind::Unit(Box::new(m), UnitMode::Classical), ty)
                    }
                }
            }
            CommandKind::Let(p, bound, body) => {
                let bound = self.command(bound)?;
                let body = self.scoped(|c| {
                    c.bind(p, &bound.ty, Sort::Delta, pos)?;
                    c.command(body)
                })?;
                let ty = body.ty.clone();
                (TCommandKind::Let(p.clone(), Box::new(bound), Box::new(body)), ty)
            }
            CommandKind::Meas(m) => {
                let m = self.with_delta_as(Sort::Gamma, |c| c.term(m))?;
                let ty = TypeExpr::prod(m.ty.clone(), m.ty.clone());
                (TCommandKind::Meas(Box::new(m)), ty)
            }
            CommandKind::TrL(m) => {
                let m = self.with_delta_as(Sort::Gamma, |c| c.term(m))?;
                let (a, b) = (self.fresh(), self.fresh());
                self.unify(m.pos, &TypeExpr::prod(a, b.clone()), &m.ty)?;
                (TCommandKind::TrL(Box::new(m)), b)
            }
        };
        Ok(TCommand::new(kind, ty, pos))
    }
}

fn default_metas(ty: &TypeExpr) -> TypeExpr {
    match ty {
        TypeExpr::Meta(_) => TypeExpr::Bool,
        TypeExpr::Bool => TypeExpr::Bool,
        TypeExpr::Prod(a, b) => TypeExpr::prod(default_metas(a), default_metas(b)),
        TypeExpr::Fun(a, b) => TypeExpr::fun(default_metas(a), default_metas(b)),
        TypeExpr::Lin(a, b) => TypeExpr::lin(default_metas(a), default_metas(b)),
        TypeExpr::Vec(a) => TypeExpr::vec(default_metas(a)),
        TypeExpr::Dens(a) => TypeExpr::dens(default_metas(a)),
        TypeExpr::Super(a, b) => TypeExpr::sup(default_metas(a), default_metas(b)),
    }
}

/// Checks a top-level definition, honouring its annotation.
pub(super) fn check_definition(env: &EnvPair, def: &Definition) -> Res<(TTerm, TypeExpr)> {
    if let Some(ann) = &def.ty {
        well_formed(ann, def.pos)?;
    }
    let mut c = Checker::new(env);
    let mut tt = c.term(&def.body)?;
    if let Some(ann) = &def.ty {
        c.unify(def.pos, &ann.normalize(), &tt.ty).map_err(|mut e| {
            e.expected = Some(ann.clone());
            e.found = e.found.as_ref().map(default_metas);
            e
        })?;
    }
    tt.map_types(&mut |t| c.resolve(t));
    validate_term(&tt)?;
    let ty = def.ty.clone().unwrap_or_else(|| tt.ty.clone());
    Ok((tt, ty))
}

// ---- validation of settled trees ----

fn non_classical(pos: Pos, ty: &TypeExpr, what: &str) -> TypeError {
    TypeError {
        kind: TypeErrorKind::NonClassicalBasis,
        pos,
        expected: None,
        found: Some(ty.clone()),
        detail: format!("{what} must have a classical type, found {ty}"),
        definition: None,
    }
}

/// `Vec`, `Dens`, `Lin` and `Super` only range over classical bases.
fn well_formed(ty: &TypeExpr, pos: Pos) -> Res<()> {
    match ty {
        TypeExpr::Bool | TypeExpr::Meta(_) => Ok(()),
        TypeExpr::Prod(a, b) | TypeExpr::Fun(a, b) => {
            well_formed(a, pos)?;
            well_formed(b, pos)
        }
        TypeExpr::Vec(a) | TypeExpr::Dens(a) => {
            if a.is_classical() {
                Ok(())
            } else {
                Err(non_classical(pos, a, "the basis of a vector or density"))
            }
        }
        TypeExpr::Lin(a, b) | TypeExpr::Super(a, b) => {
            for x in [a, b] {
                if !x.is_classical() {
                    return Err(non_classical(pos, x, "the basis of a linear map or superoperator"));
                }
            }
            Ok(())
        }
    }
}

fn validate_term(t: &TTerm) -> Res<()> {
    well_formed(&t.ty, t.pos)?;
    match &t.kind {
        TTermKind::Var(_) | TTermKind::Bool(_) | TTermKind::MZero => Ok(()),
        TTermKind::Fst(a) | TTermKind::Snd(a) | TTermKind::VecUnit(a) | TTermKind::VecScale(_, a) => validate_term(a),
        TTermKind::Lam(_, ty, body) => {
            well_formed(ty, t.pos)?;
            validate_term(body)
        }
        TTermKind::Eq(a, b) => {
            if !a.ty.is_classical() {
                return Err(non_classical(a.pos, &a.ty, "an operand of `==`"));
            }
            validate_term(a)?;
            validate_term(b)
        }
        TTermKind::Pair(a, b)
        | TTermKind::App(a, b)
        | TTermKind::Let(_, a, b)
        | TTermKind::VecLet(_, a, b)
        | TTermKind::VecAdd(a, b)
        | TTermKind::VecSub(a, b) => {
            validate_term(a)?;
            validate_term(b)
        }
        TTermKind::If(a, b, c) => {
            validate_term(a)?;
            validate_term(b)?;
            validate_term(c)
        }
        TTermKind::ArrowAbs(_, ty, body) => {
            well_formed(ty, t.pos)?;
            validate_command(body)
        }
    }
}

fn validate_command(c: &TCommand) -> Res<()> {
    if !c.ty.is_classical() {
        return Err(non_classical(c.pos, &c.ty, "the result of a command"));
    }
    match &c.kind {
        TCommandKind::App(l, m) => {
            if !m.ty.is_classical() {
                return Err(non_classical(m.pos, &m.ty, "the argument of `•`"));
            }
            validate_term(l)?;
            validate_term(m)
        }
        TCommandKind::Unit(m, _) | TCommandKind::Meas(m) | TCommandKind::TrL(m) => {
            let arg_ty = match (&c.kind, &m.ty) {
                (TCommandKind::Unit(_, UnitMode::Quantum), TypeExpr::Vec(a)) => a.as_ref(),
                _ => &m.ty,
            };
            if !arg_ty.is_classical() {
                return Err(non_classical(m.pos, &m.ty, "the argument of a command"));
            }
            validate_term(m)
        }
        TCommandKind::Let(_, a, b) => {
            validate_command(a)?;
            validate_command(b)
        }
    }
}
