//! Free variables, capture-avoiding substitution and alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};

use super::{Command, CommandKind, Expr, Pattern, Term, TermKind};

pub fn free_vars_term(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_term(t, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_command(c: &Command) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fv_command(c, &mut Vec::new(), &mut out);
    out
}

fn with_pattern<'a>(bound: &mut Vec<&'a str>, p: &'a Pattern, f: impl FnOnce(&mut Vec<&'a str>)) {
    let n = bound.len();
    bound.extend(p.vars());
    f(bound);
    bound.truncate(n);
}

fn fv_term<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match &t.kind {
        TermKind::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        TermKind::Bool(_) | TermKind::MZero => {}
        TermKind::Fst(a) | TermKind::Snd(a) | TermKind::VecUnit(a) | TermKind::VecScale(_, a) => {
            fv_term(a, bound, out)
        }
        TermKind::Pair(a, b)
        | TermKind::App(a, b)
        | TermKind::Eq(a, b)
        | TermKind::VecAdd(a, b)
        | TermKind::VecSub(a, b) => {
            fv_term(a, bound, out);
            fv_term(b, bound, out);
        }
        TermKind::If(a, b, c) => {
            fv_term(a, bound, out);
            fv_term(b, bound, out);
            fv_term(c, bound, out);
        }
        TermKind::Lam(p, _, body) => with_pattern(bound, p, |b| fv_term(body, b, out)),
        TermKind::Let(p, m, n) | TermKind::VecLet(p, m, n) => {
            fv_term(m, bound, out);
            with_pattern(bound, p, |b| fv_term(n, b, out));
        }
        TermKind::ArrowAbs(p, _, body) => with_pattern(bound, p, |b| fv_command(body, b, out)),
    }
}

fn fv_command<'a>(c: &'a Command, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match &c.kind {
        CommandKind::App(l, m) => {
            fv_term(l, bound, out);
            fv_term(m, bound, out);
        }
        CommandKind::Unit(m) | CommandKind::Meas(m) | CommandKind::TrL(m) => fv_term(m, bound, out),
        CommandKind::Let(p, bound_cmd, body) => {
            fv_command(bound_cmd, bound, out);
            with_pattern(bound, p, |b| fv_command(body, b, out));
        }
    }
}

/// Appends primes to `base` until the name avoids `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

type Subst = BTreeMap<String, Term>;

/// Handles a binder: drops shadowed keys and renames pattern variables
/// that would capture a free variable of a replacement.
fn under_binder(
    p: &Pattern,
    sub: &Subst,
    body_fv: &BTreeSet<String>,
) -> Option<(Pattern, Subst)> {
    let mut inner: Subst = sub
        .iter()
        .filter(|(k, _)| !p.binds(k) && body_fv.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if inner.is_empty() {
        return None;
    }
    let repl_fv: BTreeSet<String> = inner.values().flat_map(free_vars_term).collect();
    let mut taken: BTreeSet<String> = repl_fv.clone();
    taken.extend(body_fv.iter().cloned());
    taken.extend(inner.keys().cloned());
    taken.extend(p.vars().into_iter().map(str::to_string));
    let mut renames = Vec::new();
    for v in p.vars() {
        if repl_fv.contains(v) {
            let fresh = fresh_name(v, &taken);
            taken.insert(fresh.clone());
            renames.push((v.to_string(), fresh));
        }
    }
    let new_p = rename_pattern(p, &renames);
    for (old, new) in renames {
        inner.insert(old, Term::var(new));
    }
    Some((new_p, inner))
}

fn rename_pattern(p: &Pattern, renames: &[(String, String)]) -> Pattern {
    match p {
        Pattern::Var(x) => match renames.iter().find(|(o, _)| o == x) {
            Some((_, n)) => Pattern::Var(n.clone()),
            None => p.clone(),
        },
        Pattern::Pair(a, b) => Pattern::pair(rename_pattern(a, renames), rename_pattern(b, renames)),
    }
}

fn st(t: &Term, sub: &Subst) -> Term {
    let b = |x: &Term| Box::new(st(x, sub));
    let kind = match &t.kind {
        TermKind::Var(x) => match sub.get(x) {
            Some(r) => return r.clone(),
            None => return t.clone(),
        },
        TermKind::Bool(_) | TermKind::MZero => return t.clone(),
        TermKind::Pair(x, y) => TermKind::Pair(b(x), b(y)),
        TermKind::Fst(x) => TermKind::Fst(b(x)),
        TermKind::Snd(x) => TermKind::Snd(b(x)),
        TermKind::App(x, y) => TermKind::App(b(x), b(y)),
        TermKind::Eq(x, y) => TermKind::Eq(b(x), b(y)),
        TermKind::If(x, y, z) => TermKind::If(b(x), b(y), b(z)),
        TermKind::VecUnit(x) => TermKind::VecUnit(b(x)),
        TermKind::VecAdd(x, y) => TermKind::VecAdd(b(x), b(y)),
        TermKind::VecSub(x, y) => TermKind::VecSub(b(x), b(y)),
        TermKind::VecScale(s, x) => TermKind::VecScale(*s, b(x)),
        TermKind::Lam(p, ty, body) => match under_binder(p, sub, &free_vars_term(body)) {
            Some((p2, inner)) => TermKind::Lam(p2, ty.clone(), Box::new(st(body, &inner))),
            None => return t.clone(),
        },
        TermKind::Let(p, m, n) | TermKind::VecLet(p, m, n) => {
            let m2 = b(m);
            let (p2, n2) = match under_binder(p, sub, &free_vars_term(n)) {
                Some((p2, inner)) => (p2, Box::new(st(n, &inner))),
                None => (p.clone(), n.clone()),
            };
            if matches!(t.kind, TermKind::Let(..)) {
                TermKind::Let(p2, m2, n2)
            } else {
                TermKind::VecLet(p2, m2, n2)
            }
        }
        TermKind::ArrowAbs(p, ty, body) => match under_binder(p, sub, &free_vars_command(body)) {
            Some((p2, inner)) => TermKind::ArrowAbs(p2, ty.clone(), Box::new(sc(body, &inner))),
            None => return t.clone(),
        },
    };
    Term::at(kind, t.pos)
}

fn sc(c: &Command, sub: &Subst) -> Command {
    let kind = match &c.kind {
        CommandKind::App(l, m) => CommandKind::App(Box::new(st(l, sub)), Box::new(st(m, sub))),
        CommandKind::Unit(m) => CommandKind::Unit(Box::new(st(m, sub))),
        CommandKind::Meas(m) => CommandKind::Meas(Box::new(st(m, sub))),
        CommandKind::TrL(m) => CommandKind::TrL(Box::new(st(m, sub))),
        CommandKind::Let(p, bound, body) => {
            let bound2 = Box::new(sc(bound, sub));
            match under_binder(p, sub, &free_vars_command(body)) {
                Some((p2, inner)) => CommandKind::Let(p2, bound2, Box::new(sc(body, &inner))),
                None => CommandKind::Let(p.clone(), bound2, body.clone()),
            }
        }
    };
    Command::at(kind, c.pos)
}

/// `t[x := n]`, renaming binders as needed.
pub fn subst_term(t: &Term, x: &str, n: &Term) -> Term {
    subst_term_many(t, &[(x.to_string(), n.clone())])
}

/// Simultaneous substitution `t[x1 := n1, ..., xk := nk]`.
pub fn subst_term_many(t: &Term, pairs: &[(String, Term)]) -> Term {
    st(t, &pairs.iter().cloned().collect())
}

pub fn subst_command(c: &Command, x: &str, n: &Term) -> Command {
    subst_command_many(c, &[(x.to_string(), n.clone())])
}

pub fn subst_command_many(c: &Command, pairs: &[(String, Term)]) -> Command {
    sc(c, &pairs.iter().cloned().collect())
}

// ---- alpha-equivalence ----

struct Scope<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Scope<'a> {
    fn same_var(&self, x: &str, y: &str) -> bool {
        let i = self.pairs.iter().rposition(|(l, _)| *l == x);
        let j = self.pairs.iter().rposition(|(_, r)| *r == y);
        match (i, j) {
            (None, None) => x == y,
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }

    fn bind(&mut self, p: &'a Pattern, q: &'a Pattern) -> bool {
        match (p, q) {
            (Pattern::Var(x), Pattern::Var(y)) => {
                self.pairs.push((x, y));
                true
            }
            (Pattern::Pair(a, b), Pattern::Pair(c, d)) => self.bind(a, c) && self.bind(b, d),
            _ => false,
        }
    }

    fn scoped(&mut self, p: &'a Pattern, q: &'a Pattern, f: impl FnOnce(&mut Self) -> bool) -> bool {
        let n = self.pairs.len();
        let ok = self.bind(p, q) && f(self);
        self.pairs.truncate(n);
        ok
    }
}

fn aeq_t<'a>(a: &'a Term, b: &'a Term, s: &mut Scope<'a>) -> bool {
    use TermKind as K;
    match (&a.kind, &b.kind) {
        (K::Var(x), K::Var(y)) => s.same_var(x, y),
        (K::Bool(x), K::Bool(y)) => x == y,
        (K::MZero, K::MZero) => true,
        (K::Fst(x), K::Fst(y)) | (K::Snd(x), K::Snd(y)) | (K::VecUnit(x), K::VecUnit(y)) => aeq_t(x, y, s),
        (K::VecScale(c, x), K::VecScale(d, y)) => c == d && aeq_t(x, y, s),
        (K::Pair(a1, a2), K::Pair(b1, b2))
        | (K::App(a1, a2), K::App(b1, b2))
        | (K::Eq(a1, a2), K::Eq(b1, b2))
        | (K::VecAdd(a1, a2), K::VecAdd(b1, b2))
        | (K::VecSub(a1, a2), K::VecSub(b1, b2)) => aeq_t(a1, b1, s) && aeq_t(a2, b2, s),
        (K::If(a1, a2, a3), K::If(b1, b2, b3)) => aeq_t(a1, b1, s) && aeq_t(a2, b2, s) && aeq_t(a3, b3, s),
        (K::Lam(p, _, x), K::Lam(q, _, y)) => s.scoped(p, q, |s| aeq_t(x, y, s)),
        (K::Let(p, m1, n1), K::Let(q, m2, n2)) | (K::VecLet(p, m1, n1), K::VecLet(q, m2, n2)) => {
            aeq_t(m1, m2, s) && s.scoped(p, q, |s| aeq_t(n1, n2, s))
        }
        (K::ArrowAbs(p, _, x), K::ArrowAbs(q, _, y)) => s.scoped(p, q, |s| aeq_c(x, y, s)),
        _ => false,
    }
}

fn aeq_c<'a>(a: &'a Command, b: &'a Command, s: &mut Scope<'a>) -> bool {
    use CommandKind as K;
    match (&a.kind, &b.kind) {
        (K::App(l1, m1), K::App(l2, m2)) => aeq_t(l1, l2, s) && aeq_t(m1, m2, s),
        (K::Unit(x), K::Unit(y)) | (K::Meas(x), K::Meas(y)) | (K::TrL(x), K::TrL(y)) => aeq_t(x, y, s),
        (K::Let(p, b1, q1), K::Let(q, b2, q2)) => aeq_c(b1, b2, s) && s.scoped(p, q, |s| aeq_c(q1, q2, s)),
        _ => false,
    }
}

/// Equality up to renaming of bound variables. Binder type annotations
/// are ignored.
pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    aeq_t(a, b, &mut Scope { pairs: Vec::new() })
}

pub fn alpha_eq_command(a: &Command, b: &Command) -> bool {
    aeq_c(a, b, &mut Scope { pairs: Vec::new() })
}

pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Term(x), Expr::Term(y)) => alpha_eq_term(x, y),
        (Expr::Command(x), Expr::Command(y)) => alpha_eq_command(x, y),
        _ => false,
    }
}
