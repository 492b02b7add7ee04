//! Addressing subexpressions by child index.
//!
//! Children are numbered in source order across both sorts: the body of
//! `\•p. Q` is child 0, `L • M` has children `L`, `M`, and a command `let`
//! has its bound command then its body.

use std::collections::BTreeSet;

use crate::syntax::{Command, CommandKind, Expr, Pattern, Term, TermKind};

pub type Path = Vec<usize>;

/// The children of a node, with the pattern each one sees bound.
pub(crate) fn children(e: &Expr) -> Vec<(Expr, Option<&Pattern>)> {
    match e {
        Expr::Term(t) => term_children(t),
        Expr::Command(c) => match &c.kind {
            CommandKind::App(l, m) => vec![(Expr::Term((**l).clone()), None), (Expr::Term((**m).clone()), None)],
            CommandKind::Unit(m) | CommandKind::Meas(m) | CommandKind::TrL(m) => vec![(Expr::Term((**m).clone()), None)],
            CommandKind::Let(p, b, q) => {
                vec![(Expr::Command((**b).clone()), None), (Expr::Command((**q).clone()), Some(p))]
            }
        },
    }
}

fn term_children(t: &Term) -> Vec<(Expr, Option<&Pattern>)> {
    let tm = |x: &Term| Expr::Term(x.clone());
    match &t.kind {
        TermKind::Var(_) | TermKind::Bool(_) | TermKind::MZero => vec![],
        TermKind::Fst(a) | TermKind::Snd(a) | TermKind::VecUnit(a) | TermKind::VecScale(_, a) => vec![(tm(a), None)],
        TermKind::Pair(a, b)
        | TermKind::App(a, b)
        | TermKind::Eq(a, b)
        | TermKind::VecAdd(a, b)
        | TermKind::VecSub(a, b) => vec![(tm(a), None), (tm(b), None)],
        TermKind::If(a, b, c) => vec![(tm(a), None), (tm(b), None), (tm(c), None)],
        TermKind::Lam(p, _, b) => vec![(tm(b), Some(p))],
        TermKind::Let(p, m, n) | TermKind::VecLet(p, m, n) => vec![(tm(m), None), (tm(n), Some(p))],
        TermKind::ArrowAbs(p, _, q) => vec![(Expr::Command((**q).clone()), Some(p))],
    }
}

/// The subexpression at `path` and the variables bound around it.
pub fn subexpr(e: &Expr, path: &[usize]) -> Option<(Expr, BTreeSet<String>)> {
    let mut cur = e.clone();
    let mut bound = BTreeSet::new();
    for &i in path {
        let (next, binder) = children(&cur).into_iter().nth(i)?;
        if let Some(p) = binder {
            bound.extend(p.vars().into_iter().map(str::to_string));
        }
        cur = next;
    }
    Some((cur, bound))
}

/// `e` with the node at `path` replaced. The replacement must have the
/// same sort as the node it replaces.
pub fn replace_at(e: &Expr, path: &[usize], new: Expr) -> Option<Expr> {
    let Some((&i, rest)) = path.split_first() else {
        return Some(new);
    };
    Some(match e {
        Expr::Term(t) => Expr::Term(replace_in_term(t, i, rest, new)?),
        Expr::Command(c) => {
            let kind = match &c.kind {
                CommandKind::App(l, m) => match i {
                    0 => CommandKind::App(Box::new(sub_term(l, rest, new)?), m.clone()),
                    1 => CommandKind::App(l.clone(), Box::new(sub_term(m, rest, new)?)),
                    _ => return None,
                },
                CommandKind::Unit(m) if i == 0 => CommandKind::Unit(Box::new(sub_term(m, rest, new)?)),
                CommandKind::Meas(m) if i == 0 => CommandKind::Meas(Box::new(sub_term(m, rest, new)?)),
                CommandKind::TrL(m) if i == 0 => CommandKind::TrL(Box::new(sub_term(m, rest, new)?)),
                CommandKind::Let(p, b, q) => match i {
                    0 => CommandKind::Let(p.clone(), Box::new(sub_command(b, rest, new)?), q.clone()),
                    1 => CommandKind::Let(p.clone(), b.clone(), Box::new(sub_command(q, rest, new)?)),
                    _ => return None,
                },
                _ => return None,
            };
            Expr::Command(Command::at(kind, c.pos))
        }
    })
}

fn sub_term(t: &Term, path: &[usize], new: Expr) -> Option<Term> {
    match replace_at(&Expr::Term(t.clone()), path, new)? {
        Expr::Term(t) => Some(t),
        Expr::Command(_) => None,
    }
}

fn sub_command(c: &Command, path: &[usize], new: Expr) -> Option<Command> {
    match replace_at(&Expr::Command(c.clone()), path, new)? {
        Expr::Command(c) => Some(c),
        Expr::Term(_) => None,
    }
}

fn replace_in_term(t: &Term, i: usize, rest: &[usize], new: Expr) -> Option<Term> {
    let b = |x: &Term, new: Expr| sub_term(x, rest, new).map(Box::new);
    let kind = match (&t.kind, i) {
        (TermKind::Fst(a), 0) => TermKind::Fst(b(a, new)?),
        (TermKind::Snd(a), 0) => TermKind::Snd(b(a, new)?),
        (TermKind::VecUnit(a), 0) => TermKind::VecUnit(b(a, new)?),
        (TermKind::VecScale(s, a), 0) => TermKind::VecScale(*s, b(a, new)?),
        (TermKind::Pair(x, y), 0) => TermKind::Pair(b(x, new)?, y.clone()),
        (TermKind::Pair(x, y), 1) => TermKind::Pair(x.clone(), b(y, new)?),
        (TermKind::App(x, y), 0) => TermKind::App(b(x, new)?, y.clone()),
        (TermKind::App(x, y), 1) => TermKind::App(x.clone(), b(y, new)?),
        (TermKind::Eq(x, y), 0) => TermKind::Eq(b(x, new)?, y.clone()),
        (TermKind::Eq(x, y), 1) => TermKind::Eq(x.clone(), b(y, new)?),
        (TermKind::VecAdd(x, y), 0) => TermKind::VecAdd(b(x, new)?, y.clone()),
        (TermKind::VecAdd(x, y), 1) => TermKind::VecAdd(x.clone(), b(y, new)?),
        (TermKind::VecSub(x, y), 0) => TermKind::VecSub(b(x, new)?, y.clone()),
        (TermKind::VecSub(x, y), 1) => TermKind::VecSub(x.clone(), b(y, new)?),
        (TermKind::If(x, y, z), 0) => TermKind::If(b(x, new)?, y.clone(), z.clone()),
        (TermKind::If(x, y, z), 1) => TermKind::If(x.clone(), b(y, new)?, z.clone()),
        (TermKind::If(x, y, z), 2) => TermKind::If(x.clone(), y.clone(), b(z, new)?),
        (TermKind::Lam(p, ty, body), 0) => TermKind::Lam(p.clone(), ty.clone(), b(body, new)?),
        (TermKind::Let(p, m, n), 0) => TermKind::Let(p.clone(), b(m, new)?, n.clone()),
        (TermKind::Let(p, m, n), 1) => TermKind::Let(p.clone(), m.clone(), b(n, new)?),
        (TermKind::VecLet(p, m, n), 0) => TermKind::VecLet(p.clone(), b(m, new)?, n.clone()),
        (TermKind::VecLet(p, m, n), 1) => TermKind::VecLet(p.clone(), m.clone(), b(n, new)?),
        (TermKind::ArrowAbs(p, ty, q), 0) => TermKind::ArrowAbs(p.clone(), ty.clone(), Box::new(sub_command(q, rest, new)?)),
        _ => return None,
    };
    Some(Term::at(kind, t.pos))
}

/// Every path in pre-order: a node before its children, children left to
/// right. This is the leftmost-outermost search order.
pub fn preorder(e: &Expr) -> Vec<Path> {
    let mut out = Vec::new();
    walk(e, &mut Vec::new(), &mut out);
    out
}

fn walk(e: &Expr, path: &mut Path, out: &mut Vec<Path>) {
    out.push(path.clone());
    for (i, (child, _)) in children(e).into_iter().enumerate() {
        path.push(i);
        walk(&child, path, out);
        path.pop();
    }
}
