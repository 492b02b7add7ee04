//! Which command units lift a vector rather than a classical value.
//!
//! The left unit law substitutes the unit's argument for a variable, which
//! is only sound when `[M]` lifts a classical `M`. Unit modes come from
//! elaboration, so the whole expression is typed first; free variables are
//! abstracted so open expressions can be typed too.

use std::collections::BTreeSet;

use super::Path;
use crate::syntax::{free_vars_command, free_vars_term, fresh_name, Expr, Pattern, Term};
use crate::typechecker::{elaborate_term, CheckedProgram, TCommand, TCommandKind, TTerm, TTermKind, UnitMode};

/// Paths of the units in `e` that lift vectors. Empty when `e` does not
/// typecheck.
pub(crate) fn quantum_units(program: &CheckedProgram, e: &Expr) -> BTreeSet<Path> {
    let free: BTreeSet<String> = match e {
        Expr::Term(t) => free_vars_term(t),
        Expr::Command(c) => free_vars_command(c),
    }
    .into_iter()
    .filter(|x| program.get(x).is_none())
    .collect();
    let (mut wrapped, mut depth) = match e {
        Expr::Term(t) => (t.clone(), 0),
        Expr::Command(c) => {
            let dummy = fresh_name("u", &free);
            (Term::arrow(Pattern::var(dummy), c.clone()), 1)
        }
    };
    if let Some(p) = free.iter().rev().map(|x| Pattern::var(x.as_str())).reduce(|acc, p| Pattern::pair(p, acc)) {
        wrapped = Term::lam(p, wrapped);
        depth += 1;
    }
    let mut out = BTreeSet::new();
    let Ok(typed) = elaborate_term(&program.env(), &wrapped) else { return out };
    let mut path = Vec::new();
    match e {
        Expr::Term(_) => walk_term(strip_term(&typed, depth), &mut path, &mut out),
        Expr::Command(_) => walk_command(strip_command(&typed, depth), &mut path, &mut out),
    }
    out
}

fn strip_term(t: &TTerm, depth: usize) -> &TTerm {
    match (&t.kind, depth) {
        (_, 0) => t,
        (TTermKind::Lam(_, _, body), _) => strip_term(body, depth - 1),
        _ => unreachable!("wrapper shape"),
    }
}

fn strip_command(t: &TTerm, depth: usize) -> &TCommand {
    match &t.kind {
        TTermKind::Lam(_, _, body) if depth > 1 => strip_command(body, depth - 1),
        TTermKind::ArrowAbs(_, _, body) => body,
        _ => unreachable!("wrapper shape"),
    }
}

fn walk_term(t: &TTerm, path: &mut Path, out: &mut BTreeSet<Path>) {
    let mut visit = |k: usize, child: &TTerm, path: &mut Path| {
        path.push(k);
        walk_term(child, path, out);
        path.pop();
    };
    match &t.kind {
        TTermKind::Var(_) | TTermKind::Bool(_) | TTermKind::MZero => {}
        TTermKind::Fst(a) | TTermKind::Snd(a) | TTermKind::VecUnit(a) | TTermKind::VecScale(_, a) => {
            visit(0, a, path)
        }
        TTermKind::Lam(_, _, b) => visit(0, b, path),
        TTermKind::Pair(a, b)
        | TTermKind::App(a, b)
        | TTermKind::Eq(a, b)
        | TTermKind::VecAdd(a, b)
        | TTermKind::VecSub(a, b)
        | TTermKind::Let(_, a, b)
        | TTermKind::VecLet(_, a, b) => {
            visit(0, a, path);
            visit(1, b, path);
        }
        TTermKind::If(a, b, c) => {
            visit(0, a, path);
            visit(1, b, path);
            visit(2, c, path);
        }
        TTermKind::ArrowAbs(_, _, q) => {
            path.push(0);
            walk_command(q, path, out);
            path.pop();
        }
    }
}

fn walk_command(c: &TCommand, path: &mut Path, out: &mut BTreeSet<Path>) {
    let term = |k: usize, t: &TTerm, path: &mut Path, out: &mut BTreeSet<Path>| {
        path.push(k);
        walk_term(t, path, out);
        path.pop();
    };
    match &c.kind {
        TCommandKind::App(l, m) => {
            term(0, l, path, out);
            term(1, m, path, out);
        }
        TCommandKind::Unit(m, mode) => {
            if *mode == UnitMode::Quantum {
                out.insert(path.clone());
            }
            term(0, m, path, out);
        }
        TCommandKind::Meas(m) | TCommandKind::TrL(m) => term(0, m, path, out),
        TCommandKind::Let(_, b, q) => {
            for (k, child) in [(0, b), (1, q)] {
                path.push(k);
                walk_command(child, path, out);
                path.pop();
            }
        }
    }
}
