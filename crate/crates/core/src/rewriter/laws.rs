use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Path, RewriteError};
use crate::syntax::{
    alpha_eq_command, alpha_eq_term, free_vars_command, free_vars_term, fresh_name, subst_command_many,
    subst_term_many, Command, CommandKind, Expr, Pattern, Term, TermKind,
};

/// An equation of the calculus, used as a rewrite in either direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Law {
    // arrow calculus
    BetaArrow,
    EtaArrow,
    LeftUnit,
    RightUnit,
    Assoc,
    // lambda core
    BetaPair1,
    BetaPair2,
    EtaPair,
    BetaFun,
    EtaFun,
    LetSubst,
    IfTrue,
    IfFalse,
    // booleans and equality
    EqEval,
    EqTrue,
    IfIf,
    IfEta,
    // vector monad and its zero and plus
    MLeft,
    MRight,
    MAssoc,
    MZeroL,
    MZeroR,
    PlusAssoc,
    LetZero,
    LetPlus,
    /// Replaces a name by its definition.
    DeltaUnfold,
}

/// Which side of the equation is matched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    L2R,
    R2L,
}

impl Law {
    pub const ALL: [Law; 26] = [
        Law::BetaArrow,
        Law::EtaArrow,
        Law::LeftUnit,
        Law::RightUnit,
        Law::Assoc,
        Law::BetaPair1,
        Law::BetaPair2,
        Law::EtaPair,
        Law::BetaFun,
        Law::EtaFun,
        Law::LetSubst,
        Law::IfTrue,
        Law::IfFalse,
        Law::EqEval,
        Law::EqTrue,
        Law::IfIf,
        Law::IfEta,
        Law::MLeft,
        Law::MRight,
        Law::MAssoc,
        Law::MZeroL,
        Law::MZeroR,
        Law::PlusAssoc,
        Law::LetZero,
        Law::LetPlus,
        Law::DeltaUnfold,
    ];

    /// The laws `normalize` applies left to right, in priority order.
    /// Eta, associativity and distribution laws are left out.
    pub const CONTRACTIONS: [Law; 19] = [
        Law::BetaArrow,
        Law::LeftUnit,
        Law::RightUnit,
        Law::BetaPair1,
        Law::BetaPair2,
        Law::BetaFun,
        Law::LetSubst,
        Law::IfTrue,
        Law::IfFalse,
        Law::EqEval,
        Law::EqTrue,
        Law::IfIf,
        Law::IfEta,
        Law::MLeft,
        Law::MRight,
        Law::LetZero,
        Law::MZeroL,
        Law::MZeroR,
        Law::DeltaUnfold,
    ];

    /// Identifier used in JSON and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Law::BetaArrow => "BetaArrow",
            Law::EtaArrow => "EtaArrow",
            Law::LeftUnit => "LeftUnit",
            Law::RightUnit => "RightUnit",
            Law::Assoc => "Assoc",
            Law::BetaPair1 => "BetaPair1",
            Law::BetaPair2 => "BetaPair2",
            Law::EtaPair => "EtaPair",
            Law::BetaFun => "BetaFun",
            Law::EtaFun => "EtaFun",
            Law::LetSubst => "LetSubst",
            Law::IfTrue => "IfTrue",
            Law::IfFalse => "IfFalse",
            Law::EqEval => "EqEval",
            Law::EqTrue => "EqTrue",
            Law::IfIf => "IfIf",
            Law::IfEta => "IfEta",
            Law::MLeft => "MLeft",
            Law::MRight => "MRight",
            Law::MAssoc => "MAssoc",
            Law::MZeroL => "MZeroL",
            Law::MZeroR => "MZeroR",
            Law::PlusAssoc => "PlusAssoc",
            Law::LetZero => "LetZero",
            Law::LetPlus => "LetPlus",
            Law::DeltaUnfold => "DeltaUnfold",
        }
    }

    /// Short label used in proof layouts, `=(label)`.
    pub fn label(self) -> &'static str {
        match self {
            Law::BetaArrow => "β⤳",
            Law::EtaArrow => "η⤳",
            Law::LeftUnit => "left",
            Law::RightUnit => "right",
            Law::Assoc => "assoc",
            Law::BetaPair1 => "β×1",
            Law::BetaPair2 => "β×2",
            Law::EtaPair => "η×",
            Law::BetaFun => "β→",
            Law::EtaFun => "η→",
            Law::LetSubst => "let",
            Law::IfTrue => "β-if1",
            Law::IfFalse => "β-if2",
            Law::EqEval => "eq",
            Law::EqTrue => "eq-true",
            Law::IfIf => "if-if",
            Law::IfEta => "if-eta",
            Law::MLeft => "m-left",
            Law::MRight => "m-right",
            Law::MAssoc => "m-assoc",
            Law::MZeroL => "mzero-left",
            Law::MZeroR => "mzero-right",
            Law::PlusAssoc => "plus-assoc",
            Law::LetZero => "let-mzero",
            Law::LetPlus => "let-plus",
            Law::DeltaUnfold => "def.",
        }
    }

    /// Laws of the arrow calculus proper.
    pub fn is_arrow_law(self) -> bool {
        matches!(self, Law::BetaArrow | Law::EtaArrow | Law::LeftUnit | Law::RightUnit | Law::Assoc)
    }

    /// Laws that only touch the classical lambda core and booleans.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            Law::BetaPair1
                | Law::BetaPair2
                | Law::EtaPair
                | Law::BetaFun
                | Law::EtaFun
                | Law::LetSubst
                | Law::IfTrue
                | Law::IfFalse
                | Law::EqEval
                | Law::EqTrue
                | Law::IfIf
                | Law::IfEta
                | Law::DeltaUnfold
        )
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = RewriteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Law::ALL
            .iter()
            .copied()
            .find(|l| l.name().eq_ignore_ascii_case(s) || l.label() == s)
            .ok_or_else(|| RewriteError::UnknownLaw(s.to_string()))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::L2R => "L2R",
            Direction::R2L => "R2L",
        })
    }
}

/// A definition body available to [`Law::DeltaUnfold`].
#[derive(Clone, Debug)]
pub(crate) struct Unfoldable {
    pub body: Term,
    /// Unfolded automatically during normalization.
    pub automatic: bool,
}

pub(crate) struct Ctx<'a> {
    pub defs: &'a BTreeMap<String, Unfoldable>,
    /// Variables bound around the rewritten node.
    pub bound: &'a BTreeSet<String>,
    /// Restricts unfolding to automatic definitions.
    pub normalizing: bool,
    /// Paths of vector-lifting units in the whole expression.
    pub quantum_units: &'a BTreeSet<Path>,
    /// Where the rewritten node sits.
    pub here: &'a [usize],
}

impl Ctx<'_> {
    fn quantum_unit_at(&self, child: &[usize]) -> bool {
        let mut p = self.here.to_vec();
        p.extend_from_slice(child);
        self.quantum_units.contains(&p)
    }
}

/// The rewritten node and, for unfolding, the name that was unfolded.
pub(crate) type Rewrite = (Expr, Option<String>);

type Outcome = Result<Option<Rewrite>, RewriteError>;

fn term(t: Term) -> Outcome {
    Ok(Some((Expr::Term(t), None)))
}

fn command(c: Command) -> Outcome {
    Ok(Some((Expr::Command(c), None)))
}

/// `x ↦ M` for every variable of `p`, splitting literal pairs.
fn pattern_subst(p: &Pattern, m: &Term) -> Vec<(String, Term)> {
    p.projections(m)
}

fn pattern_vars(p: &Pattern) -> BTreeSet<String> {
    p.vars().into_iter().map(str::to_string).collect()
}

fn disjoint(a: &BTreeSet<String>, b: &BTreeSet<String>) -> bool {
    a.is_disjoint(b)
}

fn side(law: Law, detail: impl Into<String>) -> RewriteError {
    RewriteError::SideCondition { law, detail: detail.into() }
}

/// Tries `law` at the root of `node`. `Ok(None)` means no match.
pub(crate) fn rewrite(law: Law, dir: Direction, node: &Expr, cx: &Ctx<'_>) -> Outcome {
    match dir {
        Direction::L2R => forward(law, node, cx),
        Direction::R2L => backward(law, node, cx),
    }
}

fn forward(law: Law, node: &Expr, cx: &Ctx<'_>) -> Outcome {
    match node {
        Expr::Command(c) => forward_command(law, c, cx),
        Expr::Term(t) => forward_term(law, t, cx),
    }
}

fn forward_command(law: Law, c: &Command, cx: &Ctx<'_>) -> Outcome {
    use CommandKind as C;
    match (law, &c.kind) {
        // (λ•p. Q) • M = Q[p := M]
        (Law::BetaArrow, C::App(l, m)) => match &l.kind {
            TermKind::ArrowAbs(p, _, q) => command(subst_command_many(q, &pattern_subst(p, m))),
            _ => Ok(None),
        },
        // let p = [M] in Q = Q[p := M], for classical M only
        (Law::LeftUnit, C::Let(p, bound, q)) => match &bound.kind {
            C::Unit(_) if cx.quantum_unit_at(&[0]) => Err(side(law, "the unit lifts a vector")),
            C::Unit(m) => command(subst_command_many(q, &pattern_subst(p, m))),
            _ => Ok(None),
        },
        // let p = P in [p] = P
        (Law::RightUnit, C::Let(p, bound, q)) => match &q.kind {
            C::Unit(m) if alpha_eq_term(m, &p.to_term()) => command((**bound).clone()),
            _ => Ok(None),
        },
        // let y = (let x = P in Q) in R = let x = P in (let y = Q in R)
        (Law::Assoc, C::Let(y, bound, r)) => match &bound.kind {
            C::Let(x, p, q) => {
                if !disjoint(&pattern_vars(x), &free_vars_command(r)) {
                    return Err(side(Law::Assoc, format!("`{x}` is free in the body")));
                }
                let inner = Command::new(C::Let(y.clone(), q.clone(), r.clone()));
                command(Command::new(C::Let(x.clone(), p.clone(), Box::new(inner))))
            }
            _ => Ok(None),
        },
        _ => Ok(None),
    }
}

fn is_literal(t: &Term) -> bool {
    match &t.kind {
        TermKind::Bool(_) => true,
        TermKind::Pair(a, b) => is_literal(a) && is_literal(b),
        _ => false,
    }
}

fn forward_term(law: Law, t: &Term, cx: &Ctx<'_>) -> Outcome {
    use TermKind as K;
    match (law, &t.kind) {
        // λ•x. (L • [x]) = L
        (Law::EtaArrow, K::ArrowAbs(Pattern::Var(x), _, body)) => match &body.kind {
            CommandKind::App(l, arg) => match &arg.kind {
                K::Var(y) if y == x => {
                    if free_vars_term(l).contains(x) {
                        return Err(side(law, format!("`{x}` is free in the arrow")));
                    }
                    term((**l).clone())
                }
                _ => Ok(None),
            },
            _ => Ok(None),
        },
        (Law::BetaPair1, K::Fst(p)) | (Law::BetaPair2, K::Snd(p)) => match &p.kind {
            K::Pair(a, b) => term(if law == Law::BetaPair1 { (**a).clone() } else { (**b).clone() }),
            _ => Ok(None),
        },
        // (fst L, snd L) = L
        (Law::EtaPair, K::Pair(a, b)) => match (&a.kind, &b.kind) {
            (K::Fst(l1), K::Snd(l2)) if alpha_eq_term(l1, l2) => term((**l1).clone()),
            _ => Ok(None),
        },
        (Law::BetaFun, K::App(f, m)) => match &f.kind {
            K::Lam(p, _, n) => term(subst_term_many(n, &pattern_subst(p, m))),
            _ => Ok(None),
        },
        // λx. (L x) = L
        (Law::EtaFun, K::Lam(Pattern::Var(x), _, body)) => match &body.kind {
            K::App(l, arg) if matches!(&arg.kind, K::Var(y) if y == x) => {
                if free_vars_term(l).contains(x) {
                    return Err(side(law, format!("`{x}` is free in the function")));
                }
                term((**l).clone())
            }
            _ => Ok(None),
        },
        (Law::LetSubst, K::Let(p, m, n)) => term(subst_term_many(n, &pattern_subst(p, m))),
        (Law::IfTrue, K::If(c, a, _)) if matches!(c.kind, K::Bool(true)) => term((**a).clone()),
        (Law::IfFalse, K::If(c, _, b)) if matches!(c.kind, K::Bool(false)) => term((**b).clone()),
        // literal equality decides itself
        (Law::EqEval, K::Eq(a, b)) if is_literal(a) && is_literal(b) => term(Term::bool(a == b)),
        // M == True = M
        (Law::EqTrue, K::Eq(m, t)) if matches!(t.kind, K::Bool(true)) => term((**m).clone()),
        // if (if a then b else c) then d else e = if a then (if b then d else e) else (if c then d else e)
        (Law::IfIf, K::If(c, d, e)) => match &c.kind {
            K::If(a, b, c2) => term(Term::if_(
                (**a).clone(),
                Term::if_((**b).clone(), (**d).clone(), (**e).clone()),
                Term::if_((**c2).clone(), (**d).clone(), (**e).clone()),
            )),
            _ => Ok(None),
        },
        // if M then True else False = M
        (Law::IfEta, K::If(m, a, b)) if matches!((&a.kind, &b.kind), (K::Bool(true), K::Bool(false))) => {
            term((**m).clone())
        }
        // let p <- [L] in N = N[p := L]
        (Law::MLeft, K::VecLet(p, m, n)) => match &m.kind {
            K::VecUnit(l) => term(subst_term_many(n, &pattern_subst(p, l))),
            _ => Ok(None),
        },
        // let p <- L in [p] = L
        (Law::MRight, K::VecLet(p, l, n)) => match &n.kind {
            K::VecUnit(x) if alpha_eq_term(x, &p.to_term()) => term((**l).clone()),
            _ => Ok(None),
        },
        // let y <- (let x <- L in N) in T = let x <- L in (let y <- N in T)
        (Law::MAssoc, K::VecLet(y, bound, t2)) => match &bound.kind {
            K::VecLet(x, l, n) => {
                if !disjoint(&pattern_vars(x), &free_vars_term(t2)) {
                    return Err(side(law, format!("`{x}` is free in the body")));
                }
                term(Term::vlet(x.clone(), (**l).clone(), Term::vlet(y.clone(), (**n).clone(), (**t2).clone())))
            }
            _ => Ok(None),
        },
        (Law::MZeroL, K::VecAdd(z, a)) if matches!(z.kind, K::MZero) => term((**a).clone()),
        (Law::MZeroR, K::VecAdd(a, z)) if matches!(z.kind, K::MZero) => term((**a).clone()),
        // a + (b + c) = (a + b) + c
        (Law::PlusAssoc, K::VecAdd(a, bc)) => match &bc.kind {
            K::VecAdd(b, c) => term(Term::vadd(Term::vadd((**a).clone(), (**b).clone()), (**c).clone())),
            _ => Ok(None),
        },
        (Law::LetZero, K::VecLet(_, m, _)) if matches!(m.kind, K::MZero) => term(Term::mzero()),
        // let p <- (M + N) in T = (let p <- M in T) + (let p <- N in T)
        (Law::LetPlus, K::VecLet(p, mn, t2)) => match &mn.kind {
            K::VecAdd(m, n) => term(Term::vadd(
                Term::vlet(p.clone(), (**m).clone(), (**t2).clone()),
                Term::vlet(p.clone(), (**n).clone(), (**t2).clone()),
            )),
            _ => Ok(None),
        },
        (Law::DeltaUnfold, K::Var(name)) if !cx.bound.contains(name) => {
            let Some(def) = cx.defs.get(name) else { return Ok(None) };
            if cx.normalizing && !def.automatic {
                return Ok(None);
            }
            let captured: Vec<String> = free_vars_term(&def.body).intersection(cx.bound).cloned().collect();
            if !captured.is_empty() {
                return Err(side(law, format!("unfolding `{name}` would capture {}", captured.join(", "))));
            }
            Ok(Some((Expr::Term(def.body.clone()), Some(name.clone()))))
        }
        _ => Ok(None),
    }
}

/// A variable name not free in any of `terms` and not bound around the node.
fn fresh(base: &str, cx: &Ctx<'_>, free: BTreeSet<String>) -> String {
    let mut taken = free;
    taken.extend(cx.bound.iter().cloned());
    if taken.contains(base) {
        fresh_name(base, &taken)
    } else {
        base.to_string()
    }
}

fn backward(law: Law, node: &Expr, cx: &Ctx<'_>) -> Outcome {
    use TermKind as K;
    match (law, node) {
        // P = let x = P in [x]
        (Law::RightUnit, Expr::Command(p)) => {
            let x = fresh("x", cx, free_vars_command(p));
            command(Command::let_(Pattern::var(&x), p.clone(), Command::unit(Term::var(&x))))
        }
        // let x = P in (let y = Q in R) = let y = (let x = P in Q) in R
        (Law::Assoc, Expr::Command(c)) => match &c.kind {
            CommandKind::Let(x, p, inner) => match &inner.kind {
                CommandKind::Let(y, q, r) => {
                    if !disjoint(&pattern_vars(x), &free_vars_command(r)) {
                        return Err(side(law, format!("`{x}` is free in the body")));
                    }
                    let bound = Command::let_(x.clone(), (**p).clone(), (**q).clone());
                    command(Command::let_(y.clone(), bound, (**r).clone()))
                }
                _ => Ok(None),
            },
            _ => Ok(None),
        },
        (_, Expr::Command(_)) => Err(RewriteError::Irreversible(law)),
        (Law::EtaArrow, Expr::Term(l)) => {
            let x = fresh("x", cx, free_vars_term(l));
            term(Term::arrow(Pattern::var(&x), Command::app(l.clone(), Term::var(&x))))
        }
        (Law::EtaFun, Expr::Term(l)) => {
            let x = fresh("x", cx, free_vars_term(l));
            term(Term::lam(Pattern::var(&x), Term::app(l.clone(), Term::var(&x))))
        }
        (Law::EtaPair, Expr::Term(l)) => term(Term::pair(Term::fst(l.clone()), Term::snd(l.clone()))),
        (Law::EqTrue, Expr::Term(m)) => term(Term::eq(m.clone(), Term::bool(true))),
        (Law::IfEta, Expr::Term(m)) => term(Term::if_(m.clone(), Term::bool(true), Term::bool(false))),
        (Law::MRight, Expr::Term(l)) => {
            let x = fresh("x", cx, free_vars_term(l));
            term(Term::vlet(Pattern::var(&x), l.clone(), Term::vunit(Term::var(&x))))
        }
        (Law::MZeroL, Expr::Term(a)) => term(Term::vadd(Term::mzero(), a.clone())),
        (Law::MZeroR, Expr::Term(a)) => term(Term::vadd(a.clone(), Term::mzero())),
        (Law::PlusAssoc, Expr::Term(t)) => match &t.kind {
            K::VecAdd(ab, c) => match &ab.kind {
                K::VecAdd(a, b) => term(Term::vadd((**a).clone(), Term::vadd((**b).clone(), (**c).clone()))),
                _ => Ok(None),
            },
            _ => Ok(None),
        },
        (Law::MAssoc, Expr::Term(t)) => match &t.kind {
            K::VecLet(x, l, inner) => match &inner.kind {
                K::VecLet(y, n, t2) => {
                    if !disjoint(&pattern_vars(x), &free_vars_term(t2)) {
                        return Err(side(law, format!("`{x}` is free in the body")));
                    }
                    term(Term::vlet(y.clone(), Term::vlet(x.clone(), (**l).clone(), (**n).clone()), (**t2).clone()))
                }
                _ => Ok(None),
            },
            _ => Ok(None),
        },
        (Law::LetPlus, Expr::Term(t)) => match &t.kind {
            K::VecAdd(a, b) => match (&a.kind, &b.kind) {
                (K::VecLet(p, m, t1), K::VecLet(q, n, t2)) if p == q && alpha_eq_term(t1, t2) => {
                    term(Term::vlet(p.clone(), Term::vadd((**m).clone(), (**n).clone()), (**t1).clone()))
                }
                _ => Ok(None),
            },
            _ => Ok(None),
        },
        // fold a definition body back into its name
        (Law::DeltaUnfold, Expr::Term(t)) => {
            for (name, def) in cx.defs {
                if alpha_eq_term(&def.body, t) && !cx.bound.contains(name) {
                    return Ok(Some((Expr::Term(Term::var(name)), Some(name.clone()))));
                }
            }
            Ok(None)
        }
        (_, Expr::Term(_)) => Err(RewriteError::Irreversible(law)),
    }
}

/// Alpha-equivalence on either sort.
pub(crate) fn same(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Term(x), Expr::Term(y)) => alpha_eq_term(x, y),
        (Expr::Command(x), Expr::Command(y)) => alpha_eq_command(x, y),
        _ => false,
    }
}
