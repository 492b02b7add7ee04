//! Printing terms and commands back to surface syntax.
//!
//! Output is a single line and always re-parses to an alpha-equivalent
//! tree. Parentheses are inserted by precedence level only.

use super::{Command, CommandKind, Term, TermKind};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Top,
    Eq,
    Sum,
    Scale,
    App,
    Atom,
}

pub fn term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, Level::Top);
    out
}

pub fn command(c: &Command) -> String {
    let mut out = String::new();
    write_command(&mut out, c, false);
    out
}

fn level_of(t: &Term) -> Level {
    match &t.kind {
        TermKind::Lam(..)
        | TermKind::ArrowAbs(..)
        | TermKind::Let(..)
        | TermKind::VecLet(..)
        | TermKind::If(..) => Level::Top,
        TermKind::Eq(..) => Level::Eq,
        TermKind::VecAdd(..) | TermKind::VecSub(..) => Level::Sum,
        TermKind::VecScale(..) => Level::Scale,
        TermKind::App(..) | TermKind::Fst(_) | TermKind::Snd(_) => Level::App,
        TermKind::Var(_) | TermKind::Bool(_) | TermKind::MZero | TermKind::Pair(..) | TermKind::VecUnit(_) => {
            Level::Atom
        }
    }
}

fn write_term(out: &mut String, t: &Term, ctx: Level) {
    if level_of(t) < ctx {
        out.push('(');
        write_term(out, t, Level::Top);
        out.push(')');
        return;
    }
    match &t.kind {
        TermKind::Var(x) => out.push_str(x),
        TermKind::Bool(b) => out.push_str(if *b { "True" } else { "False" }),
        TermKind::MZero => out.push_str("mzero"),
        TermKind::Pair(a, b) => {
            out.push('(');
            write_term(out, a, Level::Top);
            let mut rest: &Term = b;
            while let TermKind::Pair(x, y) = &rest.kind {
                out.push_str(", ");
                write_term(out, x, Level::Top);
                rest = y;
            }
            out.push_str(", ");
            write_term(out, rest, Level::Top);
            out.push(')');
        }
        TermKind::VecUnit(m) => {
            out.push('[');
            write_term(out, m, Level::Top);
            out.push(']');
        }
        TermKind::Fst(m) | TermKind::Snd(m) => {
            out.push_str(if matches!(t.kind, TermKind::Fst(_)) { "fst " } else { "snd " });
            write_term(out, m, Level::Atom);
        }
        TermKind::App(f, a) => {
            write_term(out, f, Level::App);
            out.push(' ');
            write_term(out, a, Level::Atom);
        }
        TermKind::VecScale(s, m) => {
            out.push_str(&format!("{s} * "));
            write_term(out, m, Level::Scale);
        }
        TermKind::VecAdd(a, b) | TermKind::VecSub(a, b) => {
            write_term(out, a, Level::Sum);
            out.push_str(if matches!(t.kind, TermKind::VecAdd(..)) { " + " } else { " - " });
            write_term(out, b, Level::Scale);
        }
        TermKind::Eq(a, b) => {
            write_term(out, a, Level::Sum);
            out.push_str(" == ");
            write_term(out, b, Level::Sum);
        }
        TermKind::Lam(p, ty, body) => {
            out.push_str(&format!("\\{p}"));
            if let Some(ty) = ty {
                out.push_str(&format!(" : {ty}"));
            }
            out.push_str(". ");
            write_term(out, body, Level::Top);
        }
        TermKind::ArrowAbs(p, ty, body) => {
            out.push_str(&format!("\\•{p}"));
            if let Some(ty) = ty {
                out.push_str(&format!(" : {ty}"));
            }
            out.push_str(". ");
            write_command(out, body, false);
        }
        TermKind::Let(p, m, n) | TermKind::VecLet(p, m, n) => {
            let op = if matches!(t.kind, TermKind::Let(..)) { "=" } else { "<-" };
            out.push_str(&format!("let {p} {op} "));
            write_term(out, m, Level::Top);
            out.push_str(" in ");
            write_term(out, n, Level::Top);
        }
        TermKind::If(c, a, b) => {
            out.push_str("if ");
            write_term(out, c, Level::Top);
            out.push_str(" then ");
            write_term(out, a, Level::Top);
            out.push_str(" else ");
            write_term(out, b, Level::Top);
        }
    }
}

fn write_command(out: &mut String, c: &Command, bound_position: bool) {
    match &c.kind {
        CommandKind::App(l, m) => {
            // a leading `[` would read as a unit command
            let arrow = {
                let mut s = String::new();
                write_term(&mut s, l, Level::App);
                s
            };
            if arrow.starts_with('[') {
                out.push_str(&format!("({arrow})"));
            } else {
                out.push_str(&arrow);
            }
            out.push_str(" • ");
            write_term(out, m, Level::Atom);
        }
        CommandKind::Unit(m) => {
            out.push('[');
            write_term(out, m, Level::Top);
            out.push(']');
        }
        CommandKind::Meas(m) | CommandKind::TrL(m) => {
            out.push_str(if matches!(c.kind, CommandKind::Meas(_)) { "meas • " } else { "trL • " });
            write_term(out, m, Level::Atom);
        }
        CommandKind::Let(p, bound, body) => {
            if bound_position {
                out.push('(');
            }
            out.push_str(&format!("let {p} = "));
            write_command(out, bound, true);
            out.push_str(" in ");
            write_command(out, body, false);
            if bound_position {
                out.push(')');
            }
        }
    }
}
