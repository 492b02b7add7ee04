//! Compilation of commands into point-free classic-arrow combinators, and
//! the inverse translation back into arrow abstractions.
//!
//! The arrow-bound environment is a single tuple. It starts as the
//! abstraction's own pattern and each command `let p = P in Q` extends it
//! to `(Δ, p)`:
//!
//! ```text
//! [[L • M]]Δ          = arr (\Δ. M) >>> [[L]]
//! [[ [M] ]]Δ          = arr (\Δ. M)            (lift when M : Vec A)
//! [[let p = P in Q]]Δ = (arr id &&& [[P]]Δ) >>> [[Q]](Δ, p)
//! [[meas M]]Δ         = arr (\Δ. M) >>> meas
//! [[trL M]]Δ          = arr (\Δ. M) >>> trL
//! ```

mod inverse;

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::syntax::{fresh_name, Pattern, TypeExpr};
use crate::typechecker::{TCommand, TCommandKind, TTerm, TTermKind, UnitMode};

pub use inverse::inverse_translate;

/// A pure function carried by `arr` and `lift` nodes.
#[derive(Clone, Debug, PartialEq)]
pub enum ArrFn {
    Identity,
    /// `\param. body`.
    Lambda { param: Pattern, body: TTerm },
}

/// A combinator tree with its input and output types.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicExpr {
    pub node: Node,
    pub input: TypeExpr,
    pub output: TypeExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Arr(ArrFn),
    Compose(Box<ClassicExpr>, Box<ClassicExpr>),
    /// `first f` with the untouched right component.
    First(Box<ClassicExpr>, TypeExpr),
    /// `second f` with the untouched left component.
    Second(Box<ClassicExpr>, TypeExpr),
    Fanout(Box<ClassicExpr>, Box<ClassicExpr>),
    MeasC(TypeExpr),
    TrLC(TypeExpr, TypeExpr),
    /// A function `A -> Vec B` lifted to a superoperator.
    LiftLin(ArrFn),
    /// A superoperator bound to a name.
    NamedSuper(String),
    /// Any other superoperator-valued term.
    Embedded(TTerm),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("translation requires a well-typed superoperator term, found {0}")]
pub struct TranslateError(pub TypeExpr);

impl ClassicExpr {
    fn new(node: Node, input: TypeExpr, output: TypeExpr) -> Self {
        ClassicExpr { node, input, output }
    }

    pub fn compose(f: ClassicExpr, g: ClassicExpr) -> Self {
        let (input, output) = (f.input.clone(), g.output.clone());
        ClassicExpr::new(Node::Compose(Box::new(f), Box::new(g)), input, output)
    }

    pub fn fanout(f: ClassicExpr, g: ClassicExpr) -> Self {
        let input = f.input.clone();
        let output = TypeExpr::prod(f.output.clone(), g.output.clone());
        ClassicExpr::new(Node::Fanout(Box::new(f), Box::new(g)), input, output)
    }

    pub fn first(f: ClassicExpr, c: TypeExpr) -> Self {
        let input = TypeExpr::prod(f.input.clone(), c.clone());
        let output = TypeExpr::prod(f.output.clone(), c.clone());
        ClassicExpr::new(Node::First(Box::new(f), c), input, output)
    }

    pub fn second(f: ClassicExpr, c: TypeExpr) -> Self {
        let input = TypeExpr::prod(c.clone(), f.input.clone());
        let output = TypeExpr::prod(c.clone(), f.output.clone());
        ClassicExpr::new(Node::Second(Box::new(f), c), input, output)
    }

    pub fn arr_id(ty: TypeExpr) -> Self {
        ClassicExpr::new(Node::Arr(ArrFn::Identity), ty.clone(), ty)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + match &self.node {
            Node::Compose(f, g) | Node::Fanout(f, g) => f.size() + g.size(),
            Node::First(f, _) | Node::Second(f, _) => f.size(),
            _ => 0,
        }
    }

    /// Indented s-expression, one node per line.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        self.emit_into(&mut out, 0);
        out
    }

    fn emit_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let lambda = |f: &ArrFn| match f {
            ArrFn::Identity => "id".to_string(),
            ArrFn::Lambda { param, body } => format!("(\\{param}. {})", body.erase()),
        };
        match &self.node {
            Node::Arr(f) => writeln!(out, "{pad}(arr {})", lambda(f)),
            Node::LiftLin(f) => writeln!(out, "{pad}(lift {})", lambda(f)),
            Node::MeasC(a) => writeln!(out, "{pad}(meas {a})"),
            Node::TrLC(a, b) => writeln!(out, "{pad}(trL {a} {b})"),
            Node::NamedSuper(n) => writeln!(out, "{pad}(named {n})"),
            Node::Embedded(t) => writeln!(out, "{pad}(term {})", t.erase()),
            Node::Compose(f, g) | Node::Fanout(f, g) => {
                let tag = if matches!(self.node, Node::Compose(..)) { "compose" } else { "fanout" };
                let _ = writeln!(out, "{pad}({tag}");
                f.emit_into(out, depth + 1);
                g.emit_into(out, depth + 1);
                writeln!(out, "{pad})")
            }
            Node::First(f, c) | Node::Second(f, c) => {
                let tag = if matches!(self.node, Node::First(..)) { "first" } else { "second" };
                let _ = writeln!(out, "{pad}({tag} {c}");
                f.emit_into(out, depth + 1);
                writeln!(out, "{pad})")
            }
        }
        .expect("writing to a String cannot fail");
    }
}

impl fmt::Display for ClassicExpr {
    /// Single-line s-expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.emit();
        let mut first = true;
        for line in text.lines() {
            let trimmed = line.trim_start();
            if !first && !trimmed.starts_with(')') {
                f.write_char(' ')?;
            }
            f.write_str(trimmed)?;
            first = false;
        }
        Ok(())
    }
}

/// The arrow-bound environment as one pattern over one tuple type.
#[derive(Clone, Debug)]
struct Delta {
    pattern: Pattern,
    ty: TypeExpr,
}

impl Delta {
    /// `(Δ, p)`. Names of Δ shadowed by `p` are renamed out of the way.
    fn extend(&self, p: &Pattern, ty: &TypeExpr) -> Delta {
        let new_names: BTreeSet<String> = p.vars().into_iter().map(str::to_string).collect();
        let mut taken: BTreeSet<String> = self.pattern.vars().into_iter().map(str::to_string).collect();
        taken.extend(new_names.iter().cloned());
        let old = rename_shadowed(&self.pattern, &new_names, &mut taken);
        Delta { pattern: Pattern::pair(old, p.clone()), ty: TypeExpr::prod(self.ty.clone(), ty.clone()) }
    }

    fn arr(&self, body: &TTerm) -> ClassicExpr {
        let f = ArrFn::Lambda { param: self.pattern.clone(), body: body.clone() };
        ClassicExpr::new(Node::Arr(f), self.ty.clone(), body.ty.clone())
    }
}

fn rename_shadowed(p: &Pattern, shadowed: &BTreeSet<String>, taken: &mut BTreeSet<String>) -> Pattern {
    match p {
        Pattern::Var(x) if shadowed.contains(x) => {
            let fresh = fresh_name(x, taken);
            taken.insert(fresh.clone());
            Pattern::Var(fresh)
        }
        Pattern::Var(_) => p.clone(),
        Pattern::Pair(a, b) => {
            let a = rename_shadowed(a, shadowed, taken);
            Pattern::pair(a, rename_shadowed(b, shadowed, taken))
        }
    }
}

/// Translates a command under an arrow-bound environment given in binding
/// order. The resulting combinator takes the environment tuple: a single
/// entry is passed as is, more entries nest to the left.
pub fn translate_command(delta: &[(String, TypeExpr)], cmd: &TCommand) -> ClassicExpr {
    let mut entries = delta.iter();
    let (name, ty) = entries.next().expect("translation needs at least one arrow-bound variable");
    let mut d = Delta { pattern: Pattern::var(name.clone()), ty: ty.clone() };
    for (name, ty) in entries {
        d = d.extend(&Pattern::var(name.clone()), ty);
    }
    command(&d, cmd)
}

/// `[[\•p. Q]] = [[Q]]p`. Names become [`Node::NamedSuper`]; other
/// superoperator terms are embedded unchanged.
pub fn translate_term(t: &TTerm) -> Result<ClassicExpr, TranslateError> {
    let (input, output) = match &t.ty {
        TypeExpr::Super(a, b) => ((**a).clone(), (**b).clone()),
        other => return Err(TranslateError(other.clone())),
    };
    Ok(match &t.kind {
        TTermKind::ArrowAbs(p, ty, body) => command(&Delta { pattern: p.clone(), ty: ty.clone() }, body),
        TTermKind::Var(name) => ClassicExpr::new(Node::NamedSuper(name.clone()), input, output),
        _ => ClassicExpr::new(Node::Embedded(t.clone()), input, output),
    })
}

fn command(d: &Delta, c: &TCommand) -> ClassicExpr {
    match &c.kind {
        TCommandKind::App(l, m) => {
            let arrow = translate_term(l).expect("typed arrow position");
            ClassicExpr::compose(d.arr(m), arrow)
        }
        TCommandKind::Unit(m, UnitMode::Classical) => d.arr(m),
        TCommandKind::Unit(m, UnitMode::Quantum) => {
            let f = ArrFn::Lambda { param: d.pattern.clone(), body: (**m).clone() };
            ClassicExpr::new(Node::LiftLin(f), d.ty.clone(), c.ty.clone())
        }
        TCommandKind::Let(p, bound, body) => {
            let env = ClassicExpr::fanout(ClassicExpr::arr_id(d.ty.clone()), command(d, bound));
            ClassicExpr::compose(env, command(&d.extend(p, &bound.ty), body))
        }
        TCommandKind::Meas(m) => {
            let meas = ClassicExpr::new(Node::MeasC(m.ty.clone()), m.ty.clone(), c.ty.clone());
            ClassicExpr::compose(d.arr(m), meas)
        }
        TCommandKind::TrL(m) => {
            let (a, b) = match &m.ty {
                TypeExpr::Prod(a, b) => ((**a).clone(), (**b).clone()),
                other => unreachable!("trL argument typed as {other}"),
            };
            let trl = ClassicExpr::new(Node::TrLC(a, b), m.ty.clone(), c.ty.clone());
            ClassicExpr::compose(d.arr(m), trl)
        }
    }
}

#[cfg(test)]
mod tests;
