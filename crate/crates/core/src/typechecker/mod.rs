//! Typing for terms (`Γ ⊢ M : A`) and commands (`Γ; Δ ⊢ P ! Dens A`).
//!
//! Inference is unification-based. Variables bound by `\•` or by a
//! command `let` live in Δ: they may flow into arguments, units, `meas`
//! and `trL`, but never into the arrow position of `L • M`.
//!
//! A successful check produces a typed tree ([`TTerm`], [`TCommand`]) in
//! which every node carries its type and every command unit records
//! whether it lifts a classical value or a vector.

mod infer;
mod typed;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Command, Definition, Pos, Program, Term, TypeExpr};

pub use typed::{TCommand, TCommandKind, TTerm, TTermKind, UnitMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    Mismatch,
    Unbound,
    DeltaMisuse,
    NonClassicalBasis,
    PatternArity,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeErrorKind::Mismatch => "mismatch",
            TypeErrorKind::Unbound => "unbound",
            TypeErrorKind::DeltaMisuse => "delta-misuse",
            TypeErrorKind::NonClassicalBasis => "non-classical-basis",
            TypeErrorKind::PatternArity => "pattern-arity",
        })
    }
}

/// A type error with its source position.
///
/// `Display` renders `line:col: kind: expected T1, found T2`; use
/// [`TypeError::render`] to prefix a file name.
#[derive(Clone, Debug, Error, PartialEq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub pos: Pos,
    pub expected: Option<TypeExpr>,
    pub found: Option<TypeExpr>,
    pub detail: String,
    /// The definition being checked, when known.
    pub definition: Option<String>,
}

impl TypeError {
    pub(crate) fn new(kind: TypeErrorKind, pos: Pos, detail: impl Into<String>) -> Self {
        TypeError { kind, pos, expected: None, found: None, detail: detail.into(), definition: None }
    }

    pub(crate) fn mismatch(pos: Pos, expected: TypeExpr, found: TypeExpr) -> Self {
        TypeError {
            kind: TypeErrorKind::Mismatch,
            pos,
            expected: Some(expected),
            found: Some(found),
            detail: String::new(),
            definition: None,
        }
    }

    pub fn render(&self, file: &str) -> String {
        format!("{file}:{self}")
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: ", self.pos, self.kind)?;
        match (&self.expected, &self.found) {
            (Some(e), Some(g)) => write!(f, "expected {e}, found {g}")?,
            _ => write!(f, "{}", self.detail)?,
        }
        if let Some(d) = &self.definition {
            write!(f, " (in `{d}`)")?;
        }
        Ok(())
    }
}

/// The two typing environments. Later entries shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnvPair {
    /// Lambda-bound and top-level names.
    pub gamma: Vec<(String, TypeExpr)>,
    /// Arrow-bound names.
    pub delta: Vec<(String, TypeExpr)>,
}

impl EnvPair {
    pub fn new() -> Self {
        EnvPair::default()
    }

    pub fn with_gamma(mut self, name: impl Into<String>, ty: TypeExpr) -> Self {
        self.gamma.push((name.into(), ty));
        self
    }

    pub fn with_delta(mut self, name: impl Into<String>, ty: TypeExpr) -> Self {
        self.delta.push((name.into(), ty));
        self
    }
}

/// Infers the type of a term. Δ entries are visible only inside the
/// argument positions of commands.
pub fn infer_term(env: &EnvPair, t: &Term) -> Result<TypeExpr, TypeError> {
    Ok(elaborate_term(env, t)?.ty)
}

pub fn elaborate_term(env: &EnvPair, t: &Term) -> Result<TTerm, TypeError> {
    infer::Checker::new(env).finish_term(t)
}

/// Returns `A` such that `Γ; Δ ⊢ P ! Dens A`.
pub fn check_command(env: &EnvPair, c: &Command) -> Result<TypeExpr, TypeError> {
    Ok(elaborate_command(env, c)?.ty)
}

pub fn elaborate_command(env: &EnvPair, c: &Command) -> Result<TCommand, TypeError> {
    infer::Checker::new(env).finish_command(c)
}

#[derive(Clone, Debug)]
pub struct CheckedDef {
    pub def: Definition,
    pub typed: TTerm,
    /// The annotation when present, otherwise the inferred type.
    pub ty: TypeExpr,
}

/// Definitions that passed checking, in source order.
#[derive(Clone, Debug, Default)]
pub struct CheckedProgram {
    pub defs: Vec<CheckedDef>,
}

impl CheckedProgram {
    pub fn get(&self, name: &str) -> Option<&CheckedDef> {
        self.defs.iter().rev().find(|d| d.def.name == name)
    }

    pub fn types(&self) -> BTreeMap<String, TypeExpr> {
        self.defs.iter().map(|d| (d.def.name.clone(), d.ty.clone())).collect()
    }

    /// The top-level names as a Γ environment.
    pub fn env(&self) -> EnvPair {
        EnvPair { gamma: self.defs.iter().map(|d| (d.def.name.clone(), d.ty.clone())).collect(), delta: vec![] }
    }

    /// Concatenation; later definitions shadow earlier ones.
    pub fn extend(&self, other: &CheckedProgram) -> CheckedProgram {
        let mut defs: Vec<CheckedDef> =
            self.defs.iter().filter(|d| other.get(&d.def.name).is_none()).cloned().collect();
        defs.extend(other.defs.iter().cloned());
        CheckedProgram { defs }
    }
}

/// Checks definitions in order. Each may refer only to earlier ones.
pub fn check_program(p: &Program) -> Result<CheckedProgram, TypeError> {
    check_program_with(&CheckedProgram::default(), p)
}

/// Like [`check_program`], with `base` (typically the prelude) in scope.
/// Definitions in `p` may shadow names from `base`.
pub fn check_program_with(base: &CheckedProgram, p: &Program) -> Result<CheckedProgram, TypeError> {
    let mut env = base.env();
    let mut out = CheckedProgram::default();
    for def in &p.defs {
        let (typed, ty) = infer::check_definition(&env, def).map_err(|mut e| {
            e.definition = Some(def.name.clone());
            e
        })?;
        env.gamma.push((def.name.clone(), ty.clone()));
        out.defs.push(CheckedDef { def: def.clone(), typed, ty });
    }
    Ok(out)
}
