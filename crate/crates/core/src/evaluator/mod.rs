//! Call-by-value evaluation of typed terms.
//!
//! Superoperator terms are compiled with the translator and materialized
//! eagerly as matrices; see [`Route`] for the two ways a combinator tree
//! can be turned into a [`SuperVal`].

mod arrows;
mod value;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{vec_return, Basis, DensVal, LinalgError, SuperVal, VecVal, C64};
use crate::syntax::{Term, TypeExpr};
use crate::translator::{translate_term, ClassicExpr, TranslateError};
use crate::typechecker::{elaborate_term, CheckedProgram, TTerm, TTermKind, TypeError};

pub use value::{Closure, Env, Value};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("internal evaluation error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// How a combinator tree becomes a matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Applies the tree to each unit `|i⟩⟨j|` as a sum over paths, touching
    /// only the indices that carry weight.
    #[default]
    Sparse,
    /// Builds every subtree whose matrices stay under the size cap with the
    /// dense combinators (`super_arr`, `super_first`, `super_fanout`, ...)
    /// and stitches larger nodes together sparsely.
    Dense,
}

/// Matrix entries above which the dense route stops materializing a node.
pub const DENSE_CAP: usize = 1 << 20;

/// Evaluates the definitions of a checked program and keeps their values.
#[derive(Clone, Debug)]
pub struct Evaluator {
    program: CheckedProgram,
    globals: Env,
    values: BTreeMap<String, Value>,
}

impl Evaluator {
    /// Evaluates every definition in order, each with the earlier ones in
    /// scope.
    pub fn new(program: &CheckedProgram) -> Result<Self> {
        let mut ev = Evaluator { program: CheckedProgram::default(), globals: Env::default(), values: BTreeMap::new() };
        for def in &program.defs {
            let v = ev.eval_typed(&def.typed)?;
            ev.globals = ev.globals.bind(&def.def.name, v.clone());
            ev.values.insert(def.def.name.clone(), v);
            ev.program.defs.push(def.clone());
        }
        Ok(ev)
    }

    pub fn program(&self) -> &CheckedProgram {
        &self.program
    }

    pub fn globals(&self) -> &Env {
        &self.globals
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }

    /// The matrix of a superoperator-valued definition.
    pub fn super_named(&self, name: &str) -> Result<Arc<SuperVal>> {
        match self.get(name) {
            Some(Value::Super(s)) => Ok(s.clone()),
            Some(other) => Err(EvalError::Internal(format!("`{name}` is {other}, not a superoperator"))),
            None => Err(EvalError::Unbound(name.to_string())),
        }
    }

    /// Typechecks `t` against the definitions and evaluates it.
    pub fn eval_term(&self, t: &Term) -> Result<Value> {
        let typed = elaborate_term(&self.program.env(), t)?;
        self.eval_typed(&typed)
    }

    /// Evaluates an already elaborated term with the definitions in scope.
    pub fn eval_typed(&self, t: &TTerm) -> Result<Value> {
        self.eval(&self.globals, t)
    }

    /// Evaluates `t` under an explicit environment.
    pub fn eval(&self, env: &Env, t: &TTerm) -> Result<Value> {
        Ok(match &t.kind {
            TTermKind::Var(x) => env.lookup(x).ok_or_else(|| EvalError::Unbound(x.clone()))?,
            TTermKind::Bool(b) => Value::Bool(*b),
            TTermKind::Pair(a, b) => Value::pair(self.eval(env, a)?, self.eval(env, b)?),
            TTermKind::Fst(p) | TTermKind::Snd(p) => match self.eval(env, p)? {
                Value::Pair(a, b) => {
                    let v = if matches!(t.kind, TTermKind::Fst(_)) { a } else { b };
                    (*v).clone()
                }
                other => return Err(internal(format!("projection of {other}"))),
            },
            TTermKind::Lam(p, _, body) => {
                Value::Closure(Arc::new(Closure { param: p.clone(), body: Arc::new((**body).clone()), env: env.clone() }))
            }
            TTermKind::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(&f, a)?
            }
            TTermKind::Let(p, m, n) => {
                let v = self.eval(env, m)?;
                self.eval(&env.bind_pattern(p, v)?, n)?
            }
            TTermKind::If(c, a, b) => match self.eval(env, c)? {
                Value::Bool(true) => self.eval(env, a)?,
                Value::Bool(false) => self.eval(env, b)?,
                other => return Err(internal(format!("condition evaluated to {other}"))),
            },
            TTermKind::Eq(a, b) => {
                let (a, b) = (self.eval(env, a)?, self.eval(env, b)?);
                Value::Bool(a.to_classical()? == b.to_classical()?)
            }
            TTermKind::VecUnit(m) => {
                let basis = Basis::new(&m.ty)?;
                Value::vector(vec_return(&basis, &self.eval(env, m)?.to_classical()?)?)
            }
            TTermKind::VecLet(p, m, n) => {
                let v = self.eval(env, m)?;
                let v = v.as_vec()?;
                let out = vec_basis(&t.ty)?;
                let mut acc = VecVal::zero(&out);
                for (i, amp) in v.amps.iter().enumerate() {
                    if *amp == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let a = Value::from_classical(&v.basis.element(i));
                    let image = self.eval(&env.bind_pattern(p, a)?, n)?;
                    let image = image.as_vec()?;
                    out.expect_same(&image.basis)?;
                    acc.amps.scaled_add(*amp, &image.amps);
                }
                Value::vector(acc)
            }
            TTermKind::VecAdd(a, b) | TTermKind::VecSub(a, b) => {
                let (a, b) = (self.eval(env, a)?, self.eval(env, b)?);
                let (a, b) = (a.as_vec()?, b.as_vec()?);
                Value::vector(if matches!(t.kind, TTermKind::VecAdd(..)) { a.add(b)? } else { a.sub(b)? })
            }
            TTermKind::VecScale(s, m) => Value::vector(self.eval(env, m)?.as_vec()?.scale(s.0)),
            TTermKind::MZero => Value::vector(VecVal::zero(&vec_basis(&t.ty)?)),
            TTermKind::ArrowAbs(..) => {
                let expr = translate_term(t)?;
                Value::Super(Arc::new(self.materialize_in(env, &expr, Route::Sparse)?))
            }
        })
    }

    /// Applies a function value.
    pub fn apply(&self, f: &Value, a: Value) -> Result<Value> {
        match f {
            Value::Closure(c) => self.eval(&c.env.bind_pattern(&c.param, a)?, &c.body),
            other => Err(internal(format!("application of {other}"))),
        }
    }

    /// The matrix of a combinator tree translated under the definitions.
    pub fn materialize(&self, e: &ClassicExpr, route: Route) -> Result<SuperVal> {
        self.materialize_in(&self.globals, e, route)
    }

    /// Like [`Evaluator::materialize`] with free names resolved in `env`.
    pub fn materialize_in(&self, env: &Env, e: &ClassicExpr, route: Route) -> Result<SuperVal> {
        arrows::materialize(self, env, e, route)
    }
}

fn internal(msg: String) -> EvalError {
    EvalError::Internal(msg)
}

fn vec_basis(ty: &TypeExpr) -> Result<Basis> {
    match ty {
        TypeExpr::Vec(a) => Ok(Basis::new(a)?),
        other => Err(internal(format!("expected a vector type, found {other}"))),
    }
}

trait ExpectSame {
    fn expect_same(&self, other: &Basis) -> Result<()>;
}

impl ExpectSame for Basis {
    fn expect_same(&self, other: &Basis) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(LinalgError::BasisMismatch { expected: self.ty().clone(), found: other.ty().clone() }.into())
        }
    }
}

/// `run s d`: the density `s` produces from `d`.
pub fn run(s: &SuperVal, d: &DensVal) -> std::result::Result<DensVal, LinalgError> {
    s.apply(d)
}

/// Evaluates every definition of a checked program.
pub fn eval_program(p: &CheckedProgram) -> Result<BTreeMap<String, Value>> {
    Ok(Evaluator::new(p)?.values)
}

#[cfg(test)]
mod tests;
