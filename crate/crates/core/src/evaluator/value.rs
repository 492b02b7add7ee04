use std::fmt;
use std::sync::Arc;

use super::{EvalError, Result};
use crate::linalg::{Classical, SuperVal, VecVal};
use crate::syntax::Pattern;
use crate::typechecker::TTerm;

/// A runtime value. Functions `A -> Vec B` (the `Lin` maps) are closures.
#[derive(Clone, Debug)]
pub enum Value {
    Bool(bool),
    Pair(Arc<Value>, Arc<Value>),
    Closure(Arc<Closure>),
    Vec(Arc<VecVal>),
    Super(Arc<SuperVal>),
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub param: Pattern,
    pub body: Arc<TTerm>,
    pub env: Env,
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn vector(v: VecVal) -> Self {
        Value::Vec(Arc::new(v))
    }

    pub fn from_classical(c: &Classical) -> Self {
        match c {
            Classical::Bool(b) => Value::Bool(*b),
            Classical::Pair(a, b) => Value::pair(Value::from_classical(a), Value::from_classical(b)),
        }
    }

    /// The basis element this value denotes, if it is built from booleans
    /// and pairs.
    pub fn to_classical(&self) -> Result<Classical> {
        match self {
            Value::Bool(b) => Ok(Classical::Bool(*b)),
            Value::Pair(a, b) => Ok(Classical::pair(a.to_classical()?, b.to_classical()?)),
            other => Err(EvalError::Internal(format!("{other} is not a basis element"))),
        }
    }

    pub fn as_vec(&self) -> Result<&VecVal> {
        match self {
            Value::Vec(v) => Ok(v),
            other => Err(EvalError::Internal(format!("expected a vector, found {other}"))),
        }
    }

    pub fn as_super(&self) -> Result<&Arc<SuperVal>> {
        match self {
            Value::Super(s) => Ok(s),
            other => Err(EvalError::Internal(format!("expected a superoperator, found {other}"))),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => f.write_str(if *b { "True" } else { "False" }),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Closure(_) => f.write_str("<function>"),
            Value::Vec(v) => {
                let terms: Vec<String> = v
                    .amps
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm() >= 5e-7)
                    .map(|(i, a)| format!("{} * [{}]", amplitude(*a), v.basis.element(i)))
                    .collect();
                if terms.is_empty() {
                    f.write_str("mzero")
                } else {
                    f.write_str(&terms.join(" + "))
                }
            }
            Value::Super(s) => write!(f, "<superoperator {} => {}>", s.input.ty(), s.output.ty()),
        }
    }
}

fn amplitude(a: num_complex::Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
    let (re, im) = (clean(a.re), clean(a.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("({re:.6}{im:+.6}i)")
    }
}

/// A persistent environment; extension shares the tail.
#[derive(Clone, Debug, Default)]
pub struct Env(Option<Arc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    name: String,
    value: Value,
    next: Env,
}

impl Env {
    pub fn bind(&self, name: &str, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode { name: name.to_string(), value, next: self.clone() })))
    }

    /// Destructures `value` along `p`.
    pub fn bind_pattern(&self, p: &Pattern, value: Value) -> Result<Env> {
        match (p, value) {
            (Pattern::Var(x), v) => Ok(self.bind(x, v)),
            (Pattern::Pair(pa, pb), Value::Pair(a, b)) => {
                self.bind_pattern(pa, (*a).clone())?.bind_pattern(pb, (*b).clone())
            }
            (p, v) => Err(EvalError::Internal(format!("pattern {p} does not match {v}"))),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Value> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if node.name == name {
                return Some(node.value.clone());
            }
            cur = &node.next;
        }
        None
    }
}
