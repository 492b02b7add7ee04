//! Equational reasoning: single law applications, normalization with
//! proof traces, and equality proofs with a semantic fallback.
//!
//! `normalize` applies [`Law::CONTRACTIONS`] left to right at the
//! leftmost-outermost redex until none fires. Eta, associativity and
//! distribution laws never fire automatically but remain available to
//! [`Rewriter::apply_law_at`]. Definitions are unfolded automatically only
//! when their type does not mention `Super`.

mod laws;
mod modes;
mod path;
mod trace;

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::evaluator::{EvalError, Evaluator, Value};
use crate::linalg::{Basis, DensVal, SuperVal, VecVal, C64};
use crate::syntax::{Expr, Term, TypeExpr};
use crate::typechecker::{elaborate_term, CheckedProgram, TypeError};

pub use laws::{Direction, Law};
pub use path::{preorder, replace_at, subexpr, Path};
pub use trace::{ProofStep, ProofTrace};

use laws::{rewrite, same, Ctx, Unfoldable};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RewriteError {
    #[error("{law} does not match at {}", trace::show_path(path))]
    NoMatch { law: Law, path: Path },
    #[error("side condition of {law} violated: {detail}")]
    SideCondition { law: Law, detail: String },
    #[error("{0} cannot be applied right to left without further arguments")]
    Irreversible(Law),
    #[error("no subexpression at {}", trace::show_path(.0))]
    BadPath(Path),
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("the two sides have different types: {lhs} and {rhs}")]
    TypeMismatch { lhs: TypeExpr, rhs: TypeExpr },
    #[error("replay diverged at step {step}")]
    ReplayMismatch { step: usize },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub type Result<T> = std::result::Result<T, RewriteError>;

/// A concrete input on which two sides differ.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Input density for superoperators, `None` for closed vectors and values.
    pub input: Option<DensVal>,
    /// Input basis element for functions.
    pub argument: Option<String>,
    pub lhs: String,
    pub rhs: String,
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    ProvedByNormalization { lhs: ProofTrace, rhs: ProofTrace },
    ProvedSemantically { tolerance: f64, difference: f64 },
    NotEqual(Witness),
    Unknown(String),
}

/// Outputs further apart than this make a witness.
pub const WITNESS_GAP: f64 = 1e-6;

/// Laws over the definitions of a checked program.
pub struct Rewriter {
    program: CheckedProgram,
    defs: BTreeMap<String, Unfoldable>,
    evaluator: OnceCell<std::result::Result<Evaluator, EvalError>>,
}

impl Rewriter {
    pub fn new(program: &CheckedProgram) -> Self {
        let defs = program
            .defs
            .iter()
            .map(|d| {
                let automatic = !d.ty.mentions_super();
                (d.def.name.clone(), Unfoldable { body: d.def.body.clone(), automatic })
            })
            .collect();
        Rewriter { program: program.clone(), defs, evaluator: OnceCell::new() }
    }

    pub fn program(&self) -> &CheckedProgram {
        &self.program
    }

    fn ctx<'a>(
        &'a self,
        bound: &'a BTreeSet<String>,
        normalizing: bool,
        quantum_units: &'a BTreeSet<Path>,
        here: &'a [usize],
    ) -> Ctx<'a> {
        Ctx { defs: &self.defs, bound, normalizing, quantum_units, here }
    }

    /// Rewrites the node at `path` with one law.
    pub fn apply_law_at(&self, e: &Expr, path: &[usize], law: Law, dir: Direction) -> Result<Expr> {
        self.step(e, path, law, dir).map(|(out, _)| out)
    }

    fn step(&self, e: &Expr, path: &[usize], law: Law, dir: Direction) -> Result<(Expr, Option<String>)> {
        let (node, bound) = subexpr(e, path).ok_or_else(|| RewriteError::BadPath(path.to_vec()))?;
        let quantum = modes::quantum_units(&self.program, e);
        let (new, unfolded) = rewrite(law, dir, &node, &self.ctx(&bound, false, &quantum, path))?
            .ok_or_else(|| RewriteError::NoMatch { law, path: path.to_vec() })?;
        let out = replace_at(e, path, new).ok_or_else(|| RewriteError::BadPath(path.to_vec()))?;
        Ok((out, unfolded))
    }

    /// The leftmost-outermost contraction, if any.
    fn find_redex(
        &self,
        e: &Expr,
        bound: &BTreeSet<String>,
        quantum: &BTreeSet<Path>,
        path: &mut Path,
    ) -> Option<(Path, Law, Expr, Option<String>)> {
        let here = path.clone();
        let cx = self.ctx(bound, true, quantum, &here);
        for law in Law::CONTRACTIONS {
            if let Ok(Some((new, unfolded))) = rewrite(law, Direction::L2R, e, &cx) {
                return Some((path.clone(), law, new, unfolded));
            }
        }
        for (i, (child, binder)) in path::children(e).into_iter().enumerate() {
            let mut inner = bound.clone();
            if let Some(p) = binder {
                inner.extend(p.vars().into_iter().map(str::to_string));
            }
            path.push(i);
            let found = self.find_redex(&child, &inner, quantum, path);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Contracts until no law fires or `fuel` steps have been taken. The
    /// trace's `end` is the result; `exhausted` is set if fuel ran out
    /// while a redex remained.
    pub fn normalize(&self, e: &Expr, fuel: usize) -> ProofTrace {
        let mut cur = e.clone();
        let mut steps = Vec::new();
        let mut exhausted = false;
        loop {
            let quantum = modes::quantum_units(&self.program, &cur);
            let Some((path, law, new, unfolded)) = self.find_redex(&cur, &BTreeSet::new(), &quantum, &mut Vec::new())
            else {
                break;
            };
            if steps.len() == fuel {
                exhausted = true;
                break;
            }
            cur = replace_at(&cur, &path, new).expect("redex path is valid");
            steps.push(ProofStep { law, path, direction: Direction::L2R, unfolded, result: cur.clone() });
        }
        ProofTrace { start: e.clone(), steps, end: cur, exhausted }
    }

    /// Re-applies every step and checks each snapshot.
    pub fn replay(&self, t: &ProofTrace) -> Result<Expr> {
        let mut cur = t.start.clone();
        for (k, s) in t.steps.iter().enumerate() {
            let (next, unfolded) = self.step(&cur, &s.path, s.law, s.direction)?;
            if !same(&next, &s.result) || unfolded != s.unfolded {
                return Err(RewriteError::ReplayMismatch { step: k });
            }
            cur = next;
        }
        if !same(&cur, &t.end) {
            return Err(RewriteError::ReplayMismatch { step: t.steps.len() });
        }
        Ok(cur)
    }

    fn evaluator(&self) -> Result<&Evaluator> {
        self.evaluator.get_or_init(|| Evaluator::new(&self.program)).as_ref().map_err(|e| e.clone().into())
    }

    /// Tries normalization first; if the normal forms differ, compares
    /// denotations at `tol` on every basis input.
    pub fn prove_equal(&self, a: &Term, b: &Term, fuel: usize, tol: f64) -> Result<Verdict> {
        let env = self.program.env();
        let (ta, tb) = (elaborate_term(&env, a)?, elaborate_term(&env, b)?);
        if !ta.ty.equiv(&tb.ty) {
            return Err(RewriteError::TypeMismatch { lhs: ta.ty, rhs: tb.ty });
        }
        let (na, nb) = (self.normalize(&Expr::Term(a.clone()), fuel), self.normalize(&Expr::Term(b.clone()), fuel));
        if same(&na.end, &nb.end) {
            return Ok(Verdict::ProvedByNormalization { lhs: na, rhs: nb });
        }
        let ev = self.evaluator()?;
        let (va, vb) = (ev.eval_typed(&ta)?, ev.eval_typed(&tb)?);
        semantic(ev, &va, &vb, &ta.ty, tol)
    }
}

fn semantic(ev: &Evaluator, a: &Value, b: &Value, ty: &TypeExpr, tol: f64) -> Result<Verdict> {
    match (a, b) {
        (Value::Super(sa), Value::Super(sb)) => Ok(compare_supers(sa, sb, tol)),
        (Value::Vec(va), Value::Vec(vb)) => {
            let d = va.max_diff(vb).map_err(EvalError::from)?;
            Ok(decide(d, tol, || Witness {
                input: None,
                argument: None,
                lhs: a.to_string(),
                rhs: b.to_string(),
                difference: d,
            }))
        }
        (Value::Bool(_) | Value::Pair(..), Value::Bool(_) | Value::Pair(..)) => {
            let (ca, cb) = (a.to_classical()?, b.to_classical()?);
            Ok(decide(if ca == cb { 0.0 } else { 1.0 }, tol, || Witness {
                input: None,
                argument: None,
                lhs: a.to_string(),
                rhs: b.to_string(),
                difference: 1.0,
            }))
        }
        (Value::Closure(_), Value::Closure(_)) => {
            let TypeExpr::Fun(dom, cod) = ty.normalize() else {
                return Ok(Verdict::Unknown(format!("cannot compare values of type {ty}")));
            };
            let Ok(basis) = Basis::new(&dom) else {
                return Ok(Verdict::Unknown(format!("functions over {dom} have no finite basis")));
            };
            let mut worst = 0.0f64;
            for e in basis.elements() {
                let arg = Value::from_classical(&e);
                let (ra, rb) = (ev.apply(a, arg.clone())?, ev.apply(b, arg)?);
                match semantic(ev, &ra, &rb, &cod, tol)? {
                    Verdict::NotEqual(mut w) => {
                        w.argument = Some(e.to_string());
                        return Ok(Verdict::NotEqual(w));
                    }
                    Verdict::ProvedSemantically { difference, .. } => worst = worst.max(difference),
                    Verdict::ProvedByNormalization { .. } => {}
                    unknown @ Verdict::Unknown(_) => return Ok(unknown),
                }
            }
            Ok(Verdict::ProvedSemantically { tolerance: tol, difference: worst })
        }
        _ => Ok(Verdict::Unknown(format!("cannot compare {a} with {b}"))),
    }
}

fn decide(d: f64, tol: f64, witness: impl FnOnce() -> Witness) -> Verdict {
    if d <= tol {
        Verdict::ProvedSemantically { tolerance: tol, difference: d }
    } else if d > WITNESS_GAP {
        Verdict::NotEqual(witness())
    } else {
        Verdict::Unknown(format!("outputs differ by {d:e}, between the tolerance and the witness gap"))
    }
}

/// Probe densities: basis projectors, then `|i⟩ + |j⟩` and `|i⟩ + i|j⟩`
/// superpositions. Together they span all densities.
fn probes(basis: &Basis) -> Vec<DensVal> {
    let d = basis.dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<DensVal> = (0..d).map(|i| DensVal::unit(basis, i, i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            for phase in [C64::new(s, 0.0), C64::new(0.0, s)] {
                let mut amps = vec![C64::new(0.0, 0.0); d];
                amps[i] = C64::new(s, 0.0);
                amps[j] = phase;
                out.push(DensVal::pure(&VecVal::from_amps(basis, amps)));
            }
        }
    }
    out
}

fn compare_supers(a: &SuperVal, b: &SuperVal, tol: f64) -> Verdict {
    let Ok(d) = a.max_diff(b) else {
        return Verdict::Unknown("superoperators over different bases".to_string());
    };
    if d <= tol {
        return Verdict::ProvedSemantically { tolerance: tol, difference: d };
    }
    for rho in probes(&a.input) {
        let (oa, ob) = (a.apply(&rho).expect("basis checked"), b.apply(&rho).expect("basis checked"));
        let gap = oa.max_diff(&ob).expect("same output basis");
        if gap > WITNESS_GAP {
            return Verdict::NotEqual(Witness {
                input: Some(rho),
                argument: None,
                lhs: oa.render(),
                rhs: ob.render(),
                difference: gap,
            });
        }
    }
    Verdict::Unknown(format!("matrices differ by {d:e} but no probe separates them"))
}
