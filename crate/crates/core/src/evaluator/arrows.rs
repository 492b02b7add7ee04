//! Turning combinator trees into superoperator matrices.
//!
//! The sparse route pushes each unit `|i⟩⟨j|` through the tree. Every node
//! maps an index pair to a weighted list of output index pairs:
//!
//! ```text
//! arr f       (i, j)             -> (f i, f j)
//! lift f      (i, j)             -> (k, l) with weight (f i)_k · conj((f j)_l)
//! first f     ((a1,c1), (a2,c2)) -> ((b1,c1), (b2,c2)) for each (b1,b2) of f (a1,a2)
//! f &&& g     (i, j)             -> ((b1,c1), (b2,c2)), weights of f and g multiplied
//! meas        (i, i)             -> ((i,i), (i,i))
//! trL         ((a,b1), (a,b2))   -> (b1, b2)
//! ```

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use super::{EvalError, Evaluator, Result, Route, Value, DENSE_CAP};
use crate::evaluator::Env;
use crate::linalg::{
    lin2super, super_arr, super_compose, super_fanout, super_first, super_meas, super_second, super_trl, Basis,
    Classical, LinOp, SuperVal, VecVal, C64,
};
use crate::translator::{ArrFn, ClassicExpr, Node};

type Entries = Rc<Vec<((usize, usize), C64)>>;
type Memo = RefCell<HashMap<(usize, usize), Entries>>;
/// Per input index, the sparse image vector once computed.
type LiftCache = RefCell<Vec<Option<Rc<Vec<(usize, C64)>>>>>;

enum Plan<'a> {
    Arr { input: Basis, output: Basis, f: &'a ArrFn, cache: RefCell<Vec<Option<usize>>> },
    Lift { input: Basis, output: Basis, f: &'a ArrFn, cache: LiftCache },
    Compose(Box<Plan<'a>>, Box<Plan<'a>>, Memo),
    /// Dimension of the untouched right factor.
    First(Box<Plan<'a>>, usize, Memo),
    /// Input and output dimensions of the wrapped arrow.
    Second(Box<Plan<'a>>, usize, usize, Memo),
    /// Output dimension of the right arrow.
    Fanout(Box<Plan<'a>>, Box<Plan<'a>>, usize, Memo),
    Meas(usize),
    /// Dimension of the kept right factor.
    TrL(usize),
    Matrix(Arc<SuperVal>),
}

struct Ctx<'a> {
    ev: &'a Evaluator,
    env: &'a Env,
}

pub(super) fn materialize(ev: &Evaluator, env: &Env, e: &ClassicExpr, route: Route) -> Result<SuperVal> {
    let cx = Ctx { ev, env };
    if route == Route::Dense && fits(e) {
        return cx.dense(e);
    }
    let plan = cx.plan(e, route)?;
    if let Plan::Matrix(s) = &plan {
        return Ok((**s).clone());
    }
    let (input, output) = (Basis::new(&e.input)?, Basis::new(&e.output)?);
    let (di, d_o) = (input.dim(), output.dim());
    let mut s = SuperVal::zero(&input, &output);
    for i in 0..di {
        for j in 0..di {
            for &((k, l), w) in cx.apply(&plan, i, j)?.iter() {
                s.action[(i * di + j, k * d_o + l)] += w;
            }
        }
    }
    Ok(s)
}

fn cost(e: &ClassicExpr) -> usize {
    let d = |t| Basis::new(t).map(|b| b.dim()).unwrap_or(usize::MAX);
    let (di, d_o) = (d(&e.input), d(&e.output));
    di.saturating_mul(di).saturating_mul(d_o).saturating_mul(d_o)
}

/// Every node of the subtree stays under the dense size cap.
fn fits(e: &ClassicExpr) -> bool {
    cost(e) <= DENSE_CAP
        && match &e.node {
            Node::Compose(f, g) => fits(f) && fits(g),
            Node::Fanout(f, g) => {
                // the literal definition passes through `(A, A)` and `(B, A)`
                let d = |t| Basis::new(t).map(|b| b.dim()).unwrap_or(usize::MAX);
                let (da, db) = (d(&e.input), d(&f.output));
                let widest = da.saturating_mul(da).saturating_mul(da.max(db)).saturating_mul(da);
                fits(f) && fits(g) && widest.saturating_mul(widest) <= DENSE_CAP
            }
            Node::First(f, c) | Node::Second(f, c) => {
                let dc = Basis::new(c).map(|b| b.dim()).unwrap_or(usize::MAX);
                fits(f) && cost(f).saturating_mul(dc.saturating_mul(dc)).saturating_mul(dc.saturating_mul(dc)) <= DENSE_CAP
            }
            _ => true,
        }
}

fn sum(entries: BTreeMap<(usize, usize), C64>) -> Entries {
    Rc::new(entries.into_iter().collect())
}

impl<'a> Ctx<'a> {
    fn named(&self, name: &str) -> Result<Arc<SuperVal>> {
        match self.env.lookup(name) {
            Some(Value::Super(s)) => Ok(s),
            Some(other) => Err(EvalError::Internal(format!("`{name}` is {other}, not a superoperator"))),
            None => Err(EvalError::Unbound(name.to_string())),
        }
    }

    fn leaf_matrix(&self, e: &ClassicExpr) -> Result<Option<Arc<SuperVal>>> {
        Ok(match &e.node {
            Node::NamedSuper(n) => Some(self.named(n)?),
            Node::Embedded(t) => Some(self.ev.eval(self.env, t)?.as_super()?.clone()),
            _ => None,
        })
    }

    fn plan<'e>(&self, e: &'e ClassicExpr, route: Route) -> Result<Plan<'e>> {
        if route == Route::Dense && fits(e) {
            return Ok(Plan::Matrix(Arc::new(self.dense(e)?)));
        }
        if let Some(s) = self.leaf_matrix(e)? {
            return Ok(Plan::Matrix(s));
        }
        let memo = || RefCell::new(HashMap::new());
        let dim = |t| -> Result<usize> { Ok(Basis::new(t)?.dim()) };
        Ok(match &e.node {
            Node::Arr(f) => {
                let input = Basis::new(&e.input)?;
                let cache = RefCell::new(vec![None; input.dim()]);
                Plan::Arr { input, output: Basis::new(&e.output)?, f, cache }
            }
            Node::LiftLin(f) => {
                let input = Basis::new(&e.input)?;
                let cache = RefCell::new(vec![None; input.dim()]);
                Plan::Lift { input, output: Basis::new(&e.output)?, f, cache }
            }
            Node::Compose(f, g) => Plan::Compose(Box::new(self.plan(f, route)?), Box::new(self.plan(g, route)?), memo()),
            Node::First(f, c) => Plan::First(Box::new(self.plan(f, route)?), dim(c)?, memo()),
            Node::Second(f, _) => {
                let (da, db) = (dim(&f.input)?, dim(&f.output)?);
                Plan::Second(Box::new(self.plan(f, route)?), da, db, memo())
            }
            Node::Fanout(f, g) => {
                let dc = dim(&g.output)?;
                Plan::Fanout(Box::new(self.plan(f, route)?), Box::new(self.plan(g, route)?), dc, memo())
            }
            Node::MeasC(a) => Plan::Meas(dim(a)?),
            Node::TrLC(_, b) => Plan::TrL(dim(b)?),
            Node::NamedSuper(_) | Node::Embedded(_) => unreachable!("handled as matrices"),
        })
    }

    /// `f` at basis element `i`, as a classical value.
    fn call(&self, f: &ArrFn, input: &Basis, i: usize) -> Result<Value> {
        let arg = Value::from_classical(&input.element(i));
        match f {
            ArrFn::Identity => Ok(arg),
            ArrFn::Lambda { param, body } => self.ev.eval(&self.env.bind_pattern(param, arg)?, body),
        }
    }

    fn arr_index(&self, f: &ArrFn, input: &Basis, output: &Basis, i: usize) -> Result<usize> {
        Ok(output.index_of(&self.call(f, input, i)?.to_classical()?)?)
    }

    fn lift_column(&self, f: &ArrFn, input: &Basis, output: &Basis, i: usize) -> Result<VecVal> {
        let v = self.call(f, input, i)?;
        let v = v.as_vec()?;
        if &v.basis != output {
            return Err(EvalError::Internal(format!("lifted map returned a vector over {}", v.basis.ty())));
        }
        Ok(v.clone())
    }

    fn apply(&self, plan: &Plan<'_>, i: usize, j: usize) -> Result<Entries> {
        let memo = match plan {
            Plan::Compose(.., m) | Plan::First(.., m) | Plan::Second(.., m) | Plan::Fanout(.., m) => Some(m),
            _ => None,
        };
        if let Some(hit) = memo.and_then(|m| m.borrow().get(&(i, j)).cloned()) {
            return Ok(hit);
        }
        let out = self.apply_uncached(plan, i, j)?;
        if let Some(m) = memo {
            m.borrow_mut().insert((i, j), out.clone());
        }
        Ok(out)
    }

    fn apply_uncached(&self, plan: &Plan<'_>, i: usize, j: usize) -> Result<Entries> {
        let one = C64::new(1.0, 0.0);
        Ok(match plan {
            Plan::Arr { input, output, f, cache } => {
                let idx = |k: usize| -> Result<usize> {
                    if let Some(v) = cache.borrow()[k] {
                        return Ok(v);
                    }
                    let v = self.arr_index(f, input, output, k)?;
                    cache.borrow_mut()[k] = Some(v);
                    Ok(v)
                };
                Rc::new(vec![((idx(i)?, idx(j)?), one)])
            }
            Plan::Lift { input, output, f, cache } => {
                let col = |k: usize| -> Result<Rc<Vec<(usize, C64)>>> {
                    if let Some(v) = &cache.borrow()[k] {
                        return Ok(v.clone());
                    }
                    let v = self.lift_column(f, input, output, k)?;
                    let nz: Rc<Vec<(usize, C64)>> =
                        Rc::new(v.amps.iter().enumerate().filter(|(_, a)| a.norm() != 0.0).map(|(k, a)| (k, *a)).collect());
                    cache.borrow_mut()[k] = Some(nz.clone());
                    Ok(nz)
                };
                let (ci, cj) = (col(i)?, col(j)?);
                let mut out = Vec::with_capacity(ci.len() * cj.len());
                for &(k, a) in ci.iter() {
                    for &(l, b) in cj.iter() {
                        out.push(((k, l), a * b.conj()));
                    }
                }
                Rc::new(out)
            }
            Plan::Compose(f, g, _) => {
                let mut acc = BTreeMap::new();
                for &((k, l), w) in self.apply(f, i, j)?.iter() {
                    for &(kl, u) in self.apply(g, k, l)?.iter() {
                        *acc.entry(kl).or_insert(C64::new(0.0, 0.0)) += w * u;
                    }
                }
                sum(acc)
            }
            Plan::First(f, dc, _) => {
                let (c1, c2) = (i % dc, j % dc);
                let inner = self.apply(f, i / dc, j / dc)?;
                Rc::new(inner.iter().map(|&((b1, b2), w)| ((b1 * dc + c1, b2 * dc + c2), w)).collect())
            }
            Plan::Second(f, da, db, _) => {
                let (c1, c2) = (i / da, j / da);
                let inner = self.apply(f, i % da, j % da)?;
                Rc::new(inner.iter().map(|&((b1, b2), w)| ((c1 * db + b1, c2 * db + b2), w)).collect())
            }
            Plan::Fanout(f, g, dc, _) => {
                let (left, right) = (self.apply(f, i, j)?, self.apply(g, i, j)?);
                let mut out = Vec::with_capacity(left.len() * right.len());
                for &((b1, b2), w) in left.iter() {
                    for &((c1, c2), u) in right.iter() {
                        out.push(((b1 * dc + c1, b2 * dc + c2), w * u));
                    }
                }
                out.sort_by_key(|e| e.0);
                Rc::new(out)
            }
            Plan::Meas(d) => {
                if i == j {
                    let o = i * d + i;
                    Rc::new(vec![((o, o), one)])
                } else {
                    Rc::new(Vec::new())
                }
            }
            Plan::TrL(db) => {
                if i / db == j / db {
                    Rc::new(vec![((i % db, j % db), one)])
                } else {
                    Rc::new(Vec::new())
                }
            }
            Plan::Matrix(s) => {
                let (di, d_o) = (s.input.dim(), s.output.dim());
                let row = s.action.row(i * di + j);
                Rc::new(
                    row.iter()
                        .enumerate()
                        .filter(|(_, w)| w.norm() != 0.0)
                        .map(|(col, w)| ((col / d_o, col % d_o), *w))
                        .collect(),
                )
            }
        })
    }

    /// The dense combinators, node by node.
    fn dense(&self, e: &ClassicExpr) -> Result<SuperVal> {
        if let Some(s) = self.leaf_matrix(e)? {
            return Ok((*s).clone());
        }
        let (input, output) = (Basis::new(&e.input)?, Basis::new(&e.output)?);
        Ok(match &e.node {
            Node::Arr(f) => {
                let images: Vec<Classical> = (0..input.dim())
                    .map(|i| self.call(f, &input, i)?.to_classical())
                    .collect::<Result<_>>()?;
                super_arr(&input, &output, |a| images[input.index_of(a).expect("element of the input")].clone())?
            }
            Node::LiftLin(f) => {
                let cols: Vec<VecVal> =
                    (0..input.dim()).map(|i| self.lift_column(f, &input, &output, i)).collect::<Result<_>>()?;
                let op = LinOp::from_fn(&input, &output, |a| Ok(cols[input.index_of(a)?].clone()))?;
                lin2super(&op)
            }
            Node::Compose(f, g) => super_compose(&self.dense(f)?, &self.dense(g)?)?,
            Node::First(f, c) => super_first(&self.dense(f)?, &Basis::new(c)?),
            Node::Second(f, c) => super_second(&self.dense(f)?, &Basis::new(c)?),
            Node::Fanout(f, g) => super_fanout(&self.dense(f)?, &self.dense(g)?)?,
            Node::MeasC(a) => super_meas(&Basis::new(a)?),
            Node::TrLC(a, b) => super_trl(&Basis::new(a)?, &Basis::new(b)?),
            Node::NamedSuper(_) | Node::Embedded(_) => unreachable!("handled as matrices"),
        })
    }
}
