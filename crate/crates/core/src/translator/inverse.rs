//! Combinators back to arrow abstractions:
//!
//! ```text
//! arr f      ~> \•x. [f x]
//! lift f     ~> \•x. [f x]            (a vector-valued unit)
//! f >>> g    ~> \•x. let y = F • x in G • y
//! first f    ~> \•z. let x = F • fst z in [(x, snd z)]
//! second f   ~> \•z. let x = F • snd z in [(fst z, x)]
//! f &&& g    ~> \•z. let x = F • z in let y = G • z in [(x, y)]
//! meas       ~> \•x. meas x
//! trL        ~> \•x. trL x
//! ```

use std::collections::BTreeSet;

use super::{ArrFn, ClassicExpr, Node};
use crate::syntax::{free_vars_term, fresh_name, Command, Pattern, Term, TypeExpr};

/// Rebuilds a closed-form superoperator term from a combinator tree. The
/// result carries binder annotations and typechecks in the environment the
/// tree was translated under.
pub fn inverse_translate(e: &ClassicExpr) -> Term {
    match &e.node {
        Node::Arr(f) | Node::LiftLin(f) => {
            let f = function(f, &e.input);
            let x = fresh("x", &[&f]);
            arrow(&x, &e.input, Command::unit(Term::app(f, Term::var(&x))))
        }
        Node::Compose(f, g) => {
            let (f, g) = (inverse_translate(f), inverse_translate(g));
            let x = fresh("x", &[&f, &g]);
            let y = fresh("y", &[&f, &g]);
            let body = Command::let_(
                Pattern::var(&y),
                Command::app(f, Term::var(&x)),
                Command::app(g, Term::var(&y)),
            );
            arrow(&x, &e.input, body)
        }
        Node::First(f, _) | Node::Second(f, _) => {
            let is_first = matches!(e.node, Node::First(..));
            let f = inverse_translate(f);
            let z = fresh("z", &[&f]);
            let x = fresh("x", &[&f]);
            let (used, kept) = if is_first {
                (Term::fst(Term::var(&z)), Term::snd(Term::var(&z)))
            } else {
                (Term::snd(Term::var(&z)), Term::fst(Term::var(&z)))
            };
            let result = if is_first { Term::pair(Term::var(&x), kept) } else { Term::pair(kept, Term::var(&x)) };
            let body = Command::let_(Pattern::var(&x), Command::app(f, used), Command::unit(result));
            arrow(&z, &e.input, body)
        }
        Node::Fanout(f, g) => {
            let (f, g) = (inverse_translate(f), inverse_translate(g));
            let z = fresh("z", &[&f, &g]);
            let x = fresh("x", &[&f, &g]);
            let y = fresh("y", &[&f, &g]);
            let body = Command::let_(
                Pattern::var(&x),
                Command::app(f, Term::var(&z)),
                Command::let_(
                    Pattern::var(&y),
                    Command::app(g, Term::var(&z)),
                    Command::unit(Term::pair(Term::var(&x), Term::var(&y))),
                ),
            );
            arrow(&z, &e.input, body)
        }
        Node::MeasC(_) => arrow("x", &e.input, Command::meas(Term::var("x"))),
        Node::TrLC(..) => arrow("x", &e.input, Command::trl(Term::var("x"))),
        Node::NamedSuper(name) => Term::var(name),
        Node::Embedded(t) => t.erase(),
    }
}

fn function(f: &ArrFn, input: &TypeExpr) -> Term {
    match f {
        ArrFn::Identity => Term::lam_typed(Pattern::var("x"), input.clone(), Term::var("x")),
        ArrFn::Lambda { param, body } => Term::lam_typed(param.clone(), input.clone(), body.erase()),
    }
}

fn arrow(x: &str, ty: &TypeExpr, body: Command) -> Term {
    Term::arrow_typed(Pattern::var(x), ty.clone(), body)
}

/// A name not free in any of `terms`, so binding it cannot capture.
fn fresh(base: &str, terms: &[&Term]) -> String {
    let taken: BTreeSet<String> = terms.iter().flat_map(|t| free_vars_term(t)).collect();
    if taken.contains(base) {
        fresh_name(base, &taken)
    } else {
        base.to_string()
    }
}
