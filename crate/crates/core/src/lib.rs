//! A quantum arrow calculus: a typed lambda calculus with arrow
//! abstraction, arrow application, measurement and partial trace, given a
//! density-matrix semantics through classic arrow combinators.
//!
//! The pipeline is parse ([`syntax`]), check ([`typechecker`]), translate
//! to combinators ([`translator`]), evaluate to matrices ([`evaluator`]).
//! [`rewriter`] reasons about programs equationally and [`stdlib`] holds
//! the prelude of gates and the teleportation protocol.

pub mod evaluator;
pub mod linalg;
pub mod rewriter;
pub mod stdlib;
pub mod syntax;
pub mod translator;
pub mod typechecker;

use thiserror::Error;

pub use evaluator::{eval_program, run, EvalError, Evaluator, Route, Value};
pub use linalg::{
    dens_close, lin2super, super_arr, super_compose, super_fanout, super_first, super_meas, super_second, super_trl,
    Basis, Classical, DensVal, LinOp, LinalgError, MatrixJson, SuperVal, VecVal, C64, DEFAULT_TOL,
};
pub use rewriter::{Direction, Law, ProofStep, ProofTrace, RewriteError, Rewriter, Verdict, Witness};
pub use stdlib::{checked_prelude, prelude, prelude_entries, PreludeEntry, PRELUDE_SOURCE};
pub use syntax::{
    alpha_eq, parse_command, parse_program, parse_term, parse_type, Command, Expr, ParseError, Pattern, Pos, Program,
    Term, TypeExpr,
};
pub use translator::{inverse_translate, translate_command, translate_term, ClassicExpr, TranslateError};
pub use typechecker::{check_program, check_program_with, CheckedProgram, TypeError, TypeErrorKind};

/// Any failure of the pipeline.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Type(#[from] TypeError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Parses and checks `source`, optionally on top of the prelude. The
/// result holds the prelude definitions first when it is included.
pub fn load(source: &str, with_prelude: bool) -> Result<CheckedProgram, Error> {
    let program = parse_program(source)?;
    if with_prelude {
        let base = checked_prelude();
        Ok(base.extend(&check_program_with(base, &program)?))
    } else {
        Ok(check_program(&program)?)
    }
}
