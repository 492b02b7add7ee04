//! End-to-end use of the library: load, evaluate, translate, prove.

mod common;

use qarrow_core::{
    checked_prelude, load, parse_term, prelude_entries, run, translate_term, Basis, DensVal, Error, Evaluator, Expr,
    Law, Rewriter, TypeErrorKind, Verdict,
};

const DOUBLE_NOT: &str = include_str!("../../../programs/doublenot.qarr");

#[test]
fn prelude_definitions_have_their_documented_types() {
    let program = checked_prelude();
    for entry in prelude_entries() {
        let def = program.get(&entry.name).unwrap();
        assert!(def.ty.equiv(&entry.expected), "{}: {} vs {}", entry.name, def.ty, entry.expected);
    }
}

#[test]
fn double_not_trace_matches_golden_file() {
    let program = load(DOUBLE_NOT, true).unwrap();
    let rw = Rewriter::new(&program);
    let body = program.get("doubleNot").unwrap().def.body.clone();
    let trace = rw.normalize(&Expr::Term(body), 10_000);
    assert_eq!(trace.render(), include_str!("golden/doublenot.trace"));
    assert_eq!(&trace.laws()[..3], &[Law::BetaArrow, Law::LeftUnit, Law::BetaArrow]);
}

#[test]
fn user_programs_extend_the_prelude() {
    let program = load("twice : Super Bool Bool = \\•x. let y = Had • x in Had • y", true).unwrap();
    let ev = Evaluator::new(&program).unwrap();
    let twice = ev.super_named("twice").unwrap();
    let mut rng = common::rng(11);
    let rho = common::random_density(&Basis::bool(), &mut rng);
    assert!(run(&twice, &rho).unwrap().max_diff(&rho).unwrap() < 1e-12);
}

#[test]
fn prelude_names_are_unavailable_without_it() {
    match load("q = QNot", false) {
        Err(Error::Type(e)) => assert_eq!(e.kind, TypeErrorKind::Unbound),
        other => panic!("{other:?}"),
    }
}

#[test]
fn delta_misuse_is_reported_with_a_position() {
    let Err(Error::Type(e)) = load("bad = \\•f. f • x", true) else { panic!() };
    assert_eq!(e.kind, TypeErrorKind::DeltaMisuse);
    assert_eq!((e.pos.line, e.pos.col), (1, 12));
    assert!(e.render("bad.qarr").starts_with("bad.qarr:1:12: delta-misuse"));
}

#[test]
fn distinct_gates_get_a_witness() {
    let rw = Rewriter::new(checked_prelude());
    let verdict = rw
        .prove_equal(&parse_term("Had").unwrap(), &parse_term("QNot").unwrap(), 1000, 1e-9)
        .unwrap();
    let Verdict::NotEqual(w) = verdict else { panic!("{verdict:?}") };
    assert!(w.difference > 1e-6);
    let input: DensVal = w.input.expect("a density witness");
    assert_eq!(input.basis, Basis::bool());
}

#[test]
fn eta_expanded_gate_is_proved_semantically() {
    let rw = Rewriter::new(checked_prelude());
    let a = parse_term("\\•x. let y = Had • x in QNot • y").unwrap();
    let b = parse_term("\\•z. let w = Had • z in [not w]").unwrap();
    let verdict = rw.prove_equal(&a, &b, 1000, 1e-9).unwrap();
    assert!(matches!(verdict, Verdict::ProvedSemantically { .. } | Verdict::ProvedByNormalization { .. }), "{verdict:?}");
}

#[test]
fn translation_emits_combinators() {
    let program = checked_prelude();
    let expr = translate_term(&program.get("QNot").unwrap().typed).unwrap();
    assert_eq!(expr.emit().trim(), "(arr (\\y. not y))");
    let bell = translate_term(&program.get("bell").unwrap().typed).unwrap();
    let expected = "(compose\n  (fanout\n    (arr id)\n    (compose\n      (arr (\\(x, y). x))\n      (named Had)\n    )\n  )\n  (compose\n    (arr (\\((x, y), h). (h, y)))\n    (named Cnot)\n  )\n)";
    assert_eq!(bell.emit().trim_end(), expected);
}
