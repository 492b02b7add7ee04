use super::*;
use crate::evaluator::{Evaluator, Route};
use crate::stdlib::checked_prelude;
use crate::syntax::{parse_command, parse_term};
use crate::typechecker::{elaborate_command, elaborate_term, EnvPair};

fn env() -> EnvPair {
    checked_prelude().env()
}

#[test]
fn unit_translates_to_arr() {
    let env = env().with_delta("x", TypeExpr::Bool);
    let c = elaborate_command(&env, &parse_command("[x]").unwrap()).unwrap();
    let e = translate_command(&[("x".into(), TypeExpr::Bool)], &c);
    assert_eq!(e.to_string(), "(arr (\\x. x))");
    assert_eq!((e.input, e.output), (TypeExpr::Bool, TypeExpr::Bool));
}

#[test]
fn application_composes_the_argument_with_the_arrow() {
    let env = env().with_delta("x", TypeExpr::Bool);
    let c = elaborate_command(&env, &parse_command("(\\•y. [not y]) • x").unwrap()).unwrap();
    let e = translate_command(&[("x".into(), TypeExpr::Bool)], &c);
    assert_eq!(e.to_string(), "(compose (arr (\\x. x)) (arr (\\y. not y)))");
}

#[test]
fn mode_selection_by_type() {
    let qnot = translate_term(&checked_prelude().get("QNot").unwrap().typed).unwrap();
    assert_eq!(qnot.to_string(), "(arr (\\y. not y))");
    let had = translate_term(&checked_prelude().get("Had").unwrap().typed).unwrap();
    assert_eq!(had.to_string(), "(lift (\\y. hadamard y))");
    let named = elaborate_term(&env(), &parse_term("Had").unwrap()).unwrap();
    assert_eq!(translate_term(&named).unwrap().node, Node::NamedSuper("Had".into()));
}

#[test]
fn let_extends_the_environment_to_the_left() {
    let bell = translate_term(&checked_prelude().get("bell").unwrap().typed).unwrap();
    let Node::Compose(env, body) = &bell.node else { panic!("{bell}") };
    assert!(matches!(env.node, Node::Fanout(..)));
    assert_eq!(body.input.to_string(), "((Bool, Bool), Bool)");
    assert_eq!(bell.input.to_string(), "(Bool, Bool)");
    assert_eq!(bell.output.to_string(), "(Bool, Bool)");
}

#[test]
fn shadowed_delta_names_are_renamed() {
    let t = elaborate_term(&env(), &parse_term("\\•x. let x = QNot • x in [x]").unwrap()).unwrap();
    let e = translate_term(&t).unwrap();
    assert!(e.to_string().contains("(arr (\\(x', x). x))"), "{e}");
    let ev = Evaluator::new(checked_prelude()).unwrap();
    let s = ev.materialize(&e, Route::Sparse).unwrap();
    assert!(s.close(&ev.super_named("QNot").unwrap(), 1e-12));
}

#[test]
fn meas_and_trl_lower_to_constants() {
    let alice = translate_term(&checked_prelude().get("Alice").unwrap().typed).unwrap();
    let text = alice.emit();
    assert!(text.contains("(meas (Bool, Bool))"));
    assert!(text.contains("(trL (Bool, Bool) (Bool, Bool))"));
}

#[test]
fn emit_is_indented() {
    let e = translate_term(&checked_prelude().get("bell").unwrap().typed).unwrap();
    let text = e.emit();
    assert!(text.starts_with("(compose\n  (fanout\n    (arr id)\n"), "{text}");
    assert_eq!(e.size(), text.lines().filter(|l| !l.trim().starts_with(')')).count());
}

#[test]
fn inverse_shapes() {
    let ty = TypeExpr::Bool;
    let arr = ClassicExpr::arr_id(ty.clone());
    assert_eq!(inverse_translate(&arr).to_string(), "\\•x : Bool. [(\\x : Bool. x) x]");
    let comp = ClassicExpr::compose(arr.clone(), arr.clone());
    let text = inverse_translate(&comp).to_string();
    assert!(text.starts_with("\\•x : Bool. let y = "), "{text}");
    let first = ClassicExpr::first(arr, TypeExpr::Bool);
    let text = inverse_translate(&first).to_string();
    assert!(text.contains("fst z") && text.ends_with("[(x, snd z)]"), "{text}");
}

#[test]
fn inverse_round_trip_preserves_denotation() {
    let ev = Evaluator::new(checked_prelude()).unwrap();
    for name in ["QNot", "Had", "Cnot", "bell", "Bob"] {
        let e = translate_term(&checked_prelude().get(name).unwrap().typed).unwrap();
        let back = ev.eval_term(&inverse_translate(&e)).unwrap();
        let direct = ev.super_named(name).unwrap();
        assert!(back.as_super().unwrap().close(&direct, 1e-12), "{name}");
    }
}
