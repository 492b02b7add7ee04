use super::*;
use crate::linalg::{dens_close, lin2super, super_arr, Classical, LinOp};
use crate::stdlib::{checked_prelude, gate_matrix, oracle, prelude_entries};
use crate::syntax::parse_term;

fn prelude() -> Evaluator {
    Evaluator::new(checked_prelude()).unwrap()
}

fn term(ev: &Evaluator, src: &str) -> Value {
    ev.eval_term(&parse_term(src).unwrap()).unwrap()
}

#[test]
fn classical_terms() {
    let ev = prelude();
    assert_eq!(term(&ev, "not True").to_string(), "False");
    assert_eq!(term(&ev, "let (a, b) = (True, False) in (b, a)").to_string(), "(False, True)");
    assert_eq!(term(&ev, "fst (True, False) == snd (False, True)").to_string(), "True");
}

#[test]
fn vectors() {
    let ev = prelude();
    let v = term(&ev, "hadamard False");
    let amps = &v.as_vec().unwrap().amps;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((amps[0].re - s).abs() < 1e-12 && (amps[1].re - s).abs() < 1e-12);
    let raw = term(&ev, "hadamard_raw True");
    assert_eq!(raw.to_string(), "1.000000 * [False] + -1.000000 * [True]");
    assert_eq!(term(&ev, "let x <- mzero in [not x]").to_string(), "mzero");
    let hh = term(&ev, "let x <- hadamard False in hadamard x");
    assert_eq!(hh.to_string(), "1.000000 * [False]");
}

#[test]
fn qnot_is_arr_not() {
    let ev = prelude();
    let s = term(&ev, "\\•y. [not y]");
    let expected = super_arr(&Basis::bool(), &Basis::bool(), |e| match e {
        Classical::Bool(b) => Classical::Bool(!b),
        _ => unreachable!(),
    })
    .unwrap();
    assert!(s.as_super().unwrap().close(&expected, 1e-12));
}

#[test]
fn prelude_gates_match_oracles_on_both_routes() {
    let ev = prelude();
    for entry in prelude_entries() {
        let Some(expected) = entry.oracle else { continue };
        let direct = ev.super_named(&entry.name).unwrap();
        assert!(direct.close(&expected, 1e-9), "{}: {}", entry.name, direct.max_diff(&expected).unwrap());
        let def = ev.program().get(&entry.name).unwrap();
        let expr = translate_term(&def.typed).unwrap();
        let dense = ev.materialize(&expr, Route::Dense).unwrap();
        assert!(dense.close(&expected, 1e-9), "{} dense", entry.name);
    }
}

#[test]
fn had_twice_is_identity() {
    let ev = prelude();
    let had = ev.super_named("Had").unwrap();
    let hh = had.then(&had).unwrap();
    assert!(hh.close(&SuperVal::identity(&Basis::bool()), 1e-12));
}

#[test]
fn teleport_transfers_a_pure_state() {
    let ev = prelude();
    let tele = ev.super_named("teleport").unwrap();
    // q = (|0> + i|1>)/sqrt2, ancillas |00>
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = VecVal::from_amps(&Basis::bool(), vec![C64::new(s, 0.0), C64::new(0.0, s)]);
    let zero = VecVal::unit(&Basis::bool(), 0);
    let input = crate::linalg::tensor(&q, &crate::linalg::tensor(&zero, &zero));
    let out = run(&tele, &DensVal::pure(&input)).unwrap();
    assert!(dens_close(&out, &DensVal::pure(&q), 1e-9).unwrap(), "{}", out.render());
}

#[test]
fn alice_output_is_diagonal() {
    let ev = prelude();
    let alice = ev.super_named("Alice").unwrap();
    let h = gate_matrix("hadamard").unwrap();
    let plus = VecVal::from_amps(&Basis::bool(), vec![h[(0, 0)], h[(1, 0)]]);
    let input = crate::linalg::tensor(&plus, &plus);
    let out = run(&alice, &DensVal::pure(&input)).unwrap();
    for ((i, j), z) in out.mat.indexed_iter() {
        if i != j {
            assert!(z.norm() < 1e-12);
        }
    }
    assert!((out.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn lifted_gate_is_conjugation() {
    let ev = prelude();
    let cz = ev.super_named("Cz").unwrap();
    let m = gate_matrix("cz").unwrap();
    let expected = lin2super(&LinOp::from_matrix(&Basis::qubits(2), &Basis::qubits(2), m));
    assert!(cz.close(&expected, 1e-12));
    assert!(oracle("Cz").unwrap().close(&expected, 1e-12));
}

#[test]
fn empty_program_has_no_values() {
    assert!(eval_program(&CheckedProgram::default()).unwrap().is_empty());
}

#[test]
fn evaluation_is_deterministic() {
    let a = prelude().super_named("teleport").unwrap();
    let b = prelude().super_named("teleport").unwrap();
    assert_eq!(a.action, b.action);
}
