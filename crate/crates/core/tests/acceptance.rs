//! Acceptance suite. Runs every criterion, prints one `[PASS]`/`[FAIL]`
//! line each, and exits nonzero if any failed.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::gen::Gen;
use common::{pick, Rng};
use ndarray::Array2;
use qarrow_core::typechecker::{elaborate_term, infer_term};
use qarrow_core::{
    alpha_eq, checked_prelude, dens_close, inverse_translate, load, parse_term, prelude_entries, run, super_arr,
    super_compose, super_first, super_meas, super_trl, translate_term, Basis, Classical, DensVal, Direction, Error,
    Evaluator, Expr, Law, LinOp, ProofTrace, Rewriter, Route, SuperVal, TypeErrorKind, Value, Verdict, C64,
};
use rand::RngExt;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn prelude_eval() -> Evaluator {
    Evaluator::new(checked_prelude()).expect("prelude evaluates")
}

// ---------------------------------------------------------------------------
// 1. double-NOT

const DOUBLE_NOT_SRC: &str = include_str!("../../../programs/doublenot.qarr");
const DOUBLE_NOT_GOLDEN: &str = include_str!("golden/doublenot.trace");

fn double_not() -> Outcome {
    let start = Instant::now();
    let program = load(DOUBLE_NOT_SRC, true).map_err(|e| e.to_string())?;
    let rw = Rewriter::new(&program);
    let lhs = program.get("doubleNot").ok_or("doubleNot missing")?.def.body.clone();
    let rhs = program.get("idSuper").ok_or("idSuper missing")?.def.body.clone();
    let trace: ProofTrace = rw.normalize(&Expr::Term(lhs.clone()), 10_000);
    let elapsed = start.elapsed();

    ensure(!trace.exhausted, || "fuel exhausted".into())?;
    let target = Expr::Term(parse_term("\\•x. [x]").unwrap());
    ensure(alpha_eq(&trace.end, &target), || format!("ends at {}", trace.end))?;
    ensure(alpha_eq(&trace.end, &Expr::Term(rhs.clone())), || "end differs from idSuper".into())?;
    let laws = trace.laws();
    let arrow: Vec<Law> = laws.iter().copied().filter(|l| l.is_arrow_law()).collect();
    ensure(arrow == [Law::BetaArrow, Law::LeftUnit, Law::BetaArrow], || format!("arrow steps {arrow:?}"))?;
    ensure(laws[..3] == [Law::BetaArrow, Law::LeftUnit, Law::BetaArrow], || "arrow steps come first".into())?;
    ensure(laws[3..].iter().all(|l| l.is_classical()), || format!("non-classical tail {laws:?}"))?;
    ensure(trace.render() == DOUBLE_NOT_GOLDEN, || format!("trace differs from golden:\n{}", trace.render()))?;
    ensure(rw.replay(&trace).map_err(|e| e.to_string())? == trace.end, || "replay mismatch".into())?;
    let verdict = rw.prove_equal(&lhs, &rhs, 10_000, 1e-9).map_err(|e| e.to_string())?;
    ensure(matches!(verdict, Verdict::ProvedByNormalization { .. }), || format!("verdict {verdict:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {}", secs(elapsed)))?;
    Ok(format!("{} steps, {}", trace.steps.len(), secs(elapsed)))
}

// ---------------------------------------------------------------------------
// 2. classic arrow laws on random superoperators

fn fst_super(a: &Basis, b: &Basis) -> SuperVal {
    super_arr(&Basis::prod(a, b), a, |e| match e {
        Classical::Pair(x, _) => (**x).clone(),
        _ => unreachable!(),
    })
    .unwrap()
}

/// `((a, c), d) ↦ (a, (c, d))`.
fn assoc_super(a: &Basis, c: &Basis, d: &Basis) -> SuperVal {
    let input = Basis::prod(&Basis::prod(a, c), d);
    let output = Basis::prod(a, &Basis::prod(c, d));
    super_arr(&input, &output, |e| match e {
        Classical::Pair(ac, z) => match &**ac {
            Classical::Pair(x, y) => Classical::pair((**x).clone(), Classical::pair((**y).clone(), (**z).clone())),
            _ => unreachable!(),
        },
        _ => unreachable!(),
    })
    .unwrap()
}

/// `f × g` on a product basis.
fn cross_super(a: &Basis, b: &Basis, fa: &[usize], fb: &[usize], out_a: &Basis, out_b: &Basis) -> SuperVal {
    super_arr(&Basis::prod(a, b), &Basis::prod(out_a, out_b), |e| match e {
        Classical::Pair(x, y) => Classical::pair(
            out_a.element(fa[a.index_of(x).unwrap()]),
            out_b.element(fb[b.index_of(y).unwrap()]),
        ),
        _ => unreachable!(),
    })
    .unwrap()
}

/// A random function table between two bases.
fn table(rng: &mut Rng, from: &Basis, to: &Basis) -> Vec<usize> {
    (0..from.dim()).map(|_| rng.random_range(0..to.dim())).collect()
}

fn arr_table(from: &Basis, to: &Basis, t: &[usize]) -> SuperVal {
    super_arr(from, to, |e| to.element(t[from.index_of(e).unwrap()])).unwrap()
}

struct GatePool {
    one: Vec<SuperVal>,
    two: Vec<SuperVal>,
}

impl GatePool {
    fn new(ev: &Evaluator) -> Self {
        let b = Basis::bool();
        let named = |n: &str| (*ev.super_named(n).unwrap()).clone();
        let term = |s: &str| (**ev.eval_term(&parse_term(s).unwrap()).unwrap().as_super().unwrap()).clone();
        let dephase = super_compose(&super_meas(&b), &fst_super(&b, &b)).unwrap();
        let one = vec![named("QNot"), named("Had"), term("\\•y. [v y]"), term("\\•y. [vdagger y]"), dephase];
        let mut two = vec![
            named("Cnot"),
            named("Cz"),
            named("cV"),
            named("cVdagger"),
            named("bell"),
            named("Alice"),
        ];
        for g in &one {
            two.push(super_first(g, &b));
            two.push(qarrow_core::super_second(g, &b));
        }
        GatePool { one, two }
    }

    /// A composite of one to three stdlib gates on `n` qubits.
    fn random(&self, rng: &mut Rng, n: usize) -> SuperVal {
        let pool = if n == 1 { &self.one } else { &self.two };
        let k = rng.random_range(1..=3);
        let mut s = pick(rng, pool).clone();
        for _ in 1..k {
            s = super_compose(&s, pick(rng, pool)).unwrap();
        }
        s
    }
}

fn compare_supers(lhs: &SuperVal, rhs: &SuperVal, rng: &mut Rng) -> Result<(), String> {
    ensure(lhs.input == rhs.input && lhs.output == rhs.output, || "bases differ".into())?;
    let mut inputs = common::unit_densities(&lhs.input);
    inputs.extend((0..5).map(|_| common::random_density(&lhs.input, rng)));
    for d in &inputs {
        let (a, b) = (run(lhs, d).unwrap(), run(rhs, d).unwrap());
        if !dens_close(&a, &b, 1e-9).unwrap() {
            return Err(format!("differ by {:.3e}", a.max_diff(&b).unwrap()));
        }
    }
    Ok(())
}

fn classic_arrow_laws() -> Outcome {
    let start = Instant::now();
    let ev = prelude_eval();
    let pool = GatePool::new(&ev);
    let mut rng = common::rng(2);
    let b = Basis::bool();
    let mut checked = 0;
    for law in 1..=9 {
        for inst in 0..25 {
            let n = rng.random_range(1..=2);
            let a = Basis::qubits(n);
            let f = pool.random(&mut rng, n);
            let (lhs, rhs) = match law {
                1 => (super_compose(&SuperVal::identity(&a), &f).unwrap(), f.clone()),
                2 => (super_compose(&f, &SuperVal::identity(&a)).unwrap(), f.clone()),
                3 => {
                    let g = pool.random(&mut rng, n);
                    let h = pool.random(&mut rng, n);
                    let l = super_compose(&super_compose(&f, &g).unwrap(), &h).unwrap();
                    let r = super_compose(&f, &super_compose(&g, &h).unwrap()).unwrap();
                    (l, r)
                }
                4 => {
                    let mid = Basis::qubits(rng.random_range(1..=2));
                    let out = Basis::qubits(rng.random_range(1..=2));
                    let tf = table(&mut rng, &a, &mid);
                    let tg = table(&mut rng, &mid, &out);
                    let composed: Vec<usize> = tf.iter().map(|&i| tg[i]).collect();
                    let l = arr_table(&a, &out, &composed);
                    let r = super_compose(&arr_table(&a, &mid, &tf), &arr_table(&mid, &out, &tg)).unwrap();
                    (l, r)
                }
                5 => {
                    let out = Basis::qubits(rng.random_range(1..=2));
                    let tf = table(&mut rng, &a, &out);
                    let id: Vec<usize> = (0..2).collect();
                    let l = super_first(&arr_table(&a, &out, &tf), &b);
                    (l, cross_super(&a, &b, &tf, &id, &out, &b))
                }
                6 => {
                    let g = pool.random(&mut rng, n);
                    let l = super_first(&super_compose(&f, &g).unwrap(), &b);
                    let r = super_compose(&super_first(&f, &b), &super_first(&g, &b)).unwrap();
                    (l, r)
                }
                7 => {
                    let tg = table(&mut rng, &b, &b);
                    let id: Vec<usize> = (0..a.dim()).collect();
                    let cross_out = cross_super(&a, &b, &id, &tg, &a, &b);
                    let l = super_compose(&super_first(&f, &b), &cross_out).unwrap();
                    let r = super_compose(&cross_out, &super_first(&f, &b)).unwrap();
                    (l, r)
                }
                8 => {
                    let l = super_compose(&super_first(&f, &b), &fst_super(&a, &b)).unwrap();
                    let r = super_compose(&fst_super(&a, &b), &f).unwrap();
                    (l, r)
                }
                _ => {
                    let cd = Basis::prod(&b, &b);
                    let l = super_compose(&super_first(&super_first(&f, &b), &b), &assoc_super(&a, &b, &b)).unwrap();
                    let r = super_compose(&assoc_super(&a, &b, &b), &super_first(&f, &cd)).unwrap();
                    (l, r)
                }
            };
            compare_supers(&lhs, &rhs, &mut rng).map_err(|e| format!("law {law}, instance {inst}: {e}"))?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {}", secs(elapsed)))?;
    Ok(format!("{checked} instances, {}", secs(elapsed)))
}

// ---------------------------------------------------------------------------
// 3. arrow-calculus and monad laws through apply_law_at

/// Largest difference between two values of the same type. Functions are
/// compared on both booleans.
fn value_diff(ev: &Evaluator, a: &Value, b: &Value) -> Result<f64, String> {
    match (a, b) {
        (Value::Super(x), Value::Super(y)) => x.max_diff(y).map_err(|e| e.to_string()),
        (Value::Vec(x), Value::Vec(y)) => x.max_diff(y).map_err(|e| e.to_string()),
        (Value::Closure(_), Value::Closure(_)) => {
            let mut worst: f64 = 0.0;
            for v in [false, true] {
                let fa = ev.apply(a, Value::Bool(v)).map_err(|e| e.to_string())?;
                let fb = ev.apply(b, Value::Bool(v)).map_err(|e| e.to_string())?;
                worst = worst.max(value_diff(ev, &fa, &fb)?);
            }
            Ok(worst)
        }
        _ => Err(format!("incomparable values {a} and {b}")),
    }
}

fn calculus_laws() -> Outcome {
    let start = Instant::now();
    let ev = prelude_eval();
    let rw = Rewriter::new(checked_prelude());
    let env = checked_prelude().env();
    let mut gen = Gen::new(3);
    let laws = [
        Law::BetaArrow,
        Law::EtaArrow,
        Law::LeftUnit,
        Law::RightUnit,
        Law::Assoc,
        Law::MLeft,
        Law::MRight,
        Law::MAssoc,
        Law::MZeroL,
        Law::MZeroR,
        Law::PlusAssoc,
        Law::LetZero,
        Law::LetPlus,
    ];
    let mut worst: f64 = 0.0;
    for law in laws {
        for i in 0..100 {
            let (src, path) = gen.instance(law);
            let ctx = |e: String| format!("{} #{i}: {e}\n  {src}", law.name());
            let lhs = parse_term(&src).map_err(|e| ctx(e.to_string()))?;
            let lhs_ty = infer_term(&env, &lhs).map_err(|e| ctx(e.to_string()))?;
            let out = rw
                .apply_law_at(&Expr::Term(lhs.clone()), &path, law, Direction::L2R)
                .map_err(|e| ctx(e.to_string()))?;
            let Expr::Term(rhs) = out else { return Err(ctx("rewrite changed sort".into())) };
            let rhs_ty = infer_term(&env, &rhs).map_err(|e| ctx(format!("result ill-typed: {e}\n  {rhs}")))?;
            ensure(lhs_ty == rhs_ty, || ctx(format!("type {lhs_ty} became {rhs_ty}")))?;
            let a = ev.eval_term(&lhs).map_err(|e| ctx(e.to_string()))?;
            let b = ev.eval_term(&rhs).map_err(|e| ctx(e.to_string()))?;
            let diff = value_diff(&ev, &a, &b).map_err(ctx)?;
            ensure(diff <= 1e-9, || ctx(format!("denotation moved by {diff:.3e}")))?;
            worst = worst.max(diff);
        }
    }
    Ok(format!("{} laws x 100, max diff {worst:.1e}, {}", laws.len(), secs(start.elapsed())))
}

// ---------------------------------------------------------------------------
// 4. measurement then partial trace

fn measurement() -> Outcome {
    let b = Basis::bool();
    let h = C64::new(0.5, 0.0);
    let plus = DensVal::from_matrix(&b, Array2::from_elem((2, 2), h));
    let expected = DensVal::from_matrix(&b, Array2::from_shape_vec((2, 2), vec![h, C64::default(), C64::default(), h]).unwrap());
    let combinators = super_compose(&super_meas(&b), &super_trl(&b, &b)).unwrap();
    let via_combinators = run(&combinators, &plus).unwrap();
    let ev = prelude_eval();
    let term = ev.eval_term(&parse_term("\\•x. let (a, c) = meas • x in trL • (a, c)").unwrap()).unwrap();
    let via_language = run(term.as_super().unwrap(), &plus).unwrap();
    let worst = via_combinators.max_diff(&expected).unwrap().max(via_language.max_diff(&expected).unwrap());
    ensure(worst <= 1e-12, || format!("off by {worst:.3e}: {}", via_language.render()))?;
    Ok(format!("max diff {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// 5. teleportation

fn teleportation() -> Outcome {
    let start = Instant::now();
    let ev = prelude_eval();
    let tele = ev.super_named("teleport").map_err(|e| e.to_string())?;
    let b = Basis::bool();
    let ancilla = DensVal::unit(&Basis::qubits(2), 0, 0);
    let mut rng = common::rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let rho = if i % 2 == 0 { common::random_density(&b, &mut rng) } else { common::random_pure(&b, &mut rng) };
        let out = run(&tele, &rho.kron(&ancilla)).map_err(|e| e.to_string())?;
        worst = worst.max(out.max_diff(&rho).unwrap());
    }
    let elapsed = start.elapsed();
    ensure(worst < 1e-9, || format!("error {worst:.3e}"))?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {}", secs(elapsed)))?;
    Ok(format!("20 states, max error {worst:.1e}, {}", secs(elapsed)))
}

// ---------------------------------------------------------------------------
// 6. toffoli

fn toffoli() -> Outcome {
    let ev = prelude_eval();
    let tof = ev.super_named("toffoli").map_err(|e| e.to_string())?;
    let basis = Basis::qubits(3);
    let classical = super_arr(&basis, &basis, |e| {
        let bits = common::bits_of(e);
        Classical::bits(&[bits[0], bits[1], bits[2] ^ (bits[0] && bits[1])])
    })
    .unwrap();
    // 110 <-> 111, indices with the first component most significant
    let perm = [0, 1, 2, 3, 4, 5, 7, 6];
    let by_hand = common::permutation_super(&basis, &perm);
    let d1 = tof.max_diff(&classical).unwrap();
    let d2 = classical.max_diff(&by_hand).unwrap();
    ensure(d1 <= 1e-9 && d2 <= 1e-9, || format!("differs by {d1:.3e} / {d2:.3e}"))?;
    Ok(format!("max diff {d1:.1e}"))
}

// ---------------------------------------------------------------------------
// 7. three evaluation routes agree

/// The superoperator of a classical function or linear map, computed by
/// applying the closure to each basis element.
fn direct_lifted(ev: &Evaluator, f: &Value, input: &Basis, output: &Basis) -> Result<SuperVal, String> {
    let mut images = Vec::new();
    for e in input.elements() {
        let v = ev.apply(f, Value::from_classical(&e)).map_err(|e| e.to_string())?;
        images.push(match v {
            Value::Vec(v) => v.amps.to_vec(),
            other => {
                let c = other.to_classical().map_err(|e| e.to_string())?;
                let mut amps = vec![C64::default(); output.dim()];
                amps[output.index_of(&c).unwrap()] = C64::new(1.0, 0.0);
                amps
            }
        });
    }
    let mat = Array2::from_shape_fn((output.dim(), input.dim()), |(r, c)| images[c][r]);
    Ok(qarrow_core::lin2super(&LinOp::from_matrix(input, output, mat)))
}

fn routes_agree() -> Outcome {
    let ev = prelude_eval();
    let program = checked_prelude();
    let env = program.env();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for entry in prelude_entries() {
        let name = entry.name.clone();
        let def = program.get(&name).ok_or_else(|| format!("{name} missing"))?;
        let fail = |e: String| format!("{name}: {e}");
        let (direct, expr) = if def.ty.mentions_super() {
            let direct = (*ev.super_named(&name).map_err(|e| fail(e.to_string()))?).clone();
            (direct, translate_term(&def.typed).map_err(|e| fail(e.to_string()))?)
        } else {
            // a function or linear map runs as the arrow `\•y. [f y]`
            let wrapper = parse_term(&format!("\\•y. [{name} y]")).unwrap();
            let typed = elaborate_term(&env, &wrapper).map_err(|e| fail(e.to_string()))?;
            let expr = translate_term(&typed).map_err(|e| fail(e.to_string()))?;
            let f = ev.get(&name).ok_or_else(|| fail("no value".into()))?;
            let input = Basis::new(&expr.input).map_err(|e| fail(e.to_string()))?;
            let output = Basis::new(&expr.output).map_err(|e| fail(e.to_string()))?;
            (direct_lifted(&ev, f, &input, &output).map_err(fail)?, expr)
        };
        let via_classic = ev.materialize(&expr, Route::Dense).map_err(|e| fail(e.to_string()))?;
        let back = inverse_translate(&expr);
        let via_inverse = ev.eval_term(&back).map_err(|e| fail(format!("{e}\n  {back}")))?;
        let via_inverse = (**via_inverse.as_super().map_err(|e| fail(e.to_string()))?).clone();
        let routes = [&direct, &via_classic, &via_inverse];
        for d in common::unit_densities(&direct.input) {
            let outs: Vec<DensVal> = routes.iter().map(|s| run(s, &d).unwrap()).collect();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let diff = outs[i].max_diff(&outs[j]).map_err(|e| fail(e.to_string()))?;
                ensure(diff <= 1e-12, || fail(format!("routes {i} and {j} differ by {diff:.3e}")))?;
                worst = worst.max(diff);
            }
        }
        count += 1;
    }
    Ok(format!("{count} definitions, max diff {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// 8. ill-typed programs

const ILL_TYPED: &[(&str, TypeErrorKind)] = &[
    ("bad = \\•f. f • x", TypeErrorKind::DeltaMisuse),
    ("bad = \\•x. (\\•y. [x]) • x", TypeErrorKind::DeltaMisuse),
    ("bad = \\•g. let h = g • True in [h]", TypeErrorKind::DeltaMisuse),
    ("bad : Bool = \\x. x", TypeErrorKind::Mismatch),
    ("bad = not (True, False)", TypeErrorKind::Mismatch),
    ("bad = undefinedName", TypeErrorKind::Unbound),
    ("bad : Vec (Bool -> Bool) = mzero", TypeErrorKind::NonClassicalBasis),
    ("bad = \\(x, y) : Bool. x", TypeErrorKind::PatternArity),
    ("bad = [True] + True", TypeErrorKind::Mismatch),
    ("bad = \\•x. let y = QNot • x in trL • y", TypeErrorKind::Mismatch),
];

fn ill_typed() -> Outcome {
    for (src, kind) in ILL_TYPED {
        match load(src, true) {
            Err(Error::Type(e)) if e.kind == *kind => {}
            Err(other) => return Err(format!("`{src}`: expected {kind}, got {other}")),
            Ok(_) => return Err(format!("`{src}` was accepted")),
        }
    }
    Ok(format!("{} programs rejected", ILL_TYPED.len()))
}

// ---------------------------------------------------------------------------
// 9. trace and Hermiticity preservation

fn channels_preserve_densities() -> Outcome {
    let ev = prelude_eval();
    let b = Basis::bool();
    let two = Basis::qubits(2);
    let mut supers: Vec<(String, SuperVal)> = vec![
        ("meas Bool".into(), super_meas(&b)),
        ("meas (Bool, Bool)".into(), super_meas(&two)),
        ("trL Bool Bool".into(), super_trl(&b, &b)),
        ("trL Bool (Bool, Bool)".into(), super_trl(&b, &two)),
        ("\\•x. meas • x".into(), (**ev.eval_term(&parse_term("\\•x. meas • x").unwrap()).unwrap().as_super().unwrap()).clone()),
    ];
    for name in ["QNot", "Had", "Cnot", "Cz", "cV", "cVdagger", "toffoli", "bell"] {
        supers.push((name.into(), (*ev.super_named(name).unwrap()).clone()));
    }
    let mut rng = common::rng(9);
    let mut worst: f64 = 0.0;
    for (name, s) in &supers {
        for _ in 0..100 {
            let rho = common::random_density(&s.input, &mut rng);
            let out = run(s, &rho).map_err(|e| e.to_string())?;
            let (tr, herm) = common::trace_and_hermiticity(&out);
            ensure(tr <= 1e-9 && herm <= 1e-9, || format!("{name}: trace defect {tr:.3e}, hermiticity {herm:.3e}"))?;
            worst = worst.max(tr).max(herm);
        }
    }
    Ok(format!("{} superoperators x 100, max defect {worst:.1e}", supers.len()))
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("double-NOT proof", double_not),
        ("classic arrow laws", classic_arrow_laws),
        ("arrow-calculus and monad laws", calculus_laws),
        ("measurement oracle", measurement),
        ("teleportation", teleportation),
        ("toffoli", toffoli),
        ("evaluation routes agree", routes_agree),
        ("ill-typed programs rejected", ill_typed),
        ("trace and Hermiticity preserved", channels_preserve_densities),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
