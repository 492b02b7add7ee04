//! The prelude: classical helpers, gates, and the teleportation protocol,
//! written in the surface language.
//!
//! Each entry comes with its expected type and, for gates, a reference
//! superoperator built directly from matrices.

use std::sync::OnceLock;

use ndarray::{array, Array2};

use crate::linalg::{lin2super, super_arr, Basis, Classical, LinOp, SuperVal, C64};
use crate::syntax::{parse_program, parse_type, Program, TypeExpr};
use crate::typechecker::{check_program, CheckedProgram};

/// Source of the prelude, loaded by default by the CLI.
pub const PRELUDE_SOURCE: &str = include_str!("../../prelude.qarr");

/// One prelude definition with its expected type and optional oracle.
#[derive(Clone, Debug)]
pub struct PreludeEntry {
    pub name: String,
    pub source: String,
    pub expected: TypeExpr,
    pub oracle: Option<SuperVal>,
}

/// The parsed prelude.
pub fn prelude() -> Program {
    parse_program(PRELUDE_SOURCE).expect("prelude parses")
}

/// The typechecked prelude, computed once.
pub fn checked_prelude() -> &'static CheckedProgram {
    static CHECKED: OnceLock<CheckedProgram> = OnceLock::new();
    CHECKED.get_or_init(|| check_program(&prelude()).expect("prelude typechecks"))
}

const EXPECTED: &[(&str, &str)] = &[
    ("not", "Bool -> Bool"),
    ("QNot", "Super Bool Bool"),
    ("hadamard", "Lin Bool Bool"),
    ("hadamard_raw", "Lin Bool Bool"),
    ("Had", "Super Bool Bool"),
    ("cnot", "Lin (Bool, Bool) (Bool, Bool)"),
    ("Cnot", "Super (Bool, Bool) (Bool, Bool)"),
    ("cz", "Lin (Bool, Bool) (Bool, Bool)"),
    ("Cz", "Super (Bool, Bool) (Bool, Bool)"),
    ("v", "Lin Bool Bool"),
    ("vdagger", "Lin Bool Bool"),
    ("cv", "Lin (Bool, Bool) (Bool, Bool)"),
    ("cvdagger", "Lin (Bool, Bool) (Bool, Bool)"),
    ("cV", "Super (Bool, Bool) (Bool, Bool)"),
    ("cVdagger", "Super (Bool, Bool) (Bool, Bool)"),
    ("toffoli", "Super (Bool, Bool, Bool) (Bool, Bool, Bool)"),
    ("bell", "Super (Bool, Bool) (Bool, Bool)"),
    ("Alice", "Super (Bool, Bool) (Bool, Bool)"),
    ("Alice_paper", "Super (Bool, Bool) (Bool, Bool)"),
    ("Bob", "Super (Bool, Bool, Bool) Bool"),
    ("teleport", "Super (Bool, Bool, Bool) Bool"),
];

/// All prelude definitions in source order.
pub fn prelude_entries() -> Vec<PreludeEntry> {
    let program = prelude();
    let lines: Vec<&str> = PRELUDE_SOURCE.lines().collect();
    let starts: Vec<usize> = program.defs.iter().map(|d| d.pos.line as usize - 1).collect();
    program
        .defs
        .iter()
        .enumerate()
        .map(|(k, def)| {
            let end = starts.get(k + 1).copied().unwrap_or(lines.len());
            let mut chunk: Vec<&str> = lines[starts[k]..end].to_vec();
            while chunk.last().is_some_and(|l| l.trim().is_empty() || l.starts_with("--")) {
                chunk.pop();
            }
            let expected = EXPECTED
                .iter()
                .find(|(n, _)| *n == def.name)
                .map(|(_, t)| parse_type(t).expect("expected type parses"))
                .unwrap_or_else(|| panic!("no expected type for prelude entry `{}`", def.name));
            PreludeEntry { name: def.name.clone(), source: chunk.join("\n"), expected, oracle: oracle(&def.name) }
        })
        .collect()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The matrix of a gate in the computational basis, column `a` = image of `a`.
pub fn gate_matrix(name: &str) -> Option<Array2<C64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
    Some(match name {
        "hadamard" => array![[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        "hadamard_raw" => array![[o, o], [o, -o]],
        "v" => array![[p, m], [m, p]],
        "vdagger" => array![[m, p], [p, m]],
        "cnot" => array![[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]],
        "cz" => array![[o, z, z, z], [z, o, z, z], [z, z, o, z], [z, z, z, -o]],
        "cv" => array![[o, z, z, z], [z, o, z, z], [z, z, p, m], [z, z, m, p]],
        "cvdagger" => array![[o, z, z, z], [z, o, z, z], [z, z, m, p], [z, z, p, m]],
        _ => return None,
    })
}

fn conjugation(name: &str) -> SuperVal {
    let mat = gate_matrix(name).expect("known gate");
    let basis = Basis::qubits(if mat.nrows() == 2 { 1 } else { 2 });
    lin2super(&LinOp::from_matrix(&basis, &basis, mat))
}

fn bit(e: &Classical) -> bool {
    matches!(e, Classical::Bool(true))
}

/// Reference superoperators, built without the evaluator.
pub fn oracle(name: &str) -> Option<SuperVal> {
    Some(match name {
        "QNot" => super_arr(&Basis::bool(), &Basis::bool(), |e| Classical::Bool(!bit(e))).ok()?,
        "Had" => conjugation("hadamard"),
        "Cnot" => conjugation("cnot"),
        "Cz" => conjugation("cz"),
        "cV" => conjugation("cv"),
        "cVdagger" => conjugation("cvdagger"),
        "bell" => {
            let h = gate_matrix("hadamard")?;
            let id = Array2::<C64>::eye(2);
            let mut h_id = Array2::zeros((4, 4));
            for (i, j) in (0..4).flat_map(|i| (0..4).map(move |j| (i, j))) {
                h_id[(i, j)] = h[(i / 2, j / 2)] * id[(i % 2, j % 2)];
            }
            let u = gate_matrix("cnot")?.dot(&h_id);
            lin2super(&LinOp::from_matrix(&Basis::qubits(2), &Basis::qubits(2), u))
        }
        "toffoli" => super_arr(&Basis::qubits(3), &Basis::qubits(3), |e| {
            let Classical::Pair(a, rest) = e else { unreachable!() };
            let Classical::Pair(b, t) = &**rest else { unreachable!() };
            let flipped = bit(t) ^ (bit(a) && bit(b));
            Classical::bits(&[bit(a), bit(b), flipped])
        })
        .ok()?,
        _ => return None,
    })
}
