//! Fixtures shared by the benchmarks.

use qarrow_core::{checked_prelude, load, Basis, CheckedProgram, DensVal, VecVal, C64};

pub const DOUBLE_NOT: &str = include_str!("../../../programs/doublenot.qarr");
pub const TELEPORT: &str = include_str!("../../../programs/teleport.qarr");

/// The prelude extended with the sample programs.
pub fn programs() -> CheckedProgram {
    let source = format!("{DOUBLE_NOT}\n{TELEPORT}");
    load(&source, true).expect("sample programs typecheck")
}

/// `|+><+|` on `qubits` qubits.
pub fn plus_state(qubits: usize) -> DensVal {
    let basis = Basis::qubits(qubits);
    let amp = C64::new((basis.dim() as f64).sqrt().recip(), 0.0);
    DensVal::pure(&VecVal::from_amps(&basis, vec![amp; basis.dim()]))
}

/// Forces the prelude to be parsed and checked once up front.
pub fn warm() {
    let _ = checked_prelude();
}
