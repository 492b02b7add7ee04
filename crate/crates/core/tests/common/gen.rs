//! Random well-typed programs as source text.

use qarrow_core::Law;
use rand::RngExt;

use super::{pick, Rng};

/// Random well-typed source text. Every variable has type `Bool`.
pub struct Gen {
    pub rng: Rng,
    fresh: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: super::rng(seed), fresh: 0 }
    }

    pub fn name(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    pub fn bool_term(&mut self, vars: &[String], depth: u32) -> String {
        let leaf = depth == 0 || self.rng.random_bool(0.35);
        if leaf {
            if !vars.is_empty() && self.rng.random_bool(0.7) {
                return pick(&mut self.rng, vars).clone();
            }
            return if self.rng.random_bool(0.5) { "True" } else { "False" }.into();
        }
        let d = depth - 1;
        match self.rng.random_range(0..5) {
            0 => format!("(not {})", self.bool_term(vars, d)),
            1 => format!(
                "(if {} then {} else {})",
                self.bool_term(vars, d),
                self.bool_term(vars, d),
                self.bool_term(vars, d)
            ),
            2 => format!("({} == {})", self.bool_term(vars, d), self.bool_term(vars, d)),
            3 => format!("(fst ({}, {}))", self.bool_term(vars, d), self.bool_term(vars, d)),
            _ => {
                let z = self.name();
                let mut inner = vars.to_vec();
                inner.push(z.clone());
                format!("((\\{z}. {}) {})", self.bool_term(&inner, d), self.bool_term(vars, d))
            }
        }
    }

    /// A command of type `Dens Bool`.
    pub fn command(&mut self, vars: &[String], depth: u32) -> String {
        let leaf = depth == 0 || self.rng.random_bool(0.25);
        if leaf {
            let t = self.bool_term(vars, 2);
            return match self.rng.random_range(0..4) {
                0 => format!("[{t}]"),
                1 => format!("QNot • ({t})"),
                2 => format!("Had • ({t})"),
                _ => format!("[hadamard ({t})]"),
            };
        }
        let d = depth - 1;
        match self.rng.random_range(0..5) {
            0 => {
                let y = self.name();
                let first = self.command(vars, d);
                let mut inner = vars.to_vec();
                inner.push(y.clone());
                format!("let {y} = {first} in {}", self.command(&inner, d))
            }
            1 => {
                let (p, q) = (self.name(), self.name());
                let (s, t) = (self.bool_term(vars, 1), self.bool_term(vars, 1));
                let gate = pick(&mut self.rng, &["Cnot", "Cz", "cV", "bell"]).to_string();
                let mut inner = vars.to_vec();
                inner.extend([p.clone(), q.clone()]);
                format!("let ({p}, {q}) = {gate} • ({s}, {t}) in {}", self.command(&inner, d))
            }
            2 => {
                let (p, q) = (self.name(), self.name());
                let t = self.bool_term(vars, 1);
                let mut inner = vars.to_vec();
                inner.extend([p.clone(), q.clone()]);
                format!("let ({p}, {q}) = meas • ({t}) in {}", self.command(&inner, d))
            }
            3 => {
                let (s, t) = (self.bool_term(vars, 1), self.bool_term(vars, 1));
                format!("trL • ({s}, {t})")
            }
            _ => {
                let y = self.name();
                let inner_cmd = self.command(std::slice::from_ref(&y), d);
                format!("(\\•{y}. {inner_cmd}) • ({})", self.bool_term(vars, 1))
            }
        }
    }

    /// A term of type `Vec Bool`.
    pub fn vector(&mut self, vars: &[String], depth: u32) -> String {
        let leaf = depth == 0 || self.rng.random_bool(0.3);
        if leaf {
            let t = self.bool_term(vars, 1);
            return match self.rng.random_range(0..5) {
                0 | 1 => format!("[{t}]"),
                2 => format!("(hadamard ({t}))"),
                3 => format!("(v ({t}))"),
                _ => "mzero".into(),
            };
        }
        let d = depth - 1;
        match self.rng.random_range(0..5) {
            0 => format!("((0.5+0.25i) * {})", self.vector(vars, d)),
            1 => format!("({} + {})", self.vector(vars, d), self.vector(vars, d)),
            2 => format!("({} - {})", self.vector(vars, d), self.vector(vars, d)),
            3 => {
                let y = self.name();
                let m = self.vector(vars, d);
                let mut inner = vars.to_vec();
                inner.push(y.clone());
                format!("(let {y} <- {m} in {})", self.vector(&inner, d))
            }
            _ => format!(
                "(if {} then {} else {})",
                self.bool_term(vars, 1),
                self.vector(vars, d),
                self.vector(vars, d)
            ),
        }
    }

    /// An instance of `law` and the path of its redex.
    pub fn instance(&mut self, law: Law) -> (String, Vec<usize>) {
        let x = self.name();
        let xs = vec![x.clone()];
        let with = |v: &[String], extra: &String| {
            let mut out = v.to_vec();
            out.push(extra.clone());
            out
        };
        match law {
            Law::BetaArrow => {
                let y = self.name();
                let body = self.command(std::slice::from_ref(&y), 2);
                let arg = self.bool_term(&xs, 2);
                (format!("\\•{x}. (\\•{y}. {body}) • ({arg})"), vec![0])
            }
            Law::EtaArrow => {
                let y = self.name();
                let arrow = if self.rng.random_bool(0.5) {
                    pick(&mut self.rng, &["QNot", "Had"]).to_string()
                } else {
                    let z = self.name();
                    format!("(\\•{z}. {})", self.command(std::slice::from_ref(&z), 2))
                };
                (format!("\\•{x}. (\\•{y}. {arrow} • {y}) • {x}"), vec![0, 0])
            }
            Law::LeftUnit => {
                let y = self.name();
                let m = self.bool_term(&xs, 2);
                let body = self.command(&with(&xs, &y), 2);
                (format!("\\•{x}. let {y} = [{m}] in {body}"), vec![0])
            }
            Law::RightUnit => {
                let y = self.name();
                let c = self.command(&xs, 2);
                (format!("\\•{x}. let {y} = {c} in [{y}]"), vec![0])
            }
            Law::Assoc => {
                let (y, z) = (self.name(), self.name());
                let p = self.command(&xs, 1);
                let q = self.command(&with(&xs, &z), 1);
                let r = self.command(&with(&xs, &y), 1);
                (format!("\\•{x}. let {y} = (let {z} = {p} in {q}) in {r}"), vec![0])
            }
            _ => {
                let inner = self.monad_instance(law, &xs);
                (format!("\\{x} : Bool. ({inner})"), vec![0])
            }
        }
    }

    pub fn monad_instance(&mut self, law: Law, xs: &[String]) -> String {
        let y = self.name();
        let mut xy = xs.to_vec();
        xy.push(y.clone());
        match law {
            Law::MLeft => format!("let {y} <- [{}] in {}", self.bool_term(xs, 2), self.vector(&xy, 2)),
            Law::MRight => format!("let {y} <- {} in [{y}]", self.vector(xs, 2)),
            Law::MAssoc => {
                let z = self.name();
                let mut xz = xs.to_vec();
                xz.push(z.clone());
                let l = self.vector(xs, 1);
                let n = self.vector(&xz, 1);
                let t = self.vector(&xy, 1);
                format!("let {y} <- (let {z} <- {l} in {n}) in {t}")
            }
            Law::MZeroL => format!("mzero + {}", self.vector(xs, 2)),
            Law::MZeroR => format!("{} + mzero", self.vector(xs, 2)),
            Law::PlusAssoc => {
                format!("{} + ({} + {})", self.vector(xs, 1), self.vector(xs, 1), self.vector(xs, 1))
            }
            Law::LetZero => format!("let {y} <- mzero in {}", self.vector(&xy, 2)),
            Law::LetPlus => {
                format!("let {y} <- ({} + {}) in {}", self.vector(xs, 1), self.vector(xs, 1), self.vector(&xy, 1))
            }
            other => unreachable!("{other:?}"),
        }
    }
}

