//! Ket expressions such as `(|0> + |1>)/sqrt2` or `0.6|00> - 0.8i|11>`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('/' ('sqrt2' | number))*
//! factor := [number ['*']] ['i' ['*']] atom
//! atom   := '|' bits '>' | '(' expr ')'
//! ```

use qarrow_core::C64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("ket expression, column {col}: {message}")]
pub struct KetError {
    pub col: usize,
    pub message: String,
}

/// An unnormalized state over `bits` qubits; amplitude `k` belongs to the
/// basis state whose binary expansion (first qubit most significant) is `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    pub bits: usize,
    pub amps: Vec<C64>,
}

impl Ket {
    fn scale(mut self, c: C64) -> Ket {
        self.amps.iter_mut().for_each(|a| *a *= c);
        self
    }
}

pub fn parse(src: &str) -> Result<Ket, KetError> {
    let mut p = Parser { chars: src.chars().collect(), at: 0 };
    let ket = p.expr()?;
    p.skip_ws();
    if p.at < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.at])));
    }
    Ok(ket)
}

struct Parser {
    chars: Vec<char>,
    at: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> KetError {
        KetError { col: self.at + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|c| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let end = self.at + w.chars().count();
        if end <= self.chars.len() && self.chars[self.at..end].iter().copied().eq(w.chars()) {
            self.at = end;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ket, KetError> {
        let negate = self.eat('-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(C64::new(-1.0, 0.0));
        }
        loop {
            let sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                return Ok(acc);
            };
            let col = self.at;
            let rhs = self.term()?;
            if rhs.bits != acc.bits {
                return Err(KetError {
                    col: col + 1,
                    message: format!("{}-qubit ket added to a {}-qubit ket", rhs.bits, acc.bits),
                });
            }
            for (a, b) in acc.amps.iter_mut().zip(rhs.amps) {
                *a += sign * b;
            }
        }
    }

    fn term(&mut self) -> Result<Ket, KetError> {
        let mut k = self.factor()?;
        while self.eat('/') {
            let d = if self.eat_word("sqrt2") {
                std::f64::consts::SQRT_2
            } else {
                self.number()?.ok_or_else(|| self.error("expected `sqrt2` or a number after `/`"))?
            };
            k = k.scale(C64::new(1.0 / d, 0.0));
        }
        Ok(k)
    }

    fn number(&mut self) -> Result<Option<f64>, KetError> {
        self.skip_ws();
        let start = self.at;
        while self.chars.get(self.at).is_some_and(|c| c.is_ascii_digit() || *c == '.') {
            self.at += 1;
        }
        if start == self.at {
            return Ok(None);
        }
        let text: String = self.chars[start..self.at].iter().collect();
        text.parse().map(Some).map_err(|_| KetError { col: start + 1, message: format!("bad number `{text}`") })
    }

    fn factor(&mut self) -> Result<Ket, KetError> {
        let mut c = C64::new(1.0, 0.0);
        if let Some(x) = self.number()? {
            c *= x;
            self.eat('*');
        }
        if self.eat('i') {
            c *= C64::new(0.0, 1.0);
            self.eat('*');
        }
        Ok(self.atom()?.scale(c))
    }

    fn atom(&mut self) -> Result<Ket, KetError> {
        if self.eat('(') {
            let k = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(k);
        }
        if !self.eat('|') {
            return Err(self.error("expected `|bits>` or `(`"));
        }
        let mut index = 0usize;
        let mut bits = 0;
        while let Some(c @ ('0' | '1')) = self.chars.get(self.at).copied() {
            index = index * 2 + usize::from(c == '1');
            bits += 1;
            self.at += 1;
        }
        if bits == 0 {
            return Err(self.error("expected at least one bit"));
        }
        if bits > 16 {
            return Err(self.error("at most 16 qubits are supported"));
        }
        if !self.eat('>') {
            return Err(self.error("expected `>`"));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << bits];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Ket { bits, amps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amps(src: &str) -> Vec<(f64, f64)> {
        parse(src).unwrap().amps.iter().map(|z| (z.re, z.im)).collect()
    }

    fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12)
    }

    #[test]
    fn basis_kets() {
        assert_eq!(amps("|0>"), vec![(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(parse("|10>").unwrap().amps[2], C64::new(1.0, 0.0));
        assert_eq!(parse(" |011> ").unwrap().bits, 3);
    }

    #[test]
    fn superpositions() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(&amps("(|0> + |1>)/sqrt2"), &[(s, 0.0), (s, 0.0)]));
        assert!(close(&amps("(|0> - |1>)/sqrt2"), &[(s, 0.0), (-s, 0.0)]));
        assert!(close(&amps("-|1>"), &[(0.0, 0.0), (-1.0, 0.0)]));
        assert!(close(&amps("0.6|0> + 0.8i|1>"), &[(0.6, 0.0), (0.0, 0.8)]));
        assert!(close(&amps("(|00> + |11>)/sqrt2"), &[(s, 0.0), (0.0, 0.0), (0.0, 0.0), (s, 0.0)]));
        assert!(close(&amps("|0>/2 + |0>/2"), &[(1.0, 0.0), (0.0, 0.0)]));
    }

    #[test]
    fn errors() {
        assert!(parse("|0> + |01>").unwrap_err().message.contains("added to"));
        assert!(parse("|2>").is_err());
        assert!(parse("(|0>").unwrap_err().message.contains("`)`"));
        assert_eq!(parse("|0> |1>").unwrap_err().col, 5);
        assert!(parse("").is_err());
    }
}
