use ndarray::Array2;

use super::{Basis, Classical, DensVal, LinOp, Result, C64, ONE, ZERO};

/// A superoperator `Super A B`, stored as the matrix that maps a
/// row-major vectorized density over `A` (as a row vector) to one over `B`.
///
/// Row `i1 * dA + i2` holds the image of `|i1⟩⟨i2|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperVal {
    pub input: Basis,
    pub output: Basis,
    pub action: Array2<C64>,
}

impl SuperVal {
    pub fn zero(input: &Basis, output: &Basis) -> Self {
        let (di, d_o) = (input.dim(), output.dim());
        SuperVal { input: input.clone(), output: output.clone(), action: Array2::from_elem((di * di, d_o * d_o), ZERO) }
    }

    pub fn identity(basis: &Basis) -> Self {
        let d2 = basis.dim() * basis.dim();
        SuperVal { input: basis.clone(), output: basis.clone(), action: Array2::eye(d2).mapv(|x: f64| C64::new(x, 0.0)) }
    }

    /// Builds the matrix from the images of the units `|i⟩⟨j|`.
    pub fn from_images(input: &Basis, output: &Basis, mut image: impl FnMut(usize, usize) -> DensVal) -> Self {
        let mut s = SuperVal::zero(input, output);
        let d = input.dim();
        for i in 0..d {
            for j in 0..d {
                let img = image(i, j);
                debug_assert_eq!(img.basis, *output);
                s.action.row_mut(i * d + j).assign(&img.to_vector());
            }
        }
        s
    }

    /// The image of `|i⟩⟨j|`.
    pub fn image(&self, i: usize, j: usize) -> DensVal {
        let row = self.action.row(i * self.input.dim() + j).to_owned();
        DensVal::from_vector(&self.output, row)
    }

    pub fn apply(&self, d: &DensVal) -> Result<DensVal> {
        self.input.expect_eq(&d.basis)?;
        Ok(DensVal::from_vector(&self.output, d.to_vector().dot(&self.action)))
    }

    /// `self ≫ g`.
    pub fn then(&self, g: &SuperVal) -> Result<SuperVal> {
        super_compose(self, g)
    }

    pub fn max_diff(&self, other: &SuperVal) -> Result<f64> {
        self.input.expect_eq(&other.input)?;
        self.output.expect_eq(&other.output)?;
        Ok(self.action.iter().zip(other.action.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn close(&self, other: &SuperVal, tol: f64) -> bool {
        self.max_diff(other).is_ok_and(|d| d < tol)
    }
}

/// `arr f`: the classical function lifted to act on both density indices.
pub fn super_arr(input: &Basis, output: &Basis, f: impl Fn(&Classical) -> Classical) -> Result<SuperVal> {
    let image: Vec<usize> = input.elements().map(|a| output.index_of(&f(&a))).collect::<Result<_>>()?;
    let (d, d_o) = (input.dim(), output.dim());
    let mut s = SuperVal::zero(input, output);
    for a1 in 0..d {
        for a2 in 0..d {
            s.action[(a1 * d + a2, image[a1] * d_o + image[a2])] = ONE;
        }
    }
    Ok(s)
}

/// The conjugation `ρ ↦ FρF†` of a linear map.
pub fn lin2super(f: &LinOp) -> SuperVal {
    let (d, d_o) = (f.input.dim(), f.output.dim());
    let mut s = SuperVal::zero(&f.input, &f.output);
    for a1 in 0..d {
        for a2 in 0..d {
            for b1 in 0..d_o {
                let x = f.mat[(b1, a1)];
                if x == ZERO {
                    continue;
                }
                for b2 in 0..d_o {
                    s.action[(a1 * d + a2, b1 * d_o + b2)] = x * f.mat[(b2, a2)].conj();
                }
            }
        }
    }
    s
}

/// `f ≫ g`: first `f`, then `g`.
pub fn super_compose(f: &SuperVal, g: &SuperVal) -> Result<SuperVal> {
    f.output.expect_eq(&g.input)?;
    Ok(SuperVal { input: f.input.clone(), output: g.output.clone(), action: f.action.dot(&g.action) })
}

/// `first f`: acts as `f` on the left factor and as the identity on `c`.
pub fn super_first(f: &SuperVal, c: &Basis) -> SuperVal {
    let (da, db, dc) = (f.input.dim(), f.output.dim(), c.dim());
    let input = Basis::prod(&f.input, c);
    let output = Basis::prod(&f.output, c);
    let (dac, dbc) = (da * dc, db * dc);
    let mut s = SuperVal::zero(&input, &output);
    for ((row, col), x) in f.action.indexed_iter() {
        if *x == ZERO {
            continue;
        }
        let (a1, a2) = (row / da, row % da);
        let (b1, b2) = (col / db, col % db);
        for c1 in 0..dc {
            for c2 in 0..dc {
                let i = (a1 * dc + c1) * dac + (a2 * dc + c2);
                let o = (b1 * dc + c1) * dbc + (b2 * dc + c2);
                s.action[(i, o)] = *x;
            }
        }
    }
    s
}

fn swap(a: &Basis, b: &Basis) -> SuperVal {
    super_arr(&Basis::prod(a, b), &Basis::prod(b, a), |e| match e {
        Classical::Pair(x, y) => Classical::Pair(y.clone(), x.clone()),
        _ => unreachable!("product basis"),
    })
    .expect("swap stays in basis")
}

/// `second f = arr swap ≫ first f ≫ arr swap`.
pub fn super_second(f: &SuperVal, c: &Basis) -> SuperVal {
    let pre = swap(c, &f.input);
    let post = swap(&f.output, c);
    let mid = super_first(f, c);
    super_compose(&super_compose(&pre, &mid).expect("typed"), &post).expect("typed")
}

/// `f &&& g = arr dup ≫ first f ≫ second g`.
pub fn super_fanout(f: &SuperVal, g: &SuperVal) -> Result<SuperVal> {
    f.input.expect_eq(&g.input)?;
    let a = &f.input;
    let dup = super_arr(a, &Basis::prod(a, a), |e| Classical::pair(e.clone(), e.clone()))?;
    let first = super_first(f, a);
    let second = super_second(g, &f.output);
    super_compose(&super_compose(&dup, &first)?, &second)
}

/// Measurement: `|a1⟩⟨a2| ↦ if a1 == a2 then |(a,a)⟩⟨(a,a)| else 0`.
pub fn super_meas(basis: &Basis) -> SuperVal {
    let d = basis.dim();
    let output = Basis::prod(basis, basis);
    let d_o = d * d;
    let mut s = SuperVal::zero(basis, &output);
    for a in 0..d {
        let o = a * d + a;
        s.action[(a * d + a, o * d_o + o)] = ONE;
    }
    s
}

/// Partial trace over the left factor.
pub fn super_trl(left: &Basis, right: &Basis) -> SuperVal {
    let (da, db) = (left.dim(), right.dim());
    let input = Basis::prod(left, right);
    let dab = da * db;
    let mut s = SuperVal::zero(&input, right);
    for a in 0..da {
        for b1 in 0..db {
            for b2 in 0..db {
                s.action[((a * db + b1) * dab + (a * db + b2), b1 * db + b2)] = ONE;
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fun2lin, VecVal};

    fn not(e: &Classical) -> Classical {
        match e {
            Classical::Bool(b) => Classical::Bool(!b),
            _ => unreachable!(),
        }
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn hadamard() -> LinOp {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        LinOp::from_matrix(&Basis::bool(), &Basis::bool(), ndarray::array![[c(s), c(s)], [c(s), c(-s)]])
    }

    #[test]
    fn arr_matches_lin2super() {
        let b = Basis::bool();
        let arr = super_arr(&b, &b, not).unwrap();
        let lifted = lin2super(&fun2lin(&b, &b, not).unwrap());
        assert_eq!(arr, lifted);
        let out = arr.apply(&DensVal::unit(&b, 0, 0)).unwrap();
        assert_eq!(out, DensVal::unit(&b, 1, 1));
    }

    #[test]
    fn hadamard_conjugation() {
        let b = Basis::bool();
        let h = lin2super(&hadamard());
        let out = h.apply(&DensVal::unit(&b, 0, 0)).unwrap();
        assert!(out.mat.iter().all(|z| (z - c(0.5)).norm() < 1e-12));
        let hh = super_compose(&h, &h).unwrap();
        assert!(hh.close(&SuperVal::identity(&b), 1e-12));
    }

    #[test]
    fn first_and_second_track_basis() {
        let b = Basis::bool();
        let x = super_arr(&b, &b, not).unwrap();
        let bb = Basis::qubits(2);
        // first X on |01⟩⟨01| gives |11⟩⟨11|
        let out = super_first(&x, &b).apply(&DensVal::unit(&bb, 1, 1)).unwrap();
        assert_eq!(out, DensVal::unit(&bb, 3, 3));
        // second X on |01⟩⟨01| gives |00⟩⟨00|
        let out = super_second(&x, &b).apply(&DensVal::unit(&bb, 1, 1)).unwrap();
        assert_eq!(out, DensVal::unit(&bb, 0, 0));
        assert_eq!(super_first(&SuperVal::identity(&b), &b), SuperVal::identity(&bb));
    }

    #[test]
    fn fanout_of_arrs_is_pointwise() {
        let b = Basis::bool();
        let f = super_arr(&b, &b, not).unwrap();
        let g = SuperVal::identity(&b);
        let lhs = super_fanout(&f, &g).unwrap();
        let rhs = super_arr(&b, &Basis::qubits(2), |e| Classical::pair(not(e), e.clone())).unwrap();
        assert!(lhs.close(&rhs, 1e-12));
    }

    #[test]
    fn meas_of_plus_state() {
        let b = Basis::bool();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensVal::pure(&VecVal::from_amps(&b, vec![c(s), c(s)]));
        let out = super_meas(&b).apply(&plus).unwrap();
        let bb = Basis::qubits(2);
        let expected = DensVal::unit(&bb, 0, 0).scale(c(0.5)).add(&DensVal::unit(&bb, 3, 3).scale(c(0.5))).unwrap();
        assert!(out.max_diff(&expected).unwrap() < 1e-12);
        // discarding the attached copy leaves the mixed state
        let marginal = super_trl(&b, &b).apply(&out).unwrap();
        assert!(marginal.max_diff(&DensVal::from_matrix(&b, ndarray::array![[c(0.5), c(0.0)], [c(0.0), c(0.5)]])).unwrap() < 1e-12);
    }

    #[test]
    fn trl_of_product() {
        let b = Basis::bool();
        let rho = DensVal::from_matrix(&b, ndarray::array![[c(0.3), C64::new(0.1, 0.2)], [C64::new(0.1, -0.2), c(0.7)]]);
        let out = super_trl(&b, &b).apply(&DensVal::unit(&b, 0, 0).kron(&rho)).unwrap();
        assert!(out.max_diff(&rho).unwrap() < 1e-15);
    }
}
