use ndarray::{Array1, Array2};

use super::{Basis, Classical, Result, C64, ONE, ZERO};

/// A vector `A -> ℂ` over an enumerated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct VecVal {
    pub basis: Basis,
    pub amps: Array1<C64>,
}

impl VecVal {
    /// The zero vector, i.e. `mzero`.
    pub fn zero(basis: &Basis) -> Self {
        VecVal { basis: basis.clone(), amps: Array1::from_elem(basis.dim(), ZERO) }
    }

    pub fn from_amps(basis: &Basis, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), basis.dim(), "amplitude count must match the basis");
        VecVal { basis: basis.clone(), amps: Array1::from(amps) }
    }

    pub fn unit(basis: &Basis, i: usize) -> Self {
        let mut v = VecVal::zero(basis);
        v.amps[i] = ONE;
        v
    }

    pub fn add(&self, other: &VecVal) -> Result<VecVal> {
        self.basis.expect_eq(&other.basis)?;
        Ok(VecVal { basis: self.basis.clone(), amps: &self.amps + &other.amps })
    }

    pub fn sub(&self, other: &VecVal) -> Result<VecVal> {
        self.basis.expect_eq(&other.basis)?;
        Ok(VecVal { basis: self.basis.clone(), amps: &self.amps - &other.amps })
    }

    pub fn scale(&self, c: C64) -> VecVal {
        VecVal { basis: self.basis.clone(), amps: self.amps.mapv(|a| a * c) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_diff(&self, other: &VecVal) -> Result<f64> {
        self.basis.expect_eq(&other.basis)?;
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// `return a`: amplitude one at `a`.
pub fn vec_return(basis: &Basis, a: &Classical) -> Result<VecVal> {
    Ok(VecVal::unit(basis, basis.index_of(a)?))
}

/// `v ⋆ f = λb. Σa v(a) · f(a)(b)`. Every `f` output must live in `out`.
pub fn vec_bind(v: &VecVal, out: &Basis, f: impl Fn(&Classical) -> Result<VecVal>) -> Result<VecVal> {
    let mut acc = Array1::from_elem(out.dim(), ZERO);
    for (i, amp) in v.amps.iter().enumerate() {
        if *amp == ZERO {
            continue;
        }
        let fa = f(&v.basis.element(i))?;
        out.expect_eq(&fa.basis)?;
        acc.scaled_add(*amp, &fa.amps);
    }
    Ok(VecVal { basis: out.clone(), amps: acc })
}

/// Kronecker product under the A-major enumeration.
pub fn tensor(v1: &VecVal, v2: &VecVal) -> VecVal {
    let basis = Basis::prod(&v1.basis, &v2.basis);
    let d2 = v2.basis.dim();
    let amps = Array1::from_shape_fn(basis.dim(), |i| v1.amps[i / d2] * v2.amps[i % d2]);
    VecVal { basis, amps }
}

/// A linear map `A -> Vec B`, stored as a `dim B × dim A` matrix whose
/// column `a` is the image of `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinOp {
    pub input: Basis,
    pub output: Basis,
    pub mat: Array2<C64>,
}

impl LinOp {
    pub fn from_fn(input: &Basis, output: &Basis, f: impl Fn(&Classical) -> Result<VecVal>) -> Result<LinOp> {
        let mut mat = Array2::from_elem((output.dim(), input.dim()), ZERO);
        for (j, a) in input.elements().enumerate() {
            let col = f(&a)?;
            output.expect_eq(&col.basis)?;
            mat.column_mut(j).assign(&col.amps);
        }
        Ok(LinOp { input: input.clone(), output: output.clone(), mat })
    }

    pub fn from_matrix(input: &Basis, output: &Basis, mat: Array2<C64>) -> LinOp {
        assert_eq!(mat.dim(), (output.dim(), input.dim()));
        LinOp { input: input.clone(), output: output.clone(), mat }
    }

    pub fn identity(basis: &Basis) -> LinOp {
        LinOp { input: basis.clone(), output: basis.clone(), mat: Array2::eye(basis.dim()).mapv(|x: f64| C64::new(x, 0.0)) }
    }

    pub fn apply(&self, v: &VecVal) -> Result<VecVal> {
        self.input.expect_eq(&v.basis)?;
        Ok(VecVal { basis: self.output.clone(), amps: self.mat.dot(&v.amps) })
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &LinOp) -> Result<LinOp> {
        self.output.expect_eq(&g.input)?;
        Ok(LinOp { input: self.input.clone(), output: g.output.clone(), mat: g.mat.dot(&self.mat) })
    }

    pub fn adjoint(&self) -> LinOp {
        LinOp { input: self.output.clone(), output: self.input.clone(), mat: self.mat.t().mapv(|z| z.conj()) }
    }

    /// `U†U = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if self.input.dim() != self.output.dim() {
            return false;
        }
        let prod = self.adjoint().mat.dot(&self.mat);
        prod.indexed_iter().all(|((i, j), z)| (z - if i == j { ONE } else { ZERO }).norm() < tol)
    }
}

/// `fun2lin f = λa. return (f a)`.
pub fn fun2lin(input: &Basis, output: &Basis, f: impl Fn(&Classical) -> Classical) -> Result<LinOp> {
    LinOp::from_fn(input, output, |a| vec_return(output, &f(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Classical as C;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn return_and_bind() {
        let b = Basis::bool();
        assert_eq!(vec_return(&b, &C::Bool(true)).unwrap().amps.to_vec(), [c(0.0), c(1.0)]);
        let bb = Basis::qubits(2);
        let v = vec_return(&bb, &C::bits(&[false, true])).unwrap();
        assert_eq!(v.amps.to_vec(), [c(0.0), c(1.0), c(0.0), c(0.0)]);

        // bind(|+>, hadamard) = sqrt2 |0> with the unnormalized hadamard
        let h = |a: &C| -> Result<VecVal> {
            let s = if *a == C::Bool(true) { -1.0 } else { 1.0 };
            Ok(VecVal::from_amps(&b, vec![c(1.0), c(s)]))
        };
        let plus = VecVal::from_amps(&b, vec![c(1.0), c(1.0)]).scale(c(std::f64::consts::FRAC_1_SQRT_2));
        let out = vec_bind(&plus, &b, h).unwrap();
        assert!((out.amps[0] - c(std::f64::consts::SQRT_2)).norm() < 1e-12);
        assert!(out.amps[1].norm() < 1e-12);
    }

    #[test]
    fn tensor_expands_definition() {
        let b = Basis::bool();
        let u = VecVal::from_amps(&b, vec![c(1.0), c(1.0)]);
        let v = VecVal::from_amps(&b, vec![c(1.0), c(0.0)]);
        assert_eq!(tensor(&u, &v).amps.to_vec(), [c(1.0), c(0.0), c(1.0), c(0.0)]);
    }

    #[test]
    fn fun2lin_matrices() {
        let b = Basis::bool();
        let x = fun2lin(&b, &b, |a| match a {
            C::Bool(v) => C::Bool(!v),
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(x.mat, ndarray::array![[c(0.0), c(1.0)], [c(1.0), c(0.0)]]);
        assert!(x.is_unitary(1e-12));

        let fst = fun2lin(&Basis::qubits(2), &b, |a| match a {
            C::Pair(l, _) => (**l).clone(),
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(
            fst.mat,
            ndarray::array![[c(1.0), c(1.0), c(0.0), c(0.0)], [c(0.0), c(0.0), c(1.0), c(1.0)]]
        );
    }
}
