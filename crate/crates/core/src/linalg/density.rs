use ndarray::{Array1, Array2};

use super::{Basis, Result, VecVal, C64, ONE, ZERO};

/// A density matrix over `basis`, i.e. an element of `Vec (A, A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensVal {
    pub basis: Basis,
    pub mat: Array2<C64>,
}

impl DensVal {
    pub fn zero(basis: &Basis) -> Self {
        let d = basis.dim();
        DensVal { basis: basis.clone(), mat: Array2::from_elem((d, d), ZERO) }
    }

    pub fn from_matrix(basis: &Basis, mat: Array2<C64>) -> Self {
        assert_eq!(mat.dim(), (basis.dim(), basis.dim()), "matrix shape must match the basis");
        DensVal { basis: basis.clone(), mat }
    }

    /// `|i⟩⟨j|`.
    pub fn unit(basis: &Basis, i: usize, j: usize) -> Self {
        let mut d = DensVal::zero(basis);
        d.mat[(i, j)] = ONE;
        d
    }

    /// `|v⟩⟨v|`.
    pub fn pure(v: &VecVal) -> Self {
        let d = v.basis.dim();
        let mat = Array2::from_shape_fn((d, d), |(i, j)| v.amps[i] * v.amps[j].conj());
        DensVal { basis: v.basis.clone(), mat }
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.mat.indexed_iter().all(|((i, j), z)| (z - self.mat[(j, i)].conj()).norm() < tol)
    }

    pub fn max_diff(&self, other: &DensVal) -> Result<f64> {
        self.basis.expect_eq(&other.basis)?;
        Ok(self.mat.iter().zip(other.mat.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Kronecker product: the density of the pair state.
    pub fn kron(&self, other: &DensVal) -> DensVal {
        let basis = Basis::prod(&self.basis, &other.basis);
        let d2 = other.basis.dim();
        let mat = Array2::from_shape_fn((basis.dim(), basis.dim()), |(i, j)| {
            self.mat[(i / d2, j / d2)] * other.mat[(i % d2, j % d2)]
        });
        DensVal { basis, mat }
    }

    pub fn add(&self, other: &DensVal) -> Result<DensVal> {
        self.basis.expect_eq(&other.basis)?;
        Ok(DensVal { basis: self.basis.clone(), mat: &self.mat + &other.mat })
    }

    pub fn scale(&self, c: C64) -> DensVal {
        DensVal { basis: self.basis.clone(), mat: self.mat.mapv(|z| z * c) }
    }

    /// Row-major flattening, the layout superoperators act on.
    pub fn to_vector(&self) -> Array1<C64> {
        Array1::from_iter(self.mat.iter().copied())
    }

    pub fn from_vector(basis: &Basis, v: Array1<C64>) -> Self {
        let d = basis.dim();
        let mat = v.into_shape_with_order((d, d)).expect("vector length must be dim²");
        DensVal { basis: basis.clone(), mat }
    }
}

/// Maximum entrywise difference below `tol`.
pub fn dens_close(a: &DensVal, b: &DensVal, tol: f64) -> Result<bool> {
    Ok(a.max_diff(b)? < tol)
}
