//! Finite-dimensional semantic domain: vectors, linear maps, density
//! matrices and superoperators over enumerated classical bases.
//!
//! A classical type is enumerated with `Bool` as `[False, True]` and
//! products A-major, so `(a, b)` sits at index `ia * dim(B) + ib`.

mod density;
mod format;
mod superop;
mod vector;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::syntax::TypeExpr;

pub use density::{dens_close, DensVal};
pub use format::{render_matrix, MatrixJson};
pub use superop::{
    lin2super, super_arr, super_compose, super_fanout, super_first, super_meas, super_second,
    super_trl, SuperVal,
};
pub use vector::{fun2lin, tensor, vec_bind, vec_return, LinOp, VecVal};

pub type C64 = Complex64;

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: TypeExpr, found: TypeExpr },
    #[error("`{0}` is not a classical type")]
    NonClassical(TypeExpr),
    #[error("{0} is not an element of {1}")]
    NotInBasis(Classical, TypeExpr),
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// An element of a classical basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classical {
    Bool(bool),
    Pair(Box<Classical>, Box<Classical>),
}

impl Classical {
    pub fn pair(a: Classical, b: Classical) -> Self {
        Classical::Pair(Box::new(a), Box::new(b))
    }

    /// Right-nested tuple of booleans, mirroring [`TypeExpr::bools`].
    pub fn bits(bits: &[bool]) -> Self {
        let (last, init) = bits.split_last().expect("at least one bit");
        init.iter()
            .rev()
            .fold(Classical::Bool(*last), |acc, b| Classical::pair(Classical::Bool(*b), acc))
    }
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classical::Bool(b) => write!(f, "{}", if *b { "True" } else { "False" }),
            Classical::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

/// A classical type together with its dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    ty: TypeExpr,
    dim: usize,
}

impl Basis {
    pub fn new(ty: &TypeExpr) -> Result<Self> {
        fn dim(ty: &TypeExpr) -> Option<usize> {
            match ty {
                TypeExpr::Bool => Some(2),
                TypeExpr::Prod(a, b) => Some(dim(a)? * dim(b)?),
                _ => None,
            }
        }
        match dim(ty) {
            Some(d) => Ok(Basis { ty: ty.clone(), dim: d }),
            None => Err(LinalgError::NonClassical(ty.clone())),
        }
    }

    pub fn bool() -> Self {
        Basis { ty: TypeExpr::Bool, dim: 2 }
    }

    /// `n` qubits as a right-nested tuple of booleans.
    pub fn qubits(n: usize) -> Self {
        Basis { ty: TypeExpr::bools(n), dim: 1 << n }
    }

    pub fn prod(a: &Basis, b: &Basis) -> Self {
        Basis { ty: TypeExpr::prod(a.ty.clone(), b.ty.clone()), dim: a.dim * b.dim }
    }

    pub fn ty(&self) -> &TypeExpr {
        &self.ty
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The two factors of a product basis.
    pub fn split(&self) -> Option<(Basis, Basis)> {
        match &self.ty {
            TypeExpr::Prod(a, b) => Some((Basis::new(a).ok()?, Basis::new(b).ok()?)),
            _ => None,
        }
    }

    pub fn index_of(&self, e: &Classical) -> Result<usize> {
        fn go(ty: &TypeExpr, e: &Classical) -> Option<(usize, usize)> {
            match (ty, e) {
                (TypeExpr::Bool, Classical::Bool(b)) => Some((*b as usize, 2)),
                (TypeExpr::Prod(ta, tb), Classical::Pair(a, b)) => {
                    let (ia, da) = go(ta, a)?;
                    let (ib, db) = go(tb, b)?;
                    Some((ia * db + ib, da * db))
                }
                _ => None,
            }
        }
        go(&self.ty, e)
            .map(|(i, _)| i)
            .ok_or_else(|| LinalgError::NotInBasis(e.clone(), self.ty.clone()))
    }

    /// The element at index `i`, `i < dim`.
    pub fn element(&self, i: usize) -> Classical {
        fn go(ty: &TypeExpr, i: usize, d: usize) -> Classical {
            match ty {
                TypeExpr::Prod(a, b) => {
                    let db = Basis::new(b).expect("classical").dim;
                    let da = d / db;
                    Classical::pair(go(a, i / db, da), go(b, i % db, db))
                }
                _ => Classical::Bool(i == 1),
            }
        }
        assert!(i < self.dim, "index {i} out of range for {}", self.ty);
        go(&self.ty, i, self.dim)
    }

    pub fn elements(&self) -> impl Iterator<Item = Classical> + '_ {
        (0..self.dim).map(|i| self.element(i))
    }

    pub(crate) fn expect_eq(&self, other: &Basis) -> Result<()> {
        if self.ty == other.ty {
            Ok(())
        } else {
            Err(LinalgError::BasisMismatch { expected: self.ty.clone(), found: other.ty.clone() })
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ty)
    }
}
