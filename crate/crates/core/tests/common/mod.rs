//! Helpers shared by the integration tests: seeded randomness and random
//! densities built independently of the library's own linear algebra.
#![allow(dead_code)]

pub mod gen;

use ndarray::Array2;
use qarrow_core::{Basis, Classical, DensVal, SuperVal, C64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick<'a, T>(rng: &mut Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.random_range(0..xs.len())]
}

fn gaussian(rng: &mut Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.random::<f64>().max(1e-300);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// `G G† / tr(G G†)` for a complex Gaussian `G`: full-rank, Hermitian,
/// unit trace.
pub fn random_density(basis: &Basis, rng: &mut Rng) -> DensVal {
    let d = basis.dim();
    let g = Array2::from_shape_fn((d, d), |_| C64::new(gaussian(rng), gaussian(rng)));
    let mut rho = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            rho[(i, j)] = (0..d).map(|k| g[(i, k)] * g[(j, k)].conj()).sum();
        }
    }
    let tr: C64 = (0..d).map(|i| rho[(i, i)]).sum();
    DensVal::from_matrix(basis, rho.mapv(|z| z / tr))
}

/// A random normalized pure state.
pub fn random_pure(basis: &Basis, rng: &mut Rng) -> DensVal {
    let d = basis.dim();
    let v: Vec<C64> = (0..d).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect();
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mat = Array2::from_shape_fn((d, d), |(i, j)| v[i] * v[j].conj() / (n * n));
    DensVal::from_matrix(basis, mat)
}

/// Every `|i⟩⟨j|`.
pub fn unit_densities(basis: &Basis) -> Vec<DensVal> {
    let d = basis.dim();
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| DensVal::unit(basis, i, j)).collect()
}

/// Largest entry-wise difference of two matrices as plain arrays.
pub fn mat_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `|tr ρ - 1|` and the Hermiticity defect of `ρ`.
pub fn trace_and_hermiticity(d: &DensVal) -> (f64, f64) {
    let n = d.mat.nrows();
    let tr: C64 = (0..n).map(|i| d.mat[(i, i)]).sum();
    let herm = mat_diff(&d.mat, &d.mat.t().mapv(|z| z.conj()));
    ((tr - C64::new(1.0, 0.0)).norm(), herm)
}

pub fn bits_of(c: &Classical) -> Vec<bool> {
    match c {
        Classical::Bool(b) => vec![*b],
        Classical::Pair(a, b) => {
            let mut v = bits_of(a);
            v.extend(bits_of(b));
            v
        }
    }
}

/// The superoperator `ρ ↦ P ρ P†` of a permutation of basis indices,
/// built entry by entry.
pub fn permutation_super(basis: &Basis, perm: &[usize]) -> SuperVal {
    SuperVal::from_images(basis, basis, |i, j| DensVal::unit(basis, perm[i], perm[j]))
}
