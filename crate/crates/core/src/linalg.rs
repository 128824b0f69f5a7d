//! Small dense complex/real matrix helpers on top of nalgebra.
//!
//! Every matrix in this crate is tiny (2, 3, 6 or 35 per side), so the
//! dynamically sized nalgebra types are used throughout.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Square complex matrix. Equality is always tolerance based, see [`approx_eq`].
pub type ComplexMatrix = DMatrix<Complex64>;
/// Square real matrix.
pub type RealMatrix = DMatrix<f64>;

/// Default absolute tolerance for matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Build a complex matrix from a row-major slice.
pub fn from_rows(n: usize, entries: &[Complex64]) -> ComplexMatrix {
    assert_eq!(entries.len(), n * n, "row-major entries must fill an {n}x{n} matrix");
    DMatrix::from_row_slice(n, n, entries)
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(a: &RealMatrix) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && max_abs_diff(a, b) <= tol
}

/// `max |M - M^dagger|`.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && hermiticity_residual(m) <= tol
}

/// `max |U^dagger U - 1|`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn real_commutator(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    a * b - b * a
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Kronecker product `a ⊗ b`, first factor major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `exp(-i H t)` for Hermitian `H` through its eigendecomposition.
pub(crate) fn exp_hermitian(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = ComplexMatrix::from_diagonal(&eig.eigenvalues.map(|lambda| {
        let (s, co) = num_traits::Float::sin_cos(-lambda * t);
        Complex64::new(co, s)
    }));
    v * phases * v.adjoint()
}
