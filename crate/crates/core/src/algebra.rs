//! The su(6) Lie algebra of a photon with two spin and three OAM states.
//!
//! Basis states are ordered spin-major, `|1>..|6> = (↑L, ↑R, ↑O, ↓L, ↓R, ↓O)`,
//! so the OAM factor uses the order `(L, R, O)`. With that order λ4/λ5 couple
//! `L <-> O` and λ6/λ7 couple `R <-> O`.
//!
//! The 35 generators are normalized to `tr(b_l b_m) = 2 δ_lm` and laid out as
//!
//! | index (1-based) | family  | generator            |
//! |-----------------|---------|----------------------|
//! | 1..=3           | spin    | `σ_i ⊗ 1 / √3`       |
//! | 4..=11          | oam     | `1 ⊗ λ_j / √2`       |
//! | 12..=35         | coupled | `σ_i ⊗ λ_j / √2`, `(i, j)` lexicographic |

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, commutator, cr, exp_hermitian, hermiticity_residual, kron, max_abs, max_abs_diff, trace_product,
    ComplexMatrix, RealMatrix, I,
};

/// Number of su(6) generators.
pub const DIM: usize = 35;

/// Version tag of the canonical generator ordering, recorded in exports.
pub const BASIS_ORDER_VERSION: &str = "su6-basis-order/1 spin-major (↑,↓)x(L,R,O); spin 1-3, oam 4-11, coupled 12-35";

/// Pauli matrices σ1, σ2, σ3 in the `(↑, ↓)` basis.
pub fn pauli_matrices() -> [ComplexMatrix; 3] {
    let z = cr(0.0);
    let one = cr(1.0);
    [
        linalg::from_rows(2, &[z, one, one, z]),
        linalg::from_rows(2, &[z, -I, I, z]),
        linalg::from_rows(2, &[one, z, z, -one]),
    ]
}

/// Gell-Mann matrices λ1..λ8 in the OAM order `(L, R, O)`.
pub fn gell_mann_matrices() -> [ComplexMatrix; 8] {
    let z = cr(0.0);
    let one = cr(1.0);
    let r3 = cr(1.0 / 3.0.sqrt());
    [
        linalg::from_rows(3, &[z, one, z, one, z, z, z, z, z]),
        linalg::from_rows(3, &[z, -I, z, I, z, z, z, z, z]),
        linalg::from_rows(3, &[one, z, z, z, -one, z, z, z, z]),
        linalg::from_rows(3, &[z, z, one, z, z, z, one, z, z]),
        linalg::from_rows(3, &[z, z, -I, z, z, z, I, z, z]),
        linalg::from_rows(3, &[z, z, z, z, z, one, z, one, z]),
        linalg::from_rows(3, &[z, z, z, z, z, -I, z, I, z]),
        linalg::from_rows(3, &[r3, z, z, z, r3, z, z, z, -r3 * 2.0]),
    ]
}

/// Generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `σ ⊗ 1`: rotates spin only.
    Spin,
    /// `1 ⊗ λ`: rotates OAM only.
    Oam,
    /// `σ ⊗ λ`: rotates both.
    Coupled,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Spin => "spin",
            Family::Oam => "oam",
            Family::Coupled => "coupled",
        }
    }
}

/// Label of one basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorLabel {
    /// Canonical 1-based index.
    pub index: usize,
    pub family: Family,
    /// Pauli index 1..=3, absent for the OAM family.
    pub pauli: Option<u8>,
    /// Gell-Mann index 1..=8, absent for the spin family.
    pub gell_mann: Option<u8>,
}

impl GeneratorLabel {
    /// Short ASCII name such as `s1xI`, `Ixl3` or `s2xl5`.
    pub fn name(&self) -> String {
        match (self.pauli, self.gell_mann) {
            (Some(i), None) => format!("s{i}xI"),
            (None, Some(j)) => format!("Ixl{j}"),
            (Some(i), Some(j)) => format!("s{i}xl{j}"),
            (None, None) => String::from("?"),
        }
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{} ({}, {})", self.index, self.family.as_str(), self.name())
    }
}

/// Ordered trace-orthonormal basis of su(6).
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    generators: Vec<ComplexMatrix>,
    labels: Vec<GeneratorLabel>,
}

impl GeneratorBasis {
    /// Assemble a basis without checking it. Use [`GeneratorBasis::validate`]
    /// before trusting a hand-built basis.
    pub fn from_parts(generators: Vec<ComplexMatrix>, labels: Vec<GeneratorLabel>) -> Self {
        assert_eq!(generators.len(), labels.len());
        Self { generators, labels }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator by 0-based position.
    pub fn get(&self, l: usize) -> &ComplexMatrix {
        &self.generators[l]
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }

    pub fn family_counts(&self) -> (usize, usize, usize) {
        let count = |fam| self.labels.iter().filter(|l| l.family == fam).count();
        (count(Family::Spin), count(Family::Oam), count(Family::Coupled))
    }

    /// Mutable access for fault-injection hooks.
    #[doc(hidden)]
    pub fn generator_mut(&mut self, l: usize) -> &mut ComplexMatrix {
        &mut self.generators[l]
    }

    /// Worst Hermiticity residual and the offending 0-based index.
    pub fn hermiticity(&self) -> (f64, usize) {
        worst(self.generators.iter().map(hermiticity_residual))
    }

    /// Worst `|tr b_l|`.
    pub fn tracelessness(&self) -> (f64, usize) {
        worst(self.generators.iter().map(|g| g.trace().norm()))
    }

    /// Worst `|tr(b_l b_m) - 2 δ_lm|` with the offending pair.
    pub fn orthonormality(&self) -> (f64, (usize, usize)) {
        let mut out = (0.0, (0, 0));
        for l in 0..self.len() {
            for m in l..self.len() {
                let target = if l == m { 2.0 } else { 0.0 };
                let r = (trace_product(&self.generators[l], &self.generators[m]) - target).norm();
                if r > out.0 {
                    out = (r, (l, m));
                }
            }
        }
        out
    }

    /// Check Hermiticity, tracelessness and trace-orthonormality to `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let (h, _) = self.hermiticity();
        if h > tol {
            return Err(Error::NotHermitian { residual: h });
        }
        let (o, (l, m)) = self.orthonormality();
        if o > tol {
            let value = trace_product(&self.generators[l], &self.generators[m]).re;
            return Err(Error::NonOrthonormal { l: l + 1, m: m + 1, value });
        }
        Ok(())
    }

    /// Components of a traceless Hermitian matrix in this basis,
    /// `x_l = tr(M b_l) / 2`.
    pub fn decompose(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.generators.iter().map(|b| trace_product(m, b).re / 2.0).collect()
    }

    /// `Σ_l x_l b_l`.
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        let n = self.generators[0].nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (x, b) in coeffs.iter().zip(&self.generators) {
            out += b * cr(*x);
        }
        out
    }
}

fn worst(it: impl Iterator<Item = f64>) -> (f64, usize) {
    it.enumerate().fold((0.0, 0), |acc, (i, r)| if r > acc.0 { (r, i) } else { acc })
}

/// The canonical su(6) basis.
pub fn su6_basis() -> GeneratorBasis {
    let sigma = pauli_matrices();
    let lambda = gell_mann_matrices();
    let id2 = linalg::identity(2);
    let id3 = linalg::identity(3);
    let spin_scale = cr(1.0 / 3.0.sqrt());
    let scale = cr(1.0 / 2.0.sqrt());

    let mut generators = Vec::with_capacity(DIM);
    let mut labels = Vec::with_capacity(DIM);
    let mut push = |m: ComplexMatrix, family, pauli, gell_mann| {
        labels.push(GeneratorLabel { index: generators.len() + 1, family, pauli, gell_mann });
        generators.push(m);
    };
    for (i, s) in sigma.iter().enumerate() {
        push(kron(s, &id3) * spin_scale, Family::Spin, Some(i as u8 + 1), None);
    }
    for (j, l) in lambda.iter().enumerate() {
        push(kron(&id2, l) * scale, Family::Oam, None, Some(j as u8 + 1));
    }
    for (i, s) in sigma.iter().enumerate() {
        for (j, l) in lambda.iter().enumerate() {
            push(kron(s, l) * scale, Family::Coupled, Some(i as u8 + 1), Some(j as u8 + 1));
        }
    }
    GeneratorBasis { generators, labels }
}

/// `-i tr([a, b] c) / 4` for any three matrices of equal size.
pub fn structure_constant(a: &ComplexMatrix, b: &ComplexMatrix, cm: &ComplexMatrix) -> f64 {
    (-I * trace_product(&commutator(a, b), cm) / 4.0).re
}

/// Real structure constants `g_lmn` of a trace-orthonormal basis, closing
/// `[b_l, b_m] = 2i Σ_n g_lmn b_n`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    dim: usize,
    values: Vec<f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `g_lmn`, 0-based indices.
    pub fn get(&self, l: usize, m: usize, n: usize) -> f64 {
        self.values[(l * self.dim + m) * self.dim + n]
    }

    /// Flat row-major values, index `(l * dim + m) * dim + n`.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Iterate over `(l, m, n, g)` with `|g| > threshold`, 0-based.
    pub fn nonzero(&self, threshold: f64) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let d = self.dim;
        self.values
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.abs() > threshold)
            .map(move |(k, g)| (k / (d * d), (k / d) % d, k % d, *g))
    }

    /// Largest deviation from total antisymmetry over all index swaps.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.dim;
        let mut r: f64 = 0.0;
        for l in 0..d {
            for m in 0..d {
                for n in 0..d {
                    let g = self.get(l, m, n);
                    r = r.max((g + self.get(m, l, n)).abs());
                    r = r.max((g + self.get(l, n, m)).abs());
                    r = r.max((g + self.get(n, m, l)).abs());
                }
            }
        }
        r
    }

    /// `max ‖[b_l, b_m] - 2i Σ_n g_lmn b_n‖_max` over all unordered pairs.
    pub fn closure_residual(&self, basis: &GeneratorBasis) -> f64 {
        let mut worst: f64 = 0.0;
        for l in 0..self.dim {
            for m in (l + 1)..self.dim {
                worst = worst.max(self.pair_closure_residual(basis, l, m));
            }
        }
        worst
    }

    pub fn pair_closure_residual(&self, basis: &GeneratorBasis, l: usize, m: usize) -> f64 {
        let lhs = commutator(basis.get(l), basis.get(m));
        let coeffs: Vec<f64> = (0..self.dim).map(|n| self.get(l, m, n)).collect();
        let rhs = basis.combine(&coeffs) * c(0.0, 2.0);
        max_abs_diff(&lhs, &rhs)
    }
}

/// Structure constants from the trace formula. Rejects bases that are not
/// trace-orthonormal, naming the first offending pair.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    let (o, (l, m)) = basis.orthonormality();
    if o > 1e-10 {
        let value = trace_product(basis.get(l), basis.get(m)).re;
        return Err(Error::NonOrthonormal { l: l + 1, m: m + 1, value });
    }
    let d = basis.len();
    let mut values = alloc::vec![0.0; d * d * d];
    for l in 0..d {
        for m in (l + 1)..d {
            let comm = commutator(basis.get(l), basis.get(m));
            for n in 0..d {
                let g = (-I * trace_product(&comm, basis.get(n)) / 4.0).re;
                values[(l * d + m) * d + n] = g;
                values[(m * d + l) * d + n] = -g;
            }
        }
    }
    Ok(StructureConstants { dim: d, values })
}

/// Jacobi residual `‖[b_l,[b_m,b_n]] + [b_m,[b_n,b_l]] + [b_n,[b_l,b_m]]‖_max`.
pub fn jacobi_residual(basis: &GeneratorBasis, l: usize, m: usize, n: usize) -> f64 {
    let (a, b, cm) = (basis.get(l), basis.get(m), basis.get(n));
    let sum = commutator(a, &commutator(b, cm)) + commutator(b, &commutator(cm, a)) + commutator(cm, &commutator(a, b));
    max_abs(&sum)
}

/// Adjoint representation: 35 real antisymmetric matrices with
/// `(G_l)_mn = -g_lmn`.
#[derive(Debug, Clone)]
pub struct AdjointRep {
    matrices: Vec<RealMatrix>,
}

pub fn adjoint_matrices(g: &StructureConstants) -> AdjointRep {
    let d = g.dim();
    let matrices = (0..d).map(|l| DMatrix::from_fn(d, d, |m, n| -g.get(l, m, n))).collect();
    AdjointRep { matrices }
}

impl AdjointRep {
    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn get(&self, l: usize) -> &RealMatrix {
        &self.matrices[l]
    }

    pub fn matrices(&self) -> &[RealMatrix] {
        &self.matrices
    }

    /// `G · n̂ = Σ_l n_l G_l`.
    pub fn along(&self, direction: &[f64]) -> RealMatrix {
        let d = self.dim();
        let mut out = RealMatrix::zeros(d, d);
        for (x, g) in direction.iter().zip(&self.matrices) {
            if *x != 0.0 {
                out += g * *x;
            }
        }
        out
    }

    /// Least-squares factor `c` in `[G_l, G_m] = c Σ_n g_lmn G_n`, with the
    /// fit residual. `None` when the pair commutes.
    pub fn closure_factor(&self, g: &StructureConstants, l: usize, m: usize) -> Option<(f64, f64)> {
        let lhs = linalg::real_commutator(&self.matrices[l], &self.matrices[m]);
        let coeffs: Vec<f64> = (0..self.dim()).map(|n| g.get(l, m, n)).collect();
        let rhs = self.along(&coeffs);
        let denom = rhs.norm_squared();
        if denom < 1e-20 {
            return None;
        }
        let factor = lhs.dot(&rhs) / denom;
        let residual = linalg::max_abs_real(&(lhs - rhs * factor));
        Some((factor, residual))
    }
}

/// `exp(-i M δφ / 2)` for Hermitian `M`.
pub fn exp_generator(m: &ComplexMatrix, delta_phi: f64) -> Result<ComplexMatrix> {
    let residual = hermiticity_residual(m);
    if residual > 1e-10 {
        return Err(Error::NotHermitian { residual });
    }
    Ok(exp_hermitian(m, delta_phi / 2.0))
}

/// `exp(G · n̂ δφ)`, an SO(35) rotation of the observable vector.
pub fn exp_adjoint(adj: &AdjointRep, direction: &[f64], delta_phi: f64) -> Result<RealMatrix> {
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-300 {
        return Err(Error::ZeroDirection);
    }
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::DirectionNotUnit { norm });
    }
    // G is real antisymmetric, so iG is Hermitian and exp(G t) = exp(-i (iG) t).
    let generator = adj.along(direction).map(|x| c(0.0, x));
    Ok(exp_hermitian(&generator, delta_phi).map(|z| z.re))
}

/// `exp(G_l δφ)` for a single 0-based axis.
pub fn exp_adjoint_axis(adj: &AdjointRep, axis: usize, delta_phi: f64) -> Result<RealMatrix> {
    if axis >= adj.dim() {
        return Err(Error::AxisOutOfRange(axis + 1));
    }
    let mut direction = alloc::vec![0.0; adj.dim()];
    direction[axis] = 1.0;
    exp_adjoint(adj, &direction, delta_phi)
}

/// Diagonal part of a skyrmionic triple in twelfths, with `√3 λ8 = diag(1, 1, -2)`:
/// `σ3 ⊗ (4 + spin.0 λ3 + spin.1 √3λ8)/12 + 1 ⊗ (oam.0 λ3 + oam.1 √3λ8)/12`.
/// Integer numerators keep every entry exact.
struct DiagonalMix {
    spin: (f64, f64),
    oam: (f64, f64),
}

fn su2_triple(pair: (usize, usize), diag: DiagonalMix) -> [ComplexMatrix; 3] {
    let sigma = pauli_matrices();
    let lambda = gell_mann_matrices();
    let (a, b) = pair;
    let half = cr(0.5);
    let first = (kron(&sigma[0], &lambda[a]) + kron(&sigma[1], &lambda[b])) * half;
    let second = (-kron(&sigma[0], &lambda[b]) + kron(&sigma[1], &lambda[a])) * half;
    let twelfths = |c: f64, (l3, l8): (f64, f64)| {
        let d = [c + l3 + l8, c - l3 + l8, c - 2.0 * l8];
        ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, d.iter().map(|x| cr(x / 12.0))))
    };
    let spin_part = twelfths(4.0, diag.spin);
    let oam_part = twelfths(0.0, diag.oam);
    let third = kron(&sigma[2], &spin_part) + kron(&linalg::identity(2), &oam_part);
    [first, second, third]
}

/// Skyrmionic generators Ŝ1, Ŝ2, Ŝ3: Pauli action on `span{|3>, |4>}`.
///
/// ```text
/// Ŝ1 = (σ1⊗λ4 + σ2⊗λ5)/2
/// Ŝ2 = (-σ1⊗λ5 + σ2⊗λ4)/2
/// Ŝ3 = σ3⊗(1/3 + λ3/4 - √3/12 λ8) - 1⊗(λ3/4 + √3/4 λ8)
/// ```
pub fn skyrmion_generators() -> [ComplexMatrix; 3] {
    su2_triple((3, 4), DiagonalMix { spin: (3.0, -1.0), oam: (-3.0, -3.0) })
}

/// Antiskyrmionic generators Â1, Â2, Â3: Pauli action on `span{|3>, |5>}`.
///
/// ```text
/// Â1 = (σ1⊗λ6 + σ2⊗λ7)/2
/// Â2 = (-σ1⊗λ7 + σ2⊗λ6)/2
/// Â3 = σ3⊗(1/3 - λ3/4 - √3/12 λ8) + 1⊗(λ3/4 - √3/4 λ8)
/// ```
pub fn antiskyrmion_generators() -> [ComplexMatrix; 3] {
    su2_triple((5, 6), DiagonalMix { spin: (-3.0, -1.0), oam: (3.0, -3.0) })
}

/// Chiral-OAM triple `1 ⊗ λ1, 1 ⊗ λ2, 1 ⊗ λ3`: Pauli action on the `(L, R)`
/// OAM pair for either spin, zero on the Gaussian mode.
pub fn oam_generators() -> [ComplexMatrix; 3] {
    let lambda = gell_mann_matrices();
    let id2 = linalg::identity(2);
    [kron(&id2, &lambda[0]), kron(&id2, &lambda[1]), kron(&id2, &lambda[2])]
}

/// Pauli triple embedded on the 2-dimensional subspace spanned by the
/// 0-based basis states `a` and `b` of a `dim`-dimensional space.
pub fn embedded_pauli(dim: usize, a: usize, b: usize) -> [ComplexMatrix; 3] {
    let sigma = pauli_matrices();
    let idx = [a, b];
    sigma.map(|s| {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (p, &i) in idx.iter().enumerate() {
            for (q, &j) in idx.iter().enumerate() {
                m[(i, j)] = s[(p, q)];
            }
        }
        m
    })
}

/// Restrict a matrix to the rows/columns `idx`.
pub fn restrict(m: &ComplexMatrix, idx: &[usize]) -> ComplexMatrix {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}
