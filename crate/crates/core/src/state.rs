//! SU(6) coherent states and their generalized angular momentum.
//!
//! A coherent state is carried by its normalized amplitude vector `α ∈ C^6`;
//! the mean photon number `N0` and `ħ` only scale expectation values.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
// float methods under no_std; std shadows them when linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{
    antiskyrmion_generators, exp_adjoint, exp_generator, oam_generators, pauli_matrices, skyrmion_generators,
    AdjointRep, GeneratorBasis,
};
use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, hermiticity_residual, unitarity_residual, ComplexMatrix};

/// Spin index of a basis state: 0 = ↑ (left circular), 1 = ↓ (right circular).
pub fn spin_of(i: usize) -> usize {
    i / 3
}

/// OAM mode of a basis state (0-based index).
pub fn mode_of(i: usize) -> OamMode {
    match i % 3 {
        0 => OamMode::L,
        1 => OamMode::R,
        _ => OamMode::O,
    }
}

/// 0-based basis index for a spin (0 = ↑, 1 = ↓) and OAM mode.
pub fn basis_index(spin: usize, mode: OamMode) -> usize {
    spin * 3 + mode as usize
}

/// The three OAM modes kept in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OamMode {
    /// Left vortex, topological charge +1.
    L = 0,
    /// Right vortex, topological charge -1.
    R = 1,
    /// Gaussian, no vortex.
    O = 2,
}

impl OamMode {
    pub fn charge(self) -> i32 {
        match self {
            OamMode::L => 1,
            OamMode::R => -1,
            OamMode::O => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    alpha: [Complex64; 6],
    n0: f64,
    hbar: f64,
}

impl CoherentState {
    /// Normalizes `alpha`; `N0 = ħ = 1`.
    pub fn new(alpha: [Complex64; 6]) -> Result<Self> {
        let norm = alpha.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN fails too
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(Self { alpha: alpha.map(|a| a / norm), n0: 1.0, hbar: 1.0 })
    }

    /// Basis state `|i>` for `i` in `1..=6`.
    pub fn basis(i: usize) -> Self {
        assert!((1..=6).contains(&i), "basis index {i} outside 1..=6");
        let mut alpha = [cr(0.0); 6];
        alpha[i - 1] = cr(1.0);
        Self { alpha, n0: 1.0, hbar: 1.0 }
    }

    pub fn with_scale(mut self, n0: f64, hbar: f64) -> Self {
        self.n0 = n0;
        self.hbar = hbar;
        self
    }

    pub fn amplitudes(&self) -> &[Complex64; 6] {
        &self.alpha
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `ħ N0`, the unit of every expectation value.
    pub fn scale(&self) -> f64 {
        self.hbar * self.n0
    }

    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_row_slice(&self.alpha)
    }

    /// Amplitude equality up to a global phase.
    pub fn same_ray(&self, other: &CoherentState, tol: f64) -> bool {
        let ov = overlap(self, other);
        (ov.norm() - 1.0).abs() <= tol
    }

    /// Weight outside the 0-based indices `keep`.
    pub fn weight_outside(&self, keep: &[usize]) -> f64 {
        self.alpha.iter().enumerate().filter(|(i, _)| !keep.contains(i)).map(|(_, a)| a.norm_sqr()).sum()
    }
}

/// The 35 expectation values `A_n`, in units of `ħ N0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableVector {
    pub values: Vec<f64>,
}

impl ObservableVector {
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &ObservableVector) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Radius of the observable hypersphere for a pure state, `ħ N0 √(5/3)`.
pub fn hypersphere_radius(state: &CoherentState) -> f64 {
    state.scale() * (5.0f64 / 3.0).sqrt()
}

fn check_operator(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != 6 || !m.is_square() {
        return Err(Error::Dimension { expected: 6, found: m.nrows() });
    }
    let residual = hermiticity_residual(m);
    if residual > 1e-10 {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

fn quadratic_form(alpha: &[Complex64; 6], m: &ComplexMatrix) -> Complex64 {
    let mut acc = cr(0.0);
    for i in 0..6 {
        let mut row = cr(0.0);
        for j in 0..6 {
            row += m[(i, j)] * alpha[j];
        }
        acc += alpha[i].conj() * row;
    }
    acc
}

/// `ħ N0 α† M α` for Hermitian `M`.
pub fn expectation(state: &CoherentState, m: &ComplexMatrix) -> Result<f64> {
    check_operator(m)?;
    Ok(state.scale() * quadratic_form(&state.alpha, m).re)
}

fn expectation_unchecked(state: &CoherentState, m: &ComplexMatrix) -> f64 {
    state.scale() * quadratic_form(&state.alpha, m).re
}

pub fn all_expectations(state: &CoherentState, basis: &GeneratorBasis) -> ObservableVector {
    ObservableVector { values: basis.generators().iter().map(|b| expectation_unchecked(state, b)).collect() }
}

/// `α' = U α`.
pub fn apply_unitary(state: &CoherentState, u: &ComplexMatrix) -> Result<CoherentState> {
    if u.nrows() != 6 || !u.is_square() {
        return Err(Error::Dimension { expected: 6, found: u.nrows() });
    }
    let residual = unitarity_residual(u);
    if residual > 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    Ok(apply_matrix(state, u))
}

/// `M α` without any check or renormalization.
pub(crate) fn apply_matrix(state: &CoherentState, m: &ComplexMatrix) -> CoherentState {
    let mut alpha = [cr(0.0); 6];
    for (i, out) in alpha.iter_mut().enumerate() {
        for j in 0..6 {
            *out += m[(i, j)] * state.alpha[j];
        }
    }
    CoherentState { alpha, n0: state.n0, hbar: state.hbar }
}

/// Rotation axis in the 35-dimensional observable space.
#[derive(Debug, Clone, PartialEq)]
pub enum RotationAxis {
    /// 0-based generator index.
    Generator(usize),
    /// Unit 35-vector.
    Direction(Vec<f64>),
}

impl RotationAxis {
    fn direction(&self, dim: usize) -> Result<Vec<f64>> {
        match self {
            RotationAxis::Generator(l) => {
                if *l >= dim {
                    return Err(Error::AxisOutOfRange(l + 1));
                }
                let mut d = alloc::vec![0.0; dim];
                d[*l] = 1.0;
                Ok(d)
            }
            RotationAxis::Direction(d) => Ok(d.clone()),
        }
    }
}

/// Compare the adjoint rotation `exp(G·n̂ δφ) A` with the expectation values
/// of the rotated state `exp(-i b·n̂ δφ/2) α`. Returns the largest component
/// difference.
pub fn correspondence_check(
    state: &CoherentState,
    basis: &GeneratorBasis,
    adj: &AdjointRep,
    axis: &RotationAxis,
    delta_phi: f64,
) -> Result<f64> {
    let direction = axis.direction(basis.len())?;
    let rotation = exp_adjoint(adj, &direction, delta_phi)?;
    let before = all_expectations(state, basis);
    let a = DVector::from_vec(before.values);
    let via_adjoint = rotation * a;

    let u = exp_generator(&basis.combine(&direction), delta_phi)?;
    let via_unitary = all_expectations(&apply_unitary(state, &u)?, basis);
    Ok(via_adjoint.iter().zip(&via_unitary.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereKind {
    Skyrmion,
    Antiskyrmion,
    Oam,
    Polarization,
}

/// A point on one of the su(2) Poincaré spheres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub kind: SphereKind,
    /// Expectation values in units of `ħ N0` already applied.
    pub coords: [f64; 3],
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `(-π, π]`; 0 when degenerate.
    pub phi: f64,
    /// Set at the poles (and at the origin) where the azimuth is undefined.
    pub degenerate_azimuth: bool,
}

impl SpherePoint {
    pub fn from_coords(kind: SphereKind, coords: [f64; 3]) -> Self {
        let [x, y, z] = coords;
        let r = (x * x + y * y + z * z).sqrt();
        let rho = (x * x + y * y).sqrt();
        let theta = if r > 0.0 { rho.atan2(z) } else { 0.0 };
        let degenerate = rho <= 1e-12 * r.max(1e-300) || r == 0.0;
        let phi = if degenerate { 0.0 } else { wrap_angle(y.atan2(x)) };
        Self { kind, coords, theta, phi, degenerate_azimuth: degenerate }
    }

    pub fn radius(&self) -> f64 {
        let [x, y, z] = self.coords;
        (x * x + y * y + z * z).sqrt()
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a % (2.0 * PI);
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Remove `2π` jumps from a sequence of angles.
pub fn unwrap_angles(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    for (k, &a) in angles.iter().enumerate() {
        out.push(match k {
            0 => a,
            _ => out[k - 1] + wrap_angle(a - angles[k - 1]),
        });
    }
    out
}

fn triple_point(state: &CoherentState, kind: SphereKind, triple: &[ComplexMatrix; 3]) -> SpherePoint {
    let coords = [
        expectation_unchecked(state, &triple[0]),
        expectation_unchecked(state, &triple[1]),
        expectation_unchecked(state, &triple[2]),
    ];
    SpherePoint::from_coords(kind, coords)
}

/// `(𝔖1, 𝔖2, 𝔖3)`.
pub fn skyrmion_sphere(state: &CoherentState) -> SpherePoint {
    triple_point(state, SphereKind::Skyrmion, &skyrmion_generators())
}

/// `(𝔄1, 𝔄2, 𝔄3)`.
pub fn antiskyrmion_sphere(state: &CoherentState) -> SpherePoint {
    triple_point(state, SphereKind::Antiskyrmion, &antiskyrmion_generators())
}

/// `(L1, L2, L3)` of the chiral OAM pair, summed over both spins.
pub fn oam_sphere(state: &CoherentState) -> SpherePoint {
    triple_point(state, SphereKind::Oam, &oam_generators())
}

/// Beam-averaged polarization Stokes vector `⟨σ_i ⊗ 1⟩`.
pub fn polarization_sphere(state: &CoherentState) -> SpherePoint {
    let id3 = linalg::identity(3);
    let triple = pauli_matrices().map(|s| linalg::kron(&s, &id3));
    triple_point(state, SphereKind::Polarization, &triple)
}

/// `⟨ψ_b | ψ_a⟩ = α_b† α_a`.
pub fn overlap(a: &CoherentState, b: &CoherentState) -> Complex64 {
    a.alpha.iter().zip(&b.alpha).map(|(x, y)| y.conj() * x).sum()
}

/// Names accepted by [`named_state`].
pub const NAMED_STATES: &[&str] = &[
    "neel_out",
    "neel_in",
    "bloch_left",
    "bloch_right",
    "antiskyrmion_h",
    "antiskyrmion_v",
    "dipolar",
    "antidipolar",
    "basis_1",
    "basis_2",
    "basis_3",
    "basis_4",
    "basis_5",
    "basis_6",
    "gaussian_h",
    "gaussian_v",
];

pub fn named_state(name: &str) -> Result<CoherentState> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let z = cr(0.0);
    let pair = |j: usize, b: Complex64| {
        let mut a = [z; 6];
        a[2] = cr(h);
        a[j] = b * h;
        a
    };
    let alpha = match name {
        "neel_out" => pair(3, cr(1.0)),
        "neel_in" => pair(3, cr(-1.0)),
        "bloch_left" => pair(3, c(0.0, 1.0)),
        "bloch_right" => pair(3, c(0.0, -1.0)),
        "antiskyrmion_h" => pair(4, cr(1.0)),
        "antiskyrmion_v" => pair(4, cr(-1.0)),
        "dipolar" => [z, z, cr(h), cr(0.5), cr(0.5), z],
        "antidipolar" => [z, z, cr(h), cr(0.5), cr(-0.5), z],
        // |H>|O> and |V>|O> with |H> = (|↑> + |↓>)/√2, |V> = i(|↑> - |↓>)/√2
        "gaussian_h" => [z, z, cr(h), z, z, cr(h)],
        "gaussian_v" => [z, z, c(0.0, h), z, z, c(0.0, -h)],
        _ => match name.strip_prefix("basis_").and_then(|d| d.parse::<usize>().ok()) {
            Some(i @ 1..=6) => return Ok(CoherentState::basis(i)),
            _ => return Err(Error::UnknownState { name: String::from(name), catalog: NAMED_STATES.join(", ") }),
        },
    };
    CoherentState::new(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Su2Kind {
    Skyrmion,
    Antiskyrmion,
}

/// `(α3, α_k) = (e^{-iφ/2} cos(θ/2), e^{iφ/2} sin(θ/2))` with `k = 4` for
/// skyrmions and `k = 5` for antiskyrmions.
pub fn su2_state(theta: f64, phi: f64, kind: Su2Kind) -> CoherentState {
    let mut alpha = [cr(0.0); 6];
    let partner = match kind {
        Su2Kind::Skyrmion => 3,
        Su2Kind::Antiskyrmion => 4,
    };
    alpha[2] = Complex64::from_polar((theta / 2.0).cos(), -phi / 2.0);
    alpha[partner] = Complex64::from_polar((theta / 2.0).sin(), phi / 2.0);
    CoherentState { alpha, n0: 1.0, hbar: 1.0 }
}

/// Point on the skyrmionic torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    /// Poloidal angle in `(-π, π]`.
    pub theta_p: f64,
    /// Toroidal angle in `(-π, π]`.
    pub phi_t: f64,
    /// Poloidal radius `√(L1² + L3²)`, in units of `ħ N0` already applied.
    pub l_p: f64,
}

/// `|3>/√2 + e^{iφ_t} (cos(θ_p/2)|4> + sin(θ_p/2)|5>)/√2`.
pub fn torus_state(theta_p: f64, phi_t: f64) -> CoherentState {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mut alpha = [cr(0.0); 6];
    alpha[2] = cr(h);
    alpha[3] = Complex64::from_polar(h * (theta_p / 2.0).cos(), phi_t);
    alpha[4] = Complex64::from_polar(h * (theta_p / 2.0).sin(), phi_t);
    CoherentState { alpha, n0: 1.0, hbar: 1.0 }
}

/// Inverse of [`torus_state`]. The state must lie in `span{|3>,|4>,|5>}`
/// with `|α3|² = 1/2`.
pub fn state_to_torus(state: &CoherentState) -> Result<TorusPoint> {
    const TOL: f64 = 1e-8;
    let a = state.amplitudes();
    let alpha3_sq = a[2].norm_sqr();
    let outside = state.weight_outside(&[2, 3, 4]);
    if (alpha3_sq - 0.5).abs() > TOL || outside > TOL {
        return Err(Error::NotTorusState { alpha3_sq, outside });
    }
    let oam = oam_sphere(state);
    let [l1, _, l3] = oam.coords;
    let theta_p = wrap_angle(l1.atan2(l3));
    let carrier = a[3] * (theta_p / 2.0).cos() + a[4] * (theta_p / 2.0).sin();
    let phi_t = wrap_angle((carrier * a[2].conj()).arg());
    Ok(TorusPoint { theta_p, phi_t, l_p: (l1 * l1 + l3 * l3).sqrt() })
}

/// Class of a two-state Poincaré sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsphereClass {
    Polarization,
    Oam,
    SingletTriplet,
    TripletTriplet,
    Skyrmion,
    Antiskyrmion,
}

impl SubsphereClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SubsphereClass::Polarization => "polarization",
            SubsphereClass::Oam => "oam",
            SubsphereClass::SingletTriplet => "singlet_triplet",
            SubsphereClass::TripletTriplet => "triplet_triplet",
            SubsphereClass::Skyrmion => "skyrmion",
            SubsphereClass::Antiskyrmion => "antiskyrmion",
        }
    }
}

/// A pair of basis states (1-based) and the class of its Poincaré sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subsphere {
    pub pair: (usize, usize),
    pub class: SubsphereClass,
}

/// All 15 su(2) subspheres of su(6).
pub fn enumerate_subspheres() -> Vec<Subsphere> {
    use OamMode::*;
    let mut out = Vec::with_capacity(15);
    for i in 0..6 {
        for j in (i + 1)..6 {
            let (mi, mj) = (mode_of(i), mode_of(j));
            let class = if mi == mj {
                SubsphereClass::Polarization
            } else if spin_of(i) == spin_of(j) {
                SubsphereClass::Oam
            } else {
                // i carries ↑, j carries ↓
                match (mi, mj) {
                    (O, L) | (R, O) => SubsphereClass::Skyrmion,
                    (O, R) | (L, O) => SubsphereClass::Antiskyrmion,
                    (R, L) => SubsphereClass::SingletTriplet,
                    _ => SubsphereClass::TripletTriplet,
                }
            };
            out.push(Subsphere { pair: (i + 1, j + 1), class });
        }
    }
    out
}

/// Sphere and torus readings recorded along trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub skyrmion: SpherePoint,
    pub antiskyrmion: SpherePoint,
    pub oam: SpherePoint,
    pub torus: Option<TorusPoint>,
}

pub fn observables(state: &CoherentState) -> Observables {
    Observables {
        skyrmion: skyrmion_sphere(state),
        antiskyrmion: antiskyrmion_sphere(state),
        oam: oam_sphere(state),
        torus: state_to_torus(state).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::su6_basis;
    use core::f64::consts::FRAC_PI_2;

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn expectation_examples() {
        let s = skyrmion_generators();
        let three = CoherentState::basis(3);
        assert!((expectation(&three, &s[2]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(expectation(&CoherentState::basis(1), &s[0]).unwrap(), 0.0);
        let scaled = three.clone().with_scale(4.0, 2.0);
        assert!((expectation(&scaled, &s[2]).unwrap() - 8.0).abs() < 1e-15);
        let psi = named_state("dipolar").unwrap();
        assert!((expectation(&psi, &linalg::identity(6)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let mut m = linalg::identity(6);
        m[(0, 1)] = cr(1.0);
        assert!(matches!(expectation(&CoherentState::basis(1), &m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn apply_unitary_rejects_non_unitary() {
        let m = linalg::identity(6) * cr(2.0);
        assert!(matches!(apply_unitary(&CoherentState::basis(1), &m), Err(Error::NotUnitary { .. })));
        let same = apply_unitary(&CoherentState::basis(2), &linalg::identity(6)).unwrap();
        assert_eq!(same, CoherentState::basis(2));
    }

    #[test]
    fn zero_state_rejected() {
        assert_eq!(CoherentState::new([cr(0.0); 6]).unwrap_err(), Error::ZeroState);
    }

    #[test]
    fn equal_weight_state_norm() {
        let psi = CoherentState::new([cr(1.0); 6]).unwrap();
        let a = all_expectations(&psi, &su6_basis());
        assert!((a.norm() - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn named_catalog() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let n = named_state("neel_out").unwrap();
        assert_eq!(n.amplitudes()[2], cr(h));
        assert_eq!(n.amplitudes()[3], cr(h));
        let d = named_state("dipolar").unwrap();
        assert!((d.amplitudes()[2] - h).norm() < 1e-15);
        assert!((d.amplitudes()[3] - 0.5).norm() < 1e-15);
        assert!((d.amplitudes()[4] - 0.5).norm() < 1e-15);
        let ad = named_state("antidipolar").unwrap();
        assert!((ad.amplitudes()[4] + 0.5).norm() < 1e-15);
        for name in NAMED_STATES {
            named_state(name).unwrap();
        }
        match named_state("hedgehog") {
            Err(Error::UnknownState { catalog, .. }) => assert!(catalog.contains("neel_out")),
            other => panic!("{other:?}"),
        }
        assert!(named_state("basis_7").is_err());
    }

    #[test]
    fn su2_state_examples() {
        let p = skyrmion_sphere(&su2_state(FRAC_PI_2, 0.0, Su2Kind::Skyrmion));
        assert!(close3(p.coords, [1.0, 0.0, 0.0], 1e-15));
        let p = skyrmion_sphere(&su2_state(FRAC_PI_2, -FRAC_PI_2, Su2Kind::Skyrmion));
        assert!(close3(p.coords, [0.0, -1.0, 0.0], 1e-15));
        for phi in [0.0, 1.0, -2.5] {
            assert!(su2_state(0.0, phi, Su2Kind::Skyrmion).same_ray(&CoherentState::basis(3), 1e-15));
        }
        let p = antiskyrmion_sphere(&su2_state(1.0, 0.4, Su2Kind::Antiskyrmion));
        assert!(close3(p.coords, [1.0f64.sin() * 0.4f64.cos(), 1.0f64.sin() * 0.4f64.sin(), 1.0f64.cos()], 1e-14));
    }

    #[test]
    fn pole_azimuth_is_flagged() {
        let p = skyrmion_sphere(&CoherentState::basis(3));
        assert!(p.degenerate_azimuth);
        assert_eq!(p.phi, 0.0);
        assert!(p.theta.abs() < 1e-15);
        let p = skyrmion_sphere(&CoherentState::basis(1));
        assert!(p.radius() < 1e-15);
        assert!(p.degenerate_azimuth);
        let p = skyrmion_sphere(&named_state("neel_in").unwrap());
        assert!((p.phi - PI).abs() < 1e-15);
    }

    #[test]
    fn oam_examples() {
        let out = oam_sphere(&named_state("neel_out").unwrap());
        let inn = oam_sphere(&named_state("neel_in").unwrap());
        assert!(close3(out.coords, [0.0, 0.0, 0.5], 1e-15));
        assert_eq!(out.coords, inn.coords);
        assert_eq!(oam_sphere(&CoherentState::basis(3)).coords, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn overlaps() {
        let out = named_state("neel_out").unwrap();
        let inn = named_state("neel_in").unwrap();
        let anti = named_state("antiskyrmion_h").unwrap();
        assert!(overlap(&out, &inn).norm() < 1e-15);
        assert!((overlap(&anti, &out) - 0.5).norm() < 1e-15);
        assert!((overlap(&out, &out) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn torus_edges() {
        let p = state_to_torus(&torus_state(0.0, 0.7)).unwrap();
        assert!(p.theta_p.abs() < 1e-15 && (p.phi_t - 0.7).abs() < 1e-14);
        let sky = torus_state(0.0, 0.7);
        assert!(sky.amplitudes()[4].norm() < 1e-15);
        let anti = torus_state(PI, 0.0);
        assert!(anti.amplitudes()[3].norm() < 1e-15);
        assert!(anti.same_ray(&named_state("antiskyrmion_h").unwrap(), 1e-15));
        let dip = state_to_torus(&named_state("dipolar").unwrap()).unwrap();
        assert!((dip.theta_p - FRAC_PI_2).abs() < 1e-14 && dip.phi_t.abs() < 1e-14);
        let adip = state_to_torus(&named_state("antidipolar").unwrap()).unwrap();
        assert!((adip.theta_p + FRAC_PI_2).abs() < 1e-14);
        assert!((dip.l_p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn torus_inverse_rejects_out_of_family() {
        match state_to_torus(&CoherentState::basis(3)) {
            Err(Error::NotTorusState { alpha3_sq, .. }) => assert_eq!(alpha3_sq, 1.0),
            other => panic!("{other:?}"),
        }
        assert!(state_to_torus(&CoherentState::basis(1)).is_err());
    }

    #[test]
    fn subsphere_enumeration() {
        let all = enumerate_subspheres();
        assert_eq!(all.len(), 15);
        let class = |p| all.iter().find(|s| s.pair == p).unwrap().class;
        use SubsphereClass::*;
        for p in [(1, 4), (2, 5), (3, 6)] {
            assert_eq!(class(p), Polarization);
        }
        for p in [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)] {
            assert_eq!(class(p), Oam);
        }
        assert_eq!(class((2, 4)), SingletTriplet);
        assert_eq!(class((1, 5)), TripletTriplet);
        assert_eq!(class((3, 4)), Skyrmion);
        assert_eq!(class((2, 6)), Skyrmion);
        assert_eq!(class((3, 5)), Antiskyrmion);
        assert_eq!(class((1, 6)), Antiskyrmion);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(0.5) - 0.5).abs() < 1e-15);
    }
}
