//! Poincaré-rotator optical bench.
//!
//! Polarization elements act on the spin factor as Jones matrices and leave the
//! OAM factor alone. Jones matrices are written in the linear `(H, V)` basis
//! and moved to the circular spin basis with
//! `|↑> = |L> = (|H> - i|V>)/√2`, `|↓> = |R> = (|H> + i|V>)/√2`:
//!
//! ```text
//! HWP(θ) = -i [[cos 2θ, sin 2θ], [sin 2θ, -cos 2θ]]
//! QWP(θ) = e^{-iπ/4} [[cos²θ + i sin²θ, (1-i) sinθ cosθ],
//!                     [(1-i) sinθ cosθ, sin²θ + i cos²θ]]
//! ```
//!
//! A bench splits its input at a polarizing beam splitter (H to arm A, V to
//! arm B), runs each arm, and recombines at a non-polarizing splitter where the
//! reflected arm picks up a mirror flip of both spin and OAM chirality.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
// float methods under no_std; std shadows them when linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, ComplexMatrix, I};
use crate::state::{apply_matrix, observables, CoherentState, Observables};

/// Handedness of a vortex lens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chirality {
    L,
    R,
}

impl Chirality {
    pub fn reversed(self) -> Self {
        match self {
            Chirality::L => Chirality::R,
            Chirality::R => Chirality::L,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    /// Half-wave plate, fast axis in degrees.
    Hwp {
        angle: f64,
    },
    /// Quarter-wave plate, fast axis in degrees.
    Qwp {
        angle: f64,
    },
    /// Linear polarizer, transmission axis in degrees. Not unitary.
    Polarizer {
        angle: f64,
    },
    Mirror,
    /// Vortex lens imposing one unit of OAM of the given chirality;
    /// `flipped` mounts it the other way round and reverses the chirality.
    VortexLens {
        chirality: Chirality,
        flipped: bool,
    },
    /// Scalar phase in degrees.
    Phase {
        phase: f64,
    },
    /// Polarizing beam splitter (bench structure only).
    Pbs,
    /// Non-polarizing beam splitter (bench structure only).
    Npbs,
}

impl ElementKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            ElementKind::Hwp { .. } => "HWP",
            ElementKind::Qwp { .. } => "QWP",
            ElementKind::Polarizer { .. } => "POLARIZER",
            ElementKind::Mirror => "MIRROR",
            ElementKind::VortexLens { .. } => "VL",
            ElementKind::Phase { .. } => "PHASE",
            ElementKind::Pbs => "PBS",
            ElementKind::Npbs => "NPBS",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalElement {
    pub id: Option<String>,
    pub kind: ElementKind,
}

impl OpticalElement {
    pub fn new(kind: ElementKind) -> Self {
        Self { id: None, kind }
    }

    pub fn with_id(kind: ElementKind, id: &str) -> Self {
        Self { id: Some(String::from(id)), kind }
    }

    /// The sweepable parameter in degrees, if the element has one.
    pub fn parameter(&self) -> Option<f64> {
        match self.kind {
            ElementKind::Hwp { angle } | ElementKind::Qwp { angle } | ElementKind::Polarizer { angle } => Some(angle),
            ElementKind::Phase { phase } => Some(phase),
            _ => None,
        }
    }

    pub fn set_parameter(&mut self, value: f64) -> bool {
        match &mut self.kind {
            ElementKind::Hwp { angle } | ElementKind::Qwp { angle } | ElementKind::Polarizer { angle } => {
                *angle = value
            }
            ElementKind::Phase { phase } => *phase = value,
            _ => return false,
        }
        true
    }
}

/// Jones matrix of a half-wave plate in the `(H, V)` basis, angle in radians.
pub fn hwp_jones(theta: f64) -> ComplexMatrix {
    let (s, co) = num_traits::Float::sin_cos(2.0 * theta);
    linalg::from_rows(2, &[-I * co, -I * s, -I * s, I * co])
}

/// Jones matrix of a quarter-wave plate in the `(H, V)` basis, angle in radians.
pub fn qwp_jones(theta: f64) -> ComplexMatrix {
    let (s, co) = num_traits::Float::sin_cos(theta);
    let pre = Complex64::from_polar(1.0, -core::f64::consts::FRAC_PI_4);
    let off = c(1.0, -1.0) * (s * co);
    linalg::from_rows(2, &[c(co * co, s * s), off, off, c(s * s, co * co)]).map(|z| z * pre)
}

/// Projector onto the linear polarization at `theta` radians.
pub fn polarizer_jones(theta: f64) -> ComplexMatrix {
    let (s, co) = num_traits::Float::sin_cos(theta);
    linalg::from_rows(2, &[cr(co * co), cr(s * co), cr(s * co), cr(s * s)])
}

/// Columns are `|↑> = |L>` and `|↓> = |R>` written in `(H, V)`.
fn circular_columns() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    linalg::from_rows(2, &[cr(h), cr(h), c(0.0, -h), c(0.0, h)])
}

/// Lift a linear-basis Jones matrix to the 6-dimensional spin ⊗ OAM space.
pub fn spin_operator(jones_hv: &ComplexMatrix) -> ComplexMatrix {
    let basis = circular_columns();
    let circ = basis.adjoint() * jones_hv * &basis;
    linalg::kron(&circ, &linalg::identity(3))
}

/// Mirror reflection: swaps `↑ <-> ↓` and `L <-> R`, keeps `O`.
pub fn mirror_operator() -> ComplexMatrix {
    let mut oam = ComplexMatrix::zeros(3, 3);
    oam[(0, 1)] = cr(1.0);
    oam[(1, 0)] = cr(1.0);
    oam[(2, 2)] = cr(1.0);
    let flip = linalg::from_rows(2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
    linalg::kron(&flip, &oam)
}

/// Cyclic OAM shift in the three-mode truncation. An `R` lens maps
/// `O -> R -> L -> O`, an `L` lens the inverse `O -> L -> R -> O`.
pub fn vortex_lens_operator(chirality: Chirality) -> ComplexMatrix {
    // (to, from) with OAM order (L, R, O) = (0, 1, 2)
    let moves: [(usize, usize); 3] = match chirality {
        Chirality::R => [(1, 2), (0, 1), (2, 0)],
        Chirality::L => [(0, 2), (1, 0), (2, 1)],
    };
    let mut oam = ComplexMatrix::zeros(3, 3);
    for (to, from) in moves {
        oam[(to, from)] = cr(1.0);
    }
    linalg::kron(&linalg::identity(2), &oam)
}

/// 6×6 operator of an in-arm element. Beam splitters are bench structure and
/// are rejected.
pub fn element_operator(e: &OpticalElement) -> Result<ComplexMatrix> {
    Ok(match e.kind {
        ElementKind::Hwp { angle } => spin_operator(&hwp_jones(angle.to_radians())),
        ElementKind::Qwp { angle } => spin_operator(&qwp_jones(angle.to_radians())),
        ElementKind::Polarizer { angle } => spin_operator(&polarizer_jones(angle.to_radians())),
        ElementKind::Mirror => mirror_operator(),
        ElementKind::VortexLens { chirality, flipped } => {
            vortex_lens_operator(if flipped { chirality.reversed() } else { chirality })
        }
        ElementKind::Phase { phase } => linalg::identity(6) * Complex64::from_polar(1.0, phase.to_radians()),
        ElementKind::Pbs | ElementKind::Npbs => return Err(Error::UnsupportedElement(String::from(e.kind.keyword()))),
    })
}

/// Which arm is reflected at the combining splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflect {
    A,
    B,
    /// No chirality flip on either arm.
    None,
}

/// Observable families a sweep asks to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Record {
    SkyrmionSphere,
    AntiskyrmionSphere,
    OamSphere,
    Torus,
    StokesField,
}

impl Record {
    pub const ALL: [Record; 5] =
        [Record::SkyrmionSphere, Record::AntiskyrmionSphere, Record::OamSphere, Record::Torus, Record::StokesField];

    pub fn keyword(self) -> &'static str {
        match self {
            Record::SkyrmionSphere => "skyrmion_sphere",
            Record::AntiskyrmionSphere => "antiskyrmion_sphere",
            Record::OamSphere => "oam_sphere",
            Record::Torus => "torus",
            Record::StokesField => "stokes_field",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Record::ALL.into_iter().find(|r| r.keyword() == s)
    }
}

/// Angle sweep of one element, in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: Option<String>,
    pub element: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub record: Vec<Record>,
}

impl SweepSpec {
    /// Number of frames, both end points included.
    pub fn frame_count(&self) -> Result<usize> {
        if self.step == 0.0 || !self.step.is_finite() {
            return Err(Error::InvalidSweep(String::from("step must be non-zero")));
        }
        let span = (self.to - self.from) / self.step;
        let rounded = span.round();
        if (span - rounded).abs() > 1e-9 || rounded < 0.0 {
            return Err(Error::InvalidSweep(alloc::format!(
                "({} - {}) / {} is not a non-negative integer",
                self.to,
                self.from,
                self.step
            )));
        }
        Ok(rounded as usize + 1)
    }

    pub fn parameter(&self, frame: usize) -> f64 {
        self.from + self.step * frame as f64
    }
}

/// Where the bench input comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Named(String),
    /// Path to a JSON state file, resolved by the caller.
    File(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchDescription {
    pub name: String,
    pub input: InputSpec,
    /// Elements before the splitter.
    pub pre: Vec<OpticalElement>,
    /// Transmitted (H) arm.
    pub arm_a: Vec<OpticalElement>,
    /// Reflected (V) arm.
    pub arm_b: Vec<OpticalElement>,
    pub reflect: Reflect,
    pub sweeps: Vec<SweepSpec>,
}

impl BenchDescription {
    pub fn elements(&self) -> impl Iterator<Item = &OpticalElement> {
        self.pre.iter().chain(&self.arm_a).chain(&self.arm_b)
    }

    fn elements_mut(&mut self) -> impl Iterator<Item = &mut OpticalElement> {
        self.pre.iter_mut().chain(self.arm_a.iter_mut()).chain(self.arm_b.iter_mut())
    }

    pub fn find(&self, id: &str) -> Option<&OpticalElement> {
        self.elements().find(|e| e.id.as_deref() == Some(id))
    }

    /// Set the parameter of the element `id`.
    pub fn set_parameter(&mut self, id: &str, value: f64) -> Result<()> {
        let e = self
            .elements_mut()
            .find(|e| e.id.as_deref() == Some(id))
            .ok_or_else(|| Error::UnknownElement(String::from(id)))?;
        if e.set_parameter(value) {
            Ok(())
        } else {
            Err(Error::InvalidSweep(alloc::format!("element '{id}' has no angle to sweep")))
        }
    }

    /// Check sweep references and frame counts, and that no in-arm element
    /// is a beam splitter.
    pub fn validate(&self) -> Result<()> {
        for e in self.elements() {
            if matches!(e.kind, ElementKind::Pbs | ElementKind::Npbs) {
                return Err(Error::UnsupportedElement(String::from(e.kind.keyword())));
            }
        }
        for s in &self.sweeps {
            let e = self.find(&s.element).ok_or_else(|| Error::UnknownElement(s.element.clone()))?;
            if e.parameter().is_none() {
                return Err(Error::InvalidSweep(alloc::format!("element '{}' has no angle to sweep", s.element)));
            }
            s.frame_count()?;
        }
        Ok(())
    }
}

fn chain(elements: &[OpticalElement], state: CoherentState) -> Result<CoherentState> {
    elements.iter().try_fold(state, |s, e| Ok(apply_matrix(&s, &element_operator(e)?)))
}

/// Camera-plane state of the bench for the given input.
pub fn run_bench(bench: &BenchDescription, input: &CoherentState) -> Result<CoherentState> {
    let s = chain(&bench.pre, input.clone())?;
    let project_h = spin_operator(&polarizer_jones(0.0));
    let project_v = spin_operator(&polarizer_jones(core::f64::consts::FRAC_PI_2));
    let a = chain(&bench.arm_a, apply_matrix(&s, &project_h))?;
    let b = chain(&bench.arm_b, apply_matrix(&s, &project_v))?;

    let mirror = mirror_operator();
    let (a, b) = match bench.reflect {
        Reflect::A => (apply_matrix(&a, &mirror), b),
        Reflect::B => (a, apply_matrix(&b, &mirror)),
        Reflect::None => (a, b),
    };
    let mut alpha = [cr(0.0); 6];
    for (i, out) in alpha.iter_mut().enumerate() {
        *out = (a.amplitudes()[i] + b.amplitudes()[i]) * FRAC_1_SQRT_2;
    }
    let power: f64 = alpha.iter().map(|z| z.norm_sqr()).sum();
    if power < 1e-24 {
        return Err(Error::DarkOutput);
    }
    Ok(CoherentState::new(alpha)?.with_scale(input.n0(), input.hbar()))
}

/// One sweep frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Swept parameter in degrees.
    pub parameter: f64,
    pub state: CoherentState,
    pub observables: Observables,
}

pub fn sweep(bench: &BenchDescription, input: &CoherentState, spec: &SweepSpec) -> Result<Vec<Frame>> {
    let frames = spec.frame_count()?;
    let mut working = bench.clone();
    (0..frames)
        .map(|k| {
            let parameter = spec.parameter(k);
            working.set_parameter(&spec.element, parameter)?;
            let state = run_bench(&working, input)?;
            let observables = observables(&state);
            Ok(Frame { parameter, state, observables })
        })
        .collect()
}

/// The Poincaré rotator: HWP1 sets the splitting ratio, the
/// QWP1-HWP2-HWP3-QWP2 train in arm B shifts the phase by the HWP3 angle,
/// and VL1 writes the vortex. With `HWP1 = 22.5°` and `HWP3 = 0°` the camera
/// sees the Néel-out skyrmion `(|3> + |4>)/√2`.
pub fn poincare_rotator_bench() -> BenchDescription {
    use ElementKind::*;
    let el = OpticalElement::with_id;
    BenchDescription {
        name: String::from("fig1"),
        input: InputSpec::Named(String::from("gaussian_h")),
        pre: alloc::vec![el(Hwp { angle: 22.5 }, "HWP1")],
        arm_a: alloc::vec![el(Mirror, "M1"), el(Qwp { angle: 45.0 }, "QWP4")],
        arm_b: alloc::vec![
            el(Qwp { angle: 45.0 }, "QWP1"),
            el(Hwp { angle: -45.0 }, "HWP2"),
            el(Hwp { angle: 0.0 }, "HWP3"),
            el(Qwp { angle: 45.0 }, "QWP2"),
            el(Mirror, "M2"),
            el(Qwp { angle: 45.0 }, "QWP3"),
            el(VortexLens { chirality: Chirality::R, flipped: false }, "VL1"),
        ],
        reflect: Reflect::B,
        sweeps: alloc::vec![
            SweepSpec {
                name: Some(String::from("phase")),
                element: String::from("HWP3"),
                from: 0.0,
                to: 180.0,
                step: 10.0,
                record: alloc::vec![Record::SkyrmionSphere, Record::StokesField],
            },
            SweepSpec {
                name: Some(String::from("rotator")),
                element: String::from("HWP1"),
                from: 0.0,
                to: 90.0,
                step: 5.0,
                record: alloc::vec![Record::SkyrmionSphere, Record::StokesField],
            },
        ],
    }
}
