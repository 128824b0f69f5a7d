//! Transverse fields, Stokes parameters and spin-texture topology.
//!
//! Every mode shares one waist `w` and is evaluated in the waist plane.
//! Arrays are row-major with `y` along rows: `values[j * size + i]` sits at
//! `(x_i, y_j)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// float methods under no_std; std shadows them when linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::state::{antiskyrmion_sphere, skyrmion_sphere, state_to_torus, wrap_angle, CoherentState, SpherePoint};

/// Uniform square sampling `[-extent·w, extent·w]²`, end points included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseGrid {
    size: usize,
    extent: f64,
    waist: f64,
}

impl Default for TransverseGrid {
    fn default() -> Self {
        Self { size: 256, extent: 3.0, waist: 1.0 }
    }
}

impl TransverseGrid {
    /// `extent` is the half-width in waists.
    pub fn new(size: usize, extent: f64, waist: f64) -> Result<Self> {
        if size < 16 {
            return Err(Error::InvalidGrid(alloc::format!("size {size} < 16")));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::InvalidGrid(alloc::format!("extent {extent} must be positive")));
        }
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::InvalidGrid(alloc::format!("waist {waist} must be positive")));
        }
        Ok(Self { size, extent, waist })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    /// Half-width in length units.
    pub fn half_width(&self) -> f64 {
        self.extent * self.waist
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width() / (self.size - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width() + i as f64 * self.spacing()
    }

    pub fn len(&self) -> usize {
        self.size * self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// `(x, y)` of every pixel in storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.size).flat_map(move |j| (0..self.size).map(move |i| (self.coord(i), self.coord(j))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub m: i32,
    pub w: f64,
}

impl ModeProfile {
    pub fn new(m: i32, w: f64) -> Result<Self> {
        if !(-1..=1).contains(&m) {
            return Err(Error::ChargeOutOfRange(m));
        }
        Ok(Self { m, w })
    }

    /// Unnormalized amplitude at `(x, y)`.
    pub fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        let r2 = (x * x + y * y) / (self.w * self.w);
        let gauss = (-r2).exp();
        match self.m {
            0 => Complex64::new(gauss, 0.0),
            // (r√2/w) e^{imφ} = √2 (x ± iy)/w
            m => Complex64::new(x, m as f64 * y) * (core::f64::consts::SQRT_2 / self.w * gauss),
        }
    }
}

/// Complex scalar field sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: TransverseGrid,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: TransverseGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// `Σ |E|² dA`.
    pub fn power(&self) -> f64 {
        let h = self.grid.spacing();
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * h * h
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.size + i]
    }
}

/// Laguerre-Gauss mode of charge `m`, normalized to unit power on the grid.
pub fn lg_mode(p: ModeProfile, grid: &TransverseGrid) -> Result<ComplexField> {
    let p = ModeProfile::new(p.m, p.w)?;
    let mut values: Vec<Complex64> = grid.points().map(|(x, y)| p.amplitude(x, y)).collect();
    let h = grid.spacing();
    let norm = (values.iter().map(|z| z.norm_sqr()).sum::<f64>() * h * h).sqrt();
    for v in values.iter_mut() {
        *v /= norm;
    }
    Ok(ComplexField { grid: *grid, values })
}

/// Left- (spin ↑) and right-circular (spin ↓) field components.
pub fn synthesize(state: &CoherentState, grid: &TransverseGrid) -> (ComplexField, ComplexField) {
    // basis order within a spin block is (L, R, O) = (m = +1, -1, 0)
    let modes: [ComplexField; 3] =
        [1, -1, 0].map(|m| lg_mode(ModeProfile { m, w: grid.waist() }, grid).expect("charge within range"));
    let a = state.amplitudes();
    let component = |offset: usize| {
        let mut e = ComplexField::zeros(*grid);
        for (k, mode) in modes.iter().enumerate() {
            let c = a[offset + k];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (v, u) in e.values.iter_mut().zip(&mode.values) {
                *v += c * u;
            }
        }
        e
    };
    (component(0), component(3))
}

/// Local Stokes parameters and the unit spin field.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesField {
    pub grid: TransverseGrid,
    pub s0: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub s3: Vec<f64>,
    /// `(S1, S2, S3)/S0` where `S0 > epsilon`.
    pub n: Vec<Option<[f64; 3]>>,
    pub epsilon: f64,
}

/// Relative `S0` cutoff below which the spin direction is undefined.
pub const EPSILON_REL: f64 = 1e-12;

pub fn stokes_fields(e_l: &ComplexField, e_r: &ComplexField) -> StokesField {
    assert_eq!(e_l.grid, e_r.grid, "field components must share a grid");
    let len = e_l.values.len();
    let (mut s0, mut s1, mut s2, mut s3) =
        (Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len));
    for (l, r) in e_l.values.iter().zip(&e_r.values) {
        let cross = l.conj() * r;
        s0.push(l.norm_sqr() + r.norm_sqr());
        s1.push(2.0 * cross.re);
        s2.push(2.0 * cross.im);
        s3.push(l.norm_sqr() - r.norm_sqr());
    }
    let peak = s0.iter().copied().fold(0.0, f64::max);
    let epsilon = EPSILON_REL * peak;
    let n = (0..len).map(|k| (s0[k] > epsilon).then(|| [s1[k] / s0[k], s2[k] / s0[k], s3[k] / s0[k]])).collect();
    StokesField { grid: e_l.grid, s0, s1, s2, s3, n, epsilon }
}

impl StokesField {
    pub fn from_state(state: &CoherentState, grid: &TransverseGrid) -> Self {
        let (l, r) = synthesize(state, grid);
        stokes_fields(&l, &r)
    }

    pub fn spin(&self, i: usize, j: usize) -> Option<[f64; 3]> {
        self.n[j * self.grid.size() + i]
    }

    /// `max |S1² + S2² + S3² - S0²| / S0²` over pixels with `S0 > epsilon`.
    pub fn purity_residual(&self) -> f64 {
        (0..self.s0.len())
            .filter(|&k| self.s0[k] > self.epsilon)
            .map(|k| {
                let s0 = self.s0[k];
                (self.s1[k].powi(2) + self.s2[k].powi(2) + self.s3[k].powi(2) - s0 * s0).abs() / (s0 * s0)
            })
            .fold(0.0, f64::max)
    }

    /// Bilinear interpolation of `n` at `(x, y)`, renormalized. `None` outside
    /// the grid or next to an undefined pixel.
    pub fn spin_at(&self, x: f64, y: f64) -> Option<[f64; 3]> {
        let h = self.grid.spacing();
        let last = self.grid.size() - 1;
        let u = (x + self.grid.half_width()) / h;
        let v = (y + self.grid.half_width()) / h;
        if !(0.0..=last as f64).contains(&u) || !(0.0..=last as f64).contains(&v) {
            return None;
        }
        let i = (u.floor() as usize).min(last - 1);
        let j = (v.floor() as usize).min(last - 1);
        let (fu, fv) = (u - i as f64, v - j as f64);
        let corners = [
            (self.spin(i, j)?, (1.0 - fu) * (1.0 - fv)),
            (self.spin(i + 1, j)?, fu * (1.0 - fv)),
            (self.spin(i, j + 1)?, (1.0 - fu) * fv),
            (self.spin(i + 1, j + 1)?, fu * fv),
        ];
        let mut out = [0.0; 3];
        for (n, wgt) in corners {
            for k in 0..3 {
                out[k] += wgt * n[k];
            }
        }
        normalize(out)
    }
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (norm > 1e-300).then(|| [v[0] / norm, v[1] / norm, v[2] / norm])
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// One lattice plaquette whose centre lies in the disk: the four corner spins
/// in counter-clockwise order `(i,j), (i+1,j), (i+1,j+1), (i,j+1)`.
pub type Plaquette = [[f64; 3]; 4];

/// Plaquettes whose centre lies within `disk_radius` of the axis.
pub fn disk_plaquettes(sf: &StokesField, disk_radius: f64) -> Result<Vec<Plaquette>> {
    let grid = &sf.grid;
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    if !(disk_radius > 0.0) || disk_radius > grid.half_width() {
        return Err(Error::DiskExceedsGrid { radius: disk_radius, extent: grid.half_width() });
    }
    let h = grid.spacing();
    let mut out = Vec::new();
    for j in 0..grid.size() - 1 {
        let yc = grid.coord(j) + h / 2.0;
        for i in 0..grid.size() - 1 {
            let xc = grid.coord(i) + h / 2.0;
            if xc * xc + yc * yc > disk_radius * disk_radius {
                continue;
            }
            let get = |a: usize, b: usize| sf.spin(a, b).ok_or(Error::UndefinedSpin { x: a, y: b });
            out.push([get(i, j)?, get(i + 1, j)?, get(i + 1, j + 1)?, get(i, j + 1)?]);
        }
    }
    Ok(out)
}

/// `n · (∂x n × ∂y n) dx dy` on one plaquette, with the derivatives taken as
/// central differences about the plaquette centre.
pub fn plaquette_charge(p: &Plaquette, h: f64) -> f64 {
    let [a, b, c, d] = *p;
    let mut dx = [0.0; 3];
    let mut dy = [0.0; 3];
    let mut centre = [0.0; 3];
    for k in 0..3 {
        dx[k] = (b[k] + c[k] - a[k] - d[k]) / (2.0 * h);
        dy[k] = (c[k] + d[k] - a[k] - b[k]) / (2.0 * h);
        centre[k] = (a[k] + b[k] + c[k] + d[k]) / 4.0;
    }
    match normalize(centre) {
        Some(n) => dot(n, cross(dx, dy)) * h * h,
        None => 0.0,
    }
}

/// Skyrmion number `(1/4π) ∬_disk n · (∂x n × ∂y n) dx dy` over the
/// plaquettes centred inside the disk (`disk_radius` in length units).
pub fn skyrmion_number(sf: &StokesField, disk_radius: f64) -> Result<f64> {
    let h = sf.grid.spacing();
    let total: f64 = disk_plaquettes(sf, disk_radius)?.iter().map(|p| plaquette_charge(p, h)).sum();
    Ok(total / (4.0 * PI))
}

/// Radial profile of the disk-to-sphere map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialProfile {
    /// `θ = π r / R`.
    Linear,
    /// `cos θ = 1 - 2 (r/R)²`.
    AreaPreserving,
}

impl RadialProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            RadialProfile::Linear => "linear",
            RadialProfile::AreaPreserving => "area_preserving",
        }
    }

    pub fn theta(self, r_over_disk: f64) -> f64 {
        match self {
            RadialProfile::Linear => PI * r_over_disk,
            RadialProfile::AreaPreserving => (1.0 - 2.0 * r_over_disk * r_over_disk).clamp(-1.0, 1.0).acos(),
        }
    }

    pub fn radius(self, theta: f64) -> f64 {
        match self {
            RadialProfile::Linear => theta / PI,
            RadialProfile::AreaPreserving => (theta / 2.0).sin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingDescriptor {
    pub disk_radius: f64,
    pub profile: RadialProfile,
}

/// Spin texture carried onto the sphere: bin `(t, p)` covers polar angles
/// `[tπ/T, (t+1)π/T)` and azimuths `[2πp/P, 2π(p+1)/P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTextureMap {
    pub theta_bins: usize,
    pub phi_bins: usize,
    /// Spin resampled at each bin centre; `None` flags an empty bin.
    pub vectors: Vec<Option<[f64; 3]>>,
    /// Number of disk pixels landing in each bin.
    pub counts: Vec<u32>,
    pub mapping: MappingDescriptor,
}

impl SpinTextureMap {
    pub fn index(&self, t: usize, p: usize) -> usize {
        t * self.phi_bins + p
    }

    pub fn bin_centre(&self, t: usize, p: usize) -> (f64, f64) {
        (PI * (t as f64 + 0.5) / self.theta_bins as f64, 2.0 * PI * (p as f64 + 0.5) / self.phi_bins as f64)
    }

    pub fn empty_bins(&self) -> usize {
        self.vectors.iter().filter(|v| v.is_none()).count()
    }
}

pub const DEFAULT_THETA_BINS: usize = 32;
pub const DEFAULT_PHI_BINS: usize = 64;

/// Soup-bubble map: the disk of radius `disk_radius` (length units) is
/// wrapped onto the sphere, axis to north pole and rim to south pole, keeping
/// the azimuth.
pub fn soup_bubble(
    sf: &StokesField,
    mapping: MappingDescriptor,
    theta_bins: usize,
    phi_bins: usize,
) -> Result<SpinTextureMap> {
    let disk = mapping.disk_radius;
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(disk > 0.0) || disk > sf.grid.half_width() {
        return Err(Error::DiskExceedsGrid { radius: disk, extent: sf.grid.half_width() });
    }
    if theta_bins == 0 || phi_bins == 0 {
        return Err(Error::InvalidGrid(String::from("sphere binning needs at least one bin per axis")));
    }
    let mut map = SpinTextureMap {
        theta_bins,
        phi_bins,
        vectors: vec![None; theta_bins * phi_bins],
        counts: vec![0; theta_bins * phi_bins],
        mapping,
    };
    for (x, y) in sf.grid.points() {
        let r = (x * x + y * y).sqrt();
        if r > disk {
            continue;
        }
        let (t, p) = sphere_bin(mapping.profile.theta(r / disk), y.atan2(x), theta_bins, phi_bins);
        let k = map.index(t, p);
        map.counts[k] += 1;
    }
    for t in 0..theta_bins {
        for p in 0..phi_bins {
            let (theta, phi) = map.bin_centre(t, p);
            let r = disk * mapping.profile.radius(theta);
            let k = map.index(t, p);
            map.vectors[k] = sf.spin_at(r * phi.cos(), r * phi.sin());
        }
    }
    Ok(map)
}

fn sphere_bin(theta: f64, phi: f64, theta_bins: usize, phi_bins: usize) -> (usize, usize) {
    let t = ((theta / PI) * theta_bins as f64) as usize;
    let phi = phi - 2.0 * PI * (phi / (2.0 * PI)).floor();
    let p = ((phi / (2.0 * PI)) * phi_bins as f64) as usize;
    (t.min(theta_bins - 1), p.min(phi_bins - 1))
}

/// Orientation of an antiskyrmion, half its sphere azimuth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orientation {
    Horizontal,
    Vertical,
    /// Orientation angle in degrees.
    Angle(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TextureLabel {
    NeelOut,
    NeelIn,
    BlochLeft,
    BlochRight,
    Antiskyrmion(Orientation),
    Dipolar,
    Antidipolar,
    Pole,
    Intermediate,
    Other,
}

impl core::fmt::Display for TextureLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TextureLabel::NeelOut => f.write_str("neel_out"),
            TextureLabel::NeelIn => f.write_str("neel_in"),
            TextureLabel::BlochLeft => f.write_str("bloch_left"),
            TextureLabel::BlochRight => f.write_str("bloch_right"),
            TextureLabel::Antiskyrmion(Orientation::Horizontal) => f.write_str("antiskyrmion(horizontal)"),
            TextureLabel::Antiskyrmion(Orientation::Vertical) => f.write_str("antiskyrmion(vertical)"),
            TextureLabel::Antiskyrmion(Orientation::Angle(a)) => write!(f, "antiskyrmion({a:.1}deg)"),
            TextureLabel::Dipolar => f.write_str("dipolar"),
            TextureLabel::Antidipolar => f.write_str("antidipolar"),
            TextureLabel::Pole => f.write_str("pole"),
            TextureLabel::Intermediate => f.write_str("intermediate"),
            TextureLabel::Other => f.write_str("other"),
        }
    }
}

impl TextureLabel {
    pub fn is_antiskyrmion(&self) -> bool {
        matches!(self, TextureLabel::Antiskyrmion(_))
    }
}

/// Default angular tolerance for [`classify_texture`], radians.
pub const CLASSIFY_TOL: f64 = PI / 180.0;

const WEIGHT_TOL: f64 = 1e-12;

fn near(a: f64, b: f64, tol: f64) -> bool {
    wrap_angle(a - b).abs() <= tol
}

fn at_pole(p: &SpherePoint, tol: f64) -> bool {
    p.degenerate_azimuth || p.theta <= tol || p.theta >= PI - tol
}

/// Name the texture of a state in `span{|3>, |4>, |5>}` from its sphere or
/// torus coordinates. `tol` is an angle in radians.
pub fn classify_texture(state: &CoherentState, tol: f64) -> TextureLabel {
    if state.weight_outside(&[2, 3, 4]) > WEIGHT_TOL {
        return TextureLabel::Other;
    }
    let a = state.amplitudes();
    let (w4, w5) = (a[3].norm_sqr(), a[4].norm_sqr());
    let equator = |p: &SpherePoint| (p.theta - PI / 2.0).abs() <= tol;
    if w5 <= WEIGHT_TOL {
        let p = skyrmion_sphere(state);
        if at_pole(&p, tol) {
            return TextureLabel::Pole;
        }
        if !equator(&p) {
            return TextureLabel::Intermediate;
        }
        return [
            (0.0, TextureLabel::NeelOut),
            (PI, TextureLabel::NeelIn),
            (PI / 2.0, TextureLabel::BlochLeft),
            (-PI / 2.0, TextureLabel::BlochRight),
        ]
        .into_iter()
        .find(|(phi, _)| near(p.phi, *phi, tol))
        .map_or(TextureLabel::Intermediate, |(_, l)| l);
    }
    if w4 <= WEIGHT_TOL {
        let p = antiskyrmion_sphere(state);
        if at_pole(&p, tol) {
            return TextureLabel::Pole;
        }
        if !equator(&p) {
            return TextureLabel::Intermediate;
        }
        let orientation = if near(p.phi, 0.0, tol) {
            Orientation::Horizontal
        } else if near(p.phi, PI, tol) {
            Orientation::Vertical
        } else {
            Orientation::Angle((p.phi / 2.0).to_degrees())
        };
        return TextureLabel::Antiskyrmion(orientation);
    }
    match state_to_torus(state) {
        Ok(t) if near(t.theta_p, PI / 2.0, tol) => TextureLabel::Dipolar,
        Ok(t) if near(t.theta_p, -PI / 2.0, tol) => TextureLabel::Antidipolar,
        _ => TextureLabel::Intermediate,
    }
}
