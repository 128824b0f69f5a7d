use alloc::string::String;

/// Errors raised by the algebra, state, optics and field routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not unitary (max |U^dagger U - 1| = {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("expected a {expected}x{expected} matrix, got {found}x{found}")]
    Dimension { expected: usize, found: usize },
    #[error("basis is not trace-orthonormal: tr(b{l} b{m}) = {value} (generators numbered from 1)")]
    NonOrthonormal { l: usize, m: usize, value: f64 },
    #[error("rotation direction is the zero vector")]
    ZeroDirection,
    #[error("rotation direction is not a unit vector (|n| = {norm})")]
    DirectionNotUnit { norm: f64 },
    #[error("axis index {0} out of range 1..=35")]
    AxisOutOfRange(usize),
    #[error("unknown state '{name}'; known states: {catalog}")]
    UnknownState { name: String, catalog: String },
    #[error("state has zero norm")]
    ZeroState,
    #[error("state is outside the skyrmionic torus family (|alpha_3|^2 = {alpha3_sq}, weight outside |3>,|4>,|5> = {outside})")]
    NotTorusState { alpha3_sq: f64, outside: f64 },
    #[error("optical element {0} has no single-arm operator")]
    UnsupportedElement(String),
    #[error("bench output port carries no light (destructive recombination)")]
    DarkOutput,
    #[error("sweep references unknown element '{0}'")]
    UnknownElement(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("topological charge |m| = {0} is outside the three-mode OAM space")]
    ChargeOutOfRange(i32),
    #[error("disk radius {radius} exceeds the grid half-width {extent}")]
    DiskExceedsGrid { radius: f64, extent: f64 },
    #[error("spin direction undefined inside the disk at pixel ({x}, {y})")]
    UndefinedSpin { x: usize, y: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
