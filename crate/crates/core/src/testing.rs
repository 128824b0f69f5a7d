//! Independent reference implementations for cross-checking the main code
//! paths. Compiled for this crate's tests and behind the `testing` feature.

use alloc::vec::Vec;
use core::f64::consts::PI;

// float methods under no_std; std shadows them when linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::field::{disk_plaquettes, StokesField};
use crate::linalg::{self, ComplexMatrix, I};

/// Signed solid angle of the spherical triangle `(n1, n2, n3)`.
pub fn triangle_solid_angle(n1: [f64; 3], n2: [f64; 3], n3: [f64; 3]) -> f64 {
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = [n2[1] * n3[2] - n2[2] * n3[1], n2[2] * n3[0] - n2[0] * n3[2], n2[0] * n3[1] - n2[1] * n3[0]];
    let num = dot(n1, cross);
    let den = 1.0 + dot(n1, n2) + dot(n2, n3) + dot(n3, n1);
    2.0 * num.atan2(den)
}

/// Lattice skyrmion number: each plaquette inside the disk is split into two
/// triangles and their solid angles summed.
pub fn solid_angle_skyrmion_number(sf: &StokesField, disk_radius: f64) -> Result<f64> {
    let plaquettes = disk_plaquettes(sf, disk_radius)?;
    let total: f64 =
        plaquettes.iter().map(|[a, b, c, d]| triangle_solid_angle(*a, *b, *c) + triangle_solid_angle(*a, *c, *d)).sum();
    Ok(total / (4.0 * PI))
}

/// `exp(-i M t)` for a Hermitian `M` with spectrum in `{-1, 0, 1}`
/// (so `M³ = M`): `1 + (cos t - 1) M² - i sin t M`.
pub fn euler_exp(m: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = m.nrows();
    let m2 = m * m;
    linalg::identity(n) + m2 * linalg::cr(t.cos() - 1.0) - m * (I * t.sin())
}

/// Reference matrix exponential by scaled Taylor series and squaring.
pub fn taylor_exp(a: &ComplexMatrix) -> ComplexMatrix {
    let norm = linalg::max_abs(a) * a.nrows() as f64;
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * linalg::cr(scale);
    let n = a.nrows();
    let mut term = linalg::identity(n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &x * linalg::cr(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Real variant of [`taylor_exp`].
pub fn taylor_exp_real(a: &linalg::RealMatrix) -> linalg::RealMatrix {
    taylor_exp(&a.map(linalg::cr)).map(|z| z.re)
}

/// Structure constants straight from the definition with no shortcuts:
/// `g_lmn = -i tr([b_l, b_m] b_n) / 4`, returned as nested vectors.
pub fn naive_structure_constants(generators: &[ComplexMatrix]) -> Vec<Vec<Vec<f64>>> {
    generators
        .iter()
        .map(|bl| {
            generators
                .iter()
                .map(|bm| {
                    let comm = bl * bm - bm * bl;
                    generators.iter().map(|bn| ((&comm * bn).trace() * -I / 4.0).re).collect()
                })
                .collect()
        })
        .collect()
}
