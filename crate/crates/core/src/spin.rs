//! Direction-parameterized spin observables `sigma_n = 2 n.J` for spin
//! `(d-1)/2`, and their embedding into a multi-site operator space.
//!
//! Level `k` of a site is the `J_z` eigenstate with `m = j - k`, so the
//! diagonal of `sigma_n` at `theta = 0` reads `d-1, d-3, ..., -(d-1)`. For
//! `d = 2` this is the Pauli combination
//! `sin(theta)cos(phi) X + sin(theta)sin(phi) Y + cos(theta) Z`.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest full-system dimension [`embed_at_site`] will materialize.
pub const MAX_EMBED_DIM: usize = 1024;

/// Polar angle `theta` from the z axis and azimuth `phi` from the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// `theta` must lie in `[0, pi]`; `phi` is reduced into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "direction ({theta}, {phi}) needs theta in [0, pi] and finite phi"
            )));
        }
        Ok(Direction {
            theta,
            phi: reduce_angle(phi),
        })
    }

    /// Direction of a nonzero 3-vector.
    pub fn from_vector(v: [f64; 3]) -> Option<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == 0.0 || !r.is_finite() {
            return None;
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        Some(Direction {
            theta,
            phi: reduce_angle(v[1].atan2(v[0])),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(sin(theta)cos(phi), sin(theta)sin(phi), cos(theta))`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

pub(crate) fn reduce_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A spin observable for one site of local dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservable {
    pub dim: usize,
    pub direction: Direction,
    pub matrix: DMatrix<Complex64>,
}

/// Ladder coefficient `<k|J+|k+1>` = `sqrt(j(j+1) - m(m+1))` with `m = j-k-1`.
fn ladder(d: usize, k: usize) -> f64 {
    let two_j = (d - 1) as f64;
    let two_m = two_j - 2.0 * (k + 1) as f64;
    ((two_j * (two_j + 2.0) - two_m * (two_m + 2.0)) / 4.0).sqrt()
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// `[2J_x, 2J_y, 2J_z]` for local dimension `d`.
pub fn spin_axis_matrices(d: usize) -> Result<[DMatrix<Complex64>; 3]> {
    check_dim(d)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut x = DMatrix::from_element(d, d, zero);
    let mut y = DMatrix::from_element(d, d, zero);
    let mut z = DMatrix::from_element(d, d, zero);
    for k in 0..d {
        z[(k, k)] = Complex64::new((d - 1) as f64 - 2.0 * k as f64, 0.0);
    }
    for k in 0..d - 1 {
        let c = ladder(d, k);
        x[(k, k + 1)] = Complex64::new(c, 0.0);
        x[(k + 1, k)] = Complex64::new(c, 0.0);
        y[(k, k + 1)] = Complex64::new(0.0, -c);
        y[(k + 1, k)] = Complex64::new(0.0, c);
    }
    Ok([x, y, z])
}

/// `sigma_n` for local dimension `d` along `dir`.
pub fn spin_direction_matrix(d: usize, dir: Direction) -> Result<SpinObservable> {
    check_dim(d)?;
    let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    fill_spin_direction_matrix(&mut m, dir);
    Ok(SpinObservable {
        dim: d,
        direction: dir,
        matrix: m,
    })
}

// Overwrites the diagonal and first off-diagonals of a zeroed d x d `m`.
pub(crate) fn fill_spin_direction_matrix(m: &mut DMatrix<Complex64>, dir: Direction) {
    let d = m.nrows();
    let (st, ct) = dir.theta.sin_cos();
    let upper = Complex64::from_polar(st, -dir.phi);
    for k in 0..d {
        m[(k, k)] = Complex64::new(ct * ((d - 1) as f64 - 2.0 * k as f64), 0.0);
    }
    for k in 0..d - 1 {
        let c = ladder(d, k);
        m[(k, k + 1)] = upper * c;
        m[(k + 1, k)] = upper.conj() * c;
    }
}

/// Eigenvalue `d - 1 - 2k` carried by level `k`.
pub fn eigenvalue_of_digit(d: usize, k: usize) -> Result<i64> {
    check_dim(d)?;
    if k >= d {
        return Err(Error::DigitOutOfRange { digit: k, dim: d });
    }
    Ok(d as i64 - 1 - 2 * k as i64)
}

/// `I ⊗ ... ⊗ sigma ⊗ ... ⊗ I` with `sigma` at `site`, in the same basis
/// ordering as [`crate::PureState`].
pub fn embed_at_site(obs: &SpinObservable, dims: &[usize], site: usize) -> Result<DMatrix<Complex64>> {
    let d = *dims.get(site).ok_or(Error::SiteOutOfRange {
        site,
        sites: dims.len(),
    })?;
    if d != obs.dim {
        return Err(Error::DimensionMismatch {
            operator: obs.dim,
            site: d,
        });
    }
    let total = dims.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x));
    let total = match total {
        Some(t) if t <= MAX_EMBED_DIM => t,
        _ => {
            return Err(Error::TooLarge {
                size: total.unwrap_or(usize::MAX),
                cap: MAX_EMBED_DIM,
            })
        }
    };
    let inner: usize = dims[site + 1..].iter().product();
    let outer: usize = dims[..site].iter().product();
    let mut full = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
    for o in 0..outer {
        for r in 0..inner {
            let base = o * d * inner + r;
            for a in 0..d {
                for b in 0..d {
                    full[(base + a * inner, base + b * inner)] = obs.matrix[(a, b)];
                }
            }
        }
    }
    Ok(full)
}
