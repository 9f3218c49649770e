#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spinent::{parse_state, PureState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn parse(expr: &str, dim: Option<usize>) -> PureState {
    parse_state(expr, dim).unwrap().state
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitarily invariant random state: normalized complex Gaussian vector.
pub fn random_state(rng: &mut ChaCha8Rng, dims: Vec<usize>) -> PureState {
    let size = dims.iter().product();
    let amps = (0..size).map(|_| gaussian(rng)).collect();
    PureState::new(dims, amps).unwrap()
}

/// Haar-random 2x2 unitary.
pub fn random_unitary_2(rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let (a, b) = (gaussian(rng), gaussian(rng));
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / r, b / r);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    DMatrix::from_row_slice(2, 2, &[a * phase, -b.conj() * phase, b * phase, a.conj() * phase])
}

/// Applies `u` to `site` by explicit index arithmetic.
pub fn apply_local(state: &PureState, site: usize, u: &DMatrix<Complex64>) -> PureState {
    let dims = state.dims().to_vec();
    let d = dims[site];
    let mut out = vec![Complex64::new(0.0, 0.0); state.amplitudes().len()];
    for (idx, &amp) in state.amplitudes().iter().enumerate() {
        let digits = state.digits_of(idx);
        for k in 0..d {
            let mut target = digits.clone();
            target[site] = k;
            let t = target.iter().zip(&dims).fold(0, |acc, (&x, &dd)| acc * dd + x);
            out[t] += u[(k, digits[site])] * amp;
        }
    }
    PureState::new(dims, out).unwrap()
}

/// Sparse matrix transcription: `(row, col, value)` triples, zero elsewhere.
pub fn from_entries(n: usize, entries: &[(usize, usize, Complex64)]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for &(r, c, v) in entries {
        m[(r, c)] = v;
    }
    m
}

pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
