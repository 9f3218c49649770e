//! Per-site expectation values of spin-direction observables, their
//! maximization over the sphere, and simulated projective measurement.
//!
//! Because `sigma_n = 2 n.J` is linear in `n`, the expectation on a site is
//! `n . v` where `v` is the site's spin vector, so the maximum over all
//! directions is `|v|`, attained along `v`. The lattice search is kept as an
//! independent check of that closed form.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spin::{
    embed_at_site, fill_spin_direction_matrix, reduce_angle, spin_axis_matrices, spin_direction_matrix,
    Direction,
};
use crate::state::{DensityMatrix, PureState};

/// Maxima below this have no meaningful direction.
pub const DEGENERATE_MAX: f64 = 1e-12;

/// How a maximal expectation was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    #[default]
    Analytic,
    Grid,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Grid => "grid",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "grid" => Ok(Method::Grid),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

/// `(<2J_x>, <2J_y>, <2J_z>)` on one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinVector(pub [f64; 3]);

impl SpinVector {
    pub fn norm(&self) -> f64 {
        let [x, y, z] = self.0;
        (x * x + y * y + z * z).sqrt()
    }

    pub fn dot(&self, n: [f64; 3]) -> f64 {
        self.0.iter().zip(n).map(|(a, b)| a * b).sum()
    }
}

/// Largest expectation of `sigma_n` on a site over all directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxExpectation {
    pub value: f64,
    /// Absent when `value` is below [`DEGENERATE_MAX`].
    pub direction: Option<Direction>,
    pub method: Method,
}

/// Lattice resolution for [`max_expectation_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSearch {
    pub coarse_steps: usize,
    pub refine_rounds: usize,
}

impl Default for GridSearch {
    fn default() -> Self {
        GridSearch {
            coarse_steps: 64,
            refine_rounds: 8,
        }
    }
}

fn site_dim(state: &PureState, site: usize) -> Result<usize> {
    state.check_site(site)?;
    Ok(state.dims()[site])
}

/// `Tr(rho_site sigma_n)`.
pub fn expectation_at(state: &PureState, site: usize, dir: Direction) -> Result<f64> {
    let d = site_dim(state, site)?;
    let rho = state.reduced_density(site)?;
    let obs = spin_direction_matrix(d, dir)?;
    Ok(rho.expect(&obs.matrix))
}

/// `<psi| I ⊗ sigma_n ⊗ I |psi>` evaluated with the full embedded matrix.
pub fn expectation_full_matrix(state: &PureState, site: usize, dir: Direction) -> Result<f64> {
    let d = site_dim(state, site)?;
    let obs = spin_direction_matrix(d, dir)?;
    let full = embed_at_site(&obs, state.dims(), site)?;
    let psi = nalgebra::DVector::from_column_slice(state.amplitudes());
    Ok(psi.dotc(&(full * &psi)).re)
}

pub fn spin_vector(state: &PureState, site: usize) -> Result<SpinVector> {
    let d = site_dim(state, site)?;
    let rho = state.reduced_density(site)?;
    Ok(spin_vector_of(&rho, d))
}

pub(crate) fn spin_vector_of(rho: &DensityMatrix, d: usize) -> SpinVector {
    let axes = spin_axis_matrices(d).expect("site dimension validated");
    SpinVector([rho.expect(&axes[0]), rho.expect(&axes[1]), rho.expect(&axes[2])])
}

pub fn max_expectation_analytic(state: &PureState, site: usize) -> Result<MaxExpectation> {
    let v = spin_vector(state, site)?;
    Ok(max_from_spin_vector(v))
}

pub(crate) fn max_from_spin_vector(v: SpinVector) -> MaxExpectation {
    let value = v.norm();
    let direction = if value >= DEGENERATE_MAX {
        Direction::from_vector(v.0)
    } else {
        None
    };
    MaxExpectation {
        value,
        direction,
        method: Method::Analytic,
    }
}

/// Brute-force maximization of [`expectation_at`] on a `theta x phi`
/// lattice, refined by repeatedly halving the window around the incumbent.
pub fn max_expectation_grid(
    state: &PureState,
    site: usize,
    coarse_steps: usize,
    refine_rounds: usize,
) -> Result<MaxExpectation> {
    if coarse_steps < 8 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 8 steps, got {coarse_steps}"
        )));
    }
    let d = site_dim(state, site)?;
    let rho = state.reduced_density(site)?;
    let mut obs = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    let objective = |theta: f64, phi: f64| {
        let dir = Direction::new(theta, phi).expect("lattice stays on the sphere");
        fill_spin_direction_matrix(&mut obs, dir);
        rho.expect(&obs)
    };
    let (value, theta, phi) = sphere_lattice_max(objective, coarse_steps, refine_rounds);
    let value = value.max(0.0);
    let direction = (value >= DEGENERATE_MAX).then(|| Direction::new(theta, phi).expect("on sphere"));
    Ok(MaxExpectation {
        value,
        direction,
        method: Method::Grid,
    })
}

// Returns (best value, theta, phi). Ties go to the lexicographically
// smallest (theta, phi).
fn sphere_lattice_max<F: FnMut(f64, f64) -> f64>(mut f: F, steps: usize, rounds: usize) -> (f64, f64, f64) {
    use std::f64::consts::{PI, TAU};

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let consider = |v: f64, t: f64, p: f64, best: &mut (f64, f64, f64)| {
        let better = v > best.0 || (v == best.0 && (t, p) < (best.1, best.2));
        if better {
            *best = (v, t, p);
        }
    };

    let dt = PI / (steps - 1) as f64;
    let dp = TAU / steps as f64;
    for i in 0..steps {
        let t = (i as f64 * dt).min(PI);
        for j in 0..steps {
            let p = j as f64 * dp;
            consider(f(t, p), t, p, &mut best);
        }
    }

    let (mut theta_width, mut phi_width) = (PI, TAU);
    for _ in 0..rounds {
        theta_width /= 2.0;
        phi_width /= 2.0;
        let lo = (best.1 - theta_width / 2.0).clamp(0.0, PI - theta_width);
        let p_lo = best.2 - phi_width / 2.0;
        let dt = theta_width / (steps - 1) as f64;
        let dp = phi_width / (steps - 1) as f64;
        let mut round_best = best;
        for i in 0..steps {
            let t = (lo + i as f64 * dt).clamp(0.0, PI);
            for j in 0..steps {
                let p = reduce_angle(p_lo + j as f64 * dp);
                consider(f(t, p), t, p, &mut round_best);
            }
        }
        best = round_best;
    }
    best
}

/// Direction along which a single-qubit state is the +1 eigenstate of
/// `sigma_n`: the direction of its Bloch vector.
pub fn find_eigen_direction(state: &PureState) -> Result<Direction> {
    if state.dims() != [2] {
        return Err(Error::InvalidArgument(format!(
            "eigen-direction needs a single qubit, got dims {:?}",
            state.dims()
        )));
    }
    let v = spin_vector(state, 0)?;
    Ok(Direction::from_vector(v.0).expect("pure qubit has a unit Bloch vector"))
}

/// Born probabilities of each eigenvalue of `sigma_n` on `site`, largest
/// eigenvalue first.
pub fn outcome_distribution(state: &PureState, site: usize, dir: Direction) -> Result<Vec<(i64, f64)>> {
    let d = site_dim(state, site)?;
    let rho = state.reduced_density(site)?;
    let obs = spin_direction_matrix(d, dir)?;
    let eig = SymmetricEigen::new(obs.matrix);
    let mut dist: Vec<(i64, f64)> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(&lambda, v)| {
            let p: Complex64 = v.dotc(&(rho.matrix() * v));
            (lambda.round() as i64, p.re.max(0.0))
        })
        .collect();
    dist.sort_by_key(|&(k, _)| std::cmp::Reverse(k));
    Ok(dist)
}

/// Outcome counts from [`sample_measurements`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleHistogram {
    /// `(eigenvalue, count)`, largest eigenvalue first; every eigenvalue is
    /// listed even when never drawn.
    pub counts: Vec<(i64, u64)>,
    pub shots: u64,
    pub mean: f64,
}

/// Simulated projective measurement of `sigma_n` on `site`, `shots` times.
/// The outcome sequence is a pure function of `seed`.
pub fn sample_measurements(
    state: &PureState,
    site: usize,
    dir: Direction,
    shots: u64,
    seed: u64,
) -> Result<SampleHistogram> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let dist = outcome_distribution(state, site, dir)?;
    let sampler = WeightedIndex::new(dist.iter().map(|&(_, p)| p))
        .map_err(|e| Error::InvalidArgument(format!("degenerate outcome distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..shots {
        counts[sampler.sample(&mut rng)] += 1;
    }
    let total: i64 = dist
        .iter()
        .zip(&counts)
        .map(|(&(lambda, _), &c)| lambda * c as i64)
        .sum();
    Ok(SampleHistogram {
        counts: dist.iter().map(|&(l, _)| l).zip(counts).collect(),
        shots,
        mean: total as f64 / shots as f64,
    })
}
