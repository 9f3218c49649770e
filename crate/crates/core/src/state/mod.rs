//! Pure multi-qudit states, their basis components and single-site
//! reductions.
//!
//! Amplitudes are stored in the computational basis with site 0 as the most
//! significant digit: `|abc>` lives at index `a*d1*d2 + b*d2 + c`.

mod parse;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use parse::{parse_state, render_state, ParsedState, WARN_RENORMALIZED};

/// Amplitudes with modulus at or below this are not components of a state.
pub const ZERO_AMPLITUDE: f64 = 1e-12;

/// Largest amplitude vector accepted.
pub const MAX_AMPLITUDES: usize = 1_000_000;

/// Purity at or above `1 - PURITY_TOLERANCE` marks a site as unentangled.
pub const PURITY_TOLERANCE: f64 = 1e-9;

pub(crate) fn checked_size(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("a state needs at least one site".into()));
    }
    let mut size = 1usize;
    for &d in dims {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        size = size
            .checked_mul(d)
            .filter(|&s| s <= MAX_AMPLITUDES)
            .ok_or(Error::TooLarge {
                size: usize::MAX,
                cap: MAX_AMPLITUDES,
            })?;
    }
    Ok(size)
}

/// A normalized pure state over sites with local dimensions `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

/// One nonzero term `coefficient * |digits>` of a state's basis expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisComponent {
    pub digits: Vec<usize>,
    pub coefficient: Complex64,
}

impl PureState {
    /// Builds a state, normalizing the amplitudes.
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::normalize(dims, amplitudes).map(|(s, _)| s)
    }

    /// Like [`PureState::new`], also returning the norm of the input vector.
    pub fn normalize(dims: Vec<usize>, mut amplitudes: Vec<Complex64>) -> Result<(Self, f64)> {
        let size = checked_size(&dims)?;
        if amplitudes.len() != size {
            return Err(Error::LengthMismatch {
                expected: size,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        if norm <= ZERO_AMPLITUDE {
            return Err(Error::ZeroVector);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok((PureState { dims, amplitudes }, norm))
    }

    /// The product state `|k_0 k_1 ...>`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let size = checked_size(&dims)?;
        if digits.len() != dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{} digits given for {} sites",
                digits.len(),
                dims.len()
            )));
        }
        let mut idx = 0;
        for (&k, &d) in digits.iter().zip(&dims) {
            if k >= d {
                return Err(Error::DigitOutOfRange { digit: k, dim: d });
            }
            idx = idx * d + k;
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims, amplitudes })
    }

    /// Tensor product of single-site states, site 0 first.
    pub fn product(factors: &[Vec<Complex64>]) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        checked_size(&dims)?;
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| f.iter().map(move |b| a * b))
                .collect();
        }
        Self::new(dims, amplitudes)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    /// The common local dimension, if every site has the same one.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site < self.dims.len() {
            Ok(())
        } else {
            Err(Error::SiteOutOfRange {
                site,
                sites: self.dims.len(),
            })
        }
    }

    /// Digits of basis index `idx`, site 0 first.
    pub fn digits_of(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = idx % d;
            idx /= d;
        }
        digits
    }

    /// Nonzero basis terms in ascending basis-index order.
    pub fn components(&self) -> Vec<BasisComponent> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > ZERO_AMPLITUDE)
            .map(|(idx, &a)| BasisComponent {
                digits: self.digits_of(idx),
                coefficient: a,
            })
            .collect()
    }

    /// Multiplies every amplitude by `phase`, which should have unit modulus.
    pub fn with_global_phase(&self, phase: Complex64) -> Self {
        PureState {
            dims: self.dims.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// Reorders sites: site `i` of the result is site `order[i]` of `self`.
    pub fn permute_sites(&self, order: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if order.len() != n || !order.iter().all(|&s| s < n && !std::mem::replace(&mut seen[s], true)) {
            return Err(Error::InvalidArgument(format!(
                "{order:?} is not a permutation of {n} sites"
            )));
        }
        let dims: Vec<usize> = order.iter().map(|&s| self.dims[s]).collect();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (idx, &a) in self.amplitudes.iter().enumerate() {
            let digits = self.digits_of(idx);
            let new_idx = order
                .iter()
                .zip(&dims)
                .fold(0, |acc, (&s, &d)| acc * d + digits[s]);
            amplitudes[new_idx] = a;
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Reduced density matrix of `site`, tracing out every other site.
    pub fn reduced_density(&self, site: usize) -> Result<DensityMatrix> {
        self.check_site(site)?;
        let d = self.dims[site];
        let inner: usize = self.dims[site + 1..].iter().product();
        let outer: usize = self.dims[..site].iter().product();
        let mut rho = DMatrix::<Complex64>::zeros(d, d);
        for o in 0..outer {
            for r in 0..inner {
                let base = o * d * inner + r;
                for a in 0..d {
                    let pa = self.amplitudes[base + a * inner];
                    if pa.norm_sqr() == 0.0 {
                        continue;
                    }
                    for b in 0..d {
                        rho[(a, b)] += pa * self.amplitudes[base + b * inner].conj();
                    }
                }
            }
        }
        Ok(DensityMatrix { entries: rho })
    }

    /// True iff every component carries the same digit at `site`.
    pub fn is_factorable_site(&self, site: usize) -> Result<bool> {
        self.check_site(site)?;
        let mut digits = self.components().into_iter().map(|c| c.digits[site]);
        let first = digits.next();
        Ok(digits.all(|k| Some(k) == first))
    }

    /// Purity test of every single-site reduction.
    pub fn product_check(&self) -> ProductCheck {
        let separable = (0..self.num_sites())
            .map(|s| {
                let rho = self.reduced_density(s).expect("site in range");
                rho.purity() >= 1.0 - PURITY_TOLERANCE
            })
            .collect();
        ProductCheck { separable }
    }
}

/// Per-site verdict of [`PureState::product_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCheck {
    /// `separable[i]` is set when site `i` is unentangled with the rest.
    pub separable: Vec<bool>,
}

impl ProductCheck {
    pub fn fully_product(&self) -> bool {
        self.separable.iter().all(|&s| s)
    }
}

/// Single-site density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr(rho * op)` for a Hermitian `op`, real part.
    pub fn expect(&self, op: &DMatrix<Complex64>) -> f64 {
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..d {
            for b in 0..d {
                acc += self.entries[(a, b)] * op[(b, a)];
            }
        }
        acc.re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn parse(e: &str) -> PureState {
        parse_state(e, None).unwrap().state
    }

    // Independent partial trace: enumerate every pair of full basis indices
    // and keep the pairs that agree off `site`.
    fn partial_trace_oracle(s: &PureState, site: usize) -> DMatrix<Complex64> {
        let d = s.dims()[site];
        let mut rho = DMatrix::zeros(d, d);
        let n = s.amplitudes().len();
        for i in 0..n {
            let di = s.digits_of(i);
            for j in 0..n {
                let dj = s.digits_of(j);
                let agree = (0..s.num_sites()).all(|k| k == site || di[k] == dj[k]);
                if agree {
                    rho[(di[site], dj[site])] += s.amplitudes()[i] * s.amplitudes()[j].conj();
                }
            }
        }
        rho
    }

    #[test]
    fn state_invariants_enforced() {
        assert!(matches!(PureState::new(vec![2, 1], vec![c(1.0); 2]), Err(Error::InvalidDimension(1))));
        assert!(matches!(PureState::new(vec![], vec![]), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            PureState::new(vec![2, 2], vec![c(1.0); 3]),
            Err(Error::LengthMismatch { expected: 4, found: 3 })
        ));
        assert!(matches!(PureState::new(vec![2], vec![c(0.0); 2]), Err(Error::ZeroVector)));
        assert!(matches!(PureState::new(vec![10; 7], vec![]), Err(Error::TooLarge { .. })));
        let s = PureState::new(vec![2, 3], vec![c(1.0); 6]).unwrap();
        let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn basis_ordering_site_zero_most_significant() {
        let s = parse("1/sqrt(2)|01> + 1/sqrt(2)|10>");
        let a: Vec<f64> = s.amplitudes().iter().map(|z| z.re).collect();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(a.len(), 4);
        assert!(a[0] == 0.0 && a[3] == 0.0);
        assert!((a[1] - h).abs() < 1e-15 && (a[2] - h).abs() < 1e-15);
        assert_eq!(PureState::basis(vec![2, 3, 4], &[1, 2, 3]).unwrap().amplitudes()[23], c(1.0));
    }

    #[test]
    fn components_of_named_states() {
        let bell = parse("1/sqrt(2)|01> + 1/sqrt(2)|10>");
        let comps = bell.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].digits, vec![0, 1]);
        assert_eq!(comps[1].digits, vec![1, 0]);
        for comp in &comps {
            assert!((comp.coefficient.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }

        assert_eq!(parse("|00>").components().len(), 1);
        let four = parse("1/2|02> + sqrt(3)/4|10> + sqrt(6)/4|20> + sqrt(2)/4|12>");
        assert_eq!(four.components().len(), 4);
    }

    #[test]
    fn reduced_density_examples() {
        let ex1 = parse("1/2|00> + sqrt(3)/2|11>");
        let rho = ex1.reduced_density(0).unwrap();
        let oracle = partial_trace_oracle(&ex1, 0);
        assert!((rho.matrix() - &oracle).norm() < 1e-15);
        assert!((rho.matrix()[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.75).abs() < 1e-15);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);

        let rho = parse("|00>").reduced_density(1).unwrap();
        assert_eq!(rho.matrix()[(0, 0)], c(1.0));
        assert_eq!(rho.matrix()[(1, 1)], c(0.0));

        let bell = parse("1/sqrt(2)|01> + 1/sqrt(2)|10>");
        let rho = bell.reduced_density(0).unwrap();
        assert!((rho.matrix() - partial_trace_oracle(&bell, 0)).norm() < 1e-15);
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);

        assert_eq!(bell.reduced_density(2).unwrap_err(), Error::SiteOutOfRange { site: 2, sites: 2 });
    }

    #[test]
    fn reduced_density_matches_oracle_on_mixed_dims() {
        let amps: Vec<Complex64> = (0..24)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let s = PureState::new(vec![2, 3, 4], amps).unwrap();
        for site in 0..3 {
            let rho = s.reduced_density(site).unwrap();
            assert!((rho.matrix() - partial_trace_oracle(&s, site)).norm() < 1e-14);
            assert!((rho.trace() - c(1.0)).norm() < 1e-12);
            assert!(rho.eigenvalues()[0] >= -1e-10);
        }
    }

    #[test]
    fn product_check_examples() {
        let sep = parse("1/sqrt(3)|10> + 1/sqrt(3)|11> + 1/sqrt(3)|12>");
        let pc = sep.product_check();
        assert_eq!(pc.separable, vec![true, true]);
        assert!(pc.fully_product());

        let bell = parse("1/sqrt(2)|01> + 1/sqrt(2)|10>");
        assert_eq!(bell.product_check().separable, vec![false, false]);

        let ex1 = parse("1/2|00> + sqrt(3)/2|11>");
        assert!((ex1.reduced_density(0).unwrap().purity() - 0.625).abs() < 1e-15);
        assert_eq!(ex1.product_check().separable, vec![false, false]);
    }

    #[test]
    fn factorable_sites() {
        let sep = parse("1/sqrt(3)|10> + 1/sqrt(3)|11> + 1/sqrt(3)|12>");
        assert!(sep.is_factorable_site(0).unwrap());
        assert!(!sep.is_factorable_site(1).unwrap());
        let bell = parse("1/sqrt(2)|01> + 1/sqrt(2)|10>");
        assert!(!bell.is_factorable_site(0).unwrap());
        let ghz = parse("1/sqrt(3)|00> + 1/sqrt(3)|11> + 1/sqrt(3)|22>");
        assert!(!ghz.is_factorable_site(1).unwrap());
        assert!(ghz.is_factorable_site(5).is_err());
    }

    #[test]
    fn permute_sites_moves_digits() {
        let s = PureState::basis(vec![2, 3, 4], &[1, 2, 3]).unwrap();
        let p = s.permute_sites(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        assert_eq!(p.components()[0].digits, vec![3, 1, 2]);
        assert!(s.permute_sites(&[0, 0, 1]).is_err());
    }
}
