//! Separability index and entanglement measure.
//!
//! Each site contributes `alpha * |max<sigma> - eta|`, where `eta` is the
//! mean of the distinct eigenvalues the site takes across the state's basis
//! components and `alpha = l * lambda_max / sum_j |lambda_j - eta|` rescales
//! so that an unentangled site contributes `lambda_max = d - 1`. The index
//! `gamma` is the mean contribution and `E = lambda_max - gamma`.
//!
//! A site whose digit never changes across components is factored out of
//! the state and contributes exactly `lambda_max`; `eta` and `alpha` are
//! not evaluated for it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expectation::{
    max_expectation_analytic, max_expectation_grid, GridSearch, MaxExpectation, Method,
};
use crate::spin::eigenvalue_of_digit;
use crate::state::{parse_state, PureState};

pub const WARN_SEPARABLE_NONZERO: &str = "separable-nonzero-E";
pub const WARN_NEGATIVE: &str = "negative-E";

/// `|E|` above this on a product state, or `E` below its negative, raises a
/// warning.
pub const E_WARN_TOLERANCE: f64 = 1e-9;

/// Default pass threshold for [`corpus_verify`].
pub const CORPUS_TOLERANCE: f64 = 1e-9;

/// Eigenvalue bookkeeping of one site across the state's basis components.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteProfile {
    pub site: usize,
    /// Number of basis components of the whole state.
    pub l: usize,
    /// Ascending.
    pub distinct_eigenvalues: Vec<i64>,
    pub eta: f64,
    pub alpha: Option<f64>,
    pub factorable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteReport {
    pub profile: SiteProfile,
    pub max_expectation: MaxExpectation,
    /// This site's share of the `gamma` numerator.
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub dims: Vec<usize>,
    pub lambda_max: i64,
    pub gamma: f64,
    pub e: f64,
    pub sites: Vec<SiteReport>,
    pub method: Method,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeasureOptions {
    pub method: Method,
    pub grid: GridSearch,
}

impl MeasureOptions {
    pub fn analytic() -> Self {
        Self::default()
    }

    pub fn grid(grid: GridSearch) -> Self {
        MeasureOptions {
            method: Method::Grid,
            grid,
        }
    }
}

fn uniform_dim(state: &PureState) -> Result<usize> {
    state
        .uniform_dim()
        .ok_or_else(|| Error::HeterogeneousDims(state.dims().to_vec()))
}

pub fn site_profile(state: &PureState, site: usize) -> Result<SiteProfile> {
    let d = uniform_dim(state)?;
    state.check_site(site)?;
    let components = state.components();
    let l = components.len();
    let lambdas = components
        .iter()
        .map(|c| eigenvalue_of_digit(d, c.digits[site]))
        .collect::<Result<Vec<i64>>>()?;
    let distinct: BTreeSet<i64> = lambdas.iter().copied().collect();
    let distinct_eigenvalues: Vec<i64> = distinct.into_iter().collect();
    let factorable = distinct_eigenvalues.len() == 1;

    if factorable {
        return Ok(SiteProfile {
            site,
            l,
            distinct_eigenvalues,
            eta: 0.0,
            alpha: None,
            factorable,
        });
    }

    // eta over distinct eigenvalues, alpha's denominator over all components
    let eta = distinct_eigenvalues.iter().sum::<i64>().abs() as f64 / distinct_eigenvalues.len() as f64;
    let spread: f64 = lambdas.iter().map(|&lam| (lam as f64 - eta).abs()).sum();
    if spread == 0.0 {
        return Err(Error::AlphaUndefined { site });
    }
    let alpha = (l as f64) * (d - 1) as f64 / spread;
    Ok(SiteProfile {
        site,
        l,
        distinct_eigenvalues,
        eta,
        alpha: Some(alpha),
        factorable,
    })
}

fn check_measurable(state: &PureState) -> Result<usize> {
    let d = uniform_dim(state)?;
    if state.num_sites() < 2 {
        return Err(Error::TooFewSites(state.num_sites()));
    }
    Ok(d)
}

fn site_report(state: &PureState, site: usize, d: usize, opts: &MeasureOptions) -> Result<SiteReport> {
    let profile = site_profile(state, site)?;
    let max_expectation = match opts.method {
        Method::Analytic => max_expectation_analytic(state, site)?,
        Method::Grid => max_expectation_grid(state, site, opts.grid.coarse_steps, opts.grid.refine_rounds)?,
    };
    let term = match profile.alpha {
        None => (d - 1) as f64,
        Some(alpha) => alpha * (max_expectation.value - profile.eta).abs(),
    };
    Ok(SiteReport {
        profile,
        max_expectation,
        term,
    })
}

/// The separability index with its per-site breakdown.
pub fn gamma(state: &PureState, opts: &MeasureOptions) -> Result<(f64, Vec<SiteReport>)> {
    let d = check_measurable(state)?;
    let sites = (0..state.num_sites())
        .map(|s| site_report(state, s, d, opts))
        .collect::<Result<Vec<_>>>()?;
    let gamma = sites.iter().map(|s| s.term).sum::<f64>() / sites.len() as f64;
    Ok((gamma, sites))
}

/// `E = (d - 1) - gamma`, unclamped, with diagnostic warnings.
pub fn entanglement(state: &PureState, opts: &MeasureOptions) -> Result<MeasureReport> {
    let d = check_measurable(state)?;
    let (gamma, sites) = gamma(state, opts)?;
    let lambda_max = d as i64 - 1;
    let e = lambda_max as f64 - gamma;

    let mut warnings = Vec::new();
    if state.product_check().fully_product() && e.abs() > E_WARN_TOLERANCE {
        warnings.push(WARN_SEPARABLE_NONZERO.to_string());
    }
    if e < -E_WARN_TOLERANCE {
        warnings.push(WARN_NEGATIVE.to_string());
    }
    Ok(MeasureReport {
        dims: state.dims().to_vec(),
        lambda_max,
        gamma,
        e,
        sites,
        method: opts.method,
        warnings,
    })
}

/// A state expression with its expected entanglement.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub expr: String,
    pub dim: Option<usize>,
    pub expected_e: f64,
    pub source: String,
}

impl CorpusEntry {
    pub fn new(expr: &str, dim: Option<usize>, expected_e: f64, source: &str) -> Self {
        CorpusEntry {
            expr: expr.to_string(),
            dim,
            expected_e,
            source: source.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusVerdict {
    pub entry: CorpusEntry,
    /// The computed `E`, or why it could not be computed.
    pub computed: std::result::Result<f64, Error>,
    pub diff: f64,
    pub pass: bool,
}

pub fn verify_entry(entry: &CorpusEntry, opts: &MeasureOptions, tolerance: f64) -> CorpusVerdict {
    let computed = parse_state(&entry.expr, entry.dim)
        .and_then(|p| entanglement(&p.state, opts))
        .map(|r| r.e);
    let diff = match &computed {
        Ok(e) => (e - entry.expected_e).abs(),
        Err(_) => f64::INFINITY,
    };
    CorpusVerdict {
        entry: entry.clone(),
        computed,
        diff,
        pass: diff <= tolerance,
    }
}

pub fn corpus_verify(entries: &[CorpusEntry], opts: &MeasureOptions) -> Vec<CorpusVerdict> {
    entries
        .iter()
        .map(|e| verify_entry(e, opts, CORPUS_TOLERANCE))
        .collect()
}

/// Hand-checked reference states on qubits, qutrits and ququarts.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry::new("1/sqrt(2)|01> + 1/sqrt(2)|10>", None, 1.0, "Bell state, zero spin expectations"),
        CorpusEntry::new("1/2|00> + 1/2|01> + 1/2|10> + 1/2|11>", None, 0.0, "plus-plus product state"),
        CorpusEntry::new("1/2|00> + sqrt(3)/2|11>", None, 0.5, "unequal two-qubit Schmidt pair"),
        CorpusEntry::new("1/sqrt(5)|011> + 2/sqrt(5)|100>", None, 0.4, "three-qubit |011>,|100> superposition"),
        CorpusEntry::new("1/2|02> + sqrt(3)/2|20>", Some(3), 1.0, "qutrit pair, |02>,|20>"),
        CorpusEntry::new("1/2|01> + sqrt(3)/2|20>", Some(3), 1.0, "qutrit pair, |01>,|20>"),
        CorpusEntry::new("1/sqrt(3)|00> + 1/sqrt(3)|11> + 1/sqrt(3)|22>", Some(3), 2.0, "qutrit GHZ"),
        CorpusEntry::new("1/sqrt(3)|00> + 1/sqrt(2)|11> + 1/sqrt(6)|20>", Some(3), 1.75, "qutrit pair with a repeated eigenvalue"),
        CorpusEntry::new("1/sqrt(5)|01> + 2/sqrt(5)|10>", Some(4), 1.2, "ququart pair, |01>,|10>"),
        CorpusEntry::new("1/sqrt(5)|03> + 2/sqrt(5)|30>", Some(4), 1.2, "ququart pair, |03>,|30>"),
        CorpusEntry::new("1/sqrt(5)|12> + 2/sqrt(5)|21>", Some(4), 1.2, "ququart pair, |12>,|21>"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn parse(e: &str, dim: Option<usize>) -> PureState {
        parse_state(e, dim).unwrap().state
    }

    fn measure(e: &str, dim: Option<usize>) -> MeasureReport {
        entanglement(&parse(e, dim), &MeasureOptions::analytic()).unwrap()
    }

    #[test]
    fn profile_with_repeated_eigenvalues() {
        let s = parse("1/sqrt(3)|00> + 1/sqrt(2)|11> + 1/sqrt(6)|20>", None);
        let p = site_profile(&s, 1).unwrap();
        assert_eq!(p.l, 3);
        assert_eq!(p.distinct_eigenvalues, vec![0, 2]);
        assert_eq!(p.eta, 1.0);
        assert_eq!(p.alpha, Some(2.0));
        assert!(!p.factorable);

        let p = site_profile(&s, 0).unwrap();
        assert_eq!(p.distinct_eigenvalues, vec![-2, 0, 2]);
        assert_eq!(p.eta, 0.0);
        assert_eq!(p.alpha, Some(1.5));
    }

    #[test]
    fn profile_ququart_and_qubit() {
        let s = parse("1/sqrt(5)|01> + 2/sqrt(5)|10>", Some(4));
        let p = site_profile(&s, 0).unwrap();
        assert_eq!((p.eta, p.alpha), (2.0, Some(3.0)));

        let bell = parse("1/sqrt(2)|01> + 1/sqrt(2)|10>", None);
        let p = site_profile(&bell, 0).unwrap();
        assert_eq!(p.distinct_eigenvalues, vec![-1, 1]);
        assert_eq!((p.eta, p.alpha), (0.0, Some(1.0)));
    }

    #[test]
    fn factorable_short_circuit() {
        let s = parse("1/sqrt(3)|10> + 1/sqrt(3)|11> + 1/sqrt(3)|12>", None);
        let p = site_profile(&s, 0).unwrap();
        assert!(p.factorable);
        assert_eq!((p.eta, p.alpha), (0.0, None));

        // qutrit pinned at |1>: the general formula would divide by zero
        let pinned = parse("1/sqrt(2)|10> + 1/sqrt(2)|12>", None);
        let r = measure("1/sqrt(2)|10> + 1/sqrt(2)|12>", None);
        assert!(site_profile(&pinned, 0).unwrap().factorable);
        assert_eq!(r.sites[0].term, 2.0);
        // (|0>+|2>)/sqrt(2) on site 2 has a zero spin vector, so this product
        // state still scores E = 1
        assert_eq!(r.e, 1.0);
        assert_eq!(r.warnings, vec![WARN_SEPARABLE_NONZERO]);
    }

    #[test]
    fn heterogeneous_and_single_site_rejected() {
        let amps = vec![Complex64::new(1.0, 0.0); 6];
        let s = PureState::new(vec![2, 3], amps).unwrap();
        assert!(matches!(site_profile(&s, 0), Err(Error::HeterogeneousDims(_))));
        assert!(matches!(
            entanglement(&s, &MeasureOptions::analytic()),
            Err(Error::HeterogeneousDims(_))
        ));
        assert_eq!(
            entanglement(&parse("|0>", None), &MeasureOptions::analytic()).unwrap_err(),
            Error::TooFewSites(1)
        );
    }

    #[test]
    fn gamma_examples() {
        let opts = MeasureOptions::analytic();
        let (g, _) = gamma(&parse("1/sqrt(2)|01> + 1/sqrt(2)|10>", None), &opts).unwrap();
        assert!(g.abs() < 1e-12);
        let (g, _) = gamma(&parse("1/2|00> + 1/2|01> + 1/2|10> + 1/2|11>", None), &opts).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        let (g, sites) = gamma(&parse("1/sqrt(5)|011> + 2/sqrt(5)|100>", None), &opts).unwrap();
        assert!((g - 0.6).abs() < 1e-12);
        assert_eq!(sites.len(), 3);
    }

    #[test]
    fn entanglement_examples() {
        assert!((measure("1/2|00> + sqrt(3)/2|11>", None).e - 0.5).abs() < 1e-12);
        assert!((measure("1/sqrt(3)|00> + 1/sqrt(3)|11> + 1/sqrt(3)|22>", None).e - 2.0).abs() < 1e-12);
        assert!((measure("1/sqrt(3)|00> + 1/sqrt(2)|11> + 1/sqrt(6)|20>", None).e - 1.75).abs() < 1e-12);

        let r = measure("|00>", None);
        assert_eq!(r.e, 0.0);
        assert!(r.warnings.is_empty());

        let r = measure("1/sqrt(3)|10> + 1/sqrt(3)|11> + 1/sqrt(3)|12>", None);
        assert!((r.e - (1.0 - 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(r.warnings, vec![WARN_SEPARABLE_NONZERO, WARN_NEGATIVE]);
    }

    #[test]
    fn grid_method_matches_analytic_on_examples() {
        let opts = MeasureOptions::grid(GridSearch::default());
        let r = entanglement(&parse("1/2|01> + sqrt(3)/2|20>", None), &opts).unwrap();
        assert_eq!(r.method, Method::Grid);
        assert!((r.e - 1.0).abs() < 1e-6);
    }

    #[test]
    fn corpus_verdicts() {
        let verdicts = corpus_verify(&builtin_corpus(), &MeasureOptions::analytic());
        assert_eq!(verdicts.len(), 11);
        for v in &verdicts {
            assert!(v.pass, "{} -> {:?}", v.entry.expr, v.computed);
        }

        let wrong = CorpusEntry::new("1/2|00> + sqrt(3)/2|11>", None, 0.51, "perturbed");
        let v = corpus_verify(&[wrong], &MeasureOptions::analytic());
        assert!(!v[0].pass);
        assert!((v[0].diff - 0.01).abs() < 1e-12);

        let broken = CorpusEntry::new("|0", None, 0.0, "unparseable");
        let v = corpus_verify(&[broken], &MeasureOptions::analytic());
        assert!(!v[0].pass && v[0].computed.is_err());

        assert!(corpus_verify(&[], &MeasureOptions::analytic()).is_empty());
    }
}
