//! Entanglement of pure multi-qudit states from maximal expectation values
//! of spin-direction observables.
//!
//! For each site the largest achievable `<sigma_n>` over directions `n` is
//! found; for a product state every site reaches the top eigenvalue
//! `d - 1`, and entanglement pulls these maxima toward the mean eigenvalue.
//! The averaged, calibrated maxima form the separability index `gamma`, and
//! `E = (d - 1) - gamma`.
//!
//! ```
//! use spinent::{entanglement, parse_state, MeasureOptions};
//!
//! let state = parse_state("1/2|00> + sqrt(3)/2|11>", None).unwrap().state;
//! let report = entanglement(&state, &MeasureOptions::analytic()).unwrap();
//! assert!((report.e - 0.5).abs() < 1e-12);
//! ```
//!
//! Sites are indexed from 0 throughout the library.

pub mod error;
pub mod expectation;
pub mod measure;
pub mod spin;
pub mod state;

pub use error::{Error, Result};
pub use expectation::{
    expectation_at, expectation_full_matrix, find_eigen_direction, max_expectation_analytic,
    max_expectation_grid, outcome_distribution, sample_measurements, spin_vector, GridSearch,
    MaxExpectation, Method, SampleHistogram, SpinVector,
};
pub use measure::{
    builtin_corpus, corpus_verify, entanglement, gamma, site_profile, verify_entry, CorpusEntry,
    CorpusVerdict, MeasureOptions, MeasureReport, SiteProfile, SiteReport,
};
pub use spin::{
    eigenvalue_of_digit, embed_at_site, spin_axis_matrices, spin_direction_matrix, Direction,
    SpinObservable,
};
pub use state::{
    parse_state, render_state, BasisComponent, DensityMatrix, ParsedState, ProductCheck, PureState,
};
