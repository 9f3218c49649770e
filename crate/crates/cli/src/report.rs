//! Serializable documents emitted under `--json`, and the corpus line
//! format read by `corpus`.

use serde::{Deserialize, Serialize};
use spinent::{CorpusEntry, Direction, MeasureReport, SampleHistogram};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionDoc {
    pub theta: f64,
    pub phi: f64,
}

impl From<Direction> for DirectionDoc {
    fn from(d: Direction) -> Self {
        DirectionDoc {
            theta: d.theta(),
            phi: d.phi(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteDoc {
    /// 1-based.
    pub site: usize,
    pub l: usize,
    pub distinct_eigenvalues: Vec<i64>,
    pub eta: f64,
    pub alpha: Option<f64>,
    pub factorable: bool,
    pub max_expectation: f64,
    pub direction: Option<DirectionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input: String,
    pub dims: Vec<usize>,
    pub lambda_max: i64,
    pub method: String,
    pub sites: Vec<SiteDoc>,
    pub gamma: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub warnings: Vec<String>,
    pub version: String,
    pub elapsed_seconds: f64,
}

impl ReportDocument {
    pub fn new(input: &str, report: &MeasureReport, warnings: Vec<String>, elapsed_seconds: f64) -> Self {
        let sites = report
            .sites
            .iter()
            .map(|s| SiteDoc {
                site: s.profile.site + 1,
                l: s.profile.l,
                distinct_eigenvalues: s.profile.distinct_eigenvalues.clone(),
                eta: s.profile.eta,
                alpha: s.profile.alpha,
                factorable: s.profile.factorable,
                max_expectation: s.max_expectation.value,
                direction: s.max_expectation.direction.map(DirectionDoc::from),
            })
            .collect();
        ReportDocument {
            input: input.to_string(),
            dims: report.dims.clone(),
            lambda_max: report.lambda_max,
            method: report.method.to_string(),
            sites,
            gamma: report.gamma,
            e: report.e,
            warnings,
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountDoc {
    pub eigenvalue: i64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDocument {
    pub input: String,
    pub site: usize,
    pub theta: f64,
    pub phi: f64,
    pub shots: u64,
    pub seed: u64,
    pub counts: Vec<CountDoc>,
    pub mean: f64,
}

impl SampleDocument {
    pub fn new(input: &str, site: usize, dir: Direction, seed: u64, h: &SampleHistogram) -> Self {
        SampleDocument {
            input: input.to_string(),
            site,
            theta: dir.theta(),
            phi: dir.phi(),
            shots: h.shots,
            seed,
            counts: h
                .counts
                .iter()
                .map(|&(eigenvalue, count)| CountDoc { eigenvalue, count })
                .collect(),
            mean: h.mean,
        }
    }
}

/// One line of a corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusLine {
    pub expr: String,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(rename = "expected_E")]
    pub expected_e: f64,
    #[serde(default)]
    pub source: String,
}

impl From<CorpusLine> for CorpusEntry {
    fn from(l: CorpusLine) -> Self {
        CorpusEntry {
            expr: l.expr,
            dim: l.dim,
            expected_e: l.expected_e,
            source: l.source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub expr: String,
    pub dim: Option<usize>,
    pub source: String,
    pub expected: f64,
    pub computed: Option<f64>,
    pub error: Option<String>,
    pub diff: Option<f64>,
    pub pass: bool,
}
