//! Random search for injective measurement ensembles: generate integer
//! ensembles from a deterministic per-trial stream, certify each, and
//! collect the successes into a reproducible report.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{vinzant_certify, Certificate, CertifyConfig, MeasurementEnsemble, Verdict};
use crate::exactnum::Rational;
use crate::groebner::Limits;
use crate::linalg::Matrix;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub r: u32,
    pub symmetric: bool,
    pub m: usize,
    pub lo: i64,
    pub hi: i64,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip, default)]
    pub limits: Limits,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.lo > self.hi {
            return Err(SearchError::InvalidConfig(format!(
                "empty entry range [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.m == 0 {
            return Err(SearchError::InvalidConfig("m must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(SearchError::InvalidConfig(
                "trial count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Stream cipher RNG keyed by (seed, trial): platform-independent and
/// independent across trials.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// The ensemble of trial `trial`: m matrices with independent uniform
/// integer entries in [lo, hi], fully determined by (seed, trial).
pub fn random_ensemble(config: &SearchConfig, trial: u64) -> MeasurementEnsemble {
    config.validate().expect("valid config");
    let mut rng = trial_rng(config.seed, trial);
    let matrices = (0..config.m)
        .map(|_| {
            let data = (0..config.n * config.n)
                .map(|_| Rational::from_integer(rng.gen_range(config.lo..=config.hi).into()))
                .collect();
            Matrix::new(config.n, config.n, data)
        })
        .collect();
    MeasurementEnsemble::new(config.n, config.r, config.symmetric, matrices)
        .expect("generated ensembles are well-formed")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoundEnsemble {
    pub trial: u64,
    /// Ensemble in its file format, embedded verbatim.
    pub ensemble: serde_json::Value,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub injective: u64,
    pub fail: u64,
    pub indeterminate: u64,
    /// Reason text -> count, over FAIL and INDETERMINATE verdicts.
    pub reasons: BTreeMap<String, u64>,
    pub found: Vec<FoundEnsemble>,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Certify every trial; collect INJECTIVE ensembles verbatim (ordered by
/// trial index) and tally the rest.
pub fn search_minimal(config: &SearchConfig) -> Result<SearchReport, SearchError> {
    config.validate()?;
    let mut report = SearchReport {
        config: config.clone(),
        injective: 0,
        fail: 0,
        indeterminate: 0,
        reasons: BTreeMap::new(),
        found: Vec::new(),
    };
    let certify_config = CertifyConfig {
        limits: config.limits,
        ..CertifyConfig::default()
    };
    for trial in 0..config.trials {
        let e = random_ensemble(config, trial);
        let cert = match vinzant_certify(&e, &certify_config) {
            Ok(c) => c,
            Err(err) => {
                // invalid parameters surface on trial 0; count defensively
                report.indeterminate += 1;
                *report.reasons.entry(err.to_string()).or_insert(0) += 1;
                continue;
            }
        };
        match cert.verdict {
            Verdict::Injective => {
                report.injective += 1;
                let ensemble: serde_json::Value =
                    serde_json::from_str(&e.to_json()).expect("ensemble json is valid");
                report.found.push(FoundEnsemble {
                    trial,
                    ensemble,
                    certificate: cert,
                });
            }
            Verdict::Fail => {
                report.fail += 1;
                if let Some(r) = &cert.reason {
                    *report.reasons.entry(r.clone()).or_insert(0) += 1;
                }
            }
            Verdict::Indeterminate => {
                report.indeterminate += 1;
                if let Some(r) = &cert.reason {
                    *report.reasons.entry(r.clone()).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(report)
}
