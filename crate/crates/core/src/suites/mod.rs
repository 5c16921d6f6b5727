//! Verification suites behind the CLI. Each suite returns a [`SuiteReport`].

mod hemispheres;
mod horolinks;
mod morse;
pub mod report;
mod twin_metric;
mod zonotopes;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactgeom::{RationalVector, Q};
pub use report::{canonical, has_float, Case, CaseRecord, Status, SuiteConfig, SuiteReport};

pub const SUITES: [&str; 5] = ["zonotopes", "horolinks", "hemispheres", "morse", "twin-metric"];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let (cases, summary) = match name {
        "zonotopes" => zonotopes::run(cfg)?,
        "horolinks" => horolinks::run(cfg)?,
        "hemispheres" => hemispheres::run(cfg)?,
        "morse" => morse::run(cfg)?,
        "twin-metric" => twin_metric::run(cfg)?,
        other => return Err(SuiteError::Usage(format!("unknown suite `{other}`, expected one of {}", SUITES.join(", ")))),
    };
    Ok(SuiteReport { suite: name.to_string(), config: cfg.to_json(), cases, summary, elapsed_ms: None })
}

/// Same as [`run_suite`] with the wall time recorded in the report.
pub fn run_suite_timed(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    let mut r = run_suite(name, cfg)?;
    r.elapsed_ms = Some(start.elapsed().as_millis());
    Ok(r)
}

type SuiteOutput = Result<(Vec<CaseRecord>, serde_json::Value), SuiteError>;

/// Independent stream per purpose so that adding checks to one case leaves the others unchanged.
pub(crate) fn stream(seed: u64, salt: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in salt.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub(crate) fn rand_q(rng: &mut impl Rng, bound: i64, den: i64) -> Q {
    Q::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=den).into())
}

pub(crate) fn rand_vec(rng: &mut impl Rng, dim: usize, bound: i64, den: i64) -> RationalVector {
    RationalVector::new((0..dim).map(|_| rand_q(rng, bound, den)).collect())
}

pub(crate) fn parse_kind(cfg: &SuiteConfig, default: &str) -> Result<crate::coxcomplex::AffineType, SuiteError> {
    let s = cfg.kind.as_deref().unwrap_or(default);
    crate::coxcomplex::AffineType::parse(s).map_err(|e| SuiteError::Usage(e.to_string()))
}
