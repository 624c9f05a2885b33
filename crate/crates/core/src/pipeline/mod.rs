//! Classification driver: class catalog, per-class runs over ℚ or ℚ(λ),
//! verification of the final model tables, and reports.

pub mod catalog;
pub mod models;
pub mod report;
mod run;

use crate::cartan::CartanError;
use crate::exactmath::MathError;
use crate::kuranishi::KuranishiError;
use crate::liealg::LieError;

pub use catalog::{enumerate_classes, resolve_class, special_points, ClassDescriptor, Expected, ExpectedComponent, ProjPoint};
pub use models::{load_models, verify_model, verify_models, ModelRecord, ModelTable};
pub use report::{audit, check_expected, emit_report, Document, Format};
pub use run::{
    classify_all, run_class, run_family, ClassField, Prepared, specialization_check, torus_weights, ClassReport, ComponentReport,
    CoordinateReport, SpecializationSample, Verdict,
};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Kuranishi(#[from] KuranishiError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("model data: {0}")]
    Model(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Worker count from `C3_WORKERS`; 1 when unset or invalid.
pub fn workers() -> usize {
    std::env::var("C3_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// `items.map(f)` in input order, on a pool of `n` threads when the
/// `parallel` feature is enabled and `n > 1`.
pub fn map_with_workers<T, R, F>(items: Vec<T>, n: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if n > 1 {
        use rayon::prelude::*;
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            return pool.install(|| items.into_par_iter().map(&f).collect());
        }
    }
    let _ = n;
    items.into_iter().map(f).collect()
}
