use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use thiserror::Error;

use super::{InvalidDistribution, NliDistribution};

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("backend returned HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed backend response: {0}")]
    Decode(String),
    #[error("backend returned {got} results for {expected} pairs")]
    Shape { expected: usize, got: usize },
    #[error(transparent)]
    InvalidDistribution(#[from] InvalidDistribution),
    #[error("no table entry for premise {premise:?} / hypothesis {hypothesis:?}")]
    MissingPair { premise: String, hypothesis: String },
}

/// One (premise, hypothesis) pair. The premise is always the complex
/// sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NliPair<'a> {
    pub premise: &'a str,
    pub hypothesis: &'a str,
}

/// Anything that maps NLI pairs to label distributions.
///
/// Implementations return exactly one distribution per input pair, in
/// input order.
pub trait ClassifierBackend: Sync {
    fn classify_batch(&self, pairs: &[NliPair<'_>]) -> Result<Vec<NliDistribution>, BackendError>;

    /// Identifier recorded in run manifests.
    fn describe(&self) -> String;
}

impl<B: ClassifierBackend + ?Sized> ClassifierBackend for &B {
    fn classify_batch(&self, pairs: &[NliPair<'_>]) -> Result<Vec<NliDistribution>, BackendError> {
        (**self).classify_batch(pairs)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<B: ClassifierBackend + ?Sized> ClassifierBackend for Box<B> {
    fn classify_batch(&self, pairs: &[NliPair<'_>]) -> Result<Vec<NliDistribution>, BackendError> {
        (**self).classify_batch(pairs)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Request batching for [`classify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BatchConfig {
    /// Pairs per backend call.
    pub batch_size: usize,
    /// Backend calls in flight at once.
    pub concurrency: usize,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            batch_size: 32,
            concurrency: 4,
        }
    }
}

fn checked_batch(
    backend: &dyn ClassifierBackend,
    batch: &[NliPair<'_>],
) -> Result<Vec<NliDistribution>, BackendError> {
    let out = backend.classify_batch(batch)?;
    if out.len() != batch.len() {
        return Err(BackendError::Shape {
            expected: batch.len(),
            got: out.len(),
        });
    }
    Ok(out)
}

type BatchResult = Result<Vec<NliDistribution>, BackendError>;

/// Classifies `pairs` in batches, up to `config.concurrency` at a time.
///
/// The result is position-aligned with `pairs` regardless of the order in
/// which batches complete. On failure the error of the earliest failing
/// batch is returned.
pub fn classify_all(
    backend: &dyn ClassifierBackend,
    pairs: &[NliPair<'_>],
    config: &BatchConfig,
) -> Result<Vec<NliDistribution>, BackendError> {
    let batch_size = config.batch_size.max(1);
    let batches: Vec<&[NliPair<'_>]> = pairs.chunks(batch_size).collect();
    let workers = config.concurrency.max(1).min(batches.len());
    if workers <= 1 {
        let mut out = Vec::with_capacity(pairs.len());
        for batch in batches {
            out.extend(checked_batch(backend, batch)?);
        }
        return Ok(out);
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<BatchResult>>> =
        Mutex::new((0..batches.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(batch) = batches.get(i) else { break };
                let result = checked_batch(backend, batch);
                let failed = result.is_err();
                slots.lock().expect("slot lock")[i] = Some(result);
                if failed {
                    // stop handing out new batches
                    next.fetch_max(batches.len(), Ordering::Relaxed);
                }
            });
        }
    });

    let mut out = Vec::with_capacity(pairs.len());
    for slot in slots.into_inner().expect("slot lock") {
        match slot {
            Some(Ok(batch)) => out.extend(batch),
            Some(Err(e)) => return Err(e),
            // only reachable after an earlier failure stopped the workers
            None => continue,
        }
    }
    Ok(out)
}
