//! Process-wide high-water mark of polynomial sizes, for expression-swell tracking.

use std::sync::atomic::{AtomicUsize, Ordering};

static PEAK_TERMS: AtomicUsize = AtomicUsize::new(0);

pub(crate) fn record_terms(n: usize) {
    PEAK_TERMS.fetch_max(n, Ordering::Relaxed);
}

/// Largest term count of any polynomial built by collection since the last reset.
pub fn peak_terms() -> usize {
    PEAK_TERMS.load(Ordering::Relaxed)
}

pub fn reset_peak_terms() {
    PEAK_TERMS.store(0, Ordering::Relaxed);
}
