//! Shared helpers for the integration test suites.

/// Van der Corput radical inverse in the given base.
pub fn halton(mut i: u32, base: u32) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Low-discrepancy `(n_p, a)` stream over the standard test ranges
/// `n_p` in `(0.05, 0.95)`, `a` in `(0.1, 20)`.
#[allow(dead_code)]
pub fn param_stream() -> impl Iterator<Item = (f64, f64)> {
    (1u32..).map(|i| (0.05 + 0.9 * halton(i, 2), 0.1 + 19.9 * halton(i, 3)))
}
