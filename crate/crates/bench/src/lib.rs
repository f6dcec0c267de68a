//! Fixtures shared by the solver benchmarks.

use microswim::squirmer::{normalize_spectrum, optimal_spectrum, ModeSpectrum};

/// The k = p = 10 spectrum at ε = 0.05, normalized on a 1 µm sphere.
pub fn reference_spectrum() -> ModeSpectrum {
    let spec = optimal_spectrum(10, 10).expect("valid mode range").with_scale(0.05, 1.0);
    normalize_spectrum(&spec, 1e-6).expect("nonzero spectrum")
}
