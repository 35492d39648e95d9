//! Numerical tolerances, centralized so every module and test agrees on them.

/// Column orthonormality of a synthesis block: ||B^H B - I||_max.
pub const TOL_ORTH: f64 = 1e-10;

/// Largest imaginary part a real-tagged frame may carry before hard-zeroing.
pub const TOL_REAL: f64 = 1e-10;

/// Default verification tolerance; scaled inside `verify` by max(1, ||Phi||_F^2).
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;

/// Character orthogonality and Poisson-summation identities (entries are
/// roots of unity; double precision leaves ~1e-15 slack at order <= 64).
pub const TOL_FOURIER: f64 = 1e-12;

/// Convolution theorem, relative error on random vectors.
pub const TOL_CONV_REL: f64 = 1e-10;

/// Harmonic Gram entry identities.
pub const TOL_GRAM: f64 = 1e-10;

/// Closed-form cross-Gram spectra vs dense SVD moduli.
pub const TOL_SPECTRUM: f64 = 1e-9;

/// Principal-angle zero-padding relation between spatial complements.
pub const TOL_ANGLE_PAD: f64 = 1e-8;
