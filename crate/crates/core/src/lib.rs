//! Sharp constants, spectral parabolas and numerical certification for
//! weighted Rellich, Hardy and Calderón–Zygmund inequalities on cones of
//! `R^N` with operators `Δ + c x·∇/|x|² − b/|x|²`.
//!
//! Every quotient is reduced to one dimension through the substitution
//! `s = log ρ`; profiles carry closed-form derivatives so that no numerical
//! differentiation enters a reported number.

pub mod constants;
pub mod error;
pub mod params;
pub mod parabola;
pub mod quadrature;
pub mod radial;
pub mod special;
pub mod sphere;
pub mod suites;
pub mod tensor;
pub mod verifier;
pub mod witness;

pub use num_complex::Complex64 as C64;

pub use constants::{
    best_constant, cz_validity, excluded_alphas, feller_quantities, gamma_p, harmonic_dim,
    kelvin_dual, lambda_n, omega_p, omega_p_plus, rellich_validity, ConstantEstimate,
    EstimateKind, Source, Validity,
};
pub use error::{Error, Result};
pub use params::{Domain, Exponent, ModeSet, ProblemParams};
pub use parabola::{dist_numeric, dist_to_parabola_closed, spectrum_distance, Parabola, SpectrumSet};
pub use quadrature::QuadratureSpec;
pub use radial::RadialProfile;
