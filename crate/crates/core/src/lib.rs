//! Real-rootedness of the polynomials generated by
//! `P_n = z P_{n-1} + α P_{n-2} + β P_{n-3} + γ P_{n-4}`, equivalently reality of the
//! spectra of banded Toeplitz matrices with symbol `b(z) = -1/z + αz - βz² + γz³`.
//!
//! [`classifier::classify`] decides the question exactly from discriminant signs;
//! the remaining modules supply independent numerical witnesses: roots of `P_n`,
//! eigenvalues of `T_n(b)`, the limiting set of those spectra, and closed curves in
//! the level set `Im b = 0`.

pub mod classifier;
pub mod eigen;
pub mod error;
pub mod field;
pub mod netcurve;
pub mod params;
pub mod poly;
pub mod quartic;
pub mod recurrence;
pub mod rect;
pub mod roots;
pub mod toeplitz;
pub mod verify;

pub use error::{Error, Result};
pub use field::{parse_scalar, Field, ParsedScalar, Rational};
pub use params::{ExactParams, SymbolParams};
pub use poly::{discriminant, resultant, ComplexPoly, Poly, RationalPoly, RealPoly};
pub use quartic::{quartic_character, quartic_discriminant};
pub use recurrence::{generate_pn, generate_pn_exact, generate_sequence, PnEvaluator};
pub use rect::Rect;
pub use roots::{find_roots, find_roots_with, is_real_rooted, is_real_rooted_with, RootPattern, RootSet};
pub use toeplitz::{
    build_tn, build_tn_exact, eigenvalues, eigenvalues_dense, limiting_set, BandedToeplitz, GapMetric,
    LimitingSetSample, SpectrumMethod, SpectrumResult,
};
