//! Exact star-product calculus on complex projective space.
//!
//! The crate deforms the homogeneous coordinate ring of projective `n`-space
//! along a constant skew-symmetric matrix: a Weyl-type associative product
//! `#` on polynomials whose coefficients are Laurent polynomials in a formal
//! parameter `mu` over the Gaussian rationals. Everything is exact — big
//! rationals throughout, no floating point, no truncation other than the
//! caller-chosen order of the series in the auxiliary time variable `t`.
//!
//! The main layers, bottom to top:
//!
//! * [`scalar`], [`poly`] — Gaussian rationals, `mu`-Laurent scalars, and
//!   sparse multivariate polynomials with their canonical text form;
//! * [`star`] — the `#` product, commutators and brackets, and the
//!   validators for the skew matrix (Jacobi sum, iterated-bidifferential
//!   factorization);
//! * [`matrix`], [`series`] — exact matrices and truncated formal power
//!   series (scalar, matrix, polynomial valued) with Taylor-stream matrix
//!   functions;
//! * [`quadexp`] — star exponentials of quadratic forms: the brute-force
//!   series, the Cayley-linearized Riccati flow, the determinant amplitude,
//!   and the closed-form/oracle cross-checks;
//! * [`proj`] — the graded ring `Q[z0..zn]`, degree-zero localizations,
//!   chart families of sections and twist dimensions;
//! * [`twistor`] — the incidence substitution into the six-variable ring
//!   and its deformed commutation relations.

pub mod error;
pub mod matrix;
pub mod poly;
pub mod proj;
pub mod quadexp;
pub mod scalar;
pub mod series;
pub mod star;
pub mod twistor;
pub mod util;

pub use error::{Error, Result};
pub use matrix::{Matrix, SymMatrix};
pub use poly::{HomPoly, Monomial};
pub use proj::{alpha, chart_compatibility, h0_dimension, localize, GradedPoly, LocalFraction};
pub use quadexp::{
    amplitude_solve, cayley_exp_tan_identity, cayley_identity_checks, cayley_log_arctan_identity,
    cayley_matrix, cayley_series, closed_form_matches_series, evolution_residual, quad_form,
    riccati_solve, star_exp_closed_form, star_exp_poly_series, star_exp_series,
    sym_matrix_from_quadratic, ExpAnsatz, StarSide,
};
pub use scalar::{GaussRational, MuScalar};
pub use series::{MatrixSeries, PolySeries, ScalarSeries};
pub use star::{check_jacobi, check_lambda_relation, PoissonMatrix, StarContext};
pub use twistor::{incidence_pullback, IncidenceContext};
