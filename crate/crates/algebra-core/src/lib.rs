//! Exact arithmetic kernel: arbitrary-precision rationals, scalars in a single
//! quadratic extension Q(sqrt(m)), sparse multivariate polynomials with
//! role-tagged variables, exact linear algebra, univariate factorization over Q,
//! and the 3x3 eigenproblem with generalized chains.

pub mod eigen;
pub mod factor;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use eigen::{eigen_3x3, Chain, EigenClass, EigenStructure};
pub use factor::{factor_univariate, rational_roots, UniFactor, UniFactorization};
pub use matrix::{det_poly, solve_linear, LinearSolution, Matrix};
pub use poly::{cmp_monomials, MultiPoly, Role, VarTable};
pub use rational::{rat, rat_int, Rational};
pub use scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("polynomial {0} is not univariate in {1}")]
    NotUnivariate(String, String),
    #[error("operation requires rational coefficients, found radical coefficient {0}")]
    NonRationalCoeffs(String),
    #[error("radicand {0} exceeds the factorization bound for exact square-free extraction")]
    RadicandTooLarge(String),
    #[error("characteristic polynomial {0} is an irreducible cubic; eigenvalues leave every quadratic extension of Q (unsupported)")]
    IrreducibleCubic(String),
    #[error("eigen computation requires a 3x3 matrix, got {0}x{1}")]
    NotThreeByThree(usize, usize),
    #[error("matrix entries must be rational for the characteristic polynomial, found {0}")]
    NonRationalMatrix(String),
    #[error("division by zero {0}")]
    DivisionByZero(&'static str),
    #[error("coefficients of {0} are too large for exact rational root enumeration")]
    RootEnumerationInfeasible(String),
}
