//! Verification of partial integrals of polynomial ODE systems.
//!
//! A partial integral is a function g whose derivative by virtue of the
//! system factors through g itself: Dg = g * M for a polynomial cofactor M
//! whose state degree stays below the system degree d. This crate checks
//! that criterion exactly, in each of the shapes the theory admits, and
//! reports the cofactors it extracts:
//!
//! * `Poly`        g = p                    Dp = p * M
//! * `Conditional` g = exp(p)               Dp = M
//! * `ExpRational` g = exp(q / p^h)         Dq = h*q*M + p^h * N
//! * `ExpArctan`   g = exp(arctan(v / u))   Du = u*U - v*V, Dv = u*V + v*U
//! * `ComplexPoly` g = u + i*v              same pair of identities, (U, V)
//!
//! On top of the single-factor checks it verifies assembled expressions
//! (products of powers of partial integrals times a pure-time exponential)
//! against a target cofactor sum: zero for a first integral, minus the
//! divergence for a last multiplier.

use std::fmt;

use algebra_core::MultiPoly;
use system_model::SystemDef;
use thiserror::Error;

mod coprime;
mod expr;
mod factor;
mod verify;

pub use coprime::{complex_coprime, coprime, resultant_in};
pub use expr::{contributed_cofactor, verify_integral_expr, IntegralExpr, IntegralKind};
pub use factor::{exp_factor_basis, multiplicity, MultiplicityLevel, MultiplicityReport};
pub use verify::{
    complex_exp_factor, integral_manifold_check, verify_complex_pi, verify_conditional_pi,
    verify_exp_arctan_pi, verify_exp_rational_pi, verify_poly_pi,
};

/// Why a candidate failed verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("the zero polynomial cannot serve as {role}")]
    ZeroPolynomial { role: &'static str },
    #[error("the denominator exponent h must be at least 1")]
    ZeroExponent,
    #[error("`{left}` and `{right}` are not coprime")]
    NotCoprime { left: String, right: String },
    #[error("{context} leaves the remainder `{remainder}`")]
    NotDivisible {
        context: &'static str,
        remainder: MultiPoly,
    },
    #[error("cofactor {name} has state degree {got}, above the bound d - 1 = {bound}")]
    DegreeExceeded {
        name: &'static str,
        got: i64,
        bound: i64,
    },
    #[error("the base of the exponential factor is not a partial integral: {0}")]
    BaseNotPi(Box<VerifyError>),
    #[error("cross-check mismatch: {0}")]
    RouteMismatch(String),
    #[error("a complex pair contributes no real cofactor; use its modulus and arctan parts instead")]
    ComplexFactorInExpr,
    #[error("factor {index} does not verify: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<VerifyError>,
    },
    #[error("cofactor combination yields `{sum}`, not the target `{target}`")]
    CofactorSumMismatch { sum: MultiPoly, target: MultiPoly },
}

/// One candidate partial integral over a system's variable table.
#[derive(Debug, Clone, PartialEq)]
pub enum PartialIntegral {
    /// A polynomial factor p.
    Poly(MultiPoly),
    /// An exponential factor exp(p) with polynomial exponent.
    Conditional(MultiPoly),
    /// An exponential factor exp(q / p^h).
    ExpRational { q: MultiPoly, p: MultiPoly, h: u32 },
    /// An exponential factor exp(arctan(v / u)).
    ExpArctan { v: MultiPoly, u: MultiPoly },
    /// A complex pair u + i*v treated as one factor.
    ComplexPoly { u: MultiPoly, v: MultiPoly },
}

impl PartialIntegral {
    pub fn poly(p: MultiPoly) -> Result<Self, VerifyError> {
        if p.is_zero() {
            return Err(VerifyError::ZeroPolynomial {
                role: "a partial integral candidate",
            });
        }
        Ok(PartialIntegral::Poly(p))
    }

    pub fn conditional(p: MultiPoly) -> Result<Self, VerifyError> {
        if p.is_zero() {
            return Err(VerifyError::ZeroPolynomial {
                role: "the exponent of a conditional factor",
            });
        }
        Ok(PartialIntegral::Conditional(p))
    }

    pub fn exp_rational(q: MultiPoly, p: MultiPoly, h: u32) -> Result<Self, VerifyError> {
        if h == 0 {
            return Err(VerifyError::ZeroExponent);
        }
        if p.is_zero() {
            return Err(VerifyError::ZeroPolynomial {
                role: "the denominator of an exponential factor",
            });
        }
        if !coprime(&q, &p) {
            return Err(VerifyError::NotCoprime {
                left: q.to_string(),
                right: p.to_string(),
            });
        }
        Ok(PartialIntegral::ExpRational { q, p, h })
    }

    pub fn exp_arctan(v: MultiPoly, u: MultiPoly) -> Result<Self, VerifyError> {
        if u.is_zero() {
            return Err(VerifyError::ZeroPolynomial {
                role: "the denominator of an arctan factor",
            });
        }
        if !coprime(&u, &v) {
            return Err(VerifyError::NotCoprime {
                left: u.to_string(),
                right: v.to_string(),
            });
        }
        Ok(PartialIntegral::ExpArctan { v, u })
    }

    pub fn complex_poly(u: MultiPoly, v: MultiPoly) -> Result<Self, VerifyError> {
        if u.is_zero() {
            return Err(VerifyError::ZeroPolynomial {
                role: "the real part of a complex pair",
            });
        }
        if !coprime(&u, &v) {
            return Err(VerifyError::NotCoprime {
                left: u.to_string(),
                right: v.to_string(),
            });
        }
        Ok(PartialIntegral::ComplexPoly { u, v })
    }

    /// Checks this candidate against the system and extracts its cofactors.
    pub fn verify(&self, sys: &SystemDef) -> Result<CofactorReport, VerifyError> {
        match self {
            PartialIntegral::Poly(p) => verify_poly_pi(sys, p),
            PartialIntegral::Conditional(p) => verify_conditional_pi(sys, p),
            PartialIntegral::ExpRational { q, p, h } => verify_exp_rational_pi(sys, q, p, *h),
            PartialIntegral::ExpArctan { v, u } => verify_exp_arctan_pi(sys, v, u),
            PartialIntegral::ComplexPoly { u, v } => verify_complex_pi(sys, u, v),
        }
    }
}

/// Candidate syntax, as accepted by the command-line front end.
impl fmt::Display for PartialIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartialIntegral::Poly(p) => write!(f, "poly: {p}"),
            PartialIntegral::Conditional(p) => write!(f, "exp: {p}"),
            PartialIntegral::ExpRational { q, p, h } => write!(f, "expfrac: {q} / {p} ^ {h}"),
            PartialIntegral::ExpArctan { v, u } => write!(f, "arctan: {v} / {u}"),
            PartialIntegral::ComplexPoly { u, v } => write!(f, "complex: {u} + i*{v}"),
        }
    }
}

/// Cofactors extracted by a successful verification.
///
/// `primary` is M (or U for the arctan and complex kinds); `secondary` is
/// N for exponential factors and V for the arctan and complex kinds.
/// `degree_ok` records that every cofactor obeyed deg_x <= d - 1; a report
/// is only ever returned with the flag set.
#[derive(Debug, Clone, PartialEq)]
pub struct CofactorReport {
    pub primary: MultiPoly,
    pub secondary: Option<MultiPoly>,
    pub degree_ok: bool,
}

impl CofactorReport {
    fn single(m: MultiPoly) -> Self {
        CofactorReport {
            primary: m,
            secondary: None,
            degree_ok: true,
        }
    }

    fn pair(primary: MultiPoly, secondary: MultiPoly) -> Self {
        CofactorReport {
            primary,
            secondary: Some(secondary),
            degree_ok: true,
        }
    }
}

/// Bound that every reported cofactor must respect: deg_x <= d - 1.
fn degree_bound(sys: &SystemDef) -> i64 {
    sys.degree() - 1
}

fn check_degree(m: &MultiPoly, name: &'static str, bound: i64) -> Result<(), VerifyError> {
    let got = m.deg_state();
    if got <= bound {
        Ok(())
    } else {
        Err(VerifyError::DegreeExceeded { name, got, bound })
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use std::sync::Arc;

    use algebra_core::VarTable;
    use system_model::{parse_poly, parse_system};

    pub fn sys(src: &str) -> SystemDef {
        parse_system(src).expect("test system parses")
    }

    pub fn p(table: &Arc<VarTable>, src: &str) -> MultiPoly {
        parse_poly(src, table).expect("test polynomial parses")
    }
}
