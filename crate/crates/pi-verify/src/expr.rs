//! Assembled integral expressions and their exact verification.

use algebra_core::{MultiPoly, Rational, Scalar};
use system_model::SystemDef;

use crate::{PartialIntegral, VerifyError};

/// What an assembled expression claims to be. The claim fixes the target
/// cofactor sum: zero for a first integral, minus the divergence for a
/// last multiplier, rho times the divergence for a pseudomultiplier, and
/// an arbitrary prescribed polynomial for the custom kind.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralKind {
    FirstIntegral,
    LastMultiplier,
    Pseudo(Rational),
    Custom(MultiPoly),
}

impl IntegralKind {
    /// The cofactor sum this claim requires of the assembled expression.
    pub fn target_polynomial(&self, sys: &SystemDef) -> MultiPoly {
        match self {
            IntegralKind::FirstIntegral => MultiPoly::zero(sys.table()),
            IntegralKind::LastMultiplier => sys.divergence().scale(&Scalar::from_int(-1)),
            IntegralKind::Pseudo(rho) => sys
                .divergence()
                .scale(&Scalar::from_rational(rho.clone())),
            IntegralKind::Custom(l) => l.clone(),
        }
    }
}

/// A product of powers of partial integrals, optionally times a pure-time
/// factor exp(-phi(t)).
///
/// Each factor carries its exponent gamma: g^gamma for a polynomial
/// factor, exp(gamma * p) for a conditional one, and so on. `time_factor`
/// stores the antiderivative phi with the sign convention exp(-phi).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralExpr {
    pub factors: Vec<(PartialIntegral, Scalar)>,
    pub time_factor: MultiPoly,
    pub kind: IntegralKind,
}

impl IntegralExpr {
    pub fn new(
        factors: Vec<(PartialIntegral, Scalar)>,
        time_factor: MultiPoly,
        kind: IntegralKind,
    ) -> Self {
        assert!(
            time_factor.is_pure_time(),
            "the time factor must depend on t alone"
        );
        IntegralExpr {
            factors,
            time_factor,
            kind,
        }
    }

    /// An expression with no time factor.
    pub fn product(
        sys: &SystemDef,
        factors: Vec<(PartialIntegral, Scalar)>,
        kind: IntegralKind,
    ) -> Self {
        Self::new(factors, MultiPoly::zero(sys.table()), kind)
    }
}

/// The cofactor a factor contributes to an assembled expression's sum:
/// M for polynomial and conditional factors, N (or V) for the exponential
/// kinds. Complex pairs contribute no real cofactor and are rejected.
pub fn contributed_cofactor(
    sys: &SystemDef,
    pi: &PartialIntegral,
) -> Result<MultiPoly, VerifyError> {
    if let PartialIntegral::ComplexPoly { .. } = pi {
        return Err(VerifyError::ComplexFactorInExpr);
    }
    let report = pi.verify(sys)?;
    match pi {
        PartialIntegral::Poly(_) | PartialIntegral::Conditional(_) => Ok(report.primary),
        PartialIntegral::ExpRational { .. } | PartialIntegral::ExpArctan { .. } => Ok(report
            .secondary
            .expect("exponential kinds report a secondary cofactor")),
        PartialIntegral::ComplexPoly { .. } => unreachable!(),
    }
}

/// Verifies the exact identity
/// `sum_j gamma_j * M_j - D(phi) = target`,
/// where M_j is the contributing cofactor of factor j and phi the
/// expression's time factor. Every factor must verify individually.
pub fn verify_integral_expr(
    sys: &SystemDef,
    expr: &IntegralExpr,
    target: &MultiPoly,
) -> Result<(), VerifyError> {
    assert!(
        expr.time_factor.is_pure_time(),
        "the time factor must depend on t alone"
    );
    let mut sum = MultiPoly::zero(sys.table());
    for (index, (pi, gamma)) in expr.factors.iter().enumerate() {
        let m = contributed_cofactor(sys, pi).map_err(|e| VerifyError::Component {
            index,
            source: Box::new(e),
        })?;
        sum = &sum + &m.scale(gamma);
    }
    sum = &sum - &sys.derive(&expr.time_factor);
    if &sum == target {
        Ok(())
    } else {
        Err(VerifyError::CofactorSumMismatch {
            sum,
            target: target.clone(),
        })
    }
}
