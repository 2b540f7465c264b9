//! Assembly of first integrals and last multipliers from partial integrals.
//!
//! A product F = prod g_j^{gamma_j} differentiates by virtue of the system to
//! F times the weighted cofactor sum sum gamma_j M_j. Prescribing that sum
//! therefore turns integral construction into exact linear algebra over the
//! monomial coefficients of the cofactors: zero gives a first integral, minus
//! the divergence a last multiplier, rho times the divergence a
//! pseudomultiplier. The optional time completion moves a purely
//! time-dependent residual phi(t) into an extra factor exp(-int phi dt),
//! which is the classical e^{-lambda t} repair for near-misses.
//!
//! The single-state Riccati-Abel specialization, which phrases the same
//! conditions through the functional determinant of the cofactor coefficient
//! matrix, lives in [`riccati_abel_combine`].

use std::collections::BTreeSet;

use algebra_core::rational::rat_gcd;
use algebra_core::{rat, solve_linear, Matrix, MultiPoly, Rational, Role, Scalar, VarTable};
use pi_verify::contributed_cofactor;
use system_model::SystemDef;
use thiserror::Error;

mod render;
mod riccati;

pub use pi_verify::{
    verify_integral_expr, IntegralExpr, IntegralKind, PartialIntegral, VerifyError,
};
pub use render::render_integral;
pub use riccati::{riccati_abel_combine, RiccatiMode, RiccatiReport};

/// Why no integral expression could be assembled.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CombineError {
    #[error("at least one partial integral is required")]
    NoFactors,
    #[error("no exponent vector reaches the target cofactor sum `{target}`")]
    Inconsistent { target: MultiPoly },
    #[error("every exponent vector leaves a residual that involves the state variables, which no pure-time factor can absorb")]
    UnboundedResidual,
    #[error("the Riccati-Abel form needs exactly one state variable, this system has {0}")]
    NotSingleState(usize),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Solves sum_j gamma_j M_j = target for the exponents gamma, where M_j is
/// the contributing cofactor of `pis[j]` and the target is fixed by `kind`.
///
/// Matching is exact, monomial by monomial. With `allow_time_completion` the
/// purely time-dependent monomials (constants included) are left out of the
/// system; whatever pure-time residual phi(t) a solution then leaves is
/// integrated into the expression's time factor, so the identity
/// sum gamma_j M_j - phi = target still holds exactly.
///
/// Returns one expression per solution-family basis vector: first the
/// particular solution (free exponents zero; omitted when it is the zero
/// vector), then the particular solution shifted by each nullspace vector,
/// the latter normalized to coprime integer entries whose last nonzero one
/// is positive. Every returned expression has been re-verified.
pub fn combine(
    sys: &SystemDef,
    pis: &[PartialIntegral],
    kind: IntegralKind,
    allow_time_completion: bool,
) -> Result<Vec<IntegralExpr>, CombineError> {
    if pis.is_empty() {
        return Err(CombineError::NoFactors);
    }
    let target = kind.target_polynomial(sys);
    let cofactors = pis
        .iter()
        .map(|pi| contributed_cofactor(sys, pi))
        .collect::<Result<Vec<_>, _>>()?;

    // One row per monomial the exponents must match.
    let mut monomials: BTreeSet<Vec<u32>> = BTreeSet::new();
    for m in cofactors.iter().chain(std::iter::once(&target)) {
        for (e, _) in m.terms() {
            if !(allow_time_completion && pure_time_exponents(sys.table(), e)) {
                monomials.insert(e.clone());
            }
        }
    }
    let rows: Vec<&Vec<u32>> = monomials.iter().collect();
    let a = Matrix::from_fn(rows.len(), cofactors.len(), |i, j| {
        cofactors[j].coeff(rows[i])
    });
    let b: Vec<Scalar> = rows.iter().map(|e| target.coeff(e)).collect();
    let sol = solve_linear(&a, &b);
    let Some(particular) = sol.particular else {
        return Err(if allow_time_completion {
            CombineError::UnboundedResidual
        } else {
            CombineError::Inconsistent { target }
        });
    };

    let mut gammas: Vec<Vec<Scalar>> = Vec::new();
    if particular.iter().any(|g| !g.is_zero()) {
        gammas.push(particular.clone());
    }
    for v in &sol.nullspace {
        let shift = integer_normalized(v);
        gammas.push(
            particular
                .iter()
                .zip(&shift)
                .map(|(p, n)| p + n)
                .collect(),
        );
    }

    let mut out = Vec::new();
    for gamma in gammas {
        let mut sum = MultiPoly::zero(sys.table());
        for (g, m) in gamma.iter().zip(&cofactors) {
            sum = &sum + &m.scale(g);
        }
        let residual = &sum - &target;
        let time_factor = time_antiderivative(sys, &residual);
        let factors: Vec<(PartialIntegral, Scalar)> =
            pis.iter().cloned().zip(gamma.iter().cloned()).collect();
        let expr = IntegralExpr::new(factors, time_factor, kind.clone());
        verify_integral_expr(sys, &expr, &target).expect("assembled expression verifies");
        out.push(expr);
    }
    Ok(out)
}

/// Number of partial integrals that guarantees a Darboux first integral or
/// last multiplier of an n-state degree-d system: the count of n-variable
/// monomials of degree at most d - 1, binom(n + d - 1, n).
pub fn darboux_capacity(n: u32, d: u32) -> u128 {
    assert!(n >= 1 && d >= 1, "capacity needs n >= 1 and d >= 1");
    let n = u128::from(n);
    let mut acc: u128 = 1;
    // binom(n + d - 1, n) built up one factor at a time; each step is an
    // exact integer because acc already holds binom(d - 1 + i - 1, i - 1).
    for i in 1..=n {
        acc = acc * (u128::from(d) - 1 + i) / i;
    }
    acc
}

/// True when the monomial involves no state or parameter variable.
fn pure_time_exponents(table: &VarTable, e: &[u32]) -> bool {
    (0..table.len()).all(|i| e[i] == 0 || table.role(i) == Role::Time)
}

/// Scales a rational-content vector to coprime integer entries whose last
/// nonzero entry is positive (content-one normalization for radical entries).
fn integer_normalized(v: &[Scalar]) -> Vec<Scalar> {
    let mut content = rat(0, 1);
    for s in v {
        content = rat_gcd(&content, &s.content());
    }
    let Some(lead) = v.iter().rev().find(|s| !s.is_zero()) else {
        return v.to_vec();
    };
    let mut unit = Scalar::from_rational(content).inv();
    if lead.canonical_sign() < 0 {
        unit = -&unit;
    }
    v.iter().map(|s| s * &unit).collect()
}

/// Exact antiderivative of a pure-time polynomial, with zero constant term
/// (integration from t0 = 0).
fn time_antiderivative(sys: &SystemDef, phi: &MultiPoly) -> MultiPoly {
    assert!(
        phi.is_pure_time(),
        "residual `{phi}` is not a pure-time polynomial"
    );
    let table = sys.table();
    let t = table.time_index().expect("systems carry a time variable");
    let mut out = MultiPoly::zero(table);
    for (e, c) in phi.terms() {
        let mut e2 = e.clone();
        e2[t] += 1;
        let step = Scalar::from_rational(Rational::from_integer(e2[t].into())).inv();
        out = &out + &MultiPoly::monomial(table, e2, c * &step);
    }
    out
}
