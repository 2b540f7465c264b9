//! Single-state specialization: equations x' = sum_i a_i(t) x^(n-i).
//!
//! Here every cofactor is a polynomial sum_s alpha_s(t) x^s, and the
//! combination conditions become statements about the functional determinant
//! of the coefficient matrix [alpha_sj(t)]: a nontrivial cancelling exponent
//! vector (a general integral) needs the determinant to vanish identically,
//! while an integrating factor corresponds to Cramer ratios delta_j / delta
//! that are constant, in which case they are the exponents themselves.

use std::collections::BTreeSet;

use algebra_core::{det_poly, MultiPoly, Scalar};
use pi_verify::{contributed_cofactor, IntegralExpr, IntegralKind, PartialIntegral};
use system_model::{is_state, SystemDef};

use crate::{combine, CombineError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiccatiMode {
    /// Cancel the cofactors outright: target zero.
    GeneralIntegral,
    /// Reach minus the divergence: target -div.
    IntegratingFactor,
}

/// Outcome of [`riccati_abel_combine`]: the assembled expressions (or the
/// reason there are none) plus the determinant diagnostics that explain the
/// verdict in the classical terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiReport {
    /// What `combine` produced for the mode's target.
    pub outcome: Result<Vec<IntegralExpr>, CombineError>,
    /// Determinant of the matrix [alpha_sj(t)] whose rows are the x-powers
    /// observed across the cofactors and whose columns are the supplied
    /// factors; None when that matrix is not square.
    pub delta: Option<MultiPoly>,
    /// Integrating-factor mode with a square nonvanishing determinant only:
    /// whether every Cramer ratio delta_j / delta is constant, which is
    /// exactly when the exponents can be read off the determinants.
    pub cramer_constant: Option<bool>,
}

/// Runs [`combine`] on a single-state system and reports the functional
/// determinant of the cofactor coefficient matrix alongside the result.
///
/// Structural problems (a multi-state system, no factors, a candidate that
/// fails verification) surface as the outer error; the verdict of the
/// combination itself, including inconsistency, is kept inside the report so
/// the determinant diagnostics survive a negative answer.
pub fn riccati_abel_combine(
    sys: &SystemDef,
    pis: &[PartialIntegral],
    mode: RiccatiMode,
) -> Result<RiccatiReport, CombineError> {
    let table = sys.table();
    let states: Vec<usize> = (0..table.len()).filter(|&i| is_state(table, i)).collect();
    let [x] = states[..] else {
        return Err(CombineError::NotSingleState(states.len()));
    };
    if pis.is_empty() {
        return Err(CombineError::NoFactors);
    }
    let cofactors = pis
        .iter()
        .map(|pi| contributed_cofactor(sys, pi))
        .collect::<Result<Vec<_>, _>>()?;

    // Coefficient columns by x-power, ascending, x removed from the entries.
    let columns: Vec<Vec<MultiPoly>> = cofactors.iter().map(|m| m.coeffs_in(x)).collect();
    let mut observed: BTreeSet<usize> = BTreeSet::new();
    for col in &columns {
        for (s, alpha) in col.iter().enumerate() {
            if !alpha.is_zero() {
                observed.insert(s);
            }
        }
    }
    let powers: Vec<usize> = observed.into_iter().rev().collect();
    let zero = MultiPoly::zero(table);
    let entry = |col: &Vec<MultiPoly>, s: usize| col.get(s).cloned().unwrap_or_else(|| zero.clone());
    let delta = (powers.len() == pis.len()).then(|| {
        let m: Vec<Vec<MultiPoly>> = powers
            .iter()
            .map(|&s| columns.iter().map(|col| entry(col, s)).collect())
            .collect();
        det_poly(&m)
    });

    let kind = match mode {
        RiccatiMode::GeneralIntegral => IntegralKind::FirstIntegral,
        RiccatiMode::IntegratingFactor => IntegralKind::LastMultiplier,
    };
    let cramer_constant = match (mode, &delta) {
        (RiccatiMode::IntegratingFactor, Some(d)) if !d.is_zero() => {
            let neg_div = sys.divergence().scale(&Scalar::from_int(-1));
            let b = neg_div.coeffs_in(x);
            let constant = (0..pis.len()).all(|j| {
                let m: Vec<Vec<MultiPoly>> = powers
                    .iter()
                    .map(|&s| {
                        (0..pis.len())
                            .map(|c| {
                                if c == j {
                                    entry(&b, s)
                                } else {
                                    entry(&columns[c], s)
                                }
                            })
                            .collect()
                    })
                    .collect();
                det_poly(&m)
                    .exact_div(d)
                    .map(|ratio| ratio.is_constant())
                    .unwrap_or(false)
            });
            Some(constant)
        }
        _ => None,
    };

    let outcome = combine(sys, pis, kind, false);
    Ok(RiccatiReport {
        outcome,
        delta,
        cramer_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render_integral;
    use crate::testutil::{p, quadratic_pair, sys};
    use pi_verify::VerifyError;

    #[test]
    fn a_single_nonvanishing_determinant_blocks_the_general_integral() {
        let s = sys("vars x\nx' = x^2");
        let t = s.table().clone();
        let pis = vec![PartialIntegral::poly(p(&t, "x")).unwrap()];
        let report = riccati_abel_combine(&s, &pis, RiccatiMode::GeneralIntegral).unwrap();
        assert_eq!(report.outcome, Ok(vec![]));
        assert_eq!(report.delta, Some(p(&t, "1")));
        assert_eq!(report.cramer_constant, None);
    }

    #[test]
    fn the_same_factor_gives_the_reciprocal_square_multiplier() {
        let s = sys("vars x\nx' = x^2");
        let t = s.table().clone();
        let pis = vec![PartialIntegral::poly(p(&t, "x")).unwrap()];
        let report = riccati_abel_combine(&s, &pis, RiccatiMode::IntegratingFactor).unwrap();
        let exprs = report.outcome.unwrap();
        assert_eq!(exprs.len(), 1);
        assert_eq!(exprs[0].factors[0].1, Scalar::from_int(-2));
        assert_eq!(render_integral(&exprs[0]), "(x)^-2");
        assert_eq!(report.delta, Some(p(&t, "1")));
        assert_eq!(report.cramer_constant, Some(true));
    }

    #[test]
    fn exponents_match_the_cramer_ratios() {
        // x and exp(1/x) have cofactor columns (1, 0) and (0, -1):
        // delta_1/delta = -2 and delta_2/delta = 0 reproduce gamma = (-2, 0)
        let s = sys("vars x\nx' = x^2");
        let t = s.table().clone();
        let pis = vec![
            PartialIntegral::poly(p(&t, "x")).unwrap(),
            PartialIntegral::exp_rational(p(&t, "1"), p(&t, "x"), 1).unwrap(),
        ];
        let report = riccati_abel_combine(&s, &pis, RiccatiMode::IntegratingFactor).unwrap();
        assert_eq!(report.delta, Some(p(&t, "-1")));
        assert_eq!(report.cramer_constant, Some(true));
        let exprs = report.outcome.unwrap();
        assert_eq!(exprs.len(), 1);
        assert_eq!(exprs[0].factors[0].1, Scalar::from_int(-2));
        assert_eq!(exprs[0].factors[1].1, Scalar::zero());
    }

    #[test]
    fn time_dependent_cramer_ratios_are_flagged() {
        let s = sys("vars x\nx' = x^2 + t*x");
        let t = s.table().clone();
        let pis = vec![
            PartialIntegral::poly(p(&t, "x")).unwrap(),
            PartialIntegral::conditional(p(&t, "t")).unwrap(),
        ];
        let report = riccati_abel_combine(&s, &pis, RiccatiMode::IntegratingFactor).unwrap();
        assert_eq!(report.delta, Some(p(&t, "1")));
        assert_eq!(report.cramer_constant, Some(false));
        assert!(matches!(
            report.outcome,
            Err(CombineError::Inconsistent { .. })
        ));
    }

    #[test]
    fn a_rectangular_coefficient_matrix_has_no_determinant() {
        let s = sys("vars x\nx' = x^2 + x");
        let t = s.table().clone();
        let pis = vec![PartialIntegral::poly(p(&t, "x")).unwrap()];
        let report = riccati_abel_combine(&s, &pis, RiccatiMode::IntegratingFactor).unwrap();
        assert_eq!(report.delta, None);
        assert_eq!(report.cramer_constant, None);
        assert!(matches!(
            report.outcome,
            Err(CombineError::Inconsistent { .. })
        ));
    }

    #[test]
    fn multi_state_systems_are_rejected() {
        let s = quadratic_pair();
        let t = s.table().clone();
        let pis = vec![PartialIntegral::poly(p(&t, "2 + 2*x + y")).unwrap()];
        assert_eq!(
            riccati_abel_combine(&s, &pis, RiccatiMode::GeneralIntegral),
            Err(CombineError::NotSingleState(2))
        );
    }

    #[test]
    fn candidates_with_nonpolynomial_cofactors_are_rejected() {
        // clearing x' = x/t - x^3/(2 t^2) by 2 t^2 rescales time, so the
        // known invariant x^2 - t of the original equation no longer divides
        // its derivative; the failure names the remainder
        let s = sys("vars x\nx' = 2*t*x - x^3");
        let t = s.table().clone();
        let pis = vec![PartialIntegral::poly(p(&t, "x^2 - t")).unwrap()];
        let err = riccati_abel_combine(&s, &pis, RiccatiMode::GeneralIntegral).unwrap_err();
        assert!(matches!(
            err,
            CombineError::Verify(VerifyError::NotDivisible { .. })
        ));
        assert!(err.to_string().contains("remainder"));
    }

    #[test]
    fn no_factors_is_an_error() {
        let s = sys("vars x\nx' = x^2");
        assert_eq!(
            riccati_abel_combine(&s, &[], RiccatiMode::GeneralIntegral),
            Err(CombineError::NoFactors)
        );
    }
}
