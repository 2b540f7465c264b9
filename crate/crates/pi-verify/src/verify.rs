//! The single-factor verification routines.

use algebra_core::{rat, MultiPoly, Scalar};
use system_model::SystemDef;

use crate::coprime::{complex_coprime, coprime};
use crate::{check_degree, degree_bound, CofactorReport, VerifyError};

/// Checks that p is a polynomial partial integral: Dp = p * M with
/// deg_x M <= d - 1, and returns M.
pub fn verify_poly_pi(sys: &SystemDef, p: &MultiPoly) -> Result<CofactorReport, VerifyError> {
    if p.is_zero() {
        return Err(VerifyError::ZeroPolynomial {
            role: "a partial integral candidate",
        });
    }
    let dp = sys.derive(p);
    let m = dp.exact_div(p).map_err(|remainder| VerifyError::NotDivisible {
        context: "dividing the derivation image by the candidate",
        remainder,
    })?;
    check_degree(&m, "M", degree_bound(sys))?;
    Ok(CofactorReport::single(m))
}

/// Checks that exp(p) is a partial integral: M = Dp with deg_x M <= d - 1.
pub fn verify_conditional_pi(
    sys: &SystemDef,
    p: &MultiPoly,
) -> Result<CofactorReport, VerifyError> {
    if p.is_zero() {
        return Err(VerifyError::ZeroPolynomial {
            role: "the exponent of a conditional factor",
        });
    }
    let m = sys.derive(p);
    check_degree(&m, "M", degree_bound(sys))?;
    Ok(CofactorReport::single(m))
}

/// Checks that exp(q / p^h) is a partial integral: p must itself verify
/// with cofactor M, and Dq - h*q*M must be divisible by p^h with quotient
/// N of state degree <= d - 1. Returns (M, N).
pub fn verify_exp_rational_pi(
    sys: &SystemDef,
    q: &MultiPoly,
    p: &MultiPoly,
    h: u32,
) -> Result<CofactorReport, VerifyError> {
    if h == 0 {
        return Err(VerifyError::ZeroExponent);
    }
    if p.is_zero() {
        return Err(VerifyError::ZeroPolynomial {
            role: "the denominator of an exponential factor",
        });
    }
    if !coprime(q, p) {
        return Err(VerifyError::NotCoprime {
            left: q.to_string(),
            right: p.to_string(),
        });
    }
    let base = verify_poly_pi(sys, p).map_err(|e| VerifyError::BaseNotPi(Box::new(e)))?;
    let m = base.primary;
    let residue = &sys.derive(q) - &(q * &m).scale(&Scalar::from_int(h as i64));
    let n = residue
        .exact_div(&p.pow(h))
        .map_err(|remainder| VerifyError::NotDivisible {
            context: "dividing the numerator residue by the denominator power",
            remainder,
        })?;
    check_degree(&n, "N", degree_bound(sys))?;
    Ok(CofactorReport::pair(m, n))
}

/// Solves the pair of identities Du = u*U - v*V, Dv = u*V + v*U for the
/// arctan factor exp(arctan(v / u)) and returns (U, V). V is the cofactor
/// of the factor itself.
pub fn verify_exp_arctan_pi(
    sys: &SystemDef,
    v: &MultiPoly,
    u: &MultiPoly,
) -> Result<CofactorReport, VerifyError> {
    if u.is_zero() {
        return Err(VerifyError::ZeroPolynomial {
            role: "the denominator of an arctan factor",
        });
    }
    if !coprime(u, v) {
        return Err(VerifyError::NotCoprime {
            left: u.to_string(),
            right: v.to_string(),
        });
    }
    let du = sys.derive(u);
    let dv = sys.derive(v);
    let modulus = &(u * u) + &(v * v);
    let numerator = &(u * &dv) - &(v * &du);
    let vv = numerator
        .exact_div(&modulus)
        .map_err(|remainder| VerifyError::NotDivisible {
            context: "dividing u*Dv - v*Du by u^2 + v^2",
            remainder,
        })?;
    // back-substitution: u*U = Du + v*V
    let uu = (&du + &(v * &vv))
        .exact_div(u)
        .map_err(|remainder| VerifyError::NotDivisible {
            context: "back-substituting for U",
            remainder,
        })?;
    let bound = degree_bound(sys);
    check_degree(&uu, "U", bound)?;
    check_degree(&vv, "V", bound)?;
    Ok(CofactorReport::pair(uu, vv))
}

/// Checks that the pair u + i*v is a complex partial integral and returns
/// its cofactor pair (U, V).
///
/// Two independent routes must agree: the direct solve of the defining
/// identities, and the decomposition into the modulus u^2 + v^2 (a
/// polynomial factor with cofactor 2U) plus the arctan factor (cofactor
/// V). Disagreement indicates an internal inconsistency, not bad input.
pub fn verify_complex_pi(
    sys: &SystemDef,
    u: &MultiPoly,
    v: &MultiPoly,
) -> Result<CofactorReport, VerifyError> {
    if u.is_zero() {
        return Err(VerifyError::ZeroPolynomial {
            role: "the real part of a complex pair",
        });
    }
    if !coprime(u, v) {
        return Err(VerifyError::NotCoprime {
            left: u.to_string(),
            right: v.to_string(),
        });
    }
    let du = sys.derive(u);
    let dv = sys.derive(v);
    let modulus = &(u * u) + &(v * v);
    // direct route: u*Du + v*Dv = (u^2 + v^2) U, u*Dv - v*Du = (u^2 + v^2) V
    let uu = (&(u * &du) + &(v * &dv))
        .exact_div(&modulus)
        .map_err(|remainder| VerifyError::NotDivisible {
            context: "dividing u*Du + v*Dv by u^2 + v^2",
            remainder,
        })?;
    let vv = (&(u * &dv) - &(v * &du))
        .exact_div(&modulus)
        .map_err(|remainder| VerifyError::NotDivisible {
            context: "dividing u*Dv - v*Du by u^2 + v^2",
            remainder,
        })?;
    let bound = degree_bound(sys);
    check_degree(&uu, "U", bound)?;
    check_degree(&vv, "V", bound)?;
    // decomposed route: modulus as polynomial factor, angle as arctan factor
    let via_modulus = verify_poly_pi(sys, &modulus)
        .map_err(|e| VerifyError::RouteMismatch(format!("modulus route failed: {e}")))?;
    let half = Scalar::new(rat(1, 2), rat(0, 1), 0);
    if via_modulus.primary.scale(&half) != uu {
        return Err(VerifyError::RouteMismatch(format!(
            "modulus cofactor `{}` is not twice the direct U `{uu}`",
            via_modulus.primary
        )));
    }
    let via_arctan = verify_exp_arctan_pi(sys, v, u)
        .map_err(|e| VerifyError::RouteMismatch(format!("arctan route failed: {e}")))?;
    if via_arctan.primary != uu || via_arctan.secondary.as_ref() != Some(&vv) {
        return Err(VerifyError::RouteMismatch(
            "arctan route disagrees with the direct solve".into(),
        ));
    }
    Ok(CofactorReport::pair(uu, vv))
}

/// Real and imaginary parts of z * (u - i*v)^h for z = z_re + i*z_im.
fn expand_conjugate_power(
    z_re: &MultiPoly,
    z_im: &MultiPoly,
    u: &MultiPoly,
    v: &MultiPoly,
    h: u32,
) -> (MultiPoly, MultiPoly) {
    let mut re = z_re.clone();
    let mut im = z_im.clone();
    for _ in 0..h {
        let next_re = &(&re * u) + &(&im * v);
        let next_im = &(&im * u) - &(&re * v);
        re = next_re;
        im = next_im;
    }
    (re, im)
}

/// Verifies the exponential factor attached to a multiple complex partial
/// integral: with w = u + i*v verified and z = z_re + i*z_im coprime with
/// w, both parts of z * (u - i*v)^h must be exponential numerators over
/// p = u^2 + v^2 with exponent h. Returns the two reports; their N
/// cofactors are the real and imaginary parts (K, L) of the complex
/// factor cofactor.
pub fn complex_exp_factor(
    sys: &SystemDef,
    u: &MultiPoly,
    v: &MultiPoly,
    h: u32,
    z_re: &MultiPoly,
    z_im: &MultiPoly,
) -> Result<(CofactorReport, CofactorReport), VerifyError> {
    if h == 0 {
        return Err(VerifyError::ZeroExponent);
    }
    verify_complex_pi(sys, u, v).map_err(|e| VerifyError::BaseNotPi(Box::new(e)))?;
    if !complex_coprime(z_re, z_im, u, v) {
        return Err(VerifyError::NotCoprime {
            left: format!("{z_re} + i*{z_im}"),
            right: format!("{u} + i*{v}"),
        });
    }
    let (q_re, q_im) = expand_conjugate_power(z_re, z_im, u, v, h);
    let p = &(u * u) + &(v * v);
    let report_re = verify_exp_rational_pi(sys, &q_re, &p, h)?;
    let report_im = verify_exp_rational_pi(sys, &q_im, &p, h)?;
    Ok((report_re, report_im))
}

/// Sufficient check that the zero set of g is an integral manifold of the
/// system: g divides Dg exactly. No degree bound applies.
pub fn integral_manifold_check(sys: &SystemDef, g: &MultiPoly) -> bool {
    assert!(!g.is_zero(), "the zero polynomial bounds no manifold");
    sys.derive(g).exact_div(g).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{p, sys};

    #[test]
    fn polynomial_cofactors_match_known_planar_systems() {
        // three-dimensional system with a polynomial partial integral z
        let s = sys("vars x y z\nx' = 1\ny' = -2*x*y + z^2\nz' = -2*x*z");
        let t = s.table().clone();
        let report = verify_poly_pi(&s, &p(&t, "z")).unwrap();
        assert_eq!(report.primary, p(&t, "-2*x"));
        assert_eq!(report.secondary, None);
        assert!(report.degree_ok);

        let s = sys("vars x y\nx' = -2 + y + x^2 + x*y\ny' = 4 + 2*x + x*y + y^2");
        let t = s.table().clone();
        let g1 = verify_poly_pi(&s, &p(&t, "2 + 2*x + y")).unwrap();
        assert_eq!(g1.primary, p(&t, "x + y"));
        let g2 = verify_poly_pi(&s, &p(&t, "12 + 8*x + 4*y + 4*x*y + 3*y^2")).unwrap();
        assert_eq!(g2.primary, p(&t, "2*x + 2*y"));

        let s = sys("vars x y\nx' = -y + 1/2*x^2 - 1/2*y^2\ny' = x + x*y");
        let t = s.table().clone();
        assert_eq!(verify_poly_pi(&s, &p(&t, "y + 1")).unwrap().primary, p(&t, "x"));
        assert_eq!(
            verify_poly_pi(&s, &p(&t, "x^2 + y^2")).unwrap().primary,
            p(&t, "x")
        );
    }

    #[test]
    fn non_divisible_candidates_are_rejected_with_remainder() {
        let s = sys("vars x y\nx' = -2 + y + x^2 + x*y\ny' = 4 + 2*x + x*y + y^2");
        let t = s.table().clone();
        let err = verify_poly_pi(&s, &p(&t, "x")).unwrap_err();
        match err {
            VerifyError::NotDivisible { remainder, .. } => {
                assert_eq!(remainder, p(&t, "y - 2"));
            }
            other => panic!("expected a divisibility failure, got {other:?}"),
        }
    }

    #[test]
    fn conditional_cofactors_and_degree_bound() {
        let s = sys("vars x y\nparam a\nx' = y + x^2 - y^2 + a\ny' = x + x^2 - y^2 + a");
        let t = s.table().clone();
        let report = verify_conditional_pi(&s, &p(&t, "x - y")).unwrap();
        assert_eq!(report.primary, p(&t, "-x + y"));

        let s = sys("vars x y\nparam a\nx' = -y + x^2 + y^2 + a\ny' = x + x^2 + y^2 + a");
        let t = s.table().clone();
        let report = verify_conditional_pi(&s, &p(&t, "x - y")).unwrap();
        assert_eq!(report.primary, p(&t, "-x - y"));

        // a nonzero constant has cofactor 0
        let report = verify_conditional_pi(&s, &p(&t, "7")).unwrap();
        assert!(report.primary.is_zero());

        // the derivative of x^2 on a linear system has degree 2 > d - 1
        let s = sys("vars x y\nx' = x - y\ny' = x + y");
        let t = s.table().clone();
        assert_eq!(
            verify_conditional_pi(&s, &p(&t, "x^2")).unwrap_err(),
            VerifyError::DegreeExceeded {
                name: "M",
                got: 2,
                bound: 0
            }
        );
    }

    #[test]
    fn exponential_rational_factors() {
        let s = sys("vars x y\nx' = -2 + y + x^2 + x*y\ny' = 4 + 2*x + x*y + y^2");
        let t = s.table().clone();
        let report =
            verify_exp_rational_pi(&s, &p(&t, "x + y"), &p(&t, "2 + 2*x + y"), 1).unwrap();
        assert_eq!(report.primary, p(&t, "x + y"));
        assert_eq!(report.secondary, Some(p(&t, "1")));

        let s = sys("vars x y\nx' = 1/4*y*(x^2 - y^2 - 1)\ny' = 1/4*x*(x^2 + 3*y^2 - 1)");
        let t = s.table().clone();
        let report =
            verify_exp_rational_pi(&s, &p(&t, "x^2 - y^2 - 1"), &p(&t, "x^2 + y^2 - 1"), 1)
                .unwrap();
        assert_eq!(report.primary, p(&t, "x*y"));
        assert_eq!(report.secondary, Some(p(&t, "-x*y")));

        // states with zero derivative give zero cofactors
        let s = sys("vars x y z\nx' = y*z\ny' = 0\nz' = 0");
        let t = s.table().clone();
        let report = verify_exp_rational_pi(&s, &p(&t, "1"), &p(&t, "y"), 1).unwrap();
        assert!(report.primary.is_zero());
        assert_eq!(report.secondary, Some(p(&t, "0")));

        // a base that is not a partial integral is reported as such
        let s = sys("vars x y\nx' = -2 + y + x^2 + x*y\ny' = 4 + 2*x + x*y + y^2");
        let t = s.table().clone();
        let err = verify_exp_rational_pi(&s, &p(&t, "y"), &p(&t, "x"), 1).unwrap_err();
        assert!(matches!(err, VerifyError::BaseNotPi(_)));
    }

    #[test]
    fn exponential_rational_degree_violation_is_distinct() {
        let s = sys("vars x y z\nx' = y*z\ny' = 0\nz' = 0");
        let t = s.table().clone();
        // D(x^2) = 2xyz = y * (2xz); the quotient has state degree 2 > d - 1 = 1
        let err = verify_exp_rational_pi(&s, &p(&t, "x^2"), &p(&t, "y"), 1).unwrap_err();
        assert_eq!(
            err,
            VerifyError::DegreeExceeded {
                name: "N",
                got: 2,
                bound: 1
            }
        );
    }

    #[test]
    fn arctan_factors() {
        let s = sys("vars x y\nx' = x - y\ny' = x + y");
        let t = s.table().clone();
        let report = verify_exp_arctan_pi(&s, &p(&t, "y"), &p(&t, "x")).unwrap();
        assert_eq!(report.primary, p(&t, "1"));
        assert_eq!(report.secondary, Some(p(&t, "1")));

        let s = sys("vars x y\nx' = x*y + 2*y^3\ny' = -x + 1/2*y^2");
        let t = s.table().clone();
        let report = verify_exp_arctan_pi(&s, &p(&t, "y^2"), &p(&t, "x")).unwrap();
        assert_eq!(report.primary, p(&t, "y"));
        assert_eq!(report.secondary, Some(p(&t, "-2*y")));

        let s = sys("vars x y z\nx' = y*z\ny' = 0\nz' = 0");
        let t = s.table().clone();
        let report = verify_exp_arctan_pi(&s, &p(&t, "z"), &p(&t, "y")).unwrap();
        assert!(report.primary.is_zero());
        assert_eq!(report.secondary, Some(p(&t, "0")));
    }

    #[test]
    fn complex_pairs_verify_with_agreeing_routes() {
        let s = sys("vars x y\nx' = x^2 - 2*x*y - y^2\ny' = x^2 + 2*x*y - y^2");
        let t = s.table().clone();
        let report = verify_complex_pi(&s, &p(&t, "x"), &p(&t, "y")).unwrap();
        assert_eq!(report.primary, p(&t, "x - y"));
        assert_eq!(report.secondary, Some(p(&t, "x + y")));

        let s = sys("vars x y\nx' = x - x^3 - x^2*y - y^3\ny' = y + x^3 - x^2*y + x*y^2");
        let t = s.table().clone();
        let report = verify_complex_pi(&s, &p(&t, "x"), &p(&t, "y")).unwrap();
        assert_eq!(report.primary, p(&t, "1 - x^2"));
        assert_eq!(report.secondary, Some(p(&t, "x^2 + y^2")));
    }

    #[test]
    fn conjugate_pair_flips_the_secondary_cofactor() {
        let s = sys("vars x y\nx' = x^2 - 2*x*y - y^2\ny' = x^2 + 2*x*y - y^2");
        let t = s.table().clone();
        let report = verify_complex_pi(&s, &p(&t, "x"), &p(&t, "-y")).unwrap();
        assert_eq!(report.primary, p(&t, "x - y"));
        assert_eq!(report.secondary, Some(p(&t, "-x - y")));
    }

    #[test]
    fn complex_exp_factor_expansions() {
        // cubic system with complex partial integral x + i*y and cofactor (x + i*y)^2
        let cubic = "vars x y\nx' = x^3 - 3*x*y^2\ny' = 3*x^2*y - y^3";
        let s = sys(cubic);
        let t = s.table().clone();
        let x = p(&t, "x");
        let y = p(&t, "y");
        let zero = p(&t, "0");

        // constant z with h matching the cofactor power: parts of -h*z*W0
        let (re, im) = complex_exp_factor(&s, &x, &y, 2, &p(&t, "3"), &zero).unwrap();
        assert_eq!(re.secondary, Some(p(&t, "-6")));
        assert_eq!(im.secondary, Some(zero.clone()));

        // z = 1, h = 1 reduces to the checks on q = u and q = -v
        let (re, im) = complex_exp_factor(&s, &x, &y, 1, &p(&t, "1"), &zero).unwrap();
        let modulus = p(&t, "x^2 + y^2");
        assert_eq!(re, verify_exp_rational_pi(&s, &x, &modulus, 1).unwrap());
        assert_eq!(im, verify_exp_rational_pi(&s, &p(&t, "-y"), &modulus, 1).unwrap());
        assert_eq!(re.secondary, Some(p(&t, "-x")));
        assert_eq!(im.secondary, Some(p(&t, "-y")));

        // cubic system with two multiple-factor numerators
        let s = sys("vars x y\nx' = x - x^3 - x^2*y - y^3\ny' = y + x^3 - x^2*y + x*y^2");
        let t = s.table().clone();
        let x = p(&t, "x");
        let y = p(&t, "y");
        // z = y: parts (xy, -y^2) with cofactors (x^2 - y^2, -2xy)
        let (re, im) = complex_exp_factor(&s, &x, &y, 1, &y, &p(&t, "0")).unwrap();
        assert_eq!(re.secondary, Some(p(&t, "x^2 - y^2")));
        assert_eq!(im.secondary, Some(p(&t, "-2*x*y")));
        // z = i*y: parts (y^2, xy), cofactors scale accordingly
        let (re, im) = complex_exp_factor(&s, &x, &y, 1, &p(&t, "0"), &y).unwrap();
        assert_eq!(re.secondary, Some(p(&t, "2*x*y")));
        assert_eq!(im.secondary, Some(p(&t, "x^2 - y^2")));
    }

    #[test]
    fn manifold_checks() {
        let s = sys("vars x y\nx' = 1 + y - x^2 - x*y\ny' = 1 + x - x*y - y^2");
        let t = s.table().clone();
        assert!(integral_manifold_check(&s, &p(&t, "x + y + 1")));
        assert!(integral_manifold_check(&s, &p(&t, "1")));

        let s = sys("vars x y\nx' = -2 + y + x^2 + x*y\ny' = 4 + 2*x + x*y + y^2");
        let t = s.table().clone();
        assert!(!integral_manifold_check(&s, &p(&t, "x")));
    }
}
