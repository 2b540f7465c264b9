//! The three searches that reduce to a single exact linear solve: fixed
//! cofactor, conditional factors, and exponential-factor numerators.

use crate::{assemble, monomial_basis, SearchError};
use algebra_core::{cmp_monomials, Matrix, MultiPoly};
use pi_verify::{exp_factor_basis, verify_poly_pi};
use std::collections::BTreeSet;
use system_model::SystemDef;

/// Monomials (descending canonical order) appearing in any of the given
/// polynomials, optionally restricted by a predicate on the exponent vector.
fn observed_monomials<'a>(
    polys: impl Iterator<Item = &'a MultiPoly>,
    table: &std::sync::Arc<algebra_core::VarTable>,
    keep: impl Fn(&[u32]) -> bool,
) -> Vec<Vec<u32>> {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for p in polys {
        for (e, _) in p.terms() {
            if keep(e) {
                seen.insert(e.clone());
            }
        }
    }
    let mut rows: Vec<Vec<u32>> = seen.into_iter().collect();
    rows.sort_by(|a, b| cmp_monomials(table, b, a));
    rows
}

/// Nullspace of the map `basis coefficients -> stacked image coordinates`.
fn image_nullspace(images: &[MultiPoly], rows: &[Vec<u32>]) -> Vec<Vec<algebra_core::Scalar>> {
    if rows.is_empty() {
        // No constraints: the whole coefficient space solves the system.
        return (0..images.len())
            .map(|j| {
                let mut v = vec![algebra_core::Scalar::zero(); images.len()];
                v[j] = algebra_core::Scalar::one();
                v
            })
            .collect();
    }
    let a = Matrix::from_fn(rows.len(), images.len(), |i, j| images[j].coeff(&rows[i]));
    a.nullspace()
}

/// All polynomials `p` in states and time with total degree at most `k` and
/// `Dp = pM` for the prescribed cofactor `M`, as a content-normalized basis
/// of the solution space, sorted by rendering. Parameters may appear in `M`
/// and the system but not in the candidate monomials.
pub fn search_fixed_cofactor(
    sys: &SystemDef,
    m: &MultiPoly,
    k: u32,
) -> Result<Vec<MultiPoly>, SearchError> {
    let bound = sys.degree() - 1;
    if m.deg_state() > bound {
        return Err(SearchError::CofactorDegree { got: m.deg_state(), bound });
    }
    let table = sys.table();
    let basis = monomial_basis(table, 0, k, true);
    let images: Vec<MultiPoly> = basis
        .iter()
        .map(|e| {
            let mono = MultiPoly::monomial(table, e.clone(), algebra_core::Scalar::one());
            &sys.derive(&mono) - &(&mono * m)
        })
        .collect();
    let rows = observed_monomials(images.iter(), table, |_| true);
    let mut out: Vec<MultiPoly> = image_nullspace(&images, &rows)
        .into_iter()
        .map(|v| assemble(table, &basis, &v).primitive_normalized())
        .collect();
    out.sort_by_key(|p| p.to_string());
    Ok(out)
}

/// Polynomials `p` of state degree 1..=k whose derivative along the system
/// already satisfies the cofactor bound `deg_x(Dp) <= d - 1`, so `exp(p)` is
/// a partial integral with cofactor `Dp`. Constants solve this trivially and
/// are excluded from the candidate space.
pub fn search_conditional(
    sys: &SystemDef,
    k: u32,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    if k == 0 {
        return Err(SearchError::Unsupported(
            "the degree bound must be at least 1".into(),
        ));
    }
    let table = sys.table();
    let d = sys.degree();
    let basis = monomial_basis(table, 1, k, false);
    let images: Vec<MultiPoly> = basis
        .iter()
        .map(|e| sys.derive(&MultiPoly::monomial(table, e.clone(), algebra_core::Scalar::one())))
        .collect();
    // Only the coefficients at state degree >= d constrain the candidates.
    let rows = observed_monomials(images.iter(), table, |e| {
        let deg: u32 = table.state_indices().iter().map(|&i| e[i]).sum();
        i64::from(deg) >= d
    });
    let mut out: Vec<(MultiPoly, MultiPoly)> = image_nullspace(&images, &rows)
        .into_iter()
        .map(|v| {
            let p = assemble(table, &basis, &v).primitive_normalized();
            let m = sys.derive(&p);
            (p, m)
        })
        .collect();
    out.sort_by_key(|(p, _)| p.to_string());
    Ok(out)
}

/// Numerator/cofactor pairs `(q, N)` with `Dq = h q M + p^h N` over the
/// verified base pair `(p, M)`, with `deg q <= deg_q` in states and time.
/// Returns the same basis as `pi_verify::exp_factor_basis`, after checking
/// that `p` really is a Darboux polynomial with cofactor `M`.
pub fn search_exp_factor(
    sys: &SystemDef,
    p: &MultiPoly,
    m: &MultiPoly,
    h: u32,
    deg_q: u32,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    if h == 0 {
        return Err(SearchError::Base(pi_verify::VerifyError::ZeroExponent));
    }
    let report = verify_poly_pi(sys, p)?;
    if &report.primary != m {
        return Err(SearchError::CofactorMismatch {
            got: m.clone(),
            expected: report.primary,
        });
    }
    Ok(exp_factor_basis(sys, p, m, h, deg_q))
}
