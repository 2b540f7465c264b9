//! Linear solve for the exponential factors attached to a multiple
//! polynomial partial integral.
//!
//! Given a verified pair (p, M), a numerator q of bounded degree makes
//! exp(q / p^h) a partial integral exactly when
//! `Dq - h*q*M = p^h * N` with `deg_x N <= d - 1`,
//! which is linear in the unknown coefficients of q and N jointly. The
//! solution space is computed exactly; its dimensions over increasing h
//! determine the multiplicity of p.

use std::collections::BTreeSet;
use std::sync::Arc;

use algebra_core::{Matrix, MultiPoly, Scalar, VarTable};
use system_model::SystemDef;

/// Basis of the (q, N) solution space for one exponent h.
///
/// q ranges over polynomials in the states and time of total degree at
/// most `deg_q_max` (parameter-free); N is bounded by deg_x N <= d - 1
/// with time and parameter degrees bounded by what Dq - h*q*M can reach.
/// Each basis pair is normalized so q is primitive with a canonically
/// signed leading coefficient, and N carries the matching scale. Pairs
/// are sorted by the canonical print of q. The trivial solution
/// (q, N) = (p^h, 0) is not filtered here; `multiplicity` removes it.
pub fn exp_factor_basis(
    sys: &SystemDef,
    p: &MultiPoly,
    m: &MultiPoly,
    h: u32,
    deg_q_max: u32,
) -> Vec<(MultiPoly, MultiPoly)> {
    assert!(h >= 1, "exponent h must be at least 1");
    let table = sys.table();
    let q_basis = monomials_states_time(table, deg_q_max);
    let ph = p.pow(h);
    let h_scalar = Scalar::from_int(h as i64);

    // image of each q-basis monomial under q -> Dq - h*q*M
    let images: Vec<MultiPoly> = q_basis
        .iter()
        .map(|mono| &sys.derive(mono) - &(mono * m).scale(&h_scalar))
        .collect();

    // bounds for the N monomial basis, read off the images
    let time_idx = table.time_index();
    let mut t_bound = 0u32;
    let mut param_bounds = vec![0u32; table.len()];
    for img in &images {
        if let Some(ti) = time_idx {
            t_bound = t_bound.max(img.deg_in(ti).max(0) as u32);
        }
        for i in 0..table.len() {
            if !system_model::is_state(table, i) && Some(i) != time_idx {
                param_bounds[i] = param_bounds[i].max(img.deg_in(i).max(0) as u32);
            }
        }
    }
    let state_bound = (sys.degree() - 1) as u32;
    let n_basis = monomials_bounded(table, state_bound, t_bound, &param_bounds);

    // identity: sum a_i * images[i] - p^h * sum b_j * n_basis[j] = 0
    let columns: Vec<MultiPoly> = images
        .iter()
        .cloned()
        .chain(n_basis.iter().map(|mono| -&(mono * &ph)))
        .collect();
    let mut monos: BTreeSet<Vec<u32>> = BTreeSet::new();
    for c in &columns {
        for (e, _) in c.terms() {
            monos.insert(e.clone());
        }
    }
    let monos: Vec<Vec<u32>> = monos.into_iter().collect();
    let a = Matrix::from_fn(monos.len(), columns.len(), |r, c| columns[c].coeff(&monos[r]));

    let mut out = Vec::new();
    for vec in a.nullspace() {
        let q = assemble(table, &q_basis, &vec[..q_basis.len()]);
        let n = assemble(table, &n_basis, &vec[q_basis.len()..]);
        // the q-part of a nonzero solution cannot vanish: it would force
        // p^h * N = 0 and hence the whole vector to zero
        assert!(!q.is_zero());
        let qn = q.primitive_normalized();
        let scale = qn.leading_term().unwrap().1 * &q.leading_term().unwrap().1.inv();
        out.push((qn, n.scale(&scale)));
    }
    out.sort_by(|(qa, na), (qb, nb)| {
        (qa.to_string(), na.to_string()).cmp(&(qb.to_string(), nb.to_string()))
    });
    out
}

/// Multiplicity report for a verified pair (p, M): the exponential-factor
/// bases for h = 1..=h_max with numerators divisible by p removed, and
/// the multiplicity 1 + sum of the remaining dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityReport {
    pub levels: Vec<MultiplicityLevel>,
    pub kappa: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityLevel {
    pub h: u32,
    pub basis: Vec<(MultiPoly, MultiPoly)>,
}

pub fn multiplicity(
    sys: &SystemDef,
    p: &MultiPoly,
    m: &MultiPoly,
    h_max: u32,
    deg_q_max: u32,
) -> MultiplicityReport {
    let mut levels = Vec::new();
    let mut extra = 0;
    for h in 1..=h_max {
        let basis: Vec<_> = exp_factor_basis(sys, p, m, h, deg_q_max)
            .into_iter()
            .filter(|(q, _)| q.exact_div(p).is_err())
            .collect();
        extra += basis.len();
        levels.push(MultiplicityLevel { h, basis });
    }
    MultiplicityReport {
        levels,
        kappa: 1 + extra,
    }
}

fn assemble(table: &Arc<VarTable>, basis: &[MultiPoly], coords: &[Scalar]) -> MultiPoly {
    let mut out = MultiPoly::zero(table);
    for (mono, c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            out = &out + &mono.scale(c);
        }
    }
    out
}

/// Monomials in the states and time with total degree at most `bound`.
fn monomials_states_time(table: &Arc<VarTable>, bound: u32) -> Vec<MultiPoly> {
    let mut active = table.state_indices();
    if let Some(ti) = table.time_index() {
        active.push(ti);
    }
    enumerate(table, &active, &vec![bound; active.len()], |exps| {
        exps.iter().sum::<u32>() <= bound
    })
}

/// Monomials with state total degree <= `state_bound`, time degree <=
/// `t_bound`, and each parameter degree within its own bound.
fn monomials_bounded(
    table: &Arc<VarTable>,
    state_bound: u32,
    t_bound: u32,
    param_bounds: &[u32],
) -> Vec<MultiPoly> {
    let states = table.state_indices();
    let mut active = states.clone();
    let mut caps = vec![state_bound; states.len()];
    if let Some(ti) = table.time_index() {
        active.push(ti);
        caps.push(t_bound);
    }
    for i in 0..table.len() {
        if !system_model::is_state(table, i) && Some(i) != table.time_index() {
            active.push(i);
            caps.push(param_bounds[i]);
        }
    }
    let states_set: Vec<usize> = states;
    enumerate(table, &active, &caps, move |exps| {
        let state_sum: u32 = states_set.iter().map(|&i| exps[i]).sum();
        state_sum <= state_bound
    })
}

/// All monomials whose exponent in `active[k]` is at most `caps[k]` (zero
/// elsewhere) and which satisfy `keep` on the full exponent vector.
fn enumerate(
    table: &Arc<VarTable>,
    active: &[usize],
    caps: &[u32],
    keep: impl Fn(&[u32]) -> bool,
) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; table.len()];
    fn rec(
        table: &Arc<VarTable>,
        active: &[usize],
        caps: &[u32],
        keep: &impl Fn(&[u32]) -> bool,
        exps: &mut Vec<u32>,
        k: usize,
        out: &mut Vec<MultiPoly>,
    ) {
        if k == active.len() {
            if keep(exps) {
                out.push(MultiPoly::monomial(table, exps.clone(), Scalar::one()));
            }
            return;
        }
        for e in 0..=caps[k] {
            exps[active[k]] = e;
            rec(table, active, caps, keep, exps, k + 1, out);
        }
        exps[active[k]] = 0;
    }
    rec(table, active, caps, &keep, &mut exps, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{p, sys};

    #[test]
    fn quartic_vortex_has_a_double_factor() {
        let s = sys(
            "vars x y\nx' = -y*(2*x^2 + y^2 + (x^2 + y^2)^2)\ny' = x*(2*x^2 + y^2 + 2*(x^2 + y^2)^2)",
        );
        let t = s.table().clone();
        let circle = p(&t, "x^2 + y^2");
        let m = p(&t, "2*x*y*(x^2 + y^2)");
        let report = multiplicity(&s, &circle, &m, 1, 2);
        assert_eq!(report.kappa, 2);
        assert_eq!(report.levels.len(), 1);
        assert_eq!(report.levels[0].h, 1);
        assert_eq!(
            report.levels[0].basis,
            vec![(p(&t, "1"), p(&t, "-2*x*y"))]
        );
    }

    #[test]
    fn cubic_focus_has_a_double_factor() {
        let s = sys("vars x y\nx' = -y + x*(x^2 + y^2)\ny' = x + y*(x^2 + y^2)");
        let t = s.table().clone();
        let circle = p(&t, "x^2 + y^2");
        let m = p(&t, "2*(x^2 + y^2)");
        let report = multiplicity(&s, &circle, &m, 1, 2);
        assert_eq!(report.kappa, 2);
        assert_eq!(
            report.levels[0].basis,
            vec![(p(&t, "1"), p(&t, "-2"))]
        );
    }

    #[test]
    fn unfiltered_basis_contains_the_trivial_power_pair() {
        let s = sys("vars x y\nx' = -y + x*(x^2 + y^2)\ny' = x + y*(x^2 + y^2)");
        let t = s.table().clone();
        let circle = p(&t, "x^2 + y^2");
        let m = p(&t, "2*(x^2 + y^2)");
        let basis = exp_factor_basis(&s, &circle, &m, 1, 2);
        assert!(basis.contains(&(circle.clone(), p(&t, "0"))));
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn stationary_states_give_constant_numerators() {
        let s = sys("vars x y z\nx' = y*z\ny' = 0\nz' = 0");
        let t = s.table().clone();
        let y = p(&t, "y");
        let zero = p(&t, "0");

        let report = multiplicity(&s, &y, &zero, 1, 0);
        assert_eq!(report.kappa, 2);
        assert_eq!(report.levels[0].basis, vec![(p(&t, "1"), zero.clone())]);

        // at degree 1 the space grows: constants, the other stationary
        // state, and x itself (Dx = y*z = y * z)
        let report = multiplicity(&s, &y, &zero, 1, 1);
        assert_eq!(
            report.levels[0].basis,
            vec![
                (p(&t, "1"), zero.clone()),
                (p(&t, "x"), p(&t, "z")),
                (p(&t, "z"), zero.clone()),
            ]
        );
        assert_eq!(report.kappa, 4);
    }
}
