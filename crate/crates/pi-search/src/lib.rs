//! Bounded-degree search for partial integrals of polynomial ODE systems.
//!
//! Four searches, all exact over the rationals:
//!
//! - [`search_planar`]: complete Darboux-polynomial search for planar
//!   autonomous systems up to a state-degree bound, driven by the
//!   factorization of `x*Q_d - y*P_d` (the top-degree parts of the right
//!   hand side) and exact linear algebra for the lower-degree tail.
//! - [`search_fixed_cofactor`]: the linear space of polynomials with a
//!   prescribed cofactor, any number of states, time-dependent right hand
//!   sides allowed.
//! - [`search_conditional`]: polynomials whose derivative along the system
//!   already satisfies the cofactor degree bound, so `exp(p)` is a factor.
//! - [`search_exp_factor`]: numerator/cofactor pairs `(q, N)` with
//!   `Dq = h q M + p^h N` over a verified base pair `(p, M)`.
//!
//! Results come back content-normalized and sorted by their canonical
//! rendering, so runs are reproducible byte for byte. With the default
//! `parallel` feature, candidate evaluation in [`search_planar`] fans out
//! over a rayon pool; the sequential path is kept compiled for comparison
//! benchmarks.

use algebra_core::{cmp_monomials, MultiPoly, Role, Scalar, VarTable};
use std::sync::Arc;
use thiserror::Error;

mod linear;
mod planar;

pub use linear::{search_conditional, search_exp_factor, search_fixed_cofactor};
pub use planar::search_planar;
#[doc(hidden)]
pub use planar::search_planar_sequential;

/// Degree bound and knobs for the planar Darboux search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// State-degree bound `k >= 1`; results have state degree exactly `k`.
    pub degree: u32,
    /// Optional prescribed cofactor. The planar search ignores it; the CLI
    /// routes configs with a cofactor to [`search_fixed_cofactor`].
    pub cofactor: Option<MultiPoly>,
    /// Abort threshold for the number of top-part candidates at one degree.
    pub candidate_cap: usize,
}

impl SearchConfig {
    /// Cap from `DARBOUX_CANDIDATE_CAP` when set, otherwise 10000.
    pub fn new(degree: u32) -> Self {
        let cap = std::env::var("DARBOUX_CANDIDATE_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(10_000);
        SearchConfig { degree, cofactor: None, candidate_cap: cap }
    }

    pub fn with_cofactor(mut self, m: MultiPoly) -> Self {
        self.cofactor = Some(m);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.candidate_cap = cap;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    /// Top-part candidate enumeration outgrew the configured cap.
    #[error("{count} top-part candidates at degree {degree} exceed the cap {cap}")]
    CandidateCap { count: usize, degree: u32, cap: usize },
    /// The system falls outside what the complete planar search handles.
    #[error("unsupported system for the planar search: {0}")]
    Unsupported(String),
    /// A prescribed cofactor breaks the degree bound `deg M <= d - 1`.
    #[error("the prescribed cofactor has state degree {got}, above the bound d - 1 = {bound}")]
    CofactorDegree { got: i64, bound: i64 },
    /// The base pair handed to the exponential-factor search fails to verify.
    #[error("the base pair does not verify: {0}")]
    Base(#[from] pi_verify::VerifyError),
    /// The base polynomial verifies, but against a different cofactor.
    #[error("the supplied cofactor `{got}` differs from the verified cofactor `{expected}`")]
    CofactorMismatch { got: MultiPoly, expected: MultiPoly },
}

/// Monomial exponent vectors over the given roles with total degree in
/// `min_deg..=max_deg`, in descending canonical order.
pub(crate) fn monomial_basis(
    table: &Arc<VarTable>,
    min_deg: u32,
    max_deg: u32,
    include_time: bool,
) -> Vec<Vec<u32>> {
    let mut vars: Vec<usize> = (0..table.len())
        .filter(|&i| match table.role(i) {
            Role::State => true,
            Role::Time => include_time,
            Role::Param => false,
        })
        .collect();
    vars.sort_unstable();
    let mut out = Vec::new();
    let mut exps = vec![0u32; table.len()];
    fn rec(
        vars: &[usize],
        pos: usize,
        left: u32,
        min_deg: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == vars.len() {
            let used: u32 = vars.iter().map(|&i| exps[i]).sum();
            if used >= min_deg {
                out.push(exps.clone());
            }
            return;
        }
        for e in 0..=left {
            exps[vars[pos]] = e;
            rec(vars, pos + 1, left - e, min_deg, exps, out);
            exps[vars[pos]] = 0;
        }
    }
    rec(&vars, 0, max_deg, min_deg, &mut exps, &mut out);
    out.sort_by(|a, b| cmp_monomials(table, b, a));
    out
}

/// State monomials of total degree exactly `k`, descending canonical order.
pub(crate) fn homogeneous_basis(table: &Arc<VarTable>, k: u32) -> Vec<Vec<u32>> {
    monomial_basis(table, k, k, false)
}

/// Coordinates of `p` over `monos`; panics if a term falls outside the list.
pub(crate) fn poly_coords(p: &MultiPoly, monos: &[Vec<u32>]) -> Vec<Scalar> {
    let mut coords = vec![Scalar::zero(); monos.len()];
    let index: std::collections::HashMap<&[u32], usize> =
        monos.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    for (e, c) in p.terms() {
        let i = index
            .get(e.as_slice())
            .unwrap_or_else(|| panic!("term {:?} outside the monomial basis", e));
        coords[*i] = c.clone();
    }
    coords
}

pub(crate) fn assemble(
    table: &Arc<VarTable>,
    monos: &[Vec<u32>],
    coords: &[Scalar],
) -> MultiPoly {
    let mut p = MultiPoly::zero(table);
    for (m, c) in monos.iter().zip(coords) {
        if !c.is_zero() {
            p = &p + &MultiPoly::monomial(table, m.clone(), c.clone());
        }
    }
    p
}
