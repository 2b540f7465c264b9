//! Degree-bounded search for Darboux polynomials of planar autonomous
//! systems with rational coefficients.
//!
//! The search keys on the top-degree grade of the identity `Dp = p M`.
//! Writing `X_d` for the degree-`d` homogeneous part of the field and `p_k`
//! for the leading form of a solution, the grade `k + d - 1` component reads
//! `X_d . grad p_k = M_{d-1} p_k`. Two regimes follow:
//!
//! * Radial top part, `X_d = S (x d/dx + y d/dy)`: the Euler identity forces
//!   `M_{d-1} = k S`, and for `d <= 2` the defect `p -> Dp - k S p` is an
//!   endomorphism of the degree-`k` coefficient space, so the remaining
//!   cofactor constant is an eigenvalue of an exact rational matrix.
//! * Otherwise `x (X_d . grad p_k) = k P_d p_k + R dp_k/dy` with
//!   `R = x Q_d - y P_d`, and likewise with `y`, so every irreducible factor
//!   of `p_k` divides `R`. Leading forms are enumerated as products of the
//!   irreducible factors of `R`; each candidate reduces to exact linear
//!   algebra for the tail and the unknown cofactor grades.
//!
//! Searches refuse, rather than silently truncate, the configurations their
//! linear reductions cannot decide: radial tops of degree three or higher,
//! and candidates whose cofactor grades are not pinned down by the leading
//! form alone.

use crate::{assemble, homogeneous_basis, monomial_basis, poly_coords, SearchConfig, SearchError};
use algebra_core::{
    det_poly, factor_univariate, rational_roots, solve_linear, Matrix, MultiPoly, Role, Scalar,
    VarTable,
};
use pi_verify::verify_poly_pi;
use std::collections::BTreeMap;
use std::sync::Arc;
use system_model::SystemDef;

#[derive(Copy, Clone, PartialEq, Eq)]
enum ExecMode {
    Parallel,
    Sequential,
}

/// All Darboux polynomials of the planar system up to `cfg.degree`, as
/// `(polynomial, cofactor)` pairs grouped by ascending degree.
///
/// Results are primitive with a positive leading coefficient, and products
/// of lower-degree results are omitted: each reported polynomial is new at
/// its degree modulo such products with the same cofactor. The search
/// requires an autonomous parameter-free system in exactly two states;
/// anything else is refused as `Unsupported`, as are the regimes where the
/// cofactor cannot be pinned down by exact linear algebra. A prescribed
/// cofactor in `cfg` is ignored here; see `search_fixed_cofactor` for that.
pub fn search_planar(
    sys: &SystemDef,
    cfg: &SearchConfig,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    search_planar_impl(sys, cfg, ExecMode::Parallel)
}

/// Single-threaded variant kept as a benchmark baseline.
#[doc(hidden)]
pub fn search_planar_sequential(
    sys: &SystemDef,
    cfg: &SearchConfig,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    search_planar_impl(sys, cfg, ExecMode::Sequential)
}

fn search_planar_impl(
    sys: &SystemDef,
    cfg: &SearchConfig,
    mode: ExecMode,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    validate(sys)?;
    if cfg.degree == 0 {
        return Err(SearchError::Unsupported(
            "the degree bound must be at least 1".into(),
        ));
    }
    let mut levels: Vec<Vec<(MultiPoly, MultiPoly)>> = Vec::new();
    for k in 1..=cfg.degree {
        let raw = search_level(sys, k, cfg.candidate_cap, mode)?;
        let found = finalize_level(sys, k, raw);
        levels.push(novelty_reduce(sys, k, found, &levels));
    }
    Ok(levels.concat())
}

fn validate(sys: &SystemDef) -> Result<(), SearchError> {
    let table = sys.table();
    if table.state_count() != 2 {
        return Err(SearchError::Unsupported(
            "the search handles exactly two state variables".into(),
        ));
    }
    if let Some(ti) = table.time_index() {
        if sys.rhs().iter().any(|f| f.depends_on(ti)) {
            return Err(SearchError::Unsupported(
                "the system must be autonomous".into(),
            ));
        }
    }
    for i in 0..table.len() {
        if table.role(i) == Role::Param && sys.rhs().iter().any(|f| f.depends_on(i)) {
            return Err(SearchError::Unsupported(format!(
                "the right-hand sides must be free of parameters, found `{}`",
                table.name(i)
            )));
        }
    }
    Ok(())
}

/// Raw degree-`k` solutions, before normalization and novelty filtering.
fn search_level(
    sys: &SystemDef,
    k: u32,
    cap: usize,
    mode: ExecMode,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    let table = sys.table();
    let d = sys.degree() as u32;
    let si = table.state_indices();
    let x = MultiPoly::var(table, si[0]);
    let y = MultiPoly::var(table, si[1]);
    let pd = sys.rhs()[0].state_homogeneous_part(d);
    let qd = sys.rhs()[1].state_homogeneous_part(d);
    let r = &(&x * &qd) - &(&y * &pd);
    if r.is_zero() {
        // x Q_d = y P_d forces P_d = x S, Q_d = y S.
        let s = pd
            .exact_div(&x)
            .expect("a radial top part is divisible by x");
        return match d {
            1 => Ok(radial_linear(sys, k, &s)),
            2 => radial_quadratic(sys, k, &s),
            _ => Err(SearchError::Unsupported(
                "radial top part with system degree 3 or higher".into(),
            )),
        };
    }
    let candidates = top_part_candidates(&r, k, cap, si[0], si[1])?;
    run_candidates(mode, &candidates, |cand| {
        candidate_solutions(sys, cand, k, d)
    })
}

fn run_candidates<F>(
    mode: ExecMode,
    cands: &[MultiPoly],
    eval: F,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError>
where
    F: Fn(&MultiPoly) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> + Sync,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        let nested = cands
            .par_iter()
            .map(&eval)
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(nested.concat());
    }
    #[cfg(not(feature = "parallel"))]
    let _ = mode;
    let nested = cands.iter().map(eval).collect::<Result<Vec<_>, _>>()?;
    Ok(nested.concat())
}

/// Radial top, d = 1: `M = k S` is a known constant and the solution set is
/// the kernel of `p -> Dp - M p` on the degree-`k` coefficient space. Any
/// kernel vector has exact degree k: a lower top grade j would need
/// `(j - k) S p_j = 0`.
fn radial_linear(sys: &SystemDef, k: u32, s: &MultiPoly) -> Vec<(MultiPoly, MultiPoly)> {
    let table = sys.table();
    let m = s.scale(&Scalar::from_int(i64::from(k)));
    let vk = monomial_basis(table, 0, k, false);
    let cols: Vec<Vec<Scalar>> = vk
        .iter()
        .map(|e| {
            let mono = MultiPoly::monomial(table, e.clone(), Scalar::one());
            poly_coords(&(&sys.derive(&mono) - &(&mono * &m)), &vk)
        })
        .collect();
    let a = Matrix::from_fn(vk.len(), vk.len(), |i, j| cols[j][i].clone());
    a.nullspace()
        .into_iter()
        .map(|v| (assemble(table, &vk, &v), m.clone()))
        .collect()
}

/// Radial top, d = 2: `M = k S + c` with `S` linear and `c` an unknown
/// constant. The defect `T(p) = Dp - k S p` maps the degree-`k` coefficient
/// space into itself (the Euler identity cancels the top grade), so the
/// admissible constants are the rational eigenvalues of `T` and the
/// solutions are the corresponding kernels.
fn radial_quadratic(
    sys: &SystemDef,
    k: u32,
    s: &MultiPoly,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    let table = sys.table();
    let ks = s.scale(&Scalar::from_int(i64::from(k)));
    let vk = monomial_basis(table, 0, k, false);
    let n = vk.len();
    let cols: Vec<Vec<Scalar>> = vk
        .iter()
        .map(|e| {
            let mono = MultiPoly::monomial(table, e.clone(), Scalar::one());
            poly_coords(&(&sys.derive(&mono) - &(&mono * &ks)), &vk)
        })
        .collect();
    let t = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let lt = VarTable::new(vec![("lambda".to_string(), Role::State)]);
    let lam = MultiPoly::var(&lt, 0);
    let char_rows: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = MultiPoly::constant(&lt, t.get(i, j).clone());
                    if i == j {
                        &c - &lam
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let cp = det_poly(&char_rows);
    let roots = rational_roots(&cp, 0).map_err(|e| {
        SearchError::Unsupported(format!("could not solve the cofactor eigenproblem: {e}"))
    })?;
    let mut out = Vec::new();
    for (root, _) in roots {
        let lam_s = Scalar::from_rational(root);
        let shifted = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                t.get(i, j) - &lam_s
            } else {
                t.get(i, j).clone()
            }
        });
        let m = &ks + &MultiPoly::constant(table, lam_s);
        for v in shifted.nullspace() {
            out.push((assemble(table, &vk, &v), m.clone()));
        }
    }
    Ok(out)
}

/// Leading-form candidates of degree `k`: products of the irreducible
/// homogeneous factors of `R = x Q_d - y P_d`, with unbounded multiplicity.
fn top_part_candidates(
    r: &MultiPoly,
    k: u32,
    cap: usize,
    xi: usize,
    yi: usize,
) -> Result<Vec<MultiPoly>, SearchError> {
    let table = r.table();
    let rp = r.primitive_normalized();
    let a = rp.terms().map(|(e, _)| e[xi]).min().unwrap();
    let b = rp.terms().map(|(e, _)| e[yi]).min().unwrap();
    let mut strip = vec![0u32; table.len()];
    strip[xi] = a;
    strip[yi] = b;
    let core = rp
        .exact_div(&MultiPoly::monomial(table, strip, Scalar::one()))
        .expect("the monomial content divides");
    let mut factors: Vec<MultiPoly> = Vec::new();
    if a > 0 {
        factors.push(MultiPoly::var(table, xi));
    }
    if b > 0 {
        factors.push(MultiPoly::var(table, yi));
    }
    if core.deg_state() > 0 {
        // The stripped core has terms at both pure powers, so dehomogenizing
        // at y = 1 keeps the degree and every factor homogenizes back.
        let u = core.eval_partial(yi, &Scalar::one());
        let fac = factor_univariate(&u, xi).map_err(|e| {
            SearchError::Unsupported(format!("could not factor the top-part resultant: {e}"))
        })?;
        if !fac.all_certified() {
            return Err(SearchError::Unsupported(
                "could not certify the factorization of the top-part resultant".into(),
            ));
        }
        for f in &fac.factors {
            factors.push(homogenize(&f.poly, xi, yi));
        }
    }
    factors.sort_by_key(MultiPoly::to_string);
    let degs: Vec<u32> = factors.iter().map(|f| f.deg_state() as u32).collect();
    // Count the multisets first so an oversized family fails fast.
    let mut ways = vec![0u128; k as usize + 1];
    ways[0] = 1;
    for &c in &degs {
        for deg in c as usize..=k as usize {
            ways[deg] += ways[deg - c as usize];
        }
    }
    if ways[k as usize] > cap as u128 {
        return Err(SearchError::CandidateCap {
            count: usize::try_from(ways[k as usize]).unwrap_or(usize::MAX),
            degree: k,
            cap,
        });
    }
    let mut out = Vec::new();
    let one = MultiPoly::constant(table, Scalar::one());
    materialize(&factors, &degs, 0, k, &one, &mut out);
    Ok(out)
}

fn materialize(
    factors: &[MultiPoly],
    degs: &[u32],
    idx: usize,
    remaining: u32,
    acc: &MultiPoly,
    out: &mut Vec<MultiPoly>,
) {
    if remaining == 0 {
        out.push(acc.primitive_normalized());
        return;
    }
    if idx == factors.len() {
        return;
    }
    let mut cur = acc.clone();
    let mut used = 0u32;
    loop {
        materialize(factors, degs, idx + 1, remaining - used * degs[idx], &cur, out);
        used += 1;
        if used * degs[idx] > remaining {
            break;
        }
        cur = &cur * &factors[idx];
    }
}

/// Rebuilds the homogeneous factor from its dehomogenization at y = 1.
fn homogenize(f: &MultiPoly, xi: usize, yi: usize) -> MultiPoly {
    let table = f.table();
    let coeffs = f.coeffs_in(xi);
    let df = coeffs.len() - 1;
    let mut acc = MultiPoly::zero(table);
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u32; table.len()];
        e[xi] = j as u32;
        e[yi] = (df - j) as u32;
        acc = &acc + &(c * &MultiPoly::monomial(table, e, Scalar::one()));
    }
    acc.primitive_normalized()
}

/// Solutions with the given leading form, dispatched on the field degree.
fn candidate_solutions(
    sys: &SystemDef,
    cand: &MultiPoly,
    k: u32,
    d: u32,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    let top = sys.derive(cand).state_homogeneous_part(k + d - 1);
    let Ok(m_top) = top.exact_div(cand) else {
        return Ok(Vec::new());
    };
    match d {
        2 => pencil_solutions(sys, cand, k, &m_top),
        _ => graded_chain(sys, cand, k, d, m_top),
    }
}

/// d = 2 with a non-radial top: the cofactor is `m1 + c` with `m1` known
/// from the leading form and `c` an unknown constant, so solutions with the
/// given leading form are kernel vectors of the rectangular pencil
/// `A - c B` over the candidate-plus-tail coefficient space. The pencil has
/// full column rank over Q(c), so probing a handful of integer shifts finds
/// a row subset whose square minor is a nonzero polynomial in `c`; its
/// rational roots cover every rank drop, and each root is confirmed by an
/// actual kernel computation.
fn pencil_solutions(
    sys: &SystemDef,
    cand: &MultiPoly,
    k: u32,
    m1: &MultiPoly,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    let table = sys.table();
    let vk = monomial_basis(table, 0, k, false);
    let tail = monomial_basis(table, 0, k - 1, false);
    let image = |p: &MultiPoly| -> MultiPoly { &sys.derive(p) - &(p * m1) };
    let mut a_cols: Vec<Vec<Scalar>> = vec![poly_coords(&image(cand), &vk)];
    let mut b_cols: Vec<Vec<Scalar>> = vec![poly_coords(cand, &vk)];
    for e in &tail {
        let mono = MultiPoly::monomial(table, e.clone(), Scalar::one());
        a_cols.push(poly_coords(&image(&mono), &vk));
        b_cols.push(poly_coords(&mono, &vk));
    }
    let n = a_cols.len();
    let mut det = None;
    for probe in 0..=n as i64 {
        let shift = Scalar::from_int(probe);
        // Pivot columns of the transpose are independent rows of the pencil.
        let tr = Matrix::from_fn(n, vk.len(), |i, j| {
            &a_cols[i][j] - &(&shift * &b_cols[i][j])
        });
        let (_, pivots) = tr.rref();
        if pivots.len() < n {
            continue; // the probe itself sits on a rank drop; try another
        }
        let lt = VarTable::new(vec![("lambda".to_string(), Role::State)]);
        let lam = MultiPoly::var(&lt, 0);
        let minor: Vec<Vec<MultiPoly>> = pivots
            .iter()
            .map(|&r| {
                (0..n)
                    .map(|c| {
                        let av = MultiPoly::constant(&lt, a_cols[c][r].clone());
                        let bv = MultiPoly::constant(&lt, b_cols[c][r].clone());
                        &av - &(&lam * &bv)
                    })
                    .collect()
            })
            .collect();
        det = Some(det_poly(&minor));
        break;
    }
    let Some(det) = det else {
        return Err(SearchError::Unsupported("degenerate cofactor pencil".into()));
    };
    let roots = rational_roots(&det, 0).map_err(|e| {
        SearchError::Unsupported(format!("could not solve the cofactor pencil: {e}"))
    })?;
    let mut out = Vec::new();
    for (root, _) in roots {
        let lam_s = Scalar::from_rational(root);
        let pencil = Matrix::from_fn(vk.len(), n, |r, c| {
            &a_cols[c][r] - &(&lam_s * &b_cols[c][r])
        });
        let kernel = pencil.nullspace();
        if kernel.is_empty() {
            continue;
        }
        // Echelonizing the kernel reduces the candidate completion modulo
        // any lower-degree solutions that share the cofactor (their leading
        // coordinate is zero); those resurface at their own degree.
        let (rr, pivots) = Matrix::from_rows(kernel).rref();
        if pivots.first() != Some(&0) {
            continue;
        }
        let coords: Vec<Scalar> = (1..n).map(|j| rr.get(0, j).clone()).collect();
        let q = assemble(table, &tail, &coords);
        out.push((cand + &q, m1 + &MultiPoly::constant(table, lam_s)));
    }
    Ok(out)
}

/// d = 1 or d >= 3 with a non-radial top. The cofactor grades are recovered
/// top-down: restricted to total degrees >= k + i, the identity is linear in
/// the tail and in the single grade `M_i`, because every product of two
/// unknowns lands strictly lower. Each step must pin `M_i` uniquely;
/// otherwise the search refuses. With the cofactor fixed, one final solve
/// yields the tail (free coordinates zero, so representatives are reduced
/// against lower-degree solutions with the same cofactor).
fn graded_chain(
    sys: &SystemDef,
    cand: &MultiPoly,
    k: u32,
    d: u32,
    m_top: MultiPoly,
) -> Result<Vec<(MultiPoly, MultiPoly)>, SearchError> {
    let table = sys.table();
    let tail = monomial_basis(table, 0, k - 1, false);
    let tail_polys: Vec<MultiPoly> = tail
        .iter()
        .map(|e| MultiPoly::monomial(table, e.clone(), Scalar::one()))
        .collect();
    let mut m_known = m_top;
    if d >= 2 {
        for i in (0..=d - 2).rev() {
            let host = homogeneous_basis(table, i);
            let rows = monomial_basis(table, k + i, k + d - 1, false);
            let q_cols: Vec<MultiPoly> = tail_polys
                .iter()
                .map(|m| &sys.derive(m) - &(m * &m_known))
                .collect();
            let host_cols: Vec<MultiPoly> = host
                .iter()
                .map(|e| -&(cand * &MultiPoly::monomial(table, e.clone(), Scalar::one())))
                .collect();
            let ncols = q_cols.len() + host_cols.len();
            let a = Matrix::from_fn(rows.len(), ncols, |r, c| {
                if c < q_cols.len() {
                    q_cols[c].coeff(&rows[r])
                } else {
                    host_cols[c - q_cols.len()].coeff(&rows[r])
                }
            });
            let resid = -&(&sys.derive(cand) - &(cand * &m_known));
            let b: Vec<Scalar> = rows.iter().map(|e| resid.coeff(e)).collect();
            let sol = solve_linear(&a, &b);
            let Some(part) = sol.particular else {
                return Ok(Vec::new());
            };
            for v in &sol.nullspace {
                if v[q_cols.len()..].iter().any(|sc| !sc.is_zero()) {
                    return Err(SearchError::Unsupported(format!(
                        "the cofactor grades of a degree {k} candidate are not determined by its leading form"
                    )));
                }
            }
            let mut m_i = MultiPoly::zero(table);
            for (l, e) in host.iter().enumerate() {
                let c = part[q_cols.len() + l].clone();
                if !c.is_zero() {
                    m_i = &m_i + &MultiPoly::monomial(table, e.clone(), c);
                }
            }
            m_known = &m_known + &m_i;
        }
    }
    let rows = monomial_basis(table, 0, k + d - 1, false);
    let q_cols: Vec<MultiPoly> = tail_polys
        .iter()
        .map(|m| &sys.derive(m) - &(m * &m_known))
        .collect();
    let a = Matrix::from_fn(rows.len(), q_cols.len(), |r, c| q_cols[c].coeff(&rows[r]));
    let resid = -&(&sys.derive(cand) - &(cand * &m_known));
    let b: Vec<Scalar> = rows.iter().map(|e| resid.coeff(e)).collect();
    let sol = solve_linear(&a, &b);
    let Some(part) = sol.particular else {
        return Ok(Vec::new());
    };
    let q = assemble(table, &tail, &part);
    Ok(vec![(cand + &q, m_known)])
}

/// Normalizes, keeps exact degree k, re-checks every pair, and dedups.
fn finalize_level(
    sys: &SystemDef,
    k: u32,
    raw: Vec<(MultiPoly, MultiPoly)>,
) -> Vec<(MultiPoly, MultiPoly)> {
    let mut out = Vec::new();
    for (p, m) in raw {
        let p = p.primitive_normalized();
        if p.deg_state() != i64::from(k) {
            continue;
        }
        let report =
            verify_poly_pi(sys, &p).expect("a searched polynomial must verify as a partial integral");
        assert_eq!(report.primary, m, "cofactor mismatch for a searched polynomial");
        out.push((p, m));
    }
    dedup_sort(out)
}

fn dedup_sort(items: Vec<(MultiPoly, MultiPoly)>) -> Vec<(MultiPoly, MultiPoly)> {
    let mut map: BTreeMap<(String, String), (MultiPoly, MultiPoly)> = BTreeMap::new();
    for (p, m) in items {
        map.insert((p.to_string(), m.to_string()), (p, m));
    }
    map.into_values().collect()
}

/// Incremental Gaussian reducer over exact scalars.
struct Reducer {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Reducer {
    fn new() -> Self {
        Reducer { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (piv, row) in &self.rows {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a = &*a - &(&f * b);
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Scalar>) {
        let r = self.reduce(v);
        if let Some(piv) = r.iter().position(|s| !s.is_zero()) {
            let inv = r[piv].inv();
            let norm: Vec<Scalar> = r.iter().map(|s| s * &inv).collect();
            self.rows.push((piv, norm));
        }
    }
}

/// Drops what a product of lower-degree findings already explains: each
/// degree-`k` result is reduced modulo the span of the total-degree-`k`
/// products that share its cofactor, and kept only if something remains.
fn novelty_reduce(
    sys: &SystemDef,
    k: u32,
    found: Vec<(MultiPoly, MultiPoly)>,
    levels: &[Vec<(MultiPoly, MultiPoly)>],
) -> Vec<(MultiPoly, MultiPoly)> {
    if found.is_empty() {
        return found;
    }
    let table = sys.table();
    let vk = monomial_basis(table, 0, k, false);
    let mut groups: BTreeMap<String, Reducer> = BTreeMap::new();
    for (p, m) in lower_degree_products(table, k, levels) {
        groups
            .entry(m.to_string())
            .or_insert_with(Reducer::new)
            .insert(poly_coords(&p, &vk));
    }
    let mut out = Vec::new();
    for (p, m) in found {
        let novel = match groups.get(&m.to_string()) {
            None => Some(p),
            Some(red) => {
                let residue = red.reduce(poly_coords(&p, &vk));
                if residue.iter().all(Scalar::is_zero) {
                    None
                } else {
                    Some(assemble(table, &vk, &residue).primitive_normalized())
                }
            }
        };
        if let Some(p) = novel {
            if p.deg_state() == i64::from(k) {
                out.push((p, m));
            }
        }
    }
    dedup_sort(out)
}

/// Products of earlier findings with total degree exactly `k`, with the
/// summed cofactors. Factors all have degree below `k`, so at least two
/// participate in every product.
fn lower_degree_products(
    table: &Arc<VarTable>,
    k: u32,
    levels: &[Vec<(MultiPoly, MultiPoly)>],
) -> Vec<(MultiPoly, MultiPoly)> {
    let items: Vec<(&MultiPoly, &MultiPoly, u32)> = levels
        .iter()
        .enumerate()
        .flat_map(|(i, lvl)| lvl.iter().map(move |(p, m)| (p, m, i as u32 + 1)))
        .collect();
    let mut out = Vec::new();
    let one = MultiPoly::constant(table, Scalar::one());
    let zero = MultiPoly::zero(table);
    product_rec(&items, 0, k, &one, &zero, &mut out);
    out
}

fn product_rec(
    items: &[(&MultiPoly, &MultiPoly, u32)],
    idx: usize,
    remaining: u32,
    acc_p: &MultiPoly,
    acc_m: &MultiPoly,
    out: &mut Vec<(MultiPoly, MultiPoly)>,
) {
    if remaining == 0 {
        out.push((acc_p.primitive_normalized(), acc_m.clone()));
        return;
    }
    if idx == items.len() {
        return;
    }
    let (p, m, deg) = items[idx];
    let mut cur_p = acc_p.clone();
    let mut cur_m = acc_m.clone();
    let mut used = 0u32;
    loop {
        product_rec(items, idx + 1, remaining - used * deg, &cur_p, &cur_m, out);
        used += 1;
        if used * deg > remaining {
            break;
        }
        cur_p = &cur_p * p;
        cur_m = &cur_m + m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use system_model::{parse_poly, parse_system};

    fn sys(src: &str) -> SystemDef {
        parse_system(src).unwrap()
    }

    fn p(table: &Arc<VarTable>, src: &str) -> MultiPoly {
        parse_poly(src, table).unwrap()
    }

    #[test]
    fn radial_quadratic_finds_the_line_then_the_conic() {
        let s = sys("vars x y\nx' = -2 + y + x^2 + x*y\ny' = 4 + 2*x + x*y + y^2");
        let t = s.table();
        let deg1 = search_planar(&s, &SearchConfig::new(1)).unwrap();
        assert_eq!(deg1, vec![(p(t, "2*x + y + 2"), p(t, "x + y"))]);
        let deg2 = search_planar(&s, &SearchConfig::new(2)).unwrap();
        assert_eq!(
            deg2,
            vec![
                (p(t, "2*x + y + 2"), p(t, "x + y")),
                (p(t, "4*x*y + 3*y^2 + 8*x + 4*y + 12"), p(t, "2*x + 2*y")),
            ]
        );
    }

    #[test]
    fn linear_spiral_has_no_invariant_line_but_a_circle() {
        let s = sys("vars x y\nx' = x - y\ny' = x + y");
        assert_eq!(search_planar(&s, &SearchConfig::new(1)).unwrap(), vec![]);
        let t = s.table();
        assert_eq!(
            search_planar(&s, &SearchConfig::new(2)).unwrap(),
            vec![(p(t, "x^2 + y^2"), p(t, "2"))]
        );
    }

    #[test]
    fn the_pencil_separates_the_line_from_the_conic() {
        let s = sys("vars x y\nx' = -y + 1/2*x^2 - 1/2*y^2\ny' = x + x*y");
        let t = s.table();
        assert_eq!(
            search_planar(&s, &SearchConfig::new(2)).unwrap(),
            vec![(p(t, "y + 1"), p(t, "x")), (p(t, "x^2 + y^2"), p(t, "x"))]
        );
    }

    #[test]
    fn a_cubic_field_goes_through_the_graded_chain() {
        let s = sys("vars x y\nx' = 1/4*y*(x^2 - y^2 - 1)\ny' = 1/4*x*(x^2 + 3*y^2 - 1)");
        let t = s.table();
        assert_eq!(
            search_planar(&s, &SearchConfig::new(2)).unwrap(),
            vec![(p(t, "x^2 + y^2 - 1"), p(t, "x*y"))]
        );
    }

    #[test]
    fn underdetermined_cofactor_grades_are_refused() {
        let s = sys(
            "vars x y\nx' = -y*(2*x^2 + y^2 + (x^2 + y^2)^2)\ny' = x*(2*x^2 + y^2 + 2*(x^2 + y^2)^2)",
        );
        assert_eq!(search_planar(&s, &SearchConfig::new(1)).unwrap(), vec![]);
        let err = search_planar(&s, &SearchConfig::new(2)).unwrap_err();
        assert!(matches!(err, SearchError::Unsupported(_)));
    }

    #[test]
    fn the_candidate_cap_is_enforced() {
        let s = sys("vars x y\nx' = -y + 1/2*x^2 - 1/2*y^2\ny' = x + x*y");
        let err = search_planar(&s, &SearchConfig::new(2).with_cap(1)).unwrap_err();
        assert_eq!(err, SearchError::CandidateCap { count: 2, degree: 2, cap: 1 });
    }

    #[test]
    fn products_of_lower_degree_findings_are_not_repeated() {
        let s = sys("vars x y\nx' = x\ny' = y");
        let t = s.table();
        assert_eq!(
            search_planar(&s, &SearchConfig::new(2)).unwrap(),
            vec![(p(t, "x"), p(t, "1")), (p(t, "y"), p(t, "1"))]
        );
    }

    #[test]
    fn unsupported_shapes_are_reported() {
        let three = sys("vars x y z\nx' = 1\ny' = -2*x*y + z^2\nz' = -2*x*z");
        assert!(matches!(
            search_planar(&three, &SearchConfig::new(1)),
            Err(SearchError::Unsupported(_))
        ));
        let timed = sys("vars x y\nx' = t*x\ny' = y^2");
        assert!(matches!(
            search_planar(&timed, &SearchConfig::new(1)),
            Err(SearchError::Unsupported(_))
        ));
        let param = sys("vars x y\nparam a\nx' = a*x + y^2\ny' = x");
        assert!(matches!(
            search_planar(&param, &SearchConfig::new(1)),
            Err(SearchError::Unsupported(_))
        ));
        let degree_zero = sys("vars x y\nx' = x\ny' = y");
        assert!(matches!(
            search_planar(&degree_zero, &SearchConfig::new(0)),
            Err(SearchError::Unsupported(_))
        ));
    }

    #[test]
    fn sequential_mode_matches_parallel_mode() {
        let s = sys("vars x y\nx' = -y + 1/2*x^2 - 1/2*y^2\ny' = x + x*y");
        let cfg = SearchConfig::new(2);
        assert_eq!(
            search_planar(&s, &cfg).unwrap(),
            search_planar_sequential(&s, &cfg).unwrap()
        );
    }
}
