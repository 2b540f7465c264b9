use crate::poly::MultiPoly;
use crate::rational::{rat_int, Rational};
use crate::AlgebraError;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// One irreducible (or assumed-irreducible) factor of a univariate polynomial.
#[derive(Clone, Debug)]
pub struct UniFactor {
    /// Primitive integer-coefficient factor with positive leading coefficient.
    pub poly: MultiPoly,
    pub multiplicity: u32,
    /// True when irreducibility over the rationals is certified: degree <= 3
    /// with no rational root, or a completed factor search. False when the
    /// search hit its work cap and the factor is only assumed irreducible.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct UniFactorization {
    pub var: usize,
    /// Rational content (with sign) so that content * prod(factor^mult) = input.
    pub content: Rational,
    pub factors: Vec<UniFactor>,
}

impl UniFactorization {
    pub fn all_certified(&self) -> bool {
        self.factors.iter().all(|f| f.certified)
    }

    pub fn reassemble(&self, table: &std::sync::Arc<crate::poly::VarTable>) -> MultiPoly {
        let mut acc = MultiPoly::from_rational(table, self.content.clone());
        for f in &self.factors {
            acc = &acc * &f.poly.pow(f.multiplicity);
        }
        acc
    }
}

/// Factors a polynomial univariate in variable `var` into content times
/// primitive irreducible integer-coefficient factors over the rationals.
pub fn factor_univariate(p: &MultiPoly, var: usize) -> Result<UniFactorization, AlgebraError> {
    let coeffs = p.as_univariate(var).ok_or_else(|| {
        if p.is_rational_coeffs() {
            AlgebraError::NotUnivariate(p.to_string(), p.table().name(var).to_string())
        } else {
            AlgebraError::NonRationalCoeffs(p.to_string())
        }
    })?;
    let table = p.table().clone();
    let mk = |u: &UPoly| MultiPoly::from_univariate(&table, var, u);

    let mut u = trimmed(coeffs);
    if u.is_empty() {
        return Ok(UniFactorization { var, content: Rational::zero(), factors: vec![] });
    }
    let content = primitivize(&mut u);
    if deg(&u) == 0 {
        return Ok(UniFactorization { var, content, factors: vec![] });
    }

    let mut factors: Vec<(UPoly, u32, bool)> = Vec::new();

    // Strip the monomial factor first so later stages see a nonzero constant term.
    let k = u.iter().take_while(|c| c.is_zero()).count();
    if k > 0 {
        u.drain(..k);
        let mut x = vec![Rational::zero(), Rational::one()];
        trim(&mut x);
        factors.push((x, k as u32, true));
    }

    for (sqf, mult) in yun_squarefree(&u) {
        for (irr, certified) in factor_squarefree(&sqf) {
            factors.push((irr, mult, certified));
        }
    }

    // Merge duplicates across squarefree levels, then order deterministically.
    let mut merged: Vec<(UPoly, u32, bool)> = Vec::new();
    for (f, m, c) in factors {
        if let Some(e) = merged.iter_mut().find(|(g, _, _)| *g == f) {
            e.1 += m;
            e.2 = e.2 && c;
        } else {
            merged.push((f, m, c));
        }
    }
    merged.sort_by(|(a, _, _), (b, _, _)| deg(a).cmp(&deg(b)).then_with(|| cmp_coeffs(a, b)));

    Ok(UniFactorization {
        var,
        content,
        factors: merged
            .into_iter()
            .map(|(f, multiplicity, certified)| UniFactor {
                poly: mk(&f),
                multiplicity,
                certified,
            })
            .collect(),
    })
}

/// Rational roots of a univariate polynomial with their multiplicities.
///
/// Unlike `factor_univariate` this never enters the factor search: roots
/// come straight from the squarefree decomposition and divisor candidates,
/// which keeps large inputs cheap. Errs when a coefficient is too large for
/// exact candidate enumeration, so a silently missed root is impossible.
pub fn rational_roots(p: &MultiPoly, var: usize) -> Result<Vec<(Rational, u32)>, AlgebraError> {
    let coeffs = p.as_univariate(var).ok_or_else(|| {
        if p.is_rational_coeffs() {
            AlgebraError::NotUnivariate(p.to_string(), p.table().name(var).to_string())
        } else {
            AlgebraError::NonRationalCoeffs(p.to_string())
        }
    })?;
    let mut u = trimmed(coeffs);
    let mut roots: Vec<(Rational, u32)> = Vec::new();
    if deg(&u) <= 0 {
        return Ok(roots);
    }
    let _ = primitivize(&mut u);
    let k = u.iter().take_while(|c| c.is_zero()).count();
    if k > 0 {
        u.drain(..k);
        roots.push((Rational::zero(), k as u32));
    }
    if deg(&u) > 0 {
        for (sqf, mult) in yun_squarefree(&u) {
            if deg(&sqf) <= 0 {
                continue;
            }
            let (part_roots, complete) = rational_roots_squarefree(&sqf);
            if !complete {
                return Err(AlgebraError::RootEnumerationInfeasible(p.to_string()));
            }
            roots.extend(part_roots.into_iter().map(|r| (r, mult)));
        }
    }
    roots.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(roots)
}

// Univariate scaffolding: ascending coefficient vectors, zero = empty.
type UPoly = Vec<Rational>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn trimmed(mut p: UPoly) -> UPoly {
    trim(&mut p);
    p
}

fn deg(p: &UPoly) -> isize {
    p.len() as isize - 1
}

fn cmp_coeffs(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Scales to primitive integer coefficients with positive leading coefficient;
/// returns the removed rational content (signed).
fn primitivize(p: &mut UPoly) -> Rational {
    let mut c = Rational::zero();
    for v in p.iter() {
        c = crate::rational::rat_gcd(&c, v);
    }
    if p.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    for v in p.iter_mut() {
        *v = &*v / &c;
    }
    c
}

fn u_derivative(p: &UPoly) -> UPoly {
    trimmed(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect(),
    )
}

fn u_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trimmed(out)
}

fn u_divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    assert!(!b.is_empty(), "univariate division by zero");
    let mut r = a.clone();
    let db = deg(b);
    let lead = b.last().unwrap().clone();
    let mut q = vec![Rational::zero(); (deg(a) - db + 1).max(0) as usize];
    while deg(&r) >= db {
        let shift = (deg(&r) - db) as usize;
        let c = r.last().unwrap() / &lead;
        q[shift] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&c * bc);
        }
        trim(&mut r);
    }
    (trimmed(q), r)
}

fn u_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = u_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

fn u_sub(a: &UPoly, b: &UPoly) -> UPoly {
    let mut out = a.clone();
    out.resize(out.len().max(b.len()), Rational::zero());
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    trimmed(out)
}

fn u_eval_int(p: &UPoly, x: i64) -> BigInt {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = &(&acc * rat_int(x)) + c;
    }
    debug_assert!(acc.denom().is_one(), "integer evaluation of integer polynomial");
    acc.numer().clone()
}

/// Yun's squarefree decomposition: pairs (squarefree part, multiplicity),
/// valid for characteristic zero. Input must be nonconstant and primitive.
fn yun_squarefree(f: &UPoly) -> Vec<(UPoly, u32)> {
    let fp = u_derivative(f);
    let d = u_gcd(f, &fp);
    if deg(&d) == 0 {
        return vec![(f.clone(), 1)];
    }
    let mut out = Vec::new();
    let (mut b, _) = u_divrem(f, &d);
    let (c0, _) = u_divrem(&fp, &d);
    let mut dd = u_sub(&c0, &u_derivative(&b));
    let mut i = 1u32;
    while deg(&b) > 0 {
        let a = u_gcd(&b, &dd);
        if deg(&a) > 0 {
            let mut part = a.clone();
            let _ = primitivize(&mut part);
            out.push((part, i));
        }
        b = u_divrem(&b, &a).0;
        let c = u_divrem(&dd, &a).0;
        dd = u_sub(&c, &u_derivative(&b));
        i += 1;
    }
    out
}

/// Positive divisors of |n|, or None when the integer is too large to
/// enumerate exactly within the work bound.
fn divisors(n: &BigInt) -> Option<Vec<i64>> {
    let v = n.abs().to_i64()?;
    if v == 0 || v > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1i64;
    while d * d <= v {
        if v % d == 0 {
            small.push(d);
            if d != v / d {
                large.push(v / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Rational roots of a squarefree primitive integer polynomial.
/// Returns (roots, complete); complete is false when candidate enumeration
/// was infeasible, in which case roots may be missing.
fn rational_roots_squarefree(p: &UPoly) -> (Vec<Rational>, bool) {
    if p.first().is_some_and(Zero::is_zero) {
        // Caller strips the monomial factor first.
        unreachable!("zero constant term in root search");
    }
    let a0 = p[0].numer().clone();
    let an = p.last().unwrap().numer().clone();
    let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
        return (vec![], false);
    };
    let mut roots = Vec::new();
    for &num in &ps {
        for &den in &qs {
            if num_integer::gcd(num, den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = Rational::new(BigInt::from(sign * num), BigInt::from(den));
                let mut acc = Rational::zero();
                for c in p.iter().rev() {
                    acc = &(&acc * &r) + c;
                }
                if acc.is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    (roots, true)
}

const KRONECKER_TUPLE_CAP: u64 = 500_000;

/// Factors a squarefree primitive integer polynomial with nonzero constant
/// term into irreducible pieces. Each piece carries a certification flag.
fn factor_squarefree(p: &UPoly) -> Vec<(UPoly, bool)> {
    if deg(p) <= 0 {
        return vec![];
    }
    if deg(p) == 1 {
        return vec![(p.clone(), true)];
    }
    let (roots, complete) = rational_roots_squarefree(p);
    let mut rest = p.clone();
    let mut out = Vec::new();
    for r in &roots {
        // Primitive linear factor q*x - p from root p/q.
        let mut lin = vec![-Rational::from(r.numer().clone()), Rational::from(r.denom().clone())];
        let _ = primitivize(&mut lin);
        let (q, rem) = u_divrem(&rest, &lin);
        assert!(rem.is_empty(), "claimed root must divide");
        rest = q;
        out.push((lin, true));
    }
    if !complete {
        if deg(&rest) > 0 {
            let mut r = rest;
            let _ = primitivize(&mut r);
            out.push((r, false));
        }
        return out;
    }
    match deg(&rest) {
        d if d <= 0 => {}
        1 => out.push((trimmed_primitive(rest), true)),
        2 | 3 => out.push((trimmed_primitive(rest), true)), // no rational root => irreducible
        _ => out.extend(kronecker(&rest)),
    }
    out
}

fn trimmed_primitive(mut p: UPoly) -> UPoly {
    let _ = primitivize(&mut p);
    p
}

/// Kronecker factor search for a squarefree primitive polynomial of degree
/// >= 4 with no rational roots: interpolates candidate divisors of degree
/// 2..deg/2 through divisor tuples of integer evaluations.
fn kronecker(p: &UPoly) -> Vec<(UPoly, bool)> {
    let n = deg(p) as usize;
    let norm2: f64 = p
        .iter()
        .map(|c| c.to_f64().map_or(f64::INFINITY, |v| v * v))
        .sum::<f64>()
        .sqrt();

    for k in 2..=n / 2 {
        let points: Vec<i64> = sample_points(k + 1);
        let values: Vec<BigInt> = points.iter().map(|&x| u_eval_int(p, x)).collect();
        // Any degree-k integer factor has coefficients bounded (Mignotte),
        // so its value at x is bounded; prune divisor candidates by that.
        let coeff_bound = 2f64.powi(k as i32) * norm2;
        let mut divisor_lists: Vec<Vec<i64>> = Vec::new();
        let mut feasible = true;
        for (i, v) in values.iter().enumerate() {
            let Some(ds) = divisors(v) else {
                feasible = false;
                break;
            };
            let x = points[i].unsigned_abs().max(1) as f64;
            let val_bound = coeff_bound * (k as f64 + 1.0) * x.powi(k as i32);
            let mut signed: Vec<i64> = Vec::new();
            for d in ds {
                if (d as f64) <= val_bound {
                    signed.push(d);
                    if i > 0 {
                        signed.push(-d);
                    }
                }
            }
            divisor_lists.push(signed);
        }
        if !feasible {
            return vec![(p.clone(), false)];
        }
        let tuple_count: u64 = divisor_lists
            .iter()
            .map(|l| l.len() as u64)
            .try_fold(1u64, |a, b| a.checked_mul(b))
            .unwrap_or(u64::MAX);
        if tuple_count > KRONECKER_TUPLE_CAP {
            return vec![(p.clone(), false)];
        }

        let mut idx = vec![0usize; divisor_lists.len()];
        loop {
            let tuple: Vec<i64> = idx
                .iter()
                .zip(&divisor_lists)
                .map(|(&i, l)| l[i])
                .collect();
            if let Some(g) = interpolate_integer(&points, &tuple, k) {
                let (q, rem) = u_divrem(p, &g);
                if rem.is_empty() {
                    let mut sub = kronecker_or_base(&g);
                    sub.extend(kronecker_or_base(&q));
                    return sub;
                }
            }
            // Odometer increment over the divisor tuples.
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < divisor_lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    vec![(p.clone(), true)]
}

/// Recursive step after a successful split: small pieces are certified
/// directly, larger ones re-enter the search.
fn kronecker_or_base(g: &UPoly) -> Vec<(UPoly, bool)> {
    let g = trimmed_primitive(g.clone());
    match deg(&g) {
        d if d <= 0 => vec![],
        1 => vec![(g, true)],
        2 | 3 => {
            let (roots, complete) = rational_roots_squarefree(&g);
            if !complete {
                return vec![(g, false)];
            }
            if roots.is_empty() {
                return vec![(g, true)];
            }
            factor_squarefree(&g)
        }
        _ => {
            let (roots, _) = rational_roots_squarefree(&g);
            if roots.is_empty() {
                kronecker(&g)
            } else {
                factor_squarefree(&g)
            }
        }
    }
}

fn sample_points(count: usize) -> Vec<i64> {
    let mut pts = vec![0i64];
    let mut v = 1i64;
    while pts.len() < count {
        pts.push(v);
        if pts.len() < count {
            pts.push(-v);
        }
        v += 1;
    }
    pts
}

/// Lagrange interpolation through (points[i], values[i]); Some only when the
/// result has integer coefficients and degree exactly k with content 1.
fn interpolate_integer(points: &[i64], values: &[i64], k: usize) -> Option<UPoly> {
    let mut acc: UPoly = vec![];
    for (i, (&xi, &vi)) in points.iter().zip(values).enumerate() {
        let mut basis: UPoly = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, &xj) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            basis = u_mul(&basis, &vec![rat_int(-xj), Rational::one()]);
            denom = &denom * &rat_int(xi - xj);
        }
        let scale = rat_int(vi) / denom;
        let term: UPoly = basis.iter().map(|c| c * &scale).collect();
        acc = {
            let mut out = acc;
            out.resize(out.len().max(term.len()), Rational::zero());
            for (idx, c) in term.iter().enumerate() {
                out[idx] = &out[idx] + c;
            }
            trimmed(out)
        };
    }
    if deg(&acc) != k as isize {
        return None;
    }
    if acc.iter().any(|c| !c.denom().is_one()) {
        return None;
    }
    // Only primitive candidates: an imprimitive divisor of a primitive
    // polynomial cannot divide it, and its primitive part is enumerated
    // under a different tuple anyway.
    let mut probe = acc.clone();
    let content = primitivize(&mut probe);
    if !content.abs().is_one() {
        return None;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;
    use crate::rational::rat;
    use std::sync::Arc;

    fn table() -> Arc<VarTable> {
        VarTable::for_system(&["s"], "t", &[])
    }

    fn poly(coeffs: &[i64]) -> MultiPoly {
        let cs: Vec<Rational> = coeffs.iter().map(|&c| rat_int(c)).collect();
        MultiPoly::from_univariate(&table(), 0, &cs)
    }

    fn factor_strings(f: &UniFactorization) -> Vec<(String, u32, bool)> {
        f.factors
            .iter()
            .map(|x| (x.poly.to_string(), x.multiplicity, x.certified))
            .collect()
    }

    #[test]
    fn cubic_with_three_rational_roots() {
        // s^3 - 6 s^2 + 11 s - 6 = (s-1)(s-2)(s-3)
        let f = factor_univariate(&poly(&[-6, 11, -6, 1]), 0).unwrap();
        assert_eq!(f.content, rat(1, 1));
        assert_eq!(
            factor_strings(&f),
            vec![
                ("s - 3".to_string(), 1, true),
                ("s - 2".to_string(), 1, true),
                ("s - 1".to_string(), 1, true),
            ]
        );
        assert_eq!(f.reassemble(&table()), poly(&[-6, 11, -6, 1]));
    }

    #[test]
    fn repeated_roots_and_content() {
        // 2 s^4 - 4 s^3 + 2 s^2 = 2 s^2 (s - 1)^2
        let f = factor_univariate(&poly(&[0, 0, 2, -4, 2]), 0).unwrap();
        assert_eq!(f.content, rat(2, 1));
        assert_eq!(
            factor_strings(&f),
            vec![("s - 1".to_string(), 2, true), ("s".to_string(), 2, true)]
        );
        assert_eq!(f.reassemble(&table()), poly(&[0, 0, 2, -4, 2]));
    }

    #[test]
    fn irreducible_quadratic_and_cubic_are_certified() {
        let f = factor_univariate(&poly(&[1, 0, 1]), 0).unwrap();
        assert_eq!(factor_strings(&f), vec![("s^2 + 1".to_string(), 1, true)]);
        // s^3 - 2: no rational root, degree 3 => irreducible
        let f = factor_univariate(&poly(&[-2, 0, 0, 1]), 0).unwrap();
        assert_eq!(factor_strings(&f), vec![("s^3 - 2".to_string(), 1, true)]);
    }

    #[test]
    fn quartic_kronecker_splits() {
        // s^4 + 4 = (s^2 - 2s + 2)(s^2 + 2s + 2)
        let f = factor_univariate(&poly(&[4, 0, 0, 0, 1]), 0).unwrap();
        assert_eq!(
            factor_strings(&f),
            vec![
                ("s^2 - 2*s + 2".to_string(), 1, true),
                ("s^2 + 2*s + 2".to_string(), 1, true),
            ]
        );
        // s^4 + s^2 + 1 = (s^2 - s + 1)(s^2 + s + 1)
        let f = factor_univariate(&poly(&[1, 0, 1, 0, 1]), 0).unwrap();
        assert_eq!(
            factor_strings(&f),
            vec![
                ("s^2 - s + 1".to_string(), 1, true),
                ("s^2 + s + 1".to_string(), 1, true),
            ]
        );
        assert_eq!(f.reassemble(&table()), poly(&[1, 0, 1, 0, 1]));
    }

    #[test]
    fn irreducible_quartic_certified_by_completed_search() {
        // s^4 + s + 1 is irreducible over the rationals.
        let f = factor_univariate(&poly(&[1, 1, 0, 0, 1]), 0).unwrap();
        assert_eq!(factor_strings(&f), vec![("s^4 + s + 1".to_string(), 1, true)]);
    }

    #[test]
    fn rational_content_and_fractional_roots() {
        // (2s - 1)(s + 3) / 6 = (2 s^2 + 5 s - 3)/6
        let cs = vec![rat(-1, 2), rat(5, 6), rat(1, 3)];
        let p = MultiPoly::from_univariate(&table(), 0, &cs);
        let f = factor_univariate(&p, 0).unwrap();
        assert_eq!(f.content, rat(1, 6));
        assert_eq!(
            factor_strings(&f),
            vec![("2*s - 1".to_string(), 1, true), ("s + 3".to_string(), 1, true)]
        );
        let roots = rational_roots(&p, 0).unwrap();
        assert_eq!(roots, vec![(rat(-3, 1), 1), (rat(1, 2), 1)]);
    }

    #[test]
    fn zero_and_constant_inputs() {
        let z = MultiPoly::zero(&table());
        let f = factor_univariate(&z, 0).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.content, rat(0, 1));
        let c = poly(&[7]);
        let f = factor_univariate(&c, 0).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.content, rat(7, 1));
    }

    #[test]
    fn rejects_multivariate_input() {
        let t = VarTable::for_system(&["x", "y"], "t", &[]);
        let p = &MultiPoly::var(&t, 0) * &MultiPoly::var(&t, 1);
        assert!(matches!(
            factor_univariate(&p, 0),
            Err(AlgebraError::NotUnivariate(_, _))
        ));
    }

    #[test]
    fn homogeneous_pair_reduction_example() {
        // x^2 + y^2 viewed in x after setting y = 1: certified irreducible.
        let f = factor_univariate(&poly(&[1, 0, 1]), 0).unwrap();
        assert!(f.all_certified());
    }
}
