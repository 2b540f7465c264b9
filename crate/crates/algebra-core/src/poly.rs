use crate::rational::{rat_display, rat_gcd, Rational};
use crate::scalar::Scalar;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Role {
    State,
    Time,
    Param,
}

/// Shared variable table: names with roles. Monomial exponent vectors are
/// indexed by table position. All polynomials of one context share one table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarTable {
    names: Vec<String>,
    roles: Vec<Role>,
}

impl VarTable {
    pub fn new(entries: Vec<(String, Role)>) -> Arc<Self> {
        let mut seen = std::collections::HashSet::new();
        for (name, _) in &entries {
            assert!(seen.insert(name.clone()), "duplicate variable name {name}");
        }
        let (names, roles) = entries.into_iter().unzip();
        Arc::new(VarTable { names, roles })
    }

    /// Standard layout: state variables in order, then time, then parameters.
    pub fn for_system(states: &[&str], time: &str, params: &[&str]) -> Arc<Self> {
        let mut entries: Vec<(String, Role)> =
            states.iter().map(|s| (s.to_string(), Role::State)).collect();
        entries.push((time.to_string(), Role::Time));
        entries.extend(params.iter().map(|p| (p.to_string(), Role::Param)));
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn role(&self, i: usize) -> Role {
        self.roles[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn state_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == Role::State).collect()
    }

    pub fn time_index(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.roles[i] == Role::Time)
    }

    pub fn state_count(&self) -> usize {
        self.state_indices().len()
    }
}

/// Sparse multivariate polynomial with Scalar coefficients.
/// Invariant: no zero coefficients stored; every exponent vector has table length.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

/// Canonical monomial order: graded by total state degree, ties broken
/// lexicographically on state exponents (table order), then time exponent,
/// then parameter exponents. A valid block monomial order, so polynomial
/// division terminates under it.
pub fn cmp_monomials(table: &VarTable, lhs: &[u32], rhs: &[u32]) -> Ordering {
    let state_deg = |e: &[u32]| -> u64 {
        (0..table.len())
            .filter(|&i| table.role(i) == Role::State)
            .map(|i| e[i] as u64)
            .sum()
    };
    state_deg(lhs)
        .cmp(&state_deg(rhs))
        .then_with(|| {
            for i in 0..table.len() {
                if table.role(i) == Role::State {
                    match lhs[i].cmp(&rhs[i]) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
            }
            Ordering::Equal
        })
        .then_with(|| {
            let t = |e: &[u32]| table.time_index().map_or(0, |i| e[i]);
            t(lhs).cmp(&t(rhs))
        })
        .then_with(|| {
            for i in 0..table.len() {
                if table.role(i) == Role::Param {
                    match lhs[i].cmp(&rhs[i]) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
            }
            Ordering::Equal
        })
}

impl MultiPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        MultiPoly { table: Arc::clone(table), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<VarTable>, c: Scalar) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(vec![0; table.len()], c);
        }
        p
    }

    pub fn from_rational(table: &Arc<VarTable>, r: Rational) -> Self {
        Self::constant(table, Scalar::from_rational(r))
    }

    pub fn from_int(table: &Arc<VarTable>, n: i64) -> Self {
        Self::constant(table, Scalar::from_int(n))
    }

    pub fn var(table: &Arc<VarTable>, i: usize) -> Self {
        assert!(i < table.len());
        let mut exps = vec![0; table.len()];
        exps[i] = 1;
        Self::monomial(table, exps, Scalar::one())
    }

    pub fn monomial(table: &Arc<VarTable>, exps: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(exps.len(), table.len());
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in descending canonical order (leading term first).
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(e1, _), (e2, _)| cmp_monomials(&self.table, e2, e1));
        v
    }

    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(e1, _), (e2, _)| cmp_monomials(&self.table, e1, e2))
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Some(c) iff the polynomial is a constant (zero gives Some(0)).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    fn assert_same_table(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.table, &other.table) || self.table == other.table,
            "polynomials from different variable tables"
        );
    }

    fn insert_term(terms: &mut BTreeMap<Vec<u32>, Scalar>, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        MultiPoly { table: Arc::clone(&self.table), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.table, Scalar::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.table.len());
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            let coeff = c * &Scalar::from_int(e[i] as i64);
            Self::insert_term(&mut terms, exps, coeff);
        }
        MultiPoly { table: Arc::clone(&self.table), terms }
    }

    /// Max total degree over state variables; -1 for the zero polynomial.
    pub fn deg_state(&self) -> i64 {
        let states = self.table.state_indices();
        self.terms
            .keys()
            .map(|e| states.iter().map(|&i| e[i] as i64).sum::<i64>())
            .max()
            .unwrap_or(-1)
    }

    pub fn deg_in(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i] as i64).max().unwrap_or(-1)
    }

    pub fn total_deg(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum::<i64>())
            .max()
            .unwrap_or(-1)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// True when only time and constants appear (no states, no parameters).
    pub fn is_pure_time(&self) -> bool {
        self.terms.keys().all(|e| {
            (0..self.table.len()).all(|i| e[i] == 0 || self.table.role(i) == Role::Time)
        })
    }

    /// Terms whose total state degree equals k (time/param exponents kept).
    pub fn state_homogeneous_part(&self, k: u32) -> Self {
        let states = self.table.state_indices();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| states.iter().map(|&i| e[i] as u64).sum::<u64>() == k as u64)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MultiPoly { table: Arc::clone(&self.table), terms }
    }

    /// Coefficient polynomials of `self` read as univariate in variable `i`,
    /// ascending by exponent, with variable `i` removed from each entry.
    /// Empty for the zero polynomial.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        assert!(i < self.table.len());
        let deg = self.deg_in(i);
        if deg < 0 {
            return Vec::new();
        }
        let mut out = vec![Self::zero(&self.table); deg as usize + 1];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut exps = e.clone();
            exps[i] = 0;
            out[k] = &out[k] + &Self::monomial(&self.table, exps, c.clone());
        }
        out
    }

    /// Substitutes a scalar value for variable i.
    pub fn eval_partial(&self, i: usize, value: &Scalar) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            let k = exps[i];
            exps[i] = 0;
            let coeff = c * &value.powi(k as i64);
            Self::insert_term(&mut terms, exps, coeff);
        }
        MultiPoly { table: Arc::clone(&self.table), terms }
    }

    /// f64 evaluation with one value per table variable.
    /// Coefficients must be real (checked).
    pub fn eval_f64(&self, vals: &[f64]) -> f64 {
        assert_eq!(vals.len(), self.table.len());
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = c.to_f64().expect("real coefficient");
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term *= vals[i].powi(exp as i32);
                }
            }
            acc += term;
        }
        acc
    }

    /// Splits a complex-coefficient polynomial (radicand m < 0) into
    /// (re, im) with self = re + i*im; real polynomials give (self, 0).
    pub fn split_complex(&self) -> (Self, Self) {
        let mut re = Self::zero(&self.table);
        let mut im = Self::zero(&self.table);
        for (e, c) in &self.terms {
            let (cr, ci) = c.split_complex();
            Self::insert_term(&mut re.terms, e.clone(), cr);
            Self::insert_term(&mut im.terms, e.clone(), ci);
        }
        (re, im)
    }

    /// Exact division: Ok(q) with self = q * d, or Err(remainder) from full
    /// multivariate division by the single divisor d under the canonical order.
    pub fn exact_div(&self, d: &Self) -> Result<Self, Self> {
        self.assert_same_table(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dlt_e, dlt_c) = d.leading_term().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut f = self.clone();
        let mut q = Self::zero(&self.table);
        let mut r = Self::zero(&self.table);
        while let Some((flt_e, flt_c)) = f.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            let divisible = flt_e.iter().zip(&dlt_e).all(|(a, b)| a >= b);
            if divisible {
                let exps: Vec<u32> = flt_e.iter().zip(&dlt_e).map(|(a, b)| a - b).collect();
                let t = Self::monomial(&self.table, exps, &flt_c / &dlt_c);
                f = &f - &(&t * d);
                q = &q + &t;
            } else {
                let t = Self::monomial(&self.table, flt_e, flt_c);
                f = &f - &t;
                r = &r + &t;
            }
        }
        if r.is_zero() {
            Ok(q)
        } else {
            Err(r)
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_ok()
    }

    /// Rational content: gcd of all coefficient components; 0 for zero poly.
    pub fn content(&self) -> Rational {
        let mut g = Rational::zero();
        for c in self.terms.values() {
            g = rat_gcd(&g, &c.content());
        }
        g
    }

    /// Divides out the content and fixes the canonical sign of the leading
    /// coefficient to be positive. Zero stays zero.
    pub fn primitive_normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let mut p = self.scale(&Scalar::from_rational(c.recip()));
        let lead = p.leading_term().unwrap().1.clone();
        if lead.canonical_sign() < 0 {
            p = -&p;
        }
        p
    }

    pub fn is_rational_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    /// Ascending coefficient vector when the polynomial involves only
    /// variable i and has rational coefficients.
    pub fn as_univariate(&self, i: usize) -> Option<Vec<Rational>> {
        let deg = self.deg_in(i).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            for (j, &exp) in e.iter().enumerate() {
                if j != i && exp > 0 {
                    return None;
                }
            }
            coeffs[e[i] as usize] = c.as_rational()?.clone();
        }
        Some(coeffs)
    }

    pub fn from_univariate(table: &Arc<VarTable>, i: usize, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(table);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0; table.len()];
                exps[i] = k as u32;
                p.terms.insert(exps, Scalar::from_rational(c.clone()));
            }
        }
        p
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_table(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            MultiPoly::insert_term(&mut terms, e.clone(), c.clone());
        }
        MultiPoly { table: Arc::clone(&self.table), terms }
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_table(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            MultiPoly::insert_term(&mut terms, e.clone(), -c);
        }
        MultiPoly { table: Arc::clone(&self.table), terms }
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_table(rhs);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                MultiPoly::insert_term(&mut terms, exps, c1 * c2);
            }
        }
        MultiPoly { table: Arc::clone(&self.table), terms }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MultiPoly { table: Arc::clone(&self.table), terms }
    }
}

macro_rules! poly_binop_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}
poly_binop_owned!(Add, add);
poly_binop_owned!(Sub, sub);
poly_binop_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical text: terms in descending canonical order, explicit `*`,
    /// `^` powers, rational coefficients as `p/q`, radical coefficients
    /// parenthesized. Round-trips through the system parser for rational
    /// coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.sorted_terms().into_iter().enumerate() {
            let mono = monomial_string(&self.table, exps);
            let (neg, body) = coeff_string(coeff, mono.is_empty());
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match (body.as_str(), mono.is_empty()) {
                (b, true) => out.push_str(b),
                ("1", false) => out.push_str(&mono),
                (b, false) => {
                    out.push_str(b);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn monomial_string(table: &VarTable, exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 1 {
            parts.push(table.name(i).to_string());
        } else if e > 1 {
            parts.push(format!("{}^{}", table.name(i), e));
        }
    }
    parts.join("*")
}

/// (is_negative, magnitude body) for a coefficient in term position.
fn coeff_string(c: &Scalar, constant_position: bool) -> (bool, String) {
    if c.is_rational() {
        let r = c.rational_part();
        let neg = r.is_negative();
        let mag = r.abs();
        if mag.is_one() && !constant_position {
            return (neg, "1".to_string());
        }
        return (neg, rat_display(&mag));
    }
    // Radical coefficient: pure radical keeps its sign outside, mixed
    // coefficients are parenthesized as a positive block.
    if c.rational_part().is_zero() {
        let neg = c.radical_part().is_negative();
        let mag = if neg { -c } else { c.clone() };
        let body = if mag.radical_part().abs().is_one() && !constant_position {
            format!("sqrt({})", c.radicand().unwrap())
        } else {
            mag.to_string()
        };
        return (neg, body);
    }
    (false, format!("({c})"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn xyta() -> Arc<VarTable> {
        VarTable::for_system(&["x", "y"], "t", &["a"])
    }

    fn var(t: &Arc<VarTable>, name: &str) -> MultiPoly {
        MultiPoly::var(t, t.index_of(name).unwrap())
    }

    #[test]
    fn product_of_conjugate_binomials() {
        let t = xyta();
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        let prod = (&x + &y) * (&x - &y);
        let expect = &(&x * &x) - &(&y * &y);
        assert_eq!(prod, expect);
    }

    #[test]
    fn partial_derivative_mixed_term() {
        let t = xyta();
        let (x, y, tm) = (var(&t, "x"), var(&t, "y"), var(&t, "t"));
        // d/dx (x^2 y + 3 x t) = 2 x y + 3 t
        let p = &(&x.pow(2) * &y) + &(&x * &tm).scale(&Scalar::from_int(3));
        let dx = p.partial_derivative(t.index_of("x").unwrap());
        let expect = &(&x * &y).scale(&Scalar::from_int(2)) + &tm.scale(&Scalar::from_int(3));
        assert_eq!(dx, expect);
    }

    #[test]
    fn coefficients_in_one_variable() {
        let t = xyta();
        let (x, y, tm) = (var(&t, "x"), var(&t, "y"), var(&t, "t"));
        // x^2 y + 3 x t + y^2 in x: [y^2, 3t, y]
        let p = &(&(&x.pow(2) * &y) + &(&x * &tm).scale(&Scalar::from_int(3))) + &y.pow(2);
        let ix = t.index_of("x").unwrap();
        let cs = p.coeffs_in(ix);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], y.pow(2));
        assert_eq!(cs[1], tm.scale(&Scalar::from_int(3)));
        assert_eq!(cs[2], y);
        assert!(MultiPoly::zero(&t).coeffs_in(ix).is_empty());
        // constant in x: single entry, the whole polynomial
        let cs = y.pow(2).coeffs_in(ix);
        assert_eq!(cs, vec![y.pow(2)]);
    }

    #[test]
    fn exact_division_and_remainder() {
        let t = xyta();
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        let num = &x.pow(2) - &y.pow(2);
        let q = num.exact_div(&(&x + &y)).unwrap();
        assert_eq!(q, &x - &y);
        // (x^2 + 1) / (x + y): remainder y^2 + 1
        let num = &x.pow(2) + &MultiPoly::from_int(&t, 1);
        let r = num.exact_div(&(&x + &y)).unwrap_err();
        assert_eq!(r, &y.pow(2) + &MultiPoly::from_int(&t, 1));
    }

    #[test]
    fn canonical_print_order() {
        let t = xyta();
        let (x, y, a) = (var(&t, "x"), var(&t, "y"), var(&t, "a"));
        let p = &(&x.pow(2) - &y.pow(2)) + &a;
        assert_eq!(p.to_string(), "x^2 - y^2 + a");
        let q = &(&x.scale(&Scalar::from_int(2)) + &y) + &MultiPoly::from_int(&t, 2);
        assert_eq!(q.to_string(), "2*x + y + 2");
        let r = &(&x * &y).scale(&Scalar::from_int(4))
            + &(&y.pow(2).scale(&Scalar::from_int(3))
                + &(&x.scale(&Scalar::from_int(8))
                    + &(&y.scale(&Scalar::from_int(4)) + &MultiPoly::from_int(&t, 12))));
        assert_eq!(r.to_string(), "4*x*y + 3*y^2 + 8*x + 4*y + 12");
        assert_eq!(MultiPoly::zero(&t).to_string(), "0");
        let half_x = x.scale(&Scalar::new(rat(1, 2), rat(0, 1), 0));
        assert_eq!(half_x.to_string(), "1/2*x");
        let neg = -&(&x + &MultiPoly::from_int(&t, 1));
        assert_eq!(neg.to_string(), "-x - 1");
    }

    #[test]
    fn state_degree_ignores_time_and_params() {
        let t = xyta();
        let (x, tm, a) = (var(&t, "x"), var(&t, "t"), var(&t, "a"));
        let p = &(&x.pow(2) * &tm.pow(5)) + &a.pow(3);
        assert_eq!(p.deg_state(), 2);
        assert_eq!(p.total_deg(), 7);
        assert_eq!(MultiPoly::zero(&t).deg_state(), -1);
        assert!(!p.is_pure_time());
        assert!((&tm.pow(2) + &MultiPoly::from_int(&t, 1)).is_pure_time());
    }

    #[test]
    fn homogeneous_parts_split_by_state_degree() {
        let t = xyta();
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        let p = &(&x.pow(2) + &(&x * &y)) + &(&y + &MultiPoly::from_int(&t, 7));
        assert_eq!(p.state_homogeneous_part(2), &x.pow(2) + &(&x * &y));
        assert_eq!(p.state_homogeneous_part(1), y);
        assert_eq!(p.state_homogeneous_part(0), MultiPoly::from_int(&t, 7));
    }

    #[test]
    fn primitive_normalization() {
        let t = xyta();
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        let p = &x.scale(&Scalar::from_int(-4)) + &y.scale(&Scalar::from_int(-6));
        let n = p.primitive_normalized();
        assert_eq!(n, &x.scale(&Scalar::from_int(2)) + &y.scale(&Scalar::from_int(3)));
        assert_eq!(p.content(), rat(2, 1));
    }

    #[test]
    fn univariate_round_trip() {
        let t = xyta();
        let xi = t.index_of("x").unwrap();
        let coeffs = vec![rat(-6, 1), rat(11, 1), rat(-6, 1), rat(1, 1)];
        let p = MultiPoly::from_univariate(&t, xi, &coeffs);
        assert_eq!(p.as_univariate(xi).unwrap(), coeffs);
        assert_eq!(p.to_string(), "x^3 - 6*x^2 + 11*x - 6");
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        assert!((&x * &y).as_univariate(xi).is_none());
    }

    #[test]
    fn eval_partial_substitutes() {
        let t = xyta();
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        let p = &(&x.pow(2) * &y) + &y.pow(3);
        let yi = t.index_of("y").unwrap();
        let at1 = p.eval_partial(yi, &Scalar::from_int(1));
        assert_eq!(at1, &x.pow(2) + &MultiPoly::from_int(&t, 1));
    }

    #[test]
    fn complex_coefficient_split() {
        let t = xyta();
        let (x, y) = (var(&t, "x"), var(&t, "y"));
        // (1 + i) x + 2 y  ->  re = x + 2y, im = x
        let c = Scalar::new(rat(1, 1), rat(1, 1), -1);
        let p = &x.scale(&c) + &y.scale(&Scalar::from_int(2));
        let (re, im) = p.split_complex();
        assert_eq!(re, &x + &y.scale(&Scalar::from_int(2)));
        assert_eq!(im, x);
    }
}
