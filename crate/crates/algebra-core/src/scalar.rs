use crate::rational::{rat_display, rat_gcd, Rational};
use crate::AlgebraError;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element a + b*sqrt(m) of Q(sqrt(m)).
///
/// Invariants: m is squarefree, m != 0, m != 1; b == 0 implies m == None.
/// m < 0 gives an imaginary quadratic field. A single computation context uses
/// a single radicand; arithmetic between two distinct radicands is a
/// precondition violation and panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: Rational,
    b: Rational,
    m: Option<i64>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { a: Rational::zero(), b: Rational::zero(), m: None }
    }

    pub fn one() -> Self {
        Scalar { a: Rational::one(), b: Rational::zero(), m: None }
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar { a, b: Rational::zero(), m: None }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Builds a + b*sqrt(m), normalizing the radicand to squarefree form.
    /// new(0, 1, 12) = 2*sqrt(3); new(1, 3, 1) = 4; new(x, y, 0) = x.
    pub fn new(a: Rational, b: Rational, m: i64) -> Self {
        if b.is_zero() || m == 0 {
            return Self::from_rational(a);
        }
        let (square, core) = squarefree_split_i64(m.unsigned_abs());
        let m_sf = if m < 0 { -(core as i64) } else { core as i64 };
        let b = b * Rational::from_integer(BigInt::from(square));
        if m_sf == 1 {
            return Self::from_rational(a + b);
        }
        Scalar { a, b, m: Some(m_sf) }
    }

    /// Exact square root of a rational as a Scalar: sqrt(p/q) = sqrt(pq)/q.
    /// Errors if the squarefree core of the radicand cannot be extracted at
    /// desk scale.
    pub fn sqrt_of_rational(r: &Rational) -> Result<Self, AlgebraError> {
        if r.is_zero() {
            return Ok(Self::zero());
        }
        let n = r.numer() * r.denom();
        let negative = n.is_negative();
        let mag = n.abs();
        let (square, core) = squarefree_split_big(&mag)
            .ok_or_else(|| AlgebraError::RadicandTooLarge(mag.to_string()))?;
        let core_i64 = core
            .to_i64()
            .ok_or_else(|| AlgebraError::RadicandTooLarge(core.to_string()))?;
        let b = Rational::new(square, r.denom().clone());
        let m = if negative { -core_i64 } else { core_i64 };
        Ok(Self::new(Rational::zero(), b, if m == 0 { 1 } else { m }))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.m.is_none()
    }

    /// True for rationals and for radicands m > 0.
    pub fn is_real(&self) -> bool {
        self.m.map_or(true, |m| m > 0)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> Option<i64> {
        self.m
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        Scalar { a: self.a.clone(), b: -self.b.clone(), m: self.m }
    }

    /// Field norm a^2 - b^2 m; zero iff self is zero.
    pub fn norm(&self) -> Rational {
        let m = self.m.unwrap_or(0);
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(m))
    }

    pub fn inv(&self) -> Self {
        if self.is_zero() {
            panic!("scalar inverse of zero");
        }
        let n = self.norm();
        let c = self.conj();
        let m = if c.b.is_zero() { None } else { c.m };
        Scalar { a: c.a / &n, b: c.b / &n, m }
    }

    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Splits self = re + im*i for m < 0: re is rational, im carries sqrt(|m|)
    /// (rational when m = -1). Real scalars split as (self, 0).
    pub fn split_complex(&self) -> (Scalar, Scalar) {
        match self.m {
            Some(m) if m < 0 => {
                let re = Scalar::from_rational(self.a.clone());
                let im = Scalar::new(Rational::zero(), self.b.clone(), -m);
                (re, im)
            }
            _ => (self.clone(), Scalar::zero()),
        }
    }

    /// Exact sign of a real scalar: -1, 0, or +1.
    pub fn sign(&self) -> i32 {
        assert!(self.is_real(), "sign of non-real scalar {self}");
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare a^2 against b^2 m exactly.
        let norm_sign = rational_sign(&self.norm());
        if sa > 0 {
            norm_sign
        } else {
            -norm_sign
        }
    }

    /// Sign for canonical normalization, defined for every scalar:
    /// numeric sign when real, lexicographic sign of (a, b) otherwise.
    pub fn canonical_sign(&self) -> i32 {
        if self.is_real() {
            self.sign()
        } else {
            let sa = rational_sign(&self.a);
            if sa != 0 {
                sa
            } else {
                rational_sign(&self.b)
            }
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        let m = self.m.unwrap_or(0);
        if m < 0 {
            return None;
        }
        let a = self.a.to_f64()?;
        let b = self.b.to_f64()?;
        Some(a + b * (m as f64).sqrt())
    }

    /// Common rational content of (a, b), used for vector normalization.
    pub fn content(&self) -> Rational {
        rat_gcd(&self.a, &self.b)
    }

    fn merged_radicand(&self, other: &Self) -> Option<i64> {
        match (self.m, other.m) {
            (None, m) | (m, None) => m,
            (Some(x), Some(y)) if x == y => Some(x),
            (Some(x), Some(y)) => {
                panic!("scalar radicand mismatch: sqrt({x}) vs sqrt({y})")
            }
        }
    }

    fn normalized(a: Rational, b: Rational, m: Option<i64>) -> Self {
        if b.is_zero() {
            Scalar { a, b, m: None }
        } else {
            Scalar { a, b, m }
        }
    }
}

fn rational_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// |n| = square^2 * core with core squarefree, by trial division.
fn squarefree_split_i64(n: u64) -> (u64, u64) {
    let (sq, core) = squarefree_split_big(&BigInt::from(n)).expect("i64 radicand factors");
    (sq.to_u64().unwrap(), core.to_u64().unwrap())
}

/// Returns (square, core) with n = square^2 * core, core squarefree.
/// None when a large unfactored cofactor blocks the extraction.
fn squarefree_split_big(n: &BigInt) -> Option<(BigInt, BigInt)> {
    assert!(!n.is_negative());
    let mut rem = n.clone();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let bound = BigInt::from(1_000_000u64);
    let mut p = BigInt::from(2);
    while &p * &p <= rem && p <= bound {
        let mut e = 0u32;
        while (&rem % &p).is_zero() {
            rem /= &p;
            e += 1;
        }
        if e > 0 {
            for _ in 0..e / 2 {
                square *= &p;
            }
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += 1;
    }
    if rem > bound {
        // Unfactored remainder: only safe if it is 1 or a perfect square or
        // treated squarefree when prime; refuse rather than guess.
        let sqrt = rem.sqrt();
        if &sqrt * &sqrt == rem {
            square *= sqrt;
            return Some((square, core));
        }
        return None;
    }
    core *= rem;
    Some((square, core))
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let m = self.merged_radicand(rhs);
        Scalar::normalized(&self.a + &rhs.a, &self.b + &rhs.b, m)
    }
}
scalar_binop!(Add, add);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let m = self.merged_radicand(rhs);
        Scalar::normalized(&self.a - &rhs.a, &self.b - &rhs.b, m)
    }
}
scalar_binop!(Sub, sub);

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let m = self.merged_radicand(rhs);
        let mval = Rational::from_integer(BigInt::from(m.unwrap_or(0)));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &mval;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Scalar::normalized(a, b, m)
    }
}
scalar_binop!(Mul, mul);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}
scalar_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a.clone(), b: -self.b.clone(), m: self.m }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        if !self.is_real() || !other.is_real() {
            return None;
        }
        match (self.m, other.m) {
            (Some(x), Some(y)) if x != y => return None,
            _ => {}
        }
        let diff = self - other;
        Some(diff.sign().cmp(&0))
    }
}

impl fmt::Display for Scalar {
    /// Canonical form "a + b*sqrt(m)": "0", "5", "1/2", "sqrt(6)",
    /// "2*sqrt(3)", "1 - 2*sqrt(2)", "-1/2 + sqrt(5)".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = |b: &Rational, m: i64| -> String {
            let mag = b.abs();
            if mag.is_one() {
                format!("sqrt({m})")
            } else {
                format!("{}*sqrt({m})", rat_display(&mag))
            }
        };
        match self.m {
            None => write!(f, "{}", rat_display(&self.a)),
            Some(m) => {
                if self.a.is_zero() {
                    if self.b.is_negative() {
                        write!(f, "-{}", radical(&self.b, m))
                    } else {
                        write!(f, "{}", radical(&self.b, m))
                    }
                } else {
                    let op = if self.b.is_negative() { "-" } else { "+" };
                    write!(f, "{} {} {}", rat_display(&self.a), op, radical(&self.b, m))
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(a: i64, b: i64, m: i64) -> Scalar {
        Scalar::new(rat(a, 1), rat(b, 1), m)
    }

    #[test]
    fn radicand_normalizes_to_squarefree() {
        assert_eq!(s(0, 1, 12), s(0, 2, 3));
        assert_eq!(s(1, 3, 1), Scalar::from_int(4));
        assert_eq!(s(2, 0, 7), Scalar::from_int(2));
        assert_eq!(s(0, 1, 18), s(0, 3, 2));
        assert_eq!(s(0, 1, -4), s(0, 2, -1));
    }

    #[test]
    fn field_arithmetic_in_sqrt2() {
        let x = s(1, 1, 2);
        let y = s(1, -1, 2);
        assert_eq!(&x * &y, Scalar::from_int(-1));
        assert_eq!(&x + &y, Scalar::from_int(2));
        let inv = x.inv();
        assert_eq!(&x * &inv, Scalar::one());
        // (1 + sqrt2)^-1 = sqrt2 - 1
        assert_eq!(inv, s(-1, 1, 2));
    }

    #[test]
    fn sqrt_of_rational_cases() {
        assert_eq!(Scalar::sqrt_of_rational(&rat(49, 4)).unwrap(), Scalar::new(rat(0, 1), rat(7, 2), 1));
        assert_eq!(Scalar::sqrt_of_rational(&rat(3, 2)).unwrap(), Scalar::new(rat(0, 1), rat(1, 2), 6));
        assert_eq!(Scalar::sqrt_of_rational(&rat(-4, 1)).unwrap(), s(0, 2, -1));
        assert_eq!(Scalar::sqrt_of_rational(&rat(0, 1)).unwrap(), Scalar::zero());
        assert_eq!(Scalar::sqrt_of_rational(&rat(24, 1)).unwrap(), s(0, 2, 6));
    }

    #[test]
    fn exact_sign_of_mixed_terms() {
        // 1 + sqrt(2) vs 2: diff has a < 0 < b, norm 1 - 2 < 0 => positive.
        assert_eq!((&s(1, 1, 2) - &Scalar::from_int(2)).sign(), 1);
        // 3 - sqrt(2) > 0, 1 - sqrt(2) < 0.
        assert_eq!(s(3, -1, 2).sign(), 1);
        assert_eq!(s(1, -1, 2).sign(), -1);
        assert_eq!(Scalar::zero().sign(), 0);
        assert!(s(1, 0, 0) < s(0, 1, 2));
    }

    #[test]
    fn split_complex_retags_radicand() {
        let z = s(1, 2, -6); // 1 + 2*sqrt(-6) = 1 + 2*sqrt(6) i
        let (re, im) = z.split_complex();
        assert_eq!(re, Scalar::from_int(1));
        assert_eq!(im, s(0, 2, 6));
        let w = s(3, -1, -1); // 3 - i
        let (re, im) = w.split_complex();
        assert_eq!(re, Scalar::from_int(3));
        assert_eq!(im, Scalar::from_int(-1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_int(5).to_string(), "5");
        assert_eq!(Scalar::new(rat(1, 2), rat(0, 1), 0).to_string(), "1/2");
        assert_eq!(s(0, 1, 6).to_string(), "sqrt(6)");
        assert_eq!(s(0, 2, 3).to_string(), "2*sqrt(3)");
        assert_eq!(s(1, -2, 2).to_string(), "1 - 2*sqrt(2)");
        assert_eq!(s(0, -1, 5).to_string(), "-sqrt(5)");
        assert_eq!(Scalar::new(rat(-1, 2), rat(1, 1), 5).to_string(), "-1/2 + sqrt(5)");
        assert_eq!(s(1, 1, -6).to_string(), "1 + sqrt(-6)");
    }

    #[test]
    #[should_panic(expected = "radicand mismatch")]
    fn mixing_radicands_panics() {
        let _ = &s(0, 1, 2) + &s(0, 1, 3);
    }
}
