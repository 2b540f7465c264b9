use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// gcd of two rationals: gcd of numerators over lcm of denominators.
/// Used for polynomial contents; gcd(0, r) = |r|.
pub fn rat_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    use num_traits::{Signed, Zero};
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rational::new(num, den)
}

/// Formats a rational as `p` or `p/q` (canonical q > 0).
pub fn rat_display(r: &Rational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
