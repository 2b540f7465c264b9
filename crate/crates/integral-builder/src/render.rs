//! Deterministic text rendering of assembled integral expressions.

use algebra_core::Scalar;
use pi_verify::{IntegralExpr, PartialIntegral};

/// Renders the expression as a product joined by `" * "`: the time factor
/// first, then the factors with nonnegative exponents, then those with
/// negative ones (input order within each group). Factors with exponent
/// zero are dropped; an empty product renders as `"1"`. Integer exponents
/// print bare (`^-2`), fractional and algebraic ones in parentheses
/// (`^(1/2)`, `^(sqrt(6))`).
pub fn render_integral(expr: &IntegralExpr) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !expr.time_factor.is_zero() {
        let minus_phi = expr.time_factor.scale(&Scalar::from_int(-1));
        parts.push(format!("exp({minus_phi})"));
    }
    let live = || expr.factors.iter().filter(|(_, g)| !g.is_zero());
    for (pi, gamma) in live().filter(|(_, g)| g.canonical_sign() >= 0) {
        parts.push(factor(pi, gamma));
    }
    for (pi, gamma) in live().filter(|(_, g)| g.canonical_sign() < 0) {
        parts.push(factor(pi, gamma));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

fn factor(pi: &PartialIntegral, gamma: &Scalar) -> String {
    match pi {
        PartialIntegral::Poly(p) => format!("({p}){}", exponent(gamma)),
        // exp(p)^gamma folds into the exponent polynomial
        PartialIntegral::Conditional(p) => format!("exp({})", p.scale(gamma)),
        PartialIntegral::ExpRational { q, p, h } => {
            let num = q.scale(gamma);
            if *h == 1 {
                format!("exp(({num}) / ({p}))")
            } else {
                format!("exp(({num}) / ({p})^{h})")
            }
        }
        PartialIntegral::ExpArctan { v, u } => {
            let arg = format!("arctan(({v}) / ({u}))");
            if gamma.is_one() {
                format!("exp({arg})")
            } else {
                format!("exp({}*{arg})", prefix(gamma))
            }
        }
        PartialIntegral::ComplexPoly { u, v } => {
            format!("({u} + i*{v}){}", exponent(gamma))
        }
    }
}

/// `^g` for integers, `^(g)` otherwise; nothing for exponent one.
fn exponent(gamma: &Scalar) -> String {
    if gamma.is_one() {
        return String::new();
    }
    let s = gamma.to_string();
    if gamma.as_rational().is_some() && !s.contains('/') {
        format!("^{s}")
    } else {
        format!("^({s})")
    }
}

/// A scalar as a leading coefficient: parenthesized unless it is an integer.
fn prefix(gamma: &Scalar) -> String {
    let s = gamma.to_string();
    if gamma.as_rational().is_some() && !s.contains('/') {
        s
    } else {
        format!("({s})")
    }
}
