//! Coprimality of multivariate polynomials by resultants.
//!
//! Two polynomials share a nonconstant factor only if that factor has
//! positive degree in some variable common to both, and for each such
//! variable the resultant (a Sylvester determinant over the remaining
//! variables) vanishes exactly when a common factor of positive degree in
//! that variable exists. Checking every shared variable therefore decides
//! coprimality completely, with nothing but exact determinant arithmetic.

use algebra_core::{det_poly, MultiPoly};

/// Resultant of `a` and `b` with respect to variable `i`.
///
/// Both arguments must have positive degree in `x_i`; the result is a
/// polynomial in the remaining variables, zero iff `a` and `b` share a
/// factor of positive degree in `x_i`.
pub fn resultant_in(a: &MultiPoly, b: &MultiPoly, i: usize) -> MultiPoly {
    let ac = a.coeffs_in(i);
    let bc = b.coeffs_in(i);
    let m = ac.len() - 1;
    let n = bc.len() - 1;
    assert!(m >= 1 && n >= 1, "resultant needs positive degree in x_i");
    let table = a.table();
    let size = m + n;
    let mut s = vec![vec![MultiPoly::zero(table); size]; size];
    for r in 0..n {
        for k in 0..=m {
            s[r][r + k] = ac[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            s[n + r][r + k] = bc[n - k].clone();
        }
    }
    det_poly(&s)
}

/// Whether `a` and `b` have no common factor of positive degree.
///
/// Constants are coprime with everything; zero is coprime only with a
/// nonzero constant.
pub fn coprime(a: &MultiPoly, b: &MultiPoly) -> bool {
    if a.is_zero() {
        return b.is_constant() && !b.is_zero();
    }
    if b.is_zero() {
        return a.is_constant() && !a.is_zero();
    }
    if a.is_constant() || b.is_constant() {
        return true;
    }
    let table = a.table();
    for i in 0..table.len() {
        if a.deg_in(i) >= 1 && b.deg_in(i) >= 1 && resultant_in(a, b, i).is_zero() {
            return false;
        }
    }
    true
}

/// Coprimality of the complex polynomials z = zr + i*zi and w = wr + i*wi.
///
/// Same resultant test, with each complex coefficient a + i*b embedded as
/// the real 2x2 block [[a, -b], [b, a]]; the block determinant is the
/// squared modulus of the complex Sylvester determinant, so it vanishes
/// exactly when the complex resultant does.
pub fn complex_coprime(zr: &MultiPoly, zi: &MultiPoly, wr: &MultiPoly, wi: &MultiPoly) -> bool {
    let z_zero = zr.is_zero() && zi.is_zero();
    let w_zero = wr.is_zero() && wi.is_zero();
    if z_zero {
        return wr.is_constant() && wi.is_constant() && !w_zero;
    }
    if w_zero {
        return zr.is_constant() && zi.is_constant() && !z_zero;
    }
    if (zr.is_constant() && zi.is_constant()) || (wr.is_constant() && wi.is_constant()) {
        return true;
    }
    let table = zr.table();
    for i in 0..table.len() {
        let zm = zr.deg_in(i).max(zi.deg_in(i));
        let wm = wr.deg_in(i).max(wi.deg_in(i));
        if zm >= 1 && wm >= 1 && block_resultant_in(zr, zi, wr, wi, i).is_zero() {
            return false;
        }
    }
    true
}

/// Ascending coefficient list in variable `i`, padded with zeros to `len`.
fn padded_coeffs(re: &MultiPoly, im: &MultiPoly, i: usize, len: usize) -> Vec<(MultiPoly, MultiPoly)> {
    let table = re.table();
    let mut rc = re.coeffs_in(i);
    let mut ic = im.coeffs_in(i);
    rc.resize(len, MultiPoly::zero(table));
    ic.resize(len, MultiPoly::zero(table));
    rc.into_iter().zip(ic).collect()
}

fn block_resultant_in(
    zr: &MultiPoly,
    zi: &MultiPoly,
    wr: &MultiPoly,
    wi: &MultiPoly,
    i: usize,
) -> MultiPoly {
    let m = zr.deg_in(i).max(zi.deg_in(i)) as usize;
    let n = wr.deg_in(i).max(wi.deg_in(i)) as usize;
    let zc = padded_coeffs(zr, zi, i, m + 1);
    let wc = padded_coeffs(wr, wi, i, n + 1);
    let table = zr.table();
    let size = 2 * (m + n);
    let mut s = vec![vec![MultiPoly::zero(table); size]; size];
    let mut put = |row: usize, col: usize, c: &(MultiPoly, MultiPoly)| {
        s[2 * row][2 * col] = c.0.clone();
        s[2 * row][2 * col + 1] = -&c.1;
        s[2 * row + 1][2 * col] = c.1.clone();
        s[2 * row + 1][2 * col + 1] = c.0.clone();
    };
    for r in 0..n {
        for k in 0..=m {
            put(r, r + k, &zc[m - k]);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            put(n + r, r + k, &wc[n - k]);
        }
    }
    det_poly(&s)
}
