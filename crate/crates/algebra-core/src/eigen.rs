use crate::factor::factor_univariate;
use crate::matrix::{solve_linear, Matrix};
use crate::poly::{MultiPoly, Role, VarTable};
use crate::rational::{rat_gcd, Rational};
use crate::scalar::Scalar;
use crate::AlgebraError;
use num_traits::{One, Zero};

/// Vectors attached to one elementary divisor of an eigenvalue.
/// Degree 1 keeps only the eigenvector `head`; degree 2 adds `first` with
/// (A - lambda E) first = head; degree 3 adds `second` with
/// (A - lambda E) second = 2 first.
#[derive(Clone, Debug)]
pub struct Chain {
    pub head: Vec<Scalar>,
    pub first: Option<Vec<Scalar>>,
    pub second: Option<Vec<Scalar>>,
}

/// One eigenvalue with its full divisor structure.
#[derive(Clone, Debug)]
pub struct EigenClass {
    pub value: Scalar,
    pub alg_mult: u32,
    /// Elementary divisor degrees, descending; they sum to alg_mult.
    pub divisor_degrees: Vec<u32>,
    /// Canonical eigenvector per divisor, aligned with divisor_degrees.
    pub vectors: Vec<Vec<Scalar>>,
    /// Chain per divisor (head repeats the aligned vector).
    pub chains: Vec<Chain>,
}

#[derive(Clone, Debug)]
pub struct EigenStructure {
    /// Real eigenvalues ascending, then the complex pair (positive
    /// imaginary part first).
    pub classes: Vec<EigenClass>,
    /// Squarefree m when eigenvalues live in Q(sqrt(m)); None when all rational.
    pub radicand: Option<i64>,
    /// True when a complex-conjugate pair is present (radicand < 0).
    pub complex: bool,
}

impl EigenStructure {
    pub fn real_classes(&self) -> impl Iterator<Item = &EigenClass> {
        self.classes.iter().filter(|c| c.value.is_real())
    }

    pub fn complex_representative(&self) -> Option<&EigenClass> {
        self.classes
            .iter()
            .find(|c| !c.value.is_real() && c.value.radical_part() > &Rational::zero())
    }
}

/// Full eigen-structure of a rational 3x3 matrix: eigenvalues with algebraic
/// multiplicities, elementary divisor degrees, canonical eigenvectors, and
/// generalized-vector chains. Eigenvalues may live in a real or imaginary
/// quadratic extension; an irreducible characteristic cubic is rejected.
pub fn eigen_3x3(a: &Matrix) -> Result<EigenStructure, AlgebraError> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(AlgebraError::NotThreeByThree(a.rows(), a.cols()));
    }
    for i in 0..3 {
        for j in 0..3 {
            if !a.get(i, j).is_rational() {
                return Err(AlgebraError::NonRationalMatrix(a.get(i, j).to_string()));
            }
        }
    }

    let entry = |i: usize, j: usize| a.get(i, j).rational_part().clone();
    let tr = entry(0, 0) + entry(1, 1) + entry(2, 2);
    let minor = |r1: usize, r2: usize| {
        entry(r1, r1) * entry(r2, r2) - entry(r1, r2) * entry(r2, r1)
    };
    let m2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = a
        .det()
        .as_rational()
        .expect("rational matrix has rational determinant")
        .clone();

    // Characteristic polynomial s^3 - tr s^2 + m2 s - det.
    let tbl = VarTable::new(vec![("s".to_string(), Role::State)]);
    let coeffs = [-det, m2, -tr, Rational::one()];
    let charpoly = MultiPoly::from_univariate(&tbl, 0, &coeffs);
    let fac = factor_univariate(&charpoly, 0)?;

    let mut values: Vec<(Scalar, u32)> = Vec::new();
    let mut radicand = None;
    for f in &fac.factors {
        let c = f.poly.as_univariate(0).expect("factor is univariate");
        match c.len() {
            2 => values.push((Scalar::from_rational(-&c[0] / &c[1]), f.multiplicity)),
            3 => {
                // Irreducible quadratic: roots (-b +- sqrt(b^2 - 4ac)) / (2a).
                let disc = &c[1] * &c[1] - Rational::from_integer(4.into()) * &c[2] * &c[0];
                let root = Scalar::sqrt_of_rational(&disc)?;
                let scale = Scalar::from_rational((&c[2] * Rational::from_integer(2.into())).recip());
                let plus = &(&Scalar::from_rational(-c[1].clone()) + &root) * &scale;
                radicand = plus.radicand();
                values.push((plus.conj(), 1));
                values.push((plus, 1));
            }
            _ => return Err(AlgebraError::IrreducibleCubic(charpoly.to_string())),
        }
    }

    let mut classes: Vec<EigenClass> = values
        .into_iter()
        .map(|(value, alg_mult)| build_class(a, value, alg_mult))
        .collect();
    classes.sort_by(|x, y| {
        use std::cmp::Ordering;
        match (x.value.is_real(), y.value.is_real()) {
            (true, true) => x.value.partial_cmp(&y.value).expect("real eigenvalues compare"),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => y.value.radical_part().cmp(x.value.radical_part()),
        }
    });

    if radicand.is_none() {
        radicand = classes.iter().find_map(|c| c.value.radicand());
    }
    let complex = radicand.is_some_and(|m| m < 0);
    Ok(EigenStructure { classes, radicand, complex })
}

fn build_class(a: &Matrix, value: Scalar, alg_mult: u32) -> EigenClass {
    let n = a.sub(&Matrix::identity(3).scale(&value));
    let geo = 3 - n.rank();
    let divisor_degrees: Vec<u32> = match (alg_mult, geo) {
        (1, 1) => vec![1],
        (2, 1) => vec![2],
        (2, 2) => vec![1, 1],
        (3, 1) => vec![3],
        (3, 2) => vec![2, 1],
        (3, 3) => vec![1, 1, 1],
        (a, g) => unreachable!("invalid multiplicity pair alg={a} geo={g}"),
    };
    // Kernel growth check: dim ker N^2 = sum of min(2, degree) over divisors.
    let n2 = n.mul_mat(&n);
    let expect: usize = divisor_degrees.iter().map(|&d| d.min(2) as usize).sum();
    assert_eq!(3 - n2.rank(), expect, "elementary divisor structure inconsistent");

    let kernel = kernel_reversed(&n);
    let canon: Vec<Vec<Scalar>> = kernel.iter().map(|v| canonicalize(v)).collect();

    let mut vectors = Vec::new();
    let mut chains = Vec::new();
    match divisor_degrees.as_slice() {
        [2, 1] => {
            // Chain head must lie in the image of N: push a vector from
            // ker(N^2) \ ker(N) through N.
            let w = kernel_reversed(&n2)
                .into_iter()
                .find(|w| n.mul_vec(w).iter().any(|s| !s.is_zero()))
                .expect("degree-2 divisor has a generalized direction");
            let head = canonicalize(&n.mul_vec(&w));
            let first = chain_solve(&n, &head);
            vectors.push(head.clone());
            chains.push(Chain { head, first: Some(first), second: None });
            let other = canon
                .iter()
                .find(|v| !parallel(v, &vectors[0]))
                .expect("second divisor has an independent eigenvector")
                .clone();
            vectors.push(other.clone());
            chains.push(Chain { head: other, first: None, second: None });
        }
        [d] if *d >= 2 => {
            let head = canon[0].clone();
            let first = chain_solve(&n, &head);
            let second = (*d == 3).then(|| {
                let rhs: Vec<Scalar> =
                    first.iter().map(|s| s * &Scalar::from_int(2)).collect();
                chain_solve(&n, &rhs)
            });
            vectors.push(head.clone());
            chains.push(Chain { head, first: Some(first), second });
        }
        _ => {
            for v in canon {
                vectors.push(v.clone());
                chains.push(Chain { head: v, first: None, second: None });
            }
        }
    }
    EigenClass { value, alg_mult, divisor_degrees, vectors, chains }
}

/// Kernel basis with the coordinate order reversed for the solve: free
/// variables are enumerated from the last coordinate backwards, which
/// pins the conventional representative for each eigenspace.
fn kernel_reversed(n: &Matrix) -> Vec<Vec<Scalar>> {
    let cols = n.cols();
    let rev = Matrix::from_fn(n.rows(), cols, |i, j| n.get(i, cols - 1 - j).clone());
    rev.nullspace()
        .into_iter()
        .map(|mut v| {
            v.reverse();
            v
        })
        .collect()
}

/// Particular solution (free variables zero) of N x = rhs.
fn chain_solve(n: &Matrix, rhs: &[Scalar]) -> Vec<Scalar> {
    let sol = solve_linear(n, rhs)
        .particular
        .expect("chain equation consistent by divisor structure");
    debug_assert_eq!(n.mul_vec(&sol), rhs.to_vec());
    sol
}

/// Canonical representative of a kernel line. Real vectors: rational content
/// cleared, first nonzero entry positive. Complex vectors: scaled by the
/// conjugate of the second component (fallback: first nonzero) so that
/// component becomes real positive, then content cleared. Invariant under
/// rescaling of the input by any nonzero field element.
fn canonicalize(v: &[Scalar]) -> Vec<Scalar> {
    let complex = v.iter().any(|s| !s.is_real());
    let mut w: Vec<Scalar> = if complex {
        let pivot = if !v[1].is_zero() {
            v[1].clone()
        } else {
            v.iter().find(|s| !s.is_zero()).expect("nonzero vector").clone()
        };
        let c = pivot.conj();
        v.iter().map(|s| s * &c).collect()
    } else {
        v.to_vec()
    };
    let mut content = Rational::zero();
    for s in &w {
        content = rat_gcd(&content, &s.content());
    }
    let inv = Scalar::from_rational(content.recip());
    w = w.iter().map(|s| s * &inv).collect();
    if !complex && w.iter().find(|s| !s.is_zero()).expect("nonzero vector").canonical_sign() < 0 {
        w = w.iter().map(|s| -s).collect();
    }
    w
}

fn parallel(u: &[Scalar], v: &[Scalar]) -> bool {
    // 2x2 minors of the pair all vanish.
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if !(&(&u[i] * &v[j]) - &(&u[j] * &v[i])).is_zero() {
                return false;
            }
        }
    }
    true
}
