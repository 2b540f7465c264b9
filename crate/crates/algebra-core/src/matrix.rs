use crate::poly::MultiPoly;
use crate::scalar::Scalar;

/// Dense matrix of exact scalars. All elimination is exact; no pivoting
/// heuristics are needed beyond nonzero selection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Scalar::zero(), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Reduced row echelon form with the list of pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let (a, b) = (m.get(row, j).clone(), m.get(p, j).clone());
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(row, col).inv();
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i != row && !m.get(i, col).is_zero() {
                    let f = m.get(i, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &(&f * m.get(row, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis: one vector per free column (ascending), with that free
    /// coordinate set to 1 and pivot coordinates read off the RREF. Raw,
    /// no rescaling.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    v[pcol] = -r.get(prow, f);
                }
                v
            })
            .collect()
    }

    /// Determinant by exact Gaussian elimination (square matrices).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                det = -&det;
                for j in 0..n {
                    let (a, b) = (m.get(col, j).clone(), m.get(p, j).clone());
                    m.set(col, j, b);
                    m.set(p, j, a);
                }
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for i in col + 1..n {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col) * &inv;
                for j in col..n {
                    let v = m.get(i, j) - &(&f * m.get(col, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Solution of A x = b over exact scalars.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub rank: usize,
    /// One solution with all free variables set to zero; None when inconsistent.
    pub particular: Option<Vec<Scalar>>,
    /// Kernel basis, each vector scaled so its first nonzero entry is 1.
    pub nullspace: Vec<Vec<Scalar>>,
}

pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> LinearSolution {
    assert_eq!(b.len(), a.rows());
    let aug = Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = aug.rref();
    let rank = pivots.iter().filter(|&&c| c < a.cols()).count();
    let consistent = !pivots.contains(&a.cols());
    let particular = consistent.then(|| {
        let mut x = vec![Scalar::zero(); a.cols()];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r.get(prow, a.cols()).clone();
        }
        x
    });
    let nullspace = a
        .nullspace()
        .into_iter()
        .map(|v| {
            let lead = v.iter().find(|s| !s.is_zero()).cloned().unwrap();
            let inv = lead.inv();
            v.iter().map(|s| s * &inv).collect()
        })
        .collect();
    LinearSolution { rank, particular, nullspace }
}

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination; every interior division is exact.
pub fn det_poly(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0, "determinant of empty matrix");
    assert!(m.iter().all(|row| row.len() == n), "determinant of non-square matrix");
    let table = m[0][0].table().clone();
    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut sign = 1i64;
    let mut prev = MultiPoly::from_int(&table, 1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return MultiPoly::zero(&table);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
        }
        for row in a.iter_mut().skip(k + 1) {
            row[k] = MultiPoly::zero(&table);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -&d
    } else {
        d
    }
}
