//! Model of a polynomial ODE system dx_i/dt = X_i(t, x) together with the
//! derivation operator it induces on polynomials.
//!
//! A system is described by a small line-oriented text format (see
//! [`parse_system`]), printed back in a canonical form that re-parses to the
//! same system. The derivation `d f = ∂_t f + Σ X_i ∂_{x_i} f` and the
//! divergence `Σ ∂_{x_i} X_i` are the two operators everything downstream is
//! built on.

mod parse;

use std::sync::Arc;

use algebra_core::{Matrix, MultiPoly, Role, VarTable};
use thiserror::Error;

pub use parse::{parse_poly, parse_system};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: unknown identifier `{name}`")]
    UnknownIdentifier { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: `{name}` is declared twice")]
    DuplicateVariable { line: usize, col: usize, name: String },
    #[error("line {line}, column {col}: `{name}'` is defined twice")]
    DuplicateEquation { line: usize, col: usize, name: String },
    #[error("state variable `{name}` has no equation")]
    MissingEquation { name: String },
    #[error("document declares no state variables")]
    NoStates,
    #[error("every right-hand side is constant in the states (d = 0); d >= 1 is required")]
    DegreeZero,
    #[error("Jacobi matrix must be 3x3 with rational entries: {0}")]
    InvalidJacobiMatrix(String),
}

/// A polynomial ODE system over an immutable variable table.
///
/// The table holds the state variables in declaration order, the time
/// variable `t`, and any symbolic parameters. `d` is the maximum state
/// degree over the right-hand sides; parameters and `t` do not count
/// toward it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDef {
    table: Arc<VarTable>,
    rhs: Vec<MultiPoly>,
    d: i64,
}

impl SystemDef {
    /// Builds a system from an existing table and one right-hand side per
    /// state variable, in table order.
    ///
    /// Panics if the lengths disagree or a polynomial was built over a
    /// different table; returns an error when d < 1.
    pub fn new(table: Arc<VarTable>, rhs: Vec<MultiPoly>) -> Result<Self, SystemError> {
        let states = table.state_indices();
        if states.is_empty() {
            return Err(SystemError::NoStates);
        }
        assert_eq!(rhs.len(), states.len(), "one right-hand side per state variable");
        for p in &rhs {
            assert!(p.table() == &table, "right-hand side uses a different variable table");
        }
        let d = rhs.iter().map(|p| p.deg_state()).max().unwrap_or(-1);
        if d < 1 {
            return Err(SystemError::DegreeZero);
        }
        Ok(Self { table, rhs, d })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn state_names(&self) -> Vec<&str> {
        self.table.state_indices().iter().map(|&i| self.table.name(i)).collect()
    }

    /// Right-hand sides in state declaration order.
    pub fn rhs(&self) -> &[MultiPoly] {
        &self.rhs
    }

    pub fn rhs_for(&self, name: &str) -> Option<&MultiPoly> {
        let idx = self.table.index_of(name)?;
        self.table.state_indices().iter().position(|&i| i == idx).map(|k| &self.rhs[k])
    }

    /// Maximum state degree d of the right-hand sides; always >= 1.
    pub fn degree(&self) -> i64 {
        self.d
    }

    /// Derivative of `f` by virtue of the system:
    /// `∂_t f + Σ X_i ∂_{x_i} f`. Parameters contribute nothing.
    ///
    /// Panics if `f` was built over a different variable table.
    pub fn derive(&self, f: &MultiPoly) -> MultiPoly {
        assert!(f.table() == &self.table, "polynomial uses a different variable table");
        let ti = self.table.time_index().expect("system table carries a time variable");
        let mut out = f.partial_derivative(ti);
        for (k, &si) in self.table.state_indices().iter().enumerate() {
            out = &out + &(&self.rhs[k] * &f.partial_derivative(si));
        }
        out
    }

    /// `Σ ∂_{x_i} X_i`; its state degree is at most d - 1.
    pub fn divergence(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.table);
        for (k, &si) in self.table.state_indices().iter().enumerate() {
            out = &out + &self.rhs[k].partial_derivative(si);
        }
        out
    }
}

/// Canonical text form of a polynomial: descending graded order, explicit
/// `*` and `^`, rational coefficients as `p/q`. Re-parses to the same
/// polynomial whenever the coefficients are rational.
pub fn print_poly(f: &MultiPoly) -> String {
    f.to_string()
}

/// Jacobi's equation data: a 3x3 rational matrix A with rows
/// (a1,a2,a3), (b1,b2,b3), (c1,c2,c3) and the linear forms built from its
/// columns, l_i = a_i*x + b_i*y + c_i.
///
/// The associated equation is dy/dx = (l2 - y*l3)/(l1 - x*l3) and the
/// associated system is x' = l1 - x*l3, y' = l2 - y*l3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiModel {
    matrix: Matrix,
    table: Arc<VarTable>,
    forms: [MultiPoly; 3],
}

impl JacobiModel {
    pub fn new(matrix: Matrix) -> Result<Self, SystemError> {
        if matrix.rows() != 3 || matrix.cols() != 3 {
            return Err(SystemError::InvalidJacobiMatrix(format!(
                "got a {}x{} matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        for i in 0..3 {
            for j in 0..3 {
                if !matrix.get(i, j).is_rational() {
                    return Err(SystemError::InvalidJacobiMatrix(format!(
                        "entry ({i}, {j}) = {} is not rational",
                        matrix.get(i, j)
                    )));
                }
            }
        }
        let table = VarTable::for_system(&["x", "y"], "t", &[]);
        let x = MultiPoly::var(&table, 0);
        let y = MultiPoly::var(&table, 1);
        let forms = std::array::from_fn(|i| {
            let rows: Vec<MultiPoly> = vec![x.clone(), y.clone(), MultiPoly::from_int(&table, 1)];
            let mut l = MultiPoly::zero(&table);
            for (r, v) in rows.iter().enumerate() {
                l = &l + &v.scale(matrix.get(r, i));
            }
            l
        });
        Ok(Self { matrix, table, forms })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn linear_forms(&self) -> &[MultiPoly; 3] {
        &self.forms
    }

    /// Numerator and denominator of dy/dx: (l2 - y*l3, l1 - x*l3).
    pub fn equation_parts(&self) -> (MultiPoly, MultiPoly) {
        let x = MultiPoly::var(&self.table, 0);
        let y = MultiPoly::var(&self.table, 1);
        (&self.forms[1] - &(&y * &self.forms[2]), &self.forms[0] - &(&x * &self.forms[2]))
    }

    /// The associated autonomous system x' = l1 - x*l3, y' = l2 - y*l3.
    /// Fails with `DegreeZero` when both right-hand sides are constant in
    /// the states (for instance A a scalar multiple of the identity).
    pub fn system(&self) -> Result<SystemDef, SystemError> {
        let (num, den) = self.equation_parts();
        SystemDef::new(self.table.clone(), vec![den, num])
    }
}

/// Convenience used across the workspace: a polynomial variable by name.
///
/// Panics when the name is absent from the table.
pub fn var(table: &Arc<VarTable>, name: &str) -> MultiPoly {
    let idx = table.index_of(name).unwrap_or_else(|| panic!("no variable named `{name}`"));
    MultiPoly::var(table, idx)
}

/// True when the variable at index `i` is a state variable.
pub fn is_state(table: &VarTable, i: usize) -> bool {
    table.role(i) == Role::State
}
