//! Gaussian elimination over the formal-scalar field.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formal_scalar::{FormalScalar, Order, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solved(Vec<FormalScalar>),
    NotInvertible,
}

/// Solves `A x = b`. Pivots are chosen with minimal valuation; inverses of
/// non-monomial pivots are expanded up to λ-order `order`. Exact input with
/// monomial pivots gives an exact solution.
pub fn solve_linear(a: &[Vec<FormalScalar>], b: &[FormalScalar], order: &Rational) -> Result<LinearSolution> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("solve_linear needs a square system"));
    }
    let mut m: Vec<Vec<FormalScalar>> = a.to_vec();
    let mut rhs: Vec<FormalScalar> = b.to_vec();
    for col in 0..n {
        let mut best: Option<(usize, Order)> = None;
        let mut unknown = false;
        for (row, r) in m.iter().enumerate().skip(col) {
            let entry = &r[col];
            if entry.is_zero() {
                continue;
            }
            if entry.has_no_terms() {
                unknown = true;
                continue;
            }
            let v = entry.valuation()?;
            if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((row, v));
            }
        }
        let Some((prow, _)) = best else {
            if unknown {
                return Err(Error::Indeterminate("pivot under truncation"));
            }
            return Ok(LinearSolution::NotInvertible);
        };
        m.swap(col, prow);
        rhs.swap(col, prow);
        let inv = m[col][col].inv(order)?;
        for row in (col + 1)..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] * &inv;
            for k in col..n {
                let t = &factor * &m[col][k];
                m[row][k] = &m[row][k] - &t;
            }
            let t = &factor * &rhs[col];
            rhs[row] = &rhs[row] - &t;
            // eliminated exactly, whatever the truncation of `factor`
            m[row][col] = FormalScalar::zero();
        }
    }
    let mut x = alloc::vec![FormalScalar::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in (row + 1)..n {
            acc = &acc - &(&m[row][k] * &x[k]);
        }
        x[row] = &acc * &m[row][row].inv(order)?;
    }
    Ok(LinearSolution::Solved(x))
}

/// `A x`.
pub fn mat_vec(a: &[Vec<FormalScalar>], x: &[FormalScalar]) -> Vec<FormalScalar> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(FormalScalar::zero(), |acc, (r, v)| &acc + &(r * v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_scalar::{int, CRational};

    fn c(n: i64) -> FormalScalar {
        FormalScalar::from_int(n)
    }

    #[test]
    fn identity_returns_rhs() {
        let id = alloc::vec![alloc::vec![c(1), c(0)], alloc::vec![c(0), c(1)]];
        let b = alloc::vec![c(3), FormalScalar::lambda()];
        assert_eq!(solve_linear(&id, &b, &int(5)).unwrap(), LinearSolution::Solved(b));
    }

    #[test]
    fn two_by_two_against_adjugate() {
        // [[2,1],[1,3]]⁻¹ = 1/5 [[3,-1],[-1,2]]
        let a = alloc::vec![alloc::vec![c(2), c(1)], alloc::vec![c(1), c(3)]];
        let b = alloc::vec![c(1), c(0)];
        let LinearSolution::Solved(x) = solve_linear(&a, &b, &int(5)).unwrap() else { panic!() };
        assert_eq!(x[0], FormalScalar::from_rational(crate::formal_scalar::rat(3, 5)));
        assert_eq!(x[1], FormalScalar::from_rational(crate::formal_scalar::rat(-1, 5)));
    }

    #[test]
    fn singular_diagonal() {
        let lam = FormalScalar::lambda();
        let a = alloc::vec![alloc::vec![c(0), c(0)], alloc::vec![c(0), &lam - &c(0)]];
        assert_eq!(solve_linear(&a, &[c(1), c(1)], &int(4)).unwrap(), LinearSolution::NotInvertible);
    }

    #[test]
    fn non_monomial_pivot_is_truncated() {
        let p = &c(1) + &FormalScalar::lambda();
        let a = alloc::vec![alloc::vec![p.clone()]];
        let LinearSolution::Solved(x) = solve_linear(&a, &[c(1)], &int(3)).unwrap() else { panic!() };
        assert_eq!(x[0].trunc(), &Order::Finite(int(3)));
        assert_eq!(x[0].coeff(&int(2)), CRational::one());
        assert!((&x[0] * &p).truncate(&Order::Finite(int(3))) == FormalScalar::one().truncate(&Order::Finite(int(3))));
    }
}
