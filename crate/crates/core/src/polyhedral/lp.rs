//! Exact phase-one simplex for the feasibility problem `Σ λ_j r_j = v, λ ≥ 0`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lattice::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    /// Nonnegative coefficients, one per column.
    Feasible(Vec<Rational>),
    /// A vector `z` with `z · r_j ≥ 0` for every column and `z · v < 0`.
    Infeasible(Vec<Rational>),
}

/// Decides whether `target` is a nonnegative combination of `columns`, using
/// Bland's rule so that the pivoting always terminates.
pub(crate) fn nonnegative_combination(columns: &[Vec<BigInt>], target: &[BigInt]) -> LpOutcome {
    let n = target.len();
    let m = columns.len();
    let width = m + n;
    let sigma: Vec<bool> = target.iter().map(|x| x.is_negative()).collect();
    let signed = |k: usize, x: &BigInt| -> Rational {
        let q = Rational::from_integer(x.clone());
        if sigma[k] {
            -q
        } else {
            q
        }
    };

    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            let mut row: Vec<Rational> = columns.iter().map(|c| signed(k, &c[k])).collect();
            row.extend((0..n).map(|i| if i == k { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let mut rhs: Vec<Rational> = (0..n).map(|k| signed(k, &target[k])).collect();
    let mut basis: Vec<usize> = (m..width).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| if j < m { -rows.iter().map(|r| &r[j]).sum::<Rational>() } else { Rational::zero() })
        .collect();
    // Negated objective value, updated like the other rows.
    let mut neg_value: Rational = -rhs.iter().sum::<Rational>();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for k in 0..n {
            if rows[k][enter].is_positive() {
                let ratio = &rhs[k] / &rows[k][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[k] < basis[leave.expect("set with best")]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(k);
                }
            }
        }
        // The phase-one objective is bounded below by zero, so some row limits the step.
        let r = leave.expect("phase-one problem is bounded");
        let pivot = rows[r][enter].clone();
        for x in rows[r].iter_mut() {
            *x /= &pivot;
        }
        rhs[r] /= &pivot;
        let pivot_row = rows[r].clone();
        let pivot_rhs = rhs[r].clone();
        for k in 0..n {
            if k != r && !rows[k][enter].is_zero() {
                let f = rows[k][enter].clone();
                for (x, p) in rows[k].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
                rhs[k] -= &f * &pivot_rhs;
            }
        }
        let f = cost[enter].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
        neg_value -= &f * &pivot_rhs;
        basis[r] = enter;
    }

    if neg_value.is_zero() {
        let mut lambda = vec![Rational::zero(); m];
        for (k, &b) in basis.iter().enumerate() {
            if b < m {
                lambda[b] = rhs[k].clone();
            }
        }
        LpOutcome::Feasible(lambda)
    } else {
        // Dual values of the phase-one problem, read off the artificial columns.
        let z = (0..n)
            .map(|k| {
                let y = Rational::one() - &cost[m + k];
                if sigma[k] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        LpOutcome::Infeasible(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn feasible_and_infeasible() {
        let cols = vec![v(&[1, 0]), v(&[1, 1])];
        match nonnegative_combination(&cols, &v(&[3, 1])) {
            LpOutcome::Feasible(l) => assert_eq!(l, vec![Rational::from_integer(2.into()), Rational::one()]),
            other => panic!("{other:?}"),
        }
        match nonnegative_combination(&cols, &v(&[0, 1])) {
            LpOutcome::Infeasible(z) => {
                let dot = |a: &[BigInt]| -> Rational {
                    a.iter().zip(&z).map(|(x, y)| Rational::from_integer(x.clone()) * y).sum()
                };
                assert!(dot(&cols[0]) >= Rational::zero());
                assert!(dot(&cols[1]) >= Rational::zero());
                assert!(dot(&v(&[0, 1])) < Rational::zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_columns() {
        assert_eq!(nonnegative_combination(&[], &v(&[0, 0])), LpOutcome::Feasible(vec![]));
        assert!(matches!(nonnegative_combination(&[], &v(&[0, -2])), LpOutcome::Infeasible(_)));
    }
}
