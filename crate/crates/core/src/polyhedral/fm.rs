//! Generators of `{x : a_i · x ≥ 0}` by Fourier–Motzkin elimination.
//!
//! The cone is the dual of `cone(a_i)`. An inequality description of
//! `cone(a_i) = {y : y = Σ λ_i a_i, λ ≥ 0}` is obtained by eliminating the
//! `λ_i`, and the normals of that description generate the cone we want.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::BitSet;

#[derive(Clone)]
struct Row {
    /// Coefficients of `y` followed by those of `λ`.
    coef: Vec<BigInt>,
    history: BitSet,
}

/// Returns `(inequality normals, equality normals)` of `cone(a_i)`; the dual
/// cone is generated by the former and by `±` the latter.
pub(crate) fn solve(dim: usize, constraints: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = constraints.len();
    let width = dim + m;

    // y_k - Σ_i a_ik λ_i = 0
    let mut eqs: Vec<Vec<BigInt>> = (0..dim)
        .map(|k| {
            let mut c = vec![BigInt::zero(); width];
            c[k] = BigInt::from(1);
            for (i, a) in constraints.iter().enumerate() {
                c[dim + i] = -&a[k];
            }
            c
        })
        .collect();
    // λ_i ≥ 0
    let mut ineqs: Vec<Row> = (0..m)
        .map(|i| {
            let mut c = vec![BigInt::zero(); width];
            c[dim + i] = BigInt::from(1);
            let mut history = BitSet::new(m);
            history.insert(i);
            Row { coef: c, history }
        })
        .collect();

    // Gaussian elimination of the λ that appear in equalities.
    let mut eliminated = vec![false; m];
    let mut pure_eqs = Vec::new();
    while let Some(e) = eqs.pop() {
        let Some(j) = (dim..width).find(|&c| !e[c].is_zero()) else {
            if e.iter().any(|x| !x.is_zero()) {
                pure_eqs.push(normalize(&e[..dim]));
            }
            continue;
        };
        eliminated[j - dim] = true;
        let pivot = &e[j];
        let sign = BigInt::from(if pivot.is_negative() { -1 } else { 1 });
        let abs = pivot.abs();
        for other in eqs.iter_mut() {
            if !other[j].is_zero() {
                let r = other[j].clone();
                *other = normalize(&eliminate(other, &abs, &(&sign * r), &e));
            }
        }
        for row in ineqs.iter_mut() {
            if !row[j].is_zero() {
                let r = row.coef[j].clone();
                row.coef = normalize(&eliminate(&row.coef, &abs, &(&sign * r), &e));
            }
        }
    }

    // Fourier–Motzkin on the remaining λ, with Chernikov's rule.
    let mut steps = 0;
    for j in (0..m).filter(|&j| !eliminated[j]) {
        let c = dim + j;
        steps += 1;
        let (mut keep, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        for row in ineqs {
            if row.coef[c].is_positive() {
                pos.push(row);
            } else if row.coef[c].is_negative() {
                neg.push(row);
            } else {
                keep.push(row);
            }
        }
        for p in &pos {
            for q in &neg {
                let history = p.history.union(&q.history);
                if history.count() > steps + 1 {
                    continue;
                }
                let coef = eliminate(&q.coef, &p.coef[c], &q.coef[c], &p.coef);
                keep.push(Row { coef: normalize(&coef), history });
            }
        }
        ineqs = dedup(keep);
    }

    let normals: Vec<Vec<BigInt>> = ineqs
        .into_iter()
        .map(|r| r.coef[..dim].to_vec())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    (normals, pure_eqs)
}

impl std::ops::Index<usize> for Row {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.coef[i]
    }
}

/// `s · u - t · w`; with `s > 0` the direction of an inequality `u` is kept.
fn eliminate(u: &[BigInt], s: &BigInt, t: &BigInt, w: &[BigInt]) -> Vec<BigInt> {
    u.iter().zip(w).map(|(x, y)| s * x - t * y).collect()
}

/// Divides by the content without changing the sign.
fn normalize(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut out: Vec<Row> = Vec::new();
    for row in rows {
        if row.coef.iter().all(Zero::is_zero) {
            continue;
        }
        match seen.get(&row.coef) {
            Some(&idx) => {
                if row.history.count() < out[idx].history.count() {
                    out[idx] = row;
                }
            }
            None => {
                seen.insert(row.coef.clone(), out.len());
                out.push(row);
            }
        }
    }
    out
}
