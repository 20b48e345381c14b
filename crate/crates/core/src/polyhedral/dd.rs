//! Double description method for `{x : a_i · x ≥ 0}` with an explicit
//! lineality space.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{dot, primitive, BitSet};

struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

/// Returns `(rays, lineality basis)`: the cone is the lineality space plus
/// the conic hull of the rays, and the rays are its extreme rays modulo the
/// lineality space. Constraints are inserted in the given order.
pub(crate) fn solve(dim: usize, constraints: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = constraints.len();
    let mut lin: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (i, a) in constraints.iter().enumerate() {
        let lin_vals: Vec<BigInt> = lin.iter().map(|b| dot(a, b)).collect();
        if let Some(p) = lin_vals.iter().position(|x| !x.is_zero()) {
            // Cut the lineality space: the chosen direction becomes a ray and
            // everything else is moved into the hyperplane along it.
            let mut b = lin.remove(p);
            let mut ab = lin_vals[p].clone();
            if ab.is_negative() {
                b = b.iter().map(|x| -x).collect();
                ab = -ab;
            }
            let rest_vals = lin_vals.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, x)| x.clone());
            lin = lin
                .into_iter()
                .zip(rest_vals)
                .map(|(v, val)| if val.is_zero() { v } else { primitive(&combine(&ab, &v, &val, &b)) })
                .collect();
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    r.v = primitive(&combine(&ab, &r.v, &ar, &b));
                }
                r.zeros.insert(i);
            }
            let mut zeros = BitSet::new(m);
            for q in 0..i {
                zeros.insert(q);
            }
            rays.push(Ray { v: primitive(&b), zeros });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_negative()).collect();
        if minus.is_empty() {
            for (r, val) in rays.iter_mut().zip(&vals) {
                if val.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let needed = (dim - lin.len()).saturating_sub(2);
        let pairs: Vec<(usize, usize)> = plus.iter().flat_map(|&p| minus.iter().map(move |&q| (p, q))).collect();
        let created: Vec<Ray> = pairs
            .par_iter()
            .filter_map(|&(p, q)| {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.count() < needed {
                    return None;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(t, r)| t != p && t != q && common.is_subset(&r.zeros));
                if blocked {
                    return None;
                }
                let v = combine(&vals[p], &rays[q].v, &vals[q], &rays[p].v);
                let mut zeros = common;
                zeros.insert(i);
                Some(Ray { v: primitive(&v), zeros })
            })
            .collect();

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (mut r, val) in rays.into_iter().zip(&vals) {
            if val.is_positive() {
                next.push(r);
            } else if val.is_zero() {
                r.zeros.insert(i);
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }
    (rays.into_iter().map(|r| r.v).collect(), lin)
}

/// `s · u - t · w`.
fn combine(s: &BigInt, u: &[BigInt], t: &BigInt, w: &[BigInt]) -> Vec<BigInt> {
    u.iter().zip(w).map(|(x, y)| s * x - t * y).collect()
}
