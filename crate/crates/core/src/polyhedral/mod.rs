//! Exact rational polyhedral cones given by generators.
//!
//! Duality is always taken with respect to a [`Pairing`], so that the nef cone
//! can be computed as the dual of the cone of curves under the intersection
//! form without changing bases. Membership is decided by an exact simplex and
//! comes with a certificate that is re-verified before it is returned.

mod dd;
mod fm;
mod lp;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Rational};

/// Largest ambient dimension accepted by the engine.
pub const MAX_DIM: usize = 32;

/// Symmetric bilinear form used for duality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Standard dot product.
    Dot,
    /// `diag(1, -1, ..., -1)`, the intersection form in the basis of total transforms.
    Intersection,
}

impl Pairing {
    /// `G · v`, so that `<x, v> = x · (G v)`.
    pub fn transform(&self, v: &[BigInt]) -> Vec<BigInt> {
        match self {
            Pairing::Dot => v.to_vec(),
            Pairing::Intersection => v.iter().enumerate().map(|(i, x)| if i == 0 { x.clone() } else { -x }).collect(),
        }
    }

    pub fn pair(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        dot(a, &self.transform(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    DoubleDescription,
    FourierMotzkin,
}

/// Order in which the generators of the input cone are inserted as constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InsertionOrder {
    #[default]
    Lexicographic,
    AsGiven,
}

/// A cone spanned by finitely many primitive integer rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCone {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
}

impl RationalCone {
    /// Divides every ray by its content. Zero rays and rays of the wrong
    /// length are rejected.
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Structural("ambient dimension must be positive".into()));
        }
        if dim > MAX_DIM {
            return Err(guardrail(dim));
        }
        let mut out = Vec::with_capacity(rays.len());
        for (i, r) in rays.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Structural(format!("ray {i} has length {} in dimension {dim}", r.len())));
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::Structural(format!("ray {i} is zero")));
            }
            out.push(primitive(&r));
        }
        Ok(RationalCone { dim, rays: out })
    }

    pub fn from_i64(dim: usize, rays: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// The cone spanned by divisor classes (coordinates `[E*_0, E*_1, ...]`).
    pub fn from_classes(classes: &[DivisorClass]) -> Result<Self> {
        let dim = classes.first().map(DivisorClass::dim).ok_or_else(|| {
            Error::Structural("cannot infer the dimension of an empty list of classes".into())
        })?;
        let rays = classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.dim() != dim {
                    return Err(Error::Structural(format!("class {i} has dimension {}", c.dim())));
                }
                c.primitive_ray().ok_or_else(|| Error::Structural(format!("class {i} is zero")))
            })
            .collect::<Result<_>>()?;
        Self::new(dim, rays)
    }

    /// The nonnegative orthant.
    pub fn orthant(dim: usize) -> Result<Self> {
        Self::new(dim, (0..dim).map(|i| unit(dim, i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    /// Rays as `i64` vectors, if they fit.
    pub fn rays_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.rays.iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect()
    }

    fn sorted(mut self) -> Self {
        self.rays.sort();
        self.rays.dedup();
        self
    }
}

fn guardrail(dim: usize) -> Error {
    Error::Guardrail(format!("ambient dimension {dim} exceeds the supported maximum {MAX_DIM}"))
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

fn unit(dim: usize, i: usize) -> Vec<BigInt> {
    (0..dim).map(|j| BigInt::from(i64::from(i == j))).collect()
}

/// The dual cone `{x : <x, g> ≥ 0 for every ray g}` by double description,
/// inserting the rays in lexicographic order. Rays of the output are sorted.
pub fn dual_cone(cone: &RationalCone, pairing: Pairing) -> Result<RationalCone> {
    dual_cone_with(cone, pairing, Method::DoubleDescription, InsertionOrder::Lexicographic)
}

pub fn dual_cone_with(
    cone: &RationalCone,
    pairing: Pairing,
    method: Method,
    order: InsertionOrder,
) -> Result<RationalCone> {
    let dim = cone.dim;
    if dim > MAX_DIM {
        return Err(guardrail(dim));
    }
    let mut input = cone.rays.clone();
    if order == InsertionOrder::Lexicographic {
        input.sort();
        input.dedup();
    }
    let constraints: Vec<Vec<BigInt>> = input.iter().map(|g| pairing.transform(g)).collect();
    let (rays, lines) = match method {
        Method::DoubleDescription => dd::solve(dim, &constraints),
        Method::FourierMotzkin => fm::solve(dim, &constraints),
    };
    let mut out = rays;
    for l in lines {
        out.push(l.iter().map(|x| -x).collect());
        out.push(l);
    }
    Ok(RationalCone::new(dim, out)?.sorted())
}

/// Result of a membership query, with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Nonnegative coefficients `λ` with `Σ λ_i r_i = v`.
    Inside(Vec<Rational>),
    /// A functional `z` with `z · r_i ≥ 0` for all rays and `z · v < 0`.
    Outside(Vec<Rational>),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }

    /// Re-checks the certificate against `cone` and `v` in exact arithmetic.
    pub fn verify(&self, cone: &RationalCone, v: &[BigInt]) -> bool {
        let q = |x: &BigInt| Rational::from_integer(x.clone());
        match self {
            Membership::Inside(lambda) => {
                if lambda.len() != cone.rays.len() || lambda.iter().any(Signed::is_negative) {
                    return false;
                }
                (0..cone.dim).all(|k| {
                    let s: Rational = lambda.iter().zip(&cone.rays).map(|(l, r)| l * q(&r[k])).sum();
                    s == q(&v[k])
                })
            }
            Membership::Outside(z) => {
                let pair = |r: &[BigInt]| -> Rational { z.iter().zip(r).map(|(a, b)| a * q(b)).sum() };
                z.len() == cone.dim && cone.rays.iter().all(|r| !pair(r).is_negative()) && pair(v).is_negative()
            }
        }
    }
}

/// Exact membership of `v` in the cone.
pub fn contains(cone: &RationalCone, v: &[BigInt]) -> Result<Membership> {
    if v.len() != cone.dim {
        return Err(Error::Structural(format!("vector of length {} in dimension {}", v.len(), cone.dim)));
    }
    let m = cone.rays.len();
    if v.iter().all(Zero::is_zero) {
        return Ok(Membership::Inside(vec![Rational::zero(); m]));
    }
    let p = primitive(v);
    let scale = v.iter().zip(&p).find(|(_, y)| !y.is_zero()).map(|(x, y)| x / y).expect("nonzero vector");
    if scale.is_positive() {
        if let Some(i) = cone.rays.iter().position(|r| *r == p) {
            let mut lambda = vec![Rational::zero(); m];
            lambda[i] = Rational::from_integer(scale);
            return Ok(Membership::Inside(lambda));
        }
    }
    let outcome = match lp::nonnegative_combination(&cone.rays, v) {
        lp::LpOutcome::Feasible(l) => Membership::Inside(l),
        lp::LpOutcome::Infeasible(z) => Membership::Outside(z),
    };
    if !outcome.verify(cone, v) {
        return Err(Error::Internal("membership certificate failed to verify".into()));
    }
    Ok(outcome)
}

/// Membership of a divisor class.
pub fn contains_class(cone: &RationalCone, class: &DivisorClass) -> Result<Membership> {
    match class.primitive_ray() {
        None => contains(cone, &vec![BigInt::zero(); cone.dim]),
        Some(ray) => contains(cone, &ray),
    }
}

/// Indices of the rays of `b` that are not in `a`.
pub fn missing_rays(a: &RationalCone, b: &RationalCone) -> Result<Vec<usize>> {
    if a.dim != b.dim {
        return Err(Error::Structural(format!("cones live in dimensions {} and {}", a.dim, b.dim)));
    }
    let flags: Vec<bool> =
        b.rays.par_iter().map(|r| contains(a, r).map(|m| !m.is_inside())).collect::<Result<_>>()?;
    Ok(flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect())
}

/// Equality as sets: every ray of each cone lies in the other.
pub fn cones_equal(a: &RationalCone, b: &RationalCone) -> Result<bool> {
    Ok(missing_rays(a, b)?.is_empty() && missing_rays(b, a)?.is_empty())
}

/// Which input rays survive canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyReport {
    /// Indices (into the input) of the kept rays.
    pub kept: Vec<usize>,
    /// Indices of rays that are duplicates of, or in the cone of, the kept ones.
    pub redundant: Vec<usize>,
}

/// Scans the rays in order and drops each one that is a positive multiple of
/// an earlier kept ray or lies in the cone spanned by the remaining rays.
pub fn redundancy(cone: &RationalCone) -> Result<RedundancyReport> {
    let n = cone.rays.len();
    let mut alive = vec![true; n];
    for i in 0..n {
        if cone.rays[..i].iter().zip(&alive).any(|(r, &a)| a && *r == cone.rays[i]) {
            alive[i] = false;
        }
    }
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        let others: Vec<Vec<BigInt>> =
            (0..n).filter(|&j| j != i && alive[j]).map(|j| cone.rays[j].clone()).collect();
        let rest = RationalCone { dim: cone.dim, rays: others };
        if contains(&rest, &cone.rays[i])?.is_inside() {
            alive[i] = false;
        }
    }
    Ok(RedundancyReport {
        kept: (0..n).filter(|&i| alive[i]).collect(),
        redundant: (0..n).filter(|&i| !alive[i]).collect(),
    })
}

/// Primitive, duplicate-free, irredundant generators in lexicographic order.
pub fn canonicalize(cone: &RationalCone) -> Result<RationalCone> {
    let report = redundancy(cone)?;
    let rays = report.kept.iter().map(|&i| cone.rays[i].clone()).collect();
    Ok(RationalCone { dim: cone.dim, rays }.sorted())
}

/// Fixed-size set of constraint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(size: usize) -> Self {
        BitSet { words: vec![0; size.div_ceil(64).max(1)] }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub(crate) fn union(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect() }
    }

    pub(crate) fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}
