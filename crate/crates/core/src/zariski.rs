//! Zariski decomposition `D = P + N` of pseudoeffective classes, using a known
//! finite list of generators of the cone of curves as the set of candidate
//! negative curves.

use num_traits::{One, Signed, Zero};

use crate::cones;
use crate::error::{Error, Result};
use crate::lattice::{self, rational, DivisorClass, Rational};
use crate::pencil::PencilConfiguration;
use crate::polyhedral::{self, RationalCone};

/// A curve of the negative part together with its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeComponent {
    /// Index into the list of cone-of-curves generators.
    pub index: usize,
    pub curve: DivisorClass,
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: DivisorClass,
    /// Components sorted by index, all with positive coefficient.
    pub negative: Vec<NegativeComponent>,
}

impl ZariskiDecomposition {
    pub fn negative_class(&self) -> DivisorClass {
        let mut acc = DivisorClass::zero(self.positive.len());
        for c in &self.negative {
            acc = acc + (&c.coefficient * &c.curve);
        }
        acc
    }

    /// Coefficient of generator `index` in the negative part (zero if absent).
    pub fn coefficient(&self, index: usize) -> Rational {
        self.negative.iter().find(|c| c.index == index).map(|c| c.coefficient.clone()).unwrap_or_else(Rational::zero)
    }

    /// Checks `D = P + N`, `P · C = 0` on the support, the support Gram matrix
    /// negative definite, `P` nef against `curves` and `N ≥ 0`.
    pub fn check(&self, d: &DivisorClass, curves: &[DivisorClass]) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(format!("Zariski decomposition invariant: {m}")));
        if &(&self.positive + &self.negative_class()) != d {
            return fail("D differs from P + N".into());
        }
        for c in &self.negative {
            if !c.coefficient.is_positive() {
                return fail(format!("coefficient of curve {} is {}", c.index, c.coefficient));
            }
            if !self.positive.intersect(&c.curve)?.is_zero() {
                return fail(format!("P does not vanish on curve {}", c.index));
            }
        }
        let support: Vec<DivisorClass> = self.negative.iter().map(|c| c.curve.clone()).collect();
        if !is_negative_definite(&gram(&support)) {
            return fail("the support is not negative definite".into());
        }
        for (i, c) in curves.iter().enumerate() {
            if self.positive.intersect(c)?.is_negative() {
                return fail(format!("P is negative on curve {i}"));
            }
        }
        Ok(())
    }
}

fn gram(curves: &[DivisorClass]) -> Vec<Vec<Rational>> {
    curves.iter().map(|a| curves.iter().map(|b| a.intersect(b).expect("same dimension")).collect()).collect()
}

/// Leading principal minors alternate in sign, starting negative.
pub fn is_negative_definite(m: &[Vec<Rational>]) -> bool {
    (1..=m.len()).all(|k| {
        let minor: Vec<Vec<Rational>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let det = determinant(minor);
        if k % 2 == 1 {
            det.is_negative()
        } else {
            det.is_positive()
        }
    })
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            let f = &m[r][col] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let x = &f * &m[col][c];
                m[r][c] -= x;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; `None` if `A` is singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        b.swap(p, col);
        let pivot = a[col][col].clone();
        for c in col..n {
            a[col][c] /= &pivot;
        }
        b[col] /= &pivot;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let x = &f * &a[col][c];
                    a[r][c] -= x;
                }
                let x = &f * &b[col];
                b[r] -= x;
            }
        }
    }
    Some(b)
}

/// Zariski decomposition of `d`, where `curves` generate the cone of curves
/// and contain every irreducible curve of negative self-intersection.
///
/// Starting from the curves on which `d` is negative, the support is enlarged
/// by every curve on which the current positive part is negative until the
/// positive part is nef.
pub fn zariski_decompose(d: &DivisorClass, curves: &[DivisorClass]) -> Result<ZariskiDecomposition> {
    let cone = RationalCone::from_classes(curves)?;
    if !polyhedral::contains_class(&cone, d)?.is_inside() {
        return Err(Error::Domain(format!("{d} is not pseudoeffective")));
    }
    let mut support: Vec<usize> = Vec::new();
    let mut positive = d.clone();
    let mut coeffs: Vec<Rational> = Vec::new();
    for _ in 0..=curves.len() {
        let new: Vec<usize> = (0..curves.len())
            .filter(|i| !support.contains(i))
            .filter(|&i| positive.intersect(&curves[i]).expect("same dimension").is_negative())
            .collect();
        if new.is_empty() {
            break;
        }
        support.extend(new);
        support.sort_unstable();
        let sup: Vec<DivisorClass> = support.iter().map(|&i| curves[i].clone()).collect();
        let rhs: Vec<Rational> = sup.iter().map(|c| d.intersect(c).expect("same dimension")).collect();
        coeffs = solve(gram(&sup), rhs)
            .ok_or_else(|| Error::Internal("singular intersection matrix on the negative support".into()))?;
        positive = d.clone();
        for (c, a) in sup.iter().zip(&coeffs) {
            positive = &positive - &(a * c);
        }
    }
    let negative: Vec<NegativeComponent> = support
        .iter()
        .zip(&coeffs)
        .filter(|(_, a)| !a.is_zero())
        .map(|(&i, a)| NegativeComponent { index: i, curve: curves[i].clone(), coefficient: a.clone() })
        .collect();
    let z = ZariskiDecomposition { positive, negative };
    z.check(d, curves)?;
    Ok(z)
}

/// Zariski decomposition of `-K` on a surface given by a pencil configuration.
pub fn anticanonical_decompose(pc: &PencilConfiguration) -> Result<ZariskiDecomposition> {
    let minus_k = -lattice::canonical_class(pc.config());
    zariski_decompose(&minus_k, &cones::ne_generators(pc).into_iter().map(|r| r.class).collect::<Vec<_>>())
}

/// Closed formula for the decomposition of `-K` on the surface of the base
/// points of a pencil whose dual graph has at most two vertices of degree 3:
///
/// `P = (3 - d·σ/d²) E*_0 + (σ/d²) D_{0,n}` and
/// `N = Σ_{i<n} ((φ_n, φ_i) σ/d² - Σ_w m_iw) Ẽ_i`, where `σ = Σ_w m_nw`.
///
/// Components of the negative part are indexed like
/// [`cones::ne_generators`] of the same configuration.
pub fn anticanonical_closed_form(pc: &PencilConfiguration) -> Result<ZariskiDecomposition> {
    if pc.k() > 0 {
        return Err(Error::Unsupported("the closed form only applies without attached chains".into()));
    }
    if pc.semigroup().g > 2 {
        return Err(Error::Unsupported(format!(
            "the closed form needs at most two vertices of degree 3 in the dual graph, found {}; \
             use the general algorithm",
            pc.semigroup().g
        )));
    }
    let c = pc.config();
    let minus_k = -lattice::canonical_class(c);
    let curves: Vec<DivisorClass> = cones::ne_generators(pc).into_iter().map(|r| r.class).collect();
    if !polyhedral::contains_class(&RationalCone::from_classes(&curves)?, &minus_k)?.is_inside() {
        return Err(Error::Domain(format!("{minus_k} is not pseudoeffective")));
    }
    let n = pc.s0();
    let s = c.len();
    let d0n = cones::d(pc, 0, n)?;
    let p0n = lattice::germ_exceptional_part(c, n)?;
    let all = DivisorClass { line: Rational::zero(), exc: vec![Rational::one(); s] };
    let line = DivisorClass::hyperplane(s);
    let den = d0n.intersect(&p0n)?;
    let sigma = d0n.intersect(&all)?;
    let ratio = &sigma / &den;
    let positive =
        &(rational(3) - d0n.intersect(&line)? * &ratio) * &line + (&ratio * &d0n);
    let mut negative = Vec::new();
    for i in 1..n {
        let p0i = lattice::germ_exceptional_part(c, i)?;
        let coeff = d0n.intersect(&p0i)? * &ratio - cones::d(pc, 0, i)?.intersect(&all)?;
        if !coeff.is_zero() {
            // Ẽ_i sits after L̃ in the list of generators.
            negative.push(NegativeComponent {
                index: i,
                curve: lattice::strict_transform_of_exceptional(c, i)?,
                coefficient: coeff,
            });
        }
    }
    let z = ZariskiDecomposition { positive, negative };
    z.check(&minus_k, &curves)?;
    Ok(z)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyTest {
    pub multiplicity: Rational,
    pub redundant: bool,
}

/// Multiplicity at a point of the negative part: the sum of the coefficients
/// of the components through the point, given by their generator indices.
pub fn redundancy_test(negative: &ZariskiDecomposition, through: &[usize]) -> RedundancyTest {
    let multiplicity: Rational = through.iter().map(|&i| negative.coefficient(i)).sum();
    RedundancyTest { redundant: multiplicity >= Rational::one(), multiplicity }
}

/// Generator index of `Ẽ_{0,s_0}`, the only curve of the cone-of-curves list
/// through a general point of the last base divisor.
pub fn last_base_divisor_index(pc: &PencilConfiguration) -> usize {
    pc.k() + pc.s0()
}
