//! Closed-form generators of the cone of curves and of the nef cone of the
//! surface obtained by blowing up a [`PencilConfiguration`].
//!
//! Two families of divisors are used. The first one attaches to each point
//! `u` (and to `u = 0`, standing for a general line) the class
//! `D_u = (φ_L, φ_u) E*_0 - Σ_v mult_{q_v}(φ_u) E*_v`. The second one mixes
//! divisors of the chains with a base divisor `D_{0,m}`:
//!
//! `D^{J,ℓ}_{0,m} = a_m Σ_{t ∈ J} (Π/ℓ_t) D_{t,ℓ_t} + Π D_{0,m}`,
//!
//! where `Π = Π_{t ∈ J} ℓ_t` and `a_m = D_{0,m} · D_{0,s_0}`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, rational, DivisorClass, Rational};
use crate::pencil::PencilConfiguration;

/// Where a generator comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RayTag {
    /// Strict transform of the line at infinity.
    Line,
    /// Strict transform of the pencil member through chain `j`.
    Curve { j: usize },
    /// Strict transform of the exceptional divisor of `p_{j,ℓ}`.
    Exceptional { j: usize, ell: usize },
    /// `D_{j,m}` (with `D_{0,0}` the class of a line).
    First { j: usize, m: usize },
    /// `D^{J,ℓ}_{0,m}`.
    Second { set: Vec<usize>, ells: Vec<usize>, m0: usize },
}

impl fmt::Display for RayTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            RayTag::Line => write!(f, "L"),
            RayTag::Curve { j } => write!(f, "C_{j}"),
            RayTag::Exceptional { j, ell } => write!(f, "E_{{{j},{ell}}}"),
            RayTag::First { j, m } => write!(f, "D_{{{j},{m}}}"),
            RayTag::Second { set, ells, m0 } => {
                write!(f, "D^{{{{{}}},({})}}_{{0,{m0}}}", join(set), join(ells))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedRay {
    pub tag: RayTag,
    pub class: DivisorClass,
}

/// Generators of the cone of curves and of the nef cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub ne: Vec<TaggedRay>,
    pub nef: Vec<TaggedRay>,
}

impl GeneratorSet {
    pub fn ne_rays(&self) -> Vec<DivisorClass> {
        self.ne.iter().map(|r| r.class.clone()).collect()
    }

    pub fn nef_rays(&self) -> Vec<DivisorClass> {
        self.nef.iter().map(|r| r.class.clone()).collect()
    }
}

/// `D_u` for the point with ordinal `u`, or `D_{0,0} = E*_0` for `u = 0`.
pub fn first_family_class(pc: &PencilConfiguration, u: usize) -> Result<DivisorClass> {
    let c = pc.config();
    if u == 0 {
        return Ok(DivisorClass::hyperplane(c.len()));
    }
    let row = c.multiplicity_row(u)?;
    let exc: Vec<i64> = row.iter().map(|&m| -m).collect();
    Ok(DivisorClass::from_ints(c.line_pairing(u)?, &exc))
}

/// `D_{j,m}` in block coordinates; `m = 0` is only allowed for `j = 0`.
pub fn d(pc: &PencilConfiguration, j: usize, m: usize) -> Result<DivisorClass> {
    if j == 0 && m == 0 {
        return first_family_class(pc, 0);
    }
    first_family_class(pc, pc.psi(j, m)?)
}

/// All `D_{j,m}`: first `D_{0,0}, ..., D_{0,s_0}`, then each chain in order.
pub fn first_family(pc: &PencilConfiguration) -> Vec<TaggedRay> {
    let mut out = vec![TaggedRay { tag: RayTag::First { j: 0, m: 0 }, class: d(pc, 0, 0).expect("in range") }];
    for u in 1..=pc.s() {
        let (j, m) = pc.psi_inverse(u).expect("in range");
        out.push(TaggedRay { tag: RayTag::First { j, m }, class: first_family_class(pc, u).expect("in range") });
    }
    out
}

/// `a_m = D_{0,m} · D_{0,s_0}` for `0 ≤ m < s_0`.
pub fn a_vector(pc: &PencilConfiguration) -> Vec<Rational> {
    let last = d(pc, 0, pc.s0()).expect("in range");
    (0..pc.s0()).map(|m| d(pc, 0, m).expect("in range").intersect(&last).expect("same dimension")).collect()
}

/// `D^{J,ℓ}_{0,m0}` for a nonempty increasing `set ⊆ {1..k}` with one `ℓ` per
/// element. Any `0 ≤ m0 ≤ s_0` is accepted.
pub fn second_family_member(pc: &PencilConfiguration, set: &[usize], ells: &[usize], m0: usize) -> Result<DivisorClass> {
    if set.is_empty() || set.len() != ells.len() {
        return Err(Error::Structural("the index set must be nonempty with one length per element".into()));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&j| j == 0 || j > pc.k()) {
        return Err(Error::Structural(format!("invalid chain index set {set:?}")));
    }
    if m0 > pc.s0() {
        return Err(Error::Structural(format!("m0 = {m0} exceeds s0 = {}", pc.s0())));
    }
    let base = d(pc, 0, m0)?;
    let a = base.intersect(&d(pc, 0, pc.s0())?)?;
    let product: i64 = ells.iter().map(|&l| l as i64).product();
    let mut acc = &rational(product) * &base;
    for (&j, &ell) in set.iter().zip(ells) {
        let coeff = &a * rational(product / ell as i64);
        acc = acc + (&coeff * &d(pc, j, ell)?);
    }
    Ok(acc)
}

/// All `D^{J,ℓ}_{0,m0}` with `J` nonempty, `1 ≤ ℓ_t ≤ s_t` and `0 ≤ m0 < s_0`,
/// ordered by `(|J|, J, ℓ, m0)`.
pub fn second_family(pc: &PencilConfiguration) -> Vec<TaggedRay> {
    let k = pc.k();
    let lengths = pc.chain_lengths();
    let mut out = Vec::new();
    for size in 1..=k {
        for set in subsets_of_size(k, size) {
            let bounds: Vec<usize> = set.iter().map(|&j| lengths[j - 1]).collect();
            for ells in product_ranges(&bounds) {
                for m0 in 0..pc.s0() {
                    let class = second_family_member(pc, &set, &ells, m0).expect("indices in range");
                    out.push(TaggedRay { tag: RayTag::Second { set: set.clone(), ells: ells.clone(), m0 }, class });
                }
            }
        }
    }
    out
}

/// Increasing subsets of `{1..k}` of the given size, lexicographically.
fn subsets_of_size(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for j in start..=k {
            cur.push(j);
            rec(j + 1, k, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, k, size, &mut Vec::new(), &mut out);
    out
}

/// All tuples with `1 ≤ x_i ≤ bounds[i]`, lexicographically.
fn product_ranges(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out.into_iter().flat_map(|prefix| (1..=b).map(move |x| [prefix.clone(), vec![x]].concat())).collect();
    }
    out
}

/// `[L̃, C̃_1, ..., C̃_k, Ẽ_1, ..., Ẽ_s]`.
pub fn ne_generators(pc: &PencilConfiguration) -> Vec<TaggedRay> {
    let c = pc.config();
    let s = c.len();
    let mut line = DivisorClass::hyperplane(s);
    for x in line.exc.iter_mut().take(c.i_l()) {
        *x = rational(-1);
    }
    let mut out = vec![TaggedRay { tag: RayTag::Line, class: line }];
    for (j, &len) in pc.chain_lengths().iter().enumerate() {
        out.push(TaggedRay { tag: RayTag::Curve { j: j + 1 }, class: d(pc, j + 1, len).expect("in range") });
    }
    for u in 1..=s {
        let (j, ell) = pc.psi_inverse(u).expect("in range");
        out.push(TaggedRay {
            tag: RayTag::Exceptional { j, ell },
            class: lattice::strict_transform_of_exceptional(c, u).expect("in range"),
        });
    }
    out
}

/// Cone of curves generators together with the nef cone generators
/// `{D_{0,m} : 0 ≤ m ≤ s_0}` followed by the second family.
pub fn nef_generators(pc: &PencilConfiguration) -> GeneratorSet {
    let mut nef: Vec<TaggedRay> = first_family(pc).into_iter().take(pc.s0() + 1).collect();
    nef.extend(second_family(pc));
    GeneratorSet { ne: ne_generators(pc), nef }
}

/// Outcome of [`check_relations`]: the number of checked identities and a
/// description of every failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::InvalidConfiguration(self.failures))
        }
    }
}

/// Checks the intersection identities between the divisors of the first
/// family, the nonnegativity of the self-intersections of the nef generators
/// and the closed form of the self-intersection of second-family divisors.
pub fn check_relations(pc: &PencilConfiguration) -> RelationReport {
    let mut rep = RelationReport::default();
    let s0 = pc.s0();
    let dot = |a: &DivisorClass, b: &DivisorClass| a.intersect(b).expect("same dimension");
    let last = d(pc, 0, s0).expect("in range");

    rep.expect(dot(&last, &last).is_zero(), || format!("D0,s0 self-intersection = {}, expected 0", dot(&last, &last)));

    let a = a_vector(pc);
    let chains: Vec<(usize, usize)> = (1..=pc.k())
        .flat_map(|j| (1..=pc.chain_lengths()[j - 1]).map(move |m| (j, m)))
        .collect();
    for m0 in 0..=s0 {
        let base = d(pc, 0, m0).expect("in range");
        for &(j, m) in &chains {
            let x = dot(&base, &d(pc, j, m).expect("in range"));
            let expected = if m0 < s0 { a[m0].clone() } else { Rational::zero() };
            rep.expect(x == expected, || format!("D0,{m0} . D{j},{m} = {x}, expected {expected}"));
        }
        if m0 < s0 {
            rep.expect(a[m0].is_positive(), || format!("a_{m0} = {} is not positive", a[m0]));
        }
    }
    for &(j1, m1) in &chains {
        for &(j2, m2) in &chains {
            let x = dot(&d(pc, j1, m1).expect("in range"), &d(pc, j2, m2).expect("in range"));
            let expected = if j1 == j2 { rational(-(m1.min(m2) as i64)) } else { Rational::zero() };
            rep.expect(x == expected, || format!("D{j1},{m1} . D{j2},{m2} = {x}, expected {expected}"));
        }
    }

    let gens = nef_generators(pc);
    for ray in &gens.nef {
        let sq = ray.class.self_intersection();
        rep.expect(!sq.is_negative(), || format!("{} has negative self-intersection {sq}", ray.tag));
        if let RayTag::Second { ells, m0, .. } = &ray.tag {
            let product: i64 = ells.iter().map(|&l| l as i64).product();
            let base = d(pc, 0, *m0).expect("in range");
            let inv: Rational = ells.iter().map(|&l| lattice::ratio(1, l as i64)).sum();
            let expected = rational(product * product) * (dot(&base, &base) + &a[*m0] * &a[*m0] * inv);
            rep.expect(sq == expected, || format!("{} has self-intersection {sq}, expected {expected}", ray.tag));
        }
        for ne in &gens.ne {
            let x = dot(&ray.class, &ne.class);
            rep.expect(!x.is_negative(), || format!("{} . {} = {x} is negative", ray.tag, ne.tag));
        }
    }
    rep
}
