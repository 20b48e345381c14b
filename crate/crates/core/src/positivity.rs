//! The quadratic form `G` of a configuration, P-sufficiency (strict
//! copositivity of `G`) and the verdicts derived from it.
//!
//! For each point `u` let `Q_u = Σ_w mult_{q_w}(φ_u) E*_w`. Then
//! `g_uv = -9 Q_u·Q_v - (K·Q_u)(K·Q_v)`, which simplifies to
//! `9 (φ_u, φ_v) - (Σ_w m_uw)(Σ_w m_vw)`.

use num_traits::{One, Signed, Zero};

use crate::cones;
use crate::configuration::{Configuration, IntMatrix};
use crate::error::{Error, Result};
use crate::lattice::{self, rational, DivisorClass, Rational};
use crate::pencil::PencilConfiguration;

/// Default largest denominator of the falsifier grid.
pub const DEFAULT_GRID_DENOM: u32 = 8;

/// Grid points examined at most, over all denominators.
pub const GRID_POINT_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMatrix {
    pub entries: IntMatrix,
    /// Block sizes `(s_0, s_1, ..., s_k)` of the configuration.
    pub block_sizes: Vec<usize>,
}

impl GMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry for the 1-based ordinals `(u, v)`.
    pub fn get(&self, u: usize, v: usize) -> i64 {
        self.entries[u - 1][v - 1]
    }

    /// `x G xᵗ`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, xj) in x.iter().enumerate() {
                acc += xi * xj * rational(self.entries[i][j]);
            }
        }
        acc
    }

    fn sub_block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        self.entries[rows].iter().map(|r| r[cols.clone()].to_vec()).collect()
    }

    /// Rows and columns of the base points.
    pub fn base_block(&self) -> IntMatrix {
        let n = self.block_sizes[0];
        self.sub_block(0..n, 0..n)
    }

    /// Rows of the base points against columns of the chain points.
    pub fn mixed_block(&self) -> IntMatrix {
        let n = self.block_sizes[0];
        self.sub_block(0..n, n..self.size())
    }

    /// Rows and columns of the chain points.
    pub fn chain_block(&self) -> IntMatrix {
        let n = self.block_sizes[0];
        self.sub_block(n..self.size(), n..self.size())
    }
}

/// `9 (φ_u, φ_v) - rowsum_u · rowsum_v`.
pub fn g_matrix_from_multiplicities(config: &Configuration) -> IntMatrix {
    let pairing = config.germ_pairing_matrix();
    let sums: Vec<i64> = config.multiplicity_matrix().iter().map(|r| r.iter().sum()).collect();
    let s = config.len();
    (0..s).map(|u| (0..s).map(|v| 9 * pairing[u][v] - sums[u] * sums[v]).collect()).collect()
}

/// `-9 Q_u·Q_v - (K·Q_u)(K·Q_v)` computed with the intersection form.
pub fn g_matrix_from_lattice(config: &Configuration) -> IntMatrix {
    let k = lattice::canonical_class(config);
    let q: Vec<DivisorClass> =
        (1..=config.len()).map(|u| lattice::germ_exceptional_part(config, u).expect("valid ordinal")).collect();
    let kq: Vec<Rational> = q.iter().map(|x| k.intersect(x).expect("same dimension")).collect();
    let to_i64 = |x: Rational| -> i64 {
        let n = x.to_integer();
        i64::try_from(&n).expect("entries fit in i64")
    };
    (0..q.len())
        .map(|u| {
            (0..q.len())
                .map(|v| to_i64(rational(-9) * q[u].intersect(&q[v]).expect("same dimension") - &kq[u] * &kq[v]))
                .collect()
        })
        .collect()
}

/// The `G` matrix, computed both ways; a disagreement is reported as an
/// internal error.
pub fn g_matrix(config: &Configuration) -> Result<GMatrix> {
    let a = g_matrix_from_multiplicities(config);
    let b = g_matrix_from_lattice(config);
    if a != b {
        return Err(Error::Internal("the two computations of G disagree".into()));
    }
    Ok(GMatrix { entries: a, block_sizes: config.block_sizes().to_vec() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SufficiencyCriterion {
    /// The configuration is a chain and the last diagonal entry is positive.
    ChainLastDiagonal,
    /// All entries are nonnegative and all diagonal entries positive.
    NonnegativeEntries,
}

impl SufficiencyCriterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            SufficiencyCriterion::ChainLastDiagonal => "chain with positive last diagonal entry",
            SufficiencyCriterion::NonnegativeEntries => "nonnegative entries and positive diagonal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ProvenSufficient(SufficiencyCriterion),
    /// A nonzero `x ≥ 0` with `x G xᵗ ≤ 0`.
    ProvenInsufficient { witness: Vec<Rational>, value: Rational },
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::ProvenSufficient(_) => "ProvenSufficient",
            Verdict::ProvenInsufficient { .. } => "ProvenInsufficient",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_sufficient(&self) -> bool {
        matches!(self, Verdict::ProvenSufficient(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSufficiencyReport {
    pub g: GMatrix,
    pub verdict: Verdict,
}

impl PSufficiencyReport {
    /// Re-checks the certificate of the verdict.
    pub fn verify(&self) -> bool {
        let g = &self.g;
        let s = g.size();
        match &self.verdict {
            Verdict::ProvenSufficient(SufficiencyCriterion::ChainLastDiagonal) => g.get(s, s) > 0,
            Verdict::ProvenSufficient(SufficiencyCriterion::NonnegativeEntries) => {
                (0..s).all(|i| g.entries[i][i] > 0 && g.entries[i].iter().all(|&x| x >= 0))
            }
            Verdict::ProvenInsufficient { witness, value } => {
                witness.len() == s
                    && witness.iter().all(|x| !x.is_negative())
                    && witness.iter().any(|x| !x.is_zero())
                    && g.quadratic_form(witness) == *value
                    && !value.is_positive()
            }
            Verdict::Inconclusive => true,
        }
    }
}

/// Decides P-sufficiency of any valid configuration when possible:
/// chain criterion, then the entrywise criterion, then a search for a
/// falsifying nonnegative vector (coordinate vectors, exact minimisation on
/// pairs of coordinates, then a rational grid on the simplex with
/// denominators up to `grid_denom`).
pub fn p_sufficiency(config: &Configuration, grid_denom: u32) -> Result<PSufficiencyReport> {
    let g = g_matrix(config)?;
    let s = g.size();
    let verdict = if config.is_chain() {
        let t = g.get(s, s);
        if t > 0 {
            Verdict::ProvenSufficient(SufficiencyCriterion::ChainLastDiagonal)
        } else {
            let mut w = vec![Rational::zero(); s];
            w[s - 1] = Rational::one();
            Verdict::ProvenInsufficient { witness: w, value: rational(t) }
        }
    } else if (0..s).all(|i| g.entries[i][i] > 0 && g.entries[i].iter().all(|&x| x >= 0)) {
        Verdict::ProvenSufficient(SufficiencyCriterion::NonnegativeEntries)
    } else {
        match find_falsifier(&g, grid_denom) {
            Some((witness, value)) => Verdict::ProvenInsufficient { witness, value },
            None => Verdict::Inconclusive,
        }
    };
    let report = PSufficiencyReport { g, verdict };
    if !report.verify() {
        return Err(Error::Internal("P-sufficiency certificate failed to verify".into()));
    }
    Ok(report)
}

fn find_falsifier(g: &GMatrix, grid_denom: u32) -> Option<(Vec<Rational>, Rational)> {
    let s = g.size();
    let unit = |i: usize| {
        let mut w = vec![Rational::zero(); s];
        w[i] = Rational::one();
        w
    };
    for i in 0..s {
        if g.entries[i][i] <= 0 {
            return Some((unit(i), rational(g.entries[i][i])));
        }
    }
    // q(t) = t² a + 2t(1-t) b + (1-t)² c is minimal at t = (c - b) / (a - 2b + c).
    for u in 0..s {
        for v in u + 1..s {
            let (a, b, c) = (g.entries[u][u], g.entries[u][v], g.entries[v][v]);
            if b >= 0 {
                continue;
            }
            let den = a - 2 * b + c;
            if den <= 0 {
                continue;
            }
            let t = lattice::ratio(c - b, den);
            if t.is_negative() || t > Rational::one() {
                continue;
            }
            let mut w = vec![Rational::zero(); s];
            w[u] = t.clone();
            w[v] = Rational::one() - t;
            let value = g.quadratic_form(&w);
            if !value.is_positive() {
                return Some((w, value));
            }
        }
    }
    let mut visited = 0usize;
    for n in 1..=grid_denom {
        let mut parts = vec![0u32; s];
        let mut found = None;
        compositions(n, 0, &mut parts, &mut visited, &mut |parts| {
            // Sign of n² x G xᵗ in integers; rationals only for the witness.
            let support: Vec<usize> = (0..s).filter(|&i| parts[i] > 0).collect();
            let scaled: i128 = support
                .iter()
                .flat_map(|&i| support.iter().map(move |&j| (i, j)))
                .map(|(i, j)| i128::from(parts[i]) * i128::from(parts[j]) * i128::from(g.entries[i][j]))
                .sum();
            if scaled > 0 {
                return false;
            }
            let w: Vec<Rational> = parts.iter().map(|&p| lattice::ratio(i64::from(p), i64::from(n))).collect();
            let value = g.quadratic_form(&w);
            found = Some((w, value));
            true
        });
        if found.is_some() {
            return found;
        }
        if visited >= GRID_POINT_CAP {
            break;
        }
    }
    None
}

/// Visits the compositions of `remaining` into the free slots of `parts` in
/// lexicographically decreasing order of the first coordinates. Stops when
/// `visit` returns `true` or the point cap is reached.
fn compositions(
    remaining: u32,
    pos: usize,
    parts: &mut Vec<u32>,
    visited: &mut usize,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if pos + 1 == parts.len() {
        parts[pos] = remaining;
        *visited += 1;
        let stop = visit(parts);
        parts[pos] = 0;
        return stop || *visited >= GRID_POINT_CAP;
    }
    for x in (0..=remaining).rev() {
        parts[pos] = x;
        if compositions(remaining - x, pos + 1, parts, visited, visit) {
            parts[pos] = 0;
            return true;
        }
    }
    parts[pos] = 0;
    false
}

/// Residuals of the two identities characterising rational curves with one
/// place at infinity that are smooth in the affine part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmsReport {
    pub is_ams: bool,
    /// `Σ m² - d²`.
    pub square_residual: i64,
    /// `Σ m - (3d - 2)`.
    pub sum_residual: i64,
}

/// Checks `Σ m² = d²` and `Σ m = 3d - 2` for a multiplicity row.
pub fn ams_identities(row: &[i64], d: i64) -> AmsReport {
    let sq: i64 = row.iter().map(|m| m * m).sum();
    let sum: i64 = row.iter().sum();
    let square_residual = sq - d * d;
    let sum_residual = sum - (3 * d - 2);
    AmsReport { is_ams: square_residual == 0 && sum_residual == 0, square_residual, sum_residual }
}

pub fn ams_check(pc: &PencilConfiguration) -> AmsReport {
    let n = pc.s0();
    let row = &pc.config().multiplicity_row(n).expect("in range")[..n];
    ams_identities(row, pc.degree())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxReason {
    /// No chains are attached: the surface comes from the base points only.
    BaseConfiguration,
    /// A rational curve smooth in its affine part with chains of length at most two.
    AmsShortChains,
    /// P-sufficient, hence the anticanonical class is big.
    PSufficient,
}

impl CoxReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoxReason::BaseConfiguration => "base points of the pencil only",
            CoxReason::AmsShortChains => "AMS-type curve with chains of length at most 2",
            CoxReason::PSufficient => "P-sufficient configuration, so -K is big",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxVerdict {
    FinitelyGenerated(CoxReason),
    Unknown,
}

impl CoxVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            CoxVerdict::FinitelyGenerated(_) => "FinitelyGenerated",
            CoxVerdict::Unknown => "Unknown",
        }
    }

    pub fn reason(&self) -> Option<&'static str> {
        match self {
            CoxVerdict::FinitelyGenerated(r) => Some(r.as_str()),
            CoxVerdict::Unknown => None,
        }
    }
}

/// Finite generation of the Cox ring when one of the known sufficient
/// conditions applies; never a negative answer.
pub fn cox_verdict(pc: &PencilConfiguration, grid_denom: u32) -> Result<CoxVerdict> {
    if pc.k() == 0 {
        return Ok(CoxVerdict::FinitelyGenerated(CoxReason::BaseConfiguration));
    }
    if ams_check(pc).is_ams && pc.chain_lengths().iter().all(|&l| l <= 2) {
        return Ok(CoxVerdict::FinitelyGenerated(CoxReason::AmsShortChains));
    }
    if p_sufficiency(pc.config(), grid_denom)?.verdict.is_sufficient() {
        return Ok(CoxVerdict::FinitelyGenerated(CoxReason::PSufficient));
    }
    Ok(CoxVerdict::Unknown)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigAnticanonicalReport {
    /// `true` only when bigness is proven; `false` means "not established".
    pub big: bool,
    pub anticanonical_square: Rational,
    /// Tags of nef generators `D` with `-K · D ≤ 0`.
    pub nonpositive_rays: Vec<String>,
    pub checked_rays: usize,
}

/// Bigness of `-K` from the P-sufficiency verdict, with the pairings of `-K`
/// against every nef generator.
pub fn big_anticanonical_report(pc: &PencilConfiguration, verdict: &Verdict) -> BigAnticanonicalReport {
    let minus_k = -lattice::canonical_class(pc.config());
    let gens = cones::nef_generators(pc);
    let nonpositive_rays = gens
        .nef
        .iter()
        .filter(|r| !r.class.is_zero())
        .filter(|r| !minus_k.intersect(&r.class).expect("same dimension").is_positive())
        .map(|r| r.tag.to_string())
        .collect();
    BigAnticanonicalReport {
        big: verdict.is_sufficient(),
        anticanonical_square: minus_k.self_intersection(),
        nonpositive_rays,
        checked_rays: gens.nef.len(),
    }
}
