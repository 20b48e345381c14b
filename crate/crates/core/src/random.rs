//! Seeded generation of valid pencil configurations.
//!
//! A base is built as a chain: a prefix of free points on the line at
//! infinity, a few more points each lying on the previous exceptional divisor
//! (and possibly also on another one through that point, making it a
//! satellite point), then
//! enough free points to bring the self-intersection of `D_{0,s_0}` to zero.
//! Candidates that fail pencil validation are discarded.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::configuration::{Configuration, PointRecord};
use crate::pencil::{attach_chains, PencilConfiguration};
use crate::positivity::ams_check;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomOptions {
    /// Bound on the total number of points `s`.
    pub max_points: usize,
    /// Bound on the number of base points `s_0`.
    pub max_base: usize,
    pub max_chains: usize,
    pub max_chain_len: usize,
    /// Points on the line at infinity, at most.
    pub max_line_points: usize,
    /// Points placed before the free tail (after the line prefix), at most.
    pub max_prefix_steps: usize,
    pub require_ams: bool,
    /// Bound on the number of degree-3 vertices of the dual graph.
    pub max_g: Option<usize>,
    /// Force `k = 0`.
    pub base_only: bool,
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions {
            max_points: 11,
            max_base: 11,
            max_chains: 3,
            max_chain_len: 3,
            max_line_points: 3,
            max_prefix_steps: 4,
            require_ams: false,
            max_g: None,
            base_only: false,
        }
    }
}

/// Candidate attempts before giving up on a single draw.
const MAX_ATTEMPTS: usize = 100_000;

/// Draws a random base configuration (not yet validated as a pencil).
fn candidate_base(rng: &mut impl Rng, opts: &RandomOptions) -> Option<Configuration> {
    let i_l = rng.gen_range(1..=opts.max_line_points.max(1));
    let mut prox: Vec<Vec<usize>> = Vec::new();
    for u in 1..=i_l {
        prox.push(if u == 1 { vec![] } else { vec![u - 1] });
    }
    let steps = rng.gen_range(0..=opts.max_prefix_steps);
    for _ in 0..steps {
        let pred = prox.len();
        let mut p = vec![pred];
        // A satellite point sits where the last divisor meets the strict
        // transform of a divisor the last point was proximate to.
        let corners = &prox[pred - 1];
        if !corners.is_empty() && rng.gen_bool(0.5) {
            p.insert(0, corners[rng.gen_range(0..corners.len())]);
        }
        prox.push(p);
        if prox.len() > opts.max_base {
            return None;
        }
    }
    let prefix = build(&prox, i_l)?;
    let n = prefix.len();
    let d = prefix.line_pairing(n).ok()?;
    let self_int = d * d - prefix.germ_pairing(n, n).ok()?;
    if self_int < 0 || n + self_int as usize > opts.max_base {
        return None;
    }
    for _ in 0..self_int {
        let pred = prox.len();
        prox.push(vec![pred]);
    }
    build(&prox, i_l)
}

fn build(prox: &[Vec<usize>], i_l: usize) -> Option<Configuration> {
    let points = prox
        .iter()
        .enumerate()
        .map(|(i, p)| PointRecord::new(format!("p0_{}", i + 1), i + 1, p, i < i_l))
        .collect();
    Configuration::new(points, &[prox.len()]).ok()
}

/// Draws a valid pencil configuration meeting the options.
pub fn random_pencil(rng: &mut impl Rng, opts: &RandomOptions) -> Option<PencilConfiguration> {
    for _ in 0..MAX_ATTEMPTS {
        let Some(base) = candidate_base(rng, opts) else { continue };
        let Ok(pc) = PencilConfiguration::validate(base) else { continue };
        if opts.require_ams && !ams_check(&pc).is_ams {
            continue;
        }
        if opts.max_g.is_some_and(|g| pc.semigroup().g > g) {
            continue;
        }
        if opts.base_only {
            return Some(pc);
        }
        let budget = opts.max_points.saturating_sub(pc.s0());
        let mut lengths = Vec::new();
        let k = rng.gen_range(0..=opts.max_chains);
        let mut used = 0;
        for _ in 0..k {
            let cap = opts.max_chain_len.min(budget - used);
            if cap == 0 {
                break;
            }
            let l = rng.gen_range(1..=cap);
            lengths.push(l);
            used += l;
        }
        let Ok(config) = attach_chains(pc.config(), &lengths) else { continue };
        if let Ok(full) = PencilConfiguration::validate(config) {
            return Some(full);
        }
    }
    None
}

/// `count` configurations from a fixed seed.
pub fn random_pencils(seed: u64, count: usize, opts: &RandomOptions) -> Vec<PencilConfiguration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map_while(|_| random_pencil(&mut rng, opts)).collect()
}

/// Up to `count` pairwise distinct configurations from a fixed seed, giving
/// up after `max_draws` draws.
pub fn random_distinct_pencils(seed: u64, count: usize, max_draws: usize, opts: &RandomOptions) -> Vec<PencilConfiguration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PencilConfiguration> = Vec::new();
    for _ in 0..max_draws {
        if out.len() == count {
            break;
        }
        let Some(pc) = random_pencil(&mut rng, opts) else { break };
        if !out.contains(&pc) {
            out.push(pc);
        }
    }
    out
}
