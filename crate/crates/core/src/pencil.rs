//! Configurations made of the base points of a pencil at infinity followed by
//! free chains attached at free points of the last exceptional divisor.
//!
//! Points are also addressed by `(block, index)`: block 0 holds the base
//! points `p_{0,1}, ..., p_{0,s_0}` and block `j ≥ 1` the chain
//! `p_{j,1}, ..., p_{j,s_j}`. [`PencilConfiguration::psi`] converts to the
//! ordinal used everywhere else.

use crate::configuration::{CampilloTable, Configuration, PointRecord, SemigroupData};
use crate::error::{Error, Result};

/// Appends `lengths.len()` free chains to a base configuration. The first
/// point of each chain is proximate to the last base point only; each further
/// point is proximate to its predecessor only.
pub fn attach_chains(base: &Configuration, lengths: &[usize]) -> Result<Configuration> {
    if lengths.iter().any(|&l| l == 0) {
        return Err(Error::Structural("chain lengths must be at least 1".into()));
    }
    let base = base.base();
    let n = base.len();
    let mut points: Vec<PointRecord> = base.points().to_vec();
    for (j, &len) in lengths.iter().enumerate() {
        for i in 1..=len {
            let ordinal = points.len() + 1;
            let parent = if i == 1 { n } else { ordinal - 1 };
            points.push(PointRecord::new(format!("p{}_{}", j + 1, i), ordinal, &[parent], false));
        }
    }
    let mut blocks = vec![n];
    blocks.extend_from_slice(lengths);
    Configuration::new(points, &blocks)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Human readable details, one per failure (empty when passed).
    pub failures: Vec<String>,
    /// Ordinals involved in the failures.
    pub indices: Vec<usize>,
}

impl Check {
    fn pass(name: &'static str) -> Self {
        Check { name, passed: true, failures: vec![], indices: vec![] }
    }

    fn fail(name: &'static str, failures: Vec<String>, indices: Vec<usize>) -> Self {
        Check { name, passed: false, failures, indices }
    }
}

/// Outcome of every pencil validation check, in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilReport {
    pub checks: Vec<Check>,
    pub degree: Option<i64>,
    pub semigroup: Option<SemigroupData>,
    pub campillo: Option<CampilloTable>,
}

impl PencilReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().flat_map(|c| c.failures.iter().cloned()).collect()
    }
}

/// Runs all checks without stopping at the first failure.
pub fn pencil_report(config: &Configuration) -> PencilReport {
    let mut checks = Vec::new();
    let base = config.base();
    let n = base.len();

    // The base points form a single chain starting at the origin.
    let mut bad: Vec<usize> = base
        .points()
        .iter()
        .skip(1)
        .filter(|p| !p.proximate_to.contains(&(p.ordinal - 1)))
        .map(|p| p.ordinal)
        .collect();
    if !base.points()[0].proximate_to.is_empty() {
        bad.insert(0, 1);
    }
    checks.push(if bad.is_empty() {
        Check::pass("base-chain")
    } else {
        let msgs = bad.iter().map(|u| format!("base point {u} does not lie on the divisor of its predecessor")).collect();
        Check::fail("base-chain", msgs, bad)
    });

    checks.push(if config.i_l() >= 1 {
        Check::pass("line-at-infinity")
    } else {
        Check::fail("line-at-infinity", vec!["the line at infinity goes through no point".into()], vec![1])
    });

    let semigroup = match base.semigroup_data() {
        Ok(sg) => {
            checks.push(Check::pass("dual-graph"));
            Some(sg)
        }
        Err(Error::InvalidConfiguration(msgs)) => {
            checks.push(Check::fail("dual-graph", msgs, vec![]));
            None
        }
        Err(e) => {
            checks.push(Check::fail("dual-graph", vec![e.to_string()], vec![]));
            None
        }
    };

    let d = base.line_pairing(n).expect("valid ordinal");
    let self_int = d * d - base.germ_pairing(n, n).expect("valid ordinal");
    checks.push(if self_int == 0 {
        Check::pass("pencil-self-intersection")
    } else {
        Check::fail(
            "pencil-self-intersection",
            vec![format!("D0,s0 self-intersection = {self_int}, expected 0")],
            vec![n],
        )
    });

    let campillo = if semigroup.is_some() {
        let table = base.campillo_table().expect("dual graph already validated");
        let failures = table.failures();
        if failures.is_empty() {
            checks.push(Check::pass("line-inequalities"));
        } else {
            let idx = table.item_ii.iter().filter(|r| !r.holds).map(|r| r.index).collect();
            checks.push(Check::fail("line-inequalities", failures, idx));
        }
        Some(table)
    } else {
        // Item (ii) does not need the dual graph; report it anyway.
        let mut failures = Vec::new();
        let mut idx = Vec::new();
        for r in 1..n {
            let lhs = d * base.line_pairing(r).expect("valid ordinal");
            let rhs = base.germ_pairing(r, n).expect("valid ordinal");
            if lhs <= rhs {
                failures.push(format!("line inequality fails for r = {r}: {lhs} <= {rhs}"));
                idx.push(r);
            }
        }
        checks.push(if failures.is_empty() {
            Check::pass("line-inequalities")
        } else {
            Check::fail("line-inequalities", failures, idx)
        });
        None
    };

    // Chain points: free, off the line, attached at the last base point.
    let mut msgs = Vec::new();
    let mut idx = Vec::new();
    let mut start = n;
    for &len in &config.block_sizes()[1..] {
        for i in 1..=len {
            let u = start + i;
            let p = config.point(u);
            let expected = if i == 1 { n } else { u - 1 };
            if p.proximate_to != [expected] || p.on_line {
                msgs.push(format!("chain point {u} must be free and proximate only to point {expected}"));
                idx.push(u);
            }
        }
        start += len;
    }
    checks.push(if msgs.is_empty() { Check::pass("chains") } else { Check::fail("chains", msgs, idx) });

    PencilReport { checks, degree: Some(d), semigroup, campillo }
}

/// A configuration validated to be of the supported class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilConfiguration {
    config: Configuration,
    degree: i64,
    semigroup: SemigroupData,
    campillo: CampilloTable,
}

impl PencilConfiguration {
    /// Validates `config`; on failure every failed check is listed.
    pub fn validate(config: Configuration) -> Result<Self> {
        let report = pencil_report(&config);
        if !report.passed() {
            return Err(Error::InvalidConfiguration(report.failures()));
        }
        Ok(PencilConfiguration {
            degree: report.degree.expect("computed"),
            semigroup: report.semigroup.expect("computed when valid"),
            campillo: report.campillo.expect("computed when valid"),
            config,
        })
    }

    /// Attaches free chains of the given lengths to `base` and validates.
    pub fn from_base(base: &Configuration, chain_lengths: &[usize]) -> Result<Self> {
        Self::validate(attach_chains(base, chain_lengths)?)
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    /// Degree `d` of the curves of the pencil.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Number of attached chains `k`.
    pub fn k(&self) -> usize {
        self.config.block_sizes().len() - 1
    }

    pub fn s0(&self) -> usize {
        self.config.base_len()
    }

    pub fn s(&self) -> usize {
        self.config.len()
    }

    /// Lengths `s_1, ..., s_k`.
    pub fn chain_lengths(&self) -> &[usize] {
        &self.config.block_sizes()[1..]
    }

    pub fn semigroup(&self) -> &SemigroupData {
        &self.semigroup
    }

    pub fn campillo(&self) -> &CampilloTable {
        &self.campillo
    }

    /// Ordinals of the first points `p_{j,1}` of the chains.
    pub fn attachments(&self) -> Vec<usize> {
        (1..=self.k()).map(|j| self.psi(j, 1).expect("in range")).collect()
    }

    /// The configuration of base points alone, as a pencil configuration.
    pub fn base_pencil(&self) -> PencilConfiguration {
        PencilConfiguration {
            config: self.config.base(),
            degree: self.degree,
            semigroup: self.semigroup.clone(),
            campillo: self.campillo.clone(),
        }
    }

    /// Ordinal of `p_{j,ell}`.
    pub fn psi(&self, j: usize, ell: usize) -> Result<usize> {
        let blocks = self.config.block_sizes();
        if j >= blocks.len() || ell == 0 || ell > blocks[j] {
            return Err(Error::Structural(format!("point ({j}, {ell}) does not exist")));
        }
        Ok(blocks[..j].iter().sum::<usize>() + ell)
    }

    /// Inverse of [`PencilConfiguration::psi`].
    pub fn psi_inverse(&self, ordinal: usize) -> Result<(usize, usize)> {
        let mut offset = 0;
        for (j, &len) in self.config.block_sizes().iter().enumerate() {
            if ordinal > offset && ordinal <= offset + len {
                return Ok((j, ordinal - offset));
            }
            offset += len;
        }
        Err(Error::Structural(format!("ordinal {ordinal} out of range 1..={}", self.s())))
    }

    /// Label `E_{j,l}` of the exceptional divisor of the point with this ordinal.
    pub fn label(&self, ordinal: usize) -> String {
        match self.psi_inverse(ordinal) {
            Ok((j, l)) => format!("E_{{{j},{l}}}"),
            Err(_) => format!("E_{ordinal}"),
        }
    }
}
