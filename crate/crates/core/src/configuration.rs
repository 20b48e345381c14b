//! Combinatorics of configurations of infinitely near points.
//!
//! Points are addressed by their *ordinal*, the 1-based position in the
//! admissible order of the configuration (base points first, then each free
//! chain). All matrices returned here are 0-indexed `Vec<Vec<i64>>`, so the
//! entry for ordinals `(u, v)` lives at `[u - 1][v - 1]`.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRecord {
    pub id: String,
    /// 1-based position in the admissible order.
    pub ordinal: usize,
    /// Ordinals of the earlier points this point is proximate to, ascending.
    pub proximate_to: Vec<usize>,
    /// Whether the strict transform of the line at infinity goes through the point.
    pub on_line: bool,
}

impl PointRecord {
    pub fn new(id: impl Into<String>, ordinal: usize, proximate_to: &[usize], on_line: bool) -> Self {
        let mut proximate_to = proximate_to.to_vec();
        proximate_to.sort_unstable();
        PointRecord { id: id.into(), ordinal, proximate_to, on_line }
    }

    pub fn is_satellite(&self) -> bool {
        self.proximate_to.len() == 2
    }

    pub fn is_free(&self) -> bool {
        !self.is_satellite()
    }

    /// The point whose exceptional divisor this point lies on, if any.
    pub fn parent(&self) -> Option<usize> {
        self.proximate_to.last().copied()
    }
}

/// A configuration of infinitely near points together with its block layout
/// `(s_0, s_1, ..., s_k)` and the number `i_L` of leading points on the line
/// at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    points: Vec<PointRecord>,
    block_sizes: Vec<usize>,
    i_l: usize,
    proximity: IntMatrix,
    multiplicity: IntMatrix,
}

impl Configuration {
    /// Builds and structurally validates a configuration.
    ///
    /// `block_sizes` must sum to the number of points; pass `&[points.len()]`
    /// for a configuration without attached chains.
    pub fn new(points: Vec<PointRecord>, block_sizes: &[usize]) -> Result<Self> {
        let s = points.len();
        if s == 0 {
            return Err(Error::Structural("configuration has no points".into()));
        }
        if block_sizes.is_empty() || block_sizes.iter().any(|&b| b == 0) {
            return Err(Error::Structural(format!("invalid block sizes {block_sizes:?}")));
        }
        if block_sizes.iter().sum::<usize>() != s {
            return Err(Error::Structural(format!(
                "block sizes {block_sizes:?} do not sum to the number of points {s}"
            )));
        }

        let mut ids = HashSet::new();
        let mut problems = Vec::new();
        for (idx, p) in points.iter().enumerate() {
            let u = idx + 1;
            if p.ordinal != u {
                return Err(Error::Structural(format!(
                    "point '{}' has ordinal {} but is listed at position {u}",
                    p.id, p.ordinal
                )));
            }
            if !ids.insert(p.id.as_str()) {
                return Err(Error::Structural(format!("duplicate point id '{}'", p.id)));
            }
            if p.proximate_to.len() > 2 {
                problems.push(format!("point {u} is proximate to more than two points"));
            }
            let mut sorted = p.proximate_to.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != p.proximate_to.len() || sorted != p.proximate_to {
                return Err(Error::Structural(format!(
                    "point {u}: proximity list must be strictly ascending"
                )));
            }
            if p.proximate_to.iter().any(|&v| v == 0 || v >= u) {
                return Err(Error::Structural(format!(
                    "point {u} is proximate to a point that does not precede it"
                )));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidConfiguration(problems));
        }

        // Admissibility: a satellite point lies on the intersection of the
        // exceptional divisor of its parent with the strict transform of one
        // divisor the parent is proximate to, and each such intersection point
        // can be used once.
        let mut used_corners = HashSet::new();
        for p in &points {
            if let [a, b] = p.proximate_to[..] {
                if !points[b - 1].proximate_to.contains(&a) {
                    problems.push(format!(
                        "satellite point {} is proximate to {a} and {b}, but {b} is not proximate to {a}",
                        p.ordinal
                    ));
                }
                if !used_corners.insert((a, b)) {
                    problems.push(format!(
                        "two points sit on the intersection of the divisors of {a} and {b}"
                    ));
                }
            }
        }

        // Line at infinity: a prefix chain of free points.
        let i_l = points.iter().take_while(|p| p.on_line).count();
        if points.iter().skip(i_l).any(|p| p.on_line) {
            problems.push(format!(
                "points on the line at infinity must form a prefix; found one after position {i_l}"
            ));
        }
        for p in points.iter().take(i_l) {
            let expected: Vec<usize> = if p.ordinal == 1 { vec![] } else { vec![p.ordinal - 1] };
            if p.proximate_to != expected {
                problems.push(format!(
                    "point {} on the line at infinity must be free and proximate only to its predecessor",
                    p.ordinal
                ));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidConfiguration(problems));
        }

        let proximity = build_proximity(&points);
        let multiplicity = build_multiplicity(&points);
        Ok(Configuration { points, block_sizes: block_sizes.to_vec(), i_l, proximity, multiplicity })
    }

    pub fn points(&self) -> &[PointRecord] {
        &self.points
    }

    pub fn point(&self, ordinal: usize) -> &PointRecord {
        &self.points[ordinal - 1]
    }

    /// Total number of points `s`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// Number of base points `s_0`.
    pub fn base_len(&self) -> usize {
        self.block_sizes[0]
    }

    /// Ordinal of the last point on the line at infinity (0 if none).
    pub fn i_l(&self) -> usize {
        self.i_l
    }

    fn check_ordinal(&self, u: usize) -> Result<()> {
        if u == 0 || u > self.len() {
            return Err(Error::Structural(format!("ordinal {u} out of range 1..={}", self.len())));
        }
        Ok(())
    }

    /// The configuration formed by the base block alone.
    pub fn base(&self) -> Configuration {
        if self.block_sizes.len() == 1 {
            return self.clone();
        }
        let n = self.base_len();
        Configuration::new(self.points[..n].to_vec(), &[n]).expect("prefix of a valid configuration is valid")
    }

    /// Whether `q_u` is proximate to `q_v`.
    pub fn is_proximate(&self, u: usize, v: usize) -> bool {
        self.points[u - 1].proximate_to.contains(&v)
    }

    /// Ordinals of the points proximate to `q_v`.
    pub fn proximate_points(&self, v: usize) -> Vec<usize> {
        self.points.iter().filter(|p| p.proximate_to.contains(&v)).map(|p| p.ordinal).collect()
    }

    /// Whether `q_u` is infinitely near `q_v` (including `u == v`).
    pub fn is_infinitely_near(&self, u: usize, v: usize) -> bool {
        let mut cur = Some(u);
        while let Some(w) = cur {
            if w == v {
                return true;
            }
            if w < v {
                return false;
            }
            cur = self.points[w - 1].parent();
        }
        false
    }

    /// Each point lies on the exceptional divisor of its immediate predecessor.
    pub fn is_chain(&self) -> bool {
        self.points.iter().skip(1).all(|p| p.proximate_to.contains(&(p.ordinal - 1)))
    }

    /// Unit lower-triangular proximity matrix: `1` on the diagonal and `-1` at
    /// `(u, v)` when `q_u` is proximate to `q_v`.
    pub fn proximity_matrix(&self) -> &IntMatrix {
        &self.proximity
    }

    /// Multiplicity matrix: row `u` is the multiplicity vector of a germ `φ_u`
    /// through `q_u` transversal to its exceptional divisor at a general point,
    /// so `[u][v] = mult_{q_v}(φ_u)`. It is the inverse of the proximity
    /// matrix, `M · P = I`.
    pub fn multiplicity_matrix(&self) -> &IntMatrix {
        &self.multiplicity
    }

    pub fn multiplicity_row(&self, u: usize) -> Result<&[i64]> {
        self.check_ordinal(u)?;
        Ok(&self.multiplicity[u - 1])
    }

    /// Intersection multiplicity `(φ_u, φ_v)` from the Noether formula.
    pub fn germ_pairing(&self, u: usize, v: usize) -> Result<i64> {
        self.check_ordinal(u)?;
        self.check_ordinal(v)?;
        let (a, b) = (&self.multiplicity[u - 1], &self.multiplicity[v - 1]);
        Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
    }

    /// Intersection multiplicity `(φ_L, φ_u)` with the line at infinity.
    pub fn line_pairing(&self, u: usize) -> Result<i64> {
        self.check_ordinal(u)?;
        Ok(self.multiplicity[u - 1][..self.i_l].iter().sum())
    }

    /// Sum of the entries of row `u` of the multiplicity matrix.
    pub fn multiplicity_sum(&self, u: usize) -> Result<i64> {
        Ok(self.multiplicity_row(u)?.iter().sum())
    }

    /// `M · Mᵗ`, the table of all germ pairings.
    pub fn germ_pairing_matrix(&self) -> IntMatrix {
        let s = self.len();
        let mut out = vec![vec![0; s]; s];
        for u in 0..s {
            for v in 0..=u {
                let val: i64 = self.multiplicity[u].iter().zip(&self.multiplicity[v]).map(|(x, y)| x * y).sum();
                out[u][v] = val;
                out[v][u] = val;
            }
        }
        out
    }

    /// Edges `(u, v)`, `u < v`, of the graph of strict transforms of the
    /// exceptional divisors on the blown-up surface: an edge joins two
    /// divisors whose strict transforms meet, i.e. `Ẽ_u · Ẽ_v = 1`.
    pub fn exceptional_edges(&self) -> Vec<(usize, usize)> {
        let strict: Vec<_> =
            (1..=self.len()).map(|u| lattice::strict_transform_of_exceptional(self, u).expect("valid ordinal")).collect();
        let mut edges = Vec::new();
        for u in 0..strict.len() {
            for v in u + 1..strict.len() {
                let x = strict[u].intersect(&strict[v]).expect("same dimension");
                if x == lattice::Rational::from_integer(1.into()) {
                    edges.push((u + 1, v + 1));
                }
            }
        }
        edges
    }

    /// Dual graph of the base block with its `st`/`ρ` labels.
    pub fn dual_graph(&self) -> Result<DualGraph> {
        DualGraph::of_base(&self.base())
    }

    /// Maximal contact values and related data of the germ `φ_{s_0}`.
    pub fn semigroup_data(&self) -> Result<SemigroupData> {
        let graph = self.dual_graph()?;
        SemigroupData::from_graph(&self.base(), &graph)
    }

    /// Table of the two families of inequalities satisfied by base
    /// configurations of pencils at infinity:
    ///
    /// * (i)  `(φ_L, φ_n)(φ_L, φ_{ρ_j}) > β̄_j` for `0 ≤ j ≤ g`,
    /// * (ii) `(φ_L, φ_n)(φ_L, φ_r) > (φ_r, φ_n)` for `1 ≤ r < n`.
    pub fn campillo_table(&self) -> Result<CampilloTable> {
        let base = self.base();
        let n = base.len();
        let d = base.line_pairing(n)?;
        let semigroup = self.semigroup_data()?;
        let mut item_i = Vec::new();
        for (j, (&rho, &beta)) in semigroup.rho_labels.iter().zip(&semigroup.beta_bars).enumerate() {
            let lhs = d * base.line_pairing(rho)?;
            item_i.push(InequalityRow { index: j, lhs, rhs: beta, holds: lhs > beta });
        }
        let mut item_ii = Vec::new();
        for r in 1..n {
            let lhs = d * base.line_pairing(r)?;
            let rhs = base.germ_pairing(r, n)?;
            item_ii.push(InequalityRow { index: r, lhs, rhs, holds: lhs > rhs });
        }
        Ok(CampilloTable { degree: d, item_i, item_ii })
    }

    /// [`Configuration::campillo_table`], failing if any inequality fails.
    pub fn check_campillo(&self) -> Result<CampilloTable> {
        let table = self.campillo_table()?;
        let failures = table.failures();
        if failures.is_empty() {
            Ok(table)
        } else {
            Err(Error::InvalidConfiguration(failures))
        }
    }

    /// DOT description of the graph of strict transforms of all exceptional
    /// divisors. `label` maps an ordinal to the vertex label.
    pub fn to_dot(&self, label: impl Fn(usize) -> String) -> String {
        let graph = self.dual_graph().ok();
        let mut out = String::from("graph dual {\n  node [shape=circle];\n");
        for u in 1..=self.len() {
            let mut attrs = vec![format!("label=\"{}\"", label(u))];
            if let Some(g) = &graph {
                if let Some(j) = g.st_labels.iter().position(|&x| x == u) {
                    attrs.push(format!("st=\"{}\"", j + 1));
                }
                let rhos: Vec<String> =
                    g.rho_labels.iter().enumerate().filter(|(_, &x)| x == u).map(|(j, _)| j.to_string()).collect();
                if !rhos.is_empty() {
                    attrs.push(format!("rho=\"{}\"", rhos.join(",")));
                }
            }
            if u > self.base_len() {
                attrs.push("block=\"chain\"".into());
            }
            let _ = writeln!(out, "  v{u} [{}];", attrs.join(", "));
        }
        for (u, v) in self.exceptional_edges() {
            let _ = writeln!(out, "  v{u} -- v{v};");
        }
        out.push_str("}\n");
        out
    }
}

fn build_proximity(points: &[PointRecord]) -> IntMatrix {
    let s = points.len();
    let mut p = vec![vec![0; s]; s];
    for (u, pt) in points.iter().enumerate() {
        p[u][u] = 1;
        for &v in &pt.proximate_to {
            p[u][v - 1] = -1;
        }
    }
    p
}

/// Solves `x · P = e_u` for every `u`. Since `P` is unit lower-triangular,
/// `x_v = δ_{uv} + Σ_{w → v} x_w` determines `x` from the last coordinate down.
fn build_multiplicity(points: &[PointRecord]) -> IntMatrix {
    let s = points.len();
    let mut proximate: Vec<Vec<usize>> = vec![Vec::new(); s];
    for (w, pt) in points.iter().enumerate() {
        for &v in &pt.proximate_to {
            proximate[v - 1].push(w);
        }
    }
    let mut m = vec![vec![0i64; s]; s];
    for u in 0..s {
        let row = &mut m[u];
        row[u] = 1;
        for v in (0..u).rev() {
            row[v] = proximate[v].iter().filter(|&&w| w <= u).map(|&w| row[w]).sum();
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRow {
    pub index: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampilloTable {
    pub degree: i64,
    pub item_i: Vec<InequalityRow>,
    pub item_ii: Vec<InequalityRow>,
}

impl CampilloTable {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in self.item_i.iter().filter(|r| !r.holds) {
            out.push(format!(
                "maximal contact inequality fails for j = {}: {} <= {}",
                row.index, row.lhs, row.rhs
            ));
        }
        for row in self.item_ii.iter().filter(|r| !r.holds) {
            out.push(format!("line inequality fails for r = {}: {} <= {}", row.index, row.lhs, row.rhs));
        }
        out
    }

    pub fn all_hold(&self) -> bool {
        self.item_i.iter().chain(&self.item_ii).all(|r| r.holds)
    }
}

/// Dual graph of the base configuration with the labelling of its
/// distinguished vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Degree-3 vertices in increasing order, `st_1 < ... < st_g`.
    pub st_labels: Vec<usize>,
    /// Leaves `ρ_0 = 1, ρ_1, ..., ρ_g, ρ_{g+1} = n`.
    pub rho_labels: Vec<usize>,
    /// Vertex sets of the subgraphs `Γ^1, ..., Γ^{g+1}`; the last one is the tail.
    pub subgraphs: Vec<Vec<usize>>,
}

impl DualGraph {
    fn of_base(base: &Configuration) -> Result<DualGraph> {
        let n = base.len();
        let edges = base.exceptional_edges();
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut problems = Vec::new();
        if edges.len() + 1 != n || !is_connected(n, &edges) {
            problems.push("dual graph is not a tree".to_string());
        }
        for u in 1..=n {
            if degree[u] > 3 {
                problems.push(format!("vertex {u} of the dual graph has degree {}", degree[u]));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidConfiguration(problems));
        }

        if n == 1 {
            return Ok(DualGraph {
                vertices: 1,
                edges,
                st_labels: vec![],
                rho_labels: vec![1, 1],
                subgraphs: vec![vec![1]],
            });
        }

        let st_labels: Vec<usize> = (1..=n).filter(|&u| degree[u] == 3).collect();
        let leaves: Vec<usize> = (1..=n).filter(|&u| degree[u] == 1).collect();
        let g = st_labels.len();
        if degree[1] != 1 {
            problems.push("vertex 1 of the dual graph is not a leaf".into());
        }
        if degree[n] != 1 {
            problems.push(format!("last base vertex {n} of the dual graph is not a leaf"));
        }
        if leaves.len() != g + 2 {
            problems.push(format!("dual graph has {} leaves but {g} vertices of degree 3", leaves.len()));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidConfiguration(problems));
        }
        let mut rho_labels = vec![1];
        rho_labels.extend(leaves.iter().copied().filter(|&u| u != 1 && u != n));
        rho_labels.push(n);
        for j in 1..=g {
            let lower = if j == 1 { 1 } else { st_labels[j - 2] };
            if !(lower < rho_labels[j] && rho_labels[j] < st_labels[j - 1]) {
                problems.push(format!(
                    "leaf {} does not lie between consecutive degree-3 vertices",
                    rho_labels[j]
                ));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidConfiguration(problems));
        }
        let mut bounds = vec![1];
        bounds.extend(&st_labels);
        bounds.push(n);
        let subgraphs = if g == 0 {
            vec![(1..=n).collect()]
        } else {
            bounds.windows(2).map(|w| (w[0]..=w[1]).collect()).collect()
        };
        Ok(DualGraph { vertices: n, edges, st_labels, rho_labels, subgraphs })
    }

    pub fn g(&self) -> usize {
        self.st_labels.len()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == u || b == u).count()
    }

    /// Vertices of the tail, `st_g ≤ i ≤ n`.
    pub fn tail(&self) -> &[usize] {
        self.subgraphs.last().expect("at least one subgraph")
    }
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen[1..].iter().all(|&x| x)
}

/// Maximal contact values `β̄_0, ..., β̄_g` of the germ `φ_n` together with
/// `e_i = gcd(β̄_0, ..., β̄_i)` and `n_i = e_{i-1} / e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupData {
    pub beta_bars: Vec<i64>,
    pub e: Vec<i64>,
    pub n_seq: Vec<i64>,
    pub st_labels: Vec<usize>,
    pub rho_labels: Vec<usize>,
    pub g: usize,
}

impl SemigroupData {
    fn from_graph(base: &Configuration, graph: &DualGraph) -> Result<SemigroupData> {
        let n = base.len();
        let g = graph.g();
        let beta_bars: Vec<i64> =
            graph.rho_labels[..=g].iter().map(|&rho| base.germ_pairing(n, rho)).collect::<Result<_>>()?;
        let mut e = Vec::with_capacity(g + 1);
        let mut acc = 0i64;
        for &b in &beta_bars {
            acc = acc.gcd(&b);
            e.push(acc);
        }
        let n_seq: Vec<i64> = (1..=g).map(|i| e[i - 1] / e[i]).collect();

        let mut problems = Vec::new();
        if g >= 1 && beta_bars[0] >= beta_bars[1] {
            problems.push(format!("β̄_0 = {} is not smaller than β̄_1 = {}", beta_bars[0], beta_bars[1]));
        }
        for i in 1..g {
            if n_seq[i - 1] * beta_bars[i] >= beta_bars[i + 1] {
                problems.push(format!(
                    "n_{i} β̄_{i} = {} is not smaller than β̄_{} = {}",
                    n_seq[i - 1] * beta_bars[i],
                    i + 1,
                    beta_bars[i + 1]
                ));
            }
        }
        for (j, &st) in graph.st_labels.iter().enumerate() {
            let pairing = base.germ_pairing(n, st)?;
            if pairing != n_seq[j] * beta_bars[j + 1] {
                problems.push(format!(
                    "(φ_n, φ_st{}) = {pairing} differs from n_{} β̄_{} = {}",
                    j + 1,
                    j + 1,
                    j + 1,
                    n_seq[j] * beta_bars[j + 1]
                ));
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidConfiguration(problems));
        }
        Ok(SemigroupData {
            beta_bars,
            e,
            n_seq,
            st_labels: graph.st_labels.clone(),
            rho_labels: graph.rho_labels.clone(),
            g,
        })
    }
}
