//! Partition-based approximate maximum flow.
//!
//! The graph is cut into `k = 2^level` parts by recursive Kernighan-Lin.
//! When source and sink fall into the same part, the answer is the exact flow
//! inside that part. Otherwise every part gets a flow budget from an exact
//! flow computed inside it (source part: from `s` to a random vertex; sink
//! part: from a random vertex to `t`; all others: between two random
//! vertices). Parts become supernodes joined by uncapacitated arcs wherever
//! an original edge crosses between them, and flow is pushed along shortest
//! supernode paths, each path limited by the smallest budget on it, until
//! the source supernode can no longer reach the sink supernode.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, split_by_part, CapacitatedGraph, VertexId};
use crate::maxflow::edmonds_karp_unchecked;
use crate::partition::{recursive_partition_with, KlConfig, Partitioning};
use crate::rng::{stream, Stream};

/// Flow a supernode can still relay.
///
/// Single-vertex parts have no internal source/sink pair and therefore no
/// internal bottleneck; they are `Unbounded`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Budget {
    Finite(u64),
    Unbounded,
}

impl Budget {
    pub fn finite(self) -> Option<u64> {
        match self {
            Budget::Finite(v) => Some(v),
            Budget::Unbounded => None,
        }
    }

    fn is_exhausted(self) -> bool {
        self == Budget::Finite(0)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(v) => v.fmt(f),
            Budget::Unbounded => f.write_str("inf"),
        }
    }
}

/// The `k`-node condensed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperGraph {
    k: usize,
    budgets: Vec<Budget>,
    removed: Vec<bool>,
    /// Row-major `k × k` adjacency; arcs carry no capacity.
    arcs: Vec<bool>,
}

impl SuperGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn budget(&self, r: usize) -> Budget {
        self.budgets[r]
    }

    pub fn budgets(&self) -> &[Budget] {
        &self.budgets
    }

    pub fn is_removed(&self, r: usize) -> bool {
        self.removed[r]
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.arcs[a * self.k + b]
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().filter(|&&a| a).count()
    }

    pub fn remove(&mut self, r: usize) {
        self.removed[r] = true;
    }

    /// Subtracts `amount` from every finite budget on `path` and removes the
    /// supernodes that reach zero.
    fn drain(&mut self, path: &[usize], amount: u64) {
        for &r in path {
            if let Budget::Finite(b) = &mut self.budgets[r] {
                *b -= amount;
                if *b == 0 {
                    self.removed[r] = true;
                }
            }
        }
    }
}

/// Condenses `g` along `p`. Supernodes whose budget is zero start removed.
pub fn build_supergraph(
    g: &CapacitatedGraph,
    p: &Partitioning,
    budgets: Vec<Budget>,
) -> Result<SuperGraph> {
    let k = p.k();
    if budgets.len() != k {
        return Err(Error::BudgetCountMismatch {
            expected: k,
            actual: budgets.len(),
        });
    }
    let mut arcs = vec![false; k * k];
    for e in g.edges() {
        let (a, b) = (p.part_of[e.source], p.part_of[e.target]);
        if a != b {
            arcs[a * k + b] = true;
        }
    }
    let removed = budgets.iter().map(|b| b.is_exhausted()).collect();
    Ok(SuperGraph {
        k,
        budgets,
        removed,
        arcs,
    })
}

/// Fewest-hop path between live supernodes, expanding successors in
/// ascending id.
pub fn shortest_superpath(sg: &SuperGraph, from: usize, to: usize) -> Option<Vec<usize>> {
    if sg.removed[from] || sg.removed[to] {
        return None;
    }
    let k = sg.k;
    let mut parent = vec![usize::MAX; k];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(a) = queue.pop_front() {
        if a == to {
            let mut path = vec![to];
            let mut v = to;
            while v != from {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for b in 0..k {
            if sg.has_arc(a, b) && !sg.removed[b] && parent[b] == usize::MAX {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    SameCluster,
    CrossCluster,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::SameCluster => "same-cluster",
            Branch::CrossCluster => "cross-cluster",
        })
    }
}

/// One augmentation over the supergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPath {
    pub supernodes: Vec<usize>,
    pub mu: u64,
    /// Every supernode on the path was unbounded; `mu` is the smallest
    /// capacity on an edge leaving the source instead of a budget.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicResult {
    pub value: u64,
    pub branch: Branch,
    pub level: u32,
    pub k: usize,
    pub seed: u64,
    pub source_part: usize,
    pub sink_part: usize,
    /// Budgets before any path was pushed; empty on the same-cluster branch.
    pub initial_budgets: Vec<Budget>,
    /// Original vertex ids each budget flow ran between; `None` for
    /// single-vertex parts.
    pub budget_endpoints: Vec<Option<(usize, usize)>>,
    pub paths: Vec<SuperPath>,
    pub partitioning: Partitioning,
}

impl HeuristicResult {
    pub fn fallback_used(&self) -> bool {
        self.paths.iter().any(|p| p.fallback)
    }
}

impl fmt::Display for HeuristicResult {
    /// `key=value` lines, path trace included.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<String>| items.join(",");
        writeln!(f, "value={}", self.value)?;
        writeln!(f, "branch={}", self.branch)?;
        writeln!(f, "level={}", self.level)?;
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "source_partition={}", self.source_part)?;
        writeln!(f, "sink_partition={}", self.sink_part)?;
        writeln!(
            f,
            "budgets={}",
            join(self.initial_budgets.iter().map(Budget::to_string).collect())
        )?;
        writeln!(
            f,
            "budget_endpoints={}",
            join(
                self.budget_endpoints
                    .iter()
                    .map(|e| match e {
                        Some((a, b)) => format!("{a}>{b}"),
                        None => "-".into(),
                    })
                    .collect()
            )
        )?;
        writeln!(f, "paths={}", self.paths.len())?;
        for (n, p) in self.paths.iter().enumerate() {
            let nodes: Vec<String> = p.supernodes.iter().map(usize::to_string).collect();
            writeln!(f, "path.{n}={} mu={} fallback={}", nodes.join(">"), p.mu, p.fallback)?;
        }
        writeln!(f, "fallback_used={}", self.fallback_used())
    }
}

pub fn heuristic_max_flow(
    g: &CapacitatedGraph,
    s: VertexId,
    t: VertexId,
    level: u32,
    seed: u64,
) -> Result<HeuristicResult> {
    heuristic_max_flow_with(g, s, t, level, seed, &KlConfig::default())
}

pub fn heuristic_max_flow_with(
    g: &CapacitatedGraph,
    s: VertexId,
    t: VertexId,
    level: u32,
    seed: u64,
    kl: &KlConfig,
) -> Result<HeuristicResult> {
    let s = g.check_vertex(s)?;
    let t = g.check_vertex(t)?;
    if s == t {
        return Err(Error::SourceIsSink(s));
    }
    let partitioning = recursive_partition_with(g, level, seed, kl)?;
    let k = partitioning.k();
    let (i, j) = (partitioning.part_of[s], partitioning.part_of[t]);

    let mut result = HeuristicResult {
        value: 0,
        branch: Branch::SameCluster,
        level,
        k,
        seed,
        source_part: i,
        sink_part: j,
        initial_budgets: Vec::new(),
        budget_endpoints: Vec::new(),
        paths: Vec::new(),
        partitioning,
    };

    if i == j {
        result.value = if k == 1 {
            edmonds_karp_unchecked(g, s, t).value
        } else {
            let members: Vec<VertexId> = result.partitioning.members[i]
                .iter()
                .map(|&v| VertexId(v))
                .collect();
            let (sub, map) = induced_subgraph(g, &members)?;
            let (ls, lt) = (map.local(s).unwrap(), map.local(t).unwrap());
            edmonds_karp_unchecked(&sub, ls, lt).value
        };
        return Ok(result);
    }

    result.branch = Branch::CrossCluster;
    let mut rng = stream(seed, Stream::Endpoints);
    let parts = split_by_part(g, &result.partitioning.part_of, k);
    let mut budgets = Vec::with_capacity(k);
    let mut endpoints = Vec::with_capacity(k);
    for (r, (sub, map)) in parts.iter().enumerate() {
        let n = map.len();
        if n == 1 {
            budgets.push(Budget::Unbounded);
            endpoints.push(None);
            continue;
        }
        let other_than = |rng: &mut rand_chacha::ChaCha8Rng, fixed: usize| {
            let x = rng.gen_range(0..n - 1);
            if x >= fixed {
                x + 1
            } else {
                x
            }
        };
        let (from, to) = if r == i {
            let ls = map.local(s).unwrap();
            (ls, other_than(&mut rng, ls))
        } else if r == j {
            let lt = map.local(t).unwrap();
            (other_than(&mut rng, lt), lt)
        } else {
            let a = rng.gen_range(0..n);
            (a, other_than(&mut rng, a))
        };
        budgets.push(Budget::Finite(edmonds_karp_unchecked(sub, from, to).value));
        endpoints.push(Some((map.original(from), map.original(to))));
    }
    result.initial_budgets = budgets.clone();
    result.budget_endpoints = endpoints;

    let mut sg = build_supergraph(g, &result.partitioning, budgets)?;
    while let Some(path) = shortest_superpath(&sg, i, j) {
        let bound = path.iter().filter_map(|&r| sg.budget(r).finite()).min();
        match bound {
            Some(mu) => {
                debug_assert!(mu > 0);
                sg.drain(&path, mu);
                result.value += mu;
                result.paths.push(SuperPath {
                    supernodes: path,
                    mu,
                    fallback: false,
                });
            }
            None => {
                // no finite budget anywhere on the path: bound by the weakest
                // edge out of the source and stop, since nothing can drain
                let mu = g.out_edges(s).iter().map(|e| e.capacity).min().unwrap_or(0);
                if mu > 0 {
                    result.value += mu;
                    result.paths.push(SuperPath {
                        supernodes: path,
                        mu,
                        fallback: true,
                    });
                }
                sg.remove(i);
            }
        }
    }
    Ok(result)
}
