//! Exact maximum flow by Edmonds-Karp.
//!
//! Augmenting paths are shortest in hop count over arcs with positive
//! residual capacity. Capacities are ignored by the search itself; each
//! path is then saturated at its bottleneck. Neighbours are explored in
//! ascending vertex id (forward arc before the cancelling arc to the same
//! neighbour), which makes the returned edge flows, not only the value,
//! deterministic.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{CapacitatedGraph, ResidualArc, VertexId};

/// A flow assignment on the edges of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    /// Flow per edge id.
    pub edge_flows: Vec<u64>,
    /// Number of augmenting paths pushed.
    pub augmentations: usize,
}

impl FlowResult {
    pub fn zero(g: &CapacitatedGraph) -> Self {
        FlowResult {
            value: 0,
            edge_flows: vec![0; g.edge_count()],
            augmentations: 0,
        }
    }
}

/// Residual capacities of every edge in both directions.
///
/// `forward[e] + flow(e) == capacity(e)` and `backward[e] == flow(e)` hold
/// after every augmentation.
#[derive(Debug, Clone)]
pub struct ResidualNetwork {
    forward: Vec<u64>,
    backward: Vec<u64>,
}

impl ResidualNetwork {
    pub fn new(g: &CapacitatedGraph) -> Self {
        ResidualNetwork {
            forward: g.edges().iter().map(|e| e.capacity).collect(),
            backward: vec![0; g.edge_count()],
        }
    }

    #[inline]
    fn residual(&self, arc: &ResidualArc) -> u64 {
        if arc.forward {
            self.forward[arc.edge as usize]
        } else {
            self.backward[arc.edge as usize]
        }
    }

    #[inline]
    fn push(&mut self, arc: &ResidualArc, amount: u64) {
        let e = arc.edge as usize;
        if arc.forward {
            self.forward[e] -= amount;
            self.backward[e] += amount;
        } else {
            self.backward[e] -= amount;
            self.forward[e] += amount;
        }
    }

    pub fn flows(&self) -> &[u64] {
        &self.backward
    }

    pub fn forward_residuals(&self) -> &[u64] {
        &self.forward
    }
}

fn check_terminals(g: &CapacitatedGraph, s: VertexId, t: VertexId) -> Result<(usize, usize)> {
    let s = g.check_vertex(s)?;
    let t = g.check_vertex(t)?;
    if s == t {
        return Err(Error::SourceIsSink(s));
    }
    Ok((s, t))
}

/// Maximum `s`-`t` flow.
pub fn edmonds_karp(g: &CapacitatedGraph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    let (s, t) = check_terminals(g, s, t)?;
    Ok(edmonds_karp_unchecked(g, s, t))
}

pub(crate) fn edmonds_karp_unchecked(g: &CapacitatedGraph, s: usize, t: usize) -> FlowResult {
    let n = g.vertex_count();
    let mut residual = ResidualNetwork::new(g);
    // arc used to reach each vertex; `visited` holds the round that set it
    let mut via: Vec<ResidualArc> = vec![
        ResidualArc {
            head: 0,
            edge: 0,
            forward: true,
        };
        n
    ];
    let mut parent = vec![0u32; n];
    let mut visited = vec![0u32; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut value = 0u64;
    let mut augmentations = 0usize;
    let mut round = 0u32;

    loop {
        round += 1;
        visited[s] = round;
        queue.clear();
        queue.push_back(s);
        let mut reached = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for arc in g.residual_arcs(u) {
                let v = arc.head as usize;
                if visited[v] != round && residual.residual(arc) > 0 {
                    visited[v] = round;
                    via[v] = *arc;
                    parent[v] = u as u32;
                    if v == t {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !reached {
            break;
        }

        let mut bottleneck = u64::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(residual.residual(&via[v]));
            v = parent[v] as usize;
        }
        let mut v = t;
        while v != s {
            residual.push(&via[v], bottleneck);
            v = parent[v] as usize;
        }
        value += bottleneck;
        augmentations += 1;
    }

    FlowResult {
        value,
        edge_flows: residual.backward,
        augmentations,
    }
}

/// Largest graph [`min_cut_oracle`] will enumerate.
pub const ORACLE_MAX_VERTICES: usize = 20;

/// Minimum `s`-`t` cut capacity by enumerating every vertex set that
/// contains `s` and not `t`.
pub fn min_cut_oracle(g: &CapacitatedGraph, s: VertexId, t: VertexId) -> Result<u64> {
    let n = g.vertex_count();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::TooManyVertices {
            max: ORACLE_MAX_VERTICES,
            actual: n,
        });
    }
    let (s, t) = check_terminals(g, s, t)?;
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = u64::MAX;
    for mask in 0u32..(1u32 << free.len()) {
        let mut in_s = 1u32 << s;
        for (bit, &v) in free.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                in_s |= 1 << v;
            }
        }
        let cut: u64 = g
            .edges()
            .iter()
            .filter(|e| in_s & (1 << e.source) != 0 && in_s & (1 << e.target) == 0)
            .map(|e| e.capacity)
            .sum();
        best = best.min(cut);
    }
    Ok(best)
}

/// First constraint a flow assignment breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowViolation {
    EdgeCountMismatch {
        expected: usize,
        actual: usize,
    },
    Capacity {
        edge: usize,
        source: usize,
        target: usize,
        flow: u64,
        capacity: u64,
    },
    Conservation {
        vertex: usize,
        inflow: u64,
        outflow: u64,
    },
    SourceValue {
        net_outflow: i128,
        value: u64,
    },
    SinkValue {
        net_inflow: i128,
        value: u64,
    },
}

impl fmt::Display for FlowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowViolation::EdgeCountMismatch { expected, actual } => {
                write!(f, "flow has {actual} entries, graph has {expected} edges")
            }
            FlowViolation::Capacity {
                edge,
                source,
                target,
                flow,
                capacity,
            } => write!(
                f,
                "edge {edge} ({source}->{target}) carries {flow} > capacity {capacity}"
            ),
            FlowViolation::Conservation {
                vertex,
                inflow,
                outflow,
            } => write!(f, "vertex {vertex}: inflow {inflow} != outflow {outflow}"),
            FlowViolation::SourceValue { net_outflow, value } => {
                write!(f, "source net outflow {net_outflow} != value {value}")
            }
            FlowViolation::SinkValue { net_inflow, value } => {
                write!(f, "sink net inflow {net_inflow} != value {value}")
            }
        }
    }
}

impl std::error::Error for FlowViolation {}

/// Checks capacity, conservation and value consistency of `f`.
pub fn validate_flow(
    g: &CapacitatedGraph,
    s: VertexId,
    t: VertexId,
    f: &FlowResult,
) -> std::result::Result<(), FlowViolation> {
    if f.edge_flows.len() != g.edge_count() {
        return Err(FlowViolation::EdgeCountMismatch {
            expected: g.edge_count(),
            actual: f.edge_flows.len(),
        });
    }
    let n = g.vertex_count();
    let mut inflow = vec![0u64; n];
    let mut outflow = vec![0u64; n];
    for (id, (e, &flow)) in g.edges().iter().zip(&f.edge_flows).enumerate() {
        if flow > e.capacity {
            return Err(FlowViolation::Capacity {
                edge: id,
                source: e.source,
                target: e.target,
                flow,
                capacity: e.capacity,
            });
        }
        outflow[e.source] += flow;
        inflow[e.target] += flow;
    }
    for v in 0..n {
        if v != s.0 && v != t.0 && inflow[v] != outflow[v] {
            return Err(FlowViolation::Conservation {
                vertex: v,
                inflow: inflow[v],
                outflow: outflow[v],
            });
        }
    }
    let net_out = outflow[s.0] as i128 - inflow[s.0] as i128;
    if net_out != f.value as i128 {
        return Err(FlowViolation::SourceValue {
            net_outflow: net_out,
            value: f.value,
        });
    }
    let net_in = inflow[t.0] as i128 - outflow[t.0] as i128;
    if net_in != f.value as i128 {
        return Err(FlowViolation::SinkValue {
            net_inflow: net_in,
            value: f.value,
        });
    }
    Ok(())
}
