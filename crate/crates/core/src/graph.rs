//! Directed capacitated graphs.
//!
//! A [`CapacitatedGraph`] is built once and never mutated. Edges are kept
//! sorted by `(source, target)` with parallel edges merged, so edge ids are a
//! deterministic function of the edge set. Alongside the edge list the graph
//! stores, per vertex, the arcs of its residual network (outgoing edges in the
//! forward direction, incoming edges in the backward direction) ordered by
//! neighbour id. Breadth-first searches over the residual network therefore
//! visit neighbours in ascending id order without sorting at query time.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Index of a vertex in a [`CapacitatedGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub capacity: u64,
}

/// One arc of the residual network seen from its tail vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ResidualArc {
    pub head: u32,
    pub edge: u32,
    /// `true` for the edge's own direction, `false` for the cancelling arc.
    pub forward: bool,
}

#[derive(Clone)]
pub struct CapacitatedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    out_offsets: Vec<usize>,
    arc_offsets: Vec<usize>,
    arcs: Vec<ResidualArc>,
}

impl PartialEq for CapacitatedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for CapacitatedGraph {}

impl fmt::Debug for CapacitatedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CapacitatedGraph")
            .field("vertex_count", &self.vertex_count)
            .field("edges", &self.edges)
            .finish()
    }
}

impl CapacitatedGraph {
    /// Builds a graph from `(source, target, capacity)` triples.
    ///
    /// Parallel edges are merged by summing their capacities. Self-loops,
    /// out-of-range endpoints and non-positive capacities are rejected.
    pub fn build(vertex_count: usize, edge_list: &[(usize, usize, i64)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v, capacity) in edge_list {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            if capacity <= 0 {
                return Err(Error::NonPositiveCapacity {
                    source_vertex: u,
                    target: v,
                    capacity,
                });
            }
            edges.push(Edge {
                source: u,
                target: v,
                capacity: capacity as u64,
            });
        }
        Ok(Self::from_sorted_unique(vertex_count, merge_parallel(edges)))
    }

    /// Assembles the adjacency structures. `edges` must be sorted by
    /// `(source, target)`, free of duplicates and self-loops, and in range.
    pub(crate) fn from_sorted_unique(vertex_count: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges
            .windows(2)
            .all(|w| (w[0].source, w[0].target) < (w[1].source, w[1].target)));

        let mut out_offsets = vec![0usize; vertex_count + 1];
        let mut in_count = vec![0usize; vertex_count];
        for e in &edges {
            out_offsets[e.source + 1] += 1;
            in_count[e.target] += 1;
        }
        for u in 0..vertex_count {
            out_offsets[u + 1] += out_offsets[u];
        }

        // incoming edge ids per vertex, in ascending source order because
        // edges are sorted by source
        let mut in_offsets = vec![0usize; vertex_count + 1];
        for v in 0..vertex_count {
            in_offsets[v + 1] = in_offsets[v] + in_count[v];
        }
        let mut in_edges = vec![0u32; edges.len()];
        let mut fill = in_offsets.clone();
        for (id, e) in edges.iter().enumerate() {
            in_edges[fill[e.target]] = id as u32;
            fill[e.target] += 1;
        }

        let mut arc_offsets = Vec::with_capacity(vertex_count + 1);
        let mut arcs = Vec::with_capacity(2 * edges.len());
        arc_offsets.push(0);
        for u in 0..vertex_count {
            let outs = out_offsets[u]..out_offsets[u + 1];
            let ins = &in_edges[in_offsets[u]..in_offsets[u + 1]];
            let (mut i, mut j) = (outs.start, 0);
            while i < outs.end || j < ins.len() {
                let take_out = j == ins.len()
                    || (i < outs.end && edges[i].target <= edges[ins[j] as usize].source);
                if take_out {
                    arcs.push(ResidualArc {
                        head: edges[i].target as u32,
                        edge: i as u32,
                        forward: true,
                    });
                    i += 1;
                } else {
                    let id = ins[j];
                    arcs.push(ResidualArc {
                        head: edges[id as usize].source as u32,
                        edge: id,
                        forward: false,
                    });
                    j += 1;
                }
            }
            arc_offsets.push(arcs.len());
        }

        CapacitatedGraph {
            vertex_count,
            edges,
            out_offsets,
            arc_offsets,
            arcs,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Ids of the edges leaving `u`; contiguous because edges are sorted.
    pub fn out_edge_ids(&self, u: usize) -> Range<usize> {
        self.out_offsets[u]..self.out_offsets[u + 1]
    }

    pub fn out_edges(&self, u: usize) -> &[Edge] {
        &self.edges[self.out_edge_ids(u)]
    }

    /// Number of incident edges, counting both directions.
    pub fn degree(&self, u: usize) -> usize {
        self.arc_offsets[u + 1] - self.arc_offsets[u]
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let range = self.out_edge_ids(u);
        self.edges[range.clone()]
            .binary_search_by_key(&v, |e| e.target)
            .ok()
            .map(|i| range.start + i)
    }

    pub(crate) fn residual_arcs(&self, u: usize) -> &[ResidualArc] {
        &self.arcs[self.arc_offsets[u]..self.arc_offsets[u + 1]]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<usize> {
        if v.0 < self.vertex_count {
            Ok(v.0)
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v.0,
                vertex_count: self.vertex_count,
            })
        }
    }

    /// Writes the graph as `u v w` lines, 0-based, sorted by `(u, v)`.
    pub fn write_edge_list<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.source, e.target, e.capacity)?;
        }
        Ok(())
    }
}

/// Builds a graph from `(source, target, capacity)` triples.
pub fn build_graph(vertex_count: usize, edge_list: &[(usize, usize, i64)]) -> Result<CapacitatedGraph> {
    CapacitatedGraph::build(vertex_count, edge_list)
}

fn merge_parallel(mut edges: Vec<Edge>) -> Vec<Edge> {
    edges.sort_unstable_by_key(|e| (e.source, e.target));
    let mut merged: Vec<Edge> = Vec::with_capacity(edges.len());
    for e in edges {
        match merged.last_mut() {
            Some(last) if last.source == e.source && last.target == e.target => {
                last.capacity += e.capacity;
            }
            _ => merged.push(e),
        }
    }
    merged
}

pub(crate) fn merged_graph(vertex_count: usize, edges: Vec<Edge>) -> CapacitatedGraph {
    CapacitatedGraph::from_sorted_unique(vertex_count, merge_parallel(edges))
}

/// Bijection between the vertices of a graph and those of an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    to_original: Vec<usize>,
}

impl VertexMap {
    pub(crate) fn new(to_original: Vec<usize>) -> Self {
        debug_assert!(to_original.windows(2).all(|w| w[0] < w[1]));
        VertexMap { to_original }
    }

    pub fn len(&self) -> usize {
        self.to_original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_original.is_empty()
    }

    pub fn original(&self, local: usize) -> usize {
        self.to_original[local]
    }

    pub fn local(&self, original: usize) -> Option<usize> {
        self.to_original.binary_search(&original).ok()
    }

    pub fn originals(&self) -> &[usize] {
        &self.to_original
    }
}

/// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
/// ascending original id order. Duplicate ids in `vertices` are ignored.
pub fn induced_subgraph(
    g: &CapacitatedGraph,
    vertices: &[VertexId],
) -> Result<(CapacitatedGraph, VertexMap)> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut members = Vec::with_capacity(vertices.len());
    for &v in vertices {
        members.push(g.check_vertex(v)?);
    }
    members.sort_unstable();
    members.dedup();
    let map = VertexMap::new(members);

    let mut edges = Vec::new();
    for (lu, &u) in map.originals().iter().enumerate() {
        for e in g.out_edges(u) {
            if let Some(lv) = map.local(e.target) {
                edges.push(Edge {
                    source: lu,
                    target: lv,
                    capacity: e.capacity,
                });
            }
        }
    }
    Ok((CapacitatedGraph::from_sorted_unique(map.len(), edges), map))
}

/// Splits `g` into the subgraphs induced by each part of a vertex labelling,
/// in a single pass over the edges. `part_of[v]` must be `< parts`.
pub(crate) fn split_by_part(
    g: &CapacitatedGraph,
    part_of: &[usize],
    parts: usize,
) -> Vec<(CapacitatedGraph, VertexMap)> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); parts];
    let mut local = vec![0usize; g.vertex_count()];
    for (v, &p) in part_of.iter().enumerate() {
        local[v] = members[p].len();
        members[p].push(v);
    }
    let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); parts];
    for e in g.edges() {
        let p = part_of[e.source];
        if part_of[e.target] == p {
            edges[p].push(Edge {
                source: local[e.source],
                target: local[e.target],
                capacity: e.capacity,
            });
        }
    }
    members
        .into_iter()
        .zip(edges)
        .map(|(m, es)| {
            let n = m.len();
            (CapacitatedGraph::from_sorted_unique(n, es), VertexMap::new(m))
        })
        .collect()
}
