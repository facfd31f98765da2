//! Clustered random graphs (planted partition model).
//!
//! Vertices are split into `clusters` consecutive blocks of
//! `nodes_per_cluster`. Each unordered pair is connected with probability
//! `inp` inside a block and `outp` across blocks, visiting pairs in
//! lexicographic order with one draw each from the topology stream. Every
//! realised pair gets one weight from the weight stream and becomes two
//! directed edges of that capacity.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{CapacitatedGraph, Edge};
use crate::rng::{stream, Stream};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub clusters: usize,
    pub nodes_per_cluster: usize,
    pub inp: f64,
    pub outp: f64,
    /// Inclusive capacity range.
    pub weight_min: u64,
    pub weight_max: u64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(clusters: usize, nodes_per_cluster: usize, inp: f64, outp: f64, seed: u64) -> Self {
        GeneratorConfig {
            clusters,
            nodes_per_cluster,
            inp,
            outp,
            weight_min: 1,
            weight_max: 10,
            seed,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.clusters * self.nodes_per_cluster
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.clusters == 0 || self.nodes_per_cluster == 0 {
            return bad("clusters and nodes per cluster must be positive".into());
        }
        for (name, p) in [("inp", self.inp), ("outp", self.outp)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.weight_min < 1 || self.weight_min > self.weight_max {
            return bad(format!(
                "weight range {}..={} must be non-empty with minimum at least 1",
                self.weight_min, self.weight_max
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: CapacitatedGraph,
    /// Planted cluster of every vertex.
    pub labels: Vec<usize>,
}

pub fn generate(cfg: &GeneratorConfig) -> Result<GeneratedGraph> {
    cfg.validate()?;
    let n = cfg.vertex_count();
    let labels: Vec<usize> = (0..n).map(|v| v / cfg.nodes_per_cluster).collect();
    let mut topology = stream(cfg.seed, Stream::Topology);
    let mut weights = stream(cfg.seed, Stream::Weights);

    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if labels[u] == labels[v] { cfg.inp } else { cfg.outp };
            if topology.gen::<f64>() < p {
                let capacity = weights.gen_range(cfg.weight_min..=cfg.weight_max);
                edges.push(Edge {
                    source: u,
                    target: v,
                    capacity,
                });
                edges.push(Edge {
                    source: v,
                    target: u,
                    capacity,
                });
            }
        }
    }
    edges.sort_unstable_by_key(|e| (e.source, e.target));
    Ok(GeneratedGraph {
        graph: CapacitatedGraph::from_sorted_unique(n, edges),
        labels,
    })
}
