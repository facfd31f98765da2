//! Whitespace-separated edge-list files (`u v` or `u v w` per line).
//!
//! Lines starting with `%` or `#` are comments. A `%%MatrixMarket` banner
//! marks the first non-comment line as a dimension line, which is skipped.
//! Vertex ids are shifted by the resolved index base so the internal graph is
//! dense and 0-based.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{merged_graph, CapacitatedGraph, Edge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexBase {
    /// 1 when no vertex id 0 occurs in the file, 0 otherwise.
    #[default]
    Auto,
    Zero,
    One,
}

impl std::str::FromStr for IndexBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(IndexBase::Auto),
            "0" => Ok(IndexBase::Zero),
            "1" => Ok(IndexBase::One),
            other => Err(format!("index base must be auto, 0 or 1, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Read the third column as a capacity. When false, or when a line has
    /// only two columns, `default_capacity` is used.
    pub weighted: bool,
    pub default_capacity: u64,
    pub index_base: IndexBase,
    /// Add `(v, u)` with the same capacity wherever only `(u, v)` exists.
    pub symmetrize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            weighted: true,
            default_capacity: 1,
            index_base: IndexBase::Auto,
            symmetrize: false,
        }
    }
}

impl LoadOptions {
    /// Defaults for brain-connectivity repository files, which list each
    /// undirected connection once.
    pub fn repository() -> Self {
        LoadOptions {
            symmetrize: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: CapacitatedGraph,
    /// Resolved index base: file id = internal id + base.
    pub index_base: u64,
    pub symmetrized: bool,
    /// Distinct unordered vertex pairs connected in the file.
    pub undirected_pairs: usize,
    pub self_loops_skipped: usize,
    /// Weights that were not integers and got rounded.
    pub rounded_weights: usize,
}

impl LoadedGraph {
    /// Edge count as repositories report it: unordered pairs for symmetrized
    /// (undirected) data, directed edges otherwise.
    pub fn reported_edge_count(&self) -> usize {
        if self.symmetrized {
            self.undirected_pairs
        } else {
            self.graph.edge_count()
        }
    }

    pub fn internal_id(&self, file_id: u64) -> Option<usize> {
        let v = file_id.checked_sub(self.index_base)? as usize;
        (v < self.graph.vertex_count()).then_some(v)
    }

    pub fn file_id(&self, internal: usize) -> u64 {
        internal as u64 + self.index_base
    }
}

/// Rounds half-up and clamps to at least 1.
fn round_capacity(w: f64) -> u64 {
    let r = (w + 0.5).floor();
    if r < 1.0 {
        1
    } else {
        r as u64
    }
}

pub fn load_edge_list(path: impl AsRef<Path>, options: &LoadOptions) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_edge_list(&text, path, options)
}

pub fn parse_edge_list(text: &str, path: &Path, options: &LoadOptions) -> Result<LoadedGraph> {
    let malformed = |line: usize, message: String| Error::Malformed {
        path: path.to_owned(),
        line,
        message,
    };

    let mut raw: Vec<(u64, u64, u64)> = Vec::new();
    let mut matrix_market = false;
    let mut dimension_pending = false;
    let mut rounded_weights = 0;
    let mut self_loops_skipped = 0;
    let mut first_zero_line = None;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('%') || line.starts_with('#') {
            if i == 0 && line.starts_with("%%MatrixMarket") {
                matrix_market = true;
                dimension_pending = true;
            }
            continue;
        }
        if matrix_market && dimension_pending {
            dimension_pending = false;
            continue;
        }

        let mut fields = line.split_whitespace();
        let mut id = |name: &str| -> Result<u64> {
            let tok = fields
                .next()
                .ok_or_else(|| malformed(lineno, format!("missing {name} vertex")))?;
            tok.parse::<u64>()
                .map_err(|_| malformed(lineno, format!("bad {name} vertex id {tok:?}")))
        };
        let u = id("source")?;
        let v = id("target")?;
        let capacity = match fields.next() {
            Some(tok) if options.weighted => {
                let w: f64 = tok
                    .parse()
                    .map_err(|_| malformed(lineno, format!("bad weight {tok:?}")))?;
                if !w.is_finite() {
                    return Err(malformed(lineno, format!("bad weight {tok:?}")));
                }
                if w.fract() != 0.0 {
                    rounded_weights += 1;
                }
                round_capacity(w)
            }
            _ => options.default_capacity,
        };
        if (u == 0 || v == 0) && first_zero_line.is_none() {
            first_zero_line = Some(lineno);
        }
        if u == v {
            self_loops_skipped += 1;
            continue;
        }
        raw.push((u, v, capacity));
    }

    let base = match (options.index_base, first_zero_line) {
        (IndexBase::Zero, _) => 0,
        (IndexBase::One, Some(line)) => {
            return Err(malformed(line, "vertex id 0 in a 1-based file".into()))
        }
        (IndexBase::One, None) => 1,
        (IndexBase::Auto, Some(_)) => 0,
        (IndexBase::Auto, None) => 1,
    };
    if raw.is_empty() {
        return Err(Error::NoEdges(path.to_owned()));
    }
    if options.default_capacity == 0 {
        return Err(malformed(0, "default capacity must be positive".into()));
    }

    let max_id = raw.iter().map(|&(u, v, _)| u.max(v)).max().unwrap_or(0);
    let vertex_count = (max_id - base + 1) as usize;
    let mut edges: Vec<Edge> = raw
        .into_iter()
        .map(|(u, v, capacity)| Edge {
            source: (u - base) as usize,
            target: (v - base) as usize,
            capacity,
        })
        .collect();

    let graph = merged_graph(vertex_count, std::mem::take(&mut edges));
    let undirected_pairs = {
        let mut pairs: Vec<(usize, usize)> = graph
            .edges()
            .iter()
            .map(|e| (e.source.min(e.target), e.source.max(e.target)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    };

    let graph = if options.symmetrize {
        let mut all = graph.edges().to_vec();
        for e in graph.edges() {
            if graph.find_edge(e.target, e.source).is_none() {
                all.push(Edge {
                    source: e.target,
                    target: e.source,
                    capacity: e.capacity,
                });
            }
        }
        merged_graph(vertex_count, all)
    } else {
        graph
    };

    Ok(LoadedGraph {
        graph,
        index_base: base,
        symmetrized: options.symmetrize,
        undirected_pairs,
        self_loops_skipped,
        rounded_weights,
    })
}

pub fn save_edge_list(g: &CapacitatedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut out = std::io::BufWriter::new(file);
    g.write_edge_list(&mut out)?;
    std::io::Write::flush(&mut out)?;
    Ok(())
}
