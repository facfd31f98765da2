//! Benchmark harness: scaling sweeps, level sweeps and dataset runs.
//!
//! Only the flow computations are timed; generation, loading and endpoint
//! selection happen outside the clock. Every record stores the seed that
//! regenerates its graph, endpoints and partition, so flow values can be
//! reproduced from the CSV alone.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edgelist::{load_edge_list, LoadOptions, LoadedGraph};
use crate::error::{Error, Result};
use crate::generate::{generate, GeneratedGraph, GeneratorConfig};
use crate::graph::{CapacitatedGraph, VertexId};
use crate::heuristic::heuristic_max_flow;
use crate::maxflow::edmonds_karp;
use crate::rng::{derive_seed, stream, Stream};

/// First line of every CSV file written by this module.
pub const CSV_VERSION_LINE: &str = "#flowpart-csv-v1";

pub const POLICY_CLUSTERS: &str = "distinct-planted-clusters";
pub const POLICY_UNIFORM: &str = "uniform-distinct";
pub const POLICY_TOP_DEGREE: &str = "top20-degree";

/// Number of highest-degree vertices dataset endpoints are drawn from.
pub const TOP_DEGREE_POOL: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    /// `generated` or the dataset name.
    pub graph: String,
    pub nodes: usize,
    /// Undirected vertex pairs for generated and symmetrized data, directed
    /// edges otherwise.
    pub edges: usize,
    pub clusters: Option<usize>,
    pub inp: Option<f64>,
    pub outp: Option<f64>,
    /// How the graph was obtained or loaded (symmetrization, rounding).
    pub load_policy: String,
    /// `match`, `mismatch` or `unknown` against published dataset sizes.
    pub count_check: String,
    pub level: u32,
    pub k: usize,
    pub source: usize,
    pub sink: usize,
    pub endpoint_policy: String,
    pub exact_value: u64,
    pub heuristic_value: u64,
    pub branch: String,
    pub exact_runtime_seconds: f64,
    pub heuristic_runtime_seconds: f64,
    pub seed: u64,
    pub repetition: usize,
}

impl ExperimentRecord {
    /// Checks the record-level invariants.
    pub fn check(&self) -> std::result::Result<(), String> {
        if !(self.exact_runtime_seconds >= 0.0 && self.heuristic_runtime_seconds >= 0.0) {
            return Err("negative or NaN runtime".into());
        }
        if Some(self.k) != 1usize.checked_shl(self.level) {
            return Err(format!("k = {} is not 2^{}", self.k, self.level));
        }
        Ok(())
    }
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let mut records = Vec::new();
    for row in reader.deserialize() {
        records.push(row?);
    }
    Ok(records)
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Source and sink in two different planted clusters, uniformly at random.
/// With a single cluster, any two distinct vertices.
pub fn cluster_endpoints(labels: &[usize], clusters: usize, seed: u64) -> (usize, usize, &'static str) {
    let mut rng = stream(seed, Stream::Bench);
    let n = labels.len();
    if clusters < 2 {
        let s = rng.gen_range(0..n);
        let t = (s + 1 + rng.gen_range(0..n - 1)) % n;
        return (s, t, POLICY_UNIFORM);
    }
    let per = n / clusters;
    let a = rng.gen_range(0..clusters);
    let b = (a + 1 + rng.gen_range(0..clusters - 1)) % clusters;
    let s = a * per + rng.gen_range(0..per);
    let t = b * per + rng.gen_range(0..per);
    (s, t, POLICY_CLUSTERS)
}

/// The `count` vertices of highest total degree, ties broken by lower id.
pub fn top_degree_vertices(g: &CapacitatedGraph, count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order.truncate(count);
    order
}

/// Two distinct vertices drawn uniformly from the top-degree pool.
pub fn top_degree_endpoints(g: &CapacitatedGraph, seed: u64) -> (usize, usize) {
    let pool = top_degree_vertices(g, TOP_DEGREE_POOL);
    let mut rng = stream(seed, Stream::Bench);
    let a = rng.gen_range(0..pool.len());
    let b = (a + 1 + rng.gen_range(0..pool.len() - 1)) % pool.len();
    (pool[a], pool[b])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub node_counts: Vec<usize>,
    /// Planted clusters; each gets `nodes / clusters` vertices.
    pub clusters: usize,
    pub inp: f64,
    pub outp: f64,
    pub level: u32,
    pub repetitions: usize,
    pub seed: u64,
    /// Run repetitions on worker threads. Timings then compete for cores.
    pub parallel: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            node_counts: vec![100, 300, 500, 700, 900],
            clusters: 8,
            inp: 0.01,
            outp: 0.005,
            level: 3,
            repetitions: 10,
            seed: 0,
            parallel: false,
        }
    }
}

fn check_sweep(node_counts: &[usize], clusters: usize, repetitions: usize) -> Result<()> {
    if repetitions == 0 {
        return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
    }
    if clusters == 0 {
        return Err(Error::InvalidConfig("clusters must be positive".into()));
    }
    if node_counts.is_empty() {
        return Err(Error::InvalidConfig("no node counts given".into()));
    }
    for &n in node_counts {
        if n < clusters.max(2) {
            return Err(Error::InvalidConfig(format!(
                "{n} nodes cannot be spread over {clusters} clusters"
            )));
        }
    }
    Ok(())
}

/// Generator settings of one sweep cell; `seed` is the per-repetition seed.
pub fn sweep_generator(nodes: usize, clusters: usize, inp: f64, outp: f64, seed: u64) -> GeneratorConfig {
    GeneratorConfig::new(clusters, nodes / clusters, inp, outp, seed)
}

struct Instance {
    gen: GeneratedGraph,
    cfg: GeneratorConfig,
    source: usize,
    sink: usize,
    policy: &'static str,
}

fn instance(nodes: usize, clusters: usize, inp: f64, outp: f64, seed: u64) -> Result<Instance> {
    let cfg = sweep_generator(nodes, clusters, inp, outp, seed);
    let gen = generate(&cfg)?;
    let (source, sink, policy) = cluster_endpoints(&gen.labels, clusters, seed);
    Ok(Instance {
        gen,
        cfg,
        source,
        sink,
        policy,
    })
}

fn generated_record(experiment: &str, inst: &Instance, level: u32, seed: u64, repetition: usize) -> ExperimentRecord {
    ExperimentRecord {
        experiment: experiment.into(),
        graph: "generated".into(),
        nodes: inst.gen.graph.vertex_count(),
        edges: inst.gen.graph.edge_count() / 2,
        clusters: Some(inst.cfg.clusters),
        inp: Some(inst.cfg.inp),
        outp: Some(inst.cfg.outp),
        load_policy: "generated-symmetric".into(),
        count_check: "n/a".into(),
        level,
        k: 1 << level,
        source: inst.source,
        sink: inst.sink,
        endpoint_policy: inst.policy.into(),
        exact_value: 0,
        heuristic_value: 0,
        branch: String::new(),
        exact_runtime_seconds: 0.0,
        heuristic_runtime_seconds: 0.0,
        seed,
        repetition,
    }
}

fn run_jobs<J: Sync, T: Send>(
    jobs: &[J],
    parallel: bool,
    f: impl Fn(&J) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    if parallel {
        jobs.par_iter().map(f).collect()
    } else {
        jobs.iter().map(f).collect()
    }
}

/// Exact vs heuristic at one level over growing generated graphs.
pub fn run_scaling_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    check_sweep(&cfg.node_counts, cfg.clusters, cfg.repetitions)?;
    let jobs: Vec<(usize, usize)> = cfg
        .node_counts
        .iter()
        .flat_map(|&n| (0..cfg.repetitions).map(move |rep| (n, rep)))
        .collect();
    run_jobs(&jobs, cfg.parallel, |&(n, rep)| {
        let seed = derive_seed(cfg.seed, n as u64, rep as u64);
        let inst = instance(n, cfg.clusters, cfg.inp, cfg.outp, seed)?;
        let g = &inst.gen.graph;
        let (s, t) = (VertexId(inst.source), VertexId(inst.sink));
        let (exact, exact_time) = timed(|| edmonds_karp(g, s, t));
        let (heur, heur_time) = timed(|| heuristic_max_flow(g, s, t, cfg.level, seed));
        let (exact, heur) = (exact?, heur?);
        let mut r = generated_record("scaling", &inst, cfg.level, seed, rep);
        r.exact_value = exact.value;
        r.heuristic_value = heur.value;
        r.branch = heur.branch.to_string();
        r.exact_runtime_seconds = exact_time;
        r.heuristic_runtime_seconds = heur_time;
        Ok(r)
    })
}

/// Recomputes `(exact, heuristic)` flow values of a generated-graph record.
pub fn rerun_generated(r: &ExperimentRecord) -> Result<(u64, u64)> {
    let clusters = r.clusters.ok_or_else(|| Error::InvalidConfig("record has no cluster count".into()))?;
    let (inp, outp) = match (r.inp, r.outp) {
        (Some(i), Some(o)) => (i, o),
        _ => return Err(Error::InvalidConfig("record has no edge probabilities".into())),
    };
    let inst = instance(r.nodes, clusters, inp, outp, r.seed)?;
    let (s, t) = (VertexId(inst.source), VertexId(inst.sink));
    let exact = edmonds_karp(&inst.gen.graph, s, t)?.value;
    let heur = heuristic_max_flow(&inst.gen.graph, s, t, r.level, r.seed)?.value;
    Ok((exact, heur))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSweepConfig {
    pub node_counts: Vec<usize>,
    /// Must contain 0, the baseline.
    pub levels: Vec<u32>,
    pub clusters: usize,
    pub inp: f64,
    pub outp: f64,
    pub repetitions: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for LevelSweepConfig {
    fn default() -> Self {
        LevelSweepConfig {
            node_counts: vec![100, 300, 500, 700, 900],
            levels: vec![0, 2, 4, 6, 8, 10],
            clusters: 8,
            inp: 0.01,
            outp: 0.005,
            repetitions: 100,
            seed: 0,
            parallel: false,
        }
    }
}

/// Median heuristic runtime at one level relative to the `l = 0` baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRatio {
    pub nodes: usize,
    pub level: u32,
    pub k: usize,
    pub median_runtime_seconds: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct LevelSweep {
    pub records: Vec<ExperimentRecord>,
    pub ratios: Vec<LevelRatio>,
}

/// Heuristic runtime against partition level. Levels with more parts than
/// vertices are skipped for that node count.
pub fn run_level_sweep(cfg: &LevelSweepConfig) -> Result<LevelSweep> {
    check_sweep(&cfg.node_counts, cfg.clusters, cfg.repetitions)?;
    if !cfg.levels.contains(&0) {
        return Err(Error::MissingBaseline {
            nodes: cfg.node_counts[0],
        });
    }
    let jobs: Vec<(usize, usize)> = cfg
        .node_counts
        .iter()
        .flat_map(|&n| (0..cfg.repetitions).map(move |rep| (n, rep)))
        .collect();
    let per_job = run_jobs(&jobs, cfg.parallel, |&(n, rep)| {
        let seed = derive_seed(cfg.seed, n as u64, rep as u64);
        let inst = instance(n, cfg.clusters, cfg.inp, cfg.outp, seed)?;
        let g = &inst.gen.graph;
        let (s, t) = (VertexId(inst.source), VertexId(inst.sink));
        let (exact, exact_time) = timed(|| edmonds_karp(g, s, t));
        let exact = exact?;
        let mut out = Vec::new();
        for &level in &cfg.levels {
            if level >= usize::BITS || (1usize << level) > g.vertex_count() {
                continue;
            }
            let (heur, heur_time) = timed(|| heuristic_max_flow(g, s, t, level, seed));
            let heur = heur?;
            let mut r = generated_record("levels", &inst, level, seed, rep);
            r.exact_value = exact.value;
            r.heuristic_value = heur.value;
            r.branch = heur.branch.to_string();
            r.exact_runtime_seconds = exact_time;
            r.heuristic_runtime_seconds = heur_time;
            out.push(r);
        }
        Ok(out)
    })?;
    let records: Vec<ExperimentRecord> = per_job.into_iter().flatten().collect();
    let ratios = level_ratios(&records)?;
    Ok(LevelSweep { records, ratios })
}

/// Per node count and level: median heuristic runtime and its ratio to the
/// level-0 median.
pub fn level_ratios(records: &[ExperimentRecord]) -> Result<Vec<LevelRatio>> {
    let mut cells: Vec<((usize, u32), Vec<f64>)> = Vec::new();
    for r in records {
        let key = (r.nodes, r.level);
        match cells.iter_mut().find(|(k, _)| *k == key) {
            Some((_, times)) => times.push(r.heuristic_runtime_seconds),
            None => cells.push((key, vec![r.heuristic_runtime_seconds])),
        }
    }
    cells.sort_by_key(|(k, _)| *k);
    let medians: Vec<((usize, u32), f64)> = cells
        .into_iter()
        .map(|(k, mut times)| (k, median(&mut times)))
        .collect();
    medians
        .iter()
        .map(|&((nodes, level), med)| {
            let base = medians
                .iter()
                .find(|((n, l), _)| *n == nodes && *l == 0)
                .map(|(_, m)| *m)
                .ok_or(Error::MissingBaseline { nodes })?;
            Ok(LevelRatio {
                nodes,
                level,
                k: 1 << level,
                median_runtime_seconds: med,
                ratio: med / base,
            })
        })
        .collect()
}

pub fn write_ratio_table<W: Write>(ratios: &[LevelRatio], mut out: W) -> std::io::Result<()> {
    writeln!(out, "nodes,level,k,median_runtime_seconds,ratio")?;
    for r in ratios {
        writeln!(
            out,
            "{},{},{},{:.9},{:.6}",
            r.nodes, r.level, r.k, r.median_runtime_seconds, r.ratio
        )?;
    }
    Ok(())
}

/// A published brain-network dataset and its reported size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownDataset {
    pub name: &'static str,
    /// Lower-case fragment identifying the repository file name.
    pub file_key: &'static str,
    pub nodes: usize,
    pub edges: usize,
}

pub const KNOWN_DATASETS: [KnownDataset; 6] = [
    KnownDataset { name: "Drosophila Medulla", file_key: "medulla", nodes: 1781, edges: 9735 },
    KnownDataset { name: "Mouse Retina", file_key: "retina", nodes: 1076, edges: 90811 },
    KnownDataset { name: "Macaque-rhesus Brain", file_key: "rhesus_brain", nodes: 242, edges: 4090 },
    KnownDataset { name: "Mouse Brain", file_key: "mouse_brain", nodes: 213, edges: 21807 },
    KnownDataset { name: "Macaque-rhesus Cortical", file_key: "cortical", nodes: 93, edges: 2667 },
    KnownDataset { name: "Macaque-rhesus Cerebral", file_key: "cerebral", nodes: 91, edges: 1615 },
];

pub fn known_dataset(file_name: &str) -> Option<&'static KnownDataset> {
    let lower = file_name.to_ascii_lowercase();
    KNOWN_DATASETS.iter().find(|d| lower.contains(d.file_key))
}

#[derive(Debug, Clone)]
pub struct DatasetBenchConfig {
    pub paths: Vec<PathBuf>,
    pub load: LoadOptions,
    pub level: u32,
    pub seed: u64,
    /// Independent endpoint draws per dataset.
    pub draws: usize,
    /// Timed runs per draw, all with the same seed.
    pub repetitions: usize,
}

impl Default for DatasetBenchConfig {
    fn default() -> Self {
        DatasetBenchConfig {
            paths: Vec::new(),
            load: LoadOptions::repository(),
            level: 3,
            seed: 0,
            draws: 1,
            repetitions: 1,
        }
    }
}

fn load_policy(loaded: &LoadedGraph) -> String {
    format!(
        "symmetrize={};base={};rounded_weights={};self_loops_skipped={}",
        loaded.symmetrized, loaded.index_base, loaded.rounded_weights, loaded.self_loops_skipped
    )
}

/// Count check of a loaded file against [`KNOWN_DATASETS`].
pub fn count_check(file_name: &str, loaded: &LoadedGraph) -> &'static str {
    match known_dataset(file_name) {
        None => "unknown",
        Some(d) if d.nodes == loaded.graph.vertex_count() && d.edges == loaded.reported_edge_count() => {
            "match"
        }
        Some(_) => "mismatch",
    }
}

pub fn run_dataset_bench(cfg: &DatasetBenchConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.draws == 0 || cfg.repetitions == 0 {
        return Err(Error::InvalidConfig("draws and repetitions must be at least 1".into()));
    }
    let mut records = Vec::new();
    for path in &cfg.paths {
        let file_name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let wrap = |e: Error| Error::Dataset {
            name: file_name.clone(),
            source: Box::new(e),
        };
        let loaded = load_edge_list(path, &cfg.load).map_err(wrap)?;
        let g = &loaded.graph;
        if g.vertex_count() < 2 {
            return Err(wrap(Error::TooFewVertices { required: 2, actual: g.vertex_count() }));
        }
        let name = known_dataset(&file_name).map_or(file_name.clone(), |d| d.name.to_string());
        let check = count_check(&file_name, &loaded);
        for draw in 0..cfg.draws {
            let seed = derive_seed(cfg.seed, 0xDA7A, draw as u64);
            let (s, t) = top_degree_endpoints(g, seed);
            for rep in 0..cfg.repetitions {
                let (sv, tv) = (VertexId(s), VertexId(t));
                let (exact, exact_time) = timed(|| edmonds_karp(g, sv, tv));
                let (heur, heur_time) = timed(|| heuristic_max_flow(g, sv, tv, cfg.level, seed));
                let exact = exact.map_err(wrap)?;
                let heur = heur.map_err(wrap)?;
                records.push(ExperimentRecord {
                    experiment: "datasets".into(),
                    graph: name.clone(),
                    nodes: g.vertex_count(),
                    edges: loaded.reported_edge_count(),
                    clusters: None,
                    inp: None,
                    outp: None,
                    load_policy: load_policy(&loaded),
                    count_check: check.into(),
                    level: cfg.level,
                    k: 1 << cfg.level,
                    source: loaded.file_id(s) as usize,
                    sink: loaded.file_id(t) as usize,
                    endpoint_policy: POLICY_TOP_DEGREE.into(),
                    exact_value: exact.value,
                    heuristic_value: heur.value,
                    branch: heur.branch.to_string(),
                    exact_runtime_seconds: exact_time,
                    heuristic_runtime_seconds: heur_time,
                    seed,
                    repetition: rep,
                });
            }
        }
    }
    Ok(records)
}
