use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use flowpart::bench::{
    self, DatasetBenchConfig, LevelSweepConfig, SweepConfig,
};
use flowpart::{
    edmonds_karp, generate, heuristic_max_flow, load_edge_list, recursive_partition, Error,
    GeneratorConfig, IndexBase, LoadOptions, LoadedGraph, VertexId,
};

#[derive(Parser)]
#[command(name = "flowpart", version, about = "Exact and partition-based approximate maximum flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact maximum flow (Edmonds-Karp).
    Exact {
        graph: PathBuf,
        /// Source, as numbered in the file.
        source: u64,
        /// Sink, as numbered in the file.
        sink: u64,
        #[command(flatten)]
        load: LoadArgs,
    },
    /// Partition-based approximate maximum flow.
    Heuristic {
        graph: PathBuf,
        source: u64,
        sink: u64,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        load: LoadArgs,
    },
    /// Generate a clustered random graph as an edge list.
    Gen {
        #[arg(long, default_value_t = 4)]
        clusters: usize,
        #[arg(long, default_value_t = 10)]
        nodes_per_cluster: usize,
        #[arg(long, default_value_t = 0.5)]
        inp: f64,
        #[arg(long, default_value_t = 0.05)]
        outp: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list output; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write planted labels as `vertex_id,cluster` CSV.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Recursive Kernighan-Lin partitioning, written as `vertex_id,partition_id` CSV.
    Partition {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        load: LoadArgs,
    },
    /// Benchmark sweeps.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Exact vs heuristic runtime and value over growing generated graphs.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "100,300,500,700,900")]
        nodes: Vec<usize>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Heuristic runtime per partition level, with ratios to level 0.
    Levels {
        #[arg(long, value_delimiter = ',', default_value = "100,300,500,700,900")]
        nodes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,2,4,6,8,10")]
        levels: Vec<u32>,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exact vs heuristic on dataset files with top-degree endpoints.
    Datasets {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Endpoint draws per dataset.
        #[arg(long, default_value_t = 1)]
        draws: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add missing reverse edges (repository lists are undirected).
        #[arg(long, action = ArgAction::Set, default_value_t = true, num_args = 0..=1, default_missing_value = "true")]
        symmetrize: bool,
        #[arg(long, default_value_t = 1)]
        default_capacity: u64,
        #[arg(long, default_value = "auto")]
        index_base: IndexBase,
    },
}

#[derive(Args)]
struct LoadArgs {
    /// Add missing reverse edges with equal capacity.
    #[arg(long, action = ArgAction::Set, default_value_t = false, num_args = 0..=1, default_missing_value = "true")]
    symmetrize: bool,
    /// Capacity for lines without a weight column.
    #[arg(long, default_value_t = 1)]
    default_capacity: u64,
    /// auto, 0 or 1.
    #[arg(long, default_value = "auto")]
    index_base: IndexBase,
    /// Ignore the weight column.
    #[arg(long)]
    unweighted: bool,
}

impl LoadArgs {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            weighted: !self.unweighted,
            default_capacity: self.default_capacity,
            index_base: self.index_base,
            symmetrize: self.symmetrize,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 8)]
    clusters: usize,
    #[arg(long, default_value_t = 0.01)]
    inp: f64,
    #[arg(long, default_value_t = 0.005)]
    outp: f64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run repetitions on all cores (timings then share the machine).
    #[arg(long)]
    parallel: bool,
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path, args: &LoadArgs) -> Result<LoadedGraph, Error> {
    load_edge_list(path, &args.options())
}

fn endpoint(loaded: &LoadedGraph, file_id: u64) -> Result<VertexId, Error> {
    loaded
        .internal_id(file_id)
        .map(VertexId)
        .ok_or(Error::VertexOutOfRange {
            vertex: file_id as usize,
            vertex_count: loaded.graph.vertex_count(),
        })
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Exact {
            graph,
            source,
            sink,
            load: args,
        } => {
            let loaded = load(&graph, &args)?;
            let (s, t) = (endpoint(&loaded, source)?, endpoint(&loaded, sink)?);
            let (flow, secs) = bench::timed(|| edmonds_karp(&loaded.graph, s, t));
            let flow = flow?;
            writeln!(stdout, "value={}", flow.value)?;
            writeln!(stdout, "augmenting_paths={}", flow.augmentations)?;
            eprintln!("runtime_seconds={secs:.9}");
        }
        Command::Heuristic {
            graph,
            source,
            sink,
            level,
            seed,
            load: args,
        } => {
            let loaded = load(&graph, &args)?;
            let (s, t) = (endpoint(&loaded, source)?, endpoint(&loaded, sink)?);
            let (result, secs) = bench::timed(|| heuristic_max_flow(&loaded.graph, s, t, level, seed));
            write!(stdout, "{}", result?)?;
            eprintln!("runtime_seconds={secs:.9}");
        }
        Command::Gen {
            clusters,
            nodes_per_cluster,
            inp,
            outp,
            seed,
            out,
            labels,
        } => {
            let cfg = GeneratorConfig::new(clusters, nodes_per_cluster, inp, outp, seed);
            let generated = generate(&cfg)?;
            let mut w = open_out(&out)?;
            generated.graph.write_edge_list(&mut w)?;
            w.flush()?;
            if let Some(path) = labels {
                let mut w = open_out(&Some(path))?;
                writeln!(w, "vertex_id,cluster")?;
                for (v, c) in generated.labels.iter().enumerate() {
                    writeln!(w, "{v},{c}")?;
                }
                w.flush()?;
            }
        }
        Command::Partition {
            graph,
            level,
            seed,
            out,
            load: args,
        } => {
            let loaded = load(&graph, &args)?;
            let p = recursive_partition(&loaded.graph, level, seed)?;
            let mut w = open_out(&out)?;
            p.write_csv(&mut w)?;
            w.flush()?;
            eprintln!("k={} cut_edges={}", p.k(), p.cut_size(&loaded.graph));
        }
        Command::Bench(BenchCommand::Scaling {
            nodes,
            model,
            level,
            run,
        }) => {
            let cfg = SweepConfig {
                node_counts: nodes,
                clusters: model.clusters,
                inp: model.inp,
                outp: model.outp,
                level,
                repetitions: run.reps,
                seed: run.seed,
                parallel: run.parallel,
            };
            let records = bench::run_scaling_sweep(&cfg)?;
            let mut w = open_out(&run.out)?;
            bench::write_records(&records, &mut w)?;
            w.flush()?;
        }
        Command::Bench(BenchCommand::Levels {
            nodes,
            levels,
            model,
            run,
        }) => {
            let cfg = LevelSweepConfig {
                node_counts: nodes,
                levels,
                clusters: model.clusters,
                inp: model.inp,
                outp: model.outp,
                repetitions: run.reps,
                seed: run.seed,
                parallel: run.parallel,
            };
            let sweep = bench::run_level_sweep(&cfg)?;
            if run.out.is_some() {
                let mut w = open_out(&run.out)?;
                bench::write_records(&sweep.records, &mut w)?;
                w.flush()?;
            }
            bench::write_ratio_table(&sweep.ratios, &mut stdout)?;
        }
        Command::Bench(BenchCommand::Datasets {
            paths,
            level,
            seed,
            reps,
            draws,
            out,
            symmetrize,
            default_capacity,
            index_base,
        }) => {
            let cfg = DatasetBenchConfig {
                paths,
                load: LoadOptions {
                    weighted: true,
                    default_capacity,
                    index_base,
                    symmetrize,
                },
                level,
                seed,
                draws,
                repetitions: reps,
            };
            let records = bench::run_dataset_bench(&cfg)?;
            let mut w = open_out(&out)?;
            bench::write_records(&records, &mut w)?;
            w.flush()?;
        }
    }
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
