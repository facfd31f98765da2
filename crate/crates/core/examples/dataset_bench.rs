//! Exact vs heuristic on edge-list files given on the command line, with
//! endpoints drawn from the twenty highest-degree vertices.
//!
//! ```text
//! cargo run --release --example dataset_bench -- bn-mouse_brain_1.edges
//! ```

use flowpart::bench::{run_dataset_bench, write_records, DatasetBenchConfig};

fn main() -> flowpart::Result<()> {
    let paths: Vec<_> = std::env::args_os().skip(1).map(Into::into).collect();
    if paths.is_empty() {
        eprintln!("usage: dataset_bench FILE...");
        std::process::exit(2);
    }
    let records = run_dataset_bench(&DatasetBenchConfig {
        paths,
        draws: 5,
        ..DatasetBenchConfig::default()
    })?;
    for r in &records {
        eprintln!(
            "{} ({}): {} -> {} exact {} heuristic {}",
            r.graph, r.count_check, r.source, r.sink, r.exact_value, r.heuristic_value
        );
    }
    write_records(&records, std::io::stdout().lock())
}
