//! Exact vs heuristic runtime on growing sparse clustered graphs. Pass
//! `--parallel` to spread repetitions over cores.

use flowpart::bench::{median, run_scaling_sweep, write_records, SweepConfig};

fn main() -> flowpart::Result<()> {
    let cfg = SweepConfig {
        node_counts: vec![200, 400, 800],
        repetitions: 5,
        parallel: std::env::args().any(|a| a == "--parallel"),
        ..SweepConfig::default()
    };
    let records = run_scaling_sweep(&cfg)?;
    for &n in &cfg.node_counts {
        let cell: Vec<_> = records.iter().filter(|r| r.nodes / 8 == n / 8).collect();
        let mut exact: Vec<f64> = cell.iter().map(|r| r.exact_runtime_seconds).collect();
        let mut heur: Vec<f64> = cell.iter().map(|r| r.heuristic_runtime_seconds).collect();
        eprintln!(
            "{n:>5} nodes: exact {:.3} ms, heuristic {:.3} ms",
            median(&mut exact) * 1e3,
            median(&mut heur) * 1e3
        );
    }
    write_records(&records, std::io::stdout().lock())
}
