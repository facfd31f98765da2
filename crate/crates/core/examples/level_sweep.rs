//! Heuristic runtime against partition level, as ratios to level 0.

use flowpart::bench::{run_level_sweep, write_ratio_table, LevelSweepConfig};

fn main() -> flowpart::Result<()> {
    let sweep = run_level_sweep(&LevelSweepConfig {
        node_counts: vec![300, 600],
        levels: vec![0, 2, 4, 6],
        clusters: 8,
        inp: 0.01,
        outp: 0.005,
        repetitions: 10,
        seed: 0,
        parallel: false,
    })?;
    write_ratio_table(&sweep.ratios, std::io::stdout().lock())?;
    Ok(())
}
