//! Recursive Kernighan-Lin on a planted four-cluster graph, compared with
//! the planted labels.

use flowpart::{generate, recursive_partition, GeneratorConfig};

fn main() -> flowpart::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let gen = generate(&GeneratorConfig::new(4, 10, 0.5, 0.05, seed))?;
    let p = recursive_partition(&gen.graph, 2, seed)?;

    for split in &p.splits {
        println!(
            "depth {} prefix {}: {} | {} cuts per pass {:?}",
            split.depth, split.prefix, split.left, split.right, split.pass_cuts
        );
    }
    for (id, members) in p.members.iter().enumerate() {
        let labels: Vec<usize> = members.iter().map(|&v| gen.labels[v]).collect();
        println!("part {id}: planted labels {labels:?}");
    }
    println!("cut edges: {}", p.cut_size(&gen.graph));
    Ok(())
}
