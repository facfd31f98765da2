//! Approximate maximum flow at several partition levels next to the exact
//! value, with the superpath trace of the deepest level.

use flowpart::{edmonds_karp, generate, heuristic_max_flow, GeneratorConfig, VertexId};

fn main() -> flowpart::Result<()> {
    let gen = generate(&GeneratorConfig::new(8, 50, 0.05, 0.005, 11))?;
    let g = &gen.graph;
    // one endpoint in the first planted cluster, one in the last
    let (s, t) = (VertexId(0), VertexId(g.vertex_count() - 1));

    let exact = edmonds_karp(g, s, t)?;
    println!("exact: {}", exact.value);
    let mut last = None;
    for level in 0..=3 {
        let r = heuristic_max_flow(g, s, t, level, 7)?;
        println!("level {level} (k={}): {} via {} branch", r.k, r.value, r.branch);
        last = Some(r);
    }
    print!("{}", last.unwrap());
    Ok(())
}
