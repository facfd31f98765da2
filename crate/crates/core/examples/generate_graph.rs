//! Writes a planted-partition graph as an edge list and reloads it.

use flowpart::{generate, load_edge_list, GeneratorConfig, IndexBase, LoadOptions};

fn main() -> flowpart::Result<()> {
    let cfg = GeneratorConfig::new(3, 20, 0.3, 0.02, 5);
    let gen = generate(&cfg)?;
    let g = &gen.graph;
    let within = g
        .edges()
        .iter()
        .filter(|e| gen.labels[e.source] == gen.labels[e.target])
        .count();
    println!(
        "{} vertices, {} directed edges, {within} inside clusters",
        g.vertex_count(),
        g.edge_count()
    );

    let path = std::env::temp_dir().join("flowpart-example.edges");
    flowpart::edgelist::save_edge_list(g, &path)?;
    let opts = LoadOptions {
        index_base: IndexBase::Zero,
        ..LoadOptions::default()
    };
    let reloaded = load_edge_list(&path, &opts)?;
    assert_eq!(&reloaded.graph, g);
    println!("round trip through {} ok", path.display());
    Ok(())
}
