//! Exact maximum flow on a small network, with the per-edge flows and a
//! check against the exhaustive min-cut oracle.

use flowpart::{build_graph, edmonds_karp, min_cut_oracle, validate_flow, VertexId};

fn main() -> flowpart::Result<()> {
    let g = build_graph(
        6,
        &[
            (0, 1, 16),
            (0, 2, 13),
            (1, 2, 10),
            (2, 1, 4),
            (1, 3, 12),
            (3, 2, 9),
            (2, 4, 14),
            (4, 3, 7),
            (3, 5, 20),
            (4, 5, 4),
        ],
    )?;
    let (s, t) = (VertexId(0), VertexId(5));
    let flow = edmonds_karp(&g, s, t)?;
    println!("max flow {} after {} augmenting paths", flow.value, flow.augmentations);
    for (e, f) in g.edges().iter().zip(&flow.edge_flows) {
        println!("  {} -> {}: {f}/{}", e.source, e.target, e.capacity);
    }
    assert!(validate_flow(&g, s, t, &flow).is_ok());
    println!("min cut by enumeration: {}", min_cut_oracle(&g, s, t)?);
    Ok(())
}
