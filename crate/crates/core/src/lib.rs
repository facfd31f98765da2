//! Maximum flow on large clustered networks, exact and approximate.
//!
//! * [`maxflow`]: Edmonds-Karp, an exhaustive min-cut oracle and a flow
//!   validator.
//! * [`partition`]: recursive Kernighan-Lin bisection into `2^level` parts.
//! * [`heuristic`]: approximate maximum flow that runs exact flows inside
//!   each part and combines them over the graph of parts.
//! * [`generate`]: seeded planted-partition graphs.
//! * [`edgelist`]: edge-list and Matrix Market loading.
//! * [`bench`]: timing sweeps and dataset runs with CSV output.
//!
//! ```
//! use flowpart::{build_graph, edmonds_karp, heuristic_max_flow, VertexId};
//!
//! let g = build_graph(4, &[(0, 1, 3), (0, 2, 4), (1, 3, 3), (2, 3, 4)]).unwrap();
//! let exact = edmonds_karp(&g, VertexId(0), VertexId(3)).unwrap();
//! assert_eq!(exact.value, 7);
//!
//! // a single part reduces the heuristic to the exact algorithm
//! let approx = heuristic_max_flow(&g, VertexId(0), VertexId(3), 0, 42).unwrap();
//! assert_eq!(approx.value, 7);
//! ```

pub mod bench;
pub mod edgelist;
pub mod error;
pub mod generate;
pub mod graph;
pub mod heuristic;
pub mod maxflow;
pub mod partition;
pub mod rng;

pub use edgelist::{load_edge_list, IndexBase, LoadOptions, LoadedGraph};
pub use error::{Error, Result};
pub use generate::{generate, GeneratedGraph, GeneratorConfig};
pub use graph::{build_graph, induced_subgraph, CapacitatedGraph, Edge, VertexId, VertexMap};
pub use heuristic::{
    build_supergraph, heuristic_max_flow, shortest_superpath, Branch, Budget, HeuristicResult,
    SuperGraph,
};
pub use maxflow::{edmonds_karp, min_cut_oracle, validate_flow, FlowResult, FlowViolation};
pub use partition::{kernighan_lin, recursive_partition, Bipartition, KlConfig, Partitioning, Side};
