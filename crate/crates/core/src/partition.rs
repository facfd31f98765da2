//! Balanced graph bisection by Kernighan-Lin, applied recursively for
//! `k = 2^level` parts.
//!
//! Partitioning looks only at which vertex pairs are connected: edge
//! directions are dropped and capacities ignored, so the objective is the
//! number of undirected cut edges.
//!
//! A pass computes for every vertex `D = external - internal` neighbour
//! count, then repeatedly picks the unlocked pair `(a, b)` from opposite sides
//! maximising `D[a] + D[b] - 2·adj(a, b)`, swaps and locks it, and updates the
//! `D` values of its neighbours. After `min(|A|, |B|)` swaps the pass keeps
//! the prefix of swaps with the largest positive cumulative gain and undoes
//! the rest. Candidates are held in gain buckets, so selecting a pair costs
//! roughly the degree of the vertices inspected rather than `O(n^2)`.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::CapacitatedGraph;
use crate::rng::{derive_seed, stream, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub sides: Vec<Side>,
    pub cut_size: usize,
    /// Cut size of the initial split followed by the cut after every pass.
    pub pass_cuts: Vec<usize>,
}

impl Bipartition {
    pub fn members(&self, side: Side) -> Vec<usize> {
        (0..self.sides.len()).filter(|&v| self.sides[v] == side).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KlConfig {
    /// Upper bound on improvement passes per bisection.
    pub max_passes: usize,
}

impl Default for KlConfig {
    fn default() -> Self {
        KlConfig { max_passes: 10 }
    }
}

/// Undirected simple graph in CSR form.
#[derive(Debug, Clone)]
pub(crate) struct UndirectedGraph {
    offsets: Vec<usize>,
    neighbours: Vec<u32>,
}

impl UndirectedGraph {
    pub(crate) fn from_capacitated(g: &CapacitatedGraph) -> Self {
        let n = g.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbours = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for u in 0..n {
            // residual arcs are sorted by head, so duplicates are adjacent
            let mut last = u32::MAX;
            for arc in g.residual_arcs(u) {
                if arc.head != last {
                    neighbours.push(arc.head);
                    last = arc.head;
                }
            }
            offsets.push(neighbours.len());
        }
        UndirectedGraph { offsets, neighbours }
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub(crate) fn neighbours(&self, v: usize) -> &[u32] {
        &self.neighbours[self.offsets[v]..self.offsets[v + 1]]
    }

    fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.neighbours(v).len()).max().unwrap_or(0)
    }

    /// Subgraph induced by `members`, relabelled by position. `scratch` must
    /// have one slot per vertex of `self`; stale entries are harmless since
    /// every lookup is confirmed against `members`.
    fn induced(&self, members: &[usize], scratch: &mut [u32]) -> UndirectedGraph {
        for (i, &v) in members.iter().enumerate() {
            scratch[v] = i as u32;
        }
        let mut offsets = Vec::with_capacity(members.len() + 1);
        let mut neighbours = Vec::new();
        offsets.push(0);
        for &v in members {
            for &w in self.neighbours(v) {
                let local = scratch[w as usize];
                if (local as usize) < members.len() && members[local as usize] == w as usize {
                    neighbours.push(local);
                }
            }
            offsets.push(neighbours.len());
        }
        UndirectedGraph { offsets, neighbours }
    }

    fn cut_size(&self, right: &[bool]) -> usize {
        let mut cut = 0;
        for v in 0..self.len() {
            for &w in self.neighbours(v) {
                if (w as usize) > v && right[v] != right[w as usize] {
                    cut += 1;
                }
            }
        }
        cut
    }
}

const NIL: u32 = u32::MAX;

/// Doubly linked gain buckets for the unlocked vertices of one side.
struct GainBuckets {
    offset: i64,
    heads: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    /// Upper bound on the highest non-empty bucket index.
    top: usize,
    len: usize,
}

impl GainBuckets {
    fn new(n: usize, max_degree: usize) -> Self {
        GainBuckets {
            offset: max_degree as i64,
            heads: vec![NIL; 2 * max_degree + 1],
            next: vec![NIL; n],
            prev: vec![NIL; n],
            top: 0,
            len: 0,
        }
    }

    fn clear(&mut self) {
        self.heads.iter_mut().for_each(|h| *h = NIL);
        self.top = 0;
        self.len = 0;
    }

    #[inline]
    fn slot(&self, gain: i64) -> usize {
        (gain + self.offset) as usize
    }

    #[inline]
    fn insert(&mut self, v: usize, gain: i64) {
        let b = self.slot(gain);
        let head = self.heads[b];
        self.next[v] = head;
        self.prev[v] = NIL;
        if head != NIL {
            self.prev[head as usize] = v as u32;
        }
        self.heads[b] = v as u32;
        self.top = self.top.max(b);
        self.len += 1;
    }

    #[inline]
    fn remove(&mut self, v: usize, gain: i64) {
        let (p, nx) = (self.prev[v], self.next[v]);
        if p == NIL {
            let b = self.slot(gain);
            self.heads[b] = nx;
        } else {
            self.next[p as usize] = nx;
        }
        if nx != NIL {
            self.prev[nx as usize] = p;
        }
        self.len -= 1;
    }

    /// Index of the highest non-empty bucket, if any.
    fn settle_top(&mut self) -> Option<usize> {
        if self.len == 0 {
            return None;
        }
        while self.heads[self.top] == NIL {
            self.top -= 1;
        }
        Some(self.top)
    }
}

/// Reusable per-bisection state.
struct KlState<'g> {
    g: &'g UndirectedGraph,
    right: Vec<bool>,
    gain: Vec<i64>,
    locked: Vec<bool>,
    mark: Vec<u32>,
    stamp: u32,
    buckets: [GainBuckets; 2],
}

impl<'g> KlState<'g> {
    fn new(g: &'g UndirectedGraph, right: Vec<bool>) -> Self {
        let n = g.len();
        let max_degree = g.max_degree();
        KlState {
            g,
            right,
            gain: vec![0; n],
            locked: vec![false; n],
            mark: vec![0; n],
            stamp: 0,
            buckets: [GainBuckets::new(n, max_degree), GainBuckets::new(n, max_degree)],
        }
    }

    fn side(&self, v: usize) -> usize {
        self.right[v] as usize
    }

    /// Best unlocked pair `(left, right, gain)`.
    fn best_pair(&mut self) -> Option<(usize, usize, i64)> {
        let top_left = self.buckets[0].settle_top()?;
        let top_right = self.buckets[1].settle_top()?;
        let offset = self.buckets[0].offset;
        let best_right_gain = top_right as i64 - offset;
        let mut best: Option<(usize, usize, i64)> = None;
        let beats = |best: &Option<(usize, usize, i64)>, g: i64| best.map_or(true, |b| g > b.2);

        for bl in (0..=top_left).rev() {
            let gain_l = bl as i64 - offset;
            if !beats(&best, gain_l + best_right_gain) {
                break;
            }
            let mut a = self.buckets[0].heads[bl];
            while a != NIL {
                let au = a as usize;
                if !beats(&best, gain_l + best_right_gain) {
                    break;
                }
                self.stamp += 1;
                for &w in self.g.neighbours(au) {
                    self.mark[w as usize] = self.stamp;
                }
                'scan: for br in (0..=top_right).rev() {
                    let gain_r = br as i64 - offset;
                    if !beats(&best, gain_l + gain_r) {
                        break;
                    }
                    let mut b = self.buckets[1].heads[br];
                    while b != NIL {
                        let adjacent = self.mark[b as usize] == self.stamp;
                        let g = gain_l + gain_r - if adjacent { 2 } else { 0 };
                        if beats(&best, g) {
                            best = Some((au, b as usize, g));
                        }
                        if !adjacent {
                            break 'scan;
                        }
                        b = self.buckets[1].next[b as usize];
                    }
                }
                a = self.buckets[0].next[au];
            }
        }
        best
    }

    /// Moves `v` to the other side and updates the gains of its unlocked
    /// neighbours.
    fn flip(&mut self, v: usize) {
        let old = self.right[v];
        self.right[v] = !old;
        let g = self.g;
        for &w in g.neighbours(v) {
            let w = w as usize;
            if self.locked[w] {
                continue;
            }
            let delta = if self.right[w] == old { 2 } else { -2 };
            let side = self.side(w);
            self.buckets[side].remove(w, self.gain[w]);
            self.gain[w] += delta;
            self.buckets[side].insert(w, self.gain[w]);
        }
    }

    /// Runs one pass; returns the cut reduction achieved (0 if none).
    fn pass(&mut self) -> usize {
        let g = self.g;
        let n = g.len();
        for b in &mut self.buckets {
            b.clear();
        }
        for v in 0..n {
            let mut d = 0i64;
            for &w in g.neighbours(v) {
                d += if self.right[w as usize] != self.right[v] { 1 } else { -1 };
            }
            self.gain[v] = d;
            self.locked[v] = false;
        }
        for v in 0..n {
            let side = self.side(v);
            self.buckets[side].insert(v, self.gain[v]);
        }

        let steps = self.buckets[0].len.min(self.buckets[1].len);
        let mut swaps = Vec::with_capacity(steps);
        let mut total = 0i64;
        let mut best_total = 0i64;
        let mut best_len = 0usize;
        for _ in 0..steps {
            let Some((a, b, gain)) = self.best_pair() else { break };
            self.buckets[0].remove(a, self.gain[a]);
            self.buckets[1].remove(b, self.gain[b]);
            self.locked[a] = true;
            self.locked[b] = true;
            self.flip(a);
            self.flip(b);
            swaps.push((a, b));
            total += gain;
            if total > best_total {
                best_total = total;
                best_len = swaps.len();
            }
        }
        for &(a, b) in &swaps[best_len..] {
            self.right[a] = !self.right[a];
            self.right[b] = !self.right[b];
        }
        best_total as usize
    }
}

/// Balanced random split: a shuffled vertex order, the first part going left.
/// For odd `n` the seeded stream decides which side gets the extra vertex.
fn initial_split(n: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let left = if n % 2 == 1 && rng.gen::<bool>() { n / 2 + 1 } else { n / 2 };
    let mut right = vec![false; n];
    for &v in &order[left..] {
        right[v] = true;
    }
    right
}

fn bisect(g: &UndirectedGraph, rng: &mut ChaCha8Rng, config: &KlConfig) -> (Vec<bool>, Vec<usize>) {
    let right = initial_split(g.len(), rng);
    let mut cut = g.cut_size(&right);
    let mut pass_cuts = vec![cut];
    let mut state = KlState::new(g, right);
    for _ in 0..config.max_passes {
        let improvement = state.pass();
        cut -= improvement;
        pass_cuts.push(cut);
        if improvement == 0 {
            break;
        }
    }
    debug_assert_eq!(cut, g.cut_size(&state.right));
    (state.right, pass_cuts)
}

fn split_rng(seed: u64, depth: u32, prefix: usize) -> ChaCha8Rng {
    stream(derive_seed(seed, depth as u64, prefix as u64), Stream::Partition)
}

/// Kernighan-Lin bisection of `g` with the default pass limit.
pub fn kernighan_lin(g: &CapacitatedGraph, seed: u64) -> Result<Bipartition> {
    kernighan_lin_with(g, seed, &KlConfig::default())
}

pub fn kernighan_lin_with(g: &CapacitatedGraph, seed: u64, config: &KlConfig) -> Result<Bipartition> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TooFewVertices {
            required: 2,
            actual: n,
        });
    }
    let ug = UndirectedGraph::from_capacitated(g);
    let (right, pass_cuts) = bisect(&ug, &mut split_rng(seed, 0, 0), config);
    let sides = right
        .iter()
        .map(|&r| if r { Side::Right } else { Side::Left })
        .collect();
    Ok(Bipartition {
        sides,
        cut_size: *pass_cuts.last().unwrap(),
        pass_cuts,
    })
}

/// One bisection performed while building a [`Partitioning`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRecord {
    pub depth: u32,
    /// Binary path of the part that was split.
    pub prefix: usize,
    pub left: usize,
    pub right: usize,
    pub pass_cuts: Vec<usize>,
}

/// Assignment of every vertex to one of `k = 2^level` parts.
///
/// Part ids are binary paths through the recursion: the first split sets
/// the most significant bit, left halves take bit 0 and right halves bit 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    pub level: u32,
    pub part_of: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub splits: Vec<SplitRecord>,
}

impl Partitioning {
    pub fn k(&self) -> usize {
        self.members.len()
    }

    /// Number of unordered connected vertex pairs in different parts.
    pub fn cut_size(&self, g: &CapacitatedGraph) -> usize {
        let mut pairs: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|e| self.part_of[e.source] != self.part_of[e.target])
            .map(|e| (e.source.min(e.target), e.source.max(e.target)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }

    /// `vertex_id,partition_id` CSV with a header row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "vertex_id,partition_id")?;
        for (v, p) in self.part_of.iter().enumerate() {
            writeln!(out, "{v},{p}")?;
        }
        Ok(())
    }
}

pub fn recursive_partition(g: &CapacitatedGraph, level: u32, seed: u64) -> Result<Partitioning> {
    recursive_partition_with(g, level, seed, &KlConfig::default())
}

pub fn recursive_partition_with(
    g: &CapacitatedGraph,
    level: u32,
    seed: u64,
    config: &KlConfig,
) -> Result<Partitioning> {
    let n = g.vertex_count();
    let k = 1usize
        .checked_shl(level)
        .filter(|&k| k <= n && level < usize::BITS)
        .ok_or(Error::LevelTooLarge {
            level,
            k: 1usize.checked_shl(level).unwrap_or(usize::MAX),
            vertex_count: n,
        })?;

    let mut members = vec![Vec::new(); k];
    let mut splits = Vec::with_capacity(k.saturating_sub(1));
    if level == 0 {
        members[0] = (0..n).collect();
    } else {
        let ug = UndirectedGraph::from_capacitated(g);
        let mut scratch = vec![0u32; n];
        let all: Vec<usize> = (0..n).collect();
        split_recursive(&ug, all, 0, 0, level, seed, config, &mut scratch, &mut members, &mut splits);
    }
    let mut part_of = vec![0usize; n];
    for (p, list) in members.iter().enumerate() {
        for &v in list {
            part_of[v] = p;
        }
    }
    Ok(Partitioning {
        level,
        part_of,
        members,
        splits,
    })
}

#[allow(clippy::too_many_arguments)]
fn split_recursive(
    g: &UndirectedGraph,
    vertices: Vec<usize>,
    depth: u32,
    prefix: usize,
    level: u32,
    seed: u64,
    config: &KlConfig,
    scratch: &mut [u32],
    members: &mut [Vec<usize>],
    splits: &mut Vec<SplitRecord>,
) {
    if depth == level {
        members[prefix] = vertices;
        return;
    }
    let sub = g.induced(&vertices, scratch);
    let (right, pass_cuts) = bisect(&sub, &mut split_rng(seed, depth, prefix), config);
    let (mut left_part, mut right_part) = (Vec::new(), Vec::new());
    for (i, v) in vertices.into_iter().enumerate() {
        if right[i] {
            right_part.push(v);
        } else {
            left_part.push(v);
        }
    }
    splits.push(SplitRecord {
        depth,
        prefix,
        left: left_part.len(),
        right: right_part.len(),
        pass_cuts,
    });
    split_recursive(g, left_part, depth + 1, prefix << 1, level, seed, config, scratch, members, splits);
    split_recursive(g, right_part, depth + 1, (prefix << 1) | 1, level, seed, config, scratch, members, splits);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn undirected(n: usize, pairs: &[(usize, usize)]) -> CapacitatedGraph {
        let edges: Vec<(usize, usize, i64)> = pairs.iter().map(|&(u, v)| (u, v, 1)).collect();
        build_graph(n, &edges).unwrap()
    }

    /// Smallest cut over every balanced bipartition.
    fn brute_force_min_cut(g: &CapacitatedGraph) -> usize {
        let n = g.vertex_count();
        let ug = UndirectedGraph::from_capacitated(g);
        let mut best = usize::MAX;
        for mask in 0u32..(1 << n) {
            let ones = mask.count_ones() as usize;
            if ones != n / 2 && ones != n - n / 2 {
                continue;
            }
            let right: Vec<bool> = (0..n).map(|v| mask & (1 << v) != 0).collect();
            best = best.min(ug.cut_size(&right));
        }
        best
    }

    #[test]
    fn two_triangles_with_bridge() {
        let g = undirected(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        assert_eq!(brute_force_min_cut(&g), 1);
        for seed in 0..20 {
            let bp = kernighan_lin(&g, seed).unwrap();
            assert_eq!(bp.cut_size, 1, "seed {seed}");
            let mut left = bp.members(bp.sides[0]);
            left.sort();
            assert_eq!(left, vec![0, 1, 2]);
        }
    }

    #[test]
    fn path_of_four() {
        let g = undirected(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(brute_force_min_cut(&g), 1);
        for seed in 0..20 {
            let bp = kernighan_lin(&g, seed).unwrap();
            assert_eq!(bp.cut_size, 1, "seed {seed}");
            assert_eq!(bp.sides[0], bp.sides[1]);
            assert_eq!(bp.sides[2], bp.sides[3]);
        }
    }

    #[test]
    fn complete_graph_on_four() {
        let g = undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let bp = kernighan_lin(&g, 3).unwrap();
        assert_eq!(bp.cut_size, 4);
    }

    #[test]
    fn directions_are_ignored() {
        let a = build_graph(4, &[(0, 1, 9), (1, 2, 1), (2, 3, 9)]).unwrap();
        let b = build_graph(4, &[(1, 0, 1), (2, 1, 5), (3, 2, 1), (2, 3, 2)]).unwrap();
        assert_eq!(kernighan_lin(&a, 11).unwrap(), kernighan_lin(&b, 11).unwrap());
    }

    #[test]
    fn too_few_vertices() {
        let g = build_graph(1, &[]).unwrap();
        assert!(matches!(kernighan_lin(&g, 0), Err(Error::TooFewVertices { .. })));
    }

    #[test]
    fn odd_sizes_stay_balanced() {
        let g = undirected(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]);
        let mut larger_left = 0;
        for seed in 0..40 {
            let bp = kernighan_lin(&g, seed).unwrap();
            let left = bp.members(Side::Left).len();
            assert!(left == 3 || left == 4);
            larger_left += (left == 4) as usize;
        }
        assert!(larger_left > 0 && larger_left < 40);
    }

    #[test]
    fn level_zero_is_identity() {
        let g = undirected(5, &[(0, 1), (3, 4)]);
        let p = recursive_partition(&g, 0, 1).unwrap();
        assert_eq!(p.k(), 1);
        assert_eq!(p.members[0], vec![0, 1, 2, 3, 4]);
        assert!(p.splits.is_empty());
    }

    #[test]
    fn level_too_large() {
        let g = undirected(3, &[(0, 1)]);
        assert!(matches!(
            recursive_partition(&g, 2, 0),
            Err(Error::LevelTooLarge { k: 4, .. })
        ));
        assert!(matches!(
            recursive_partition(&g, 80, 0),
            Err(Error::LevelTooLarge { .. })
        ));
    }

    #[test]
    fn ring_of_cliques() {
        let mut pairs = Vec::new();
        for c in 0..4 {
            for i in 0..5 {
                for j in i + 1..5 {
                    pairs.push((5 * c + i, 5 * c + j));
                }
            }
            pairs.push((5 * c + 4, (5 * c + 5) % 20));
        }
        let g = undirected(20, &pairs);
        for seed in 0..10 {
            let p = recursive_partition(&g, 2, seed).unwrap();
            assert_eq!(p.k(), 4);
            assert!(p.cut_size(&g) <= 8, "seed {seed}: cut {}", p.cut_size(&g));
            for m in &p.members {
                assert_eq!(m.len(), 5);
            }
        }
    }

    #[test]
    fn csv_output() {
        let g = undirected(4, &[(0, 1), (2, 3)]);
        let p = recursive_partition(&g, 1, 0).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("vertex_id,partition_id\n0,"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn level_one_matches_single_bisection() {
        let g = undirected(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0)]);
        let bp = kernighan_lin(&g, 42).unwrap();
        let p = recursive_partition(&g, 1, 42).unwrap();
        for v in 0..8 {
            assert_eq!(p.part_of[v] == 1, bp.sides[v] == Side::Right);
        }
    }
}
