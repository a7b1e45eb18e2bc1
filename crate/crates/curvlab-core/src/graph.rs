//! Simple undirected graphs on vertex set {0, .., n-1}, the graph6 codec,
//! and the BFS shortest-path metric.
//!
//! Graphs are immutable once built. Adjacency is kept both as sorted
//! neighbor lists (for deterministic iteration) and as one bitset word per
//! vertex (for O(1) adjacency and fast common-neighbor queries), which caps
//! the order at 64; everything in this crate lives far below that.

use crate::error::Error;
use crate::Result;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    bits: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge list. Vertices must lie in 0..n; loops are
    /// rejected; duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::OrderOutOfRange { n, lo: 1, hi: MAX_VERTICES });
        }
        let mut bits = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            bits[u] |= 1 << v;
            bits[v] |= 1 << u;
        }
        let adj = (0..n)
            .map(|u| (0..n).filter(|&v| bits[u] >> v & 1 == 1).collect())
            .collect();
        Ok(Graph { n, adj, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Neighbors in increasing order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Neighbor set of `v` as a bitset word.
    pub fn row(&self, v: usize) -> u64 {
        self.bits[v]
    }

    /// Closed neighborhood N[v] as a bitset word.
    pub fn closed_row(&self, v: usize) -> u64 {
        self.bits[v] | 1 << v
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.bits[u] >> v & 1 == 1
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        bits_to_vec(self.bits[u] & self.bits[v])
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { v, n: self.n })
        }
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            let fresh = self.bits[u] & !seen;
            seen |= fresh;
            stack.extend(bits_to_vec(fresh));
        }
        seen.count_ones() as usize == self.n
    }

    /// Connected with no cut vertex; requires n >= 3.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        (0..self.n).all(|v| {
            let start = (v == 0) as usize;
            let mut seen = 1u64 << start | 1 << v;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let fresh = self.bits[u] & !seen;
                seen |= fresh;
                stack.extend(bits_to_vec(fresh));
            }
            seen.count_ones() as usize == self.n
        })
    }

    /// Relabels via `perm`, where `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::from_edges(self.n, &edges).expect("permutation of a valid graph")
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut edges = self.edges();
        edges.push((u, v));
        Graph::from_edges(self.n, &edges)
    }
}

fn bits_to_vec(mut w: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(w.count_ones() as usize);
    while w != 0 {
        let v = w.trailing_zeros() as usize;
        out.push(v);
        w &= w - 1;
    }
    out
}

/// All-pairs shortest path lengths. Unreachable pairs are represented
/// explicitly as `None`, never as a large sentinel distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        self.d[u * self.n + v]
    }

    /// Distance as an error if the pair is disconnected.
    pub fn finite(&self, u: usize, v: usize) -> Result<u32> {
        self.get(u, v).ok_or(Error::Unreachable { x: u, y: v })
    }
}

/// Single-source BFS distances.
pub fn bfs_from(g: &Graph, src: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs BFS.
pub fn bfs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut d = Vec::with_capacity(n * n);
    for src in 0..n {
        d.extend(bfs_from(g, src));
    }
    DistanceMatrix { n, d }
}

// ----- graph6 -----
//
// Short form only: byte 0 is n + 63 (n <= 62), then the upper triangle of
// the adjacency matrix in column order (0,1), (0,2), (1,2), (0,3), ... packed
// big-endian into 6-bit groups, each stored as group + 63. Padding bits must
// be zero.

const G6_HEADER: &str = ">>graph6<<";

pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > 62 {
        return Err(Error::Graph6TooLarge(n));
    }
    let mut out = vec![n as u8 + 63];
    let mut group = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            group = group << 1 | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Parses one graph6 record; a leading `>>graph6<<` header is allowed.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let line = line.trim();
    let body = line.strip_prefix(G6_HEADER).unwrap_or(line);
    let skipped = line.len() - body.len();
    let err = |offset: usize, reason: &str| Error::Graph6 {
        offset: offset + skipped,
        reason: reason.to_string(),
    };
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(err(0, "empty record"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, "byte outside graph6 range 63..=126"));
        }
    }
    if bytes[0] == 126 {
        return Err(err(0, "long form (n > 62) not supported"));
    }
    let n = (bytes[0] - 63) as usize;
    if n == 0 {
        return Err(err(0, "empty graph (n = 0) not supported"));
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < 1 + nbytes {
        return Err(err(bytes.len(), "record truncated"));
    }
    if bytes.len() > 1 + nbytes {
        return Err(err(1 + nbytes, "trailing bytes after record"));
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = bytes[1 + idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                edges.push((u, v));
            }
            idx += 1;
        }
    }
    for pad in nbits..nbytes * 6 {
        let byte = bytes[1 + pad / 6] - 63;
        if byte >> (5 - pad % 6) & 1 == 1 {
            return Err(err(1 + pad / 6, "nonzero padding bits"));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Parses a whole graph6 file: one record per line, blank lines skipped.
pub fn parse_graph6_file(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && *l != G6_HEADER)
        .map(parse_graph6)
        .collect()
}

/// Parses "u v" one edge per line; vertices must be numbered so that the
/// largest label is n - 1. Blank lines and `#` comments are skipped.
pub fn parse_adjacency_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: &str| Error::AdjacencyList {
            line: i + 1,
            reason: reason.to_string(),
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(err("expected exactly two vertex labels"));
        }
        let u: usize = toks[0].parse().map_err(|_| err("bad vertex label"))?;
        let v: usize = toks[1].parse().map_err(|_| err("bad vertex label"))?;
        if u == v {
            return Err(err("self-loop"));
        }
        max = max.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::AdjacencyList {
            line: 0,
            reason: "no edges".to_string(),
        });
    }
    Graph::from_edges(max + 1, &edges)
}

// ----- small named graphs used across the test suite -----

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges).expect("path")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("complete")
}

/// K_{1,k}: center is the last vertex, leaves 0..k.
pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (0..k).map(|i| (i, k)).collect();
    Graph::from_edges(k + 1, &edges).expect("star")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).expect("complete bipartite")
}
