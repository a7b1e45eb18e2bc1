//! Canonical labeling by partition refinement with individualization.
//!
//! The canonical form of a graph is the relabeling that minimizes the
//! upper-triangle adjacency bit string over all leaves of the refinement
//! search tree; two graphs are isomorphic iff their canonical codes are
//! equal. Intended for the small orders this crate works at (n <= 12 in the
//! enumeration pipeline, n <= 64 structurally); no automorphism pruning is
//! attempted.

use crate::graph::{encode_graph6, Graph};
use std::collections::BTreeMap;
use std::fmt;

/// graph6 record of the canonical form. Equality of codes is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub String);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Splits every cell by neighbor counts into splitter cells until the ordered
/// partition is equitable. Group order (by ascending count) and the
/// first-split-wins restart policy are both label-invariant, which is what
/// canonicality of the search below rests on.
fn refine(g: &Graph, cells: &mut Vec<Vec<usize>>) {
    loop {
        let mut split_at = None;
        'search: for s in 0..cells.len() {
            let sbits = cells[s].iter().fold(0u64, |a, &v| a | 1 << v);
            for c in 0..cells.len() {
                if cells[c].len() <= 1 {
                    continue;
                }
                let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for &v in &cells[c] {
                    let cnt = (g.row(v) & sbits).count_ones();
                    groups.entry(cnt).or_default().push(v);
                }
                if groups.len() > 1 {
                    split_at = Some((c, groups.into_values().collect::<Vec<_>>()));
                    break 'search;
                }
            }
        }
        match split_at {
            Some((c, parts)) => {
                cells.splice(c..c + 1, parts);
            }
            None => break,
        }
    }
}

/// Upper-triangle bits of `g` relabeled so that `order[i]` gets label `i`,
/// packed for lexicographic comparison.
fn encode_under(g: &Graph, order: &[usize]) -> Vec<u64> {
    let n = g.n();
    let mut words = vec![0u64; (n * (n - 1) / 2).div_ceil(64)];
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            if g.has_edge(order[u], order[v]) {
                words[idx / 64] |= 1 << (63 - idx % 64);
            }
            idx += 1;
        }
    }
    words
}

fn search(g: &Graph, cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    if let Some(t) = cells.iter().position(|c| c.len() > 1) {
        for &v in &cells[t] {
            let mut next = cells.clone();
            let rest: Vec<usize> = cells[t].iter().copied().filter(|&u| u != v).collect();
            next.splice(t..t + 1, [vec![v], rest]);
            refine(g, &mut next);
            search(g, next, best);
        }
        return;
    }
    let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
    let code = encode_under(g, &order);
    let better = match best {
        Some((b, _)) => code < *b,
        None => true,
    };
    if better {
        *best = Some((code, order));
    }
}

/// Canonical relabeling: returns the canonical form and the permutation
/// `perm` with `perm[old] = new`, so `g.permuted(&perm)` is the form.
pub fn canonical_form(g: &Graph) -> (Graph, Vec<usize>) {
    let n = g.n();
    let mut cells = vec![(0..n).collect::<Vec<_>>()];
    refine(g, &mut cells);
    let mut best = None;
    search(g, cells, &mut best);
    let (_, order) = best.expect("search visits at least one leaf");
    let mut perm = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    (g.permuted(&perm), perm)
}

pub fn canonical_code(g: &Graph) -> CanonicalCode {
    let (h, _) = canonical_form(g);
    CanonicalCode(encode_graph6(&h).expect("canonical forms stay within graph6 range"))
}

/// Reference isomorphism test by backtracking vertex assignment. Exists to
/// cross-check the canonical code; quadratically slower, use at n <= 8.
pub fn isomorphic_bruteforce(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    fn extend(g: &Graph, h: &Graph, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
        let u = match map.iter().position(Option::is_none) {
            Some(u) => u,
            None => return true,
        };
        for w in 0..h.n() {
            if used[w] || g.degree(u) != h.degree(w) {
                continue;
            }
            let ok = (0..u).all(|prev| {
                let pw = map[prev].unwrap();
                g.has_edge(prev, u) == h.has_edge(pw, w)
            });
            if ok {
                map[u] = Some(w);
                used[w] = true;
                if extend(g, h, map, used) {
                    return true;
                }
                map[u] = None;
                used[w] = false;
            }
        }
        false
    }
    extend(g, h, &mut vec![None; g.n()], &mut vec![false; h.n()])
}
