//! Corpus-wide property checks for the structural facts the classification
//! rests on. Each check scans a corpus of graphs, counts the instances that
//! match its hypotheses and records every violation with enough data to
//! reproduce it (graph6 code plus the offending pair or vertex). A failing
//! check means an implementation bug somewhere, never an acceptable state.
//!
//! The checks are keyed "3.1" through "3.6":
//!   3.1  any feasible residual coupling certifies a curvature lower bound
//!   3.2  positivity of edges at a degree-3 endpoint with common neighbors
//!   3.3  degree pattern of positively curved exterior edges
//!   3.4  structure around degree-2 vertices with non-adjacent neighbors
//!   3.5  inner faces of length >= 4 are 4-faces of three known kinds
//!   3.6  suppressing a quad-face degree-2 vertex never lowers edge curvature

use crate::canon::isomorphic_bruteforce;
use crate::curvature::{
    coupling_lower_bound, is_positively_curved, kappa_adjacent, kappa_adjacent_with_witness,
};
use crate::enumerate::{find_g8, min_deg2_levels};
use crate::error::Error;
use crate::graph::{bfs_distances, bfs_from, encode_graph6, Graph};
use crate::outerplanar::{
    classify_edge, embed_outerplanar, is_maximal_outerplanar, suppress_degree2,
    suppression_sites, EdgeClass,
};
use crate::rational::{rational, Rational};
use crate::transport::random_feasible_coupling;
use crate::Result;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const LEMMA_IDS: [&str; 6] = ["3.1", "3.2", "3.3", "3.4", "3.5", "3.6"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub graph6: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheckResult {
    pub lemma: String,
    pub corpus: String,
    pub instances: usize,
    pub violations: Vec<Violation>,
    pub pass: bool,
    pub seconds: f64,
}

/// The standard corpus the checks run over: connected outerplanar graphs
/// with minimum degree 2 on 3..=n_max vertices.
pub fn default_corpus(n_max: usize) -> Result<Vec<Graph>> {
    let mut all = Vec::new();
    for level in min_deg2_levels(n_max)?.into_iter().skip(3) {
        all.extend(level);
    }
    Ok(all)
}

/// Parallel scan; per_graph returns (instances matched, violation details).
fn scan<F>(lemma: &str, corpus: &[Graph], per_graph: F) -> Result<LemmaCheckResult>
where
    F: Fn(usize, &Graph) -> Result<(usize, Vec<String>)> + Sync,
{
    let start = Instant::now();
    let per: Vec<(usize, Vec<Violation>)> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let (matched, details) = per_graph(i, g)?;
            let code = encode_graph6(g)?;
            let violations = details
                .into_iter()
                .map(|detail| Violation { graph6: code.clone(), detail })
                .collect();
            Ok((matched, violations))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut instances = 0;
    let mut violations = Vec::new();
    for (m, v) in per {
        instances += m;
        violations.extend(v);
    }
    let max_n = corpus.iter().map(Graph::n).max().unwrap_or(0);
    Ok(LemmaCheckResult {
        lemma: lemma.to_string(),
        corpus: format!("{} graphs, n <= {max_n}", corpus.len()),
        instances,
        pass: violations.is_empty(),
        violations,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// 3.1: for every edge, the bound 1 + 1/d(y) - C(sigma)/lcm certified by a
/// feasible residual coupling never exceeds the exact curvature, and equals
/// it for an optimal coupling.
pub fn check_lemma_coupling_bound(
    corpus: &[Graph],
    samples_per_pair: usize,
    seed: u64,
) -> Result<LemmaCheckResult> {
    scan("3.1", corpus, |idx, g| {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let d = bfs_distances(g);
        let mut matched = 0;
        let mut bad = Vec::new();
        for (u, v) in g.edges() {
            let (exact, pair, optimal) = kappa_adjacent_with_witness(g, u, v)?;
            matched += 1;
            let tight = coupling_lower_bound(g, u, v, &optimal)?;
            if tight != exact {
                bad.push(format!(
                    "edge ({u}, {v}): optimal coupling gives {tight}, kappa is {exact}"
                ));
            }
            let inst = pair.instance(&d)?;
            for _ in 0..samples_per_pair {
                let sigma = random_feasible_coupling(&inst, &mut rng, 24);
                let bound = coupling_lower_bound(g, u, v, &sigma)?;
                matched += 1;
                if bound > exact {
                    bad.push(format!(
                        "edge ({u}, {v}): sampled coupling bound {bound} exceeds kappa {exact}"
                    ));
                }
            }
        }
        Ok((matched, bad))
    })
}

/// The proof-grade lower bound for the degree-pair lemma, if the pair's
/// configuration carries one: (common neighbors, d(y)) -> bound.
fn degree_pair_bound(common: usize, k: usize) -> Option<Rational> {
    match (common, k) {
        (1, 3) => Some(rational(1, 3)),
        (1, 4) => Some(rational(1, 12)),
        (2, k) if k <= 6 => Some(rational(5, k as i64) - rational(1, 3)),
        (2, k) if k <= 10 => Some(rational(7, k as i64) - rational(2, 3)),
        _ => None,
    }
}

/// 3.2: an edge xy with d(x) = 3 <= d(y), at least one common neighbor, and
/// (when d(y) >= 4) a neighbor u2 of y outside N[x] adjacent to a common
/// neighbor, is positively curved whenever |N(x) n N(y)| = 1 with d(y) <= 4
/// or |N(x) n N(y)| = 2 with d(y) <= 10 -- and meets the proof's bound.
pub fn check_lemma_pos_degree_pair(corpus: &[Graph]) -> Result<LemmaCheckResult> {
    scan("3.2", corpus, |_, g| {
        let mut matched = 0;
        let mut bad = Vec::new();
        for (a, b) in g.edges() {
            for (x, y) in [(a, b), (b, a)] {
                if g.degree(x) != 3 || g.degree(y) < 3 {
                    continue;
                }
                let common = g.common_neighbors(x, y);
                if common.is_empty() {
                    continue;
                }
                let k = g.degree(y);
                if k >= 4 {
                    let side = g.neighbors(y).iter().any(|&u2| {
                        u2 != x
                            && !g.has_edge(x, u2)
                            && common.iter().any(|&u1| g.has_edge(u1, u2))
                    });
                    if !side {
                        continue;
                    }
                }
                let Some(bound) = degree_pair_bound(common.len(), k) else {
                    continue;
                };
                matched += 1;
                let kap = kappa_adjacent(g, x, y)?;
                if kap <= Rational::zero() {
                    bad.push(format!(
                        "edge ({x}, {y}) with {} common neighbor(s), d(y) = {k}: kappa {kap} <= 0",
                        common.len()
                    ));
                } else if kap < bound {
                    bad.push(format!(
                        "edge ({x}, {y}): kappa {kap} below the proof bound {bound}"
                    ));
                }
            }
        }
        Ok((matched, bad))
    })
}

/// 3.3: a positively curved exterior edge uv with 3 <= d(u) <= d(v) has
/// exactly one common neighbor w, and its degrees are (3, 3), or (3, 4)
/// with a further neighbor of v adjacent to w.
pub fn check_lemma_exterior(corpus: &[Graph]) -> Result<LemmaCheckResult> {
    scan("3.3", corpus, |_, g| {
        let emb = embed_outerplanar(g)?;
        let mut matched = 0;
        let mut bad = Vec::new();
        for (a, b) in g.edges() {
            let (u, v) = if g.degree(a) <= g.degree(b) { (a, b) } else { (b, a) };
            if g.degree(u) < 3 || classify_edge(&emb, u, v)? != EdgeClass::Exterior {
                continue;
            }
            if kappa_adjacent(g, u, v)? <= Rational::zero() {
                continue;
            }
            matched += 1;
            let common = g.common_neighbors(u, v);
            if common.len() != 1 {
                bad.push(format!(
                    "exterior edge ({u}, {v}): {} common neighbors",
                    common.len()
                ));
                continue;
            }
            let w = common[0];
            let (du, dv) = (g.degree(u), g.degree(v));
            let shape_ok = (du == 3 && dv == 3)
                || (du == 3
                    && dv == 4
                    && g.neighbors(v).iter().any(|&t| t != u && t != w && g.has_edge(t, w)));
            if !shape_ok {
                bad.push(format!(
                    "exterior edge ({u}, {v}): degrees ({du}, {dv}) break the pattern"
                ));
            }
        }
        Ok((matched, bad))
    })
}

/// Distance from `from` to `to` in g with vertex `skip` deleted.
fn distance_without(g: &Graph, skip: usize, from: usize, to: usize) -> Option<u32> {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| a != skip && b != skip)
        .collect();
    let h = Graph::from_edges(g.n(), &edges).ok()?;
    bfs_from(&h, from)[to]
}

/// 3.4: a degree-2 vertex u with non-adjacent neighbors v, w and
/// kappa(u, v) > 0 forces d(v) <= 4 plus the per-degree structure: a
/// 4-cycle through u, v, w (with an extra common neighbor of v and the
/// bridging vertex when d(v) = 4), or a 4- or 5-cycle when d(v) = 2.
pub fn check_lemma_deg2(corpus: &[Graph]) -> Result<LemmaCheckResult> {
    scan("3.4", corpus, |_, g| {
        let mut matched = 0;
        let mut bad = Vec::new();
        for u in 0..g.n() {
            if g.degree(u) != 2 {
                continue;
            }
            let (p, q) = (g.neighbors(u)[0], g.neighbors(u)[1]);
            if g.has_edge(p, q) {
                continue;
            }
            for (v, w) in [(p, q), (q, p)] {
                if kappa_adjacent(g, u, v)? <= Rational::zero() {
                    continue;
                }
                matched += 1;
                let dv = g.degree(v);
                if dv > 4 {
                    bad.push(format!("vertex {u}: positively curved edge to {v} of degree {dv}"));
                    continue;
                }
                let bridges: Vec<usize> = g
                    .common_neighbors(v, w)
                    .into_iter()
                    .filter(|&y| y != u)
                    .collect();
                let structure_ok = match dv {
                    4 => bridges.iter().any(|&y| !g.common_neighbors(v, y).is_empty()),
                    3 => !bridges.is_empty(),
                    2 => matches!(distance_without(g, u, v, w), Some(2) | Some(3)),
                    _ => true,
                };
                if !structure_ok {
                    bad.push(format!(
                        "vertex {u}: neighbor {v} of degree {dv} lacks the forced cycle"
                    ));
                }
            }
        }
        Ok((matched, bad))
    })
}

/// 3.5: in a positively curved 2-connected outerplanar graph that is
/// neither maximal nor a cycle, every inner face of length >= 4 is a
/// 4-face whose exterior edges number three, two consecutive, or zero --
/// the last only in the 8-vertex graph with an all-interior central square.
pub fn check_lemma_4face(corpus: &[Graph]) -> Result<LemmaCheckResult> {
    let g8 = find_g8();
    scan("3.5", corpus, |_, g| {
        if !g.is_two_connected()
            || g.edge_count() == g.n()
            || is_maximal_outerplanar(g)?
            || !is_positively_curved(g)?.positively_curved
        {
            return Ok((0, Vec::new()));
        }
        let emb = embed_outerplanar(g)?;
        let mut matched = 0;
        let mut bad = Vec::new();
        for face in &emb.inner_faces {
            if face.len() < 4 {
                continue;
            }
            matched += 1;
            if face.len() > 4 {
                bad.push(format!("inner face {face:?} has length {}", face.len()));
                continue;
            }
            let exterior: Vec<bool> = (0..4)
                .map(|i| {
                    classify_edge(&emb, face[i], face[(i + 1) % 4])
                        .map(|c| c == EdgeClass::Exterior)
                })
                .collect::<Result<_>>()?;
            let total = exterior.iter().filter(|&&e| e).count();
            let consecutive = (0..4).any(|i| exterior[i] && exterior[(i + 1) % 4]);
            let ok = match total {
                3 => true,
                2 => consecutive,
                0 => isomorphic_bruteforce(g, &g8),
                _ => false,
            };
            if !ok {
                bad.push(format!(
                    "4-face {face:?} has {total} exterior edges in an unexpected pattern"
                ));
            }
        }
        Ok((matched, bad))
    })
}

/// 3.6: suppressing a degree-2 vertex on a quad face of a 2-connected
/// member never lowers the curvature of a retained edge.
pub fn check_suppression_monotonicity(corpus: &[Graph]) -> Result<LemmaCheckResult> {
    scan("3.6", corpus, |_, g| {
        if !g.is_two_connected() {
            return Ok((0, Vec::new()));
        }
        let mut matched = 0;
        let mut bad = Vec::new();
        for v0 in suppression_sites(g)? {
            let sup = suppress_degree2(g, v0)?;
            let h = &sup.graph;
            let old_label = |new: usize| {
                sup.relabel
                    .iter()
                    .position(|&m| m == Some(new))
                    .expect("relabel is onto the new labels")
            };
            for (a, b) in h.edges() {
                if (a, b) == sup.new_edge || (b, a) == sup.new_edge {
                    continue;
                }
                let (a0, b0) = (old_label(a), old_label(b));
                let before = kappa_adjacent(g, a0, b0)?;
                let after = kappa_adjacent(h, a, b)?;
                matched += 1;
                if after < before {
                    bad.push(format!(
                        "suppressing {v0}: edge ({a0}, {b0}) drops from {before} to {after}"
                    ));
                }
            }
        }
        Ok((matched, bad))
    })
}

/// Runs the check with the given id ("3.1" .. "3.6").
pub fn run_lemma(
    id: &str,
    corpus: &[Graph],
    samples_per_pair: usize,
    seed: u64,
) -> Result<LemmaCheckResult> {
    match id {
        "3.1" => check_lemma_coupling_bound(corpus, samples_per_pair, seed),
        "3.2" => check_lemma_pos_degree_pair(corpus),
        "3.3" => check_lemma_exterior(corpus),
        "3.4" => check_lemma_deg2(corpus),
        "3.5" => check_lemma_4face(corpus),
        "3.6" => check_suppression_monotonicity(corpus),
        _ => Err(Error::UnknownLemma { id: id.to_string() }),
    }
}

/// All six checks in order.
pub fn run_all(corpus: &[Graph], samples_per_pair: usize, seed: u64) -> Result<Vec<LemmaCheckResult>> {
    LEMMA_IDS
        .iter()
        .map(|id| run_lemma(id, corpus, samples_per_pair, seed))
        .collect()
}
