//! Exhaustive generation of small outerplanar graphs and the positive-
//! curvature classification built on top of it.
//!
//! 2-connected outerplanar graphs on n vertices are exactly the polygon
//! dissections: an n-cycle plus pairwise non-crossing diagonals. Because the
//! boundary cycle of a 2-connected outerplanar graph is its unique
//! Hamiltonian cycle, two dissections give isomorphic graphs iff their
//! diagonal sets agree up to the dihedral symmetry of the polygon; the
//! dihedral reduction is therefore an exact prefilter, with canonical codes
//! as the authoritative dedup. Graphs of minimum degree >= 2 are grown by
//! gluing blocks (dissection graphs and single edges) at cut vertices.

use crate::canon::{canonical_code, canonical_form, CanonicalCode};
use crate::curvature::{is_positively_curved, kappa_adjacent};
use crate::error::Error;
use crate::graph::{encode_graph6, Graph};
use crate::rational::Rational;
use crate::Result;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

pub const MAX_TWO_CONNECTED_ORDER: usize = 12;
pub const MAX_CORPUS_ORDER: usize = 11;

/// A polygon dissection: the n-cycle 0..n-1 plus non-crossing diagonals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dissection {
    pub n: usize,
    pub diagonals: Vec<(usize, usize)>,
}

impl Dissection {
    pub fn to_graph(&self) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..self.n).map(|i| (i, (i + 1) % self.n)).collect();
        edges.extend_from_slice(&self.diagonals);
        Graph::from_edges(self.n, &edges).expect("dissection edges are valid")
    }
}

fn diagonals_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let ((p1, q1), (p2, q2)) = (a, b);
    (p1 < p2 && p2 < q1 && q1 < q2) || (p2 < p1 && p1 < q2 && q2 < q1)
}

/// Runs `f` on the diagonal set of every dissection of the n-gon (the empty
/// set included).
fn for_each_dissection(n: usize, f: &mut impl FnMut(&[(usize, usize)])) {
    let mut all: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 2..n {
            if (a, b) != (0, n - 1) {
                all.push((a, b));
            }
        }
    }
    fn rec(
        all: &[(usize, usize)],
        i: usize,
        chosen: &mut Vec<(usize, usize)>,
        f: &mut impl FnMut(&[(usize, usize)]),
    ) {
        if i == all.len() {
            f(chosen);
            return;
        }
        rec(all, i + 1, chosen, f);
        if chosen.iter().all(|&c| !diagonals_cross(c, all[i])) {
            chosen.push(all[i]);
            rec(all, i + 1, chosen, f);
            chosen.pop();
        }
    }
    rec(&all, 0, &mut Vec::new(), f);
}

/// Minimal image of a diagonal set under the dihedral group of the n-gon.
fn dihedral_min(n: usize, diagonals: &[(usize, usize)]) -> Vec<(u8, u8)> {
    let mut best: Option<Vec<(u8, u8)>> = None;
    for reflect in [false, true] {
        for shift in 0..n {
            let mut image: Vec<(u8, u8)> = diagonals
                .iter()
                .map(|&(a, b)| {
                    let t = |v: usize| {
                        let v = if reflect { n - 1 - v } else { v };
                        ((v + shift) % n) as u8
                    };
                    let (x, y) = (t(a), t(b));
                    (x.min(y), x.max(y))
                })
                .collect();
            image.sort_unstable();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.unwrap_or_default()
}

fn check_order(n: usize, hi: usize) -> Result<()> {
    if (3..=hi).contains(&n) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange { n, lo: 3, hi })
    }
}

fn dissection_reps(n: usize) -> Vec<Dissection> {
    let mut seen: HashSet<Vec<(u8, u8)>> = HashSet::new();
    let mut reps = Vec::new();
    for_each_dissection(n, &mut |diags| {
        let key = dihedral_min(n, diags);
        if seen.insert(key.clone()) {
            reps.push(Dissection {
                n,
                diagonals: key.iter().map(|&(a, b)| (a as usize, b as usize)).collect(),
            });
        }
    });
    reps
}

fn canonical_sorted(graphs: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let mut by_code: BTreeMap<CanonicalCode, Graph> = BTreeMap::new();
    for g in graphs {
        let (h, _) = canonical_form(&g);
        by_code.entry(canonical_code(&h)).or_insert(h);
    }
    by_code.into_values().collect()
}

/// All 2-connected outerplanar graphs on n vertices, one canonical form per
/// isomorphism class, sorted by canonical code.
pub fn enumerate_2connected_outerplanar(n: usize) -> Result<Vec<Graph>> {
    check_order(n, MAX_TWO_CONNECTED_ORDER)?;
    Ok(canonical_sorted(dissection_reps(n).iter().map(Dissection::to_graph)))
}

/// Maximal outerplanar graphs (polygon triangulations): the dissections
/// with exactly n - 3 diagonals.
pub fn enumerate_maximal_outerplanar(n: usize) -> Result<Vec<Graph>> {
    check_order(n, MAX_TWO_CONNECTED_ORDER)?;
    Ok(canonical_sorted(
        dissection_reps(n)
            .iter()
            .filter(|d| d.diagonals.len() == n - 3)
            .map(Dissection::to_graph),
    ))
}

// ----- block gluing -----

/// One vertex per automorphism orbit of `b`, found by marking each vertex
/// with a pendant and comparing canonical codes.
fn attachment_reps(b: &Graph) -> Vec<usize> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for w in 0..b.n() {
        let mut edges = b.edges();
        edges.push((w, b.n()));
        let marked = Graph::from_edges(b.n() + 1, &edges).expect("pendant marking");
        if seen.insert(canonical_code(&marked)) {
            reps.push(w);
        }
    }
    reps
}

/// Glues block `b` onto `g`, identifying b's vertex `w` with g's vertex `v`.
fn glue(g: &Graph, v: usize, b: &Graph, w: usize) -> Graph {
    let mut edges = g.edges();
    let map = |u: usize| {
        if u == w {
            v
        } else if u < w {
            g.n() + u
        } else {
            g.n() + u - 1
        }
    };
    edges.extend(b.edges().iter().map(|&(a, c)| (map(a), map(c))));
    Graph::from_edges(g.n() + b.n() - 1, &edges).expect("glued graph")
}

fn degree_one_count(g: &Graph) -> usize {
    (0..g.n()).filter(|&v| g.degree(v) == 1).count()
}

/// Connected graphs whose blocks are outerplanar, grown breadth-first by
/// vertex count. Every degree-1 vertex still needs a future branch ending
/// in a cycle block (two extra vertices at least), which is the pruning
/// rule; minimum degree 2 is enforced at readout.
fn glued_levels(n_max: usize) -> Result<Vec<BTreeMap<CanonicalCode, Graph>>> {
    let mut block_sizes: Vec<Vec<(Graph, Vec<usize>)>> = vec![Vec::new(); n_max + 1];
    if n_max >= 2 {
        let k2 = Graph::from_edges(2, &[(0, 1)])?;
        block_sizes[2].push((k2.clone(), attachment_reps(&k2)));
    }
    for k in 3..=n_max {
        for b in enumerate_2connected_outerplanar(k)? {
            let reps = attachment_reps(&b);
            block_sizes[k].push((b, reps));
        }
    }
    let fits = |g: &Graph| g.n() + 2 * degree_one_count(g) <= n_max;
    let mut levels: Vec<BTreeMap<CanonicalCode, Graph>> = vec![BTreeMap::new(); n_max + 1];
    for k in 2..=n_max {
        for (b, _) in &block_sizes[k] {
            if fits(b) {
                levels[k].insert(canonical_code(b), b.clone());
            }
        }
    }
    for m in 2..=n_max {
        let states: Vec<Graph> = levels[m].values().cloned().collect();
        for g in &states {
            for k in 2..=n_max {
                if m + k - 1 > n_max {
                    break;
                }
                for (b, reps) in &block_sizes[k] {
                    for v in 0..g.n() {
                        for &w in reps {
                            let h = glue(g, v, b, w);
                            if !fits(&h) {
                                continue;
                            }
                            let (canon, _) = canonical_form(&h);
                            levels[h.n()].entry(canonical_code(&canon)).or_insert(canon);
                        }
                    }
                }
            }
        }
    }
    Ok(levels)
}

pub(crate) fn min_deg2_levels(n_max: usize) -> Result<Vec<Vec<Graph>>> {
    let levels = glued_levels(n_max)?;
    Ok(levels
        .into_iter()
        .map(|lvl| lvl.into_values().filter(|g| g.min_degree() >= 2).collect())
        .collect())
}

/// Connected outerplanar graphs with minimum degree >= 2 on n vertices,
/// canonical forms sorted by code.
pub fn enumerate_outerplanar_min_deg2(n: usize) -> Result<Vec<Graph>> {
    check_order(n, MAX_CORPUS_ORDER)?;
    Ok(min_deg2_levels(n)?.swap_remove(n))
}

// ----- classification -----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeKappa {
    pub u: usize,
    pub v: usize,
    #[serde(with = "crate::rational::rational_string")]
    pub kappa: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedGraph {
    pub n: usize,
    pub graph6: String,
    pub edges: Vec<EdgeKappa>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n_max: usize,
    pub total: usize,
    pub graphs: Vec<ClassifiedGraph>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifyScope {
    /// Connected outerplanar, minimum degree >= 2.
    MinDegreeTwo,
    TwoConnected,
    MaximalOuterplanar,
}

fn corpus_for(n: usize, scope: ClassifyScope) -> Result<Vec<Graph>> {
    match scope {
        ClassifyScope::MinDegreeTwo => enumerate_outerplanar_min_deg2(n),
        ClassifyScope::TwoConnected => enumerate_2connected_outerplanar(n),
        ClassifyScope::MaximalOuterplanar => enumerate_maximal_outerplanar(n),
    }
}

/// Curvature labels for all edges, or None as soon as one is non-positive.
fn positive_edge_labels(g: &Graph) -> Result<Option<Vec<EdgeKappa>>> {
    let mut labels = Vec::new();
    for (u, v) in g.edges() {
        let kappa = kappa_adjacent(g, u, v)?;
        if kappa <= Rational::zero() {
            return Ok(None);
        }
        labels.push(EdgeKappa { u, v, kappa });
    }
    Ok(Some(labels))
}

fn classify_one(g: &Graph) -> Result<Option<ClassifiedGraph>> {
    // Cheap edge prescan first; survivors get the full all-pairs check.
    let labels = match positive_edge_labels(g)? {
        Some(l) => l,
        None => return Ok(None),
    };
    if !is_positively_curved(g)?.positively_curved {
        return Ok(None);
    }
    Ok(Some(ClassifiedGraph {
        n: g.n(),
        graph6: encode_graph6(g)?,
        edges: labels,
    }))
}

/// Every positively curved graph in the chosen corpus up to `n_max`
/// vertices, with exact curvature labels on all edges. Graphs are listed by
/// (order, canonical code).
pub fn classify_positively_curved(
    n_max: usize,
    scope: ClassifyScope,
) -> Result<ClassificationReport> {
    check_order(n_max, MAX_CORPUS_ORDER)?;
    let mut corpus: Vec<Graph> = Vec::new();
    match scope {
        ClassifyScope::MinDegreeTwo => {
            for level in min_deg2_levels(n_max)?.into_iter().skip(3) {
                corpus.extend(level);
            }
        }
        _ => {
            for n in 3..=n_max {
                corpus.extend(corpus_for(n, scope)?);
            }
        }
    }
    let mut graphs: Vec<ClassifiedGraph> = corpus
        .par_iter()
        .map(classify_one)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    graphs.sort_by(|a, b| (a.n, &a.graph6).cmp(&(b.n, &b.graph6)));
    Ok(ClassificationReport { n_max, total: graphs.len(), graphs })
}

/// The 8-vertex witness that the classification is not confined to n <= 7:
/// a central 4-cycle with an apex over each central edge. Its outer cycle
/// alternates central and apex vertices; the central edges are chords.
pub fn find_g8() -> Graph {
    Graph::from_edges(
        8,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (0, 4),
            (1, 4),
            (1, 5),
            (2, 5),
            (2, 6),
            (3, 6),
            (3, 7),
            (0, 7),
        ],
    )
    .expect("fixed witness graph")
}

/// Positively curved members among polygon triangulations up to `n_max`.
pub fn classify_maximal_outerplanar(n_max: usize) -> Result<ClassificationReport> {
    classify_positively_curved(n_max, ClassifyScope::MaximalOuterplanar)
}

/// The induction base case: no 2-connected outerplanar graph on 11
/// vertices is positively curved.
pub fn verify_base_case_11() -> Result<bool> {
    let eleven = enumerate_2connected_outerplanar(11)?;
    let flat = eleven
        .par_iter()
        .map(|g| classify_one(g).map(|r| r.is_none()))
        .collect::<Result<Vec<bool>>>()?;
    Ok(flat.into_iter().all(|x| x))
}
