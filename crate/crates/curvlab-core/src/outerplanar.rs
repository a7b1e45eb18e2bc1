//! Outerplanar recognition, embeddings, faces, and the degree-2 suppression
//! move.
//!
//! Recognition is constructive: split into 2-connected blocks, find for each
//! block a Hamiltonian cycle whose remaining edges are pairwise non-crossing
//! chords (for a 2-connected outerplanar graph that cycle is exactly the
//! outer boundary), then stitch the block boundaries into the outer walk of
//! the whole graph through the cut vertices. On failure a K4 or K2,3
//! subdivision is produced as the rejection witness; both obstructions have
//! maximum degree 3, so subdivisions and minors coincide here.

use crate::error::Error;
use crate::graph::Graph;
use crate::rational::{rational, Rational};
use crate::Result;

/// Combinatorial outerplanar embedding. The outer walk is a closed walk
/// (first vertex not repeated at the end) visiting every vertex, with cut
/// vertices and bridges repeated as the boundary requires; face sizes count
/// edges, so the outer face has size `outer_walk.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterEmbedding {
    pub n: usize,
    pub outer_walk: Vec<usize>,
    /// Interior edges, as sorted pairs.
    pub chords: Vec<(usize, usize)>,
    /// Bounded faces, each a cycle listed from its smallest vertex.
    pub inner_faces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorKind {
    K4,
    K23,
}

/// A topological K4 or K2,3 witnessing non-outerplanarity: branch vertices
/// plus internally disjoint paths (with endpoints) realizing each edge of
/// the obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenMinor {
    pub kind: MinorKind,
    pub branch_vertices: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OuterplanarVerdict {
    Outerplanar(OuterEmbedding),
    NotOuterplanar(ForbiddenMinor),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Exterior,
    Interior,
}

/// Face sizes seen from each vertex. The outer face appears exactly once
/// per vertex even where the boundary walk revisits a cut vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceProfile {
    pub outer_size: usize,
    /// sizes[v]: all face sizes at v (outer included once), ascending.
    pub sizes: Vec<Vec<usize>>,
}

/// Result of suppressing a degree-2 vertex on a quadrilateral face:
/// the smaller graph, the old-to-new vertex map (None at the removed
/// vertex), and the replacement edge in new labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suppression {
    pub graph: Graph,
    pub relabel: Vec<Option<usize>>,
    pub new_edge: (usize, usize),
}

// ----- block decomposition -----

fn block_edge_lists(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    struct State<'a> {
        g: &'a Graph,
        num: Vec<usize>,
        low: Vec<usize>,
        counter: usize,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<(usize, usize)>>,
    }
    fn dfs(st: &mut State, u: usize, parent: Option<usize>) {
        st.counter += 1;
        st.num[u] = st.counter;
        st.low[u] = st.counter;
        for &v in st.g.neighbors(u) {
            if Some(v) == parent {
                continue;
            }
            if st.num[v] == 0 {
                st.stack.push((u, v));
                dfs(st, v, Some(u));
                st.low[u] = st.low[u].min(st.low[v]);
                if st.low[v] >= st.num[u] {
                    let mut blk = Vec::new();
                    loop {
                        let e = st.stack.pop().expect("tree edge still on stack");
                        blk.push(e);
                        if e == (u, v) {
                            break;
                        }
                    }
                    st.blocks.push(blk);
                }
            } else if st.num[v] < st.num[u] {
                st.stack.push((u, v));
                st.low[u] = st.low[u].min(st.num[v]);
            }
        }
    }
    let mut st = State {
        g,
        num: vec![0; g.n()],
        low: vec![0; g.n()],
        counter: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    dfs(&mut st, 0, None);
    st.blocks
}

// ----- per-block boundary search -----

fn chords_noncrossing(sub: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    let mut pos = vec![0usize; k];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i;
    }
    let mut chords = Vec::new();
    for (u, v) in sub.edges() {
        let (p, q) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
        if q - p != 1 && (p, q) != (0, k - 1) {
            chords.push((p, q));
        }
    }
    for (i, &(p1, q1)) in chords.iter().enumerate() {
        for &(p2, q2) in &chords[i + 1..] {
            let interleaved = (p1 < p2 && p2 < q1 && q1 < q2) || (p2 < p1 && p1 < q2 && q2 < q1);
            if interleaved {
                return false;
            }
        }
    }
    true
}

/// First Hamiltonian cycle of the (local-labelled) block whose chords are
/// pairwise non-crossing; None means the block is not outerplanar.
fn block_boundary(sub: &Graph) -> Option<Vec<usize>> {
    let k = sub.n();
    fn search(sub: &Graph, path: &mut Vec<usize>, used: &mut u64) -> Option<Vec<usize>> {
        let k = sub.n();
        if path.len() == k {
            let last = *path.last().unwrap();
            if sub.has_edge(last, 0) && path[1] < path[k - 1] && chords_noncrossing(sub, path) {
                return Some(path.clone());
            }
            return None;
        }
        let u = *path.last().unwrap();
        for &v in sub.neighbors(u) {
            if *used >> v & 1 == 0 {
                path.push(v);
                *used |= 1 << v;
                if let Some(c) = search(sub, path, used) {
                    return Some(c);
                }
                path.pop();
                *used &= !(1 << v);
            }
        }
        None
    }
    if k == 3 {
        // A 2-connected block on 3 vertices is a triangle.
        return Some(vec![0, 1, 2]);
    }
    search(sub, &mut vec![0], &mut 1u64)
}

/// Faces of one block embedded with its boundary cycle on a circle: trace
/// orbits of the dart permutation next(u -> v) = (v -> w) with w the cyclic
/// predecessor of u in the rotation at v. The orbit walking the boundary
/// backwards is the block's outer face; the rest bound inner faces.
fn block_inner_faces(sub: &Graph, cycle: &[usize]) -> Vec<Vec<usize>> {
    let k = cycle.len();
    let mut pos = vec![0usize; k];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i;
    }
    let mut rot = vec![Vec::new(); k];
    for v in 0..k {
        let mut nb: Vec<usize> = sub.neighbors(v).to_vec();
        nb.sort_by_key(|&q| (pos[q] + k - pos[v]) % k);
        rot[v] = nb;
    }
    let next = |u: usize, v: usize| -> (usize, usize) {
        let r = &rot[v];
        let i = r.iter().position(|&w| w == u).expect("dart endpoint adjacency");
        (v, r[(i + r.len() - 1) % r.len()])
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut faces = Vec::new();
    for u in 0..k {
        for &v in sub.neighbors(u) {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut orbit = Vec::new();
            let (mut a, mut b) = (u, v);
            loop {
                orbit.push(a);
                seen.insert((a, b));
                let (na, nb) = next(a, b);
                a = na;
                b = nb;
                if (a, b) == (u, v) {
                    break;
                }
            }
            faces.push(orbit);
        }
    }
    // Drop the orbit that traverses the boundary in reverse: it contains the
    // dart (cycle[1] -> cycle[0]).
    let mut inner = Vec::new();
    for f in faces {
        let is_outer = f.len() == k
            && (0..f.len()).any(|i| {
                f[i] == cycle[1] && f[(i + 1) % f.len()] == cycle[0]
            })
            && {
                // Walking backwards along the cycle the whole way round.
                let start = f.iter().position(|&v| v == cycle[0]).unwrap();
                (0..k).all(|j| f[(start + j) % k] == cycle[(k - j) % k])
            };
        if !is_outer {
            inner.push(f);
        }
    }
    inner
}

fn rotate_to_min(face: &[usize]) -> Vec<usize> {
    let start = face
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    (0..face.len()).map(|j| face[(start + j) % face.len()]).collect()
}

// ----- whole-graph recognition -----

/// Recognizes outerplanarity and returns either an embedding or a
/// forbidden-subdivision witness. The graph must be connected.
pub fn is_outerplanar(g: &Graph) -> Result<OuterplanarVerdict> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    if n == 1 {
        return Ok(OuterplanarVerdict::Outerplanar(OuterEmbedding {
            n,
            outer_walk: vec![0],
            chords: Vec::new(),
            inner_faces: Vec::new(),
        }));
    }
    // Outerplanar graphs have at most 2n - 3 edges; denser graphs go
    // straight to the witness search.
    if n >= 2 && g.edge_count() > 2 * n - 3 {
        return not_outerplanar(g);
    }

    let blocks = block_edge_lists(g);
    let mut boundaries: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let mut inner_faces: Vec<Vec<usize>> = Vec::new();
    for blk in &blocks {
        let mut verts: Vec<usize> = blk.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() == 2 {
            boundaries.push(verts);
            continue;
        }
        if blk.len() > 2 * verts.len() - 3 {
            return not_outerplanar(g);
        }
        let local: std::collections::BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let local_edges: Vec<(usize, usize)> =
            blk.iter().map(|&(a, b)| (local[&a], local[&b])).collect();
        let sub = Graph::from_edges(verts.len(), &local_edges)?;
        let cycle = match block_boundary(&sub) {
            Some(c) => c,
            None => return not_outerplanar(g),
        };
        for face in block_inner_faces(&sub, &cycle) {
            inner_faces.push(rotate_to_min(
                &face.iter().map(|&v| verts[v]).collect::<Vec<_>>(),
            ));
        }
        let on_cycle = |a: usize, b: usize| {
            let k = cycle.len();
            let mut pos = vec![0usize; k];
            for (i, &v) in cycle.iter().enumerate() {
                pos[v] = i;
            }
            let (p, q) = (pos[a].min(pos[b]), pos[a].max(pos[b]));
            q - p == 1 || (p, q) == (0, k - 1)
        };
        for &(a, b) in &local_edges {
            if !on_cycle(a, b) {
                let (ga, gb) = (verts[a], verts[b]);
                chords.push((ga.min(gb), ga.max(gb)));
            }
        }
        boundaries.push(cycle.into_iter().map(|v| verts[v]).collect());
    }

    // Stitch block boundaries into one outer walk through the cut vertices.
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, b) in boundaries.iter().enumerate() {
        for &v in b {
            at[v].push(i);
        }
    }
    let mut visited = vec![false; boundaries.len()];
    let mut walk = vec![0usize];
    fn emit(
        block: usize,
        enter: usize,
        boundaries: &[Vec<usize>],
        at: &[Vec<usize>],
        visited: &mut [bool],
        walk: &mut Vec<usize>,
    ) {
        let b = &boundaries[block];
        let start = b.iter().position(|&v| v == enter).expect("entry on boundary");
        for i in 1..=b.len() {
            let v = b[(start + i) % b.len()];
            walk.push(v);
            for &nb in &at[v] {
                if !visited[nb] {
                    visited[nb] = true;
                    emit(nb, v, boundaries, at, visited, walk);
                }
            }
        }
    }
    for &b0 in &at[0] {
        if !visited[b0] {
            visited[b0] = true;
            emit(b0, 0, &boundaries, &at, &mut visited, &mut walk);
        }
    }
    walk.pop();

    chords.sort_unstable();
    inner_faces.sort();
    Ok(OuterplanarVerdict::Outerplanar(OuterEmbedding {
        n,
        outer_walk: walk,
        chords,
        inner_faces,
    }))
}

fn not_outerplanar(g: &Graph) -> Result<OuterplanarVerdict> {
    match find_forbidden(g) {
        Some(w) => Ok(OuterplanarVerdict::NotOuterplanar(w)),
        None => Err(Error::Internal(
            "recognizer rejected a graph with no K4/K2,3 subdivision".to_string(),
        )),
    }
}

/// The embedding, or `NotOuterplanar` as an error.
pub fn embed_outerplanar(g: &Graph) -> Result<OuterEmbedding> {
    match is_outerplanar(g)? {
        OuterplanarVerdict::Outerplanar(emb) => Ok(emb),
        OuterplanarVerdict::NotOuterplanar(_) => Err(Error::NotOuterplanar),
    }
}

// ----- witness search -----

/// Enumerates simple s-t paths with internal vertices avoiding `blocked`,
/// shortest labels first, handing each to `accept` until it returns true.
fn try_paths(
    g: &Graph,
    s: usize,
    t: usize,
    blocked: u64,
    min_edges: usize,
    accept: &mut dyn FnMut(&[usize], u64) -> bool,
) -> bool {
    fn dfs(
        g: &Graph,
        t: usize,
        min_edges: usize,
        path: &mut Vec<usize>,
        used: u64,
        blocked: u64,
        accept: &mut dyn FnMut(&[usize], u64) -> bool,
    ) -> bool {
        let u = *path.last().unwrap();
        for &v in g.neighbors(u) {
            if v == t {
                if path.len() >= min_edges && accept(path, used & !(1 << path[0])) {
                    return true;
                }
                continue;
            }
            if (used | blocked) >> v & 1 == 1 {
                continue;
            }
            path.push(v);
            if dfs(g, t, min_edges, path, used | 1 << v, blocked, accept) {
                return true;
            }
            path.pop();
        }
        false
    }
    let blocked = blocked & !(1 << s) & !(1 << t);
    dfs(g, t, min_edges, &mut vec![s], 1 << s, blocked, &mut |path, internals| {
        let mut full = path.to_vec();
        full.push(t);
        accept(&full, internals)
    })
}

fn link_paths(
    g: &Graph,
    pairs: &[(usize, usize)],
    branch: u64,
    min_edges: usize,
    taken: u64,
    acc: &mut Vec<Vec<usize>>,
) -> bool {
    if acc.len() == pairs.len() {
        return true;
    }
    let (s, t) = pairs[acc.len()];
    let blocked = branch | taken;
    let mut found = false;
    try_paths(g, s, t, blocked, min_edges, &mut |full, internals| {
        acc.push(full.to_vec());
        if link_paths(g, pairs, branch, min_edges, taken | internals, acc) {
            found = true;
            return true;
        }
        acc.pop();
        false
    });
    found
}

/// Brute-force search for a K4 or K2,3 subdivision; K4 is preferred.
pub fn find_forbidden(g: &Graph) -> Option<ForbiddenMinor> {
    let n = g.n();
    // K4: four branch vertices joined by six internally disjoint paths.
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for dv in c + 1..n {
                    let branch = 1u64 << a | 1 << b | 1 << c | 1 << dv;
                    let pairs = [(a, b), (a, c), (a, dv), (b, c), (b, dv), (c, dv)];
                    let mut paths = Vec::new();
                    if link_paths(g, &pairs, branch, 1, 0, &mut paths) {
                        return Some(ForbiddenMinor {
                            kind: MinorKind::K4,
                            branch_vertices: vec![a, b, c, dv],
                            paths,
                        });
                    }
                }
            }
        }
    }
    // K2,3: two poles joined by three internally disjoint paths, each with
    // at least one interior vertex.
    for a in 0..n {
        for b in a + 1..n {
            let branch = 1u64 << a | 1 << b;
            let pairs = [(a, b), (a, b), (a, b)];
            let mut paths = Vec::new();
            if link_paths(g, &pairs, branch, 2, 0, &mut paths) {
                return Some(ForbiddenMinor {
                    kind: MinorKind::K23,
                    branch_vertices: vec![a, b],
                    paths,
                });
            }
        }
    }
    None
}

// ----- faces, curvature, and edge classes -----

/// Edge set of an embedding: outer-walk successors plus chords.
fn embedded_edges(emb: &OuterEmbedding) -> std::collections::BTreeSet<(usize, usize)> {
    let mut edges = std::collections::BTreeSet::new();
    let w = &emb.outer_walk;
    if w.len() >= 2 {
        for i in 0..w.len() {
            let (a, b) = (w[i], w[(i + 1) % w.len()]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    edges.extend(emb.chords.iter().copied());
    edges
}

/// Exterior (on the outer walk) or interior (a chord).
pub fn classify_edge(emb: &OuterEmbedding, u: usize, v: usize) -> Result<EdgeClass> {
    let key = (u.min(v), u.max(v));
    if emb.chords.binary_search(&key).is_ok() {
        return Ok(EdgeClass::Interior);
    }
    if embedded_edges(emb).contains(&key) {
        return Ok(EdgeClass::Exterior);
    }
    Err(Error::NotAnEmbeddedEdge { u, v })
}

/// Face sizes at each vertex; the outer face is counted once per vertex.
pub fn face_profile(emb: &OuterEmbedding) -> FaceProfile {
    let outer_size = if emb.n == 1 { 0 } else { emb.outer_walk.len() };
    let mut sizes: Vec<Vec<usize>> = vec![Vec::new(); emb.n];
    for face in &emb.inner_faces {
        for &v in face {
            sizes[v].push(face.len());
        }
    }
    for v in 0..emb.n {
        if emb.n > 1 {
            sizes[v].push(outer_size);
        }
        sizes[v].sort_unstable();
    }
    FaceProfile { outer_size, sizes }
}

/// Combinatorial curvature 1 - d(v)/2 + sum over faces at v of 1/size.
pub fn combinatorial_curvature(g: &Graph, profile: &FaceProfile, v: usize) -> Result<Rational> {
    g.check_vertex(v)?;
    let mut phi = rational(1, 1) - rational(g.degree(v) as i64, 2);
    for &s in &profile.sizes[v] {
        phi += rational(1, s as i64);
    }
    Ok(phi)
}

// ----- suppression -----

/// Suppresses a degree-2 vertex v0 lying on an inner quadrilateral face
/// v0 v1 v2 v3 with v1 v3 not adjacent: removes v0 and joins v1 v3.
pub fn suppress_degree2(g: &Graph, v0: usize) -> Result<Suppression> {
    g.check_vertex(v0)?;
    if g.degree(v0) != 2 {
        return Err(Error::SuppressNotDegreeTwo { v: v0, degree: g.degree(v0) });
    }
    let emb = embed_outerplanar(g)?;
    // A degree-2 vertex lies on at most one inner face.
    let quad = emb
        .inner_faces
        .iter()
        .find(|f| f.contains(&v0))
        .filter(|f| f.len() == 4)
        .ok_or(Error::SuppressNoQuadFace { v: v0 })?;
    let i = quad.iter().position(|&v| v == v0).unwrap();
    let v1 = quad[(i + 1) % 4];
    let v2 = quad[(i + 2) % 4];
    let v3 = quad[(i + 3) % 4];
    debug_assert!(g.has_edge(v0, v1) && g.has_edge(v0, v3) && g.has_edge(v1, v2));
    if g.has_edge(v1, v3) {
        return Err(Error::SuppressChordPresent { a: v1.min(v3), b: v1.max(v3) });
    }
    let relabel: Vec<Option<usize>> = (0..g.n())
        .map(|v| match v.cmp(&v0) {
            std::cmp::Ordering::Less => Some(v),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(v - 1),
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| a != v0 && b != v0)
        .map(|(a, b)| (relabel[a].unwrap(), relabel[b].unwrap()))
        .collect();
    let new_edge = {
        let (a, b) = (relabel[v1].unwrap(), relabel[v3].unwrap());
        (a.min(b), a.max(b))
    };
    edges.push(new_edge);
    Ok(Suppression {
        graph: Graph::from_edges(g.n() - 1, &edges)?,
        relabel,
        new_edge,
    })
}

/// Vertices where `suppress_degree2` applies.
pub fn suppression_sites(g: &Graph) -> Result<Vec<usize>> {
    let emb = embed_outerplanar(g)?;
    let mut sites = Vec::new();
    for v0 in 0..g.n() {
        if g.degree(v0) != 2 {
            continue;
        }
        let quad = emb
            .inner_faces
            .iter()
            .find(|f| f.contains(&v0))
            .filter(|f| f.len() == 4);
        if let Some(q) = quad {
            let i = q.iter().position(|&v| v == v0).unwrap();
            let (v1, v3) = (q[(i + 1) % 4], q[(i + 3) % 4]);
            if !g.has_edge(v1, v3) {
                sites.push(v0);
            }
        }
    }
    Ok(sites)
}

/// 2-connected with every inner face a triangle (a polygon triangulation).
pub fn is_maximal_outerplanar(g: &Graph) -> Result<bool> {
    let emb = embed_outerplanar(g)?;
    if g.n() < 3 || !g.is_two_connected() {
        return Ok(false);
    }
    Ok(emb.inner_faces.iter().all(|f| f.len() == 3))
}
