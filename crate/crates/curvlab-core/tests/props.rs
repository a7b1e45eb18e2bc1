//! Randomized structural properties, checked with proptest. Each property
//! is an invariant of the public API that must hold for every input, not a
//! frozen example.

use curvlab_core::canon::isomorphic_bruteforce;
use curvlab_core::outerplanar::OuterplanarVerdict;
use curvlab_core::transport::wasserstein1;
use curvlab_core::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

/// A graph on 1..=max_n vertices with independently sampled edges.
fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let slots = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// Connected variant: rejection sampling would bias sizes, so instead patch
/// any disconnected sample by threading a path through all vertices.
fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_map(|g| {
        if g.is_connected() {
            return g;
        }
        let mut edges = g.edges();
        for v in 1..g.n() {
            if !g.has_edge(v - 1, v) {
                edges.push((v - 1, v));
            }
        }
        Graph::from_edges(g.n(), &edges).unwrap()
    })
}

/// Fisher-Yates permutation of 0..n driven by a seed, so tests can relabel
/// a graph whose size is only known after generation.
fn seeded_perm(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut state = seed | 1;
    for i in (1..n).rev() {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        perm.swap(i, (state >> 33) as usize % (i + 1));
    }
    perm
}

/// A random polygon dissection graph, optionally with a second one glued at
/// a vertex; this keeps every sample outerplanar and connected while
/// covering both 2-connected and cut-vertex shapes.
fn arb_outerplanar() -> impl Strategy<Value = Graph> {
    let block = (3usize..=8, any::<u64>()).prop_map(|(n, seed)| {
        let mut diagonals: Vec<(usize, usize)> = Vec::new();
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 33
        };
        for a in 0..n {
            for b in (a + 2)..n {
                if (a, b) == (0, n - 1) || next() % 3 != 0 {
                    continue;
                }
                let crosses = diagonals
                    .iter()
                    .any(|&(p, q)| (p < a && a < q && q < b) || (a < p && p < b && b < q));
                if !crosses {
                    diagonals.push((a, b));
                }
            }
        }
        Dissection { n, diagonals }.to_graph()
    });
    (block.clone(), proptest::option::of(block), any::<u32>()).prop_map(|(a, b, at)| match b {
        None => a,
        Some(b) => {
            let v = at as usize % a.n();
            let mut edges = a.edges();
            let shift = |u: usize| if u == 0 { v } else { a.n() + u - 1 };
            edges.extend(b.edges().iter().map(|&(p, q)| (shift(p), shift(q))));
            Graph::from_edges(a.n() + b.n() - 1, &edges).unwrap()
        }
    })
}

/// A measure on vertex labels 0..n with the given total mass, possibly
/// concentrated on few vertices.
fn arb_measure(n: usize, total: i64) -> impl Strategy<Value = BTreeMap<usize, Rational>> {
    proptest::collection::vec(0i64..=4, n).prop_map(move |weights| {
        let sum: i64 = weights.iter().sum();
        let mut m = BTreeMap::new();
        if sum == 0 {
            m.insert(0, rational(total, 1));
        } else {
            for (v, w) in weights.into_iter().enumerate() {
                if w > 0 {
                    m.insert(v, rational(w * total, sum));
                }
            }
        }
        m
    })
}

/// Folds mass on out-of-range labels onto vertex 0 so a measure drawn for
/// the maximum size fits any smaller graph.
fn fit_measure(m: &BTreeMap<usize, Rational>, n: usize) -> BTreeMap<usize, Rational> {
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for (&v, &q) in m {
        *out.entry(if v < n { v } else { 0 })
            .or_insert_with(|| rational(0, 1)) += q;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trips(g in arb_graph(12)) {
        let code = encode_graph6(&g).unwrap();
        let back = parse_graph6(&code).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn canonical_code_is_relabeling_invariant(g in arb_graph(8), seed in any::<u64>()) {
        let h = g.permuted(&seeded_perm(g.n(), seed));
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
    }

    #[test]
    fn canonical_form_is_isomorphic_to_input(g in arb_graph(7)) {
        let (form, perm) = canonical_form(&g);
        prop_assert_eq!(&g.permuted(&perm), &form);
        prop_assert!(isomorphic_bruteforce(&g, &form));
    }

    #[test]
    fn distinct_codes_mean_nonisomorphic(g in arb_graph(6), h in arb_graph(6)) {
        if g.n() == h.n() {
            prop_assert_eq!(
                canonical_code(&g) == canonical_code(&h),
                isomorphic_bruteforce(&g, &h)
            );
        }
    }

    #[test]
    fn wasserstein_is_a_metric(
        g in arb_connected(7),
        raw_a in arb_measure(7, 12),
        raw_b in arb_measure(7, 12),
        raw_c in arb_measure(7, 12),
    ) {
        let d = bfs_distances(&g);
        let n = g.n();
        let (ma, mb, mc) = (fit_measure(&raw_a, n), fit_measure(&raw_b, n), fit_measure(&raw_c, n));
        let ab = wasserstein1(&ma, &mb, &d).unwrap();
        let bc = wasserstein1(&mb, &mc, &d).unwrap();
        let ac = wasserstein1(&ma, &mc, &d).unwrap();
        prop_assert_eq!(ab, wasserstein1(&mb, &ma, &d).unwrap());
        prop_assert_eq!(wasserstein1(&ma, &ma, &d).unwrap(), rational(0, 1));
        prop_assert!(ab >= rational(0, 1));
        prop_assert!(ac <= ab + bc);
        if ab == rational(0, 1) {
            prop_assert_eq!(&ma, &mb);
        }
    }

    #[test]
    fn wasserstein_scales_linearly(
        g in arb_connected(6),
        raw_mu in arb_measure(6, 6),
        raw_nu in arb_measure(6, 6),
        k in 1i64..=5,
    ) {
        let n = g.n();
        let (mu, nu) = (fit_measure(&raw_mu, n), fit_measure(&raw_nu, n));
        let d = bfs_distances(&g);
        let base = wasserstein1(&mu, &nu, &d).unwrap();
        let scale = |m: &BTreeMap<usize, Rational>| {
            m.iter().map(|(&v, &q)| (v, q * rational(k, 1))).collect::<BTreeMap<_, _>>()
        };
        let scaled = wasserstein1(&scale(&mu), &scale(&nu), &d).unwrap();
        prop_assert_eq!(scaled, base * rational(k, 1));
    }

    #[test]
    fn wasserstein_is_permutation_invariant(
        g in arb_connected(6),
        raw_mu in arb_measure(6, 6),
        raw_nu in arb_measure(6, 6),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let (mu, nu) = (fit_measure(&raw_mu, n), fit_measure(&raw_nu, n));
        let perm = seeded_perm(n, seed);
        let h = g.permuted(&perm);
        let push = |m: &BTreeMap<usize, Rational>| {
            m.iter().map(|(&v, &q)| (perm[v], q)).collect::<BTreeMap<_, _>>()
        };
        let before = wasserstein1(&mu, &nu, &bfs_distances(&g)).unwrap();
        let after = wasserstein1(&push(&mu), &push(&nu), &bfs_distances(&h)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn curvature_is_isomorphism_invariant(
        g in arb_connected(7),
        seed in any::<u64>(),
        xr in any::<u32>(),
        yr in any::<u32>(),
    ) {
        let n = g.n();
        if n < 2 {
            return Ok(());
        }
        let x = xr as usize % n;
        let mut y = yr as usize % n;
        if y == x {
            y = (x + 1) % n;
        }
        let perm = seeded_perm(n, seed);
        let h = g.permuted(&perm);
        prop_assert_eq!(
            kappa(&g, x, y).unwrap(),
            kappa(&h, perm[x], perm[y]).unwrap()
        );
    }

    #[test]
    fn curvature_is_symmetric(g in arb_connected(7), xr in any::<u32>(), yr in any::<u32>()) {
        let n = g.n();
        if n < 2 {
            return Ok(());
        }
        let x = xr as usize % n;
        let mut y = yr as usize % n;
        if y == x {
            y = (x + 1) % n;
        }
        prop_assert_eq!(kappa(&g, x, y).unwrap(), kappa(&g, y, x).unwrap());
    }

    #[test]
    fn lazy_measures_are_probabilities(
        g in arb_connected(7),
        xr in any::<u32>(),
        num in 0i64..=9,
    ) {
        let n = g.n();
        let x = xr as usize % n;
        let alpha = rational(num, 10);
        let m = lazy_measure(&g, x, alpha).unwrap();
        let total: Rational = m.values.values().copied().sum();
        prop_assert_eq!(total, rational(1, 1));
        prop_assert!(m.values.values().all(|&q| q >= rational(0, 1)));
        let at_center = m.values.get(&x).copied().unwrap_or_else(|| rational(0, 1));
        prop_assert!(at_center >= alpha);
    }

    #[test]
    fn residual_masses_balance_on_edges(g in arb_connected(8), pick in any::<u32>()) {
        let edges = g.edges();
        if edges.is_empty() {
            return Ok(());
        }
        let (x, y) = edges[pick as usize % edges.len()];
        let pair = mass_pair(&g, x, y).unwrap();
        let sum_x: i64 = pair.mu_x.values().sum();
        let sum_y: i64 = pair.mu_y.values().sum();
        prop_assert_eq!(sum_x, sum_y);
        // After cancellation both sides hold lcm - (1 + #common) * c_y.
        let (dx, dy) = (g.degree(pair.x) as i64, g.degree(pair.y) as i64);
        let commons = g.common_neighbors(pair.x, pair.y).len() as i64;
        prop_assert_eq!(sum_y, (dy - 1 - commons) * pair.c_y);
        prop_assert_eq!(pair.lcm, dx * pair.c_x);
        prop_assert_eq!(pair.lcm, dy * pair.c_y);
        prop_assert!(dx <= dy);
    }

    #[test]
    fn face_incidences_cover_edges_twice(g in arb_outerplanar()) {
        match is_outerplanar(&g).unwrap() {
            OuterplanarVerdict::Outerplanar(emb) => {
                let inner: usize = emb.inner_faces.iter().map(|f| f.len()).sum();
                prop_assert_eq!(inner + emb.outer_walk.len(), 2 * g.edge_count());
                // Euler: a connected plane graph has |E| - |V| + 1 bounded faces.
                prop_assert_eq!(emb.inner_faces.len(), g.edge_count() + 1 - g.n());
            }
            OuterplanarVerdict::NotOuterplanar(_) => prop_assert!(false, "generator leaked"),
        }
    }

    #[test]
    fn suppression_keeps_outerplanarity(g in arb_outerplanar()) {
        for site in suppression_sites(&g).unwrap() {
            let sup = suppress_degree2(&g, site).unwrap();
            prop_assert_eq!(sup.graph.n(), g.n() - 1);
            prop_assert!(matches!(
                is_outerplanar(&sup.graph).unwrap(),
                OuterplanarVerdict::Outerplanar(_)
            ));
        }
    }
}
