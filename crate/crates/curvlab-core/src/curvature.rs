//! Lin-Lu-Yau curvature, computed exactly by three mutually checking routes:
//!
//! 1. `kappa_adjacent`: the residual-mass reduction for an edge xy. After
//!    scaling by lcm(d(x), d(y)) and cancelling the mass that never moves,
//!    kappa(x, y) = 1 + 1/d(y) - min_sigma C(sigma) / lcm with d(x) <= d(y),
//!    where sigma ranges over integer couplings of the residual masses and
//!    C(sigma) is the transport cost at shortest-path distances.
//! 2. `kappa_lipschitz`: the dual form. kappa(x, y) is the minimum of
//!    (Laplacian f(x) - Laplacian f(y)) / d(x, y) over integer 1-Lipschitz
//!    potentials f with f(x) = 0, f(y) = d(x, y); only values on
//!    N[x] u N[y] matter, and an integral optimum always exists.
//! 3. `kappa_limit_check`: the defining limit of the lazy random-walk
//!    curvature kappa_alpha / (1 - alpha), evaluated at two idleness values
//!    inside the final linear segment and checked for plateau agreement.
//!
//! Any disagreement between routes is a hard error, never a warning.

use crate::error::Error;
use crate::graph::{bfs_distances, DistanceMatrix, Graph};
use crate::rational::{rational, Rational};
use crate::transport::{
    solve_transportation, wasserstein1, IntegerCoupling, TransportInstance,
};
use crate::Result;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// The alpha-lazy random walk step distribution from `center`: mass `alpha`
/// stays put, the rest spreads uniformly over the neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyMeasure {
    pub center: usize,
    pub alpha: Rational,
    pub values: BTreeMap<usize, Rational>,
}

pub fn lazy_measure(g: &Graph, x: usize, alpha: Rational) -> Result<LazyMeasure> {
    g.check_vertex(x)?;
    if alpha < Rational::zero() || alpha >= rational(1, 1) {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    let mut values = BTreeMap::new();
    if alpha != Rational::zero() {
        values.insert(x, alpha);
    }
    let d = g.degree(x);
    if d > 0 {
        let share = (rational(1, 1) - alpha) / Rational::from_integer(d as i64);
        for &v in g.neighbors(x) {
            values.insert(v, share);
        }
    } else if alpha != rational(1, 1) {
        // Isolated vertex: the walk cannot move.
        values.insert(x, rational(1, 1));
    }
    Ok(LazyMeasure { center: x, alpha, values })
}

/// Residual masses of the pair (x, y) after scaling both non-lazy walk
/// measures by lcm(d(x), d(y)) and cancelling what transports for free.
/// Oriented so that d(x) <= d(y); `swapped` records whether the input pair
/// was turned around. Meaningful for adjacent pairs (the consumers below
/// insist on adjacency); the degenerate equal-degree non-adjacent case
/// cancels to empty measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassPair {
    pub x: usize,
    pub y: usize,
    pub swapped: bool,
    pub lcm: i64,
    pub c_x: i64,
    pub c_y: i64,
    pub mu_x: BTreeMap<usize, i64>,
    pub mu_y: BTreeMap<usize, i64>,
}

pub fn mass_pair(g: &Graph, x: usize, y: usize) -> Result<MassPair> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::NotAPair { x, y });
    }
    let swapped = g.degree(x) > g.degree(y);
    let (x, y) = if swapped { (y, x) } else { (x, y) };
    let (dx, dy) = (g.degree(x) as i64, g.degree(y) as i64);
    let lcm = dx.lcm(&dy);
    let c_x = lcm / dx;
    let c_y = lcm / dy;
    let mut mu_x = BTreeMap::new();
    let mut mu_y = BTreeMap::new();
    let common = g.row(x) & g.row(y);
    for u in 0..g.n() {
        let mass = if u == y || common >> u & 1 == 1 {
            c_x - c_y
        } else if g.has_edge(x, u) && !g.has_edge(y, u) && u != y {
            c_x
        } else {
            0
        };
        if mass != 0 {
            mu_x.insert(u, mass);
        }
        if g.has_edge(y, u) && !g.has_edge(x, u) && u != x {
            mu_y.insert(u, c_y);
        }
    }
    Ok(MassPair { x, y, swapped, lcm, c_x, c_y, mu_x, mu_y })
}

impl MassPair {
    /// The residual transport problem between mu_x and mu_y under `d`.
    pub fn instance(&self, d: &DistanceMatrix) -> Result<TransportInstance> {
        let mu: Vec<(usize, i64)> = self.mu_x.iter().map(|(&v, &m)| (v, m)).collect();
        let nu: Vec<(usize, i64)> = self.mu_y.iter().map(|(&v, &m)| (v, m)).collect();
        TransportInstance::from_measures(d, &mu, &nu)
    }
}

fn require_edge(g: &Graph, x: usize, y: usize) -> Result<()> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::NotAPair { x, y });
    }
    if !g.has_edge(x, y) {
        return Err(Error::NotAdjacent { x, y });
    }
    Ok(())
}

fn kappa_adjacent_at(g: &Graph, d: &DistanceMatrix, x: usize, y: usize) -> Result<Rational> {
    require_edge(g, x, y)?;
    let pair = mass_pair(g, x, y)?;
    let (cost, _) = solve_transportation(&pair.instance(d)?);
    Ok(rational(1, 1) + rational(1, g.degree(pair.y) as i64) - rational(cost, pair.lcm))
}

/// Exact curvature of an edge via the residual transport problem.
pub fn kappa_adjacent(g: &Graph, x: usize, y: usize) -> Result<Rational> {
    let d = bfs_distances(g);
    kappa_adjacent_at(g, &d, x, y)
}

/// Like `kappa_adjacent`, but also returns the oriented residual masses and
/// an optimal coupling between them (keyed by vertex pairs).
pub fn kappa_adjacent_with_witness(
    g: &Graph,
    x: usize,
    y: usize,
) -> Result<(Rational, MassPair, IntegerCoupling)> {
    require_edge(g, x, y)?;
    let d = bfs_distances(g);
    let pair = mass_pair(g, x, y)?;
    let (cost, sigma) = solve_transportation(&pair.instance(&d)?);
    let kappa =
        rational(1, 1) + rational(1, g.degree(pair.y) as i64) - rational(cost, pair.lcm);
    Ok((kappa, pair, sigma))
}

/// Curvature lower bound certified by any feasible residual coupling:
/// kappa(x, y) >= 1 + 1/d(y) - C(sigma)/lcm. Optimal couplings make it tight.
pub fn coupling_lower_bound(
    g: &Graph,
    x: usize,
    y: usize,
    sigma: &IntegerCoupling,
) -> Result<Rational> {
    require_edge(g, x, y)?;
    let d = bfs_distances(g);
    let pair = mass_pair(g, x, y)?;
    let cost = pair.instance(&d)?.cost_of(sigma)?;
    Ok(rational(1, 1) + rational(1, g.degree(pair.y) as i64) - rational(cost, pair.lcm))
}

/// An integer 1-Lipschitz potential witnessing a curvature value; carries
/// its values on N[x] u N[y] including the pinned f(x) = 0, f(y) = d(x, y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzPotential {
    pub x: usize,
    pub y: usize,
    pub values: BTreeMap<usize, i64>,
}

struct LipschitzSearch {
    dist: Vec<Vec<i64>>,
    coef: Vec<i64>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    suffix_best: Vec<i64>,
    assigned: Vec<i64>,
    best: i64,
    best_values: Vec<i64>,
}

impl LipschitzSearch {
    fn dfs(&mut self, i: usize, partial: i64) {
        if partial + self.suffix_best[i] >= self.best {
            return;
        }
        if i == self.coef.len() {
            self.best = partial;
            self.best_values = self.assigned.clone();
            return;
        }
        let mut lo = self.lo[i];
        let mut hi = self.hi[i];
        for j in 0..i {
            lo = lo.max(self.assigned[j] - self.dist[i][j]);
            hi = hi.min(self.assigned[j] + self.dist[i][j]);
        }
        if lo > hi {
            return;
        }
        // Try the value that helps the objective first.
        let values: Vec<i64> = if self.coef[i] >= 0 {
            (lo..=hi).collect()
        } else {
            (lo..=hi).rev().collect()
        };
        for v in values {
            self.assigned[i] = v;
            self.dfs(i + 1, partial + self.coef[i] * v);
        }
    }
}

fn kappa_lipschitz_at(
    g: &Graph,
    d: &DistanceMatrix,
    x: usize,
    y: usize,
) -> Result<(Rational, LipschitzPotential)> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::NotAPair { x, y });
    }
    let r = d.finite(x, y)? as i64;
    let (dx, dy) = (g.degree(x) as i64, g.degree(y) as i64);
    let mut free: Vec<usize> = Vec::new();
    for v in 0..g.n() {
        if v != x && v != y && (g.has_edge(x, v) || g.has_edge(y, v)) {
            free.push(v);
        }
    }
    // Objective scaled by d(x) d(y): sum of coef_v f(v), plus fixed terms.
    let coef_of = |v: usize| dy * g.has_edge(x, v) as i64 - dx * g.has_edge(y, v) as i64;
    // Largest influence first tightens the bound sooner.
    free.sort_by_key(|&v| (-coef_of(v).abs(), v));
    let m = free.len();
    let mut search = LipschitzSearch {
        dist: vec![vec![0; m]; m],
        coef: free.iter().map(|&v| coef_of(v)).collect(),
        lo: Vec::with_capacity(m),
        hi: Vec::with_capacity(m),
        suffix_best: vec![0; m + 1],
        assigned: vec![0; m],
        best: i64::MAX,
        best_values: Vec::new(),
    };
    for (i, &v) in free.iter().enumerate() {
        let dxv = d.finite(x, v)? as i64;
        let dyv = d.finite(y, v)? as i64;
        search.lo.push((-dxv).max(r - dyv));
        search.hi.push(dxv.min(r + dyv));
        for (j, &u) in free.iter().enumerate().take(i) {
            let duv = d.finite(u, v)? as i64;
            search.dist[i][j] = duv;
            search.dist[j][i] = duv;
        }
    }
    for i in (0..m).rev() {
        let c = search.coef[i];
        let best_term = if c >= 0 { c * search.lo[i] } else { c * search.hi[i] };
        search.suffix_best[i] = search.suffix_best[i + 1] + best_term;
    }
    // Seed with the pointwise-smallest completion f(v) = max(-d(x,v), r - d(y,v)),
    // a max of two 1-Lipschitz functions and hence feasible, so a witness
    // always exists even if every branch gets pruned.
    let mut seed = 0i64;
    for i in 0..m {
        seed += search.coef[i] * search.lo[i];
    }
    search.best = seed;
    search.best_values = search.lo.clone();
    search.dfs(0, 0);
    let s = search.best;
    let mut values = BTreeMap::from([(x, 0i64), (y, r)]);
    for (i, &v) in free.iter().enumerate() {
        values.insert(v, search.best_values[i]);
    }
    let fixed = rational(1, 1)
        + if g.has_edge(x, y) { rational(1, dx) } else { Rational::zero() };
    let kappa = rational(s, dx * dy * r) + fixed;
    Ok((kappa, LipschitzPotential { x, y, values }))
}

/// Exact curvature of any connected pair via the dual search over integer
/// 1-Lipschitz potentials.
pub fn kappa_lipschitz(g: &Graph, x: usize, y: usize) -> Result<(Rational, LipschitzPotential)> {
    let d = bfs_distances(g);
    kappa_lipschitz_at(g, &d, x, y)
}

/// One-step lazy-walk curvature kappa_alpha(x, y) = 1 - W(m_x^a, m_y^a)/d(x, y).
pub fn kappa_alpha(g: &Graph, x: usize, y: usize, alpha: Rational) -> Result<Rational> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::NotAPair { x, y });
    }
    let d = bfs_distances(g);
    let r = d.finite(x, y)? as i64;
    let mu = lazy_measure(g, x, alpha)?;
    let nu = lazy_measure(g, y, alpha)?;
    let w = wasserstein1(&mu.values, &nu.values, &d)?;
    Ok(rational(1, 1) - w / Rational::from_integer(r))
}

fn kappa_limit_at(g: &Graph, d: &DistanceMatrix, x: usize, y: usize) -> Result<Rational> {
    let r = d.finite(x, y)? as i64;
    let lcm = (g.degree(x) as i64).lcm(&(g.degree(y) as i64));
    let n = g.n() as i64;
    let mut evals = Vec::with_capacity(2);
    for denom in [2 * lcm * n, 4 * lcm * n] {
        let alpha = rational(1, 1) - rational(1, denom);
        let mu = lazy_measure(g, x, alpha)?;
        let nu = lazy_measure(g, y, alpha)?;
        let w = wasserstein1(&mu.values, &nu.values, d)?;
        let k_alpha = rational(1, 1) - w / Rational::from_integer(r);
        evals.push(k_alpha / (rational(1, 1) - alpha));
    }
    if evals[0] != evals[1] {
        return Err(Error::MethodDisagreement {
            x,
            y,
            detail: format!(
                "alpha-limit plateau broken: {} vs {}",
                evals[0], evals[1]
            ),
        });
    }
    Ok(evals[0])
}

/// Curvature as the idleness limit: kappa_alpha/(1 - alpha) is evaluated at
/// two alphas inside the final linear segment and must agree exactly.
pub fn kappa_limit_check(g: &Graph, x: usize, y: usize) -> Result<Rational> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::NotAPair { x, y });
    }
    let d = bfs_distances(g);
    kappa_limit_at(g, &d, x, y)
}

fn kappa_at(g: &Graph, d: &DistanceMatrix, x: usize, y: usize) -> Result<Rational> {
    if g.has_edge(x, y) {
        kappa_adjacent_at(g, d, x, y)
    } else {
        kappa_lipschitz_at(g, d, x, y).map(|(k, _)| k)
    }
}

/// Curvature of any connected pair; edges take the residual-coupling route,
/// non-adjacent pairs the Lipschitz dual.
pub fn kappa(g: &Graph, x: usize, y: usize) -> Result<Rational> {
    let d = bfs_distances(g);
    kappa_at(g, &d, x, y)
}

// ----- star couplings -----

/// A signed matrix B certifying a curvature lower bound: exactly one
/// positive entry at (x, y), rows summing to the negated walk measure of x,
/// columns to that of y (off the pinned vertices), total zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCoupling {
    pub x: usize,
    pub y: usize,
    pub entries: BTreeMap<(usize, usize), Rational>,
}

/// Builds the certificate matrix from a feasible residual coupling sigma:
/// B(x, y) = 1 + 1/d(y), a -1/d(y) diagonal on N[x] n N[y], and
/// -sigma(u, v)/lcm spread over the residual support. The orientation is
/// the normalized one (d(x) <= d(y)).
pub fn star_coupling_from_sigma(
    g: &Graph,
    x: usize,
    y: usize,
    sigma: &IntegerCoupling,
) -> Result<StarCoupling> {
    require_edge(g, x, y)?;
    let d = bfs_distances(g);
    let pair = mass_pair(g, x, y)?;
    pair.instance(&d)?.cost_of(sigma)?;
    let (x, y) = (pair.x, pair.y);
    let dy = g.degree(y) as i64;
    let mut entries = BTreeMap::new();
    entries.insert((x, y), rational(1, 1) + rational(1, dy));
    let both = g.closed_row(x) & g.closed_row(y);
    for u in 0..g.n() {
        if both >> u & 1 == 1 {
            entries.insert((u, u), rational(-1, dy));
        }
    }
    for (&(u, v), &m) in sigma.entries() {
        let slot = entries.entry((u, v)).or_insert_with(Rational::zero);
        *slot -= rational(m, pair.lcm);
    }
    Ok(StarCoupling { x, y, entries })
}

/// Verifies the four certificate conditions exactly and returns the bound
/// sum B(u, v) d(u, v) / d(x, y). Condition numbers in errors:
/// (1) sign pattern, (2) total mass zero, (3) row marginals, (4) column
/// marginals.
pub fn star_coupling_bound(g: &Graph, b: &StarCoupling) -> Result<Rational> {
    let (x, y) = (b.x, b.y);
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::NotAPair { x, y });
    }
    for (&(u, v), &value) in &b.entries {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
        if (u, v) == (x, y) {
            if value <= Rational::zero() {
                return Err(Error::StarCoupling {
                    condition: 1,
                    detail: format!("B({x}, {y}) = {value} is not positive"),
                });
            }
        } else if value > Rational::zero() {
            return Err(Error::StarCoupling {
                condition: 1,
                detail: format!("B({u}, {v}) = {value} is positive off ({x}, {y})"),
            });
        }
    }
    if b.entries.get(&(x, y)).is_none() {
        return Err(Error::StarCoupling {
            condition: 1,
            detail: format!("B({x}, {y}) is missing"),
        });
    }
    let total: Rational = b.entries.values().sum();
    if total != Rational::zero() {
        return Err(Error::StarCoupling {
            condition: 2,
            detail: format!("entries sum to {total}"),
        });
    }
    let mx = lazy_measure(g, x, Rational::zero())?.values;
    let my = lazy_measure(g, y, Rational::zero())?.values;
    let mut rows: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut cols: BTreeMap<usize, Rational> = BTreeMap::new();
    for (&(u, v), &value) in &b.entries {
        *rows.entry(u).or_insert_with(Rational::zero) += value;
        *cols.entry(v).or_insert_with(Rational::zero) += value;
    }
    for u in 0..g.n() {
        if u == x {
            continue;
        }
        let have = rows.get(&u).copied().unwrap_or_else(Rational::zero);
        let want = -mx.get(&u).copied().unwrap_or_else(Rational::zero);
        if have != want {
            return Err(Error::StarCoupling {
                condition: 3,
                detail: format!("row {u} sums to {have}, expected {want}"),
            });
        }
    }
    for v in 0..g.n() {
        if v == y {
            continue;
        }
        let have = cols.get(&v).copied().unwrap_or_else(Rational::zero);
        let want = -my.get(&v).copied().unwrap_or_else(Rational::zero);
        if have != want {
            return Err(Error::StarCoupling {
                condition: 4,
                detail: format!("column {v} sums to {have}, expected {want}"),
            });
        }
    }
    let d = bfs_distances(g);
    let r = d.finite(x, y)?;
    let mut bound = Rational::zero();
    for (&(u, v), &value) in &b.entries {
        if value != Rational::zero() {
            bound += value * Rational::from_integer(d.finite(u, v)? as i64);
        }
    }
    Ok(bound / Rational::from_integer(r as i64))
}

// ----- whole-graph reports -----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KappaMethod {
    AdjacentCoupling,
    LipschitzLp,
    AlphaLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairKappa {
    pub u: usize,
    pub v: usize,
    #[serde(with = "crate::rational::rational_string")]
    pub kappa: Rational,
    pub method: KappaMethod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub pairs: Vec<PairKappa>,
    pub positively_curved: bool,
}

/// Positivity verdict with the worst pair as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    pub positively_curved: bool,
    pub min_kappa: Option<Rational>,
    pub witness_pair: Option<(usize, usize)>,
}

/// Scans every vertex pair; positive curvature means kappa > 0 for all of
/// them. The whole graph must be connected.
pub fn is_positively_curved(g: &Graph) -> Result<PositivityReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let d = bfs_distances(g);
    let mut min_kappa: Option<Rational> = None;
    let mut witness = None;
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            let k = kappa_at(g, &d, x, y)?;
            if min_kappa.is_none_or(|m| k < m) {
                min_kappa = Some(k);
                witness = Some((x, y));
            }
        }
    }
    Ok(PositivityReport {
        positively_curved: min_kappa.map_or(true, |m| m > Rational::zero()),
        min_kappa,
        witness_pair: witness,
    })
}

/// Per-pair curvature table. Every edge is computed by all three methods and
/// cross-checked for exact agreement; non-adjacent pairs by two.
pub fn curvature_report(g: &Graph, edges_only: bool) -> Result<CurvatureReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let d = bfs_distances(g);
    let mut pairs = Vec::new();
    let mut all_positive = true;
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            let adjacent = g.has_edge(x, y);
            if edges_only && !adjacent {
                continue;
            }
            let (value, method) = if adjacent {
                let k = kappa_adjacent_at(g, &d, x, y)?;
                let (dual, _) = kappa_lipschitz_at(g, &d, x, y)?;
                let limit = kappa_limit_at(g, &d, x, y)?;
                if k != dual || k != limit {
                    return Err(Error::MethodDisagreement {
                        x,
                        y,
                        detail: format!(
                            "coupling {k}, lipschitz {dual}, alpha-limit {limit}"
                        ),
                    });
                }
                (k, KappaMethod::AdjacentCoupling)
            } else {
                let (k, _) = kappa_lipschitz_at(g, &d, x, y)?;
                let limit = kappa_limit_at(g, &d, x, y)?;
                if k != limit {
                    return Err(Error::MethodDisagreement {
                        x,
                        y,
                        detail: format!("lipschitz {k}, alpha-limit {limit}"),
                    });
                }
                (k, KappaMethod::LipschitzLp)
            };
            if value <= Rational::zero() {
                all_positive = false;
            }
            pairs.push(PairKappa { u: x, v: y, kappa: value, method });
        }
    }
    // `edges_only` reports positivity of the scanned pairs only.
    Ok(CurvatureReport { pairs, positively_curved: all_positive })
}
