//! Exact optimal transport between measures on graph vertices.
//!
//! The workhorse is an integer min-cost-flow solver (successive shortest
//! paths with Bellman-Ford label correction, exact i64 arithmetic) on the
//! bipartite supply/demand network. Rational measures are handled by
//! clearing denominators, solving the integer instance, and dividing back,
//! so Wasserstein distances come out as exact rationals.

use crate::error::Error;
use crate::graph::DistanceMatrix;
use crate::rational::Rational;
use crate::Result;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;

/// A balanced integer transportation instance. Zero-mass entries are dropped
/// at construction; `supplies[i]`/`demands[j]` pair vertex ids with positive
/// masses, and `cost[i][j]` is the unit shipping cost between them.
#[derive(Debug, Clone)]
pub struct TransportInstance {
    supplies: Vec<(usize, i64)>,
    demands: Vec<(usize, i64)>,
    cost: Vec<Vec<i64>>,
}

impl TransportInstance {
    pub fn new(
        supplies: Vec<(usize, i64)>,
        demands: Vec<(usize, i64)>,
        cost: Vec<Vec<i64>>,
    ) -> Result<TransportInstance> {
        for &(v, m) in supplies.iter().chain(&demands) {
            if m < 0 {
                return Err(Error::NegativeMass { v, mass: m.to_string() });
            }
        }
        let total_s: i64 = supplies.iter().map(|&(_, m)| m).sum();
        let total_d: i64 = demands.iter().map(|&(_, m)| m).sum();
        if total_s != total_d {
            return Err(Error::UnbalancedTransport {
                supply: total_s.to_string(),
                demand: total_d.to_string(),
            });
        }
        if cost.len() != supplies.len() || cost.iter().any(|row| row.len() != demands.len()) {
            return Err(Error::Internal("cost matrix shape mismatch".to_string()));
        }
        if cost.iter().flatten().any(|&c| c < 0) {
            return Err(Error::Internal("negative transport cost".to_string()));
        }
        // Keep rows/columns aligned with the positive-mass entries only.
        let keep_s: Vec<usize> = (0..supplies.len()).filter(|&i| supplies[i].1 > 0).collect();
        let keep_d: Vec<usize> = (0..demands.len()).filter(|&j| demands[j].1 > 0).collect();
        Ok(TransportInstance {
            cost: keep_s
                .iter()
                .map(|&i| keep_d.iter().map(|&j| cost[i][j]).collect())
                .collect(),
            supplies: keep_s.into_iter().map(|i| supplies[i]).collect(),
            demands: keep_d.into_iter().map(|j| demands[j]).collect(),
        })
    }

    /// Instance shipping `mu` to `nu` at shortest-path costs. Masses are
    /// keyed by vertex; every pair of support vertices must be connected.
    pub fn from_measures(
        d: &DistanceMatrix,
        mu: &[(usize, i64)],
        nu: &[(usize, i64)],
    ) -> Result<TransportInstance> {
        let mut cost = Vec::with_capacity(mu.len());
        for &(u, _) in mu {
            let mut row = Vec::with_capacity(nu.len());
            for &(v, _) in nu {
                row.push(d.finite(u, v)? as i64);
            }
            cost.push(row);
        }
        TransportInstance::new(mu.to_vec(), nu.to_vec(), cost)
    }

    pub fn supplies(&self) -> &[(usize, i64)] {
        &self.supplies
    }

    pub fn demands(&self) -> &[(usize, i64)] {
        &self.demands
    }

    pub fn total_mass(&self) -> i64 {
        self.supplies.iter().map(|&(_, m)| m).sum()
    }

    /// Cost of a coupling under this instance's cost matrix. The coupling
    /// must have exactly this instance's marginals.
    pub fn cost_of(&self, sigma: &IntegerCoupling) -> Result<i64> {
        let si: BTreeMap<usize, usize> =
            self.supplies.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
        let di: BTreeMap<usize, usize> =
            self.demands.iter().enumerate().map(|(j, &(v, _))| (v, j)).collect();
        let mut row = vec![0i64; self.supplies.len()];
        let mut col = vec![0i64; self.demands.len()];
        let mut total = 0i64;
        for (&(u, v), &m) in sigma.entries() {
            let (i, j) = match (si.get(&u), di.get(&v)) {
                (Some(&i), Some(&j)) => (i, j),
                _ => {
                    return Err(Error::BadCoupling(format!(
                        "entry ({u}, {v}) outside the instance supports"
                    )))
                }
            };
            row[i] += m;
            col[j] += m;
            total += m * self.cost[i][j];
        }
        for (i, &(v, m)) in self.supplies.iter().enumerate() {
            if row[i] != m {
                return Err(Error::BadCoupling(format!(
                    "row sum at vertex {v} is {} instead of {m}",
                    row[i]
                )));
            }
        }
        for (j, &(v, m)) in self.demands.iter().enumerate() {
            if col[j] != m {
                return Err(Error::BadCoupling(format!(
                    "column sum at vertex {v} is {} instead of {m}",
                    col[j]
                )));
            }
        }
        Ok(total)
    }
}

/// An integer coupling: mass shipped per (source vertex, sink vertex) pair.
/// Only strictly positive entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerCoupling {
    entries: BTreeMap<(usize, usize), i64>,
}

impl IntegerCoupling {
    pub fn from_entries(entries: BTreeMap<(usize, usize), i64>) -> IntegerCoupling {
        let entries = entries.into_iter().filter(|&(_, m)| m != 0).collect();
        IntegerCoupling { entries }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.entries
    }

    pub fn mass(&self, u: usize, v: usize) -> i64 {
        self.entries.get(&(u, v)).copied().unwrap_or(0)
    }

    pub fn total_mass(&self) -> i64 {
        self.entries.values().sum()
    }
}

// Successive-shortest-path min-cost flow. Residual arcs are stored in
// pairs, arc ^ 1 being the reverse; labels are corrected by Bellman-Ford,
// which tolerates the negative residual costs without potentials.
struct Flow {
    n: usize,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Flow {
    fn new(n: usize) -> Flow {
        Flow { n, to: Vec::new(), cap: Vec::new(), cost: Vec::new(), out: vec![Vec::new(); n] }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) {
        self.out[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.out[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
    }

    /// Sends as much flow as possible from s to t, cheapest-first.
    /// Returns total cost; flows are read off the reverse capacities.
    fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0i64;
        loop {
            let mut dist = vec![None::<i64>; self.n];
            let mut via = vec![usize::MAX; self.n];
            dist[s] = Some(0);
            // Bellman-Ford; the network is tiny and loop-free in practice.
            for _ in 0..self.n {
                let mut relaxed = false;
                for u in 0..self.n {
                    let du = match dist[u] {
                        Some(d) => d,
                        None => continue,
                    };
                    for &a in &self.out[u] {
                        if self.cap[a] == 0 {
                            continue;
                        }
                        let nd = du + self.cost[a];
                        if dist[self.to[a]].is_none_or(|old| nd < old) {
                            dist[self.to[a]] = Some(nd);
                            via[self.to[a]] = a;
                            relaxed = true;
                        }
                    }
                }
                if !relaxed {
                    break;
                }
            }
            if dist[t].is_none() {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.to[a ^ 1];
            }
            total += push * dist[t].unwrap();
        }
    }
}

/// Exact minimum transport cost and an optimal coupling.
pub fn solve_transportation(inst: &TransportInstance) -> (i64, IntegerCoupling) {
    let s = inst.supplies.len();
    let t = inst.demands.len();
    let mut net = Flow::new(s + t + 2);
    let src = s + t;
    let dst = s + t + 1;
    for (i, &(_, m)) in inst.supplies.iter().enumerate() {
        net.add(src, i, m, 0);
    }
    for (j, &(_, m)) in inst.demands.iter().enumerate() {
        net.add(s + j, dst, m, 0);
    }
    // Arc ids of the supply->demand arcs start after the 2(s + t) node arcs.
    let base = 2 * (s + t);
    for i in 0..s {
        for j in 0..t {
            net.add(i, s + j, i64::MAX / 4, inst.cost[i][j]);
        }
    }
    let total = net.run(src, dst);
    let mut entries = BTreeMap::new();
    for i in 0..s {
        for j in 0..t {
            let arc = base + 2 * (i * t + j);
            let flow = net.cap[arc ^ 1];
            if flow > 0 {
                entries.insert((inst.supplies[i].0, inst.demands[j].0), flow);
            }
        }
    }
    (total, IntegerCoupling { entries })
}

/// Exact Wasserstein-1 distance between two finite nonnegative measures of
/// equal total mass, at shortest-path costs. Denominators are cleared, the
/// integer instance solved, and the scale divided back out.
pub fn wasserstein1(
    mu: &BTreeMap<usize, Rational>,
    nu: &BTreeMap<usize, Rational>,
    d: &DistanceMatrix,
) -> Result<Rational> {
    for (&v, &m) in mu.iter().chain(nu) {
        if m < Rational::zero() {
            return Err(Error::NegativeMass { v, mass: m.to_string() });
        }
    }
    let tot_mu: Rational = mu.values().sum();
    let tot_nu: Rational = nu.values().sum();
    if tot_mu != tot_nu {
        return Err(Error::UnbalancedTransport {
            supply: tot_mu.to_string(),
            demand: tot_nu.to_string(),
        });
    }
    let scale = mu
        .values()
        .chain(nu.values())
        .fold(1i64, |acc, m| acc.lcm(m.denom()));
    let lift = |m: &BTreeMap<usize, Rational>| -> Vec<(usize, i64)> {
        m.iter()
            .map(|(&v, &q)| (v, (q * Rational::from_integer(scale)).to_integer()))
            .collect()
    };
    let inst = TransportInstance::from_measures(d, &lift(mu), &lift(nu))?;
    let (cost, _) = solve_transportation(&inst);
    Ok(Rational::new(cost, scale))
}

/// A feasible (generally suboptimal) coupling: north-west-corner start,
/// then `rounds` random rectangle moves that preserve both marginals.
pub fn random_feasible_coupling(
    inst: &TransportInstance,
    rng: &mut impl Rng,
    rounds: usize,
) -> IntegerCoupling {
    let s = inst.supplies.len();
    let t = inst.demands.len();
    let mut x = vec![vec![0i64; t]; s];
    let mut rem_s: Vec<i64> = inst.supplies.iter().map(|&(_, m)| m).collect();
    let mut rem_d: Vec<i64> = inst.demands.iter().map(|&(_, m)| m).collect();
    let (mut i, mut j) = (0, 0);
    while i < s && j < t {
        let m = rem_s[i].min(rem_d[j]);
        x[i][j] += m;
        rem_s[i] -= m;
        rem_d[j] -= m;
        if rem_s[i] == 0 {
            i += 1;
        } else {
            j += 1;
        }
    }
    if s >= 2 && t >= 2 {
        for _ in 0..rounds {
            let i1 = rng.random_range(0..s);
            let i2 = rng.random_range(0..s);
            let j1 = rng.random_range(0..t);
            let j2 = rng.random_range(0..t);
            if i1 == i2 || j1 == j2 {
                continue;
            }
            let max_move = x[i1][j1].min(x[i2][j2]);
            if max_move == 0 {
                continue;
            }
            let delta = rng.random_range(1..=max_move);
            x[i1][j1] -= delta;
            x[i2][j2] -= delta;
            x[i1][j2] += delta;
            x[i2][j1] += delta;
        }
    }
    let mut entries = BTreeMap::new();
    for i in 0..s {
        for j in 0..t {
            if x[i][j] > 0 {
                entries.insert((inst.supplies[i].0, inst.demands[j].0), x[i][j]);
            }
        }
    }
    IntegerCoupling { entries }
}

/// Reference minimum by exhaustive search over all integer couplings.
/// Exists to cross-check the flow solver on small instances.
pub fn bruteforce_min_cost(inst: &TransportInstance) -> i64 {
    let s = inst.supplies.len();
    let mut rem_s: Vec<i64> = inst.supplies.iter().map(|&(_, m)| m).collect();
    let mut rem_d: Vec<i64> = inst.demands.iter().map(|&(_, m)| m).collect();
    let mut best = i64::MAX;
    fn rec(
        inst: &TransportInstance,
        cell: usize,
        cost: i64,
        rem_s: &mut [i64],
        rem_d: &mut [i64],
        best: &mut i64,
    ) {
        let t = rem_d.len();
        if cost >= *best {
            return;
        }
        if cell == rem_s.len() * t {
            if rem_s.iter().all(|&m| m == 0) && rem_d.iter().all(|&m| m == 0) {
                *best = cost;
            }
            return;
        }
        let (i, j) = (cell / t, cell % t);
        // The last column of a row must absorb whatever remains.
        let lo = if j == t - 1 { rem_s[i] } else { 0 };
        let hi = rem_s[i].min(rem_d[j]);
        for m in lo..=hi {
            rem_s[i] -= m;
            rem_d[j] -= m;
            rec(inst, cell + 1, cost + m * inst.cost[i][j], rem_s, rem_d, best);
            rem_s[i] += m;
            rem_d[j] += m;
        }
    }
    if s == 0 {
        return 0;
    }
    rec(inst, 0, 0, &mut rem_s, &mut rem_d, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, cycle, path};
    use crate::rational::rational;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn inst(s: &[(usize, i64)], d: &[(usize, i64)], c: &[&[i64]]) -> TransportInstance {
        let cost = c.iter().map(|r| r.to_vec()).collect();
        TransportInstance::new(s.to_vec(), d.to_vec(), cost).unwrap()
    }

    #[test]
    fn hand_instances() {
        // Single unit across cost 3.
        let i1 = inst(&[(0, 1)], &[(1, 1)], &[&[3]]);
        let (c, sigma) = solve_transportation(&i1);
        assert_eq!(c, 3);
        assert_eq!(sigma.mass(0, 1), 1);

        // 2x2 where the greedy diagonal is wrong.
        let i2 = inst(&[(0, 1), (1, 1)], &[(2, 1), (3, 1)], &[&[1, 5], &[1, 2]]);
        let (c, sigma) = solve_transportation(&i2);
        assert_eq!(c, 3);
        assert_eq!(sigma.mass(0, 2), 1);
        assert_eq!(sigma.mass(1, 3), 1);
        assert_eq!(i2.cost_of(&sigma).unwrap(), 3);

        // Splitting a supply across two sinks.
        let i3 = inst(&[(0, 3)], &[(1, 1), (2, 2)], &[&[4, 1]]);
        let (c, _) = solve_transportation(&i3);
        assert_eq!(c, 4 + 2);
    }

    #[test]
    fn empty_and_degenerate() {
        let i0 = inst(&[], &[], &[]);
        let (c, sigma) = solve_transportation(&i0);
        assert_eq!(c, 0);
        assert!(sigma.entries().is_empty());

        // Zero masses are dropped up front.
        let iz = inst(&[(0, 0), (1, 2)], &[(2, 2), (3, 0)], &[&[9, 9], &[1, 9]]);
        assert_eq!(iz.supplies(), &[(1, 2)]);
        let (c, _) = solve_transportation(&iz);
        assert_eq!(c, 2);
    }

    #[test]
    fn constructor_rejects_bad_instances() {
        assert!(matches!(
            TransportInstance::new(vec![(0, 2)], vec![(1, 1)], vec![vec![1]]),
            Err(Error::UnbalancedTransport { .. })
        ));
        assert!(matches!(
            TransportInstance::new(vec![(0, -1)], vec![(1, -1)], vec![vec![1]]),
            Err(Error::NegativeMass { v: 0, .. })
        ));
    }

    #[test]
    fn cost_of_validates_marginals() {
        let i2 = inst(&[(0, 1), (1, 1)], &[(2, 1), (3, 1)], &[&[1, 5], &[1, 2]]);
        let bad = IntegerCoupling::from_entries(BTreeMap::from([((0, 2), 1), ((1, 2), 1)]));
        assert!(matches!(i2.cost_of(&bad), Err(Error::BadCoupling(_))));
        let off_support = IntegerCoupling::from_entries(BTreeMap::from([((5, 2), 1)]));
        assert!(matches!(i2.cost_of(&off_support), Err(Error::BadCoupling(_))));
    }

    #[test]
    fn matches_bruteforce_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let s = rng.random_range(1..=4);
            let t = rng.random_range(1..=4);
            let mut sup: Vec<(usize, i64)> =
                (0..s).map(|i| (i, rng.random_range(0..=4))).collect();
            let dem: Vec<(usize, i64)> =
                (0..t).map(|j| (100 + j, rng.random_range(0..=4))).collect();
            // Rebalance the first supply to match.
            let ds: i64 = dem.iter().map(|&(_, m)| m).sum();
            let ss: i64 = sup.iter().skip(1).map(|&(_, m)| m).sum();
            if ds < ss {
                continue;
            }
            sup[0].1 = ds - ss;
            let cost: Vec<Vec<i64>> = (0..s)
                .map(|_| (0..t).map(|_| rng.random_range(0..=6)).collect())
                .collect();
            let inst = TransportInstance::new(sup, dem, cost).unwrap();
            let (solved, sigma) = solve_transportation(&inst);
            assert_eq!(solved, bruteforce_min_cost(&inst));
            assert_eq!(inst.cost_of(&sigma).unwrap(), solved);
        }
    }

    #[test]
    fn integer_scaling_multiplies_cost() {
        let base = inst(&[(0, 2), (1, 3)], &[(2, 4), (3, 1)], &[&[2, 7], &[3, 1]]);
        let scaled = inst(&[(0, 10), (1, 15)], &[(2, 20), (3, 5)], &[&[2, 7], &[3, 1]]);
        let (c1, _) = solve_transportation(&base);
        let (c5, _) = solve_transportation(&scaled);
        assert_eq!(c5, 5 * c1);
    }

    #[test]
    fn wasserstein_point_masses_and_symmetry() {
        let g = path(5);
        let d = bfs_distances(&g);
        let delta = |v: usize| BTreeMap::from([(v, rational(1, 1))]);
        assert_eq!(wasserstein1(&delta(0), &delta(4), &d).unwrap(), rational(4, 1));
        assert_eq!(wasserstein1(&delta(2), &delta(2), &d).unwrap(), rational(0, 1));

        // Uniform neighbor measures of adjacent vertices on C_4: every
        // support pair is at distance exactly 1, so W = total mass = 1.
        let c4 = cycle(4);
        let d4 = bfs_distances(&c4);
        let mu = BTreeMap::from([(1, rational(1, 2)), (3, rational(1, 2))]);
        let nu = BTreeMap::from([(0, rational(1, 2)), (2, rational(1, 2))]);
        assert_eq!(wasserstein1(&mu, &nu, &d4).unwrap(), rational(1, 1));
        assert_eq!(wasserstein1(&nu, &mu, &d4).unwrap(), rational(1, 1));
    }

    #[test]
    fn wasserstein_rejects_bad_measures() {
        let d = bfs_distances(&path(3));
        let mu = BTreeMap::from([(0, rational(1, 2))]);
        let nu = BTreeMap::from([(2, rational(1, 3))]);
        assert!(matches!(
            wasserstein1(&mu, &nu, &d),
            Err(Error::UnbalancedTransport { .. })
        ));
        let neg = BTreeMap::from([(0, rational(-1, 2)), (1, rational(3, 2))]);
        let one = BTreeMap::from([(2, rational(1, 1))]);
        assert!(matches!(
            wasserstein1(&neg, &one, &d),
            Err(Error::NegativeMass { .. })
        ));
        // Disconnected supports are a hard error, not a large distance.
        let g2 = crate::graph::Graph::from_edges(3, &[(0, 1)]).unwrap();
        let d2 = bfs_distances(&g2);
        let a = BTreeMap::from([(0, rational(1, 1))]);
        let b = BTreeMap::from([(2, rational(1, 1))]);
        assert!(matches!(
            wasserstein1(&a, &b, &d2),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn random_couplings_are_feasible_and_dominate_optimum() {
        let mut rng = StdRng::seed_from_u64(99);
        let i2 = inst(
            &[(0, 3), (1, 2), (2, 4)],
            &[(10, 4), (11, 5)],
            &[&[1, 4], &[2, 2], &[5, 1]],
        );
        let (optimal, _) = solve_transportation(&i2);
        for _ in 0..50 {
            let sigma = random_feasible_coupling(&i2, &mut rng, 24);
            let cost = i2.cost_of(&sigma).expect("marginals preserved");
            assert!(cost >= optimal);
        }
    }
}
