//! Min-cost flow with interval node balances, solved by successive shortest
//! augmenting paths with Dijkstra potentials.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::solution::SolveError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    /// `None` is unbounded.
    pub cap: Option<i64>,
    pub cost: i64,
}

/// Arcs plus per-node intervals on the net balance `inflow - outflow`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FlowNetwork {
    pub intervals: Vec<(i64, i64)>,
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowSolution {
    pub cost: i64,
    /// Flow per arc, aligned with [`FlowNetwork::arcs`].
    pub flow: Vec<i64>,
}

impl FlowSolution {
    pub fn balances(&self, net: &FlowNetwork) -> Vec<i64> {
        let mut bal = vec![0; net.intervals.len()];
        for (a, &f) in net.arcs.iter().zip(&self.flow) {
            bal[a.to] += f;
            bal[a.from] -= f;
        }
        bal
    }
}

impl FlowNetwork {
    pub fn new(intervals: Vec<(i64, i64)>) -> Self {
        FlowNetwork {
            intervals,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: Option<i64>, cost: i64) {
        assert!(from != to, "arcs join distinct nodes");
        assert!(cost >= 0, "costs are non-negative");
        self.arcs.push(Arc {
            from,
            to,
            cap,
            cost,
        });
    }

    /// Checks capacities and balance intervals.
    pub fn is_feasible(&self, flow: &[i64]) -> bool {
        let caps_ok = self
            .arcs
            .iter()
            .zip(flow)
            .all(|(a, &f)| f >= 0 && a.cap.is_none_or(|c| f <= c));
        let sol = FlowSolution {
            cost: 0,
            flow: flow.to_vec(),
        };
        caps_ok
            && sol
                .balances(self)
                .iter()
                .zip(&self.intervals)
                .all(|(&b, &(lo, hi))| lo <= b && b <= hi)
    }

    pub fn cost_of(&self, flow: &[i64]) -> i64 {
        self.arcs.iter().zip(flow).map(|(a, &f)| a.cost * f).sum()
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual {
            head: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let e = self.head.len();
        self.head.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(e);
        self.adj[v].push(e + 1);
        e
    }

    /// Sends up to `want` units from `s` to `t` at minimum cost; returns (sent, cost).
    fn min_cost_flow(&mut self, s: usize, t: usize, want: i64) -> (i64, i64) {
        let n = self.adj.len();
        let mut pot = vec![0i64; n];
        let (mut sent, mut total) = (0, 0);
        while sent < want {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &e in &self.adj[u] {
                    let v = self.head[e];
                    if self.cap[e] > 0 {
                        let nd = d + self.cost[e] + pot[u] - pot[v];
                        if nd < dist[v] {
                            dist[v] = nd;
                            via[v] = e;
                            heap.push(Reverse((nd, v)));
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] != i64::MAX {
                    pot[v] += dist[v];
                }
            }
            let mut push = want - sent;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.cap[e]);
                v = self.head[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                total += push * self.cost[e];
                v = self.head[e ^ 1];
            }
            sent += push;
        }
        (sent, total)
    }
}

/// Minimum-cost flow meeting every balance interval; `Ok(None)` if none exists.
pub fn min_cost_flow(net: &FlowNetwork) -> Result<Option<FlowSolution>, SolveError> {
    let n = net.intervals.len();
    let lo_sum: i64 = net.intervals.iter().map(|iv| iv.0).sum();
    let hi_sum: i64 = net.intervals.iter().map(|iv| iv.1).sum();
    if let Some((i, _)) = net.intervals.iter().enumerate().find(|(_, iv)| iv.0 > iv.1) {
        return Err(SolveError::UnbalancedIntervals(format!(
            "node {i} has an empty interval"
        )));
    }
    if lo_sum > 0 || hi_sum < 0 {
        return Err(SolveError::UnbalancedIntervals(format!(
            "balances range over [{lo_sum}, {hi_sum}], excluding 0"
        )));
    }
    // Any feasible flow moves at most this much in total, so it replaces infinity.
    let finite: i64 = net.arcs.iter().filter_map(|a| a.cap).sum();
    let big = finite
        + net
            .intervals
            .iter()
            .map(|iv| iv.0.abs().max(iv.1.abs()))
            .sum::<i64>()
        + 1;
    // Circulation through a hub: arc v -> hub carries the balance of v, with lower bounds
    // moved into node excesses. Nodes: 0..n, hub n, source n+1, sink n+2.
    let (hub, src, snk) = (n, n + 1, n + 2);
    let mut r = Residual::new(n + 3);
    let mut excess = vec![0i64; n + 3];
    let mut lower = |r: &mut Residual, u: usize, v: usize, lo: i64, hi: i64| {
        excess[v] += lo;
        excess[u] -= lo;
        r.add(u, v, hi - lo, 0);
    };
    for (v, &(lo, hi)) in net.intervals.iter().enumerate() {
        if hi > 0 {
            lower(&mut r, v, hub, lo.max(0), hi);
        }
        if lo < 0 {
            lower(&mut r, hub, v, (-hi).max(0), -lo);
        }
    }
    let arc_edges: Vec<usize> = net
        .arcs
        .iter()
        .map(|a| r.add(a.from, a.to, a.cap.unwrap_or(big), a.cost))
        .collect();
    let mut need = 0;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            r.add(src, v, e, 0);
            need += e;
        } else if e < 0 {
            r.add(v, snk, -e, 0);
        }
    }
    let (sent, cost) = r.min_cost_flow(src, snk, need);
    if sent < need {
        return Ok(None);
    }
    let flow: Vec<i64> = arc_edges.iter().map(|&e| r.cap[e ^ 1]).collect();
    debug_assert!(net.is_feasible(&flow));
    Ok(Some(FlowSolution { cost, flow }))
}

/// Feasible iff the minimum cost is within `budget`.
pub fn solve_minmcf(net: &FlowNetwork, budget: i64) -> Result<Option<FlowSolution>, SolveError> {
    Ok(min_cost_flow(net)?.filter(|s| s.cost <= budget))
}

/// Splits a flow into unit paths from net sources to net sinks, as node sequences.
pub fn unit_paths(net: &FlowNetwork, sol: &FlowSolution) -> Vec<Vec<usize>> {
    let n = net.intervals.len();
    let mut left = sol.flow.clone();
    let mut bal = sol.balances(net);
    let mut paths = Vec::new();
    loop {
        let Some(start) = (0..n).find(|&v| bal[v] < 0) else {
            break;
        };
        let mut path = vec![start];
        let mut cur = start;
        // Flow conservation guarantees an unused outgoing arc until a net sink is reached.
        loop {
            let i = (0..net.arcs.len())
                .find(|&i| left[i] > 0 && net.arcs[i].from == cur)
                .expect("conservation");
            left[i] -= 1;
            cur = net.arcs[i].to;
            path.push(cur);
            if bal[cur] > 0 {
                break;
            }
        }
        bal[start] += 1;
        bal[cur] -= 1;
        paths.push(path);
    }
    paths
}
