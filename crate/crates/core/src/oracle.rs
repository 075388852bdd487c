//! Brute-force ground truth for tiny instances, plus a seeded generator of
//! such instances. Nothing here shares code with the solvers.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FlowError, Result};
use crate::netcore::{Balances, Flow, Network, ResidualEdge, VertexId};
use crate::num::{common_denominator, int, ExtRational, Rational};
use crate::pathsel::Weights;

pub const DEFAULT_SEARCH_LIMIT: u64 = 10_000_000;
pub const DEFAULT_CYCLE_VERTEX_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal { cost: Rational, flow: Flow },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub outcome: OracleOutcome,
    /// Number of candidate flows in the full (unpruned) box.
    pub search_space: u64,
}

impl OracleResult {
    pub fn cost(&self) -> Option<&Rational> {
        match &self.outcome {
            OracleOutcome::Optimal { cost, .. } => Some(cost),
            OracleOutcome::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, OracleOutcome::Optimal { .. })
    }
}

pub fn brute_force_min_cost_flow(
    net: &Network,
    b: &Balances,
    cap_bound: Option<u64>,
) -> Result<OracleResult> {
    brute_force_with_limit(net, b, cap_bound, DEFAULT_SEARCH_LIMIT)
}

struct Search<'a> {
    net: &'a Network,
    bounds: Vec<i64>,
    costs: Vec<i128>,
    /// Required outflow minus inflow per vertex.
    need: Vec<i64>,
    /// Remaining unassigned outgoing / incoming bound sums per vertex.
    out_room: Vec<i64>,
    in_room: Vec<i64>,
    net_out: Vec<i64>,
    current: Vec<i64>,
    best: Option<(i128, Vec<i64>)>,
}

impl Search<'_> {
    fn vertex_ok(&self, v: VertexId) -> bool {
        let missing = self.need[v] - self.net_out[v];
        -self.in_room[v] <= missing && missing <= self.out_room[v]
    }

    fn run(&mut self, e: usize, cost: i128) {
        if e == self.bounds.len() {
            if self.best.as_ref().is_none_or(|(c, _)| cost < *c) {
                self.best = Some((cost, self.current.clone()));
            }
            return;
        }
        let edge = self.net.edges()[e];
        let bound = self.bounds[e];
        self.out_room[edge.src] -= bound;
        self.in_room[edge.dst] -= bound;
        for x in 0..=bound {
            self.current[e] = x;
            self.net_out[edge.src] += x;
            self.net_out[edge.dst] -= x;
            if self.vertex_ok(edge.src) && self.vertex_ok(edge.dst) {
                self.run(e + 1, cost + self.costs[e] * x as i128);
            }
            self.net_out[edge.src] -= x;
            self.net_out[edge.dst] += x;
        }
        self.current[e] = 0;
        self.out_room[edge.src] += bound;
        self.in_room[edge.dst] += bound;
    }
}

/// Enumerates every integral flow with `0 ≤ f(e) ≤ min(u(e), cap_bound)` in
/// lexicographic order and keeps the first of minimum cost. Partial
/// assignments are dropped once some vertex can no longer be balanced by its
/// unassigned edges.
pub fn brute_force_with_limit(
    net: &Network,
    b: &Balances,
    cap_bound: Option<u64>,
    limit: u64,
) -> Result<OracleResult> {
    if b.len() != net.vertex_count() {
        return Err(FlowError::InvalidArgument("balance vector has the wrong length".into()));
    }
    if !b.is_integral() {
        return Err(FlowError::NonIntegral("oracle needs integral balances".into()));
    }
    let mut bounds = Vec::with_capacity(net.edge_count());
    for e in 0..net.edge_count() {
        let cap = match net.capacity(e) {
            ExtRational::Finite(c) => c.floor().to_integer().to_i64(),
            ExtRational::Infinity => None,
        };
        let bound = match (cap, cap_bound) {
            (Some(c), Some(k)) => c.min(k as i64),
            (Some(c), None) => c,
            (None, Some(k)) => k as i64,
            (None, None) => {
                return Err(FlowError::InvalidArgument(format!(
                    "edge {e} is uncapacitated and no enumeration bound was given"
                )))
            }
        };
        bounds.push(bound);
    }
    let mut space: u128 = 1;
    for &x in &bounds {
        space = space.saturating_mul(x as u128 + 1);
    }
    if space > limit as u128 {
        return Err(FlowError::SearchSpaceTooLarge {
            size: space.to_string(),
            limit,
        });
    }

    let scale = common_denominator(net.costs());
    let costs = net
        .costs()
        .iter()
        .map(|c| {
            (c * Rational::from_integer(scale.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| FlowError::InvalidArgument("cost too large for the oracle".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let need = b
        .values()
        .iter()
        .map(|x| x.to_integer().to_i64().ok_or_else(|| FlowError::InvalidArgument("balance too large".into())))
        .collect::<Result<Vec<_>>>()?;

    let n = net.vertex_count();
    let mut out_room = vec![0i64; n];
    let mut in_room = vec![0i64; n];
    for edge in net.edges() {
        out_room[edge.src] += bounds[edge.id];
        in_room[edge.dst] += bounds[edge.id];
    }
    let mut search = Search {
        net,
        bounds,
        costs,
        need,
        out_room,
        in_room,
        net_out: vec![0; n],
        current: vec![0; net.edge_count()],
        best: None,
    };
    if (0..n).all(|v| search.vertex_ok(v)) {
        search.run(0, 0);
    }
    let outcome = match search.best {
        None => OracleOutcome::Infeasible,
        Some((scaled, flow)) => OracleOutcome::Optimal {
            cost: Rational::new(BigInt::from(scaled), scale),
            flow: Flow(flow.into_iter().map(int).collect()),
        },
    };
    Ok(OracleResult {
        outcome,
        search_space: space as u64,
    })
}

/// `OPT(l, source, v)`: cheapest walk with at most `l` edges, by the
/// recurrence `OPT(k, v) = min(OPT(k−1, v), min_u OPT(k−1, u) + w(u, v))`.
pub fn opt_walk_dp(weights: &Weights, source: VertexId, l: usize) -> Vec<ExtRational> {
    let n = weights.vertex_count();
    let mut opt = vec![ExtRational::Infinity; n];
    opt[source] = ExtRational::zero();
    for _ in 0..l {
        let prev = opt.clone();
        for v in 0..n {
            for u in 0..n {
                let via = &prev[u] + weights.get(u, v);
                if via < opt[v] {
                    opt[v] = via;
                }
            }
        }
    }
    opt
}

/// Every simple directed cycle of the weight graph with negative total
/// weight, each listed once starting from its smallest vertex.
pub fn negative_simple_cycles(weights: &Weights) -> Vec<Vec<VertexId>> {
    let n = weights.vertex_count();
    let mut out = Vec::new();
    for start in 0..n {
        let mut stack = vec![start];
        let mut on = vec![false; n];
        on[start] = true;
        walk_cycles(weights, start, &mut stack, &mut on, ExtRational::zero(), &mut out);
    }
    out
}

fn walk_cycles(
    weights: &Weights,
    start: VertexId,
    stack: &mut Vec<VertexId>,
    on: &mut [bool],
    weight: ExtRational,
    out: &mut Vec<Vec<VertexId>>,
) {
    let last = *stack.last().expect("nonempty");
    for next in start..weights.vertex_count() {
        let w = weights.get(last, next);
        if !w.is_finite() {
            continue;
        }
        let total = &weight + w;
        if next == start {
            if matches!(&total, ExtRational::Finite(t) if t.is_negative()) {
                out.push(stack.clone());
            }
        } else if !on[next] {
            on[next] = true;
            stack.push(next);
            walk_cycles(weights, start, stack, on, total, out);
            stack.pop();
            on[next] = false;
        }
    }
}

/// Every simple residual cycle (no vertex repeated) of positive capacity and
/// negative cost, each listed once starting from its smallest vertex.
pub fn enumerate_augcycles(net: &Network, f: &Flow) -> Result<Vec<Vec<ResidualEdge>>> {
    enumerate_augcycles_limited(net, f, DEFAULT_CYCLE_VERTEX_LIMIT)
}

pub fn enumerate_augcycles_limited(
    net: &Network,
    f: &Flow,
    vertex_limit: usize,
) -> Result<Vec<Vec<ResidualEdge>>> {
    let n = net.vertex_count();
    if n > vertex_limit {
        return Err(FlowError::SearchSpaceTooLarge {
            size: n.to_string(),
            limit: vertex_limit as u64,
        });
    }
    // residual edges leaving each vertex with (head, cost)
    let mut arcs: Vec<Vec<(ResidualEdge, VertexId, Rational)>> = vec![Vec::new(); n];
    for edge in net.edges() {
        let e = edge.id;
        let room = match net.capacity(e) {
            ExtRational::Finite(c) => (c - &f[e]).is_positive(),
            ExtRational::Infinity => true,
        };
        if room {
            arcs[edge.src].push((ResidualEdge::Forward(e), edge.dst, net.cost(e).clone()));
        }
        if f[e].is_positive() {
            arcs[edge.dst].push((ResidualEdge::Backward(e), edge.src, -net.cost(e).clone()));
        }
    }
    let mut out = Vec::new();
    for start in 0..n {
        let mut on = vec![false; n];
        on[start] = true;
        let mut path = Vec::new();
        residual_cycles(&arcs, start, start, &mut on, &mut path, Rational::zero(), &mut out);
    }
    Ok(out)
}

fn residual_cycles(
    arcs: &[Vec<(ResidualEdge, VertexId, Rational)>],
    start: VertexId,
    at: VertexId,
    on: &mut [bool],
    path: &mut Vec<ResidualEdge>,
    cost: Rational,
    out: &mut Vec<Vec<ResidualEdge>>,
) {
    for (r, head, c) in &arcs[at] {
        let total = &cost + c;
        if *head == start {
            if total.is_negative() {
                let mut cycle = path.clone();
                cycle.push(*r);
                out.push(cycle);
            }
        } else if *head > start && !on[*head] {
            on[*head] = true;
            path.push(*r);
            residual_cycles(arcs, start, *head, on, path, total, out);
            path.pop();
            on[*head] = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusInstance {
    pub net: Network,
    pub balances: Balances,
}

/// Why drawn instances were discarded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub drawn: u64,
    pub rejected_balance: u64,
    pub rejected_negative_cycle: u64,
    pub accepted: u64,
}

/// Shape of the generated instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub vertices: (usize, usize),
    pub edges: (usize, usize),
    pub max_capacity: i64,
    pub max_abs_cost: i64,
    pub max_abs_balance: i64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            vertices: (2, 4),
            edges: (1, 6),
            max_capacity: 3,
            max_abs_cost: 3,
            max_abs_balance: 3,
        }
    }
}

/// Draws `count` zero-sum instances without negative-cost cycles. Balances
/// are drawn for all but the last vertex, which takes the negated sum; draws
/// where that leaves the balance range are rejected.
pub fn generate_corpus(seed: u64, count: usize, spec: &CorpusSpec) -> (Vec<CorpusInstance>, CorpusStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = CorpusStats::default();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        stats.drawn += 1;
        let n = rng.gen_range(spec.vertices.0..=spec.vertices.1);
        let m = rng.gen_range(spec.edges.0..=spec.edges.1);
        let edges: Vec<_> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                let cap = rng.gen_range(0..=spec.max_capacity);
                let cost = rng.gen_range(-spec.max_abs_cost..=spec.max_abs_cost);
                (u, v, ExtRational::Finite(int(cap)), int(cost))
            })
            .collect();
        let mut b: Vec<i64> = (0..n - 1)
            .map(|_| rng.gen_range(-spec.max_abs_balance..=spec.max_abs_balance))
            .collect();
        let last = -b.iter().sum::<i64>();
        if last.abs() > spec.max_abs_balance {
            stats.rejected_balance += 1;
            continue;
        }
        b.push(last);
        let net = Network::new(n, edges).expect("generated edges are valid");
        if !negative_simple_cycles(&weights_from_network(&net)).is_empty() {
            stats.rejected_negative_cycle += 1;
            continue;
        }
        stats.accepted += 1;
        out.push(CorpusInstance {
            net,
            balances: Balances(b.into_iter().map(int).collect()),
        });
    }
    (out, stats)
}

/// Cheapest cost per ordered vertex pair over all edges.
pub fn weights_from_network(net: &Network) -> Weights {
    let mut w = Weights::new(net.vertex_count());
    for edge in net.edges() {
        let c = ExtRational::Finite(net.cost(edge.id).clone());
        if &c < w.get(edge.src, edge.dst) {
            w.set(edge.src, edge.dst, c);
        }
    }
    w
}

impl CorpusInstance {
    /// Same graph and balances with infinite capacities and costs `|c|`.
    pub fn uncapacitated(&self) -> CorpusInstance {
        let net = Network::new(
            self.net.vertex_count(),
            self.net.edges().iter().map(|e| {
                (e.src, e.dst, ExtRational::Infinity, self.net.cost(e.id).abs())
            }),
        )
        .expect("same endpoints");
        CorpusInstance {
            net,
            balances: self.balances.clone(),
        }
    }

    /// Sum of positive balances.
    pub fn total_supply(&self) -> u64 {
        self.balances
            .values()
            .iter()
            .filter(|x| x.is_positive())
            .sum::<Rational>()
            .to_integer()
            .to_u64()
            .unwrap_or(u64::MAX)
    }
}
