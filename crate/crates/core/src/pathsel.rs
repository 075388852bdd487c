//! Bellman-Ford with predecessor tracking, the projection of the residual
//! multigraph onto a weighted simple graph, and paths in a forest.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{FlowError, Result};
use crate::netcore::{EdgeId, Flow, Network, ResidualEdge, VertexId};
use crate::num::{ExtRational, Rational};

/// Dense weight matrix over ordered vertex pairs; `Infinity` means no edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    n: usize,
    w: Vec<ExtRational>,
}

impl Weights {
    pub fn new(n: usize) -> Self {
        Weights {
            n,
            w: vec![ExtRational::Infinity; n * n],
        }
    }

    /// Builds weights from `(u, v, w)` triples; later triples overwrite.
    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = (VertexId, VertexId, Rational)>) -> Self {
        let mut weights = Weights::new(n);
        for (u, v, w) in triples {
            weights.set(u, v, ExtRational::Finite(w));
        }
        weights
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> &ExtRational {
        &self.w[u * self.n + v]
    }

    pub fn set(&mut self, u: VertexId, v: VertexId, w: ExtRational) {
        self.w[u * self.n + v] = w;
    }

    /// Pairs with finite weight in ascending `(u, v)` order.
    pub fn edge_list(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.get(u, v).is_finite() {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Adds a vertex `n` with zero-weight edges to every other vertex.
    pub fn with_super_source(&self) -> Weights {
        let n = self.n + 1;
        let mut out = Weights::new(n);
        for u in 0..self.n {
            for v in 0..self.n {
                out.set(u, v, self.get(u, v).clone());
            }
            out.set(self.n, u, ExtRational::zero());
        }
        out
    }

    /// Total weight of the closed walk `cycle[0] → … → cycle[k-1] → cycle[0]`.
    pub fn cycle_weight(&self, cycle: &[VertexId]) -> ExtRational {
        let mut total = ExtRational::zero();
        for (i, &u) in cycle.iter().enumerate() {
            let v = cycle[(i + 1) % cycle.len()];
            total = &total + self.get(u, v);
        }
        total
    }

    /// Total weight of the open walk through `path`.
    pub fn path_weight(&self, path: &[VertexId]) -> ExtRational {
        path.windows(2)
            .fold(ExtRational::zero(), |acc, p| &acc + self.get(p[0], p[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellmanFordTable {
    source: VertexId,
    pred: Vec<Option<VertexId>>,
    dist: Vec<ExtRational>,
    edges: Vec<(VertexId, VertexId)>,
    weights: Weights,
}

/// Source at distance 0, everything else unreached.
pub fn bf_init(weights: Weights, source: VertexId) -> Result<BellmanFordTable> {
    let n = weights.vertex_count();
    if source >= n {
        return Err(FlowError::InvalidArgument(format!(
            "source {source} outside 0..{n}"
        )));
    }
    let mut dist = vec![ExtRational::Infinity; n];
    dist[source] = ExtRational::zero();
    Ok(BellmanFordTable {
        source,
        pred: vec![None; n],
        dist,
        edges: weights.edge_list(),
        weights,
    })
}

impl BellmanFordTable {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn dist(&self, v: VertexId) -> &ExtRational {
        &self.dist[v]
    }

    pub fn distances(&self) -> &[ExtRational] {
        &self.dist
    }

    pub fn pred(&self, v: VertexId) -> Option<VertexId> {
        self.pred[v]
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn edge_list(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.dist.len()
    }

    /// `dist(v) ← dist(u) + w(u,v)` if strictly shorter.
    pub fn relax(&mut self, u: VertexId, v: VertexId) {
        let candidate = &self.dist[u] + self.weights.get(u, v);
        if candidate < self.dist[v] {
            self.dist[v] = candidate;
            self.pred[v] = Some(u);
        }
    }

    /// One pass over the edge list. Each edge is relaxed against the
    /// distances from the start of the pass, so after `l` passes every
    /// distance is exactly the cheapest walk with at most `l` edges.
    fn pass(&mut self) -> bool {
        let snapshot = self.dist.clone();
        let mut changed = false;
        for &(u, v) in &self.edges {
            let candidate = &snapshot[u] + self.weights.get(u, v);
            if candidate < self.dist[v] {
                self.dist[v] = candidate;
                self.pred[v] = Some(u);
                changed = true;
            }
        }
        changed
    }

    /// Checks the pointwise table invariants: finite distance iff reached,
    /// predecessors are reached, and `dist(v) ≥ dist(pred v) + w(pred v, v)`.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for v in 0..self.vertex_count() {
            let reached = self.pred[v].is_some() || v == self.source;
            if self.dist[v].is_finite() != reached {
                return Err(format!("vertex {v}: finite distance disagrees with predecessor"));
            }
            if let Some(u) = self.pred[v] {
                if u != self.source && self.pred[u].is_none() {
                    return Err(format!("predecessor {u} of {v} was never reached"));
                }
                if self.dist[v] < &self.dist[u] + self.weights.get(u, v) {
                    return Err(format!("edge ({u}, {v}) is shorter than the recorded distance"));
                }
            }
        }
        if !self.dist[self.source].is_finite() || (self.dist[self.source] != Rational::zero() && self.pred[self.source].is_none()) {
            return Err("source distance changed without a predecessor".into());
        }
        Ok(())
    }

    /// Whether following predecessors never closes a loop.
    pub fn pred_graph_is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        (0..n).all(|start| {
            let mut v = start;
            for _ in 0..=n {
                match self.pred[v] {
                    Some(u) => v = u,
                    None => return true,
                }
            }
            false
        })
    }
}

/// Runs `rounds` full passes.
pub fn bf_run(mut table: BellmanFordTable, rounds: usize) -> BellmanFordTable {
    for _ in 0..rounds {
        if !table.pass() {
            break;
        }
    }
    table
}

/// `bf_init` followed by `n − 1` rounds.
pub fn bellman_ford(weights: Weights, source: VertexId) -> Result<BellmanFordTable> {
    let rounds = weights.vertex_count().saturating_sub(1);
    Ok(bf_run(bf_init(weights, source)?, rounds))
}

/// Vertex path from the source to `v` along predecessors.
pub fn extract_path(table: &BellmanFordTable, v: VertexId) -> Result<Vec<VertexId>> {
    if v >= table.vertex_count() {
        return Err(FlowError::UnknownVertex(v));
    }
    if v == table.source {
        return Ok(vec![v]);
    }
    if table.pred[v].is_none() {
        return Err(FlowError::NotFound(format!("vertex {v} is unreachable")));
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != table.source {
        if path.len() > table.vertex_count() {
            return Err(FlowError::Internal(format!(
                "predecessor chain from {v} does not reach the source"
            )));
        }
        cur = table.pred[cur].ok_or_else(|| {
            FlowError::Internal(format!("predecessor chain from {v} breaks at {cur}"))
        })?;
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

/// Looks for a negative cycle reachable from the table's source. Returns the
/// cycle as `[c0, …, ck-1]` with edges `ci → ci+1` and `ck-1 → c0`.
///
/// A further pass improves some distance iff such a cycle exists. The cycle
/// itself comes from the cheapest walk with exactly `n` edges to an improved
/// vertex: that walk repeats a vertex, and cutting out nonnegative loops must
/// eventually expose a negative one.
pub fn detect_negative_cycle(table: &BellmanFordTable) -> Option<Vec<VertexId>> {
    let improved = table.edges.iter().find_map(|&(u, v)| {
        (&table.dist[u] + table.weights.get(u, v) < table.dist[v]).then_some(v)
    })?;
    let n = table.vertex_count();
    let weights = &table.weights;

    // level[k][v] = cheapest walk with ≤ k edges, parent[k][v] = last hop if
    // the walk has exactly k edges.
    let mut level = vec![vec![ExtRational::Infinity; n]];
    level[0][table.source] = ExtRational::zero();
    let mut parent: Vec<Vec<Option<VertexId>>> = vec![vec![None; n]];
    for k in 1..=n {
        let prev = &level[k - 1];
        let mut cur = prev.clone();
        let mut par = vec![None; n];
        for &(u, v) in &table.edges {
            let candidate = &prev[u] + weights.get(u, v);
            if candidate < cur[v] {
                cur[v] = candidate;
                par[v] = Some(u);
            }
        }
        level.push(cur);
        parent.push(par);
    }
    let target = if level[n][improved] < level[n - 1][improved] {
        improved
    } else {
        (0..n).find(|&v| level[n][v] < level[n - 1][v])?
    };

    let mut walk = vec![target];
    let (mut k, mut v) = (n, target);
    while k > 0 {
        if let Some(u) = parent[k][v] {
            walk.push(u);
            v = u;
        }
        k -= 1;
    }
    walk.reverse();

    loop {
        let (i, j) = first_repeat(&walk)?;
        let cycle = walk[i..j].to_vec();
        if weights.cycle_weight(&cycle) < Rational::zero() {
            return Some(cycle);
        }
        walk.drain(i..j);
    }
}

fn first_repeat(walk: &[VertexId]) -> Option<(usize, usize)> {
    let mut seen = HashMap::new();
    for (j, &v) in walk.iter().enumerate() {
        if let Some(&i) = seen.get(&v) {
            return Some((i, j));
        }
        seen.insert(v, j);
    }
    None
}

/// Negative cycle anywhere in the graph, found from an added super-source.
pub fn find_negative_cycle(weights: &Weights) -> Option<Vec<VertexId>> {
    let n = weights.vertex_count();
    if n == 0 {
        return None;
    }
    let extended = weights.with_super_source();
    let table = bf_run(bf_init(extended, n).expect("super-source exists"), n);
    detect_negative_cycle(&table)
}

/// Cheapest original cost per ordered vertex pair over the selected edges.
pub fn edge_weights(net: &Network, include: impl Fn(EdgeId) -> bool) -> Weights {
    let mut weights = Weights::new(net.vertex_count());
    for edge in net.edges() {
        if include(edge.id) {
            let cost = ExtRational::Finite(net.cost(edge.id).clone());
            if &cost < weights.get(edge.src, edge.dst) {
                weights.set(edge.src, edge.dst, cost);
            }
        }
    }
    weights
}

/// Cheapest usable residual edge per ordered vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualProjection {
    weights: Weights,
    realizer: Vec<Option<ResidualEdge>>,
    reversed: bool,
}

impl ResidualProjection {
    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> &ExtRational {
        self.weights.get(u, v)
    }

    pub fn realizer(&self, u: VertexId, v: VertexId) -> Option<ResidualEdge> {
        self.realizer[u * self.weights.vertex_count() + v]
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }
}

/// Projects the positive-capacity residual edges over unblocked network edges
/// onto ordered vertex pairs. Among edges for one pair the cheapest forward
/// and cheapest backward candidate (lowest edge id on ties) are compared and
/// the forward one wins ties. With `reversed`, every pair is transposed.
pub fn project_residual(
    net: &Network,
    f: &Flow,
    not_blocked: impl Fn(EdgeId) -> bool,
    reversed: bool,
) -> ResidualProjection {
    let n = net.vertex_count();
    let mut best_f: Vec<Option<(EdgeId, Rational)>> = vec![None; n * n];
    let mut best_b: Vec<Option<(EdgeId, Rational)>> = vec![None; n * n];
    for edge in net.edges() {
        let e = edge.id;
        if !not_blocked(e) {
            continue;
        }
        let cost = net.cost(e);
        if net.capacity(e).minus(&f[e]).is_positive() {
            let slot = &mut best_f[edge.src * n + edge.dst];
            if slot.as_ref().is_none_or(|(_, c)| cost < c) {
                *slot = Some((e, cost.clone()));
            }
        }
        if f[e].is_positive() {
            let back = -cost.clone();
            let slot = &mut best_b[edge.dst * n + edge.src];
            if slot.as_ref().is_none_or(|(_, c)| &back < c) {
                *slot = Some((e, back));
            }
        }
    }

    let mut weights = Weights::new(n);
    let mut realizer = vec![None; n * n];
    for u in 0..n {
        for v in 0..n {
            let idx = u * n + v;
            let pick = match (&best_f[idx], &best_b[idx]) {
                (Some((ef, cf)), Some((eb, cb))) => {
                    if cf <= cb {
                        Some((ResidualEdge::Forward(*ef), cf))
                    } else {
                        Some((ResidualEdge::Backward(*eb), cb))
                    }
                }
                (Some((ef, cf)), None) => Some((ResidualEdge::Forward(*ef), cf)),
                (None, Some((eb, cb))) => Some((ResidualEdge::Backward(*eb), cb)),
                (None, None) => None,
            };
            if let Some((r, c)) = pick {
                let (a, b) = if reversed { (v, u) } else { (u, v) };
                weights.set(a, b, ExtRational::Finite(c.clone()));
                realizer[a * n + b] = Some(r);
            }
        }
    }
    ResidualProjection {
        weights,
        realizer,
        reversed,
    }
}

/// Maps a vertex path of the projection to residual edges. For a reversed
/// projection the vertex path runs from the target back to the source and
/// the returned residual path runs forward from the source.
pub fn vertex_path_to_residual(
    projection: &ResidualProjection,
    path: &[VertexId],
) -> Result<Vec<ResidualEdge>> {
    let mut out = Vec::with_capacity(path.len().saturating_sub(1));
    for pair in path.windows(2) {
        let r = projection.realizer(pair[0], pair[1]).ok_or_else(|| {
            FlowError::NotFound(format!("no residual edge for pair ({}, {})", pair[0], pair[1]))
        })?;
        out.push(r);
    }
    if projection.reversed {
        out.reverse();
    }
    Ok(out)
}

/// An undirected forest over network edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    adj: Vec<BTreeSet<VertexId>>,
    edge_of: HashMap<(VertexId, VertexId), EdgeId>,
}

fn unordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Forest {
    pub fn new(vertex_count: usize) -> Self {
        Forest {
            adj: vec![BTreeSet::new(); vertex_count],
            edge_of: HashMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_of.get(&unordered(u, v)).copied()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_of.values().any(|&x| x == e)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edge_of.values().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_of.len()
    }

    /// Joins two components with network edge `e` between `u` and `v`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, e: EdgeId) -> Result<()> {
        if dfs_forest_path(self, u, v).is_some() {
            return Err(FlowError::Precondition(format!(
                "edge {e} would close a cycle in the forest"
            )));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_of.insert(unordered(u, v), e);
        Ok(())
    }
}

/// The unique forest path from `s` to `t`, if they share a component.
pub fn dfs_forest_path(forest: &Forest, s: VertexId, t: VertexId) -> Option<Vec<VertexId>> {
    let n = forest.vertex_count();
    if s >= n || t >= n {
        return None;
    }
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut stack = vec![s];
    visited[s] = true;
    while let Some(v) = stack.pop() {
        if v == t {
            let mut path = vec![t];
            let mut cur = t;
            while let Some(p) = parent[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for w in forest.adj[v].iter().rev() {
            if !visited[*w] {
                visited[*w] = true;
                parent[*w] = Some(v);
                stack.push(*w);
            }
        }
    }
    None
}
