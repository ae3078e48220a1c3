//! Weight initialisation: uniform draws, or weights read off the degree
//! sequence of a Barabási–Albert or Erdős–Rényi random graph.

use std::collections::HashSet;
use std::fmt;

use rand::Rng as _;
use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::seed::{self, Rng};

/// Fraction of highest-degree nodes whose weights form the pool.
pub const DEFAULT_KEEP_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightRange {
    pub low: f64,
    pub high: f64,
}

impl WeightRange {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite()) {
            return Err(Error::NonFinite("weight range"));
        }
        if low < 0.0 || low >= high {
            return Err(Error::InvalidParams(format!(
                "weight range needs 0 <= low < high, got {low}:{high}"
            )));
        }
        Ok(WeightRange { low, high })
    }

    /// Degenerate range holding a single weight.
    pub fn point(w: f64) -> Result<Self> {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidParams(format!("weight must be finite and >= 0, got {w}")));
        }
        Ok(WeightRange { low: w, high: w })
    }

    pub fn is_point(&self) -> bool {
        self.low == self.high
    }

    /// Accepts anything [`WeightRange::new`] or [`WeightRange::point`] would build.
    pub fn validate(&self) -> Result<()> {
        if self.is_point() {
            Self::point(self.low).map(|_| ())
        } else {
            Self::new(self.low, self.high).map(|_| ())
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    pub fn contains(&self, w: f64) -> bool {
        (self.low..=self.high).contains(&w)
    }
}

impl fmt::Display for WeightRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.low)
        } else {
            write!(f, "{}:{}", self.low, self.high)
        }
    }
}

/// Simple undirected graph; edges stored as `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidParams(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::InvalidParams(format!("self-loop at node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidParams(format!("duplicate edge {e:?}")));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Edge list text, one `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }
}

/// Barabási–Albert growth from `m` isolated seed nodes. Each new node links
/// to `m` distinct existing nodes picked with probability proportional to
/// degree + 1, giving exactly `(n - m) * m` edges.
pub fn barabasi_albert(n: usize, m: usize, rng: &mut Rng) -> Result<Graph> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParams(format!(
            "Barabási–Albert needs 1 <= m < n, got n={n}, m={m}"
        )));
    }
    // Node u appears degree(u) + 1 times, so a uniform pick is preferential.
    let mut urn: Vec<usize> = (0..m).collect();
    urn.reserve(n + 2 * (n - m) * m);
    let mut edges = Vec::with_capacity((n - m) * m);
    let mut targets = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        while targets.len() < m {
            let u = urn[rng.random_range(0..urn.len())];
            if !targets.contains(&u) {
                targets.push(u);
            }
        }
        for &u in &targets {
            edges.push((u, v));
            urn.push(u);
            urn.push(v);
        }
        urn.push(v);
    }
    Ok(Graph { n, edges })
}

/// G(n, p): every unordered pair kept independently with probability `p`.
/// Uses geometric skips over the pair sequence.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "Erdős–Rényi needs 0 <= p <= 1, got {p}"
        )));
    }
    let mut edges = Vec::new();
    if n < 2 || p == 0.0 {
        return Ok(Graph { n, edges });
    }
    if p == 1.0 {
        for v in 1..n {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        return Ok(Graph { n, edges });
    }
    let log_q = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Ok(Graph { n, edges })
}

/// `count` independent draws, uniform on `[low, high]`.
pub fn uniform_weights(count: usize, range: WeightRange, rng: &mut Rng) -> Vec<f64> {
    let dist = Uniform::new_inclusive(range.low, range.high).expect("validated range");
    (0..count).map(|_| dist.sample(rng)).collect()
}

/// One node's row in the degree/weight table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeWeight {
    pub node: usize,
    pub degree: usize,
    pub weight: f64,
    pub kept: bool,
}

/// Maps degrees linearly onto `range` and orders nodes by degree (desc),
/// then node id (asc). The first `ceil(keep_fraction * n)` are kept.
pub fn degree_table(graph: &Graph, range: WeightRange, keep_fraction: f64) -> Result<Vec<NodeWeight>> {
    if graph.n() < 2 {
        return Err(Error::InvalidParams(format!(
            "need at least two nodes, got {}",
            graph.n()
        )));
    }
    if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "keep fraction must be in (0, 1], got {keep_fraction}"
        )));
    }
    let degrees = graph.degrees();
    let d_min = *degrees.iter().min().unwrap();
    let d_max = *degrees.iter().max().unwrap();
    let weight_of = |d: usize| {
        if d_max == d_min {
            range.midpoint()
        } else {
            range.low + (d - d_min) as f64 / (d_max - d_min) as f64 * (range.high - range.low)
        }
    };
    let mut order: Vec<usize> = (0..graph.n()).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let keep = keep_count(graph.n(), keep_fraction);
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(rank, node)| NodeWeight {
            node,
            degree: degrees[node],
            weight: weight_of(degrees[node]),
            kept: rank < keep,
        })
        .collect())
}

fn keep_count(n: usize, keep_fraction: f64) -> usize {
    // Guard against 0.8 * 5 = 4.000000000000001 rounding up to 5.
    let raw = keep_fraction * n as f64;
    let rounded = raw.round();
    if (raw - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        raw.ceil() as usize
    }
}

/// Weight pool in descending source-node degree order.
pub fn degrees_to_weights(graph: &Graph, range: WeightRange, keep_fraction: f64) -> Result<Vec<f64>> {
    Ok(degree_table(graph, range, keep_fraction)?
        .into_iter()
        .filter(|r| r.kept)
        .map(|r| r.weight)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitMethod {
    UniformRandom,
    /// `n = None` sizes the graph so the kept pool covers the synapse count.
    BarabasiAlbert { n: Option<usize>, m: usize },
    /// `p = None` matches the expected edge count of BA with the same `n`, `m`.
    ErdosRenyi { n: Option<usize>, p: Option<f64> },
}

/// Edges-per-node used for BA, and as the reference for ER's default `p`.
pub const DEFAULT_BA_M: usize = 2;

impl InitMethod {
    pub fn name(&self) -> &'static str {
        match self {
            InitMethod::UniformRandom => "uniform",
            InitMethod::BarabasiAlbert { .. } => "barabasi_albert",
            InitMethod::ErdosRenyi { .. } => "erdos_renyi",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InitMethod::UniformRandom => Ok(()),
            InitMethod::BarabasiAlbert { n, m } => {
                if m < 1 || n.is_some_and(|n| m >= n) {
                    return Err(Error::InvalidParams(format!(
                        "Barabási–Albert needs 1 <= m < n, got n={n:?}, m={m}"
                    )));
                }
                Ok(())
            }
            InitMethod::ErdosRenyi { n, p } => {
                if p.is_some_and(|p| !(0.0..=1.0).contains(&p)) {
                    return Err(Error::InvalidParams(format!("ER p out of [0, 1]: {p:?}")));
                }
                if n.is_some_and(|n| n < 2) {
                    return Err(Error::InvalidParams("ER needs n >= 2".into()));
                }
                Ok(())
            }
        }
    }
}

/// Graph size that yields a pool of at least `count` weights.
pub fn auto_graph_size(count: usize, min_nodes: usize) -> usize {
    let n = (count as f64 / DEFAULT_KEEP_FRACTION).ceil() as usize;
    n.max(min_nodes).max(2)
}

/// ER edge probability whose expected edge count equals BA(n, m)'s.
pub fn matched_er_p(n: usize, m: usize) -> f64 {
    if n < 2 || m >= n {
        return 0.0;
    }
    (2.0 * ((n - m) * m) as f64 / (n * (n - 1)) as f64).min(1.0)
}

/// Builds the graph a method would draw for `count` synapses.
pub fn method_graph(method: &InitMethod, count: usize, rng: &mut Rng) -> Result<Option<Graph>> {
    match *method {
        InitMethod::UniformRandom => Ok(None),
        InitMethod::BarabasiAlbert { n, m } => {
            let n = n.unwrap_or_else(|| auto_graph_size(count, m + 1));
            barabasi_albert(n, m, rng).map(Some)
        }
        InitMethod::ErdosRenyi { n, p } => {
            let n = n.unwrap_or_else(|| auto_graph_size(count, DEFAULT_BA_M + 1));
            let p = p.unwrap_or_else(|| matched_er_p(n, DEFAULT_BA_M));
            erdos_renyi(n, p, rng).map(Some)
        }
    }
}

/// `count` weights for one initialisation method. Graph methods cycle
/// through their degree-ordered pool when it is shorter than `count`.
pub fn draw_weights(method: &InitMethod, count: usize, range: WeightRange, rng: &mut Rng) -> Result<Vec<f64>> {
    method.validate()?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let Some(graph) = method_graph(method, count, rng)? else {
        return Ok(uniform_weights(count, range, rng));
    };
    let pool = degrees_to_weights(&graph, range, DEFAULT_KEEP_FRACTION)?;
    if pool.is_empty() {
        return Err(Error::EmptyPool(format!(
            "{} graph with {} nodes gave no weights",
            method.name(),
            graph.n()
        )));
    }
    Ok(pool.iter().copied().cycle().take(count).collect())
}

/// Convenience: [`draw_weights`] from a bare seed.
pub fn draw_weights_seeded(method: &InitMethod, count: usize, range: WeightRange, seed: u64) -> Result<Vec<f64>> {
    draw_weights(method, count, range, &mut seed::rng(seed))
}
