//! Weighted undirected graphs with optional loops, their matrices, and the
//! graph constructions used throughout the crate.
//!
//! Vertex ordering is part of every constructor's contract: joins place the
//! left operand first, blow-ups are copy-major and products are row-major.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::GraphError;

/// An edge weight, kept exact whenever the input was rational.
#[derive(Clone, Copy, Debug)]
pub enum Weight {
    Exact(Rational64),
    Approx(f64),
}

impl Weight {
    pub fn one() -> Self {
        Weight::Exact(Rational64::from_integer(1))
    }

    pub fn integer(k: i64) -> Self {
        Weight::Exact(Rational64::from_integer(k))
    }

    pub fn value(&self) -> f64 {
        match self {
            Weight::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Weight::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    pub fn as_exact(&self) -> Option<Rational64> {
        match self {
            Weight::Exact(r) => Some(*r),
            Weight::Approx(_) => None,
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Weight::Exact(r) => r.is_positive(),
            Weight::Approx(x) => x.is_finite() && *x > 0.0,
        }
    }

    /// Product of two weights, exact when both are exact and no overflow occurs.
    pub fn mul(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => match a.checked_mul(b) {
                Some(p) => Weight::Exact(p),
                None => Weight::Approx(self.value() * other.value()),
            },
            _ => Weight::Approx(self.value() * other.value()),
        }
    }

    /// Sum of two weights, exact when both are exact and no overflow occurs.
    pub fn add(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => match a.checked_add(b) {
                Some(s) => Weight::Exact(s),
                None => Weight::Approx(self.value() + other.value()),
            },
            _ => Weight::Approx(self.value() + other.value()),
        }
    }
}

/// Relative tolerance used when comparing weights that are not both exact.
const APPROX_WEIGHT_TOL: f64 = 1e-12;

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.value(), other.value());
                (a - b).abs() <= APPROX_WEIGHT_TOL * a.abs().max(b.abs()).max(1.0)
            }
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Weight::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Weight::Approx(x) => write!(f, "{x:e}"),
        }
    }
}

impl From<i64> for Weight {
    fn from(k: i64) -> Self {
        Weight::integer(k)
    }
}

impl From<Rational64> for Weight {
    fn from(r: Rational64) -> Self {
        Weight::Exact(r)
    }
}

impl From<f64> for Weight {
    fn from(x: f64) -> Self {
        Weight::Approx(x)
    }
}

/// Which Hermitian matrix drives the walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    Generalized(f64),
}

impl MatrixKind {
    /// `Some(q)` when the matrix is `qD + A`; the Laplacian is `-(M_{-1})`.
    pub fn q(&self) -> Option<f64> {
        match self {
            MatrixKind::Adjacency => Some(0.0),
            MatrixKind::Laplacian => None,
            MatrixKind::Generalized(q) => Some(*q),
        }
    }

    /// True when the matrix has integer entries for every integer-weighted graph.
    pub fn is_integral(&self) -> bool {
        match self {
            MatrixKind::Adjacency | MatrixKind::Laplacian => true,
            MatrixKind::Generalized(q) => q.fract() == 0.0 && q.is_finite(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            MatrixKind::Adjacency => "A".to_string(),
            MatrixKind::Laplacian => "L".to_string(),
            MatrixKind::Generalized(q) => format!("Mq:{q}"),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Vertex-labelled symmetric weighted graph with optional loops.
///
/// Edges are stored once, keyed by `(u, v)` with `u <= v`.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Weight>,
    labels: Option<Vec<String>>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl WeightedGraph {
    /// Edgeless graph on `n` vertices; `n = 0` is allowed only here.
    pub fn with_vertices(n: usize) -> Self {
        Self {
            n,
            edges: BTreeMap::new(),
            labels: None,
        }
    }

    /// Builds a graph from an edge list, rejecting duplicates and non-positive weights.
    pub fn from_edges<W: Into<Weight>>(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, W)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::with_vertices(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge<W: Into<Weight>>(&mut self, u: usize, v: usize, w: W) -> Result<(), GraphError> {
        let w = w.into();
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if !w.is_positive() {
            return Err(GraphError::NonPositiveWeight { u, v, weight: w.value() });
        }
        let k = key(u, v);
        if self.edges.contains_key(&k) {
            return Err(GraphError::DuplicateEdge { u: k.0, v: k.1 });
        }
        self.edges.insert(k, w);
        Ok(())
    }

    /// Adds a loop of weight `w` at `u`.
    pub fn add_loop<W: Into<Weight>>(&mut self, u: usize, w: W) -> Result<(), GraphError> {
        self.add_edge(u, u, w)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, u: usize) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Iterates over `(u, v, weight)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<Weight> {
        self.edges.get(&key(u, v)).copied()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.keys().any(|(u, v)| u == v)
    }

    pub fn is_exact(&self) -> bool {
        self.edges.values().all(Weight::is_exact)
    }

    /// True when every weight is an exact integer.
    pub fn has_integer_weights(&self) -> bool {
        self.edges
            .values()
            .all(|w| matches!(w, Weight::Exact(r) if r.is_integer()))
    }

    /// Neighbours of `u` other than `u` itself, with weights.
    pub fn neighbors(&self, u: usize) -> Vec<(usize, Weight)> {
        let mut out = Vec::new();
        for (&(a, b), &w) in &self.edges {
            if a == u && b != u {
                out.push((b, w));
            } else if b == u && a != u {
                out.push((a, w));
            }
        }
        out.sort_by_key(|p| p.0);
        out
    }

    /// Loop weight at `u`, zero when absent.
    pub fn loop_weight(&self, u: usize) -> Weight {
        self.weight(u, u).unwrap_or(Weight::integer(0))
    }

    /// `deg(u) = 2 w_uu + sum_{j != u} w_uj`, exact when possible.
    pub fn degree(&self, u: usize) -> Weight {
        let mut d = Weight::integer(0);
        for (&(a, b), w) in &self.edges {
            if a == u && b == u {
                d = d.add(&w.mul(&Weight::integer(2)));
            } else if a == u || b == u {
                d = d.add(w);
            }
        }
        d
    }

    /// Row sum of the adjacency matrix at `u`.
    pub fn row_sum(&self, u: usize) -> Weight {
        let mut d = Weight::integer(0);
        for (&(a, b), w) in &self.edges {
            if a == u || b == u {
                d = d.add(w);
            }
        }
        d
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (&(u, v), w) in &self.edges {
            m[(u, v)] = w.value();
            m[(v, u)] = w.value();
        }
        m
    }

    pub fn degree_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if i == j { self.degree(i).value() } else { 0.0 })
    }

    pub fn laplacian_matrix(&self) -> DMatrix<f64> {
        self.degree_matrix() - self.adjacency_matrix()
    }

    pub fn matrix(&self, kind: MatrixKind) -> DMatrix<f64> {
        match kind {
            MatrixKind::Adjacency => self.adjacency_matrix(),
            MatrixKind::Laplacian => self.laplacian_matrix(),
            MatrixKind::Generalized(q) => self.degree_matrix() * q + self.adjacency_matrix(),
        }
    }

    /// Returns `k` when every adjacency row sum equals `k`.
    pub fn is_weighted_regular(&self) -> Option<f64> {
        if self.n == 0 {
            return None;
        }
        let first = self.row_sum(0);
        if (1..self.n).all(|u| self.row_sum(u) == first) {
            Some(first.value())
        } else {
            None
        }
    }

    /// True when the graph is bipartite (loops make it non-bipartite).
    pub fn is_bipartite(&self) -> bool {
        if self.has_loops() {
            return false;
        }
        let mut colour = vec![None; self.n];
        for s in 0..self.n {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let cx = colour[x].unwrap_or(false);
                for (y, _) in self.neighbors(x) {
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            stack.push(y);
                        }
                        Some(cy) if cy == cx => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for (y, _) in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabels vertices: vertex `u` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return Err(GraphError::InvalidPermutation);
        }
        let mut g = Self::with_vertices(self.n);
        for (&(u, v), &w) in &self.edges {
            g.add_edge(perm[u], perm[v], w)?;
        }
        Ok(g)
    }

    /// Undirected isomorphism test honouring weights and loops.
    pub fn is_isomorphic(&self, other: &WeightedGraph) -> bool {
        if self.n != other.n || self.edges.len() != other.edges.len() {
            return false;
        }
        let a = self.to_petgraph();
        let b = other.to_petgraph();
        petgraph::algo::is_isomorphic_matching(&a, &b, |x, y| x == y, |x, y| x == y)
    }

    fn to_petgraph(&self) -> petgraph::graph::UnGraph<Weight, Weight> {
        let mut g = petgraph::graph::UnGraph::with_capacity(self.n, self.edges.len());
        let nodes: Vec<_> = (0..self.n).map(|u| g.add_node(self.loop_weight(u))).collect();
        for (&(u, v), &w) in &self.edges {
            if u != v {
                g.add_edge(nodes[u], nodes[v], w);
            }
        }
        g
    }
}

fn need_positive(n: usize, what: &'static str) -> Result<(), GraphError> {
    if n == 0 {
        Err(GraphError::EmptyConstruction(what))
    } else {
        Ok(())
    }
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<WeightedGraph, GraphError> {
    need_positive(n, "complete")?;
    let mut g = WeightedGraph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v, 1)?;
        }
    }
    Ok(g)
}

/// Empty graph `O_n`.
pub fn empty(n: usize) -> Result<WeightedGraph, GraphError> {
    need_positive(n, "empty")?;
    Ok(WeightedGraph::with_vertices(n))
}

/// Path `P_n` on vertices `0..n` in order.
pub fn path(n: usize) -> Result<WeightedGraph, GraphError> {
    need_positive(n, "path")?;
    WeightedGraph::from_edges(n, (1..n).map(|v| (v - 1, v, 1)))
}

/// Cycle `C_n`, `n >= 3`.
pub fn cycle(n: usize) -> Result<WeightedGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::TooSmall { what: "cycle", min: 3, got: n });
    }
    WeightedGraph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n, 1)))
}

/// Star `K_{1,n}` with the centre at vertex 0.
pub fn star(n: usize) -> Result<WeightedGraph, GraphError> {
    need_positive(n, "star")?;
    WeightedGraph::from_edges(n + 1, (1..=n).map(|v| (0, v, 1)))
}

/// Circulant graph on `Z_n` joining `i` and `i ± s` for each offset `s`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<WeightedGraph, GraphError> {
    need_positive(n, "circulant")?;
    let mut g = WeightedGraph::with_vertices(n);
    for u in 0..n {
        for &s in offsets {
            let s = s % n;
            if s == 0 {
                continue;
            }
            let v = (u + s) % n;
            if g.weight(u, v).is_none() {
                g.add_edge(u, v, 1)?;
            }
        }
    }
    Ok(g)
}

/// `P_n` on vertices `0..n` plus vertex `n` adjacent to vertex 1, so that
/// vertices 0 and `n` are non-adjacent twins.
pub fn path_with_twin(n: usize) -> Result<WeightedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooSmall { what: "path_with_twin", min: 2, got: n });
    }
    let mut g = WeightedGraph::with_vertices(n + 1);
    for v in 1..n {
        g.add_edge(v - 1, v, 1)?;
    }
    g.add_edge(1, n, 1)?;
    Ok(g)
}

/// Disjoint union with `x`'s vertices first.
pub fn disjoint_union(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(x.n + y.n);
    for (&k, &w) in &x.edges {
        g.edges.insert(k, w);
    }
    for (&(u, v), &w) in &y.edges {
        g.edges.insert((u + x.n, v + x.n), w);
    }
    g
}

/// Join `X ∨ Y`: disjoint union plus unit-weight edges between the parts.
pub fn join(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let mut g = disjoint_union(x, y);
    for u in 0..x.n {
        for v in 0..y.n {
            g.edges.insert((u, x.n + v), Weight::one());
        }
    }
    g
}

/// `K_{n_1,...,n_k}` as an iterated join of empty graphs.
pub fn complete_multipartite(parts: &[usize]) -> Result<WeightedGraph, GraphError> {
    if parts.is_empty() {
        return Err(GraphError::EmptyConstruction("complete_multipartite"));
    }
    let mut g = empty(parts[0])?;
    for &p in &parts[1..] {
        g = join(&g, &empty(p)?);
    }
    Ok(g)
}

/// Cocktail party graph `CP(2k)`, the join of `k` copies of `O_2`.
pub fn cocktail_party(k: usize) -> Result<WeightedGraph, GraphError> {
    need_positive(k, "cocktail_party")?;
    complete_multipartite(&vec![2; k])
}

/// Threshold graph `Γ(m_1, ..., m_h)`.
///
/// Cells alternate between empty and complete, starting with `O_{m_1}` when
/// `starts_empty`. A complete cell is joined to everything built so far and an
/// empty cell is added as a disjoint union; new cells occupy the next indices.
pub fn threshold(parts: &[usize], starts_empty: bool) -> Result<WeightedGraph, GraphError> {
    if parts.is_empty() {
        return Err(GraphError::EmptyConstruction("threshold"));
    }
    let mut g = if starts_empty { empty(parts[0])? } else { complete(parts[0])? };
    for (i, &m) in parts.iter().enumerate().skip(1) {
        let cell_is_complete = (i % 2 == 1) == starts_empty;
        g = if cell_is_complete {
            join(&g, &complete(m)?)
        } else {
            disjoint_union(&g, &empty(m)?)
        };
    }
    Ok(g)
}

/// Direct (tensor) product with adjacency `A(X) ⊗ A(Y)`, row-major vertices.
pub fn direct_product(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let ny = y.n;
    let mut g = WeightedGraph::with_vertices(x.n * ny);
    let ex: Vec<_> = x.edges().collect();
    let ey: Vec<_> = y.edges().collect();
    for &(a, b, wx) in &ex {
        for &(c, d, wy) in &ey {
            let w = wx.mul(&wy);
            g.edges.insert(key(a * ny + c, b * ny + d), w);
            g.edges.insert(key(a * ny + d, b * ny + c), w);
        }
    }
    g
}

/// Blow-up of `m` copies of `X`, adjacency `J_m ⊗ A(X)`, copy-major vertices.
pub fn blow_up(m: usize, x: &WeightedGraph) -> Result<WeightedGraph, GraphError> {
    need_positive(m, "blow_up")?;
    let n = x.n;
    let mut g = WeightedGraph::with_vertices(m * n);
    for (u, v, w) in x.edges() {
        for i in 0..m {
            for j in 0..m {
                g.edges.insert(key(i * n + u, j * n + v), w);
            }
        }
    }
    Ok(g)
}

/// Cartesian product with adjacency `A(X) ⊗ I + I ⊗ A(Y)`, row-major vertices.
pub fn cartesian_product(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let ny = y.n;
    let mut g = WeightedGraph::with_vertices(x.n * ny);
    for (a, b, w) in x.edges() {
        for c in 0..ny {
            g.edges.insert(key(a * ny + c, b * ny + c), w);
        }
    }
    for a in 0..x.n {
        for (c, d, w) in y.edges() {
            g.edges.insert(key(a * ny + c, a * ny + d), w);
        }
    }
    g
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {} vertices with {} edges", self.n, self.edges.len())
    }
}
