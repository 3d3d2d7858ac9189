//! Independent oracles shared by the integration tests.
//!
//! Nothing here goes through the library's spectral decomposition: walks are
//! computed by a dense complex matrix exponential and graphs are built from
//! explicit adjacency predicates.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sedwalk::{MatrixKind, Weight, WeightedGraph};

/// `exp(i t H)` by scaling and squaring with a degree-24 Taylor polynomial.
pub fn expm_i(h: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    let a: DMatrix<Complex64> = h.map(|x| Complex64::new(0.0, x * t));
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = a.map(|z| z / 2f64.powi(s));
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Matrix driving the walk, built from the adjacency matrix alone.
pub fn hamiltonian(adj: &DMatrix<f64>, kind: MatrixKind) -> DMatrix<f64> {
    let n = adj.nrows();
    // A loop of weight w contributes 2w to the degree.
    let deg = DMatrix::from_fn(n, n, |i, j| if i == j { adj.row(i).sum() + adj[(i, i)] } else { 0.0 });
    match kind {
        MatrixKind::Adjacency => adj.clone(),
        MatrixKind::Laplacian => &deg - adj,
        MatrixKind::Generalized(q) => deg * q + adj,
    }
}

pub fn oracle_magnitude(adj: &DMatrix<f64>, kind: MatrixKind, u: usize, v: usize, t: f64) -> f64 {
    expm_i(&hamiltonian(adj, kind), t)[(u, v)].norm()
}

/// Adjacency matrix from a symmetric 0/1 predicate.
pub fn adj_from<F: Fn(usize, usize) -> bool>(n: usize, f: F) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i != j && f(i, j) { 1.0 } else { 0.0 })
}

/// Dense adjacency of a library graph, read edge by edge.
pub fn adj_of(g: &WeightedGraph) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(g.n(), g.n());
    for (u, v, w) in g.edges() {
        m[(u, v)] = w.value();
        m[(v, u)] = w.value();
    }
    m
}

/// `K_{n_1,...,n_k}` with parts laid out consecutively.
pub fn multipartite_adj(parts: &[usize]) -> DMatrix<f64> {
    let part: Vec<usize> = parts.iter().enumerate().flat_map(|(i, &p)| std::iter::repeat(i).take(p)).collect();
    adj_from(part.len(), |i, j| part[i] != part[j])
}

/// `K_{m_1} × ... × K_{m_k}`: adjacent iff every coordinate differs.
pub fn complete_product_adj(ms: &[usize]) -> DMatrix<f64> {
    let n: usize = ms.iter().product();
    let coords = |mut x: usize| {
        let mut c = vec![0; ms.len()];
        for (k, &m) in ms.iter().enumerate().rev() {
            c[k] = x % m;
            x /= m;
        }
        c
    };
    adj_from(n, |i, j| coords(i).iter().zip(coords(j)).all(|(a, b)| *a != b))
}

/// Sampled minimum of `f` on `[a, b]`: `(argmin, min)`.
pub fn brute_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> (f64, f64) {
    (0..=points)
        .map(|i| a + (b - a) * i as f64 / points as f64)
        .map(|t| (t, f(t)))
        .fold((a, f64::INFINITY), |best, p| if p.1 < best.1 { p } else { best })
}

/// Brute minimum refined by local ternary search around the best sample.
pub fn refined_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize) -> (f64, f64) {
    let (t0, _) = brute_min(&f, a, b, points);
    let h = (b - a) / points as f64;
    let (mut lo, mut hi) = ((t0 - h).max(a), (t0 + h).min(b));
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected Erdős–Rényi graph on `n` vertices (a path is added to force connectivity).
pub fn random_connected(r: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if v == u + 1 || r.gen_bool(p) {
                edges.push((u, v, 1i64));
            }
        }
    }
    WeightedGraph::from_edges(n, edges).expect("valid edges")
}

/// Random graph without the connectivity patch.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v, 1i64).expect("valid edge");
            }
        }
    }
    g
}

/// Test graphs on at most 12 vertices, including weighted and looped ones.
pub fn corpus() -> Vec<(String, WeightedGraph)> {
    use sedwalk::{dsl, graph};
    let exprs = [
        "K(2)", "K(5)", "P(3)", "P(6)", "C(5)", "C(8)", "S(3)", "S(6)", "CP(6)", "CP(8)", "KM(1,2,3)",
        "KM(3,4)", "KM(2,2,1)", "KM(1,1,3)", "Gamma(2,3)", "Gamma(3,2,2)", "Gamma(2,2,4,4)", "dprod(K(3),K(4))",
        "dprod(K(2),K(5))", "dprod(K(3),K(3))", "blowup(2,P(3))", "blowup(3,K(3))", "join(O(2),C(4))",
        "join(K(2),P(5))", "cprod(P(3),K(2))", "join(O(2),K(6))", "union(K(3),P(2))",
    ];
    let mut out: Vec<(String, WeightedGraph)> =
        exprs.iter().map(|e| (e.to_string(), dsl::parse(e).expect("corpus expression"))).collect();
    out.push(("P5'".into(), graph::path_with_twin(5).expect("P5'")));
    let mut w = WeightedGraph::from_edges(
        5,
        [(0, 1, Weight::from(2i64)), (1, 2, Weight::from(num_rational::Rational64::new(1, 2))), (2, 3, Weight::from(1i64)), (3, 4, Weight::from(0.7)), (0, 4, Weight::from(1i64))],
    )
    .expect("weighted");
    w.add_loop(2, 3i64).expect("loop");
    out.push(("weighted-loop".into(), w));
    let mut r = rng(7);
    for i in 0..4 {
        out.push((format!("random-{i}"), random_connected(&mut r, 6 + 2 * i, 0.4)));
    }
    out
}
