mod common;

use common::*;
use nalgebra::DVector;
use rand::Rng;
use sedwalk::twins::{self, TwinBranch};
use sedwalk::{dsl, graph, spectral, MatrixKind, TwinError, WalkEvaluator, WeightedGraph};

const KINDS: [MatrixKind; 3] = [MatrixKind::Adjacency, MatrixKind::Laplacian, MatrixKind::Generalized(0.5)];

/// Twin classes from equality of adjacency rows outside the pair.
fn brute_twin_classes(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let a = adj_of(g);
    let n = g.n();
    let twins = |u: usize, v: usize| a[(u, u)] == a[(v, v)] && (0..n).filter(|&w| w != u && w != v).all(|w| a[(u, w)] == a[(v, w)]);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        if seen[u] {
            continue;
        }
        let class: Vec<usize> = (u..n).filter(|&v| v == u || twins(u, v)).collect();
        if class.len() > 1 {
            class.iter().for_each(|&v| seen[v] = true);
            out.push(class);
        }
    }
    out
}

fn looped_twins() -> WeightedGraph {
    // 0 and 1 carry equal loops and the same neighbourhood {2, 3}.
    let mut g = WeightedGraph::from_edges(4, [(0, 2, 1i64), (1, 2, 1), (0, 3, 2), (1, 3, 2), (2, 3, 1), (0, 1, 3)]).unwrap();
    g.add_loop(0, 2i64).unwrap();
    g.add_loop(1, 2i64).unwrap();
    g
}

#[test]
fn twin_sets_match_brute_force() {
    let mut graphs = corpus();
    graphs.push(("looped".into(), looped_twins()));
    for (name, g) in graphs {
        let sets: Vec<Vec<usize>> = twins::find_twin_sets(&g, MatrixKind::Adjacency).into_iter().map(|t| t.members).collect();
        assert_eq!(sets, brute_twin_classes(&g), "{name}");
    }
}

#[test]
fn theta_is_the_eigenvalue_of_twin_differences() {
    let mut graphs = corpus();
    graphs.push(("looped".into(), looped_twins()));
    for (name, g) in graphs {
        let adj = adj_of(&g);
        for kind in KINDS {
            let h = hamiltonian(&adj, kind);
            for t in twins::find_twin_sets(&g, kind) {
                let (u, v) = (t.members[0], t.members[1]);
                let mut x = DVector::zeros(g.n());
                x[u] = 1.0;
                x[v] = -1.0;
                let r = &h * &x - &x * t.theta;
                assert!(r.norm() < 1e-12, "{name} {kind:?}: theta {} residual {}", t.theta, r.norm());
                assert_eq!(t.theta, t.theta_for(kind));
            }
        }
    }
}

#[test]
fn theta_formula() {
    assert_eq!(twins::twin_theta(MatrixKind::Adjacency, 4.0, 0.0, 1.0), -1.0);
    assert_eq!(twins::twin_theta(MatrixKind::Laplacian, 4.0, 0.0, 1.0), 5.0);
    assert_eq!(twins::twin_theta(MatrixKind::Generalized(2.0), 3.0, 1.0, 0.0), 7.0);
    // K_n: one adjacent twin set; theta_L = n.
    let t = twins::find_twin_sets(&graph::complete(6).unwrap(), MatrixKind::Laplacian);
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].members, (0..6).collect::<Vec<_>>());
    assert_eq!((t[0].eta, t[0].theta), (1.0, 6.0));
}

#[test]
fn theta_split_removes_twin_differences() {
    for expr in ["KM(2,2,1)", "KM(3,1,2)", "S(4)", "join(O(2),C(4))", "Gamma(2,3,2)", "CP(6)"] {
        let g = dsl::parse(expr).unwrap();
        for kind in [MatrixKind::Adjacency, MatrixKind::Laplacian] {
            let dec = spectral::decompose(&g, kind).unwrap();
            for t in twins::find_twin_sets(&g, kind) {
                let s = twins::theta_split(&dec, &t).unwrap();
                assert_eq!(s.b1_dim, t.len() - 1);
                let f2 = &s.f * &s.f;
                assert!((&f2 - &s.f).norm() < 1e-9, "{expr}: F is not a projector");
                let rank = s.f.trace().round() as usize;
                assert_eq!(rank, s.rank_f(), "{expr}");
                let (u, v) = (t.members[0], t.members[1]);
                for w in 0..g.n() {
                    assert!((s.f[(w, u)] - s.f[(w, v)]).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn dichotomy_examples() {
    // Three or more twins: sedentary with 1 - 2/|T|.
    let g = graph::star(4).unwrap();
    let dec = spectral::decompose(&g, MatrixKind::Adjacency).unwrap();
    let t = twins::twin_set_of(&g, MatrixKind::Adjacency, 1).unwrap();
    assert_eq!(t.len(), 4);
    let (b, _) = twins::twin_dichotomy(&dec, &t, 1).unwrap();
    match b {
        TwinBranch::Sedentary { large_set: true, bound } => assert!((bound - 0.5).abs() < 1e-12),
        other => panic!("{other:?}"),
    }

    // P5': twins 0 and 5; theta = 0 has multiplicity 2, so F meets u with
    // F_uu = 0.6 - 1/2 and the bound is 1/5.
    let g = graph::path_with_twin(5).unwrap();
    let dec = spectral::decompose(&g, MatrixKind::Adjacency).unwrap();
    let t = twins::twin_set_of(&g, MatrixKind::Adjacency, 0).unwrap();
    assert_eq!(t.members, vec![0, 5]);
    let (b, s) = twins::twin_dichotomy(&dec, &t, 0).unwrap();
    match b {
        TwinBranch::Sedentary { large_set: false, bound } => assert!((bound - 0.2).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
    assert_eq!(s.theta_multiplicity, 2);
    assert!((s.f_uu(0) - 0.1).abs() < 1e-9);

    // K_{2,2,1} Laplacian: theta = 3 has multiplicity 2, one per twin pair;
    // F vanishes on both pairs.
    let g = dsl::parse("KM(2,2,1)").unwrap();
    let dec = spectral::decompose(&g, MatrixKind::Laplacian).unwrap();
    let t = twins::twin_set_of(&g, MatrixKind::Laplacian, 0).unwrap();
    let (b, s) = twins::twin_dichotomy(&dec, &t, 0).unwrap();
    assert_eq!(s.theta_multiplicity, 2);
    assert!(s.f_uu(0).abs() < 1e-9);
    assert_eq!(b, TwinBranch::StronglyCospectral { partner: 1 });

    assert!(matches!(twins::twin_dichotomy(&dec, &t, 4), Err(TwinError::NotMember(4))));
}

#[test]
fn theta_missing_is_reported() {
    let g = graph::star(3).unwrap();
    let t = twins::twin_set_of(&g, MatrixKind::Adjacency, 1).unwrap();
    // A decomposition of a different graph has no such eigenvalue.
    let other = spectral::decompose(&graph::complete(4).unwrap(), MatrixKind::Adjacency).unwrap();
    assert!(matches!(twins::theta_split(&other, &t), Err(TwinError::ThetaMissing { .. })));
}

#[test]
fn twin_inequality_holds_on_the_corpus() {
    let mut r = rng(21);
    let mut graphs = corpus();
    graphs.push(("looped".into(), looped_twins()));
    let mut pairs = 0;
    for (name, g) in graphs {
        for kind in KINDS {
            let w = WalkEvaluator::from_graph(&g, kind).unwrap();
            for t in twins::find_twin_sets(&g, kind) {
                for &u in &t.members {
                    for &v in t.members.iter().filter(|&&v| v != u) {
                        pairs += 1;
                        for _ in 0..200 {
                            let s: f64 = r.gen_range(0.0..50.0);
                            let sum = w.magnitude(u, u, s) + w.magnitude(u, v, s);
                            assert!(sum >= 1.0 - 1e-9, "{name} {kind:?} ({u},{v}) t={s}: {sum}");
                        }
                    }
                }
            }
        }
    }
    assert!(pairs > 100);
}
