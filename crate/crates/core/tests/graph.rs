mod common;

use common::*;
use num_rational::Rational64;
use sedwalk::graph::{self, Weight};
use sedwalk::{dsl, edgelist, GraphError, MatrixKind, WeightedGraph};

#[test]
fn named_families_match_predicates() {
    assert_eq!(adj_of(&graph::complete(5).unwrap()), adj_from(5, |_, _| true));
    assert_eq!(adj_of(&graph::path(5).unwrap()), adj_from(5, |i, j| i.abs_diff(j) == 1));
    assert_eq!(adj_of(&graph::cycle(6).unwrap()), adj_from(6, |i, j| (i + 6 - j) % 6 == 1 || (j + 6 - i) % 6 == 1));
    assert_eq!(adj_of(&graph::star(4).unwrap()), adj_from(5, |i, j| i == 0 || j == 0));
    assert_eq!(adj_of(&graph::complete_multipartite(&[1, 2, 3]).unwrap()), multipartite_adj(&[1, 2, 3]));
    assert_eq!(adj_of(&graph::cocktail_party(3).unwrap()), adj_from(6, |i, j| i / 2 != j / 2));
    assert_eq!(graph::empty(4).unwrap().edge_count(), 0);
}

#[test]
fn direct_product_of_complete_graphs() {
    let g = graph::direct_product(&graph::complete(3).unwrap(), &graph::complete(4).unwrap());
    assert_eq!(adj_of(&g), complete_product_adj(&[3, 4]));
    assert_eq!(g.is_weighted_regular(), Some(6.0));
}

#[test]
fn cartesian_product_is_kronecker_sum() {
    let x = graph::path(3).unwrap();
    let y = graph::cycle(4).unwrap();
    let g = graph::cartesian_product(&x, &y);
    let (ax, ay) = (adj_of(&x), adj_of(&y));
    let expect = ax.kronecker(&nalgebra::DMatrix::identity(4, 4)) + nalgebra::DMatrix::identity(3, 3).kronecker(&ay);
    assert_eq!(adj_of(&g), expect);
}

#[test]
fn blow_up_is_j_kron_a() {
    let x = graph::path(4).unwrap();
    let g = graph::blow_up(3, &x).unwrap();
    let j = nalgebra::DMatrix::from_element(3, 3, 1.0);
    assert_eq!(adj_of(&g), j.kronecker(&adj_of(&x)));
}

#[test]
fn join_and_union() {
    let j = graph::join(&graph::empty(2).unwrap(), &graph::complete(3).unwrap());
    assert_eq!(adj_of(&j), adj_from(5, |i, j| i >= 2 || j >= 2));
    let u = graph::disjoint_union(&graph::complete(2).unwrap(), &graph::complete(2).unwrap());
    assert_eq!(u.edge_count(), 2);
    assert!(!u.is_connected());
    assert!(j.is_connected());
}

#[test]
fn threshold_cells_alternate() {
    // Γ(2,2,1) starting empty: O_2, join K_2, union O_1.
    let g = graph::threshold(&[2, 2, 1], true).unwrap();
    assert_eq!(adj_of(&g), adj_from(5, |i, j| (i < 4 && j < 4) && (i >= 2 || j >= 2)));
    // Starting complete with an even number of cells ends with an empty cell.
    let g = graph::threshold(&[2, 2], false).unwrap();
    assert!(!g.is_connected());
}

#[test]
fn degrees_and_matrices() {
    let mut g = graph::path(3).unwrap();
    g.add_loop(1, 2i64).unwrap();
    assert_eq!(g.degree(1).value(), 6.0);
    assert_eq!(g.row_sum(1).value(), 4.0);
    let l = g.matrix(MatrixKind::Laplacian);
    let a = g.matrix(MatrixKind::Adjacency);
    let m = g.matrix(MatrixKind::Generalized(0.5));
    assert_eq!(hamiltonian(&a, MatrixKind::Laplacian), l);
    assert_eq!(hamiltonian(&a, MatrixKind::Generalized(0.5)), m);
    assert!(g.has_loops());
}

#[test]
fn rational_weights_stay_exact() {
    let g = WeightedGraph::from_edges(2, [(0, 1, Rational64::new(3, 2))]).unwrap();
    assert!(g.is_exact());
    assert!(!g.has_integer_weights());
    assert_eq!(g.weight(0, 1).unwrap().as_exact(), Some(Rational64::new(3, 2)));
    let h = WeightedGraph::from_edges(2, [(0, 1, 0.3f64)]).unwrap();
    assert!(!h.is_exact());
}

#[test]
fn invalid_input_rejected() {
    assert!(matches!(
        WeightedGraph::from_edges(2, [(0, 2, 1i64)]),
        Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
    ));
    assert!(matches!(WeightedGraph::from_edges(2, [(0, 1, 0i64)]), Err(GraphError::NonPositiveWeight { .. })));
    assert!(matches!(
        WeightedGraph::from_edges(2, [(0, 1, 1i64), (1, 0, 1i64)]),
        Err(GraphError::DuplicateEdge { .. })
    ));
    assert!(graph::complete(0).is_err());
    assert!(graph::cycle(2).is_err());
}

#[test]
fn isomorphism_and_bipartiteness() {
    let c6 = graph::cycle(6).unwrap();
    let perm = [3, 0, 4, 1, 5, 2];
    assert!(c6.permuted(&perm).unwrap().is_isomorphic(&c6));
    assert!(!c6.is_isomorphic(&graph::path(6).unwrap()));
    assert!(c6.is_bipartite());
    assert!(!graph::cycle(5).unwrap().is_bipartite());
    // K_{3,3} and the prism have the same degrees but are not isomorphic.
    let prism = graph::cartesian_product(&graph::complete(3).unwrap(), &graph::complete(2).unwrap());
    assert!(!prism.is_isomorphic(&graph::complete_multipartite(&[3, 3]).unwrap()));
}

#[test]
fn dsl_builds_expected_graphs() {
    let cases = [
        ("KM(2,2,2)", graph::cocktail_party(3).unwrap()),
        ("CP(8)", graph::cocktail_party(4).unwrap()),
        ("join(O(2),K(6))", graph::join(&graph::empty(2).unwrap(), &graph::complete(6).unwrap())),
        ("dprod(K(3),K(4))", graph::direct_product(&graph::complete(3).unwrap(), &graph::complete(4).unwrap())),
        ("cprod(P(2),C(4))", graph::cartesian_product(&graph::path(2).unwrap(), &graph::cycle(4).unwrap())),
        ("blowup(2,P(3))", graph::blow_up(2, &graph::path(3).unwrap()).unwrap()),
        ("Gamma(2,2,4,4;start=O)", graph::threshold(&[2, 2, 4, 4], true).unwrap()),
        ("S(4)", graph::star(4).unwrap()),
    ];
    for (expr, want) in cases {
        assert_eq!(dsl::parse(expr).unwrap(), want, "{expr}");
    }
}

#[test]
fn edge_list_round_trip_through_dsl() {
    for expr in ["dprod(K(3),K(4))", "Gamma(2,3,1)", "blowup(3,C(5))", "join(P(3),KM(1,2))"] {
        let g = dsl::parse(expr).unwrap();
        let text = edgelist::write(&g);
        let back = edgelist::parse(&text).unwrap();
        assert_eq!(back, g, "{expr}");
        assert!(back.is_isomorphic(&g));
    }
}

#[test]
fn edge_list_weights_and_loops() {
    let text = "# weighted\nn 3\n0 1 3/2\n1 2 0.25\n2 2 2\n0 2\n";
    let g = edgelist::parse(text).unwrap();
    assert_eq!(g.weight(0, 1).unwrap().as_exact(), Some(Rational64::new(3, 2)));
    assert_eq!(g.weight(1, 2).unwrap().as_exact(), Some(Rational64::new(1, 4)));
    assert_eq!(g.loop_weight(2).value(), 2.0);
    assert_eq!(g.weight(0, 2), Some(Weight::one()));
    let back = edgelist::parse(&edgelist::write(&g)).unwrap();
    assert_eq!(back, g);

    let approx = edgelist::parse("n 2\n0 1 1e-3\n").unwrap();
    let again = edgelist::parse(&edgelist::write(&approx)).unwrap();
    assert_eq!(again.weight(0, 1).unwrap().value(), 1e-3);
}
