mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use sedwalk::numtheory::QuadInt;
use sedwalk::sedentary::{self, PairOutcome, ParityVerdict, Sharpness};
use sedwalk::spectral::{self, ExactSupport};
use sedwalk::{dsl, graph, MatrixKind, SedentaryError, Verdict, WalkEvaluator};

fn km_minus_edge(n: usize) -> String {
    let mut parts = vec!["2".to_string()];
    parts.extend(std::iter::repeat("1".to_string()).take(n - 2));
    format!("KM({})", parts.join(","))
}

fn exact(values: &[i64]) -> ExactSupport {
    ExactSupport {
        indices: (0..values.len()).collect(),
        values: values.iter().map(|&v| QuadInt::integer(v)).collect(),
        delta: 1,
    }
}

#[test]
fn star_center_is_not_sedentary_and_has_no_partner() {
    for n in 3..=9usize {
        let c = sedentary::classify_vertex(&graph::star(n).unwrap(), MatrixKind::Adjacency, 0).unwrap();
        match c.verdict {
            Verdict::NotSedentary { zero_time: Some(t) } => {
                let w = WalkEvaluator::from_graph(&graph::star(n).unwrap(), MatrixKind::Adjacency).unwrap();
                assert!(w.magnitude(0, 0, t) < 1e-9, "n = {n}");
                assert!((t - PI / (2.0 * (n as f64).sqrt())).abs() < 1e-9);
            }
            other => panic!("star({n}): {other:?}"),
        }
        assert!(c.partner().is_none());
    }
}

#[test]
fn cycle_four_has_pst() {
    let c = sedentary::classify_vertex(&graph::cycle(4).unwrap(), MatrixKind::Adjacency, 0).unwrap();
    assert_eq!(c.verdict, Verdict::Pst { partner: 2, time: PI / 2.0 });
}

#[test]
fn k2_times_kn_is_not_sedentary() {
    for n in 3..=8 {
        let g = graph::direct_product(&graph::complete(2).unwrap(), &graph::complete(n).unwrap());
        let c = sedentary::classify_vertex(&g, MatrixKind::Adjacency, 0).unwrap();
        let h = adj_of(&g);
        match c.verdict {
            Verdict::NotSedentary { zero_time: Some(t) } => assert!(expm_i(&h, t)[(0, 0)].norm() < 1e-7, "n = {n}"),
            // (1,u) and (2,u) are strongly cospectral; for even n the phases line up.
            Verdict::Pst { partner, time } => {
                assert_eq!(n % 2, 0);
                assert!((expm_i(&h, time)[(0, partner)].norm() - 1.0).abs() < 1e-9, "n = {n}");
            }
            other => panic!("n = {n}: {other:?}"),
        }
        assert!(!c.is_sedentary());
    }
}

#[test]
fn complete_minus_edge_laplacian() {
    for n in 3..=12usize {
        let g = dsl::parse(&km_minus_edge(n)).unwrap();
        let c = sedentary::classify_vertex(&g, MatrixKind::Laplacian, 0).unwrap();
        match n % 4 {
            0 => assert_eq!(c.verdict, Verdict::Pst { partner: 1, time: PI / 2.0 }, "n = {n}"),
            2 => {
                assert!((c.constant().unwrap() - 2.0 / n as f64).abs() < 1e-9, "n = {n}");
                assert!((c.tightness_time().unwrap() - PI / 2.0).abs() < 1e-9);
            }
            _ => {
                let want = if n == 3 { 1.0 / 3.0 } else { 2f64.sqrt() / n as f64 };
                assert!((c.constant().unwrap() - want).abs() < 1e-9, "n = {n}: {:?}", c.verdict);
                assert!(c.tightness_time().is_some());
            }
        }
        let d = sedentary::classify_vertex(&g, MatrixKind::Laplacian, 2).unwrap();
        assert!((d.constant().unwrap() - (1.0 - 2.0 / n as f64)).abs() < 1e-9, "n = {n}");
        let t = d.tightness_time().unwrap();
        let j = t * n as f64 / PI;
        assert!((j - j.round()).abs() < 1e-9 && j.round() >= 1.0, "n = {n}: t = {t}");
    }
}

#[test]
fn complete_minus_edge_adjacency() {
    for n in 5..=10usize {
        let g = dsl::parse(&km_minus_edge(n)).unwrap();
        let c = sedentary::classify_vertex(&g, MatrixKind::Adjacency, 0).unwrap();
        assert_eq!(c.verdict, Verdict::Pgst { partner: 1 }, "n = {n}");
        let d = sedentary::classify_vertex(&g, MatrixKind::Adjacency, 2).unwrap();
        match d.verdict {
            Verdict::Sedentary { constant: Some(k), sharpness: Sharpness::Sharp } => {
                assert!((k - (1.0 - 2.0 / (n - 2) as f64)).abs() < 1e-12, "n = {n}")
            }
            other => panic!("n = {n}: {other:?}"),
        }
    }
}

#[test]
fn path_with_twin_constant_one_fifth() {
    // The support is quartic, so sharpness is not certified exactly; the
    // horizon scan must approach 1/5 from above.
    let g = graph::path_with_twin(5).unwrap();
    let c = sedentary::classify_vertex(&g, MatrixKind::Adjacency, 0).unwrap();
    match c.verdict {
        Verdict::Sedentary { constant: Some(k), sharpness } => {
            assert!((k - 0.2).abs() < 1e-9);
            assert!(!matches!(sharpness, Sharpness::Tight { .. }));
        }
        other => panic!("{other:?}"),
    }
    let ev = c.evidence.unwrap();
    assert!(ev.value >= 0.2 - 1e-6 && ev.value < 0.2 + 1e-2, "{}", ev.value);
}

#[test]
fn cone_over_k2_apexes() {
    let mut r = rng(31);
    let mut ys: Vec<(String, sedwalk::WeightedGraph)> =
        ["C(4)", "P(5)", "K(4)"].iter().map(|e| (e.to_string(), dsl::parse(e).unwrap())).collect();
    ys.push(("random".into(), random_graph(&mut r, 8, 0.4)));
    for (name, y) in ys {
        let n = y.n() as f64;
        let g = graph::join(&graph::complete(2).unwrap(), &y);
        let c = sedentary::classify_vertex(&g, MatrixKind::Laplacian, 0).unwrap();
        let k = c.constant().unwrap_or_else(|| panic!("{name}: {:?}", c.verdict));
        assert!((k - n / (n + 2.0)).abs() < 1e-9, "{name}: {k}");
        let w = WalkEvaluator::from_graph(&g, MatrixKind::Laplacian).unwrap();
        assert!((w.magnitude(0, 0, PI / (n + 2.0)) - n / (n + 2.0)).abs() < 1e-9, "{name}");
    }
}

#[test]
fn projection_sum_bound_preconditions() {
    let g = graph::star(4).unwrap();
    let dec = spectral::decompose(&g, MatrixKind::Adjacency).unwrap();
    let sup = dec.support(1).unwrap();
    assert!(matches!(
        sedentary::projection_sum_bound(&dec, 1, &sup.indices),
        Err(SedentaryError::NotProperSubset)
    ));
    assert!(matches!(sedentary::projection_sum_bound(&dec, 1, &[]), Err(SedentaryError::NotProperSubset)));
    // The star centre puts weight 1/2 on each of ±2: fine. A leaf puts 1/8 on 2.
    let top = dec.index_of(2.0, 1e-9).unwrap();
    assert!(matches!(sedentary::projection_sum_bound(&dec, 1, &[top]), Err(SedentaryError::WeightTooSmall(_))));
    // Leaf, S = {0}: a = 3/4, bound 1/2 = 1 - 2/|T|.
    let zero = dec.index_of(0.0, 1e-9).unwrap();
    let b = sedentary::projection_sum_bound(&dec, 1, &[zero]).unwrap();
    assert!((b.a - 0.75).abs() < 1e-12);
    assert!((b.certified_constant.unwrap() - 0.5).abs() < 1e-12);
    assert!((b.tightness_time.unwrap() - PI / 2.0).abs() < 1e-12);
}

#[test]
fn bound_curve_and_equality_times_on_the_corpus() {
    let mut r = rng(32);
    let mut checked = 0;
    for (name, g) in corpus() {
        for kind in [MatrixKind::Adjacency, MatrixKind::Laplacian] {
            let dec = spectral::decompose(&g, kind).unwrap();
            let w = WalkEvaluator::new(dec.clone());
            for u in 0..g.n() {
                let sup = dec.support(u).unwrap();
                for (i, &j) in sup.indices.iter().enumerate() {
                    if sup.weights[i] < 0.5 || sup.indices.len() < 2 {
                        continue;
                    }
                    let b = sedentary::projection_sum_bound(&dec, u, &[j]).unwrap();
                    for _ in 0..50 {
                        let t: f64 = r.gen_range(0.0..30.0);
                        assert!(b.curve(t) <= w.magnitude(u, u, t) + 1e-9, "{name} u={u}");
                        assert!(b.value() <= w.magnitude(u, u, t) + 1e-9, "{name} u={u}");
                    }
                    if let Some(t1) = b.tightness_time {
                        checked += 1;
                        assert!((w.magnitude(u, u, t1) - b.value()).abs() < 1e-8, "{name} {kind:?} u={u}");
                        assert!((w.magnitude(u, u, 2.0 * t1) - 1.0).abs() < 1e-8, "{name} {kind:?} u={u}");
                    }
                }
            }
        }
    }
    assert!(checked > 20, "{checked}");
}

#[test]
fn equality_time_examples() {
    assert_eq!(sedentary::equality_time_criterion(&exact(&[0, 1, 3]), &[0]), Ok(PI));
    // CP(6) Laplacian vertex: {0, 4, 6}, S = {0, 4}.
    assert_eq!(sedentary::equality_time_criterion(&exact(&[0, 4, 6]), &[0, 1]), Ok(PI / 2.0));
    assert_eq!(sedentary::equality_time_by_phases(&exact(&[0, 4, 6]), &[0, 1]), Some(PI / 2.0));
    assert!(sedentary::equality_time_criterion(&exact(&[0, 1, 2]), &[0]).is_err());
}

#[test]
fn parity_examples() {
    // Support {1, -1, 0} with S = {0}: relation 1 + (-1) = 0 has even sum over S
    // (coefficient 0 on 0); 1 - 2·0 + ... every relation keeps the 0-coefficient even.
    let ex = exact(&[1, -1, 0]);
    let exact_v = sedentary::pgst_parity_criterion(&ex, &[2]).unwrap();
    let bounded = sedentary::pgst_parity_bounded(&ex, &[2], 4).unwrap();
    assert_eq!(exact_v, bounded);
    assert_eq!(exact_v, brute_parity(&[1, -1, 0], &[false, false, true], 4));
}

/// Verdict by enumerating relations with coefficients in `[-b, b]`.
fn brute_parity(values: &[i64], mask: &[bool], b: i64) -> ParityVerdict {
    let k = values.len();
    let total = (2 * b + 1).pow(k as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(k);
        let mut x = code;
        for _ in 0..k {
            c.push(x % (2 * b + 1) - b);
            x /= 2 * b + 1;
        }
        let sum: i64 = c.iter().sum();
        let dot: i64 = c.iter().zip(values).map(|(a, v)| a * v).sum();
        let ms: i64 = c.iter().zip(mask).filter(|(_, &m)| m).map(|(a, _)| a).sum();
        if sum == 0 && dot == 0 && ms.rem_euclid(2) == 1 {
            return ParityVerdict::Blocked;
        }
    }
    ParityVerdict::ApproachesEquality
}

#[test]
fn strongly_cospectral_pair_outcomes() {
    let q = |v: &[i64]| v.iter().map(|&x| QuadInt::integer(x)).collect::<Vec<_>>();
    // C_4 adjacency, vertex 0 vs 2: σ+ = {2, -2}, σ- = {0}.
    assert_eq!(sedentary::strongly_cospectral_pair(&q(&[2, -2]), &q(&[0])).unwrap(), PairOutcome::Pst(PI / 2.0));
    // σ+ = {0, 2}, σ- = {1}: 0 - 2·1 + 2 = 0 has odd σ- sum? coefficient -2: even. PGST fails PST too.
    let r = sedentary::strongly_cospectral_pair(&q(&[0, 2]), &q(&[1])).unwrap();
    assert_eq!(r, PairOutcome::Pst(PI));
}

#[test]
fn zero_search() {
    let n = 5.0;
    let terms = [(1.0 / n, n - 1.0), ((n - 1.0) / n, 1.0)];
    let t0 = sedentary::real_diagonal_zero_search(&terms, PI).unwrap();
    let f: f64 = terms.iter().map(|(c, w)| c * (w * t0).cos()).sum();
    assert!(f.abs() < 1e-12 && t0 < PI);
    assert!(terms.iter().map(|(c, w)| c * (w * PI).cos()).sum::<f64>() < 0.0);
    let t = sedentary::real_diagonal_zero_search(&[(1.0, 1.0)], 10.0).unwrap();
    assert!((t - PI / 2.0).abs() < 1e-12);
    assert_eq!(sedentary::real_diagonal_zero_search(&[(0.75, 0.0), (0.25, 1.0)], 100.0), None);
}

#[test]
fn bipartite_doubles() {
    // O_2 ∨ C_4 (d = s = 2): constant 1/4.
    let y = dsl::parse("join(O(2),C(4))").unwrap();
    let dec = spectral::decompose(&y, MatrixKind::Adjacency).unwrap();
    let rep = sedentary::bipartite_double_sedentary(&dec, 0).unwrap();
    assert_eq!(rep.sedentary, Some(true));
    assert!((rep.infimum.value - 0.25).abs() < 1e-6, "{}", rep.infimum.value);
    let cc = sedentary::double_cone_double_constant(2, 2).unwrap();
    assert!((cc.constant - 0.25).abs() < 1e-12);
    // Oracle on the double itself.
    let double = graph::direct_product(&graph::complete(2).unwrap(), &y);
    let h = adj_of(&double);
    let (_, brute) = refined_min(|t| expm_i(&h, t)[(0, 0)].norm(), 0.0, 2.0 * PI, 800);
    assert!((brute - 0.25).abs() < 1e-6, "{brute}");
    assert!((expm_i(&h, cc.time)[(0, 0)].norm() - 0.25).abs() < 1e-9);

    // O_2 ∨ CP(6) (d = 2s): a zero.
    let y = dsl::parse("join(O(2),CP(6))").unwrap();
    let dec = spectral::decompose(&y, MatrixKind::Adjacency).unwrap();
    let rep = sedentary::bipartite_double_sedentary(&dec, 0).unwrap();
    assert_eq!(rep.sedentary, Some(false));
    assert!(sedentary::double_cone_double_constant(4, 2).is_none());

    for n in 3..=6 {
        let dec = spectral::decompose(&graph::complete(n).unwrap(), MatrixKind::Adjacency).unwrap();
        let rep = sedentary::bipartite_double_sedentary(&dec, 0).unwrap();
        assert_eq!(rep.sedentary, Some(false), "K_{n}");
    }
}

#[test]
fn double_cone_constants_match_oracle() {
    // Z = C_{s(d+s)/2} is 2-regular; use d = 2 and s ∈ {2, 4, 6}.
    for s in [2i64, 4, 6] {
        let Some(cc) = sedentary::double_cone_double_constant(2, s) else { panic!("s = {s}") };
        let z = graph::cycle((s * (2 + s) / 2) as usize).unwrap();
        let y = graph::join(&graph::empty(2).unwrap(), &z);
        let h = adj_of(&graph::direct_product(&graph::complete(2).unwrap(), &y));
        let at = expm_i(&h, cc.time)[(0, 0)].norm();
        assert!((at - cc.constant).abs() < 1e-8, "s = {s}: {at} vs {}", cc.constant);
        let (_, brute) = refined_min(|t| expm_i(&h, t)[(0, 0)].norm(), 0.0, 2.0 * PI, 600);
        assert!(brute >= cc.constant - 1e-6, "s = {s}");
    }
}

#[test]
fn blow_up_support_scales() {
    let mut r = rng(33);
    for i in 0..10 {
        let x = random_connected(&mut r, 4 + i % 4, 0.5);
        let dx = spectral::decompose(&x, MatrixKind::Adjacency).unwrap();
        for m in [2usize, 3] {
            let b = graph::blow_up(m, &x).unwrap();
            let db = spectral::decompose(&b, MatrixKind::Adjacency).unwrap();
            let mut want: Vec<f64> = dx.support(0).unwrap().values.iter().map(|l| m as f64 * l).collect();
            want.push(0.0);
            want.sort_by(f64::total_cmp);
            want.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
            let mut got = db.support(0).unwrap().values;
            got.sort_by(f64::total_cmp);
            assert_eq!(got.len(), want.len());
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-8);
            }
            let bound = sedentary::blowup_bound(&x, 0, m).unwrap();
            let w = WalkEvaluator::new(db);
            for k in 0..400 {
                let t = k as f64 * 0.05;
                assert!(w.magnitude(0, 0, t) >= bound.bound - 1e-9, "i={i} m={m} t={t}");
            }
        }
    }
    assert!(matches!(
        sedentary::blowup_bound(&graph::path(3).unwrap(), 0, 1),
        Err(SedentaryError::BlowUpTooSmall(1))
    ));
}

#[test]
fn two_copy_blow_ups() {
    // K_3: 2·2 + 2·(-1)... relation 2 - 2·1 = 0 with 1 + 2 odd: sedentary.
    let k3 = graph::complete(3).unwrap();
    assert_eq!(sedentary::blowup_pair_sedentary(&k3, 0).unwrap(), Some(true));
    let b = graph::blow_up(2, &k3).unwrap();
    let c = sedentary::classify_vertex(&b, MatrixKind::Adjacency, 0).unwrap();
    assert!(c.is_sedentary(), "{:?}", c.verdict);
    // P_2: only relations c(1) + c(-1) with equal coefficients: not sedentary.
    let k2 = graph::complete(2).unwrap();
    assert_eq!(sedentary::blowup_pair_sedentary(&k2, 0).unwrap(), Some(false));
    let c = sedentary::classify_vertex(&graph::blow_up(2, &k2).unwrap(), MatrixKind::Adjacency, 0).unwrap();
    assert!(!c.is_sedentary());
    // 0 in the support: sedentary.
    assert_eq!(sedentary::blowup_pair_sedentary(&graph::path(3).unwrap(), 0).unwrap(), Some(true));
}

#[test]
fn join_transfer() {
    assert_eq!(sedentary::join_sedentary_transfer(0.5, 4), None);
    assert_eq!(sedentary::join_sedentary_transfer(1.0, 4), Some(0.5));
    let c = sedentary::join_sedentary_transfer(7.0 / 25.0, 25).unwrap();
    assert!((c - 0.2).abs() < 1e-12);
}

#[test]
fn no_vertex_is_both_sedentary_and_transferring() {
    for (name, g) in corpus() {
        for kind in [MatrixKind::Adjacency, MatrixKind::Laplacian] {
            for c in sedentary::classify_all(&g, kind).unwrap() {
                assert!(!(c.is_sedentary() && c.is_state_transfer()), "{name}");
                if let Some(k) = c.constant() {
                    let ev = c.evidence.expect("evidence");
                    assert!(ev.value >= k - 1e-6, "{name} {kind:?} u={}: {} < {k}", c.vertex, ev.value);
                }
                assert!(!c.lemma_trail.is_empty(), "{name}");
            }
        }
    }
}
