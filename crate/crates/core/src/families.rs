//! Closed-form verdicts for complete multipartite graphs (Laplacian and
//! adjacency), threshold graphs (Laplacian) and direct products of complete
//! graphs. Shapes outside the closed forms go to the generic classifier.

use std::f64::consts::PI;
use std::ops::Range;

use serde::Serialize;

use crate::error::FamilyError;
use crate::graph::{self, MatrixKind, WeightedGraph};
use crate::numtheory::{self, PhaseSolution, QuadInt, RelationParity};
use crate::sedentary::{self, PairOutcome, Sharpness, Verdict, VertexClassification, ZERO_TOL};
use crate::walk::{self, InfimumEstimate, WalkEvaluator};

fn classification(
    u: usize,
    kind: MatrixKind,
    verdict: Verdict,
    lemma_trail: Vec<String>,
    evidence: Option<InfimumEstimate>,
) -> VertexClassification {
    VertexClassification { vertex: u, matrix_kind: kind, verdict, lemma_trail, evidence }
}

fn tight(u: usize, kind: MatrixKind, constant: f64, time: f64, trail: Vec<String>) -> VertexClassification {
    classification(
        u,
        kind,
        Verdict::Sedentary { constant: Some(constant), sharpness: Sharpness::Tight { time } },
        trail,
        None,
    )
}

fn numeric_min(g: &WeightedGraph, kind: MatrixKind, u: usize) -> Result<InfimumEstimate, FamilyError> {
    Ok(WalkEvaluator::from_graph(g, kind)?.infimum_diagonal(u)?)
}

/// Tight sedentary with the constant read off the minimum over one period.
fn tight_numeric(g: &WeightedGraph, kind: MatrixKind, u: usize, mut trail: Vec<String>) -> Result<VertexClassification, FamilyError> {
    let est = numeric_min(g, kind, u)?;
    trail.push("constant is the minimum over one period".into());
    let verdict = if est.value < ZERO_TOL {
        Verdict::NotSedentary { zero_time: est.attained_time }
    } else {
        Verdict::Sedentary {
            constant: Some(est.value),
            sharpness: Sharpness::Tight { time: est.attained_time.unwrap_or(0.0) },
        }
    };
    Ok(classification(u, kind, verdict, trail, Some(est)))
}

fn generic(g: &WeightedGraph, kind: MatrixKind, u: usize, note: &str) -> Result<VertexClassification, FamilyError> {
    let mut c = sedentary::classify_vertex(g, kind, u)?;
    c.lemma_trail.insert(0, format!("{note}: generic classifier"));
    Ok(c)
}

fn nu2(x: i64) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        x.trailing_zeros()
    }
}

/// `(c + sign·√Δ)/2` in exact form.
fn quad(c: i64, sign: i64, delta: i64) -> QuadInt {
    match numtheory::is_perfect_square(delta) {
        Some(r) => QuadInt::new(c + sign * r, 0, 1),
        None => {
            let (s, f) = numtheory::square_free_part(delta as u64);
            QuadInt::new(c, sign * f as i64, s as i64)
        }
    }
}

fn pst_time(plus: &[QuadInt], minus: &[QuadInt]) -> Result<Option<f64>, FamilyError> {
    Ok(match sedentary::strongly_cospectral_pair(plus, minus)? {
        PairOutcome::Pst(t) => Some(t),
        _ => None,
    })
}

fn uniform(sizes: impl Iterator<Item = usize>) -> Option<usize> {
    let mut it = sizes;
    let first = it.next()?;
    it.all(|s| s == first).then_some(first)
}

/// `K_{n_1,...,n_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultipartiteSpec {
    pub parts: Vec<usize>,
}

impl MultipartiteSpec {
    pub fn new(parts: &[usize]) -> Result<Self, FamilyError> {
        graph::complete_multipartite(parts)?;
        Ok(Self { parts: parts.to_vec() })
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// First vertex of part `l`.
    pub fn offset(&self, l: usize) -> usize {
        self.parts[..l].iter().sum()
    }

    pub fn graph(&self) -> WeightedGraph {
        graph::complete_multipartite(&self.parts).expect("validated parts")
    }

    /// Indices of parts of size one.
    pub fn singletons(&self) -> Vec<usize> {
        (0..self.parts.len()).filter(|&i| self.parts[i] == 1).collect()
    }

    fn check(&self, l: usize) -> Result<(), FamilyError> {
        if l >= self.parts.len() {
            Err(FamilyError::PartOutOfRange { index: l, parts: self.parts.len() })
        } else {
            Ok(())
        }
    }
}

/// Laplacian verdict for a vertex in part `l`.
pub fn multipartite_laplacian_verdict(parts: &[usize], l: usize) -> Result<VertexClassification, FamilyError> {
    let spec = MultipartiteSpec::new(parts)?;
    spec.check(l)?;
    let kind = MatrixKind::Laplacian;
    let (n, nl, u) = (spec.n(), parts[l], spec.offset(l));
    if parts.len() == 1 || n <= 2 {
        return generic(&spec.graph(), kind, u, "degenerate multipartite shape");
    }
    let nf = n as f64;
    let mut trail = vec![format!("Laplacian of K_{:?}, part size {nl}, n = {n}", parts)];
    Ok(match nl {
        1 => {
            trail.push("singleton part: support {0, n}".into());
            tight(u, kind, 1.0 - 2.0 / nf, PI / nf, trail)
        }
        2 => {
            trail.push("part of size two: support {0, n-2, n}".into());
            match n % 4 {
                0 => {
                    trail.push("n = 0 mod 4: perfect state transfer".into());
                    classification(u, kind, Verdict::Pst { partner: u + 1, time: PI / 2.0 }, trail, None)
                }
                2 => tight(u, kind, 2.0 / nf, PI / 2.0, trail),
                _ if n == 3 => tight(u, kind, 1.0 / 3.0, PI, trail),
                _ => tight(u, kind, 2f64.sqrt() / nf, PI / 2.0, trail),
            }
        }
        _ => {
            let bound = 1.0 - 2.0 / nl as f64;
            trail.push(format!("twin set of size {nl}: bound 1 - 2/{nl}"));
            if nu2(n as i64) > nu2(nl as i64) {
                let g = num_integer::gcd(n, nl) as f64;
                trail.push("nu2(n) > nu2(part): bound attained".into());
                tight(u, kind, bound, PI / g, trail)
            } else {
                trail.push("nu2(n) <= nu2(part): constant exceeds the bound".into());
                let est = numeric_min(&spec.graph(), kind, u)?;
                classification(
                    u,
                    kind,
                    Verdict::Sedentary { constant: Some(bound), sharpness: Sharpness::LowerBound },
                    trail,
                    Some(est),
                )
            }
        }
    })
}

/// Adjacency verdict for a vertex in part `l`.
pub fn multipartite_adjacency_verdict(parts: &[usize], l: usize) -> Result<VertexClassification, FamilyError> {
    let spec = MultipartiteSpec::new(parts)?;
    spec.check(l)?;
    let kind = MatrixKind::Adjacency;
    let g = spec.graph();
    let (n, nl, u) = (spec.n(), parts[l], spec.offset(l));
    if parts.len() == 1 {
        return generic(&g, kind, u, "single part");
    }
    let singles = spec.singletons();
    let ni = singles.len();
    let non_single = || parts.iter().copied().filter(|&p| p != 1);
    let others = || parts.iter().enumerate().filter(move |&(i, _)| i != l).map(|(_, &p)| p);
    let (n_i, ni_i) = (n as i64, ni as i64);
    let mut trail = vec![format!("adjacency of K_{:?}, part size {nl}, n = {n}", parts)];

    if nl == 1 {
        if ni >= 3 {
            let bound = 1.0 - 2.0 / ni as f64;
            trail.push(format!("{ni} singleton parts form a twin set: bound 1 - 2/{ni}"));
            if non_single().next().is_none() {
                trail.push("complete graph: support {n-1, -1}".into());
                return Ok(tight(u, kind, bound, PI / n as f64, trail));
            }
            let Some(m) = uniform(non_single()) else {
                return generic(&g, kind, u, "non-uniform parts beside the singletons");
            };
            let m = m as i64;
            let delta = (n_i - m - 2 * ni_i + 1).pow(2) + 4 * ni_i * (n_i - ni_i);
            let (c, x) = (n_i - m - 1, n_i - m + 1);
            return match numtheory::is_perfect_square(delta) {
                Some(r) => {
                    let (hp, hm) = ((x + r) / 2, (x - r) / 2);
                    if hm == 0 {
                        return generic(&g, kind, u, "support collapses onto -1");
                    }
                    if nu2(hp) == nu2(hm) {
                        let gg = num_integer::gcd(hp, hm.abs()) as f64;
                        trail.push(format!("Delta = {r}^2, equal valuations of the gaps {hp} and {hm}: bound attained"));
                        Ok(tight(u, kind, bound, PI / gg, trail))
                    } else {
                        trail.push(format!("Delta = {r}^2 with unequal gap valuations: constant exceeds the bound"));
                        tight_numeric(&g, kind, u, trail)
                    }
                }
                None => {
                    let outside = [quad(c, 1, delta), quad(c, -1, delta)];
                    let parity = numtheory::relation_parity_exact(&[QuadInt::integer(-1)], &outside)?;
                    let sharpness = if parity == RelationParity::AllRelationsEvenSum {
                        trail.push("Delta not a square; all relations have even sum over S: sharp".into());
                        Sharpness::Sharp
                    } else {
                        Sharpness::LowerBound
                    };
                    let est = walk::minimize_horizon(&WalkEvaluator::from_graph(&g, kind)?.diagonal(u)?, None);
                    Ok(classification(u, kind, Verdict::Sedentary { constant: Some(bound), sharpness }, trail, Some(est)))
                }
            };
        }
        let Some(m) = uniform(non_single()) else {
            return generic(&g, kind, u, "non-uniform parts beside the singletons");
        };
        let m = m as i64;
        if ni == 1 {
            let d = n_i - m - 1;
            let big = (d * d + 4 * (n_i - 1)) as f64;
            let time = PI / big.sqrt();
            trail.push(format!("cone over a {d}-regular graph"));
            if d == 0 {
                trail.push("regular degree zero: U(t)_uu vanishes".into());
                return Ok(classification(u, kind, Verdict::NotSedentary { zero_time: Some(time) }, trail, None));
            }
            // |U(t)_uu|² = cos²(rt/2) + (d/r)² sin²(rt/2) with r² = d² + 4(n − 1).
            return Ok(tight(u, kind, d as f64 / big.sqrt(), time, trail));
        }
        // Two singleton parts: K_2 joined to a regular graph.
        let partner = spec.offset(*singles.iter().find(|&&i| i != l).expect("two singletons"));
        let delta = (n_i - m - 3).pow(2) + 8 * (n_i - 2);
        let c = n_i - m - 1;
        let plus = [quad(c, 1, delta), quad(c, -1, delta)];
        let minus = [QuadInt::integer(-1)];
        return match numtheory::is_perfect_square(delta) {
            None => {
                trail.push("Delta not a square: pretty good state transfer".into());
                Ok(classification(u, kind, Verdict::Pgst { partner }, trail, None))
            }
            Some(r) if nu2(n_i - m + 1) != nu2(r) => {
                trail.push("Delta square with nu2(n-m+1) != nu2(sqrt Delta): perfect state transfer".into());
                match pst_time(&plus, &minus)? {
                    Some(time) => Ok(classification(u, kind, Verdict::Pst { partner, time }, trail, None)),
                    None => generic(&g, kind, u, "phase equations unsolved"),
                }
            }
            Some(_) => {
                trail.push("Delta square with equal valuations: tightly sedentary".into());
                tight_numeric(&g, kind, u, trail)
            }
        };
    }

    if nl == 2 {
        let twos = parts.iter().filter(|&&p| p == 2).count();
        if ni >= 1 && twos >= 2 && parts.iter().all(|&p| p == 1 || p == 2) {
            let delta = (n_i - 1).pow(2) + 4 * ni_i;
            trail.push(format!("{ni} singletons joined to a cocktail party graph, Delta = {delta}"));
            return match numtheory::is_perfect_square(delta) {
                None if n % 4 == 3 => {
                    trail.push("Delta not a square and n = 3 mod 4: pretty good state transfer".into());
                    Ok(classification(u, kind, Verdict::Pgst { partner: u + 1 }, trail, None))
                }
                None => {
                    trail.push("Delta not a square and n != 3 mod 4: sedentary, no general constant".into());
                    let est = walk::minimize_horizon(&WalkEvaluator::from_graph(&g, kind)?.diagonal(u)?, None);
                    Ok(classification(
                        u,
                        kind,
                        Verdict::Sedentary { constant: None, sharpness: Sharpness::LowerBound },
                        trail,
                        Some(est),
                    ))
                }
                Some(r) if nu2(n_i - 3) != nu2(r) => {
                    trail.push("Delta square with nu2(n-3) != nu2(sqrt Delta): perfect state transfer".into());
                    let plus = [QuadInt::integer(-2), quad(n_i - 3, 1, delta), quad(n_i - 3, -1, delta)];
                    match pst_time(&plus, &[QuadInt::integer(0)])? {
                        Some(time) => Ok(classification(u, kind, Verdict::Pst { partner: u + 1, time }, trail, None)),
                        None => generic(&g, kind, u, "phase equations unsolved"),
                    }
                }
                Some(_) => {
                    trail.push("Delta square with equal valuations: sedentary".into());
                    tight_numeric(&g, kind, u, trail)
                }
            };
        }
        let Some(m) = uniform(others()) else {
            return generic(&g, kind, u, "non-uniform parts beside the pair");
        };
        let m = m as i64;
        let d = n_i - m - 2;
        let delta = d * d + 8 * (n_i - 2);
        let plus = [quad(d, 1, delta), quad(d, -1, delta)];
        let minus = [QuadInt::integer(0)];
        trail.push(format!("double cone over a {d}-regular graph, Delta = {delta}"));
        let pst = |trail: Vec<String>| -> Result<VertexClassification, FamilyError> {
            match pst_time(&plus, &minus)? {
                Some(time) => Ok(classification(u, kind, Verdict::Pst { partner: u + 1, time }, trail, None)),
                None => generic(&g, kind, u, "phase equations unsolved"),
            }
        };
        if d == 0 {
            trail.push("complete bipartite K_{2,m}: perfect state transfer".into());
            return pst(trail);
        }
        return match numtheory::is_perfect_square(delta) {
            None => {
                trail.push("Delta not a square: pretty good state transfer".into());
                Ok(classification(u, kind, Verdict::Pgst { partner: u + 1 }, trail, None))
            }
            Some(r) if nu2(d) != nu2(r) => {
                trail.push("Delta square with nu2(n-m-2) != nu2(sqrt Delta): perfect state transfer".into());
                pst(trail)
            }
            Some(r) => {
                let s = (r - d) / 2;
                let gg = num_integer::gcd(d, s);
                let (d1, s1) = (d / gg, s / gg);
                let constant = if s1 == 1 {
                    1.0 / (d1 + 2) as f64
                } else {
                    2f64.sqrt() / (d1 + 2 * s1) as f64
                };
                trail.push(format!("n - 2 = s(n-m-2+s)/2 with s = {s}, g = {gg}"));
                Ok(tight(u, kind, constant, PI / gg as f64, trail))
            }
        };
    }

    // Part of size at least three.
    let bound = 1.0 - 2.0 / nl as f64;
    trail.push(format!("twin set of size {nl}: bound 1 - 2/{nl}"));
    let Some(m) = uniform(others()) else {
        return generic(&g, kind, u, "non-uniform parts beside the large part");
    };
    let (m, nl_i) = (m as i64, nl as i64);
    let x = n_i - nl_i - m;
    let delta = x * x + 4 * nl_i * (n_i - nl_i);
    match numtheory::is_perfect_square(delta) {
        Some(r) => {
            let (hp, hm) = ((x + r) / 2, (x - r) / 2);
            if nu2(hp) == nu2(hm) {
                let gg = num_integer::gcd(hp, hm.abs()) as f64;
                trail.push(format!("Delta = {r}^2, equal valuations of the gaps {hp} and {hm}: bound attained"));
                Ok(tight(u, kind, bound, PI / gg, trail))
            } else {
                trail.push(format!("Delta = {r}^2 with unequal gap valuations: constant exceeds the bound"));
                tight_numeric(&g, kind, u, trail)
            }
        }
        None => {
            let outside = [quad(x, 1, delta), quad(x, -1, delta)];
            let parity = numtheory::relation_parity_exact(&[QuadInt::integer(0)], &outside)?;
            let sharpness = if parity == RelationParity::AllRelationsEvenSum {
                trail.push("Delta not a square; all relations have even sum over S: sharp".into());
                Sharpness::Sharp
            } else {
                trail.push("Delta not a square; odd relation: bound not approached".into());
                Sharpness::LowerBound
            };
            let est = walk::minimize_horizon(&WalkEvaluator::from_graph(&g, kind)?.diagonal(u)?, None);
            Ok(classification(u, kind, Verdict::Sedentary { constant: Some(bound), sharpness }, trail, Some(est)))
        }
    }
}

/// Threshold graph `Γ(m_1, ..., m_h)`; cells are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdSpec {
    pub parts: Vec<usize>,
    pub starts_empty: bool,
}

impl ThresholdSpec {
    pub fn new(parts: &[usize], starts_empty: bool) -> Result<Self, FamilyError> {
        graph::threshold(parts, starts_empty)?;
        Ok(Self { parts: parts.to_vec(), starts_empty })
    }

    pub fn h(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `m_j`.
    pub fn m(&self, j: usize) -> i64 {
        self.parts[j - 1] as i64
    }

    /// `α_j = m_1 + ... + m_j`.
    pub fn alpha(&self, j: usize) -> i64 {
        self.parts[..j].iter().sum::<usize>() as i64
    }

    /// `β_ℓ = m_ℓ + m_{ℓ+2} + ...` up to the last cell; zero past the end.
    pub fn beta(&self, l: usize) -> i64 {
        (l..=self.h()).step_by(2).map(|r| self.m(r)).sum()
    }

    pub fn cell_is_complete(&self, j: usize) -> bool {
        ((j - 1) % 2 == 1) == self.starts_empty
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 1 || self.cell_is_complete(self.h())
    }

    pub fn graph(&self) -> WeightedGraph {
        graph::threshold(&self.parts, self.starts_empty).expect("validated parts")
    }

    /// Vertices of cell `j`.
    pub fn cell_range(&self, j: usize) -> Range<usize> {
        let start = self.alpha(j - 1) as usize;
        start..start + self.parts[j - 1]
    }

    /// `m_1 = 2`, `m_2 ≡ 2 (mod 4)` and every later cell `≡ 0 (mod 4)`.
    pub fn pst_pattern(&self) -> bool {
        self.parts[0] == 2
            && self.parts.get(1).map_or(true, |&m| m % 4 == 2)
            && self.parts.iter().skip(2).all(|&m| m % 4 == 0)
    }

    /// Folds a leading cell of size one into the next cell. Returns the
    /// rewritten spec and the new index of the given cell.
    pub fn normalized(&self, cell: usize) -> (ThresholdSpec, usize) {
        if self.parts[0] != 1 || self.h() == 1 {
            return (self.clone(), cell);
        }
        let mut parts = vec![self.parts[1] + 1];
        parts.extend_from_slice(&self.parts[2..]);
        let spec = ThresholdSpec { parts, starts_empty: !self.starts_empty };
        (spec, if cell <= 2 { 1 } else { cell - 1 })
    }

    fn check(&self, cell: usize) -> Result<(), FamilyError> {
        if cell == 0 || cell > self.h() {
            return Err(FamilyError::CellOutOfRange { cell, cells: self.h() });
        }
        if !self.is_connected() {
            return Err(FamilyError::Disconnected);
        }
        Ok(())
    }
}

/// Which bound applies to a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThresholdCase {
    /// Complete cell with the parity of the last cell: `1 − 2/α_j`.
    SameParity,
    /// First cell of a form starting with a complete cell: `1 − 2/m_1`.
    FirstComplete,
    /// Cell parity opposite to the last cell: `1 − 2/α_j`.
    Prefix,
    /// A single vertex.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdBound {
    pub cell: usize,
    pub case: ThresholdCase,
    pub bound: f64,
    /// Eigenvalue carrying the bound.
    pub theta: i64,
    /// Laplacian eigenvalue support of the cell, descending.
    pub support: Vec<i64>,
    /// Time with `e^{it(θ−λ)} = −1` for every other support value.
    pub equality_time: Option<f64>,
}

fn threshold_case(spec: &ThresholdSpec, j: usize) -> ThresholdCase {
    let h = spec.h();
    if spec.n() == 1 {
        ThresholdCase::Trivial
    } else if j % 2 != h % 2 {
        ThresholdCase::Prefix
    } else if j == 1 {
        ThresholdCase::FirstComplete
    } else {
        ThresholdCase::SameParity
    }
}

fn support_and_theta(spec: &ThresholdSpec, j: usize, case: ThresholdCase) -> (Vec<i64>, i64) {
    let h = spec.h();
    let mut s = vec![0, spec.alpha(h)];
    let same_parity = |l: &usize| l % 2 == h % 2;
    let theta = match case {
        ThresholdCase::Trivial => return (vec![0], 0),
        ThresholdCase::SameParity => {
            s.extend((j + 2..=h).filter(same_parity).map(|l| spec.beta(l)));
            s.extend((j..=h.saturating_sub(2)).filter(same_parity).map(|l| spec.alpha(l) + spec.beta(l + 2)));
            spec.alpha(j) + spec.beta(j + 2)
        }
        ThresholdCase::FirstComplete => {
            s.extend((3..=h).filter(same_parity).map(|l| spec.beta(l)));
            s.extend((1..=h.saturating_sub(2)).filter(same_parity).map(|l| spec.alpha(l) + spec.beta(l + 2)));
            spec.alpha(1) + spec.beta(3)
        }
        ThresholdCase::Prefix => {
            s.extend((j + 1..=h).filter(same_parity).map(|l| spec.beta(l)));
            s.extend((j + 1..=h.saturating_sub(2)).filter(same_parity).map(|l| spec.alpha(l) + spec.beta(l + 2)));
            spec.beta(j + 1)
        }
    };
    s.sort_unstable_by(|a, b| b.cmp(a));
    s.dedup();
    (s, theta)
}

/// Exact Laplacian eigenvalue support of a vertex in cell `cell`.
pub fn threshold_support(spec: &ThresholdSpec, cell: usize) -> Result<Vec<i64>, FamilyError> {
    spec.check(cell)?;
    let (norm, j) = spec.normalized(cell);
    Ok(support_and_theta(&norm, j, threshold_case(&norm, j)).0)
}

/// Lower bound on `|U_L(t)_{u,u}|` for `u` in cell `cell`, with its equality time.
pub fn threshold_cell_bound(spec: &ThresholdSpec, cell: usize) -> Result<ThresholdBound, FamilyError> {
    spec.check(cell)?;
    let (norm, j) = spec.normalized(cell);
    let case = threshold_case(&norm, j);
    let (support, theta) = support_and_theta(&norm, j, case);
    let bound = match case {
        ThresholdCase::Trivial => 1.0,
        ThresholdCase::FirstComplete => 1.0 - 2.0 / norm.m(1) as f64,
        // The weight 1 − 1/α_j sits on α_j + β_{j+2} in both remaining cases.
        ThresholdCase::SameParity | ThresholdCase::Prefix => 1.0 - 2.0 / norm.alpha(j) as f64,
    };
    let minus: Vec<QuadInt> = support.iter().filter(|&&l| l != theta).map(|&l| QuadInt::integer(theta - l)).collect();
    let equality_time = match numtheory::solve_phases(&[], &minus)? {
        PhaseSolution::Time(t) if !minus.is_empty() => Some(t),
        _ => None,
    };
    Ok(ThresholdBound { cell, case, bound, theta, support, equality_time })
}

/// One Laplacian verdict per cell, reported at the first vertex of the cell.
pub fn threshold_pst_or_sedentary(spec: &ThresholdSpec) -> Result<Vec<VertexClassification>, FamilyError> {
    if !spec.is_connected() {
        return Err(FamilyError::Disconnected);
    }
    let kind = MatrixKind::Laplacian;
    let g = spec.graph();
    let pattern = spec.pst_pattern();
    let mut out = Vec::with_capacity(spec.h());
    for cell in 1..=spec.h() {
        let u = spec.cell_range(cell).start;
        let mut trail = vec![format!("threshold cell {cell} of {:?}", spec.parts)];
        if pattern && cell == 1 {
            trail.push("m1 = 2, m2 = 2 mod 4, later cells = 0 mod 4: perfect state transfer".into());
            out.push(classification(u, kind, Verdict::Pst { partner: u + 1, time: PI / 2.0 }, trail, None));
            continue;
        }
        let b = threshold_cell_bound(spec, cell)?;
        trail.push(format!("{:?} bound {:.12} carried by eigenvalue {}", b.case, b.bound, b.theta));
        match b.equality_time {
            Some(t) if b.bound > ZERO_TOL => {
                trail.push(format!("bound attained at {t:.12}"));
                out.push(tight(u, kind, b.bound, t, trail));
            }
            _ => {
                trail.push("bound not attained".into());
                out.push(tight_numeric(&g, kind, u, trail)?);
            }
        }
    }
    Ok(out)
}

/// Adjacency verdict at any vertex of `K_{m_1} × ... × K_{m_k}`.
pub fn complete_product_verdict(m_list: &[usize]) -> Result<VertexClassification, FamilyError> {
    let kind = MatrixKind::Adjacency;
    // Validates the list.
    walk::complete_product_diagonal(m_list, 0.0)?;
    let mut trail = vec![format!("direct product of complete graphs {:?}", m_list)];
    let diag = |t: f64| walk::complete_product_diagonal(m_list, t).map(|z| z.norm()).unwrap_or(1.0);
    let period_min = || {
        let (t, v, err) = walk::grid_minimum(diag, 0.0, 2.0 * PI, walk::PERIOD_GRID_POINTS, 2.0 * m_list.iter().map(|&m| m as f64).product::<f64>().powi(2));
        InfimumEstimate {
            value: v.min(1.0),
            attained_time: Some(t),
            mode: walk::InfimumMode::ExactOnPeriod,
            grid: walk::GridParams { horizon: 2.0 * PI, points: walk::PERIOD_GRID_POINTS },
            error_bar: err,
        }
    };
    if let Some(terms) = walk::complete_product_cosines(m_list) {
        trail.push("a factor K_2 makes the diagonal a real cosine sum".into());
        if let Some(t0) = sedentary::real_diagonal_zero_search(&terms, 2.0 * PI) {
            trail.push(format!("sign change: zero at {t0:.12}"));
            return Ok(classification(0, kind, Verdict::NotSedentary { zero_time: Some(t0) }, trail, None));
        }
        trail.push("no sign change over one period".into());
        let est = period_min();
        let verdict = if est.value < ZERO_TOL {
            trail.push("the cosine sum touches zero".into());
            Verdict::NotSedentary { zero_time: est.attained_time }
        } else {
            Verdict::Sedentary { constant: Some(est.value), sharpness: Sharpness::Tight { time: est.attained_time.unwrap_or(0.0) } }
        };
        return Ok(classification(0, kind, verdict, trail, Some(est)));
    }
    let prod_m: f64 = m_list.iter().map(|&m| m as f64).product();
    let prod_m1: f64 = m_list.iter().map(|&m| (m - 1) as f64).product();
    let c = 2.0 / prod_m * (prod_m1 - prod_m / 2.0).abs();
    let est = period_min();
    if c <= 1e-12 {
        trail.push("product formula degenerates to zero: minimum over one period".into());
        let verdict = if est.value < ZERO_TOL {
            Verdict::NotSedentary { zero_time: est.attained_time }
        } else {
            Verdict::Sedentary { constant: Some(est.value), sharpness: Sharpness::Tight { time: est.attained_time.unwrap_or(0.0) } }
        };
        return Ok(classification(0, kind, verdict, trail, Some(est)));
    }
    if prod_m1 < prod_m / 2.0 {
        // The reverse triangle inequality behind the product bound needs the
        // leading term to dominate; otherwise only the period minimum is valid.
        trail.push("prod(m-1) < prod(m)/2: product bound does not apply, minimum over one period".into());
        let verdict = if est.value < ZERO_TOL {
            Verdict::NotSedentary { zero_time: est.attained_time }
        } else if m_list.iter().all(|m| m % 2 == 1) && (est.value - c).abs() <= sedentary::CONSTANT_AGREEMENT_TOL {
            trail.push(format!("minimum equals {c:.12} at pi"));
            Verdict::Sedentary { constant: Some(c), sharpness: Sharpness::Tight { time: PI } }
        } else {
            Verdict::Sedentary { constant: Some(est.value), sharpness: Sharpness::Tight { time: est.attained_time.unwrap_or(0.0) } }
        };
        return Ok(classification(0, kind, verdict, trail, Some(est)));
    }
    trail.push(format!("product bound (2/prod m)|prod(m-1) - prod(m)/2| = {c:.12}"));
    let sharpness = if m_list.iter().all(|m| m % 2 == 1) {
        trail.push("all factors odd: attained at pi".into());
        Sharpness::Tight { time: PI }
    } else {
        Sharpness::LowerBound
    };
    Ok(classification(0, kind, Verdict::Sedentary { constant: Some(c), sharpness }, trail, Some(est)))
}
