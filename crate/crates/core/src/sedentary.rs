//! Sedentariness decisions: projection-sum lower bounds, exact equality-time
//! and relation-parity criteria, the twin characterization, and a vertex
//! classifier that combines them with numeric evidence.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::SedentaryError;
use crate::graph::{MatrixKind, WeightedGraph};
use crate::numtheory::{self, CriterionFailure, PhaseSolution, QuadInt, RelationParity};
use crate::spectral::{self, ExactSupport, SpectralDecomposition};
use crate::twins::{self, TwinBranch, TwinSet};
use crate::walk::{self, DiagonalWalk, InfimumEstimate, InfimumMode};

/// A minimum below this counts as a zero of `U(t)_{u,u}`.
pub const ZERO_TOL: f64 = 1e-7;
/// Closed-form and numeric constants must agree to this before the closed
/// form is reported.
pub const CONSTANT_AGREEMENT_TOL: f64 = 1e-6;
/// Coefficient bound for [`pgst_parity_bounded`].
pub const DEFAULT_RELATION_BOUND: i64 = 6;

/// How the constant of a sedentary vertex is attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sharpness {
    /// `|U(t)_{u,u}| = C` at `time`.
    Tight { time: f64 },
    /// The infimum equals `C` but is not attained.
    Sharp,
    /// `C` is a lower bound only.
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Sedentary { constant: Option<f64>, sharpness: Sharpness },
    Pst { partner: usize, time: f64 },
    Pgst { partner: usize },
    NotSedentary { zero_time: Option<f64> },
    Undetermined,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Sedentary { .. } => "sedentary",
            Verdict::Pst { .. } => "pst",
            Verdict::Pgst { .. } => "pgst",
            Verdict::NotSedentary { .. } => "not_sedentary",
            Verdict::Undetermined => "undetermined",
        }
    }
}

/// Verdict for one vertex with the reasoning that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexClassification {
    pub vertex: usize,
    pub matrix_kind: MatrixKind,
    pub verdict: Verdict,
    pub lemma_trail: Vec<String>,
    pub evidence: Option<InfimumEstimate>,
}

impl VertexClassification {
    pub fn is_sedentary(&self) -> bool {
        matches!(self.verdict, Verdict::Sedentary { .. })
    }

    /// PST or PGST.
    pub fn is_state_transfer(&self) -> bool {
        matches!(self.verdict, Verdict::Pst { .. } | Verdict::Pgst { .. })
    }

    pub fn constant(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Sedentary { constant, .. } => constant,
            _ => None,
        }
    }

    pub fn tightness_time(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Sedentary { sharpness: Sharpness::Tight { time }, .. } => Some(time),
            _ => None,
        }
    }

    pub fn partner(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Pst { partner, .. } | Verdict::Pgst { partner } => Some(partner),
            _ => None,
        }
    }
}

/// Lower bound from a subset `S` of the support carrying weight `a ≥ 1/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SedentaryBound {
    pub vertex: usize,
    /// Eigenvalue indices of `S`.
    pub subset: Vec<usize>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    /// `Σ_{j∈S} (E_j)_{u,u}`.
    pub a: f64,
    /// `2a − 1`, reported when it bounds `|U(t)_{u,u}|` for every `t`
    /// (always the case for a single eigenvalue).
    pub certified_constant: Option<f64>,
    /// Time at which the bound curve meets `2a − 1` with all phases aligned.
    pub tightness_time: Option<f64>,
}

impl SedentaryBound {
    /// `|Σ_{j∈S} e^{itλ_j}(E_j)_{u,u}| − (1 − a)`.
    pub fn curve(&self, t: f64) -> f64 {
        DiagonalWalk::new(self.values.clone(), self.weights.clone()).magnitude(t) - (1.0 - self.a)
    }

    /// `2a − 1`.
    pub fn value(&self) -> f64 {
        2.0 * self.a - 1.0
    }
}

/// Builds the bound for `S` (eigenvalue indices) at `u`.
pub fn projection_sum_bound(
    dec: &SpectralDecomposition,
    u: usize,
    subset: &[usize],
) -> Result<SedentaryBound, SedentaryError> {
    let sup = dec.support(u)?;
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.is_empty() || subset.len() >= sup.indices.len() || subset.iter().any(|j| !sup.indices.contains(j)) {
        return Err(SedentaryError::NotProperSubset);
    }
    let weights: Vec<f64> = subset.iter().map(|&j| dec.projectors[j][(u, u)]).collect();
    let a: f64 = weights.iter().sum();
    if a < 0.5 - 1e-12 {
        return Err(SedentaryError::WeightTooSmall(a));
    }
    let values = subset.iter().map(|&j| dec.eigenvalues[j]).collect();
    let tightness_time = dec
        .exact_support(u)?
        .and_then(|ex| equality_time_criterion(&ex, &subset).ok());
    Ok(SedentaryBound {
        vertex: u,
        certified_constant: (subset.len() == 1).then_some(2.0 * a - 1.0),
        subset,
        values,
        weights,
        a,
        tightness_time,
    })
}

fn split_values(ex: &ExactSupport, subset: &[usize]) -> (Vec<QuadInt>, Vec<QuadInt>) {
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for (i, &j) in ex.indices.iter().enumerate() {
        if subset.contains(&j) {
            inside.push(ex.values[i]);
        } else {
            outside.push(ex.values[i]);
        }
    }
    (inside, outside)
}

/// Smallest `t₁ > 0` with `e^{it₁(λ_1−λ_j)} = 1` on `S` and `= −1` off `S`,
/// decided by 2-adic valuations. Spectra that are not one shared quadratic
/// form are handled by the phase solver instead.
pub fn equality_time_criterion(ex: &ExactSupport, subset: &[usize]) -> Result<f64, CriterionFailure> {
    let in_s: Vec<bool> = ex.indices.iter().map(|j| subset.contains(j)).collect();
    match numtheory::valuation_equality_time(&ex.values, &in_s) {
        Err(CriterionFailure::NotSharedForm) => equality_time_by_phases(ex, subset).ok_or(CriterionFailure::Valuation),
        other => other,
    }
}

/// Same question answered by solving the phase equations directly.
pub fn equality_time_by_phases(ex: &ExactSupport, subset: &[usize]) -> Option<f64> {
    let (inside, outside) = split_values(ex, subset);
    if inside.is_empty() || outside.is_empty() {
        return None;
    }
    let anchor = inside[0];
    let plus: Vec<QuadInt> = inside.iter().map(|v| anchor.checked_sub(v)).collect::<Result<_, _>>().ok()?;
    let minus: Vec<QuadInt> = outside.iter().map(|v| anchor.checked_sub(v)).collect::<Result<_, _>>().ok()?;
    match numtheory::solve_phases(&plus, &minus).ok()? {
        PhaseSolution::Time(t) => Some(t),
        _ => None,
    }
}

/// Whether `|U(t)_{u,u}|` comes arbitrarily close to `2a − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParityVerdict {
    ApproachesEquality,
    Blocked,
    Inconclusive,
}

impl From<RelationParity> for ParityVerdict {
    fn from(p: RelationParity) -> Self {
        match p {
            RelationParity::AllRelationsEvenSum => ParityVerdict::ApproachesEquality,
            RelationParity::RelationWithOddSum => ParityVerdict::Blocked,
            RelationParity::Inconclusive => ParityVerdict::Inconclusive,
        }
    }
}

/// Exact decision over the whole relation lattice.
pub fn pgst_parity_criterion(ex: &ExactSupport, subset: &[usize]) -> Result<ParityVerdict, SedentaryError> {
    let (inside, outside) = split_values(ex, subset);
    Ok(numtheory::relation_parity_exact(&inside, &outside)?.into())
}

/// Bounded enumeration of relations with `|coefficients| ≤ bound`.
pub fn pgst_parity_bounded(ex: &ExactSupport, subset: &[usize], bound: i64) -> Result<ParityVerdict, SedentaryError> {
    let (inside, outside) = split_values(ex, subset);
    Ok(numtheory::integer_relation_parity(&inside, &outside, bound)?.into())
}

/// Outcome of testing a strongly cospectral pair with an exact spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum PairOutcome {
    Pst(f64),
    Pgst,
    /// Some relation has an odd sum over `σ⁻`: no PGST, the vertex is sedentary.
    Blocked,
}

/// PST, PGST or neither for a strongly cospectral pair with sign classes
/// `plus` (`σ⁺`) and `minus` (`σ⁻`).
pub fn strongly_cospectral_pair(plus: &[QuadInt], minus: &[QuadInt]) -> Result<PairOutcome, SedentaryError> {
    if let (Some(&anchor), false) = (plus.first(), minus.is_empty()) {
        let p: Vec<QuadInt> = plus.iter().map(|v| v.checked_sub(&anchor)).collect::<Result<_, _>>()?;
        let m: Vec<QuadInt> = minus.iter().map(|v| v.checked_sub(&anchor)).collect::<Result<_, _>>()?;
        if let PhaseSolution::Time(t) = numtheory::solve_phases(&p, &m)? {
            return Ok(PairOutcome::Pst(t));
        }
    }
    let values: Vec<QuadInt> = plus.iter().chain(minus).copied().collect();
    let mask: Vec<bool> = (0..values.len()).map(|i| i >= plus.len()).collect();
    Ok(if numtheory::odd_relation_exists(&values, &mask, true)? {
        PairOutcome::Blocked
    } else {
        PairOutcome::Pgst
    })
}

fn strongly_cospectral_outcome(ex: &ExactSupport, minus: &[usize]) -> Result<PairOutcome, SedentaryError> {
    let (m_vals, p_vals) = split_values(ex, minus);
    strongly_cospectral_pair(&p_vals, &m_vals)
}

fn fmt_t(t: f64) -> String {
    format!("{t:.12}")
}

/// Classifies the vertices of one graph, sharing the decomposition and
/// twin sets between calls.
pub struct Classifier<'a> {
    graph: &'a WeightedGraph,
    dec: SpectralDecomposition,
    twin_sets: Vec<TwinSet>,
}

impl<'a> Classifier<'a> {
    pub fn new(graph: &'a WeightedGraph, kind: MatrixKind) -> Result<Self, SedentaryError> {
        let dec = spectral::decompose(graph, kind)?;
        Ok(Self::with_decomposition(graph, dec))
    }

    pub fn with_decomposition(graph: &'a WeightedGraph, dec: SpectralDecomposition) -> Self {
        let twin_sets = twins::find_twin_sets(graph, dec.matrix_kind);
        Self { graph, dec, twin_sets }
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }

    pub fn twin_sets(&self) -> &[TwinSet] {
        &self.twin_sets
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.graph
    }

    pub fn classify(&self, u: usize) -> Result<VertexClassification, SedentaryError> {
        self.dec.support(u)?;
        match self.twin_sets.iter().find(|t| t.contains(u)) {
            Some(t) => classify_twin_vertex(&self.dec, t, u),
            None => classify_generic(&self.dec, u, Vec::new()),
        }
    }

    pub fn classify_all(&self) -> Result<Vec<VertexClassification>, SedentaryError> {
        (0..self.graph.n()).into_par_iter().map(|u| self.classify(u)).collect()
    }
}

/// Classifies `u` in `g` under `kind`.
pub fn classify_vertex(g: &WeightedGraph, kind: MatrixKind, u: usize) -> Result<VertexClassification, SedentaryError> {
    Classifier::new(g, kind)?.classify(u)
}

/// Classifies every vertex of `g`.
pub fn classify_all(g: &WeightedGraph, kind: MatrixKind) -> Result<Vec<VertexClassification>, SedentaryError> {
    Classifier::new(g, kind)?.classify_all()
}

fn result(dec: &SpectralDecomposition, u: usize, verdict: Verdict, trail: Vec<String>, evidence: Option<InfimumEstimate>) -> VertexClassification {
    VertexClassification {
        vertex: u,
        matrix_kind: dec.matrix_kind,
        verdict,
        lemma_trail: trail,
        evidence,
    }
}

fn diagonal(dec: &SpectralDecomposition, u: usize) -> Result<DiagonalWalk, SedentaryError> {
    let s = dec.support(u)?;
    Ok(DiagonalWalk::new(s.values, s.weights))
}

/// Periodic vertex: the minimum over one period is the infimum.
fn periodic_verdict(
    dec: &SpectralDecomposition,
    u: usize,
    rho: f64,
    closed_form: Option<(f64, f64)>,
    mut trail: Vec<String>,
) -> Result<VertexClassification, SedentaryError> {
    let d = diagonal(dec, u)?;
    let est = walk::minimize_periodic(&d, rho);
    trail.push(format!("periodic with period {}: minimum over one period", fmt_t(rho)));
    if est.value < ZERO_TOL {
        trail.push("U(t)_uu vanishes inside the period".into());
        return Ok(result(dec, u, Verdict::NotSedentary { zero_time: est.attained_time }, trail, Some(est)));
    }
    let (constant, time) = match closed_form {
        Some((c, t)) if (c - est.value).abs() <= CONSTANT_AGREEMENT_TOL => {
            trail.push(format!("closed-form constant {c:.12} attained at {}", fmt_t(t)));
            (c, t)
        }
        _ => (est.value, est.attained_time.unwrap_or(0.0)),
    };
    Ok(result(
        dec,
        u,
        Verdict::Sedentary { constant: Some(constant), sharpness: Sharpness::Tight { time } },
        trail,
        Some(est),
    ))
}

/// Decision tree for a vertex with a twin.
pub fn classify_twin_vertex(dec: &SpectralDecomposition, t: &TwinSet, u: usize) -> Result<VertexClassification, SedentaryError> {
    let (branch, split) = twins::twin_dichotomy(dec, t, u)?;
    let exact = dec.exact_support(u)?;
    let period = exact.as_ref().and_then(|ex| spectral::period_of(&ex.values));
    let mut trail = vec![format!("twin set of size {} with theta = {:.12}", t.len(), t.theta_for(dec.matrix_kind))];
    match branch {
        TwinBranch::Sedentary { large_set, bound } => {
            trail.push(if large_set {
                format!("twin set of size >= 3: |U(t)_uu| >= 1 - 2/|T| + 2F_uu = {bound:.12}")
            } else {
                format!("extra theta-eigenvector meets u: |U(t)_uu| >= 2F_uu = {bound:.12}")
            });
            let s = [split.theta_index];
            if let (Some(ex), Some(p)) = (&exact, period) {
                let eq = equality_time_criterion(ex, &s).ok();
                if let Some(t1) = eq {
                    trail.push(format!("equality time criterion holds at t = {}", fmt_t(t1)));
                } else {
                    trail.push("equality time criterion fails: constant exceeds the bound".into());
                }
                return periodic_verdict(dec, u, p.rho, eq.map(|t1| (bound, t1)), trail);
            }
            let d = diagonal(dec, u)?;
            let est = walk::minimize_horizon(&d, None);
            let sharpness = match &exact {
                Some(ex) => match pgst_parity_criterion(ex, &s)? {
                    ParityVerdict::ApproachesEquality => {
                        trail.push("all integer relations have even sum over S: bound is approached".into());
                        Sharpness::Sharp
                    }
                    _ => {
                        trail.push("odd integer relation: bound is not approached".into());
                        Sharpness::LowerBound
                    }
                },
                None => {
                    trail.push("spectrum not recognized exactly: sharpness undecided".into());
                    Sharpness::LowerBound
                }
            };
            Ok(result(dec, u, Verdict::Sedentary { constant: Some(bound), sharpness }, trail, Some(est)))
        }
        TwinBranch::StronglyCospectral { partner } => {
            trail.push(format!("theta simple: strongly cospectral with twin {partner}"));
            let Some(ex) = exact else {
                trail.push("spectrum not recognized exactly: PGST undecided".into());
                let est = walk::minimize_horizon(&diagonal(dec, u)?, None);
                return Ok(result(dec, u, Verdict::Undetermined, trail, Some(est)));
            };
            let minus = [split.theta_index];
            match strongly_cospectral_outcome(&ex, &minus)? {
                PairOutcome::Pst(time) => {
                    trail.push(format!("phase conditions solvable: PST at {}", fmt_t(time)));
                    Ok(result(dec, u, Verdict::Pst { partner, time }, trail, None))
                }
                PairOutcome::Pgst => {
                    trail.push("every relation has even sum over sigma-minus: PGST".into());
                    Ok(result(dec, u, Verdict::Pgst { partner }, trail, None))
                }
                PairOutcome::Blocked => {
                    trail.push("odd relation over sigma-plus shifted by theta: sedentary".into());
                    if let Some(p) = period {
                        return periodic_verdict(dec, u, p.rho, None, trail);
                    }
                    let est = walk::minimize_horizon(&diagonal(dec, u)?, None);
                    trail.push("no general constant for this case; grid evidence only".into());
                    Ok(result(dec, u, Verdict::Sedentary { constant: None, sharpness: Sharpness::LowerBound }, trail, Some(est)))
                }
            }
        }
    }
}

/// Values and weights symmetric about a centre: the diagonal is a phase
/// times a real cosine sum. Returns the cosine terms.
fn real_cosine_terms(d: &DiagonalWalk) -> Option<Vec<(f64, f64)>> {
    let lo = d.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = d.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c = 0.5 * (lo + hi);
    let tol = 1e-7 * (1.0 + hi.abs().max(lo.abs()));
    for (l, w) in d.values.iter().zip(&d.weights) {
        let mirror = 2.0 * c - l;
        let ok = d
            .values
            .iter()
            .zip(&d.weights)
            .any(|(m, wm)| (m - mirror).abs() <= tol && (wm - w).abs() <= 1e-9);
        if !ok {
            return None;
        }
    }
    Some(d.values.iter().zip(&d.weights).map(|(l, w)| (*w, l - c)).collect())
}

fn classify_generic(dec: &SpectralDecomposition, u: usize, mut trail: Vec<String>) -> Result<VertexClassification, SedentaryError> {
    let d = diagonal(dec, u)?;
    let exact = dec.exact_support(u)?;
    let period = exact.as_ref().and_then(|ex| spectral::period_of(&ex.values));

    if d.values.len() == 1 {
        trail.push("single eigenvalue in the support: |U(t)_uu| = 1".into());
        let est = walk::minimize_periodic(&d, period.map_or(2.0 * PI, |p| p.rho));
        return Ok(result(
            dec,
            u,
            Verdict::Sedentary { constant: Some(1.0), sharpness: Sharpness::Tight { time: 0.0 } },
            trail,
            Some(est),
        ));
    }

    for v in (0..dec.n()).filter(|&v| v != u) {
        let Some(part) = dec.strongly_cospectral(u, v)? else { continue };
        trail.push(format!("strongly cospectral with {v}"));
        match &exact {
            Some(ex) => match strongly_cospectral_outcome(ex, &part.minus)? {
                PairOutcome::Pst(time) => {
                    trail.push(format!("phase conditions solvable: PST at {}", fmt_t(time)));
                    return Ok(result(dec, u, Verdict::Pst { partner: v, time }, trail, None));
                }
                PairOutcome::Pgst => {
                    trail.push("every relation has even sum over sigma-minus: PGST".into());
                    return Ok(result(dec, u, Verdict::Pgst { partner: v }, trail, None));
                }
                PairOutcome::Blocked => trail.push("odd relation over sigma-minus: no PGST".into()),
            },
            None => trail.push("spectrum not recognized exactly: PGST undecided".into()),
        }
    }

    // Best single-eigenvalue bound.
    let (jmax, wmax) = d
        .weights
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &w)| if w > acc.1 { (i, w) } else { acc });
    let sup = dec.support(u)?;
    let best_index = sup.indices[jmax];
    let single = 2.0 * wmax - 1.0;

    if let (Some(ex), Some(p)) = (&exact, period) {
        let closed = if single > 0.0 {
            equality_time_criterion(ex, &[best_index]).ok().map(|t1| (single, t1))
        } else {
            None
        };
        if single > ZERO_TOL {
            trail.push(format!("dominant eigenvalue weight gives |U(t)_uu| >= {single:.12}"));
        }
        return periodic_verdict(dec, u, p.rho, closed, trail);
    }

    let est = walk::minimize_horizon(&d, None);
    if single > ZERO_TOL {
        trail.push(format!("dominant eigenvalue weight gives |U(t)_uu| >= {single:.12}"));
        let sharpness = match &exact {
            Some(ex) => match pgst_parity_criterion(ex, &[best_index])? {
                ParityVerdict::ApproachesEquality => {
                    trail.push("all integer relations have even sum over S: bound is approached".into());
                    Sharpness::Sharp
                }
                _ => Sharpness::LowerBound,
            },
            None => Sharpness::LowerBound,
        };
        return Ok(result(dec, u, Verdict::Sedentary { constant: Some(single), sharpness }, trail, Some(est)));
    }

    if let Some(terms) = real_cosine_terms(&d) {
        let horizon = est.grid.horizon;
        if let Some(t0) = real_diagonal_zero_search(&terms, horizon) {
            trail.push(format!("real-valued diagonal changes sign: zero at {}", fmt_t(t0)));
            return Ok(result(dec, u, Verdict::NotSedentary { zero_time: Some(t0) }, trail, Some(est)));
        }
    }
    trail.push("no certificate: grid evidence only".into());
    Ok(result(dec, u, Verdict::Undetermined, trail, Some(est)))
}

/// First zero of `Σ c_k cos(ω_k t)` on `(0, horizon]`, by sign change and bisection.
pub fn real_diagonal_zero_search(terms: &[(f64, f64)], horizon: f64) -> Option<f64> {
    let f = |t: f64| terms.iter().map(|(c, w)| c * (w * t).cos()).sum::<f64>();
    let wmax = terms.iter().fold(0.0f64, |m, (_, w)| m.max(w.abs()));
    if wmax == 0.0 || !(horizon > 0.0) {
        return None;
    }
    let step = PI / (16.0 * wmax);
    let steps = ((horizon / step).ceil() as usize).min(50_000_000);
    let (mut a, mut fa) = (0.0, f(0.0));
    for i in 1..=steps {
        let b = (i as f64 * step).min(horizon);
        let fb = f(b);
        if fb == 0.0 {
            return Some(b);
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.abs() < 1e-12 || hi - lo < 1e-15 {
                    return Some(mid);
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    None
}

/// Sedentariness of `(u, v)` in `K_2 × Y`, read off `Re U_Y(t)_{v,v}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteDoubleReport {
    pub zero_time: Option<f64>,
    pub infimum: InfimumEstimate,
    /// `Some(true)` when certified sedentary, `Some(false)` when a zero was found.
    pub sedentary: Option<bool>,
}

pub fn bipartite_double_sedentary(dec_y: &SpectralDecomposition, v: usize) -> Result<BipartiteDoubleReport, SedentaryError> {
    let s = dec_y.support(v)?;
    let terms: Vec<(f64, f64)> = s.weights.iter().zip(&s.values).map(|(w, l)| (*w, *l)).collect();
    let re = |t: f64| terms.iter().map(|(c, w)| c * (w * t).cos()).sum::<f64>().abs();
    // Period of the cosine sum: all frequencies commensurate.
    let period = dec_y.exact_support(v)?.and_then(|ex| match numtheory::solve_phases(&ex.values, &[]) {
        Ok(PhaseSolution::Time(t)) => Some(t),
        _ => None,
    });
    let d = DiagonalWalk::new(s.values.clone(), s.weights.clone());
    let (min_gap, _) = d.gaps();
    let wmin = s.values.iter().filter(|l| l.abs() > 1e-9).fold(f64::INFINITY, |m, l| m.min(l.abs()));
    let horizon = period.unwrap_or_else(|| walk::HORIZON_BEATS * 2.0 * PI / min_gap.min(wmin).max(1e-6));
    let zero_time = real_diagonal_zero_search(&terms, horizon);
    let wmax = s.values.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(1e-9);
    let points = match period {
        Some(_) => walk::PERIOD_GRID_POINTS,
        None => ((horizon * walk::POINTS_PER_FAST_BEAT * wmax / (2.0 * PI)) as usize).clamp(1000, walk::MAX_GRID_POINTS),
    };
    let (t, value, err) = walk::grid_minimum(re, 0.0, horizon, points, 2.0 * wmax * wmax);
    let t = walk::snap_to_pi_multiple(re, t);
    let value = value.min(re(t));
    // A zero where the cosine sum touches the axis without changing sign.
    let zero_time = zero_time.or((value < ZERO_TOL).then_some(t));
    let infimum = InfimumEstimate {
        value: value.min(1.0),
        attained_time: Some(t),
        mode: if period.is_some() { InfimumMode::ExactOnPeriod } else { InfimumMode::GridLowerConfidence },
        grid: walk::GridParams { horizon, points },
        error_bar: err,
    };
    let sedentary = if zero_time.is_some() {
        Some(false)
    } else if period.is_some() && value > ZERO_TOL {
        Some(true)
    } else {
        None
    };
    Ok(BipartiteDoubleReport { zero_time, infimum, sedentary })
}

/// Closed-form constant for `K_2 × (O_2 ∨ Z)` at an apex, with `Z`
/// `d`-regular on `s(d+s)/2` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DoubleConeDoubleConstant {
    pub constant: f64,
    pub time: f64,
    pub k0: i64,
}

/// Requires `d > 0`, `s` even and `ν₂(s) ≥ ν₂(d)`; `None` otherwise.
pub fn double_cone_double_constant(d: i64, s: i64) -> Option<DoubleConeDoubleConstant> {
    if d <= 0 || s <= 0 || s % 2 != 0 || s.trailing_zeros() < d.trailing_zeros() {
        return None;
    }
    let g = num_integer::gcd(d, s);
    let (d1, s1) = (d / g, s / g);
    let denom = (d1 + 2 * s1) as f64;
    let mut best: Option<(f64, i64)> = None;
    let mut j = 1;
    while j <= s1 {
        let lo = (j as f64 * denom / (4.0 * s1 as f64)).ceil() as i64;
        let hi = ((j + 2) as f64 * denom / (4.0 * s1 as f64)).floor() as i64;
        for k in lo.max(1)..=hi {
            let c = (s1 as f64 * k as f64 * PI / denom).cos().powi(2);
            if best.map_or(true, |(b, _)| c < b - 1e-15) {
                best = Some((c, k));
            }
        }
        j += 4;
    }
    best.map(|(constant, k0)| DoubleConeDoubleConstant {
        constant,
        time: 2.0 * k0 as f64 * PI / (d + 2 * s) as f64,
        k0,
    })
}

/// Lower bound for `(j, u)` in the blow-up of `m` copies of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowUpBound {
    pub m: usize,
    pub zero_in_support: bool,
    /// `(F₀)_{u,u}`, zero when `0 ∉ σ_u(A(X))`.
    pub f0_uu: f64,
    /// `2(E₀)_{(j,u),(j,u)} − 1 = 1 − 2/m + 2(F₀)_{u,u}/m`, where `E₀` is the
    /// zero projector of the blow-up.
    pub bound: f64,
    /// Time with `e^{itλ} = −1` for every nonzero blow-up support value.
    pub equality_time: Option<f64>,
}

pub fn blowup_bound(x: &WeightedGraph, u: usize, m: usize) -> Result<BlowUpBound, SedentaryError> {
    if m < 2 {
        return Err(SedentaryError::BlowUpTooSmall(m));
    }
    let dec = spectral::decompose(x, MatrixKind::Adjacency)?;
    let sup = dec.support(u)?;
    let tol = dec.grouping_tol.max(1e-9);
    let zero = sup.values.iter().position(|l| l.abs() <= tol);
    let f0_uu = zero.map_or(0.0, |p| sup.weights[p]);
    let equality_time = match dec.exact_support(u)? {
        Some(ex) => {
            let minus: Vec<QuadInt> = ex
                .values
                .iter()
                .filter(|v| !v.is_zero())
                .map(|v| v.scaled(m as i64))
                .collect::<Result<_, _>>()?;
            match numtheory::solve_phases(&[], &minus)? {
                PhaseSolution::Time(t) => Some(t),
                _ => None,
            }
        }
        None => None,
    };
    Ok(BlowUpBound {
        m,
        zero_in_support: zero.is_some(),
        f0_uu,
        bound: 1.0 - 2.0 / m as f64 + 2.0 * f0_uu / m as f64,
        equality_time,
    })
}

/// Sedentariness of `(j, u)` in the blow-up of two copies of `X`.
/// `None` when the support of `u` is not recognized exactly.
pub fn blowup_pair_sedentary(x: &WeightedGraph, u: usize) -> Result<Option<bool>, SedentaryError> {
    let dec = spectral::decompose(x, MatrixKind::Adjacency)?;
    let sup = dec.support(u)?;
    let tol = dec.grouping_tol.max(1e-9);
    if sup.values.iter().any(|l| l.abs() <= tol) {
        return Ok(Some(true));
    }
    let Some(ex) = dec.exact_support(u)? else { return Ok(None) };
    let mask = vec![true; ex.values.len()];
    Ok(Some(numtheory::odd_relation_exists(&ex.values, &mask, false)?))
}

/// `C − 2/n_X` when positive.
pub fn join_sedentary_transfer(c_x: f64, nx: usize) -> Option<f64> {
    let c = c_x - walk::join_perturbation_bound(nx);
    (c > 1e-12).then_some(c)
}
