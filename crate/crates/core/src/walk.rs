//! Transition amplitudes `U(t) = Σ_j e^{itλ_j} E_j`, sampled series,
//! infimum estimation, and closed-form evaluators for products and joins.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::WalkError;
use crate::graph::{self, MatrixKind, WeightedGraph};
use crate::spectral::{self, SpectralDecomposition};

/// Grid density used on one period.
pub const PERIOD_GRID_POINTS: usize = 20_000;
/// Number of smallest samples refined by golden-section search.
pub const REFINED_CANDIDATES: usize = 5;
/// Time resolution of the refinement.
pub const REFINE_TOL: f64 = 1e-10;
/// Horizon of the non-periodic scan, in slowest beat periods.
pub const HORIZON_BEATS: f64 = 200.0;
/// Grid points per period of the fastest beat in the non-periodic scan.
pub const POINTS_PER_FAST_BEAT: f64 = 40.0;
/// Cap on the number of grid points of one scan.
pub const MAX_GRID_POINTS: usize = 2_000_000;

/// Walk on one decomposition, with projector diagonals cached.
#[derive(Clone, Debug)]
pub struct WalkEvaluator {
    dec: SpectralDecomposition,
}

/// The diagonal entry `t ↦ Σ_j w_j e^{itλ_j}` of one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalWalk {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiagonalWalk {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Self {
        Self { values, weights }
    }

    pub fn at(&self, t: f64) -> Complex64 {
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| Complex64::from_polar(*w, l * t))
            .sum()
    }

    pub fn magnitude(&self, t: f64) -> f64 {
        self.at(t).norm()
    }

    /// Smallest and largest gaps between distinct values.
    pub fn gaps(&self) -> (f64, f64) {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        let spread = v.last().copied().unwrap_or(0.0) - v.first().copied().unwrap_or(0.0);
        let min_gap = v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        (min_gap, spread)
    }
}

/// Sampling parameters behind an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridParams {
    pub horizon: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InfimumMode {
    /// Minimum over one full period: the infimum over all `t`.
    ExactOnPeriod,
    /// Minimum over a bounded horizon: only an upper bound on the infimum.
    GridLowerConfidence,
}

/// Estimated `inf_t |U(t)_{u,u}|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfimumEstimate {
    pub value: f64,
    pub attained_time: Option<f64>,
    pub mode: InfimumMode,
    pub grid: GridParams,
    /// Curvature-based bound on what the grid could miss between samples.
    pub error_bar: f64,
}

impl WalkEvaluator {
    pub fn new(dec: SpectralDecomposition) -> Self {
        Self { dec }
    }

    pub fn from_graph(g: &WeightedGraph, kind: MatrixKind) -> Result<Self, WalkError> {
        Ok(Self::new(spectral::decompose(g, kind)?))
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.dec
    }

    pub fn n(&self) -> usize {
        self.dec.n()
    }

    /// `U(t)_{u,v}`.
    pub fn amplitude(&self, u: usize, v: usize, t: f64) -> Complex64 {
        self.dec
            .eigenvalues
            .iter()
            .zip(&self.dec.projectors)
            .map(|(l, e)| Complex64::from_polar(1.0, l * t) * e[(u, v)])
            .sum()
    }

    pub fn magnitude(&self, u: usize, v: usize, t: f64) -> f64 {
        self.amplitude(u, v, t).norm().min(1.0)
    }

    /// Diagonal walk restricted to the support of `u`.
    pub fn diagonal(&self, u: usize) -> Result<DiagonalWalk, WalkError> {
        let s = self.dec.support(u)?;
        Ok(DiagonalWalk::new(s.values, s.weights))
    }

    /// `(t, |U(t)_{u,u}|)` on a uniform grid over `[0, t_max]`, endpoints included.
    pub fn diagonal_series(&self, u: usize, t_max: f64, steps: usize) -> Result<Vec<(f64, f64)>, WalkError> {
        let d = self.diagonal(u)?;
        let steps = steps.max(2);
        Ok((0..steps)
            .map(|i| {
                let t = t_max * i as f64 / (steps - 1) as f64;
                (t, d.magnitude(t).min(1.0))
            })
            .collect())
    }

    /// Infimum of `|U(t)_{u,u}|`: over one period when `u` is periodic,
    /// otherwise over a bounded horizon.
    pub fn infimum_diagonal(&self, u: usize) -> Result<InfimumEstimate, WalkError> {
        let d = self.diagonal(u)?;
        let period = self.dec.is_periodic(u)?;
        Ok(match period {
            Some(p) if p.trivial => InfimumEstimate {
                value: d.magnitude(0.0).min(1.0),
                attained_time: Some(0.0),
                mode: InfimumMode::ExactOnPeriod,
                grid: GridParams { horizon: p.rho, points: 1 },
                error_bar: 0.0,
            },
            Some(p) => minimize_periodic(&d, p.rho),
            None => minimize_horizon(&d, None),
        })
    }
}

/// Minimum of `|d(t)|` over `[0, rho]` for a diagonal of period `rho`.
pub fn minimize_periodic(d: &DiagonalWalk, rho: f64) -> InfimumEstimate {
    let (t, v, err) = grid_minimum(|t| d.magnitude(t), 0.0, rho, PERIOD_GRID_POINTS, curvature(d));
    let t = snap_to_pi_multiple(|t| d.magnitude(t), t);
    let v = d.magnitude(t).min(v.max(0.0)).max(0.0);
    InfimumEstimate {
        value: v.min(1.0),
        attained_time: Some(t),
        mode: InfimumMode::ExactOnPeriod,
        grid: GridParams { horizon: rho, points: PERIOD_GRID_POINTS },
        error_bar: err,
    }
}

/// Bounded-horizon scan; the horizon defaults to 200 slowest beats.
pub fn minimize_horizon(d: &DiagonalWalk, horizon: Option<f64>) -> InfimumEstimate {
    let (min_gap, spread) = d.gaps();
    if !(spread > 0.0) {
        return InfimumEstimate {
            value: d.magnitude(0.0).min(1.0),
            attained_time: Some(0.0),
            mode: InfimumMode::ExactOnPeriod,
            grid: GridParams { horizon: 0.0, points: 1 },
            error_bar: 0.0,
        };
    }
    let horizon = horizon.unwrap_or(HORIZON_BEATS * 2.0 * PI / min_gap);
    let step = 2.0 * PI / (POINTS_PER_FAST_BEAT * spread);
    let points = ((horizon / step).ceil() as usize).clamp(1000, MAX_GRID_POINTS);
    let (t, v, err) = grid_minimum(|t| d.magnitude(t), 0.0, horizon, points, curvature(d));
    InfimumEstimate {
        value: v.min(1.0),
        attained_time: Some(t),
        mode: InfimumMode::GridLowerConfidence,
        grid: GridParams { horizon, points },
        error_bar: err,
    }
}

/// Largest denominator tried by [`snap_to_pi_multiple`].
pub const SNAP_MAX_DENOMINATOR: i64 = 64;

/// Replaces `t` by a nearby `pπ/q` when `f` is no larger there.
pub fn snap_to_pi_multiple<F: Fn(f64) -> f64>(f: F, t: f64) -> f64 {
    let ft = f(t);
    for q in 1..=SNAP_MAX_DENOMINATOR {
        let p = (t * q as f64 / PI).round();
        let cand = p * PI / q as f64;
        if (cand - t).abs() < 1e-6 && f(cand) <= ft + 1e-12 {
            return cand;
        }
    }
    t
}

/// Bound on the second derivative of `|d(t)|²`.
fn curvature(d: &DiagonalWalk) -> f64 {
    let (_, spread) = d.gaps();
    2.0 * spread * spread
}

/// Grid scan over `[a, b]` followed by golden-section refinement of the
/// smallest samples. Returns `(argmin, min, error_bar)`.
pub fn grid_minimum<F>(f: F, a: f64, b: f64, points: usize, curv: f64) -> (f64, f64, f64)
where
    F: Fn(f64) -> f64 + Sync,
{
    let points = points.max(3);
    let h = (b - a) / (points - 1) as f64;
    const CHUNK: usize = 4096;
    let chunks = points.div_ceil(CHUNK);
    let mut cands: Vec<(f64, usize)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(points);
            let mut local: Vec<(f64, usize)> = (lo..hi).map(|i| (f(a + h * i as f64), i)).collect();
            local.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            local.truncate(REFINED_CANDIDATES * 4);
            local
        })
        .collect();
    cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    // Keep candidates that are not neighbours of a better one.
    let mut picked: Vec<(f64, usize)> = Vec::new();
    for c in cands {
        if picked.iter().all(|p| p.1.abs_diff(c.1) > 2) {
            picked.push(c);
        }
        if picked.len() == REFINED_CANDIDATES {
            break;
        }
    }
    let mut best = (a, f64::INFINITY);
    for (v, i) in picked {
        if v < best.1 {
            best = (a + h * i as f64, v);
        }
        let lo = (a + h * (i as f64 - 1.0)).max(a);
        let hi = (a + h * (i as f64 + 1.0)).min(b);
        let (t, fv) = golden_section(&f, lo, hi, REFINE_TOL);
        if fv < best.1 {
            best = (t, fv);
        }
    }
    let err = 0.125 * curv * h * h;
    (best.0, best.1, err)
}

/// Golden-section minimization of `f` on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// Diagonal of `U_{A(K_m × Y)}(t)` at `(u, v)` from the walk on `Y`:
/// `(1/m) U_Y((m−1)t)_{v,v} + ((m−1)/m) U_Y(−t)_{v,v}`.
pub fn product_diagonal_km_y(m: usize, dec_y: &SpectralDecomposition, v: usize, t: f64) -> Result<Complex64, WalkError> {
    if m < 2 {
        return Err(WalkError::PartTooSmall(m));
    }
    let s = dec_y.support(v)?;
    let d = DiagonalWalk::new(s.values, s.weights);
    let mf = m as f64;
    Ok(d.at((mf - 1.0) * t) / mf + d.at(-t) * ((mf - 1.0) / mf))
}

/// Longest factor list accepted by [`complete_product_diagonal`].
pub const MAX_PRODUCT_FACTORS: usize = 20;

/// Diagonal of the walk on `K_{m_1} × ... × K_{m_k}` by the subset sum
/// `Π m_j^{-1} Σ_S Π_{j∈S}(m_j−1) e^{it(−1)^{|S|} Π_{j∉S}(m_j−1)}`.
pub fn complete_product_diagonal(m_list: &[usize], t: f64) -> Result<Complex64, WalkError> {
    if m_list.is_empty() {
        return Err(WalkError::NoFactors);
    }
    if m_list.len() > MAX_PRODUCT_FACTORS {
        return Err(WalkError::TooManyFactors { max: MAX_PRODUCT_FACTORS, got: m_list.len() });
    }
    if let Some(&m) = m_list.iter().find(|&&m| m < 2) {
        return Err(WalkError::PartTooSmall(m));
    }
    let k = m_list.len();
    let total: f64 = m_list.iter().map(|&m| m as f64).product();
    let mut acc = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1u32 << k) {
        let (mut inside, mut outside) = (1.0f64, 1.0f64);
        for (j, &m) in m_list.iter().enumerate() {
            if mask & (1 << j) != 0 {
                inside *= (m - 1) as f64;
            } else {
                outside *= (m - 1) as f64;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += Complex64::from_polar(inside, t * sign * outside);
    }
    Ok(acc / total)
}

/// Cosine terms `(coefficient, frequency)` of the real diagonal of a complete
/// product with a factor `K_2`.
pub fn complete_product_cosines(m_list: &[usize]) -> Option<Vec<(f64, f64)>> {
    let two = m_list.iter().position(|&m| m == 2)?;
    let rest: Vec<usize> = m_list.iter().enumerate().filter(|&(i, _)| i != two).map(|(_, &m)| m).collect();
    let total: f64 = rest.iter().map(|&m| m as f64).product();
    let k = rest.len();
    let mut terms = Vec::with_capacity(1 << k);
    for mask in 0u32..(1u32 << k) {
        let (mut inside, mut outside) = (1.0f64, 1.0f64);
        for (j, &m) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                inside *= (m - 1) as f64;
            } else {
                outside *= (m - 1) as f64;
            }
        }
        terms.push((inside / total, outside));
    }
    Some(terms)
}

/// Maximum change of any transition magnitude when `X` is joined to another graph.
pub fn join_perturbation_bound(nx: usize) -> f64 {
    2.0 / nx.max(1) as f64
}

/// Walk on `X × Y`. Matrices involving degrees need both factors regular;
/// other combinations are rejected.
pub fn direct_product_walk(x: &WeightedGraph, y: &WeightedGraph, kind: MatrixKind) -> Result<WalkEvaluator, WalkError> {
    let uses_degrees = !matches!(kind, MatrixKind::Adjacency | MatrixKind::Generalized(0.0));
    if uses_degrees && (x.is_weighted_regular().is_none() || y.is_weighted_regular().is_none()) {
        return Err(WalkError::IrregularProductLaplacian);
    }
    WalkEvaluator::from_graph(&graph::direct_product(x, y), kind)
}
