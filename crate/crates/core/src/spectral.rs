//! Symmetric eigendecomposition grouped into distinct eigenvalues with their
//! orthogonal projectors, eigenvalue supports, (strong) cospectrality and
//! periodicity.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::SpectralError;
use crate::graph::{MatrixKind, WeightedGraph};
use crate::numtheory::{self, PhaseSolution, QuadInt};

/// Relative tolerance for merging eigenvalues into one class.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-7;
/// Threshold on `‖E_j e_u‖` for membership in the support.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-8;
/// Residual accepted when matching `E_j e_u = ±E_j e_v`.
pub const SIGN_TOL: f64 = 1e-7;
/// Tolerance for recognizing eigenvalues as exact quadratic integers.
pub const RECOGNITION_TOL: f64 = 1e-7;

/// Distinct eigenvalues (descending) with projectors and multiplicities.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projectors: Vec<DMatrix<f64>>,
    pub multiplicities: Vec<usize>,
    pub matrix_kind: MatrixKind,
    pub grouping_tol: f64,
    pub support_tol: f64,
    matrix: DMatrix<f64>,
    integral: bool,
}

/// Eigenvalue support of one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenvalueSupport {
    pub vertex: usize,
    /// Indices into [`SpectralDecomposition::eigenvalues`].
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// `(E_j)_{u,u}` for each index.
    pub weights: Vec<f64>,
}

/// Sign split of the support of a strongly cospectral pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignPartition {
    /// Indices with `E_j e_u = E_j e_v`.
    pub plus: Vec<usize>,
    /// Indices with `E_j e_u = -E_j e_v`.
    pub minus: Vec<usize>,
}

/// Minimum period of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Period {
    pub rho: f64,
    /// Single-eigenvalue support: `|U(t)_{u,u}| = 1` for every `t`.
    pub trivial: bool,
}

/// Support values of a vertex in exact form, aligned with the support indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactSupport {
    pub indices: Vec<usize>,
    pub values: Vec<QuadInt>,
    pub delta: i64,
}

impl ExactSupport {
    pub fn value_of(&self, index: usize) -> Option<QuadInt> {
        self.indices.iter().position(|&i| i == index).map(|p| self.values[p])
    }
}

fn is_integral_matrix(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| x.fract() == 0.0 && x.abs() < 1e15)
}

/// Decomposes the chosen matrix of `g`.
pub fn decompose(g: &WeightedGraph, kind: MatrixKind) -> Result<SpectralDecomposition, SpectralError> {
    let m = g.matrix(kind);
    let integral = g.has_integer_weights() && kind.is_integral();
    decompose_matrix(m, kind, integral)
}

/// [`decompose`] with a relative eigenvalue grouping tolerance in place of
/// [`DEFAULT_GROUPING_TOL`].
pub fn decompose_with_tol(g: &WeightedGraph, kind: MatrixKind, rel_tol: f64) -> Result<SpectralDecomposition, SpectralError> {
    let m = g.matrix(kind);
    let integral = g.has_integer_weights() && kind.is_integral();
    decompose_matrix_with_tol(m, kind, integral, rel_tol)
}

/// Decomposes a real symmetric matrix. `integral` asserts integer entries;
/// it is also detected automatically.
pub fn decompose_matrix(
    m: DMatrix<f64>,
    kind: MatrixKind,
    integral: bool,
) -> Result<SpectralDecomposition, SpectralError> {
    decompose_matrix_with_tol(m, kind, integral, DEFAULT_GROUPING_TOL)
}

/// [`decompose_matrix`] with an explicit relative grouping tolerance.
pub fn decompose_matrix_with_tol(
    m: DMatrix<f64>,
    kind: MatrixKind,
    integral: bool,
    rel_tol: f64,
) -> Result<SpectralDecomposition, SpectralError> {
    let n = m.nrows();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let asym = (&m - m.transpose()).amax();
    if asym > 1e-12 * (1.0 + m.amax()) {
        return Err(SpectralError::NotSymmetric(asym));
    }
    let integral = integral || is_integral_matrix(&m);
    let mut eig = SymmetricEigen::new(m.clone());
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(SpectralError::EigensolverFailure { max_entry: m.amax() });
    }
    eig.eigenvalues = jacobi_polish(&m, &mut eig.eigenvectors).into();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let radius = eig.eigenvalues.amax().max(1.0);
    let tol = rel_tol * radius;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(gr) if eig.eigenvalues[*gr.last().unwrap_or(&i)] - eig.eigenvalues[i] <= tol => gr.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    let mut multiplicities = Vec::with_capacity(groups.len());
    for gr in &groups {
        let mean = gr.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / gr.len() as f64;
        let v = DMatrix::from_fn(n, gr.len(), |r, c| eig.eigenvectors[(r, gr[c])]);
        let p = &v * v.transpose();
        eigenvalues.push(mean);
        projectors.push(p);
        multiplicities.push(gr.len());
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
        multiplicities,
        matrix_kind: kind,
        grouping_tol: tol,
        support_tol: DEFAULT_SUPPORT_TOL,
        matrix: m,
        integral,
    })
}

/// Cyclic Jacobi sweeps on `VᵀMV`, with the rotations folded into `V`.
///
/// The QR-based solver can return eigenvectors with residuals near 1e-4 on
/// integer matrices with large eigenspaces; the sweeps bring them back to
/// working precision. Returns the polished eigenvalues.
fn jacobi_polish(m: &DMatrix<f64>, v: &mut DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut b = v.transpose() * m * &*v;
    let scale = b.norm().max(f64::MIN_POSITIVE);
    for _ in 0..50 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| b[(i, j)] * b[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let bpq = b[(p, q)];
                if bpq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (b[(q, q)] - b[(p, p)]) / (2.0 * bpq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (bkp, bkq) = (b[(k, p)], b[(k, q)]);
                    b[(k, p)] = c * bkp - s * bkq;
                    b[(k, q)] = s * bkp + c * bkq;
                }
                for k in 0..n {
                    let (bpk, bqk) = (b[(p, k)], b[(q, k)]);
                    b[(p, k)] = c * bpk - s * bqk;
                    b[(q, k)] = s * bpk + c * bqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    (0..n).map(|i| b[(i, i)]).collect()
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// True when the characteristic polynomial has integer coefficients.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Index of the eigenvalue class nearest to `value`, if within `tol`.
    pub fn index_of(&self, value: f64, tol: f64) -> Option<usize> {
        let (i, d) = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l - value).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        (d <= tol).then_some(i)
    }

    /// `Σ_j λ_j E_j`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.n();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(DMatrix::zeros(n, n), |acc, (l, e)| acc + e * *l)
    }

    fn check_vertex(&self, u: usize) -> Result<(), SpectralError> {
        if u >= self.n() {
            Err(SpectralError::VertexOutOfRange { vertex: u, n: self.n() })
        } else {
            Ok(())
        }
    }

    fn column_norm(&self, j: usize, u: usize) -> f64 {
        self.projectors[j].column(u).norm()
    }

    /// Eigenvalue support of `u`.
    pub fn support(&self, u: usize) -> Result<EigenvalueSupport, SpectralError> {
        self.check_vertex(u)?;
        let indices: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&j| self.column_norm(j, u) > self.support_tol)
            .collect();
        Ok(EigenvalueSupport {
            vertex: u,
            values: indices.iter().map(|&j| self.eigenvalues[j]).collect(),
            weights: indices.iter().map(|&j| self.projectors[j][(u, u)]).collect(),
            indices,
        })
    }

    /// Equal projector diagonals at `u` and `v`.
    pub fn cospectral(&self, u: usize, v: usize) -> Result<bool, SpectralError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self
            .projectors
            .iter()
            .all(|e| (e[(u, u)] - e[(v, v)]).abs() <= 1e-8))
    }

    /// Sign partition when `E_j e_u = ±E_j e_v` for every class.
    pub fn strongly_cospectral(&self, u: usize, v: usize) -> Result<Option<SignPartition>, SpectralError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(None);
        }
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for (j, e) in self.projectors.iter().enumerate() {
            let (cu, cv) = (e.column(u), e.column(v));
            if cu.norm() <= self.support_tol && cv.norm() <= self.support_tol {
                continue;
            }
            let rp = (cu - cv).amax();
            let rm = (cu + cv).amax();
            if rp <= rm && rp < SIGN_TOL {
                plus.push(j);
            } else if rm < rp && rm < SIGN_TOL {
                minus.push(j);
            } else {
                return Ok(None);
            }
        }
        Ok(Some(SignPartition { plus, minus }))
    }

    /// Exact support values, available when the matrix is integral and every
    /// support eigenvalue is an integer or a quadratic integer over one radicand.
    pub fn exact_support(&self, u: usize) -> Result<Option<ExactSupport>, SpectralError> {
        let sup = self.support(u)?;
        if !self.integral {
            return Ok(None);
        }
        let mut values = Vec::with_capacity(sup.values.len());
        for &v in &sup.values {
            match numtheory::recognize_with_conjugates(v, &self.eigenvalues, RECOGNITION_TOL) {
                Some(q) => values.push(q),
                None => return Ok(None),
            }
        }
        match numtheory::common_radicand(&values) {
            Ok(delta) => Ok(Some(ExactSupport { indices: sup.indices, values, delta })),
            Err(_) => Ok(None),
        }
    }

    /// Minimum period of `u` when its support is recognized exactly and the
    /// eigenvalue differences are commensurate.
    pub fn is_periodic(&self, u: usize) -> Result<Option<Period>, SpectralError> {
        let Some(ex) = self.exact_support(u)? else {
            return Ok(None);
        };
        Ok(period_of(&ex.values))
    }
}

/// Period of a walk whose support values are `values`.
pub fn period_of(values: &[QuadInt]) -> Option<Period> {
    let first = *values.first()?;
    let diffs: Vec<QuadInt> = values
        .iter()
        .map(|v| v.checked_sub(&first))
        .collect::<Result<_, _>>()
        .ok()?;
    match numtheory::solve_phases(&diffs, &[]).ok()? {
        PhaseSolution::Time(rho) => Some(Period { rho, trivial: false }),
        PhaseSolution::Unconstrained => {
            let l = first.value().abs();
            Some(Period {
                rho: if l > 0.0 { 2.0 * PI / l } else { 2.0 * PI },
                trivial: true,
            })
        }
        PhaseSolution::Impossible => None,
    }
}
