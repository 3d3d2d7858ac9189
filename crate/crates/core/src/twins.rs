//! Twin vertices, twin sets `T(ω, η)`, the twin eigenvalue `θ` and the
//! projector `F` onto the part of the `θ`-eigenspace not spanned by
//! differences of twins.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::TwinError;
use crate::graph::{MatrixKind, Weight, WeightedGraph};
use crate::spectral::SpectralDecomposition;

/// Absolute tolerance for matching `θ` to a computed eigenvalue.
pub const THETA_TOL: f64 = 1e-7;
/// `F_{u,u}` below this counts as zero.
pub const F_TOL: f64 = 1e-9;

/// Maximal set of pairwise twins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwinSet {
    pub members: Vec<usize>,
    /// Loop weight at each member.
    pub omega: f64,
    /// Weight of the edge between any two members, zero when non-adjacent.
    pub eta: f64,
    /// Common degree of the members.
    pub degree: f64,
    /// `θ` for the matrix the set was computed with.
    pub theta: f64,
}

impl TwinSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members.contains(&u)
    }

    /// Eigenvalue of `e_u − e_v` under `kind`.
    pub fn theta_for(&self, kind: MatrixKind) -> f64 {
        twin_theta(kind, self.degree, self.omega, self.eta)
    }
}

/// `θ = q·deg + ω − η` for `M_q`, and `deg − ω + η` for the Laplacian.
pub fn twin_theta(kind: MatrixKind, degree: f64, omega: f64, eta: f64) -> f64 {
    match kind.q() {
        Some(q) => q * degree + omega - eta,
        None => degree - omega + eta,
    }
}

/// True when `u ≠ v` are twins: equal loops and equal weights to every
/// other vertex.
pub fn are_twins(g: &WeightedGraph, u: usize, v: usize) -> bool {
    if u == v || g.weight(u, u) != g.weight(v, v) {
        return false;
    }
    (0..g.n())
        .filter(|&w| w != u && w != v)
        .all(|w| g.weight(u, w) == g.weight(v, w))
}

/// All twin sets of `g`. Twinhood is an equivalence relation, so the sets
/// partition the vertices that have a twin.
pub fn find_twin_sets(g: &WeightedGraph, kind: MatrixKind) -> Vec<TwinSet> {
    let n = g.n();
    let mut class: Vec<Option<usize>> = vec![None; n];
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        if class[u].is_some() {
            continue;
        }
        let mut members = vec![u];
        for v in u + 1..n {
            if class[v].is_none() && are_twins(g, u, v) {
                members.push(v);
            }
        }
        if members.len() >= 2 {
            for &m in &members {
                class[m] = Some(sets.len());
            }
            sets.push(members);
        }
    }
    sets.into_iter()
        .map(|members| {
            let (u, v) = (members[0], members[1]);
            let omega = g.loop_weight(u).value();
            let eta = g.weight(u, v).map_or(0.0, |w: Weight| w.value());
            let degree = g.degree(u).value();
            TwinSet {
                theta: twin_theta(kind, degree, omega, eta),
                members,
                omega,
                eta,
                degree,
            }
        })
        .collect()
}

/// Twin set containing `u`, if any.
pub fn twin_set_of(g: &WeightedGraph, kind: MatrixKind, u: usize) -> Option<TwinSet> {
    find_twin_sets(g, kind).into_iter().find(|t| t.contains(u))
}

/// Decomposition of the `θ`-eigenspace into the span of twin differences
/// and its complement.
#[derive(Clone, Debug)]
pub struct ThetaEigenspaceSplit {
    /// `|T| − 1`.
    pub b1_dim: usize,
    /// Projector onto the complement of the twin differences.
    pub f: DMatrix<f64>,
    pub theta_multiplicity: usize,
    /// Index of `θ` in the decomposition.
    pub theta_index: usize,
}

impl ThetaEigenspaceSplit {
    pub fn f_uu(&self, u: usize) -> f64 {
        self.f[(u, u)]
    }

    /// True when some `θ`-eigenvector outside the twin differences touches `u`.
    pub fn touches(&self, u: usize) -> bool {
        self.f_uu(u) > F_TOL
    }

    pub fn rank_f(&self) -> usize {
        self.theta_multiplicity - self.b1_dim
    }
}

/// Splits the `θ`-eigenspace of `dec` for the twin set `t`:
/// `E_θ = (I_T − J_T/|T|) ⊕ 0 + F`.
pub fn theta_split(dec: &SpectralDecomposition, t: &TwinSet) -> Result<ThetaEigenspaceSplit, TwinError> {
    let theta = t.theta_for(dec.matrix_kind);
    let tol = THETA_TOL * dec.spectral_radius().max(1.0);
    let Some(idx) = dec.index_of(theta, tol) else {
        let nearest = dec
            .eigenvalues
            .iter()
            .copied()
            .min_by(|a, b| (a - theta).abs().total_cmp(&(b - theta).abs()))
            .unwrap_or(f64::NAN);
        return Err(TwinError::ThetaMissing { theta, nearest });
    };
    let k = t.len() as f64;
    let mut f = dec.projectors[idx].clone();
    for &a in &t.members {
        for &b in &t.members {
            f[(a, b)] -= if a == b { 1.0 - 1.0 / k } else { -1.0 / k };
        }
    }
    Ok(ThetaEigenspaceSplit {
        b1_dim: t.len() - 1,
        f,
        theta_multiplicity: dec.multiplicities[idx],
        theta_index: idx,
    })
}

/// Which side of the twin dichotomy a vertex falls on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TwinBranch {
    /// No strong cospectrality is possible: the vertex is sedentary.
    Sedentary {
        /// `|T| ≥ 3` rather than an extra `θ`-eigenvector.
        large_set: bool,
        /// `1 − 2/|T| + 2F_{u,u}`.
        bound: f64,
    },
    /// `θ` is simple: `u` and `partner` are strongly cospectral and the
    /// vertex is either sedentary or in pretty good state transfer.
    StronglyCospectral { partner: usize },
}

/// Evaluates the dichotomy for `u ∈ t`.
pub fn twin_dichotomy(
    dec: &SpectralDecomposition,
    t: &TwinSet,
    u: usize,
) -> Result<(TwinBranch, ThetaEigenspaceSplit), TwinError> {
    if !t.contains(u) {
        return Err(TwinError::NotMember(u));
    }
    let split = theta_split(dec, t)?;
    let bound = 1.0 - 2.0 / t.len() as f64 + 2.0 * split.f_uu(u);
    let branch = if t.len() >= 3 {
        TwinBranch::Sedentary { large_set: true, bound }
    } else if split.touches(u) {
        TwinBranch::Sedentary { large_set: false, bound }
    } else {
        let partner = *t.members.iter().find(|&&v| v != u).ok_or(TwinError::NotMember(u))?;
        TwinBranch::StronglyCospectral { partner }
    };
    Ok((branch, split))
}
