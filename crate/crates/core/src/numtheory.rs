//! Exact integer arithmetic behind the periodicity, PST and sedentariness
//! criteria: 2-adic valuations, square-free parts, quadratic-integer
//! recognition of spectra, integer relations and phase equations.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::Serialize;

use crate::error::NumberError;

/// Exponent of the largest power of two dividing `a`.
pub fn nu2(a: i64) -> Result<u32, NumberError> {
    if a == 0 {
        Err(NumberError::ZeroValuation)
    } else {
        Ok(a.trailing_zeros())
    }
}

/// Integer square root of `n` when `n` is a perfect square.
pub fn is_perfect_square(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r.saturating_sub(1)..=r.saturating_add(1))
        .find(|&c| c >= 0 && c.checked_mul(c) == Some(n))
}

/// Writes `n = f² · s` with `s` square-free; returns `(s, f)`.
pub fn square_free_part(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let (mut s, mut f, mut rest) = (1u64, 1u64, n);
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s * rest, f)
}

/// Non-negative gcd of a set, `0` for an empty or all-zero set.
pub fn gcd_set(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &v| g.gcd(&v)).abs()
}

/// Shared-form recognition result: value `j` equals `(a + b_j √Δ)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticIntegerForm {
    pub a: i64,
    pub b: Vec<i64>,
    pub delta: i64,
}

impl QuadraticIntegerForm {
    pub fn value(&self, j: usize) -> f64 {
        (self.a as f64 + self.b[j] as f64 * (self.delta as f64).sqrt()) / 2.0
    }

    pub fn values(&self) -> Vec<QuadInt> {
        self.b.iter().map(|&b| QuadInt::new(self.a, b, self.delta)).collect()
    }
}

fn near_int(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= tol && r.abs() < 9.0e15).then_some(r as i64)
}

/// Recognizes values either as integers (`Δ = 1`) or as `(a + b_j √Δ)/2`
/// with one shared `a` and square-free `Δ > 1`.
pub fn recognize_spectrum(values: &[f64], tol: f64) -> Option<QuadraticIntegerForm> {
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = tol * scale;
    if let Some(ints) = values.iter().map(|&v| near_int(v, tol)).collect::<Option<Vec<_>>>() {
        return Some(QuadraticIntegerForm {
            a: 0,
            b: ints.iter().map(|k| 2 * k).collect(),
            delta: 1,
        });
    }
    let l0 = values[0];
    let d = values.iter().map(|v| v - l0).find(|d| d.abs() > tol)?;
    let d4 = near_int(4.0 * d * d, 8.0 * tol * scale)?;
    if d4 <= 0 {
        return None;
    }
    let (delta, _) = square_free_part(d4 as u64);
    if delta <= 1 {
        return None;
    }
    let delta = delta as i64;
    let root = (delta as f64).sqrt();
    let diffs = values
        .iter()
        .map(|v| near_int(2.0 * (v - l0) / root, 4.0 * tol))
        .collect::<Option<Vec<_>>>()?;
    let bmax = (2.0 * l0.abs() / root).ceil() as i64 + 2;
    for b0 in -bmax..=bmax {
        if let Some(a) = near_int(2.0 * l0 - b0 as f64 * root, 4.0 * tol) {
            let q = QuadInt::new(a, b0, delta);
            if !q.is_algebraic_integer() {
                continue;
            }
            let b: Vec<i64> = diffs.iter().map(|c| b0 + c).collect();
            if b.iter().all(|&bj| QuadInt::new(a, bj, delta).is_algebraic_integer()) {
                return Some(QuadraticIntegerForm { a, b, delta });
            }
        }
    }
    None
}

/// Exact quadratic number `(a + b √Δ)/2`; `Δ` is 1 whenever `b = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
    pub delta: i64,
}

impl QuadInt {
    pub fn new(a: i64, b: i64, delta: i64) -> Self {
        if b == 0 || delta == 1 {
            // With Δ = 1 the number is rational; fold b into a.
            let a = if delta == 1 { a + b } else { a };
            Self { a, b: 0, delta: 1 }
        } else {
            Self { a, b, delta }
        }
    }

    pub fn integer(k: i64) -> Self {
        Self::new(2 * k, 0, 1)
    }

    pub fn value(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.delta as f64).sqrt()) / 2.0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Integer value when rational and integral.
    pub fn as_integer(&self) -> Option<i64> {
        (self.b == 0 && self.a % 2 == 0).then_some(self.a / 2)
    }

    /// True when the number is a root of a monic integer quadratic.
    pub fn is_algebraic_integer(&self) -> bool {
        if self.b == 0 {
            return self.a % 2 == 0;
        }
        if self.delta % 4 == 1 {
            (self.a - self.b) % 2 == 0
        } else {
            self.a % 2 == 0 && self.b % 2 == 0
        }
    }

    pub fn checked_sub(&self, other: &QuadInt) -> Result<QuadInt, NumberError> {
        let delta = common_radicand(&[*self, *other])?;
        let a = self.a.checked_sub(other.a).ok_or(NumberError::Overflow)?;
        let b = self.b.checked_sub(other.b).ok_or(NumberError::Overflow)?;
        Ok(QuadInt::new(a, b, delta))
    }

    pub fn scaled(&self, k: i64) -> Result<QuadInt, NumberError> {
        let a = self.a.checked_mul(k).ok_or(NumberError::Overflow)?;
        let b = self.b.checked_mul(k).ok_or(NumberError::Overflow)?;
        Ok(QuadInt::new(a, b, self.delta))
    }
}

/// The radicand shared by all irrational members, 1 when all are rational.
pub fn common_radicand(values: &[QuadInt]) -> Result<i64, NumberError> {
    let mut delta = 1;
    for v in values {
        if v.b != 0 {
            if delta == 1 {
                delta = v.delta;
            } else if delta != v.delta {
                return Err(NumberError::MixedRadicands(delta, v.delta));
            }
        }
    }
    Ok(delta)
}

/// Recognizes one eigenvalue of an integral matrix as an exact quadratic
/// integer, using the rest of the spectrum to find its conjugate.
pub fn recognize_with_conjugates(value: f64, spectrum: &[f64], tol: f64) -> Option<QuadInt> {
    let scale = spectrum.iter().fold(1.0f64, |m, v| m.max(v.abs())).max(value.abs());
    let tol = tol * scale;
    if let Some(k) = near_int(value, tol) {
        return Some(QuadInt::integer(k));
    }
    let mut best: Option<(f64, QuadInt)> = None;
    for &mu in spectrum {
        if (mu - value).abs() <= tol {
            continue;
        }
        let (s, p) = (value + mu, value * mu);
        let Some(si) = near_int(s, 4.0 * tol) else { continue };
        let Some(_) = near_int(p, 4.0 * tol * scale) else { continue };
        let Some(disc) = near_int((value - mu) * (value - mu), 8.0 * tol * scale) else { continue };
        if disc <= 0 {
            continue;
        }
        let (delta, f) = square_free_part(disc as u64);
        if delta <= 1 {
            continue;
        }
        let b = if value > mu { f as i64 } else { -(f as i64) };
        let q = QuadInt::new(si, b, delta as i64);
        if !q.is_algebraic_integer() {
            continue;
        }
        let err = (q.value() - value).abs();
        if err <= 4.0 * tol && best.map_or(true, |(e, _)| err < e) {
            best = Some((err, q));
        }
    }
    best.map(|(_, q)| q)
}

/// Outcome of the bounded relation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RelationParity {
    RelationWithOddSum,
    AllRelationsEvenSum,
    Inconclusive,
}

/// Largest enumeration volume attempted by [`integer_relation_parity`].
const MAX_ENUMERATION: u64 = 50_000_000;

/// Searches integer vectors `(m, ℓ)` with `|coefficients| ≤ bound` such that
/// `Σ m_j λ_j + Σ ℓ_j μ_j = 0` and `Σ m_j + Σ ℓ_j = 0`, and reports the
/// parity of `Σ m_j` over the relations found.
pub fn integer_relation_parity(
    plus: &[QuadInt],
    minus: &[QuadInt],
    bound: i64,
) -> Result<RelationParity, NumberError> {
    let all: Vec<QuadInt> = plus.iter().chain(minus).copied().collect();
    common_radicand(&all)?;
    let k = all.len();
    let bound = bound.max(1);
    let side = (2 * bound + 1) as u64;
    if k == 0 || side.checked_pow(k as u32).map_or(true, |v| v > MAX_ENUMERATION) {
        return Ok(RelationParity::Inconclusive);
    }
    let mut coeffs = vec![-bound; k];
    let mut found_even = false;
    loop {
        let nontrivial = coeffs.iter().any(|&c| c != 0);
        if nontrivial {
            let sum: i64 = coeffs.iter().sum();
            let sa: i64 = coeffs.iter().zip(&all).map(|(c, v)| c * v.a).sum();
            let sb: i64 = coeffs.iter().zip(&all).map(|(c, v)| c * v.b).sum();
            if sum == 0 && sa == 0 && sb == 0 {
                let ms: i64 = coeffs[..plus.len()].iter().sum();
                if ms.rem_euclid(2) == 1 {
                    return Ok(RelationParity::RelationWithOddSum);
                }
                found_even = true;
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(if found_even {
                    RelationParity::AllRelationsEvenSum
                } else {
                    RelationParity::Inconclusive
                });
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Z-basis of the integer kernel of `rows` (each row has the same length).
pub fn integer_kernel(rows: &[Vec<i128>], k: usize) -> Result<Vec<Vec<i128>>, NumberError> {
    let r = rows.len();
    // Column j holds (rows[..][j], e_j).
    let mut cols: Vec<Vec<i128>> = (0..k)
        .map(|j| {
            let mut c: Vec<i128> = rows.iter().map(|row| row[j]).collect();
            c.extend((0..k).map(|i| i128::from(i == j)));
            c
        })
        .collect();
    let mut pivot = 0;
    for i in 0..r {
        loop {
            let Some(best) = (pivot..k)
                .filter(|&c| cols[c][i] != 0)
                .min_by_key(|&c| cols[c][i].unsigned_abs())
            else {
                break;
            };
            cols.swap(pivot, best);
            let mut done = true;
            for c in pivot + 1..k {
                if cols[c][i] != 0 {
                    let q = cols[c][i] / cols[pivot][i];
                    for e in 0..r + k {
                        let sub = q.checked_mul(cols[pivot][e]).ok_or(NumberError::Overflow)?;
                        cols[c][e] = cols[c][e].checked_sub(sub).ok_or(NumberError::Overflow)?;
                    }
                    if cols[c][i] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
        if pivot == k {
            break;
        }
    }
    Ok(cols[pivot..].iter().map(|c| c[r..].to_vec()).collect())
}

/// Decides exactly whether some integer relation `Σ c_j λ_j = 0`
/// (with `Σ c_j = 0` when `sum_zero`) has odd `Σ_{j ∈ mask} c_j`.
pub fn odd_relation_exists(values: &[QuadInt], mask: &[bool], sum_zero: bool) -> Result<bool, NumberError> {
    common_radicand(values)?;
    let k = values.len();
    let mut rows = vec![
        values.iter().map(|v| i128::from(v.a)).collect::<Vec<_>>(),
        values.iter().map(|v| i128::from(v.b)).collect(),
    ];
    if sum_zero {
        rows.push(vec![1; k]);
    }
    let basis = integer_kernel(&rows, k)?;
    Ok(basis.iter().any(|v| {
        v.iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(c, _)| *c)
            .sum::<i128>()
            .rem_euclid(2)
            == 1
    }))
}

/// Exact parity verdict from the integer kernel; never inconclusive.
pub fn relation_parity_exact(plus: &[QuadInt], minus: &[QuadInt]) -> Result<RelationParity, NumberError> {
    let values: Vec<QuadInt> = plus.iter().chain(minus).copied().collect();
    let mask: Vec<bool> = (0..values.len()).map(|i| i < plus.len()).collect();
    Ok(if odd_relation_exists(&values, &mask, true)? {
        RelationParity::RelationWithOddSum
    } else {
        RelationParity::AllRelationsEvenSum
    })
}

/// Solution of a system `e^{i t f_j} = ±1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseSolution {
    /// Every `t` works (all frequencies zero and all targets `+1`).
    Unconstrained,
    /// Smallest positive solution.
    Time(f64),
    Impossible,
}

/// Smallest `t > 0` with `e^{i t f} = -1` for `f` in `minus` and `= 1` for
/// `f` in `plus`, for exact frequencies sharing one radicand.
pub fn solve_phases(plus: &[QuadInt], minus: &[QuadInt]) -> Result<PhaseSolution, NumberError> {
    let all: Vec<QuadInt> = plus.iter().chain(minus).copied().collect();
    let delta = common_radicand(&all)?;
    if minus.iter().any(QuadInt::is_zero) {
        return Ok(PhaseSolution::Impossible);
    }
    let Some(first) = all.iter().find(|v| !v.is_zero()) else {
        return Ok(PhaseSolution::Unconstrained);
    };
    let g0 = first.a.gcd(&first.b);
    let (p, q) = (first.a / g0, first.b / g0);
    let mut ks = Vec::with_capacity(all.len());
    for v in &all {
        if v.a.checked_mul(q) != v.b.checked_mul(p) {
            return Ok(PhaseSolution::Impossible);
        }
        ks.push(if p != 0 { v.a / p } else { v.b / q });
    }
    let g = gcd_set(&ks);
    let unit = QuadInt::new(p, q, delta).value().abs();
    let np = plus.len();
    if minus.is_empty() {
        return Ok(PhaseSolution::Time(2.0 * PI / (g as f64 * unit)));
    }
    let ok = ks.iter().enumerate().all(|(i, &k)| {
        let odd = (k / g).rem_euclid(2) == 1;
        if i < np {
            !odd
        } else {
            odd
        }
    });
    Ok(if ok {
        PhaseSolution::Time(PI / (g as f64 * unit))
    } else {
        PhaseSolution::Impossible
    })
}

/// Reason a support fails the valuation criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CriterionFailure {
    /// Values are neither all integers nor one shared quadratic form.
    NotSharedForm,
    /// The valuation pattern does not hold.
    Valuation,
    /// The subset is empty or the whole support.
    NotProperSubset,
}

/// Valuation test for the equality time: with `T_j = (λ_1 − λ_j)/√Δ`, every
/// pair inside `S` must differ at a higher 2-adic valuation than any pair
/// straddling `S`, and all straddling valuations from one anchor agree.
/// Returns `t₁ = π / (g √Δ)` with `g = gcd(T)`.
pub fn valuation_equality_time(values: &[QuadInt], in_s: &[bool]) -> Result<f64, CriterionFailure> {
    let s_count = in_s.iter().filter(|&&b| b).count();
    if s_count == 0 || s_count == values.len() {
        return Err(CriterionFailure::NotProperSubset);
    }
    let delta = common_radicand(values).map_err(|_| CriterionFailure::NotSharedForm)?;
    // Scaled coordinates: λ_j = (a + c_j √Δ)/2 with shared a, or integers.
    let coords: Vec<i64> = if delta == 1 {
        if values.iter().any(|v| v.a % 2 != 0) {
            return Err(CriterionFailure::NotSharedForm);
        }
        values.iter().map(|v| v.a / 2).collect()
    } else {
        let a = values[0].a;
        if values.iter().any(|v| v.a != a) {
            return Err(CriterionFailure::NotSharedForm);
        }
        if values.iter().any(|v| (v.b - values[0].b) % 2 != 0) {
            return Err(CriterionFailure::NotSharedForm);
        }
        values.iter().map(|v| v.b).collect()
    };
    // (λ_x − λ_y)/√Δ as an integer.
    let diff = |x: usize, y: usize| -> i64 {
        if delta == 1 {
            coords[x] - coords[y]
        } else {
            (coords[x] - coords[y]) / 2
        }
    };
    let val = |d: i64| -> u32 { if d == 0 { u32::MAX } else { d.trailing_zeros() } };
    for m in (0..values.len()).filter(|&m| in_s[m]) {
        let outside: Vec<u32> = (0..values.len()).filter(|&k| !in_s[k]).map(|k| val(diff(k, m))).collect();
        let v = outside[0];
        if outside.iter().any(|&w| w != v) {
            return Err(CriterionFailure::Valuation);
        }
        if (0..values.len()).filter(|&j| in_s[j] && j != m).any(|j| val(diff(j, m)) <= v) {
            return Err(CriterionFailure::Valuation);
        }
    }
    let anchor = in_s.iter().position(|&b| b).unwrap_or(0);
    let t: Vec<i64> = (0..values.len()).map(|j| diff(anchor, j)).collect();
    let g = gcd_set(&t);
    Ok(PI / (g as f64 * (delta as f64).sqrt()))
}
