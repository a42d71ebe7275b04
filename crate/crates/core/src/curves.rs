//! Numerical geometry of curves C = C_1 ⊔ … ⊔ C_s in X: complete intersections,
//! adjunction, twisted canonical bundles and the rank bounds they impose on a
//! globally generated bundle with r − 1 sections degenerating along C.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{checked, ChowError, CurveClass, Divisor3, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpanFailure {
    /// A rational component with twisted canonical degree below 0.
    RationalLowDegree,
    /// τ < 0 on a component of positive genus.
    NegativeTwist,
    /// Degree 1 on an elliptic component has a base point.
    EllipticBasePoint,
    /// Degree 0 on an elliptic component not assumed trivial.
    NontrivialDegreeZero,
}

impl fmt::Display for SpanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpanFailure::RationalLowDegree => "rational component with twisted canonical degree < 0",
            SpanFailure::NegativeTwist => "twisted canonical bundle has negative twist",
            SpanFailure::EllipticBasePoint => "degree-1 bundle on an elliptic component has a base point",
            SpanFailure::NontrivialDegreeZero => "degree-0 bundle on an elliptic component assumed nontrivial",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("divisor {0} has a negative entry")]
    NegativeEntry(Divisor3),
    #[error("component multidegree {0} must be nonzero with nonnegative entries")]
    BadMultidegree(CurveClass),
    #[error("a curve needs at least one component")]
    NoComponents,
    #[error("twisted canonical bundle of component {index} is not spanned: {reason} (tau = {tau}, g = {genus})")]
    NotSpanned {
        index: usize,
        tau: i64,
        genus: u32,
        reason: SpanFailure,
    },
    #[error("expected {expected} triviality flags, got {got}")]
    FlagCount { expected: usize, got: usize },
    #[error("integer overflow")]
    Overflow,
}

impl From<ChowError> for CurveError {
    fn from(_: ChowError) -> Self {
        CurveError::Overflow
    }
}

pub type Result<T> = std::result::Result<T, CurveError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawComponent")]
pub struct Component {
    pub e: CurveClass,
    pub g: u32,
}

#[derive(Deserialize)]
struct RawComponent {
    e: CurveClass,
    g: u32,
}

impl TryFrom<RawComponent> for Component {
    type Error = CurveError;
    fn try_from(raw: RawComponent) -> Result<Self> {
        Component::new(raw.e, raw.g)
    }
}

impl Component {
    pub fn new(e: CurveClass, g: u32) -> Result<Self> {
        if e.0.iter().any(|&x| x < 0) || e.degree() < 1 {
            return Err(CurveError::BadMultidegree(e));
        }
        Ok(Component { e, g })
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        Component {
            e: self.e.permute(sigma),
            g: self.g,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} g={}", self.e, self.g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct CurveData {
    components: Vec<Component>,
}

#[derive(Deserialize)]
struct RawCurve {
    components: Vec<Component>,
}

impl TryFrom<RawCurve> for CurveData {
    type Error = CurveError;
    fn try_from(raw: RawCurve) -> Result<Self> {
        CurveData::new(raw.components)
    }
}

impl CurveData {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(CurveError::NoComponents);
        }
        Ok(CurveData { components })
    }

    /// A connected curve.
    pub fn single(e: CurveClass, g: u32) -> Result<Self> {
        CurveData::new(vec![Component::new(e, g)?])
    }

    /// The complete intersection of two general members of |O_X(A)|.
    pub fn complete_intersection(a: &Divisor3) -> Result<Self> {
        let g = ci_genus(a)?;
        let g = u32::try_from(g).map_err(|_| CurveError::NegativeEntry(*a))?;
        CurveData::single(ci_multidegree(a)?, g)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Number of connected components s.
    pub fn s(&self) -> usize {
        self.components.len()
    }

    pub fn total_multidegree(&self) -> Result<CurveClass> {
        self.components
            .iter()
            .try_fold(CurveClass::ZERO, |acc, c| acc.add(&c.e))
            .map_err(CurveError::from)
    }
}

fn require_nonnegative(a: &Divisor3) -> Result<()> {
    if a.0.iter().any(|&x| x < 0) {
        Err(CurveError::NegativeEntry(*a))
    } else {
        Ok(())
    }
}

fn mul3(x: i64, y: i64, z: i64) -> Result<i64> {
    Ok(checked(checked(x.checked_mul(y))?.checked_mul(z))?)
}

/// Multidegree (2a2a3, 2a1a3, 2a1a2) of a complete intersection of two members of |O_X(A)|.
pub fn ci_multidegree(a: &Divisor3) -> Result<CurveClass> {
    require_nonnegative(a)?;
    let [a1, a2, a3] = a.0;
    Ok(CurveClass([mul3(2, a2, a3)?, mul3(2, a1, a3)?, mul3(2, a1, a2)?]))
}

/// Arithmetic genus 6a1a2a3 − 2(a1a2 + a2a3 + a3a1) + 1 of that complete intersection.
pub fn ci_genus(a: &Divisor3) -> Result<i64> {
    require_nonnegative(a)?;
    let [a1, a2, a3] = a.0;
    let cubic = mul3(6, a1, a2)?;
    let cubic = checked(cubic.checked_mul(a3))?;
    let pairs = [mul3(2, a1, a2)?, mul3(2, a2, a3)?, mul3(2, a3, a1)?];
    let mut g = cubic;
    for p in pairs {
        g = checked(g.checked_sub(p))?;
    }
    Ok(checked(g.checked_add(1))?)
}

/// Adjunction for the complete intersection: ω_Y = O_Y(2a1−2, 2a2−2, 2a3−2).
pub fn adjunction_omega_ci(a: &Divisor3) -> Result<Divisor3> {
    require_nonnegative(a)?;
    let mut out = [0i64; 3];
    for (o, &x) in out.iter_mut().zip(a.0.iter()) {
        *o = checked(checked(x.checked_mul(2))?.checked_sub(2))?;
    }
    Ok(Divisor3(out))
}

/// deg O_C(b) = b1e1 + b2e2 + b3e3.
pub fn line_degree_on_curve(e: &CurveClass, b: &Divisor3) -> Result<i64> {
    let mut acc: i64 = 0;
    for (&x, &y) in e.0.iter().zip(b.0.iter()) {
        acc = checked(acc.checked_add(checked(x.checked_mul(y))?))?;
    }
    Ok(acc)
}

/// τ = Σ_j (2 − a_j) e_j = deg O_C((2,2,2) − c1).
pub fn tau(c: &Component, c1: &Divisor3) -> Result<i64> {
    let mut b = [0i64; 3];
    for (o, &a) in b.iter_mut().zip(c1.0.iter()) {
        *o = checked(2i64.checked_sub(a))?;
    }
    line_degree_on_curve(&c.e, &Divisor3(b))
}

/// deg ω_C((2,2,2) − c1) = 2g − 2 + τ for one component.
pub fn twisted_canonical_degree(c: &Component, c1: &Divisor3) -> Result<i64> {
    let t = tau(c, c1)?;
    let two_g = checked(i64::from(c.g).checked_mul(2))?;
    Ok(checked(checked(two_g.checked_sub(2))?.checked_add(t))?)
}

fn h0_reason(c: &Component, c1: &Divisor3, assume_trivial: bool) -> Result<std::result::Result<u64, (i64, SpanFailure)>> {
    let t = tau(c, c1)?;
    let g = i64::from(c.g);
    let verdict = if c.g == 0 {
        if t < 2 {
            Err((t, SpanFailure::RationalLowDegree))
        } else {
            Ok((t - 1) as u64)
        }
    } else if t < 0 {
        Err((t, SpanFailure::NegativeTwist))
    } else if t == 0 {
        if c.g == 1 && !assume_trivial {
            Err((t, SpanFailure::NontrivialDegreeZero))
        } else {
            Ok(c.g as u64)
        }
    } else if c.g == 1 && t == 1 {
        Err((t, SpanFailure::EllipticBasePoint))
    } else {
        Ok(checked((g - 1).checked_add(t))? as u64)
    };
    Ok(verdict)
}

/// h⁰(ω_C((2,2,2) − c1)) on a single component, assuming degree-0 bundles are trivial.
pub fn omega_twist_h0(c: &Component, c1: &Divisor3) -> Result<u64> {
    omega_twist_h0_with(c, c1, true)
}

pub fn omega_twist_h0_with(c: &Component, c1: &Divisor3, assume_trivial: bool) -> Result<u64> {
    h0_reason(c, c1, assume_trivial)?.map_err(|(tau, reason)| CurveError::NotSpanned {
        index: 0,
        tau,
        genus: c.g,
        reason,
    })
}

/// Necessary numeric condition for ω_{C_i}((2,2,2) − c1) to be globally generated.
pub fn is_spanned(c: &Component, c1: &Divisor3) -> bool {
    match twisted_canonical_degree(c, c1) {
        Ok(d) => d >= 0 && !(c.g == 1 && d == 1),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankRange {
    pub min_rank: u64,
    pub max_rank: u64,
    pub rank2_allowed: bool,
}

impl RankRange {
    pub fn contains(&self, r: u64) -> bool {
        self.min_rank <= r && r <= self.max_rank
    }
}

impl fmt::Display for RankRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≤ r ≤ {}", self.min_rank, self.max_rank)
    }
}

/// Ranks of globally generated bundles with no trivial factor attached to C.
///
/// The top rank is h⁰(ω_C((2,2,2) − c1)) + 1. Rank 2 needs ω_C((2,2,2) − c1) ≅ O_C, which is
/// read off numerically as degree 0 on every component.
pub fn rank_range(curve: &CurveData, c1: &Divisor3) -> Result<RankRange> {
    rank_range_with(curve, c1, &vec![true; curve.s()])
}

pub fn rank_range_with(curve: &CurveData, c1: &Divisor3, assume_trivial: &[bool]) -> Result<RankRange> {
    if assume_trivial.len() != curve.s() {
        return Err(CurveError::FlagCount {
            expected: curve.s(),
            got: assume_trivial.len(),
        });
    }
    let mut h0: u64 = 0;
    let mut all_trivial = true;
    for (index, (c, &flag)) in curve.components().iter().zip(assume_trivial).enumerate() {
        match h0_reason(c, c1, flag)? {
            Ok(h) => h0 = h0.checked_add(h).ok_or(CurveError::Overflow)?,
            Err((tau, reason)) => {
                return Err(CurveError::NotSpanned {
                    index,
                    tau,
                    genus: c.g,
                    reason,
                })
            }
        }
        if twisted_canonical_degree(c, c1)? != 0 {
            all_trivial = false;
        }
    }
    let max_rank = h0.checked_add(1).ok_or(CurveError::Overflow)?;
    let min_rank = if all_trivial { 2 } else { 3 };
    Ok(RankRange {
        min_rank,
        max_rank,
        rank2_allowed: all_trivial,
    })
}

/// c3 of the bundle attached to C: deg ω_C((2,2,2) − c1) = Σ (2g_i − 2 + τ_i).
pub fn c3_of_hs_bundle(curve: &CurveData, c1: &Divisor3) -> Result<i64> {
    curve.components().iter().try_fold(0i64, |acc, c| {
        let d = twisted_canonical_degree(c, c1)?;
        Ok(checked(acc.checked_add(d))?)
    })
}
