//! Bundle expressions and their Chern classes.

mod grammar;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{checked, ChowClass, ChowError, CurveClass, Divisor3};
use crate::cohomology::{h_line, CohomologyError};
use crate::curves::{c3_of_hs_bundle, rank_range, CurveData, CurveError, RankRange};

pub use grammar::parse_bundle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("a direct sum needs at least one summand")]
    EmptySum,
    #[error("pullback factor set must be a nonempty proper subset of {{1,2,3}}")]
    BadFactorSet,
    #[error("pullback along {factors} needs {expected} first Chern class entries, got {got}")]
    PullbackArity { factors: FactorSet, expected: usize, got: usize },
    #[error("pullback from a single factor has no second Chern class")]
    PullbackC2OnCurve,
    #[error("line bundles have c2 = 0, got c2 = {0}")]
    LineWithC2(i64),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("O_X{0} is not globally generated and nonzero")]
    NotGloballyGenerated(Divisor3),
    #[error("rank {rank} is below the minimum {} for this curve", .range.min_rank)]
    RankBelowRange { rank: u64, range: RankRange },
    #[error("rank {rank} exceeds the maximum {} for this curve", .range.max_rank)]
    RankAboveRange { rank: u64, range: RankRange },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("integer overflow")]
    Overflow,
}

impl From<ChowError> for BundleError {
    fn from(_: ChowError) -> Self {
        BundleError::Overflow
    }
}

impl From<CohomologyError> for BundleError {
    fn from(_: CohomologyError) -> Self {
        BundleError::Overflow
    }
}

pub type Result<T> = std::result::Result<T, BundleError>;

/// A nonempty proper subset of the three factors, as a bitmask (bit i is factor i+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorSet(u8);

impl FactorSet {
    pub fn new(factors: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &f in factors {
            if !(1..=3).contains(&f) || mask & (1 << (f - 1)) != 0 {
                return Err(BundleError::BadFactorSet);
            }
            mask |= 1 << (f - 1);
        }
        if mask == 0 || mask == 0b111 {
            return Err(BundleError::BadFactorSet);
        }
        Ok(FactorSet(mask))
    }

    /// Factor indices (1-based) in increasing order.
    pub fn factors(&self) -> Vec<usize> {
        (1..=3).filter(|i| self.0 & (1 << (i - 1)) != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.factors() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// The pullback of a bundle on P¹ or P¹×P¹ along a projection of X.
///
/// `c1` lists the first Chern class on the listed factors in increasing order;
/// `c2` is the degree of the second Chern class when the base is P¹×P¹.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub factors: FactorSet,
    pub rank: u64,
    pub c1: Vec<i64>,
    pub c2: i64,
}

/// Data of a bundle E with 0 → O^{r−1} → E → I_C(c1) → 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsData {
    pub curve: CurveData,
    pub c1: Divisor3,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleExpr {
    Line(Divisor3),
    Sum(Vec<BundleExpr>),
    Twist(Box<BundleExpr>, Divisor3),
    Dual(Box<BundleExpr>),
    Pullback(Pullback),
    /// The dual of the kernel of H⁰(L) ⊗ O_X → L, i.e. the cokernel F of L^∨ → O_X^{h⁰(L)}.
    KerEvDual(Divisor3),
    Hs(HsData),
}

impl BundleExpr {
    pub fn line(a1: i64, a2: i64, a3: i64) -> Self {
        BundleExpr::Line(Divisor3::new(a1, a2, a3))
    }

    pub fn sum(parts: Vec<BundleExpr>) -> Self {
        BundleExpr::Sum(parts)
    }

    pub fn twist(self, m: Divisor3) -> Self {
        BundleExpr::Twist(Box::new(self), m)
    }

    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    /// Flattens nested sums and unwraps one-element sums, recursively.
    pub fn normalize(&self) -> BundleExpr {
        match self {
            BundleExpr::Sum(parts) => {
                let mut flat = Vec::new();
                for p in parts {
                    match p.normalize() {
                        BundleExpr::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    BundleExpr::Sum(flat)
                }
            }
            BundleExpr::Twist(e, m) => BundleExpr::Twist(Box::new(e.normalize()), *m),
            BundleExpr::Dual(e) => BundleExpr::Dual(Box::new(e.normalize())),
            other => other.clone(),
        }
    }

    /// The summands when the expression is a direct sum of line bundles.
    pub fn split_lines(&self) -> Result<Option<Vec<Divisor3>>> {
        Ok(match self {
            BundleExpr::Line(a) => Some(vec![*a]),
            BundleExpr::Sum(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    match p.split_lines()? {
                        Some(v) => out.extend(v),
                        None => return Ok(None),
                    }
                }
                Some(out)
            }
            BundleExpr::Twist(e, m) => match e.split_lines()? {
                Some(v) => Some(v.iter().map(|a| a.add(m)).collect::<std::result::Result<_, _>>()?),
                None => None,
            },
            BundleExpr::Dual(e) => match e.split_lines()? {
                Some(v) => Some(v.iter().map(|a| a.neg()).collect::<std::result::Result<_, _>>()?),
                None => None,
            },
            BundleExpr::Pullback(p) if p.rank == 1 => Some(vec![pullback_c1(p)?]),
            _ => None,
        })
    }

    fn h0(&self) -> Result<Option<u64>> {
        if let Some(lines) = self.split_lines()? {
            let mut total: u64 = 0;
            for a in lines {
                total = total.checked_add(h_line(&a)?.h(0)).ok_or(BundleError::Overflow)?;
            }
            return Ok(Some(total));
        }
        match self {
            BundleExpr::KerEvDual(l) => {
                let n = h_line(l)?.h(0);
                let dual = h_line(&l.neg()?)?;
                let h0 = n
                    .checked_sub(dual.h(0))
                    .and_then(|x| x.checked_add(dual.h(1)))
                    .ok_or(BundleError::Overflow)?;
                Ok(Some(h0))
            }
            BundleExpr::Sum(parts) => {
                let mut total: u64 = 0;
                for p in parts {
                    match p.h0()? {
                        Some(h) => total = total.checked_add(h).ok_or(BundleError::Overflow)?,
                        None => return Ok(None),
                    }
                }
                Ok(Some(total))
            }
            _ => Ok(None),
        }
    }
}

fn pullback_c1(p: &Pullback) -> Result<Divisor3> {
    let factors = p.factors.factors();
    if p.c1.len() != factors.len() {
        return Err(BundleError::PullbackArity {
            factors: p.factors,
            expected: factors.len(),
            got: p.c1.len(),
        });
    }
    let mut a = [0i64; 3];
    for (&f, &v) in factors.iter().zip(p.c1.iter()) {
        a[f - 1] = v;
    }
    Ok(Divisor3(a))
}

/// Rank, Chern classes and, where exactly computable, h⁰.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernData {
    pub rank: u64,
    pub c1: Divisor3,
    pub c2: CurveClass,
    pub c3: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<u64>,
}

impl ChernData {
    /// The Chern data of a line bundle.
    pub fn line(a: Divisor3) -> Self {
        ChernData {
            rank: 1,
            c1: a,
            c2: CurveClass::ZERO,
            c3: 0,
            h0: None,
        }
    }

    /// Total Chern class 1 + c1 + c2 + c3·t1t2t3.
    pub fn total(&self) -> ChowClass {
        let mut v = self.c1.to_chow().add(&self.c2.to_chow()).expect("disjoint slots");
        v.0[0] = 1;
        v.0[7] = self.c3;
        v
    }

    pub fn from_total(rank: u64, total: &ChowClass) -> Self {
        ChernData {
            rank,
            c1: Divisor3::from_chow(total),
            c2: CurveClass::from_chow(total),
            c3: total.degree(),
            h0: None,
        }
    }

    /// Chern data of E ⊗ O_X(m).
    pub fn twist(&self, m: &Divisor3) -> Result<Self> {
        if self.rank < 1 {
            return Err(BundleError::ZeroRank);
        }
        let r = i64::try_from(self.rank).map_err(|_| BundleError::Overflow)?;
        let m = m.to_chow();
        let c1 = self.c1.to_chow();
        let c2 = self.c2.to_chow();
        let c3 = ChowClass::point().scale(self.c3)?;
        let m2 = m.mul(&m)?;
        let m3 = m2.mul(&m)?;

        let new_c1 = c1.add(&m.scale(r)?)?;
        let new_c2 = c2
            .add(&m.mul(&c1)?.scale(r - 1)?)?
            .add(&m2.scale(binom(r, 2)?)?)?;
        let new_c3 = c3
            .add(&m.mul(&c2)?.scale(r - 2)?)?
            .add(&m2.mul(&c1)?.scale(binom(r - 1, 2)?)?)?
            .add(&m3.scale(binom(r, 3)?)?)?;
        Ok(ChernData {
            rank: self.rank,
            c1: Divisor3::from_chow(&new_c1),
            c2: CurveClass::from_chow(&new_c2),
            c3: new_c3.degree(),
            h0: None,
        })
    }

    /// Chern data of E^∨.
    pub fn dual(&self) -> Result<Self> {
        Ok(ChernData {
            rank: self.rank,
            c1: self.c1.neg()?,
            c2: self.c2,
            c3: checked(self.c3.checked_neg())?,
            h0: None,
        })
    }

    /// Chern data of E ⊕ F.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let total = self.total().mul(&other.total())?;
        let rank = self.rank.checked_add(other.rank).ok_or(BundleError::Overflow)?;
        Ok(ChernData::from_total(rank, &total))
    }
}

/// Binomial coefficient for n ≥ 0 (zero when k > n).
fn binom(n: i64, k: i64) -> Result<i64> {
    if n < 0 || k > n {
        return Ok(0);
    }
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = checked(acc.checked_mul(n - i))? / (i + 1);
    }
    Ok(acc)
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, c1 = {}, c2 = {}, c3 = {}", self.rank, self.c1, self.c2, self.c3)?;
        if let Some(h0) = self.h0 {
            write!(f, ", h0 = {h0}")?;
        }
        Ok(())
    }
}

/// Chern data of an expression.
pub fn chern(e: &BundleExpr) -> Result<ChernData> {
    let mut data = chern_classes(e)?;
    data.h0 = e.h0()?;
    Ok(data)
}

fn chern_classes(e: &BundleExpr) -> Result<ChernData> {
    match e {
        BundleExpr::Line(a) => Ok(ChernData::line(*a)),
        BundleExpr::Sum(parts) => {
            let (first, rest) = parts.split_first().ok_or(BundleError::EmptySum)?;
            let mut acc = chern_classes(first)?;
            for p in rest {
                acc = acc.direct_sum(&chern_classes(p)?)?;
            }
            Ok(acc)
        }
        BundleExpr::Twist(inner, m) => chern_classes(inner)?.twist(m),
        BundleExpr::Dual(inner) => chern_classes(inner)?.dual(),
        BundleExpr::Pullback(p) => pullback_chern(p),
        BundleExpr::KerEvDual(l) => kerev_chern(l),
        BundleExpr::Hs(hs) => hs_chern(hs),
    }
}

fn pullback_chern(p: &Pullback) -> Result<ChernData> {
    if p.rank < 1 {
        return Err(BundleError::ZeroRank);
    }
    let c1 = pullback_c1(p)?;
    let mut c2 = CurveClass::ZERO;
    match p.factors.factors().as_slice() {
        [_] if p.c2 != 0 => return Err(BundleError::PullbackC2OnCurve),
        [i, j] => {
            if p.rank == 1 && p.c2 != 0 {
                return Err(BundleError::LineWithC2(p.c2));
            }
            // t_i t_j pairs with the remaining index
            let k = 6 - i - j;
            c2.0[k - 1] = p.c2;
        }
        _ => {}
    }
    Ok(ChernData {
        rank: p.rank,
        c1,
        c2,
        c3: 0,
        h0: None,
    })
}

fn kerev_chern(l: &Divisor3) -> Result<ChernData> {
    if l.0.iter().any(|&a| a < 0) || l.0 == [0, 0, 0] {
        return Err(BundleError::NotGloballyGenerated(*l));
    }
    let sections = h_line(l)?.h(0);
    let rank = sections - 1;
    let total = ChowClass::ONE.sub(&l.to_chow())?.invert_unit()?;
    Ok(ChernData::from_total(rank, &total))
}

/// Chern data of the bundle attached to a curve, after checking the rank bounds.
pub fn hs_data(curve: &CurveData, c1: &Divisor3, rank: u64) -> Result<ChernData> {
    hs_chern(&HsData {
        curve: curve.clone(),
        c1: *c1,
        rank,
    })
}

fn hs_chern(hs: &HsData) -> Result<ChernData> {
    let range = rank_range(&hs.curve, &hs.c1)?;
    if hs.rank < range.min_rank {
        return Err(BundleError::RankBelowRange { rank: hs.rank, range });
    }
    if hs.rank > range.max_rank {
        return Err(BundleError::RankAboveRange { rank: hs.rank, range });
    }
    Ok(ChernData {
        rank: hs.rank,
        c1: hs.c1,
        c2: hs.curve.total_multidegree()?,
        c3: c3_of_hs_bundle(&hs.curve, &hs.c1)?,
        h0: None,
    })
}

/// A bundle E with 0 → sub → E → quotient → 0. Chern classes see only the sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub sub: BundleExpr,
    pub quotient: BundleExpr,
}

impl Extension {
    pub fn new(sub: BundleExpr, quotient: BundleExpr) -> Self {
        Extension { sub, quotient }
    }

    pub fn as_sum(&self) -> BundleExpr {
        BundleExpr::Sum(vec![self.sub.clone(), self.quotient.clone()])
    }

    pub fn chern(&self) -> Result<ChernData> {
        chern_classes(&self.as_sum())
    }

    /// dim Ext¹(quotient, sub) when both ends split into line bundles.
    pub fn ext1_dim(&self) -> Result<Option<u64>> {
        let (Some(subs), Some(quots)) = (self.sub.split_lines()?, self.quotient.split_lines()?) else {
            return Ok(None);
        };
        let mut total: u64 = 0;
        for q in &quots {
            for s in &subs {
                let h1 = crate::cohomology::ext1_line(q, s)?;
                total = total.checked_add(h1).ok_or(BundleError::Overflow)?;
            }
        }
        Ok(Some(total))
    }
}
