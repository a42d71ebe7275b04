//! Enumeration of numerically possible curves (s; e1,e2,e3) attached to globally
//! generated bundles with a given c1, and their comparison against fixture tables.
//!
//! Only necessary numeric conditions are encoded, so the output is a superset of the
//! true classification. Survivors a fixture rules out by geometry are listed in the
//! fixture's exclusion ledger.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{CurveClass, Divisor3, Permutation};
use crate::curves::{
    c3_of_hs_bundle, ci_genus, ci_multidegree, is_spanned, omega_twist_h0, rank_range, twisted_canonical_degree,
    Component, CurveData, CurveError, RankRange,
};
use crate::fixtures::{Fixture, FixtureError, FixtureRow, RankMode, TupleRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("c1 = {0} must have nonnegative entries, not all zero")]
    BadFirstChernClass(Divisor3),
    #[error("max_s must be at least 1")]
    ZeroMaxS,
    #[error("more than {0} candidates; lower max_s or raise the limit")]
    TooManyCandidates(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

pub type Result<T> = std::result::Result<T, ClassifierError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arity {
    #[serde(rename = "per-component")]
    PerComponent,
    #[serde(rename = "global")]
    Global,
}

/// The numeric necessary conditions applied during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateId {
    /// Total multidegree is bounded by that of the complete intersection of two members of |O_X(c1)|.
    CiBound,
    /// Rank 2: ω_C ≅ O_C(c1 − (2,2,2)), so each component has twisted canonical degree 0.
    RankTwoGenus,
    /// ω_C((2,2,2) − c1) is spanned on every component.
    Spanned,
    /// A component of degree 1 over some factor is rational.
    DegreeOneRational,
    /// A component contracted by factor j lies in a fiber P¹×P¹ and has the genus of its bidegree.
    FiberGenus,
    /// When a_k = 1 the projection away from factor k embeds C.
    Embedding,
    /// Embedded images of distinct components do not meet.
    Disjoint,
}

impl PredicateId {
    pub const ALL: [PredicateId; 7] = [
        PredicateId::CiBound,
        PredicateId::RankTwoGenus,
        PredicateId::Spanned,
        PredicateId::DegreeOneRational,
        PredicateId::FiberGenus,
        PredicateId::Embedding,
        PredicateId::Disjoint,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            PredicateId::CiBound => "P1-ci-bound",
            PredicateId::RankTwoGenus => "P2-rank2-genus",
            PredicateId::Spanned => "P3-spanned",
            PredicateId::DegreeOneRational => "P4-degree-one-rational",
            PredicateId::FiberGenus => "P5-fiber-genus",
            PredicateId::Embedding => "P6-embedding",
            PredicateId::Disjoint => "P7-disjoint-images",
        }
    }

    pub fn arity(&self) -> Arity {
        match self {
            PredicateId::CiBound | PredicateId::Embedding | PredicateId::Disjoint => Arity::Global,
            _ => Arity::PerComponent,
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            PredicateId::CiBound => "total multidegree e <= ci_multidegree(c1) componentwise",
            PredicateId::RankTwoGenus => "rank 2: 2g_i - 2 = sum_j (a_j - 2) e[i]_j on every component",
            PredicateId::Spanned => "omega_{C_i}((2,2,2) - c1) numerically spanned",
            PredicateId::DegreeOneRational => "e[i]_j = 1 for some j forces g_i = 0",
            PredicateId::FiberGenus => "e[i]_j = 0 forces g_i = (e'-1)(e''-1) for the other two degrees",
            PredicateId::Embedding => {
                "a_k = 1: the complementary pair embeds C, so g_i = (e_i-1)(e_j-1) and, for s >= 2, all components have bidegree (0,1) or all (1,0)"
            }
            PredicateId::Disjoint => "a_k = 1: images in P1xP1 of distinct components have intersection number 0",
        }
    }

    fn bit(&self) -> u8 {
        1 << (*self as u8)
    }

    pub fn from_id(s: &str) -> Option<Self> {
        PredicateId::ALL.into_iter().find(|p| p.id() == s || p.id().split('-').next() == Some(s))
    }
}

impl fmt::Display for PredicateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for PredicateId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

/// A subset of the predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PredicateSet(u8);

impl PredicateSet {
    pub fn all() -> Self {
        PredicateSet(0x7f)
    }

    pub fn none() -> Self {
        PredicateSet(0)
    }

    pub fn with(self, p: PredicateId) -> Self {
        PredicateSet(self.0 | p.bit())
    }

    pub fn without(self, p: PredicateId) -> Self {
        PredicateSet(self.0 & !p.bit())
    }

    pub fn contains(&self, p: PredicateId) -> bool {
        self.0 & p.bit() != 0
    }

    /// Whether every predicate of `self` is also in `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = PredicateId> + '_ {
        PredicateId::ALL.into_iter().filter(|p| self.contains(*p))
    }
}

impl FromIterator<PredicateId> for PredicateSet {
    fn from_iter<I: IntoIterator<Item = PredicateId>>(iter: I) -> Self {
        iter.into_iter().fold(PredicateSet::none(), |s, p| s.with(p))
    }
}

/// Pairs (i, j), 0-based, with a_k = 1 for the remaining index k.
fn embedded_pairs(c1: &Divisor3) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..3 {
        if c1.0[k] == 1 {
            let mut pair = [0, 1, 2].into_iter().filter(|&x| x != k);
            out.push((pair.next().unwrap(), pair.next().unwrap()));
        }
    }
    out
}

fn bidegree_genus(x: i64, y: i64) -> i64 {
    (x - 1) * (y - 1)
}

fn component_passes(p: PredicateId, c: &Component, c1: &Divisor3, rank: RankMode) -> bool {
    let e = c.e.0;
    let g = i64::from(c.g);
    match p {
        PredicateId::CiBound | PredicateId::Disjoint => true,
        PredicateId::RankTwoGenus => rank != RankMode::Two || twisted_canonical_degree(c, c1) == Ok(0),
        PredicateId::Spanned => is_spanned(c, c1) && omega_twist_h0(c, c1).is_ok(),
        PredicateId::DegreeOneRational => !e.contains(&1) || c.g == 0,
        PredicateId::FiberGenus => (0..3).all(|j| {
            if e[j] != 0 {
                return true;
            }
            let others: Vec<i64> = (0..3).filter(|&k| k != j).map(|k| e[k]).collect();
            g == bidegree_genus(others[0], others[1])
        }),
        PredicateId::Embedding => embedded_pairs(c1)
            .into_iter()
            .all(|(i, j)| e[i] + e[j] >= 1 && g == bidegree_genus(e[i], e[j])),
    }
}

fn global_passes(p: PredicateId, comps: &[Component], c1: &Divisor3, bound: &CurveClass) -> bool {
    match p {
        PredicateId::CiBound => total(comps).le(bound),
        PredicateId::Embedding => {
            if comps.len() < 2 {
                return true;
            }
            embedded_pairs(c1).into_iter().all(|(i, j)| {
                let all = |x: i64, y: i64| comps.iter().all(|c| c.e.0[i] == x && c.e.0[j] == y);
                all(0, 1) || all(1, 0)
            })
        }
        PredicateId::Disjoint => embedded_pairs(c1).into_iter().all(|(i, j)| {
            comps.iter().enumerate().all(|(a, ca)| {
                comps[a + 1..]
                    .iter()
                    .all(|cb| ca.e.0[i] * cb.e.0[j] + ca.e.0[j] * cb.e.0[i] == 0)
            })
        }),
        _ => true,
    }
}

fn total(comps: &[Component]) -> CurveClass {
    let mut t = [0i64; 3];
    for c in comps {
        for (acc, x) in t.iter_mut().zip(c.e.0) {
            *acc += x;
        }
    }
    CurveClass(t)
}

/// Permutations of the factors fixing c1.
pub fn stabilizer(c1: &Divisor3) -> Vec<Permutation> {
    Permutation::all()
        .into_iter()
        .filter(|s| c1.permute(s) == *c1)
        .collect()
}

/// Lexicographically least sorted image of the components under the stabilizer of c1.
pub fn canonical_form(comps: &[Component], c1: &Divisor3) -> Vec<Component> {
    stabilizer(c1)
        .iter()
        .map(|s| {
            let mut v: Vec<Component> = comps.iter().map(|c| c.permute(s)).collect();
            v.sort();
            v
        })
        .min()
        .unwrap_or_default()
}

/// Identity of a classification row: (s; e1,e2,e3) with the multiset of genera.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TupleKey {
    pub s: usize,
    pub e: CurveClass,
    pub g: Vec<u32>,
}

impl TupleKey {
    /// Normalizes e to its least image under the stabilizer of c1 and sorts the genera.
    pub fn new(s: usize, e: CurveClass, mut g: Vec<u32>, c1: &Divisor3) -> Self {
        g.sort();
        let e = stabilizer(c1).iter().map(|p| e.permute(p)).min().unwrap_or(e);
        TupleKey { s, e, g }
    }

    pub fn of_components(comps: &[Component], c1: &Divisor3) -> Self {
        TupleKey::new(comps.len(), total(comps), comps.iter().map(|c| c.g).collect(), c1)
    }
}

impl fmt::Display for TupleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [e1, e2, e3] = self.e.0;
        let g: Vec<String> = self.g.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {},{},{}) g=[{}]", self.s, e1, e2, e3, g.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateTuple {
    pub components: Vec<Component>,
    pub rank_range: RankRange,
    pub c2: CurveClass,
    pub c3: i64,
    pub canonical_form: Vec<Component>,
    pub predicates: Vec<PredicateId>,
}

impl CandidateTuple {
    pub fn key(&self, c1: &Divisor3) -> TupleKey {
        TupleKey::of_components(&self.components, c1)
    }
}

/// All survivors with every predicate enabled.
pub fn enumerate(c1: &Divisor3, rank: RankMode, max_s: usize) -> Result<Vec<CandidateTuple>> {
    enumerate_with(c1, rank, max_s, &PredicateSet::all())
}

pub fn enumerate_with(c1: &Divisor3, rank: RankMode, max_s: usize, preds: &PredicateSet) -> Result<Vec<CandidateTuple>> {
    enumerate_limited(c1, rank, max_s, preds, usize::MAX)
}

/// Like [`enumerate_with`], but gives up once more than `limit` candidates are found.
/// Without strong predicates (e.g. c1 = (2,2,2) at all ranks) the survivor count grows
/// very fast with `max_s`.
pub fn enumerate_limited(
    c1: &Divisor3,
    rank: RankMode,
    max_s: usize,
    preds: &PredicateSet,
    limit: usize,
) -> Result<Vec<CandidateTuple>> {
    if c1.0.iter().any(|&a| a < 0) || c1.0 == [0, 0, 0] {
        return Err(ClassifierError::BadFirstChernClass(*c1));
    }
    if max_s == 0 {
        return Err(ClassifierError::ZeroMaxS);
    }
    let bound = ci_multidegree(c1)?;
    let g_max = u32::try_from(ci_genus(c1)?.max(0)).unwrap_or(u32::MAX);

    let per_component: Vec<PredicateId> = preds.iter().filter(|p| p.arity() == Arity::PerComponent || *p == PredicateId::Embedding).collect();
    let global: Vec<PredicateId> = preds.iter().filter(|p| p.arity() == Arity::Global).collect();

    let mut pool = Vec::new();
    for e1 in 0..=bound.0[0] {
        for e2 in 0..=bound.0[1] {
            for e3 in 0..=bound.0[2] {
                let Ok(_) = Component::new(CurveClass::new(e1, e2, e3), 0) else { continue };
                for g in 0..=g_max {
                    let c = Component { e: CurveClass::new(e1, e2, e3), g };
                    if per_component.iter().all(|p| component_passes(*p, &c, c1, rank)) {
                        pool.push(c);
                    }
                }
            }
        }
    }
    pool.sort();

    let prune_by_total = preds.contains(PredicateId::CiBound);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let ctx = Search {
        pool: &pool,
        c1,
        bound: &bound,
        global: &global,
        prune_by_total,
        max_s,
        limit,
        applied: preds.iter().collect(),
    };
    ctx.extend(0, &mut stack, &mut seen, &mut out)?;
    out.sort_by(|a, b| (a.components.len(), &a.canonical_form).cmp(&(b.components.len(), &b.canonical_form)));
    Ok(out)
}

struct Search<'a> {
    pool: &'a [Component],
    c1: &'a Divisor3,
    bound: &'a CurveClass,
    global: &'a [PredicateId],
    prune_by_total: bool,
    max_s: usize,
    limit: usize,
    applied: Vec<PredicateId>,
}

impl Search<'_> {
    fn extend(
        &self,
        start: usize,
        stack: &mut Vec<usize>,
        seen: &mut BTreeSet<Vec<Component>>,
        out: &mut Vec<CandidateTuple>,
    ) -> Result<()> {
        for idx in start..self.pool.len() {
            stack.push(idx);
            let comps: Vec<Component> = stack.iter().map(|&i| self.pool[i]).collect();
            // totals only grow, so an overshoot prunes every extension
            if self.prune_by_total && !total(&comps).le(self.bound) {
                stack.pop();
                continue;
            }
            self.visit(&comps, seen, out)?;
            if stack.len() < self.max_s {
                self.extend(idx, stack, seen, out)?;
            }
            stack.pop();
        }
        Ok(())
    }

    fn visit(&self, comps: &[Component], seen: &mut BTreeSet<Vec<Component>>, out: &mut Vec<CandidateTuple>) -> Result<()> {
        if !self.global.iter().all(|p| global_passes(*p, comps, self.c1, self.bound)) {
            return Ok(());
        }
        let canonical = canonical_form(comps, self.c1);
        if !seen.insert(canonical.clone()) {
            return Ok(());
        }
        let curve = CurveData::new(canonical.clone())?;
        // without the spannedness predicate some tuples have no defined rank range
        let Ok(range) = rank_range(&curve, self.c1) else {
            return Ok(());
        };
        out.push(CandidateTuple {
            c2: total(&canonical),
            c3: c3_of_hs_bundle(&curve, self.c1)?,
            components: canonical.clone(),
            canonical_form: canonical,
            rank_range: range,
            predicates: self.applied.clone(),
        });
        if out.len() > self.limit {
            return Err(ClassifierError::TooManyCandidates(self.limit));
        }
        Ok(())
    }
}

/// A survivor as it appears in an audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleSummary {
    pub key: TupleKey,
    pub rank_min: u64,
    pub rank_max: u64,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtraAnnotation {
    Excluded { reason: String, paper_ref: String },
    Unexplained,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extra {
    pub tuple: TupleSummary,
    pub annotation: ExtraAnnotation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankMismatch {
    pub row: FixtureRow,
    pub computed_min: u64,
    pub computed_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub fixture_id: String,
    pub c1: Divisor3,
    pub rank: RankMode,
    pub survivors: Vec<TupleSummary>,
    pub paper_rows: Vec<FixtureRow>,
    pub matched: Vec<FixtureRow>,
    pub missing: Vec<FixtureRow>,
    pub rank_mismatches: Vec<RankMismatch>,
    pub extras: Vec<Extra>,
}

impl AuditReport {
    /// No missing rows, no rank disagreements and every extra accounted for.
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty()
            && self.rank_mismatches.is_empty()
            && self.extras.iter().all(|x| x.annotation != ExtraAnnotation::Unexplained)
    }
}

/// Audits the fixture `id` for `c1`, looking in `$SEGRE_FIXTURES` first.
pub fn audit(c1: &Divisor3, id: &str) -> Result<AuditReport> {
    let fixture = crate::fixtures::load(id, c1)?;
    audit_fixture(&fixture)
}

pub fn audit_fixture(fx: &Fixture) -> Result<AuditReport> {
    let max_s = fx.max_s.unwrap_or(4);
    let tuples = enumerate(&fx.c1, fx.rank, max_s)?;
    let floor = fx.rank_floor.unwrap_or(0);
    let survivors: Vec<TupleSummary> = tuples
        .iter()
        .filter(|t| t.rank_range.max_rank >= floor)
        .map(|t| TupleSummary {
            key: t.key(&fx.c1),
            rank_min: t.rank_range.min_rank.max(floor),
            rank_max: t.rank_range.max_rank,
            components: t.components.clone(),
        })
        .collect();

    let key_of = |r: &TupleRef| TupleKey::new(r.s, r.e, r.g.clone(), &fx.c1);
    let mut matched = Vec::new();
    let mut missing = Vec::new();
    let mut rank_mismatches = Vec::new();
    let mut row_keys = BTreeSet::new();
    for row in &fx.rows {
        let key = key_of(&row.tuple());
        row_keys.insert(key.clone());
        match survivors.iter().find(|s| s.key == key) {
            Some(s) => {
                if (s.rank_min, s.rank_max) != (row.rank_min, row.rank_max) {
                    rank_mismatches.push(RankMismatch {
                        row: row.clone(),
                        computed_min: s.rank_min,
                        computed_max: s.rank_max,
                    });
                }
                matched.push(row.clone());
            }
            None => missing.push(row.clone()),
        }
    }
    let extras = survivors
        .iter()
        .filter(|s| !row_keys.contains(&s.key))
        .map(|s| {
            let annotation = fx
                .exclusions
                .iter()
                .find(|x| key_of(&x.tuple) == s.key)
                .map(|x| ExtraAnnotation::Excluded {
                    reason: x.reason.clone(),
                    paper_ref: x.paper_ref.clone(),
                })
                .unwrap_or(ExtraAnnotation::Unexplained);
            Extra {
                tuple: s.clone(),
                annotation,
            }
        })
        .collect();
    Ok(AuditReport {
        fixture_id: fx.id.clone(),
        c1: fx.c1,
        rank: fx.rank,
        survivors,
        paper_rows: fx.rows.clone(),
        matched,
        missing,
        rank_mismatches,
        extras,
    })
}
