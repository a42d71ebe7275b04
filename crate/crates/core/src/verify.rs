//! Data-driven replay of numeric claims: each claim names an operation, its
//! inputs and the expected output, and is checked by exact equality.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundles::{self, parse_bundle, ChernData};
use crate::chow::{ChowClass, CurveClass, Divisor3};
use crate::chow_parse::parse_chow;
use crate::classifier::{self, TupleKey};
use crate::cohomology;
use crate::curves::{self, Component, CurveData};
use crate::fixtures::{RankMode, TupleRef};

const BUNDLED_CLAIMS: &str = include_str!("../fixtures/claims.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("malformed claims table: {0}")]
    Malformed(String),
    #[error("duplicate claim id {0:?}")]
    DuplicateId(String),
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Printed in the source text.
    Paper,
    /// Recomputed independently; differs from or completes the printed value.
    Derived,
    Trivial,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub id: String,
    pub paper_ref: String,
    pub tag: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub check: Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKeyword {
    /// The complete intersection of two divisors of class c1.
    #[serde(rename = "ci")]
    Ci,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveArg {
    Keyword(CurveKeyword),
    Data(CurveData),
}

impl CurveArg {
    pub fn resolve(&self, c1: &Divisor3) -> Result<CurveData, curves::CurveError> {
        match self {
            CurveArg::Keyword(CurveKeyword::Ci) => CurveData::complete_intersection(c1),
            CurveArg::Data(c) => Ok(c.clone()),
        }
    }
}

/// Expected Chern data; absent fields are not compared.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernExpect {
    #[serde(default)]
    pub rank: Option<u64>,
    #[serde(default)]
    pub c1: Option<Divisor3>,
    #[serde(default)]
    pub c2: Option<CurveClass>,
    #[serde(default)]
    pub c3: Option<i64>,
    #[serde(default)]
    pub h0: Option<u64>,
}

impl ChernExpect {
    fn matches(&self, d: &ChernData) -> bool {
        self.rank.is_none_or(|r| r == d.rank)
            && self.c1.is_none_or(|c| c == d.c1)
            && self.c2.is_none_or(|c| c == d.c2)
            && self.c3.is_none_or(|c| c == d.c3)
            && self.h0.is_none_or(|h| Some(h) == d.h0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Match {
    /// The listed tuples survive, possibly among others.
    Contains,
    /// The selected survivors are exactly the listed tuples.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    ChowExpand { expr: String, expect: String },
    ChowDegree { expr: String, expect: i64 },
    InvertUnit { expr: String, expect: String },
    HLine { d: Divisor3, expect: [u64; 4] },
    H { d: Divisor3, k: usize, expect: u64 },
    EulerChar { d: Divisor3, expect: i64 },
    SerreDual { d: Divisor3, expect: Divisor3 },
    Ext1 { from: Divisor3, to: Divisor3, expect: u64 },
    CiMultidegree { a: Divisor3, expect: CurveClass },
    CiGenus { a: Divisor3, expect: i64 },
    Adjunction { a: Divisor3, expect: Divisor3 },
    LineDegree { e: CurveClass, b: Divisor3, expect: i64 },
    OmegaTwistH0 { component: Component, c1: Divisor3, expect: u64 },
    RankRange {
        curve: CurveArg,
        c1: Divisor3,
        #[serde(default)]
        min: Option<u64>,
        #[serde(default)]
        max: Option<u64>,
        #[serde(default)]
        rank2_allowed: Option<bool>,
    },
    C3Hs { curve: CurveArg, c1: Divisor3, expect: i64 },
    Chern { bundle: String, expect: ChernExpect },
    Twist { data: ChernData, m: Divisor3, expect: ChernExpect },
    HsData {
        curve: CurveArg,
        c1: Divisor3,
        rank: u64,
        #[serde(default)]
        expect: Option<ChernExpect>,
        #[serde(default)]
        rejected: bool,
    },
    Classify {
        c1: Divisor3,
        rank: RankMode,
        #[serde(default)]
        max_s: Option<usize>,
        /// Restricts the comparison to survivors with this many components.
        #[serde(default)]
        only_s: Option<usize>,
        /// Restricts the comparison to survivors all of whose components have this genus.
        #[serde(default)]
        only_genus: Option<u32>,
        #[serde(default)]
        every_genus: Option<u32>,
        #[serde(rename = "match")]
        mode: Match,
        #[serde(default)]
        tuples: Vec<TupleRef>,
    },
    Audit { c1: Divisor3, fixture: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub paper_ref: String,
    pub tag: Provenance,
    pub passed: bool,
    pub detail: String,
}

/// Parses a claims table and rejects duplicate ids.
pub fn parse_claims(text: &str) -> Result<Vec<Claim>, VerifyError> {
    let claims: Vec<Claim> = serde_json::from_str(text).map_err(|e| VerifyError::Malformed(e.to_string()))?;
    let mut seen = BTreeSet::new();
    for c in &claims {
        if !seen.insert(c.id.as_str()) {
            return Err(VerifyError::DuplicateId(c.id.clone()));
        }
    }
    Ok(claims)
}

pub fn bundled_claims() -> Result<Vec<Claim>, VerifyError> {
    parse_claims(BUNDLED_CLAIMS)
}

pub fn run_all(claims: &[Claim]) -> Vec<ClaimResult> {
    claims.iter().map(run_claim).collect()
}

pub fn run_claim(claim: &Claim) -> ClaimResult {
    let (passed, detail) = match evaluate(&claim.check) {
        Ok(Verdict { passed, got }) => (passed, got),
        Err(msg) => (false, format!("error: {msg}")),
    };
    ClaimResult {
        id: claim.id.clone(),
        paper_ref: claim.paper_ref.clone(),
        tag: claim.tag,
        passed,
        detail,
    }
}

struct Verdict {
    passed: bool,
    got: String,
}

fn compare<T: PartialEq + fmt::Display>(got: T, expect: T) -> Verdict {
    Verdict {
        passed: got == expect,
        got: got.to_string(),
    }
}

fn chow(expr: &str) -> Result<ChowClass, String> {
    parse_chow(expr).map_err(|e| format!("{expr:?}: {e}"))
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn show_chern(d: &ChernData) -> String {
    let mut s = format!("rank {}, c1 = {}, c2 = {}, c3 = {}", d.rank, d.c1, d.c2, d.c3);
    if let Some(h) = d.h0 {
        s.push_str(&format!(", h0 = {h}"));
    }
    s
}

fn evaluate(check: &Check) -> Result<Verdict, String> {
    Ok(match check {
        Check::ChowExpand { expr, expect } => compare(chow(expr)?, chow(expect)?),
        Check::ChowDegree { expr, expect } => compare(chow(expr)?.degree(), *expect),
        Check::InvertUnit { expr, expect } => compare(chow(expr)?.invert_unit().map_err(err)?, chow(expect)?),
        Check::HLine { d, expect } => {
            let h = cohomology::h_line(d).map_err(err)?;
            Verdict {
                passed: h.0 == *expect,
                got: format!("{:?}", h.0),
            }
        }
        Check::H { d, k, expect } => {
            if *k > 3 {
                return Err(format!("cohomology index {k} out of range"));
            }
            compare(cohomology::h_line(d).map_err(err)?.h(*k), *expect)
        }
        Check::EulerChar { d, expect } => compare(cohomology::euler_char(d).map_err(err)?, *expect),
        Check::SerreDual { d, expect } => compare(cohomology::serre_dual(d).map_err(err)?, *expect),
        Check::Ext1 { from, to, expect } => compare(cohomology::ext1_line(from, to).map_err(err)?, *expect),
        Check::CiMultidegree { a, expect } => compare(curves::ci_multidegree(a).map_err(err)?, *expect),
        Check::CiGenus { a, expect } => compare(curves::ci_genus(a).map_err(err)?, *expect),
        Check::Adjunction { a, expect } => compare(curves::adjunction_omega_ci(a).map_err(err)?, *expect),
        Check::LineDegree { e, b, expect } => compare(curves::line_degree_on_curve(e, b).map_err(err)?, *expect),
        Check::OmegaTwistH0 { component, c1, expect } => {
            compare(curves::omega_twist_h0(component, c1).map_err(err)?, *expect)
        }
        Check::RankRange {
            curve,
            c1,
            min,
            max,
            rank2_allowed,
        } => {
            let r = curves::rank_range(&curve.resolve(c1).map_err(err)?, c1).map_err(err)?;
            Verdict {
                passed: min.is_none_or(|m| m == r.min_rank)
                    && max.is_none_or(|m| m == r.max_rank)
                    && rank2_allowed.is_none_or(|b| b == r.rank2_allowed),
                got: format!("{r}, rank 2 allowed: {}", r.rank2_allowed),
            }
        }
        Check::C3Hs { curve, c1, expect } => {
            compare(curves::c3_of_hs_bundle(&curve.resolve(c1).map_err(err)?, c1).map_err(err)?, *expect)
        }
        Check::Chern { bundle, expect } => {
            let e = parse_bundle(bundle).map_err(|e| format!("{bundle:?}: {e}"))?;
            let d = bundles::chern(&e).map_err(err)?;
            Verdict {
                passed: expect.matches(&d),
                got: show_chern(&d),
            }
        }
        Check::Twist { data, m, expect } => {
            let d = data.twist(m).map_err(err)?;
            Verdict {
                passed: expect.matches(&d),
                got: show_chern(&d),
            }
        }
        Check::HsData {
            curve,
            c1,
            rank,
            expect,
            rejected,
        } => {
            let curve = curve.resolve(c1).map_err(err)?;
            match (bundles::hs_data(&curve, c1, *rank), rejected) {
                (Err(e), true) => Verdict {
                    passed: true,
                    got: format!("rejected: {e}"),
                },
                (Err(e), false) => return Err(e.to_string()),
                (Ok(d), true) => Verdict {
                    passed: false,
                    got: format!("accepted: {}", show_chern(&d)),
                },
                (Ok(d), false) => Verdict {
                    passed: expect.as_ref().is_none_or(|x| x.matches(&d)),
                    got: show_chern(&d),
                },
            }
        }
        Check::Classify {
            c1,
            rank,
            max_s,
            only_s,
            only_genus,
            every_genus,
            mode,
            tuples,
        } => {
            let survivors = classifier::enumerate(c1, *rank, max_s.unwrap_or(4)).map_err(err)?;
            let selected: BTreeSet<TupleKey> = survivors
                .iter()
                .filter(|t| only_s.is_none_or(|s| t.components.len() == s))
                .filter(|t| only_genus.is_none_or(|g| t.components.iter().all(|c| c.g == g)))
                .map(|t| t.key(c1))
                .collect();
            let wanted: BTreeSet<TupleKey> =
                tuples.iter().map(|t| TupleKey::new(t.s, t.e, t.g.clone(), c1)).collect();
            let genus_ok = every_genus.is_none_or(|g| survivors.iter().all(|t| t.components.iter().all(|c| c.g == g)));
            let set_ok = match mode {
                Match::Contains => wanted.is_subset(&selected),
                Match::Exact => wanted == selected,
            };
            let listed: Vec<String> = selected.iter().map(|k| k.to_string()).collect();
            Verdict {
                passed: genus_ok && set_ok && !survivors.is_empty(),
                got: format!("{} survivors; selected {{{}}}", survivors.len(), listed.join(", ")),
            }
        }
        Check::Audit { c1, fixture } => {
            let report = classifier::audit(c1, fixture).map_err(err)?;
            Verdict {
                passed: report.is_clean(),
                got: format!(
                    "{} matched, {} missing, {} rank mismatches, {} extras",
                    report.matched.len(),
                    report.missing.len(),
                    report.rank_mismatches.len(),
                    report.extras.len()
                ),
            }
        }
    })
}
