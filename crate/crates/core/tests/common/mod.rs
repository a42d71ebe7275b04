//! Generators and the randomized suites shared by the integration tests and the
//! acceptance runner.

#![allow(dead_code)]

pub mod oracle;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};

use segre_core::bundles::{chern, hs_data, parse_bundle, BundleExpr, ChernData, FactorSet, HsData, Pullback};
use segre_core::curves::{rank_range, tau, Component, CurveData};
use segre_core::{ChowClass, CurveClass, Divisor3};

pub fn chow_class() -> impl Strategy<Value = ChowClass> {
    prop::array::uniform8(-9i64..=9).prop_map(ChowClass)
}

pub fn unit_class() -> impl Strategy<Value = ChowClass> {
    chow_class().prop_map(|mut c| {
        c.0[0] = 1;
        c
    })
}

pub fn divisor(lo: i64, hi: i64) -> impl Strategy<Value = Divisor3> {
    prop::array::uniform3(lo..=hi).prop_map(Divisor3)
}

pub fn curve_class(lo: i64, hi: i64) -> impl Strategy<Value = CurveClass> {
    prop::array::uniform3(lo..=hi).prop_map(CurveClass)
}

/// Chern data with c_i = 0 above the rank.
pub fn chern_data(max_rank: u64) -> impl Strategy<Value = ChernData> {
    (1..=max_rank, divisor(-3, 3), curve_class(-5, 5), -9i64..=9).prop_map(|(rank, c1, c2, c3)| ChernData {
        rank,
        c1,
        c2: if rank >= 2 { c2 } else { CurveClass::ZERO },
        c3: if rank >= 3 { c3 } else { 0 },
        h0: None,
    })
}

pub fn component(max_e: i64, max_g: u32) -> impl Strategy<Value = Component> {
    (curve_class(0, max_e), 0..=max_g)
        .prop_filter_map("zero multidegree", |(e, g)| Component::new(e, g).ok())
}

pub fn curve(max_s: usize, max_e: i64, max_g: u32) -> impl Strategy<Value = CurveData> {
    prop::collection::vec(component(max_e, max_g), 1..=max_s).prop_map(|v| CurveData::new(v).unwrap())
}

fn pullback() -> impl Strategy<Value = BundleExpr> {
    let sets: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]];
    (prop::sample::select(sets), 1u64..=3, prop::collection::vec(-3i64..=3, 2), -4i64..=4).prop_map(
        |(factors, rank, c1, c2)| {
            let n = factors.len();
            BundleExpr::Pullback(Pullback {
                factors: FactorSet::new(&factors).unwrap(),
                rank,
                c1: c1[..n].to_vec(),
                c2: if n == 2 && rank >= 2 { c2 } else { 0 },
            })
        },
    )
}

fn kerev() -> impl Strategy<Value = BundleExpr> {
    divisor(0, 2).prop_filter_map("zero divisor", |d| (d.0 != [0, 0, 0]).then_some(BundleExpr::KerEvDual(d)))
}

/// Expressions whose Chern classes are always defined.
pub fn chern_expr() -> impl Strategy<Value = BundleExpr> {
    let leaf = prop_oneof![
        4 => divisor(-3, 3).prop_map(BundleExpr::Line),
        1 => pullback(),
        1 => kerev(),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(BundleExpr::Sum),
            (inner.clone(), divisor(-2, 2)).prop_map(|(e, m)| e.twist(m)),
            inner.prop_map(BundleExpr::dual),
        ]
    })
}

fn hs_node() -> impl Strategy<Value = BundleExpr> {
    (curve(3, 3, 3), divisor(0, 2), 1u64..=10).prop_map(|(curve, c1, rank)| BundleExpr::Hs(HsData { curve, c1, rank }))
}

/// Every node kind, flattened so that printing and parsing agree.
pub fn any_expr() -> impl Strategy<Value = BundleExpr> {
    let leaf = prop_oneof![
        4 => divisor(-3, 3).prop_map(BundleExpr::Line),
        1 => pullback(),
        1 => kerev(),
        1 => hs_node(),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(BundleExpr::Sum),
            (inner.clone(), divisor(-3, 3)).prop_map(|(e, m)| e.twist(m)),
            inner.prop_map(BundleExpr::dual),
        ]
    })
    .prop_map(|e| e.normalize())
}

/// A curve and c1 ∈ [0,2]³ with twisted canonical degree 0 on every component.
pub fn rank_two_curve() -> impl Strategy<Value = (CurveData, Divisor3)> {
    divisor(0, 2)
        .prop_filter("zero c1", |d| d.0 != [0, 0, 0])
        .prop_flat_map(|c1| {
            let comp = curve_class(0, 4).prop_filter_map("degree 0 twist impossible", move |e| {
                let probe = Component::new(e, 0).ok()?;
                // 2g - 2 + tau = 0
                let g = match tau(&probe, &c1).ok()? {
                    2 => 0,
                    0 => 1,
                    _ => return None,
                };
                Component::new(e, g).ok()
            });
            (prop::collection::vec(comp, 1..=3), Just(c1))
        })
        .prop_map(|(v, c1)| (CurveData::new(v).unwrap(), c1))
}

fn deterministic(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = deterministic(cases);
    runner.run(&strategy, test).map_err(|e| match e {
        TestError::Abort(why) => format!("aborted: {why}"),
        TestError::Fail(why, input) => format!("{why}; minimal input: {input:?}"),
    })
}

/// Draws one value, for smoke tests of a generator.
pub fn sample<S: Strategy>(strategy: S) -> S::Value {
    let mut runner = deterministic(1);
    strategy.new_tree(&mut runner).unwrap().current()
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    run(cases, (chow_class(), chow_class(), chow_class()), |(x, y, z)| {
        prop_assert_eq!(ok(x.mul(&y))?, ok(y.mul(&x))?);
        prop_assert_eq!(ok(ok(x.mul(&y))?.mul(&z))?, ok(x.mul(&ok(y.mul(&z))?))?);
        let lhs = ok(x.mul(&ok(y.add(&z))?))?;
        let rhs = ok(ok(x.mul(&y))?.add(&ok(x.mul(&z))?))?;
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ok(x.mul(&ChowClass::ONE))?, x);
        prop_assert_eq!(ok(x.add(&ChowClass::ZERO))?, x);
        Ok(())
    })
}

pub fn invert_unit(cases: u32) -> Result<(), String> {
    run(cases, unit_class(), |x| {
        let y = ok(x.invert_unit())?;
        prop_assert_eq!(ok(x.mul(&y))?, ChowClass::ONE);
        prop_assert_eq!(ok(y.mul(&x))?, ChowClass::ONE);
        Ok(())
    })
}

pub fn whitney(cases: u32) -> Result<(), String> {
    run(cases, (chern_expr(), chern_expr()), |(e, f)| {
        let de = ok(chern(&e))?;
        let df = ok(chern(&f))?;
        let sum = ok(chern(&BundleExpr::Sum(vec![e, f])))?;
        prop_assert_eq!(sum.rank, de.rank + df.rank);
        prop_assert_eq!(sum.total(), ok(de.total().mul(&df.total()))?);
        Ok(())
    })
}

pub fn twist_composition(cases: u32) -> Result<(), String> {
    run(cases, (chern_data(8), divisor(-2, 2), divisor(-2, 2)), |(d, m, n)| {
        let stepwise = ok(ok(d.twist(&m))?.twist(&n))?;
        let at_once = ok(d.twist(&ok(m.add(&n))?))?;
        prop_assert_eq!(stepwise, at_once);
        Ok(())
    })
}

pub fn kerev_identity(cases: u32) -> Result<(), String> {
    let gg = divisor(0, 4).prop_filter("zero divisor", |d| d.0 != [0, 0, 0]);
    run(cases, gg, |l| {
        let f = ok(chern(&BundleExpr::KerEvDual(l)))?;
        let dual_line = ok(ChowClass::ONE.sub(&l.to_chow()))?;
        prop_assert_eq!(ok(dual_line.mul(&f.total()))?, ChowClass::ONE);
        let sections = ok(segre_core::cohomology::h_line(&l))?.h(0);
        prop_assert_eq!(f.rank + 1, sections);
        Ok(())
    })
}

pub fn rank_two_c3_vanishes(cases: u32) -> Result<(), String> {
    run(cases, rank_two_curve(), |(curve, c1)| {
        let range = ok(rank_range(&curve, &c1))?;
        prop_assert!(range.rank2_allowed);
        let d = ok(hs_data(&curve, &c1, 2))?;
        prop_assert_eq!(d.c3, 0);
        prop_assert_eq!(d.c2, ok(curve.total_multidegree())?);
        Ok(())
    })
}

pub fn parse_print_round_trip(cases: u32) -> Result<(), String> {
    run(cases, any_expr(), |e| {
        let text = e.to_string();
        let back = parse_bundle(&text).map_err(|err| TestCaseError::fail(format!("{text:?}: {err}")))?;
        prop_assert_eq!(back, e);
        Ok(())
    })
}

pub type Suite = fn(u32) -> Result<(), String>;

/// The randomized suites, by name.
pub const SUITES: [(&str, Suite); 7] = [
    ("ring axioms", ring_axioms),
    ("invert_unit", invert_unit),
    ("Whitney product", whitney),
    ("twist composition", twist_composition),
    ("kernel-of-evaluation total class", kerev_identity),
    ("rank-2 c3 vanishing", rank_two_c3_vanishes),
    ("parse/print round trip", parse_print_round_trip),
];
