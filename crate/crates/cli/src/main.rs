//! `segre`: command line access to the Chow ring, line-bundle cohomology,
//! curve data, Chern classes and the bundle classifier on P¹×P¹×P¹.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use segre_core::bundles::{chern, parse_bundle, ChernData};
use segre_core::chow_parse::{parse_chow, ChowExprError};
use segre_core::classifier::{audit, enumerate_limited, ExtraAnnotation, PredicateSet};
use segre_core::cohomology::{euler_char, ext1_line, h_line};
use segre_core::curves::{adjunction_omega_ci, ci_genus, ci_multidegree, rank_range, CurveData};
use segre_core::fixtures::RankMode;
use segre_core::verify::{bundled_claims, run_all};
use segre_core::{Divisor3, ParseError};

#[derive(Parser)]
#[command(name = "segre", version, about = "Intersection theory and bundle classification on P1 x P1 x P1")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a polynomial in t1, t2, t3 in the Chow ring.
    Chow { expr: String },
    /// Cohomology of O(a,b,c). Put `--` before negative entries.
    Coh {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
    /// dim Ext¹(O(A), O(B)) for triples written a,b,c.
    Ext1 {
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
    },
    /// Complete intersection of two divisors of class c1.
    Ci {
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
    },
    /// Chern classes of a bundle expression.
    Chern { expr: String },
    /// Rank bounds for bundles attached to a curve.
    Ranks {
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        /// `ci`, or curve JSON such as {"components":[{"e":[0,1,1],"g":0}]}.
        #[arg(long, default_value = "ci")]
        curve: String,
    },
    /// Enumerate candidate curves for c1.
    Classify {
        #[arg(long)]
        c1: String,
        /// 2 or all.
        #[arg(long, default_value = "2")]
        rank: RankMode,
        #[arg(long, default_value_t = 4)]
        max_s: usize,
        /// Stop with an error beyond this many candidates.
        #[arg(long, default_value_t = 20_000)]
        limit: usize,
    },
    /// Compare the enumeration against a classification table.
    Audit {
        #[arg(long)]
        c1: String,
        #[arg(long)]
        fixture: String,
    },
    /// Replay every recorded numeric claim.
    VerifyPaper,
}

enum Failure {
    /// Malformed input; exit code 2.
    Parse(String),
    /// Malformed expression with a position; exit code 2.
    Syntax(ParseError),
    /// Valid input the mathematics rejects; exit code 1.
    Domain(String),
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn triple(name: &str, s: &str) -> Result<Divisor3, Failure> {
    let parts: Result<Vec<i64>, _> = s.split(',').map(|p| p.trim().parse::<i64>()).collect();
    match parts.as_deref() {
        Ok(&[a, b, c]) => Ok(Divisor3::new(a, b, c)),
        _ => Err(Failure::Parse(format!("{name}: expected three comma-separated integers, got {s:?}"))),
    }
}

fn chern_text(d: &ChernData) -> String {
    let mut s = format!("rank = {}\nc1 = {}\nc2 = {}\nc3 = {}", d.rank, d.c1, d.c2, d.c3);
    if let Some(h) = d.h0 {
        s.push_str(&format!("\nh0 = {h}"));
    }
    s
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Chow { expr } => {
            let x = parse_chow(&expr).map_err(|e| match e {
                ChowExprError::Parse(p) => Failure::Syntax(p),
                ChowExprError::Arith(a) => domain(a),
            })?;
            Ok(Output::ok(
                format!("{x}\ndegree = {}", x.degree()),
                json!({"class": x, "text": x.to_string(), "degree": x.degree()}),
            ))
        }
        Command::Coh { a, b, c } => {
            let d = Divisor3::new(a, b, c);
            let h = h_line(&d).map_err(domain)?;
            let chi = euler_char(&d).map_err(domain)?;
            Ok(Output::ok(
                format!("h = [{}, {}, {}, {}]", h.h(0), h.h(1), h.h(2), h.h(3)),
                json!({"d": d, "h": h, "euler": chi}),
            ))
        }
        Command::Ext1 { from, to } => {
            let (a, b) = (triple("from", &from)?, triple("to", &to)?);
            let n = ext1_line(&a, &b).map_err(domain)?;
            Ok(Output::ok(format!("ext1 = {n}"), json!({"from": a, "to": b, "ext1": n})))
        }
        Command::Ci { c1 } => {
            let a = triple("c1", &c1)?;
            let e = ci_multidegree(&a).map_err(domain)?;
            let g = ci_genus(&a).map_err(domain)?;
            let omega = adjunction_omega_ci(&a).map_err(domain)?;
            Ok(Output::ok(
                format!("multidegree = {e}\ngenus = {g}\nomega = O{omega}"),
                json!({"c1": a, "multidegree": e, "genus": g, "omega": omega}),
            ))
        }
        Command::Chern { expr } => {
            let e = parse_bundle(&expr).map_err(Failure::Syntax)?;
            let d = chern(&e).map_err(domain)?;
            Ok(Output::ok(chern_text(&d), to_json(&d)))
        }
        Command::Ranks { c1, curve } => {
            let a = triple("c1", &c1)?;
            let c = if curve.trim() == "ci" {
                CurveData::complete_intersection(&a).map_err(domain)?
            } else {
                serde_json::from_str::<CurveData>(&curve).map_err(|e| Failure::Parse(format!("curve: {e}")))?
            };
            let r = rank_range(&c, &a).map_err(domain)?;
            Ok(Output::ok(r.to_string(), json!({"c1": a, "curve": c, "range": r})))
        }
        Command::Classify { c1, rank, max_s, limit } => {
            let a = triple("c1", &c1)?;
            let tuples = enumerate_limited(&a, rank, max_s, &PredicateSet::all(), limit).map_err(domain)?;
            let mut text = format!("{} candidates for c1 = {a}, rank {rank}", tuples.len());
            for t in &tuples {
                text.push_str(&format!("\n{}  {}  c3 = {}", t.key(&a), t.rank_range, t.c3));
            }
            Ok(Output::ok(text, to_json(&tuples)))
        }
        Command::Audit { c1, fixture } => {
            let a = triple("c1", &c1)?;
            let r = audit(&a, &fixture).map_err(domain)?;
            let mut text = format!(
                "{} {a}: {} survivors, {} of {} rows matched, {} missing, {} rank mismatches",
                r.fixture_id,
                r.survivors.len(),
                r.matched.len(),
                r.paper_rows.len(),
                r.missing.len(),
                r.rank_mismatches.len()
            );
            for m in &r.missing {
                text.push_str(&format!("\nmissing ({}; {}) g={:?}  [{}]", m.s, m.e, m.g, m.paper_ref));
            }
            for x in &r.extras {
                let note = match &x.annotation {
                    ExtraAnnotation::Excluded { reason, paper_ref } => format!("excluded: {reason} [{paper_ref}]"),
                    ExtraAnnotation::Unexplained => "unexplained".to_string(),
                };
                text.push_str(&format!("\nextra {}  {note}", x.tuple.key));
            }
            let ok = r.is_clean();
            Ok(Output {
                text,
                json: to_json(&r),
                ok,
            })
        }
        Command::VerifyPaper => {
            let claims = bundled_claims().map_err(domain)?;
            let results = run_all(&claims);
            let passed = results.iter().filter(|r| r.passed).count();
            let mut text = String::new();
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{mark}  {:<44} {:<8} {}\n", r.id, r.tag, r.paper_ref));
                if !r.passed {
                    text.push_str(&format!("      got {}\n", r.detail));
                }
            }
            text.push_str(&format!("{passed} of {} claims passed", results.len()));
            Ok(Output {
                text,
                json: json!({"passed": passed, "total": results.len(), "claims": to_json(&results)}),
                ok: passed == results.len(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    match run(cli.command) {
        Ok(out) => {
            let body = if json_mode {
                serde_json::to_string_pretty(&out.json).expect("json")
            } else {
                out.text
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{body}");
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (code, msg, detail) = match f {
                Failure::Parse(m) => (2, m.clone(), json!({"kind": "parse", "message": m})),
                Failure::Syntax(p) => (
                    2,
                    p.to_string(),
                    json!({"kind": "parse", "message": p.to_string(), "offset": p.offset, "expected": p.expected}),
                ),
                Failure::Domain(m) => (1, m.clone(), json!({"kind": "domain", "message": m})),
            };
            if json_mode {
                let _ = writeln!(std::io::stdout(), "{}", json!({ "error": detail }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
