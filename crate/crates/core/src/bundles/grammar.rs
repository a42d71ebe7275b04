//! Canonical text form of bundle expressions.
//!
//! ```text
//! expr  := atom ("(+)" atom)*
//! atom  := "O(" int "," int "," int ")"
//!        | "twist(" expr ";" int "," int "," int ")"
//!        | "dual(" expr ")"
//!        | "kerev(" int "," int "," int ")"
//!        | "p" factors "*(" rank ";" ints [";" int] ")"
//!        | "hs(" curve-json ";" int "," int "," int ";" rank ")"
//! ```
//!
//! Whitespace is ignored between tokens.

use std::fmt;

use super::{BundleExpr, FactorSet, HsData, Pullback};
use crate::chow::Divisor3;
use crate::curves::CurveData;
use crate::text::{Cursor, ParseError};

const ATOM_STARTS: [&str; 6] = ["O(", "twist(", "dual(", "kerev(", "p", "hs("];

pub fn parse_bundle(src: &str) -> Result<BundleExpr, ParseError> {
    let mut c = Cursor::new(src);
    let e = expr(&mut c)?;
    if !c.at_end() {
        return Err(c.error(&["(+)", "end of input"]));
    }
    Ok(e)
}

fn expr(c: &mut Cursor) -> Result<BundleExpr, ParseError> {
    let first = atom(c)?;
    let mut parts = vec![first];
    while c.eat("(+)") {
        parts.push(atom(c)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        BundleExpr::Sum(parts)
    })
}

fn triple(c: &mut Cursor, closing: bool) -> Result<Divisor3, ParseError> {
    let start = c.pos();
    let v = if closing { c.int_list()? } else { c.int_group()? };
    match v.as_slice() {
        &[a, b, d] => Ok(Divisor3::new(a, b, d)),
        _ => Err(c.error_msg(start, format!("expected 3 integers, got {}", v.len()))),
    }
}

fn rank(c: &mut Cursor) -> Result<u64, ParseError> {
    c.skip_ws();
    let at = c.pos();
    let r = c.int()?;
    match u64::try_from(r) {
        Ok(r) if r >= 1 => Ok(r),
        _ => Err(c.error_msg(at, "rank must be a positive integer")),
    }
}

fn atom(c: &mut Cursor) -> Result<BundleExpr, ParseError> {
    if c.eat("O(") {
        return Ok(BundleExpr::Line(triple(c, true)?));
    }
    if c.eat("twist(") {
        let inner = expr(c)?;
        c.expect(";")?;
        let m = triple(c, true)?;
        return Ok(BundleExpr::Twist(Box::new(inner), m));
    }
    if c.eat("dual(") {
        let inner = expr(c)?;
        c.expect(")")?;
        return Ok(BundleExpr::Dual(Box::new(inner)));
    }
    if c.eat("kerev(") {
        return Ok(BundleExpr::KerEvDual(triple(c, true)?));
    }
    if c.eat("hs(") {
        let curve = curve_json(c)?;
        c.expect(";")?;
        let c1 = triple(c, false)?;
        c.expect(";")?;
        let r = rank(c)?;
        c.expect(")")?;
        return Ok(BundleExpr::Hs(HsData { curve, c1, rank: r }));
    }
    if c.eat("p") {
        return pullback(c);
    }
    Err(c.error(&ATOM_STARTS))
}

fn pullback(c: &mut Cursor) -> Result<BundleExpr, ParseError> {
    let digits: String = c.rest().chars().take_while(|ch| ch.is_ascii_digit()).collect();
    let factors: Vec<usize> = digits.chars().map(|ch| ch as usize - '0' as usize).collect();
    let factors = match digits.as_str() {
        "1" | "2" | "3" | "12" | "13" | "23" => FactorSet::new(&factors).expect("valid factor set"),
        _ => return Err(c.error(&["1", "2", "3", "12", "13", "23"])),
    };
    c.advance(digits.len());
    if !c.rest().starts_with("*(") {
        return Err(c.error(&["*("]));
    }
    c.advance(2);
    let r = rank(c)?;
    c.expect(";")?;
    let group_at = c.pos();
    let c1 = c.int_group()?;
    if c1.len() != factors.len() {
        return Err(c.error_msg(
            group_at,
            format!("expected {} first Chern class entries, got {}", factors.len(), c1.len()),
        ));
    }
    let c2 = if factors.len() == 2 {
        c.expect(";")?;
        c.int()?
    } else {
        0
    };
    c.expect(")")?;
    Ok(BundleExpr::Pullback(Pullback { factors, rank: r, c1, c2 }))
}

/// A JSON object, delimited by balanced braces outside string literals.
fn curve_json(c: &mut Cursor) -> Result<CurveData, ParseError> {
    c.skip_ws();
    let start = c.pos();
    let rest = c.rest();
    if !rest.starts_with('{') {
        return Err(c.error(&["{"]));
    }
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut end = None;
    for (i, ch) in rest.char_indices() {
        if in_string {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    end = Some(i + 1);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(end) = end else {
        return Err(c.error_msg(start, "unterminated curve JSON"));
    };
    let text = &rest[..end];
    let curve: CurveData = serde_json::from_str(text).map_err(|e| {
        let offset = if e.line() == 1 { start + e.column().saturating_sub(1) } else { start };
        c.error_msg(offset, format!("invalid curve JSON: {e}"))
    })?;
    c.advance(end);
    Ok(curve)
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Line(a) => write!(f, "O{a}"),
            BundleExpr::Sum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " (+) ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            BundleExpr::Twist(e, m) => write!(f, "twist({e}; {},{},{})", m.0[0], m.0[1], m.0[2]),
            BundleExpr::Dual(e) => write!(f, "dual({e})"),
            BundleExpr::KerEvDual(a) => write!(f, "kerev{a}"),
            BundleExpr::Pullback(p) => {
                let c1: Vec<String> = p.c1.iter().map(|v| v.to_string()).collect();
                write!(f, "p{}*({}; {}", p.factors, p.rank, c1.join(","))?;
                if p.factors.len() == 2 {
                    write!(f, "; {}", p.c2)?;
                }
                write!(f, ")")
            }
            BundleExpr::Hs(hs) => {
                let json = serde_json::to_string(&hs.curve).map_err(|_| fmt::Error)?;
                let [a1, a2, a3] = hs.c1.0;
                write!(f, "hs({json}; {a1},{a2},{a3}; {})", hs.rank)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::CurveClass;
    use crate::curves::Component;

    #[test]
    fn sums_and_twists() {
        assert_eq!(
            parse_bundle("O(1,0,0) (+) O(0,1,1)").unwrap(),
            BundleExpr::Sum(vec![BundleExpr::line(1, 0, 0), BundleExpr::line(0, 1, 1)])
        );
        assert_eq!(
            parse_bundle("twist(kerev(1,1,1); 0,0,-1)").unwrap(),
            BundleExpr::KerEvDual(Divisor3::new(1, 1, 1)).twist(Divisor3::new(0, 0, -1))
        );
        let e = parse_bundle(" dual( O( 2 , 0, 0)(+)O(0,0,1) ) ").unwrap();
        assert_eq!(e.to_string(), "dual(O(2,0,0) (+) O(0,0,1))");
    }

    #[test]
    fn error_positions() {
        let err = parse_bundle("O(1,0").unwrap_err();
        assert_eq!(err.offset, 6);
        assert_eq!(err.expected, vec![",", ")"]);
        let err = parse_bundle("O(1,0)").unwrap_err();
        assert_eq!(err.offset, 3);
        let err = parse_bundle("Q(1,0,0)").unwrap_err();
        assert_eq!(err.offset, 1);
        assert_eq!(err.expected.len(), ATOM_STARTS.len());
        let err = parse_bundle("O(1,0,0) O(1,0,0)").unwrap_err();
        assert_eq!(err.offset, 10);
        let err = parse_bundle("p123*(1; 1,1,1)").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn pullbacks() {
        let e = parse_bundle("p23*(2; 1,1; 2)").unwrap();
        let BundleExpr::Pullback(p) = &e else { panic!() };
        assert_eq!((p.factors.factors(), p.rank, p.c1.clone(), p.c2), (vec![2, 3], 2, vec![1, 1], 2));
        assert_eq!(e.to_string(), "p23*(2; 1,1; 2)");
        let e = parse_bundle("p3*(1; 1)").unwrap();
        assert_eq!(e.to_string(), "p3*(1; 1)");
        assert!(parse_bundle("p12*(2; 1; 0)").is_err());
        assert!(parse_bundle("p12*(0; 1,1; 0)").is_err());
    }

    #[test]
    fn hs_nodes() {
        let src = r#"hs({"components":[{"e":[0,1,1],"g":0},{"e":[0,1,1],"g":0}]}; 2,1,1; 2)"#;
        let e = parse_bundle(src).unwrap();
        let BundleExpr::Hs(hs) = &e else { panic!() };
        assert_eq!(hs.curve.s(), 2);
        assert_eq!(hs.curve.components()[0], Component::new(CurveClass::new(0, 1, 1), 0).unwrap());
        assert_eq!(parse_bundle(&e.to_string()).unwrap(), e);
        let bad = r#"hs({"components":[]}; 2,1,1; 2)"#;
        assert!(parse_bundle(bad).unwrap_err().message.unwrap().contains("curve JSON"));
    }
}
