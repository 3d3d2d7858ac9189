//! Plain-text edge lists: a header `n <count>` followed by `u v [w]` lines.
//! Loops are written `u u w`. Blank lines and `#` comments are ignored.
//! Integer, fraction (`3/2`) and plain decimal weights are kept exact.

use std::fmt::Write as _;

use num_rational::Rational64;

use crate::error::ParseError;
use crate::graph::{Weight, WeightedGraph};

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::EdgeList { line, msg: msg.into() }
}

/// Parses one weight token.
pub fn parse_weight(tok: &str) -> Option<Weight> {
    if let Some((p, q)) = tok.split_once('/') {
        let (p, q): (i64, i64) = (p.parse().ok()?, q.parse().ok()?);
        return (q != 0).then(|| Weight::Exact(Rational64::new(p, q)));
    }
    if let Ok(k) = tok.parse::<i64>() {
        return Some(Weight::Exact(Rational64::from_integer(k)));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        let digits_ok = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        let int_digits = int.strip_prefix('-').unwrap_or(int);
        if digits_ok(int_digits) && digits_ok(frac) && !frac.is_empty() && frac.len() <= 15 && int_digits.len() <= 3 {
            let den = 10i64.pow(frac.len() as u32);
            let num: i64 = format!("{int}{frac}").parse().ok()?;
            return Some(Weight::Exact(Rational64::new(num, den)));
        }
    }
    let x: f64 = tok.parse().ok()?;
    x.is_finite().then_some(Weight::Approx(x))
}

/// Reads a graph from edge-list text.
pub fn parse(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header 'n <count>'"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count.parse::<usize>().map_err(|_| err(hline, "vertex count is not an integer"))?,
        _ => return Err(err(hline, "header must be 'n <count>'")),
    };
    let mut g = WeightedGraph::with_vertices(n);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (u, v, w) = match toks.as_slice() {
            [u, v] => (*u, *v, None),
            [u, v, w] => (*u, *v, Some(*w)),
            _ => return Err(err(ln, "expected 'u v [w]'")),
        };
        let u: usize = u.parse().map_err(|_| err(ln, format!("bad vertex '{u}'")))?;
        let v: usize = v.parse().map_err(|_| err(ln, format!("bad vertex '{v}'")))?;
        let w = match w {
            Some(t) => parse_weight(t).ok_or_else(|| err(ln, format!("bad weight '{t}'")))?,
            None => Weight::one(),
        };
        g.add_edge(u, v, w).map_err(|e| err(ln, e.to_string()))?;
    }
    Ok(g)
}

fn format_weight(w: &Weight) -> String {
    match w {
        Weight::Exact(r) if *r.denom() == 1 => r.numer().to_string(),
        Weight::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
        Weight::Approx(x) => format!("{x:?}"),
    }
}

/// Writes a graph as edge-list text; [`parse`] reads it back unchanged.
pub fn write(g: &WeightedGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {}", format_weight(&w));
    }
    out
}
