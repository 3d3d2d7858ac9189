//! Graph expressions such as `join(O(2),K(6))` or `Gamma(2,2,4,4;start=O)`.
//!
//! ```text
//! expr  := name '(' args ')'
//! K(n) O(n) P(n) C(n) S(n)          complete, empty, path, cycle, star K_{1,n}
//! CP(2k)                            cocktail party graph on 2k vertices
//! KM(n1,...,nk)                     complete multipartite
//! Gamma(m1,...,mh[;start=O|K])      threshold graph
//! join(a,b) union(a,b) dprod(a,b) cprod(a,b) blowup(m,a)
//! ```
//!
//! `Gamma` without `start` begins with `O` for an even number of cells and
//! with `K` for an odd number, which are the connected forms.

use crate::error::ParseError;
use crate::graph::{self, WeightedGraph};

/// Parses a graph expression.
pub fn parse(input: &str) -> Result<WeightedGraph, ParseError> {
    parse_annotated(input).map(|p| p.graph)
}

/// A parsed expression plus facts about how it was built.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: WeightedGraph,
    /// Some `dprod` in the expression has a non-regular factor.
    pub irregular_direct_product: bool,
}

/// Parses a graph expression, keeping construction facts.
pub fn parse_annotated(input: &str) -> Result<ParsedGraph, ParseError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, irregular_dprod: false };
    let graph = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(ParsedGraph { graph, irregular_direct_product: p.irregular_dprod })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    irregular_dprod: bool,
}

enum Arg {
    Int(usize),
    Graph(WeightedGraph),
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Dsl { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError::Dsl { pos: start, msg: "expected a non-negative integer".into() })
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Arg::Int(self.int()?)),
            _ => Ok(Arg::Graph(self.expr()?)),
        }
    }

    fn expr(&mut self) -> Result<WeightedGraph, ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?;
        self.expect(b'(')?;
        let mut args = Vec::new();
        let mut start = None;
        if self.peek() != Some(b')') {
            loop {
                args.push(self.arg()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b';') => {
                        self.pos += 1;
                        let key = self.ident()?;
                        if key != "start" {
                            return Err(self.err(format!("unknown option '{key}'")));
                        }
                        self.expect(b'=')?;
                        start = Some(match self.ident()?.as_str() {
                            "O" => true,
                            "K" => false,
                            other => return Err(self.err(format!("start must be O or K, got '{other}'"))),
                        });
                        break;
                    }
                    _ => break,
                }
            }
        }
        self.expect(b')')?;
        let bad = |msg: &str| ParseError::Dsl { pos: at, msg: format!("{name}: {msg}") };
        if start.is_some() && name != "Gamma" {
            return Err(bad("only Gamma takes a start option"));
        }
        let ints = |args: &[Arg]| -> Option<Vec<usize>> {
            args.iter().map(|a| if let Arg::Int(k) = a { Some(*k) } else { None }).collect()
        };
        let one_int = |args: &[Arg]| -> Result<usize, ParseError> {
            match args {
                [Arg::Int(k)] => Ok(*k),
                _ => Err(bad("expects one integer")),
            }
        };
        let two_graphs = |args: Vec<Arg>| -> Result<(WeightedGraph, WeightedGraph), ParseError> {
            let mut it = args.into_iter();
            match (it.next(), it.next(), it.next()) {
                (Some(Arg::Graph(a)), Some(Arg::Graph(b)), None) => Ok((a, b)),
                _ => Err(bad("expects two graphs")),
            }
        };
        let g = match name.as_str() {
            "K" => graph::complete(one_int(&args)?)?,
            "O" => graph::empty(one_int(&args)?)?,
            "P" => graph::path(one_int(&args)?)?,
            "C" => graph::cycle(one_int(&args)?)?,
            "S" => graph::star(one_int(&args)?)?,
            "CP" => {
                let n = one_int(&args)?;
                if n == 0 || n % 2 != 0 {
                    return Err(bad("vertex count must be even and positive"));
                }
                graph::cocktail_party(n / 2)?
            }
            "KM" => graph::complete_multipartite(&ints(&args).ok_or_else(|| bad("expects integers"))?)?,
            "Gamma" => {
                let parts = ints(&args).ok_or_else(|| bad("expects integers"))?;
                graph::threshold(&parts, start.unwrap_or(parts.len() % 2 == 0))?
            }
            "join" => {
                let (a, b) = two_graphs(args)?;
                graph::join(&a, &b)
            }
            "union" => {
                let (a, b) = two_graphs(args)?;
                graph::disjoint_union(&a, &b)
            }
            "dprod" => {
                let (a, b) = two_graphs(args)?;
                if a.is_weighted_regular().is_none() || b.is_weighted_regular().is_none() {
                    self.irregular_dprod = true;
                }
                graph::direct_product(&a, &b)
            }
            "cprod" => {
                let (a, b) = two_graphs(args)?;
                graph::cartesian_product(&a, &b)
            }
            "blowup" => {
                let mut it = args.into_iter();
                match (it.next(), it.next(), it.next()) {
                    (Some(Arg::Int(m)), Some(Arg::Graph(x)), None) => graph::blow_up(m, &x)?,
                    _ => return Err(bad("expects an integer and a graph")),
                }
            }
            _ => return Err(ParseError::Dsl { pos: at, msg: format!("unknown family '{name}'") }),
        };
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_expression() {
        let g = parse(" join( O(2) , K(6) ) ").unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edge_count(), 15 + 12);
    }

    #[test]
    fn gamma_default_start() {
        assert!(parse("Gamma(2,3)").unwrap().is_isomorphic(&graph::threshold(&[2, 3], true).unwrap()));
        assert!(parse("Gamma(2,1,3)").unwrap().is_isomorphic(&graph::threshold(&[2, 1, 3], false).unwrap()));
        assert!(parse("Gamma(2,3;start=K)").unwrap().is_isomorphic(&graph::threshold(&[2, 3], false).unwrap()));
    }

    #[test]
    fn flags_irregular_products() {
        assert!(!parse_annotated("dprod(K(3),C(5))").unwrap().irregular_direct_product);
        assert!(parse_annotated("union(K(1),dprod(P(3),K(2)))").unwrap().irregular_direct_product);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("K(3"), Err(ParseError::Dsl { pos: 3, .. })));
        assert!(matches!(parse("Q(3)"), Err(ParseError::Dsl { pos: 0, .. })));
        assert!(matches!(parse("CP(5)"), Err(ParseError::Dsl { .. })));
        assert!(matches!(parse("K(0)"), Err(ParseError::Graph(_))));
        assert!(parse("K(3) x").is_err());
    }
}
