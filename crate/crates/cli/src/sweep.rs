//! Parameter sweeps over the closed-form families.

use clap::ValueEnum;
use rayon::prelude::*;
use sedwalk::families::{self, ThresholdSpec};
use sedwalk::sedentary::Verdict;
use sedwalk::{FamilyError, VertexClassification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    MultipartiteLaplacian,
    MultipartiteAdjacency,
    Threshold,
    CompleteProducts,
    All,
}

/// One table row.
#[derive(Clone, Debug)]
pub struct Row {
    pub family: &'static str,
    pub params: String,
    pub vertex_class: String,
    pub result: Result<VertexClassification, FamilyError>,
}

impl Row {
    pub fn time(&self) -> Option<f64> {
        let c = self.result.as_ref().ok()?;
        match c.verdict {
            Verdict::Pst { time, .. } => Some(time),
            Verdict::NotSedentary { zero_time } => zero_time,
            _ => c.tightness_time(),
        }
    }
}

/// Partitions of `n` into at least two non-increasing parts.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `n` into at most `max_len` positive parts.
fn compositions(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if left == 0 {
            return;
        }
        for p in 1..=rest {
            cur.push(p);
            rec(rest - p, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_len, &mut Vec::new(), &mut out);
    out
}

fn list(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn multipartite(max_n: usize, laplacian: bool) -> Vec<Row> {
    let family = if laplacian { "multipartite-laplacian" } else { "multipartite-adjacency" };
    let jobs: Vec<(Vec<usize>, usize)> = (2..=max_n)
        .flat_map(partitions)
        .flat_map(|parts| {
            let mut seen = Vec::new();
            let mut jobs = Vec::new();
            for (l, &p) in parts.iter().enumerate() {
                if !seen.contains(&p) {
                    seen.push(p);
                    jobs.push((parts.clone(), l));
                }
            }
            jobs
        })
        .collect();
    jobs.into_par_iter()
        .map(|(parts, l)| {
            let result = if laplacian {
                families::multipartite_laplacian_verdict(&parts, l)
            } else {
                families::multipartite_adjacency_verdict(&parts, l)
            };
            Row {
                family,
                params: format!("KM({})", list(&parts)),
                vertex_class: format!("part {l} (size {})", parts[l]),
                result,
            }
        })
        .collect()
}

fn threshold(max_n: usize) -> Vec<Row> {
    let specs: Vec<Vec<usize>> = (2..=max_n).flat_map(|n| compositions(n, 5)).filter(|c| c.len() >= 2).collect();
    specs
        .into_par_iter()
        .flat_map_iter(|parts| {
            let starts_empty = parts.len() % 2 == 0;
            let params = format!("Gamma({};start={})", list(&parts), if starts_empty { "O" } else { "K" });
            let rows: Vec<Row> = match ThresholdSpec::new(&parts, starts_empty).and_then(|s| families::threshold_pst_or_sedentary(&s)) {
                Ok(cs) => cs
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| Row {
                        family: "threshold",
                        params: params.clone(),
                        vertex_class: format!("cell {}", i + 1),
                        result: Ok(c),
                    })
                    .collect(),
                Err(e) => vec![Row { family: "threshold", params, vertex_class: "-".into(), result: Err(e) }],
            };
            rows
        })
        .collect()
}

fn complete_products(max_n: usize) -> Vec<Row> {
    let mut lists = Vec::new();
    for a in 2..=max_n {
        for b in a..=max_n {
            lists.push(vec![a, b]);
        }
    }
    for a in 2..=4.min(max_n) {
        for b in a..=4.min(max_n) {
            for c in b..=4.min(max_n) {
                lists.push(vec![a, b, c]);
            }
        }
    }
    lists
        .into_par_iter()
        .map(|m| Row {
            family: "complete-products",
            params: format!("dprod K({})", list(&m)),
            vertex_class: "any".into(),
            result: families::complete_product_verdict(&m),
        })
        .collect()
}

/// Rows for `family` with vertex counts (or factor sizes) up to `max_n`.
pub fn sweep(family: Family, max_n: usize) -> Vec<Row> {
    match family {
        Family::MultipartiteLaplacian => multipartite(max_n, true),
        Family::MultipartiteAdjacency => multipartite(max_n, false),
        Family::Threshold => threshold(max_n),
        Family::CompleteProducts => complete_products(max_n),
        Family::All => [
            Family::MultipartiteLaplacian,
            Family::MultipartiteAdjacency,
            Family::Threshold,
            Family::CompleteProducts,
        ]
        .into_iter()
        .flat_map(|f| sweep(f, max_n))
        .collect(),
    }
}
