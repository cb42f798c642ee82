//! Report records and their table, JSON and CSV renderings.

use std::fmt::Write as _;

use congabc_core::report::{round12, round_sig12, to_json};
use congabc_core::theta::BoundReport;
use congabc_core::{AbcSolution, Factorizer, LemmaVerdict, MeritReport, SuiteSummary, ThetaResult};
use serde::{Deserialize, Serialize};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeritAt {
    #[serde(serialize_with = "round12")]
    pub eps: f64,
    #[serde(serialize_with = "round12")]
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorizations {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub triple: AbcSolution,
    pub factorizations: Factorizations,
    pub rad: String,
    #[serde(serialize_with = "round12")]
    pub quality: f64,
    pub merit: Vec<MeritAt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaStep {
    pub n: u32,
    pub m: u32,
    pub input: AbcSolution,
    /// `(A, B, C)` before normalization.
    pub raw: [String; 3],
    pub output: AbcSolution,
    #[serde(serialize_with = "round12")]
    pub quality: f64,
    pub fixed_point: bool,
}

impl ThetaStep {
    pub fn new(t: &ThetaResult, quality: f64) -> Self {
        ThetaStep {
            n: t.n,
            m: t.m,
            input: t.input.clone(),
            raw: t.raw.clone().map(|x| x.to_string()),
            output: t.output.clone(),
            quality,
            fixed_point: t.is_fixed_point(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub steps: Vec<ThetaStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub max_c: u64,
    #[serde(serialize_with = "round12")]
    pub min_quality: f64,
    pub hits: Vec<SearchHit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub triple: AbcSolution,
    pub rad: String,
    #[serde(serialize_with = "round12")]
    pub quality: f64,
    /// `f(aa, 0) = ln c - ln rad`.
    #[serde(serialize_with = "round12")]
    pub f: f64,
}

impl From<&MeritReport> for SearchHit {
    fn from(m: &MeritReport) -> Self {
        SearchHit {
            triple: m.triple.clone(),
            rad: m.rad_abc.to_string(),
            quality: m.quality,
            f: m.merit,
        }
    }
}

fn csv_string(rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w).expect("writing csv to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

fn num(x: f64) -> String {
    round_sig12(x).to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn analyze(r: &AnalyzeReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_string(|w| {
            w.write_record(["a", "b", "c", "rad", "quality", "eps", "f"])?;
            for m in &r.merit {
                w.write_record([
                    r.triple.a().to_string(),
                    r.triple.b().to_string(),
                    r.triple.c().to_string(),
                    r.rad.clone(),
                    num(r.quality),
                    num(m.eps),
                    num(m.f),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut s = String::new();
            let t = &r.triple;
            let _ = writeln!(s, "triple   {t}");
            let _ = writeln!(s, "|a|      {} = {}", t.abs_a(), r.factorizations.a);
            let _ = writeln!(s, "|b|      {} = {}", t.abs_b(), r.factorizations.b);
            let _ = writeln!(s, "c        {} = {}", t.c(), r.factorizations.c);
            let _ = writeln!(s, "rad      {}", r.rad);
            let _ = writeln!(s, "quality  {:.12}", r.quality);
            for m in &r.merit {
                let _ = writeln!(s, "f(eps={}) {:.12}", num(m.eps), m.f);
            }
            s
        }
    }
}

pub fn theta(r: &ThetaReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_string(|w| {
            w.write_record(["step", "n", "m", "A", "B", "C", "a", "b", "c", "quality", "fixed_point"])?;
            for (i, st) in r.steps.iter().enumerate() {
                let o = &st.output;
                w.write_record([
                    (i + 1).to_string(),
                    st.n.to_string(),
                    st.m.to_string(),
                    st.raw[0].clone(),
                    st.raw[1].clone(),
                    st.raw[2].clone(),
                    o.a().to_string(),
                    o.b().to_string(),
                    o.c().to_string(),
                    num(st.quality),
                    st.fixed_point.to_string(),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut s = String::new();
            if let Some(first) = r.steps.first() {
                let _ = writeln!(s, "start    {}", first.input);
            }
            for (i, st) in r.steps.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "step {:<3} n={} m={} raw=({}, {}, {}) -> {}  quality {:.12}{}",
                    i + 1,
                    st.n,
                    st.m,
                    st.raw[0],
                    st.raw[1],
                    st.raw[2],
                    st.output,
                    st.quality,
                    if st.fixed_point { "  (fixed point)" } else { "" }
                );
            }
            s
        }
    }
}

pub fn bound(r: &BoundReport, format: Format) -> String {
    let k = r.constants.as_ref();
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_string(|w| {
            w.write_record(["N", "eps", "C", "n", "c_lin", "c_off", "eps_out", "bound"])?;
            w.write_record([
                r.modulus.to_string(),
                num(r.epsilon),
                num(r.congruence_constant),
                opt(r.n),
                opt(k.map(|k| k.c_lin)),
                opt(k.map(|k| k.c_off)),
                opt(k.map(|k| k.eps_out)),
                num(r.bound),
            ])
        }),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "N        {}", r.modulus);
            let _ = writeln!(s, "eps      {}", num(r.epsilon));
            let _ = writeln!(s, "C        {}", num(r.congruence_constant));
            match (r.n, k) {
                (Some(n), Some(k)) => {
                    let _ = writeln!(s, "n        {n}");
                    let _ = writeln!(s, "c_lin    {:.12}", k.c_lin);
                    let _ = writeln!(s, "c_off    {:.12}", k.c_off);
                    let _ = writeln!(s, "eps_out  {:.12}", k.eps_out);
                }
                (Some(n), None) => {
                    let _ = writeln!(s, "n        {n}");
                }
                _ => {
                    let _ = writeln!(s, "n        (N <= 2: every triple qualifies)");
                }
            }
            let _ = writeln!(s, "bound    {:.12}", r.bound);
            s
        }
    }
}

pub fn search(r: &SearchReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_string(|w| {
            w.write_record(["a", "b", "c", "rad", "quality", "f"])?;
            for h in &r.hits {
                w.write_record([
                    h.triple.a().to_string(),
                    h.triple.b().to_string(),
                    h.triple.c().to_string(),
                    h.rad.clone(),
                    num(h.quality),
                    num(h.f),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "{} solutions with c <= {} and quality > {}", r.hits.len(), r.max_c, num(r.min_quality));
            for h in &r.hits {
                let _ = writeln!(s, "{:<32} rad {:<12} quality {:.12}", h.triple.to_string(), h.rad, h.quality);
            }
            s
        }
    }
}

pub fn verdict_line(v: &LemmaVerdict) -> String {
    let mut s = v.triple.to_string();
    let p = &v.params;
    if let Some(n) = p.n {
        let _ = write!(s, " n={n}");
    }
    if let Some(e) = p.eps {
        let _ = write!(s, " eps={}", num(e));
    }
    if let Some(m) = p.modulus {
        let _ = write!(s, " N={m}");
    }
    if let (Some(l), Some(r), Some(d)) = (v.lhs, v.rhs, v.slack) {
        let _ = write!(s, " lhs={:.12} rhs={:.12} slack={:.6e}", l, r, d);
    }
    if v.high_precision {
        s.push_str(" [fixed point]");
    }
    if let Some(w) = &v.witness {
        let _ = write!(s, " witness={w}");
    }
    s
}

/// The counterexample with the smallest slack, or the first one when the
/// suite has no slack.
pub fn minimal_counterexample(s: &SuiteSummary) -> Option<&LemmaVerdict> {
    s.counterexamples.iter().fold(None, |best: Option<&LemmaVerdict>, v| match best {
        Some(b) if b.slack.unwrap_or(f64::INFINITY) <= v.slack.unwrap_or(f64::INFINITY) => Some(b),
        _ => Some(v),
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    kind: &'a str,
    a: String,
    b: String,
    c: String,
    rad: String,
    quality: String,
    f: String,
    n: String,
    eps: String,
    modulus: String,
    lhs: String,
    rhs: String,
    slack: String,
    pass: bool,
    witness: String,
}

pub fn summary(s: &SuiteSummary, format: Format, engine: &Factorizer) -> String {
    match format {
        Format::Json => to_json(s),
        Format::Csv => csv_string(|w| {
            let rows = s
                .extremal
                .iter()
                .map(|v| ("extremal", v))
                .chain(s.counterexamples.iter().map(|v| ("counterexample", v)));
            let mut any = false;
            for (kind, v) in rows {
                any = true;
                let m = congabc_core::merit_with(engine, &v.triple, v.params.eps.unwrap_or(0.0)).ok();
                w.serialize(CsvRow {
                    kind,
                    a: v.triple.a().to_string(),
                    b: v.triple.b().to_string(),
                    c: v.triple.c().to_string(),
                    rad: m.as_ref().map(|m| m.rad_abc.to_string()).unwrap_or_default(),
                    quality: opt(m.as_ref().map(|m| m.quality)),
                    f: opt(m.as_ref().map(|m| m.merit)),
                    n: v.params.n.map(|n| n.to_string()).unwrap_or_default(),
                    eps: opt(v.params.eps),
                    modulus: v.params.modulus.map(|n| n.to_string()).unwrap_or_default(),
                    lhs: opt(v.lhs),
                    rhs: opt(v.rhs),
                    slack: opt(v.slack),
                    pass: v.pass,
                    witness: v.witness.clone().unwrap_or_default(),
                })?;
            }
            if !any {
                w.write_record([
                    "kind", "a", "b", "c", "rad", "quality", "f", "n", "eps", "modulus", "lhs", "rhs", "slack", "pass",
                    "witness",
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut out = String::new();
            let suite = serde_json::to_value(s.suite).ok();
            let name = suite.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
            let _ = writeln!(out, "suite        {name}");
            let g = &s.grid;
            if !g.n.is_empty() {
                let _ = writeln!(out, "n            {:?}", g.n);
            }
            if !g.eps.is_empty() {
                let eps: Vec<String> = g.eps.iter().map(|e| num(*e)).collect();
                let _ = writeln!(out, "eps          [{}]", eps.join(", "));
            }
            if !g.modulus.is_empty() {
                let _ = writeln!(out, "N            {}", compact_list(&g.modulus));
            }
            if let Some(c) = g.assumed_constant {
                let _ = writeln!(out, "assumed C    {:.12}", c);
            }
            let _ = writeln!(out, "corpus       {} triples, sha256 {}", s.corpus_size, s.corpus_hash);
            let _ = writeln!(out, "checks       {}", s.checks);
            let _ = writeln!(out, "pass         {}", s.pass);
            let _ = writeln!(out, "fail         {}", s.fail);
            let _ = writeln!(out, "inconclusive {}", s.inconclusive);
            let _ = writeln!(out, "near ties    {}", s.near_ties);
            if let Some(m) = s.min_slack {
                let _ = writeln!(out, "min slack    {:.12}", m);
            }
            if let Some(v) = &s.extremal {
                let _ = writeln!(out, "extremal     {}", verdict_line(v));
            }
            for v in &s.counterexamples {
                let _ = writeln!(out, "FAIL         {}", verdict_line(v));
            }
            for r in &s.inconclusives {
                let _ = writeln!(out, "INCONCLUSIVE {} {}", r.triple, r.reason);
            }
            out
        }
    }
}

fn compact_list(xs: &[u64]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[j] + 1 {
            j += 1;
        }
        if j > i + 1 {
            parts.push(format!("{}..={}", xs[i], xs[j]));
        } else {
            parts.extend(xs[i..=j].iter().map(|x| x.to_string()));
        }
        i = j + 1;
    }
    parts.join(",")
}
