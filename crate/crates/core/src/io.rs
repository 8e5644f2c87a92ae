//! Text formats for graphs, MINREP instances and certificate bundles.
//!
//! Graph files are line oriented:
//!
//! ```text
//! # name: triangle
//! # provenance: hand written
//! 3 3
//! 0 1
//! 1 2
//! 0 2
//! t 2 2 2
//! ```
//!
//! The header gives `n m`, then `m` edge lines follow. Thresholds are given
//! by one or more `t` lines whose values are concatenated. Other lines
//! starting with `#` are ignored. A MINREP file is a graph file on `A ∪ B`
//! (ids of `A` first) with one `A i x...` or `B j y...` line per group and no
//! thresholds. A bundle is a graph file, a `%% certificate` line and the
//! certificate JSON.

use serde::{Deserialize, Serialize};

use crate::constructions::Certificate;
use crate::error::{Result, WdmError};
use crate::graph::{Graph, Thresholds};
use crate::reduction::MinRepInstance;

pub const BUNDLE_SEPARATOR: &str = "%% certificate";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub name: Option<String>,
    pub provenance: Option<String>,
    pub graph: Graph,
    pub tau: Option<Thresholds>,
}

impl GraphFile {
    pub fn new(graph: Graph, tau: Option<Thresholds>) -> GraphFile {
        GraphFile {
            name: None,
            provenance: None,
            graph,
            tau,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> GraphFile {
        self.name = Some(name.into());
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> GraphFile {
        self.provenance = Some(provenance.into());
        self
    }
}

// Raw pieces shared by the graph and MINREP parsers.
struct Parsed {
    name: Option<String>,
    provenance: Option<String>,
    n: usize,
    edges: Vec<(usize, usize, usize)>,
    tau: Vec<u32>,
    tau_line: Option<usize>,
    groups: Vec<(usize, char, usize, Vec<usize>)>,
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| WdmError::parse(line, format!("expected {what}, found {tok:?}")))
}

fn parse_lines(text: &str, allow_groups: bool) -> Result<Parsed> {
    let mut p = Parsed {
        name: None,
        provenance: None,
        n: 0,
        edges: Vec::new(),
        tau: Vec::new(),
        tau_line: None,
        groups: Vec::new(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if let Some(v) = c.strip_prefix("name:") {
                p.name = Some(v.trim().to_string());
            } else if let Some(v) = c.strip_prefix("provenance:") {
                p.provenance = Some(v.trim().to_string());
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some((n, m)) = header else {
            if toks.len() != 2 {
                return Err(WdmError::parse(ln, "expected header \"n m\""));
            }
            let n = number(toks[0], ln, "vertex count")?;
            let m = number(toks[1], ln, "edge count")?;
            header = Some((n, m));
            p.n = n;
            continue;
        };
        match toks[0] {
            "t" => {
                p.tau_line.get_or_insert(ln);
                for tok in &toks[1..] {
                    p.tau.push(number(tok, ln, "threshold")?);
                }
            }
            side @ ("A" | "B") if allow_groups => {
                if toks.len() < 3 {
                    return Err(WdmError::parse(ln, "group line needs an index and members"));
                }
                let gi = number(toks[1], ln, "group index")?;
                let members = toks[2..]
                    .iter()
                    .map(|t| number(t, ln, "vertex id"))
                    .collect::<Result<Vec<usize>>>()?;
                if let Some(&x) = members.iter().find(|&&x| x >= n) {
                    return Err(WdmError::parse(ln, format!("vertex {x} out of range 0..{n}")));
                }
                p.groups.push((ln, side.chars().next().unwrap_or('A'), gi, members));
            }
            _ => {
                if p.tau_line.is_some() {
                    return Err(WdmError::parse(ln, "edge after the threshold line"));
                }
                if toks.len() != 2 {
                    return Err(WdmError::parse(ln, "expected an edge \"u v\""));
                }
                let u: usize = number(toks[0], ln, "vertex id")?;
                let v: usize = number(toks[1], ln, "vertex id")?;
                if u >= n || v >= n {
                    return Err(WdmError::parse(
                        ln,
                        format!("edge ({u}, {v}) has an id out of range 0..{n}"),
                    ));
                }
                if u == v {
                    return Err(WdmError::parse(ln, format!("self-loop at vertex {u}")));
                }
                if p.edges.len() == m {
                    return Err(WdmError::parse(ln, format!("more than {m} edges")));
                }
                p.edges.push((ln, u, v));
            }
        }
    }
    let Some((_, m)) = header else {
        return Err(WdmError::parse(last_line.max(1), "missing header \"n m\""));
    };
    if p.edges.len() != m {
        return Err(WdmError::parse(
            last_line.max(1),
            format!("header promises {m} edges, found {}", p.edges.len()),
        ));
    }
    let mut seen: Vec<(usize, usize, usize)> = p
        .edges
        .iter()
        .map(|&(ln, u, v)| (u.min(v), u.max(v), ln))
        .collect();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
        return Err(WdmError::parse(
            w[1].2.max(w[0].2),
            format!("duplicate edge ({}, {})", w[0].0, w[0].1),
        ));
    }
    Ok(p)
}

/// Parses a graph file; thresholds are returned when a `t` line is present.
pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let p = parse_lines(text, false)?;
    let graph = Graph::from_edges(p.n, p.edges.iter().map(|&(_, u, v)| (u, v)))?;
    let tau = match p.tau_line {
        None => None,
        Some(ln) => {
            if p.tau.len() != p.n {
                return Err(WdmError::parse(
                    ln,
                    format!("{} thresholds for {} vertices", p.tau.len(), p.n),
                ));
            }
            Some(Thresholds::explicit(&graph, p.tau).map_err(|e| WdmError::parse(ln, e.to_string()))?)
        }
    };
    Ok(GraphFile {
        name: p.name,
        provenance: p.provenance,
        graph,
        tau,
    })
}

fn emit_comments(out: &mut String, name: Option<&str>, provenance: Option<&str>) {
    if let Some(n) = name {
        out.push_str(&format!("# name: {n}\n"));
    }
    if let Some(p) = provenance {
        out.push_str(&format!("# provenance: {p}\n"));
    }
}

/// Canonical text: comments, header, edges in lexicographic order, one `t`
/// line.
pub fn emit_graph(f: &GraphFile) -> String {
    let mut out = String::new();
    emit_comments(&mut out, f.name.as_deref(), f.provenance.as_deref());
    out.push_str(&format!("{} {}\n", f.graph.n(), f.graph.m()));
    for (u, v) in f.graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    if let Some(tau) = &f.tau {
        out.push('t');
        for t in tau.as_slice() {
            out.push_str(&format!(" {t}"));
        }
        out.push('\n');
    }
    out
}

/// Parses a MINREP file.
pub fn parse_minrep(text: &str) -> Result<MinRepInstance> {
    let p = parse_lines(text, true)?;
    if let Some(ln) = p.tau_line {
        return Err(WdmError::parse(ln, "MINREP files carry no thresholds"));
    }
    let last = text.lines().count().max(1);
    let collect = |side: char| -> Result<Vec<Vec<usize>>> {
        let mut groups: Vec<(usize, usize, Vec<usize>)> = p
            .groups
            .iter()
            .filter(|g| g.1 == side)
            .map(|g| (g.2, g.0, g.3.clone()))
            .collect();
        groups.sort_unstable();
        for (expect, g) in groups.iter().enumerate() {
            if g.0 != expect {
                return Err(WdmError::parse(
                    g.1,
                    format!("{side} group indices must be 0, 1, ... without gaps"),
                ));
            }
        }
        Ok(groups.into_iter().map(|g| g.2).collect())
    };
    let a_groups = collect('A')?;
    let b_groups = collect('B')?;
    let a_count: usize = a_groups.iter().map(Vec::len).sum();
    let in_a = |x: usize| x < a_count;
    if let Some(g) = p
        .groups
        .iter()
        .find(|g| g.3.iter().any(|&x| in_a(x) != (g.1 == 'A')))
    {
        return Err(WdmError::parse(
            g.0,
            format!("ids 0..{a_count} belong to A and the rest to B"),
        ));
    }
    let mut edges = Vec::with_capacity(p.edges.len());
    for &(ln, u, v) in &p.edges {
        let (a, b) = match (in_a(u), in_a(v)) {
            (true, false) => (u, v),
            (false, true) => (v, u),
            _ => return Err(WdmError::parse(ln, format!("edge ({u}, {v}) does not join A and B"))),
        };
        edges.push((a, b - a_count));
    }
    let b_count = p.n.saturating_sub(a_count);
    let b_groups = b_groups
        .into_iter()
        .map(|g| g.into_iter().map(|x| x - a_count).collect())
        .collect();
    MinRepInstance::new(a_count, b_count, edges, a_groups, b_groups)
        .map_err(|e| WdmError::parse(last, e.to_string()))
}

pub fn emit_minrep(inst: &MinRepInstance) -> String {
    let a = inst.a_count();
    let mut out = format!("{} {}\n", inst.n(), inst.edges().len());
    for &(x, y) in inst.edges() {
        out.push_str(&format!("{x} {}\n", a + y));
    }
    for (i, g) in inst.a_groups().iter().enumerate() {
        let ids: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("A {i} {}\n", ids.join(" ")));
    }
    for (j, g) in inst.b_groups().iter().enumerate() {
        let ids: Vec<String> = g.iter().map(|y| (a + y).to_string()).collect();
        out.push_str(&format!("B {j} {}\n", ids.join(" ")));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    #[serde(flatten)]
    certificate: Certificate,
    verified: bool,
}

/// Deterministic JSON for a certificate that verifies on `(g, tau)`.
/// Keys are sorted; a certificate that fails verification is refused.
pub fn emit_certificate(g: &Graph, tau: &Thresholds, cert: &Certificate) -> Result<String> {
    cert.verify(g, tau)
        .map_err(|e| WdmError::Precondition(format!("refusing to emit an unverified certificate: {e}")))?;
    let doc = CertificateDoc {
        certificate: cert.clone(),
        verified: true,
    };
    // serde_json's Value keeps object keys in a BTreeMap, hence sorted
    let value = serde_json::to_value(&doc).map_err(|e| WdmError::param(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| WdmError::param(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Reads a certificate and re-verifies it on `(g, tau)`.
pub fn load_certificate(text: &str, g: &Graph, tau: &Thresholds) -> Result<Certificate> {
    let doc: CertificateDoc = serde_json::from_str(text).map_err(|e| WdmError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    doc.certificate
        .verify(g, tau)
        .map_err(|e| WdmError::Precondition(format!("certificate does not verify: {e}")))?;
    Ok(doc.certificate)
}

/// Graph file followed by its certificate.
pub fn emit_bundle(f: &GraphFile, cert: &Certificate) -> Result<String> {
    let tau = f
        .tau
        .as_ref()
        .ok_or_else(|| WdmError::param("a bundle needs thresholds"))?;
    let mut out = emit_graph(f);
    out.push_str(BUNDLE_SEPARATOR);
    out.push('\n');
    out.push_str(&emit_certificate(&f.graph, tau, cert)?);
    Ok(out)
}

/// Splits a bundle into the graph part and the raw certificate text, with
/// the line number the certificate starts on.
pub fn split_bundle(text: &str) -> Option<(&str, &str, usize)> {
    let mut offset = 0;
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        if line.trim_end() == BUNDLE_SEPARATOR {
            return Some((&text[..offset], &text[offset + line.len()..], idx + 2));
        }
        offset += line.len();
    }
    None
}

/// Parses a bundle and re-verifies its certificate.
pub fn parse_bundle(text: &str) -> Result<(GraphFile, Certificate)> {
    let (graph_text, cert_text, start) = split_bundle(text).ok_or_else(|| {
        WdmError::parse(text.lines().count().max(1), format!("missing \"{BUNDLE_SEPARATOR}\" line"))
    })?;
    let f = parse_graph(graph_text)?;
    let tau = f
        .tau
        .as_ref()
        .ok_or_else(|| WdmError::parse(1, "bundle graph has no thresholds"))?;
    let cert = load_certificate(cert_text, &f.graph, tau).map_err(|e| match e {
        WdmError::Parse { line, message } => WdmError::Parse {
            line: line + start - 1,
            message,
        },
        other => other,
    })?;
    Ok((f, cert))
}
