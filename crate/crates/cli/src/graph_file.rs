//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! vertex <id> <mu> <I|B>
//! edge <id_a> <id_b> <w>
//! func <name> <id> <value>
//! ```
//!
//! `func` names are `h1`, `h2`, `c` (system), `h`, `c` (equation) and the
//! potentials `a`, `b` of whole-graph problems. Missing values default to 1
//! on the interior; values at boundary vertices are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use polylap_core::{DirichletDomain, GraphBuilder, WeightedGraph};

use crate::error::{read, CliError, Result};

pub const FUNCTION_NAMES: [&str; 6] = ["h1", "h2", "c", "h", "a", "b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub id: String,
    pub mu: f64,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub w: f64,
}

/// A parsed graph file. Vertices are kept sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    /// `name → id → value`.
    pub funcs: BTreeMap<String, BTreeMap<String, f64>>,
    pub graph: WeightedGraph,
}

fn number(file: &str, line: usize, what: &str, s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::Parse { file: file.into(), line, msg: format!("invalid {what} `{s}`") }),
    }
}

impl GraphFile {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?, &path.display().to_string())
    }

    /// Parses `text`; `file` labels error messages.
    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let err = |line: usize, msg: String| CliError::Parse { file: file.into(), line, msg };
        let mut vertices: BTreeMap<String, (f64, Tag, usize)> = BTreeMap::new();
        let mut edges: BTreeMap<(String, String), (f64, usize)> = BTreeMap::new();
        let mut edge_order = Vec::new();
        let mut funcs: BTreeMap<String, BTreeMap<String, (f64, usize)>> = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            match f[0] {
                "vertex" => {
                    let [_, id, mu, tag] = f[..] else {
                        return Err(err(n, "expected `vertex <id> <mu> <I|B>`".into()));
                    };
                    let mu = number(file, n, "measure", mu)?;
                    let tag = match tag {
                        "I" => Tag::Interior,
                        "B" => Tag::Boundary,
                        t => return Err(err(n, format!("vertex tag must be I or B, got `{t}`"))),
                    };
                    if let Some((_, _, first)) = vertices.insert(id.into(), (mu, tag, n)) {
                        return Err(err(n, format!("vertex `{id}` already declared on line {first}")));
                    }
                }
                "edge" => {
                    let [_, a, b, w] = f[..] else {
                        return Err(err(n, "expected `edge <id_a> <id_b> <w>`".into()));
                    };
                    let w = number(file, n, "weight", w)?;
                    if a == b {
                        return Err(err(n, format!("self-loop at `{a}`")));
                    }
                    let key = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
                    if let Some(&(w0, first)) = edges.get(&key) {
                        let msg = if w0 != w {
                            format!("asymmetric weight on edge `{a}`-`{b}`: {w0} on line {first} vs {w}")
                        } else {
                            format!("edge `{a}`-`{b}` already declared on line {first}")
                        };
                        return Err(err(n, msg));
                    }
                    edges.insert(key, (w, n));
                    edge_order.push((a.to_string(), b.to_string(), w, n));
                }
                "func" => {
                    let [_, name, id, value] = f[..] else {
                        return Err(err(n, "expected `func <name> <id> <value>`".into()));
                    };
                    if !FUNCTION_NAMES.contains(&name) {
                        return Err(err(n, format!("unknown function `{name}` (expected one of {FUNCTION_NAMES:?})")));
                    }
                    let value = number(file, n, "function value", value)?;
                    let table = funcs.entry(name.into()).or_default();
                    if let Some((_, first)) = table.insert(id.into(), (value, n)) {
                        return Err(err(n, format!("`{name}` at `{id}` already given on line {first}")));
                    }
                }
                other => return Err(err(n, format!("unknown record `{other}`"))),
            }
        }

        for (a, b, _, n) in &edge_order {
            for id in [a, b] {
                if !vertices.contains_key(id) {
                    return Err(err(*n, format!("edge refers to undeclared vertex `{id}`")));
                }
            }
        }
        for table in funcs.values() {
            for (id, (_, n)) in table {
                if !vertices.contains_key(id) {
                    return Err(err(*n, format!("function refers to undeclared vertex `{id}`")));
                }
            }
        }

        let mut b = GraphBuilder::new();
        for (id, (mu, _, _)) in &vertices {
            b.vertex(id.clone(), *mu);
        }
        for (x, y, w, _) in &edge_order {
            b.edge(x.clone(), y.clone(), *w);
        }
        let graph = b.build()?;
        Ok(Self {
            vertices: vertices.into_iter().map(|(id, (mu, tag, _))| VertexRecord { id, mu, tag }).collect(),
            edges: edge_order.into_iter().map(|(a, b, w, _)| EdgeRecord { a, b, w }).collect(),
            funcs: funcs.into_iter().map(|(k, t)| (k, t.into_iter().map(|(id, (v, _))| (id, v)).collect())).collect(),
            graph,
        })
    }

    fn ids(&self, tag: Tag) -> Vec<&str> {
        self.vertices.iter().filter(|v| v.tag == tag).map(|v| v.id.as_str()).collect()
    }

    /// The Dirichlet domain `Ω = {I}`, `∂Ω = {B}`.
    pub fn domain(&self) -> Result<DirichletDomain> {
        Ok(DirichletDomain::new(&self.graph, &self.ids(Tag::Interior), &self.ids(Tag::Boundary))?)
    }

    /// The whole vertex set with an empty boundary; every vertex must be
    /// tagged `I`.
    pub fn whole_domain(&self) -> Result<DirichletDomain> {
        if let Some(v) = self.vertices.iter().find(|v| v.tag == Tag::Boundary) {
            return Err(CliError::Usage(format!(
                "whole-graph problems need every vertex tagged I, `{}` is tagged B",
                v.id
            )));
        }
        Ok(DirichletDomain::whole_graph(&self.graph)?)
    }

    /// Values of `name` on the interior of `domain`, defaulting to 1.
    pub fn coefficient(&self, name: &str, domain: &DirichletDomain) -> Vec<f64> {
        let table = self.funcs.get(name);
        (0..domain.n_interior()).map(|x| table.and_then(|t| t.get(domain.id(x))).copied().unwrap_or(1.0)).collect()
    }

    /// Canonical text form; parsing it gives back an equal value.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let tag = if v.tag == Tag::Interior { "I" } else { "B" };
            let _ = writeln!(s, "vertex {} {:?} {tag}", v.id, v.mu);
        }
        for e in &self.edges {
            let _ = writeln!(s, "edge {} {} {:?}", e.a, e.b, e.w);
        }
        for (name, table) in &self.funcs {
            for (id, v) in table {
                let _ = writeln!(s, "func {name} {id} {v:?}");
            }
        }
        s
    }
}
