//! Solution files.
//!
//! ```text
//! value <id> <u> [<v>]      # one line per vertex of Ω ∪ ∂Ω
//! energy = <x>
//! grad_norm = <x>
//! classification = <label>
//! seed = <n>
//! ```
//!
//! Values use 17 significant digits so a file read back reproduces the
//! solution bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use polylap_core::solvers::{Solution, SolveReport};
use polylap_core::{DirichletDomain, GraphFunction};

use crate::error::{read, CliError, Result};
use crate::report::num;

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFile {
    pub ids: Vec<String>,
    pub u: Vec<f64>,
    /// Second component of a system solution.
    pub v: Option<Vec<f64>>,
    pub meta: BTreeMap<String, String>,
}

/// Serializes a solver report for `domain`, with `mode` as extra metadata.
pub fn render(domain: &DirichletDomain, rep: &SolveReport, mode: &str) -> String {
    let mut s = String::new();
    let (u, v) = (rep.solution.u(), rep.solution.v());
    for x in 0..domain.len() {
        let _ = write!(s, "value {} {}", domain.id(x), num(u.get(x)));
        if let Some(v) = v {
            let _ = write!(s, " {}", num(v.get(x)));
        }
        s.push('\n');
    }
    let _ = writeln!(s, "mode = {mode}");
    let _ = writeln!(s, "energy = {}", num(rep.energy));
    let _ = writeln!(s, "grad_norm = {}", num(rep.grad_norm));
    let _ = writeln!(s, "classification = {}", rep.classification.as_str());
    let _ = writeln!(s, "converged = {}", rep.converged);
    let _ = writeln!(s, "start = {}", rep.start);
    let _ = writeln!(s, "seed = {}", rep.seed);
    s
}

impl SolutionFile {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let err = |line: usize, msg: String| CliError::Parse { file: file.into(), line, msg };
        let mut ids = Vec::new();
        let mut u = Vec::new();
        let mut v = Vec::new();
        let mut width = None;
        let mut meta = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("value ") {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if !(f.len() == 2 || f.len() == 3) {
                    return Err(err(n, "expected `value <id> <u> [<v>]`".into()));
                }
                if *width.get_or_insert(f.len()) != f.len() {
                    return Err(err(n, "every value line needs the same number of components".into()));
                }
                let parse = |s: &str| match s.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(x),
                    _ => Err(err(n, format!("invalid value `{s}`"))),
                };
                ids.push(f[0].to_string());
                u.push(parse(f[1])?);
                if f.len() == 3 {
                    v.push(parse(f[2])?);
                }
            } else if let Some((k, val)) = line.split_once('=') {
                meta.insert(k.trim().to_string(), val.trim().to_string());
            } else {
                return Err(err(n, format!("unrecognized line `{line}`")));
            }
        }
        if ids.is_empty() {
            return Err(err(0, "no value lines".into()));
        }
        let v = (width == Some(3)).then_some(v);
        Ok(Self { ids, u, v, meta })
    }

    /// Matches the file against `domain` vertex by vertex.
    pub fn to_solution(&self, domain: &DirichletDomain) -> Result<Solution> {
        let mut pos = BTreeMap::new();
        for (i, id) in self.ids.iter().enumerate() {
            if pos.insert(id.as_str(), i).is_some() {
                return Err(CliError::Usage(format!("vertex `{id}` listed twice in the solution file")));
            }
        }
        if let Some(extra) = self.ids.iter().find(|id| domain.local_of(id).is_none()) {
            return Err(CliError::Usage(format!("vertex mismatch: `{extra}` is not in the domain")));
        }
        let pick = |vals: &[f64]| -> Result<GraphFunction> {
            let mut out = Vec::with_capacity(domain.len());
            for x in 0..domain.len() {
                let id = domain.id(x);
                let i = pos.get(id).ok_or_else(|| {
                    CliError::Usage(format!("vertex mismatch: `{id}` missing from the solution file"))
                })?;
                out.push(vals[*i]);
            }
            Ok(GraphFunction::new(domain, out)?)
        };
        let u = pick(&self.u)?;
        Ok(match &self.v {
            Some(v) => Solution::System { u, v: pick(v)? },
            None => Solution::Equation { u },
        })
    }
}
