//! Run configuration: `key = value` lines with `#` comments.
//!
//! ```text
//! problem = system          # system | equation | finite_system | finite_equation
//! m1 = 1
//! m2 = 1
//! p = 2
//! q = 2
//! gamma1 = 1.5
//! gamma2 = 1.5
//! alpha = 2
//! beta = 2
//! lambda1 = 1/20
//! lambda2 = 1/20
//! embedding = brute_force   # explicit | brute_force | supplied
//! ```
//!
//! Numbers may be written as fractions `a/b`; the exact hypothesis check
//! reads them as rationals.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use polylap_core::analysis::BruteForceOptions;
use polylap_core::functionals::{EquationParams, SystemParams};
use polylap_core::solvers::SolveConfig;
use polylap_core::DirichletDomain;

use crate::error::{read, CliError, Result};
use crate::graph_file::GraphFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    System,
    Equation,
    FiniteSystem,
    FiniteEquation,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::System => "system",
            ProblemKind::Equation => "equation",
            ProblemKind::FiniteSystem => "finite_system",
            ProblemKind::FiniteEquation => "finite_equation",
        }
    }

    pub fn is_system(&self) -> bool {
        matches!(self, ProblemKind::System | ProblemKind::FiniteSystem)
    }

    /// Posed on the whole graph with a potential and no boundary.
    pub fn is_finite(&self) -> bool {
        matches!(self, ProblemKind::FiniteSystem | ProblemKind::FiniteEquation)
    }

    fn required(&self) -> &'static [&'static str] {
        if self.is_system() {
            &["m1", "m2", "p", "q", "gamma1", "gamma2", "alpha", "beta", "lambda1", "lambda2"]
        } else {
            &["m", "p", "gamma", "alpha", "lambda"]
        }
    }

    fn optional(&self) -> &'static [&'static str] {
        if self.is_system() {
            &["cp", "cq", "h1_pow", "h2_pow", "c0"]
        } else {
            &["constant"]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingSource {
    /// The closed-form constant (or the whole-graph one for finite kinds).
    Explicit,
    BruteForce,
    /// `cp`, `cq` (systems) or `constant` (equations) from the file.
    Supplied,
}

const COMMON: [&str; 17] = [
    "problem",
    "embedding",
    "rho",
    "verify_tol",
    "grad_tol",
    "max_iters",
    "path_points",
    "starts",
    "seed",
    "step_init",
    "backtrack_factor",
    "armijo_c",
    "newton_switch",
    "newton_iters",
    "bf_starts",
    "bf_max_iters",
    "bf_tol",
];

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: ProblemKind,
    pub embedding: EmbeddingSource,
    pub solve: SolveConfig,
    pub brute_force: BruteForceOptions,
    pub verify_tol: f64,
    /// Overrides the radius derived from the hypotheses.
    pub rho: Option<f64>,
    entries: BTreeMap<String, String>,
}

/// `a/b` or a plain decimal.
pub fn parse_number(s: &str) -> Option<f64> {
    let x = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?,
        None => s.parse::<f64>().ok()?,
    };
    x.is_finite().then_some(x)
}

/// Exact value of `a/b`, an integer or a terminating decimal; other forms
/// (exponents) go through the nearest binary64.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.contains('/') {
        return BigRational::from_str(s).ok();
    }
    if s.contains(['e', 'E']) {
        return BigRational::from_float(s.parse::<f64>().ok()?);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("{int}{frac}")).ok()?;
    let r = BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32));
    Some(if neg { -r } else { r })
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, file: &str) -> Result<Self> {
        let err = |line: usize, msg: String| CliError::Parse { file: file.into(), line, msg };
        let mut entries = BTreeMap::new();
        let mut lines = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(err(i + 1, "expected `key = value`".into()));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(err(i + 1, "expected `key = value`".into()));
            }
            if let Some(first) = lines.insert(k.to_string(), i + 1) {
                return Err(err(i + 1, format!("`{k}` already set on line {first}")));
            }
            entries.insert(k.to_string(), v.to_string());
        }

        let kind = match entries.get("problem").map(String::as_str) {
            Some("system") => ProblemKind::System,
            Some("equation") => ProblemKind::Equation,
            Some("finite_system") => ProblemKind::FiniteSystem,
            Some("finite_equation") => ProblemKind::FiniteEquation,
            Some(other) => return Err(CliError::Config(format!("unknown problem `{other}`"))),
            None => return Err(CliError::Config("missing key `problem`".into())),
        };
        for k in entries.keys() {
            let known = COMMON.contains(&k.as_str())
                || kind.required().contains(&k.as_str())
                || kind.optional().contains(&k.as_str());
            if !known {
                return Err(err(lines[k], format!("unknown key `{k}` for problem = {}", kind.as_str())));
            }
        }
        for k in kind.required() {
            if !entries.contains_key(*k) {
                return Err(CliError::Config(format!("missing key `{k}` for problem = {}", kind.as_str())));
            }
        }
        let embedding = match entries.get("embedding").map(String::as_str) {
            None | Some("brute_force") => EmbeddingSource::BruteForce,
            Some("explicit") => EmbeddingSource::Explicit,
            Some("supplied") => EmbeddingSource::Supplied,
            Some(other) => return Err(CliError::Config(format!("unknown embedding `{other}`"))),
        };
        if embedding == EmbeddingSource::Supplied {
            let keys: &[&str] = if kind.is_system() { &["cp", "cq"] } else { &["constant"] };
            for k in keys {
                if !entries.contains_key(*k) {
                    return Err(CliError::Config(format!("embedding = supplied needs `{k}`")));
                }
            }
        }

        let mut cfg = RunConfig {
            kind,
            embedding,
            solve: SolveConfig::default(),
            brute_force: BruteForceOptions::default(),
            verify_tol: 1e-7,
            rho: None,
            entries,
        };
        for k in cfg.entries.keys() {
            if k != "problem" && k != "embedding" {
                cfg.number(k)?;
            }
        }
        for k in ["m", "m1", "m2"] {
            if cfg.entries.contains_key(k) && integer::<u32>(&cfg.entries, k)? == 0 {
                return Err(CliError::Config(format!("`{k}` must be positive")));
            }
        }
        let s = &mut cfg.solve;
        macro_rules! set {
            ($target:expr, $key:literal, f64) => {
                if let Some(x) = cfg.entries.get($key) {
                    $target = parse_number(x).unwrap();
                }
            };
            ($target:expr, $key:literal, int) => {
                if cfg.entries.contains_key($key) {
                    $target = integer(&cfg.entries, $key)?;
                }
            };
        }
        set!(s.grad_tol, "grad_tol", f64);
        set!(s.max_iters, "max_iters", int);
        set!(s.path_points, "path_points", int);
        set!(s.starts, "starts", int);
        set!(s.seed, "seed", int);
        set!(s.step_init, "step_init", f64);
        set!(s.backtrack_factor, "backtrack_factor", f64);
        set!(s.armijo_c, "armijo_c", f64);
        set!(s.newton_switch, "newton_switch", f64);
        set!(s.newton_iters, "newton_iters", int);
        let b = &mut cfg.brute_force;
        set!(b.starts, "bf_starts", int);
        set!(b.max_iters, "bf_max_iters", int);
        set!(b.tol, "bf_tol", f64);
        set!(cfg.verify_tol, "verify_tol", f64);
        if let Some(x) = cfg.entries.get("rho") {
            cfg.rho = parse_number(x);
        }
        cfg.solve.validate()?;
        if !(cfg.verify_tol >= 0.0) {
            return Err(CliError::Config("verify_tol must be nonnegative".into()));
        }
        if cfg.rho.is_some_and(|r| !(r > 0.0)) {
            return Err(CliError::Config("rho must be positive".into()));
        }
        Ok(cfg)
    }

    /// Raw text of a key.
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn number(&self, key: &str) -> Result<f64> {
        let raw = self.raw(key).ok_or_else(|| CliError::Config(format!("missing key `{key}`")))?;
        parse_number(raw).ok_or_else(|| CliError::Config(format!("`{key}`: not a number: `{raw}`")))
    }

    /// Optional numeric key.
    pub fn get(&self, key: &str) -> Option<f64> {
        self.raw(key).and_then(parse_number)
    }

    /// Exact value of a numeric key.
    pub fn rational(&self, key: &str) -> Result<BigRational> {
        let raw = self.raw(key).ok_or_else(|| CliError::Config(format!("missing key `{key}`")))?;
        parse_rational(raw).ok_or_else(|| CliError::Config(format!("`{key}`: not a rational: `{raw}`")))
    }

    /// Integer value of a numeric key.
    pub fn integer(&self, key: &str) -> Result<u32> {
        integer(&self.entries, key)
    }

    /// The domain the problem lives on.
    pub fn domain(&self, graph: &GraphFile) -> Result<DirichletDomain> {
        if self.kind.is_finite() {
            graph.whole_domain()
        } else {
            graph.domain()
        }
    }

    pub fn system_params(&self, graph: &GraphFile, domain: &DirichletDomain) -> Result<SystemParams> {
        if !self.kind.is_system() {
            return Err(CliError::Usage(format!("mode requires system, config has problem = {}", self.kind.as_str())));
        }
        let n = |k: &str| self.number(k);
        let prm = SystemParams {
            m1: self.integer("m1")?,
            m2: self.integer("m2")?,
            p: n("p")?,
            q: n("q")?,
            gamma1: n("gamma1")?,
            gamma2: n("gamma2")?,
            alpha: n("alpha")?,
            beta: n("beta")?,
            lambda1: n("lambda1")?,
            lambda2: n("lambda2")?,
            h1: graph.coefficient("h1", domain),
            h2: graph.coefficient("h2", domain),
            c: graph.coefficient("c", domain),
            potentials: self.kind.is_finite().then(|| (graph.coefficient("a", domain), graph.coefficient("b", domain))),
        };
        prm.validate(domain)?;
        Ok(prm)
    }

    pub fn equation_params(&self, graph: &GraphFile, domain: &DirichletDomain) -> Result<EquationParams> {
        if self.kind.is_system() {
            return Err(CliError::Usage(format!(
                "mode requires equation, config has problem = {}",
                self.kind.as_str()
            )));
        }
        let prm = EquationParams {
            m: self.integer("m")?,
            p: self.number("p")?,
            gamma: self.number("gamma")?,
            alpha: self.number("alpha")?,
            lambda: self.number("lambda")?,
            h: graph.coefficient("h", domain),
            c: graph.coefficient("c", domain),
            potential: self.kind.is_finite().then(|| graph.coefficient("a", domain)),
        };
        prm.validate(domain)?;
        Ok(prm)
    }
}

fn integer<T: TryFrom<u64>>(entries: &BTreeMap<String, String>, key: &str) -> Result<T> {
    let raw = entries.get(key).ok_or_else(|| CliError::Config(format!("missing key `{key}`")))?;
    raw.parse::<u64>()
        .ok()
        .and_then(|x| T::try_from(x).ok())
        .ok_or_else(|| CliError::Config(format!("`{key}` must be a nonnegative integer, got `{raw}`")))
}
