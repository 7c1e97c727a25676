//! The five commands. Each returns an [`Outcome`]; errors become exit code 1
//! with the message on stderr.

use std::path::Path;

use num_rational::BigRational;
use polylap_core::analysis::{
    check_system_hypotheses, equation_thresholds, explicit_embedding_constant, finite_graph_constants, powered_norm,
    product_condition, BruteForceOptions, BruteForceResult, EmbeddingConstant, EmbeddingProblem, HypothesisReport,
};
use polylap_core::exact::{check_system_hypotheses_exact, ExactSystemData};
use polylap_core::functionals::{EquationParams, Side, SystemParams};
use polylap_core::solvers::{
    ground_state_start, merge_ground_state, merge_mountain_pass, mountain_pass_start, solve_negative,
    solve_semi_trivial, verify_solution, Problem, Solution, SolveConfig, SolveReport, Verification,
};
use polylap_core::DirichletDomain;
use rayon::prelude::*;

use crate::config::{EmbeddingSource, RunConfig};
use crate::error::{CliError, Result};
use crate::graph_file::{GraphFile, Tag};
use crate::report::{Format, Report};
use crate::solution_file::{self, SolutionFile};

/// Stable exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const HYPOTHESES: i32 = 2;
    pub const NONCONVERGENCE: i32 = 3;
    pub const VERIFICATION: i32 = 4;
}

/// Exit code and printed text of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, report: &Report, format: Format) -> Self {
        Self { code, stdout: report.render(format), stderr: String::new() }
    }

    fn from(r: Result<Outcome>) -> Self {
        r.unwrap_or_else(|e| Self { code: exit::USAGE, stdout: String::new(), stderr: format!("error: {e}\n") })
    }
}

/// Solver selection for `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Local minimizer of negative energy inside the ρ-ball.
    Negative,
    /// Positive-energy critical point by path deformation.
    MountainPass,
    /// Minimizer over the Nehari `𝒩+` set (equation problems).
    GroundState,
    /// System solution with `v = 0`.
    SemiTrivialU,
    /// System solution with `u = 0`.
    SemiTrivialV,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Negative => "negative",
            Mode::MountainPass => "mountain-pass",
            Mode::GroundState => "ground-state",
            Mode::SemiTrivialU => "semi-trivial-u",
            Mode::SemiTrivialV => "semi-trivial-v",
        }
    }
}

/// Runs `f(0..n)` on a pool of `jobs` threads, or serially. The order of
/// the results does not depend on the pool.
fn par_map<T, F>(n: usize, jobs: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match jobs {
        Some(k) if k > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {k} worker threads: {e}")))?;
            Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
        }
        _ => Ok((0..n).map(f).collect()),
    }
}

enum Params {
    System(SystemParams),
    Equation(EquationParams),
}

/// Graph, configuration, domain and parameters of one run.
struct Context {
    cfg: RunConfig,
    domain: DirichletDomain,
    params: Params,
    jobs: Option<usize>,
}

impl Context {
    fn load(graph: &Path, config: &Path, seed: Option<u64>, starts: Option<usize>) -> Result<Self> {
        let gf = GraphFile::load(graph)?;
        let mut cfg = RunConfig::load(config)?;
        if let Some(s) = seed {
            cfg.solve.seed = s;
        }
        if let Some(n) = starts {
            cfg.solve.starts = n;
        }
        cfg.solve.validate()?;
        let domain = cfg.domain(&gf)?;
        let params = if cfg.kind.is_system() {
            Params::System(cfg.system_params(&gf, &domain)?)
        } else {
            Params::Equation(cfg.equation_params(&gf, &domain)?)
        };
        Ok(Self { cfg, domain, params, jobs: None })
    }

    fn problem(&self) -> Problem<'_> {
        match &self.params {
            Params::System(p) => Problem::System(p),
            Params::Equation(p) => Problem::Equation(p),
        }
    }

    fn seed(&self) -> u64 {
        self.cfg.solve.seed
    }

    fn brute_force(&self) -> BruteForceOptions {
        BruteForceOptions { seed: self.seed(), ..self.cfg.brute_force }
    }

    /// Embedding constant of `W^{m,s}` named `key` in the config when
    /// supplied.
    fn constant(&self, key: &str, m: u32, s: f64, potential: Option<&[f64]>) -> Result<EmbeddingConstant> {
        match self.cfg.embedding {
            EmbeddingSource::Supplied => {
                let value = self.cfg.get(key).ok_or_else(|| CliError::Config(format!("missing `{key}`")))?;
                Ok(EmbeddingConstant::supplied(value, m, s, None)?)
            }
            EmbeddingSource::Explicit => match potential {
                Some(a) => Ok(finite_graph_constants(&self.domain, a, s)?),
                None if m != 1 => Err(CliError::Usage(format!(
                    "the explicit constant needs m = 1 (got m = {m}); use embedding = brute_force"
                ))),
                None => explicit_embedding_constant(&self.domain, s)
                    .map_err(|e| CliError::Usage(format!("{e}; use embedding = brute_force"))),
            },
            EmbeddingSource::BruteForce => {
                Ok(brute_force_uniform(&self.domain, m, s, potential, &self.brute_force(), self.jobs)?.constant)
            }
        }
    }

    /// `(C_p, C_q)` of a system problem.
    fn system_constants(&self, prm: &SystemParams) -> Result<(EmbeddingConstant, EmbeddingConstant)> {
        let (a, b) = match &prm.potentials {
            Some((a, b)) => (Some(a.as_slice()), Some(b.as_slice())),
            None => (None, None),
        };
        let cp = self.constant("cp", prm.m1, prm.p, a)?;
        let same = self.cfg.embedding != EmbeddingSource::Supplied && prm.m1 == prm.m2 && prm.p == prm.q && a == b;
        let cq = if same { cp } else { self.constant("cq", prm.m2, prm.q, b)? };
        Ok((cp, cq))
    }

    fn side_constant(&self, prm: &SystemParams, side: Side) -> Result<EmbeddingConstant> {
        match side {
            Side::U => self.constant("cp", prm.m1, prm.p, prm.potentials.as_ref().map(|p| p.0.as_slice())),
            Side::V => self.constant("cq", prm.m2, prm.q, prm.potentials.as_ref().map(|p| p.1.as_slice())),
        }
    }

    fn equation_constant(&self, prm: &EquationParams) -> Result<EmbeddingConstant> {
        self.constant("constant", prm.m, prm.p, prm.potential.as_deref())
    }

    fn h_pows(&self, prm: &SystemParams) -> (f64, f64) {
        let h1 =
            self.cfg.get("h1_pow").unwrap_or_else(|| powered_norm(&self.domain, &prm.h1, prm.p / (prm.p - prm.gamma1)));
        let h2 =
            self.cfg.get("h2_pow").unwrap_or_else(|| powered_norm(&self.domain, &prm.h2, prm.q / (prm.q - prm.gamma2)));
        (h1, h2)
    }

    /// The four conditions, honoring the `h1_pow`, `h2_pow` and `c0`
    /// overrides.
    fn hypotheses(&self, prm: &SystemParams, cp: f64, cq: f64) -> HypothesisReport {
        let (h1, h2) = self.h_pows(prm);
        match self.cfg.get("c0") {
            Some(c0) => {
                let prm = SystemParams { c: vec![c0; prm.c.len()], ..prm.clone() };
                check_system_hypotheses(&prm, cp, cq, h1, h2)
            }
            None => check_system_hypotheses(prm, cp, cq, h1, h2),
        }
    }
}

/// Uniform brute-force constant with the starts spread over `jobs` threads.
fn brute_force_uniform(
    domain: &DirichletDomain,
    m: u32,
    s: f64,
    potential: Option<&[f64]>,
    opts: &BruteForceOptions,
    jobs: Option<usize>,
) -> Result<BruteForceResult> {
    let run = |r: f64| -> Result<BruteForceResult> {
        let problem = EmbeddingProblem { domain, m, s, r, potential };
        let starts = par_map(problem.start_count(opts), jobs, |i| problem.run_start(opts, i))?
            .into_iter()
            .collect::<polylap_core::Result<Vec<_>>>()?;
        Ok(problem.merge(&starts)?)
    };
    let one = run(1.0)?;
    let inf = run(f64::INFINITY)?;
    let mut best = if inf.constant.value > one.constant.value { inf } else { one };
    best.constant.r = None;
    Ok(best)
}

fn constant_lines(r: &mut Report, key: &str, c: &EmbeddingConstant) {
    r.num(key, c.value).text(&format!("{key}_source"), c.source.as_str());
}

fn hypothesis_lines(r: &mut Report, h: &HypothesisReport) {
    r.num("m_lambda", h.m_lambda)
        .num("m2", h.m2)
        .num("lhs", h.lhs)
        .num("rhs", h.rhs)
        .num("rho", h.rho)
        .num("max_pq", h.max_pq)
        .num("alpha_beta", h.alpha_beta)
        .text("cond1", h.cond1)
        .text("cond2", h.cond2)
        .text("cond3", h.cond3)
        .text("cond4", h.cond4)
        .text("all_hold", h.all_hold());
}

fn rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// ----------------------------------------------------------------------

/// `check-graph`: vertex, edge and domain statistics.
pub fn check_graph(graph: &Path, format: Format) -> Outcome {
    Outcome::from(check_graph_inner(graph, format))
}

fn check_graph_inner(path: &Path, format: Format) -> Result<Outcome> {
    let gf = GraphFile::load(path)?;
    let domain = gf.domain()?;
    for (name, table) in &gf.funcs {
        for (id, v) in table {
            let interior = domain.local_of(id).is_some_and(|x| domain.is_interior(x));
            if interior && !(*v > 0.0) {
                return Err(CliError::Usage(format!("coefficient `{name}` must be positive, got {v} at `{id}`")));
            }
        }
    }
    let mut r = Report::new();
    r.text("vertices", gf.vertices.len())
        .text("edges", gf.edges.len())
        .text("interior_vertices", domain.n_interior())
        .text("boundary_vertices", domain.n_boundary())
        .num("omega_measure", domain.omega_measure())
        .num("mu0", gf.graph.mu0())
        .num("mu_min_interior", domain.mu_min_interior())
        .num("mu_max", domain.mu_max())
        .num("w_min", domain.w_min())
        .text("boundary_adjacency", domain.boundary_adjacency())
        .text("closed", domain.is_closed())
        .text(
            "functions",
            match gf.funcs.keys().cloned().collect::<Vec<_>>().join(",") {
                names if names.is_empty() => "none".to_string(),
                names => names,
            },
        );
    for v in &gf.vertices {
        let tag = if v.tag == Tag::Interior { "I" } else { "B" };
        r.detail(
            "vertex",
            format!("{} {} {tag} degree {}", v.id, v.mu, gf.graph.degree(gf.graph.index_of(&v.id).unwrap())),
        );
    }
    Ok(Outcome::new(exit::SUCCESS, &r, format))
}

// ----------------------------------------------------------------------

/// `check-hypotheses`: constants and verdicts for systems, thresholds for
/// equations. Exit 2 when a condition fails.
pub fn check_hypotheses(graph: &Path, config: &Path, exact: bool, format: Format) -> Outcome {
    Outcome::from(check_hypotheses_inner(graph, config, exact, format))
}

fn check_hypotheses_inner(graph: &Path, config: &Path, exact: bool, format: Format) -> Result<Outcome> {
    let ctx = Context::load(graph, config, None, None)?;
    let mut r = Report::new();
    r.text("problem", ctx.cfg.kind.as_str()).text("seed", ctx.seed());
    let holds = match &ctx.params {
        Params::System(prm) => {
            let (cp, cq) = ctx.system_constants(prm)?;
            constant_lines(&mut r, "cp", &cp);
            constant_lines(&mut r, "cq", &cq);
            if exact {
                let rep = check_system_hypotheses_exact(&exact_data(&ctx, prm, cp.value, cq.value)?)?;
                r.text("arithmetic", "exact")
                    .text("m_lambda", rational(&rep.m_lambda))
                    .text("m2", rational(&rep.m2))
                    .text("lhs", rational(&rep.lhs))
                    .text("rhs", rational(&rep.rhs))
                    .text("rho", rep.rho.as_ref().map_or_else(|| "irrational".into(), rational))
                    .text("cond1", rep.cond1)
                    .text("cond2", rep.cond2)
                    .text("cond3", rep.cond3)
                    .text("cond4", rep.cond4)
                    .text("all_hold", rep.all_hold());
                rep.all_hold()
            } else {
                let (h1, h2) = ctx.h_pows(prm);
                let h = ctx.hypotheses(prm, cp.value, cq.value);
                r.text("arithmetic", "float").num("h1_pow", h1).num("h2_pow", h2);
                hypothesis_lines(&mut r, &h);
                h.all_hold()
            }
        }
        Params::Equation(prm) => {
            if exact {
                return Err(CliError::Usage("--exact is available for system problems only".into()));
            }
            let c = ctx.equation_constant(prm)?;
            constant_lines(&mut r, "constant", &c);
            let th = equation_thresholds(prm, c.value)?;
            let pc = product_condition(prm, c.value)?;
            let holds = prm.lambda > 0.0 && prm.lambda < th.lambda_star_star;
            r.num("lambda", prm.lambda)
                .num("lambda0", th.lambda0)
                .num("lambda_star", th.lambda_star)
                .num("lambda_star_star", th.lambda_star_star)
                .num("product_lhs", pc.lhs)
                .num("product_rhs", pc.rhs)
                .text("product_holds", pc.holds)
                .text("all_hold", holds);
            holds
        }
    };
    Ok(Outcome::new(if holds { exit::SUCCESS } else { exit::HYPOTHESES }, &r, format))
}

fn exact_data(ctx: &Context, prm: &SystemParams, cp: f64, cq: f64) -> Result<ExactSystemData> {
    let int = |key: &str, x: f64| -> Result<u32> {
        if x.fract() == 0.0 && x > 0.0 && x < u32::MAX as f64 {
            Ok(x as u32)
        } else {
            Err(CliError::Usage(format!("--exact needs integer exponents, `{key}` = {x}")))
        }
    };
    let float =
        |x: f64| BigRational::from_float(x).ok_or_else(|| CliError::Usage(format!("--exact cannot represent {x}")));
    let keyed = |key: &str, fallback: f64| -> Result<BigRational> {
        if ctx.cfg.raw(key).is_some() {
            ctx.cfg.rational(key)
        } else {
            float(fallback)
        }
    };
    let (h1, h2) = ctx.h_pows(prm);
    Ok(ExactSystemData {
        p: int("p", prm.p)?,
        q: int("q", prm.q)?,
        gamma1: int("gamma1", prm.gamma1)?,
        gamma2: int("gamma2", prm.gamma2)?,
        alpha: int("alpha", prm.alpha)?,
        beta: int("beta", prm.beta)?,
        lambda1: ctx.cfg.rational("lambda1")?,
        lambda2: ctx.cfg.rational("lambda2")?,
        cp: keyed("cp", cp)?,
        cq: keyed("cq", cq)?,
        c0: keyed("c0", prm.c_max())?,
        h1_pow: keyed("h1_pow", h1)?,
        h2_pow: keyed("h2_pow", h2)?,
    })
}

// ----------------------------------------------------------------------

/// Arguments of `solve`.
#[derive(Debug, Clone)]
pub struct SolveArgs<'a> {
    pub graph: &'a Path,
    pub config: &'a Path,
    pub mode: Mode,
    pub out: &'a Path,
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub jobs: Option<usize>,
    pub format: Format,
}

/// `solve`: runs a solver, writes the solution file (also when the solver
/// did not converge) and verifies the result.
pub fn solve(args: &SolveArgs<'_>) -> Outcome {
    Outcome::from(solve_inner(args))
}

fn solve_inner(args: &SolveArgs<'_>) -> Result<Outcome> {
    let mut ctx = Context::load(args.graph, args.config, args.seed, args.starts)?;
    ctx.jobs = args.jobs;
    let mode = args.mode;
    match (&ctx.params, mode) {
        (Params::System(_), Mode::GroundState) => return Err(CliError::Usage("mode requires equation".into())),
        (Params::Equation(_), Mode::SemiTrivialU | Mode::SemiTrivialV) => {
            return Err(CliError::Usage("mode requires system".into()))
        }
        _ => {}
    }
    let cfg: SolveConfig = ctx.cfg.solve;
    let mut r = Report::new();
    r.text("mode", mode.as_str()).text("problem", ctx.cfg.kind.as_str()).text("seed", cfg.seed);

    let mut bound_constant = None;
    let rep = match (&ctx.params, mode) {
        (Params::System(prm), Mode::Negative | Mode::MountainPass) => {
            let (cp, cq) = ctx.system_constants(prm)?;
            let h = ctx.hypotheses(prm, cp.value, cq.value);
            constant_lines(&mut r, "cp", &cp);
            constant_lines(&mut r, "cq", &cq);
            r.text("hypotheses_hold", h.all_hold());
            let rho = match (ctx.cfg.rho, h.all_hold()) {
                (Some(rho), _) => {
                    r.text("rho_source", "config");
                    Some(rho)
                }
                (None, true) => {
                    r.text("rho_source", "hypotheses");
                    Some(h.rho)
                }
                (None, false) => None,
            };
            if !h.all_hold() {
                r.warn("theorem hypotheses unverified");
            }
            run_rho_solver(&ctx, mode, rho, &mut r)?
        }
        (Params::Equation(_), Mode::Negative | Mode::MountainPass) => {
            if ctx.cfg.rho.is_some() {
                r.text("rho_source", "config");
            }
            r.warn("theorem hypotheses unverified");
            run_rho_solver(&ctx, mode, ctx.cfg.rho, &mut r)?
        }
        (Params::Equation(prm), Mode::GroundState) => {
            let c = ctx.equation_constant(prm)?;
            let th = equation_thresholds(prm, c.value)?;
            constant_lines(&mut r, "constant", &c);
            r.num("lambda_star_star", th.lambda_star_star);
            if !(prm.lambda > 0.0 && prm.lambda < th.lambda_star_star) {
                r.warn("theorem hypotheses unverified");
            }
            let reports = par_map(cfg.starts, ctx.jobs, |i| ground_state_start(&ctx.domain, prm, &cfg, i))?;
            merge_ground_state(reports)?
        }
        (Params::System(prm), Mode::SemiTrivialU | Mode::SemiTrivialV) => {
            let side = if mode == Mode::SemiTrivialU { Side::U } else { Side::V };
            let c = ctx.side_constant(prm, side)?;
            constant_lines(&mut r, "constant", &c);
            bound_constant = Some(c.value);
            solve_semi_trivial(&ctx.domain, prm, side, &cfg)?
        }
        (Params::System(_), Mode::GroundState) => unreachable!(),
        (Params::Equation(_), Mode::SemiTrivialU | Mode::SemiTrivialV) => unreachable!(),
    };

    let text = solution_file::render(&ctx.domain, &rep, mode.as_str());
    std::fs::write(args.out, text).map_err(|source| CliError::Write { path: args.out.into(), source })?;
    let ver = verify_solution(&ctx.domain, &rep.solution, ctx.problem(), ctx.cfg.verify_tol, bound_constant)?;

    r.num("energy", rep.energy)
        .num("grad_norm", rep.grad_norm)
        .text("iterations", rep.iterations)
        .text("classification", rep.classification.as_str())
        .text("converged", rep.converged)
        .num("norm", rep.norm);
    if let Some(rho) = rep.rho {
        r.num("rho", rho).text("within_rho_ball", rep.within_rho_ball);
    }
    if let Some(n) = rep.nehari {
        r.text("nehari", n.tag.as_str());
    }
    if let Some(e) = rep.companion_energy {
        r.num("companion_energy", e);
    }
    r.text("start", rep.start);
    verification_lines(&mut r, &ver);
    r.text("out", args.out.display());
    let code = if !rep.converged {
        exit::NONCONVERGENCE
    } else if !ver.passed {
        exit::VERIFICATION
    } else {
        exit::SUCCESS
    };
    Ok(Outcome::new(code, &r, args.format))
}

/// Negative-energy or mountain-pass solve with radius `rho` (fallback 1).
fn run_rho_solver(ctx: &Context, mode: Mode, rho: Option<f64>, r: &mut Report) -> Result<SolveReport> {
    if rho.is_none() {
        r.warn("no radius available; using fallback rho = 1");
    }
    let cfg = ctx.cfg.solve;
    let problem = ctx.problem();
    Ok(match mode {
        Mode::Negative => solve_negative(&ctx.domain, problem, rho, &cfg)?,
        _ => {
            let reports = par_map(cfg.starts, ctx.jobs, |i| mountain_pass_start(&ctx.domain, problem, rho, &cfg, i))?;
            merge_mountain_pass(reports)?
        }
    })
}

fn verification_lines(r: &mut Report, v: &Verification) {
    r.num("weak_residual", v.weak_residual).num("max_pointwise_u", v.max_pointwise_u);
    if let Some(x) = v.max_pointwise_v {
        r.num("max_pointwise_v", x);
    }
    if let Some(n) = &v.nehari {
        r.text("nehari_class", n.tag.as_str()).num("g_prime", n.g_prime).num("g_double_prime", n.g_double_prime);
    }
    if v.trivial {
        r.warn("trivial solution (all components vanish)");
    }
    if let Some(side) = v.semi_trivial {
        r.text("semi_trivial", if side == Side::U { "u" } else { "v" });
    }
    if let Some(b) = &v.bound {
        r.num("semi_trivial_norm", b.norm).num("semi_trivial_bound", b.bound).text("semi_trivial_bound_holds", b.holds);
    }
    r.num("verify_tol", v.tol).text("verified", v.passed);
    for f in &v.failures {
        r.text("failing_vertex", format!("{} {} {}", f.vertex, side_name(f.component), crate::report::num(f.residual)));
    }
    for x in &v.residuals {
        r.detail("residual", format!("{} {} {}", x.vertex, side_name(x.component), crate::report::num(x.residual)));
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::U => "u",
        Side::V => "v",
    }
}

// ----------------------------------------------------------------------

/// `verify`: checks a solution file against a problem. Exit 4 with the
/// failing vertices listed when a residual exceeds `verify_tol`.
pub fn verify(graph: &Path, config: &Path, solution: &Path, format: Format) -> Outcome {
    Outcome::from(verify_inner(graph, config, solution, format))
}

fn verify_inner(graph: &Path, config: &Path, solution: &Path, format: Format) -> Result<Outcome> {
    let file = SolutionFile::load(solution)?;
    let seed = file.meta.get("seed").and_then(|s| s.parse::<u64>().ok());
    let ctx = Context::load(graph, config, seed, None)?;
    let sol = file.to_solution(&ctx.domain)?;
    let embedding = match (&sol, &ctx.params) {
        (Solution::System { u, v }, Params::System(prm)) => match (u.is_zero(), v.is_zero()) {
            (false, true) => Some(ctx.side_constant(prm, Side::U)?.value),
            (true, false) => Some(ctx.side_constant(prm, Side::V)?.value),
            _ => None,
        },
        (Solution::Equation { .. }, Params::Equation(_)) => None,
        (Solution::Equation { .. }, Params::System(_)) => {
            return Err(CliError::Usage("solution file has one component, the problem is a system".into()))
        }
        (Solution::System { .. }, Params::Equation(_)) => {
            return Err(CliError::Usage("solution file has two components, the problem is an equation".into()))
        }
    };
    let ver = verify_solution(&ctx.domain, &sol, ctx.problem(), ctx.cfg.verify_tol, embedding)?;
    let mut r = Report::new();
    r.text("problem", ctx.cfg.kind.as_str()).text("seed", ctx.seed());
    verification_lines(&mut r, &ver);
    Ok(Outcome::new(if ver.passed { exit::SUCCESS } else { exit::VERIFICATION }, &r, format))
}

// ----------------------------------------------------------------------

/// Arguments of `embedding`.
#[derive(Debug, Clone)]
pub struct EmbeddingArgs<'a> {
    pub graph: &'a Path,
    pub m: u32,
    pub s: f64,
    /// Target exponent; `None` asks for a constant valid for every `r`.
    pub r: Option<f64>,
    pub brute_force: bool,
    pub seed: u64,
    pub starts: Option<usize>,
    pub jobs: Option<usize>,
    pub format: Format,
}

/// `embedding`: the closed-form constant, or a brute-force one.
pub fn embedding(args: &EmbeddingArgs<'_>) -> Outcome {
    Outcome::from(embedding_inner(args))
}

fn embedding_inner(a: &EmbeddingArgs<'_>) -> Result<Outcome> {
    let gf = GraphFile::load(a.graph)?;
    let domain = gf.domain()?;
    let mut r = Report::new();
    r.text("m", a.m).num("s", a.s).text("seed", a.seed);
    if !a.brute_force {
        if a.m != 1 {
            return Err(CliError::Usage(format!(
                "the explicit constant needs m = 1 (got m = {}); rerun with --brute-force",
                a.m
            )));
        }
        let c = explicit_embedding_constant(&domain, a.s)
            .map_err(|e| CliError::Usage(format!("{e}; rerun with --brute-force")))?;
        r.text("r", "any");
        constant_lines(&mut r, "constant", &c);
        return Ok(Outcome::new(exit::SUCCESS, &r, a.format));
    }
    let mut opts = BruteForceOptions { seed: a.seed, ..Default::default() };
    if let Some(n) = a.starts {
        opts.starts = n;
    }
    let res = match a.r {
        Some(rr) => {
            let problem = EmbeddingProblem { domain: &domain, m: a.m, s: a.s, r: rr, potential: None };
            let starts = par_map(problem.start_count(&opts), a.jobs, |i| problem.run_start(&opts, i))?
                .into_iter()
                .collect::<polylap_core::Result<Vec<_>>>()?;
            problem.merge(&starts)?
        }
        None => brute_force_uniform(&domain, a.m, a.s, None, &opts, a.jobs)?,
    };
    r.text("r", res.constant.r.map_or_else(|| "any".into(), |x| x.to_string()));
    constant_lines(&mut r, "constant", &res.constant);
    r.text("converged", res.converged).text("starts", res.starts);
    for x in 0..domain.len() {
        r.detail("maximizer", format!("{} {}", domain.id(x), crate::report::num(res.maximizer.get(x))));
    }
    Ok(Outcome::new(exit::SUCCESS, &r, a.format))
}
