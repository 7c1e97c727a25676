use std::path::{Path, PathBuf};
use std::process::Command;

use polylap::commands::{self, EmbeddingArgs, Mode, SolveArgs};
use polylap::{exit, Format, Outcome};
use polylap_core::analysis::equation_thresholds;
use polylap_core::functionals::EquationParams;
use tempfile::TempDir;

const PATH: &str = "vertex x0 1 I\nvertex b0 1 B\nvertex b1 1 B\nedge b0 x0 1\nedge x0 b1 1\n";
const SINGLE: &str = "vertex x0 1 I\nvertex b 1 B\nedge x0 b 1\n";
const PATH2: &str =
    "vertex x1 1 I\nvertex x2 1 I\nvertex b0 1 B\nvertex b1 1 B\nedge b0 x1 1\nedge x1 x2 1\nedge x2 b1 1\n";

const SYSTEM: &str = "\
problem = system
m1 = 1
m2 = 1
p = 2
q = 2
gamma1 = 1.5
gamma2 = 1.5
alpha = 2
beta = 2
lambda1 = 0.05
lambda2 = 0.05
bf_starts = 12
";

const WORKED: &str = "\
problem = system
m1 = 1
m2 = 1
p = 4
q = 5
gamma1 = 2
gamma2 = 3
alpha = 2
beta = 4
lambda1 = 1/5
lambda2 = 1/6
embedding = supplied
cp = 1
cq = 1
c0 = 1/3
h1_pow = 15625/19327352832   # 5^6 / (9 2^31)
h2_pow = 15625/4294967296    # 5^6 / 2^32
";

fn equation(lambda: f64) -> String {
    format!("problem = equation\nm = 1\np = 2\ngamma = 1.5\nalpha = 4\nlambda = {lambda:?}\nbf_starts = 12\n")
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn solve(graph: &Path, config: &Path, mode: Mode, out: &Path) -> Outcome {
    commands::solve(&SolveArgs {
        graph,
        config,
        mode,
        out,
        seed: None,
        starts: None,
        jobs: None,
        format: Format::Summary,
    })
}

fn value(o: &Outcome, key: &str) -> String {
    let prefix = format!("{key} = ");
    o.stdout
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in\n{}", o.stdout))
        .to_string()
}

fn number(o: &Outcome, key: &str) -> f64 {
    value(o, key).parse().unwrap()
}

#[test]
fn check_graph_reports_domain() {
    let d = Dir::new();
    let o = commands::check_graph(&d.file("g", PATH), Format::Summary);
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert_eq!(number(&o, "omega_measure"), 1.0);
    assert_eq!(value(&o, "interior_vertices"), "1");
    assert_eq!(value(&o, "boundary_adjacency"), "true");
    assert_eq!(number(&o, "mu0"), 1.0);
    assert_eq!(number(&o, "w_min"), 1.0);
}

#[test]
fn check_graph_rejects_invalid_files() {
    let d = Dir::new();
    let o = commands::check_graph(&d.file("g", "vertex a 1 B\nvertex b 1 B\nedge a b 1\n"), Format::Summary);
    assert_eq!(o.code, exit::USAGE);
    assert!(o.stderr.contains("\u{3a9} must be nonempty"), "{}", o.stderr);
    let o = commands::check_graph(&d.file("h", &format!("{PATH}edge x0 b0 2\n")), Format::Summary);
    assert_eq!(o.code, exit::USAGE);
    assert!(o.stderr.contains("asymmetric"), "{}", o.stderr);
    let o = commands::check_graph(&d.file("k", &format!("{PATH}func c x0 -1\n")), Format::Summary);
    assert_eq!(o.code, exit::USAGE);
    let o = commands::check_graph(&d.path("missing"), Format::Summary);
    assert_eq!(o.code, exit::USAGE);
}

#[test]
fn worked_example_hypotheses_exact_and_float() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", WORKED);
    let o = commands::check_hypotheses(&g, &c, true, Format::Summary);
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert_eq!(value(&o, "m_lambda"), "1/96");
    assert_eq!(value(&o, "m2"), "1/18");
    assert_eq!(value(&o, "lhs"), "3125/25769803776");
    assert_eq!(value(&o, "rhs"), "3125/19327352832");
    assert_eq!(value(&o, "rho"), "5/32");
    assert_eq!(value(&o, "all_hold"), "true");
    let o = commands::check_hypotheses(&g, &c, false, Format::Summary);
    assert_eq!(o.code, exit::SUCCESS);
    assert!((number(&o, "m_lambda") - 1.0 / 96.0).abs() <= 1e-12 / 96.0);
}

#[test]
fn large_lambda_fails_hypotheses_with_complete_report() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", &WORKED.replace("lambda1 = 1/5", "lambda1 = 10"));
    for exact in [true, false] {
        let o = commands::check_hypotheses(&g, &c, exact, Format::Summary);
        assert_eq!(o.code, exit::HYPOTHESES, "{o:?}");
        for key in ["m_lambda", "m2", "lhs", "rhs", "cond1", "cond2", "cond3", "cond4"] {
            value(&o, key);
        }
        assert_eq!(value(&o, "cond1"), "false");
    }
}

#[test]
fn equation_thresholds_decide_exit_code() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    // The embedding constant of the single-vertex fixture is 1 for every r.
    let th = equation_thresholds(&EquationParams::with_unit_coefficients(1, 1, 2.0, 1.5, 4.0, 0.1), 1.0).unwrap();
    let o = commands::check_hypotheses(&g, &d.file("c", &equation(th.lambda_star_star / 2.0)), false, Format::Summary);
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert!((number(&o, "lambda_star_star") - th.lambda_star_star).abs() < 1e-9 * th.lambda_star_star);
    let o = commands::check_hypotheses(&g, &d.file("e", &equation(th.lambda_star_star * 2.0)), false, Format::Summary);
    assert_eq!(o.code, exit::HYPOTHESES);
    let o = commands::check_hypotheses(&g, &d.file("f", &equation(0.01)), true, Format::Summary);
    assert_eq!(o.code, exit::USAGE);
}

#[test]
fn ground_state_solve_and_verify_round_trip() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", &equation(0.01));
    let out = d.path("gs.txt");
    let o = solve(&g, &c, Mode::GroundState, &out);
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert!(number(&o, "energy") < 0.0);
    assert_eq!(value(&o, "nehari"), "Nplus");
    assert!(number(&o, "companion_energy") > 0.0);
    assert!(value(&o, "seed") == "0");
    let v = commands::verify(&g, &c, &out, Format::Summary);
    assert_eq!(v.code, exit::SUCCESS, "{v:?}");
    assert_eq!(value(&v, "nehari_class"), "Nplus");
}

#[test]
fn system_solutions_have_opposite_energies() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", SYSTEM);
    let neg = solve(&g, &c, Mode::Negative, &d.path("neg"));
    assert_eq!(neg.code, exit::SUCCESS, "{neg:?}");
    assert_eq!(value(&neg, "rho_source"), "hypotheses");
    assert_eq!(value(&neg, "within_rho_ball"), "true");
    let mp = solve(&g, &c, Mode::MountainPass, &d.path("mp"));
    assert_eq!(mp.code, exit::SUCCESS, "{mp:?}");
    assert!(number(&neg, "energy") < 0.0 && number(&mp, "energy") > 0.0);
    for f in ["neg", "mp"] {
        let v = commands::verify(&g, &c, &d.path(f), Format::Summary);
        assert_eq!(v.code, exit::SUCCESS, "{v:?}");
    }
    // Both files carry one line per vertex of the domain.
    let text = std::fs::read_to_string(d.path("neg")).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("value ")).count(), 2);
    // With u = v = s² the equation reads s − 0.05 − s⁵/2 = 0; bisect for
    // the small root.
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - 0.05 - 0.5 * mid.powi(5) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let line = text.lines().find(|l| l.starts_with("value x0")).unwrap();
    let u: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!((u - lo * lo).abs() < 1e-12, "{u} {}", lo * lo);
}

#[test]
fn mode_and_problem_kind_must_match() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let o = solve(&g, &d.file("c", SYSTEM), Mode::GroundState, &d.path("o"));
    assert_eq!(o.code, exit::USAGE);
    assert!(o.stderr.contains("mode requires equation"), "{}", o.stderr);
    let o = solve(&g, &d.file("e", &equation(0.01)), Mode::SemiTrivialU, &d.path("o"));
    assert_eq!(o.code, exit::USAGE);
    assert!(!d.path("o").exists());
}

#[test]
fn unverified_hypotheses_fall_back_with_warning() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", &SYSTEM.replace("lambda1 = 0.05", "lambda1 = 0.5"));
    let o = solve(&g, &c, Mode::Negative, &d.path("o"));
    assert!(o.stdout.contains("warning = theorem hypotheses unverified"), "{}", o.stdout);
    assert!(o.stdout.contains("fallback rho = 1"));
    assert_eq!(value(&o, "hypotheses_hold"), "false");
}

#[test]
fn verify_flags_trivial_and_corrupted_solutions() {
    let d = Dir::new();
    let g = d.file("g", PATH2);
    let c = d.file("c", &SYSTEM.replace("0.05", "0.02"));
    let zero = d.file("z", "value x1 0 0\nvalue x2 0 0\nvalue b0 0 0\nvalue b1 0 0\n");
    let o = commands::verify(&g, &c, &zero, Format::Summary);
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert!(o.stdout.contains("warning = trivial solution"));

    let out = d.path("neg");
    assert_eq!(solve(&g, &c, Mode::Negative, &out).code, exit::SUCCESS);
    let text = std::fs::read_to_string(&out).unwrap();
    let corrupted: String = text
        .lines()
        .map(|l| if l.starts_with("value x2 ") { "value x2 0.5 0.5".to_string() } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = d.file("bad", &corrupted);
    let o = commands::verify(&g, &c, &bad, Format::Summary);
    assert_eq!(o.code, exit::VERIFICATION, "{o:?}");
    assert!(o.stdout.lines().any(|l| l.starts_with("failing_vertex = x2 ")), "{}", o.stdout);

    let short = d.file("short", "value x1 0 0\nvalue b0 0 0\nvalue b1 0 0\n");
    let o = commands::verify(&g, &c, &short, Format::Summary);
    assert_eq!(o.code, exit::USAGE);
    assert!(o.stderr.contains("vertex mismatch"));
}

#[test]
fn embedding_constants() {
    let d = Dir::new();
    let g = d.file("g", PATH);
    let args = |m, r, brute_force| EmbeddingArgs {
        graph: &g,
        m,
        s: 2.0,
        r,
        brute_force,
        seed: 0,
        starts: Some(12),
        jobs: None,
        format: Format::Summary,
    };
    let o = commands::embedding(&args(1, None, false));
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert!((number(&o, "constant") - 2.0 * 2f64.sqrt()).abs() < 1e-10);
    assert_eq!(value(&o, "constant_source"), "explicit_lemma22");
    let o = commands::embedding(&args(1, Some(2.0), true));
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert!((number(&o, "constant") - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9, "{}", o.stdout);
    let o = commands::embedding(&args(2, None, false));
    assert_eq!(o.code, exit::USAGE);
    assert!(o.stderr.contains("--brute-force"), "{}", o.stderr);
}

#[test]
fn semi_trivial_solve_reports_its_bound() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", &SYSTEM.replace("0.05", "0.1"));
    let o = solve(&g, &c, Mode::SemiTrivialU, &d.path("u"));
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert_eq!(value(&o, "semi_trivial"), "u");
    assert_eq!(value(&o, "semi_trivial_bound_holds"), "true");
    let v = commands::verify(&g, &c, &d.path("u"), Format::Summary);
    assert_eq!(v.code, exit::SUCCESS);
    assert_eq!(value(&v, "semi_trivial_bound_holds"), "true");
}

#[test]
fn parallel_starts_match_serial_runs() {
    let d = Dir::new();
    let g = d.file("g", PATH2);
    let c = d.file("c", &SYSTEM.replace("0.05", "0.02"));
    let mut outs = Vec::new();
    for (i, jobs) in [None, Some(3)].into_iter().enumerate() {
        let out = d.path(&format!("mp{i}"));
        let o = commands::solve(&SolveArgs {
            graph: &g,
            config: &c,
            mode: Mode::MountainPass,
            out: &out,
            seed: Some(9),
            starts: Some(3),
            jobs,
            format: Format::Summary,
        });
        assert_eq!(o.code, exit::SUCCESS, "{o:?}");
        assert_eq!(value(&o, "seed"), "9");
        outs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn starved_solver_exits_nonconverged_with_file() {
    let d = Dir::new();
    let g = d.file("g", PATH2);
    let c = d.file("c", &format!("{}max_iters = 1\nnewton_iters = 1\n", SYSTEM.replace("0.05", "0.02")));
    let out = d.path("o");
    let o = solve(&g, &c, Mode::MountainPass, &out);
    assert_eq!(o.code, exit::NONCONVERGENCE, "{o:?}");
    assert!(std::fs::read_to_string(&out).unwrap().contains("converged = false"));
}

#[test]
fn whole_graph_equation() {
    let d = Dir::new();
    let g = d.file("g", "vertex a 1 I\nvertex b 1 I\nedge a b 1\nfunc a a 2\nfunc a b 2\n");
    let c = d.file("c", &equation(0.01).replace("problem = equation", "problem = finite_equation"));
    let o = commands::check_hypotheses(&g, &c, false, Format::Summary);
    assert!(o.code == exit::SUCCESS || o.code == exit::HYPOTHESES, "{o:?}");
    let o = solve(&g, &c, Mode::GroundState, &d.path("o"));
    assert_eq!(o.code, exit::SUCCESS, "{o:?}");
    assert!(number(&o, "energy") < 0.0);
}

#[test]
fn full_format_lists_residuals() {
    let d = Dir::new();
    let g = d.file("g", SINGLE);
    let c = d.file("c", &equation(0.01));
    let args = SolveArgs {
        graph: &g,
        config: &c,
        mode: Mode::GroundState,
        out: &d.path("o"),
        seed: None,
        starts: None,
        jobs: None,
        format: Format::Full,
    };
    let o = commands::solve(&args);
    assert!(o.stdout.lines().any(|l| l.starts_with("residual = x0 u ")), "{}", o.stdout);
    let o = commands::solve(&SolveArgs { format: Format::Summary, ..args });
    assert!(!o.stdout.contains("residual = x0"));
}

#[test]
fn binary_exit_codes() {
    let d = Dir::new();
    let g = d.file("g", PATH);
    let bin = env!("CARGO_BIN_EXE_polylap");
    let st = Command::new(bin).arg("check-graph").arg(&g).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&st.stdout).contains("omega_measure"));
    let st = Command::new(bin).arg("no-such-command").output().unwrap();
    assert_eq!(st.status.code(), Some(exit::USAGE));
    let st = Command::new(bin).args(["embedding", "--m", "2", "--s", "2"]).arg(&g).output().unwrap();
    assert_eq!(st.status.code(), Some(exit::USAGE));
    assert!(String::from_utf8_lossy(&st.stderr).contains("--brute-force"));
}
