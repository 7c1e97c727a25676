//! Acceptance run: one PASS/FAIL line per criterion, with its runtime and
//! limit. Exits nonzero when any criterion fails.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use polylap::commands::{self, Mode, SolveArgs};
use polylap::{exit, Format};
use polylap_core::analysis::{
    brute_force_uniform, check_system_hypotheses, check_system_hypotheses_on, equation_thresholds,
    explicit_embedding_constant, BruteForceOptions,
};
use polylap_core::calculus::{
    gradient_form, gradient_length_m, integrate, lr_norm, s_laplacian, sobolev_norm, OperatorOrder, Region,
};
use polylap_core::exact::{check_system_hypotheses_exact, ExactSystemData};
use polylap_core::functionals::{
    energy_equation, energy_system, fibering_deriv1, grad_system, nehari_classify, EquationParams, NehariTag, Side,
    SystemParams,
};
use polylap_core::solvers::{
    fibering_roots, solve_ground_state, solve_mountain_pass, solve_negative, solve_semi_trivial, verify_solution,
    Classification, Problem, SolveConfig, SolveReport,
};
use polylap_core::{DirichletDomain, GraphBuilder, GraphFunction};
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (u32, &'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn opts() -> BruteForceOptions {
    BruteForceOptions { starts: 12, ..Default::default() }
}

fn path(k: usize) -> DirichletDomain {
    let mut b = GraphBuilder::new();
    b.vertex("b0", 1.0).vertex("b1", 1.0);
    for i in 1..=k {
        b.vertex(format!("x{i}"), 1.0);
    }
    b.edge("b0", "x1", 1.0).edge(format!("x{k}"), "b1", 1.0);
    for i in 1..k {
        b.edge(format!("x{i}"), format!("x{}", i + 1), 1.0);
    }
    let g = b.build().unwrap();
    let interior: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    DirichletDomain::new(&g, &interior, &["b0".to_string(), "b1".to_string()]).unwrap()
}

fn single() -> DirichletDomain {
    let g = GraphBuilder::new().vertex("x0", 1.0).vertex("b", 1.0).edge("x0", "b", 1.0).build().unwrap();
    DirichletDomain::new(&g, &["x0"], &["b"]).unwrap()
}

fn shift(d: &DirichletDomain, f: &GraphFunction, df: &GraphFunction, t: f64) -> GraphFunction {
    GraphFunction::new(d, f.values().iter().zip(df.values()).map(|(a, b)| a + t * b).collect()).unwrap()
}

// ----------------------------------------------------------------------

fn worked_example() -> Check {
    let data = ExactSystemData {
        p: 4,
        q: 5,
        gamma1: 2,
        gamma2: 3,
        alpha: 2,
        beta: 4,
        lambda1: ratio(1, 5),
        lambda2: ratio(1, 6),
        cp: ratio(1, 1),
        cq: ratio(1, 1),
        c0: ratio(1, 3),
        h1_pow: ratio(15625, 9 << 31),
        h2_pow: ratio(15625, 1 << 32),
    };
    let e = check_system_hypotheses_exact(&data).map_err(|e| e.to_string())?;
    ensure!(e.m_lambda == ratio(1, 96), "M = {}", e.m_lambda);
    ensure!(e.m2 == ratio(1, 18), "M2 = {}", e.m2);
    ensure!(e.lhs == ratio(3125, 9 << 33) + ratio(3125, 9 << 32), "lhs = {}", e.lhs);
    ensure!(e.rhs == ratio(3125, 9 << 31), "rhs = {}", e.rhs);
    ensure!(e.all_hold(), "{e:?}");

    let mut prm = SystemParams::with_unit_coefficients(1, (1, 1), (4.0, 5.0), (2.0, 3.0), (2.0, 4.0), (0.2, 1.0 / 6.0));
    prm.c = vec![1.0 / 3.0];
    let h1 = 15625.0 / (9.0 * 2f64.powi(31));
    let h2 = 15625.0 / 2f64.powi(32);
    let f = check_system_hypotheses(&prm, 1.0, 1.0, h1, h2);
    let expected = [
        (f.m_lambda, 1.0 / 96.0),
        (f.m2, 1.0 / 18.0),
        (f.lhs, 3125.0 / (9.0 * 2f64.powi(33)) + 3125.0 / (9.0 * 2f64.powi(32))),
        (f.rhs, 3125.0 / (9.0 * 2f64.powi(31))),
    ];
    let worst = expected.iter().map(|&(a, b)| rel(a, b)).fold(0.0, f64::max);
    ensure!(worst <= 1e-12, "float relative error {worst:e}");
    ensure!(f.all_hold(), "{f:?}");
    Ok(format!("exact M = 1/96, M2 = 1/18; float worst rel {worst:.1e}"))
}

fn integration_by_parts() -> Check {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = r.gen_range(2..=40);
        let (_, d) = random_domain(&mut r, n);
        let u = random_function(&mut r, &d);
        let phi = random_dirichlet(&mut r, &d);
        for s in [2.0, 2.5, 3.0, 4.0] {
            let lap = s_laplacian(&d, &u, s).unwrap();
            let prod =
                GraphFunction::new(&d, lap.values().iter().zip(phi.values()).map(|(a, b)| a * b).collect()).unwrap();
            let lhs = integrate(&d, &prod, Region::Interior).unwrap();
            let len = gradient_length_m(&d, &u, 1).unwrap();
            let gam = gradient_form(&d, &u, &phi).unwrap();
            let rhs: f64 = -(0..d.len())
                .map(|x| {
                    let l = len.get(x);
                    let a = if s == 2.0 {
                        1.0
                    } else if l == 0.0 {
                        0.0
                    } else {
                        l.powf(s - 2.0)
                    };
                    a * gam.get(x) * d.mu(x)
                })
                .sum::<f64>();
            worst = worst.max(rel(lhs, rhs));
        }
    }
    ensure!(worst <= 1e-10, "worst relative gap {worst:e}");
    Ok(format!("200 cases, worst rel {worst:.1e}"))
}

fn gradient_oracle() -> Check {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let exps = [2.0, 2.5, 4.0];
    for m in [1u32, 2] {
        for p in exps {
            for q in exps {
                let (_, d) = random_domain(&mut r, 8);
                let prm = SystemParams::with_unit_coefficients(
                    d.n_interior(),
                    (m, m),
                    (p, q),
                    (1.5, 1.3),
                    (2.5, 3.0),
                    (0.2, 0.3),
                );
                let u = random_dirichlet(&mut r, &d);
                let v = random_dirichlet(&mut r, &d);
                let (gu, gv) = grad_system(&d, &u, &v, &prm).map_err(|e| e.to_string())?;
                for _ in 0..40 {
                    let du = random_dirichlet(&mut r, &d);
                    let dv = random_dirichlet(&mut r, &d);
                    let h = 1e-5;
                    let ep = energy_system(&d, &shift(&d, &u, &du, h), &shift(&d, &v, &dv, h), &prm).unwrap();
                    let em = energy_system(&d, &shift(&d, &u, &du, -h), &shift(&d, &v, &dv, -h), &prm).unwrap();
                    let fd = (ep - em) / (2.0 * h);
                    let an: f64 =
                        (0..d.n_interior()).map(|x| d.mu(x) * (gu.get(x) * du.get(x) + gv.get(x) * dv.get(x))).sum();
                    worst = worst.max(rel(fd, an));
                    cases += 1;
                }
            }
        }
    }
    ensure!(worst <= 1e-6, "worst relative gap {worst:e}");
    Ok(format!("{cases} directions, worst rel {worst:.1e}"))
}

fn embedding_chain() -> Check {
    let mut r = rng(4);
    let mut checks = 0;
    let mut tightest: f64 = 0.0;
    for _ in 0..20 {
        let k = r.gen_range(2..=8);
        let b = r.gen_range(1..=4);
        let (_, d) = adjacent_domain(&mut r, k, b);
        for s in [2.0, 3.0] {
            let c = explicit_embedding_constant(&d, s).map_err(|e| e.to_string())?.value;
            let order = OperatorOrder::new(1, s).unwrap();
            for _ in 0..200 {
                let u = random_dirichlet(&mut r, &d);
                let w = sobolev_norm(&d, &u, order).unwrap();
                for rr in [1.0, 2.0, 4.0] {
                    let l = lr_norm(&d, &u, rr).unwrap();
                    ensure!(l <= c * w, "violation: ‖u‖_{rr} = {l} > {c} · {w}");
                    tightest = tightest.max(l / (c * w));
                    checks += 1;
                }
            }
            let bf = brute_force_uniform(&d, 1, s, None, &opts()).map_err(|e| e.to_string())?.constant.value;
            ensure!(bf <= c, "brute force {bf} exceeds explicit {c}");
        }
    }
    Ok(format!("{checks} inequalities, 0 violations, largest ratio {tightest:.3}"))
}

fn critical_pair(d: &DirichletDomain, lambda: f64, limit: Duration) -> Check {
    let t = Instant::now();
    let n = d.n_interior();
    let prm = SystemParams::with_unit_coefficients(n, (1, 1), (2.0, 2.0), (1.5, 1.5), (2.0, 2.0), (lambda, lambda));
    let c = brute_force_uniform(d, 1, 2.0, None, &opts()).map_err(|e| e.to_string())?.constant.value;
    let hyp = check_system_hypotheses_on(d, &prm, c, c).map_err(|e| e.to_string())?;
    ensure!(hyp.all_hold(), "hypotheses fail: {hyp:?}");
    let cfg = SolveConfig::default();
    let check = |rep: &SolveReport| -> Result<f64, String> {
        ensure!(rep.converged && rep.grad_norm <= 1e-8, "grad_norm {:e}", rep.grad_norm);
        let v = verify_solution(d, &rep.solution, Problem::System(&prm), 1e-7, None).map_err(|e| e.to_string())?;
        let pw = v.max_pointwise_u.max(v.max_pointwise_v.unwrap_or(0.0));
        ensure!(v.passed && pw <= 1e-7, "pointwise residual {pw:e}");
        Ok(pw)
    };
    let neg = solve_negative(d, Problem::System(&prm), Some(hyp.rho), &cfg).map_err(|e| e.to_string())?;
    let pw_neg = check(&neg)?;
    ensure!(neg.energy < 0.0, "negative solver energy {}", neg.energy);
    ensure!(neg.within_rho_ball && neg.norm <= hyp.rho * (1.0 + 1e-12), "norm {} outside rho {}", neg.norm, hyp.rho);
    let mp = solve_mountain_pass(d, Problem::System(&prm), Some(hyp.rho), &cfg).map_err(|e| e.to_string())?;
    let pw_mp = check(&mp)?;
    ensure!(
        mp.energy > 0.0 && mp.classification == Classification::PositiveEnergy,
        "mountain-pass energy {}",
        mp.energy
    );
    let el = t.elapsed();
    ensure!(el <= limit, "fixture took {el:?}");
    Ok(format!(
        "|Ω| = {n}: E- = {:.3e}, E+ = {:.3e}, residuals {:.0e}/{:.0e}, {:.1}s",
        neg.energy,
        mp.energy,
        pw_neg.max(neg.grad_norm),
        pw_mp.max(mp.grad_norm),
        el.as_secs_f64()
    ))
}

fn critical_pairs() -> Check {
    let limit = Duration::from_secs(120);
    let mut lines = Vec::new();
    for (d, lambda) in [(single(), 0.05), (path(2), 0.02), (path(3), 0.002)] {
        lines.push(critical_pair(&d, lambda, limit)?);
    }
    Ok(lines.join("; "))
}

fn ground_state() -> Check {
    let d = single();
    let c = brute_force_uniform(&d, 1, 2.0, None, &opts()).map_err(|e| e.to_string())?.constant.value;
    let mut prm = EquationParams::with_unit_coefficients(1, 1, 2.0, 1.5, 4.0, 0.0);
    let th = equation_thresholds(&prm, c).map_err(|e| e.to_string())?;
    let lambda = 0.5 * th.lambda_star_star;
    prm.lambda = lambda;
    let rep = solve_ground_state(&d, &prm, &SolveConfig::default()).map_err(|e| e.to_string())?;
    // u − λ√u − u³ = 0 with s = √u: s − λ − s⁵ = 0, increasing on [0, 5^{-1/4}].
    let (mut lo, mut hi) = (0.0f64, 0.2f64.powf(0.25));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid - lambda - mid.powi(5) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = lo * lo;
    let u = rep.solution.u().get(0);
    ensure!(rep.converged, "not converged");
    ensure!(rel(u, oracle) <= 1e-8, "u = {u}, oracle {oracle}");
    ensure!(rep.energy < 0.0, "J = {}", rep.energy);
    let tag = rep.nehari.map(|n| n.tag);
    ensure!(tag == Some(NehariTag::Plus), "class {tag:?}");
    let companion = rep.companion_energy.unwrap_or(f64::NAN);
    ensure!(companion > 0.0, "companion J = {companion}");
    Ok(format!(
        "λ = {lambda:.4e}, u = {u:.10e} (rel {:.0e}), J = {:.3e}, J(N-) = {companion:.3e}",
        rel(u, oracle),
        rep.energy
    ))
}

fn semi_trivial_bound() -> Check {
    let mut r = rng(7);
    let mut converged = 0;
    let mut min_margin = f64::INFINITY;
    for i in 0..10 {
        // A Dirichlet problem needs a nonempty boundary.
        let d = loop {
            let n = r.gen_range(3..=10);
            let (_, d) = random_domain(&mut r, n);
            if d.n_boundary() > 0 {
                break d;
            }
        };
        let p = [2.0, 2.5, 3.0][i % 3];
        let g1 = [1.3, 1.5, 1.8][(i / 3) % 3];
        let lambda = r.gen_range(0.05..0.3);
        let prm = SystemParams::with_unit_coefficients(
            d.n_interior(),
            (1, 1),
            (p, 2.0),
            (g1, 1.5),
            (2.5, 2.5),
            (lambda, 0.1),
        );
        let c = brute_force_uniform(&d, 1, p, None, &opts()).map_err(|e| e.to_string())?.constant.value;
        let rep = solve_semi_trivial(&d, &prm, Side::U, &SolveConfig::default()).map_err(|e| e.to_string())?;
        if !rep.converged {
            continue;
        }
        converged += 1;
        let v = verify_solution(&d, &rep.solution, Problem::System(&prm), 1e-7, Some(c)).map_err(|e| e.to_string())?;
        let b = v.bound.ok_or("no semi-trivial bound evaluated")?;
        let margin = (b.bound - b.norm) / b.bound;
        min_margin = min_margin.min(margin);
        ensure!(margin >= -1e-10, "solve {i}: ‖u‖ = {} exceeds bound {}", b.norm, b.bound);
    }
    ensure!(converged > 0, "no solve converged");
    Ok(format!("{converged}/10 converged, smallest relative margin {min_margin:.3}"))
}

fn nehari_structure() -> Check {
    let mut r = rng(8);
    let (_, d) = random_domain(&mut r, 12);
    let c = brute_force_uniform(&d, 1, 2.5, None, &opts()).map_err(|e| e.to_string())?.constant.value;
    let mut prm = EquationParams::with_unit_coefficients(d.n_interior(), 1, 2.5, 1.5, 4.0, 0.0);
    prm.lambda = 0.5 * equation_thresholds(&prm, c).map_err(|e| e.to_string())?.lambda0;
    let mut exceptions = 0;
    for _ in 0..200 {
        let u = random_dirichlet(&mut r, &d);
        let (tp, tm) = fibering_roots(&d, &u, &prm, 1e-14).map_err(|e| e.to_string())?;
        let plus = nehari_classify(&d, &u.scaled(tp), &prm, 1e-8).unwrap().tag;
        let minus = nehari_classify(&d, &u.scaled(tm), &prm, 1e-8).unwrap().tag;
        if plus != NehariTag::Plus || minus != NehariTag::Minus {
            exceptions += 1;
            continue;
        }
        let gap = 1e-3 * tm;
        for k in 1..60 {
            let t = 3.0 * tm * k as f64 / 60.0;
            if (t - tp).abs() < gap || (t - tm).abs() < gap {
                continue;
            }
            let g = fibering_deriv1(&d, &u, t, &prm).unwrap();
            if g == 0.0 || (g > 0.0) != (t > tp && t < tm) {
                exceptions += 1;
                break;
            }
        }
        let j = energy_equation(&d, &u.scaled(tp), &prm).unwrap();
        if !(j < 0.0) {
            exceptions += 1;
        }
    }
    ensure!(exceptions == 0, "{exceptions} exceptions");
    Ok(format!("λ = λ0/2 = {:.3e}, 200 directions, 0 exceptions", prm.lambda))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let graph = dir.path().join("graph");
    let config = dir.path().join("config");
    std::fs::write(
        &graph,
        "vertex x1 1 I\nvertex x2 1 I\nvertex b0 1 B\nvertex b1 1 B\nedge b0 x1 1\nedge x1 x2 1\nedge x2 b1 1\n",
    )
    .unwrap();
    std::fs::write(
        &config,
        "problem = system\nm1 = 1\nm2 = 1\np = 2\nq = 2\ngamma1 = 1.5\ngamma2 = 1.5\nalpha = 2\nbeta = 2\n\
         lambda1 = 0.02\nlambda2 = 0.02\nbf_starts = 12\n",
    )
    .unwrap();
    let run = |out: &Path, jobs| {
        commands::solve(&SolveArgs {
            graph: &graph,
            config: &config,
            mode: Mode::MountainPass,
            out,
            seed: Some(20261016),
            starts: Some(4),
            jobs,
            format: Format::Summary,
        })
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = run(&a, None);
    let ob = run(&b, Some(2));
    ensure!(oa.code == exit::SUCCESS && ob.code == exit::SUCCESS, "exit codes {} {}", oa.code, ob.code);
    ensure!(oa.stdout.contains("seed = 20261016"), "seed not printed");
    let (fa, fb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    ensure!(fa == fb, "solution files differ");
    Ok(format!("{} identical bytes (serial and 2 jobs)", fa.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "worked example constants exact and float", 1, worked_example),
        (2, "integration by parts", 10, integration_by_parts),
        (3, "gradient vs central differences", 30, gradient_oracle),
        (4, "embedding chain", 60, embedding_chain),
        (5, "negative and mountain-pass critical points", 360, critical_pairs),
        (6, "ground state vs bisection oracle", 30, ground_state),
        (7, "semi-trivial norm bound", 120, semi_trivial_bound),
        (8, "Nehari structure", 30, nehari_structure),
        (9, "deterministic solution files", 60, determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let t = Instant::now();
        let res = run();
        let el = t.elapsed();
        let res = match res {
            Ok(msg) if el > Duration::from_secs(limit) => Err(format!("{msg}; over the time limit")),
            other => other,
        };
        let (status, msg) = match &res {
            Ok(m) => ("PASS", m.as_str()),
            Err(m) => ("FAIL", m.as_str()),
        };
        if res.is_err() {
            failed += 1;
        }
        println!("criterion {id} {status} [{:.2}s / {limit}s] {name}: {msg}", el.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
