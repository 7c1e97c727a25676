//! Seeded random graphs and functions shared by the integration tests.
#![allow(dead_code)]

use polylap_core::{DirichletDomain, GraphBuilder, GraphFunction, Role, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn name(i: usize) -> String {
    format!("v{i:03}")
}

/// Connected graph on `n` vertices: a random spanning tree plus extra edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> WeightedGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.vertex(name(i), rng.gen_range(0.5..2.0));
    }
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.insert((j, i));
    }
    for _ in 0..extra {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            edges.insert((i.min(j), i.max(j)));
        }
    }
    for (i, j) in edges {
        b.edge(name(i), name(j), rng.gen_range(0.5..2.0));
    }
    b.build().unwrap()
}

/// A closed domain on a random graph of `n ≥ 2` vertices: a random interior,
/// every other vertex is boundary (vertices with no interior neighbor are
/// moved into the interior).
pub fn random_domain(rng: &mut ChaCha8Rng, n: usize) -> (WeightedGraph, DirichletDomain) {
    let g = random_graph(rng, n, n / 2);
    let mut roles: Vec<Role> =
        (0..n).map(|_| if rng.gen_bool(0.5) { Role::Interior } else { Role::Boundary }).collect();
    roles[0] = Role::Interior;
    for v in 0..n {
        if roles[v] == Role::Boundary && !g.neighbors(v).iter().any(|&(y, _)| roles[y] == Role::Interior) {
            roles[v] = Role::Interior;
        }
    }
    let d = DirichletDomain::from_roles(&g, &roles).unwrap();
    (g, d)
}

/// `k` interior and `b` boundary vertices, every interior vertex adjacent to
/// the boundary.
pub fn adjacent_domain(rng: &mut ChaCha8Rng, k: usize, b: usize) -> (WeightedGraph, DirichletDomain) {
    let mut gb = GraphBuilder::new();
    let iname = |i: usize| format!("i{i:03}");
    let bname = |i: usize| format!("b{i:03}");
    for i in 0..k {
        gb.vertex(iname(i), rng.gen_range(0.5..2.0));
    }
    for i in 0..b {
        gb.vertex(bname(i), rng.gen_range(0.5..2.0));
    }
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..k {
        edges.insert((iname(rng.gen_range(0..i)), iname(i)));
    }
    for i in 0..k {
        edges.insert((iname(i), bname(rng.gen_range(0..b))));
    }
    for j in 0..b {
        edges.insert((iname(rng.gen_range(0..k)), bname(j)));
    }
    for (x, y) in edges {
        gb.edge(x, y, rng.gen_range(0.5..2.0));
    }
    let g = gb.build().unwrap();
    let interior: Vec<String> = (0..k).map(iname).collect();
    let boundary: Vec<String> = (0..b).map(bname).collect();
    let d = DirichletDomain::new(&g, &interior, &boundary).unwrap();
    assert!(d.boundary_adjacency());
    (g, d)
}

/// Values in `±[0.2, 1]` on the interior, zero on the boundary.
pub fn random_dirichlet(rng: &mut ChaCha8Rng, d: &DirichletDomain) -> GraphFunction {
    let vals: Vec<f64> = (0..d.n_interior())
        .map(|_| {
            let x: f64 = rng.gen_range(0.2..1.0);
            if rng.gen_bool(0.5) {
                x
            } else {
                -x
            }
        })
        .collect();
    GraphFunction::from_interior(d, &vals).unwrap()
}

/// Values in `[-1, 1]` on all of `Ω ∪ ∂Ω`.
pub fn random_function(rng: &mut ChaCha8Rng, d: &DirichletDomain) -> GraphFunction {
    GraphFunction::new(d, (0..d.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}
