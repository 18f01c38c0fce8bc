//! Independent reference implementations used by the integration tests.
//! Deliberately naive: coordinate maps, no shared code with the engine or
//! the oracles under test beyond boundary parsing.
#![allow(dead_code)]

use std::collections::HashMap;

use minsum_lbp::grid::enumerate_one_run_boundaries;
use minsum_lbp::{BoundaryConfig, Coord, Grid};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn c(a: i32, b: i32) -> Coord {
    Coord::new(a, b)
}

fn in_block(n: i32, p: Coord) -> bool {
    (0..=n + 1).contains(&p.a) && (0..=n + 1).contains(&p.b)
}

fn is_inner(n: i32, p: Coord) -> bool {
    (1..=n).contains(&p.a) && (1..=n).contains(&p.b)
}

fn nbrs(n: i32, p: Coord) -> Vec<Coord> {
    [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .map(|(da, db)| c(p.a + da, p.b + db))
        .filter(|q| in_block(n, *q))
        .collect()
}

/// Interior sites, bottom row first.
pub fn sites(n: i32) -> Vec<Coord> {
    (1..=n)
        .flat_map(|b| (1..=n).map(move |a| c(a, b)))
        .collect()
}

/// `(O*(-1), O*(+1))` per site by looping over every interior assignment
/// and counting odd bonds on edges that touch the interior.
pub fn naive_min_marginals(x: &BoundaryConfig) -> Vec<(u32, u32)> {
    let n = x.n() as i32;
    let sites = sites(n);
    let k = sites.len();
    assert!(k <= 20);
    let mut best = vec![(u32::MAX, u32::MAX); k];
    let mut value: HashMap<Coord, i8> = x.to_map().into_iter().collect();
    for mask in 0u32..(1 << k) {
        for (bit, s) in sites.iter().enumerate() {
            value.insert(*s, if mask >> bit & 1 == 1 { 1 } else { -1 });
        }
        let mut cost = 0u32;
        for s in &sites {
            for q in nbrs(n, *s) {
                // count interior-interior bonds once, interior-boundary once
                if is_inner(n, q) && (q.b, q.a) < (s.b, s.a) {
                    continue;
                }
                if value[s] != value[&q] {
                    cost += 1;
                }
            }
        }
        for (p, s) in sites.iter().enumerate() {
            let slot = if value[s] < 0 {
                &mut best[p].0
            } else {
                &mut best[p].1
            };
            *slot = (*slot).min(cost);
        }
    }
    best
}

pub fn naive_local_solutions(x: &BoundaryConfig) -> Vec<i32> {
    naive_min_marginals(x)
        .into_iter()
        .map(|(m, p)| m as i32 - p as i32)
        .collect()
}

/// Difference messages keyed by `(from, to)`, one map per iteration.
pub fn naive_lbp(x: &BoundaryConfig, n_max: usize) -> Vec<HashMap<(Coord, Coord), i8>> {
    let n = x.n() as i32;
    let bmap = x.to_map();
    let mut edges = Vec::new();
    for s in sites(n) {
        for q in nbrs(n, s) {
            edges.push((s, q));
            if !is_inner(n, q) {
                edges.push((q, s));
            }
        }
    }
    let mut state: HashMap<(Coord, Coord), i8> = edges
        .iter()
        .map(|&(j, i)| ((j, i), if is_inner(n, j) { 0 } else { bmap[&j] }))
        .collect();
    let mut out = vec![state.clone()];
    for _ in 0..n_max {
        let mut next = state.clone();
        for &(j, i) in &edges {
            if !is_inner(n, j) {
                continue;
            }
            let total: i32 = nbrs(n, j)
                .into_iter()
                .filter(|k| *k != i)
                .map(|k| state[&(k, j)] as i32)
                .sum();
            next.insert((j, i), total.signum() as i8);
        }
        state = next;
        out.push(state.clone());
    }
    out
}

pub fn random_boundary<R: Rng>(rng: &mut R, n: usize) -> BoundaryConfig {
    let grid = Grid::new(n).unwrap();
    let values = (0..grid.ring_len())
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    BoundaryConfig::from_ring(&grid, values).unwrap()
}

pub fn random_one_run<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<BoundaryConfig> {
    let all = enumerate_one_run_boundaries(&Grid::new(n).unwrap(), false);
    (0..count)
        .map(|_| all.choose(rng).unwrap().clone())
        .collect()
}

/// Number of `{+,-}` rings of length `len` with exactly two cyclic sign
/// changes, counted by brute force over strings.
pub fn count_two_change_rings(len: usize) -> usize {
    (0u32..(1 << len))
        .filter(|m| {
            (0..len)
                .filter(|&i| (m >> i & 1) != (m >> ((i + 1) % len) & 1))
                .count()
                == 2
        })
        .count()
}
