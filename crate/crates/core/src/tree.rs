//! Trees with a designated subtree `B`: a line-oriented spec format, a
//! seeded random generator, and a checked run of the engine.
//!
//! ```text
//! # path of five nodes, B = the middle three
//! edge u v
//! edge v w
//! edge w x
//! edge x y
//! interior v
//! interior w
//! interior x
//! boundary u +1
//! boundary y -1
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::GraphInstance;
use crate::messages::{
    estimates, first_stable_iteration, run, unnormalized_readout, unnormalized_run,
};
use crate::oracle::enumerate_min_marginals;
use crate::{Error, Result};

/// Largest interior the enumeration oracle will handle on a tree.
pub const TREE_ENUM_CAP: usize = 22;

#[derive(Clone, Debug)]
pub struct TreeInstance {
    names: Vec<String>,
    graph: GraphInstance,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }
}

impl TreeInstance {
    /// Parses the line format. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut id_of = |name: &str, names: &mut Vec<String>| -> usize {
            *ids.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut interior: Vec<(usize, usize)> = Vec::new();
        let mut values: Vec<(usize, usize, i8)> = Vec::new();

        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::TreeSpec { line, message };
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["edge", a, b] => {
                    let (u, v) = (id_of(a, &mut names), id_of(b, &mut names));
                    if u == v {
                        return Err(err(format!("self loop at {a}")));
                    }
                    edges.push((line, u, v));
                }
                ["interior", a] => interior.push((line, id_of(a, &mut names))),
                ["boundary", a, value] => {
                    let x = match *value {
                        "+1" | "1" | "+" => 1,
                        "-1" | "-" => -1,
                        other => {
                            return Err(err(format!("boundary value {other:?} is not +1 or -1")))
                        }
                    };
                    values.push((line, id_of(a, &mut names), x));
                }
                [keyword, ..] if ["edge", "interior", "boundary"].contains(keyword) => {
                    return Err(err(format!("wrong number of arguments to {keyword}")));
                }
                [keyword, ..] => return Err(err(format!("unknown directive {keyword:?}"))),
                [] => unreachable!(),
            }
        }

        let count = names.len();
        let mut uf = UnionFind((0..count).collect());
        for &(line, u, v) in &edges {
            let (ru, rv) = (uf.find(u), uf.find(v));
            if ru == rv {
                return Err(Error::TreeSpec {
                    line,
                    message: format!("edge {} {} closes a cycle", names[u], names[v]),
                });
            }
            uf.0[ru] = rv;
        }
        let roots: BTreeSet<usize> = (0..count).map(|v| uf.find(v)).collect();
        if roots.len() > 1 {
            return Err(Error::TreeSpec {
                line: 0,
                message: "graph is not connected".into(),
            });
        }

        let mut seen_interior = BTreeSet::new();
        for &(line, v) in &interior {
            if !seen_interior.insert(v) {
                return Err(Error::TreeSpec {
                    line,
                    message: format!("{} listed as interior twice", names[v]),
                });
            }
        }
        let mut boundary = BTreeMap::new();
        for &(line, v, x) in &values {
            if seen_interior.contains(&v) {
                return Err(Error::TreeSpec {
                    line,
                    message: format!("{} is interior and has a boundary value", names[v]),
                });
            }
            if boundary.insert(v, x).is_some() {
                return Err(Error::TreeSpec {
                    line,
                    message: format!("{} has two boundary values", names[v]),
                });
            }
        }
        if let Some(v) =
            (0..count).find(|v| !seen_interior.contains(v) && !boundary.contains_key(v))
        {
            return Err(Error::TreeSpec {
                line: 0,
                message: format!(
                    "{} is neither interior nor given a boundary value",
                    names[v]
                ),
            });
        }

        let undirected: Vec<(usize, usize)> = edges.iter().map(|&(_, u, v)| (u, v)).collect();
        let interior: Vec<usize> = interior.iter().map(|&(_, v)| v).collect();
        let values: Vec<(usize, i8)> = boundary.into_iter().collect();
        Self::from_parts(names, &undirected, &interior, &values)
    }

    /// Builds a tree instance, rejecting cycles and a disconnected or
    /// empty interior.
    pub fn from_parts(
        names: Vec<String>,
        edges: &[(usize, usize)],
        interior: &[usize],
        values: &[(usize, i8)],
    ) -> Result<Self> {
        let graph = GraphInstance::new(names.len(), edges, interior, values)?;
        if !graph.is_tree() {
            return Err(Error::InvalidGraph("not a tree".into()));
        }
        if interior.is_empty() {
            return Err(Error::InvalidGraph("interior is empty".into()));
        }
        if !graph.interior_connected() {
            return Err(Error::InvalidGraph("interior is not a subtree".into()));
        }
        Ok(TreeInstance { names, graph })
    }

    /// A random tree on `2..=max_nodes` nodes (each node attached to a
    /// uniformly chosen earlier one), a connected interior of at most
    /// `max_interior` nodes grown from a random seed node, and uniform
    /// random `+1`/`-1` values everywhere else.
    pub fn random<R: Rng>(rng: &mut R, max_nodes: usize, max_interior: usize) -> Self {
        assert!(max_nodes >= 2 && max_interior >= 1);
        let count = rng.gen_range(2..=max_nodes);
        let edges: Vec<(usize, usize)> = (1..count).map(|v| (rng.gen_range(0..v), v)).collect();
        let mut adjacency = vec![Vec::new(); count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let size = rng.gen_range(1..=max_interior.min(count - 1));
        let mut interior = vec![rng.gen_range(0..count)];
        let mut members = BTreeSet::from([interior[0]]);
        while interior.len() < size {
            let frontier: Vec<usize> = members
                .iter()
                .flat_map(|&v| adjacency[v].iter().copied())
                .filter(|w| !members.contains(w))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let &next = frontier.choose(rng).expect("tree is connected");
            members.insert(next);
            interior.push(next);
        }
        let values: Vec<(usize, i8)> = (0..count)
            .filter(|v| !members.contains(v))
            .map(|v| (v, if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        let names = (0..count).map(|v| format!("v{v}")).collect();
        Self::from_parts(names, &edges, &interior, &values).expect("generator builds valid trees")
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Diameter of the interior together with its boundary neighbors.
    pub fn diameter(&self) -> usize {
        self.graph.messaging_diameter()
    }

    /// Back to the line format.
    pub fn to_spec(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        for v in 0..g.vertex_count() {
            for &w in g.neighbors(v) {
                if v < w {
                    out.push_str(&format!("edge {} {}\n", self.names[v], self.names[w]));
                }
            }
        }
        for &v in g.interior() {
            out.push_str(&format!("interior {}\n", self.names[v]));
        }
        for v in 0..g.vertex_count() {
            if !g.is_interior(v) {
                out.push_str(&format!("boundary {} {:+}\n", self.names[v], g.value(v)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRun {
    pub nodes: usize,
    pub interior: usize,
    pub diameter: usize,
    pub n_max: usize,
    pub first_stable_iteration: Option<usize>,
    /// Estimates at iteration `diameter + 1`, by node name.
    pub estimates: BTreeMap<String, i32>,
    pub oracle: BTreeMap<String, i32>,
    pub matches: bool,
    pub stable_within_bound: bool,
    /// Unnormalized readout at `diameter + 1` equals both min-marginals.
    pub readout_matches: bool,
}

impl TreeRun {
    pub fn holds(&self) -> bool {
        self.matches && self.stable_within_bound && self.readout_matches
    }
}

/// Runs the engine on a tree and checks it against enumeration. `n_max`
/// defaults to `diameter + 6`.
pub fn run_tree(tree: &TreeInstance, n_max: Option<usize>) -> Result<TreeRun> {
    let g = &tree.graph;
    if g.interior().len() > TREE_ENUM_CAP {
        return Err(Error::SizeGuard {
            solver: "tree enumeration",
            n: g.interior().len(),
            cap: TREE_ENUM_CAP,
        });
    }
    let diameter = tree.diameter();
    let bound = diameter + 1;
    let n_max = n_max.unwrap_or(bound + 5).max(bound);
    let trace = run(g, n_max);
    let first_stable = first_stable_iteration(&trace);
    let est = estimates(g, &trace.states[bound]);
    let (o_minus, o_plus) = enumerate_min_marginals(g);
    let oracle: Vec<i32> = o_minus
        .iter()
        .zip(&o_plus)
        .map(|(m, p)| *m as i32 - *p as i32)
        .collect();
    let readout = unnormalized_readout(g, &unnormalized_run(g, bound)[bound]);
    let readout_matches = readout
        .iter()
        .zip(o_minus.iter().zip(&o_plus))
        .all(|((rm, rp), (m, p))| *rm == *m as u64 && *rp == *p as u64);
    let by_name = |values: &[i32]| -> BTreeMap<String, i32> {
        g.interior()
            .iter()
            .zip(values)
            .map(|(&v, x)| (tree.names[v].clone(), *x))
            .collect()
    };
    Ok(TreeRun {
        nodes: g.vertex_count(),
        interior: g.interior().len(),
        diameter,
        n_max,
        first_stable_iteration: first_stable,
        matches: est == oracle,
        estimates: by_name(&est),
        oracle: by_name(&oracle),
        stable_within_bound: first_stable.is_some_and(|n| n <= bound),
        readout_matches,
    })
}
