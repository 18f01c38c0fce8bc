//! Finite graphs with a designated interior, the common substrate for the
//! grid block and for trees.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::grid::{BoundaryConfig, Coord, Grid};
use crate::{Error, Result};

/// A graph `G = (V, E)` with interior `B` and boundary values on `V \ B`.
///
/// Messages live on directed edges `j -> i` with at least one endpoint in
/// `B`. Edges between two boundary vertices carry nothing.
#[derive(Clone, Debug)]
pub struct GraphInstance {
    adjacency: Vec<Vec<usize>>,
    interior_flags: Vec<bool>,
    /// `+1`/`-1` on boundary vertices that have a value, `0` otherwise.
    values: Vec<i8>,
    interior: Vec<usize>,
    edges: Vec<(usize, usize)>,
    reverse: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl GraphInstance {
    /// `interior` fixes the order in which per-site results are reported.
    /// Every non-interior vertex adjacent to the interior needs a value.
    pub fn new(
        vertex_count: usize,
        undirected_edges: &[(usize, usize)],
        interior: &[usize],
        boundary_values: &[(usize, i8)],
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut seen = BTreeSet::new();
        for &(u, v) in undirected_edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }

        let mut interior_flags = vec![false; vertex_count];
        for &i in interior {
            if i >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "interior vertex {i} out of range"
                )));
            }
            if std::mem::replace(&mut interior_flags[i], true) {
                return Err(Error::InvalidGraph(format!(
                    "interior vertex {i} listed twice"
                )));
            }
        }

        let mut values = vec![0i8; vertex_count];
        for &(v, x) in boundary_values {
            if v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "boundary vertex {v} out of range"
                )));
            }
            if interior_flags[v] {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} is interior but has a boundary value"
                )));
            }
            if x != 1 && x != -1 {
                return Err(Error::InvalidGraph(format!("boundary value {x} at {v}")));
            }
            values[v] = x;
        }
        for &i in interior {
            if let Some(&j) = adjacency[i]
                .iter()
                .find(|&&j| !interior_flags[j] && values[j] == 0)
            {
                return Err(Error::InvalidGraph(format!(
                    "boundary vertex {j} next to the interior has no value"
                )));
            }
        }

        let mut edges = Vec::new();
        let mut lookup = HashMap::new();
        for (j, nbrs) in adjacency.iter().enumerate() {
            for &i in nbrs {
                if interior_flags[i] || interior_flags[j] {
                    lookup.insert((j, i), edges.len());
                    edges.push((j, i));
                }
            }
        }
        let reverse = edges.iter().map(|&(j, i)| lookup[&(i, j)]).collect();
        let mut incoming = vec![Vec::new(); vertex_count];
        for (id, &(_, i)) in edges.iter().enumerate() {
            incoming[i].push(id);
        }

        Ok(GraphInstance {
            adjacency,
            interior_flags,
            values,
            interior: interior.to_vec(),
            edges,
            reverse,
            incoming,
            lookup,
        })
    }

    /// The grid graph with the given boundary; vertex ids follow
    /// [`Grid::vertex_index`] and the interior is listed row-major.
    pub fn from_grid(grid: &Grid, x: &BoundaryConfig) -> Result<Self> {
        if x.n() != grid.n() {
            return Err(Error::BoundaryMismatch(format!(
                "boundary for N = {} on a grid with N = {}",
                x.n(),
                grid.n()
            )));
        }
        let edges: Vec<(usize, usize)> = grid
            .undirected_edges()
            .into_iter()
            .map(|(u, v)| (grid.vertex_index(u), grid.vertex_index(v)))
            .collect();
        let interior: Vec<usize> = grid
            .interior()
            .into_iter()
            .map(|c| grid.vertex_index(c))
            .collect();
        let values: Vec<(usize, i8)> = grid
            .ring()
            .into_iter()
            .map(|c| (grid.vertex_index(c), x.get(c).unwrap()))
            .collect();
        Self::new(grid.vertex_count(), &edges, &interior, &values)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.interior_flags[v]
    }

    /// Boundary value of `v`, or `0` for interior or valueless vertices.
    pub fn value(&self, v: usize) -> i8 {
        self.values[v]
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Directed messaging edges `(from, to)`, indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, from: usize, to: usize) -> Option<usize> {
        self.lookup.get(&(from, to)).copied()
    }

    pub fn reverse_edge(&self, id: usize) -> usize {
        self.reverse[id]
    }

    /// Edge ids of messages arriving at `v`.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// True when the whole graph is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0
            && self.undirected_edge_count() == n - 1
            && self.reachable_from(0, |_| true).len() == n
    }

    /// True when the interior induces a connected subgraph.
    pub fn interior_connected(&self) -> bool {
        match self.interior.first() {
            None => true,
            Some(&start) => {
                self.reachable_from(start, |v| self.interior_flags[v]).len() == self.interior.len()
            }
        }
    }

    fn reachable_from(&self, start: usize, allowed: impl Fn(usize) -> bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if allowed(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Longest shortest-path distance (in edges) within the subgraph made
    /// of the interior, its boundary neighbors, and the edges touching the
    /// interior. On a tree this is the diameter of that subtree.
    pub fn messaging_diameter(&self) -> usize {
        let mut members: BTreeSet<usize> = self.interior.iter().copied().collect();
        for &(j, i) in &self.edges {
            members.insert(j);
            members.insert(i);
        }
        let mut best = 0;
        for &start in &members {
            let mut dist = HashMap::from([(start, 0usize)]);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let d = dist[&v];
                best = best.max(d);
                for &w in &self.adjacency[v] {
                    let edge_ok = self.interior_flags[v] || self.interior_flags[w];
                    if edge_ok && !dist.contains_key(&w) {
                        dist.insert(w, d + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        best
    }
}

/// Maps grid coordinates onto the vertex ids of [`GraphInstance::from_grid`].
pub fn grid_edge_id(graph: &GraphInstance, grid: &Grid, from: Coord, to: Coord) -> Option<usize> {
    if !grid.contains(from) || !grid.contains(to) {
        return None;
    }
    graph.edge_id(grid.vertex_index(from), grid.vertex_index(to))
}
