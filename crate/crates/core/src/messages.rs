//! The min-sum message-passing engine.
//!
//! Two equivalent engines share one graph type:
//!
//! * difference messages `m[j->i]` in `{-1, 0, +1}`, updated by
//!   `m[j->i] = sign(sum over k in N(j)\{i} of m[k->j])` with `sign(0) = 0`;
//! * unnormalized min-sum messages `M[j->i](x_i)`, exact nonnegative
//!   integers.
//!
//! Boundary-sourced messages are pinned to the boundary value (resp. to the
//! indicator `[x_j != x_i]`), interior-sourced ones start at zero, and every
//! iteration is a fully synchronous update computed from the previous state.

use serde::{Deserialize, Serialize};

use crate::field::LocalSolutionField;
use crate::graph::{grid_edge_id, GraphInstance};
use crate::grid::{BoundaryConfig, Coord, DirectedEdge, Grid};
use crate::Result;

/// All difference messages at one iteration, indexed by the graph's edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MessageState {
    pub n: usize,
    pub values: Vec<i8>,
}

/// The states of one run, `states[k].n == k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<MessageState>,
}

impl Trace {
    pub fn n_max(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> &MessageState {
        self.states.last().expect("trace is never empty")
    }
}

pub fn sign(t: i32) -> i8 {
    t.signum() as i8
}

pub fn init_state(g: &GraphInstance) -> MessageState {
    let values = g
        .edges()
        .iter()
        .map(|&(j, _)| if g.is_interior(j) { 0 } else { g.value(j) })
        .collect();
    MessageState { n: 0, values }
}

/// One synchronous update.
pub fn step(g: &GraphInstance, s: &MessageState) -> MessageState {
    let mut totals = vec![0i32; g.vertex_count()];
    for &v in g.interior() {
        totals[v] = g.incoming(v).iter().map(|&e| s.values[e] as i32).sum();
    }
    let values = g
        .edges()
        .iter()
        .enumerate()
        .map(|(id, &(j, _))| {
            if g.is_interior(j) {
                let back = s.values[g.reverse_edge(id)] as i32;
                sign(totals[j] - back)
            } else {
                s.values[id]
            }
        })
        .collect();
    MessageState { n: s.n + 1, values }
}

pub fn run(g: &GraphInstance, n_max: usize) -> Trace {
    let mut states = Vec::with_capacity(n_max + 1);
    states.push(init_state(g));
    for _ in 0..n_max {
        let next = step(g, states.last().unwrap());
        states.push(next);
    }
    Trace { states }
}

/// `o_hat[i] = sum over j in N(i) of m[j->i]`, in the graph's interior order.
pub fn estimates(g: &GraphInstance, s: &MessageState) -> Vec<i32> {
    g.interior()
        .iter()
        .map(|&i| g.incoming(i).iter().map(|&e| s.values[e] as i32).sum())
        .collect()
}

/// Smallest `n` such that every state from `n` to the end is identical, or
/// `None` if the last two states differ.
pub fn first_stable_iteration(t: &Trace) -> Option<usize> {
    let states = &t.states;
    let last = states.last()?;
    if states.len() >= 2 && states[states.len() - 2].values != last.values {
        return None;
    }
    let mut n = states.len() - 1;
    while n > 0 && states[n - 1].values == last.values {
        n -= 1;
    }
    Some(n)
}

/// Unnormalized messages: `minus[e] = M[e](-1)`, `plus[e] = M[e](+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnnormalizedState {
    pub n: usize,
    pub minus: Vec<u64>,
    pub plus: Vec<u64>,
}

impl UnnormalizedState {
    pub fn difference(&self, e: usize) -> i64 {
        self.minus[e] as i64 - self.plus[e] as i64
    }
}

fn indicator(a: i8, b: i8) -> u64 {
    u64::from(a != b)
}

pub fn unnormalized_init(g: &GraphInstance) -> UnnormalizedState {
    let mut minus = vec![0; g.edges().len()];
    let mut plus = vec![0; g.edges().len()];
    for (id, &(j, _)) in g.edges().iter().enumerate() {
        if !g.is_interior(j) {
            minus[id] = indicator(g.value(j), -1);
            plus[id] = indicator(g.value(j), 1);
        }
    }
    UnnormalizedState { n: 0, minus, plus }
}

pub fn unnormalized_step(g: &GraphInstance, s: &UnnormalizedState) -> UnnormalizedState {
    let mut minus = s.minus.clone();
    let mut plus = s.plus.clone();
    for (id, &(j, _)) in g.edges().iter().enumerate() {
        if !g.is_interior(j) {
            continue;
        }
        let back = g.reverse_edge(id);
        // phi(z) = sum over k in N(j)\{i} of M[k->j](z)
        let (phi_minus, phi_plus) = g
            .incoming(j)
            .iter()
            .filter(|&&e| e != back)
            .fold((0u64, 0u64), |(pm, pp), &e| {
                (pm + s.minus[e], pp + s.plus[e])
            });
        // M[j->i](x_i) = min over x_j of [x_i != x_j] + phi(x_j)
        minus[id] = phi_minus.min(1 + phi_plus);
        plus[id] = phi_plus.min(1 + phi_minus);
    }
    UnnormalizedState {
        n: s.n + 1,
        minus,
        plus,
    }
}

pub fn unnormalized_run(g: &GraphInstance, n_max: usize) -> Vec<UnnormalizedState> {
    let mut states = Vec::with_capacity(n_max + 1);
    states.push(unnormalized_init(g));
    for _ in 0..n_max {
        let next = unnormalized_step(g, states.last().unwrap());
        states.push(next);
    }
    states
}

/// `(sum of M[j->i](-1), sum of M[j->i](+1))` per interior site.
pub fn unnormalized_readout(g: &GraphInstance, s: &UnnormalizedState) -> Vec<(u64, u64)> {
    g.interior()
        .iter()
        .map(|&i| {
            g.incoming(i)
                .iter()
                .fold((0, 0), |(m, p), &e| (m + s.minus[e], p + s.plus[e]))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyViolation {
    pub n: usize,
    pub from: usize,
    pub to: usize,
    pub unnormalized_difference: i64,
    pub difference_message: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub iterations: usize,
    pub messages_checked: usize,
    pub first_violation: Option<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Runs both engines side by side and checks
/// `M[e](-1) - M[e](+1) == m[e]` for every edge and every `n <= n_max`.
pub fn difference_consistency(g: &GraphInstance, n_max: usize) -> ConsistencyReport {
    let mut diff = init_state(g);
    let mut full = unnormalized_init(g);
    let mut checked = 0;
    for n in 0..=n_max {
        if n > 0 {
            diff = step(g, &diff);
            full = unnormalized_step(g, &full);
        }
        for (id, &(from, to)) in g.edges().iter().enumerate() {
            checked += 1;
            let d = full.difference(id);
            if d != diff.values[id] as i64 {
                return ConsistencyReport {
                    iterations: n,
                    messages_checked: checked,
                    first_violation: Some(ConsistencyViolation {
                        n,
                        from,
                        to,
                        unnormalized_difference: d,
                        difference_message: diff.values[id],
                    }),
                };
            }
        }
    }
    ConsistencyReport {
        iterations: n_max,
        messages_checked: checked,
        first_violation: None,
    }
}

/// A grid run: the boundary, its graph, and the recorded trace, with
/// lookups by grid coordinates.
#[derive(Clone, Debug)]
pub struct GridTrace {
    pub grid: Grid,
    pub boundary: BoundaryConfig,
    pub graph: GraphInstance,
    pub trace: Trace,
}

impl GridTrace {
    pub fn run(x: &BoundaryConfig, n_max: usize) -> Result<Self> {
        let grid = x.grid();
        let graph = GraphInstance::from_grid(&grid, x)?;
        let trace = run(&graph, n_max);
        Ok(GridTrace {
            grid,
            boundary: x.clone(),
            graph,
            trace,
        })
    }

    pub fn n_max(&self) -> usize {
        self.trace.n_max()
    }

    /// `m^n` on a grid edge; `None` for edges that carry no message or `n`
    /// past the end of the trace.
    pub fn message(&self, n: usize, e: DirectedEdge) -> Option<i8> {
        let id = grid_edge_id(&self.graph, &self.grid, e.from, e.to)?;
        self.trace.states.get(n).map(|s| s.values[id])
    }

    pub fn estimates(&self, n: usize) -> LocalSolutionField {
        let values = estimates(&self.graph, &self.trace.states[n]);
        LocalSolutionField::new(&self.grid, values).expect("grid interior order")
    }

    pub fn first_stable_iteration(&self) -> Option<usize> {
        first_stable_iteration(&self.trace)
    }

    /// Every message of state `n` keyed by grid edge, in edge-id order.
    pub fn edges_with_values(&self, n: usize) -> Vec<(DirectedEdge, i8)> {
        let state = &self.trace.states[n];
        self.graph
            .edges()
            .iter()
            .zip(&state.values)
            .map(|(&(j, i), v)| {
                (
                    DirectedEdge {
                        from: self.grid.vertex_coord(j),
                        to: self.grid.vertex_coord(i),
                    },
                    *v,
                )
            })
            .collect()
    }

    pub fn export(&self) -> Vec<TraceStateExport> {
        (0..=self.n_max())
            .map(|n| {
                let mut messages: Vec<MessageExport> = self
                    .edges_with_values(n)
                    .into_iter()
                    .map(|(e, value)| MessageExport {
                        from: e.from,
                        to: e.to,
                        value,
                    })
                    .collect();
                messages.sort_by_key(|m| (m.from, m.to));
                TraceStateExport { n, messages }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageExport {
    pub from: Coord,
    pub to: Coord,
    pub value: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStateExport {
    pub n: usize,
    pub messages: Vec<MessageExport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Direction;

    fn single_site(values: [i8; 4]) -> GraphInstance {
        // vertex 0 interior; 1..=4 boundary
        GraphInstance::new(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
            &[0],
            &[
                (1, values[0]),
                (2, values[1]),
                (3, values[2]),
                (4, values[3]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn init_on_uniform_n1() {
        let g = Grid::new(1).unwrap();
        let x = BoundaryConfig::uniform(&g, -1);
        let gt = GridTrace::run(&x, 0).unwrap();
        let centre = Coord::new(1, 1);
        for d in Direction::ALL {
            let nb = centre.offset(d);
            assert_eq!(
                gt.message(
                    0,
                    DirectedEdge {
                        from: nb,
                        to: centre
                    }
                ),
                Some(-1)
            );
            assert_eq!(
                gt.message(
                    0,
                    DirectedEdge {
                        from: centre,
                        to: nb
                    }
                ),
                Some(0)
            );
        }
    }

    #[test]
    fn init_on_path_tree() {
        let g =
            GraphInstance::new(4, &[(0, 1), (1, 2), (2, 3)], &[1, 2], &[(0, 1), (3, -1)]).unwrap();
        let s = init_state(&g);
        assert_eq!(s.values[g.edge_id(0, 1).unwrap()], 1);
        assert_eq!(s.values[g.edge_id(3, 2).unwrap()], -1);
        assert_eq!(s.values[g.edge_id(1, 2).unwrap()], 0);
        assert!(s.values.iter().all(|v| (-1..=1).contains(v)));
    }

    #[test]
    fn update_rule_examples() {
        // interior 0 with incoming {+1,+1,-1} from the others when sending to 4
        let g = single_site([1, 1, -1, -1]);
        let s1 = step(&g, &init_state(&g));
        assert_eq!(s1.values[g.edge_id(0, 4).unwrap()], 1);
        // {+1,-1,-1} toward 1
        assert_eq!(s1.values[g.edge_id(0, 1).unwrap()], -1);

        // incoming {+1,-1,0}: a path k - j - i with one zero input
        let g = GraphInstance::new(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
            &[0, 3],
            &[(1, 1), (2, -1), (4, 1)],
        )
        .unwrap();
        let s1 = step(&g, &init_state(&g));
        assert_eq!(s1.values[g.edge_id(0, 4).unwrap()], 0);

        let g = single_site([-1, -1, -1, -1]);
        let s1 = step(&g, &init_state(&g));
        assert_eq!(s1.values[g.edge_id(0, 1).unwrap()], -1);
    }

    #[test]
    fn run_lengths() {
        let g = single_site([1, -1, 1, -1]);
        assert_eq!(run(&g, 0).states.len(), 1);
        assert_eq!(run(&g, 7).states.len(), 8);
    }

    #[test]
    fn n1_outgoing_is_sign_of_other_three() {
        let grid = Grid::new(1).unwrap();
        for bits in 0u32..256 {
            let values = (0..8)
                .map(|k| if bits >> k & 1 == 1 { 1 } else { -1 })
                .collect();
            let x = BoundaryConfig::from_ring(&grid, values).unwrap();
            let gt = GridTrace::run(&x, 2).unwrap();
            let c = Coord::new(1, 1);
            for n in 1..=2 {
                for d in Direction::ALL {
                    let target = c.offset(d);
                    let others: i32 = Direction::ALL
                        .into_iter()
                        .filter(|e| *e != d)
                        .map(|e| x.get(c.offset(e)).unwrap() as i32)
                        .sum();
                    let got = gt
                        .message(
                            n,
                            DirectedEdge {
                                from: c,
                                to: target,
                            },
                        )
                        .unwrap();
                    assert_eq!(got, sign(others));
                }
            }
        }
    }

    #[test]
    fn estimates_examples() {
        let grid = Grid::new(1).unwrap();
        let x = BoundaryConfig::uniform(&grid, -1);
        let gt = GridTrace::run(&x, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(gt.estimates(n).values(), &[-4]);
        }
        let g = single_site([1, 1, -1, -1]);
        assert_eq!(estimates(&g, &init_state(&g)), vec![0]);
    }

    #[test]
    fn stability_detection() {
        let s = |n: usize, v: i8| MessageState { n, values: vec![v] };
        let constant = Trace {
            states: vec![s(0, 1), s(1, 1), s(2, 1)],
        };
        assert_eq!(first_stable_iteration(&constant), Some(0));
        let alternating = Trace {
            states: vec![s(0, 1), s(1, -1), s(2, 1), s(3, -1)],
        };
        assert_eq!(first_stable_iteration(&alternating), None);
        let late = Trace {
            states: vec![s(0, 0), s(1, -1), s(2, 1), s(3, 1)],
        };
        assert_eq!(first_stable_iteration(&late), Some(2));
    }

    #[test]
    fn unnormalized_boundary_and_init() {
        let g = single_site([-1, 1, 1, 1]);
        let states = unnormalized_run(&g, 3);
        let from_minus = g.edge_id(1, 0).unwrap();
        for s in &states {
            assert_eq!((s.minus[from_minus], s.plus[from_minus]), (0, 1));
        }
        let out = g.edge_id(0, 1).unwrap();
        assert_eq!((states[0].minus[out], states[0].plus[out]), (0, 0));
    }

    #[test]
    fn consistency_on_small_cases() {
        let g = single_site([-1, 1, 1, -1]);
        assert!(difference_consistency(&g, 0).holds());
        assert!(difference_consistency(&g, 5).holds());
    }

    #[test]
    fn export_shape() {
        let grid = Grid::new(1).unwrap();
        let x = BoundaryConfig::uniform(&grid, 1);
        let gt = GridTrace::run(&x, 1).unwrap();
        let export = gt.export();
        assert_eq!(export.len(), 2);
        assert_eq!(export[0].messages.len(), 8);
        let json = serde_json::to_value(&export[1]).unwrap();
        assert_eq!(json["n"], 1);
        assert!(json["messages"][0]["from"].is_array());
    }
}
