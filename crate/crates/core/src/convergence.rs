//! Rectangles, compatible tuples and the forward/backward convergence
//! properties, checked as predicates over recorded grid traces.
//!
//! A message "sent in direction `D` from `(a, b)`" is the edge
//! `(a, b) -> (a, b) + v(D)`. A set `S` "receives from `D`" the messages
//! `(a, b) -> (a, b) + v(D)` with `(a, b)` outside `S` and the head inside.
//!
//! "Converges by `n` to `sigma`" is checked on the finite window
//! `[n, n_max]` of the trace.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::LocalSolutionField;
use crate::graph::grid_edge_id;
use crate::grid::{BoundaryConfig, Coord, DirectedEdge, Direction, Grid, SymmetryTransform};
use crate::messages::GridTrace;
use crate::regions::{case_analysis, CaseAnalysis};
use crate::{Error, Result};

/// The four unordered adjacent direction pairs.
pub const ADJACENT_PAIRS: [(Direction, Direction); 4] = [
    (Direction::East, Direction::North),
    (Direction::East, Direction::South),
    (Direction::West, Direction::North),
    (Direction::West, Direction::South),
];

/// Axis-aligned rectangle of interior sites spanned by two corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rectangle {
    pub corner1: Coord,
    pub corner2: Coord,
}

impl Rectangle {
    pub fn new(grid: &Grid, corner1: Coord, corner2: Coord) -> Result<Self> {
        for c in [corner1, corner2] {
            if !grid.is_interior(c) {
                return Err(Error::IncompatibleTuple(format!(
                    "rectangle corner {c} is not interior"
                )));
            }
        }
        Ok(Rectangle { corner1, corner2 })
    }

    fn bounds(&self) -> (i32, i32, i32, i32) {
        let (p, q) = (self.corner1, self.corner2);
        (p.a.min(q.a), p.a.max(q.a), p.b.min(q.b), p.b.max(q.b))
    }

    pub fn contains(&self, c: Coord) -> bool {
        let (a0, a1, b0, b1) = self.bounds();
        (a0..=a1).contains(&c.a) && (b0..=b1).contains(&c.b)
    }

    pub fn nodes(&self) -> BTreeSet<Coord> {
        let (a0, a1, b0, b1) = self.bounds();
        (b0..=b1)
            .flat_map(|b| (a0..=a1).map(move |a| Coord::new(a, b)))
            .collect()
    }

    pub fn len(&self) -> usize {
        let (a0, a1, b0, b1) = self.bounds();
        ((a1 - a0 + 1) * (b1 - b0 + 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The part of a rectangle within L1 distance `d - 1` of `corner1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRectangle {
    pub rect: Rectangle,
    pub d: usize,
}

impl CutRectangle {
    pub fn contains(&self, c: Coord) -> bool {
        self.rect.contains(c) && (c.l1_distance(self.rect.corner1) as usize) < self.d
    }

    pub fn nodes(&self) -> BTreeSet<Coord> {
        self.rect
            .nodes()
            .into_iter()
            .filter(|c| self.contains(*c))
            .collect()
    }
}

/// Row and column through `corner`, clipped to the rectangle spanned with
/// `far`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LRegion {
    pub corner: Coord,
    pub far: Coord,
}

impl LRegion {
    pub fn rectangle(&self) -> Rectangle {
        Rectangle {
            corner1: self.corner,
            corner2: self.far,
        }
    }

    pub fn nodes(&self) -> BTreeSet<Coord> {
        self.rectangle()
            .nodes()
            .into_iter()
            .filter(|c| c.a == self.corner.a || c.b == self.corner.b)
            .collect()
    }
}

/// `(from > to, d1, d2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompatibleTuple {
    pub from: Coord,
    pub to: Coord,
    pub d1: Direction,
    pub d2: Direction,
}

impl CompatibleTuple {
    pub fn new(from: Coord, to: Coord, d1: Direction, d2: Direction) -> Self {
        CompatibleTuple { from, to, d1, d2 }
    }

    pub fn directions(&self) -> [Direction; 2] {
        [self.d1, self.d2]
    }

    pub fn is_compatible(&self) -> bool {
        is_compatible(self)
    }

    pub fn rectangle(&self) -> Rectangle {
        Rectangle {
            corner1: self.from,
            corner2: self.to,
        }
    }

    pub fn cut_rectangle(&self, d: usize) -> CutRectangle {
        CutRectangle {
            rect: self.rectangle(),
            d,
        }
    }

    pub fn l_region(&self) -> LRegion {
        LRegion {
            corner: self.from,
            far: self.to,
        }
    }

    pub fn transformed(&self, grid: &Grid, t: &SymmetryTransform) -> Self {
        CompatibleTuple {
            from: t.apply_coord(grid, self.from),
            to: t.apply_coord(grid, self.to),
            d1: t.apply_direction(self.d1),
            d2: t.apply_direction(self.d2),
        }
    }
}

impl fmt::Display for CompatibleTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}>{}, {}, {})", self.from, self.to, self.d1, self.d2)
    }
}

/// Adjacent directions, and `to - from` a nonnegative combination of them.
pub fn is_compatible(t: &CompatibleTuple) -> bool {
    if !t.d1.is_adjacent(t.d2) {
        return false;
    }
    let (u, v) = (t.d1.vector(), t.d2.vector());
    let (dx, dy) = (t.to.a - t.from.a, t.to.b - t.from.b);
    // u and v are orthogonal unit vectors, so the coefficients are dot products
    let c1 = u.0 * dx + u.1 * dy;
    let c2 = v.0 * dx + v.1 * dy;
    c1 >= 0 && c2 >= 0
}

/// Edges `(a,b) -> (a,b) + v(d)` with the source outside `set` and the head
/// inside it.
pub fn messages_received_by(
    grid: &Grid,
    set: &BTreeSet<Coord>,
    d: Direction,
) -> BTreeSet<DirectedEdge> {
    set.iter()
        .map(|&head| head.offset(d.opposite()))
        .filter(|src| grid.contains(*src) && !set.contains(src))
        .map(|src| DirectedEdge::toward(src, d))
        .collect()
}

/// Edges `(a,b) -> (a,b) + v(d)` with `(a,b)` in `set` and the head on the grid.
pub fn messages_sent_from(
    grid: &Grid,
    set: &BTreeSet<Coord>,
    d: Direction,
) -> BTreeSet<DirectedEdge> {
    set.iter()
        .filter(|c| grid.contains(c.offset(d)))
        .map(|&c| DirectedEdge::toward(c, d))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub edge: DirectedEdge,
    pub iteration: usize,
    pub value: i8,
}

/// Edge ids resolved once against a trace.
struct EdgeSet {
    edges: Vec<DirectedEdge>,
    ids: Vec<usize>,
}

impl EdgeSet {
    fn new(trace: &GridTrace, edges: impl IntoIterator<Item = DirectedEdge>) -> Self {
        let edges: Vec<DirectedEdge> = edges.into_iter().collect();
        let ids = edges
            .iter()
            .map(|e| {
                grid_edge_id(&trace.graph, &trace.grid, e.from, e.to)
                    .expect("edge with an interior endpoint carries a message")
            })
            .collect();
        EdgeSet { edges, ids }
    }

    /// First `(iteration, edge)` in `[from, n_max]` whose value is not `sigma`.
    fn first_violation(&self, trace: &GridTrace, sigma: i8, from: usize) -> Option<Violation> {
        for state in trace.trace.states.iter().skip(from) {
            for (e, id) in self.edges.iter().zip(&self.ids) {
                let value = state.values[*id];
                if value != sigma {
                    return Some(Violation {
                        edge: *e,
                        iteration: state.n,
                        value,
                    });
                }
            }
        }
        None
    }

    /// Smallest `n` such that every edge equals `sigma` on `[n, n_max]`.
    fn converged_at(&self, trace: &GridTrace, sigma: i8) -> Option<usize> {
        let mut at = None;
        for state in trace.trace.states.iter().rev() {
            if self.ids.iter().all(|id| state.values[*id] == sigma) {
                at = Some(state.n);
            } else {
                break;
            }
        }
        at
    }
}

fn require_compatible(t: &CompatibleTuple, grid: &Grid) -> Result<()> {
    if !t.is_compatible() {
        return Err(Error::IncompatibleTuple(t.to_string()));
    }
    Rectangle::new(grid, t.from, t.to).map(|_| ())
}

fn require_window(trace: &GridTrace, needed: usize) -> Result<()> {
    if trace.n_max() < needed {
        return Err(Error::TraceTooShort {
            needed,
            available: trace.n_max(),
        });
    }
    Ok(())
}

fn received_edges(grid: &Grid, t: &CompatibleTuple) -> BTreeSet<DirectedEdge> {
    let nodes = t.rectangle().nodes();
    let mut out = messages_received_by(grid, &nodes, t.d1);
    out.extend(messages_received_by(grid, &nodes, t.d2));
    out
}

fn sent_edges(grid: &Grid, nodes: &BTreeSet<Coord>, dirs: &[Direction]) -> BTreeSet<DirectedEdge> {
    dirs.iter()
        .flat_map(|d| messages_sent_from(grid, nodes, *d))
        .collect()
}

/// Every message received by the tuple's rectangle from its two directions
/// equals `sigma` on `[n0, n_max]`.
pub fn check_fc(trace: &GridTrace, t: &CompatibleTuple, sigma: i8, n0: usize) -> Result<bool> {
    require_compatible(t, &trace.grid)?;
    require_window(trace, n0)?;
    let received = EdgeSet::new(trace, received_edges(&trace.grid, t));
    Ok(received.first_violation(trace, sigma, n0).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub d: usize,
    pub deadline: usize,
    pub converged_at: Option<usize>,
    pub holds: bool,
    pub first_violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FcReport {
    pub tuple: CompatibleTuple,
    pub sigma: i8,
    pub n0: usize,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub first_violation: Option<Violation>,
    pub deadline: usize,
    pub converged_at: Option<usize>,
    pub cut_rectangles: Vec<CutReport>,
}

impl FcReport {
    pub fn cut_rectangles_hold(&self) -> bool {
        self.cut_rectangles.iter().all(|c| c.holds)
    }
}

/// Forward convergence: checks that the messages sent from the rectangle in
/// both tuple directions equal `sigma` from `n0 + 2N - 1` on, and that those
/// sent from each cut-rectangle `R(D)`, `D = 1..=2N-1`, do so from `n0 + D`.
pub fn verify_fc_lemma(
    trace: &GridTrace,
    t: &CompatibleTuple,
    sigma: i8,
    n0: usize,
) -> Result<FcReport> {
    let grid = trace.grid;
    let n = grid.n();
    let deadline = n0 + 2 * n - 1;
    require_window(trace, deadline)?;
    let hypothesis_holds = check_fc(trace, t, sigma, n0)?;
    let dirs = t.directions();

    let sent = EdgeSet::new(trace, sent_edges(&grid, &t.rectangle().nodes(), &dirs));
    let first_violation = sent.first_violation(trace, sigma, deadline);

    let cut_rectangles = (1..=2 * n - 1)
        .map(|d| {
            let cut = EdgeSet::new(trace, sent_edges(&grid, &t.cut_rectangle(d).nodes(), &dirs));
            let violation = cut.first_violation(trace, sigma, n0 + d);
            CutReport {
                d,
                deadline: n0 + d,
                converged_at: cut.converged_at(trace, sigma),
                holds: violation.is_none(),
                first_violation: violation,
            }
        })
        .collect();

    Ok(FcReport {
        tuple: *t,
        sigma,
        n0,
        hypothesis_holds,
        conclusion_holds: first_violation.is_none(),
        first_violation,
        deadline,
        converged_at: sent.converged_at(trace, sigma),
        cut_rectangles,
    })
}

/// The direction in neither tuple, when the two direction sets share
/// exactly one element.
pub fn bc_direction(t1: &CompatibleTuple, t2: &CompatibleTuple) -> Option<Direction> {
    let s1: BTreeSet<Direction> = t1.directions().into();
    let s2: BTreeSet<Direction> = t2.directions().into();
    if s1.len() != 2 || s2.len() != 2 || s1.intersection(&s2).count() != 1 {
        return None;
    }
    let union: BTreeSet<Direction> = s1.union(&s2).copied().collect();
    Direction::ALL.into_iter().find(|d| !union.contains(d))
}

/// Both tuples are forward convergent to `sigma` at `n0` and share exactly
/// one direction; returns the backward-convergence direction.
pub fn check_bc(
    trace: &GridTrace,
    t1: &CompatibleTuple,
    t2: &CompatibleTuple,
    sigma: i8,
    n0: usize,
) -> Result<(bool, Option<Direction>)> {
    let direction = bc_direction(t1, t2);
    let fc1 = check_fc(trace, t1, sigma, n0)?;
    let fc2 = check_fc(trace, t2, sigma, n0)?;
    Ok((fc1 && fc2 && direction.is_some(), direction))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcReport {
    pub tuples: [CompatibleTuple; 2],
    pub sigma: i8,
    pub n0: usize,
    pub direction: Option<Direction>,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// The two rectangles do not intersect, so there is nothing to check.
    pub vacuous: bool,
    pub first_violation: Option<Violation>,
    pub deadline: usize,
}

/// Backward convergence: messages sent from the intersection of the two
/// rectangles in the BC direction equal `sigma` from `n0 + 2N` on.
pub fn verify_bc_lemma(
    trace: &GridTrace,
    t1: &CompatibleTuple,
    t2: &CompatibleTuple,
    sigma: i8,
    n0: usize,
) -> Result<BcReport> {
    let grid = trace.grid;
    let deadline = n0 + 2 * grid.n();
    require_window(trace, deadline)?;
    let (hypothesis_holds, direction) = check_bc(trace, t1, t2, sigma, n0)?;
    let overlap: BTreeSet<Coord> = t1
        .rectangle()
        .nodes()
        .intersection(&t2.rectangle().nodes())
        .copied()
        .collect();
    let first_violation = direction.and_then(|d| {
        EdgeSet::new(trace, messages_sent_from(&grid, &overlap, d))
            .first_violation(trace, sigma, deadline)
    });
    Ok(BcReport {
        tuples: [*t1, *t2],
        sigma,
        n0,
        direction,
        hypothesis_holds,
        conclusion_holds: direction.is_some() && first_violation.is_none(),
        vacuous: overlap.is_empty(),
        first_violation,
        deadline,
    })
}

/// The JSON shape shared by both lemma reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub lemma: String,
    pub tuple: Vec<CompatibleTuple>,
    pub sigma: i8,
    pub n0: usize,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_violation: Option<Violation>,
}

impl From<&FcReport> for LemmaRecord {
    fn from(r: &FcReport) -> Self {
        LemmaRecord {
            lemma: "forward".into(),
            tuple: vec![r.tuple],
            sigma: r.sigma,
            n0: r.n0,
            hypothesis_holds: r.hypothesis_holds,
            conclusion_holds: r.conclusion_holds,
            first_violation: r.first_violation,
        }
    }
}

impl From<&BcReport> for LemmaRecord {
    fn from(r: &BcReport) -> Self {
        LemmaRecord {
            lemma: "backward".into(),
            tuple: r.tuples.to_vec(),
            sigma: r.sigma,
            n0: r.n0,
            hypothesis_holds: r.hypothesis_holds,
            conclusion_holds: r.conclusion_holds,
            first_violation: r.first_violation,
        }
    }
}

/// Every compatible tuple with both corners in `B`.
pub fn compatible_tuples(grid: &Grid) -> Vec<CompatibleTuple> {
    let interior = grid.interior();
    let mut out = Vec::new();
    for &from in &interior {
        for &to in &interior {
            for (d1, d2) in ADJACENT_PAIRS {
                let t = CompatibleTuple::new(from, to, d1, d2);
                if t.is_compatible() {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct LemmaSweepOptions {
    /// Hypotheses are tried at every `n0` in `0..=max_n0`.
    pub max_n0: usize,
    pub cut_rectangles: bool,
    pub backward: bool,
}

impl Default for LemmaSweepOptions {
    fn default() -> Self {
        LemmaSweepOptions {
            max_n0: 0,
            cut_rectangles: true,
            backward: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCounts {
    pub fc_hypotheses: usize,
    pub fc_verified: usize,
    pub cut_instances: usize,
    pub cut_verified: usize,
    pub bc_hypotheses: usize,
    pub bc_verified: usize,
    pub bc_vacuous: usize,
}

impl LemmaCounts {
    pub fn add(&mut self, other: &LemmaCounts) {
        self.fc_hypotheses += other.fc_hypotheses;
        self.fc_verified += other.fc_verified;
        self.cut_instances += other.cut_instances;
        self.cut_verified += other.cut_verified;
        self.bc_hypotheses += other.bc_hypotheses;
        self.bc_verified += other.bc_verified;
        self.bc_vacuous += other.bc_vacuous;
    }

    pub fn failures(&self) -> usize {
        (self.fc_hypotheses - self.fc_verified)
            + (self.cut_instances - self.cut_verified)
            + (self.bc_hypotheses - self.bc_verified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLemmaSweep {
    pub boundary: BoundaryConfig,
    pub counts: LemmaCounts,
    /// Instances whose hypothesis held but whose conclusion failed.
    pub failures: Vec<LemmaRecord>,
}

/// Finds every forward-convergent tuple of the trace of `x` (for both
/// signs and each `n0` up to `opts.max_n0`), and every backward-convergent
/// pair among them, and verifies the corresponding conclusions.
pub fn sweep_lemmas(x: &BoundaryConfig, opts: &LemmaSweepOptions) -> Result<BoundaryLemmaSweep> {
    let grid = x.grid();
    let trace = GridTrace::run(x, opts.max_n0 + 2 * grid.n() + 10)?;
    let tuples = compatible_tuples(&grid);
    let received: Vec<EdgeSet> = tuples
        .iter()
        .map(|t| EdgeSet::new(&trace, received_edges(&grid, t)))
        .collect();

    let mut counts = LemmaCounts::default();
    let mut failures = Vec::new();
    for n0 in 0..=opts.max_n0 {
        for sigma in [1i8, -1] {
            let holding: Vec<&CompatibleTuple> = tuples
                .iter()
                .zip(&received)
                .filter(|(_, r)| r.first_violation(&trace, sigma, n0).is_none())
                .map(|(t, _)| t)
                .collect();
            for t in &holding {
                let mut report = verify_fc_lemma(&trace, t, sigma, n0)?;
                if !opts.cut_rectangles {
                    report.cut_rectangles.clear();
                }
                counts.fc_hypotheses += 1;
                counts.fc_verified += report.conclusion_holds as usize;
                counts.cut_instances += report.cut_rectangles.len();
                counts.cut_verified += report.cut_rectangles.iter().filter(|c| c.holds).count();
                if !report.conclusion_holds || !report.cut_rectangles_hold() {
                    failures.push(LemmaRecord::from(&report));
                }
            }
            if !opts.backward {
                continue;
            }
            for (k, t1) in holding.iter().enumerate() {
                for t2 in &holding[k + 1..] {
                    if bc_direction(t1, t2).is_none() {
                        continue;
                    }
                    let report = verify_bc_lemma(&trace, t1, t2, sigma, n0)?;
                    counts.bc_hypotheses += 1;
                    counts.bc_verified += report.conclusion_holds as usize;
                    counts.bc_vacuous += report.vacuous as usize;
                    if !report.conclusion_holds {
                        failures.push(LemmaRecord::from(&report));
                    }
                }
            }
        }
    }
    Ok(BoundaryLemmaSweep {
        boundary: x.clone(),
        counts,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservationKind {
    Forward {
        tuple: CompatibleTuple,
    },
    Backward {
        tuples: [CompatibleTuple; 2],
        direction: Direction,
    },
}

/// One fact of the case analysis, stated in the canonical frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub label: String,
    pub kind: ObservationKind,
    pub sigma: i8,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReplay {
    pub boundary: BoundaryConfig,
    pub case: CaseAnalysis,
    pub observations: Vec<Observation>,
    /// Edges assigned two different values by the observations.
    pub conflicts: Vec<DirectedEdge>,
    /// Messages into the interior not pinned down by any observation.
    pub undetermined: Vec<DirectedEdge>,
    /// Sum of implied incoming messages, in the original frame.
    pub implied: Option<LocalSolutionField>,
    pub matches_trace: bool,
    pub matches_closed_form: bool,
}

impl ProofReplay {
    pub fn holds(&self) -> bool {
        self.observations
            .iter()
            .all(|o| o.hypothesis_holds && o.conclusion_holds)
            && self.conflicts.is_empty()
            && self.undetermined.is_empty()
            && self.matches_trace
            && self.matches_closed_form
    }
}

fn fc_tuple(from: Coord, to: Coord, d1: Direction, d2: Direction) -> CompatibleTuple {
    CompatibleTuple::new(from, to, d1, d2)
}

/// The observations of the case analysis for a canonical boundary.
fn canonical_observations(grid: &Grid, case: &CaseAnalysis) -> Vec<(String, i8, ObservationKind)> {
    use Direction::*;
    let n = grid.n() as i32;
    let (sw, se, ne, nw) = (
        Coord::new(1, 1),
        Coord::new(n, 1),
        Coord::new(n, n),
        Coord::new(1, n),
    );
    let fwd = |t| ObservationKind::Forward { tuple: t };
    let bwd = |t1: CompatibleTuple, t2: CompatibleTuple| ObservationKind::Backward {
        direction: bc_direction(&t1, &t2).expect("observation pairs share one direction"),
        tuples: [t1, t2],
    };
    let mut out = Vec::new();
    match case.corner_count {
        1 => {
            let (alpha, beta) = (case.endpoints[0].a, case.endpoints[1].b);
            out.push((
                "lower left".into(),
                1,
                fwd(fc_tuple(sw, Coord::new(alpha, beta), East, North)),
            ));
            out.push(("upper right".into(), -1, fwd(fc_tuple(ne, sw, West, South))));
            if alpha < n {
                out.push((
                    "right".into(),
                    -1,
                    bwd(
                        fc_tuple(se, Coord::new(alpha + 1, n), North, West),
                        fc_tuple(ne, Coord::new(alpha + 1, 1), South, West),
                    ),
                ));
            }
            if beta < n {
                out.push((
                    "top".into(),
                    -1,
                    bwd(
                        fc_tuple(nw, Coord::new(n, beta + 1), East, South),
                        fc_tuple(ne, Coord::new(1, beta + 1), South, West),
                    ),
                ));
            }
        }
        2 => {
            // canonical frame: the south stretch is the longer one
            let (lo, hi) = (case.endpoints[1].a, case.endpoints[0].a);
            out.push((
                "lower left".into(),
                1,
                fwd(fc_tuple(sw, Coord::new(hi, n), East, North)),
            ));
            if lo < n {
                out.push((
                    "upper right".into(),
                    -1,
                    fwd(fc_tuple(ne, Coord::new(lo + 1, 1), West, South)),
                ));
            }
            out.push((
                "left".into(),
                1,
                bwd(
                    fc_tuple(sw, Coord::new(lo, n), North, East),
                    fc_tuple(nw, Coord::new(lo, 1), South, East),
                ),
            ));
            if hi < n {
                out.push((
                    "right".into(),
                    -1,
                    bwd(
                        fc_tuple(ne, Coord::new(hi + 1, 1), West, South),
                        fc_tuple(se, Coord::new(hi + 1, n), North, West),
                    ),
                ));
            }
        }
        _ => {
            out.push((
                "dagger".into(),
                -1,
                bwd(fc_tuple(ne, sw, South, West), fc_tuple(se, nw, North, West)),
            ));
        }
    }
    out
}

/// Replays the case analysis behind the convergence theorem on one
/// boundary: normalizes and orients it, checks each observation against the
/// trace, collects the messages the lemmas pin down after `2N` iterations,
/// and sums them into the field they imply.
pub fn replay_proof(x: &BoundaryConfig) -> Result<ProofReplay> {
    let grid = x.grid();
    let n = grid.n();
    let case = case_analysis(&grid, x)?;
    let trace = GridTrace::run(&case.canonical, 2 * n + 10)?;

    let mut implied: BTreeMap<DirectedEdge, i8> = BTreeMap::new();
    let mut conflicts = BTreeSet::new();
    let mut assign = |edges: BTreeSet<DirectedEdge>, sigma: i8| {
        for e in edges {
            if let Some(old) = implied.insert(e, sigma) {
                if old != sigma {
                    conflicts.insert(e);
                }
            }
        }
    };
    for c in grid.ring() {
        let v = case.canonical.get(c).unwrap();
        for nb in grid.neighbors(c).filter(|nb| grid.is_interior(*nb)) {
            assign(BTreeSet::from([DirectedEdge { from: c, to: nb }]), v);
        }
    }

    let mut observations = Vec::new();
    for (label, sigma, kind) in canonical_observations(&grid, &case) {
        let (hypothesis_holds, conclusion_holds) = match &kind {
            ObservationKind::Forward { tuple } => {
                let r = verify_fc_lemma(&trace, tuple, sigma, 0)?;
                if r.hypothesis_holds {
                    assign(
                        sent_edges(&grid, &tuple.rectangle().nodes(), &tuple.directions()),
                        sigma,
                    );
                }
                (r.hypothesis_holds, r.conclusion_holds)
            }
            ObservationKind::Backward { tuples, direction } => {
                let r = verify_bc_lemma(&trace, &tuples[0], &tuples[1], sigma, 0)?;
                if r.hypothesis_holds {
                    for t in tuples {
                        assign(
                            sent_edges(&grid, &t.rectangle().nodes(), &t.directions()),
                            sigma,
                        );
                    }
                    let overlap: BTreeSet<Coord> = tuples[0]
                        .rectangle()
                        .nodes()
                        .intersection(&tuples[1].rectangle().nodes())
                        .copied()
                        .collect();
                    assign(messages_sent_from(&grid, &overlap, *direction), sigma);
                }
                (r.hypothesis_holds, r.conclusion_holds)
            }
        };
        observations.push(Observation {
            label,
            kind,
            sigma,
            hypothesis_holds,
            conclusion_holds,
        });
    }

    let mut undetermined = Vec::new();
    let canonical_field = LocalSolutionField::from_fn(&grid, |c| {
        grid.neighbors(c)
            .map(|nb| {
                let e = DirectedEdge { from: nb, to: c };
                implied.get(&e).copied().unwrap_or_else(|| {
                    undetermined.push(e);
                    0
                }) as i32
            })
            .sum()
    });
    let t = case.transform;
    let field = LocalSolutionField::from_fn(&grid, |c| {
        t.apply_sign(canonical_field.get(t.apply_coord(&grid, c)).unwrap())
    });

    let original = GridTrace::run(x, 2 * n)?;
    let matches_trace = original.estimates(2 * n) == field;
    let matches_closed_form = case
        .classes
        .to_field(&grid)
        .map(|f| f == field)
        .unwrap_or(false);
    let conflicts: Vec<DirectedEdge> = conflicts.into_iter().collect();
    let complete = conflicts.is_empty() && undetermined.is_empty();
    Ok(ProofReplay {
        boundary: x.clone(),
        case,
        observations,
        conflicts,
        undetermined,
        implied: complete.then_some(field),
        matches_trace: complete && matches_trace,
        matches_closed_form: complete && matches_closed_form,
    })
}
