//! Region geometry of a one-run boundary.
//!
//! For each run we enumerate the shortest paths joining its two endpoints
//! through the interior (or through boundary sites of the run's own sign),
//! pick the one enclosing the fewest nodes together with the run (inner) and
//! the one enclosing the most (outer), and derive the five region classes
//! whose local solutions are `+4, +2, 0, -2, -4`.
//!
//! Enclosure is decided on the planar embedding: unit-square faces are
//! flood-filled from outside the grid, never crossing a curve edge, and a
//! node off the curve is enclosed iff its faces were not reached.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::field::LocalSolutionField;
use crate::grid::{
    classify_boundary, contract_corners, normalize_one_run, BoundaryConfig, Coord, Grid,
    InteriorCorner, SymmetryTransform,
};
use crate::oracle;
use crate::{Error, Result};

/// Default cap on the number of shortest paths enumerated per run.
pub const PATH_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplePath {
    pub nodes: Vec<Coord>,
}

impl SimplePath {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPaths {
    /// Number of nodes `k` on every path.
    pub length: usize,
    /// All minimum-length paths, sorted, each from the run's first endpoint
    /// (in ring order) to its last.
    pub paths: Vec<SimplePath>,
}

/// The run of `sign` in ring order. The boundary must be one-run.
pub fn run_arc(grid: &Grid, x: &BoundaryConfig, sign: i8) -> Result<Vec<Coord>> {
    let rs = classify_boundary(grid, x)?;
    if rs.uniform {
        return Err(Error::Degenerate("uniform".into()));
    }
    if !rs.one_run {
        return Err(Error::NotOneRun);
    }
    let run = rs.single_run(sign).ok_or(Error::NotOneRun)?;
    let ring = grid.ring();
    Ok(run.ring_indices(grid.ring_len()).map(|i| ring[i]).collect())
}

/// All minimum-length simple paths between the endpoints of the `sign` run,
/// through interior sites or boundary sites carrying `sign`.
///
/// Paths are read off the breadth-first predecessor structure; their number
/// is counted first and enumeration aborts if it exceeds `cap`.
pub fn shortest_simple_paths(
    grid: &Grid,
    x: &BoundaryConfig,
    sign: i8,
    cap: usize,
) -> Result<ShortestPaths> {
    let arc = run_arc(grid, x, sign)?;
    let (start, end) = (arc[0], *arc.last().unwrap());
    let allowed = |c: Coord| grid.is_interior(c) || x.get(c) == Some(sign);

    let mut dist = vec![usize::MAX; grid.vertex_count()];
    let mut order = Vec::new();
    dist[grid.vertex_index(start)] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        order.push(c);
        let d = dist[grid.vertex_index(c)];
        for nb in grid.neighbors(c) {
            let k = grid.vertex_index(nb);
            if allowed(nb) && dist[k] == usize::MAX {
                dist[k] = d + 1;
                queue.push_back(nb);
            }
        }
    }
    let end_dist = dist[grid.vertex_index(end)];
    debug_assert!(
        end_dist != usize::MAX,
        "the run itself connects its endpoints"
    );

    let preds = |c: Coord| -> Vec<Coord> {
        let d = dist[grid.vertex_index(c)];
        grid.neighbors(c)
            .filter(|nb| allowed(*nb) && d > 0 && dist[grid.vertex_index(*nb)] == d - 1)
            .collect()
    };

    let mut count = vec![0usize; grid.vertex_count()];
    count[grid.vertex_index(start)] = 1;
    for &c in order.iter().skip(1) {
        let total = preds(c).iter().fold(0usize, |acc, p| {
            acc.saturating_add(count[grid.vertex_index(*p)])
        });
        count[grid.vertex_index(c)] = total;
    }
    if count[grid.vertex_index(end)] > cap {
        return Err(Error::PathCap { cap });
    }

    let mut paths = Vec::with_capacity(count[grid.vertex_index(end)]);
    let mut stack = vec![end];
    collect_paths(&preds, start, &mut stack, &mut paths);
    paths.sort();
    Ok(ShortestPaths {
        length: end_dist + 1,
        paths,
    })
}

fn collect_paths(
    preds: &dyn Fn(Coord) -> Vec<Coord>,
    start: Coord,
    stack: &mut Vec<Coord>,
    out: &mut Vec<SimplePath>,
) {
    let top = *stack.last().unwrap();
    if top == start {
        out.push(SimplePath {
            nodes: stack.iter().rev().copied().collect(),
        });
        return;
    }
    for p in preds(top) {
        stack.push(p);
        collect_paths(preds, start, stack, out);
        stack.pop();
    }
}

fn undirected(u: Coord, v: Coord) -> (Coord, Coord) {
    (u.min(v), u.max(v))
}

/// Nodes strictly inside the closed curve formed by `path` and the boundary
/// `arc` joining its endpoints.
///
/// Both walks must be chains of grid neighbors with matching endpoints, so
/// that together they form a closed walk.
pub fn enclosed_nodes(grid: &Grid, path: &[Coord], arc: &[Coord]) -> Result<BTreeSet<Coord>> {
    let (Some(&p0), Some(&p1), Some(&a0), Some(&a1)) =
        (path.first(), path.last(), arc.first(), arc.last())
    else {
        return Err(Error::DegenerateCurve("empty path or arc".into()));
    };
    if !((p0 == a0 && p1 == a1) || (p0 == a1 && p1 == a0)) {
        return Err(Error::DegenerateCurve(format!(
            "path {p0}..{p1} does not close the arc {a0}..{a1}"
        )));
    }
    let mut degree: BTreeMap<Coord, usize> = BTreeMap::new();
    let mut edges = HashSet::new();
    for walk in [path, arc] {
        for c in walk {
            if !grid.contains(*c) {
                return Err(Error::DegenerateCurve(format!("{c} is off the grid")));
            }
        }
        for pair in walk.windows(2) {
            if pair[0].l1_distance(pair[1]) != 1 {
                return Err(Error::DegenerateCurve(format!(
                    "{} and {} are not neighbors",
                    pair[0], pair[1]
                )));
            }
            *degree.entry(pair[0]).or_default() += 1;
            *degree.entry(pair[1]).or_default() += 1;
            edges.insert(undirected(pair[0], pair[1]));
        }
    }
    if let Some((c, _)) = degree.iter().find(|(_, d)| **d % 2 == 1) {
        return Err(Error::DegenerateCurve(format!(
            "curve is not closed at {c}"
        )));
    }

    // faces (fa, fb) are unit squares [fa, fa+1] x [fb, fb+1], fa, fb in -1..=N+1
    let hi = grid.n() as i32 + 1;
    let span = (hi + 2) as usize;
    let face_index = |fa: i32, fb: i32| ((fb + 1) as usize) * span + (fa + 1) as usize;
    let mut outside = vec![false; span * span];
    outside[face_index(-1, -1)] = true;
    let mut queue = VecDeque::from([(-1, -1)]);
    while let Some((fa, fb)) = queue.pop_front() {
        // (neighbor face, the grid edge shared with it)
        let moves = [
            (
                (fa + 1, fb),
                undirected(Coord::new(fa + 1, fb), Coord::new(fa + 1, fb + 1)),
            ),
            (
                (fa - 1, fb),
                undirected(Coord::new(fa, fb), Coord::new(fa, fb + 1)),
            ),
            (
                (fa, fb + 1),
                undirected(Coord::new(fa, fb + 1), Coord::new(fa + 1, fb + 1)),
            ),
            (
                (fa, fb - 1),
                undirected(Coord::new(fa, fb), Coord::new(fa + 1, fb)),
            ),
        ];
        for ((na, nb), shared) in moves {
            if !(-1..=hi).contains(&na) || !(-1..=hi).contains(&nb) {
                continue;
            }
            if edges.contains(&shared) || outside[face_index(na, nb)] {
                continue;
            }
            outside[face_index(na, nb)] = true;
            queue.push_back((na, nb));
        }
    }

    let on_curve: BTreeSet<Coord> = path.iter().chain(arc).copied().collect();
    Ok(grid
        .vertices()
        .into_iter()
        .filter(|c| !on_curve.contains(c) && !outside[face_index(c.a, c.b)])
        .collect())
}

/// The five region classes of a one-run boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionClass {
    /// Positive inner region minus its touching rim: `+4`.
    InnerPlus,
    /// Positive inner sites touching the negative outer region: `+2`.
    DeltaPlus,
    /// Both outer regions: `0`.
    OuterBoth,
    /// Negative inner sites touching the positive outer region: `-2`.
    DeltaMinus,
    /// Negative inner region minus its rim: `-4`.
    InnerMinus,
}

impl RegionClass {
    pub const ALL: [RegionClass; 5] = [
        RegionClass::InnerPlus,
        RegionClass::DeltaPlus,
        RegionClass::OuterBoth,
        RegionClass::DeltaMinus,
        RegionClass::InnerMinus,
    ];

    pub fn local_solution(self) -> i32 {
        match self {
            RegionClass::InnerPlus => 4,
            RegionClass::DeltaPlus => 2,
            RegionClass::OuterBoth => 0,
            RegionClass::DeltaMinus => -2,
            RegionClass::InnerMinus => -4,
        }
    }

    pub fn from_local_solution(v: i32) -> Option<Self> {
        RegionClass::ALL
            .into_iter()
            .find(|c| c.local_solution() == v)
    }

    /// The class with the roles of `+` and `-` exchanged.
    pub fn color_flipped(self) -> Self {
        match self {
            RegionClass::InnerPlus => RegionClass::InnerMinus,
            RegionClass::DeltaPlus => RegionClass::DeltaMinus,
            RegionClass::OuterBoth => RegionClass::OuterBoth,
            RegionClass::DeltaMinus => RegionClass::DeltaPlus,
            RegionClass::InnerMinus => RegionClass::InnerPlus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionClass::InnerPlus => "inner_plus",
            RegionClass::DeltaPlus => "delta_plus",
            RegionClass::OuterBoth => "outer_both",
            RegionClass::DeltaMinus => "delta_minus",
            RegionClass::InnerMinus => "inner_minus",
        }
    }
}

/// Interior sites grouped by region class. The five sets are expected to
/// partition the interior; [`RegionClasses::check_partition`] verifies it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionClasses {
    pub sets: BTreeMap<RegionClass, BTreeSet<Coord>>,
}

impl RegionClasses {
    pub fn get(&self, class: RegionClass) -> BTreeSet<Coord> {
        self.sets.get(&class).cloned().unwrap_or_default()
    }

    fn insert(&mut self, class: RegionClass, c: Coord) {
        self.sets.entry(class).or_default().insert(c);
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(Coord) -> RegionClass) -> Self {
        let mut out = RegionClasses::default();
        for c in grid.interior() {
            out.insert(f(c), c);
        }
        out
    }

    pub fn classes_of(&self, c: Coord) -> Vec<RegionClass> {
        self.sets
            .iter()
            .filter(|(_, s)| s.contains(&c))
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn check_partition(&self, grid: &Grid) -> Result<()> {
        let mut problems = Vec::new();
        for c in grid.interior() {
            match self.classes_of(c).as_slice() {
                [_] => {}
                [] => problems.push(format!("{c} is in no class")),
                many => problems.push(format!("{c} is in {many:?}")),
            }
        }
        for s in self.sets.values() {
            if let Some(c) = s.iter().find(|c| !grid.is_interior(**c)) {
                problems.push(format!("{c} is not interior"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::PartitionViolation(problems.join("; ")))
        }
    }

    pub fn to_field(&self, grid: &Grid) -> Result<LocalSolutionField> {
        self.check_partition(grid)?;
        Ok(LocalSolutionField::from_fn(grid, |c| {
            self.classes_of(c)[0].local_solution()
        }))
    }

    /// Classes of `T(x)` given the classes of `x`.
    pub fn transformed(&self, grid: &Grid, t: &SymmetryTransform) -> Self {
        let mut out = RegionClasses::default();
        for (class, set) in &self.sets {
            let target = if t.color_flip {
                class.color_flipped()
            } else {
                *class
            };
            for c in set {
                out.insert(target, t.apply_coord(grid, *c));
            }
        }
        out
    }

    /// `{class name -> coordinate list}` including empty classes.
    pub fn export(&self) -> BTreeMap<String, Vec<Coord>> {
        RegionClass::ALL
            .into_iter()
            .map(|k| (k.name().to_string(), self.get(k).into_iter().collect()))
            .collect()
    }

    fn normalized(&self) -> BTreeMap<RegionClass, BTreeSet<Coord>> {
        self.sets
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(k, s)| (*k, s.clone()))
            .collect()
    }

    pub fn same_as(&self, other: &RegionClasses) -> bool {
        self.normalized() == other.normalized()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalPaths {
    pub length: usize,
    pub path_count: usize,
    pub inner: SimplePath,
    pub outer: SimplePath,
    pub inner_region_size: usize,
    pub outer_region_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionSource {
    ShortestPaths,
    /// The boundary is uniform once mixed corners are contracted.
    Degenerate,
    /// Path enumeration hit its cap; classes read off exact local solutions.
    OracleFallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDecomposition {
    pub boundary: BoundaryConfig,
    /// The boundary with mixed outer corners contracted to `-1`.
    pub contracted: BoundaryConfig,
    pub source: RegionSource,
    pub plus_paths: Option<ExtremalPaths>,
    pub minus_paths: Option<ExtremalPaths>,
    /// `I+`, `O+`, `I-`, `O-` over the whole vertex set.
    pub inner_plus: BTreeSet<Coord>,
    pub outer_plus: BTreeSet<Coord>,
    pub inner_minus: BTreeSet<Coord>,
    pub outer_minus: BTreeSet<Coord>,
    pub classes: RegionClasses,
    pub corners: Vec<InteriorCorner>,
    pub diagnostics: Vec<String>,
}

/// Interior corners whose two outward boundary neighbors are both `+1`.
pub fn corner_set(grid: &Grid, x: &BoundaryConfig) -> Vec<InteriorCorner> {
    use crate::grid::Direction::*;
    InteriorCorner::ALL
        .into_iter()
        .filter(|corner| {
            let c = grid.corner(*corner);
            let outward = match corner {
                InteriorCorner::Sw => [West, South],
                InteriorCorner::Se => [East, South],
                InteriorCorner::Ne => [East, North],
                InteriorCorner::Nw => [West, North],
            };
            outward.iter().all(|d| x.get(c.offset(*d)) == Some(1))
        })
        .collect()
}

pub fn region_decomposition(grid: &Grid, x: &BoundaryConfig) -> Result<RegionDecomposition> {
    region_decomposition_capped(grid, x, PATH_CAP)
}

/// Region decomposition with an explicit path cap. When the cap is hit the
/// classes are derived from exact local solutions instead.
pub fn region_decomposition_capped(
    grid: &Grid,
    x: &BoundaryConfig,
    cap: usize,
) -> Result<RegionDecomposition> {
    match decompose_by_paths(grid, x, cap) {
        Err(Error::PathCap { cap }) => {
            let mut r = decompose_from_oracle(grid, x)?;
            r.diagnostics.push(format!(
                "more than {cap} shortest paths; classes taken from the oracle"
            ));
            Ok(r)
        }
        other => other,
    }
}

fn check_one_run(grid: &Grid, x: &BoundaryConfig) -> Result<()> {
    let rs = classify_boundary(grid, x)?;
    if rs.uniform {
        Err(Error::Degenerate("uniform".into()))
    } else if !rs.one_run {
        Err(Error::NotOneRun)
    } else {
        Ok(())
    }
}

fn decompose_by_paths(grid: &Grid, x: &BoundaryConfig, cap: usize) -> Result<RegionDecomposition> {
    check_one_run(grid, x)?;
    let contracted = contract_corners(grid, x);
    let corners = corner_set(grid, &contracted);
    let all: BTreeSet<Coord> = grid.vertices().into_iter().collect();

    if let Some(sign) = contracted.uniform_sign() {
        let class = if sign > 0 {
            RegionClass::InnerPlus
        } else {
            RegionClass::InnerMinus
        };
        let (full, empty) = (all.clone(), BTreeSet::new());
        let (ip, op, im, om) = if sign > 0 {
            (full.clone(), full, empty.clone(), empty)
        } else {
            (empty.clone(), empty, full.clone(), full)
        };
        return Ok(RegionDecomposition {
            boundary: x.clone(),
            contracted,
            source: RegionSource::Degenerate,
            plus_paths: None,
            minus_paths: None,
            inner_plus: ip,
            outer_plus: op,
            inner_minus: im,
            outer_minus: om,
            classes: RegionClasses::from_fn(grid, |_| class),
            corners,
            diagnostics: vec!["uniform after corner contraction".into()],
        });
    }

    let mut diagnostics = Vec::new();
    let mut extremal = |sign: i8| -> Result<(ExtremalPaths, BTreeSet<Coord>, BTreeSet<Coord>)> {
        let arc = run_arc(grid, &contracted, sign)?;
        let sp = shortest_simple_paths(grid, &contracted, sign, cap)?;
        let region = |p: &SimplePath, enclosed: &BTreeSet<Coord>| -> BTreeSet<Coord> {
            p.nodes
                .iter()
                .chain(&arc)
                .chain(enclosed)
                .copied()
                .collect()
        };
        // the closed curve counts as enclosed; strict interiors alone tie
        // whenever a path runs along the run itself
        let mut scored = Vec::with_capacity(sp.paths.len());
        for p in &sp.paths {
            let enclosed = enclosed_nodes(grid, &p.nodes, &arc)?;
            scored.push((region(p, &enclosed).len(), p, enclosed));
        }
        let min_count = scored.iter().map(|s| s.0).min().unwrap();
        let max_count = scored.iter().map(|s| s.0).max().unwrap();
        // paths are sorted, so the first hit is the lexicographically smallest
        let inner = scored.iter().find(|s| s.0 == min_count).unwrap();
        let outer = scored.iter().find(|s| s.0 == max_count).unwrap();
        for (label, count) in [("inner", min_count), ("outer", max_count)] {
            let distinct: BTreeSet<BTreeSet<Coord>> = scored
                .iter()
                .filter(|s| s.0 == count)
                .map(|s| region(s.1, &s.2))
                .collect();
            if distinct.len() > 1 {
                diagnostics.push(format!(
                    "{} {label} paths of sign {sign:+} tie at region size {count} with different regions",
                    distinct.len()
                ));
            }
        }
        let paths = ExtremalPaths {
            length: sp.length,
            path_count: sp.paths.len(),
            inner: inner.1.clone(),
            outer: outer.1.clone(),
            inner_region_size: min_count,
            outer_region_size: max_count,
        };
        Ok((paths, region(inner.1, &inner.2), region(outer.1, &outer.2)))
    };
    let (plus_paths, inner_plus, outer_plus) = extremal(1)?;
    let (minus_paths, inner_minus, outer_minus) = extremal(-1)?;

    let touches = |c: Coord, set: &BTreeSet<Coord>| grid.neighbors(c).any(|nb| set.contains(&nb));
    let mut classes = RegionClasses::default();
    for c in grid.interior() {
        let in_ip = inner_plus.contains(&c);
        let in_im = inner_minus.contains(&c);
        if in_ip {
            let class = if touches(c, &outer_minus) {
                RegionClass::DeltaPlus
            } else {
                RegionClass::InnerPlus
            };
            classes.insert(class, c);
        }
        if in_im {
            let class = if touches(c, &outer_plus) {
                RegionClass::DeltaMinus
            } else {
                RegionClass::InnerMinus
            };
            classes.insert(class, c);
        }
        if outer_plus.contains(&c) && outer_minus.contains(&c) {
            classes.insert(RegionClass::OuterBoth, c);
        }
    }
    if let Err(e) = classes.check_partition(grid) {
        diagnostics.push(e.to_string());
    }

    Ok(RegionDecomposition {
        boundary: x.clone(),
        contracted,
        source: RegionSource::ShortestPaths,
        plus_paths: Some(plus_paths),
        minus_paths: Some(minus_paths),
        inner_plus,
        outer_plus,
        inner_minus,
        outer_minus,
        classes,
        corners,
        diagnostics,
    })
}

fn decompose_from_oracle(grid: &Grid, x: &BoundaryConfig) -> Result<RegionDecomposition> {
    check_one_run(grid, x)?;
    let contracted = contract_corners(grid, x);
    let field = oracle::exact_local_solutions(grid, x, oracle::DP_CAP)?;
    let mut classes = RegionClasses::default();
    for (c, v) in field.iter() {
        let class = RegionClass::from_local_solution(v).ok_or_else(|| {
            Error::PartitionViolation(format!("local solution {v} at {c} has no region class"))
        })?;
        classes.insert(class, c);
    }
    let collect = |sign: i8, kinds: &[RegionClass]| -> BTreeSet<Coord> {
        contracted
            .sites_with(sign)
            .into_iter()
            .chain(kinds.iter().flat_map(|k| classes.get(*k)))
            .collect()
    };
    let inner_plus = collect(1, &[RegionClass::InnerPlus, RegionClass::DeltaPlus]);
    let inner_minus = collect(-1, &[RegionClass::InnerMinus, RegionClass::DeltaMinus]);
    let outer_plus = collect(
        1,
        &[
            RegionClass::InnerPlus,
            RegionClass::DeltaPlus,
            RegionClass::OuterBoth,
        ],
    );
    let outer_minus = collect(
        -1,
        &[
            RegionClass::InnerMinus,
            RegionClass::DeltaMinus,
            RegionClass::OuterBoth,
        ],
    );
    Ok(RegionDecomposition {
        boundary: x.clone(),
        corners: corner_set(grid, &contracted),
        contracted,
        source: RegionSource::OracleFallback,
        plus_paths: None,
        minus_paths: None,
        inner_plus,
        outer_plus,
        inner_minus,
        outer_minus,
        classes,
        diagnostics: Vec::new(),
    })
}

/// `+4, +2, 0, -2, -4` on the five classes.
pub fn closed_form_local_solutions(
    grid: &Grid,
    r: &RegionDecomposition,
) -> Result<LocalSolutionField> {
    r.classes.to_field(grid)
}

/// The case split used by the convergence argument, with the region
/// classes given by explicit formulas in a canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseAnalysis {
    /// `|C|`, the number of interior corners with two `+1` boundary neighbors.
    pub corner_count: usize,
    /// Maps the original boundary onto the canonical one (up to contraction).
    pub transform: SymmetryTransform,
    pub canonical: BoundaryConfig,
    /// Run endpoints in the canonical frame.
    pub endpoints: Vec<Coord>,
    pub canonical_classes: RegionClasses,
    /// Classes mapped back to the original frame.
    pub classes: RegionClasses,
}

/// Normalizes a one-run boundary (contraction, `|R+| <= |R-|`) and rotates
/// or reflects it so that the `+` run sits on the west side (`|C| = 0`),
/// wraps the south-west corner (`|C| = 1`) or spans the whole west side
/// (`|C| = 2`, longer `+` stretch on the south row). Then reads the five
/// classes off the closed-form formulas.
pub fn case_analysis(grid: &Grid, x: &BoundaryConfig) -> Result<CaseAnalysis> {
    let (normal, flip) = normalize_one_run(grid, x)?;
    let c_count = corner_set(grid, &normal).len();
    let orient = SymmetryTransform::geometric()
        .into_iter()
        .find(|t| is_canonical(grid, &t.apply_boundary(&normal), c_count))
        .ok_or_else(|| {
            Error::Degenerate(format!("no canonical orientation with |C| = {c_count}"))
        })?;
    let canonical = orient.apply_boundary(&normal);
    let transform = flip.then(&orient);
    let (endpoints, canonical_classes) = canonical_case_classes(grid, &canonical, c_count)?;
    let classes = canonical_classes.transformed(grid, &transform.inverse());
    Ok(CaseAnalysis {
        corner_count: c_count,
        transform,
        canonical,
        endpoints,
        canonical_classes,
        classes,
    })
}

fn is_canonical(grid: &Grid, x: &BoundaryConfig, c_count: usize) -> bool {
    let corners = corner_set(grid, x);
    match c_count {
        0 => x.sites_with(1).iter().all(|c| c.a == 0),
        1 => corners == [InteriorCorner::Sw],
        2 => {
            corners == [InteriorCorner::Sw, InteriorCorner::Nw]
                && plus_prefix_on_row(grid, x, 0)
                    >= plus_prefix_on_row(grid, x, grid.n() as i32 + 1)
        }
        _ => false,
    }
}

/// Largest `a` such that `(0, b) ..= (a, b)` are all `+1`, or `-1`.
fn plus_prefix_on_row(grid: &Grid, x: &BoundaryConfig, b: i32) -> i32 {
    (0..=grid.n() as i32 + 1)
        .take_while(|a| x.get(Coord::new(*a, b)) == Some(1))
        .last()
        .unwrap_or(-1)
}

fn canonical_case_classes(
    grid: &Grid,
    x: &BoundaryConfig,
    c_count: usize,
) -> Result<(Vec<Coord>, RegionClasses)> {
    use RegionClass::*;
    let n = grid.n() as i32;
    let plus_on_row = |b: i32| plus_prefix_on_row(grid, x, b);
    match c_count {
        0 => {
            let plus = x.sites_with(1);
            let Some(lo) = plus.iter().map(|c| c.b).min() else {
                return Ok((Vec::new(), RegionClasses::from_fn(grid, |_| InnerMinus)));
            };
            let hi = plus.iter().map(|c| c.b).max().unwrap();
            let classes = RegionClasses::from_fn(grid, |c| {
                if c.a == 1 && (lo..=hi).contains(&c.b) {
                    DeltaMinus
                } else {
                    InnerMinus
                }
            });
            Ok((vec![Coord::new(0, lo), Coord::new(0, hi)], classes))
        }
        1 => {
            let alpha = plus_on_row(0);
            let beta = (0..=n + 1)
                .take_while(|b| x.get(Coord::new(0, *b)) == Some(1))
                .last()
                .unwrap();
            let classes = RegionClasses::from_fn(grid, |c| {
                if c.a <= alpha && c.b <= beta {
                    OuterBoth
                } else if (c.a == alpha + 1 && c.b <= beta) || (c.a <= alpha && c.b == beta + 1) {
                    DeltaMinus
                } else {
                    InnerMinus
                }
            });
            Ok((vec![Coord::new(alpha, 0), Coord::new(0, beta)], classes))
        }
        2 => {
            let bottom = plus_on_row(0);
            let top = plus_on_row(n + 1);
            let (lo, hi) = (bottom.min(top), bottom.max(top));
            let classes = RegionClasses::from_fn(grid, |c| {
                if c.a < lo {
                    InnerPlus
                } else if c.a == lo {
                    DeltaPlus
                } else if c.a <= hi {
                    OuterBoth
                } else if c.a == hi + 1 {
                    DeltaMinus
                } else {
                    InnerMinus
                }
            });
            Ok((vec![Coord::new(bottom, 0), Coord::new(top, n + 1)], classes))
        }
        _ => Err(Error::Degenerate(format!(
            "|C| = {c_count} after normalization"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_with_plus(grid: &Grid, plus: &[(i32, i32)]) -> BoundaryConfig {
        let mut map = BoundaryConfig::uniform(grid, -1).to_map();
        for &(a, b) in plus {
            map.insert(Coord::new(a, b), 1);
        }
        BoundaryConfig::from_map(grid, &map).unwrap()
    }

    fn corner_wrap(n: usize) -> (Grid, BoundaryConfig) {
        let g = Grid::new(n).unwrap();
        let x = boundary_with_plus(&g, &[(3, 0), (2, 0), (1, 0), (0, 0), (0, 1), (0, 2)]);
        (g, x)
    }

    #[test]
    fn paths_along_the_boundary_when_shortest() {
        let g = Grid::new(4).unwrap();
        let x = boundary_with_plus(&g, &[(1, 0), (2, 0), (3, 0)]);
        let sp = shortest_simple_paths(&g, &x, 1, PATH_CAP).unwrap();
        assert_eq!(sp.length, 3);
        assert_eq!(sp.paths.len(), 1);
        assert!(sp.paths[0].nodes.iter().all(|c| g.is_boundary(*c)));
    }

    #[test]
    fn enumerated_paths_satisfy_the_predicate() {
        let g = Grid::new(3).unwrap();
        let x = boundary_with_plus(&g, &[(2, 0)]);
        for sign in [1, -1] {
            let arc = run_arc(&g, &x, sign).unwrap();
            let sp = shortest_simple_paths(&g, &x, sign, PATH_CAP).unwrap();
            assert!(!sp.paths.is_empty());
            for p in &sp.paths {
                assert_eq!(p.nodes.len(), sp.length);
                assert_eq!(p.nodes[0], arc[0]);
                assert_eq!(*p.nodes.last().unwrap(), *arc.last().unwrap());
                for w in p.nodes.windows(2) {
                    assert_eq!(w[0].l1_distance(w[1]), 1);
                }
                for c in p.nodes.iter().skip(1).take(p.nodes.len().saturating_sub(2)) {
                    assert!(g.is_interior(*c) || x.get(*c) == Some(sign));
                }
                // induced path: no chords between non-consecutive nodes
                for i in 0..p.nodes.len() {
                    for j in i + 2..p.nodes.len() {
                        assert_ne!(p.nodes[i].l1_distance(p.nodes[j]), 1);
                    }
                }
            }
        }
        // the singleton's own path is the single node
        let sp = shortest_simple_paths(&g, &x, 1, PATH_CAP).unwrap();
        assert_eq!(sp.length, 1);
        // its complement detours through the row above it
        let sp = shortest_simple_paths(&g, &x, -1, PATH_CAP).unwrap();
        assert_eq!(sp.length, 5);
        assert_eq!(sp.paths.len(), 1);
        assert_eq!(
            sp.paths[0].nodes,
            [(3, 0), (3, 1), (2, 1), (1, 1), (1, 0)].map(|(a, b)| Coord::new(a, b))
        );
    }

    #[test]
    fn path_cap_aborts() {
        let (g, x) = corner_wrap(5);
        assert_eq!(
            shortest_simple_paths(&g, &x, 1, 1),
            Err(Error::PathCap { cap: 1 })
        );
    }

    #[test]
    fn enclosure_examples() {
        let g = Grid::new(3).unwrap();
        let ring = g.ring();
        // the full ring closed by its last edge encloses all of B
        let path = [*ring.last().unwrap(), ring[0]];
        let inside = enclosed_nodes(&g, &path, &ring).unwrap();
        assert_eq!(inside, g.interior().into_iter().collect());
        // a path retracing the arc encloses nothing
        let arc = vec![Coord::new(1, 0), Coord::new(2, 0), Coord::new(3, 0)];
        assert!(enclosed_nodes(&g, &arc, &arc).unwrap().is_empty());
        // a path just inside the arc encloses nothing either
        let hug = [
            Coord::new(1, 0),
            Coord::new(1, 1),
            Coord::new(2, 1),
            Coord::new(3, 1),
            Coord::new(3, 0),
        ];
        assert!(enclosed_nodes(&g, &hug, &arc).unwrap().is_empty());
        // one row further up encloses the row in between
        let loop2 = [
            Coord::new(1, 0),
            Coord::new(1, 1),
            Coord::new(1, 2),
            Coord::new(2, 2),
            Coord::new(3, 2),
            Coord::new(3, 1),
            Coord::new(3, 0),
        ];
        assert_eq!(
            enclosed_nodes(&g, &loop2, &arc).unwrap(),
            BTreeSet::from([Coord::new(2, 1)])
        );
    }

    #[test]
    fn degenerate_curves_rejected() {
        let g = Grid::new(3).unwrap();
        let arc = vec![Coord::new(1, 0), Coord::new(2, 0), Coord::new(3, 0)];
        let bad_end = [Coord::new(1, 0), Coord::new(1, 1)];
        assert!(matches!(
            enclosed_nodes(&g, &bad_end, &arc),
            Err(Error::DegenerateCurve(_))
        ));
        let gap = [Coord::new(1, 0), Coord::new(3, 0)];
        assert!(enclosed_nodes(&g, &gap, &arc).is_err());
        assert!(enclosed_nodes(&g, &[], &arc).is_err());
    }

    #[test]
    fn straight_run_has_coinciding_inner_and_outer() {
        let g = Grid::new(4).unwrap();
        let x = boundary_with_plus(&g, &[(0, 2), (0, 3)]);
        let r = region_decomposition(&g, &x).unwrap();
        let p = r.plus_paths.unwrap();
        assert_eq!(p.inner, p.outer);
        assert_eq!(p.inner_region_size, p.outer_region_size);
        assert_eq!(p.inner_region_size, 2);
    }

    #[test]
    fn corner_set_bounded_after_normalization() {
        for n in 1..6 {
            let g = Grid::new(n).unwrap();
            for x in crate::grid::enumerate_one_run_boundaries(&g, false) {
                let (y, _) = normalize_one_run(&g, &x).unwrap();
                assert!(corner_set(&g, &y).len() <= 2, "{x}");
            }
        }
    }

    #[test]
    fn corner_wrap_regions() {
        for n in [4, 5, 6] {
            let (g, x) = corner_wrap(n);
            assert_eq!(corner_set(&g, &x), vec![InteriorCorner::Sw]);
            let r = region_decomposition(&g, &x).unwrap();
            assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
            let neutral: BTreeSet<Coord> = g
                .interior()
                .into_iter()
                .filter(|c| c.a <= 3 && c.b <= 2)
                .collect();
            assert_eq!(r.classes.get(RegionClass::OuterBoth), neutral);
            let rim: BTreeSet<Coord> = g
                .interior()
                .into_iter()
                .filter(|c| (c.a == 4 && c.b <= 2) || (c.a <= 3 && c.b == 3))
                .collect();
            assert_eq!(r.classes.get(RegionClass::DeltaMinus), rim);
            assert!(r.classes.get(RegionClass::InnerPlus).is_empty());
            assert!(r.classes.get(RegionClass::DeltaPlus).is_empty());

            let case = case_analysis(&g, &x).unwrap();
            assert_eq!(case.corner_count, 1);
            assert!(case.classes.same_as(&r.classes));
        }
    }

    #[test]
    fn case_zero_formula() {
        let g = Grid::new(5).unwrap();
        let x = boundary_with_plus(&g, &[(0, 2), (0, 3)]);
        let case = case_analysis(&g, &x).unwrap();
        assert_eq!(case.corner_count, 0);
        let field = case.classes.to_field(&g).unwrap();
        for (c, v) in field.iter() {
            let expected = if c.a == 1 && (2..=3).contains(&c.b) {
                -2
            } else {
                -4
            };
            assert_eq!(v, expected, "{c}");
        }
        let r = region_decomposition(&g, &x).unwrap();
        assert_eq!(closed_form_local_solutions(&g, &r).unwrap(), field);
    }

    #[test]
    fn case_two_formula() {
        // west side plus (1..=2, 0) at the bottom and (1, N+1) at the top
        let g = Grid::new(5).unwrap();
        let mut plus: Vec<(i32, i32)> = (0..=6).map(|b| (0, b)).collect();
        plus.extend([(1, 0), (2, 0), (1, 6)]);
        let x = boundary_with_plus(&g, &plus);
        let case = case_analysis(&g, &x).unwrap();
        assert_eq!(case.corner_count, 2);
        let field = case.classes.to_field(&g).unwrap();
        for (c, v) in field.iter() {
            let expected = match c.a {
                a if a < 1 => 4,
                1 => 2,
                2 => 0,
                3 => -2,
                _ => -4,
            };
            assert_eq!(v, expected, "{c}");
        }
        let r = region_decomposition(&g, &x).unwrap();
        assert!(r.classes.same_as(&case.classes));
    }

    #[test]
    fn uniform_rejected_with_diagnostic() {
        let g = Grid::new(3).unwrap();
        let x = BoundaryConfig::uniform(&g, 1);
        assert_eq!(
            region_decomposition(&g, &x).unwrap_err(),
            Error::Degenerate("uniform".into())
        );
    }

    #[test]
    fn lone_corner_is_degenerate_after_contraction() {
        let g = Grid::new(3).unwrap();
        let x = boundary_with_plus(&g, &[(0, 0)]);
        let r = region_decomposition(&g, &x).unwrap();
        // neighbors of the corner are both -1, so the corner stays +1
        assert_eq!(r.source, RegionSource::ShortestPaths);
        let f = closed_form_local_solutions(&g, &r).unwrap();
        assert!(f.values().iter().all(|v| *v == -4));

        let x = boundary_with_plus(&g, &[(0, 0), (1, 0)]);
        let r = region_decomposition(&g, &x).unwrap();
        assert_eq!(r.contracted.get(Coord::new(0, 0)), Some(-1));
    }

    #[test]
    fn oracle_fallback_matches_paths() {
        let (g, x) = corner_wrap(5);
        let by_paths = region_decomposition(&g, &x).unwrap();
        let fallback = region_decomposition_capped(&g, &x, 1).unwrap();
        assert_eq!(fallback.source, RegionSource::OracleFallback);
        assert!(fallback.classes.same_as(&by_paths.classes));
    }
}
