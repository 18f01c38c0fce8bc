//! Grid topology, boundary configurations and the symmetries of the square.
//!
//! The block is the `(N+2) x (N+2)` grid graph with 4-neighbor topology.
//! Coordinates are `(a, b)` with `a` the column and `b` the row, `(0, 0)` at
//! the bottom-left. The interior `B` is `{1..=N}^2`; everything else is the
//! boundary, which we walk as a ring starting at `(0, 0)` and going
//! counter-clockwise (east along the bottom edge first).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Coord {
    pub a: i32,
    pub b: i32,
}

impl Coord {
    pub const fn new(a: i32, b: i32) -> Self {
        Coord { a, b }
    }

    pub fn offset(self, d: Direction) -> Coord {
        let (da, db) = d.vector();
        Coord::new(self.a + da, self.b + db)
    }

    pub fn l1_distance(self, other: Coord) -> i32 {
        (self.a - other.a).abs() + (self.b - other.b).abs()
    }
}

impl From<[i32; 2]> for Coord {
    fn from(v: [i32; 2]) -> Self {
        Coord::new(v[0], v[1])
    }
}

impl From<Coord> for [i32; 2] {
    fn from(c: Coord) -> Self {
        [c.a, c.b]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::East,
        Direction::West,
    ];

    pub const fn vector(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::South => (0, -1),
            Direction::East => (1, 0),
            Direction::West => (-1, 0),
        }
    }

    pub fn from_vector(v: (i32, i32)) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.vector() == v)
    }

    pub const fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::South => Direction::North,
            Direction::East => Direction::West,
            Direction::West => Direction::East,
        }
    }

    /// Two directions are adjacent when their vectors are orthogonal.
    pub fn is_adjacent(self, other: Direction) -> bool {
        let (x1, y1) = self.vector();
        let (x2, y2) = other.vector();
        x1 * x2 + y1 * y2 == 0
    }

    pub fn letter(self) -> char {
        match self {
            Direction::North => 'N',
            Direction::South => 'S',
            Direction::East => 'E',
            Direction::West => 'W',
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A directed grid edge `from -> to` between 4-neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub from: Coord,
    pub to: Coord,
}

impl DirectedEdge {
    /// `D(c) = c -> c + v(D)`. No bounds check.
    pub fn toward(from: Coord, d: Direction) -> Self {
        DirectedEdge {
            from,
            to: from.offset(d),
        }
    }

    pub fn direction(&self) -> Option<Direction> {
        Direction::from_vector((self.to.a - self.from.a, self.to.b - self.from.b))
    }

    pub fn reversed(&self) -> Self {
        DirectedEdge {
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// The four interior corners, named by compass position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteriorCorner {
    Sw,
    Se,
    Ne,
    Nw,
}

impl InteriorCorner {
    pub const ALL: [InteriorCorner; 4] = [
        InteriorCorner::Sw,
        InteriorCorner::Se,
        InteriorCorner::Ne,
        InteriorCorner::Nw,
    ];
}

/// The `(N+2) x (N+2)` grid graph with interior `{1..=N}^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize(n));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length of the full grid, `N + 2`.
    pub fn side(&self) -> usize {
        self.n + 2
    }

    pub fn vertex_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn interior_count(&self) -> usize {
        self.n * self.n
    }

    pub fn ring_len(&self) -> usize {
        4 * self.n + 4
    }

    fn max(&self) -> i32 {
        self.n as i32 + 1
    }

    pub fn contains(&self, c: Coord) -> bool {
        (0..=self.max()).contains(&c.a) && (0..=self.max()).contains(&c.b)
    }

    pub fn is_interior(&self, c: Coord) -> bool {
        (1..self.max()).contains(&c.a) && (1..self.max()).contains(&c.b)
    }

    pub fn is_boundary(&self, c: Coord) -> bool {
        self.contains(c) && !self.is_interior(c)
    }

    /// `c + v(d)` when it stays on the grid.
    pub fn step(&self, c: Coord, d: Direction) -> Option<Coord> {
        let next = c.offset(d);
        self.contains(next).then_some(next)
    }

    pub fn neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| self.step(c, d))
    }

    pub fn degree(&self, c: Coord) -> usize {
        self.neighbors(c).count()
    }

    pub fn vertex_index(&self, c: Coord) -> usize {
        debug_assert!(self.contains(c));
        c.b as usize * self.side() + c.a as usize
    }

    pub fn vertex_coord(&self, index: usize) -> Coord {
        Coord::new((index % self.side()) as i32, (index / self.side()) as i32)
    }

    /// Row-major position of an interior site: bottom row first, west to east.
    pub fn interior_index(&self, c: Coord) -> Option<usize> {
        self.is_interior(c)
            .then(|| (c.b as usize - 1) * self.n + (c.a as usize - 1))
    }

    pub fn interior_coord(&self, index: usize) -> Coord {
        Coord::new((index % self.n) as i32 + 1, (index / self.n) as i32 + 1)
    }

    /// Interior sites in row-major order.
    pub fn interior(&self) -> Vec<Coord> {
        (0..self.interior_count())
            .map(|k| self.interior_coord(k))
            .collect()
    }

    pub fn vertices(&self) -> Vec<Coord> {
        (0..self.vertex_count())
            .map(|k| self.vertex_coord(k))
            .collect()
    }

    /// Each undirected edge once, as `(west or south endpoint, other)`.
    pub fn undirected_edges(&self) -> Vec<(Coord, Coord)> {
        let mut edges = Vec::new();
        for c in self.vertices() {
            for d in [Direction::East, Direction::North] {
                if let Some(next) = self.step(c, d) {
                    edges.push((c, next));
                }
            }
        }
        edges
    }

    /// Boundary sites in ring order: `(0,0)`, east along the bottom, north
    /// up the east side, west along the top, south down the west side.
    pub fn ring(&self) -> Vec<Coord> {
        let m = self.max();
        let mut ring = Vec::with_capacity(self.ring_len());
        ring.extend((0..=m).map(|a| Coord::new(a, 0)));
        ring.extend((1..=m).map(|b| Coord::new(m, b)));
        ring.extend((0..m).rev().map(|a| Coord::new(a, m)));
        ring.extend((1..m).rev().map(|b| Coord::new(0, b)));
        ring
    }

    pub fn ring_index(&self, c: Coord) -> Option<usize> {
        if !self.is_boundary(c) {
            return None;
        }
        let m = self.max();
        let n = self.n as i32;
        let idx = if c.b == 0 {
            c.a
        } else if c.a == m {
            m + c.b
        } else if c.b == m {
            2 * m + (m - c.a)
        } else {
            // west side, 1 <= b <= N
            3 * m + (n + 1 - c.b)
        };
        Some(idx as usize)
    }

    /// The four degree-2 corners of the outer ring.
    pub fn outer_corners(&self) -> [Coord; 4] {
        let m = self.max();
        [
            Coord::new(0, 0),
            Coord::new(m, 0),
            Coord::new(m, m),
            Coord::new(0, m),
        ]
    }

    pub fn is_outer_corner(&self, c: Coord) -> bool {
        self.outer_corners().contains(&c)
    }

    pub fn corner(&self, which: InteriorCorner) -> Coord {
        let n = self.n as i32;
        match which {
            InteriorCorner::Sw => Coord::new(1, 1),
            InteriorCorner::Se => Coord::new(n, 1),
            InteriorCorner::Ne => Coord::new(n, n),
            InteriorCorner::Nw => Coord::new(1, n),
        }
    }
}

/// A `+1`/`-1` assignment to every boundary site, stored in ring order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryConfig {
    n: usize,
    values: Vec<i8>,
}

impl BoundaryConfig {
    /// Builds a configuration from ring-ordered values.
    pub fn from_ring(grid: &Grid, values: Vec<i8>) -> Result<Self> {
        if values.len() != grid.ring_len() {
            return Err(Error::BoundaryMismatch(format!(
                "{} values for a ring of {}",
                values.len(),
                grid.ring_len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| *v != 1 && *v != -1) {
            return Err(Error::BoundaryMismatch(format!(
                "value {} at ring position {pos} is not +1 or -1",
                values[pos]
            )));
        }
        Ok(BoundaryConfig {
            n: grid.n(),
            values,
        })
    }

    /// Builds a configuration from a coordinate map, which must cover
    /// exactly the boundary.
    pub fn from_map(grid: &Grid, map: &BTreeMap<Coord, i8>) -> Result<Self> {
        if let Some(extra) = map.keys().find(|c| !grid.is_boundary(**c)) {
            return Err(Error::BoundaryMismatch(format!(
                "{extra} is not a boundary site"
            )));
        }
        let values = grid
            .ring()
            .into_iter()
            .map(|c| {
                map.get(&c).copied().ok_or_else(|| {
                    Error::BoundaryMismatch(format!("missing value for boundary site {c}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ring(grid, values)
    }

    pub fn uniform(grid: &Grid, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        BoundaryConfig {
            n: grid.n(),
            values: vec![sign; grid.ring_len()],
        }
    }

    /// Parses the wire form `B<N>:` followed by `4N+4` characters of `+`/`-`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = |position: usize, message: &str| Error::BoundaryParse {
            position,
            message: message.to_string(),
        };
        let rest = s.strip_prefix('B').ok_or_else(|| err(0, "expected 'B'"))?;
        let colon = rest
            .find(':')
            .ok_or_else(|| err(s.len(), "expected ':' after the size"))?;
        let digits = &rest[..colon];
        if digits.is_empty() {
            return Err(err(1, "missing size"));
        }
        if let Some(bad) = digits.char_indices().find(|(_, ch)| !ch.is_ascii_digit()) {
            return Err(err(1 + bad.0, "size must be decimal digits"));
        }
        let n: usize = digits.parse().map_err(|_| err(1, "size out of range"))?;
        let grid = Grid::new(n).map_err(|_| err(1, "size must be at least 1"))?;
        let body_start = 2 + colon;
        let mut values = Vec::with_capacity(grid.ring_len());
        for (offset, ch) in s[body_start..].chars().enumerate() {
            let position = body_start + offset;
            match ch {
                '+' => values.push(1),
                '-' => values.push(-1),
                _ => return Err(err(position, &format!("unexpected character {ch:?}"))),
            }
            if values.len() > grid.ring_len() {
                return Err(err(position, "too many boundary values"));
            }
        }
        if values.len() < grid.ring_len() {
            return Err(err(
                s.len(),
                &format!(
                    "expected {} boundary values, found {}",
                    grid.ring_len(),
                    values.len()
                ),
            ));
        }
        Ok(BoundaryConfig { n, values })
    }

    pub fn to_wire(&self) -> String {
        let mut s = format!("B{}:", self.n);
        s.extend(self.values.iter().map(|v| if *v > 0 { '+' } else { '-' }));
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Grid {
        Grid { n: self.n }
    }

    pub fn ring_values(&self) -> &[i8] {
        &self.values
    }

    pub fn at_ring(&self, index: usize) -> i8 {
        self.values[index]
    }

    /// Value at a boundary site; `None` for interior or off-grid coordinates.
    pub fn get(&self, c: Coord) -> Option<i8> {
        self.grid().ring_index(c).map(|i| self.values[i])
    }

    pub fn to_map(&self) -> BTreeMap<Coord, i8> {
        self.grid()
            .ring()
            .into_iter()
            .zip(self.values.iter().copied())
            .collect()
    }

    pub fn count(&self, sign: i8) -> usize {
        self.values.iter().filter(|v| **v == sign).count()
    }

    /// `R^+` (or `R^-`): boundary sites carrying `sign`, in ring order.
    pub fn sites_with(&self, sign: i8) -> Vec<Coord> {
        self.grid()
            .ring()
            .into_iter()
            .zip(&self.values)
            .filter(|(_, v)| **v == sign)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn uniform_sign(&self) -> Option<i8> {
        let first = self.values[0];
        self.values.iter().all(|v| *v == first).then_some(first)
    }

    pub fn negated(&self) -> Self {
        BoundaryConfig {
            n: self.n,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    fn with_value(&mut self, index: usize, v: i8) {
        self.values[index] = v;
    }
}

impl fmt::Display for BoundaryConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wire())
    }
}

/// Serialized as its wire string.
impl Serialize for BoundaryConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_wire())
    }
}

impl<'de> Deserialize<'de> for BoundaryConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BoundaryConfig::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl FromStr for BoundaryConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundaryConfig::parse(s)
    }
}

/// A maximal arc of constant sign on the boundary ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub sign: i8,
    /// Ring index of the first site in counter-clockwise order.
    pub start: usize,
    pub len: usize,
}

impl Run {
    pub fn ring_indices(&self, ring_len: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |k| (self.start + k) % ring_len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStructure {
    /// Arcs of constant sign, sorted by starting ring index.
    pub runs: Vec<Run>,
    /// Sign changes around the ring, which equals the number of odd bonds
    /// among boundary sites since the ring is an induced cycle.
    pub sign_changes: usize,
    /// Odd bonds among edges with both endpoints on the boundary.
    pub boundary_odd_bonds: usize,
    pub uniform: bool,
    pub one_run: bool,
}

impl RunStructure {
    /// The unique arc carrying `sign`, when there is exactly one.
    pub fn single_run(&self, sign: i8) -> Option<&Run> {
        let mut it = self.runs.iter().filter(|r| r.sign == sign);
        match (it.next(), it.next()) {
            (Some(r), None) => Some(r),
            _ => None,
        }
    }
}

/// Splits the boundary into runs and decides the one-run property.
///
/// One-run means `R^+` and `R^-` are both nonempty and `R^+` induces a
/// connected subgraph of the grid. Connectivity is computed on the induced
/// subgraph, independently of the ring-arc bookkeeping.
pub fn classify_boundary(grid: &Grid, x: &BoundaryConfig) -> Result<RunStructure> {
    if x.n() != grid.n() {
        return Err(Error::BoundaryMismatch(format!(
            "boundary for N = {} on a grid with N = {}",
            x.n(),
            grid.n()
        )));
    }
    let ring_len = grid.ring_len();
    let vals = x.ring_values();
    let sign_changes = (0..ring_len)
        .filter(|&i| vals[i] != vals[(i + 1) % ring_len])
        .count();

    let runs = if sign_changes == 0 {
        vec![Run {
            sign: vals[0],
            start: 0,
            len: ring_len,
        }]
    } else {
        let first = (0..ring_len)
            .find(|&i| vals[i] != vals[(i + ring_len - 1) % ring_len])
            .expect("a sign change exists");
        let mut runs = Vec::new();
        let mut start = first;
        let mut len = 0;
        for k in 0..ring_len {
            let i = (first + k) % ring_len;
            if len > 0 && vals[i] != vals[start] {
                runs.push(Run {
                    sign: vals[start],
                    start,
                    len,
                });
                start = i;
                len = 0;
            }
            len += 1;
        }
        runs.push(Run {
            sign: vals[start],
            start,
            len,
        });
        runs.sort_by_key(|r| r.start);
        runs
    };

    let boundary_odd_bonds = grid
        .undirected_edges()
        .into_iter()
        .filter(|(u, v)| grid.is_boundary(*u) && grid.is_boundary(*v))
        .filter(|(u, v)| x.get(*u) != x.get(*v))
        .count();

    let plus = x.sites_with(1);
    let uniform = sign_changes == 0;
    let one_run = !uniform && induced_connected(grid, &plus);

    Ok(RunStructure {
        runs,
        sign_changes,
        boundary_odd_bonds,
        uniform,
        one_run,
    })
}

pub fn is_one_run(grid: &Grid, x: &BoundaryConfig) -> bool {
    classify_boundary(grid, x)
        .map(|r| r.one_run)
        .unwrap_or(false)
}

fn induced_connected(grid: &Grid, sites: &[Coord]) -> bool {
    let Some(&start) = sites.first() else {
        return false;
    };
    let members: std::collections::BTreeSet<Coord> = sites.iter().copied().collect();
    let mut seen = std::collections::BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for nb in grid.neighbors(c) {
            if members.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen.len() == members.len()
}

/// An element of the symmetry group of the square, optionally combined with
/// a global sign flip.
///
/// The geometric part acts as "reflect east-west (if `reflect`), then rotate
/// `rotation` quarter turns counter-clockwise" about the grid center.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetryTransform {
    pub rotation: u8,
    pub reflect: bool,
    pub color_flip: bool,
}

impl SymmetryTransform {
    pub const IDENTITY: SymmetryTransform = SymmetryTransform {
        rotation: 0,
        reflect: false,
        color_flip: false,
    };

    pub const COLOR_FLIP: SymmetryTransform = SymmetryTransform {
        rotation: 0,
        reflect: false,
        color_flip: true,
    };

    /// The eight rotations and reflections, identity first.
    pub fn geometric() -> Vec<SymmetryTransform> {
        let mut out = Vec::with_capacity(8);
        for reflect in [false, true] {
            for rotation in 0..4 {
                out.push(SymmetryTransform {
                    rotation,
                    reflect,
                    color_flip: false,
                });
            }
        }
        out
    }

    /// All sixteen elements, geometric symmetries with and without flip.
    pub fn all() -> Vec<SymmetryTransform> {
        let mut out = Self::geometric();
        out.extend(Self::geometric().into_iter().map(|t| SymmetryTransform {
            color_flip: true,
            ..t
        }));
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Linear part acting on vectors: reflect then rotate.
    fn linear(&self, (x, y): (i32, i32)) -> (i32, i32) {
        let (mut x, mut y) = if self.reflect { (-x, y) } else { (x, y) };
        for _ in 0..self.rotation % 4 {
            (x, y) = (-y, x);
        }
        (x, y)
    }

    pub fn apply_coord(&self, grid: &Grid, c: Coord) -> Coord {
        // work in doubled coordinates centered on the grid
        let m = grid.n() as i32 + 1;
        let (x, y) = self.linear((2 * c.a - m, 2 * c.b - m));
        Coord::new((x + m) / 2, (y + m) / 2)
    }

    pub fn apply_direction(&self, d: Direction) -> Direction {
        Direction::from_vector(self.linear(d.vector())).expect("unit vectors map to unit vectors")
    }

    pub fn apply_edge(&self, grid: &Grid, e: DirectedEdge) -> DirectedEdge {
        DirectedEdge {
            from: self.apply_coord(grid, e.from),
            to: self.apply_coord(grid, e.to),
        }
    }

    pub fn apply_sign<T: std::ops::Neg<Output = T>>(&self, v: T) -> T {
        if self.color_flip {
            -v
        } else {
            v
        }
    }

    /// `T(x)`, defined by `T(x)(T(c)) = s * x(c)`.
    pub fn apply_boundary(&self, x: &BoundaryConfig) -> BoundaryConfig {
        let grid = x.grid();
        let mut out = x.clone();
        for (c, v) in grid.ring().into_iter().zip(x.ring_values()) {
            let target = grid.ring_index(self.apply_coord(&grid, c)).unwrap();
            out.with_value(target, self.apply_sign(*v));
        }
        out
    }

    pub fn inverse(&self) -> SymmetryTransform {
        SymmetryTransform {
            rotation: if self.reflect {
                self.rotation % 4
            } else {
                (4 - self.rotation % 4) % 4
            },
            reflect: self.reflect,
            color_flip: self.color_flip,
        }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &SymmetryTransform) -> SymmetryTransform {
        let map = |v| other.linear(self.linear(v));
        let e1 = map((1, 0));
        let e2 = map((0, 1));
        let det = e1.0 * e2.1 - e1.1 * e2.0;
        let reflect = det < 0;
        // undo the reflection to read off the rotation from the image of (1,0)
        let probe = if reflect { map((-1, 0)) } else { e1 };
        let rotation = match probe {
            (1, 0) => 0,
            (0, 1) => 1,
            (-1, 0) => 2,
            _ => 3,
        };
        SymmetryTransform {
            rotation,
            reflect,
            color_flip: self.color_flip ^ other.color_flip,
        }
    }
}

/// Sets every degree-2 outer corner whose two ring neighbors disagree to
/// `-1`. Outer corners touch no interior site, so this changes nothing the
/// engine or the oracle can see.
pub fn contract_corners(grid: &Grid, x: &BoundaryConfig) -> BoundaryConfig {
    let ring_len = grid.ring_len();
    let mut out = x.clone();
    for corner in grid.outer_corners() {
        let i = grid.ring_index(corner).unwrap();
        let prev = x.at_ring((i + ring_len - 1) % ring_len);
        let next = x.at_ring((i + 1) % ring_len);
        if prev != next {
            out.with_value(i, -1);
        }
    }
    out
}

/// Brings a one-run boundary into the normal form used by the case
/// analysis: mixed corners contracted to `-1`, and `|R^+| <= |R^-|` with a
/// color flip recorded when needed.
///
/// The returned transform `T` satisfies `x' = contract(T(x))`; results
/// computed on `x'` map back to `x` through `T.inverse()`.
pub fn normalize_one_run(
    grid: &Grid,
    x: &BoundaryConfig,
) -> Result<(BoundaryConfig, SymmetryTransform)> {
    if !classify_boundary(grid, x)?.one_run {
        return Err(Error::NotOneRun);
    }
    let contracted = contract_corners(grid, x);
    if contracted.count(1) > contracted.count(-1) {
        let flipped = contract_corners(grid, &contracted.negated());
        Ok((flipped, SymmetryTransform::COLOR_FLIP))
    } else {
        Ok((contracted, SymmetryTransform::IDENTITY))
    }
}

/// Every one-run boundary, each exactly once: a `+1` arc of every start
/// position and every length in `1..ring_len`.
///
/// With `dedup_symmetry`, keeps one representative (smallest wire string)
/// per orbit under the eight square symmetries and the color flip.
pub fn enumerate_one_run_boundaries(grid: &Grid, dedup_symmetry: bool) -> Vec<BoundaryConfig> {
    let ring_len = grid.ring_len();
    let mut out = Vec::with_capacity(ring_len * (ring_len - 1));
    for start in 0..ring_len {
        for len in 1..ring_len {
            let mut values = vec![-1i8; ring_len];
            for k in 0..len {
                values[(start + k) % ring_len] = 1;
            }
            let x = BoundaryConfig {
                n: grid.n(),
                values,
            };
            if !dedup_symmetry || is_orbit_representative(&x) {
                out.push(x);
            }
        }
    }
    out
}

fn is_orbit_representative(x: &BoundaryConfig) -> bool {
    let own = x.to_wire();
    SymmetryTransform::all()
        .iter()
        .all(|t| t.apply_boundary(x).to_wire() >= own)
}
