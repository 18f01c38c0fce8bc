//! Exact ground truth: odd-bond counts, min-marginals, local solutions and
//! global-solution sets.
//!
//! Two independent solvers produce min-marginals: full enumeration of the
//! interior (Gray-code order, so each configuration costs one site flip) and
//! a forward/backward dynamic program over row configurations.

use serde::{Deserialize, Serialize};

use crate::field::LocalSolutionField;
use crate::graph::GraphInstance;
use crate::grid::{BoundaryConfig, Coord, Direction, Grid};
use crate::{Error, Result};

/// Default cap on `N` for full enumeration (`2^(N^2)` configurations).
pub const ENUM_CAP: usize = 4;
/// Enumeration is never allowed beyond this, even with an override.
pub const ENUM_HARD_CAP: usize = 5;
/// Default cap on `N` for the row dynamic program (`4^N` per row).
pub const DP_CAP: usize = 12;

/// A `+1`/`-1` assignment to the interior, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InteriorConfig {
    n: usize,
    values: Vec<i8>,
}

impl InteriorConfig {
    pub fn new(grid: &Grid, values: Vec<i8>) -> Result<Self> {
        if values.len() != grid.interior_count() {
            return Err(Error::IncompleteConfig(format!(
                "{} values for {} interior sites",
                values.len(),
                grid.interior_count()
            )));
        }
        if values.iter().any(|v| *v != 1 && *v != -1) {
            return Err(Error::IncompleteConfig("values must be +1 or -1".into()));
        }
        Ok(InteriorConfig {
            n: grid.n(),
            values,
        })
    }

    pub fn constant(grid: &Grid, v: i8) -> Self {
        InteriorConfig {
            n: grid.n(),
            values: vec![v; grid.interior_count()],
        }
    }

    /// Bit `k` of `counter` set means row-major site `k` is `+1`.
    pub fn from_counter(grid: &Grid, counter: u64) -> Self {
        let values = (0..grid.interior_count())
            .map(|k| if counter >> k & 1 == 1 { 1 } else { -1 })
            .collect();
        InteriorConfig {
            n: grid.n(),
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, c: Coord) -> Option<i8> {
        Grid::new(self.n)
            .ok()?
            .interior_index(c)
            .map(|k| self.values[k])
    }
}

/// Number of odd bonds over edges with at least one interior endpoint.
pub fn count_odd_bonds(grid: &Grid, xb: &InteriorConfig, xdb: &BoundaryConfig) -> Result<u32> {
    if xb.n() != grid.n() || xdb.n() != grid.n() {
        return Err(Error::IncompleteConfig(format!(
            "configurations for N = {} / {} on a grid with N = {}",
            xb.n(),
            xdb.n(),
            grid.n()
        )));
    }
    let value = |c: Coord| xb.get(c).or_else(|| xdb.get(c)).unwrap();
    let mut count = 0;
    for c in grid.interior() {
        for d in Direction::ALL {
            let nb = c.offset(d);
            // interior-interior edges are seen from both ends; count once
            if grid.is_interior(nb) && !matches!(d, Direction::East | Direction::North) {
                continue;
            }
            if value(c) != value(nb) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Per-site min-marginals `O*_i(-1)`, `O*_i(+1)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinMarginals {
    pub n: usize,
    pub o_minus: Vec<u32>,
    pub o_plus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteMarginal {
    pub coord: Coord,
    pub o_minus: u32,
    pub o_plus: u32,
    pub local: i32,
}

impl MinMarginals {
    /// `O*_B`, the global minimum number of odd bonds.
    pub fn global_minimum(&self) -> u32 {
        self.o_minus
            .iter()
            .zip(&self.o_plus)
            .map(|(m, p)| *m.min(p))
            .min()
            .unwrap_or(0)
    }

    pub fn at(&self, grid: &Grid, c: Coord) -> Option<(u32, u32)> {
        grid.interior_index(c)
            .map(|k| (self.o_minus[k], self.o_plus[k]))
    }

    pub fn export(&self) -> Vec<SiteMarginal> {
        let grid = Grid::new(self.n).expect("N >= 1");
        (0..self.o_minus.len())
            .map(|k| SiteMarginal {
                coord: grid.interior_coord(k),
                o_minus: self.o_minus[k],
                o_plus: self.o_plus[k],
                local: self.o_minus[k] as i32 - self.o_plus[k] as i32,
            })
            .collect()
    }
}

/// Exact min-marginals of any graph instance by enumerating every interior
/// configuration. Returns `(O*(-1), O*(+1))` in the graph's interior order.
///
/// Intended for small interiors (the caller guards the size).
pub fn enumerate_min_marginals(g: &GraphInstance) -> (Vec<u32>, Vec<u32>) {
    let sites = g.interior();
    let k = sites.len();
    assert!(k < 32, "interior too large to enumerate");
    let mut position = vec![usize::MAX; g.vertex_count()];
    for (p, &v) in sites.iter().enumerate() {
        position[v] = p;
    }
    let mut current = vec![-1i8; k];
    let value = |current: &[i8], v: usize| {
        if position[v] != usize::MAX {
            current[position[v]]
        } else {
            g.value(v)
        }
    };

    // cost of the all -1 interior
    let mut cost: i64 = 0;
    for &(j, i) in g.edges() {
        // each undirected messaging edge appears twice
        if j < i && value(&current, j) != value(&current, i) {
            cost += 1;
        }
    }

    let mut o_minus = vec![u32::MAX; k];
    let mut o_plus = vec![u32::MAX; k];
    let record = |current: &[i8], cost: i64, o_minus: &mut [u32], o_plus: &mut [u32]| {
        let c = cost as u32;
        for p in 0..k {
            let slot = if current[p] > 0 {
                &mut o_plus[p]
            } else {
                &mut o_minus[p]
            };
            if c < *slot {
                *slot = c;
            }
        }
    };
    record(&current, cost, &mut o_minus, &mut o_plus);
    for step in 1u64..(1u64 << k) {
        let p = step.trailing_zeros() as usize;
        let v = sites[p];
        let s = current[p];
        // flipping v: bonds to equal neighbors become odd, odd ones even
        let delta: i64 = g
            .neighbors(v)
            .iter()
            .filter_map(|&w| {
                let y = value(&current, w);
                (y != 0).then_some(if y == s { 1 } else { -1 })
            })
            .sum();
        current[p] = -s;
        cost += delta;
        record(&current, cost, &mut o_minus, &mut o_plus);
    }
    if k == 0 {
        return (Vec::new(), Vec::new());
    }
    (o_minus, o_plus)
}

pub fn brute_force_min_marginals(grid: &Grid, x: &BoundaryConfig) -> Result<MinMarginals> {
    brute_force_min_marginals_capped(grid, x, ENUM_CAP)
}

/// Enumeration with an explicit cap; caps above [`ENUM_HARD_CAP`] are
/// clamped.
pub fn brute_force_min_marginals_capped(
    grid: &Grid,
    x: &BoundaryConfig,
    cap: usize,
) -> Result<MinMarginals> {
    let cap = cap.min(ENUM_HARD_CAP);
    if grid.n() > cap {
        return Err(Error::SizeGuard {
            solver: "enumeration",
            n: grid.n(),
            cap,
        });
    }
    let g = GraphInstance::from_grid(grid, x)?;
    let (o_minus, o_plus) = enumerate_min_marginals(&g);
    Ok(MinMarginals {
        n: grid.n(),
        o_minus,
        o_plus,
    })
}

/// Result of the row dynamic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSweep {
    pub marginals: MinMarginals,
    /// Minimum of the forward costs over the last row's states.
    pub forward_minimum: u32,
}

pub fn dp_min_marginals(grid: &Grid, x: &BoundaryConfig) -> Result<MinMarginals> {
    dp_min_marginals_capped(grid, x, DP_CAP).map(|r| r.marginals)
}

/// Forward and backward sweeps over row states (bit `a-1` set means site
/// `(a, b)` is `+1`), combined per site by fixing one bit.
pub fn dp_min_marginals_capped(grid: &Grid, x: &BoundaryConfig, cap: usize) -> Result<RowSweep> {
    let n = grid.n();
    let cap = cap.min(DP_CAP);
    if n > cap {
        return Err(Error::SizeGuard {
            solver: "row DP",
            n,
            cap,
        });
    }
    if x.n() != n {
        return Err(Error::BoundaryMismatch(format!(
            "boundary for N = {} on a grid with N = {n}",
            x.n()
        )));
    }
    let states = 1usize << n;
    let full = states as u32 - 1;
    let plus_mask = |coords: &mut dyn Iterator<Item = Coord>| -> u32 {
        coords
            .enumerate()
            .filter(|(_, c)| x.get(*c) == Some(1))
            .fold(0, |m, (k, _)| m | 1 << k)
    };
    let top = n as i32 + 1;
    let bottom_mask = plus_mask(&mut (1..=n as i32).map(|a| Coord::new(a, 0)));
    let top_mask = plus_mask(&mut (1..=n as i32).map(|a| Coord::new(a, top)));

    // cost of a row's own bonds: within the row, to the side boundary, and
    // to the bottom/top boundary for the first/last row
    let row_cost = |b: usize, s: u32| -> u32 {
        let mut c = ((s ^ (s >> 1)) & (full >> 1)).count_ones();
        let left = x.get(Coord::new(0, b as i32)).unwrap() > 0;
        let right = x.get(Coord::new(top, b as i32)).unwrap() > 0;
        c += u32::from((s & 1 == 1) != left);
        c += u32::from((s >> (n - 1) & 1 == 1) != right);
        if b == 1 {
            c += (s ^ bottom_mask).count_ones();
        }
        if b == n {
            c += (s ^ top_mask).count_ones();
        }
        c
    };
    let costs: Vec<Vec<u32>> = (1..=n)
        .map(|b| (0..states as u32).map(|s| row_cost(b, s)).collect())
        .collect();

    // forward[b][s]: best cost of rows 1..=b with row b in state s
    let mut forward = vec![vec![0u32; states]; n];
    forward[0].clone_from(&costs[0]);
    for r in 1..n {
        for s in 0..states {
            let best = (0..states)
                .map(|t| forward[r - 1][t] + (s as u32 ^ t as u32).count_ones())
                .min()
                .unwrap();
            forward[r][s] = costs[r][s] + best;
        }
    }
    // backward[b][s]: best cost of rows above b given row b in state s
    let mut backward = vec![vec![0u32; states]; n];
    for r in (0..n - 1).rev() {
        for s in 0..states {
            backward[r][s] = (0..states)
                .map(|t| (s as u32 ^ t as u32).count_ones() + costs[r + 1][t] + backward[r + 1][t])
                .min()
                .unwrap();
        }
    }

    let mut o_minus = vec![u32::MAX; n * n];
    let mut o_plus = vec![u32::MAX; n * n];
    for r in 0..n {
        for s in 0..states {
            let total = forward[r][s] + backward[r][s];
            for a in 0..n {
                let k = r * n + a;
                let slot = if s >> a & 1 == 1 {
                    &mut o_plus[k]
                } else {
                    &mut o_minus[k]
                };
                *slot = (*slot).min(total);
            }
        }
    }
    let forward_minimum = *forward[n - 1].iter().min().unwrap();
    Ok(RowSweep {
        marginals: MinMarginals { n, o_minus, o_plus },
        forward_minimum,
    })
}

/// `o*_i = O*_i(-1) - O*_i(+1)`.
pub fn local_solutions(mm: &MinMarginals) -> LocalSolutionField {
    let grid = Grid::new(mm.n).expect("N >= 1");
    let values = mm
        .o_minus
        .iter()
        .zip(&mm.o_plus)
        .map(|(m, p)| *m as i32 - *p as i32)
        .collect();
    LocalSolutionField::new(&grid, values).expect("one value per site")
}

/// Local solutions from the row DP under the given cap.
pub fn exact_local_solutions(
    grid: &Grid,
    x: &BoundaryConfig,
    dp_cap: usize,
) -> Result<LocalSolutionField> {
    Ok(local_solutions(
        &dp_min_marginals_capped(grid, x, dp_cap)?.marginals,
    ))
}

/// All interior configurations attaining the global minimum, in counter
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalSolutionSet {
    pub minimum: u32,
    pub members: Vec<InteriorConfig>,
}

pub fn global_solutions(grid: &Grid, x: &BoundaryConfig) -> Result<GlobalSolutionSet> {
    if grid.n() > ENUM_CAP {
        return Err(Error::SizeGuard {
            solver: "global solution enumeration",
            n: grid.n(),
            cap: ENUM_CAP,
        });
    }
    let total = 1u64 << grid.interior_count();
    let mut minimum = u32::MAX;
    let mut members = Vec::new();
    for counter in 0..total {
        let cfg = InteriorConfig::from_counter(grid, counter);
        let cost = count_odd_bonds(grid, &cfg, x)?;
        if cost < minimum {
            minimum = cost;
            members.clear();
        }
        if cost == minimum {
            members.push(cfg);
        }
    }
    Ok(GlobalSolutionSet { minimum, members })
}
