//! Integer fields over the interior of a grid and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::grid::{Coord, Grid};
use crate::{Error, Result};

/// One integer per interior site, stored row-major (bottom row first).
///
/// Used both for LBP estimates and for exact local solutions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalSolutionField {
    n: usize,
    values: Vec<i32>,
}

impl LocalSolutionField {
    pub fn new(grid: &Grid, values: Vec<i32>) -> Result<Self> {
        if values.len() != grid.interior_count() {
            return Err(Error::IncompleteConfig(format!(
                "{} field values for {} interior sites",
                values.len(),
                grid.interior_count()
            )));
        }
        Ok(LocalSolutionField {
            n: grid.n(),
            values,
        })
    }

    pub fn constant(grid: &Grid, v: i32) -> Self {
        LocalSolutionField {
            n: grid.n(),
            values: vec![v; grid.interior_count()],
        }
    }

    pub fn from_fn(grid: &Grid, f: impl FnMut(Coord) -> i32) -> Self {
        LocalSolutionField {
            n: grid.n(),
            values: grid.interior().into_iter().map(f).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn grid(&self) -> Grid {
        Grid::new(self.n).expect("field has N >= 1")
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn get(&self, c: Coord) -> Option<i32> {
        self.grid().interior_index(c).map(|k| self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, i32)> + '_ {
        let grid = self.grid();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (grid.interior_coord(k), *v))
    }

    pub fn negated(&self) -> Self {
        LocalSolutionField {
            n: self.n,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Sites where `self` and `other` differ, with both values.
    pub fn differences(&self, other: &LocalSolutionField) -> Vec<(Coord, i32, i32)> {
        self.iter()
            .zip(other.iter())
            .filter(|((_, a), (_, b))| a != b)
            .map(|((c, a), (_, b))| (c, a, b))
            .collect()
    }

    /// JSON-friendly map `"a,b" -> value`.
    pub fn to_json_map(&self) -> BTreeMap<String, i32> {
        self.iter()
            .map(|(c, v)| (format!("{},{}", c.a, c.b), v))
            .collect()
    }

    pub fn from_json_map(grid: &Grid, map: &BTreeMap<String, i32>) -> Result<Self> {
        let mut values = vec![None; grid.interior_count()];
        for (key, v) in map {
            let c = parse_key(key)
                .ok_or_else(|| Error::IncompleteConfig(format!("bad site key {key:?}")))?;
            let k = grid
                .interior_index(c)
                .ok_or_else(|| Error::IncompleteConfig(format!("{c} is not an interior site")))?;
            values[k] = Some(*v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::IncompleteConfig(format!("missing site {}", grid.interior_coord(k)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    /// One character per site, north row first: `#` +4, `+` +2, `.` 0,
    /// `-` -2, `=` -4, `?` anything else.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        for b in (1..=self.n as i32).rev() {
            for a in 1..=self.n as i32 {
                out.push(glyph(self.get(Coord::new(a, b)).unwrap()));
            }
            out.push('\n');
        }
        out
    }

    /// Plain (P2) PGM, one pixel per site, north row first, gray level
    /// `round((v + 4) * 255 / 8)` clamped to `[0, 255]`.
    pub fn render_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.n, self.n);
        for b in (1..=self.n as i32).rev() {
            let row: Vec<String> = (1..=self.n as i32)
                .map(|a| pgm_level(self.get(Coord::new(a, b)).unwrap()).to_string())
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

pub fn glyph(v: i32) -> char {
    match v {
        4 => '#',
        2 => '+',
        0 => '.',
        -2 => '-',
        -4 => '=',
        _ => '?',
    }
}

pub fn pgm_level(v: i32) -> u8 {
    let scaled = ((v + 4) as f64 * 255.0 / 8.0).round();
    scaled.clamp(0.0, 255.0) as u8
}

fn parse_key(key: &str) -> Option<Coord> {
    let (a, b) = key.split_once(',')?;
    Some(Coord::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_alphabet() {
        let g = Grid::new(2).unwrap();
        // row-major: (1,1)=4, (2,1)=2, (1,2)=0, (2,2)=-4
        let f = LocalSolutionField::new(&g, vec![4, 2, 0, -4]).unwrap();
        assert_eq!(f.render_ascii(), ".=\n#+\n");
        let odd = LocalSolutionField::new(&g, vec![3, -2, 1, -1]).unwrap();
        assert_eq!(odd.render_ascii(), "??\n?-\n");
    }

    #[test]
    fn pgm_levels() {
        assert_eq!(pgm_level(-4), 0);
        assert_eq!(pgm_level(0), 128);
        assert_eq!(pgm_level(4), 255);
        assert_eq!(pgm_level(2), 191);
        assert_eq!(pgm_level(-2), 64);
        let g = Grid::new(1).unwrap();
        let f = LocalSolutionField::constant(&g, -2);
        assert_eq!(f.render_pgm(), "P2\n1 1\n255\n64\n");
    }

    #[test]
    fn json_map_round_trip() {
        let g = Grid::new(3).unwrap();
        let f = LocalSolutionField::from_fn(&g, |c| c.a - c.b);
        let map = f.to_json_map();
        assert_eq!(map["3,1"], 2);
        assert_eq!(LocalSolutionField::from_json_map(&g, &map).unwrap(), f);
    }
}
