//! Site sets with adjacency: chains, rectangular grids, brick-wall hexagonal
//! lattices and diamond netting.
//!
//! Sites are 0-based. Two-dimensional lattices number their sites row-major over
//! the occupied coordinates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    #[serde(alias = "periodic")]
    Closed,
}

/// Lattice description, also the lattice JSON format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LatticeSpec {
    Chain { n: usize, boundary: Boundary },
    Grid { rows: usize, cols: usize, boundary: Boundary },
    /// Brick wall: rows joined horizontally, vertical bonds where `row + col` is even.
    Hexagonal { rows: usize, cols: usize },
    /// Parallel `↘` diagonals of the given lengths with a field site in every diamond.
    Netting { wires: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteRole {
    Plain,
    /// On a netting wire.
    Wire,
    /// In the middle of a netting diamond.
    Center,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    spec: LatticeSpec,
    coords: Vec<(usize, usize)>,
    roles: Vec<SiteRole>,
    index: BTreeMap<(usize, usize), usize>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.into()));
        let (coords, roles, raw_edges): (Vec<(usize, usize)>, Vec<SiteRole>, Vec<((usize, usize), (usize, usize))>) =
            match &spec {
                LatticeSpec::Chain { n, boundary } => {
                    if *n < 2 {
                        return bad("a chain needs at least 2 sites");
                    }
                    let mut e: Vec<_> = (0..n - 1).map(|i| ((0, i), (0, i + 1))).collect();
                    if *boundary == Boundary::Closed && *n > 2 {
                        e.push(((0, n - 1), (0, 0)));
                    }
                    ((0..*n).map(|i| (0, i)).collect(), vec![SiteRole::Plain; *n], e)
                }
                LatticeSpec::Grid { rows, cols, boundary } => {
                    if *rows == 0 || *cols == 0 || rows * cols < 2 {
                        return bad("a grid needs at least 2 sites");
                    }
                    let (r, c) = (*rows, *cols);
                    let mut e = Vec::new();
                    for i in 0..r {
                        for j in 0..c {
                            if j + 1 < c {
                                e.push(((i, j), (i, j + 1)));
                            } else if *boundary == Boundary::Closed && c > 2 {
                                e.push(((i, j), (i, 0)));
                            }
                            if i + 1 < r {
                                e.push(((i, j), (i + 1, j)));
                            } else if *boundary == Boundary::Closed && r > 2 {
                                e.push(((i, j), (0, j)));
                            }
                        }
                    }
                    let coords = (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).collect();
                    (coords, vec![SiteRole::Plain; r * c], e)
                }
                LatticeSpec::Hexagonal { rows, cols } => {
                    if *rows < 2 || *cols < 2 {
                        return bad("a hexagonal lattice needs at least 2 rows and 2 columns");
                    }
                    let (r, c) = (*rows, *cols);
                    let mut e = Vec::new();
                    for i in 0..r {
                        for j in 0..c {
                            if j + 1 < c {
                                e.push(((i, j), (i, j + 1)));
                            }
                            if i + 1 < r && (i + j) % 2 == 0 {
                                e.push(((i, j), (i + 1, j)));
                            }
                        }
                    }
                    let coords = (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).collect();
                    (coords, vec![SiteRole::Plain; r * c], e)
                }
                LatticeSpec::Netting { wires } => netting_geometry(wires)?,
            };
        let index: BTreeMap<(usize, usize), usize> = {
            // row-major numbering over the occupied coordinates
            let mut sorted: Vec<(usize, usize)> = coords.clone();
            sorted.sort();
            sorted.into_iter().enumerate().map(|(k, rc)| (rc, k)).collect()
        };
        let mut ordered_coords = vec![(0, 0); coords.len()];
        let mut ordered_roles = vec![SiteRole::Plain; coords.len()];
        for (rc, role) in coords.iter().zip(&roles) {
            ordered_coords[index[rc]] = *rc;
            ordered_roles[index[rc]] = *role;
        }
        let edge_set: BTreeSet<(usize, usize)> = raw_edges
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (index[&a], index[&b]);
                (a.min(b), a.max(b))
            })
            .collect();
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); ordered_coords.len()];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        neighbors.iter_mut().for_each(|n| n.sort_unstable());
        Ok(Self { spec, coords: ordered_coords, roles: ordered_roles, index, edges, neighbors })
    }

    pub fn chain(n: usize, boundary: Boundary) -> Result<Self> {
        Self::new(LatticeSpec::Chain { n, boundary })
    }

    pub fn grid(rows: usize, cols: usize, boundary: Boundary) -> Result<Self> {
        Self::new(LatticeSpec::Grid { rows, cols, boundary })
    }

    pub fn hexagonal(rows: usize, cols: usize) -> Result<Self> {
        Self::new(LatticeSpec::Hexagonal { rows, cols })
    }

    pub fn netting(wires: Vec<usize>) -> Result<Self> {
        Self::new(LatticeSpec::Netting { wires })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn n_sites(&self) -> usize {
        self.coords.len()
    }

    /// `(row, col)` of each site.
    pub fn coords(&self) -> &[(usize, usize)] {
        &self.coords
    }

    pub fn roles(&self) -> &[SiteRole] {
        &self.roles
    }

    pub fn site(&self, row: usize, col: usize) -> Option<usize> {
        self.index.get(&(row, col)).copied()
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, site: usize) -> &[usize] {
        &self.neighbors[site]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }
}

type Geometry = (Vec<(usize, usize)>, Vec<SiteRole>, Vec<((usize, usize), (usize, usize))>);

// Wire `j` occupies `(p, p + 2j)`; the square spanned by a wire bond has its two other
// corners on centers.
fn netting_geometry(wires: &[usize]) -> Result<Geometry> {
    if wires.is_empty() || wires.iter().any(|&l| l < 2) {
        return Err(Error::InvalidParams("every netting wire needs at least 2 sites".into()));
    }
    let mut coords = BTreeMap::new();
    let mut edges = Vec::new();
    for (j, &len) in wires.iter().enumerate() {
        for p in 0..len {
            coords.insert((p, p + 2 * j), SiteRole::Wire);
        }
        for p in 0..len - 1 {
            let (a, b) = ((p, p + 2 * j), (p + 1, p + 1 + 2 * j));
            let (m1, m2) = ((p, p + 2 * j + 1), (p + 1, p + 2 * j));
            for m in [m1, m2] {
                coords.entry(m).or_insert(SiteRole::Center);
            }
            edges.push((a, b));
            edges.push((a, m1));
            edges.push((m1, b));
            edges.push((b, m2));
            edges.push((m2, a));
        }
    }
    if coords.values().filter(|&&r| r == SiteRole::Wire).count()
        != wires.iter().sum::<usize>()
    {
        return Err(Error::InvalidParams("netting wires overlap".into()));
    }
    let (coords, roles) = coords.into_iter().unzip();
    Ok((coords, roles, edges))
}

/// The four corners of the unit square with top-left corner `(row, col)`, if all exist.
pub fn unit_square(lat: &Lattice, row: usize, col: usize) -> Option<[usize; 4]> {
    Some([
        lat.site(row, col)?,
        lat.site(row, col + 1)?,
        lat.site(row + 1, col)?,
        lat.site(row + 1, col + 1)?,
    ])
}
