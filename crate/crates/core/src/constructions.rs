//! Two-dimensional constructions grown from one-dimensional chains.
//!
//! Each construction returns a start Hamiltonian, the gate script, and the target it
//! produces. Targets are checked by structural predicates rather than by a closed form.
//!
//! * `hex_chains`: Ising chains along the rows of a brick wall, joined by CZ on every
//!   vertical brick-wall bond.
//! * `plaquette_xz`: columns alternate between field sites (even columns) and vertical
//!   XZ chains (odd columns). Per chain: a quarter turn of the field column on its left,
//!   CX from the chain into that column (X plaquettes), then CX from the field column on
//!   its right into the chain (Z plaquettes). A last round of quarter turns on whole
//!   columns, the fewest sites that make every plaquette monochromatic, finishes it.
//! * `netting_wire`: wire bonds alternate XX and ZZ; centers carry Z fields. CZ between
//!   each XX bond and the centers of its square, a quarter turn on every wire site, CZ for
//!   the remaining squares, then a quarter turn on their centers.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, Term};
use crate::lattice::{unit_square, Boundary, Lattice, SiteRole};
use crate::pauli::{Pauli, PauliWord};
use crate::rotation::{conjugate_sequence, xz_exchange, GateScript, GateStep};

pub const CONSTRUCTIONS: [&str; 3] = ["hex_chains", "plaquette_xz", "netting_wire"];

#[derive(Debug, Clone)]
pub struct Construction {
    pub name: &'static str,
    pub lattice: Lattice,
    pub start: Hamiltonian,
    pub script: GateScript,
    pub target: Hamiltonian,
}

fn word(ops: &[(usize, Pauli)]) -> PauliWord {
    PauliWord::new(ops.iter().copied()).expect("distinct sites")
}

/// Parallel transverse-field Ising chains along the rows, coupled into a brick wall.
pub fn hex_chains(rows: usize, cols: usize, g: f64, j: f64) -> Result<Construction> {
    let lattice = Lattice::hexagonal(rows, cols)?;
    let site = |r, c| lattice.site(r, c).expect("in range");
    let mut terms = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            terms.push(Term::new(-g, word(&[(site(r, c), Pauli::X)])));
            if c + 1 < cols {
                terms.push(Term::new(-j, word(&[(site(r, c), Pauli::Z), (site(r, c + 1), Pauli::Z)])));
            }
        }
    }
    let start = Hamiltonian::new(lattice.n_sites(), terms)?;
    let script: GateScript = (0..rows - 1)
        .flat_map(|r| (0..cols).filter(move |c| (r + c) % 2 == 0).map(move |c| (r, c)))
        .map(|(r, c)| GateStep::Cz(site(r, c), site(r + 1, c)))
        .collect();
    let target = conjugate_sequence(&start, &script)?;
    Ok(Construction { name: "hex_chains", lattice, start, script, target })
}

fn column_turns(lat: &Lattice, rows: usize, col: usize) -> impl Iterator<Item = GateStep> + '_ {
    (0..rows).map(move |r| xz_exchange(lat.site(r, col).expect("in range")))
}

/// XZ chains on the odd columns with Z fields on the even columns.
pub fn plaquette_xz(rows: usize, cols: usize, g: f64, j: f64) -> Result<Construction> {
    if rows < 2 || cols < 3 || cols % 2 == 0 {
        return Err(Error::InvalidParams(format!(
            "plaquette construction needs rows >= 2 and an odd column count >= 3, got {rows}x{cols}"
        )));
    }
    let lattice = Lattice::grid(rows, cols, Boundary::Open)?;
    let site = |r, c| lattice.site(r, c).expect("in range");
    let mut terms = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if c % 2 == 0 {
                terms.push(Term::new(-g, word(&[(site(r, c), Pauli::Z)])));
            } else if r + 1 < rows {
                for p in [Pauli::Z, Pauli::X] {
                    terms.push(Term::new(-j, word(&[(site(r, c), p), (site(r + 1, c), p)])));
                }
            }
        }
    }
    let start = Hamiltonian::new(lattice.n_sites(), terms)?;

    let mut steps: Vec<GateStep> = Vec::new();
    for chain in (1..cols).step_by(2) {
        steps.extend(column_turns(&lattice, rows, chain - 1));
        steps.extend((0..rows).map(|r| GateStep::cx(site(r, chain), site(r, chain - 1))));
        steps.extend((0..rows).map(|r| GateStep::cx(site(r, chain + 1), site(r, chain))));
    }
    let grown = conjugate_sequence(&start, &GateScript::new(steps.clone()))?;
    for col in monochromatic_turns(&lattice, &grown, cols)? {
        steps.extend(column_turns(&lattice, rows, col));
    }
    let script = GateScript::new(steps);
    let target = conjugate_sequence(&start, &script)?;
    Ok(Construction { name: "plaquette_xz", lattice, start, script, target })
}

// Columns to turn so that every plaquette becomes monochromatic: a mixed plaquette needs
// exactly one of its two columns turned, a monochromatic one neither or both.
fn monochromatic_turns(lat: &Lattice, h: &Hamiltonian, cols: usize) -> Result<Vec<usize>> {
    let mut differ: Vec<Option<bool>> = vec![None; cols - 1];
    for t in h.terms().iter().filter(|t| t.word.len() == 4) {
        let c = t.word.sites().map(|s| lat.coords()[s].1).min().expect("non-empty");
        let left: BTreeSet<Pauli> = t.word.ops().iter().filter(|(s, _)| lat.coords()[*s].1 == c).map(|o| o.1).collect();
        let right: BTreeSet<Pauli> = t.word.ops().iter().filter(|(s, _)| lat.coords()[*s].1 != c).map(|o| o.1).collect();
        if left.len() != 1 || right.len() != 1 {
            return Err(Error::InvalidParams(format!("plaquette {} is not column-wise uniform", t.word)));
        }
        let mixed = left != right;
        match differ[c] {
            Some(prev) if prev != mixed => {
                return Err(Error::InvalidParams(format!("inconsistent plaquettes between columns {c} and {}", c + 1)))
            }
            _ => differ[c] = Some(mixed),
        }
    }
    let mut turned = vec![false; cols];
    for c in 0..cols - 1 {
        turned[c + 1] = turned[c] ^ differ[c].unwrap_or(false);
    }
    // the complementary assignment works as well; keep the one touching fewer sites
    let count = turned.iter().filter(|&&x| x).count();
    let flip = count * 2 > cols;
    Ok((0..cols).filter(|&c| turned[c] != flip).collect())
}

fn bond_is_xx(p: usize, wire: usize) -> bool {
    (p + wire) % 2 == 0
}

/// Diamond netting of alternating XX/ZZ wire bonds with Z fields on the centers.
pub fn netting_wire(wires: &[usize], g: f64, j: f64) -> Result<Construction> {
    let lattice = Lattice::netting(wires.to_vec())?;
    let site = |r, c| lattice.site(r, c).expect("in range");
    let mut terms = Vec::new();
    // (wire a, wire b, center next to a, center next to b, is XX)
    let mut squares = Vec::new();
    for (w, &len) in wires.iter().enumerate() {
        for p in 0..len - 1 {
            let (a, b) = (site(p, p + 2 * w), site(p + 1, p + 1 + 2 * w));
            let (ma, mb) = (site(p, p + 2 * w + 1), site(p + 1, p + 2 * w));
            let xx = bond_is_xx(p, w);
            let axis = if xx { Pauli::X } else { Pauli::Z };
            terms.push(Term::new(-j, word(&[(a, axis), (b, axis)])));
            squares.push((a, b, ma, mb, xx));
        }
    }
    for (s, role) in lattice.roles().iter().enumerate() {
        if *role == SiteRole::Center {
            terms.push(Term::new(-g, word(&[(s, Pauli::Z)])));
        }
    }
    let start = Hamiltonian::new(lattice.n_sites(), terms)?;

    let cz_round = |xx: bool| {
        squares
            .iter()
            .filter(move |sq| sq.4 == xx)
            .flat_map(|&(a, b, ma, mb, _)| [GateStep::Cz(a, ma), GateStep::Cz(b, mb)])
    };
    let mut steps: Vec<GateStep> = cz_round(true).collect();
    let wire_sites = lattice.roles().iter().enumerate().filter(|(_, r)| **r == SiteRole::Wire).map(|(s, _)| s);
    steps.extend(wire_sites.map(xz_exchange));
    steps.extend(cz_round(false));
    let zz_centers: BTreeSet<usize> = squares.iter().filter(|sq| !sq.4).flat_map(|sq| [sq.2, sq.3]).collect();
    steps.extend(zz_centers.into_iter().map(xz_exchange));
    let script = GateScript::new(steps);
    let target = conjugate_sequence(&start, &script)?;
    Ok(Construction { name: "netting_wire", lattice, start, script, target })
}

/// Default instances, all within 12 sites.
pub fn build_construction(name: &str) -> Result<Construction> {
    match name {
        "hex_chains" => hex_chains(3, 4, 1.0, 1.0),
        "plaquette_xz" => plaquette_xz(4, 3, 1.0, 1.0),
        "netting_wire" => netting_wire(&[3, 2], 1.0, 1.0),
        other => Err(Error::Unknown { kind: "construction", name: other.into() }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureCheck {
    pub passed: bool,
    pub detail: String,
}

impl StructureCheck {
    fn fail(detail: String) -> Self {
        Self { passed: false, detail }
    }
}

/// Every multi-site term is a two-site term on a lattice edge, and every edge is used.
pub fn check_edge_support(h: &Hamiltonian, lat: &Lattice) -> StructureCheck {
    let mut used = BTreeSet::new();
    for t in h.terms().iter().filter(|t| t.word.len() > 1) {
        let s: Vec<usize> = t.word.sites().collect();
        if s.len() != 2 || !lat.has_edge(s[0], s[1]) {
            return StructureCheck::fail(format!("term {} is not on a lattice edge", t.word));
        }
        used.insert((s[0], s[1]));
    }
    let missing: Vec<_> = lat.edges().iter().filter(|e| !used.contains(e)).collect();
    if !missing.is_empty() {
        return StructureCheck::fail(format!("edges without a term: {missing:?}"));
    }
    StructureCheck { passed: true, detail: format!("{} bond terms cover all {} edges", h.len() - single_site_count(h), used.len()) }
}

fn single_site_count(h: &Hamiltonian) -> usize {
    h.terms().iter().filter(|t| t.word.len() == 1).count()
}

/// Counts from [`check_plaquettes`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PlaquetteCensus {
    pub x_plaquettes: usize,
    pub z_plaquettes: usize,
    pub x_fields: usize,
    pub y_fields: usize,
    pub z_fields: usize,
}

fn is_unit_square(lat: &Lattice, word: &PauliWord) -> bool {
    let sites: Vec<usize> = word.sites().collect();
    if sites.len() != 4 {
        return false;
    }
    let (r, c) = sites.iter().map(|&s| lat.coords()[s]).min().expect("non-empty");
    match unit_square(lat, r, c) {
        Some(mut sq) => {
            sq.sort_unstable();
            sq.as_slice() == sites.as_slice()
        }
        None => false,
    }
}

/// Every term is a single-site field or an all-X / all-Z plaquette on a unit square,
/// and both plaquette colors occur.
pub fn check_plaquettes(h: &Hamiltonian, lat: &Lattice) -> (StructureCheck, PlaquetteCensus) {
    let mut census = PlaquetteCensus::default();
    for t in h.terms() {
        match t.word.len() {
            1 => match t.word.ops()[0].1 {
                Pauli::X => census.x_fields += 1,
                Pauli::Y => census.y_fields += 1,
                Pauli::Z => census.z_fields += 1,
            },
            4 if is_unit_square(lat, &t.word) => {
                if t.word.is_monochromatic(Pauli::X) {
                    census.x_plaquettes += 1;
                } else if t.word.is_monochromatic(Pauli::Z) {
                    census.z_plaquettes += 1;
                } else {
                    return (StructureCheck::fail(format!("plaquette {} is not monochromatic", t.word)), census);
                }
            }
            _ => return (StructureCheck::fail(format!("term {} is neither a field nor a plaquette", t.word)), census),
        }
    }
    if census.x_plaquettes == 0 || census.z_plaquettes == 0 {
        let detail = format!("need both plaquette colors, got {} X and {} Z", census.x_plaquettes, census.z_plaquettes);
        return (StructureCheck::fail(detail), census);
    }
    let detail = format!(
        "{} X and {} Z plaquettes, fields X/Y/Z = {}/{}/{}",
        census.x_plaquettes, census.z_plaquettes, census.x_fields, census.y_fields, census.z_fields
    );
    (StructureCheck { passed: true, detail }, census)
}
