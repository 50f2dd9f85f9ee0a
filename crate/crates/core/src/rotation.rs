//! Conjugation of Hamiltonians by single-axis rotations and named Clifford gates.
//!
//! A rotation about a Pauli word `P` by angle `η` is `U = exp(iη P/2)`; a term `T`
//! that anticommutes with `P` maps to `cos η · T + sin η · (i P T)`, and commuting
//! terms are untouched. Quarter turns (`η = kπ/2`) stay on integer sign arithmetic.
//!
//! Clifford gates are implemented twice: by a two-site lookup table and by their
//! decomposition into commuting quarter-turn rotations. Both are public so they can
//! be cross-checked.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, Term, DROP_TOLERANCE};
use crate::pauli::{commutes, word_multiply, Pauli, PauliWord};

/// Rotation angle; quarter turns keep sign bookkeeping exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    /// `η = k·π/2`
    QuarterTurns(i64),
    Radians(f64),
}

impl Angle {
    pub fn radians(self) -> f64 {
        match self {
            Angle::QuarterTurns(k) => k as f64 * FRAC_PI_2,
            Angle::Radians(eta) => eta,
        }
    }

    pub fn negated(self) -> Angle {
        match self {
            Angle::QuarterTurns(k) => Angle::QuarterTurns(-k),
            Angle::Radians(eta) => Angle::Radians(-eta),
        }
    }

    pub fn is_quarter_turn(self) -> bool {
        matches!(self, Angle::QuarterTurns(_))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::QuarterTurns(k) => write!(f, "{k}·π/2"),
            Angle::Radians(eta) => write!(f, "{eta} rad"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateStep {
    Cz(usize, usize),
    Cx { control: usize, target: usize },
    Swap(usize, usize),
    /// Axis support must have one or two sites.
    Rotation { axis: PauliWord, angle: Angle },
}

impl GateStep {
    pub fn rotation(axis: PauliWord, angle: Angle) -> Self {
        GateStep::Rotation { axis, angle }
    }

    pub fn local(site: usize, p: Pauli, angle: Angle) -> Self {
        GateStep::Rotation { axis: PauliWord::single(site, p), angle }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        GateStep::Cx { control, target }
    }

    pub fn sites(&self) -> Vec<usize> {
        match self {
            GateStep::Cz(i, j) | GateStep::Swap(i, j) => vec![*i, *j],
            GateStep::Cx { control, target } => vec![*control, *target],
            GateStep::Rotation { axis, .. } => axis.sites().collect(),
        }
    }

    pub fn is_clifford(&self) -> bool {
        match self {
            GateStep::Rotation { angle, .. } => angle.is_quarter_turn(),
            _ => true,
        }
    }

    pub fn check(&self, n_sites: usize) -> std::result::Result<(), String> {
        if let GateStep::Rotation { axis, angle } = self {
            if axis.is_identity() || axis.len() > 2 {
                return Err(format!("rotation axis must act on one or two sites, got {}", axis.len()));
            }
            if let Angle::Radians(eta) = angle {
                if !eta.is_finite() {
                    return Err("rotation angle is not finite".into());
                }
            }
        }
        let sites = self.sites();
        if sites.len() == 2 && sites[0] == sites[1] {
            return Err(format!("gate acts twice on site {}", sites[0]));
        }
        if let Some(&s) = sites.iter().find(|&&s| s >= n_sites) {
            return Err(format!("site {s} out of range for {n_sites} sites"));
        }
        Ok(())
    }

    pub fn inverse(&self) -> GateStep {
        match self {
            GateStep::Rotation { axis, angle } => GateStep::Rotation { axis: axis.clone(), angle: angle.negated() },
            other => other.clone(),
        }
    }
}

impl fmt::Display for GateStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateStep::Cz(i, j) => write!(f, "CZ({i},{j})"),
            GateStep::Cx { control, target } => write!(f, "CX({control}->{target})"),
            GateStep::Swap(i, j) => write!(f, "SWAP({i},{j})"),
            GateStep::Rotation { axis, angle } => write!(f, "ROT[{axis}]({angle})"),
        }
    }
}

/// Steps in application order: the first step acts first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateScript {
    pub steps: Vec<GateStep>,
}

impl GateScript {
    pub fn new(steps: Vec<GateStep>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_clifford(&self) -> bool {
        self.steps.iter().all(GateStep::is_clifford)
    }

    /// Reverse order with every step inverted.
    pub fn inverse(&self) -> GateScript {
        GateScript { steps: self.steps.iter().rev().map(GateStep::inverse).collect() }
    }

    pub fn then(mut self, other: GateScript) -> GateScript {
        self.steps.extend(other.steps);
        self
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        for (index, step) in self.steps.iter().enumerate() {
            step.check(n_sites).map_err(|reason| Error::InvalidStep { index, reason })?;
        }
        Ok(())
    }
}

impl FromIterator<GateStep> for GateScript {
    fn from_iter<T: IntoIterator<Item = GateStep>>(iter: T) -> Self {
        GateScript { steps: iter.into_iter().collect() }
    }
}

/// Conjugate one term by `exp(iη axis/2)`. Returns one or two terms.
pub fn rotate_term(t: &Term, axis: &PauliWord, angle: Angle) -> Vec<Term> {
    if commutes(&t.word, axis) {
        return vec![t.clone()];
    }
    let (phase, rotated) = word_multiply(axis, &t.word);
    // anticommuting, so phase is ±i and i·phase is ±1
    let sign = (crate::pauli::Phase::I * phase)
        .real_sign()
        .expect("anticommuting product has imaginary phase");
    match angle {
        Angle::QuarterTurns(k) => match k.rem_euclid(4) {
            0 => vec![t.clone()],
            1 => vec![Term::new(sign * t.coeff, rotated)],
            2 => vec![Term::new(-t.coeff, t.word.clone())],
            _ => vec![Term::new(-sign * t.coeff, rotated)],
        },
        Angle::Radians(eta) => {
            let (s, c) = eta.sin_cos();
            vec![Term::new(c * t.coeff, t.word.clone()), Term::new(s * sign * t.coeff, rotated)]
        }
    }
}

fn check_step(h: &Hamiltonian, step: &GateStep) -> Result<()> {
    step.check(h.n_sites()).map_err(|reason| Error::InvalidStep { index: 0, reason })
}

/// Conjugate every term by a single-axis rotation.
pub fn apply_rotation(h: &Hamiltonian, axis: &PauliWord, angle: Angle) -> Result<Hamiltonian> {
    check_step(h, &GateStep::Rotation { axis: axis.clone(), angle })?;
    Ok(rotate_unchecked(h, axis, angle))
}

fn rotate_unchecked(h: &Hamiltonian, axis: &PauliWord, angle: Angle) -> Hamiltonian {
    let terms: Vec<Term> = h.terms().iter().flat_map(|t| rotate_term(t, axis, angle)).collect();
    Hamiltonian::with_tolerance(h.n_sites(), terms, DROP_TOLERANCE).expect("sites already validated")
}

/// Single-site rotation. The axis must act on exactly one site.
pub fn apply_local(h: &Hamiltonian, axis: &PauliWord, angle: Angle) -> Result<Hamiltonian> {
    if axis.len() != 1 {
        return Err(Error::InvalidStep { index: 0, reason: "local rotation axis must act on one site".into() });
    }
    apply_rotation(h, axis, angle)
}

/// Exchange of `X` and `Z` on one site, `X → Z`, `Z → -X`, as a quarter turn about `Y`.
pub fn xz_exchange(site: usize) -> GateStep {
    GateStep::local(site, Pauli::Y, Angle::QuarterTurns(1))
}

type Letter = Option<Pauli>;

const fn l(c: u8) -> Letter {
    match c {
        b'X' => Some(Pauli::X),
        b'Y' => Some(Pauli::Y),
        b'Z' => Some(Pauli::Z),
        _ => None,
    }
}

/// `(before, after, sign)` on the ordered site pair; 'I' marks identity.
type PairRule = (&'static [u8; 2], &'static [u8; 2], f64);

// CZ on (i, j). Each mapping is an involution; words not mentioned are invariant.
const CZ_RULES: [PairRule; 6] = [
    (b"IX", b"ZX", 1.0),
    (b"IY", b"ZY", 1.0),
    (b"XI", b"XZ", 1.0),
    (b"YI", b"YZ", 1.0),
    (b"XX", b"YY", 1.0),
    (b"XY", b"YX", -1.0),
];

// CX with control i, target j.
const CX_RULES: [PairRule; 6] = [
    (b"IY", b"ZY", 1.0),
    (b"IZ", b"ZZ", 1.0),
    (b"XI", b"XX", 1.0),
    (b"YI", b"YX", 1.0),
    (b"XY", b"YZ", 1.0),
    (b"XZ", b"YY", -1.0),
];

fn lookup_pair(rules: &[PairRule], a: Letter, b: Letter) -> (f64, Letter, Letter) {
    for &(from, to, sign) in rules {
        let (f0, f1) = (l(from[0]), l(from[1]));
        let (t0, t1) = (l(to[0]), l(to[1]));
        if (f0, f1) == (a, b) {
            return (sign, t0, t1);
        }
        if (t0, t1) == (a, b) {
            return (sign, f0, f1);
        }
    }
    (1.0, a, b)
}

/// Conjugation of a two-site letter pair by a Clifford gate via the lookup tables.
///
/// Returns `(sign, letter_i, letter_j)`. Panics on rotation steps.
pub fn clifford_pair_map(step: &GateStep, a: Letter, b: Letter) -> (f64, Letter, Letter) {
    match step {
        GateStep::Cz(..) => lookup_pair(&CZ_RULES, a, b),
        GateStep::Cx { .. } => lookup_pair(&CX_RULES, a, b),
        GateStep::Swap(..) => (1.0, b, a),
        GateStep::Rotation { .. } => panic!("not a named Clifford gate"),
    }
}

fn clifford_term(step: &GateStep, t: &Term) -> Term {
    let (i, j) = match *step {
        GateStep::Cz(i, j) | GateStep::Swap(i, j) => (i, j),
        GateStep::Cx { control, target } => (control, target),
        GateStep::Rotation { .. } => unreachable!(),
    };
    let (a, b) = (t.word.get(i), t.word.get(j));
    if a.is_none() && b.is_none() {
        return t.clone();
    }
    let (sign, a2, b2) = clifford_pair_map(step, a, b);
    Term::new(sign * t.coeff, t.word.with_site(i, a2).with_site(j, b2))
}

/// Conjugate by CZ, CX or SWAP using the lookup tables.
pub fn apply_clifford(h: &Hamiltonian, step: &GateStep) -> Result<Hamiltonian> {
    if matches!(step, GateStep::Rotation { .. }) {
        return Err(Error::InvalidStep { index: 0, reason: "expected CZ, CX or SWAP".into() });
    }
    check_step(h, step)?;
    let terms: Vec<Term> = h.terms().iter().map(|t| clifford_term(step, t)).collect();
    Ok(Hamiltonian::new(h.n_sites(), terms).expect("sites already validated"))
}

/// Decomposition of a named gate into mutually commuting quarter-turn rotations.
///
/// From the exponential forms `CZ = exp{iπ/2·½[II - IZ - ZI + ZZ]}`,
/// `CX = exp{iπ/2·½[II - IX - ZI + ZX]}` and `SWAP = exp{iπ/2·½[-II + XX + YY + ZZ]}`,
/// dropping the global phase.
pub fn clifford_as_rotations(step: &GateStep) -> Vec<(PauliWord, i64)> {
    let pair = |i: usize, a: Pauli, j: usize, b: Pauli| PauliWord::new([(i, a), (j, b)]).expect("distinct sites");
    match *step {
        GateStep::Cz(i, j) => vec![
            (PauliWord::single(j, Pauli::Z), -1),
            (PauliWord::single(i, Pauli::Z), -1),
            (pair(i, Pauli::Z, j, Pauli::Z), 1),
        ],
        GateStep::Cx { control, target } => vec![
            (PauliWord::single(target, Pauli::X), -1),
            (PauliWord::single(control, Pauli::Z), -1),
            (pair(control, Pauli::Z, target, Pauli::X), 1),
        ],
        GateStep::Swap(i, j) => vec![
            (pair(i, Pauli::X, j, Pauli::X), 1),
            (pair(i, Pauli::Y, j, Pauli::Y), 1),
            (pair(i, Pauli::Z, j, Pauli::Z), 1),
        ],
        GateStep::Rotation { .. } => Vec::new(),
    }
}

/// Conjugate by CZ, CX or SWAP through [`clifford_as_rotations`].
pub fn apply_clifford_via_rotations(h: &Hamiltonian, step: &GateStep) -> Result<Hamiltonian> {
    if matches!(step, GateStep::Rotation { .. }) {
        return Err(Error::InvalidStep { index: 0, reason: "expected CZ, CX or SWAP".into() });
    }
    check_step(h, step)?;
    Ok(clifford_as_rotations(step)
        .into_iter()
        .fold(h.clone(), |acc, (axis, k)| rotate_unchecked(&acc, &axis, Angle::QuarterTurns(k))))
}

pub fn apply_step(h: &Hamiltonian, step: &GateStep) -> Result<Hamiltonian> {
    match step {
        GateStep::Rotation { axis, angle } => apply_rotation(h, axis, *angle),
        _ => apply_clifford(h, step),
    }
}

/// Apply the script's steps in order. Validates all steps before touching `h`.
pub fn conjugate_sequence(h: &Hamiltonian, script: &GateScript) -> Result<Hamiltonian> {
    script.validate(h.n_sites())?;
    let mut cur = h.clone();
    for step in &script.steps {
        cur = apply_step(&cur, step)?;
    }
    Ok(cur)
}
