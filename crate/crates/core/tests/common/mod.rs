//! Seeded random Hamiltonians and gate scripts shared by the property tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spindual::pauli::{Pauli, PauliWord};
use spindual::rotation::{Angle, GateScript, GateStep};
use spindual::{Hamiltonian, Term};

pub fn random_pauli(rng: &mut ChaCha8Rng) -> Pauli {
    Pauli::ALL[rng.gen_range(0..3)]
}

pub fn random_word(rng: &mut ChaCha8Rng, n: usize) -> PauliWord {
    loop {
        let mut ops = Vec::new();
        for s in 0..n {
            if rng.gen_bool(0.4) {
                ops.push((s, random_pauli(rng)));
            }
        }
        if !ops.is_empty() {
            return PauliWord::new(ops).unwrap();
        }
    }
}

pub fn random_hamiltonian(rng: &mut ChaCha8Rng, n: usize) -> Hamiltonian {
    let count = rng.gen_range(1..=2 * n + 2);
    let terms: Vec<Term> = (0..count).map(|_| Term::new(rng.gen_range(-2.0..2.0), random_word(rng, n))).collect();
    Hamiltonian::new(n, terms).unwrap()
}

fn two_sites(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let b = (a + rng.gen_range(1..n)) % n;
    (a, b)
}

/// A random step; `clifford` restricts to named gates and quarter turns.
pub fn random_step(rng: &mut ChaCha8Rng, n: usize, clifford: bool) -> GateStep {
    let (a, b) = two_sites(rng, n);
    match rng.gen_range(0..5) {
        0 => GateStep::Cz(a, b),
        1 => GateStep::cx(a, b),
        2 => GateStep::Swap(a, b),
        k => {
            let axis = if k == 3 {
                PauliWord::single(a, random_pauli(rng))
            } else {
                PauliWord::new([(a, random_pauli(rng)), (b, random_pauli(rng))]).unwrap()
            };
            let angle = if clifford || rng.gen_bool(0.5) {
                Angle::QuarterTurns(rng.gen_range(-3..=4))
            } else {
                Angle::Radians(rng.gen_range(-3.2..3.2))
            };
            GateStep::rotation(axis, angle)
        }
    }
}

pub fn random_script(rng: &mut ChaCha8Rng, n: usize, len: usize, clifford: bool) -> GateScript {
    (0..len).map(|_| random_step(rng, n, clifford)).collect()
}
