//! Dense matrices over the full `2^n` Hilbert space, used as the verification oracle.
//!
//! Basis index bit `k` is the state of site `k` (`0` = `|↑⟩`, the `+1` eigenstate
//! of `Z`).

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::pauli::{Pauli, PauliWord};
use crate::rotation::GateStep;

/// Largest site count for which dense matrices are built.
pub const DENSE_CAP: usize = 12;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] += v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn add(&self, other: &DenseMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `self · m · self†`
    pub fn conjugate(&self, m: &DenseMatrix) -> DenseMatrix {
        &(self * m) * &self.adjoint()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

fn check_cap(what: &'static str, n_sites: usize, cap: usize) -> Result<()> {
    if n_sites > cap {
        return Err(Error::CapExceeded { what, n_sites, cap });
    }
    Ok(())
}

/// Action of a Pauli word on basis state `b`: `P|b⟩ = amp · |b'⟩`.
#[inline]
pub fn word_action(x_mask: u64, z_mask: u64, n_y: usize, b: u64) -> (u64, Complex64) {
    let mut amp = crate::pauli::Phase::from_power(n_y as i64).to_complex();
    if (b & z_mask).count_ones() % 2 == 1 {
        amp = -amp;
    }
    (b ^ x_mask, amp)
}

/// Dense matrix of a Pauli word on `n_sites`.
pub fn word_matrix(word: &PauliWord, n_sites: usize) -> Result<DenseMatrix> {
    check_cap("dense matrix", n_sites, DENSE_CAP)?;
    let dim = 1usize << n_sites;
    let (x, z) = word.masks();
    let ny = word.count_y();
    let mut m = DenseMatrix::zeros(dim);
    for b in 0..dim as u64 {
        let (b2, amp) = word_action(x, z, ny, b);
        m.add_to(b2 as usize, b as usize, amp);
    }
    Ok(m)
}

/// `Σ coeff · word` as a dense `2^n × 2^n` matrix.
pub fn to_dense(h: &Hamiltonian) -> Result<DenseMatrix> {
    to_dense_capped(h, DENSE_CAP)
}

pub fn to_dense_capped(h: &Hamiltonian, cap: usize) -> Result<DenseMatrix> {
    check_cap("dense matrix", h.n_sites(), cap)?;
    let dim = 1usize << h.n_sites();
    let mut m = DenseMatrix::zeros(dim);
    for t in h.terms() {
        let (x, z) = t.word.masks();
        let ny = t.word.count_y();
        for b in 0..dim as u64 {
            let (b2, amp) = word_action(x, z, ny, b);
            m.add_to(b2 as usize, b as usize, amp * t.coeff);
        }
    }
    Ok(m)
}

/// Exact unitary of a gate step on `n_sites`, global phase included.
///
/// Rotations are `cos(η/2)·I + i·sin(η/2)·P`; CZ, CX and SWAP are the standard
/// permutation/diagonal matrices.
pub fn dense_gate(step: &GateStep, n_sites: usize) -> Result<DenseMatrix> {
    check_cap("dense gate", n_sites, DENSE_CAP)?;
    step.check(n_sites).map_err(|reason| Error::InvalidStep { index: 0, reason })?;
    let dim = 1usize << n_sites;
    let one = Complex64::new(1.0, 0.0);
    let bit = |b: usize, s: usize| (b >> s) & 1 == 1;
    Ok(match step {
        GateStep::Cz(i, j) => DenseMatrix::from_fn(dim, |r, c| {
            if r != c {
                Complex64::new(0.0, 0.0)
            } else if bit(c, *i) && bit(c, *j) {
                -one
            } else {
                one
            }
        }),
        GateStep::Cx { control, target } => DenseMatrix::from_fn(dim, |r, c| {
            let image = if bit(c, *control) { c ^ (1 << target) } else { c };
            if r == image { one } else { Complex64::new(0.0, 0.0) }
        }),
        GateStep::Swap(i, j) => DenseMatrix::from_fn(dim, |r, c| {
            let image = if bit(c, *i) != bit(c, *j) { c ^ (1 << i) ^ (1 << j) } else { c };
            if r == image { one } else { Complex64::new(0.0, 0.0) }
        }),
        GateStep::Rotation { axis, angle } => {
            let half = angle.radians() / 2.0;
            let p = word_matrix(axis, n_sites)?;
            DenseMatrix::identity(dim)
                .scale(Complex64::new(half.cos(), 0.0))
                .add(&p.scale(Complex64::new(0.0, half.sin())))
        }
    })
}

/// Two-site basis matrix `σ^a ⊗ σ^b` with `None` as identity, site 0 first.
pub fn pair_matrix(a: Option<Pauli>, b: Option<Pauli>) -> DenseMatrix {
    let word = PauliWord::new([(0, a), (1, b)].into_iter().filter_map(|(s, p)| p.map(|p| (s, p))))
        .expect("distinct sites");
    word_matrix(&word, 2).expect("two sites")
}
