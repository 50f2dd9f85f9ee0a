//! Matrix-free Lanczos for the lowest eigenvalues of a Pauli-sum Hamiltonian.
//!
//! Full reorthogonalization throughout; the Hamiltonian is applied term by term and
//! never stored as a matrix.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::word_action;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;

pub const ITERATIVE_CAP: usize = 20;

const BREAKDOWN: f64 = 1e-10;

/// `H` as a list of `(x_mask, z_mask, coeff · i^{#Y})`.
pub struct PauliOperator {
    dim: usize,
    terms: Vec<(u64, u64, Complex64)>,
}

impl PauliOperator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        if h.n_sites() > ITERATIVE_CAP {
            return Err(Error::CapExceeded { what: "iterative eigensolver", n_sites: h.n_sites(), cap: ITERATIVE_CAP });
        }
        let terms = h
            .terms()
            .iter()
            .map(|t| {
                let (x, z) = t.word.masks();
                let (_, amp) = word_action(0, 0, t.word.count_y(), 0);
                (x, z, amp * t.coeff)
            })
            .collect();
        Ok(Self { dim: 1 << h.n_sites(), terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `out = H · v`
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for &(x, z, c) in &self.terms {
            for (b, &vb) in v.iter().enumerate() {
                let b = b as u64;
                let amp = if (b & z).count_ones() % 2 == 1 { -c } else { c };
                out[(b ^ x) as usize] += amp * vb;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Converged when the residual norm is below `tol · max(1, |θ|)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { krylov_dim: 60, max_restarts: 300, tol: 1e-9, seed: 0x5eed }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let p = dot(q, w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= p * qi;
            }
        }
    }
}

/// Eigenpairs of a small Hermitian matrix, ascending.
fn projected_eigen(t: &[Vec<Complex64>]) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let m = t.len();
    let a = faer::Mat::<faer::c64>::from_fn(m, m, |i, j| t[i][j]);
    let evd = a.self_adjoint_eigen(faer::Side::Lower).expect("projected eigen-decomposition");
    let s = evd.S();
    let u = evd.U();
    let mut pairs: Vec<(f64, Vec<Complex64>)> =
        (0..m).map(|k| (s[k].re, (0..m).map(|i| u[(i, k)]).collect())).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize, against: &[&[Vec<Complex64>]]) -> Vec<Complex64> {
    loop {
        let mut x: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        for basis in against {
            orthogonalize(&mut x, basis);
        }
        let nx = norm(&x);
        if nx > 1e-8 {
            x.iter_mut().for_each(|v| *v /= nx);
            return x;
        }
    }
}

fn combine(basis: &[Vec<Complex64>], coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); basis[0].len()];
    for (q, &c) in basis.iter().zip(coeffs) {
        for (o, qi) in out.iter_mut().zip(q) {
            *o += qi * c;
        }
    }
    out
}

/// `‖(1 − P_locked)(H x − θ x)‖`
fn residual_norm(op: &PauliOperator, x: &[Complex64], theta: f64, locked: &[Vec<Complex64>], hv: &mut [Complex64]) -> f64 {
    op.apply(x, hv);
    let mut r: Vec<Complex64> = hv.iter().zip(x).map(|(h, xi)| h - xi * theta).collect();
    orthogonalize(&mut r, locked);
    norm(&r)
}

/// The `k` lowest eigenpairs (with multiplicity), ascending.
///
/// Thick-restart Lanczos with locking. Converged Ritz pairs are locked in ascending
/// order and every later basis vector is kept orthogonal to them. Each restart mixes a
/// small random component into the continuation vector: a Krylov space only ever sees
/// one vector per degenerate eigenspace, so the remaining copies have to be reintroduced.
/// Once `k` pairs are locked, one more cycle from a fresh random vector confirms that
/// nothing lower was missed.
pub fn lowest_eigenpairs(op: &PauliOperator, k: usize, opts: &LanczosOptions) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let dim = op.dim();
    let k = k.min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Vec<Complex64>> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut hv = vec![Complex64::new(0.0, 0.0); dim];
    let zero = Complex64::new(0.0, 0.0);

    let mut basis: Vec<Vec<Complex64>> = vec![random_unit(&mut rng, dim, &[&locked])];
    let mut t: Vec<Vec<Complex64>> = vec![vec![zero]];
    let mut first_new = 0usize;
    let mut want = k;
    let mut verifying = false;
    let mut last_residual = f64::INFINITY;

    for _cycle in 0..opts.max_restarts {
        let m_max = opts.krylov_dim.max(k.min(8) + 4).min(dim - locked.len()).max(1);
        // expand the basis, filling the projected matrix column by column
        let mut tail: Option<(f64, Vec<Complex64>)> = None;
        let mut col = first_new;
        loop {
            op.apply(&basis[col], &mut hv);
            let scale = norm(&hv);
            let mut w = hv.clone();
            orthogonalize(&mut w, &locked);
            let mut proj = vec![zero; basis.len()];
            for _ in 0..2 {
                for (i, q) in basis.iter().enumerate() {
                    let p = dot(q, &w);
                    proj[i] += p;
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= p * qi;
                    }
                }
            }
            for (i, &p) in proj.iter().enumerate() {
                t[i][col] = p;
                t[col][i] = p.conj();
            }
            t[col][col] = Complex64::new(proj[col].re, 0.0);
            let b = norm(&w);
            let invariant = b <= BREAKDOWN * scale.max(1.0);
            if invariant || basis.len() == m_max {
                if !invariant {
                    w.iter_mut().for_each(|v| *v /= b);
                    tail = Some((b, w));
                }
                break;
            }
            w.iter_mut().for_each(|v| *v /= b);
            basis.push(w);
            for row in t.iter_mut() {
                row.push(zero);
            }
            t.push(vec![zero; basis.len()]);
            col += 1;
        }

        let (theta, vecs) = projected_eigen(&t);
        let m = basis.len();
        let tail_b = tail.as_ref().map_or(0.0, |(b, _)| *b);

        if verifying {
            let worst = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let x = combine(&basis, &vecs[0]);
            let r = residual_norm(op, &x, theta[0], &locked, &mut hv);
            let slack = opts.tol * worst.abs().max(1.0) + r;
            if theta[0] >= worst - slack {
                break;
            }
            // something lower was missed: look for one more pair
            verifying = false;
            want += 1;
        }

        // lock converged Ritz pairs in ascending order
        let mut remaining_ritz: Vec<usize> = Vec::new();
        for i in 0..m {
            let target_left = locked.len() < want;
            let estimate = tail_b * vecs[i][m - 1].norm();
            if remaining_ritz.is_empty() && target_left && estimate < opts.tol * theta[i].abs().max(1.0) {
                let mut x = combine(&basis, &vecs[i]);
                orthogonalize(&mut x, &locked);
                let nx = norm(&x);
                x.iter_mut().for_each(|v| *v /= nx);
                let r = residual_norm(op, &x, theta[i], &locked, &mut hv);
                last_residual = r;
                if r < opts.tol * theta[i].abs().max(1.0) {
                    op.apply(&x, &mut hv);
                    values.push(dot(&x, &hv).re);
                    locked.push(x);
                    continue;
                }
            } else if remaining_ritz.is_empty() {
                last_residual = estimate;
            }
            remaining_ritz.push(i);
        }
        if locked.len() >= want {
            if locked.len() >= dim {
                break;
            }
            verifying = true;
            basis = vec![random_unit(&mut rng, dim, &[&locked])];
            t = vec![vec![zero]];
            first_new = 0;
            continue;
        }
        if locked.len() >= dim {
            break;
        }

        // thick restart: keep the lowest unconverged Ritz vectors plus a continuation vector
        let wanted = want.saturating_sub(locked.len()).max(1);
        let keep = remaining_ritz.len().min(wanted + 4).min(m_max / 2).min(dim - locked.len() - 1);
        let kept: Vec<usize> = remaining_ritz[..keep].to_vec();
        let mut new_basis: Vec<Vec<Complex64>> = Vec::with_capacity(m_max);
        for &i in &kept {
            let mut y = combine(&basis, &vecs[i]);
            orthogonalize(&mut y, &locked);
            orthogonalize(&mut y, &new_basis);
            let ny = norm(&y);
            y.iter_mut().for_each(|v| *v /= ny);
            new_basis.push(y);
        }
        let mut cont = match tail {
            Some((_, w)) => w,
            None => random_unit(&mut rng, dim, &[]),
        };
        orthogonalize(&mut cont, &locked);
        orthogonalize(&mut cont, &new_basis);
        let nc = norm(&cont);
        if nc > 1e-8 {
            cont.iter_mut().for_each(|v| *v /= nc);
        } else {
            cont = random_unit(&mut rng, dim, &[&locked, &new_basis]);
        }
        first_new = new_basis.len();
        let size = first_new + 1;
        // the kept vectors are only approximately Ritz vectors after reorthogonalization,
        // so their block of the projected matrix is recomputed
        t = vec![vec![zero; size]; size];
        for i in 0..first_new {
            op.apply(&new_basis[i], &mut hv);
            for j in 0..=i {
                let p = dot(&new_basis[j], &hv);
                t[j][i] = p;
                t[i][j] = p.conj();
            }
            t[i][i] = Complex64::new(t[i][i].re, 0.0);
        }
        new_basis.push(cont);
        basis = new_basis;
    }

    if values.len() < k {
        return Err(Error::NoConvergence { iterations: opts.max_restarts * opts.krylov_dim, residual: last_residual });
    }
    let mut pairs: Vec<(f64, Vec<Complex64>)> = values.into_iter().zip(locked).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(k);
    Ok(pairs)
}

pub fn lowest_eigenvalues(h: &Hamiltonian, k: usize, opts: &LanczosOptions) -> Result<Vec<f64>> {
    let op = PauliOperator::new(h)?;
    Ok(lowest_eigenpairs(&op, k, opts)?.into_iter().map(|(e, _)| e).collect())
}
