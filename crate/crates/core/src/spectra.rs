//! Spectra, gaps and degeneracies by dense or matrix-free diagonalization.

use serde::{Deserialize, Serialize};

use crate::dense::{to_dense_capped, DENSE_CAP};
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::lanczos::{lowest_eigenvalues, LanczosOptions, ITERATIVE_CAP};

/// Relative scale of the default degeneracy tolerance.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;

/// Site-count limits for the two solver paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub dense: usize,
    pub iterative: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { dense: DENSE_CAP, iterative: ITERATIVE_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense when within the dense cap, otherwise iterative.
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub degeneracy_tol: f64,
    /// `(value, count)` groups partitioning `eigenvalues`.
    pub multiplicities: Vec<(f64, usize)>,
    /// True when `eigenvalues` is the full spectrum.
    pub complete: bool,
}

impl SpectrumResult {
    fn from_sorted(eigenvalues: Vec<f64>, tol: Option<f64>, complete: bool) -> Self {
        let degeneracy_tol = tol.unwrap_or_else(|| default_degeneracy_tol(&eigenvalues));
        let multiplicities = group_levels(&eigenvalues, degeneracy_tol);
        Self { eigenvalues, degeneracy_tol, multiplicities, complete }
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// True when every level has an even multiplicity.
    pub fn all_multiplicities_even(&self) -> bool {
        self.multiplicities.iter().all(|&(_, c)| c % 2 == 0)
    }
}

/// `1e-8 · max(max|λ|, 1)`
pub fn default_degeneracy_tol(eigenvalues: &[f64]) -> f64 {
    let scale = eigenvalues.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    DEGENERACY_REL_TOL * scale
}

/// Group sorted eigenvalues; a level collects values within `tol` of its first member.
pub fn group_levels(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = f64::NAN;
    for &e in sorted {
        match out.last_mut() {
            Some((_, count)) if e - start <= tol => *count += 1,
            _ => {
                start = e;
                out.push((e, 1));
            }
        }
    }
    out
}

fn dense_eigenvalues(h: &Hamiltonian, cap: usize) -> Result<Vec<f64>> {
    let m = to_dense_capped(h, cap)?;
    let dim = m.dim();
    let mut eig = if h.is_real() {
        let a = faer::Mat::<f64>::from_fn(dim, dim, |r, c| m.get(r, c).re);
        a.self_adjoint_eigenvalues(faer::Side::Lower)
    } else {
        let a = faer::Mat::<faer::c64>::from_fn(dim, dim, |r, c| m.get(r, c));
        a.self_adjoint_eigenvalues(faer::Side::Lower)
    }
    .map_err(|e| Error::InvalidParams(format!("dense eigensolver failed: {e:?}")))?;
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Every eigenvalue, ascending, through dense diagonalization.
pub fn full_spectrum(h: &Hamiltonian) -> Result<SpectrumResult> {
    full_spectrum_capped(h, Caps::default())
}

pub fn full_spectrum_capped(h: &Hamiltonian, caps: Caps) -> Result<SpectrumResult> {
    Ok(SpectrumResult::from_sorted(dense_eigenvalues(h, caps.dense)?, None, true))
}

/// The `k` lowest eigenvalues with multiplicity.
pub fn extremal_eigs(h: &Hamiltonian, k: usize) -> Result<SpectrumResult> {
    extremal_eigs_with(h, k, Method::Auto, Caps::default())
}

pub fn extremal_eigs_with(h: &Hamiltonian, k: usize, method: Method, caps: Caps) -> Result<SpectrumResult> {
    let dense = match method {
        Method::Dense => true,
        Method::Iterative => false,
        Method::Auto => h.n_sites() <= caps.dense,
    };
    if dense {
        let mut all = dense_eigenvalues(h, caps.dense)?;
        let complete = k >= all.len();
        all.truncate(k);
        return Ok(SpectrumResult::from_sorted(all, None, complete));
    }
    if h.n_sites() > caps.iterative {
        return Err(Error::CapExceeded { what: "iterative eigensolver", n_sites: h.n_sites(), cap: caps.iterative });
    }
    let eig = lowest_eigenvalues(h, k, &LanczosOptions::default())?;
    let complete = eig.len() == 1 << h.n_sites();
    Ok(SpectrumResult::from_sorted(eig, None, complete))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralComparison {
    pub equal: bool,
    pub max_deviation: f64,
}

/// Compare sorted full spectra elementwise.
pub fn spectra_equal(h1: &Hamiltonian, h2: &Hamiltonian, tol: f64) -> Result<SpectralComparison> {
    if h1.n_sites() != h2.n_sites() {
        return Err(Error::SizeMismatch(h1.n_sites(), h2.n_sites()));
    }
    let a = dense_eigenvalues(h1, DENSE_CAP)?;
    let b = dense_eigenvalues(h2, DENSE_CAP)?;
    let max_deviation = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(SpectralComparison { equal: max_deviation <= tol, max_deviation })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapInfo {
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    /// `None` when the computed spectrum has a single level.
    pub gap: Option<f64>,
    pub degeneracy_tol: f64,
}

fn gap_from(spec: &SpectrumResult, tol: f64) -> Option<GapInfo> {
    let e0 = spec.eigenvalues[0];
    let ground_degeneracy = spec.eigenvalues.iter().take_while(|&&e| e - e0 <= tol).count();
    let next = spec.eigenvalues.get(ground_degeneracy)?;
    Some(GapInfo { ground_energy: e0, ground_degeneracy, gap: Some(next - e0), degeneracy_tol: tol })
}

/// Ground degeneracy and the gap to the first level above it.
///
/// `degeneracy_tol = None` uses `1e-8 · max(max|λ|, 1)` over the computed eigenvalues.
pub fn gap(h: &Hamiltonian, degeneracy_tol: Option<f64>) -> Result<GapInfo> {
    gap_with(h, degeneracy_tol, Method::Auto, Caps::default())
}

pub fn gap_with(h: &Hamiltonian, degeneracy_tol: Option<f64>, method: Method, caps: Caps) -> Result<GapInfo> {
    let dense = match method {
        Method::Dense => true,
        Method::Iterative => false,
        Method::Auto => h.n_sites() <= caps.dense,
    };
    if dense {
        let spec = full_spectrum_capped(h, caps)?;
        let tol = degeneracy_tol.unwrap_or(spec.degeneracy_tol);
        return Ok(gap_from(&spec, tol).unwrap_or(GapInfo {
            ground_energy: spec.eigenvalues[0],
            ground_degeneracy: spec.eigenvalues.len(),
            gap: None,
            degeneracy_tol: tol,
        }));
    }
    let dim = 1usize << h.n_sites().min(63);
    let mut k = 4usize;
    loop {
        let spec = extremal_eigs_with(h, k, Method::Iterative, caps)?;
        let tol = degeneracy_tol.unwrap_or(spec.degeneracy_tol);
        if let Some(info) = gap_from(&spec, tol) {
            return Ok(info);
        }
        if k >= dim {
            return Ok(GapInfo { ground_energy: spec.eigenvalues[0], ground_degeneracy: k, gap: None, degeneracy_tol: tol });
        }
        k = (k * 2).min(dim);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub s_grid: Vec<f64>,
    pub gaps: Vec<f64>,
    pub ground_degeneracies: Vec<usize>,
    pub min_gap: f64,
    pub argmin_s: f64,
}

/// `M + 1` equally spaced points on `[0, 1]`.
pub fn uniform_grid(m: usize) -> Vec<f64> {
    let m = m.max(1);
    (0..=m).map(|k| k as f64 / m as f64).collect()
}

/// Gap of `H(s) = (1 - s)·h0 + s·h1` along `s_grid`.
pub fn gap_scan(h0: &Hamiltonian, h1: &Hamiltonian, s_grid: &[f64]) -> Result<GapScan> {
    gap_scan_with(h0, h1, s_grid, Method::Auto, Caps::default())
}

pub fn gap_scan_with(h0: &Hamiltonian, h1: &Hamiltonian, s_grid: &[f64], method: Method, caps: Caps) -> Result<GapScan> {
    if h0.n_sites() != h1.n_sites() {
        return Err(Error::SizeMismatch(h0.n_sites(), h1.n_sites()));
    }
    if s_grid.is_empty() {
        return Err(Error::InvalidParams("empty interpolation grid".into()));
    }
    let mut gaps = Vec::with_capacity(s_grid.len());
    let mut ground_degeneracies = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let hs = h0.linear_combination(1.0 - s, h1, s)?;
        let info = gap_with(&hs, None, method, caps)?;
        gaps.push(info.gap.unwrap_or(0.0));
        ground_degeneracies.push(info.ground_degeneracy);
    }
    let (argmin, &min_gap) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    Ok(GapScan { s_grid: s_grid.to_vec(), gaps, ground_degeneracies, min_gap, argmin_s: s_grid[argmin] })
}
