//! Real-weighted sums of Pauli words in canonical normal form.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::PauliWord;

/// Coefficients below this magnitude are dropped by [`canonicalize`].
pub const DROP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub word: PauliWord,
}

impl Term {
    pub fn new(coeff: f64, word: PauliWord) -> Self {
        Self { coeff, word }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+} {}", self.coeff, self.word)
    }
}

/// Hamiltonian on `n_sites` spins.
///
/// Values produced by [`Hamiltonian::new`] and every transformation in this crate
/// are canonical: words pairwise distinct, sorted, and no coefficient smaller than
/// the drop tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n_sites: usize,
    terms: Vec<Term>,
}

impl Hamiltonian {
    /// Validates site ranges and canonicalizes with [`DROP_TOLERANCE`].
    pub fn new(n_sites: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        Self::with_tolerance(n_sites, terms, DROP_TOLERANCE)
    }

    pub fn with_tolerance(
        n_sites: usize,
        terms: impl IntoIterator<Item = Term>,
        tol: f64,
    ) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParams("n_sites must be positive".into()));
        }
        let terms: Vec<Term> = terms.into_iter().collect();
        for t in &terms {
            if !t.coeff.is_finite() {
                return Err(Error::InvalidParams(format!("non-finite coefficient on {}", t.word)));
            }
            if let Some(site) = t.word.max_site() {
                if site >= n_sites {
                    return Err(Error::SiteOutOfRange { site, n_sites });
                }
            }
        }
        Ok(canonical_from_raw(n_sites, terms, tol))
    }

    pub fn empty(n_sites: usize) -> Self {
        Self { n_sites, terms: Vec::new() }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, word: &PauliWord) -> f64 {
        self.terms
            .binary_search_by(|t| t.word.cmp(word))
            .map(|i| self.terms[i].coeff)
            .unwrap_or(0.0)
    }

    /// `a·self + b·other`, canonicalized.
    pub fn linear_combination(&self, a: f64, other: &Hamiltonian, b: f64) -> Result<Hamiltonian> {
        if self.n_sites != other.n_sites {
            return Err(Error::SizeMismatch(self.n_sites, other.n_sites));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(a * t.coeff, t.word.clone()))
            .chain(other.terms.iter().map(|t| Term::new(b * t.coeff, t.word.clone())));
        Ok(canonical_from_raw(self.n_sites, terms.collect(), DROP_TOLERANCE))
    }

    pub fn scaled(&self, a: f64) -> Hamiltonian {
        let terms = self.terms.iter().map(|t| Term::new(a * t.coeff, t.word.clone())).collect();
        canonical_from_raw(self.n_sites, terms, DROP_TOLERANCE)
    }

    /// True when every word has an even number of `Y` factors, i.e. the matrix is real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.word.count_y() % 2 == 0)
    }

    /// Sum of |coeff|, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Sites that appear in at least one term.
    pub fn support(&self) -> Vec<bool> {
        let mut used = vec![false; self.n_sites];
        for t in &self.terms {
            for s in t.word.sites() {
                used[s] = true;
            }
        }
        used
    }

    /// Hamiltonian with the same terms on a different number of sites.
    pub fn resized(&self, n_sites: usize) -> Result<Hamiltonian> {
        Hamiltonian::new(n_sites, self.terms.iter().cloned())
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} sites, {} terms", self.n_sites, self.terms.len())?;
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

fn canonical_from_raw(n_sites: usize, terms: Vec<Term>, tol: f64) -> Hamiltonian {
    let mut merged: BTreeMap<PauliWord, f64> = BTreeMap::new();
    for t in terms {
        *merged.entry(t.word).or_insert(0.0) += t.coeff;
    }
    let terms = merged
        .into_iter()
        .filter(|(_, c)| c.abs() >= tol)
        .map(|(word, coeff)| Term { coeff, word })
        .collect();
    Hamiltonian { n_sites, terms }
}

/// Merge like words, drop coefficients below `tol`, and sort by the word order.
pub fn canonicalize_with(h: &Hamiltonian, tol: f64) -> Hamiltonian {
    canonical_from_raw(h.n_sites, h.terms.clone(), tol)
}

pub fn canonicalize(h: &Hamiltonian) -> Hamiltonian {
    canonicalize_with(h, DROP_TOLERANCE)
}
