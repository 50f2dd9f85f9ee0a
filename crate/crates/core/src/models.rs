//! Hamiltonian families and the gate scripts that relate them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, Term};
use crate::lattice::{Boundary, Lattice};
use crate::pauli::{Pauli, PauliWord};
use crate::rotation::{GateScript, GateStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldAxis {
    X,
    Z,
}

impl FieldAxis {
    pub fn pauli(self) -> Pauli {
        match self {
            FieldAxis::X => Pauli::X,
            FieldAxis::Z => Pauli::Z,
        }
    }
}

/// Right-hand boundary of the x-field cluster chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterEnd {
    /// `Z_{N-2} Z_{N-1}`
    Zz,
    /// `Z_{N-2} X_{N-1}`, the same end as the z-field chain.
    Zx,
}

/// Parameters shared by the model builders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    /// Per-bond `ZZ` couplings of the XZ chain.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    /// Per-bond `XX` couplings of the XZ chain.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta: Vec<f64>,
    /// Seed for disordered prefactors; `None` means uniform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disorder_seed: Option<u64>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { g: 1.0, j: 1.0, alpha: Vec::new(), beta: Vec::new(), disorder_seed: None }
    }
}

fn word(ops: &[(usize, Pauli)]) -> PauliWord {
    PauliWord::new(ops.iter().copied()).expect("distinct sites")
}

fn t(coeff: f64, ops: &[(usize, Pauli)]) -> Term {
    Term::new(coeff, word(ops))
}

use Pauli::{X, Z};

/// Uniform draws in `[0.5, 1.5)` scaling each prefactor.
pub fn disorder_factors(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.5..1.5)).collect()
}

/// `−g Σ X_i − J Σ Z_i Z_{i+1}`.
///
/// A closed chain of two sites has the bond twice, merged into one term of weight `2J`.
pub fn build_tfim(n: usize, g: f64, j: f64, boundary: Boundary) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("transverse-field Ising chain needs N >= 2, got {n}")));
    }
    let mut terms: Vec<Term> = (0..n).map(|i| t(-g, &[(i, X)])).collect();
    terms.extend((0..n - 1).map(|i| t(-j, &[(i, Z), (i + 1, Z)])));
    if boundary == Boundary::Closed {
        terms.push(t(-j, &[(n - 1, Z), (0, Z)]));
    }
    Hamiltonian::new(n, terms)
}

/// `−J Σ Z_i Z_{i+1} − g Σ X_{odd i}` (fields on every second site, starting at site 1).
///
/// With a disorder seed every prefactor is scaled by its own factor from [`disorder_factors`].
pub fn build_staggered_tfim(n: usize, g: f64, j: f64, disorder_seed: Option<u64>) -> Result<Hamiltonian> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidParams(format!("staggered chain needs an even N >= 2, got {n}")));
    }
    let raw: Vec<Term> = (0..n - 1)
        .map(|i| t(-j, &[(i, Z), (i + 1, Z)]))
        .chain((0..n / 2).map(|k| t(-g, &[(2 * k + 1, X)])))
        .collect();
    let terms = match disorder_seed {
        None => raw,
        Some(seed) => raw
            .into_iter()
            .zip(disorder_factors(seed, 3 * n / 2 - 1))
            .map(|(term, f)| Term::new(term.coeff * f, term.word))
            .collect(),
    };
    Hamiltonian::new(n, terms)
}

/// `Σ α_i Z_i Z_{i+1} + β_i X_i X_{i+1}`.
pub fn build_xz(n: usize, alpha: &[f64], beta: &[f64]) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("XZ chain needs N >= 2, got {n}")));
    }
    if alpha.len() != n - 1 || beta.len() != n - 1 {
        return Err(Error::InvalidParams(format!(
            "XZ chain of {n} sites needs {} couplings per axis, got {} and {}",
            n - 1,
            alpha.len(),
            beta.len()
        )));
    }
    let terms = (0..n - 1).flat_map(|i| [t(alpha[i], &[(i, Z), (i + 1, Z)]), t(beta[i], &[(i, X), (i + 1, X)])]);
    Hamiltonian::new(n, terms.collect::<Vec<_>>())
}

/// Couplings in `[−1.5, −0.5) ∪ [0.5, 1.5)` for a random XZ chain.
pub fn random_xz_couplings(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let m: f64 = rng.gen_range(0.5..1.5);
        if rng.gen_bool(0.5) { m } else { -m }
    };
    let alpha = (0..n.saturating_sub(1)).map(|_| draw()).collect();
    let beta = (0..n.saturating_sub(1)).map(|_| draw()).collect();
    (alpha, beta)
}

/// Interaction part of the 1D cluster chain: `X_0 Z_1`, bulk `Z X Z`, and the chosen end.
pub fn cluster_1d_couplings(n: usize, j: f64, end: ClusterEnd) -> Result<Hamiltonian> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("cluster chain needs N >= 3, got {n}")));
    }
    let mut terms = vec![t(-j, &[(0, X), (1, Z)])];
    terms.extend((1..n - 1).map(|i| t(-j, &[(i - 1, Z), (i, X), (i + 1, Z)])));
    terms.push(match end {
        ClusterEnd::Zx => t(-j, &[(n - 2, Z), (n - 1, X)]),
        ClusterEnd::Zz => t(-j, &[(n - 2, Z), (n - 1, Z)]),
    });
    Hamiltonian::new(n, terms)
}

/// `−g Σ P_i` for `P` the field axis.
pub fn uniform_field(n: usize, g: f64, axis: FieldAxis) -> Result<Hamiltonian> {
    Hamiltonian::new(n, (0..n).map(|i| t(-g, &[(i, axis.pauli())])).collect::<Vec<_>>())
}

/// 1D cluster chain with a uniform field.
///
/// The z-field chain ends in `Z_{N-2} X_{N-1}`; the x-field chain ends in `Z_{N-2} Z_{N-1}`.
pub fn build_cluster_1d(n: usize, j: f64, g: f64, field: FieldAxis) -> Result<Hamiltonian> {
    let end = match field {
        FieldAxis::Z => ClusterEnd::Zx,
        FieldAxis::X => ClusterEnd::Zz,
    };
    build_cluster_1d_with_end(n, j, g, field, end)
}

pub fn build_cluster_1d_with_end(n: usize, j: f64, g: f64, field: FieldAxis, end: ClusterEnd) -> Result<Hamiltonian> {
    cluster_1d_couplings(n, j, end)?.linear_combination(1.0, &uniform_field(n, g, field)?, 1.0)
}

/// Interaction part of the lattice cluster model: `−J Σ_μ X_μ Π_{ν∼μ} Z_ν`.
pub fn cluster_lattice_couplings(lat: &Lattice, j: f64) -> Result<Hamiltonian> {
    let terms = (0..lat.n_sites()).map(|mu| {
        let ops = std::iter::once((mu, X)).chain(lat.neighbors(mu).iter().map(|&nu| (nu, Z)));
        Term::new(-j, PauliWord::new(ops).expect("a site is not its own neighbor"))
    });
    Hamiltonian::new(lat.n_sites(), terms.collect::<Vec<_>>())
}

pub fn build_cluster_lattice(lat: &Lattice, j: f64, g: f64, field: FieldAxis) -> Result<Hamiltonian> {
    let n = lat.n_sites();
    cluster_lattice_couplings(lat, j)?.linear_combination(1.0, &uniform_field(n, g, field)?, 1.0)
}

/// `−J Σ X_i − g Σ Z_i`.
pub fn build_free_spins(n: usize, j: f64, g: f64) -> Result<Hamiltonian> {
    uniform_field(n, j, FieldAxis::X)?.linear_combination(1.0, &uniform_field(n, g, FieldAxis::Z)?, 1.0)
}

/// CX on every bond, right end first: `CX(N−2, N−1), …, CX(0, 1)`.
pub fn cx_staircase(n: usize) -> GateScript {
    (0..n.saturating_sub(1)).rev().map(|i| GateStep::cx(i, i + 1)).collect()
}

/// CZ on every bond of an open chain.
pub fn cz_chain(n: usize) -> GateScript {
    (0..n.saturating_sub(1)).map(|i| GateStep::Cz(i, i + 1)).collect()
}

/// CZ on every edge of the lattice.
pub fn cz_all_links(lat: &Lattice) -> GateScript {
    lat.edges().iter().map(|&(a, b)| GateStep::Cz(a, b)).collect()
}

/// Model catalog entry for the CLI and the service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub model: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub lattice: Option<crate::lattice::LatticeSpec>,
    #[serde(default)]
    pub boundary: Option<Boundary>,
    #[serde(default)]
    pub field: Option<FieldAxis>,
    #[serde(default)]
    pub end: Option<ClusterEnd>,
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default = "one", rename = "J")]
    pub j: f64,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn one() -> f64 {
    1.0
}

/// Name, summary and parameter list of each buildable model.
#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub parameters: &'static [(&'static str, &'static str)],
}

pub const MODEL_CATALOG: &[ModelInfo] = &[
    ModelInfo {
        name: "tfim",
        summary: "transverse-field Ising chain -g ΣX - J ΣZZ",
        parameters: &[("n", "integer >= 2"), ("g", "number"), ("J", "number"), ("boundary", "open|closed")],
    },
    ModelInfo {
        name: "staggered_tfim",
        summary: "Ising chain with fields on every second site",
        parameters: &[("n", "even integer"), ("g", "number"), ("J", "number"), ("seed", "optional disorder seed")],
    },
    ModelInfo {
        name: "xz",
        summary: "chain of ZZ and XX bonds",
        parameters: &[("n", "integer >= 2"), ("alpha", "n-1 numbers"), ("beta", "n-1 numbers"), ("seed", "random couplings when alpha/beta absent")],
    },
    ModelInfo {
        name: "cluster_1d",
        summary: "1D cluster chain with a uniform field",
        parameters: &[("n", "integer >= 3"), ("g", "number"), ("J", "number"), ("field", "x|z"), ("end", "zz|zx (x field only)")],
    },
    ModelInfo {
        name: "cluster_lattice",
        summary: "cluster model on a lattice with a uniform field",
        parameters: &[("lattice", "lattice JSON"), ("g", "number"), ("J", "number"), ("field", "x|z")],
    },
    ModelInfo {
        name: "free_spins",
        summary: "-J ΣX - g ΣZ",
        parameters: &[("n", "integer >= 1"), ("g", "number"), ("J", "number")],
    },
];

impl ModelDescriptor {
    pub fn named(model: &str, n: usize) -> Self {
        Self {
            model: model.into(),
            n: Some(n),
            lattice: None,
            boundary: None,
            field: None,
            end: None,
            g: 1.0,
            j: 1.0,
            alpha: None,
            beta: None,
            seed: None,
        }
    }

    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::InvalidParams(format!("model {} needs n", self.model)))
    }

    pub fn build(&self) -> Result<Hamiltonian> {
        match self.model.as_str() {
            "tfim" => build_tfim(self.n()?, self.g, self.j, self.boundary.unwrap_or(Boundary::Open)),
            "staggered_tfim" => build_staggered_tfim(self.n()?, self.g, self.j, self.seed),
            "xz" => {
                let n = self.n()?;
                match (&self.alpha, &self.beta) {
                    (Some(a), Some(b)) => build_xz(n, a, b),
                    (None, None) => {
                        let (a, b) = random_xz_couplings(n, self.seed.unwrap_or(0));
                        build_xz(n, &a, &b)
                    }
                    _ => Err(Error::InvalidParams("give both alpha and beta or neither".into())),
                }
            }
            "cluster_1d" => {
                let field = self.field.unwrap_or(FieldAxis::Z);
                match self.end {
                    Some(end) => build_cluster_1d_with_end(self.n()?, self.j, self.g, field, end),
                    None => build_cluster_1d(self.n()?, self.j, self.g, field),
                }
            }
            "cluster_lattice" => {
                let spec = self
                    .lattice
                    .clone()
                    .ok_or_else(|| Error::InvalidParams("cluster_lattice needs a lattice".into()))?;
                build_cluster_lattice(&Lattice::new(spec)?, self.j, self.g, self.field.unwrap_or(FieldAxis::Z))
            }
            "free_spins" => build_free_spins(self.n()?, self.j, self.g),
            other => Err(Error::Unknown { kind: "model", name: other.into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, terms: &[(f64, &str)]) -> Hamiltonian {
        Hamiltonian::new(n, terms.iter().map(|&(c, s)| Term::new(c, PauliWord::parse(s).unwrap()))).unwrap()
    }

    #[test]
    fn tfim_three_sites() {
        let got = build_tfim(3, 1.0, 2.0, Boundary::Open).unwrap();
        let want = h(3, &[(-1.0, "X0"), (-1.0, "X1"), (-1.0, "X2"), (-2.0, "Z0 Z1"), (-2.0, "Z1 Z2")]);
        assert_eq!(got, want);
        assert!(build_tfim(1, 1.0, 1.0, Boundary::Open).is_err());
    }

    #[test]
    fn closed_pair_doubles_bond() {
        let got = build_tfim(2, 1.0, 1.0, Boundary::Closed).unwrap();
        assert_eq!(got.coeff_of(&PauliWord::parse("Z0 Z1").unwrap()), -2.0);
        assert_eq!(build_tfim(5, 1.0, 1.0, Boundary::Closed).unwrap().len(), 10);
    }

    #[test]
    fn staggered_counts() {
        let got = build_staggered_tfim(4, 1.0, 1.0, None).unwrap();
        assert_eq!(got, h(4, &[(-1.0, "Z0 Z1"), (-1.0, "Z1 Z2"), (-1.0, "Z2 Z3"), (-1.0, "X1"), (-1.0, "X3")]));
        assert!(build_staggered_tfim(5, 1.0, 1.0, None).is_err());
        let dis = build_staggered_tfim(6, 1.0, 1.0, Some(3)).unwrap();
        assert_eq!(dis.len(), 8);
        assert_ne!(dis, build_staggered_tfim(6, 1.0, 1.0, None).unwrap());
    }

    #[test]
    fn xz_validates_lengths() {
        assert_eq!(build_xz(4, &[1.0; 3], &[1.0; 3]).unwrap().len(), 6);
        assert!(build_xz(4, &[1.0; 2], &[1.0; 3]).is_err());
    }

    #[test]
    fn cluster_chain_z_field() {
        let got = build_cluster_1d(4, 1.0, 0.5, FieldAxis::Z).unwrap();
        let want = h(
            4,
            &[
                (-1.0, "X0 Z1"),
                (-1.0, "Z0 X1 Z2"),
                (-1.0, "Z1 X2 Z3"),
                (-1.0, "Z2 X3"),
                (-0.5, "Z0"),
                (-0.5, "Z1"),
                (-0.5, "Z2"),
                (-0.5, "Z3"),
            ],
        );
        assert_eq!(got, want);
        let x = build_cluster_1d(4, 1.0, 0.5, FieldAxis::X).unwrap();
        assert_eq!(x.coeff_of(&PauliWord::parse("Z2 Z3").unwrap()), -1.0);
    }

    #[test]
    fn cluster_lattice_two_by_two() {
        let lat = Lattice::grid(2, 2, Boundary::Open).unwrap();
        let c = cluster_lattice_couplings(&lat, 1.0).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.terms().iter().all(|t| t.word.len() == 3));
    }

    #[test]
    fn script_generators() {
        let s = cx_staircase(6);
        assert_eq!(s.steps.first(), Some(&GateStep::cx(4, 5)));
        assert_eq!(s.steps.last(), Some(&GateStep::cx(0, 1)));
        assert_eq!(cz_chain(5).len(), 4);
        assert_eq!(cz_all_links(&Lattice::grid(2, 2, Boundary::Open).unwrap()).len(), 4);
    }

    #[test]
    fn descriptor_builds_catalog_models() {
        for info in MODEL_CATALOG {
            let mut d = ModelDescriptor::named(info.name, 4);
            if info.name == "cluster_lattice" {
                d.lattice = Some(crate::lattice::LatticeSpec::Grid { rows: 2, cols: 2, boundary: Boundary::Open });
            }
            assert!(d.build().is_ok(), "{}", info.name);
        }
        assert!(matches!(ModelDescriptor::named("kagome", 4).build(), Err(Error::Unknown { .. })));
    }
}
