//! JSON wire formats for Hamiltonians and gate scripts.
//!
//! ```json
//! {"n_sites": 2, "terms": [{"coeff": -1.0, "word": [[0, "Z"], [1, "Z"]]}]}
//! [{"gate": "CX", "sites": [0, 1]}, {"gate": "ROT", "axis": [[0, "Y"]], "quarter_turns": 1}]
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, Term};
use crate::pauli::{Pauli, PauliWord};
use crate::rotation::{Angle, GateScript, GateStep};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: f64,
    pub word: Vec<(usize, Pauli)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    pub n_sites: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Hamiltonian> for HamiltonianJson {
    fn from(h: &Hamiltonian) -> Self {
        Self {
            n_sites: h.n_sites(),
            terms: h.terms().iter().map(|t| TermJson { coeff: t.coeff, word: t.word.ops().to_vec() }).collect(),
        }
    }
}

impl TryFrom<HamiltonianJson> for Hamiltonian {
    type Error = Error;

    fn try_from(j: HamiltonianJson) -> Result<Self> {
        let terms = j
            .terms
            .into_iter()
            .map(|t| Ok(Term::new(t.coeff, PauliWord::new(t.word)?)))
            .collect::<Result<Vec<_>>>()?;
        Hamiltonian::new(j.n_sites, terms)
    }
}

impl Serialize for Hamiltonian {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HamiltonianJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hamiltonian {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HamiltonianJson::deserialize(d)?;
        Hamiltonian::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepJson {
    gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sites: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axis: Option<Vec<(usize, Pauli)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quarter_turns: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

impl From<&GateStep> for StepJson {
    fn from(step: &GateStep) -> Self {
        let two = |gate: &str, a: usize, b: usize| StepJson {
            gate: gate.into(),
            sites: Some(vec![a, b]),
            axis: None,
            quarter_turns: None,
            angle: None,
        };
        match step {
            GateStep::Cz(i, j) => two("CZ", *i, *j),
            GateStep::Cx { control, target } => two("CX", *control, *target),
            GateStep::Swap(i, j) => two("SWAP", *i, *j),
            GateStep::Rotation { axis, angle } => StepJson {
                gate: "ROT".into(),
                sites: None,
                axis: Some(axis.ops().to_vec()),
                quarter_turns: match angle {
                    Angle::QuarterTurns(k) => Some(*k),
                    Angle::Radians(_) => None,
                },
                angle: match angle {
                    Angle::Radians(eta) => Some(*eta),
                    Angle::QuarterTurns(_) => None,
                },
            },
        }
    }
}

impl TryFrom<StepJson> for GateStep {
    type Error = String;

    fn try_from(j: StepJson) -> std::result::Result<Self, String> {
        let pair = |sites: &Option<Vec<usize>>| match sites.as_deref() {
            Some(&[a, b]) => Ok((a, b)),
            _ => Err(format!("{} needs \"sites\": [i, j]", j.gate)),
        };
        let named = |gate: &str| {
            if j.axis.is_some() || j.quarter_turns.is_some() || j.angle.is_some() {
                return Err(format!("{gate} takes only \"sites\""));
            }
            Ok(())
        };
        match j.gate.as_str() {
            "CZ" => named("CZ").and(pair(&j.sites).map(|(a, b)| GateStep::Cz(a, b))),
            "CX" => named("CX").and(pair(&j.sites).map(|(a, b)| GateStep::cx(a, b))),
            "SWAP" => named("SWAP").and(pair(&j.sites).map(|(a, b)| GateStep::Swap(a, b))),
            "ROT" => {
                if j.sites.is_some() {
                    return Err("ROT takes \"axis\", not \"sites\"".into());
                }
                let axis = PauliWord::new(j.axis.clone().ok_or("ROT needs \"axis\"")?).map_err(|e| e.to_string())?;
                let angle = match (j.quarter_turns, j.angle) {
                    (Some(k), None) => Angle::QuarterTurns(k),
                    (None, Some(eta)) => Angle::Radians(eta),
                    _ => return Err("ROT needs exactly one of \"quarter_turns\" or \"angle\"".into()),
                };
                Ok(GateStep::Rotation { axis, angle })
            }
            other => Err(format!("unknown gate {other:?}")),
        }
    }
}

impl Serialize for GateStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GateStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GateStep::try_from(StepJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for GateScript {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.steps.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GateScript {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(GateScript::new(Vec::deserialize(d)?))
    }
}

pub fn hamiltonian_from_str(s: &str) -> Result<Hamiltonian> {
    Ok(serde_json::from_str(s)?)
}

pub fn script_from_str(s: &str) -> Result<GateScript> {
    Ok(serde_json::from_str(s)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
