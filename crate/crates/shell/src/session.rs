//! In-memory sessions: a model, the steps applied to it, and an undo stack.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};
use spindual::lab::{decoupling_components, Decoupling};
use spindual::models::ModelDescriptor;
use spindual::rotation::apply_step;
use spindual::{GateScript, GateStep, Hamiltonian, Pauli};
use uuid::Uuid;

/// Hex SHA-256 of the canonical JSON form.
pub fn state_hash(h: &Hamiltonian) -> String {
    let bytes = serde_json::to_vec(h).expect("serializable");
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: Uuid,
    pub model: ModelDescriptor,
    pub created: u64,
    pub current: Hamiltonian,
    /// Applied steps, each with the hash of the state it was applied to.
    pub undo: Vec<(GateStep, String)>,
}

#[derive(Debug)]
pub enum SessionError {
    InvalidStep(String),
    NothingToUndo,
    /// Replay did not land on the recorded state.
    Diverged { expected: String, got: String },
}

impl Session {
    pub fn new(model: ModelDescriptor) -> spindual::Result<Self> {
        let current = model.build()?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Ok(Self { id: Uuid::new_v4(), model, created, current, undo: Vec::new() })
    }

    pub fn steps(&self) -> GateScript {
        self.undo.iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn apply(&mut self, step: GateStep) -> Result<(), SessionError> {
        step.check(self.current.n_sites()).map_err(SessionError::InvalidStep)?;
        let next = apply_step(&self.current, &step).map_err(|e| SessionError::InvalidStep(e.to_string()))?;
        self.undo.push((step, state_hash(&self.current)));
        self.current = next;
        Ok(())
    }

    /// Rebuilds the model and applies the recorded steps in order.
    pub fn replay(&self) -> spindual::Result<Hamiltonian> {
        let mut h = self.model.build()?;
        for (step, _) in &self.undo {
            h = apply_step(&h, step)?;
        }
        Ok(h)
    }

    /// Drops the last step by replaying the rest, so rotations leave no rounding behind.
    pub fn undo(&mut self) -> Result<GateStep, SessionError> {
        let (step, expected) = self.undo.pop().ok_or(SessionError::NothingToUndo)?;
        let previous = self.replay().map_err(|e| SessionError::InvalidStep(e.to_string()))?;
        let got = state_hash(&previous);
        if got != expected {
            self.undo.push((step, expected.clone()));
            return Err(SessionError::Diverged { expected, got });
        }
        self.current = previous;
        Ok(step)
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id,
            model: self.model.clone(),
            created: self.created,
            n_sites: self.current.n_sites(),
            hash: state_hash(&self.current),
            hamiltonian: self.current.clone(),
            steps: self.steps(),
            diagram: Diagram::of(&self.current),
            decoupling: decoupling_components(&self.current),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: Uuid,
    pub model: ModelDescriptor,
    pub created: u64,
    pub n_sites: usize,
    pub hash: String,
    pub hamiltonian: Hamiltonian,
    pub steps: GateScript,
    pub diagram: Diagram,
    pub decoupling: Decoupling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Square,
    Hexagon,
    Circle,
}

impl From<Pauli> for Shape {
    fn from(p: Pauli) -> Self {
        match p {
            Pauli::X => Shape::Square,
            Pauli::Y => Shape::Hexagon,
            Pauli::Z => Shape::Circle,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Symbol {
    pub term: usize,
    pub shape: Shape,
}

#[derive(Debug, Serialize)]
pub struct Connection {
    pub term: usize,
    pub coeff: f64,
    pub label: String,
    pub sites: Vec<usize>,
}

/// Drawing data: the symbols on each site and the sites each term ties together.
#[derive(Debug, Serialize)]
pub struct Diagram {
    pub sites: Vec<Vec<Symbol>>,
    pub connections: Vec<Connection>,
}

impl Diagram {
    pub fn of(h: &Hamiltonian) -> Self {
        let mut sites: Vec<Vec<Symbol>> = (0..h.n_sites()).map(|_| Vec::new()).collect();
        let mut connections = Vec::new();
        for (i, t) in h.terms().iter().enumerate() {
            for &(s, p) in t.word.ops() {
                sites[s].push(Symbol { term: i, shape: p.into() });
            }
            connections.push(Connection {
                term: i,
                coeff: t.coeff,
                label: t.word.to_string(),
                sites: t.word.ops().iter().map(|&(s, _)| s).collect(),
            });
        }
        Self { sites, connections }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spindual::{Angle, PauliWord};

    #[test]
    fn undo_restores_exactly() {
        let mut s = Session::new(ModelDescriptor::named("tfim", 4)).unwrap();
        let before = s.current.clone();
        s.apply(GateStep::rotation(PauliWord::parse("Y1").unwrap(), Angle::Radians(0.3))).unwrap();
        s.apply(GateStep::cx(0, 1)).unwrap();
        s.undo().unwrap();
        s.undo().unwrap();
        assert_eq!(s.current, before);
        assert!(matches!(s.undo(), Err(SessionError::NothingToUndo)));
    }

    #[test]
    fn shapes() {
        let d = Diagram::of(&ModelDescriptor::named("tfim", 2).build().unwrap());
        assert_eq!(d.sites[0].len(), 2);
        assert_eq!(d.connections.iter().filter(|c| c.sites.len() == 2).count(), 1);
    }
}
