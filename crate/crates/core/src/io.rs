//! JSON schemas for state and protocol files.
//!
//! Quasiclassical state: `{"probs": [..], "energies": [..]}`.
//! Density state: `{"rho": [[re, im], ..], "hamiltonian": [[re, im], ..]}`,
//! both flattened row-major with `d^2` entries.
//! Protocol: `{"initial_energies": [..], "segments": [{"quench": [..]} | {"thermalize": l}, ..]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuation::{Protocol, Segment};
use crate::states::{is_quasiclassical, CMatrix, DensityState, EnergyLevels, QuasiState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiStateFile {
    pub probs: Vec<f64>,
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityStateFile {
    pub rho: Vec<[f64; 2]>,
    pub hamiltonian: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentFile {
    Quench(Vec<f64>),
    Thermalize(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    pub initial_energies: Vec<f64>,
    pub segments: Vec<SegmentFile>,
}

/// A parsed state file of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Quasi(QuasiState<f64>),
    Density(DensityState<f64>),
}

impl StateFile {
    /// The diagonal of a density state whose `rho` commutes with its
    /// Hamiltonian, in the energy basis.
    pub fn into_quasi(self, tol: f64) -> Result<QuasiState<f64>> {
        match self {
            StateFile::Quasi(s) => Ok(s),
            StateFile::Density(s) => s.to_quasi(tol),
        }
    }
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Schema { location: format!("line {}, column {}", e.line(), e.column()), message: e.to_string() }
}

fn field(name: &str, e: Error) -> Error {
    Error::Schema { location: format!("field `{name}`"), message: e.to_string() }
}

fn square(name: &str, entries: &[[f64; 2]]) -> Result<CMatrix<f64>> {
    let n = entries.len();
    let d = (n as f64).sqrt().round() as usize;
    if d == 0 || d * d != n {
        return Err(Error::Schema {
            location: format!("field `{name}`"),
            message: format!("{n} entries do not form a square matrix"),
        });
    }
    Ok(CMatrix::from_row_iterator(d, d, entries.iter().map(|&[re, im]| Complex::new(re, im))))
}

impl QuasiStateFile {
    pub fn into_state(self) -> Result<QuasiState<f64>> {
        let energies = EnergyLevels::new(self.energies).map_err(|e| field("energies", e))?;
        QuasiState::new(self.probs, energies).map_err(|e| field("probs", e))
    }

    pub fn from_state(s: &QuasiState<f64>) -> Self {
        Self { probs: s.probs().to_vec(), energies: s.energies().as_slice().to_vec() }
    }
}

impl DensityStateFile {
    pub fn into_state(self) -> Result<DensityState<f64>> {
        let rho = square("rho", &self.rho)?;
        let h = square("hamiltonian", &self.hamiltonian)?;
        if rho.nrows() != h.nrows() {
            return Err(Error::Schema {
                location: "field `hamiltonian`".into(),
                message: format!("dimension {} differs from rho's {}", h.nrows(), rho.nrows()),
            });
        }
        DensityState::new(rho, h).map_err(|e| field("rho", e))
    }

    pub fn from_state(s: &DensityState<f64>) -> Self {
        let flat = |m: &CMatrix<f64>| {
            let d = m.nrows();
            (0..d * d).map(|k| [m[(k / d, k % d)].re, m[(k / d, k % d)].im]).collect()
        };
        Self { rho: flat(s.rho()), hamiltonian: flat(s.hamiltonian()) }
    }
}

impl ProtocolFile {
    pub fn into_protocol(self) -> Result<Protocol<f64>> {
        let initial = EnergyLevels::new(self.initial_energies).map_err(|e| field("initial_energies", e))?;
        let segments = self
            .segments
            .into_iter()
            .enumerate()
            .map(|(k, s)| match s {
                SegmentFile::Quench(e) => {
                    EnergyLevels::new(e).map(Segment::Quench).map_err(|e| field(&format!("segments[{k}].quench"), e))
                }
                SegmentFile::Thermalize(l) => Ok(Segment::Thermalize(l)),
            })
            .collect::<Result<Vec<_>>>()?;
        Protocol::new(initial, segments).map_err(|e| field("segments", e))
    }

    pub fn from_protocol(p: &Protocol<f64>) -> Self {
        Self {
            initial_energies: p.initial_energies().as_slice().to_vec(),
            segments: p
                .segments()
                .iter()
                .map(|s| match s {
                    Segment::Quench(e) => SegmentFile::Quench(e.as_slice().to_vec()),
                    Segment::Thermalize(l) => SegmentFile::Thermalize(*l),
                })
                .collect(),
        }
    }
}

/// Parses a state file, choosing the schema by the presence of `rho`.
pub fn parse_state(text: &str) -> Result<StateFile> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(syntax)?;
    if value.get("rho").is_some() {
        let file: DensityStateFile = serde_json::from_str(text).map_err(syntax)?;
        Ok(StateFile::Density(file.into_state()?))
    } else {
        let file: QuasiStateFile = serde_json::from_str(text).map_err(syntax)?;
        Ok(StateFile::Quasi(file.into_state()?))
    }
}

pub fn parse_protocol(text: &str) -> Result<Protocol<f64>> {
    serde_json::from_str::<ProtocolFile>(text).map_err(syntax)?.into_protocol()
}

pub fn quasi_state_to_json(s: &QuasiState<f64>) -> String {
    serde_json::to_string(&QuasiStateFile::from_state(s)).expect("plain data serializes")
}

pub fn density_state_to_json(s: &DensityState<f64>) -> String {
    serde_json::to_string(&DensityStateFile::from_state(s)).expect("plain data serializes")
}

pub fn protocol_to_json(p: &Protocol<f64>) -> String {
    serde_json::to_string(&ProtocolFile::from_protocol(p)).expect("plain data serializes")
}

/// Whether a parsed density state can be treated as quasiclassical.
pub fn is_quasiclassical_file(s: &StateFile, tol: f64) -> bool {
    match s {
        StateFile::Quasi(_) => true,
        StateFile::Density(d) => is_quasiclassical(d, tol),
    }
}
