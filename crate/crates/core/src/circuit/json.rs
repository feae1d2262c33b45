// Copyright 2026 The pauliflow Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! JSON form of a circuit.
//!
//! ```json
//! {"lattice": [3, 1],
//!  "layers": [[{"kind": "H", "qubits": [[0, 0]]},
//!              {"kind": "U", "qubits": [[1, 0]], "matrix": [[1, 0], [0, 0], [0, 0], [1, 0]]}]]}
//! ```
//! `matrix` is row-major, each entry `[re, im]`, with local basis bit `i` on `qubits[i]`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Circuit, Coord, Gate, GateKind, Lattice};
use crate::error::{invalid, Result};
use crate::pauli::{CliffordGate, UnitaryMatrix};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateJson {
    pub kind: String,
    pub qubits: Vec<Coord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircuitJson {
    pub lattice: [usize; 2],
    pub layers: Vec<Vec<GateJson>>,
}

impl From<&Gate> for GateJson {
    fn from(g: &Gate) -> Self {
        let matrix = match &g.kind {
            GateKind::Unitary(u) => Some(u.row_major().into_iter().map(|c| [c.re, c.im]).collect()),
            _ => None,
        };
        GateJson {
            kind: g.kind.name().to_string(),
            qubits: g.qubits.clone(),
            matrix,
        }
    }
}

impl TryFrom<GateJson> for Gate {
    type Error = crate::error::Error;

    fn try_from(g: GateJson) -> Result<Self> {
        let kind = match (g.kind.as_str(), g.matrix) {
            ("U", Some(m)) => {
                let entries: Vec<Complex64> = m.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                GateKind::Unitary(UnitaryMatrix::from_row_major(&entries)?)
            }
            ("U", None) => return Err(invalid("gate U needs a matrix")),
            ("T", None) => GateKind::T,
            (name, None) => GateKind::Clifford(
                CliffordGate::from_name(name).ok_or_else(|| invalid(format!("unknown gate {name:?}")))?,
            ),
            (name, Some(_)) => return Err(invalid(format!("gate {name:?} does not take a matrix"))),
        };
        Ok(Gate::new(kind, g.qubits))
    }
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        CircuitJson {
            lattice: [c.lattice.lx, c.lattice.ly],
            layers: c.layers.iter().map(|l| l.iter().map(GateJson::from).collect()).collect(),
        }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = crate::error::Error;

    fn try_from(j: CircuitJson) -> Result<Self> {
        let lattice = Lattice::new(j.lattice[0], j.lattice[1]);
        if lattice.num_qubits() == 0 {
            return Err(invalid("lattice must be non-empty"));
        }
        let layers = j
            .layers
            .into_iter()
            .map(|l| l.into_iter().map(Gate::try_from).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Circuit::validated(lattice, layers)
    }
}

impl Circuit {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: CircuitJson = serde_json::from_str(s)?;
        Circuit::try_from(j)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CircuitJson::from(self))?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;

    #[test]
    fn round_trip_preserves_gates() {
        let lattice = Lattice::new(2, 2);
        let circuit = Circuit::validated(
            lattice,
            vec![
                vec![
                    Gate::clifford(CliffordGate::Cnot, &[Coord::new(0, 0), Coord::new(1, 0)]),
                    Gate::t(Coord::new(0, 1)),
                    Gate::unitary(UnitaryMatrix::rotation(Letter::X, 0.7), &[Coord::new(1, 1)]),
                ],
                vec![Gate::clifford(CliffordGate::Sdg, &[Coord::new(1, 1)])],
            ],
        )
        .unwrap();
        let back = Circuit::from_json_str(&circuit.to_json_string().unwrap()).unwrap();
        assert_eq!(back.depth(), 2);
        assert_eq!(back.layers()[0][0], circuit.layers()[0][0]);
        assert_eq!(back.layers()[1], circuit.layers()[1]);
        let (GateKind::Unitary(a), GateKind::Unitary(b)) = (&circuit.layers()[0][2].kind, &back.layers()[0][2].kind) else {
            panic!("expected unitaries");
        };
        assert!((a.matrix() - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn invalid_json_circuits_are_rejected() {
        let overlap = r#"{"lattice":[2,1],"layers":[[{"kind":"H","qubits":[[0,0]]},{"kind":"X","qubits":[[0,0]]}]]}"#;
        assert!(Circuit::from_json_str(overlap).is_err());
        let unknown = r#"{"lattice":[1,1],"layers":[[{"kind":"Q","qubits":[[0,0]]}]]}"#;
        assert!(Circuit::from_json_str(unknown).is_err());
        let nonunitary = r#"{"lattice":[1,1],"layers":[[{"kind":"U","qubits":[[0,0]],"matrix":[[1,0],[1,0],[0,0],[1,0]]}]]}"#;
        assert!(Circuit::from_json_str(nonunitary).is_err());
    }
}
