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

//! Ising models `H = Σ J_ij z_i z_j + Σ b_i z_i` with spins `z = ±1`: exact
//! minimisation, block approximation, and the energy observable.
//!
//! A configuration is a `&[bool]` where `false` is spin `+1` (qubit `|0⟩`).

mod dispatch;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Coord, Lattice};
use crate::error::{invalid, Error, Result};
use crate::pauli::{Letter, Observable, PauliString};

pub use dispatch::{theorem2_dispatch, Branch, DispatchOptions, DispatchReport};

/// Largest spin count handled by exhaustive search.
pub const MAX_EXACT_SPINS: usize = 26;
/// Largest block side: `L² ≤ 26`.
pub const MAX_BLOCK_SIDE: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    fields: Vec<f64>,
    placement: Option<Vec<Coord>>,
}

#[derive(Serialize, Deserialize)]
struct IsingJson {
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    fields: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    placement: Option<Vec<Coord>>,
}

impl IsingModel {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, fields: Vec<f64>) -> Result<Self> {
        if fields.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: fields.len() });
        }
        if fields.iter().any(|b| !b.is_finite()) {
            return Err(invalid("fields must be finite"));
        }
        let mut seen = std::collections::HashSet::new();
        for &(i, j, c) in &edges {
            if i >= n || j >= n {
                return Err(Error::QubitOutOfRange { index: i.max(j), n });
            }
            if i == j {
                return Err(invalid(format!("self-loop on spin {i}")));
            }
            if c == 0.0 || !c.is_finite() {
                return Err(invalid(format!("edge ({i}, {j}) needs a finite non-zero coupling")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(invalid(format!("edge ({i}, {j}) listed twice")));
            }
        }
        Ok(Self { n, edges, fields, placement: None })
    }

    pub fn with_placement(mut self, placement: Vec<Coord>) -> Result<Self> {
        if placement.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: placement.len() });
        }
        for (i, c) in placement.iter().enumerate() {
            if placement[..i].contains(c) {
                return Err(invalid(format!("two spins placed on {c}")));
            }
        }
        self.placement = Some(placement);
        Ok(self)
    }

    /// Nearest-neighbour model on the lattice, spin `i` on site `i`. Zero
    /// couplings are left out.
    pub fn grid(lattice: Lattice, mut coupling: impl FnMut(Coord, Coord) -> f64) -> Self {
        let mut edges = Vec::new();
        for c in lattice.coords() {
            let i = lattice.index(c);
            for other in [Coord::new(c.x + 1, c.y), Coord::new(c.x, c.y + 1)] {
                if lattice.contains(other) {
                    let j = coupling(c, other);
                    if j != 0.0 {
                        edges.push((i, lattice.index(other), j));
                    }
                }
            }
        }
        let n = lattice.num_qubits();
        Self {
            n,
            edges,
            fields: vec![0.0; n],
            placement: Some(lattice.coords().collect()),
        }
    }

    pub fn num_spins(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn placement(&self) -> Option<&[Coord]> {
        self.placement.as_deref()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(i, j, _) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn j_max(&self) -> f64 {
        self.edges.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }

    /// Longest edge in lattice (Manhattan) distance under the placement.
    pub fn max_edge_length(&self) -> Option<usize> {
        let p = self.placement.as_ref()?;
        Some(self.edges.iter().map(|&(i, j, _)| p[i].manhattan(p[j])).max().unwrap_or(0))
    }

    pub fn energy(&self, config: &[bool]) -> f64 {
        let z = |i: usize| if config[i] { -1.0 } else { 1.0 };
        let pair: f64 = self.edges.iter().map(|&(i, j, c)| c * z(i) * z(j)).sum();
        let field: f64 = self.fields.iter().enumerate().map(|(i, b)| b * z(i)).sum();
        pair + field
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: IsingJson = serde_json::from_str(s)?;
        let fields = if j.fields.is_empty() { vec![0.0; j.nodes] } else { j.fields };
        let m = Self::new(j.nodes, j.edges, fields)?;
        match j.placement {
            Some(p) => m.with_placement(p),
            None => Ok(m),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&IsingJson {
            nodes: self.n,
            edges: self.edges.clone(),
            fields: self.fields.clone(),
            placement: self.placement.clone(),
        })?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroundState {
    pub energy: f64,
    pub config: Vec<bool>,
}

/// Ordering key with spin 0 as the most significant digit and `+` before `−`.
fn lex_key(mask: u64, n: usize) -> u64 {
    (0..n).fold(0, |acc, i| (acc << 1) | ((mask >> i) & 1))
}

/// Exhaustive minimum over spins `0..n` of a sub-Hamiltonian, using a Gray-code
/// walk with incremental energy updates.
fn brute_force(n: usize, edges: &[(usize, usize, f64)], fields: &[f64]) -> (f64, u64) {
    if n == 0 {
        return (0.0, 0);
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, c) in edges {
        adj[i].push((j, c));
        adj[j].push((i, c));
    }
    let energy_of = |mask: u64| -> f64 {
        let z = |i: usize| if (mask >> i) & 1 == 1 { -1.0 } else { 1.0 };
        edges.iter().map(|&(i, j, c)| c * z(i) * z(j)).sum::<f64>()
            + fields.iter().enumerate().map(|(i, b)| b * z(i)).sum::<f64>()
    };
    // Fix the top bits per chunk and walk the low bits in Gray order.
    let high = n.saturating_sub(14).min(8);
    let low = n - high;
    let scale = 1.0 + edges.iter().map(|e| e.2.abs()).sum::<f64>() + fields.iter().map(|b| b.abs()).sum::<f64>();
    let tol = 1e-9 * scale;
    let better = |a: (f64, u64), b: (f64, u64)| -> bool {
        if a.0 < b.0 - tol {
            true
        } else if (a.0 - b.0).abs() <= tol {
            lex_key(a.1, n) < lex_key(b.1, n)
        } else {
            false
        }
    };
    let best = (0..1u64 << high)
        .into_par_iter()
        .map(|h| {
            let mut mask = h << low;
            let mut z: Vec<f64> = (0..n).map(|i| if (mask >> i) & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let mut e = energy_of(mask);
            let mut best = (e, mask);
            for step in 1u64..(1u64 << low) {
                let k = step.trailing_zeros() as usize;
                let local: f64 = fields[k] + adj[k].iter().map(|&(j, c)| c * z[j]).sum::<f64>();
                e -= 2.0 * z[k] * local;
                z[k] = -z[k];
                mask ^= 1 << k;
                if better((e, mask), best) {
                    best = (e, mask);
                }
            }
            best
        })
        .reduce_with(|a, b| if better(b, a) { b } else { a })
        .expect("at least one chunk");
    (energy_of(best.1), best.1)
}

fn mask_to_config(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (mask >> i) & 1 == 1).collect()
}

/// Global minimum by exhaustive search. Ties go to the lexicographically
/// smallest configuration (spin 0 first, `+` before `−`).
pub fn exact_ground_energy(model: &IsingModel) -> Result<GroundState> {
    if model.n > MAX_EXACT_SPINS {
        return Err(Error::TooLarge { what: "spin count", size: model.n, limit: MAX_EXACT_SPINS });
    }
    let (energy, mask) = brute_force(model.n, &model.edges, &model.fields);
    Ok(GroundState { energy, config: mask_to_config(mask, model.n) })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockDecomposition {
    pub l: usize,
    pub grid: [usize; 2],
    /// Spins of each block, row-major over blocks.
    pub blocks: Vec<Vec<usize>>,
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

/// Tiles the placement's bounding box into `L×L` blocks and splits edges into
/// those inside one block and those crossing.
pub fn block_decompose(model: &IsingModel, l: usize) -> Result<BlockDecomposition> {
    let placement = model.placement.as_ref().ok_or_else(|| invalid("block decomposition needs a placement"))?;
    if l == 0 {
        return Err(invalid("block size must be at least 1"));
    }
    let lx = placement.iter().map(|c| c.x + 1).max().unwrap_or(1);
    let ly = placement.iter().map(|c| c.y + 1).max().unwrap_or(1);
    let (bx, by) = (lx.div_ceil(l), ly.div_ceil(l));
    let block_of = |c: Coord| c.x / l + bx * (c.y / l);
    let mut blocks = vec![Vec::new(); bx * by];
    for (i, &c) in placement.iter().enumerate() {
        blocks[block_of(c)].push(i);
    }
    let (mut kept, mut dropped) = (Vec::new(), Vec::new());
    for (e, &(i, j, _)) in model.edges.iter().enumerate() {
        if block_of(placement[i]) == block_of(placement[j]) {
            kept.push(e);
        } else {
            dropped.push(e);
        }
    }
    Ok(BlockDecomposition { l, grid: [bx, by], blocks, kept, dropped })
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxGroundState {
    pub l: usize,
    pub energy: f64,
    /// Concatenation of the block minimisers.
    pub config: Vec<bool>,
    /// Worst-case `|E0′ − E0|` from the block-size argument.
    pub bound: f64,
    /// `Σ |J|` over dropped edges, never looser than `bound`.
    pub dropped_weight: f64,
    pub nearest_neighbour: bool,
    pub blocks: usize,
    pub dropped_edges: usize,
}

/// Block side the accuracy target asks for: `⌈4J/ε⌉` for nearest-neighbour
/// placements, `⌈8cJ/ε⌉` otherwise.
pub fn block_side_for(model: &IsingModel, epsilon: f64) -> Result<usize> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(invalid("epsilon must be positive"));
    }
    let c = model.max_edge_length().ok_or_else(|| invalid("approximation needs a placement"))?;
    let j = model.j_max();
    let raw = if c <= 1 { 4.0 * j / epsilon } else { 8.0 * c as f64 * j / epsilon };
    Ok((raw.ceil() as usize).max(1))
}

/// Approximate ground energy with accuracy target `ε` per spin.
pub fn approx_ground_energy(model: &IsingModel, epsilon: f64) -> Result<ApproxGroundState> {
    let l = block_side_for(model, epsilon)?;
    if l > MAX_BLOCK_SIDE {
        let c = model.max_edge_length().unwrap_or(1).max(1) as f64;
        let factor = if c <= 1.0 { 4.0 } else { 8.0 * c };
        let floor = factor * model.j_max() / MAX_BLOCK_SIDE as f64;
        return Err(invalid(format!(
            "epsilon = {epsilon} needs blocks of side {l}, above {MAX_BLOCK_SIDE}; use epsilon >= {floor}"
        )));
    }
    approx_ground_energy_with_side(model, l)
}

/// Block approximation with an explicit block side.
pub fn approx_ground_energy_with_side(model: &IsingModel, l: usize) -> Result<ApproxGroundState> {
    let dec = block_decompose(model, l)?;
    if let Some(b) = dec.blocks.iter().find(|b| b.len() > MAX_EXACT_SPINS) {
        return Err(Error::TooLarge { what: "block size", size: b.len(), limit: MAX_EXACT_SPINS });
    }
    let mut local_index = vec![0usize; model.n];
    let mut owner = vec![0usize; model.n];
    for (bi, b) in dec.blocks.iter().enumerate() {
        for (k, &s) in b.iter().enumerate() {
            local_index[s] = k;
            owner[s] = bi;
        }
    }
    let mut block_edges: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); dec.blocks.len()];
    for &e in &dec.kept {
        let (i, j, c) = model.edges[e];
        block_edges[owner[i]].push((local_index[i], local_index[j], c));
    }
    let results: Vec<(f64, u64)> = dec
        .blocks
        .par_iter()
        .zip(block_edges.par_iter())
        .map(|(b, edges)| {
            let fields: Vec<f64> = b.iter().map(|&s| model.fields[s]).collect();
            brute_force(b.len(), edges, &fields)
        })
        .collect();
    let mut config = vec![false; model.n];
    for (b, &(_, mask)) in dec.blocks.iter().zip(&results) {
        for (k, &s) in b.iter().enumerate() {
            config[s] = (mask >> k) & 1 == 1;
        }
    }
    let energy: f64 = results.iter().map(|r| r.0).sum();
    let c = model.max_edge_length().unwrap_or(0);
    let nearest_neighbour = c <= 1;
    let n = model.n as f64;
    let j = model.j_max();
    let bound = if nearest_neighbour {
        4.0 * j * n / l as f64
    } else {
        8.0 * c as f64 * j * model.max_degree() as f64 * n / l as f64
    };
    let dropped_weight = dec.dropped.iter().map(|&e| model.edges[e].2.abs()).sum();
    Ok(ApproxGroundState {
        l,
        energy,
        config,
        bound,
        dropped_weight,
        nearest_neighbour,
        blocks: dec.blocks.len(),
        dropped_edges: dec.dropped.len(),
    })
}

/// `Σ J Z_iZ_j + Σ b Z_i`, one term per edge and per non-zero field.
pub fn energy_observable(model: &IsingModel) -> Result<Observable> {
    let mut terms = Vec::with_capacity(model.edges.len() + model.n);
    for &(i, j, c) in &model.edges {
        terms.push((c, PauliString::from_sparse(model.n, &[(i, Letter::Z), (j, Letter::Z)])?));
    }
    for (i, &b) in model.fields.iter().enumerate() {
        if b != 0.0 {
            terms.push((b, PauliString::single(model.n, i, Letter::Z)?));
        }
    }
    Observable::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::ProductState;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle(fields: [f64; 3]) -> IsingModel {
        IsingModel::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], fields.to_vec()).unwrap()
    }

    /// Straight enumeration with direct energy evaluation.
    fn naive(model: &IsingModel) -> GroundState {
        let n = model.num_spins();
        let mut best: Option<GroundState> = None;
        // Lexicographic order with spin 0 most significant: the first minimum wins.
        for key in 0u64..1 << n {
            let config: Vec<bool> = (0..n).map(|i| (key >> (n - 1 - i)) & 1 == 1).collect();
            let e = model.energy(&config);
            if best.as_ref().is_none_or(|b| e < b.energy - 1e-9) {
                best = Some(GroundState { energy: e, config });
            }
        }
        best.unwrap()
    }

    #[test]
    fn single_antiferromagnetic_bond() {
        let m = IsingModel::new(2, vec![(0, 1, 1.0)], vec![0.0, 0.0]).unwrap();
        let g = exact_ground_energy(&m).unwrap();
        assert_eq!(g.energy, -1.0);
        assert_eq!(g.config, vec![false, true]);
    }

    #[test]
    fn frustrated_triangle() {
        assert_eq!(exact_ground_energy(&triangle([0.0; 3])).unwrap().energy, -1.0);
    }

    #[test]
    fn single_spin_in_field() {
        let m = IsingModel::new(1, vec![], vec![2.0]).unwrap();
        let g = exact_ground_energy(&m).unwrap();
        assert_eq!((g.energy, g.config), (-2.0, vec![true]));
    }

    #[test]
    fn too_many_spins_rejected() {
        let m = IsingModel::new(27, vec![], vec![0.0; 27]).unwrap();
        assert!(matches!(exact_ground_energy(&m), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn grid_decomposition_counts() {
        let m = IsingModel::grid(Lattice::new(4, 4), |_, _| 1.0);
        assert_eq!(m.edges().len(), 24);
        let d = block_decompose(&m, 2).unwrap();
        assert_eq!((d.blocks.len(), d.kept.len(), d.dropped.len()), (4, 16, 8));
        let whole = block_decompose(&m, 4).unwrap();
        assert_eq!((whole.blocks.len(), whole.dropped.len()), (1, 0));
        assert_eq!(block_decompose(&m, 1).unwrap().kept.len(), 0);
        let bare = IsingModel::new(2, vec![(0, 1, 1.0)], vec![0.0; 2]).unwrap();
        assert!(block_decompose(&bare, 2).is_err());
    }

    #[test]
    fn block_approximation_on_signed_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = IsingModel::grid(Lattice::new(4, 4), |_, _| if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        let exact = exact_ground_energy(&m).unwrap().energy;
        let approx = approx_ground_energy_with_side(&m, 2).unwrap();
        assert_eq!(approx.bound, 32.0);
        assert!((approx.energy - exact).abs() <= approx.dropped_weight + 1e-12);
        assert!(approx.dropped_weight <= approx.bound);
        assert!((m.energy(&approx.config) - exact) >= -1e-12);
        let full = approx_ground_energy_with_side(&m, 4).unwrap();
        assert_eq!(full.energy, exact);
    }

    #[test]
    fn epsilon_picks_block_side() {
        let m = IsingModel::grid(Lattice::new(4, 4), |_, _| 1.0);
        assert_eq!(block_side_for(&m, 2.0).unwrap(), 2);
        assert_eq!(approx_ground_energy(&m, 2.0).unwrap().l, 2);
        assert!(approx_ground_energy(&m, 0.1).is_err());
    }

    #[test]
    fn energy_observable_term_counts() {
        let pair = IsingModel::new(2, vec![(0, 1, 1.0)], vec![0.0; 2]).unwrap();
        let o = energy_observable(&pair).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o.terms()[0].1.to_string(), "ZZ");
        assert_eq!(energy_observable(&triangle([0.5, -1.0, 2.0])).unwrap().len(), 6);
    }

    #[test]
    fn json_round_trip() {
        let m = IsingModel::grid(Lattice::new(2, 2), |a, _| if a.x == 0 { 1.0 } else { -0.5 });
        let back = IsingModel::from_json_str(&m.to_json_string().unwrap()).unwrap();
        assert_eq!(back, m);
        let plain = IsingModel::from_json_str(r#"{"nodes":3,"edges":[[0,1,1],[1,2,1],[0,2,1]],"fields":[0,0,0]}"#).unwrap();
        assert_eq!(plain, triangle([0.0; 3]));
    }

    fn arb_model() -> impl Strategy<Value = IsingModel> {
        (2usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            (
                proptest::collection::vec(prop_oneof![Just(0.0), Just(1.0), Just(-1.0), -2.0..2.0f64], pairs.len()),
                proptest::collection::vec(prop_oneof![Just(0.0), -1.5..1.5f64], n),
            )
                .prop_map(move |(js, fields)| {
                    let edges = pairs.iter().zip(js).filter(|(_, j)| *j != 0.0).map(|(&(a, b), j)| (a, b, j)).collect();
                    IsingModel::new(n, edges, fields).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn gray_code_matches_naive(m in arb_model()) {
            let fast = exact_ground_energy(&m).unwrap();
            let slow = naive(&m);
            prop_assert!((fast.energy - slow.energy).abs() < 1e-9);
            prop_assert!((m.energy(&fast.config) - fast.energy).abs() < 1e-9);
        }

        #[test]
        fn field_free_ground_energy_nonpositive(m in arb_model()) {
            let m = IsingModel::new(m.num_spins(), m.edges().to_vec(), vec![0.0; m.num_spins()]).unwrap();
            prop_assert!(exact_ground_energy(&m).unwrap().energy <= 1e-12);
        }

        #[test]
        fn energy_observable_reproduces_energy(m in arb_model(), bits in proptest::collection::vec(any::<bool>(), 8)) {
            prop_assume!(!m.edges().is_empty() || m.fields().iter().any(|b| *b != 0.0));
            let config = &bits[..m.num_spins()];
            let obs = energy_observable(&m).unwrap();
            let state = ProductState::basis(config);
            let value: f64 = obs.terms().iter().map(|(a, p)| a * state.expectation(p).unwrap()).sum();
            prop_assert!((value - m.energy(config)).abs() < 1e-12);
        }

        #[test]
        fn relabeling_preserves_ground_energy(m in arb_model(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let n = m.num_spins();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let edges = m.edges().iter().map(|&(i, j, c)| (perm[i], perm[j], c)).collect();
            let mut fields = vec![0.0; n];
            for i in 0..n { fields[perm[i]] = m.fields()[i]; }
            let p = IsingModel::new(n, edges, fields).unwrap();
            prop_assert!((exact_ground_energy(&p).unwrap().energy - exact_ground_energy(&m).unwrap().energy).abs() < 1e-9);
        }
    }
}
