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

//! Sparseness of magic gates over the space-time point set.
//!
//! Points are `(x, y, t)` with `t = 0..=d`; a magic gate in layer `t` marks the
//! point `(x, y, t)`. Two points are adjacent when they differ by at most one in
//! every coordinate. Connected subsets are enumerated with the ESU scheme, which
//! produces each connected subset exactly once.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::{Circuit, Coord};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SparsenessStatus {
    Certified,
    Refuted,
    Inconclusive { largest_size_checked: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsenessReport {
    pub q: f64,
    pub k: usize,
    pub status: SparsenessStatus,
    /// Violating subset as `(site, t)` points.
    pub witness: Option<Vec<(Coord, usize)>>,
    pub subsets_checked: u64,
}

impl SparsenessReport {
    pub fn is_certified(&self) -> bool {
        self.status == SparsenessStatus::Certified
    }
}

/// Largest magic fraction over connected subsets with `k ≤ |A| ≤ cap`.
#[derive(Clone, Debug, Serialize)]
pub struct FractionScan {
    pub k: usize,
    pub max_fraction: f64,
    pub argmax: Option<Vec<(Coord, usize)>>,
    /// True when the cap covered every subset size, so `max_fraction` is the
    /// smallest certifiable `Q`.
    pub exhaustive: bool,
    pub subsets_checked: u64,
}

struct PointSet {
    n: usize,
    magic: Vec<bool>,
    adj: Vec<Vec<u32>>,
    lattice: super::Lattice,
}

impl PointSet {
    fn new(circuit: &Circuit) -> Self {
        let lattice = circuit.lattice();
        let n = lattice.num_qubits();
        let d = circuit.depth();
        let total = n * (d + 1);
        let mut magic = vec![false; total];
        for (t, sites) in circuit.magic_census() {
            for s in sites {
                magic[t * n + lattice.index(s)] = true;
            }
        }
        let mut adj = vec![Vec::new(); total];
        for t in 0..=d {
            for c in lattice.coords() {
                let me = t * n + lattice.index(c);
                for dt in -1i64..=1 {
                    for dy in -1i64..=1 {
                        for dx in -1i64..=1 {
                            if (dx, dy, dt) == (0, 0, 0) {
                                continue;
                            }
                            let (x, y, tt) = (c.x as i64 + dx, c.y as i64 + dy, t as i64 + dt);
                            if x < 0 || y < 0 || tt < 0 || x >= lattice.lx as i64 || y >= lattice.ly as i64 || tt > d as i64 {
                                continue;
                            }
                            let other = tt as usize * n + lattice.index(Coord::new(x as usize, y as usize));
                            adj[me].push(other as u32);
                        }
                    }
                }
            }
        }
        Self { n, magic, adj, lattice }
    }

    fn len(&self) -> usize {
        self.magic.len()
    }

    fn point(&self, i: u32) -> (Coord, usize) {
        let i = i as usize;
        (self.lattice.coord(i % self.n), i / self.n)
    }

    /// Runs `visit(subset, magic_count)` on every connected subset rooted at
    /// `root` (its smallest element) with size in `k..=cap`.
    fn esu_from<B>(
        &self,
        root: u32,
        k: usize,
        cap: usize,
        visit: &mut impl FnMut(&[u32], usize) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let mut in_nbhd = vec![false; self.len()];
        in_nbhd[root as usize] = true;
        let mut ext = Vec::new();
        for &u in &self.adj[root as usize] {
            in_nbhd[u as usize] = true;
            if u > root {
                ext.push(u);
            }
        }
        let mut sub = vec![root];
        let mc = self.magic[root as usize] as usize;
        self.extend(&mut sub, &mut in_nbhd, ext, root, mc, k, cap, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend<B>(
        &self,
        sub: &mut Vec<u32>,
        in_nbhd: &mut [bool],
        mut ext: Vec<u32>,
        root: u32,
        magic: usize,
        k: usize,
        cap: usize,
        visit: &mut impl FnMut(&[u32], usize) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if sub.len() >= k {
            visit(sub, magic)?;
        }
        if sub.len() == cap {
            return ControlFlow::Continue(());
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            let mut added = Vec::new();
            for &u in &self.adj[w as usize] {
                if !in_nbhd[u as usize] {
                    in_nbhd[u as usize] = true;
                    added.push(u);
                    if u > root {
                        next.push(u);
                    }
                }
            }
            sub.push(w);
            let flow = self.extend(sub, in_nbhd, next, root, magic + self.magic[w as usize] as usize, k, cap, visit);
            sub.pop();
            for u in added {
                in_nbhd[u as usize] = false;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn check_args(k: usize, cap: usize) -> Result<()> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if cap < k {
        return Err(invalid(format!("subset size cap {cap} is below k = {k}")));
    }
    Ok(())
}

/// Tests `T(A)/|A| ≤ Q` on every connected subset `A` with `k ≤ |A| ≤ cap`.
pub fn check_sparseness(circuit: &Circuit, q: f64, k: usize, cap: usize) -> Result<SparsenessReport> {
    check_args(k, cap)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(invalid(format!("Q = {q} outside [0, 1]")));
    }
    let points = PointSet::new(circuit);
    let counter = AtomicU64::new(0);
    let witness = (0..points.len() as u32).into_par_iter().find_map_first(|root| {
        let mut local = 0u64;
        let flow = points.esu_from(root, k, cap, &mut |sub, m| {
            local += 1;
            if m as f64 > q * sub.len() as f64 {
                ControlFlow::Break(sub.to_vec())
            } else {
                ControlFlow::Continue(())
            }
        });
        counter.fetch_add(local, Ordering::Relaxed);
        match flow {
            ControlFlow::Break(w) => Some(w),
            ControlFlow::Continue(()) => None,
        }
    });
    let status = match &witness {
        Some(_) => SparsenessStatus::Refuted,
        None if cap >= points.len() => SparsenessStatus::Certified,
        None => SparsenessStatus::Inconclusive { largest_size_checked: cap },
    };
    Ok(SparsenessReport {
        q,
        k,
        status,
        witness: witness.map(|w| w.into_iter().map(|i| points.point(i)).collect()),
        subsets_checked: counter.into_inner(),
    })
}

/// Maximum magic fraction over connected subsets with `k ≤ |A| ≤ cap`.
pub fn max_magic_fraction(circuit: &Circuit, k: usize, cap: usize) -> Result<FractionScan> {
    check_args(k, cap)?;
    let points = PointSet::new(circuit);
    let (best, arg, count) = (0..points.len() as u32)
        .into_par_iter()
        .map(|root| {
            let mut best = (0.0f64, None::<Vec<u32>>, 0u64);
            let _ = points.esu_from::<()>(root, k, cap, &mut |sub, m| {
                best.2 += 1;
                let f = m as f64 / sub.len() as f64;
                if best.1.is_none() || f > best.0 {
                    best.0 = f;
                    best.1 = Some(sub.to_vec());
                }
                ControlFlow::Continue(())
            });
            best
        })
        .reduce(
            || (0.0, None, 0),
            |a, b| {
                let count = a.2 + b.2;
                match (&a.1, &b.1) {
                    (None, _) => (b.0, b.1, count),
                    (Some(_), Some(_)) if b.0 > a.0 => (b.0, b.1, count),
                    _ => (a.0, a.1, count),
                }
            },
        );
    Ok(FractionScan {
        k,
        max_fraction: best,
        argmax: arg.map(|w| w.into_iter().map(|i| points.point(i)).collect()),
        exhaustive: cap >= points.len(),
        subsets_checked: count,
    })
}

/// Recounts a claimed witness from scratch: size, distinctness, connectivity and fraction.
pub fn verify_witness(circuit: &Circuit, witness: &[(Coord, usize)], q: f64, k: usize) -> bool {
    let lattice = circuit.lattice();
    if witness.len() < k {
        return false;
    }
    for (i, &(c, t)) in witness.iter().enumerate() {
        if !lattice.contains(c) || t > circuit.depth() || witness[..i].contains(&(c, t)) {
            return false;
        }
    }
    let census = circuit.magic_census();
    let magic = witness
        .iter()
        .filter(|(c, t)| census.get(t).is_some_and(|s| s.contains(c)))
        .count();
    let adjacent = |a: (Coord, usize), b: (Coord, usize)| {
        a.0.x.abs_diff(b.0.x) <= 1 && a.0.y.abs_diff(b.0.y) <= 1 && a.1.abs_diff(b.1) <= 1
    };
    let mut seen = vec![false; witness.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..witness.len() {
            if !seen[j] && adjacent(witness[i], witness[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s) && magic as f64 > q * witness.len() as f64
}
