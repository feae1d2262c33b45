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

//! End-to-end acceptance suite. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero when a criterion fails, except for the entries listed in
//! `UNATTAINABLE`, whose literal statement is false and which are reported
//! as failing without stopping the run.

use std::time::Instant;

use pauliflow::circuit::{
    build_qaoa, check_sparseness, qaoa_sparseness_bound, sample_random_model, AlwaysTWhenFree, Architecture, Circuit,
    Coord, Embedding, Gate, Lattice, Mixer, QaoaParams, SparsenessStatus, UniformCliffordOrT,
};
use pauliflow::cli::{execute, Cli};
use pauliflow::counterexample as cx;
use pauliflow::engine::{
    accumulate_fw, count_paths, enumerate, expectation_truncated, orthogonality_probe, random_model_statistics,
    EngineOptions, WeightPolynomial,
};
use pauliflow::ising::{
    approx_ground_energy_with_side, energy_observable, exact_ground_energy, theorem2_dispatch, Branch,
    DispatchOptions, IsingModel,
};
use pauliflow::oracle::exact_noisy_expectation;
use pauliflow::pauli::{CliffordGate, Letter, Observable, PauliString, ProductState, UnitaryMatrix};
use pauliflow::poly::{check_radius_bounds, find_roots, fragility_certificate, Fragility, FragilityOptions};
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute agreement between path sums and the density-matrix oracle.
const ORACLE_TOL: f64 = 1e-9;
/// Agreement of engine and closed-form weight coefficients.
const FW_TOL: f64 = 1e-12;
/// Slack for rounding in bound comparisons.
const BOUND_SLACK: f64 = 1e-12;
/// Root placement tolerance for the majority-vote polynomial.
const ROOT_TOL: f64 = 1e-8;
/// Minimum successive ratio of the mixed-observable error.
const GROWTH_RATIO: f64 = 1.1;
/// Serial vs parallel agreement.
const DETERMINISM_TOL: f64 = 1e-12;
/// Significant digits kept when comparing goldens.
const GOLDEN_DIGITS: usize = 10;

/// Criteria whose literal form is false; see the detail line for the reason.
const UNATTAINABLE: &[usize] = &[6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> ProductState {
    let bloch = (0..n)
        .map(|_| {
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0f64)];
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1.0);
            [v[0] / r, v[1] / r, v[2] / r]
        })
        .collect();
    ProductState::new(bloch).unwrap()
}

fn random_pauli(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    loop {
        let letters: Vec<Letter> = (0..n).map(|_| Letter::from_index(rng.gen_range(0..4))).collect();
        let p = PauliString::from_letters(&letters);
        if !p.is_identity() && p.weight() <= 3 {
            return p;
        }
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lattices = [Lattice::new(2, 2), Lattice::new(3, 2), Lattice::new(4, 2)];
    let ps = [0.0, 0.1, 0.3, 1.0];
    let mut worst = 0.0f64;
    let mut circuits = 0;
    for i in 0..60 {
        let lat = lattices[i % 3];
        let depth = 1 + i % 6;
        let arch = Architecture::brickwork(lat, depth);
        let c = sample_random_model(&arch, 0.5, &UniformCliffordOrT, 100 + i as u64).unwrap();
        let n = lat.num_qubits();
        let state = random_state(&mut rng, n);
        let obs = Observable::single(random_pauli(&mut rng, n));
        for &p in &ps {
            let est = expectation_truncated(&c, &obs, &state, p, None, None, &EngineOptions::default()).unwrap();
            let exact = exact_noisy_expectation(&c, &state, &obs, p).unwrap();
            worst = worst.max((est.value - exact).abs());
        }
        circuits += 1;
    }
    outcome(worst <= ORACLE_TOL, format!("{circuits} circuits x 4 noise rates, max |engine - oracle| = {worst:.2e}"))
}

struct Certified {
    circuit: Circuit,
    obs: PauliString,
    q: f64,
    k: usize,
}

/// Random small circuits together with the smallest `k` at which each is
/// exhaustively certified `(Q, k)`-sparse.
fn certified_suite() -> Vec<Certified> {
    let mut out = Vec::new();
    let shapes = [(Lattice::new(2, 2), 3), (Lattice::new(3, 1), 4), (Lattice::new(2, 2), 2)];
    for i in 0..24u64 {
        let (lat, depth) = shapes[i as usize % 3];
        let arch = Architecture::brickwork(lat, depth);
        let c = sample_random_model(&arch, 0.6, &UniformCliffordOrT, 500 + i).unwrap();
        let points = lat.num_qubits() * (depth + 1);
        let q = [0.25, 0.34, 0.5][i as usize % 3];
        let Some(k) = (1..=points)
            .find(|&k| check_sparseness(&c, q, k, points).unwrap().status == SparsenessStatus::Certified)
        else {
            continue;
        };
        let obs = PauliString::single(lat.num_qubits(), i as usize % lat.num_qubits(), Letter::from_index(1 + i as usize % 3))
            .unwrap();
        out.push(Certified { circuit: c, obs, q, k });
    }
    out
}

fn criterion_2(suite: &[Certified]) -> Outcome {
    let mut checks = 0;
    let mut violations = 0;
    for s in suite {
        let maxw = s.circuit.num_qubits() * (s.circuit.depth() + 1);
        let stats = count_paths(&s.circuit, &s.obs, Some(maxw)).unwrap();
        for ell in s.k..=maxw {
            checks += 1;
            if stats.count_between(s.k, ell) as f64 > (s.q * ell as f64).exp2() + BOUND_SLACK {
                violations += 1;
            }
        }
        let state = ProductState::plus(s.circuit.num_qubits());
        enumerate(&s.circuit, &s.obs, &state, None, |r| {
            if r.weight >= s.k {
                checks += 1;
                if r.magic as f64 > s.q * r.weight as f64 + BOUND_SLACK {
                    violations += 1;
                }
            }
        })
        .unwrap();
    }
    outcome(
        violations == 0 && !suite.is_empty(),
        format!("{} certified circuits, {checks} count and per-path checks, {violations} violations", suite.len()),
    )
}

fn criterion_3(suite: &[Certified]) -> Outcome {
    let mut checks = 0;
    let mut violations = 0;
    let mut tightest = 0.0f64;
    for s in suite {
        let n = s.circuit.num_qubits();
        let d = s.circuit.depth();
        let threshold = 1.0 - (-s.q).exp2();
        let state = ProductState::new(vec![[0.6, 0.0, 0.8]; n]).unwrap();
        let obs = Observable::single(s.obs.clone());
        for p in [threshold + 0.05, 0.5] {
            let exact = exact_noisy_expectation(&s.circuit, &state, &obs, p).unwrap();
            let r = s.q.exp2() * (1.0 - p);
            for ell in s.k..=n * (d + 1) {
                let est = expectation_truncated(&s.circuit, &obs, &state, p, Some(ell), Some(s.q), &EngineOptions::default())
                    .unwrap();
                let err = (est.value - exact).abs();
                let bound = (n * d) as f64 * r.powi(ell as i32);
                checks += 1;
                if err > bound + BOUND_SLACK {
                    violations += 1;
                }
                if bound > 0.0 {
                    tightest = tightest.max(err / bound);
                }
            }
        }
    }
    outcome(
        violations == 0 && checks > 0,
        format!("{checks} (circuit, p, ell) checks, {violations} violations, max error/bound = {tightest:.3}"),
    )
}

fn criterion_4() -> Outcome {
    let arch = Architecture::brickwork(Lattice::new(3, 3), 4);
    let obs = PauliString::single(9, 4, Letter::X).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for q in [0.1, 0.3] {
        for (name, policy) in [("always-t", &AlwaysTWhenFree as &dyn pauliflow::circuit::GatePolicy), ("uniform", &UniformCliffordOrT)] {
            for ell in [12, 16] {
                let s = random_model_statistics(&arch, q, policy, &obs, 250, ell, 42, &EngineOptions::default()).unwrap();
                pass &= s.within_bound;
                lines.push(format!("Q={q} {name} ell={ell}: {:.3} <= {:.3}+{:.3}", s.mean, s.bound, s.allowance));
            }
        }
    }
    let idle = Circuit::validated(Lattice::new(1, 1), vec![vec![]]).unwrap();
    let t = Circuit::validated(Lattice::new(1, 1), vec![vec![Gate::t(Coord::new(0, 0))]]).unwrap();
    let state = ProductState::new(vec![[2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]]).unwrap();
    let x: PauliString = "X".parse().unwrap();
    let y: PauliString = "Y".parse().unwrap();
    let mut ortho = 0.0f64;
    for q in [0.1, 0.3, 0.5, 0.9] {
        let v = orthogonality_probe(&[(1.0 - q, idle.clone()), (q, t.clone())], &state, &[x.clone(), x.clone()], &[y.clone(), x.clone()])
            .unwrap();
        ortho = ortho.max((v + 2.0 * q / 9.0).abs());
    }
    pass &= ortho <= 1e-15;
    outcome(pass, format!("{}; orthogonality max |E[ff'] + 2Q/9| = {ortho:.1e}", lines.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..=6 {
        let fw = accumulate_fw(&cx::circuit(k).unwrap(), &cx::observable(k, k).unwrap(), &ProductState::zeros(3 * k), None)
            .unwrap();
        for w in 0..=4 * k + 1 {
            worst = worst.max((fw.coeff(w) - cx::analytic_fw(k, w)).abs());
        }
    }
    let one = cx::analytic_polynomial(1);
    let small = (one.coeff(2) - 1.5).abs() < FW_TOL && (one.coeff(4) + 0.5).abs() < FW_TOL;
    // Independent route: the k-th power of the single-gate polynomial.
    let base = WeightPolynomial::from_terms([(2, 1.5), (4, -0.5)]);
    let mut lead = 0.0f64;
    for k in 1..=20u32 {
        let want = 1.5f64.powi(k as i32);
        lead = lead.max((cx::analytic_fw(k as usize, 2 * k as usize) - want).abs() / want);
        lead = lead.max((base.pow(k).coeff(2 * k as usize) - want).abs() / want);
    }
    outcome(
        worst <= FW_TOL && small && lead <= FW_TOL,
        format!("k<=6 max |engine - closed form| = {worst:.1e}; F_2k = 1.5^k for k<=20 (rel {lead:.1e})"),
    )
}

fn criterion_6() -> Outcome {
    let p = 0.1;
    let n = 3 << 14;
    let g = cx::default_g(n);
    let mut prev: Option<f64> = None;
    let mut min_ratio = f64::INFINITY;
    let mut valid = 0;
    for ell in (32..=96).step_by(2) {
        let m = cx::mixed_observable_error(n, g, ell, p).unwrap();
        if m.witness.is_none() {
            continue;
        }
        valid += 1;
        if let Some(prev) = prev {
            min_ratio = min_ratio.min(m.value.abs() / prev);
        }
        prev = Some(m.value.abs());
    }
    let growth = min_ratio >= GROWTH_RATIO && valid >= 3;

    // Literal witness at ell = 2k - 2: that cutoff sits below every non-zero
    // weight, so E equals the full value 0.88695^k, which falls under
    // 1.215^k - 1 from k = 3 on.
    let literal_fail: Vec<usize> = (1..=20)
        .filter(|&k| cx::truncation_error(k, 2 * k - 2, p).abs() < (1.215f64).powi(k as i32) - 1.0)
        .collect();
    // At ell = 2k the leading term drops out and the bound holds.
    let corrected = (1..=20).all(|k| cx::truncation_error(k, 2 * k, p).abs() >= (1.215f64).powi(k as i32) - 1.0);
    let props = (1..=12).all(|k| cx::verify_properties(k, p).unwrap().all_passed());
    let pass = growth && corrected && props && literal_fail.is_empty();
    outcome(
        pass,
        format!(
            "mixed sweep over {valid} valid ell: min ratio {min_ratio:.3}; properties k<=12 {}; \
             |E^(2k)| >= 1.215^k - 1 for k<=20 {}; literal |E^(2k-2)| >= 1.215^k - 1 fails for {} of 20 k (first k = {})",
            if props { "pass" } else { "fail" },
            if corrected { "holds" } else { "fails" },
            literal_fail.len(),
            literal_fail.first().map_or("none".into(), |k| k.to_string()),
        ),
    )
}

fn random_grid(side: usize, seed: u64) -> IsingModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    IsingModel::grid(Lattice::new(side, side), |_, _| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
}

fn criterion_7() -> Outcome {
    let mut checks = 0;
    let mut violations = 0;
    for i in 0..24u64 {
        let side = if i % 2 == 0 { 4 } else { 5 };
        let m = random_grid(side, 900 + i);
        let exact = exact_ground_energy(&m).unwrap().energy;
        for l in [2, side] {
            let a = approx_ground_energy_with_side(&m, l).unwrap();
            let bound = 4.0 * m.j_max() * m.num_spins() as f64 / l as f64;
            checks += 1;
            let ok = (a.energy - exact).abs() <= bound + BOUND_SLACK && (l != side || a.energy == exact);
            if !ok {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("24 instances (4x4, 5x5), {checks} checks, {violations} violations"))
}

fn criterion_8() -> Outcome {
    let params = [QaoaParams { gamma: 0.4, alpha: 0.3 }];
    // Lattice-native model: branch a.
    let native = random_grid(3, 77);
    let lat = Lattice::new(3, 3);
    let (c, layout) =
        build_qaoa(&native, lat, &params, &Embedding::native(lat, 9), &Mixer::TransverseField).unwrap();
    let opts = DispatchOptions { p: 0.1, epsilon: 4.0, ..Default::default() };
    let ra = theorem2_dispatch(&native, &c, &layout, &opts).unwrap();
    let exact = exact_ground_energy(&native).unwrap().energy;
    let a_ok = ra.branch == Branch::Classical && (ra.energy - exact).abs() <= ra.bound + BOUND_SLACK;

    // K_{3,3} routed through a SWAP network: branch b.
    let k33 = IsingModel::new(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b, 1.0))).collect(), vec![0.0; 6]).unwrap();
    let lat = Lattice::new(3, 2);
    let emb = Embedding::linear_swap_network(lat, 6).unwrap();
    let (c, layout) = build_qaoa(&k33, lat, &params, &emb, &Mixer::TransverseField).unwrap();
    let q = qaoa_sparseness_bound(&layout).unwrap();
    let opts = DispatchOptions { p: 0.1, lambda_threshold: 4, fallback_ell: None, ..Default::default() };
    let rb = theorem2_dispatch(&k33, &c, &layout, &opts).unwrap();
    let obs = layout.physical_observable(&energy_observable(&k33).unwrap()).unwrap();
    let oracle = exact_noisy_expectation(&c, &ProductState::plus(6), &obs, 0.1).unwrap();
    let mut fraction_ok = true;
    let mut paths = 0u64;
    for (_, term) in obs.terms() {
        enumerate(&c, term, &ProductState::plus(6), None, |r| {
            paths += 1;
            fraction_ok &= r.magic as f64 <= q * r.weight as f64;
        })
        .unwrap();
    }
    let b_ok = rb.branch == Branch::PathEstimate && (rb.energy - oracle).abs() <= rb.bound + ORACLE_TOL;
    outcome(
        a_ok && b_ok && fraction_ok,
        format!(
            "native 3x3: branch a, |E' - E0| = {:.3} <= {:.3}; K33: lambda = {}, branch b, Q = {q:.1} (vacuous above 1), \
             {paths} paths within Q*w, |estimate - oracle| = {:.1e}",
            (ra.energy - exact).abs(),
            ra.bound,
            rb.lambda,
            (rb.energy - oracle).abs()
        ),
    )
}

/// Alternating layers of random X/Y rotations and CZ dimers.
fn rotation_circuit(lat: Lattice, depth: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut layers = Vec::new();
    for t in 0..depth {
        let layer = if t % 2 == 0 {
            lat.coords()
                .map(|c| {
                    let axis = if rng.gen_bool(0.5) { Letter::X } else { Letter::Y };
                    Gate::unitary(UnitaryMatrix::rotation(axis, rng.gen_range(0.2..1.4)), &[c])
                })
                .collect()
        } else {
            let off = (t / 2) % 2;
            (0..lat.ly)
                .flat_map(|y| (off..lat.lx.saturating_sub(1)).step_by(2).map(move |x| (x, y)))
                .map(|(x, y)| Gate::clifford(CliffordGate::Cz, &[Coord::new(x, y), Coord::new(x + 1, y)]))
                .collect()
        };
        layers.push(layer);
    }
    Circuit::validated(lat, layers).unwrap()
}

fn criterion_9() -> Outcome {
    let mut floor_ok = 0;
    let mut polys = 0;
    let mut radius_checks = 0;
    let mut radius_fail = 0;
    // Leading-coefficient floor: Clifford+T circuits on stabilizer product
    // states, where every path value is a signed power of 1/sqrt(2).
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let lattices = [Lattice::new(2, 2), Lattice::new(3, 2)];
    for i in 0..200u64 {
        let lat = lattices[i as usize % 2];
        let n = lat.num_qubits();
        let arch = Architecture::brickwork(lat, 3 + i as usize % 4);
        let c = sample_random_model(&arch, 0.5, &AlwaysTWhenFree, 7000 + i).unwrap();
        let obs = PauliString::single(n, rng.gen_range(0..n), Letter::from_index(rng.gen_range(1..4))).unwrap();
        let state = if rng.gen_bool(0.5) {
            ProductState::basis(&(0..n).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
        } else {
            ProductState::plus(n)
        };
        let fw = accumulate_fw(&c, &obs, &state, None).unwrap();
        let Some(m) = fw.degree() else { continue };
        polys += 1;
        if fw.coeff(m).abs() >= (-(m as f64) / 2.0).exp2() * (1.0 - BOUND_SLACK) {
            floor_ok += 1;
        }
    }
    // Radius bounds: rotation circuits give polynomials with many weights.
    let mut instances = 0;
    for i in 0..400u64 {
        if instances >= 60 {
            break;
        }
        let lat = lattices[i as usize % 2];
        let n = lat.num_qubits();
        let c = rotation_circuit(lat, 3 + i as usize % 3, &mut rng);
        let obs = PauliString::single(n, rng.gen_range(0..n), Letter::from_index(rng.gen_range(1..4))).unwrap();
        let fw = accumulate_fw(&c, &obs, &random_state(&mut rng, n), None).unwrap();
        if fw.degree().is_none_or(|m| m < 3) || fw.nonzero().count() < 2 {
            continue;
        }
        instances += 1;
        let profile = find_roots(&fw).unwrap();
        for r in check_radius_bounds(&fw, &profile).unwrap() {
            radius_checks += 1;
            if !r.holds {
                radius_fail += 1;
            }
        }
    }
    let v = find_roots(&cx::analytic_polynomial(1)).unwrap();
    let mut mags: Vec<f64> = v.roots.iter().map(|z| z.re).collect();
    mags.sort_by(f64::total_cmp);
    let s3 = 3f64.sqrt();
    let want = [-s3, 0.0, 0.0, s3];
    let v_ok = v.roots.iter().all(|z| z.im.abs() < ROOT_TOL) && mags.iter().zip(want).all(|(a, b)| (a - b).abs() < ROOT_TOL);

    let mut certs = 0;
    let mut certs_ok = 0;
    for _ in 0..10 {
        let mut roots: Vec<f64> = (0..12).map(|i| -0.4 + 0.8 * i as f64 / 11.0 + rng.gen_range(-0.02..0.02)).collect();
        roots.push(rng.gen_range(-4.0..-2.0));
        let mut poly = WeightPolynomial::from_terms([(0, 1.0)]);
        for r in &roots {
            poly = poly.mul(&WeightPolynomial::from_terms([(0, -r), (1, 1.0)]));
        }
        let poly = poly.scaled(1.0 / poly.eval(1.0).abs());
        let opts = FragilityOptions { radius: 0.5, epsilon: 0.2, g_threshold: 12, ..Default::default() };
        certs += 1;
        if let Fragility::Certificate(c) = fragility_certificate(&poly, &opts).unwrap() {
            if c.verified && c.points.iter().all(|p| p.value <= p.envelope * (1.0 + 1e-9)) {
                certs_ok += 1;
            }
        }
    }
    outcome(
        floor_ok == polys && polys > 0 && radius_fail == 0 && instances >= 50 && v_ok && certs_ok == certs,
        format!(
            "|F_M| >= 2^(-M/2) on {floor_ok}/{polys} Clifford+T polynomials; radius bounds {}/{radius_checks} \
             over {instances} instances; V roots {{0,0,+-sqrt3}} {}; \
             fragility certificates {certs_ok}/{certs}",
            radius_checks - radius_fail,
            if v_ok { "ok" } else { "off" }
        ),
    )
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_cli(args: &[&str]) -> String {
    let mut v = vec!["pauliflow"];
    v.extend_from_slice(args);
    execute(&Cli::try_parse_from(v).unwrap()).unwrap()
}

fn round_sig(v: f64, digits: usize) -> String {
    format!("{:.*e}", digits - 1, v)
}

fn criterion_10() -> Outcome {
    let sv = data("single_v.json");
    let ct = data("clifford_t_2x2.json");
    let k33 = data("k33.json");
    let grid = data("grid_4x4.json");
    let configs: Vec<Vec<&str>> = vec![
        vec!["simulate", "--circuit", &sv, "--observable", "Z0", "--p", "0.1", "--ell", "4"],
        vec!["simulate", "--circuit", &ct, "--observable", "X0,0.5:Z1Z3", "--state", "plus", "--p", "0.2", "--ell", "12"],
        vec!["paths", "--circuit", &ct, "--observable", "Y2", "--ell", "16", "--format", "csv"],
        vec!["random-model", "--Q", "0.3", "--ell", "12", "--trials", "60", "--seed", "5"],
        vec!["qaoa", "--model", &k33, "--p", "0.1", "--fallback-ell", "40"],
        vec!["ising", "--model", &grid, "--exact", "--block-side", "2"],
        vec!["counterexample", "--format", "csv"],
        vec!["roots", "--counterexample-k", "3"],
    ];
    let mut identical = 0;
    for cfg in &configs {
        let a = run_cli(cfg);
        let b = run_cli(cfg);
        let mut serial = cfg.clone();
        serial.extend_from_slice(&["--threads", "1"]);
        let s = run_cli(&serial);
        let mut four = cfg.clone();
        four.extend_from_slice(&["--threads", "4"]);
        let f = run_cli(&four);
        if a == b && a == s && a == f {
            identical += 1;
        }
    }
    // Serial and parallel engine values on a busier circuit, and goldens.
    let arch = Architecture::brickwork(Lattice::new(3, 3), 6);
    let c = sample_random_model(&arch, 0.7, &UniformCliffordOrT, 11).unwrap();
    let obs = Observable::single(PauliString::single(9, 4, Letter::X).unwrap());
    let state = ProductState::new(vec![[0.6, 0.0, 0.8]; 9]).unwrap();
    let par = expectation_truncated(&c, &obs, &state, 0.05, Some(24), None, &EngineOptions::default()).unwrap().value;
    let ser = expectation_truncated(&c, &obs, &state, 0.05, Some(24), None, &EngineOptions { parallel: false, ..Default::default() })
        .unwrap()
        .value;
    let goldens = [
        (cx::truncation_error(1, 0, 0.1), 0.88695),
        (cx::truncation_error(1, 2, 0.1), -0.32805),
        (accumulate_fw(&cx::circuit(2).unwrap(), &cx::observable(2, 2).unwrap(), &ProductState::zeros(6), None)
            .unwrap()
            .at_noise(0.1), 0.88695f64 * 0.88695),
    ];
    let golden_ok = goldens.iter().all(|(got, want)| round_sig(*got, GOLDEN_DIGITS) == round_sig(*want, GOLDEN_DIGITS));
    outcome(
        identical == configs.len() && (par - ser).abs() <= DETERMINISM_TOL && golden_ok,
        format!(
            "{identical}/{} CLI configs byte-identical across repeats, --threads 1 and --threads 4; \
             serial vs parallel |delta| = {:.1e}; goldens {}",
            configs.len(),
            (par - ser).abs(),
            if golden_ok { "match" } else { "differ" }
        ),
    )
}

fn main() {
    let start = Instant::now();
    let suite = certified_suite();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&suite))),
        (3, Box::new(|| criterion_3(&suite))),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    let mut blocking = Vec::new();
    for (id, f) in &criteria {
        let t = Instant::now();
        let o = f();
        let tag = match (o.pass, UNATTAINABLE.contains(id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (unattainable as stated)",
            (false, false) => {
                blocking.push(*id);
                "FAIL"
            }
        };
        println!("criterion {id}: {tag}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if !blocking.is_empty() {
        eprintln!("failing criteria: {blocking:?}");
        std::process::exit(1);
    }
}
