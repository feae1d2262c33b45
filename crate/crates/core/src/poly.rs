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

//! Root analysis of weight polynomials `Q(x) = Σ F_w x^w`, `x = 1 − p`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::engine::WeightPolynomial;
use crate::error::{invalid, Error, Result};

/// Relative tolerance on imaginary parts for a root to count as real.
pub const REAL_TOL: f64 = 1e-8;
const SCHUR_MAX_ITER: usize = 10_000;
const SCHUR_SHIFTS: [f64; 4] = [0.0, 0.0731, -0.1913, 0.3377];

pub fn evaluate(poly: &WeightPolynomial, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} outside [0, 1]")));
    }
    Ok(poly.at_noise(p))
}

pub fn l2_norm(poly: &WeightPolynomial) -> f64 {
    poly.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct RootProfile {
    /// Sorted by increasing magnitude.
    pub roots: Vec<Complex64>,
    pub all_real: bool,
    pub degree: usize,
    pub leading: f64,
    pub zero_multiplicity: usize,
}

impl RootProfile {
    pub fn count_within(&self, r: f64) -> usize {
        self.roots.iter().filter(|z| z.norm() <= r).count()
    }

    /// Coefficients of `F_M Π (x − r_i)`, lowest degree first.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(self.leading, 0.0)];
        for &r in &self.roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        c
    }
}

/// Clusters from a multiple real root split into the complex plane by about
/// `eps^(1/m)`, so a root also counts as real when the polynomial vanishes at
/// its real part to rounding accuracy.
fn numerically_real(coeffs: &[f64], z: Complex64) -> bool {
    if z.im.abs() < REAL_TOL * (1.0 + z.re.abs()) {
        return true;
    }
    let x = z.re;
    let (mut v, mut scale) = (0.0f64, 0.0f64);
    for &c in coeffs.iter().rev() {
        v = v * x + c;
        scale = scale * x.abs() + c.abs();
    }
    v.abs() <= 64.0 * f64::EPSILON * scale * coeffs.len() as f64
}

fn horner_c(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// All complex roots: eigenvalues of the companion matrix of `Q(x)/x^d`,
/// polished by a few Newton steps, plus `d` zero roots.
pub fn find_roots(poly: &WeightPolynomial) -> Result<RootProfile> {
    let m = poly.degree().ok_or(Error::ZeroPolynomial)?;
    if m == 0 {
        return Err(invalid("constant polynomial has no roots"));
    }
    let low = poly.lowest().expect("non-zero polynomial");
    let reduced: Vec<f64> = poly.coeffs()[low..].to_vec();
    let deg = reduced.len() - 1;
    let lead = reduced[deg];
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    if deg > 0 {
        let mut comp = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -reduced[i] / lead;
        }
        // Spectra symmetric about zero (even polynomials) can stall the
        // unshifted QR sweep, so iterate on `C + σI` for a few irregular σ.
        let eig = SCHUR_SHIFTS
            .iter()
            .find_map(|&sigma| {
                let shifted = &comp + DMatrix::<f64>::identity(deg, deg) * sigma;
                shifted
                    .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
                    .map(|s| s.complex_eigenvalues().map(|z| z - sigma))
            })
            .ok_or_else(|| invalid(format!("eigenvalue iteration did not converge for degree {deg}")))?;
        for z in eig.iter() {
            let mut z = *z;
            for _ in 0..3 {
                let (v, d) = horner_c(&reduced, z);
                if d.norm() == 0.0 {
                    break;
                }
                let next = z - v / d;
                if horner_c(&reduced, next).0.norm() < v.norm() {
                    z = next;
                } else {
                    break;
                }
            }
            if z.im != 0.0 && numerically_real(&reduced, z) {
                z.im = 0.0;
            }
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    let all_real = roots.iter().all(|z| z.im.abs() < REAL_TOL * (1.0 + z.re.abs()));
    Ok(RootProfile { roots, all_real, degree: m, leading: lead, zero_multiplicity: low })
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusCheck {
    /// 1-based position in increasing magnitude.
    pub k: usize,
    pub bound: f64,
    pub root_magnitude: f64,
    pub holds: bool,
}

/// `(‖F‖₂/|F_M|)^{1/(M−k−1)}` for the `k`-th smallest root, `1 ≤ k ≤ M − 2`.
pub fn root_radius_bound(poly: &WeightPolynomial, k: usize) -> Result<f64> {
    let m = poly.degree().ok_or(Error::ZeroPolynomial)?;
    if k == 0 || k + 1 >= m {
        return Err(invalid(format!("root index k = {k} needs 1 <= k <= M - 2 with M = {m}")));
    }
    let lead = poly.coeff(m).abs();
    Ok((l2_norm(poly) / lead).powf(1.0 / (m - k - 1) as f64))
}

/// Compares every valid `k` against the computed roots.
pub fn check_radius_bounds(poly: &WeightPolynomial, profile: &RootProfile) -> Result<Vec<RadiusCheck>> {
    let m = profile.degree;
    (1..m.saturating_sub(1))
        .map(|k| {
            let bound = root_radius_bound(poly, k)?;
            let root_magnitude = profile.roots[k - 1].norm();
            Ok(RadiusCheck { k, bound, root_magnitude, holds: root_magnitude <= bound * (1.0 + 1e-9) })
        })
        .collect()
}

/// `Y′(x) = Σ 1/(x − r_i)` and `Y″(x) = −Σ 1/(x − r_i)²` for real roots.
pub fn log_derivatives(roots: &[f64], x: f64) -> (f64, f64) {
    roots.iter().fold((0.0, 0.0), |(d1, d2), &r| {
        let t = 1.0 / (x - r);
        (d1 + t, d2 - t * t)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FragilityOptions {
    pub radius: f64,
    pub epsilon: f64,
    pub g_threshold: usize,
    /// Minimum `|Q(1)|`.
    pub q1_floor: f64,
    pub grid_points: usize,
}

impl Default for FragilityOptions {
    fn default() -> Self {
        Self { radius: 1.0, epsilon: 0.1, g_threshold: 1, q1_floor: 1e-300, grid_points: 200 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopePoint {
    pub x: f64,
    pub value: f64,
    pub envelope: f64,
    pub curvature: f64,
    pub curvature_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Fragility {
    Inapplicable { reason: String },
    Certificate(FragilityCertificate),
}

#[derive(Clone, Debug, Serialize)]
pub struct FragilityCertificate {
    pub roots_within_radius: usize,
    pub q1: f64,
    pub slope_at_one: f64,
    /// Stationary point of `log|Q|` in the interval when the slope at 1 is negative.
    pub x_star: Option<f64>,
    pub points: Vec<EnvelopePoint>,
    pub verified: bool,
}

/// Checks the premises of the decay argument and, when they hold, verifies the
/// curvature bound and the envelope on a grid over `[1 − ε, 1)`.
pub fn fragility_certificate(poly: &WeightPolynomial, opts: &FragilityOptions) -> Result<Fragility> {
    let inapplicable = |reason: String| Ok(Fragility::Inapplicable { reason });
    if !(opts.epsilon > 0.0 && opts.epsilon < 1.0) || opts.radius < 0.0 || opts.grid_points < 2 {
        return Err(invalid("need 0 < epsilon < 1, radius >= 0 and at least 2 grid points"));
    }
    let profile = find_roots(poly)?;
    if !profile.all_real {
        return inapplicable("roots not all real".into());
    }
    let roots: Vec<f64> = profile.roots.iter().map(|z| z.re).collect();
    let within = profile.count_within(opts.radius);
    if within < opts.g_threshold {
        return inapplicable(format!("{within} roots within radius {} (need {})", opts.radius, opts.g_threshold));
    }
    let lo = 1.0 - opts.epsilon;
    if let Some(r) = roots.iter().find(|&&r| r >= lo && r < 1.0) {
        return inapplicable(format!("root {r} lies in [1 - epsilon, 1)"));
    }
    let q1 = poly.eval(1.0);
    if q1.abs() < opts.q1_floor || q1 == 0.0 {
        return inapplicable(format!("|Q(1)| = {} below floor {}", q1.abs(), opts.q1_floor));
    }
    let g = opts.g_threshold as f64;
    let c = 1.0 / (1.0 + opts.radius).powi(2);
    let (slope, _) = log_derivatives(&roots, 1.0);
    let x_star = if slope < 0.0 {
        let (s_lo, _) = log_derivatives(&roots, lo);
        if s_lo > 0.0 {
            // Y′ decreases on the interval; bisect for its zero.
            let (mut a, mut b) = (lo, 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if log_derivatives(&roots, mid).0 > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Some(0.5 * (a + b))
        } else {
            None
        }
    } else {
        None
    };
    let q_star = x_star.map(|xs| poly.eval(xs).abs());
    let mut verified = true;
    let mut points = Vec::with_capacity(opts.grid_points);
    for i in 0..opts.grid_points {
        let x = lo + opts.epsilon * i as f64 / opts.grid_points as f64;
        let value = poly.eval(x).abs();
        let (_, curvature) = log_derivatives(&roots, x);
        let curvature_bound = -g / (x + opts.radius).powi(2);
        let t = 1.0 - x;
        let mut envelope = q1.abs() * (-0.5 * c * g * t * t - slope * t).exp();
        if let (Some(xs), Some(qs)) = (x_star, q_star) {
            if x <= xs {
                envelope = envelope.min(qs * (-0.5 * c * g * (x - xs).powi(2)).exp());
            }
        }
        let slack = 1e-9 * (1.0 + curvature.abs());
        if curvature > curvature_bound + slack || value > envelope * (1.0 + 1e-9) + 1e-300 {
            verified = false;
        }
        points.push(EnvelopePoint { x, value, envelope, curvature, curvature_bound });
    }
    if let (Some(xs), Some(qs)) = (x_star, q_star) {
        if qs / q1.abs() < (0.5 * c * g * (1.0 - xs).powi(2)).exp() * (1.0 - 1e-9) {
            verified = false;
        }
    }
    Ok(Fragility::Certificate(FragilityCertificate {
        roots_within_radius: within,
        q1,
        slope_at_one: slope,
        x_star,
        points,
        verified,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_poly() -> WeightPolynomial {
        WeightPolynomial::from_terms([(2, 1.5), (4, -0.5)])
    }

    fn from_roots(roots: &[f64], lead: f64) -> WeightPolynomial {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        WeightPolynomial::new(c)
    }

    #[test]
    fn evaluation_and_norm() {
        assert_eq!(evaluate(&v_poly(), 0.0).unwrap(), 1.0);
        assert!((evaluate(&v_poly(), 0.1).unwrap() - 0.88695).abs() < 1e-12);
        assert_eq!(evaluate(&v_poly(), 1.0).unwrap(), 0.0);
        assert!((l2_norm(&v_poly()) - 10f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(l2_norm(&WeightPolynomial::from_terms([(5, -1.0)])), 1.0);
    }

    #[test]
    fn repeated_roots_terminate() {
        for k in 2..=6 {
            let r = find_roots(&v_poly().pow(k)).unwrap();
            assert_eq!(r.roots.len(), 4 * k as usize);
            assert_eq!(r.zero_multiplicity, 2 * k as usize);
            assert!(r.all_real, "k = {k}: {:?}", r.roots);
            // A k-fold root is only determined to about eps^(1/k).
            let tol = 4.0 * f64::EPSILON.powf(1.0 / k as f64);
            for z in &r.roots[2 * k as usize..] {
                assert!((z - Complex64::new(3f64.sqrt().copysign(z.re), 0.0)).norm() < tol, "k = {k}: {z}");
            }
        }
    }

    #[test]
    fn v_polynomial_roots() {
        let r = find_roots(&v_poly()).unwrap();
        assert!(r.all_real);
        let want = [0.0, 0.0, -(3f64.sqrt()), 3f64.sqrt()];
        for (z, w) in r.roots.iter().zip(want) {
            assert!((z - Complex64::new(w, 0.0)).norm() < 1e-8, "{z} vs {w}");
        }
    }

    #[test]
    fn monomial_and_complex_roots() {
        let r = find_roots(&WeightPolynomial::from_terms([(6, 1.0)])).unwrap();
        assert_eq!(r.zero_multiplicity, 6);
        assert!(r.roots.iter().all(|z| z.norm() == 0.0));
        let c = find_roots(&WeightPolynomial::new(vec![1.0, 0.0, 1.0])).unwrap();
        assert!(!c.all_real);
        assert!(c.roots.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
        assert!(matches!(find_roots(&WeightPolynomial::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn radius_bound_examples() {
        let b = root_radius_bound(&v_poly(), 1).unwrap();
        assert!((b - 10f64.sqrt().sqrt()).abs() < 1e-12);
        assert!(root_radius_bound(&v_poly(), 3).is_err());
        let profile = find_roots(&v_poly()).unwrap();
        assert!(check_radius_bounds(&v_poly(), &profile).unwrap().iter().all(|c| c.holds));
        let mono = WeightPolynomial::from_terms([(7, -1.0)]);
        for k in 1..=5 {
            assert_eq!(root_radius_bound(&mono, k).unwrap(), 1.0);
        }
    }

    #[test]
    fn reconstruction_round_trip() {
        let p = from_roots(&[0.3, -0.7, 2.5, -1.1, 0.05], -0.8);
        let prof = find_roots(&p).unwrap();
        for (w, c) in prof.reconstruct().iter().enumerate() {
            assert!((c.re - p.coeff(w)).abs() <= 1e-6 * (1.0 + p.coeff(w).abs()));
        }
    }

    #[test]
    fn fragility_premises() {
        let complex = WeightPolynomial::new(vec![1.0, 0.0, 1.0]);
        let f = fragility_certificate(&complex, &FragilityOptions::default()).unwrap();
        assert!(matches!(f, Fragility::Inapplicable { reason } if reason.contains("not all real")));
    }

    #[test]
    fn monomial_certificate() {
        let w = 12;
        let mono = WeightPolynomial::from_terms([(w, 1.0)]);
        let opts = FragilityOptions { radius: 0.5, epsilon: 0.1, g_threshold: w, ..Default::default() };
        let Fragility::Certificate(cert) = fragility_certificate(&mono, &opts).unwrap() else {
            panic!("expected a certificate");
        };
        assert!(cert.verified);
        for pt in &cert.points {
            assert!((pt.value - pt.x.powi(w as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn synthetic_roots_near_origin_decay() {
        let mut roots: Vec<f64> = (0..12).map(|i| -0.4 + 0.8 * i as f64 / 11.0).collect();
        roots.push(-3.0);
        let raw = from_roots(&roots, 1.0);
        let p = raw.scaled(1.0 / raw.eval(1.0).abs());
        let opts = FragilityOptions { radius: 0.5, epsilon: 0.2, g_threshold: 12, ..Default::default() };
        let f = fragility_certificate(&p, &opts).unwrap();
        let Fragility::Certificate(cert) = f else {
            panic!("expected a certificate, got {f:?}");
        };
        assert!(cert.verified);
    }

    #[test]
    fn curvature_matches_finite_difference() {
        let roots = [0.1, -0.2, 0.35, -1.5, 2.0];
        let p = from_roots(&roots, 2.0);
        let y = |x: f64| p.eval(x).abs().ln();
        let h = 1e-4;
        for x in [0.8, 0.85, 0.9, 0.95] {
            let fd = (y(x + h) - 2.0 * y(x) + y(x - h)) / (h * h);
            let (_, d2) = log_derivatives(&roots, x);
            assert!((fd - d2).abs() <= 1e-4 * d2.abs(), "{fd} vs {d2}");
        }
    }
}
