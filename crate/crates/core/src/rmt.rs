//! Marcenko-Pastur law and the spiked-model maps built on it.
//!
//! For a noise level `σ²` and aspect ratio `c`, the law `μ_{σ²,c}` has bulk
//! support `[x⁻, x⁺] = [σ²(1-√c)², σ²(1+√c)²]` plus an atom of mass
//! `1 - 1/c` at zero when `c > 1`. Its Stieltjes transform `m(z)` solves
//!
//! ```text
//! m = 1 / (-z + σ² / (1 + σ² c m))
//! ```
//!
//! and `m̃(z) = c m(z) + (c - 1)/z` is the transform of the companion law.
//! A rank-one perturbation of strength `λ` produces an outlier eigenvalue at
//! `φ(λ) = (λ + σ²)(λ + σ² c)/λ` iff `λ > σ²√c`; otherwise the top eigenvalue
//! sticks to `x⁺`. `w(z) = 1 / (z m(z) m̃(z))` inverts `φ` above the bulk, and
//! `h(ρ)` is the squared cosine between a detached sample eigenvector and its
//! population counterpart.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Parameters `(σ², c)` of a Marcenko-Pastur law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpParams {
    pub sigma2: f64,
    pub c: f64,
}

impl MpParams {
    pub fn new(sigma2: f64, c: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain { what: "noise power sigma2", value: sigma2 });
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain { what: "aspect ratio c", value: c });
        }
        Ok(Self { sigma2, c })
    }

    pub fn edge_minus(&self) -> f64 {
        self.sigma2 * (1.0 - self.c.sqrt()).powi(2)
    }

    pub fn edge_plus(&self) -> f64 {
        self.sigma2 * (1.0 + self.c.sqrt()).powi(2)
    }

    /// Detection threshold `σ²√c` on the spike strength.
    pub fn threshold(&self) -> f64 {
        self.sigma2 * self.c.sqrt()
    }

    /// Parameters of the companion law `μ_{σ²c, 1/c}`.
    pub fn companion(&self) -> Self {
        Self { sigma2: self.sigma2 * self.c, c: 1.0 / self.c }
    }
}

/// Density of the absolutely continuous part of `μ_{σ²,c}`.
pub fn mp_density(x: f64, p: &MpParams) -> f64 {
    let (lo, hi) = (p.edge_minus(), p.edge_plus());
    if x <= lo || x >= hi || x <= 0.0 {
        return 0.0;
    }
    ((x - lo) * (hi - x)).sqrt() / (2.0 * PI * p.sigma2 * p.c * x)
}

/// Mass of the atom at zero, `[1 - 1/c]_+`.
pub fn mp_atom(p: &MpParams) -> f64 {
    (1.0 - 1.0 / p.c).max(0.0)
}

fn in_support(z: C64, p: &MpParams) -> bool {
    z.im == 0.0 && ((z.re >= p.edge_minus() && z.re <= p.edge_plus()) || z.re == 0.0)
}

/// `m(z)` in closed form.
///
/// The fixed point is the root of `σ²c z m² + (z - σ²(1-c)) m + 1 = 0` that
/// vanishes at infinity. Writing the discriminant as
/// `s = √(z - x⁺) √(z - x⁻)` (principal roots) gives a function analytic off
/// the support with `s ~ z`, and the wanted root is `-2 / (b + s)`, which
/// avoids dividing by `c`.
pub fn mp_stieltjes(z: C64, p: &MpParams) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) || in_support(z, p) {
        return Err(Error::Domain { what: "Stieltjes transform on the support", value: z.re });
    }
    let b = z - p.sigma2 * (1.0 - p.c);
    let s = (z - p.edge_plus()).sqrt() * (z - p.edge_minus()).sqrt();
    Ok(-2.0 / (b + s))
}

/// `m̃(z)`, the Stieltjes transform of `μ_{σ²c, 1/c} = c μ_{σ²,c} + (1-c) δ_0`.
pub fn mp_stieltjes_tilde(z: C64, p: &MpParams) -> Result<C64> {
    let m = mp_stieltjes(z, p)?;
    Ok(p.c * m + (p.c - 1.0) / z)
}

/// `w(z) = 1 / (z m(z) m̃(z))` for real `z > x⁺`.
pub fn w_star(z: f64, p: &MpParams) -> Result<f64> {
    let edge = p.edge_plus();
    if !(z > edge) {
        return Err(Error::BelowEdge { value: z, edge });
    }
    let zc = C64::new(z, 0.0);
    let m = mp_stieltjes(zc, p)?;
    let mt = mp_stieltjes_tilde(zc, p)?;
    Ok(1.0 / (zc * m * mt).re)
}

/// `φ(w) = (w + σ²)(w + σ² c) / w`.
pub fn phi_star(w: f64, p: &MpParams) -> Result<f64> {
    if w == 0.0 || !w.is_finite() {
        return Err(Error::Domain { what: "phi at w", value: w });
    }
    Ok((w + p.sigma2) * (w + p.sigma2 * p.c) / w)
}

/// Inverse of `φ` on `(σ²√c, ∞)`: the larger root of
/// `w² - (ρ - σ² - σ²c) w + σ⁴c = 0`.
pub fn phi_inverse(rho: f64, p: &MpParams) -> Result<f64> {
    let edge = p.edge_plus();
    if !(rho > edge) || !rho.is_finite() {
        return Err(Error::BelowEdge { value: rho, edge });
    }
    let b = rho - p.sigma2 * (1.0 + p.c);
    let prod = p.sigma2 * p.sigma2 * p.c;
    // Rounding can push the discriminant marginally negative right at the edge.
    let disc = (b * b - 4.0 * prod).max(0.0);
    Ok((b + disc.sqrt()) / 2.0)
}

/// `h(ρ) = (w² - σ⁴c) / (w (w + σ²c))` with `w = φ⁻¹(ρ)`; lies in `(0, 1)`.
pub fn h_star(rho: f64, p: &MpParams) -> Result<f64> {
    let w = phi_inverse(rho, p)?;
    Ok(h_of_w(w, p))
}

pub(crate) fn h_of_w(w: f64, p: &MpParams) -> f64 {
    (w * w - p.sigma2 * p.sigma2 * p.c) / (w * (w + p.sigma2 * p.c))
}

/// Where a planted spike of strength `λ` ends up in the sample spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpikeLocation {
    /// Outlier at `φ(λ) > x⁺`.
    Detached(f64),
    /// `λ ≤ σ²√c`: the eigenvalue sticks to the bulk edge `x⁺` carried here.
    Edge(f64),
}

impl SpikeLocation {
    pub fn value(&self) -> f64 {
        match *self {
            SpikeLocation::Detached(v) | SpikeLocation::Edge(v) => v,
        }
    }

    pub fn is_detached(&self) -> bool {
        matches!(self, SpikeLocation::Detached(_))
    }
}

pub fn spike_forward(lambda: f64, p: &MpParams) -> SpikeLocation {
    if lambda > p.threshold() {
        // φ is finite and > x⁺ here
        SpikeLocation::Detached((lambda + p.sigma2) * (lambda + p.sigma2 * p.c) / lambda)
    } else {
        SpikeLocation::Edge(p.edge_plus())
    }
}

/// Bundles the spike maps for one `MpParams`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikeMap {
    pub params: MpParams,
    pub threshold: f64,
    pub edge_plus: f64,
    pub edge_minus: f64,
}

impl SpikeMap {
    pub fn new(params: MpParams) -> Self {
        Self {
            params,
            threshold: params.threshold(),
            edge_plus: params.edge_plus(),
            edge_minus: params.edge_minus(),
        }
    }

    pub fn forward(&self, lambda: f64) -> SpikeLocation {
        spike_forward(lambda, &self.params)
    }

    /// Recover the population spike from a sample outlier.
    pub fn inverse(&self, rho: f64) -> Result<f64> {
        phi_inverse(rho, &self.params)
    }

    pub fn eigenvector_attenuation(&self, rho: f64) -> Result<f64> {
        h_star(rho, &self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::simpson;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn p(s: f64, c: f64) -> MpParams {
        MpParams::new(s, c).unwrap()
    }

    /// `∫ f(x) dμ_ac(x)` by the substitution `x = x⁻ + (x⁺-x⁻)(1-cos t)/2`,
    /// which turns the square-root edges into a smooth integrand.
    fn integrate_ac(pp: &MpParams, f: impl Fn(f64) -> C64) -> C64 {
        let (lo, hi) = (pp.edge_minus(), pp.edge_plus());
        let half = (hi - lo) / 2.0;
        let g = |t: f64| {
            let x = lo + half * (1.0 - t.cos());
            if x <= 0.0 {
                // x⁻ = 0 and t = 0: sin²t / (1 - cos t) → 2
                return f(0.0) * (half / (PI * pp.sigma2 * pp.c));
            }
            let jac = half * t.sin();
            let dens = (half * t.sin()) / (2.0 * PI * pp.sigma2 * pp.c * x);
            f(x) * (dens * jac)
        };
        let re = simpson(|t| g(t).re, 0.0, PI, 20_000);
        let im = simpson(|t| g(t).im, 0.0, PI, 20_000);
        C64::new(re, im)
    }

    fn quadrature_stieltjes(z: C64, pp: &MpParams) -> C64 {
        integrate_ac(pp, |x| 1.0 / (x - z)) + mp_atom(pp) / (-z)
    }

    #[test]
    fn density_at_center_of_unit_law() {
        assert_abs_diff_eq!(mp_density(2.0, &p(1.0, 1.0)), 1.0 / (2.0 * PI), epsilon = 1e-15);
        assert_eq!(mp_density(4.5, &p(1.0, 1.0)), 0.0);
        assert_eq!(mp_density(-1.0, &p(1.0, 0.3)), 0.0);
        assert_eq!(mp_density(0.01, &p(1.0, 0.3)), 0.0);
    }

    #[test]
    fn density_plus_atom_has_unit_mass() {
        for &(s, c) in &[(1.0, 0.25), (2.0, 1.0), (0.7, 3.0), (1.0, 0.05)] {
            let pp = p(s, c);
            let mass = integrate_ac(&pp, |_| C64::new(1.0, 0.0)).re;
            assert_abs_diff_eq!(mass, 1.0f64.min(1.0 / c), epsilon = 1e-8);
            assert_abs_diff_eq!(mass + mp_atom(&pp), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn stieltjes_small_c_is_point_mass() {
        let pp = p(1.5, 1e-9);
        for z in [C64::new(3.0, 0.5), C64::new(-2.0, 0.0), C64::new(0.3, -1.0)] {
            let m = mp_stieltjes(z, &pp).unwrap();
            assert!((m - 1.0 / (1.5 - z)).norm() < 1e-6);
        }
    }

    #[test]
    fn stieltjes_rejects_support() {
        let pp = p(1.0, 0.5);
        assert!(mp_stieltjes(C64::new(1.0, 0.0), &pp).is_err());
        assert!(mp_stieltjes(C64::new(0.0, 0.0), &pp).is_err());
        assert!(mp_stieltjes(C64::new(1.0, 1e-3), &pp).is_ok());
    }

    #[test]
    fn stieltjes_fixed_point_and_coupled_equations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let pp = p(rng.random_range(0.2..3.0), rng.random_range(0.05..4.0));
            let z = C64::new(rng.random_range(-5.0..15.0), rng.random_range(-4.0..4.0));
            if z.im.abs() < 1e-3 {
                continue;
            }
            let m = mp_stieltjes(z, &pp).unwrap();
            let mt = mp_stieltjes_tilde(z, &pp).unwrap();
            let fp = 1.0 / (-z + pp.sigma2 / (1.0 + pp.sigma2 * pp.c * m));
            assert!((m - fp).norm() < 1e-12, "fixed point {z} {m} {fp}");
            let e1 = 1.0 / (-z * (1.0 + pp.sigma2 * mt));
            let e2 = 1.0 / (-z * (1.0 + pp.sigma2 * pp.c * m));
            assert!((m - e1).norm() < 1e-12);
            assert!((mt - e2).norm() < 1e-12);
            // Nevanlinna sign
            assert_eq!(m.im > 0.0, z.im > 0.0);
        }
    }

    #[test]
    fn stieltjes_matches_quadrature() {
        let pts = [
            C64::new(2.0, 0.3),
            C64::new(-1.0, 0.0),
            C64::new(7.5, 0.0),
            C64::new(0.5, -0.8),
            C64::new(4.0, 2.0),
        ];
        for &(s, c) in &[(1.0, 0.5), (1.0, 1.0), (0.8, 2.5)] {
            let pp = p(s, c);
            for z in pts {
                if in_support(z, &pp) {
                    continue;
                }
                let m = mp_stieltjes(z, &pp).unwrap();
                let q = quadrature_stieltjes(z, &pp);
                assert!((m - q).norm() < 1e-6, "c={c} z={z}: {m} vs {q}");
            }
        }
    }

    #[test]
    fn stieltjes_tilde_is_companion_transform() {
        let pp = p(1.2, 0.4);
        let comp = pp.companion();
        for z in [C64::new(3.0, 0.2), C64::new(-0.7, 0.0), C64::new(5.0, -1.0)] {
            let mt = mp_stieltjes_tilde(z, &pp).unwrap();
            let q = quadrature_stieltjes(z, &comp);
            assert!((mt - q).norm() < 1e-6, "{mt} vs {q}");
        }
        let sym = p(1.3, 1.0);
        let z = C64::new(2.0, 0.7);
        assert!((mp_stieltjes_tilde(z, &sym).unwrap() - mp_stieltjes(z, &sym).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn w_star_edge_value() {
        for &(s, c) in &[(1.0, 0.5), (2.0, 1.5), (0.5, 0.1)] {
            let pp = p(s, c);
            let w = w_star(pp.edge_plus() * (1.0 + 1e-8), &pp).unwrap();
            assert_abs_diff_eq!(w, pp.threshold(), epsilon = 1e-3);
            assert!(w_star(pp.edge_plus(), &pp).is_err());
        }
    }

    #[test]
    fn w_star_is_increasing() {
        let pp = p(1.0, 0.45);
        let e = pp.edge_plus();
        let mut prev = 0.0;
        for i in 1..=1000 {
            let z = e + 20.0 * i as f64 / 1000.0;
            let w = w_star(z, &pp).unwrap();
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn phi_examples() {
        assert_abs_diff_eq!(phi_star(1.0, &p(1.0, 1.0)).unwrap(), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phi_star(2.0, &p(1.0, 0.5)).unwrap(), 3.75, epsilon = 1e-15);
        let pp = p(1.0, 0.5);
        assert_abs_diff_eq!(phi_star(pp.threshold(), &pp).unwrap(), pp.edge_plus(), epsilon = 1e-14);
        assert_abs_diff_eq!(pp.edge_plus(), 2.914213562373095, epsilon = 1e-12);
        assert!(phi_star(0.0, &pp).is_err());
    }

    #[test]
    fn phi_inverse_examples() {
        let pp = p(1.0, 0.5);
        assert_abs_diff_eq!(phi_inverse(3.75, &pp).unwrap(), 2.0, epsilon = 1e-14);
        let w = phi_inverse(pp.edge_plus() * (1.0 + 1e-12), &pp).unwrap();
        assert_abs_diff_eq!(w, pp.threshold(), epsilon = 1e-5);
        assert!(matches!(phi_inverse(pp.edge_plus(), &pp), Err(Error::BelowEdge { .. })));
        assert!(matches!(phi_inverse(1.0, &pp), Err(Error::BelowEdge { .. })));
    }

    #[test]
    fn phi_inverse_agrees_with_w_star() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let pp = p(rng.random_range(0.1..3.0), rng.random_range(0.05..5.0));
            let rho = pp.edge_plus() * rng.random_range(1.001..30.0);
            let a = phi_inverse(rho, &pp).unwrap();
            let b = w_star(rho, &pp).unwrap();
            assert!((a - b).abs() < 1e-9 * a.max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn h_star_examples() {
        let pp = p(1.0, 0.5);
        assert_abs_diff_eq!(h_star(3.75, &pp).unwrap(), 0.7, epsilon = 1e-14);
        let near = h_star(pp.edge_plus() * (1.0 + 1e-12), &pp).unwrap();
        assert!((0.0..1e-4).contains(&near));
        let far = h_star(100.0 * pp.edge_plus(), &pp).unwrap();
        assert!((1.0 - far) < 1e-2 && far < 1.0);
        assert!(h_star(2.0, &pp).is_err());
    }

    #[test]
    fn h_star_matches_derivative_form() {
        // h(z) = z m² m̃ / (z m m̃)'  with a central difference for the derivative
        for &(s, c) in &[(1.0, 0.45), (2.0, 1.7), (0.3, 0.1)] {
            let pp = p(s, c);
            let e = pp.edge_plus();
            let g = |z: f64| {
                let zc = C64::new(z, 0.0);
                (zc * mp_stieltjes(zc, &pp).unwrap() * mp_stieltjes_tilde(zc, &pp).unwrap()).re
            };
            for i in 0..50 {
                let z = e + 0.1 + (9.0 * e - 0.1) * i as f64 / 49.0;
                let hstep = 1e-5 * z;
                let dg = (g(z + hstep) - g(z - hstep)) / (2.0 * hstep);
                let zc = C64::new(z, 0.0);
                let m = mp_stieltjes(zc, &pp).unwrap();
                let mt = mp_stieltjes_tilde(zc, &pp).unwrap();
                let alt = (zc * m * m * mt).re / dg;
                let h = h_star(z, &pp).unwrap();
                assert!((alt - h).abs() < 1e-6, "z={z}: {alt} vs {h}");
            }
        }
    }

    #[test]
    fn spike_forward_cases() {
        let pp = p(1.0, 0.5);
        assert_eq!(spike_forward(pp.threshold(), &pp), SpikeLocation::Edge(pp.edge_plus()));
        assert_eq!(spike_forward(0.0, &pp), SpikeLocation::Edge(pp.edge_plus()));
        assert_abs_diff_eq!(spike_forward(2.0, &pp).value(), 3.75, epsilon = 1e-15);
        assert!(spike_forward(2.0, &pp).is_detached());
    }

    #[test]
    fn spike_map_bundle() {
        let sm = SpikeMap::new(p(1.0, 0.5));
        assert_abs_diff_eq!(sm.threshold, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(sm.forward(2.0).value(), 3.75, epsilon = 1e-15);
        assert_abs_diff_eq!(sm.inverse(3.75).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sm.eigenvector_attenuation(3.75).unwrap(), 0.7, epsilon = 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(MpParams::new(0.0, 1.0).is_err());
        assert!(MpParams::new(1.0, -1.0).is_err());
        assert!(MpParams::new(1.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn round_trips(s in 0.05f64..5.0, c in 0.01f64..8.0, f in 1.0001f64..50.0) {
            let pp = p(s, c);
            let z = pp.edge_plus() * f;
            let w = w_star(z, &pp).unwrap();
            prop_assert!((phi_star(w, &pp).unwrap() - z).abs() < 1e-9 * z);
            let w2 = pp.threshold() * f;
            let back = phi_inverse(phi_star(w2, &pp).unwrap(), &pp).unwrap();
            prop_assert!((back - w2).abs() < 1e-9 * w2.max(1.0));
            let h = h_star(z, &pp).unwrap();
            prop_assert!(h > 0.0 && h < 1.0);
        }

        #[test]
        fn spike_forward_monotone_and_continuous(s in 0.05f64..5.0, c in 0.01f64..8.0, a in 0.0f64..10.0, d in 0.0f64..1.0) {
            let pp = p(s, c);
            let l1 = a * pp.threshold();
            let l2 = l1 + d * pp.threshold();
            prop_assert!(spike_forward(l2, &pp).value() >= spike_forward(l1, &pp).value() - 1e-12 * l2.max(1.0));
            let just_above = spike_forward(pp.threshold() * (1.0 + 1e-9), &pp).value();
            prop_assert!((just_above - pp.edge_plus()).abs() < 1e-6 * pp.edge_plus());
        }
    }
}
