// SPDX-License-Identifier: Apache-2.0

//! Liouvillian eigenvalues, the exceptional point and phase classification.
//!
//! At Δ = 0 the generator has the closed-form spectrum
//!
//! ```text
//! λ₁ = 0,  λ₂ = −γ/2,  λ₃ = (−3γ − ξ)/4,  λ₄ = (−3γ + ξ)/4,  ξ = √(γ² − 16Ω²)
//! ```
//!
//! so λ₃ and λ₄ coalesce at γ = 4Ω (a second-order exceptional point at −3γ/4).
//! λ₂ is the decay of the Bloch component in quadrature with the drive; the
//! sum rule Σλ = Tr L = −2γ holds for any detuning.

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use super::liouvillian::Liouvillian;
use super::matrix::C64;
use super::state::DriveParams;
use super::LindbladError;

/// Relative half-width of the band around γ = 4Ω classified as the LEP.
pub const LEP_REL_TOL: f64 = 1e-6;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// γ < 4Ω: λ₃, λ₄ form a complex-conjugate pair (oscillatory decay).
    Exact,
    /// γ > 4Ω: λ₃, λ₄ are real and split by ξ.
    Broken,
    AtLEP,
}

impl Phase {
    pub fn classify(gamma: f64, omega: f64) -> Self {
        let lep = lep_gamma(omega);
        if (gamma - lep).abs() <= LEP_REL_TOL * lep {
            Phase::AtLEP
        } else if gamma < lep {
            Phase::Exact
        } else {
            Phase::Broken
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Exact => "Exact",
            Phase::Broken => "Broken",
            Phase::AtLEP => "AtLEP",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by real part descending, then imaginary part ascending.
    pub eigenvalues: [C64; 4],
    pub xi: C64,
    pub phase: Phase,
}

/// γ at which λ₃ and λ₄ merge for resonant drive.
pub fn lep_gamma(omega: f64) -> f64 {
    4.0 * omega
}

/// ξ = √(γ² − 16Ω²), principal branch: real ≥ 0 when broken, Im ξ > 0 when exact.
pub fn xi(gamma: f64, omega: f64) -> C64 {
    C64::new(gamma * gamma - 16.0 * omega * omega, 0.0).sqrt()
}

/// Closed-form resonant (Δ = 0) spectrum `[λ₁, λ₂, λ₃, λ₄]`.
pub fn analytic_resonant_spectrum(gamma: f64, omega: f64) -> [C64; 4] {
    let xi = xi(gamma, omega);
    let g = C64::new(gamma, 0.0);
    [
        C64::new(0.0, 0.0),
        -g * 0.5,
        (-g * 3.0 - xi) / 4.0,
        (-g * 3.0 + xi) / 4.0,
    ]
}

/// Eigenvalues of a dense 4×4 complex matrix through a complex Schur form.
pub fn eigenvalues(l: &Liouvillian) -> Result<[C64; 4], LindbladError> {
    let schur = Schur::try_new(l.mat, SCHUR_EPS, SCHUR_MAX_ITER).ok_or_else(|| {
        LindbladError::EigenNonConvergence {
            matrix: Box::new(l.entries()),
        }
    })?;
    let (_, t) = schur.unpack();
    let vals = [t[(0, 0)], t[(1, 1)], t[(2, 2)], t[(3, 3)]];
    if vals.iter().any(|z| !z.is_finite()) {
        return Err(LindbladError::EigenNonConvergence {
            matrix: Box::new(l.entries()),
        });
    }
    Ok(vals)
}

/// Orders eigenvalues by real part descending; real parts equal within `tol`
/// are ordered by imaginary part ascending.
pub fn sort_eigenvalues(vals: &mut [C64], tol: f64) {
    let before = |a: &C64, b: &C64| {
        if (a.re - b.re).abs() <= tol {
            a.im < b.im
        } else {
            a.re > b.re
        }
    };
    // insertion sort: the tolerant comparison is not a total order
    for i in 1..vals.len() {
        let mut j = i;
        while j > 0 && before(&vals[j], &vals[j - 1]) {
            vals.swap(j, j - 1);
            j -= 1;
        }
    }
}

pub fn liouvillian_spectrum(
    l: &Liouvillian,
    p: &DriveParams,
) -> Result<SpectrumResult, LindbladError> {
    let mut vals = eigenvalues(l)?;
    let scale = p
        .gamma
        .max(p.omega)
        .max(p.delta.abs())
        .max(f64::MIN_POSITIVE);
    sort_eigenvalues(&mut vals, 1e-9 * scale);
    Ok(SpectrumResult {
        eigenvalues: vals,
        xi: xi(p.gamma, p.omega),
        phase: Phase::classify(p.gamma, p.omega),
    })
}

/// γ_eff = Ω̃²/Γ for a three-level scheme with a strongly driven auxiliary
/// transition (Rabi frequency Ω̃) and fast spontaneous decay Γ.
pub fn effective_decay_rate(omega_aux: f64, decay: f64) -> Result<f64, LindbladError> {
    if !(decay > 0.0) || !decay.is_finite() {
        return Err(LindbladError::Domain(format!(
            "decay rate must be positive, got {decay}"
        )));
    }
    Ok(omega_aux * omega_aux / decay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::liouvillian::build_liouvillian;
    use std::f64::consts::PI;

    const OMEGA: f64 = 2.0 * PI * 29e3;

    fn spectrum(delta: f64, omega: f64, gamma: f64) -> SpectrumResult {
        let p = DriveParams::new(delta, omega, 0.0, gamma).unwrap();
        liouvillian_spectrum(&build_liouvillian(&p), &p).unwrap()
    }

    fn assert_vals(actual: &[C64; 4], expected: &[C64; 4], tol: f64) {
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).norm() <= tol, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn lep_gamma_values() {
        assert_eq!(lep_gamma(0.0), 0.0);
        assert_eq!(lep_gamma(1.0), 4.0);
        assert!((lep_gamma(OMEGA) - 728_849.495_632_832).abs() < 1e-6);
    }

    #[test]
    fn decay_only_spectrum() {
        let g = 5.0;
        let s = spectrum(0.0, 0.0, g);
        let expected = [0.0, -0.5 * g, -0.5 * g, -g].map(|x| C64::new(x, 0.0));
        assert_vals(&s.eigenvalues, &expected, 1e-12);
        assert_eq!(s.xi, C64::new(g, 0.0));
    }

    #[test]
    fn analytic_closed_system_limit() {
        let vals = analytic_resonant_spectrum(0.0, 3.0);
        assert_eq!(vals[0], C64::new(0.0, 0.0));
        assert!((vals[2] - C64::new(0.0, -3.0)).norm() < 1e-15);
        assert!((vals[3] - C64::new(0.0, 3.0)).norm() < 1e-15);
    }

    #[test]
    fn analytic_without_drive() {
        let vals = analytic_resonant_spectrum(5.0, 0.0);
        assert_vals(
            &vals,
            &[0.0, -2.5, -5.0, -2.5].map(|x| C64::new(x, 0.0)),
            0.0,
        );
    }

    #[test]
    fn analytic_at_lep_merges() {
        let g = lep_gamma(OMEGA);
        let vals = analytic_resonant_spectrum(g, OMEGA);
        assert!((vals[2] - vals[3]).norm() < 1e-9 * g);
        assert!((vals[2].re + 0.75 * g).abs() < 1e-9 * g);
    }

    #[test]
    fn broken_phase_numeric_matches_closed_form() {
        let g = 8e5;
        let s = spectrum(0.0, OMEGA, g);
        assert_eq!(s.phase, Phase::Broken);
        assert!(s.xi.im == 0.0 && s.xi.re > 0.0);
        let mut expected = analytic_resonant_spectrum(g, OMEGA);
        sort_eigenvalues(&mut expected, 1e-9 * g);
        assert_vals(&s.eigenvalues, &expected, 1e-9 * g);
    }

    #[test]
    fn exact_phase_conjugate_pair() {
        let g = 1.3e5;
        let s = spectrum(0.0, OMEGA, g);
        assert_eq!(s.phase, Phase::Exact);
        assert!(s.xi.re.abs() < 1e-9 && s.xi.im > 0.0);
        let pair: Vec<_> = s.eigenvalues.iter().filter(|z| z.im.abs() > 1.0).collect();
        assert_eq!(pair.len(), 2);
        assert!((pair[0] - pair[1].conj()).norm() < 1e-9 * g);
    }

    #[test]
    fn sorting_puts_stationary_mode_first() {
        let s = spectrum(-1e6, OMEGA, 4e5);
        assert!(s.eigenvalues[0].norm() < 1e-6 * 4e5);
        for w in s.eigenvalues.windows(2) {
            assert!(w[0].re >= w[1].re - 1e-9 * 1e6);
        }
    }

    #[test]
    fn phase_band() {
        let lep = lep_gamma(OMEGA);
        assert_eq!(Phase::classify(lep * (1.0 + 5e-7), OMEGA), Phase::AtLEP);
        assert_eq!(Phase::classify(lep * (1.0 + 2e-6), OMEGA), Phase::Broken);
        assert_eq!(Phase::classify(lep * (1.0 - 2e-6), OMEGA), Phase::Exact);
        assert_eq!(Phase::classify(0.0, OMEGA), Phase::Exact);
    }

    #[test]
    fn effective_decay_examples() {
        assert_eq!(effective_decay_rate(0.0, 1e7).unwrap(), 0.0);
        assert_eq!(effective_decay_rate(1e7, 1e7).unwrap(), 1e7);
        assert!((effective_decay_rate(2e6, 1e7).unwrap() - 4e5).abs() < 1e-9);
        assert!(effective_decay_rate(1.0, 0.0).is_err());
        assert!(effective_decay_rate(1.0, -3.0).is_err());
    }
}
