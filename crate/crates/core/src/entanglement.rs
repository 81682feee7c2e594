//! Reduced density matrices over the (left mode, right mode, spin) tripartite
//! split of the ground state, their von Neumann entropies, and the effective
//! thermal description of the left-regime chiral reductions.
//!
//! Analytic reductions are diagonal in the Fock/spin basis; oracle-derived
//! reductions are small dense matrices obtained by exact partial trace of a
//! numeric eigenvector. Entropies are in natural-log units (the spin entropy
//! saturates at ln 2).

use ndarray::{Array2, ArrayView1};
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::params::{DerivedCouplings, RegimeLabel};

/// Series truncation: stop once the tail weight drops below this.
pub const WEIGHT_TAIL_TOL: f64 = 1e-14;

/// Subsystem kept by a reduction. In the right-handed regime the chiral
/// labels refer to the magnetic-family (ω̃) modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    LeftMode,
    RightMode,
    Spin,
}

impl std::fmt::Display for Subsystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Subsystem::LeftMode => write!(f, "l"),
            Subsystem::RightMode => write!(f, "r"),
            Subsystem::Spin => write!(f, "s"),
        }
    }
}

/// A reduced state: diagonal weights for the closed-form reductions, a full
/// (small) matrix for oracle-derived ones.
#[derive(Debug, Clone)]
pub enum ReducedState {
    Diagonal {
        subsystem: Subsystem,
        weights: Vec<f64>,
        /// Upper bound on the weight mass beyond the stored entries.
        tail_bound: f64,
    },
    Matrix {
        subsystem: Subsystem,
        matrix: Array2<C64>,
    },
}

impl ReducedState {
    pub fn subsystem(&self) -> Subsystem {
        match self {
            ReducedState::Diagonal { subsystem, .. } => *subsystem,
            ReducedState::Matrix { subsystem, .. } => *subsystem,
        }
    }

    /// Trace of the stored state (should be 1 within the tail bound).
    pub fn trace(&self) -> f64 {
        match self {
            ReducedState::Diagonal { weights, .. } => weights.iter().sum(),
            ReducedState::Matrix { matrix, .. } => {
                (0..matrix.nrows()).map(|i| matrix[(i, i)].re).sum()
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Analytic ground-state reductions
// ---------------------------------------------------------------------------

/// γ± = (√(1+2ζ_r) ± 1)/(2√(1+2ζ_r)), the spin weights of the right-regime
/// ground state.
pub fn gamma_weights(c: &DerivedCouplings) -> Result<(f64, f64)> {
    if c.regime != RegimeLabel::RightHanded {
        return Err(Error::InvalidParams(
            "gamma weights belong to the right-handed regime ground state".into(),
        ));
    }
    let s = (1.0 + 2.0 * c.zeta).sqrt();
    Ok(((s + 1.0) / (2.0 * s), (s - 1.0) / (2.0 * s)))
}

/// Closed-form reduced density of the regime's ground state.
///
/// Left regime: both chiral reductions are geometric (thermal) with weights
/// tanh^{2n}θ/cosh²θ and the spin reduction is pure ↑. Right regime: the
/// chiral reductions carry the doublet-mixed weights
///   ρ_l(n) = (t^{2n}/ch²)(γ₊ + γ₋(n+1)/ch²),
///   ρ_r(n) = γ₊ t^{2n}/ch² + γ₋ n t^{2n−2}/ch⁴,
/// and ρ_s = diag(γ₊, γ₋).
pub fn reduced_density(c: &DerivedCouplings, subsystem: Subsystem) -> Result<ReducedState> {
    match c.regime {
        RegimeLabel::Critical => Err(Error::CriticalPointSingularity(
            "ground-state reductions are undefined at the critical point".into(),
        )),
        RegimeLabel::LeftHanded => {
            let theta = c.squeeze_angle()?;
            match subsystem {
                Subsystem::Spin => Ok(ReducedState::Diagonal {
                    subsystem,
                    weights: vec![1.0, 0.0],
                    tail_bound: 0.0,
                }),
                _ => {
                    let (weights, tail_bound) = geometric_weights(theta);
                    Ok(ReducedState::Diagonal {
                        subsystem,
                        weights,
                        tail_bound,
                    })
                }
            }
        }
        RegimeLabel::RightHanded => {
            let theta = c.squeeze_angle()?;
            let (gp, gm) = gamma_weights(c)?;
            match subsystem {
                Subsystem::Spin => Ok(ReducedState::Diagonal {
                    subsystem,
                    weights: vec![gp, gm],
                    tail_bound: 0.0,
                }),
                Subsystem::LeftMode => {
                    let ch2 = theta.cosh().powi(2);
                    let (weights, tail) =
                        weighted_series(theta, |n, t2n| (t2n / ch2) * (gp + gm * (n + 1.0) / ch2));
                    Ok(ReducedState::Diagonal {
                        subsystem,
                        weights,
                        tail_bound: tail,
                    })
                }
                Subsystem::RightMode => {
                    let t2 = theta.tanh().powi(2);
                    let ch2 = theta.cosh().powi(2);
                    let (weights, tail) = weighted_series(theta, |n, t2n| {
                        let pair = if n > 0.0 {
                            gm * n * (t2n / t2) / (ch2 * ch2)
                        } else {
                            0.0
                        };
                        gp * t2n / ch2 + pair
                    });
                    Ok(ReducedState::Diagonal {
                        subsystem,
                        weights,
                        tail_bound: tail,
                    })
                }
            }
        }
    }
}

/// Geometric thermal weights tanh^{2n}θ/cosh²θ with adaptive truncation.
fn geometric_weights(theta: f64) -> (Vec<f64>, f64) {
    let t2 = theta.tanh().powi(2);
    let mut w = 1.0 / theta.cosh().powi(2);
    let mut weights = Vec::new();
    loop {
        weights.push(w);
        // exact geometric tail
        let tail = w * t2 / (1.0 - t2);
        if tail < WEIGHT_TAIL_TOL || weights.len() > 100_000 {
            return (weights, tail);
        }
        w *= t2;
    }
}

/// Accumulate weights f(n, tanh^{2n}) until the (near-geometric) tail bound
/// drops below [`WEIGHT_TAIL_TOL`].
fn weighted_series(theta: f64, f: impl Fn(f64, f64) -> f64) -> (Vec<f64>, f64) {
    let t2 = theta.tanh().powi(2);
    let mut weights = Vec::new();
    let mut t2n = 1.0;
    let mut n = 0usize;
    loop {
        let w = f(n as f64, t2n);
        weights.push(w);
        // ratio of successive weights approaches t2 from above no slower than
        // t2·(n+2)/(n+1); bound the tail geometrically once that is < 1
        let q = t2 * (n as f64 + 2.0) / (n as f64 + 1.0);
        if q < 1.0 {
            let tail = w.abs() * q / (1.0 - q);
            if tail < WEIGHT_TAIL_TOL || weights.len() > 100_000 {
                return (weights, tail);
            }
        }
        t2n *= t2;
        n += 1;
    }
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

/// S(ρ) = −Tr ρ ln ρ with 0·ln 0 = 0.
///
/// Diagonal states must have weights in [0, 1] summing to 1 within their tail
/// bound; matrix states are diagonalized and small negative eigenvalues from
/// roundoff (≥ −1e-10) are clipped.
pub fn von_neumann_entropy(state: &ReducedState) -> Result<f64> {
    match state {
        ReducedState::Diagonal {
            weights,
            tail_bound,
            ..
        } => {
            let mut sum = 0.0;
            for &w in weights {
                if !(-1e-14..=1.0 + 1e-12).contains(&w) {
                    return Err(Error::InvalidWeights(format!("weight {w} outside [0, 1]")));
                }
                sum += w;
            }
            if (sum - 1.0).abs() > tail_bound + 1e-8 {
                return Err(Error::InvalidWeights(format!(
                    "weights sum to {sum}, tail bound {tail_bound:.3e}"
                )));
            }
            Ok(entropy_of(weights.iter().copied()))
        }
        ReducedState::Matrix { matrix, .. } => {
            let evals = matrix
                .eigvalsh(UPLO::Lower)
                .map_err(|e| Error::SolverFailure(e.to_string()))?;
            let mut clipped = Vec::with_capacity(evals.len());
            for &p in evals.iter() {
                if p < -1e-10 {
                    return Err(Error::InvalidWeights(format!(
                        "reduced matrix has negative eigenvalue {p}"
                    )));
                }
                clipped.push(p.max(0.0));
            }
            let trace: f64 = clipped.iter().sum();
            if (trace - 1.0).abs() > 1e-8 {
                return Err(Error::InvalidWeights(format!(
                    "reduced matrix trace {trace} differs from 1"
                )));
            }
            Ok(entropy_of(clipped.into_iter()))
        }
    }
}

fn entropy_of(weights: impl Iterator<Item = f64>) -> f64 {
    weights
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.ln())
        .sum()
}

/// Thermal form of the left-regime chiral entropy:
/// (n̄+1)ln(n̄+1) − n̄ ln n̄ with n̄ = sinh²θ.
pub fn chiral_entropy_thermal(theta: f64) -> f64 {
    let nbar = theta.sinh().powi(2);
    if nbar == 0.0 {
        return 0.0;
    }
    (nbar + 1.0) * (nbar + 1.0).ln() - nbar * nbar.ln()
}

/// The same entropy in the hyperbolic form
/// sinh²θ · ln(1 + cosech²θ) + ln cosh²θ.
pub fn chiral_entropy_hyperbolic(theta: f64) -> f64 {
    let sh2 = theta.sinh().powi(2);
    if sh2 == 0.0 {
        return 0.0;
    }
    sh2 * (1.0 + 1.0 / sh2).ln() + theta.cosh().powi(2).ln()
}

/// Right-regime spin entropy as the binary entropy of γ±:
/// S_s = −γ₊ ln γ₊ − γ₋ ln γ₋. Tends to ln 2 as ζ_r → ∞.
pub fn spin_entropy_closed(c: &DerivedCouplings) -> Result<f64> {
    let (gp, gm) = gamma_weights(c)?;
    Ok(entropy_of([gp, gm].into_iter()))
}

/// The algebraically equivalent logarithmic closed form of the spin entropy,
/// S_s = −½[ln(ζ_r/(2(1+2ζ_r))) + (1/s)·ln((s+1)/(s−1))], s = √(1+2ζ_r).
/// Kept as a cross-check of [`spin_entropy_closed`].
pub fn spin_entropy_log_form(zeta_r: f64) -> f64 {
    let s = (1.0 + 2.0 * zeta_r).sqrt();
    -0.5 * ((zeta_r / (2.0 * (1.0 + 2.0 * zeta_r))).ln() + (1.0 / s) * ((s + 1.0) / (s - 1.0)).ln())
}

/// Effective temperature of the left-regime thermal reductions,
/// T_eff = ħω / (2 k_B ln coth θ), in units of ħω/k_B. Exactly 0 at θ = 0.
pub fn effective_temperature(c: &DerivedCouplings) -> Result<f64> {
    match c.regime {
        RegimeLabel::LeftHanded => {
            let theta = c.squeeze_angle()?;
            // θ = 0: coth → ∞, ln → ∞, T → exact +0
            Ok(1.0 / (2.0 * (1.0 / theta.tanh()).ln()))
        }
        RegimeLabel::Critical => Err(Error::CriticalPointSingularity(
            "effective temperature diverges at the critical point".into(),
        )),
        RegimeLabel::RightHanded => Err(Error::InvalidParams(
            "the thermal description applies to the left-handed regime".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Oracle-side partial trace
// ---------------------------------------------------------------------------

/// Exact partial trace of a normalized full-space vector onto one subsystem.
pub fn oracle_partial_trace(
    psi: ArrayView1<C64>,
    basis: &FockBasis,
    subsystem: Subsystem,
) -> Result<ReducedState> {
    let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::UnnormalizedState((norm - 1.0).abs()));
    }
    let n1 = basis.cutoff() + 1;
    let amp = |s: usize, nr: usize, nl: usize| psi[s * n1 * n1 + nr * n1 + nl];
    let matrix = match subsystem {
        Subsystem::LeftMode => {
            let mut rho = Array2::zeros((n1, n1));
            for s in 0..2 {
                for nr in 0..n1 {
                    for a in 0..n1 {
                        for b in 0..n1 {
                            rho[(a, b)] += amp(s, nr, a) * amp(s, nr, b).conj();
                        }
                    }
                }
            }
            rho
        }
        Subsystem::RightMode => {
            let mut rho = Array2::zeros((n1, n1));
            for s in 0..2 {
                for nl in 0..n1 {
                    for a in 0..n1 {
                        for b in 0..n1 {
                            rho[(a, b)] += amp(s, a, nl) * amp(s, b, nl).conj();
                        }
                    }
                }
            }
            rho
        }
        Subsystem::Spin => {
            let mut rho = Array2::zeros((2, 2));
            for a in 0..2 {
                for b in 0..2 {
                    for nr in 0..n1 {
                        for nl in 0..n1 {
                            rho[(a, b)] += amp(a, nr, nl) * amp(b, nr, nl).conj();
                        }
                    }
                }
            }
            rho
        }
    };
    Ok(ReducedState::Matrix { subsystem, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_couplings, ModelParams};
    use crate::spectrum::ground_energy;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use ndarray::Array1;

    fn couplings(xi: f64, xit: f64) -> DerivedCouplings {
        derive_couplings(ModelParams::new(xi, xit).unwrap()).unwrap()
    }

    #[test]
    fn left_reductions_at_zero_field_are_pure() {
        let c = couplings(0.3, 0.0);
        let rho = reduced_density(&c, Subsystem::LeftMode).unwrap();
        match &rho {
            ReducedState::Diagonal { weights, .. } => {
                assert_relative_eq!(weights[0], 1.0);
            }
            _ => panic!("expected diagonal"),
        }
        assert_eq!(von_neumann_entropy(&rho).unwrap(), 0.0);
        let spin = reduced_density(&c, Subsystem::Spin).unwrap();
        assert_eq!(von_neumann_entropy(&spin).unwrap(), 0.0);
    }

    #[test]
    fn left_chiral_entropies_agree_in_all_three_forms() {
        for ratio in [0.1, 0.35, 0.6, 0.85, 0.96] {
            let c = couplings(0.4, 0.4 * ratio);
            let theta = c.squeeze_angle().unwrap();
            let s_l = von_neumann_entropy(&reduced_density(&c, Subsystem::LeftMode).unwrap())
                .unwrap();
            let s_r = von_neumann_entropy(&reduced_density(&c, Subsystem::RightMode).unwrap())
                .unwrap();
            assert_abs_diff_eq!(s_l, s_r, epsilon = 1e-13);
            assert_abs_diff_eq!(s_l, chiral_entropy_thermal(theta), epsilon = 1e-12);
            assert_abs_diff_eq!(s_l, chiral_entropy_hyperbolic(theta), epsilon = 1e-12);
        }
    }

    #[test]
    fn thermal_weights_are_boltzmann_at_the_effective_temperature() {
        for ratio in [0.2, 0.5, 0.8] {
            let c = couplings(0.4, 0.4 * ratio);
            let theta = c.squeeze_angle().unwrap();
            let t_eff = effective_temperature(&c).unwrap();
            let rho = reduced_density(&c, Subsystem::LeftMode).unwrap();
            let ReducedState::Diagonal { weights, .. } = &rho else {
                panic!()
            };
            // w_n ∝ e^{−n/T_eff} (energies in ħω), normalized by cosh²θ
            let z: f64 = weights.iter().sum();
            for (n, &w) in weights.iter().take(12).enumerate() {
                let boltzmann = (-(n as f64) / t_eff).exp()
                    / (0..weights.len())
                        .map(|m| (-(m as f64) / t_eff).exp())
                        .sum::<f64>();
                assert_relative_eq!(w / z, boltzmann, epsilon = 1e-10, max_relative = 1e-10);
            }
            let _ = theta;
        }
    }

    #[test]
    fn effective_temperature_limits() {
        let c = couplings(0.3, 0.0);
        assert_eq!(effective_temperature(&c).unwrap(), 0.0);
        // monotone increasing toward the critical point
        let mut last = 0.0;
        for ratio in [0.2, 0.5, 0.8, 0.95, 0.99] {
            let t = effective_temperature(&couplings(0.4, 0.4 * ratio)).unwrap();
            assert!(t > last);
            last = t;
        }
        assert!(effective_temperature(&couplings(0.4, 0.8)).is_err());
    }

    #[test]
    fn right_regime_weights_normalize_and_gamma_sums_to_one() {
        let c = couplings(0.4, 1.6);
        let (gp, gm) = gamma_weights(&c).unwrap();
        assert_relative_eq!(gp + gm, 1.0, epsilon = 1e-15);
        for sub in [Subsystem::LeftMode, Subsystem::RightMode] {
            let rho = reduced_density(&c, sub).unwrap();
            assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn spin_entropy_closed_forms_agree() {
        // ζ_r = 4 → s = 3 → γ± = {2/3, 1/3}
        let c = couplings(0.4, 2.4);
        assert_relative_eq!(c.zeta, 4.0);
        let (gp, gm) = gamma_weights(&c).unwrap();
        assert_relative_eq!(gp, 2.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(gm, 1.0 / 3.0, epsilon = 1e-14);
        let s1 = spin_entropy_closed(&c).unwrap();
        let s2 = spin_entropy_log_form(c.zeta);
        assert_abs_diff_eq!(s1, s2, epsilon = 1e-12);
        // continuity: ζ_r → 0⁺ gives S_s → 0
        let small = couplings(0.4, 0.4000001);
        assert!(spin_entropy_closed(&small).unwrap() < 1e-5);
    }

    #[test]
    fn spin_entropy_saturates_at_ln2() {
        let c = couplings(0.4, 100.4); // ζ_r = 200
        let s = spin_entropy_closed(&c).unwrap();
        assert!((s - 2.0f64.ln()).abs() / 2.0f64.ln() < 0.01);
    }

    #[test]
    fn partial_trace_of_product_state_is_pure() {
        let basis = FockBasis::new(4);
        let mut psi: Array1<C64> = Array1::zeros(basis.dim());
        psi[basis.index(crate::fock::Spin::Up, 0, 0)] = C64::new(1.0, 0.0);
        for sub in [Subsystem::LeftMode, Subsystem::RightMode, Subsystem::Spin] {
            let rho = oracle_partial_trace(psi.view(), &basis, sub).unwrap();
            assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn oracle_ground_state_reductions_match_analytic() {
        // left regime: S_s ≈ 0 (bi-separable spin), S_l = S_r thermal
        let run = crate::oracle::OracleRun::new(ModelParams::new(0.4, 0.1).unwrap(), 14).unwrap();
        let g = run.matched(crate::spectrum::StateLabel::Ground).unwrap();
        let theta = run.couplings.squeeze_angle().unwrap();
        let s_s = von_neumann_entropy(
            &oracle_partial_trace(g.vector.view(), &run.basis, Subsystem::Spin).unwrap(),
        )
        .unwrap();
        assert!(s_s < 1e-6, "left ground spin entropy {s_s}");
        let s_l = von_neumann_entropy(
            &oracle_partial_trace(g.vector.view(), &run.basis, Subsystem::LeftMode).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(s_l, chiral_entropy_thermal(theta), epsilon = 1e-8);

        // right regime: all reductions mixed, matching the Θ weights
        let run = crate::oracle::OracleRun::new(ModelParams::new(0.4, 1.6).unwrap(), 14).unwrap();
        let g = run.matched(crate::spectrum::StateLabel::Ground).unwrap();
        assert_abs_diff_eq!(g.energy, ground_energy(&run.couplings), epsilon = 1e-9);
        for sub in [Subsystem::LeftMode, Subsystem::RightMode, Subsystem::Spin] {
            let num = von_neumann_entropy(
                &oracle_partial_trace(g.vector.view(), &run.basis, sub).unwrap(),
            )
            .unwrap();
            let ana = von_neumann_entropy(&reduced_density(&run.couplings, sub).unwrap()).unwrap();
            assert_abs_diff_eq!(num, ana, epsilon = 1e-7);
            assert!(num > 0.05, "right-regime {sub} reduction should be mixed");
        }
    }

    #[test]
    fn invalid_weights_are_rejected() {
        let bad = ReducedState::Diagonal {
            subsystem: Subsystem::Spin,
            weights: vec![0.7, 0.7],
            tail_bound: 0.0,
        };
        assert!(matches!(
            von_neumann_entropy(&bad),
            Err(Error::InvalidWeights(_))
        ));
        let negative = ReducedState::Diagonal {
            subsystem: Subsystem::Spin,
            weights: vec![1.2, -0.2],
            tail_bound: 0.0,
        };
        assert!(von_neumann_entropy(&negative).is_err());
    }
}
