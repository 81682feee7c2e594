//! SU(1,1) structure of the exact solution: Schwinger generators, the
//! disentangling factorization, coherent-state coefficient series, and the
//! doublet eigenstate constructors.
//!
//! The coherent state carries a *signed* squeeze angle θ in the convention
//! |θ, n⟩ := U(θ)|pedestal⟩ with U(θ) = exp(θ(K₊ − K₋)): its series
//! coefficients go as tanh^m(θ), i.e. they alternate in sign exactly when
//! θ < 0. Eigenstates of the model in both chiral regimes carry the positive
//! angle stored in [`DerivedCouplings::squeeze`].

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{
    ladder, number_operator, ChiralMode, Direction, FockBasis, OperatorMatrix,
};
use crate::params::{DerivedCouplings, RegimeLabel};
use crate::spectrum::{analytic_energy, Branch};

/// Squared-norm tail mass at which the coherent series is considered
/// converged. Tight enough that the dropped amplitude tail (≈ √mass) stays
/// below the 1e-8 state-comparison tolerances used throughout.
pub const SERIES_TAIL_TOL: f64 = 1e-18;

/// Default truncation-leakage threshold for eigenstate construction.
pub const STATE_LEAKAGE_THRESHOLD: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Schwinger two-mode representation of su(1,1):
/// K₀ = (n̂_r + n̂_l + 1)/2, K₊ = a_r†a_l†, K₋ = a_r a_l.
/// Satisfies [K₀, K±] = ±K± and [K₋, K₊] = 2K₀ on interior states.
pub fn su11_generators(basis: &FockBasis) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let nr = number_operator(basis, ChiralMode::Right);
    let nl = number_operator(basis, ChiralMode::Left);
    let k0 = nr
        .add(&nl)
        .add(&OperatorMatrix::identity(basis.orbital_dim()))
        .scale(C64::new(0.5, 0.0));
    let k_plus = ladder(basis, ChiralMode::Right, Direction::Raise)
        .matmul(&ladder(basis, ChiralMode::Left, Direction::Raise));
    let k_minus = k_plus.dagger();
    (k0, k_plus, k_minus)
}

/// The disentangled product form of the squeeze,
/// exp(tanh θ·K₊) · exp(ln(cosh⁻²θ)·K₀) · exp(−tanh θ·K₋),
/// evaluated exactly on the truncated space (K± are nilpotent there, K₀
/// diagonal). Agrees with `fock::squeeze_unitary(θ)` on interior states.
pub fn disentangled_squeeze(basis: &FockBasis, theta: f64) -> OperatorMatrix {
    let (k0, k_plus, k_minus) = su11_generators(basis);
    let t = theta.tanh();
    let left = exp_nilpotent(&k_plus, C64::new(t, 0.0));
    let right = exp_nilpotent(&k_minus, C64::new(-t, 0.0));
    let c = (theta.cosh().powi(-2)).ln();
    let dim = basis.orbital_dim();
    let middle = OperatorMatrix::from_triplets(
        dim,
        (0..dim)
            .map(|i| (i, i, C64::new((c * k0.get(i, i).re).exp(), 0.0)))
            .collect(),
    );
    left.matmul(&middle).matmul(&right)
}

/// exp(s·M) for a nilpotent sparse M via its terminating power series.
fn exp_nilpotent(m: &OperatorMatrix, s: C64) -> OperatorMatrix {
    let dim = m.dim();
    let mut acc = OperatorMatrix::identity(dim);
    let mut term = OperatorMatrix::identity(dim);
    let mut j = 1.0;
    loop {
        term = term.matmul(m).scale(s / j);
        if term.max_abs() == 0.0 {
            break;
        }
        acc = acc.add(&term);
        j += 1.0;
    }
    acc
}

// ---------------------------------------------------------------------------
// Coherent states
// ---------------------------------------------------------------------------

/// SU(1,1) coherent state over a Fock pedestal: coefficient c_m multiplies
/// |n_r = m, n_l = m + n⟩ for a left pedestal and |n_r = m + n, n_l = m⟩ for
/// a right pedestal.
#[derive(Debug, Clone)]
pub struct Su11CoherentState {
    /// Signed squeeze angle θ.
    pub squeeze: f64,
    /// Pedestal quantum number n.
    pub pedestal: usize,
    /// Which chiral mode carries the pedestal.
    pub pedestal_mode: ChiralMode,
    /// Series coefficients c_m = cosh^{−(n+1)}|θ| √((m+n)!/(n! m!)) tanh^m(θ).
    pub coefficients: Vec<f64>,
    /// Upper bound on the squared-norm mass beyond the stored coefficients.
    pub tail_bound: f64,
}

/// Evaluate the coherent-state series adaptively: stops at the smallest m
/// whose geometric tail bound drops below [`SERIES_TAIL_TOL`], failing with
/// [`Error::TailTooHeavy`] if that has not happened by `m_max`.
pub fn coherent_coefficients(
    squeeze: f64,
    pedestal: usize,
    pedestal_mode: ChiralMode,
    m_max: usize,
) -> Result<Su11CoherentState> {
    let t = squeeze.tanh();
    let n = pedestal as f64;
    let mut coeffs = Vec::new();
    let mut c = squeeze.cosh().powi(-(pedestal as i32 + 1));
    let mut mass = 0.0;
    for m in 0..=m_max {
        coeffs.push(c);
        mass += c * c;
        // ratio of successive squared coefficients, decreasing in m
        let q = t * t * (m as f64 + n + 1.0) / (m as f64 + 1.0);
        if q < 1.0 {
            let tail = c * c * q / (1.0 - q);
            if tail < SERIES_TAIL_TOL {
                return Ok(Su11CoherentState {
                    squeeze,
                    pedestal,
                    pedestal_mode,
                    coefficients: coeffs,
                    tail_bound: tail,
                });
            }
        }
        c *= t * ((m as f64 + n + 1.0) / (m as f64 + 1.0)).sqrt();
    }
    let _ = mass;
    Err(Error::TailTooHeavy(format!(
        "series tail still above {SERIES_TAIL_TOL:.1e} at m_max = {m_max} (|θ| = {})",
        squeeze.abs()
    )))
}

impl Su11CoherentState {
    /// Squared-norm mass that does not fit below the basis cutoff when the
    /// state is placed in `basis`.
    pub fn leakage_beyond(&self, basis: &FockBasis) -> f64 {
        let fit = basis.cutoff().saturating_sub(self.pedestal);
        let stored_loss: f64 = self
            .coefficients
            .iter()
            .skip(fit + 1)
            .map(|c| c * c)
            .sum();
        stored_loss + self.tail_bound
    }

    /// Orbital-space vector with the documented mode placement. Amplitudes
    /// beyond the cutoff are dropped; check [`Self::leakage_beyond`] first.
    pub fn orbital_vector(&self, basis: &FockBasis) -> Array1<C64> {
        let mut v = Array1::zeros(basis.orbital_dim());
        for (m, &c) in self.coefficients.iter().enumerate() {
            let (n_r, n_l) = match self.pedestal_mode {
                ChiralMode::Left => (m, m + self.pedestal),
                ChiralMode::Right => (m + self.pedestal, m),
            };
            if n_r > basis.cutoff() || n_l > basis.cutoff() {
                break;
            }
            v[basis.orbital_index(n_r, n_l)] = C64::new(c, 0.0);
        }
        v
    }
}

/// Closed-form occupation moments of |θ, n⟩: with sh = sinh|θ|, ch = cosh|θ|
/// and a left pedestal,
///   ⟨n_r⟩ = (n+1)sh², ⟨n_l⟩ = n·ch² + sh²,
///   ⟨n_r²⟩ = (n+1)²sh⁴ + (n+1)ch²sh², ⟨n_l²⟩ = n²ch⁴ + sh⁴ + (1+3n)ch²sh².
/// A right pedestal mirrors r ↔ l.
#[derive(Debug, Clone, Copy)]
pub struct CoherentMoments {
    pub n_r: f64,
    pub n_l: f64,
    pub n_r_sq: f64,
    pub n_l_sq: f64,
}

pub fn coherent_moments(
    squeeze: f64,
    pedestal: usize,
    pedestal_mode: ChiralMode,
) -> CoherentMoments {
    let sh2 = squeeze.sinh().powi(2);
    let ch2 = squeeze.cosh().powi(2);
    let n = pedestal as f64;
    let spectator = (n + 1.0) * sh2;
    let on_pedestal = n * ch2 + sh2;
    let spectator_sq = (n + 1.0) * (n + 1.0) * sh2 * sh2 + (n + 1.0) * ch2 * sh2;
    let pedestal_sq = n * n * ch2 * ch2 + sh2 * sh2 + (1.0 + 3.0 * n) * ch2 * sh2;
    match pedestal_mode {
        ChiralMode::Left => CoherentMoments {
            n_r: spectator,
            n_l: on_pedestal,
            n_r_sq: spectator_sq,
            n_l_sq: pedestal_sq,
        },
        ChiralMode::Right => CoherentMoments {
            n_r: on_pedestal,
            n_l: spectator,
            n_r_sq: pedestal_sq,
            n_l_sq: spectator_sq,
        },
    }
}

// ---------------------------------------------------------------------------
// Doublet eigenstates
// ---------------------------------------------------------------------------

/// Analytic description of a doublet eigenstate |±E_n⟩.
#[derive(Debug, Clone, Copy)]
pub struct EigenstateDescriptor {
    pub regime: RegimeLabel,
    pub branch: Branch,
    pub n: usize,
    /// Signed energy of the state.
    pub energy: f64,
    /// C₊ = √((E+mc²)/2E).
    pub c_plus: f64,
    /// C₋ = √((E−mc²)/2E).
    pub c_minus: f64,
    /// Squeeze angle of the regime.
    pub squeeze: f64,
}

pub fn eigenstate_descriptor(
    c: &DerivedCouplings,
    n: usize,
    branch: Branch,
) -> Result<EigenstateDescriptor> {
    let energy = analytic_energy(c, n, branch)?;
    let e = energy.abs();
    Ok(EigenstateDescriptor {
        regime: c.regime,
        branch,
        n,
        energy,
        c_plus: ((e + c.delta) / (2.0 * e)).sqrt(),
        c_minus: ((e - c.delta) / (2.0 * e)).sqrt(),
        squeeze: c.squeeze_angle()?,
    })
}

/// Build the normalized doublet eigenstate |±E_n⟩ as a full-space vector in
/// the regime's natural-family basis.
///
/// Left-handed regime (pedestals on the left mode, right mode squeezed from
/// vacuum):
///   |±E_n⟩ = C_{n,±}|θ, n+1⟩|↑⟩ ∓ i C_{n,∓}|θ, n⟩|↓⟩.
/// Right-handed regime (pedestals on the right mode):
///   |±Ẽ_n⟩ = C̃_{n,±}|θ, n⟩|↑⟩ ± i C̃_{n,∓}|θ, n+1⟩|↓⟩.
/// The spin-relative phases are fixed by exact diagonalization of the model.
pub fn build_eigenstate(
    c: &DerivedCouplings,
    n: usize,
    branch: Branch,
    basis: &FockBasis,
) -> Result<Array1<C64>> {
    let desc = eigenstate_descriptor(c, n, branch)?;
    let theta = desc.squeeze;
    let (up_weight, down_weight) = match branch {
        Branch::Plus => (desc.c_plus, desc.c_minus),
        Branch::Minus => (desc.c_minus, desc.c_plus),
    };
    let (pedestal_mode, up_pedestal, down_pedestal, down_phase) = match c.regime {
        RegimeLabel::LeftHanded => {
            let phase = match branch {
                Branch::Plus => C64::new(0.0, -1.0),
                Branch::Minus => C64::new(0.0, 1.0),
            };
            (ChiralMode::Left, n + 1, n, phase)
        }
        RegimeLabel::RightHanded => {
            let phase = match branch {
                Branch::Plus => C64::new(0.0, 1.0),
                Branch::Minus => C64::new(0.0, -1.0),
            };
            (ChiralMode::Right, n, n + 1, phase)
        }
        RegimeLabel::Critical => unreachable!("descriptor construction already failed"),
    };

    let m_cap = (8 * basis.cutoff()).max(4096);
    let up = coherent_coefficients(theta, up_pedestal, pedestal_mode, m_cap)?;
    let down = coherent_coefficients(theta, down_pedestal, pedestal_mode, m_cap)?;
    let leakage = up_weight * up_weight * up.leakage_beyond(basis)
        + down_weight * down_weight * down.leakage_beyond(basis);
    if leakage > STATE_LEAKAGE_THRESHOLD {
        return Err(Error::TruncationLeakage {
            leakage,
            threshold: STATE_LEAKAGE_THRESHOLD,
        });
    }

    let od = basis.orbital_dim();
    let mut psi = Array1::zeros(basis.dim());
    let up_vec = up.orbital_vector(basis);
    let down_vec = down.orbital_vector(basis);
    for i in 0..od {
        psi[i] = C64::new(up_weight, 0.0) * up_vec[i];
        psi[od + i] = down_phase * C64::new(down_weight, 0.0) * down_vec[i];
    }
    let norm = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    psi.mapv_inplace(|v| v / norm);
    Ok(psi)
}

/// Build the regime's normalized ground state: the spin-up squeezed vacuum
/// |θ, 0⟩|↑⟩ in the left-handed regime, the n = 0 positive doublet in the
/// right-handed regime.
pub fn build_ground_state(c: &DerivedCouplings, basis: &FockBasis) -> Result<Array1<C64>> {
    match c.regime {
        RegimeLabel::RightHanded => build_eigenstate(c, 0, Branch::Plus, basis),
        RegimeLabel::Critical => Err(Error::CriticalPointSingularity(
            "normalizable ground state construction is undefined at the critical point".into(),
        )),
        RegimeLabel::LeftHanded => {
            let theta = c.squeeze_angle()?;
            let coh =
                coherent_coefficients(theta, 0, ChiralMode::Left, (8 * basis.cutoff()).max(4096))?;
            let leakage = coh.leakage_beyond(basis);
            if leakage > STATE_LEAKAGE_THRESHOLD {
                return Err(Error::TruncationLeakage {
                    leakage,
                    threshold: STATE_LEAKAGE_THRESHOLD,
                });
            }
            let mut psi = Array1::zeros(basis.dim());
            let orb = coh.orbital_vector(basis);
            for i in 0..basis.orbital_dim() {
                psi[i] = orb[i];
            }
            let norm = psi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            psi.mapv_inplace(|v| v / norm);
            Ok(psi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::squeeze_unitary;
    use crate::params::{derive_couplings, ModelParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn generator_algebra_on_interior() {
        let basis = FockBasis::new(8);
        let (k0, kp, km) = su11_generators(&basis);
        let interior = |op: OperatorMatrix| {
            op.restrict_columns(|i| {
                let (nr, nl) = basis.occupations(i);
                nr <= 6 && nl <= 6
            })
            .max_abs()
        };
        // [K0, K±] = ±K±
        assert!(interior(k0.commutator(&kp).sub(&kp)) < 1e-10);
        assert!(interior(k0.commutator(&km).add(&km)) < 1e-10);
        // [K−, K+] = 2K0
        assert!(interior(km.commutator(&kp).sub(&k0.scale(C64::new(2.0, 0.0)))) < 1e-10);
        // K0|vac⟩ = ½|vac⟩
        assert_relative_eq!(k0.get(0, 0).re, 0.5);
        // [K0, Lz] = 0 exactly (both diagonal)
        let lz = crate::fock::angular_momentum_lz(&basis);
        assert_eq!(k0.commutator(&lz).max_abs(), 0.0);
        // Casimir: [Lz, K+] = 0
        assert_eq!(lz.commutator(&kp).max_abs(), 0.0);
    }

    #[test]
    fn zero_squeeze_is_a_pure_pedestal() {
        let s = coherent_coefficients(0.0, 2, ChiralMode::Left, 32).unwrap();
        assert_eq!(s.coefficients.len(), 1);
        assert_relative_eq!(s.coefficients[0], 1.0);
        let basis = FockBasis::new(4);
        let v = s.orbital_vector(&basis);
        assert_relative_eq!(v[basis.orbital_index(0, 2)].re, 1.0);
    }

    #[test]
    fn series_is_normalized_with_signed_tanh_ratio() {
        for theta in [-0.7, 0.35, 1.1] {
            let s = coherent_coefficients(theta, 3, ChiralMode::Left, 4096).unwrap();
            let mass: f64 = s.coefficients.iter().map(|c| c * c).sum();
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-11);
            // successive ratio c_{m+1}/c_m = tanh θ · √((m+n+1)/(m+1))
            let t: f64 = theta.tanh();
            for m in 0..6 {
                let expected = t * ((m as f64 + 4.0) / (m as f64 + 1.0)).sqrt();
                assert_relative_eq!(
                    s.coefficients[m + 1] / s.coefficients[m],
                    expected,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn tail_too_heavy_reported() {
        assert!(matches!(
            coherent_coefficients(3.0, 0, ChiralMode::Left, 8),
            Err(Error::TailTooHeavy(_))
        ));
    }

    #[test]
    fn coherent_state_matches_squeeze_unitary_image() {
        // Disentangling in state form: the series equals U(θ) applied to the
        // pedestal state, for either sign of θ. The cutoff leaves enough edge
        // margin for the 1e-8 comparison.
        let basis = FockBasis::new(24);
        for theta in [0.4, -0.4] {
            let u = squeeze_unitary(&basis, theta, None).unwrap();
            let n = 2;
            let mut ped = Array1::zeros(basis.orbital_dim());
            ped[basis.orbital_index(0, n)] = C64::new(1.0, 0.0);
            let img = u.matrix.matvec(ped.view());
            let coh = coherent_coefficients(theta, n, ChiralMode::Left, 512).unwrap();
            let v = coh.orbital_vector(&basis);
            let diff: f64 = img
                .iter()
                .zip(v.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-8, "series vs unitary image differ by {diff}");
        }
    }

    #[test]
    fn disentangled_product_matches_exponential() {
        // The product form amplifies through near-cutoff intermediates, so the
        // identity is checked on inputs well inside the basis.
        let basis = FockBasis::new(20);
        let theta = 0.25;
        let u = squeeze_unitary(&basis, theta, None).unwrap();
        let prod = disentangled_squeeze(&basis, theta);
        let diff = u.matrix.sub(&prod).restrict_columns(|i| {
            let (nr, nl) = basis.occupations(i);
            nr <= 2 && nl <= 2
        });
        assert!(diff.max_abs() < 1e-8, "disentangling residual {}", diff.max_abs());
    }

    #[test]
    fn moments_match_series_summation() {
        // brute-force oracle: sum the series directly
        for &(theta, n, mode) in &[
            (0.7, 3usize, ChiralMode::Left),
            (0.45, 0, ChiralMode::Left),
            (0.6, 2, ChiralMode::Right),
        ] {
            let s = coherent_coefficients(theta, n, mode, 4096).unwrap();
            let (mut nr, mut nl, mut nr2, mut nl2) = (0.0, 0.0, 0.0, 0.0);
            for (m, c) in s.coefficients.iter().enumerate() {
                let w = c * c;
                let (a, b) = match mode {
                    ChiralMode::Left => (m as f64, (m + n) as f64),
                    ChiralMode::Right => ((m + n) as f64, m as f64),
                };
                nr += w * a;
                nl += w * b;
                nr2 += w * a * a;
                nl2 += w * b * b;
            }
            let mom = coherent_moments(theta, n, mode);
            assert_relative_eq!(mom.n_r, nr, epsilon = 1e-10, max_relative = 1e-10);
            assert_relative_eq!(mom.n_l, nl, epsilon = 1e-10, max_relative = 1e-10);
            assert_relative_eq!(mom.n_r_sq, nr2, epsilon = 1e-9, max_relative = 1e-9);
            assert_relative_eq!(mom.n_l_sq, nl2, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn squeezed_vacuum_moments() {
        // n = 0: ⟨n_r⟩ = ⟨n_l⟩ = sinh²|θ|
        let mom = coherent_moments(0.8, 0, ChiralMode::Left);
        let sh2 = 0.8f64.sinh().powi(2);
        assert_relative_eq!(mom.n_r, sh2);
        assert_relative_eq!(mom.n_l, sh2);
    }

    #[test]
    fn doublet_coefficients_identities() {
        let c = derive_couplings(ModelParams::new(0.4, 0.1).unwrap()).unwrap();
        for n in 0..4 {
            let d = eigenstate_descriptor(&c, n, Branch::Plus).unwrap();
            assert_relative_eq!(d.c_plus * d.c_plus + d.c_minus * d.c_minus, 1.0, epsilon = 1e-12);
            // C₊C₋ = |g′|√(n+1)/2E, consistency with the single-mode diagonalization
            let lhs = d.c_plus * d.c_minus;
            let rhs = c.g_prime * ((n as f64 + 1.0).sqrt()) / (2.0 * d.energy.abs());
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn branch_orthogonality_and_normalization() {
        let basis = FockBasis::new(16);
        for (xi, xit) in [(0.4, 0.1), (0.4, 1.6)] {
            let c = derive_couplings(ModelParams::new(xi, xit).unwrap()).unwrap();
            let plus = build_eigenstate(&c, 0, Branch::Plus, &basis).unwrap();
            let minus = build_eigenstate(&c, 0, Branch::Minus, &basis).unwrap();
            let overlap: C64 = plus
                .iter()
                .zip(minus.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!(overlap.norm() < 1e-10, "branches not orthogonal: {overlap}");
            let norm: f64 = plus.iter().map(|v| v.norm_sqr()).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn left_ground_approaches_bare_vacuum_without_field() {
        let basis = FockBasis::new(10);
        let c = derive_couplings(ModelParams::new(0.3, 1e-6).unwrap()).unwrap();
        let g = build_ground_state(&c, &basis).unwrap();
        let vac_up = basis.index(crate::fock::Spin::Up, 0, 0);
        assert!(g[vac_up].re > 1.0 - 1e-8);
    }

    #[test]
    fn eigenstate_rejects_unfit_cutoff() {
        let basis = FockBasis::new(3);
        // ratio 0.96 → large squeeze, cannot fit N = 3
        let c = derive_couplings(ModelParams::new(0.5, 0.48).unwrap()).unwrap();
        assert!(matches!(
            build_eigenstate(&c, 0, Branch::Plus, &basis),
            Err(Error::TruncationLeakage { .. })
        ));
    }
}
