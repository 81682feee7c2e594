//! Model parameters, regime classification, and the derived coupling constants
//! of the exact solution.
//!
//! Natural units are used throughout: energies in units of mc², action in ħ,
//! lengths in the oscillator ground-state width Δ = √(ħ/mω). The two
//! dimensionless couplings are ξ = ħω/mc² (oscillator) and ξ̃ = ħω̃/mc² with
//! ω̃ = ω_c/2 half the cyclotron frequency. In these units ω ≡ ξ and ω̃ ≡ ξ̃
//! numerically, and Δ = 1/√ξ, Δ̃ = 1/√ξ̃.

use crate::error::{Error, Result};

/// Default half-width of the critical window: points with |ξ̃/ξ − 1| below
/// this are classified [`RegimeLabel::Critical`].
pub const DEFAULT_CRITICAL_WINDOW: f64 = 1e-12;

/// Which oscillator-frequency family an operator or width belongs to.
///
/// `Oscillator` is the ω family (width Δ = 1/√ξ), `Magnetic` the ω̃ family
/// (width Δ̃ = 1/√ξ̃). Fock bases, ladder operators and quadratures always
/// refer to one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Oscillator,
    Magnetic,
}

/// Chiral phase of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// ξ̃ < ξ: the oscillator coupling dominates, ⟨L_z⟩ ≤ 0.
    LeftHanded,
    /// |ξ̃/ξ − 1| within the critical window: free-fermion critical theory.
    Critical,
    /// ξ̃ > ξ: the magnetic coupling dominates, ⟨L_z⟩ ≥ 0.
    RightHanded,
}

/// The two dimensionless couplings. Single source of physical configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// ξ = ħω/mc² > 0.
    pub xi: f64,
    /// ξ̃ = ħω̃/mc² ≥ 0, ω̃ = ω_c/2.
    pub xi_tilde: f64,
}

impl ModelParams {
    pub fn new(xi: f64, xi_tilde: f64) -> Result<Self> {
        if !xi.is_finite() || xi <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "xi must be finite and > 0, got {xi}"
            )));
        }
        if !xi_tilde.is_finite() || xi_tilde < 0.0 {
            return Err(Error::InvalidParams(format!(
                "xi_tilde must be finite and >= 0, got {xi_tilde}"
            )));
        }
        Ok(Self { xi, xi_tilde })
    }

    /// Coupling ratio ξ̃/ξ, the control parameter of the transition.
    pub fn ratio(&self) -> f64 {
        self.xi_tilde / self.xi
    }

    /// Regime classification with the default critical window.
    pub fn regime(&self) -> RegimeLabel {
        self.regime_with(DEFAULT_CRITICAL_WINDOW)
    }

    /// Regime classification with an explicit window ε: critical iff |ξ̃/ξ − 1| < ε.
    pub fn regime_with(&self, eps_critical: f64) -> RegimeLabel {
        let r = self.ratio();
        if (r - 1.0).abs() < eps_critical {
            RegimeLabel::Critical
        } else if r < 1.0 {
            RegimeLabel::LeftHanded
        } else {
            RegimeLabel::RightHanded
        }
    }

    /// Ground-state width of the requested family: Δ = 1/√ξ or Δ̃ = 1/√ξ̃.
    /// Infinite for the magnetic family at ξ̃ = 0.
    pub fn width(&self, family: Family) -> f64 {
        match family {
            Family::Oscillator => 1.0 / self.xi.sqrt(),
            Family::Magnetic => 1.0 / self.xi_tilde.sqrt(),
        }
    }

    /// The frequency (≡ coupling, in natural units) of the requested family.
    pub fn frequency(&self, family: Family) -> f64 {
        match family {
            Family::Oscillator => self.xi,
            Family::Magnetic => self.xi_tilde,
        }
    }

    /// The family in which the regime's exact solution is naturally expressed:
    /// ω for the left-handed regime (and at criticality, where both coincide),
    /// ω̃ for the right-handed regime.
    pub fn natural_family(&self) -> Family {
        match self.regime() {
            RegimeLabel::RightHanded => Family::Magnetic,
            _ => Family::Oscillator,
        }
    }
}

/// Every secondary constant of the exact solution, computed once from [`ModelParams`].
///
/// `mu` and `mu_tilde` are the Bogoliubov coefficients linking the two ladder
/// families (ã = μ̃ a + μ a†, mode-swapped for chiral operators); they diverge
/// (±∞) at ξ̃ = 0 where the magnetic family degenerates, while every quantity
/// actually used downstream (ζ, squeeze angle, energies) stays finite.
///
/// The stored `squeeze` is the signed angle θ such that the exact eigenstates
/// are U(θ)·(bare doublet) with U(θ) = exp(θ(K₊ − K₋)); θ ≥ 0 in both regimes.
/// The opposite-sign convention z = −αμ̃/2 = −θ is available via
/// [`DerivedCouplings::squeeze_z`].
#[derive(Debug, Clone, Copy)]
pub struct DerivedCouplings {
    pub params: ModelParams,
    pub regime: RegimeLabel,
    /// Width ratio Δ/Δ̃ = √(ξ̃/ξ).
    pub width_ratio: f64,
    /// μ = (Δ/Δ̃ − Δ̃/Δ)/2. Negative in the left regime; −∞ at ξ̃ = 0.
    pub mu: f64,
    /// λ = √(μ² + 1). Identical to μ̃ through the identity μ̃² − μ² = 1.
    pub lambda: f64,
    /// μ̃ = (Δ/Δ̃ + Δ̃/Δ)/2 ≥ 1; +∞ at ξ̃ = 0.
    pub mu_tilde: f64,
    /// Effective single-mode coupling of the regime: ζ = 2|ξ − ξ̃|
    /// (the definitional form ξ − ξ̃ − 2μ√(ξ̃ξ) reduces to this; see
    /// [`DerivedCouplings::zeta_definitional`]).
    pub zeta: f64,
    /// Signed squeeze angle θ of the eigenstate family; `None` at criticality
    /// where the transformation diverges.
    pub squeeze: Option<f64>,
    /// Transformation angle α, fixed by αμ̃/2 = θ so the canonical-fluctuation
    /// scale factors read e^{±αμ̃/2}; `None` at criticality.
    pub alpha: Option<f64>,
    /// Bare coupling magnitude |g_l| = mc²√(2ξ).
    pub g_l: f64,
    /// Bare coupling magnitude |g_r| = mc²√(2ξ̃).
    pub g_r: f64,
    /// Effective coupling magnitude |g′| = mc²√(2ζ) of the regime's single mode.
    pub g_prime: f64,
    /// Detuning δ = mc² ≡ 1.
    pub delta: f64,
}

impl DerivedCouplings {
    /// Squeeze angle, or a critical-point error when inside the window.
    pub fn squeeze_angle(&self) -> Result<f64> {
        self.squeeze.ok_or_else(|| {
            Error::CriticalPointSingularity(
                "squeeze angle is undefined at the critical point".into(),
            )
        })
    }

    /// The opposite-sign squeeze convention z = −αμ̃/2 = −θ.
    pub fn squeeze_z(&self) -> Result<f64> {
        Ok(-self.squeeze_angle()?)
    }

    /// Transformation angle, or a critical-point error.
    pub fn transformation_angle(&self) -> Result<f64> {
        self.alpha.ok_or_else(|| {
            Error::CriticalPointSingularity(
                "transformation angle is undefined at the critical point".into(),
            )
        })
    }

    /// ζ from its defining expression (ξ − ξ̃ − 2μ√(ξ̃ξ) in the left regime,
    /// mirrored on the right). `None` at ξ̃ = 0 where μ diverges and the
    /// expression becomes ∞·0; the simplified `zeta` field is exact there.
    pub fn zeta_definitional(&self) -> Option<f64> {
        let ModelParams { xi, xi_tilde } = self.params;
        if xi_tilde == 0.0 {
            return None;
        }
        let cross = 2.0 * self.mu * (xi_tilde * xi).sqrt();
        Some(match self.regime {
            RegimeLabel::RightHanded => xi_tilde - xi + cross,
            _ => xi - xi_tilde - cross,
        })
    }
}

/// Compute every derived coupling with the default critical window.
pub fn derive_couplings(params: ModelParams) -> Result<DerivedCouplings> {
    derive_couplings_with(params, DEFAULT_CRITICAL_WINDOW)
}

/// Compute every derived coupling, classifying criticality with window `eps_critical`.
///
/// Succeeds at the critical point with `squeeze`/`alpha` set to `None`;
/// accessors raise [`Error::CriticalPointSingularity`] there.
pub fn derive_couplings_with(params: ModelParams, eps_critical: f64) -> Result<DerivedCouplings> {
    // Re-validate so a hand-constructed ModelParams cannot smuggle bad values in.
    let params = ModelParams::new(params.xi, params.xi_tilde)?;
    let ModelParams { xi, xi_tilde } = params;
    let regime = params.regime_with(eps_critical);
    let ratio = params.ratio();

    let width_ratio = ratio.sqrt();
    let mu = 0.5 * (width_ratio - 1.0 / width_ratio);
    let mu_tilde = 0.5 * (width_ratio + 1.0 / width_ratio);
    let lambda = if mu.is_finite() {
        (mu * mu + 1.0).sqrt()
    } else {
        f64::INFINITY
    };

    let zeta = 2.0 * (xi - xi_tilde).abs();

    let squeeze = match regime {
        RegimeLabel::Critical => None,
        RegimeLabel::LeftHanded => Some(squeeze_arg(xi_tilde, xi)?),
        RegimeLabel::RightHanded => Some(squeeze_arg(xi, xi_tilde)?),
    };
    // αμ̃/2 = θ; at ξ̃ = 0 this is 0/∞ = 0, matching the no-squeeze limit.
    let alpha = squeeze.map(|theta| 2.0 * theta / mu_tilde);

    Ok(DerivedCouplings {
        params,
        regime,
        width_ratio,
        mu,
        lambda,
        mu_tilde,
        zeta,
        squeeze,
        alpha,
        g_l: (2.0 * xi).sqrt(),
        g_r: (2.0 * xi_tilde).sqrt(),
        g_prime: (2.0 * zeta).sqrt(),
        delta: 1.0,
    })
}

/// θ = arctanh(weak/(2·strong − weak)) for the regime where `strong` dominates.
fn squeeze_arg(weak: f64, strong: f64) -> Result<f64> {
    let arg = weak / (2.0 * strong - weak);
    if !(0.0..1.0).contains(&arg) {
        // Only reachable through floating error inside a too-small critical window.
        return Err(Error::CriticalPointSingularity(format!(
            "arctanh argument {arg} outside [0, 1)"
        )));
    }
    Ok(arg.atanh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 0.1).is_err());
        assert!(ModelParams::new(-0.2, 0.1).is_err());
        assert!(ModelParams::new(0.5, -0.1).is_err());
        assert!(ModelParams::new(f64::NAN, 0.1).is_err());
        assert!(ModelParams::new(0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn symmetric_point_is_trivial() {
        // Equal widths: no Bogoliubov mixing, but the point is critical so the
        // doublet machinery is refused.
        let c = derive_couplings(ModelParams::new(0.5, 0.5).unwrap()).unwrap();
        assert_eq!(c.regime, RegimeLabel::Critical);
        assert_relative_eq!(c.mu, 0.0);
        assert_relative_eq!(c.mu_tilde, 1.0);
        assert_relative_eq!(c.zeta, 0.0);
        assert!(c.squeeze_angle().is_err());
    }

    #[test]
    fn left_regime_reference_point() {
        // ξ = 0.5, ξ̃ = 0.125: width ratio 1/2.
        let c = derive_couplings(ModelParams::new(0.5, 0.125).unwrap()).unwrap();
        assert_eq!(c.regime, RegimeLabel::LeftHanded);
        assert_relative_eq!(c.width_ratio, 0.5);
        assert_relative_eq!(c.mu, -0.75);
        assert_relative_eq!(c.lambda, 1.25);
        assert_relative_eq!(c.mu_tilde, 1.25);
        assert_relative_eq!(c.zeta, 0.75);
        assert_relative_eq!(c.zeta_definitional().unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn right_regime_reference_point() {
        let c = derive_couplings(ModelParams::new(0.25, 1.0).unwrap()).unwrap();
        assert_eq!(c.regime, RegimeLabel::RightHanded);
        assert_relative_eq!(c.zeta, 1.5);
        assert_relative_eq!(c.zeta_definitional().unwrap(), 1.5, epsilon = 1e-12);
        assert_relative_eq!(
            c.mu_tilde * c.mu_tilde - c.mu * c.mu,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn zero_field_limit_has_no_squeeze() {
        let c = derive_couplings(ModelParams::new(0.25, 0.0).unwrap()).unwrap();
        assert_eq!(c.regime, RegimeLabel::LeftHanded);
        assert_eq!(c.squeeze_angle().unwrap(), 0.0);
        assert_eq!(c.alpha.unwrap(), 0.0);
        assert!(c.mu.is_infinite() && c.mu < 0.0);
        assert!(c.mu_tilde.is_infinite());
        assert_relative_eq!(c.zeta, 0.5);
        assert!(c.zeta_definitional().is_none());
    }

    #[test]
    fn squeeze_angle_reference_values() {
        // Left: θ = arctanh(ξ̃/(2ξ−ξ̃)); at ratio 1/4 this is arctanh(1/7).
        let c = derive_couplings(ModelParams::new(0.4, 0.1).unwrap()).unwrap();
        assert_relative_eq!(
            c.squeeze_angle().unwrap(),
            (1.0f64 / 7.0).atanh(),
            epsilon = 1e-15
        );
        assert_relative_eq!(c.squeeze_z().unwrap(), -(1.0f64 / 7.0).atanh());
        // alpha is tied to the squeeze through αμ̃/2 = θ.
        assert_relative_eq!(
            c.alpha.unwrap() * c.mu_tilde / 2.0,
            c.squeeze_angle().unwrap(),
            epsilon = 1e-15
        );
        // Mirror point in the right regime has the same angle.
        let m = derive_couplings(ModelParams::new(0.4, 1.6).unwrap()).unwrap();
        assert_relative_eq!(
            m.squeeze_angle().unwrap(),
            (1.0f64 / 7.0).atanh(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn critical_window_is_configurable() {
        let p = ModelParams::new(0.4, 0.4 * (1.0 + 1e-8)).unwrap();
        assert_eq!(p.regime(), RegimeLabel::RightHanded);
        assert_eq!(p.regime_with(1e-6), RegimeLabel::Critical);
        assert!(derive_couplings_with(p, 1e-6).unwrap().squeeze.is_none());
    }
}
