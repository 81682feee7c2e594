//! Transition diagnostics in closed form — order parameter ⟨L_z⟩,
//! vacuum-normalized canonical fluctuations, chiral Mandel Q — each paired
//! with its numeric counterpart read off matched oracle eigenvectors.
//!
//! Conventions: the doublet weight η carries the branch/regime sign pattern
//! η = n + 3/2 ± mc²/2E (left regime, ±E branch) and the mirrored ∓ pattern
//! in the right regime; κ = (1 − m²c⁴/E²)/4 with E the state's own doublet
//! energy. In the right-handed regime all phonon quantities refer to the
//! magnetic-family (ω̃) modes, matching the frame in which the eigenstates
//! are squeezed Fock doublets.

use crate::error::{Error, Result};
use crate::fock::{expectation_orbital, number_operator, quadratures, ChiralMode};
use crate::oracle::{numeric_expectation, OracleRun};
use crate::params::{DerivedCouplings, RegimeLabel};
use crate::spectrum::{state_energy, Branch, StateLabel};

/// Provenance of a record: closed form or exact diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Analytic,
    Oracle,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Analytic => write!(f, "analytic"),
            Source::Oracle => write!(f, "oracle"),
        }
    }
}

/// One state's diagnostics at one parameter point. Mandel parameters are
/// `None` where the mode's mean occupation vanishes (Q undefined).
#[derive(Debug, Clone)]
pub struct ObservableRecord {
    pub ratio: f64,
    pub state: StateLabel,
    pub energy: f64,
    /// ⟨L_z⟩ in units of ħ.
    pub lz_mean: f64,
    /// Δx / Δx|vac of the regime's family vacuum.
    pub dx: f64,
    /// Δp / Δp|vac.
    pub dp: f64,
    pub q_r: Option<f64>,
    pub q_l: Option<f64>,
    pub source: Source,
}

fn require_doublet_regime(c: &DerivedCouplings) -> Result<()> {
    if c.regime == RegimeLabel::Critical {
        return Err(Error::CriticalPointSingularity(
            "doublet observables are undefined at the critical point".into(),
        ));
    }
    Ok(())
}

/// η for a doublet state: n + 3/2 ± mc²/2E in the left regime and the
/// mirrored n + 3/2 ∓ mc²/2E in the right regime.
pub fn eta(c: &DerivedCouplings, n: usize, branch: Branch) -> Result<f64> {
    require_doublet_regime(c)?;
    let e = crate::spectrum::analytic_energy(c, n, branch)?.abs();
    let sign = match (c.regime, branch) {
        (RegimeLabel::LeftHanded, Branch::Plus) => 1.0,
        (RegimeLabel::LeftHanded, Branch::Minus) => -1.0,
        (RegimeLabel::RightHanded, Branch::Plus) => -1.0,
        (RegimeLabel::RightHanded, Branch::Minus) => 1.0,
        (RegimeLabel::Critical, _) => unreachable!(),
    };
    Ok(n as f64 + 1.5 + sign * c.delta / (2.0 * e))
}

fn kappa(c: &DerivedCouplings, n: usize, branch: Branch) -> Result<f64> {
    let e = crate::spectrum::analytic_energy(c, n, branch)?.abs();
    Ok(0.25 * (1.0 - (c.delta * c.delta) / (e * e)))
}

/// Order parameter ⟨L_z⟩ (units of ħ): ≤ 0 on every left-regime eigenstate,
/// ≥ 0 on every right-regime one; the ground values are 0 (left) and
/// +C̃₀₋² (right).
pub fn order_parameter(c: &DerivedCouplings, label: StateLabel) -> Result<f64> {
    require_doublet_regime(c)?;
    match (label, c.regime) {
        (StateLabel::Ground, RegimeLabel::LeftHanded) => Ok(0.0),
        (StateLabel::Ground, RegimeLabel::RightHanded) => order_parameter(
            c,
            StateLabel::Doublet {
                branch: Branch::Plus,
                n: 0,
            },
        ),
        (StateLabel::Doublet { branch, n }, regime) => {
            let e = crate::spectrum::analytic_energy(c, n, branch)?.abs();
            let nn = n as f64;
            Ok(match (regime, branch) {
                (RegimeLabel::LeftHanded, Branch::Plus) => -(nn + (e + c.delta) / (2.0 * e)),
                (RegimeLabel::LeftHanded, Branch::Minus) => -(nn + (e - c.delta) / (2.0 * e)),
                (RegimeLabel::RightHanded, Branch::Plus) => nn + (e - c.delta) / (2.0 * e),
                (RegimeLabel::RightHanded, Branch::Minus) => nn + (e + c.delta) / (2.0 * e),
                (RegimeLabel::Critical, _) => unreachable!(),
            })
        }
        (_, RegimeLabel::Critical) => unreachable!(),
    }
}

/// Δx / Δx|vac = √η · e^{+θ} (doublets) and e^{+θ} (left ground).
pub fn position_fluctuation(c: &DerivedCouplings, label: StateLabel) -> Result<f64> {
    let theta = c.squeeze_angle()?;
    Ok(fluctuation_prefactor(c, label)?.sqrt() * theta.exp())
}

/// Δp / Δp|vac = √η · e^{−θ}.
pub fn momentum_fluctuation(c: &DerivedCouplings, label: StateLabel) -> Result<f64> {
    let theta = c.squeeze_angle()?;
    Ok(fluctuation_prefactor(c, label)?.sqrt() * (-theta).exp())
}

/// η of the state (1 for the left ground state, whose orbital part is the
/// squeezed vacuum). Equals the vacuum-normalized uncertainty product
/// Δx·Δp/(Δx|vac·Δp|vac), independent of the squeeze.
pub fn fluctuation_prefactor(c: &DerivedCouplings, label: StateLabel) -> Result<f64> {
    require_doublet_regime(c)?;
    match (label, c.regime) {
        (StateLabel::Ground, RegimeLabel::LeftHanded) => Ok(1.0),
        (StateLabel::Ground, RegimeLabel::RightHanded) => eta(c, 0, Branch::Plus),
        (StateLabel::Doublet { branch, n }, _) => eta(c, n, branch),
        (_, RegimeLabel::Critical) => unreachable!(),
    }
}

/// Chiral Mandel parameters (Q_r, Q_l) of the regime's own mode family.
#[derive(Debug, Clone, Copy)]
pub struct MandelQ {
    pub q_r: Option<f64>,
    pub q_l: Option<f64>,
}

/// Closed-form Mandel parameters. The pedestal-carrying mode has
/// ⟨n⟩ = η ch² − 1 and Δn² = η sh²ch² + κ ch⁴; the spectator mode has
/// ⟨n⟩ = η sh² and Δn² = η sh²ch² + κ sh⁴. Q = Δn²/⟨n⟩ − 1, `None` when the
/// mean occupation vanishes. The left ground state is thermal in both modes:
/// Q_r = Q_l = sinh²|θ|.
pub fn mandel_q(c: &DerivedCouplings, label: StateLabel) -> Result<MandelQ> {
    require_doublet_regime(c)?;
    let theta = c.squeeze_angle()?;
    let sh2 = theta.sinh().powi(2);
    let ch2 = theta.cosh().powi(2);
    match (label, c.regime) {
        (StateLabel::Ground, RegimeLabel::LeftHanded) => {
            let q = if sh2 > 0.0 { Some(sh2) } else { None };
            Ok(MandelQ { q_r: q, q_l: q })
        }
        (StateLabel::Ground, RegimeLabel::RightHanded) => mandel_q(
            c,
            StateLabel::Doublet {
                branch: Branch::Plus,
                n: 0,
            },
        ),
        (StateLabel::Doublet { branch, n }, regime) => {
            let eta = eta(c, n, branch)?;
            let kappa = kappa(c, n, branch)?;
            let cross = eta * sh2 * ch2;
            let spectator_mean = eta * sh2;
            let spectator_q = if spectator_mean > 0.0 {
                Some((cross + kappa * sh2 * sh2) / spectator_mean - 1.0)
            } else {
                None
            };
            let pedestal_mean = eta * ch2 - 1.0;
            let pedestal_q = if pedestal_mean > 0.0 {
                Some((cross + kappa * ch2 * ch2) / pedestal_mean - 1.0)
            } else {
                None
            };
            Ok(match regime {
                // left regime: pedestals ride the left mode
                RegimeLabel::LeftHanded => MandelQ {
                    q_r: spectator_q,
                    q_l: pedestal_q,
                },
                RegimeLabel::RightHanded => MandelQ {
                    q_r: pedestal_q,
                    q_l: spectator_q,
                },
                RegimeLabel::Critical => unreachable!(),
            })
        }
        (_, RegimeLabel::Critical) => unreachable!(),
    }
}

/// Assemble the full closed-form record for one state.
pub fn analytic_record(c: &DerivedCouplings, label: StateLabel) -> Result<ObservableRecord> {
    let q = mandel_q(c, label)?;
    Ok(ObservableRecord {
        ratio: c.params.ratio(),
        state: label,
        energy: state_energy(c, label)?,
        lz_mean: order_parameter(c, label)?,
        dx: position_fluctuation(c, label)?,
        dp: momentum_fluctuation(c, label)?,
        q_r: q.q_r,
        q_l: q.q_l,
        source: Source::Analytic,
    })
}

/// The same record measured on the matched exact-diagonalization eigenvector.
///
/// All operators are elementary in the run's family basis; fluctuations are
/// normalized by the family vacuum widths Δ_f/√2 and ħ/(√2 Δ_f).
pub fn oracle_record(run: &OracleRun, label: StateLabel) -> Result<ObservableRecord> {
    let matched = run.matched(label)?;
    let psi = matched.vector.view();
    let basis = &run.basis;
    let width = run.width();

    let lz = crate::fock::angular_momentum_lz(basis);
    let lz_mean = expectation_orbital(&lz, psi).re;

    let q = quadratures(basis, width);
    let x2 = q.x.matmul(&q.x);
    let px2 = q.px.matmul(&q.px);
    let x_mean = expectation_orbital(&q.x, psi).re;
    let px_mean = expectation_orbital(&q.px, psi).re;
    let var_x = expectation_orbital(&x2, psi).re - x_mean * x_mean;
    let var_p = expectation_orbital(&px2, psi).re - px_mean * px_mean;
    let dx = var_x.sqrt() / (width / 2.0f64.sqrt());
    let dp = var_p.sqrt() / (1.0 / (width * 2.0f64.sqrt()));

    let mandel_for = |mode: ChiralMode| -> Result<Option<f64>> {
        let n_op = number_operator(basis, mode);
        let n2 = n_op.matmul(&n_op);
        let mean = expectation_orbital(&n_op, psi).re;
        if mean < 1e-12 {
            return Ok(None);
        }
        let var = expectation_orbital(&n2, psi).re - mean * mean;
        Ok(Some(var / mean - 1.0))
    };

    // sanity-check normalization once through the guarded entry point
    let identity = crate::fock::OperatorMatrix::identity(basis.dim());
    numeric_expectation(psi, &identity)?;

    Ok(ObservableRecord {
        ratio: run.params.ratio(),
        state: label,
        energy: matched.energy,
        lz_mean,
        dx,
        dp,
        q_r: mandel_for(ChiralMode::Right)?,
        q_l: mandel_for(ChiralMode::Left)?,
        source: Source::Oracle,
    })
}
