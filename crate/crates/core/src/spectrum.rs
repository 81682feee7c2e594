//! Closed-form spectral quantities: doublet energies, ground energies, the
//! critical free-fermion dispersion, the energy gap and its scaling-exponent fit.

use crate::error::{Error, Result};
use crate::params::{DerivedCouplings, RegimeLabel};

/// Sign of a doublet level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Label of an analytic eigenstate within its regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    /// Lowest positive-energy state of the regime.
    Ground,
    /// Doublet member ±E_n with quantum number n ≥ 0 of the regime's mode.
    Doublet { branch: Branch, n: usize },
}

impl std::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateLabel::Ground => write!(f, "g"),
            StateLabel::Doublet { branch, n } => {
                let s = if *branch == Branch::Plus { '+' } else { '-' };
                write!(f, "{s}E{n}")
            }
        }
    }
}

/// Doublet energy ±√(1 + 2ζ(n+1)) in units of mc².
///
/// Defined in both chiral regimes (ζ is the regime's effective coupling);
/// refused at the critical point, where the spectrum is the free-fermion
/// continuum ([`critical_dispersion`]).
pub fn analytic_energy(c: &DerivedCouplings, n: usize, branch: Branch) -> Result<f64> {
    if c.regime == RegimeLabel::Critical {
        return Err(Error::CriticalPointSingularity(
            "doublet spectrum is undefined at the critical point; use critical_dispersion".into(),
        ));
    }
    Ok(branch.sign() * (1.0 + 2.0 * c.zeta * (n as f64 + 1.0)).sqrt())
}

/// Lowest positive energy of the regime: mc² in the left-handed phase
/// (flat manifold), √(1 + 2ζ_r)·mc² in the right-handed phase. Continuous
/// through the critical point, where both sides give mc².
pub fn ground_energy(c: &DerivedCouplings) -> f64 {
    match c.regime {
        RegimeLabel::RightHanded => (1.0 + 2.0 * c.zeta).sqrt(),
        _ => 1.0,
    }
}

/// Free-fermion dispersion at the critical point: ±√(1 + p²) for a 2D
/// momentum in natural units. Returns (positive, negative) branch energies.
pub fn critical_dispersion(px: f64, py: f64) -> (f64, f64) {
    let e = (1.0 + px * px + py * py).sqrt();
    (e, -e)
}

/// Energy of a labelled analytic state.
pub fn state_energy(c: &DerivedCouplings, label: StateLabel) -> Result<f64> {
    match label {
        StateLabel::Ground => Ok(ground_energy(c)),
        StateLabel::Doublet { branch, n } => analytic_energy(c, n, branch),
    }
}

/// Gap between the lowest positive excited level and the ground level of the
/// regime. Zero at the critical point.
pub fn energy_gap(c: &DerivedCouplings) -> f64 {
    match c.regime {
        RegimeLabel::Critical => 0.0,
        RegimeLabel::LeftHanded => (1.0 + 2.0 * c.zeta).sqrt() - 1.0,
        // Right regime: ground is the n=0 doublet, first excited the n=1 one.
        RegimeLabel::RightHanded => {
            (1.0 + 4.0 * c.zeta).sqrt() - (1.0 + 2.0 * c.zeta).sqrt()
        }
    }
}

/// The `count` distinct analytic levels of smallest |E|: the regime ground
/// energy plus doublet branches, sorted by (|E|, E).
pub fn analytic_levels(c: &DerivedCouplings, count: usize) -> Result<Vec<(StateLabel, f64)>> {
    let mut levels = vec![(StateLabel::Ground, ground_energy(c))];
    for n in 0..count {
        for branch in [Branch::Plus, Branch::Minus] {
            let e = analytic_energy(c, n, branch)?;
            // The right-regime ground *is* the +E_0 doublet; skip the duplicate.
            if c.regime == RegimeLabel::RightHanded && branch == Branch::Plus && n == 0 {
                continue;
            }
            levels.push((StateLabel::Doublet { branch, n }, e));
        }
    }
    levels.sort_by(|a, b| {
        (a.1.abs(), a.1)
            .partial_cmp(&(b.1.abs(), b.1))
            .expect("finite energies")
    });
    levels.truncate(count);
    Ok(levels)
}

/// Result of the gap-scaling fit.
#[derive(Debug, Clone)]
pub struct GapFit {
    /// Fitted exponent (log–log slope of gap vs |g_r/g_l − 1|).
    pub exponent: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// 95% confidence half-width (normal approximation).
    pub ci95: f64,
    /// RMS of the log–log fit residuals.
    pub residual_rms: f64,
    /// Per-point (abscissa, gap, residual) rows in grid order.
    pub points: Vec<(f64, f64, f64)>,
}

/// Side of the critical point a gap-fit grid lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Fit the gap-scaling exponent on a one-sided grid of ratios ξ̃/ξ near 1.
///
/// The abscissa is the coupling-ratio distance |g_r/g_l − 1| = |√(ξ̃/ξ) − 1|;
/// the fit is ordinary least squares in log–log space.
pub fn fit_gap_exponent(xi: f64, ratios: &[f64], side: Side) -> Result<GapFit> {
    if ratios.len() < 4 {
        return Err(Error::InsufficientGrid(format!(
            "gap fit needs at least 4 grid points, got {}",
            ratios.len()
        )));
    }
    let mut pts = Vec::with_capacity(ratios.len());
    for &ratio in ratios {
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(Error::InsufficientGrid(format!("bad ratio {ratio}")));
        }
        let on_side = match side {
            Side::Left => ratio < 1.0,
            Side::Right => ratio > 1.0,
        };
        if !on_side || (ratio - 1.0).abs() < crate::params::DEFAULT_CRITICAL_WINDOW {
            return Err(Error::MixedSides(format!(
                "ratio {ratio} is not strictly on the {side:?} side of the critical point"
            )));
        }
        let params = crate::params::ModelParams::new(xi, xi * ratio)?;
        let c = crate::params::derive_couplings(params)?;
        let u = (ratio.sqrt() - 1.0).abs();
        pts.push((u, energy_gap(&c)));
    }

    // Least squares on (ln u, ln gap).
    let n = pts.len() as f64;
    let lx: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let stderr = (ss_res / (n - 2.0) / sxx).sqrt();
    let residual_rms = (ss_res / n).sqrt();

    Ok(GapFit {
        exponent: slope,
        stderr,
        ci95: 1.96 * stderr,
        residual_rms,
        points: pts
            .iter()
            .zip(&residuals)
            .map(|(&(u, g), &r)| (u, g, r))
            .collect(),
    })
}
