//! Acceptance suite: one test per release criterion, each printing a
//! `criterion N: PASS` line with its measured numbers (run with
//! `cargo test -p chiral-qpt-core --test acceptance -- --nocapture` to see
//! them). Criterion 8 prints the measured resolutions of the formula
//! ambiguities that are documented in NOTES.md.
//!
//! Everything here is pinned: tolerances, grids, and cutoffs come from the
//! release contract, not from runtime calibration.

use std::sync::OnceLock;

use chiral_qpt_core::entanglement::{
    chiral_entropy_hyperbolic, chiral_entropy_thermal, oracle_partial_trace, reduced_density,
    spin_entropy_closed, spin_entropy_log_form, von_neumann_entropy, ReducedState, Subsystem,
};
use chiral_qpt_core::fock::{
    angular_momentum_lz, embed_orbital, kron_spin, squeeze_unitary, FockBasis, OperatorMatrix,
};
use chiral_qpt_core::observables::{analytic_record, oracle_record};
use chiral_qpt_core::oracle::{assemble_hamiltonian, converged_spectrum, CutoffPolicy, OracleRun};
use chiral_qpt_core::spectrum::{analytic_levels, fit_gap_exponent, Side};
use chiral_qpt_core::su11::{disentangled_squeeze, su11_generators};
use chiral_qpt_core::{derive_couplings, Branch, ModelParams, StateLabel};
use num_complex::Complex64 as C64;

const XI: f64 = 0.4;
const RATIOS: [f64; 4] = [0.25, 0.5, 2.0, 4.0];
const SPECTRUM_TOL: f64 = 1e-6;

struct RatioPoint {
    ratio: f64,
    report: chiral_qpt_core::ConvergenceReport,
    run: OracleRun,
}

/// Converged oracle sessions at the four contract ratios, built once and
/// shared across criteria.
fn oracle_points() -> &'static Vec<RatioPoint> {
    static CACHE: OnceLock<Vec<RatioPoint>> = OnceLock::new();
    CACHE.get_or_init(|| {
        RATIOS
            .iter()
            .map(|&ratio| {
                let params = ModelParams::new(XI, XI * ratio).unwrap();
                // start at N = 16: below that the n = 2 doublet family does
                // not fit the basis cleanly and the first comparison is wasted
                let policy = CutoffPolicy {
                    cutoffs: vec![16, 20, 30, 40],
                };
                let report = converged_spectrum(params, 6, SPECTRUM_TOL, &policy)
                    .expect("contract ratios must converge by N = 40");
                let run = OracleRun::new(params, report.cutoff).expect("oracle run");
                RatioPoint { ratio, report, run }
            })
            .collect()
    })
}

fn doublet(branch: Branch, n: usize) -> StateLabel {
    StateLabel::Doublet { branch, n }
}

#[test]
fn criterion_1_spectrum_oracle_equivalence() {
    let mut worst: f64 = 0.0;
    for point in oracle_points() {
        assert!(point.report.converged, "ratio {} unconverged", point.ratio);
        assert!(point.report.cutoff <= 40);
        let levels = analytic_levels(&point.run.couplings, 6).unwrap();
        for (label, energy) in levels {
            let (nearest, dist) = point.run.nearest_eigenvalue(energy);
            let rel = dist / energy.abs();
            assert!(
                rel < 1e-5,
                "ratio {}: level {label} = {energy} vs oracle {nearest} (rel {rel:.2e})",
                point.ratio
            );
            worst = worst.max(rel);
        }
    }
    println!(
        "criterion 1: PASS — 6 lowest-|E| analytic levels match converged ED at ratios {RATIOS:?}, worst rel err {worst:.2e} (tol 1e-5)"
    );
}

#[test]
fn criterion_2_gap_scaling_exponent() {
    // geometric grid |ratio − 1| in [1e-3, 1e-1], both sides
    let distances: Vec<f64> = (0..12)
        .map(|k| 1e-3 * (100.0f64).powf(k as f64 / 11.0))
        .collect();
    for side in [Side::Left, Side::Right] {
        let ratios: Vec<f64> = distances
            .iter()
            .map(|d| match side {
                Side::Left => 1.0 - d,
                Side::Right => 1.0 + d,
            })
            .collect();
        let fit = fit_gap_exponent(XI, &ratios, side).unwrap();
        assert!(
            (fit.exponent - 1.0).abs() < 0.05,
            "{side:?} exponent {} outside 1.000 ± 0.05",
            fit.exponent
        );
        println!(
            "criterion 2: PASS — {side:?} gap exponent {:.4} ± {:.4} (target 1.000 ± 0.05, log-log RMS {:.2e})",
            fit.exponent, fit.ci95, fit.residual_rms
        );
    }
}

#[test]
fn criterion_3_order_parameter() {
    // sign structure across both regimes (analytic, dense ratio grid)
    for &ratio in &[0.1, 0.25, 0.5, 0.8, 0.95, 1.05, 1.25, 2.0, 4.0, 10.0] {
        let c = derive_couplings(ModelParams::new(XI, XI * ratio).unwrap()).unwrap();
        for n in 0..4 {
            for branch in [Branch::Plus, Branch::Minus] {
                let lz =
                    chiral_qpt_core::observables::order_parameter(&c, doublet(branch, n)).unwrap();
                if ratio < 1.0 {
                    assert!(lz <= 0.0, "left regime sign violation at ratio {ratio}");
                } else {
                    assert!(lz >= 0.0, "right regime sign violation at ratio {ratio}");
                }
            }
        }
    }
    // oracle agreement at the converged points
    let mut worst: f64 = 0.0;
    for point in oracle_points() {
        for label in [
            StateLabel::Ground,
            doublet(Branch::Plus, 0),
            doublet(Branch::Minus, 0),
            doublet(Branch::Plus, 1),
        ] {
            let ana = analytic_record(&point.run.couplings, label).unwrap();
            let num = oracle_record(&point.run, label).unwrap();
            let diff = (ana.lz_mean - num.lz_mean).abs();
            assert!(
                diff < 1e-4,
                "ratio {} state {label}: ⟨L_z⟩ analytic {} vs oracle {}",
                point.ratio,
                ana.lz_mean,
                num.lz_mean
            );
            worst = worst.max(diff);
        }
    }
    println!(
        "criterion 3: PASS — order-parameter signs hold on both sides; analytic vs oracle ⟨L_z⟩ within {worst:.2e} ħ (tol 1e-4)"
    );
}

#[test]
fn criterion_4_canonical_fluctuations() {
    // analytic: Δx·Δp = η to 1e-10 on a wide grid
    for &ratio in &[0.1, 0.3, 0.6, 0.9, 1.1, 1.8, 3.0, 8.0] {
        let c = derive_couplings(ModelParams::new(XI, XI * ratio).unwrap()).unwrap();
        for n in 0..3 {
            for branch in [Branch::Plus, Branch::Minus] {
                let label = doublet(branch, n);
                let dx = chiral_qpt_core::observables::position_fluctuation(&c, label).unwrap();
                let dp = chiral_qpt_core::observables::momentum_fluctuation(&c, label).unwrap();
                let eta = chiral_qpt_core::observables::fluctuation_prefactor(&c, label).unwrap();
                assert!((dx * dp - eta).abs() < 1e-10 * eta);
            }
        }
    }
    // monotone approach to the critical point, |+E₀⟩ family (analytic)
    let grid: Vec<f64> = (1..=20).map(|k| 0.05 + 0.046 * k as f64).collect(); // 0.096..0.97
    let mut last_dx = 0.0;
    let mut last_dp = f64::INFINITY;
    for (i, &ratio) in grid.iter().enumerate() {
        let c = derive_couplings(ModelParams::new(XI, XI * ratio).unwrap()).unwrap();
        let label = doublet(Branch::Plus, 0);
        let dx = chiral_qpt_core::observables::position_fluctuation(&c, label).unwrap();
        let dp = chiral_qpt_core::observables::momentum_fluctuation(&c, label).unwrap();
        if i > 0 {
            assert!(dx > last_dx, "Δx must increase toward the critical point");
            assert!(dp < last_dp, "Δp must decrease toward the critical point");
        }
        last_dx = dx;
        last_dp = dp;
    }
    // mirrored on the right side (approach from above: ratio decreasing to 1)
    let mut last_dx = 0.0;
    let mut last_dp = f64::INFINITY;
    for (i, &ratio) in grid.iter().enumerate() {
        let c =
            derive_couplings(ModelParams::new(XI, XI / ratio).unwrap()).unwrap();
        let label = doublet(Branch::Plus, 0);
        let dx = chiral_qpt_core::observables::position_fluctuation(&c, label).unwrap();
        let dp = chiral_qpt_core::observables::momentum_fluctuation(&c, label).unwrap();
        if i > 0 {
            assert!(dx > last_dx, "Δx must increase toward the critical point (right)");
            assert!(dp < last_dp, "Δp must decrease toward the critical point (right)");
        }
        last_dx = dx;
        last_dp = dp;
    }
    // oracle: product and factors within 1e-4 at converged points
    let mut worst: f64 = 0.0;
    for point in oracle_points() {
        for label in [doublet(Branch::Plus, 0), doublet(Branch::Minus, 1)] {
            let ana = analytic_record(&point.run.couplings, label).unwrap();
            let num = oracle_record(&point.run, label).unwrap();
            let eta =
                chiral_qpt_core::observables::fluctuation_prefactor(&point.run.couplings, label)
                    .unwrap();
            for (a, b) in [(ana.dx, num.dx), (ana.dp, num.dp)] {
                assert!((a - b).abs() < 1e-4, "ratio {}: {a} vs {b}", point.ratio);
                worst = worst.max((a - b).abs());
            }
            assert!((num.dx * num.dp - eta).abs() < 1e-4);
        }
    }
    println!(
        "criterion 4: PASS — Δx·Δp = η± to 1e-10 analytic / 1e-4 oracle (worst factor diff {worst:.2e}); monotone divergence/squeezing toward ratio 1 on both sides"
    );
}

#[test]
fn criterion_5_mandel_statistics() {
    // oracle agreement at converged points
    let mut worst: f64 = 0.0;
    for point in oracle_points() {
        for label in [
            doublet(Branch::Plus, 0),
            doublet(Branch::Minus, 0),
            StateLabel::Ground,
        ] {
            let ana = analytic_record(&point.run.couplings, label).unwrap();
            let num = oracle_record(&point.run, label).unwrap();
            for (a, b) in [(ana.q_r, num.q_r), (ana.q_l, num.q_l)] {
                match (a, b) {
                    (Some(a), Some(b)) => {
                        assert!(
                            (a - b).abs() < 1e-4,
                            "ratio {} state {label}: Q analytic {a} vs oracle {b}",
                            point.ratio
                        );
                        worst = worst.max((a - b).abs());
                    }
                    (None, None) => {}
                    other => panic!("Q presence mismatch: {other:?}"),
                }
            }
        }
    }
    // exactly one sign flip per chiral Mandel parameter across the transition
    // for the first doublet family
    let grid = [0.25, 0.5, 0.8, 0.95, 1.0 / 0.95, 1.25, 2.5, 4.0];
    let mut q_l_signs = Vec::new();
    let mut q_r_signs = Vec::new();
    for &ratio in &grid {
        let c = derive_couplings(ModelParams::new(XI, XI * ratio).unwrap()).unwrap();
        let q = chiral_qpt_core::observables::mandel_q(&c, doublet(Branch::Plus, 0)).unwrap();
        q_l_signs.push(q.q_l.unwrap() > 0.0);
        q_r_signs.push(q.q_r.unwrap() > 0.0);
    }
    let flips = |signs: &[bool]| signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips(&q_l_signs), 1, "Q_l sign pattern {q_l_signs:?}");
    assert_eq!(flips(&q_r_signs), 1, "Q_r sign pattern {q_r_signs:?}");
    println!(
        "criterion 5: PASS — Q_r/Q_l match oracle variances within {worst:.2e} (tol 1e-4); each flips sign exactly once across ratio = 1 (Q_l {q_l_signs:?}, Q_r {q_r_signs:?})"
    );
}

#[test]
fn criterion_6_entanglement() {
    // left regime: S_l = S_r analytically to 1e-12, thermal-form equivalence
    for &ratio in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.97] {
        let c = derive_couplings(ModelParams::new(XI, XI * ratio).unwrap()).unwrap();
        let theta = c.squeeze_angle().unwrap();
        let s_l =
            von_neumann_entropy(&reduced_density(&c, Subsystem::LeftMode).unwrap()).unwrap();
        let s_r =
            von_neumann_entropy(&reduced_density(&c, Subsystem::RightMode).unwrap()).unwrap();
        assert!((s_l - s_r).abs() < 1e-12);
        assert!((chiral_entropy_thermal(theta) - chiral_entropy_hyperbolic(theta)).abs() < 1e-12);
        assert!((s_l - chiral_entropy_thermal(theta)).abs() < 1e-12 * (1.0 + s_l));
    }
    // oracle: left ground has no spin-orbit entanglement
    let left_point = &oracle_points()[0];
    let ground = left_point.run.matched(StateLabel::Ground).unwrap();
    let s_s_left = von_neumann_entropy(
        &oracle_partial_trace(ground.vector.view(), &left_point.run.basis, Subsystem::Spin)
            .unwrap(),
    )
    .unwrap();
    assert!(s_s_left < 1e-6, "left-regime oracle S_s = {s_s_left}");

    // right regime: Θ-weight normalization to 1e-10 and oracle-entropy match
    let mut worst: f64 = 0.0;
    for point in oracle_points().iter().filter(|p| p.ratio > 1.0) {
        let ground = point.run.matched(StateLabel::Ground).unwrap();
        for sub in [Subsystem::LeftMode, Subsystem::RightMode, Subsystem::Spin] {
            let analytic = reduced_density(&point.run.couplings, sub).unwrap();
            if let ReducedState::Diagonal { ref weights, .. } = analytic {
                let norm: f64 = weights.iter().sum();
                assert!((norm - 1.0).abs() < 1e-10, "Θ normalization: {norm}");
            }
            let s_ana = von_neumann_entropy(&analytic).unwrap();
            let s_num = von_neumann_entropy(
                &oracle_partial_trace(ground.vector.view(), &point.run.basis, sub).unwrap(),
            )
            .unwrap();
            let diff = (s_ana - s_num).abs();
            assert!(
                diff < 10.0 * SPECTRUM_TOL,
                "ratio {} {sub}: S analytic {s_ana} vs oracle {s_num}",
                point.ratio
            );
            worst = worst.max(diff);
        }
    }

    // spin entropy saturation: within 1% of ln 2 at ζ_r = 200
    let c = derive_couplings(ModelParams::new(XI, XI + 100.0).unwrap()).unwrap();
    assert!((c.zeta - 200.0).abs() < 1e-12);
    let s_s = spin_entropy_closed(&c).unwrap();
    assert!((s_s - 2.0f64.ln()).abs() / 2.0f64.ln() < 0.01);

    println!(
        "criterion 6: PASS — left S_l = S_r (1e-12) with S_s|oracle = {s_s_left:.2e} (< 1e-6); right Θ-weights normalized (1e-10), oracle entropies within {worst:.2e} (tol 1e-5); S_s(ζ_r=200) = {s_s:.5} vs ln 2 = {:.5}",
        2.0f64.ln()
    );
}

#[test]
fn criterion_7_operator_algebra() {
    // μ̃² − μ² = 1 over a parameter sweep
    for &ratio in &[0.05, 0.25, 0.5, 0.9, 1.1, 3.0, 20.0] {
        let c = derive_couplings(ModelParams::new(XI, XI * ratio).unwrap()).unwrap();
        assert!((c.mu_tilde * c.mu_tilde - c.mu * c.mu - 1.0).abs() < 1e-12);
    }

    let basis = FockBasis::new(30);
    let interior = |op: OperatorMatrix, margin: usize| {
        op.restrict_columns(|i| {
            let (nr, nl) = basis.occupations(i % basis.orbital_dim());
            nr <= 30 - margin && nl <= 30 - margin
        })
        .max_abs()
    };

    // su(1,1) commutators at N = 30 on interior states
    let (k0, kp, km) = su11_generators(&basis);
    assert!(interior(k0.commutator(&kp).sub(&kp), 2) < 1e-8);
    assert!(interior(k0.commutator(&km).add(&km), 2) < 1e-8);
    assert!(interior(km.commutator(&kp).sub(&k0.scale(C64::new(2.0, 0.0))), 2) < 1e-8);

    // disentangling identity at N = 30, θ = 0.3, inputs with occupations ≤ 4
    let theta = 0.3;
    let u = squeeze_unitary(&basis, theta, None).unwrap();
    let product = disentangled_squeeze(&basis, theta);
    let disentangle_resid = u
        .matrix
        .sub(&product)
        .restrict_columns(|i| {
            let (nr, nl) = basis.occupations(i);
            nr <= 4 && nl <= 4
        })
        .max_abs();
    assert!(disentangle_resid < 1e-8, "disentangling {disentangle_resid:.2e}");

    // squeeze unitary commutes with L_z on interior states
    let lz = angular_momentum_lz(&basis);
    let squeeze_lz = interior(u.matrix.commutator(&lz), 2);
    assert!(squeeze_lz < 1e-8, "[U, L_z] = {squeeze_lz:.2e}");

    // [H, J_z] on interior states at N = 30 in both regimes
    let mut worst_jz: f64 = 0.0;
    for (xi, xit) in [(XI, 0.1), (XI, 1.6)] {
        let p = ModelParams::new(xi, xit).unwrap();
        let h = assemble_hamiltonian(p, &basis).unwrap();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let half_sz = [[one * C64::new(0.5, 0.0), zero], [zero, -one * C64::new(0.5, 0.0)]];
        let jz = embed_orbital(&lz).add(&kron_spin(
            &half_sz,
            &OperatorMatrix::identity(basis.orbital_dim()),
        ));
        let comm = h.commutator(&jz).restrict_columns(|i| {
            let (nr, nl) = basis.occupations(i % basis.orbital_dim());
            nr <= 28 && nl <= 28
        });
        worst_jz = worst_jz.max(comm.max_abs());
    }
    assert!(worst_jz < 1e-10, "[H, J_z] = {worst_jz:.2e}");

    println!(
        "criterion 7: PASS — Bogoliubov identity exact; su(1,1) commutators < 1e-8, disentangling residual {disentangle_resid:.2e} (< 1e-8), [U, L_z] = {squeeze_lz:.2e} (< 1e-8), [H, J_z] = {worst_jz:.2e} (< 1e-10), all at N = 30"
    );
}

#[test]
fn criterion_8_ambiguity_adjudication() {
    // (a) weak-field coupling factor: exact-solution limit (1 + 4ξ(n+1)) vs
    //     the 1 + 2ξ(n+1) variant
    let p = ModelParams::new(0.25, 0.0).unwrap();
    let basis = FockBasis::new(16);
    let h = assemble_hamiltonian(p, &basis).unwrap();
    let evals = chiral_qpt_core::oracle::eigenvalues_only(&h).unwrap();
    let first_excited = evals
        .iter()
        .copied()
        .filter(|e| *e > 1.0 + 1e-8)
        .fold(f64::INFINITY, f64::min);
    let strong = 2.0f64.sqrt(); // √(1 + 4·0.25)
    let weak = 1.5f64.sqrt(); // √(1 + 2·0.25)
    assert!((first_excited - strong).abs() < 1e-6);
    assert!((first_excited - weak).abs() > 0.1);
    println!(
        "criterion 8a: zero-field first excited level = {first_excited:.9}; matches √(1+4ξ) = {strong:.9}, rules out √(1+2ξ) = {weak:.9} (coupling factor adjudicated)"
    );

    // (b) the energy entering κ is the state's own doublet energy
    let point = &oracle_points()[0]; // ratio 0.25
    let c = &point.run.couplings;
    let run = &point.run;
    let label = doublet(Branch::Plus, 0);
    let matched = run.matched(label).unwrap();
    let n_l = chiral_qpt_core::fock::number_operator(&run.basis, chiral_qpt_core::ChiralMode::Left);
    let var_num =
        chiral_qpt_core::oracle::numeric_variance(matched.vector.view(), &embed_orbital(&n_l))
            .unwrap();
    let theta = c.squeeze_angle().unwrap();
    let (sh2, ch2) = (theta.sinh().powi(2), theta.cosh().powi(2));
    let eta = chiral_qpt_core::observables::eta(c, 0, Branch::Plus).unwrap();
    let e0 = chiral_qpt_core::spectrum::analytic_energy(c, 0, Branch::Plus).unwrap();
    let e1 = chiral_qpt_core::spectrum::analytic_energy(c, 1, Branch::Plus).unwrap();
    let kappa_own = 0.25 * (1.0 - 1.0 / (e0 * e0));
    let kappa_next = 0.25 * (1.0 - 1.0 / (e1 * e1));
    let var_own = eta * sh2 * ch2 + kappa_own * ch2 * ch2;
    let var_next = eta * sh2 * ch2 + kappa_next * ch2 * ch2;
    assert!((var_num - var_own).abs() < 1e-6);
    assert!((var_num - var_next).abs() > 1e-3);
    println!(
        "criterion 8b: oracle Δn_l² = {var_num:.9} matches κ(E_n) form {var_own:.9}, rules out κ(E_n+1) form {var_next:.9}"
    );

    // (c) spin-entropy closed form: binary entropy of γ± (denominator 1+2ζ_r)
    //     vs the printed 1+ζ_r variant
    let pc = ModelParams::new(XI, XI + 2.0).unwrap(); // ζ_r = 4
    let cc = derive_couplings(pc).unwrap();
    let rc = OracleRun::new(pc, 14).unwrap();
    let g = rc.matched(StateLabel::Ground).unwrap();
    let s_num = von_neumann_entropy(
        &oracle_partial_trace(g.vector.view(), &rc.basis, Subsystem::Spin).unwrap(),
    )
    .unwrap();
    let s_binary = spin_entropy_closed(&cc).unwrap();
    let s_logform = spin_entropy_log_form(cc.zeta);
    let s_printed_variant = {
        let s = (1.0 + 2.0 * cc.zeta).sqrt();
        -0.5 * ((cc.zeta / (2.0 * (1.0 + cc.zeta))).ln()
            + (1.0 / s) * ((s + 1.0) / (s - 1.0)).ln())
    };
    assert!((s_num - s_binary).abs() < 1e-6);
    assert!((s_binary - s_logform).abs() < 1e-12);
    assert!((s_num - s_printed_variant).abs() > 0.1);
    println!(
        "criterion 8c: oracle S_s(ζ_r=4) = {s_num:.9} matches binary-entropy/2(1+2ζ) form {s_binary:.9}, rules out 2(1+ζ) variant {s_printed_variant:.9}"
    );

    // (d) the squeeze angle of the eigenstates is arctanh(ξ̃/(2ξ−ξ̃)), not the
    //     λ-weighted arctanh variant
    let ground = point.run.matched(StateLabel::Ground).unwrap();
    let n_r =
        chiral_qpt_core::fock::number_operator(&point.run.basis, chiral_qpt_core::ChiralMode::Right);
    let n_r_mean = chiral_qpt_core::fock::expectation_orbital(&n_r, ground.vector.view());
    let theta_true = c.squeeze_angle().unwrap();
    // the λ-weighted variant: (1/λ)·arctanh(λ√ω̃/(√ω − μ√ω̃)), squeeze |z| = αμ̃/2
    let lam = c.lambda;
    let alpha_variant =
        (1.0 / lam) * ((lam * (XI * 0.25).sqrt() / (XI.sqrt() - c.mu * (XI * 0.25).sqrt())).atanh());
    let z_variant = alpha_variant * c.mu_tilde / 2.0;
    let predicted_true = theta_true.sinh().powi(2);
    let predicted_variant = z_variant.sinh().powi(2);
    assert!((n_r_mean.re - predicted_true).abs() < 1e-8);
    assert!((n_r_mean.re - predicted_variant).abs() > 1e-2);
    println!(
        "criterion 8d: oracle ground ⟨n_r⟩ = {:.9} matches sinh²θ = {predicted_true:.9} with θ = arctanh(ξ̃/(2ξ−ξ̃)) = {theta_true:.9}, rules out the λ-weighted angle (predicts {predicted_variant:.9})",
        n_r_mean.re
    );

    // the measured resolutions are documented in NOTES.md
    let notes = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../NOTES.md"))
        .expect("NOTES.md must document the adjudications");
    for token in ["1 + 4ξ", "κ", "1 + 2ζ_r", "arctanh(ξ̃/(2ξ − ξ̃))"] {
        assert!(
            notes.contains(token),
            "NOTES.md is missing the documented resolution for {token}"
        );
    }
    println!("criterion 8: PASS — all four ambiguities adjudicated by the oracle and documented in NOTES.md");
}
