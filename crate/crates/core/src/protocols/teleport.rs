//! Teleportation of a logical qubit with the partial Bell analyzer.
//!
//! The sender holds the state to teleport (qubit 3) and one half of a
//! shared `Φ⁺_L` pair (qubit 1); the receiver holds qubit 2. The sender
//! runs the beam-splitter Bell measurement on photons (3, 1); Ψ⁺ and Ψ⁻
//! results are conclusive and the receiver repairs his qubit with σ̂x or
//! σ̂z·σ̂x. In `Unambiguous` mode everything else is discarded (efficiency
//! 1/2, fidelity exactly 1). In `CoincidenceBasis` mode Φ-ambiguous
//! coincidences are also kept, with no correction (efficiency 3/4).
//!
//! The Φ-ambiguous branch is simulated event-by-event. Because the
//! beam splitter never mixes internal modes, the `|0_L 0_L⟩` and
//! `|1_L 1_L⟩` components of the measured pair occupy disjoint detector
//! sectors ({Hv, Vh} vs {Hh, Vv}), so every kept coincidence reveals which
//! sector fired and leaves the receiver's qubit in exactly `|0_L⟩` or
//! `|1_L⟩`. The branch therefore teleports the logical-Z statistics only:
//! its conditional fidelity is `|α|⁴ + |β|⁴` (2/3 on Haar average), and the
//! Haar-averaged fidelity of the kept ensemble is 8/9. The reports carry
//! both the sampled estimates and this analytic branch decomposition.

use num_complex::Complex64;
use serde::Serialize;

use crate::bsm::BellClass;
use crate::elements::port_rotation;
use crate::error::{Error, Result};
use crate::fock::{basis, combine, lift_unitary, ModeUnitary, Port, PureState};
use crate::logical::{encode, logical_pauli, project_dfs, LogicalQubit, PauliAxis};
use crate::protocols::report::{MonteCarloStat, SCHEMA_VERSION};
use crate::protocols::{haar_random_logical, sample_index, trial_rng};

/// Which Bell-measurement results count as a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportMode {
    /// Keep only the perfectly discriminated Ψ± results.
    Unambiguous,
    /// Keep every coincidence, including the ambiguous Φ events.
    CoincidenceBasis,
}

/// Source of the state to teleport.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TeleportInput {
    HaarRandom,
    Fixed { alpha: Complex64, beta: Complex64 },
}

impl TeleportInput {
    fn validate(&self) -> Result<()> {
        if let TeleportInput::Fixed { alpha, beta } = self {
            let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "input", rename_all = "snake_case")]
pub enum TeleportInputConfig {
    HaarRandom,
    Fixed { alpha: [f64; 2], beta: [f64; 2] },
}

impl From<TeleportInput> for TeleportInputConfig {
    fn from(input: TeleportInput) -> Self {
        match input {
            TeleportInput::HaarRandom => TeleportInputConfig::HaarRandom,
            TeleportInput::Fixed { alpha, beta } => TeleportInputConfig::Fixed {
                alpha: [alpha.re, alpha.im],
                beta: [beta.re, beta.im],
            },
        }
    }
}

/// Precomputed machinery shared by every trial: the beam-splitter-evolved
/// basis combinations and the receiver-side gates.
struct TeleportEngine {
    /// `evolved[i][j]`: photon 3 in logical level `i` at analyzer port 1,
    /// photon 1 in level `j` at port 2, after the beam splitter.
    evolved: [[PureState; 2]; 2],
    correction_x: ModeUnitary,
    correction_zx: ModeUnitary,
    receiver_rotation: ModeUnitary,
    classes: Vec<BellClass>,
}

impl TeleportEngine {
    fn new(theta: f64) -> TeleportEngine {
        let level = |bit: u8, port: Port| {
            encode(&if bit == 0 {
                LogicalQubit::zero(port)
            } else {
                LogicalQubit::one(port)
            })
        };
        let evolve = |i: u8, j: u8| {
            crate::bsm::evolve_through_bs(
                &combine(&level(i, Port::P1), &level(j, Port::P2)).unwrap(),
            )
            .unwrap()
        };
        let b2 = basis(2).expect("basis exists");
        let cls = crate::bsm::classifier();
        let classes = (0..b2.len())
            .map(|k| cls.classify(&crate::bsm::DetectionEvent::from_state(b2.state(k)).unwrap()))
            .collect();
        TeleportEngine {
            evolved: [[evolve(0, 0), evolve(0, 1)], [evolve(1, 0), evolve(1, 1)]],
            correction_x: logical_pauli(PauliAxis::X).embed_at(Port::P2).unwrap(),
            correction_zx: logical_pauli(PauliAxis::Z)
                .compose(&logical_pauli(PauliAxis::X))
                .unwrap()
                .embed_at(Port::P2)
                .unwrap(),
            receiver_rotation: port_rotation(theta, Port::P2),
            classes,
        }
    }

    /// Detection-event amplitudes of the sender's pair, split by the
    /// receiver's correlated logical level: `amps[j][event]` multiplies the
    /// receiver ket `|j_L⟩/√2`.
    fn branch_amplitudes(&self, alpha: Complex64, beta: Complex64) -> [Vec<Complex64>; 2] {
        let n = self.evolved[0][0].amplitudes().len();
        let mut out = [vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n]];
        for (j, amps) in out.iter_mut().enumerate() {
            let e0 = self.evolved[0][j].amplitudes();
            let e1 = self.evolved[1][j].amplitudes();
            for k in 0..n {
                amps[k] = alpha * e0[k] + beta * e1[k];
            }
        }
        out
    }

    /// The receiver's corrected, frame-rotated qubit for one detection
    /// event, with the trial's fidelity against the input.
    fn receiver_fidelity(
        &self,
        class: BellClass,
        b0: Complex64,
        b1: Complex64,
        alpha: Complex64,
        beta: Complex64,
    ) -> f64 {
        let norm = (b0.norm_sqr() + b1.norm_sqr()).sqrt();
        let qubit = LogicalQubit::new(b0 / norm, b1 / norm, Port::P2).unwrap();
        let mut photon = lift_unitary(&self.receiver_rotation, &encode(&qubit)).unwrap();
        photon = match class {
            BellClass::PsiPlus => lift_unitary(&self.correction_x, &photon).unwrap(),
            BellClass::PsiMinus => lift_unitary(&self.correction_zx, &photon).unwrap(),
            _ => photon,
        };
        let projection = project_dfs(&photon).unwrap();
        debug_assert!(projection.leakage < 1e-12);
        let target = LogicalQubit::new(alpha, beta, Port::P2).unwrap();
        projection.qubit.expect("no leakage").fidelity(&target)
    }
}

fn kept(mode: TeleportMode, class: BellClass) -> bool {
    match class {
        BellClass::PsiMinus | BellClass::PsiPlus => true,
        BellClass::PhiAmbiguous => mode == TeleportMode::CoincidenceBasis,
        BellClass::NoCoincidence => false,
    }
}

/// Exact per-input statistics, by enumerating all detection events.
struct ExactStats {
    efficiency: f64,
    mean_fidelity: f64,
    branch_probability: [f64; 3], // Ψ⁻, Ψ⁺, Φ-coincidence (kept classes)
    branch_fidelity: [f64; 3],
}

fn exact_stats(
    engine: &TeleportEngine,
    mode: TeleportMode,
    alpha: Complex64,
    beta: Complex64,
) -> ExactStats {
    let branches = engine.branch_amplitudes(alpha, beta);
    let mut efficiency = 0.0;
    let mut fid_weighted = 0.0;
    let mut branch_probability = [0.0f64; 3];
    let mut branch_fid_weighted = [0.0f64; 3];
    for (k, class) in engine.classes.iter().enumerate() {
        if !kept(mode, *class) {
            continue;
        }
        let (b0, b1) = (branches[0][k], branches[1][k]);
        let p = 0.5 * (b0.norm_sqr() + b1.norm_sqr());
        if p < 1e-18 {
            continue;
        }
        let fid = engine.receiver_fidelity(*class, b0, b1, alpha, beta);
        efficiency += p;
        fid_weighted += p * fid;
        let slot = match class {
            BellClass::PsiMinus => 0,
            BellClass::PsiPlus => 1,
            _ => 2,
        };
        branch_probability[slot] += p;
        branch_fid_weighted[slot] += p * fid;
    }
    let mut branch_fidelity = [0.0f64; 3];
    for i in 0..3 {
        if branch_probability[i] > 0.0 {
            branch_fidelity[i] = branch_fid_weighted[i] / branch_probability[i];
        }
    }
    ExactStats {
        efficiency,
        mean_fidelity: if efficiency > 0.0 { fid_weighted / efficiency } else { 0.0 },
        branch_probability,
        branch_fidelity,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportConfig {
    pub mode: TeleportMode,
    #[serde(flatten)]
    pub input: TeleportInputConfig,
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportBranch {
    pub probability: f64,
    pub conditional_fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportExact {
    pub efficiency: f64,
    /// Mean fidelity of kept runs; for Haar input this averages the exact
    /// per-state value over the Bloch sphere by quadrature.
    pub mean_fidelity: f64,
    pub psi_minus: TeleportBranch,
    pub psi_plus: TeleportBranch,
    pub phi_coincidence: Option<TeleportBranch>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportMonteCarlo {
    pub kept: u64,
    pub discarded: u64,
    pub efficiency: MonteCarloStat,
    pub mean_fidelity: MonteCarloStat,
    pub branch_counts: [u64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportReport {
    pub schema_version: u32,
    pub artifact_version: &'static str,
    pub protocol: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub config: TeleportConfig,
    pub exact: TeleportExact,
    pub monte_carlo: TeleportMonteCarlo,
}

/// Runs `trials` teleportations and assembles exact plus sampled
/// statistics. `theta` rotates the receiver's frame; the protected
/// encoding makes every reported quantity independent of it.
pub fn run_teleportation(
    mode: TeleportMode,
    trials: u64,
    seed: u64,
    input: TeleportInput,
    theta: f64,
) -> Result<TeleportReport> {
    input.validate()?;
    let engine = TeleportEngine::new(theta);

    // Exact section: direct enumeration for a fixed input, Bloch-sphere
    // quadrature of the per-state enumeration for Haar input.
    let exact = match input {
        TeleportInput::Fixed { alpha, beta } => exact_stats(&engine, mode, alpha, beta),
        TeleportInput::HaarRandom => haar_average(&engine, mode),
    };

    let mut kept_count = 0u64;
    let mut fid_sum = 0.0f64;
    let mut fid_sq_sum = 0.0f64;
    let mut branch_counts = [0u64; 3];
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let (alpha, beta) = match input {
            TeleportInput::Fixed { alpha, beta } => (alpha, beta),
            TeleportInput::HaarRandom => haar_random_logical(&mut rng),
        };
        let branches = engine.branch_amplitudes(alpha, beta);
        let probs: Vec<f64> = (0..branches[0].len())
            .map(|k| 0.5 * (branches[0][k].norm_sqr() + branches[1][k].norm_sqr()))
            .collect();
        let event = sample_index(&probs, &mut rng);
        let class = engine.classes[event];
        if !kept(mode, class) {
            continue;
        }
        kept_count += 1;
        branch_counts[match class {
            BellClass::PsiMinus => 0,
            BellClass::PsiPlus => 1,
            _ => 2,
        }] += 1;
        let fid = engine.receiver_fidelity(
            class,
            branches[0][event],
            branches[1][event],
            alpha,
            beta,
        );
        fid_sum += fid;
        fid_sq_sum += fid * fid;
    }

    Ok(TeleportReport {
        schema_version: SCHEMA_VERSION,
        artifact_version: crate::ARTIFACT_VERSION,
        protocol: "teleport",
        seed,
        trials,
        config: TeleportConfig { mode, input: input.into(), theta },
        exact: TeleportExact {
            efficiency: exact.efficiency,
            mean_fidelity: exact.mean_fidelity,
            psi_minus: TeleportBranch {
                probability: exact.branch_probability[0],
                conditional_fidelity: exact.branch_fidelity[0],
            },
            psi_plus: TeleportBranch {
                probability: exact.branch_probability[1],
                conditional_fidelity: exact.branch_fidelity[1],
            },
            phi_coincidence: if mode == TeleportMode::CoincidenceBasis {
                Some(TeleportBranch {
                    probability: exact.branch_probability[2],
                    conditional_fidelity: exact.branch_fidelity[2],
                })
            } else {
                None
            },
        },
        monte_carlo: TeleportMonteCarlo {
            kept: kept_count,
            discarded: trials - kept_count,
            efficiency: MonteCarloStat::rate(kept_count, trials),
            mean_fidelity: MonteCarloStat::mean(fid_sum, fid_sq_sum, kept_count.max(1)),
            branch_counts,
        },
    })
}

/// Bloch-sphere average of the exact per-state statistics: composite
/// Simpson over `u = |α|²` times a uniform relative-phase grid.
fn haar_average(engine: &TeleportEngine, mode: TeleportMode) -> ExactStats {
    let u_panels = 200usize; // Simpson needs an even panel count
    let phases = 4usize;
    let mut acc = ExactStats {
        efficiency: 0.0,
        mean_fidelity: 0.0,
        branch_probability: [0.0; 3],
        branch_fidelity: [0.0; 3],
    };
    let mut weight_total = 0.0;
    for iu in 0..=u_panels {
        let u = iu as f64 / u_panels as f64;
        let w = if iu == 0 || iu == u_panels {
            1.0
        } else if iu % 2 == 1 {
            4.0
        } else {
            2.0
        };
        for ip in 0..phases {
            let delta = ip as f64 * std::f64::consts::TAU / phases as f64;
            let alpha = Complex64::new(u.sqrt(), 0.0);
            let beta = Complex64::from_polar((1.0 - u).sqrt(), delta);
            let stats = exact_stats(engine, mode, alpha, beta);
            acc.efficiency += w * stats.efficiency;
            acc.mean_fidelity += w * stats.mean_fidelity;
            for i in 0..3 {
                acc.branch_probability[i] += w * stats.branch_probability[i];
                acc.branch_fidelity[i] += w * stats.branch_fidelity[i];
            }
            weight_total += w;
        }
    }
    acc.efficiency /= weight_total;
    acc.mean_fidelity /= weight_total;
    for i in 0..3 {
        acc.branch_probability[i] /= weight_total;
        acc.branch_fidelity[i] /= weight_total;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::cr;

    #[test]
    fn unambiguous_mode_is_perfect_at_half_rate() {
        let input = TeleportInput::Fixed {
            alpha: Complex64::new(0.6, 0.0),
            beta: Complex64::new(0.0, 0.8),
        };
        let report =
            run_teleportation(TeleportMode::Unambiguous, 4000, 3, input, 0.8).unwrap();
        assert!((report.exact.efficiency - 0.5).abs() < 1e-12);
        assert!((report.exact.mean_fidelity - 1.0).abs() < 1e-12);
        assert!((report.exact.psi_minus.conditional_fidelity - 1.0).abs() < 1e-12);
        assert!((report.exact.psi_plus.conditional_fidelity - 1.0).abs() < 1e-12);
        // Every kept sampled trial is exact.
        assert!((report.monte_carlo.mean_fidelity.estimate - 1.0).abs() < 1e-12);
        assert!(report.monte_carlo.efficiency.agrees_with(0.5, 4.0));
    }

    #[test]
    fn coincidence_mode_keeps_three_quarters() {
        let report = run_teleportation(
            TeleportMode::CoincidenceBasis,
            4000,
            5,
            TeleportInput::HaarRandom,
            0.0,
        )
        .unwrap();
        assert!((report.exact.efficiency - 0.75).abs() < 1e-12);
        assert!(report.monte_carlo.efficiency.agrees_with(0.75, 4.0));
        // Ψ branches stay perfect; the Φ branch teleports only the
        // logical-Z statistics, averaging |α|⁴+|β|⁴ = 2/3 over the sphere.
        assert!((report.exact.psi_minus.conditional_fidelity - 1.0).abs() < 1e-12);
        assert!((report.exact.psi_plus.conditional_fidelity - 1.0).abs() < 1e-12);
        let phi = report.exact.phi_coincidence.unwrap();
        assert!((phi.conditional_fidelity - 2.0 / 3.0).abs() < 1e-6);
        assert!((report.exact.mean_fidelity - 8.0 / 9.0).abs() < 1e-6);
    }

    #[test]
    fn sampled_fidelity_matches_the_exact_decomposition() {
        let report = run_teleportation(
            TeleportMode::CoincidenceBasis,
            30_000,
            11,
            TeleportInput::HaarRandom,
            1.9,
        )
        .unwrap();
        assert!(report
            .monte_carlo
            .mean_fidelity
            .agrees_with(report.exact.mean_fidelity, 4.0));
    }

    #[test]
    fn basis_states_teleport_perfectly_in_coincidence_mode() {
        // α|0⟩ with β = 0: the ambiguous branch collapses to the same
        // state, so every kept trial has fidelity one.
        let input = TeleportInput::Fixed { alpha: cr(1.0), beta: cr(0.0) };
        let report =
            run_teleportation(TeleportMode::CoincidenceBasis, 2000, 7, input, 0.4).unwrap();
        assert!((report.exact.mean_fidelity - 1.0).abs() < 1e-12);
        assert!((report.monte_carlo.mean_fidelity.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_phi_branch_fidelity_is_fourth_moment() {
        // |α|² = 0.64: the Φ branch lands at |α|⁴ + |β|⁴ = 0.5392.
        let input = TeleportInput::Fixed {
            alpha: cr(0.8),
            beta: Complex64::new(0.36, 0.48),
        };
        let report =
            run_teleportation(TeleportMode::CoincidenceBasis, 10, 1, input, 0.0).unwrap();
        let phi = report.exact.phi_coincidence.unwrap();
        let want = 0.64f64.powi(2) + 0.36f64.powi(2);
        assert!((phi.conditional_fidelity - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized_fixed_input() {
        let input = TeleportInput::Fixed { alpha: cr(0.9), beta: cr(0.1) };
        assert!(matches!(
            run_teleportation(TeleportMode::Unambiguous, 1, 0, input, 0.0),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn report_is_frame_independent() {
        let a = run_teleportation(
            TeleportMode::CoincidenceBasis,
            500,
            21,
            TeleportInput::HaarRandom,
            0.0,
        )
        .unwrap();
        for theta in [0.9, 3.5, 5.9] {
            let b = run_teleportation(
                TeleportMode::CoincidenceBasis,
                500,
                21,
                TeleportInput::HaarRandom,
                theta,
            )
            .unwrap();
            assert!((a.exact.mean_fidelity - b.exact.mean_fidelity).abs() < 1e-10);
            assert!((a.exact.efficiency - b.exact.efficiency).abs() < 1e-12);
            // Identical seeds sample identical events.
            assert_eq!(a.monte_carlo.kept, b.monte_carlo.kept);
            assert!(
                (a.monte_carlo.mean_fidelity.estimate - b.monte_carlo.mean_fidelity.estimate)
                    .abs()
                    < 1e-10
            );
        }
    }
}
