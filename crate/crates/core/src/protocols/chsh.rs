//! CHSH test on the shared logical Bell state `Φ⁺_L`.
//!
//! Each party measures by applying a logical y-rotation and reading the
//! Bell analyzer as logical Z, giving the correlation
//! `E(φ_A, φ_B) = cos 2(φ_A − φ_B)` independent of the channel angle. The
//! score is `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`, maximized at 2√2
//! by the standard settings `(0, π/4, π/8, 3π/8)`.

use serde::Serialize;

use crate::protocols::report::{MonteCarloStat, SCHEMA_VERSION};
use crate::protocols::{joint_logical_distribution, sample_index, trial_rng};
use crate::sources::{logical_bell, LogicalBellLabel};

/// Analyzer angles `(a, a′, b, b′)` in radians.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChshSettings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for ChshSettings {
    fn default() -> Self {
        use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
        ChshSettings {
            a: 0.0,
            a_prime: FRAC_PI_4,
            b: FRAC_PI_8,
            b_prime: 3.0 * FRAC_PI_8,
        }
    }
}

impl ChshSettings {
    /// The four analyzer pairs in the order their correlations enter S.
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }
}

const SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

/// Exact correlation `⟨Z_A Z_B⟩` for one pair of analyzer angles.
pub fn chsh_correlation(phi_a: f64, phi_b: f64, theta: f64) -> f64 {
    let d = joint_logical_distribution(
        &logical_bell(LogicalBellLabel::PhiPlus),
        phi_a,
        phi_b,
        theta,
    );
    debug_assert!(d.invalid < 1e-12);
    d.probs[0][0] + d.probs[1][1] - d.probs[0][1] - d.probs[1][0]
}

/// Exact CHSH score at the given settings and channel angle.
pub fn chsh_value(settings: &ChshSettings, theta: f64) -> f64 {
    settings
        .pairs()
        .iter()
        .zip(SIGNS)
        .map(|((pa, pb), sign)| sign * chsh_correlation(*pa, *pb, theta))
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct ChshConfig {
    pub settings: ChshSettings,
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChshExact {
    pub correlations: [f64; 4],
    pub s_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChshMonteCarlo {
    pub trials_per_pair: u64,
    pub correlations: [MonteCarloStat; 4],
    pub s_value: MonteCarloStat,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChshReport {
    pub schema_version: u32,
    pub artifact_version: &'static str,
    pub protocol: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub config: ChshConfig,
    pub exact: ChshExact,
    pub monte_carlo: ChshMonteCarlo,
}

/// Exact score plus a sampled estimate with `trials` split evenly over the
/// four analyzer pairs.
pub fn run_chsh(settings: &ChshSettings, theta: f64, trials: u64, seed: u64) -> ChshReport {
    let state = logical_bell(LogicalBellLabel::PhiPlus);
    let dists: Vec<_> = settings
        .pairs()
        .iter()
        .map(|(pa, pb)| joint_logical_distribution(&state, *pa, *pb, theta))
        .collect();

    let exact_corr: Vec<f64> = dists
        .iter()
        .map(|d| d.probs[0][0] + d.probs[1][1] - d.probs[0][1] - d.probs[1][0])
        .collect();
    let exact_s: f64 = exact_corr.iter().zip(SIGNS).map(|(e, s)| e * s).sum();

    let per_pair = (trials / 4).max(1);
    let mut corr_stats = Vec::with_capacity(4);
    let mut trial_index = 0u64;
    for dist in &dists {
        let mut sum = 0.0f64;
        for _ in 0..per_pair {
            let mut rng = trial_rng(seed, trial_index);
            trial_index += 1;
            let event = sample_index(&dist.event_probs, &mut rng);
            let (a, b) = dist.event_bits[event].expect("logical inputs give logical bits");
            sum += if a == b { 1.0 } else { -1.0 };
        }
        let n = per_pair as f64;
        let est = sum / n;
        // Outcomes are ±1, so Var(E) = (1 − E²)/n.
        let se = ((1.0 - est * est).max(0.0) / n).sqrt();
        corr_stats.push(MonteCarloStat { estimate: est, std_error: se });
    }
    let s_est: f64 = corr_stats
        .iter()
        .zip(SIGNS)
        .map(|(c, s)| c.estimate * s)
        .sum();
    let s_se: f64 = corr_stats
        .iter()
        .map(|c| c.std_error * c.std_error)
        .sum::<f64>()
        .sqrt();

    ChshReport {
        schema_version: SCHEMA_VERSION,
        artifact_version: crate::ARTIFACT_VERSION,
        protocol: "chsh",
        seed,
        trials: per_pair * 4,
        config: ChshConfig { settings: *settings, theta },
        exact: ChshExact {
            correlations: [exact_corr[0], exact_corr[1], exact_corr[2], exact_corr[3]],
            s_value: exact_s,
        },
        monte_carlo: ChshMonteCarlo {
            trials_per_pair: per_pair,
            correlations: [corr_stats[0], corr_stats[1], corr_stats[2], corr_stats[3]],
            s_value: MonteCarloStat { estimate: s_est, std_error: s_se },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlation_is_cosine_of_twice_the_angle_difference() {
        for (pa, pb) in [(0.0, 0.0), (0.3, -0.2), (1.0, 0.25)] {
            let want = (2.0f64 * (pa - pb)).cos();
            assert!((chsh_correlation(pa, pb, 0.0) - want).abs() < 1e-12);
            // ... and the channel angle drops out.
            assert!((chsh_correlation(pa, pb, 2.2) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_settings_reach_the_tsirelson_score() {
        let s = chsh_value(&ChshSettings::default(), 0.0);
        assert!((s - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn equal_settings_score_two() {
        let settings = ChshSettings { a: 0.0, a_prime: 0.0, b: 0.0, b_prime: 0.0 };
        assert!((chsh_value(&settings, 0.7) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn score_is_frame_independent() {
        let settings = ChshSettings::default();
        let base = chsh_value(&settings, 0.0);
        for k in 0..16 {
            let theta = k as f64 * std::f64::consts::TAU / 16.0;
            assert!((chsh_value(&settings, theta) - base).abs() < 1e-10);
        }
    }

    #[test]
    fn sampled_score_agrees_with_exact() {
        let report = run_chsh(&ChshSettings::default(), 1.0, 40_000, 3);
        assert!(report
            .monte_carlo
            .s_value
            .agrees_with(report.exact.s_value, 4.0));
    }
}
