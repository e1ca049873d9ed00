//! Hardy's nonlocality argument on non-maximally entangled logical states.
//!
//! With the shared state `cos ε|0_L 0_L⟩ + sin ε|1_L 1_L⟩` and two analyzer
//! angles per party (measure = logical y-rotation + Bell analyzer read as
//! logical Z), the standard ladder constrains three joint probabilities to
//! zero,
//!
//! ```text
//! p₁ = P(A₁=1, B₂=0) = 0
//! p₂ = P(A₂=0, B₁=1) = 0
//! p₃ = P(A₂=1, B₂=1) = 0
//! ```
//!
//! while the Hardy probability `p₄ = P(A₁=1, B₁=1)` stays positive — a
//! contradiction with local realism whenever `p₄ > 0`. The zero conditions
//! admit exact angle solutions for any `ε` with `tan ε ≤ 0`; maximizing
//! `p₄` over `ε` lands at ≈ 0.0902, and the probability vanishes at both a
//! product state and maximal entanglement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocols::report::{MonteCarloStat, SCHEMA_VERSION};
use crate::protocols::{joint_logical_distribution, sample_index, trial_rng};
use crate::sources::nonmax_entangled;

/// Analyzer angles: `a1`, `a2` for one party, `b1`, `b2` for the other.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HardySettings {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

/// The four joint probabilities `(p₁, p₂, p₃, p₄)` of the Hardy ladder,
/// computed exactly from amplitudes at the given channel angle.
pub fn hardy_probabilities_with_channel(
    epsilon: f64,
    settings: &HardySettings,
    theta: f64,
) -> [f64; 4] {
    let state = nonmax_entangled(epsilon);
    let joint = |pa: f64, pb: f64, oa: usize, ob: usize| -> f64 {
        joint_logical_distribution(&state, pa, pb, theta).probs[oa][ob]
    };
    [
        joint(settings.a1, settings.b2, 1, 0),
        joint(settings.a2, settings.b1, 0, 1),
        joint(settings.a2, settings.b2, 1, 1),
        joint(settings.a1, settings.b1, 1, 1),
    ]
}

/// Ladder probabilities with no channel rotation.
pub fn hardy_probabilities(epsilon: f64, settings: &HardySettings) -> [f64; 4] {
    hardy_probabilities_with_channel(epsilon, settings, 0.0)
}

/// Analyzer angles that satisfy the three zero conditions exactly for the
/// given `ε`. Requires `tan ε ≤ 0` (e.g. `ε ∈ (−π/2, 0]`); elsewhere the
/// conditions have no real solution.
pub fn constraint_settings(epsilon: f64) -> Result<HardySettings> {
    let t = epsilon.tan();
    if t > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "zero conditions need tan ε ≤ 0, got ε = {epsilon}"
        )));
    }
    // p₃ = 0 fixes tan²a₂ = −tan ε; p₁ and p₂ then fix the first angles
    // through tan a₁ = tan ε · tan b₂, symmetrically for both parties.
    let a2 = (-t).sqrt().atan();
    let a1 = (t * (-t).sqrt()).atan();
    Ok(HardySettings { a1, a2, b1: a1, b2: a2 })
}

/// Result of maximizing the Hardy probability.
#[derive(Debug, Clone, Serialize)]
pub struct HardyOptimum {
    pub epsilon: f64,
    pub settings: HardySettings,
    pub probabilities: [f64; 4],
}

/// Maximizes `p₄` over `ε` with the constraint-solving angles, evaluating
/// every candidate through the exact engine: a coarse scan over
/// `ε ∈ (−π/4, 0)` followed by golden-section refinement.
pub fn optimize() -> HardyOptimum {
    let p4_at = |eps: f64| -> f64 {
        let settings = constraint_settings(eps).expect("scan stays in the valid range");
        hardy_probabilities(eps, &settings)[3]
    };

    let lo = -std::f64::consts::FRAC_PI_4 + 1e-6;
    let hi = -1e-6;
    let steps = 400;
    let mut best_eps = lo;
    let mut best = f64::MIN;
    for k in 0..=steps {
        let eps = lo + (hi - lo) * k as f64 / steps as f64;
        let p4 = p4_at(eps);
        if p4 > best {
            best = p4;
            best_eps = eps;
        }
    }

    // Golden-section refine around the best grid point.
    let span = (hi - lo) / steps as f64;
    let (mut a, mut b) = ((best_eps - span).max(lo), (best_eps + span).min(hi));
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if p4_at(x1) < p4_at(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    let epsilon = 0.5 * (a + b);
    let settings = constraint_settings(epsilon).unwrap();
    let probabilities = hardy_probabilities(epsilon, &settings);
    HardyOptimum { epsilon, settings, probabilities }
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyConfig {
    pub epsilon: f64,
    pub settings: HardySettings,
    pub theta: f64,
    /// True when ε and the angles came from the optimizer.
    pub optimized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyExact {
    pub probabilities: [f64; 4],
    pub hardy_probability: f64,
    pub max_constraint: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyMonteCarlo {
    pub trials_per_pair: u64,
    pub probabilities: [MonteCarloStat; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyReport {
    pub schema_version: u32,
    pub artifact_version: &'static str,
    pub protocol: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub config: HardyConfig,
    pub exact: HardyExact,
    pub monte_carlo: HardyMonteCarlo,
}

/// Evaluates the ladder (at explicit `epsilon`/`settings`, or at the
/// optimizer's output when omitted) and samples each joint probability.
pub fn run_hardy(
    epsilon: Option<f64>,
    settings: Option<HardySettings>,
    theta: f64,
    trials: u64,
    seed: u64,
) -> Result<HardyReport> {
    let (epsilon, settings, optimized) = match (epsilon, settings) {
        (Some(e), Some(s)) => (e, s, false),
        (Some(e), None) => (e, constraint_settings(e)?, false),
        (None, Some(_)) => {
            return Err(Error::InvalidParameter(
                "analyzer settings need an explicit ε".into(),
            ))
        }
        (None, None) => {
            let opt = optimize();
            (opt.epsilon, opt.settings, true)
        }
    };

    let exact = hardy_probabilities_with_channel(epsilon, &settings, theta);
    let state = nonmax_entangled(epsilon);

    // One sampled estimate per ladder line, splitting the trial budget.
    let pairs = [
        (settings.a1, settings.b2, (1u8, 0u8)),
        (settings.a2, settings.b1, (0, 1)),
        (settings.a2, settings.b2, (1, 1)),
        (settings.a1, settings.b1, (1, 1)),
    ];
    let per_pair = (trials / 4).max(1);
    let mut stats = Vec::with_capacity(4);
    let mut trial_index = 0u64;
    for (pa, pb, want) in pairs {
        let dist = joint_logical_distribution(&state, pa, pb, theta);
        let mut hits = 0u64;
        for _ in 0..per_pair {
            let mut rng = trial_rng(seed, trial_index);
            trial_index += 1;
            let event = sample_index(&dist.event_probs, &mut rng);
            let bits = dist.event_bits[event].expect("logical inputs give logical bits");
            if bits == want {
                hits += 1;
            }
        }
        stats.push(MonteCarloStat::rate(hits, per_pair));
    }

    Ok(HardyReport {
        schema_version: SCHEMA_VERSION,
        artifact_version: crate::ARTIFACT_VERSION,
        protocol: "hardy",
        seed,
        trials: per_pair * 4,
        config: HardyConfig { epsilon, settings, theta, optimized },
        exact: HardyExact {
            probabilities: exact,
            hardy_probability: exact[3],
            max_constraint: exact[0].max(exact[1]).max(exact[2]),
        },
        monte_carlo: HardyMonteCarlo {
            trials_per_pair: per_pair,
            probabilities: [stats[0], stats[1], stats[2], stats[3]],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form of p₄ under the constraint-solving angles, derived
    /// independently of the engine: with c = cos ε, σ = −sin ε,
    /// p₄(ε) = [cσ(c−σ)/(1−cσ)]².
    fn p4_closed_form(eps: f64) -> f64 {
        let c = eps.cos();
        let s = -eps.sin();
        (c * s * (c - s) / (1.0 - c * s)).powi(2)
    }

    #[test]
    fn constraints_vanish_exactly() {
        for eps in [-0.1, -0.3, -0.5, -0.7] {
            let settings = constraint_settings(eps).unwrap();
            let p = hardy_probabilities(eps, &settings);
            assert!(p[0] < 1e-12 && p[1] < 1e-12 && p[2] < 1e-12, "{p:?}");
            assert!((p[3] - p4_closed_form(eps)).abs() < 1e-12);
        }
    }

    #[test]
    fn hardy_probability_vanishes_at_the_edges() {
        // Product state: nothing nonclassical.
        let settings = constraint_settings(0.0).unwrap();
        let p = hardy_probabilities(0.0, &settings);
        assert!(p[3] < 1e-14);

        // Maximal entanglement: pick settings satisfying the zero
        // conditions by hand (a₂ − b₂ = π/2, a₁ = b₂, b₁ = a₂).
        use std::f64::consts::FRAC_PI_4;
        let settings = HardySettings {
            a1: -FRAC_PI_4,
            a2: FRAC_PI_4,
            b1: FRAC_PI_4,
            b2: -FRAC_PI_4,
        };
        let p = hardy_probabilities(FRAC_PI_4, &settings);
        assert!(p[0] < 1e-12 && p[1] < 1e-12 && p[2] < 1e-12);
        assert!(p[3] < 1e-12);
    }

    #[test]
    fn optimum_hits_the_known_value() {
        // Independent oracle: fine scan of the closed form, plus the known
        // optimum (5√5 − 11)/2.
        let known = (5.0 * 5.0f64.sqrt() - 11.0) / 2.0;
        let mut grid_best = f64::MIN;
        for k in 1..20_000 {
            let eps = -std::f64::consts::FRAC_PI_4 * k as f64 / 20_000.0;
            grid_best = grid_best.max(p4_closed_form(eps));
        }
        assert!((grid_best - known).abs() < 1e-6);

        let opt = optimize();
        assert!((opt.probabilities[3] - known).abs() < 1e-4);
        assert!(opt.probabilities[..3].iter().all(|p| *p < 1e-10));
    }

    #[test]
    fn probabilities_are_frame_independent() {
        let opt = optimize();
        for k in 0..8 {
            let theta = k as f64 * 0.7;
            let p = hardy_probabilities_with_channel(opt.epsilon, &opt.settings, theta);
            for (x, y) in p.iter().zip(&opt.probabilities) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sampled_probabilities_agree_with_exact() {
        let report = run_hardy(Some(-0.5), None, 0.3, 40_000, 5).unwrap();
        for (stat, exact) in report
            .monte_carlo
            .probabilities
            .iter()
            .zip(&report.exact.probabilities)
        {
            assert!(stat.agrees_with(*exact, 4.0));
        }
    }
}
