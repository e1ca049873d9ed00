//! End-to-end alignment-free protocols.
//!
//! Every protocol comes in an exact-probability mode and a seeded Monte
//! Carlo mode. Trials draw their randomness from per-trial ChaCha
//! substreams derived from `(seed, trial index)`, so reports are
//! deterministic for a fixed seed regardless of execution order.

pub mod bb84;
pub mod chsh;
pub mod dense_coding;
pub mod hardy;
pub mod report;
pub mod teleport;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elements::collective_rotation;
use crate::fock::{lift_unitary, ModeUnitary, Port, PureState};
use crate::logical::{bell_disentangler, logical_ry, SinglePhotonBellOutcome};

/// How the transmission channel rotates in-flight photons.
///
/// The lack of a shared frame between sender and receiver acts as a
/// collective rotation of both encoded degrees of freedom; the three modes
/// cover a static misalignment, one random draw per protocol run, and an
/// independent draw per transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ChannelModel {
    Fixed { theta: f64 },
    RandomPerSession,
    RandomPerPhoton,
}

impl ChannelModel {
    /// Resolves per-session randomness. The session angle is drawn from the
    /// dedicated setup stream so trial substreams stay untouched.
    pub fn start_session(self, rng: &mut ChaCha8Rng) -> SessionChannel {
        let session_theta = match self {
            ChannelModel::Fixed { theta } => Some(theta),
            ChannelModel::RandomPerSession => Some(rng.gen::<f64>() * std::f64::consts::TAU),
            ChannelModel::RandomPerPhoton => None,
        };
        SessionChannel { model: self, session_theta }
    }
}

/// A channel with its per-session randomness resolved.
#[derive(Debug, Clone, Copy)]
pub struct SessionChannel {
    model: ChannelModel,
    session_theta: Option<f64>,
}

impl SessionChannel {
    /// Rotation angle seen by one transmission.
    pub fn theta_for_flight<R: Rng>(&self, rng: &mut R) -> f64 {
        match self.session_theta {
            Some(theta) => theta,
            None => rng.gen::<f64>() * std::f64::consts::TAU,
        }
    }

    /// The session angle when the model has one (fixed or per-session).
    pub fn session_theta(&self) -> Option<f64> {
        self.session_theta
    }

    pub fn model(&self) -> ChannelModel {
        self.model
    }
}

/// RNG for the session-setup draws of a run.
pub fn setup_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream for one trial. Stream 0 is reserved for session
/// setup, so trials use `index + 1`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    rng
}

/// A logical qubit amplitude pair drawn uniformly from the Bloch sphere.
pub fn haar_random_logical<R: Rng>(rng: &mut R) -> (Complex64, Complex64) {
    use rand_distr::StandardNormal;
    let mut g = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (g(), g());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / norm, b / norm)
}

/// Joint logical readout of a two-logical-qubit state: channel rotation,
/// per-port y-rotations by `2φ`, then the per-port Bell analysis, with
/// events mapped to logical bit pairs.
pub(crate) struct JointLogicalDistribution {
    /// `probs[bit_a][bit_b]`.
    pub probs: [[f64; 2]; 2],
    /// Weight on non-logical outcomes (zero for leakage-free inputs).
    pub invalid: f64,
    /// Flattened event distribution and bit assignment, for sampling.
    pub event_probs: Vec<f64>,
    pub event_bits: Vec<Option<(u8, u8)>>,
}

pub(crate) fn joint_logical_distribution(
    state: &PureState,
    phi_a: f64,
    phi_b: f64,
    theta: f64,
) -> JointLogicalDistribution {
    let analysis = embed_both(&bell_disentangler());
    let rotations = logical_ry(2.0 * phi_a)
        .embed_at(Port::P1)
        .unwrap()
        .compose(&logical_ry(2.0 * phi_b).embed_at(Port::P2).unwrap())
        .unwrap();
    let total = analysis
        .compose(&rotations)
        .unwrap()
        .compose(&collective_rotation(theta))
        .unwrap();
    let evolved = lift_unitary(&total, state).expect("logical readout preserves photon count");

    let basis = crate::fock::basis(2).expect("basis exists");
    let mut probs = [[0.0f64; 2]; 2];
    let mut invalid = 0.0;
    let mut event_probs = Vec::with_capacity(basis.len());
    let mut event_bits = Vec::with_capacity(basis.len());
    for (i, amp) in evolved.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        let bits = bits_for_event(&basis.state(i));
        event_probs.push(p);
        event_bits.push(bits);
        match bits {
            Some((a, b)) if p > 0.0 => probs[a as usize][b as usize] += p,
            None if p > 0.0 => invalid += p,
            _ => {}
        }
    }
    JointLogicalDistribution { probs, invalid, event_probs, event_bits }
}

fn bits_for_event(state: &crate::fock::FockBasisState) -> Option<(u8, u8)> {
    if state.photons_per_port() != [1, 1] {
        return None;
    }
    let modes = state.modes();
    let (m1, m2) = if modes[0].port == Port::P1 {
        (modes[0], modes[1])
    } else {
        (modes[1], modes[0])
    };
    let bit = |m: crate::fock::ModeLabel| -> Option<u8> { outcome_of(m.pol, m.tr).logical_bit() };
    Some((bit(m1)?, bit(m2)?))
}

pub(crate) fn outcome_of(pol: crate::fock::Pol, tr: crate::fock::Tr) -> SinglePhotonBellOutcome {
    match (pol, tr) {
        (crate::fock::Pol::H, crate::fock::Tr::H) => SinglePhotonBellOutcome::PhiPlus,
        (crate::fock::Pol::V, crate::fock::Tr::H) => SinglePhotonBellOutcome::PhiMinus,
        (crate::fock::Pol::H, crate::fock::Tr::V) => SinglePhotonBellOutcome::PsiPlus,
        (crate::fock::Pol::V, crate::fock::Tr::V) => SinglePhotonBellOutcome::PsiMinus,
    }
}

/// Samples an index from a probability vector.
pub(crate) fn sample_index<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

/// Applies the same single-port unitary to both ports.
pub(crate) fn embed_both(per_port: &ModeUnitary) -> ModeUnitary {
    per_port
        .embed_at(Port::P2)
        .unwrap()
        .compose(&per_port.embed_at(Port::P1).unwrap())
        .unwrap()
}
