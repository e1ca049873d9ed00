//! The rotation-protected logical qubit.
//!
//! The logical levels are the single-photon states
//! `|0_L⟩ = (|Hv⟩ − |Vh⟩)/√2` and `|1_L⟩ = (|Hh⟩ + |Vv⟩)/√2`. Both are
//! pointwise invariant under the collective-rotation channel, so any state
//! in their span survives an arbitrary rotation of the receiver's frame.
//! They are also two of the four Bell states of the photon's internal
//! polarization ⊗ transverse-mode pair, which is what makes a deterministic
//! single-photon Bell analysis (and hence logical readout) possible with
//! passive optics.

use num_complex::Complex64;
use rand::Rng;

use crate::elements::{
    cnot_pol_target, cnot_spatial_target, polarization_hadamard, polarization_rotation,
    spatial_x_rotation,
};
use crate::error::{Error, Result};
use crate::fock::{
    born_probabilities, cr, lift_unitary, single_photon, ModeUnitary, Pol, Port, PureState, Tr,
};

/// A normalized two-component logical state attached to one port.
#[derive(Debug, Clone, Copy)]
pub struct LogicalQubit {
    amp0: Complex64,
    amp1: Complex64,
    port: Port,
}

impl LogicalQubit {
    pub fn new(amp0: Complex64, amp1: Complex64, port: Port) -> Result<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(LogicalQubit { amp0, amp1, port })
    }

    pub fn zero(port: Port) -> Self {
        LogicalQubit { amp0: cr(1.0), amp1: cr(0.0), port }
    }

    pub fn one(port: Port) -> Self {
        LogicalQubit { amp0: cr(0.0), amp1: cr(1.0), port }
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn port(&self) -> Port {
        self.port
    }

    /// Squared overlap with another logical qubit (ports ignored).
    pub fn fidelity(&self, other: &LogicalQubit) -> f64 {
        (self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1).norm_sqr()
    }

    /// Applies a 2×2 matrix in the logical basis and renormalizes the
    /// rounding residue.
    pub fn apply(&self, m: &[Complex64; 4]) -> LogicalQubit {
        let a0 = m[0] * self.amp0 + m[1] * self.amp1;
        let a1 = m[2] * self.amp0 + m[3] * self.amp1;
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        LogicalQubit { amp0: a0 / norm, amp1: a1 / norm, port: self.port }
    }
}

/// Internal-mode amplitudes (Hh, Hv, Vh, Vv) of `|0_L⟩`.
pub fn logical_zero_internal() -> [Complex64; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [cr(0.0), cr(r), cr(-r), cr(0.0)]
}

/// Internal-mode amplitudes (Hh, Hv, Vh, Vv) of `|1_L⟩`.
pub fn logical_one_internal() -> [Complex64; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [cr(r), cr(0.0), cr(0.0), cr(r)]
}

/// Physical single-photon state of a logical qubit.
pub fn encode(q: &LogicalQubit) -> PureState {
    let z = logical_zero_internal();
    let o = logical_one_internal();
    let mut internal = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        internal[i] = q.amp0 * z[i] + q.amp1 * o[i];
    }
    single_photon(q.port, internal).expect("encoded state is normalized")
}

/// Result of projecting a single-photon state onto the protected subspace.
#[derive(Debug, Clone, Copy)]
pub struct DfsProjection {
    /// Normalized in-subspace component; `None` when the state has no
    /// support on the subspace (weight below 1e−12).
    pub qubit: Option<LogicalQubit>,
    /// Probability weight outside the protected subspace.
    pub leakage: f64,
}

/// Components of `s` along `|0_L⟩, |1_L⟩` at its port, plus the leakage.
///
/// The state must be confined to a single port.
pub fn project_dfs(s: &PureState) -> Result<DfsProjection> {
    if s.n_photons() != 1 {
        return Err(Error::PhotonNumberMismatch(s.n_photons(), 1));
    }
    let ports = s.occupied_ports();
    if ports.len() != 1 {
        return Err(Error::MixedPorts);
    }
    let port = ports[0];
    let off = 4 * port.index();
    let amps = &s.amplitudes()[off..off + 4];
    let z = logical_zero_internal();
    let o = logical_one_internal();
    let c0: Complex64 = z.iter().zip(amps).map(|(b, a)| b.conj() * a).sum();
    let c1: Complex64 = o.iter().zip(amps).map(|(b, a)| b.conj() * a).sum();
    let weight = c0.norm_sqr() + c1.norm_sqr();
    let leakage = (1.0 - weight).max(0.0);
    let qubit = if weight < 1e-12 {
        None
    } else {
        let norm = weight.sqrt();
        Some(LogicalQubit { amp0: c0 / norm, amp1: c1 / norm, port })
    };
    Ok(DfsProjection { qubit, leakage })
}

/// Logical y-rotation by `two_phi`, realized physically as the polarization
/// rotation by `two_phi / 2`.
///
/// On the protected subspace: `|0_L⟩ → cos φ|0_L⟩ + sin φ|1_L⟩`,
/// `|1_L⟩ → −sin φ|0_L⟩ + cos φ|1_L⟩`, with no leakage at any angle.
pub fn logical_ry(two_phi: f64) -> ModeUnitary {
    polarization_rotation(two_phi / 2.0)
}

/// Gate sequence of the logical z-rotation, in application order:
/// controlled-NOT, transverse x-rotation by −θ, controlled-NOT.
///
/// The composite acts as `diag(e^{−iθ/2}, e^{+iθ/2})` on the logical basis
/// (no residual global phase under this crate's conventions), but the
/// middle step leaves the protected subspace, so the sequence is safe only
/// inside a lab with a defined frame, not mid-channel.
pub fn logical_rz_sequence(theta: f64) -> [ModeUnitary; 3] {
    [
        cnot_pol_target(Tr::H),
        spatial_x_rotation(-theta),
        cnot_pol_target(Tr::H),
    ]
}

/// The logical z-rotation as a single composed physical unitary.
pub fn logical_rz(theta: f64) -> ModeUnitary {
    let [first, mid, last] = logical_rz_sequence(theta);
    last.compose(&mid).unwrap().compose(&first).unwrap()
}

/// Logical Pauli axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Physical composite acting as the chosen Pauli on the logical basis,
/// up to a fixed global phase of −i.
///
/// `Z` is the z-rotation by π. `X` composes the y-rotation by π with the
/// z-rotation by π, which lands on σ̂x exactly (a y-rotation alone maps
/// `|1_L⟩ → −|0_L⟩` and is a Pauli only state-by-state, not as an
/// operator). `Y` is built from the other two.
pub fn logical_pauli(axis: PauliAxis) -> ModeUnitary {
    match axis {
        PauliAxis::Z => logical_rz(std::f64::consts::PI),
        PauliAxis::X => logical_ry(std::f64::consts::PI)
            .compose(&logical_rz(std::f64::consts::PI))
            .unwrap(),
        PauliAxis::Y => logical_pauli(PauliAxis::Z)
            .compose(&logical_pauli(PauliAxis::X))
            .unwrap(),
    }
}

/// The four Bell states of one photon's polarization ⊗ transverse pair.
///
/// `PsiMinus` is `|0_L⟩` and `PhiPlus` is `|1_L⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SinglePhotonBellOutcome {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl SinglePhotonBellOutcome {
    pub const ALL: [SinglePhotonBellOutcome; 4] = [
        SinglePhotonBellOutcome::PsiMinus,
        SinglePhotonBellOutcome::PsiPlus,
        SinglePhotonBellOutcome::PhiMinus,
        SinglePhotonBellOutcome::PhiPlus,
    ];

    /// Logical bit carried by the outcome, when it is a logical level.
    pub fn logical_bit(self) -> Option<u8> {
        match self {
            SinglePhotonBellOutcome::PsiMinus => Some(0),
            SinglePhotonBellOutcome::PhiPlus => Some(1),
            _ => None,
        }
    }
}

/// Disentangling circuit of the single-photon Bell analysis: a
/// polarization-controlled NOT on the transverse qubit followed by a
/// polarization Hadamard. It maps the four internal Bell states onto the
/// four physical modes one-to-one:
/// Φ⁺ → Hh, Φ⁻ → Vh, Ψ⁺ → Hv, Ψ⁻ → Vv.
pub fn bell_disentangler() -> ModeUnitary {
    polarization_hadamard()
        .compose(&cnot_spatial_target(Pol::V))
        .unwrap()
}

fn outcome_for(pol: Pol, tr: Tr) -> SinglePhotonBellOutcome {
    match (pol, tr) {
        (Pol::H, Tr::H) => SinglePhotonBellOutcome::PhiPlus,
        (Pol::V, Tr::H) => SinglePhotonBellOutcome::PhiMinus,
        (Pol::H, Tr::V) => SinglePhotonBellOutcome::PsiPlus,
        (Pol::V, Tr::V) => SinglePhotonBellOutcome::PsiMinus,
    }
}

fn disentangled(s: &PureState) -> Result<PureState> {
    if s.n_photons() != 1 {
        return Err(Error::PhotonNumberMismatch(s.n_photons(), 1));
    }
    static BOTH_PORTS: std::sync::OnceLock<ModeUnitary> = std::sync::OnceLock::new();
    let both = BOTH_PORTS.get_or_init(|| {
        let d = bell_disentangler();
        d.embed_at(Port::P2)
            .unwrap()
            .compose(&d.embed_at(Port::P1).unwrap())
            .unwrap()
    });
    lift_unitary(both, s)
}

/// Exact outcome probabilities of the single-photon Bell analysis, indexed
/// as in [`SinglePhotonBellOutcome::ALL`].
pub fn single_photon_bsm_probabilities(s: &PureState) -> Result<[f64; 4]> {
    let out = disentangled(s)?;
    let mut p = [0.0f64; 4];
    for (state, prob) in born_probabilities(&out) {
        if prob == 0.0 {
            continue;
        }
        let mode = state.modes()[0];
        let outcome = outcome_for(mode.pol, mode.tr);
        let idx = SinglePhotonBellOutcome::ALL
            .iter()
            .position(|o| *o == outcome)
            .unwrap();
        p[idx] += prob;
    }
    Ok(p)
}

/// Samples the deterministic single-photon Bell analysis: the disentangler
/// followed by a physical-basis readout. Each internal Bell state maps to
/// its outcome with probability one; superpositions sample with Born
/// weights.
pub fn single_photon_bsm<R: Rng>(s: &PureState, rng: &mut R) -> Result<SinglePhotonBellOutcome> {
    let out = disentangled(s)?;
    let event = crate::fock::sample_outcome(&out, rng);
    let mode = event.modes()[0];
    Ok(outcome_for(mode.pol, mode.tr))
}
