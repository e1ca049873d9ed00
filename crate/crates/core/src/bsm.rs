//! Partial Bell-state measurement for two logical qubits.
//!
//! The two photons meet on the balanced beam splitter and every output mode
//! is then resolved by polarizing beam splitters, mode sorters and
//! number-resolving detectors, i.e. the detection is a direct readout in
//! the mode-occupation basis. A detection event is a coincidence when the
//! two photons land in two distinct bins — including two bins at the same
//! output port, which are still separated by polarization or transverse
//! mode.
//!
//! The event classifier is derived at startup by evolving the four logical
//! Bell states exactly and reading their supports, rather than hard-coding
//! a table: Ψ⁻ and Ψ⁺ events are disjoint from each other and from the Φ±
//! coincidence events, so those three groups are conclusive, while Φ⁺ and
//! Φ⁻ share identical coincidence statistics and stay mutually ambiguous.
//! Double-occupancy events (and events unreachable from logical inputs)
//! classify as `NoCoincidence`. Deriving the table from the simulation
//! doubles as a standing regression check of the beam-splitter evolution:
//! construction fails loudly if the supports ever overlap.
//!
//! Ψ± outputs are validated through these operational statistics (support
//! disjointness and exact class probabilities) rather than term-by-term
//! amplitudes; the Φ± outputs are additionally pinned amplitude-by-
//! amplitude in the acceptance suite.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    basis, lift_unitary, sample_outcome, FockBasisState, ModeLabel,
    PureState, DEFAULT_TOL,
};
use crate::sources::{logical_bell, LogicalBellLabel};

/// A two-photon detection pattern: an unordered pair of detector bins,
/// possibly equal (double occupancy).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectionEvent {
    state: FockBasisState,
}

impl DetectionEvent {
    pub fn from_state(state: FockBasisState) -> Result<Self> {
        if state.n_photons() != 2 {
            return Err(Error::PhotonNumberMismatch(state.n_photons(), 2));
        }
        Ok(DetectionEvent { state })
    }

    pub fn state(&self) -> FockBasisState {
        self.state
    }

    /// The two occupied bins in canonical order (equal for double
    /// occupancy).
    pub fn bins(&self) -> [ModeLabel; 2] {
        let modes = self.state.modes();
        [modes[0], modes[1]]
    }

    /// True when the two photons sit in distinct detector bins.
    pub fn is_coincidence(&self) -> bool {
        let [a, b] = self.bins();
        a != b
    }
}

impl fmt::Display for DetectionEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.state)
    }
}

/// Classification of a detection event by the partial Bell analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BellClass {
    PsiMinus,
    PsiPlus,
    PhiAmbiguous,
    NoCoincidence,
}

impl BellClass {
    pub const ALL: [BellClass; 4] = [
        BellClass::PsiMinus,
        BellClass::PsiPlus,
        BellClass::PhiAmbiguous,
        BellClass::NoCoincidence,
    ];
}

/// Sends a one-photon-per-port state through the beam splitter.
pub fn evolve_through_bs(s: &PureState) -> Result<PureState> {
    if !s.one_photon_per_port() {
        return Err(Error::NotOnePhotonPerPort);
    }
    lift_unitary(&crate::elements::beam_splitter(), s)
}

/// Event-to-class map derived from the exact Bell-state evolutions.
pub struct BellClassifier {
    classes: Vec<BellClass>, // indexed by the two-photon basis order
}

impl BellClassifier {
    /// Evolves the four logical Bell states and reads off their supports.
    ///
    /// Fails if the Ψ⁻, Ψ⁺ and Φ coincidence supports are not pairwise
    /// disjoint — that would break the analyzer's discrimination guarantee.
    pub fn build() -> Result<BellClassifier> {
        let b2 = basis(2)?;
        let support = |label: LogicalBellLabel| -> Result<Vec<bool>> {
            let evolved = evolve_through_bs(&logical_bell(label))?;
            Ok(evolved
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr() > DEFAULT_TOL)
                .collect())
        };
        let psi_minus = support(LogicalBellLabel::PsiMinus)?;
        let psi_plus = support(LogicalBellLabel::PsiPlus)?;
        let phi_plus = support(LogicalBellLabel::PhiPlus)?;
        let phi_minus = support(LogicalBellLabel::PhiMinus)?;

        let mut classes = vec![BellClass::NoCoincidence; b2.len()];
        for i in 0..b2.len() {
            let event = DetectionEvent::from_state(b2.state(i))?;
            let coincidence = event.is_coincidence();
            let in_psi_minus = psi_minus[i];
            let in_psi_plus = psi_plus[i];
            let in_phi = (phi_plus[i] || phi_minus[i]) && coincidence;

            if in_psi_minus && in_psi_plus {
                return Err(Error::SupportCollision(format!(
                    "event {event} lies in both Ψ⁻ and Ψ⁺ supports"
                )));
            }
            if (in_psi_minus || in_psi_plus) && in_phi {
                return Err(Error::SupportCollision(format!(
                    "event {event} lies in both a Ψ and the Φ coincidence support"
                )));
            }
            if (in_psi_minus || in_psi_plus) && !coincidence {
                return Err(Error::SupportCollision(format!(
                    "event {event} is a Ψ event without a coincidence"
                )));
            }

            classes[i] = if in_psi_minus {
                BellClass::PsiMinus
            } else if in_psi_plus {
                BellClass::PsiPlus
            } else if in_phi {
                BellClass::PhiAmbiguous
            } else {
                BellClass::NoCoincidence
            };
        }
        Ok(BellClassifier { classes })
    }

    pub fn classify(&self, event: &DetectionEvent) -> BellClass {
        let b2 = basis(2).expect("basis exists");
        self.classes[b2.index_of(&event.state()).expect("event in basis")]
    }

    fn class_by_index(&self, index: usize) -> BellClass {
        self.classes[index]
    }

    /// Full event table in canonical order.
    pub fn table(&self) -> Vec<(DetectionEvent, BellClass)> {
        let b2 = basis(2).expect("basis exists");
        self.classes
            .iter()
            .enumerate()
            .map(|(i, c)| (DetectionEvent::from_state(b2.state(i)).unwrap(), *c))
            .collect()
    }
}

/// The shared classifier instance.
///
/// Panics on first use if the support-disjointness construction fails,
/// which would mean the beam-splitter evolution itself is broken.
pub fn classifier() -> &'static BellClassifier {
    static INSTANCE: OnceLock<BellClassifier> = OnceLock::new();
    INSTANCE.get_or_init(|| {
        BellClassifier::build().expect("Bell classifier construction must succeed")
    })
}

/// Exact class probabilities for a one-photon-per-port input.
pub fn class_probabilities(s: &PureState) -> Result<BTreeMap<BellClass, f64>> {
    let evolved = evolve_through_bs(s)?;
    let cls = classifier();
    let mut map: BTreeMap<BellClass, f64> = BellClass::ALL.iter().map(|c| (*c, 0.0)).collect();
    for (i, a) in evolved.amplitudes().iter().enumerate() {
        *map.get_mut(&cls.class_by_index(i)).unwrap() += a.norm_sqr();
    }
    Ok(map)
}

/// Evolves through the beam splitter, samples one detection event, and
/// classifies it.
pub fn measure_bell_pair<R: Rng>(
    s: &PureState,
    rng: &mut R,
) -> Result<(DetectionEvent, BellClass)> {
    let evolved = evolve_through_bs(s)?;
    let event = DetectionEvent::from_state(sample_outcome(&evolved, rng))?;
    Ok((event, classifier().classify(&event)))
}
