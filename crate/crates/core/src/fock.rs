//! Exact bosonic Fock-space representation for one and two photons over
//! eight labeled modes.
//!
//! A mode is labeled by output/input port (1 or 2), polarization (`H`/`V`)
//! and first-order transverse mode (`h`/`v`). The canonical mode order is
//! `Hh < Hv < Vh < Vv` within a port, port 1 before port 2, giving flat
//! indices 0..8. Basis states of fixed total photon number are enumerated
//! lexicographically by their sorted occupied-mode indices, so the
//! single-photon basis coincides with the mode order and the two-photon
//! basis runs `(0,0), (0,1), …, (7,7)` — 36 states in total.
//!
//! Evolution of a two-photon state under a mode unitary `U` uses the
//! permanent rule: the amplitude from occupation `S` to occupation `T` is
//! `per(U[T,S]) / sqrt(Π S_i! Π T_j!)`, which for at most two photons
//! reduces to closed 2×2 expressions.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Number of bosonic modes (2 ports × 2 polarizations × 2 transverse modes).
pub const MODE_COUNT: usize = 8;

/// Magnitude below which amplitudes are pruned to exactly zero.
pub const PRUNE_EPS: f64 = 1e-14;

/// Default comparison tolerance for probabilities and fidelities.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance for unitarity and norm-preservation checks.
pub const UNITARY_TOL: f64 = 1e-12;

/// Longitudinal momentum mode (the two spatial arms of an experiment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    P1,
    P2,
}

impl Port {
    pub fn index(self) -> usize {
        match self {
            Port::P1 => 0,
            Port::P2 => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn other(self) -> Port {
        match self {
            Port::P1 => Port::P2,
            Port::P2 => Port::P1,
        }
    }
}

/// Polarization level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pol {
    H,
    V,
}

/// First-order transverse (Hermite-Gaussian) mode level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tr {
    H,
    V,
}

/// One labeled bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub port: Port,
    pub pol: Pol,
    pub tr: Tr,
}

impl ModeLabel {
    pub fn new(port: Port, pol: Pol, tr: Tr) -> Self {
        ModeLabel { port, pol, tr }
    }

    /// Flat index `4·(port−1) + 2·pol + tr` with `H = h = 0`, `V = v = 1`.
    pub fn index(self) -> usize {
        4 * self.port.index()
            + 2 * match self.pol {
                Pol::H => 0,
                Pol::V => 1,
            }
            + match self.tr {
                Tr::H => 0,
                Tr::V => 1,
            }
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < MODE_COUNT, "mode index out of range: {i}");
        ModeLabel {
            port: if i < 4 { Port::P1 } else { Port::P2 },
            pol: if (i / 2).is_multiple_of(2) { Pol::H } else { Pol::V },
            tr: if i.is_multiple_of(2) { Tr::H } else { Tr::V },
        }
    }

    pub fn all() -> impl Iterator<Item = ModeLabel> {
        (0..MODE_COUNT).map(ModeLabel::from_index)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.pol {
            Pol::H => 'H',
            Pol::V => 'V',
        };
        let t = match self.tr {
            Tr::H => 'h',
            Tr::V => 'v',
        };
        write!(f, "{}{}{}", p, t, self.port.number())
    }
}

impl std::str::FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(Error::InvalidParameter(format!("bad mode label {s:?}")));
        }
        let pol = match chars[0] {
            'H' => Pol::H,
            'V' => Pol::V,
            _ => return Err(Error::InvalidParameter(format!("bad mode label {s:?}"))),
        };
        let tr = match chars[1] {
            'h' => Tr::H,
            'v' => Tr::V,
            _ => return Err(Error::InvalidParameter(format!("bad mode label {s:?}"))),
        };
        let port = match chars[2] {
            '1' => Port::P1,
            '2' => Port::P2,
            _ => return Err(Error::InvalidParameter(format!("bad mode label {s:?}"))),
        };
        Ok(ModeLabel { port, pol, tr })
    }
}

/// Photon occupation numbers for the eight modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasisState {
    occ: [u8; MODE_COUNT],
}

impl FockBasisState {
    pub fn vacuum() -> Self {
        FockBasisState { occ: [0; MODE_COUNT] }
    }

    pub fn from_modes(modes: &[ModeLabel]) -> Self {
        let mut occ = [0u8; MODE_COUNT];
        for m in modes {
            occ[m.index()] += 1;
        }
        FockBasisState { occ }
    }

    pub fn occupations(&self) -> &[u8; MODE_COUNT] {
        &self.occ
    }

    pub fn occupation(&self, mode: ModeLabel) -> u8 {
        self.occ[mode.index()]
    }

    /// Total photon number.
    pub fn n_photons(&self) -> u8 {
        self.occ.iter().sum()
    }

    /// Occupied modes with multiplicity, in canonical order.
    pub fn modes(&self) -> Vec<ModeLabel> {
        let mut out = Vec::new();
        for (i, &o) in self.occ.iter().enumerate() {
            for _ in 0..o {
                out.push(ModeLabel::from_index(i));
            }
        }
        out
    }

    pub fn photons_per_port(&self) -> [u8; 2] {
        let p1: u8 = self.occ[..4].iter().sum();
        let p2: u8 = self.occ[4..].iter().sum();
        [p1, p2]
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n_photons() == 0 {
            return write!(f, "vac");
        }
        let mut parts = Vec::new();
        for (i, &o) in self.occ.iter().enumerate() {
            match o {
                0 => {}
                1 => parts.push(format!("{}", ModeLabel::from_index(i))),
                k => parts.push(format!("{}{}", k, ModeLabel::from_index(i))),
            }
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Canonical ordered basis for a fixed photon number.
pub struct Basis {
    n: u8,
    states: Vec<FockBasisState>,
    index_of: HashMap<[u8; MODE_COUNT], usize>,
    /// For n = 2: the (i ≤ j) mode-index pair of each basis state.
    pairs: Vec<(usize, usize)>,
}

impl Basis {
    fn build(n: u8) -> Basis {
        let mut states = Vec::new();
        let mut pairs = Vec::new();
        match n {
            0 => {
                states.push(FockBasisState::vacuum());
                pairs.push((0, 0));
            }
            1 => {
                for m in ModeLabel::all() {
                    states.push(FockBasisState::from_modes(&[m]));
                    pairs.push((m.index(), m.index()));
                }
            }
            2 => {
                for i in 0..MODE_COUNT {
                    for j in i..MODE_COUNT {
                        states.push(FockBasisState::from_modes(&[
                            ModeLabel::from_index(i),
                            ModeLabel::from_index(j),
                        ]));
                        pairs.push((i, j));
                    }
                }
            }
            _ => unreachable!("basis only built for n ≤ 2"),
        }
        let index_of = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.occ, k))
            .collect();
        Basis { n, states, index_of, pairs }
    }

    pub fn n_photons(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockBasisState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> FockBasisState {
        self.states[index]
    }

    pub fn index_of(&self, state: &FockBasisState) -> Option<usize> {
        self.index_of.get(&state.occ).copied()
    }

    fn pair(&self, index: usize) -> (usize, usize) {
        self.pairs[index]
    }
}

/// Shared basis catalog for the given photon number.
pub fn basis(n: u8) -> Result<&'static Basis> {
    static BASES: OnceLock<[Basis; 3]> = OnceLock::new();
    let all = BASES.get_or_init(|| [Basis::build(0), Basis::build(1), Basis::build(2)]);
    match n {
        0..=2 => Ok(&all[n as usize]),
        _ => Err(Error::UnsupportedPhotonNumber(n as u32)),
    }
}

/// Deterministic, duplicate-free enumeration of the n-photon basis states.
///
/// Length 1 for the vacuum, 8 for one photon, 36 for two photons.
pub fn enumerate_basis(n: u8) -> Result<&'static [FockBasisState]> {
    Ok(basis(n)?.states())
}

/// Scope of a mode unitary: one port (4×4) or both ports (8×8).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryScope {
    SinglePort,
    BothPorts,
}

/// A unitary matrix acting on mode creation operators.
///
/// Column `j` holds the image of mode `j`; single-photon states transform
/// by plain matrix-vector multiplication, two-photon states by permanents.
#[derive(Debug, Clone)]
pub struct ModeUnitary {
    dim: usize,
    m: Vec<Complex64>, // row-major
}

impl ModeUnitary {
    /// Validates unitarity to within [`UNITARY_TOL`].
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 4 && dim != 8 {
            return Err(Error::DimensionMismatch(format!(
                "mode unitary must be 4×4 or 8×8, got {dim}×{dim}"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let u = ModeUnitary { dim, m: entries };
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        ModeUnitary { dim, m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scope(&self) -> UnitaryScope {
        if self.dim == 4 {
            UnitaryScope::SinglePort
        } else {
            UnitaryScope::BothPorts
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row * self.dim + col]
    }

    /// Max entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    s += self.entry(i, k) * self.entry(j, k).conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// Matrix product `self · rhs` (rhs acts first).
    pub fn compose(&self, rhs: &ModeUnitary) -> Result<ModeUnitary> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}×{0} with {}×{1}",
                self.dim, rhs.dim
            )));
        }
        let d = self.dim;
        let mut m = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    s += self.entry(i, k) * rhs.entry(k, j);
                }
                m[i * d + j] = s;
            }
        }
        Ok(ModeUnitary { dim: d, m })
    }

    pub fn adjoint(&self) -> ModeUnitary {
        let d = self.dim;
        let mut m = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = self.entry(j, i).conj();
            }
        }
        ModeUnitary { dim: d, m }
    }

    /// Embeds a single-port 4×4 into 8×8, identity on the other port.
    pub fn embed_at(&self, port: Port) -> Result<ModeUnitary> {
        if self.dim != 4 {
            return Err(Error::DimensionMismatch(
                "only 4×4 single-port unitaries can be embedded".into(),
            ));
        }
        let mut u = ModeUnitary::identity(8);
        let off = 4 * port.index();
        for i in 0..4 {
            for j in 0..4 {
                u.m[(off + i) * 8 + (off + j)] = self.entry(i, j);
            }
        }
        Ok(u)
    }
}

/// A normalized pure state of fixed photon number (1 or 2).
///
/// Amplitudes are stored densely in the canonical basis order.
#[derive(Debug, Clone)]
pub struct PureState {
    n: u8,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from raw amplitudes in canonical basis order.
    pub fn from_amplitudes(n: u8, amps: Vec<Complex64>) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::UnsupportedPhotonNumber(n as u32));
        }
        let b = basis(n)?;
        if amps.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} amplitudes for n = {}, got {}",
                b.len(),
                n,
                amps.len()
            )));
        }
        let s = PureState { n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn n_photons(&self) -> u8 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, state: &FockBasisState) -> Complex64 {
        let b = basis(self.n).expect("basis exists");
        match b.index_of(state) {
            Some(i) => self.amps[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Zeroes amplitudes below [`PRUNE_EPS`] in magnitude. This moves any
    /// reported probability by less than 1e−12.
    pub fn prune(&mut self) {
        for a in &mut self.amps {
            if a.norm() < PRUNE_EPS {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Rephases so that the first nonzero amplitude in canonical order is
    /// real and positive. Makes snapshot outputs deterministic.
    pub fn rephase_canonical(&mut self) {
        if let Some(a) = self.amps.iter().find(|a| a.norm() > PRUNE_EPS) {
            let phase = a / a.norm();
            let corr = phase.conj();
            for amp in &mut self.amps {
                *amp *= corr;
            }
        }
    }

    /// Ports that carry any amplitude weight.
    pub fn occupied_ports(&self) -> Vec<Port> {
        let b = basis(self.n).expect("basis exists");
        let mut seen = [false; 2];
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > PRUNE_EPS {
                let per_port = b.state(i).photons_per_port();
                for p in 0..2 {
                    if per_port[p] > 0 {
                        seen[p] = true;
                    }
                }
            }
        }
        let mut out = Vec::new();
        if seen[0] {
            out.push(Port::P1);
        }
        if seen[1] {
            out.push(Port::P2);
        }
        out
    }

    /// True when every amplitude-carrying basis state has exactly one photon
    /// in each port.
    pub fn one_photon_per_port(&self) -> bool {
        if self.n != 2 {
            return false;
        }
        let b = basis(2).expect("basis exists");
        self.amps.iter().enumerate().all(|(i, a)| {
            a.norm() <= PRUNE_EPS || b.state(i).photons_per_port() == [1, 1]
        })
    }
}

/// A single photon at `port` with the given amplitudes over the four
/// internal modes `(Hh, Hv, Vh, Vv)`.
pub fn single_photon(port: Port, internal: [Complex64; 4]) -> Result<PureState> {
    let norm: f64 = internal.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); MODE_COUNT];
    let off = 4 * port.index();
    amps[off..off + 4].copy_from_slice(&internal);
    PureState::from_amplitudes(1, amps)
}

/// Product state of one photon at port 1 and one photon at port 2.
///
/// The inputs must occupy disjoint ports, so no bosonic bunching factors
/// arise; general symmetrization is only reachable through [`lift_unitary`].
pub fn combine(a: &PureState, b: &PureState) -> Result<PureState> {
    if a.n != 1 || b.n != 1 {
        return Err(Error::PhotonNumberMismatch(a.n, b.n));
    }
    if a.occupied_ports() != vec![Port::P1] || b.occupied_ports() != vec![Port::P2] {
        return Err(Error::PortCollision);
    }
    let b2 = basis(2)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); b2.len()];
    for i in 0..4 {
        for j in 4..MODE_COUNT {
            let amp = a.amps[i] * b.amps[j];
            if amp.norm() > 0.0 {
                let st = FockBasisState::from_modes(&[
                    ModeLabel::from_index(i),
                    ModeLabel::from_index(j),
                ]);
                amps[b2.index_of(&st).expect("pair in basis")] += amp;
            }
        }
    }
    PureState::from_amplitudes(2, amps)
}

/// Applies an 8×8 mode unitary to a one- or two-photon state.
///
/// One photon evolves by matrix-vector multiplication; two photons by the
/// permanent rule (closed-form for 2×2 submatrices).
pub fn lift_unitary(u: &ModeUnitary, s: &PureState) -> Result<PureState> {
    if u.dim != MODE_COUNT {
        return Err(Error::DimensionMismatch(format!(
            "lift requires an 8×8 unitary, got {}×{0}", u.dim
        )));
    }
    let out = match s.n {
        1 => {
            let mut amps = vec![Complex64::new(0.0, 0.0); MODE_COUNT];
            for (row, amp) in amps.iter_mut().enumerate() {
                for col in 0..MODE_COUNT {
                    *amp += u.entry(row, col) * s.amps[col];
                }
            }
            amps
        }
        2 => {
            let b2 = basis(2)?;
            let sqrt2 = std::f64::consts::SQRT_2;
            let mut amps = vec![Complex64::new(0.0, 0.0); b2.len()];
            for (si, &amp_in) in s.amps.iter().enumerate() {
                if amp_in.norm() == 0.0 {
                    continue;
                }
                let (j, k) = b2.pair(si);
                for (ti, amp) in amps.iter_mut().enumerate() {
                    let (p, q) = b2.pair(ti);
                    let coeff = if j != k && p != q {
                        u.entry(p, j) * u.entry(q, k) + u.entry(p, k) * u.entry(q, j)
                    } else if j == k && p != q {
                        sqrt2 * u.entry(p, j) * u.entry(q, j)
                    } else if j != k && p == q {
                        sqrt2 * u.entry(p, j) * u.entry(p, k)
                    } else {
                        u.entry(p, j) * u.entry(p, j)
                    };
                    *amp += coeff * amp_in;
                }
            }
            amps
        }
        n => return Err(Error::UnsupportedPhotonNumber(n as u32)),
    };
    let mut state = PureState { n: s.n, amps: out };
    debug_assert!((state.norm() - 1.0).abs() < UNITARY_TOL);
    state.prune();
    Ok(state)
}

/// Squared overlap `|⟨a|b⟩|²`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(overlap(a, b)?.norm_sqr())
}

/// Inner product `⟨a|b⟩`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.n != b.n {
        return Err(Error::PhotonNumberMismatch(a.n, b.n));
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// True iff the states agree up to one global phase: fidelity ≥ 1 − tol.
pub fn equal_up_to_global_phase(a: &PureState, b: &PureState, tol: f64) -> Result<bool> {
    Ok(fidelity(a, b)? >= 1.0 - tol)
}

/// Measurement probabilities over the full canonical basis (ideal
/// polarizing beam splitters, mode sorters and number-resolving detectors
/// amount to a direct occupation-basis readout).
pub fn born_probabilities(s: &PureState) -> Vec<(FockBasisState, f64)> {
    let b = basis(s.n).expect("basis exists");
    s.amps
        .iter()
        .enumerate()
        .map(|(i, a)| (b.state(i), a.norm_sqr()))
        .collect()
}

/// Samples one detection outcome. Identical seeds give identical draws.
pub fn sample_outcome<R: Rng>(s: &PureState, rng: &mut R) -> FockBasisState {
    let b = basis(s.n).expect("basis exists");
    let u: f64 = rng.gen::<f64>();
    let mut acc = 0.0;
    for (i, a) in s.amps.iter().enumerate() {
        acc += a.norm_sqr();
        if u < acc {
            return b.state(i);
        }
    }
    // Rounding can leave acc marginally below 1; fall back to the last
    // nonzero bin.
    b.state(
        s.amps
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(b.len() - 1),
    )
}

pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket(modes: &[&str]) -> FockBasisState {
        let labels: Vec<ModeLabel> = modes.iter().map(|m| m.parse().unwrap()).collect();
        FockBasisState::from_modes(&labels)
    }

    #[test]
    fn mode_index_round_trips() {
        for i in 0..MODE_COUNT {
            assert_eq!(ModeLabel::from_index(i).index(), i);
        }
        // Canonical order Hh < Hv < Vh < Vv within a port, port 1 first.
        let order: Vec<String> = ModeLabel::all().map(|m| m.to_string()).collect();
        assert_eq!(
            order,
            vec!["Hh1", "Hv1", "Vh1", "Vv1", "Hh2", "Hv2", "Vh2", "Vv2"]
        );
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_basis(0).unwrap().len(), 1);
        assert_eq!(enumerate_basis(1).unwrap().len(), 8);
        assert_eq!(enumerate_basis(2).unwrap().len(), 36);
        assert!(matches!(
            basis(3),
            Err(Error::UnsupportedPhotonNumber(3))
        ));
    }

    #[test]
    fn two_photon_count_matches_multiset_enumeration() {
        // Independent count: multisets of size 2 from 8 modes.
        let mut count = 0;
        for i in 0..MODE_COUNT {
            for j in i..MODE_COUNT {
                let _ = (i, j);
                count += 1;
            }
        }
        assert_eq!(count, 36);
        // Duplicate-free and deterministic.
        let states = enumerate_basis(2).unwrap();
        let unique: std::collections::HashSet<_> = states.iter().collect();
        assert_eq!(unique.len(), 36);
        assert_eq!(states, enumerate_basis(2).unwrap());
    }

    #[test]
    fn single_photon_embeds_components() {
        let s = single_photon(Port::P1, [cr(1.0), cr(0.0), cr(0.0), cr(0.0)]).unwrap();
        assert_eq!(s.amplitude(&ket(&["Hh1"])), cr(1.0));

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let zero_l = single_photon(Port::P1, [cr(0.0), cr(r), cr(-r), cr(0.0)]).unwrap();
        assert!((zero_l.amplitude(&ket(&["Hv1"])) - cr(r)).norm() < 1e-15);
        assert!((zero_l.amplitude(&ket(&["Vh1"])) - cr(-r)).norm() < 1e-15);

        let s2 = single_photon(Port::P2, [cr(0.0), cr(0.0), cr(0.0), cr(1.0)]).unwrap();
        assert_eq!(s2.amplitude(&ket(&["Vv2"])), cr(1.0));

        assert!(matches!(
            single_photon(Port::P1, [cr(0.9), cr(0.0), cr(0.0), cr(0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn combine_products() {
        let a = single_photon(Port::P1, [cr(1.0), cr(0.0), cr(0.0), cr(0.0)]).unwrap();
        let b = single_photon(Port::P2, [cr(1.0), cr(0.0), cr(0.0), cr(0.0)]).unwrap();
        let s = combine(&a, &b).unwrap();
        assert_eq!(s.amplitude(&ket(&["Hh1", "Hh2"])), cr(1.0));

        // |0_L⟩₁ ⊗ |1_L⟩₂ expands to four equal-magnitude terms.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let zero_l = single_photon(Port::P1, [cr(0.0), cr(r), cr(-r), cr(0.0)]).unwrap();
        let one_l = single_photon(Port::P2, [cr(r), cr(0.0), cr(0.0), cr(r)]).unwrap();
        let s = combine(&zero_l, &one_l).unwrap();
        for (m, sign) in [
            (["Hv1", "Hh2"], 1.0),
            (["Hv1", "Vv2"], 1.0),
            (["Vh1", "Hh2"], -1.0),
            (["Vh1", "Vv2"], -1.0),
        ] {
            assert!((s.amplitude(&ket(&m)) - cr(0.5 * sign)).norm() < 1e-15);
        }
        assert!((s.norm() - 1.0).abs() < 1e-12);

        // Superposition at port 1 against a basis photon at port 2.
        let plus = single_photon(Port::P1, [cr(r), cr(r), cr(0.0), cr(0.0)]).unwrap();
        let vv = single_photon(Port::P2, [cr(0.0), cr(0.0), cr(0.0), cr(1.0)]).unwrap();
        let s = combine(&plus, &vv).unwrap();
        assert!((s.amplitude(&ket(&["Hh1", "Vv2"])) - cr(r)).norm() < 1e-15);
        assert!((s.amplitude(&ket(&["Hv1", "Vv2"])) - cr(r)).norm() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-12);

        // Same-port inputs are rejected.
        let b1 = single_photon(Port::P1, [cr(1.0), cr(0.0), cr(0.0), cr(0.0)]).unwrap();
        assert!(matches!(combine(&zero_l, &b1), Err(Error::PortCollision)));
    }

    fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> ModeUnitary {
        // QR of a complex Gaussian matrix via modified Gram-Schmidt.
        use rand_distr::StandardNormal;
        let mut gauss = || -> f64 { rand::Rng::sample(rng, StandardNormal) };
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| c(gauss(), gauss())).collect())
            .collect();
        for j in 0..dim {
            let (done, rest) = cols.split_at_mut(j);
            let col = &mut rest[0];
            for prev in done.iter() {
                let proj: Complex64 =
                    prev.iter().zip(col.iter()).map(|(p, x)| p.conj() * x).sum();
                for (x, p) in col.iter_mut().zip(prev) {
                    *x -= proj * p;
                }
            }
            let norm: f64 = col.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in col.iter_mut() {
                *a /= norm;
            }
        }
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[i * dim + j] = *v;
            }
        }
        ModeUnitary::new(dim, m).expect("Gram-Schmidt output is unitary")
    }

    fn random_state(n: u8, rng: &mut ChaCha8Rng) -> PureState {
        use rand_distr::StandardNormal;
        let len = basis(n).unwrap().len();
        let mut gauss = || -> f64 { rand::Rng::sample(rng, StandardNormal) };
        let mut amps: Vec<Complex64> = (0..len).map(|_| c(gauss(), gauss())).collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        PureState::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn lift_identity_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1u8, 2] {
            let s = random_state(n, &mut rng);
            let out = lift_unitary(&ModeUnitary::identity(8), &s).unwrap();
            assert!(fidelity(&s, &out).unwrap() > 1.0 - 1e-14);
        }
    }

    #[test]
    fn lift_preserves_norm_for_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let u = haar_unitary(8, &mut rng);
            for n in [1u8, 2] {
                let s = random_state(n, &mut rng);
                let out = lift_unitary(&u, &s).unwrap();
                assert!((out.norm() - 1.0).abs() < UNITARY_TOL);
            }
        }
    }

    #[test]
    fn lift_is_homomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let u = haar_unitary(8, &mut rng);
            let v = haar_unitary(8, &mut rng);
            let uv = u.compose(&v).unwrap();
            for n in [1u8, 2] {
                let s = random_state(n, &mut rng);
                let once = lift_unitary(&uv, &s).unwrap();
                let twice = lift_unitary(&u, &lift_unitary(&v, &s).unwrap()).unwrap();
                assert!(fidelity(&once, &twice).unwrap() > 1.0 - 1e-10);
                let diff: f64 = once
                    .amplitudes()
                    .iter()
                    .zip(twice.amplitudes())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(diff < 1e-10);
            }
        }
    }

    #[test]
    fn fidelity_and_phase_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let s = random_state(2, &mut rng);
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-14);

        let phase = c(0.5, 3.0f64.sqrt() / 2.0); // e^{iπ/3}
        let rotated = PureState::from_amplitudes(
            2,
            s.amplitudes().iter().map(|a| a * phase).collect(),
        )
        .unwrap();
        assert!(equal_up_to_global_phase(&s, &rotated, 1e-12).unwrap());

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let zero_l = single_photon(Port::P1, [cr(0.0), cr(r), cr(-r), cr(0.0)]).unwrap();
        let one_l = single_photon(Port::P1, [cr(r), cr(0.0), cr(0.0), cr(r)]).unwrap();
        assert!(fidelity(&zero_l, &one_l).unwrap() < 1e-14);

        let other = random_state(1, &mut rng);
        assert!(matches!(
            fidelity(&s, &other),
            Err(Error::PhotonNumberMismatch(2, 1))
        ));
    }

    #[test]
    fn born_probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in [1u8, 2] {
            let s = random_state(n, &mut rng);
            let probs = born_probabilities(&s);
            let total: f64 = probs.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }

        let s = single_photon(Port::P1, [cr(1.0), cr(0.0), cr(0.0), cr(0.0)]).unwrap();
        let probs = born_probabilities(&s);
        for (state, p) in probs {
            if state == ket(&["Hh1"]) {
                assert!((p - 1.0).abs() < 1e-14);
            } else {
                assert!(p < 1e-14);
            }
        }

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let zero_l = single_photon(Port::P1, [cr(0.0), cr(r), cr(-r), cr(0.0)]).unwrap();
        for (state, p) in born_probabilities(&zero_l) {
            let expect = if state == ket(&["Hv1"]) || state == ket(&["Vh1"]) {
                0.5
            } else {
                0.0
            };
            assert!((p - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let s = random_state(2, &mut rng);
        let mut r1 = ChaCha8Rng::seed_from_u64(99);
        let mut r2 = ChaCha8Rng::seed_from_u64(99);
        let draws1: Vec<_> = (0..64).map(|_| sample_outcome(&s, &mut r1)).collect();
        let draws2: Vec<_> = (0..64).map(|_| sample_outcome(&s, &mut r2)).collect();
        assert_eq!(draws1, draws2);
    }

    #[test]
    fn pruning_leaves_probabilities_intact() {
        let tiny = 1e-15;
        let big = (1.0f64 - tiny * tiny).sqrt();
        let mut s = single_photon(Port::P1, [cr(big), cr(tiny), cr(0.0), cr(0.0)]).unwrap();
        let before: Vec<f64> = born_probabilities(&s).iter().map(|(_, p)| *p).collect();
        s.prune();
        let after: Vec<f64> = born_probabilities(&s).iter().map(|(_, p)| *p).collect();
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(s.amplitude(&ket(&["Hv1"])), cr(0.0));
    }

    proptest! {
        #[test]
        fn mode_label_string_round_trip(i in 0usize..8) {
            let m = ModeLabel::from_index(i);
            let parsed: ModeLabel = m.to_string().parse().unwrap();
            prop_assert_eq!(parsed, m);
        }

        #[test]
        fn overlap_is_phase_covariant(theta in 0.0f64..std::f64::consts::TAU) {
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            let s = random_state(1, &mut rng);
            let phase = Complex64::from_polar(1.0, theta);
            let t = PureState::from_amplitudes(
                1,
                s.amplitudes().iter().map(|a| a * phase).collect(),
            ).unwrap();
            prop_assert!((fidelity(&s, &t).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
