//! Optical elements and channels as mode unitaries.
//!
//! All phase and angle conventions are fixed once, here, so that the
//! composition identities used elsewhere hold exactly:
//!
//! | element | matrix (acting factor) |
//! |---|---|
//! | `polarization_rotation(φ)` | `[[cos φ, −sin φ], [sin φ, cos φ]]` on (H, V) |
//! | `half_wave_plate(α)` | `[[cos 2α, −sin 2α], [−sin 2α, −cos 2α]]` on (H, V) |
//! | `quarter_wave_plate(α)` | `Rot(−α)·diag(1, i)·Rot(α)` on (H, V) |
//! | `dove_prism(α)` | `[[cos 4α, −sin 4α], [−sin 4α, −cos 4α]]` on (h, v) |
//! | `mode_converter_hadamard()` | `[[1, 1], [1, −1]]/√2` on (h, v) |
//! | `beam_splitter()` | per internal mode: `Rot(∓π/4)` across ports (− for v, + for h) |
//!
//! Waveplate angles are measured so that rotating an element by `α` maps its
//! matrix `M(0)` to `Rot(−α)·M(0)·Rot(α)`; with this sign choice the plate
//! pair `HWP(0)·HWP(φ/2)` equals `polarization_rotation(φ)` with no residual
//! phase, and `QWP(α)² = HWP(α)` exactly.
//!
//! The beam splitter is a balanced coupler with real coupling whose sign is
//! opposite for `h`- and `v`-carrying modes; reflection imprints an extra π
//! phase on the `h` transverse mode. Applying it twice transfers every
//! photon to the opposite port; four passes return the identity up to a
//! global sign.

use num_complex::Complex64;

use crate::fock::{cr, ModeUnitary, Pol, Tr};

fn kron2(a: &[Complex64; 4], b: &[Complex64; 4]) -> Vec<Complex64> {
    // 4×4 = (pol 2×2) ⊗ (tr 2×2); index = 2·pol + tr.
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    for pr in 0..2 {
        for pc in 0..2 {
            for tr in 0..2 {
                for tc in 0..2 {
                    m[(2 * pr + tr) * 4 + (2 * pc + tc)] = a[pr * 2 + pc] * b[tr * 2 + tc];
                }
            }
        }
    }
    m
}

fn rot2(theta: f64) -> [Complex64; 4] {
    let (s, c) = theta.sin_cos();
    [cr(c), cr(-s), cr(s), cr(c)]
}

fn mul2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

const IDENT2: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 0.0),
    Complex64::new(0.0, 0.0),
    Complex64::new(1.0, 0.0),
];

fn single_port(m: Vec<Complex64>) -> ModeUnitary {
    ModeUnitary::new(4, m).expect("analytic element is unitary")
}

/// Rotates an element's 2×2 matrix by the artifact's angle convention.
fn rotated(m0: [Complex64; 4], alpha: f64) -> [Complex64; 4] {
    mul2(&rot2(-alpha), &mul2(&m0, &rot2(alpha)))
}

/// Polarization rotation: `|H⟩ → cos φ|H⟩ + sin φ|V⟩`,
/// `|V⟩ → −sin φ|H⟩ + cos φ|V⟩`, identity on the transverse factor.
pub fn polarization_rotation(phi: f64) -> ModeUnitary {
    single_port(kron2(&rot2(phi), &IDENT2))
}

/// Half-wave plate with fast axis at `alpha` (polarization factor only).
pub fn half_wave_plate(alpha: f64) -> ModeUnitary {
    single_port(kron2(&rotated([cr(1.0), cr(0.0), cr(0.0), cr(-1.0)], alpha), &IDENT2))
}

/// Quarter-wave plate with fast axis at `alpha` (polarization factor only).
pub fn quarter_wave_plate(alpha: f64) -> ModeUnitary {
    let i = Complex64::new(0.0, 1.0);
    single_port(kron2(
        &rotated([cr(1.0), cr(0.0), cr(0.0), i], alpha),
        &IDENT2,
    ))
}

/// Dove prism at `alpha`: mirror of the transverse qubit about axis 2α.
pub fn dove_prism(alpha: f64) -> ModeUnitary {
    single_port(kron2(
        &IDENT2,
        &rotated([cr(1.0), cr(0.0), cr(0.0), cr(-1.0)], 2.0 * alpha),
    ))
}

/// Hadamard on the transverse qubit: `|h⟩ → (|h⟩+|v⟩)/√2`,
/// `|v⟩ → (|h⟩−|v⟩)/√2`.
pub fn mode_converter_hadamard() -> ModeUnitary {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    single_port(kron2(&IDENT2, &[cr(r), cr(r), cr(r), cr(-r)]))
}

/// Hadamard on the polarization qubit (a half-wave plate at −π/8).
pub fn polarization_hadamard() -> ModeUnitary {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    single_port(kron2(&[cr(r), cr(r), cr(r), cr(-r)], &IDENT2))
}

/// X-rotation of the transverse qubit, `exp(−i θ/2 σ̂x)` on (h, v).
pub fn spatial_x_rotation(theta: f64) -> ModeUnitary {
    let c = cr((theta / 2.0).cos());
    let ms = Complex64::new(0.0, -(theta / 2.0).sin());
    single_port(kron2(&IDENT2, &[c, ms, ms, c]))
}

/// Controlled-NOT flipping the polarization qubit when the transverse qubit
/// sits at `active`.
pub fn cnot_pol_target(active: Tr) -> ModeUnitary {
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    for pol in 0..2usize {
        for tr in 0..2usize {
            let is_active = (tr == 0) == matches!(active, Tr::H);
            let out_pol = if is_active { 1 - pol } else { pol };
            m[(2 * out_pol + tr) * 4 + (2 * pol + tr)] = cr(1.0);
        }
    }
    single_port(m)
}

/// Controlled-NOT flipping the transverse qubit when the polarization qubit
/// sits at `active`.
pub fn cnot_spatial_target(active: Pol) -> ModeUnitary {
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    for pol in 0..2usize {
        for tr in 0..2usize {
            let is_active = (pol == 0) == matches!(active, Pol::H);
            let out_tr = if is_active { 1 - tr } else { tr };
            m[(2 * pol + out_tr) * 4 + (2 * pol + tr)] = cr(1.0);
        }
    }
    single_port(m)
}

/// The collective-rotation channel: the same SO(2) rotation applied
/// simultaneously to the polarization and transverse factors of both ports.
/// Models a receiver whose frame is rotated by `theta` about the propagation
/// axis.
pub fn collective_rotation(theta: f64) -> ModeUnitary {
    let r4 = kron2(&rot2(theta), &rot2(theta));
    let mut m = vec![Complex64::new(0.0, 0.0); 64];
    for port in 0..2 {
        for i in 0..4 {
            for j in 0..4 {
                m[(4 * port + i) * 8 + (4 * port + j)] = r4[i * 4 + j];
            }
        }
    }
    ModeUnitary::new(8, m).expect("rotation is unitary")
}

/// Same rotation restricted to one port (identity on the other).
pub fn port_rotation(theta: f64, port: crate::fock::Port) -> ModeUnitary {
    single_port(kron2(&rot2(theta), &rot2(theta)))
        .embed_at(port)
        .expect("4×4 embeds")
}

/// Balanced 50-50 beam splitter across the two ports.
///
/// Each internal mode couples the two ports through a real 2×2 rotation of
/// mixing angle π/4; the coupling sign is opposite for `h`- and `v`-carrying
/// modes (reflection adds π to the `h` transverse mode).
pub fn beam_splitter() -> ModeUnitary {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = vec![Complex64::new(0.0, 0.0); 64];
    for internal in 0..4usize {
        let is_h = internal % 2 == 0;
        let a = internal; // port-1 row/col
        let b = internal + 4; // port-2 row/col
        // v-modes: Rot(−π/4); h-modes: Rot(+π/4).
        let s = if is_h { 1.0 } else { -1.0 };
        m[a * 8 + a] = cr(r);
        m[a * 8 + b] = cr(-s * r);
        m[b * 8 + a] = cr(s * r);
        m[b * 8 + b] = cr(r);
    }
    ModeUnitary::new(8, m).expect("coupler is unitary")
}
