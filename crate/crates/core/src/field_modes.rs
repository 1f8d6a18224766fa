//! Mode functions and two-point correlators for the quantized magnetic
//! field near a perfectly reflecting mirror, plus wavepacket overlap
//! integrals at the mirror surface.
//!
//! Two coordinate conventions coexist, following the source expressions:
//! the standing-wave mode [`mode_b`] puts the mirror at x = 0, while the
//! image construction in [`vacuum_two_point`] reflects through the z = 0
//! plane. Each operation documents which roles its coordinates play; the
//! conventions are not reconciled here.

use num_complex::Complex64;
use thiserror::Error;

use crate::mirror_fluctuations::LightState;
use crate::quad;

/// Errors from mode and correlator evaluation.
#[derive(Debug, Error)]
pub enum FieldModeError {
    /// The two points are null-separated within tolerance; pointwise
    /// two-point functions diverge there and the regularized integrators
    /// must be used instead.
    #[error("points are light-cone separated within tolerance (|Δt² − |Δx|²| = {interval:.3e}); use the regularized integrals")]
    SingularSeparation { interval: f64 },
    /// The operation needs a coherent state.
    #[error("operation requires a coherent state, got {0}")]
    UnsupportedState(&'static str),
    /// The state's mode frequency does not match the box mode.
    #[error("state frequency {state_omega} does not match mode frequency {mode_omega}")]
    FrequencyMismatch { state_omega: f64, mode_omega: f64 },
    /// A wavepacket parameter is outside its contract.
    #[error("invalid wavepacket: {0}")]
    PacketContract(String),
}

type Result<T> = std::result::Result<T, FieldModeError>;

/// A point (t, x, y, z) in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        SpacetimePoint { t, x, y, z }
    }
}

/// A box-normalized standing-wave mode of angular frequency ω in a
/// quantization volume V. The normalization coefficient is C = √(ω/2V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxMode {
    omega: f64,
    volume: f64,
}

impl BoxMode {
    pub fn new(omega: f64, volume: f64) -> Self {
        assert!(omega >= 0.0 && volume > 0.0, "need omega >= 0 and volume > 0");
        BoxMode { omega, volume }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Normalization coefficient C with C² = ω/(2V).
    pub fn normalization(&self) -> f64 {
        (self.omega / (2.0 * self.volume)).sqrt()
    }
}

/// Standing-wave magnetic mode function −2C cos(ωx) e^{−iωt} for a mirror
/// in the x = 0 plane.
pub fn mode_b(mode: &BoxMode, p: SpacetimePoint) -> Complex64 {
    let c = mode.normalization();
    let spatial = -2.0 * c * (mode.omega * p.x).cos();
    Complex64::from_polar(1.0, -mode.omega * p.t) * spatial
}

const LIGHT_CONE_TOLERANCE: f64 = 1e-9;

fn empty_space_two_point(p1: SpacetimePoint, p2: SpacetimePoint) -> Result<f64> {
    let dt = p1.t - p2.t;
    let dx = p1.x - p2.x;
    let dy = p1.y - p2.y;
    let dz = p1.z - p2.z;
    let spatial2 = dx * dx + dy * dy + dz * dz;
    let interval = dt * dt - spatial2;
    let scale2 = (dt * dt + spatial2).max(f64::MIN_POSITIVE);
    if interval.abs() < LIGHT_CONE_TOLERANCE * scale2 {
        return Err(FieldModeError::SingularSeparation {
            interval: interval.abs(),
        });
    }
    let numerator = dt * dt + spatial2 - 2.0 * dz * dz;
    Ok(numerator / (std::f64::consts::PI.powi(2) * interval.powi(3)))
}

/// Vacuum two-point function of the z-component of the magnetic field,
/// `(Δt² + |Δx|² − 2Δz²) / (π² (Δt² − |Δx|²)³)`, optionally adding the
/// image term for a perfect mirror in the z = 0 plane (the same expression
/// with z₂ → −z₂).
pub fn vacuum_two_point(
    p1: SpacetimePoint,
    p2: SpacetimePoint,
    with_mirror: bool,
) -> Result<f64> {
    let direct = empty_space_two_point(p1, p2)?;
    if !with_mirror {
        return Ok(direct);
    }
    let image_p2 = SpacetimePoint { z: -p2.z, ..p2 };
    let image = empty_space_two_point(p1, image_p2)?;
    Ok(direct + image)
}

fn coherent_parts(state: &LightState) -> Result<(f64, f64, f64)> {
    match state {
        LightState::Coherent {
            omega,
            amplitude,
            phase,
        } => Ok((*omega, *amplitude, *phase)),
        LightState::Number { .. } => Err(FieldModeError::UnsupportedState("a number state")),
    }
}

fn check_frequency(mode: &BoxMode, omega: f64) -> Result<()> {
    if (omega - mode.omega).abs() > 1e-12 * mode.omega.max(1.0) {
        return Err(FieldModeError::FrequencyMismatch {
            state_omega: omega,
            mode_omega: mode.omega,
        });
    }
    Ok(())
}

/// Normal-ordered field product in a coherent state of the standing mode,
/// `16 C² |z|² cos(ωt₁ + φ) cos(ωt₂ + φ) cos(ωx₁) cos(ωx₂)`.
pub fn normal_ordered_bb(
    mode: &BoxMode,
    state: &LightState,
    p1: SpacetimePoint,
    p2: SpacetimePoint,
) -> Result<f64> {
    let (omega, amplitude, phase) = coherent_parts(state)?;
    check_frequency(mode, omega)?;
    let c2 = mode.omega / (2.0 * mode.volume);
    Ok(16.0
        * c2
        * amplitude
        * amplitude
        * (mode.omega * p1.t + phase).cos()
        * (mode.omega * p2.t + phase).cos()
        * (mode.omega * p1.x).cos()
        * (mode.omega * p2.x).cos())
}

/// State-dependent part of the stress-component correlator at the mirror:
/// the normal-ordered product times the mirrored vacuum two-point
/// function. Valid for polarization along y with both points on the
/// mirror surface.
pub fn cross_term_txx(
    mode: &BoxMode,
    state: &LightState,
    p1: SpacetimePoint,
    p2: SpacetimePoint,
) -> Result<f64> {
    let normal = normal_ordered_bb(mode, state, p1, p2)?;
    let vacuum = vacuum_two_point(p1, p2, true)?;
    Ok(normal * vacuum)
}

/// Which traveling piece of a reflected wavepacket to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Moving toward the mirror, a function of t − x.
    Incident,
    /// Moving away from the mirror, a function of t + x.
    Reflected,
}

/// A narrowband Gaussian wavepacket mode bouncing off a mirror at x = 0,
/// `u = u_I + u_R` with `u_R(t, x) = u_I(t, −x)`.
///
/// The envelope is Gaussian with bandwidth σ around the carrier ω₀,
/// truncated at ±8/σ, with unit transverse cross-section. The incident
/// piece carries the whole mode norm ∫|u_I|² d³x = ω₀/2, which fixes the
/// peak amplitude to (ω₀ σ / 2√π)^{1/2}.
#[derive(Debug, Clone, Copy)]
pub struct Wavepacket {
    center_frequency: f64,
    bandwidth: f64,
    amplitude: f64,
}

impl Wavepacket {
    /// Sharply-peaked contract: σ/ω₀ ≤ 0.1.
    pub fn new(center_frequency: f64, bandwidth: f64) -> Result<Self> {
        if !(center_frequency > 0.0) || !(bandwidth > 0.0) {
            return Err(FieldModeError::PacketContract(format!(
                "need positive center frequency and bandwidth, got ω₀ = {center_frequency}, σ = {bandwidth}"
            )));
        }
        if bandwidth / center_frequency > 0.1 {
            return Err(FieldModeError::PacketContract(format!(
                "packet is not sharply peaked: σ/ω₀ = {} > 0.1",
                bandwidth / center_frequency
            )));
        }
        let amplitude =
            (center_frequency * bandwidth / (2.0 * std::f64::consts::PI.sqrt())).sqrt();
        let packet = Wavepacket {
            center_frequency,
            bandwidth,
            amplitude,
        };
        // the norm is analytic, but hold the constructed packet to its
        // contract with an actual quadrature
        let norm = packet.incident_norm();
        let target = center_frequency / 2.0;
        if ((norm - target) / target).abs() > 1e-6 {
            return Err(FieldModeError::PacketContract(format!(
                "numerical norm {norm} deviates from ω₀/2 = {target}"
            )));
        }
        Ok(packet)
    }

    pub fn center_frequency(&self) -> f64 {
        self.center_frequency
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Envelope half-width of the truncated packet in its comoving
    /// argument (t ∓ x).
    pub fn half_duration(&self) -> f64 {
        8.0 / self.bandwidth
    }

    /// One traveling piece at (t, x).
    pub fn evaluate(&self, direction: Direction, t: f64, x: f64) -> Complex64 {
        let arg = match direction {
            Direction::Incident => t - x,
            Direction::Reflected => t + x,
        };
        if arg.abs() > self.half_duration() {
            return Complex64::new(0.0, 0.0);
        }
        let envelope = self.amplitude * (-0.5 * (self.bandwidth * arg).powi(2)).exp();
        Complex64::from_polar(envelope, -self.center_frequency * arg)
    }

    /// The full mode u_I + u_R at (t, x).
    pub fn evaluate_total(&self, t: f64, x: f64) -> Complex64 {
        self.evaluate(Direction::Incident, t, x) + self.evaluate(Direction::Reflected, t, x)
    }

    /// ∫ |u_I|² d³x by quadrature (equals ω₀/2 by construction).
    pub fn incident_norm(&self) -> f64 {
        let rule = quad::GaussLegendre::new(15);
        let half = self.half_duration();
        let sigma = self.bandwidth;
        let edges = quad::uniform_edges(-half, half, 0.25 / sigma);
        rule.panels(&edges, &mut |s| {
            self.amplitude * self.amplitude * (-(sigma * s).powi(2)).exp()
        })
    }
}

/// The four pieces of the mirror-surface overlap integral
/// ∫ u₀ u₀* dt da: |u_I|², |u_R|², and the two cross pieces. All four are
/// equal at the mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapPieces {
    pub incident_incident: f64,
    pub reflected_reflected: f64,
    pub incident_reflected: f64,
    pub reflected_incident: f64,
}

impl OverlapPieces {
    pub fn total(&self) -> f64 {
        self.incident_incident
            + self.reflected_reflected
            + self.incident_reflected
            + self.reflected_incident
    }
}

/// Time-area integral of |u₀|² on the mirror surface, piece by piece.
/// Each piece integrates to ω₀/2, so the total is 2ω₀.
pub fn overlap_pieces_at_mirror(packet: &Wavepacket) -> OverlapPieces {
    let rule = quad::GaussLegendre::new(15);
    let half = packet.half_duration();
    let edges = quad::uniform_edges(-half, half, 0.25 / packet.bandwidth);
    let mut piece = |da: Direction, db: Direction| {
        rule.panels(&edges, &mut |t| {
            let ua = packet.evaluate(da, t, 0.0);
            let ub = packet.evaluate(db, t, 0.0);
            (ua * ub.conj()).re
        })
    };
    OverlapPieces {
        incident_incident: piece(Direction::Incident, Direction::Incident),
        reflected_reflected: piece(Direction::Reflected, Direction::Reflected),
        incident_reflected: piece(Direction::Incident, Direction::Reflected),
        reflected_incident: piece(Direction::Reflected, Direction::Incident),
    }
}

/// Time-area integral of |u₀|² on the mirror surface; equals 2ω₀ within
/// quadrature tolerance.
pub fn overlap_integral_at_mirror(packet: &Wavepacket) -> f64 {
    overlap_pieces_at_mirror(packet).total()
}
