//! Regularized singular integrals of the stress-tensor cross-term
//! correlator.
//!
//! The central object is the double time integral
//!
//! ```text
//! J = ∫₀^τ dt₁ ∫₀^τ dt₂  (u² + a) / (u² − b²)³ · cos(ωt₁) cos(ωt₂),   u = t₁ − t₂,
//! ```
//!
//! whose integrand carries third-order poles at u = ±b. Three views of it
//! live here and cross-validate each other:
//!
//! * [`j_closed_form`]: the large-τ closed form obtained from the residues
//!   of the poles (linear in τ).
//! * [`residue_term`]: the four individual contour terms whose assembly
//!   reproduces the closed form.
//! * [`j_numeric_oracle`]: direct quadrature of the double integral after
//!   the u,v change of variables, with the poles handled by averaging the
//!   two complex-displacement prescriptions and extrapolating the
//!   displacement to zero.
//!
//! A generic regularizer for quartic coincidence singularities,
//! [`regularized_quartic_integral`], handles the b → 0 limit where the
//! kernel degenerates to 1/(t₁ − t₂)⁴.

use num_complex::Complex64;
use thiserror::Error;

use crate::quad;

/// Errors from the singular-integral evaluators.
#[derive(Debug, Error)]
pub enum SingularIntegralError {
    /// Coincident transverse points. The closed form carries a b⁻⁵
    /// prefactor; callers must integrate over the mirror area before this
    /// limit is meaningful.
    #[error("degenerate separation b = 0: integrate over the mirror area before taking coincident transverse points")]
    DegenerateSeparation,
    /// The (a, b) pair cannot arise from transverse coordinates.
    #[error("invalid separation: need b >= 0 and |a| <= b^2, got a = {a}, b = {b}")]
    InvalidSeparation { a: f64, b: f64 },
    /// A quadrature-control or domain parameter is unusable.
    #[error("invalid quadrature setup: {0}")]
    InvalidControl(String),
    /// The displacement extrapolation did not settle within tolerance.
    #[error(
        "quadrature accuracy {estimated:.3e} above tolerance {tolerance:.3e}; \
         increase nodes_per_period or epsilon_levels"
    )]
    Accuracy { estimated: f64, tolerance: f64 },
    /// A sampled envelope fails the switch-on/switch-off contract.
    #[error("envelope does not vanish at the grid boundary: max boundary magnitude {boundary:.3e} exceeds {limit:.3e}")]
    BoundaryContract { boundary: f64, limit: f64 },
    /// Too few grid nodes for the differentiation stencil.
    #[error("kernel grid needs at least {needed} nodes per axis, got {got}")]
    GridTooSmall { needed: usize, got: usize },
}

type Result<T> = std::result::Result<T, SingularIntegralError>;

/// Transverse-geometry parameters of the cross-term kernel.
///
/// For two points separated by `dy` and `dz` on the mirror plane,
/// `a = dz² − dy²` and `b² = dy² + dz²`, so `b` is the transverse distance
/// and `|a| <= b²` always.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationParams {
    a: f64,
    b: f64,
}

impl SeparationParams {
    /// Build from the (a, b) pair directly, rejecting combinations that
    /// cannot come from real transverse coordinates.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b >= 0.0) || !a.is_finite() || a.abs() > b * b * (1.0 + 1e-12) + f64::MIN_POSITIVE {
            return Err(SingularIntegralError::InvalidSeparation { a, b });
        }
        Ok(SeparationParams { a, b })
    }

    /// Build from transverse coordinate differences.
    pub fn from_transverse(dy: f64, dz: f64) -> Self {
        SeparationParams {
            a: dz * dz - dy * dy,
            b: dy.hypot(dz),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Closed form of the kernel integral in the large-τ regime,
///
/// ```text
/// J = (2πτ / 32 b⁵) { [b²(b² + a)ω² + b² − 3a] sin(bω) + ωb(3a − b²) cos(bω) },
/// ```
///
/// valid for τ ≫ 1/ω and τ ≫ b. Linear in τ; the finite-τ remainder is
/// O(1) and is what [`j_numeric_oracle`] retains.
pub fn j_closed_form(sep: SeparationParams, omega: f64, tau: f64) -> Result<f64> {
    if sep.b == 0.0 {
        return Err(SingularIntegralError::DegenerateSeparation);
    }
    let (a, b) = (sep.a, sep.b);
    let (s, c) = (b * omega).sin_cos();
    let bracket = (b * b * (b * b + a) * omega * omega + b * b - 3.0 * a) * s
        + omega * b * (3.0 * a - b * b) * c;
    Ok(2.0 * std::f64::consts::PI * tau / (32.0 * b.powi(5)) * bracket)
}

/// Sign selector for the contour prescription and the exponential factor
/// of a residue term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One of the four third-order-pole contour terms of the kernel integral.
///
/// `prescription` selects the sign of the imaginary displacement of the
/// pole pair (which half plane each pole is pushed into) and `exponent`
/// the sign in the factor e^{±iωu}. Each term is
///
/// ```text
/// ±πi · d²/du² [ (u² + a) / (u + p)³ · e^{±iωu} ]  at  u = p,
/// ```
///
/// where the evaluation point is `p = +b` when the prescription and
/// exponent signs agree and `p = −b` otherwise, and the prefactor sign is
/// the exponent sign. The assembly `(τ/8) Σ` over all four terms
/// reproduces [`j_closed_form`].
pub fn residue_term(
    prescription: Sign,
    exponent: Sign,
    sep: SeparationParams,
    omega: f64,
) -> Result<Complex64> {
    if sep.b == 0.0 {
        return Err(SingularIntegralError::DegenerateSeparation);
    }
    let a = sep.a;
    let e = exponent.value();
    let p = if prescription == exponent { sep.b } else { -sep.b };

    // (u² + a)/(u + p)³ and its first two derivatives at u = p
    let g0 = (p * p + a) / (8.0 * p.powi(3));
    let g1 = (p * p - 3.0 * a) / (16.0 * p.powi(4));
    let g2 = (3.0 * a - p * p) / (8.0 * p.powi(5));

    let i_omega = Complex64::new(0.0, e * omega);
    let second = Complex64::new(g2, 0.0) + 2.0 * i_omega * g1 + i_omega * i_omega * g0;
    let phase = (i_omega * p).exp();
    let prefactor = Complex64::new(0.0, e * std::f64::consts::PI);
    Ok(prefactor * second * phase)
}

/// Assemble the four contour terms into the kernel integral,
/// `(τ/8) (I₊₁ + I₊₂ + I₋₁ + I₋₂)`. Agrees with [`j_closed_form`] to
/// rounding; the imaginary parts cancel pairwise.
pub fn assembled_residue_j(sep: SeparationParams, omega: f64, tau: f64) -> Result<f64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for prescription in [Sign::Plus, Sign::Minus] {
        for exponent in [Sign::Plus, Sign::Minus] {
            sum += residue_term(prescription, exponent, sep, omega)?;
        }
    }
    Ok(tau / 8.0 * sum.re)
}

/// Controls for [`j_numeric_oracle`].
#[derive(Debug, Clone)]
pub struct QuadratureControl {
    /// Quadrature nodes per oscillation period 2π/ω; at least 20.
    pub nodes_per_period: u32,
    /// Largest pole displacement as a fraction of b.
    pub epsilon_scale: f64,
    /// Number of displacement halvings used for the extrapolation.
    pub epsilon_levels: u32,
    /// Gauss-Legendre order per panel.
    pub panel_order: u32,
    /// Relative accuracy demanded of the extrapolation, against the τ-scale
    /// of the answer.
    pub relative_tolerance: f64,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        QuadratureControl {
            nodes_per_period: 20,
            epsilon_scale: 1.0 / 32.0,
            epsilon_levels: 4,
            panel_order: 15,
            relative_tolerance: 1e-3,
        }
    }
}

impl QuadratureControl {
    fn validate(&self) -> Result<()> {
        if self.nodes_per_period < 20 {
            return Err(SingularIntegralError::InvalidControl(format!(
                "nodes_per_period must be >= 20 to resolve the oscillation, got {}",
                self.nodes_per_period
            )));
        }
        if !(self.epsilon_scale > 0.0 && self.epsilon_scale <= 0.5) {
            return Err(SingularIntegralError::InvalidControl(format!(
                "epsilon_scale must lie in (0, 0.5], got {}",
                self.epsilon_scale
            )));
        }
        if self.epsilon_levels < 2 {
            return Err(SingularIntegralError::InvalidControl(
                "need at least 2 epsilon levels to extrapolate".into(),
            ));
        }
        if self.panel_order < 4 || self.panel_order > 40 {
            return Err(SingularIntegralError::InvalidControl(format!(
                "panel_order must lie in [4, 40], got {}",
                self.panel_order
            )));
        }
        if !(self.relative_tolerance > 0.0) {
            return Err(SingularIntegralError::InvalidControl(
                "relative_tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// After integrating out v = t₁ + t₂, the kernel integral collapses to
/// a single u integral against this weight.
fn v_reduced_weight(u: f64, omega: f64, tau: f64) -> f64 {
    if omega == 0.0 {
        2.0 * (tau - u)
    } else {
        (tau - u) * (omega * u).cos()
            + ((omega * (2.0 * tau - u)).sin() - (omega * u).sin()) / (2.0 * omega)
    }
}

/// Kernel factor with the pole pair displaced to b ± iε. The average of
/// the two displacement prescriptions equals the real part of either one,
/// since they are complex conjugates.
fn displaced_kernel(u: f64, a: f64, b: f64, eps: f64) -> f64 {
    // u² − (b + iε)²
    let d = Complex64::new(u * u - b * b + eps * eps, -2.0 * b * eps);
    let d3 = d * d * d;
    ((u * u + a) / d3).re
}

/// Direct quadrature of the kernel double integral over `[0, τ]²`.
///
/// The v integration is done analytically; the remaining u integral runs
/// over graded panels that resolve both the displaced poles and the
/// oscillation, once per displacement level, and the displacement is then
/// extrapolated to zero. The result retains the O(1) finite-τ remainder
/// that the closed form drops, so comparisons against [`j_closed_form`]
/// should normalize by τ.
pub fn j_numeric_oracle(
    sep: SeparationParams,
    omega: f64,
    tau: f64,
    ctrl: &QuadratureControl,
) -> Result<f64> {
    if sep.b == 0.0 {
        return Err(SingularIntegralError::DegenerateSeparation);
    }
    ctrl.validate()?;
    if !(tau > 2.0 * sep.b) {
        return Err(SingularIntegralError::InvalidControl(format!(
            "tau = {tau} must exceed twice the pole location b = {}",
            sep.b
        )));
    }
    if omega < 0.0 {
        return Err(SingularIntegralError::InvalidControl(
            "omega must be non-negative".into(),
        ));
    }

    let (a, b) = (sep.a, sep.b);
    let rule = quad::GaussLegendre::new(ctrl.panel_order as usize);
    let osc_cap = if omega > 0.0 {
        (2.0 * std::f64::consts::PI / omega) / ctrl.nodes_per_period as f64
    } else {
        tau / 200.0
    };
    let cap = osc_cap.min(tau / 50.0);

    // The displaced integral approaches its limit linearly in ε (the even
    // moments of the averaged kernel cancel, the cubic finite part leaves
    // an |ε| term), so the extrapolation runs in ε itself.
    let mut samples = Vec::with_capacity(ctrl.epsilon_levels as usize);
    let mut eps = b * ctrl.epsilon_scale;
    for _ in 0..ctrl.epsilon_levels {
        // panels grade from ε/3 at the pole up to the oscillation cap
        let edges = quad::graded_edges(0.0, tau, b, eps / 3.0, 1.4, cap);
        let value = rule.panels(&edges, &mut |u| {
            displaced_kernel(u, a, b, eps) * v_reduced_weight(u, omega, tau)
        });
        samples.push((eps, value));
        eps *= 0.5;
    }

    let full = quad::extrapolate_to_zero(&samples);
    let partial = quad::extrapolate_to_zero(&samples[1..]);
    // relative to the answer, with a floor at 1% of the τ-linear kernel
    // scale so that cancellation-suppressed values (ω → 0) are not held
    // to an impossible standard
    let scale = full.abs().max(tau / b.powi(3) * 1e-2);
    let estimated = (full - partial).abs() / scale;
    if estimated > ctrl.relative_tolerance {
        return Err(SingularIntegralError::Accuracy {
            estimated,
            tolerance: ctrl.relative_tolerance,
        });
    }
    Ok(full)
}

/// A smooth switch-on/switch-off envelope F sampled on a uniform
/// (t, t′) grid. The envelope must vanish (through second derivatives) at
/// the grid boundary; construction checks the outer two rings.
#[derive(Debug, Clone)]
pub struct KernelSample {
    values: Vec<f64>,
    n: usize,
    spacing: f64,
}

impl KernelSample {
    const BOUNDARY_LIMIT: f64 = 1e-9;

    /// Wrap a row-major `n × n` grid of F values with node spacing `h`.
    pub fn new(values: Vec<f64>, n: usize, spacing: f64) -> Result<Self> {
        if n < 9 {
            return Err(SingularIntegralError::GridTooSmall { needed: 9, got: n });
        }
        if values.len() != n * n {
            return Err(SingularIntegralError::InvalidControl(format!(
                "grid length {} does not match n^2 = {}",
                values.len(),
                n * n
            )));
        }
        if !(spacing > 0.0) {
            return Err(SingularIntegralError::InvalidControl(
                "spacing must be positive".into(),
            ));
        }
        let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut boundary = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i < 2 || j < 2 || i >= n - 2 || j >= n - 2 {
                    boundary = boundary.max(values[i * n + j].abs());
                }
            }
        }
        let limit = Self::BOUNDARY_LIMIT * max.max(f64::MIN_POSITIVE);
        if max > 0.0 && boundary > limit {
            return Err(SingularIntegralError::BoundaryContract { boundary, limit });
        }
        Ok(KernelSample { values, n, spacing })
    }

    /// Sample `f(t, t′)` on the square grid `t, t′ = t0 + k·h`, `k < n`.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(n: usize, t0: f64, spacing: f64, f: F) -> Result<Self> {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            let t = t0 + spacing * i as f64;
            for j in 0..n {
                let tp = t0 + spacing * j as f64;
                values[i * n + j] = f(t, tp);
            }
        }
        Self::new(values, n, spacing)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }
}

/// Second derivative along one index by the fourth-order central stencil.
/// Rows closer than two nodes to the edge are taken as zero, which the
/// boundary contract justifies.
fn second_derivative_rows(values: &[f64], n: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    let c = 1.0 / (12.0 * h * h);
    for i in 0..n {
        let row = &values[i * n..(i + 1) * n];
        let out_row = &mut out[i * n..(i + 1) * n];
        for j in 2..n - 2 {
            out_row[j] = c
                * (-row[j - 2] + 16.0 * row[j - 1] - 30.0 * row[j] + 16.0 * row[j + 1]
                    - row[j + 2]);
        }
    }
    out
}

fn transpose(values: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = values[i * n + j];
        }
    }
    out
}

/// Exact integral of ln((c + s)²) weighted by the triangular cell overlap,
/// ∫_{−h}^{h} (h − |s|) ln((c + s)²) ds, via antiderivatives. Finite for
/// every c including c = 0 (the log singularity is integrable).
fn log_cell_weight(c: f64, h: f64) -> f64 {
    // ∫ ln(w²) dw and ∫ w ln(w²) dw, with the w→0 limits set to zero
    fn p1(w: f64) -> f64 {
        if w == 0.0 {
            0.0
        } else {
            w * (w * w).ln() - 2.0 * w
        }
    }
    fn p2(w: f64) -> f64 {
        if w == 0.0 {
            0.0
        } else {
            0.5 * w * w * (w * w).ln() - 0.5 * w * w
        }
    }
    let first = (h - c) * (p1(c) - p1(c - h)) + (p2(c) - p2(c - h));
    let second = (h + c) * (p1(c + h) - p1(c)) - (p2(c + h) - p2(c));
    first + second
}

/// Regularized value of ∫∫ F(t, t′)/(t − t′)⁴ dt dt′ for an envelope that
/// switches off at the boundary, computed through the identity
///
/// ```text
/// 1/(t − t′)⁴ = −(1/12) ∂²_t ∂²_{t′} ln (t − t′)²,
/// ```
///
/// i.e. −(1/12) ∫∫ ln(t − t′)² · ∂²_t ∂²_{t′} F after two integrations by
/// parts in each variable. The derivative is formed by finite differences
/// and the integrable log kernel is integrated exactly over each grid
/// cell.
pub fn regularized_quartic_integral(sample: &KernelSample) -> Result<f64> {
    let n = sample.n;
    let h = sample.spacing;

    // ∂²_{t′} then ∂²_t (stencils along rows of each orientation)
    let d_tp = second_derivative_rows(&sample.values, n, h);
    let d_tp_t = transpose(&d_tp, n);
    let mixed_t = second_derivative_rows(&d_tp_t, n, h);
    let mixed = transpose(&mixed_t, n);

    let mut weights = vec![0.0; 2 * n - 1];
    for (k, w) in weights.iter_mut().enumerate() {
        let offset = k as isize - (n as isize - 1);
        *w = log_cell_weight(offset as f64 * h, h);
    }

    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let k = (i as isize - j as isize + n as isize - 1) as usize;
            acc += mixed[i * n + j] * weights[k];
        }
    }
    Ok(-acc / 12.0)
}
