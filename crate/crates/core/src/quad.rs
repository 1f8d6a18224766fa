//! Shared quadrature machinery: Gauss-Legendre rules, panel builders for
//! oscillatory integrands with isolated near-singular points, and
//! polynomial extrapolation of a regularization parameter to zero.
//!
//! Everything here is deterministic: panel decompositions are fixed
//! functions of the inputs and sums run in panel order.

/// Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build an `n`-point rule by Newton iteration on the Legendre
    /// polynomial, seeded with the Chebyshev angle estimate.
    pub(crate) fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least a 2-point rule");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over a single panel `[a, b]`.
    pub(crate) fn panel<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: &mut F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrate `f` over consecutive panels given by `edges`, in order.
    pub(crate) fn panels<F: FnMut(f64) -> f64>(&self, edges: &[f64], f: &mut F) -> f64 {
        let mut acc = 0.0;
        for pair in edges.windows(2) {
            acc += self.panel(pair[0], pair[1], f);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel edges covering `[a, b]` with widths at most `max_width`.
pub(crate) fn uniform_edges(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    assert!(b > a && max_width > 0.0);
    let count = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    let mut edges = Vec::with_capacity(count + 1);
    for i in 0..count {
        edges.push(a + h * i as f64);
    }
    edges.push(b);
    edges
}

/// Panel edges covering `[a, b]` that grade geometrically away from
/// `center`: width `inner` next to the center, growing by `growth` per
/// panel up to `cap`. Used to resolve a displaced pole sitting at
/// `center` inside an otherwise oscillatory range.
pub(crate) fn graded_edges(a: f64, b: f64, center: f64, inner: f64, growth: f64, cap: f64) -> Vec<f64> {
    assert!(b > a && inner > 0.0 && growth > 1.0 && cap >= inner);
    let mut left = Vec::new();
    let mut x = center.clamp(a, b);
    let mut w = inner;
    while x > a {
        x = (x - w).max(a);
        left.push(x);
        w = (w * growth).min(cap);
    }
    left.reverse();
    let mut edges = left;
    if center > a && center < b {
        edges.push(center);
    }
    let mut x = center.clamp(a, b);
    let mut w = inner;
    while x < b {
        x = (x + w).min(b);
        edges.push(x);
        w = (w * growth).min(cap);
    }
    edges.dedup_by(|u, v| (*u - *v).abs() == 0.0);
    edges
}

/// Neville extrapolation of `(x_i, y_i)` samples to `x = 0`.
///
/// The samples are the values of a regularized integral at a sequence of
/// regularization parameters; the extrapolant removes the polynomial part
/// of the parameter dependence.
pub(crate) fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    assert!(n >= 1);
    let mut tableau: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    for level in 1..n {
        for i in 0..n - level {
            let x_lo = points[i].0;
            let x_hi = points[i + level].0;
            tableau[i] = (x_lo * tableau[i + 1] - x_hi * tableau[i]) / (x_lo - x_hi);
        }
    }
    tableau[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gl_rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the highest a 5-point rule is exact for
        let val = rule.panel(-1.0, 1.0, &mut |x: f64| x.powi(8));
        assert_relative_eq!(val, 2.0 / 9.0, max_relative = 1e-13);
    }

    #[test]
    fn gl_rule_on_oscillatory_panel_chain() {
        let rule = GaussLegendre::new(15);
        let edges = uniform_edges(0.0, 50.0, 0.4);
        let val = rule.panels(&edges, &mut |x: f64| x.sin());
        assert_relative_eq!(val, 1.0 - 50.0f64.cos(), max_relative = 1e-12);
    }

    #[test]
    fn graded_edges_cover_range_and_refine_center() {
        let edges = graded_edges(0.0, 10.0, 1.0, 0.01, 1.5, 0.5);
        assert_eq!(edges.first().copied(), Some(0.0));
        assert_eq!(edges.last().copied(), Some(10.0));
        assert!(edges.windows(2).all(|p| p[1] > p[0]));
        // the panels adjacent to the center are the requested inner width
        let at = edges.iter().position(|&e| e == 1.0).unwrap();
        assert!(edges[at + 1] - edges[at] <= 0.011);
        assert!(edges[at] - edges[at - 1] <= 0.011);
    }

    #[test]
    fn extrapolation_removes_polynomial_error() {
        // y(x) = 3 + 2x + x^2 sampled at three points extrapolates to 3
        let pts = [(0.4, 3.0 + 0.8 + 0.16), (0.2, 3.0 + 0.4 + 0.04), (0.1, 3.0 + 0.2 + 0.01)];
        assert_relative_eq!(extrapolate_to_zero(&pts), 3.0, max_relative = 1e-12);
    }
}
