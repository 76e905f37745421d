use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    fn extend(&mut self, other: Rule) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }
}

fn reference(order: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order.max(1)).unwrap());
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Composite Gauss-Legendre on `[a, b]` with panels no wider than `width`, nodes increasing.
pub fn composite(a: f64, b: f64, width: f64, order: usize) -> Rule {
    let mut out = Rule::default();
    if !(b > a) {
        return out;
    }
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let base = reference(order);
    for k in 0..panels {
        let lo = a + k as f64 * h;
        for &(x, w) in &base {
            out.nodes.push(lo + 0.5 * h * (x + 1.0));
            out.weights.push(0.5 * h * w);
        }
    }
    out
}

/// Gauss-Legendre for `[start, ∞)` through `μ = start / s`, `s ∈ (0, 1]`, nodes increasing in `μ`.
/// Exact for integrands decaying like `μ⁻²` times a polynomial in `1/μ`.
pub fn algebraic_tail(start: f64, order: usize) -> Rule {
    let mut out = Rule::default();
    for &(x, w) in reference(order).iter().rev() {
        let s = 0.5 * (x + 1.0);
        out.nodes.push(start / s);
        out.weights.push(0.5 * w * start / (s * s));
    }
    out
}

/// Composite rule on `[a, b]` followed by the algebraic tail beyond `b`.
pub fn half_line(a: f64, b: f64, width: f64, order: usize, tail_order: usize) -> Rule {
    let mut out = composite(a, b, width, order);
    out.extend(algebraic_tail(b.max(a), tail_order));
    out
}

/// Upper end of every `w`-integral.
pub const W_MAX: f64 = 80.0;

/// Rule for `∫_0^{W_MAX} dw`, resolving exponentials and `cos(wλ)` for moderate `λ`.
pub fn w_rule() -> Rule {
    composite(0.0, W_MAX, 0.5, 16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_integrates_polynomials_and_exponentials() {
        let r = composite(0.0, 3.0, 0.7, 8);
        assert!((r.integrate(|x| x * x) - 9.0).abs() < 1e-13);
        assert!(r.nodes.windows(2).all(|w| w[1] > w[0]));
        assert!((w_rule().integrate(|w| (-w).exp()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tail_is_exact_for_inverse_powers() {
        let r = algebraic_tail(5.0, 8);
        assert!((r.integrate(|x| 1.0 / (x * x)) - 0.2).abs() < 1e-14);
        assert!((r.integrate(|x| x.powi(-4)) - 1.0 / 375.0).abs() < 1e-15);
        assert!(r.nodes.windows(2).all(|w| w[1] > w[0]));
    }
}
