//! Compactly supported test functions on the half-line with accurate
//! weighted integrals.

use std::sync::OnceLock;

use crate::error::{Result, SpectralError};
use crate::quad::gauss_legendre;

#[derive(Debug, Clone, PartialEq)]
pub enum TrialFunction {
    /// Linear interpolation of `values` at `nodes`; zero beyond the last
    /// node, whose value must be 0.
    PiecewiseLinear { nodes: Vec<f64>, values: Vec<f64> },
    /// `min{1, (ln n − ln s)/ln n}` on `[0, n]`, zero after.
    LogProfile { n: f64 },
    /// `inner(t/l)`.
    Scaled { inner: Box<TrialFunction>, l: f64 },
}

const GL_ORDER: usize = 20;

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

impl TrialFunction {
    pub fn piecewise_linear(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(SpectralError::InvalidParameter(
                "piecewise-linear trial needs matching nodes and values (at least 2)".into(),
            ));
        }
        if !(nodes[0] >= 0.0) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SpectralError::InvalidParameter("nodes must increase from t >= 0".into()));
        }
        if values.iter().any(|v| !v.is_finite()) || *values.last().unwrap() != 0.0 {
            return Err(SpectralError::InvalidParameter(
                "values must be finite and vanish at the last node".into(),
            ));
        }
        Ok(Self::PiecewiseLinear { nodes, values })
    }

    /// Tent of height 1 at `center` vanishing outside `(center − w, center + w)`
    /// (clipped at 0, where it keeps its value).
    pub fn hat(center: f64, half_width: f64) -> Result<Self> {
        let lo = center - half_width;
        if lo >= 0.0 {
            Self::piecewise_linear(vec![lo, center, center + half_width], vec![0.0, 1.0, 0.0])
        } else if center > 0.0 {
            Self::piecewise_linear(vec![0.0, center, center + half_width], vec![-lo / half_width, 1.0, 0.0])
        } else {
            Self::piecewise_linear(vec![0.0, center + half_width], vec![(half_width + center) / half_width, 0.0])
        }
    }

    pub fn log_profile(n: f64) -> Result<Self> {
        if !(n > 1.0) || !n.is_finite() {
            return Err(SpectralError::InvalidParameter(format!("log profile needs n > 1, got {n}")));
        }
        Ok(Self::LogProfile { n })
    }

    pub fn scaled(inner: TrialFunction, l: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(SpectralError::InvalidParameter(format!("scale {l} must be positive")));
        }
        Ok(Self::Scaled {
            inner: Box::new(inner),
            l,
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::PiecewiseLinear { nodes, values } => {
                if t < nodes[0] {
                    return values[0];
                }
                if t >= *nodes.last().unwrap() {
                    return 0.0;
                }
                let i = nodes.partition_point(|&x| x <= t) - 1;
                let s = (t - nodes[i]) / (nodes[i + 1] - nodes[i]);
                values[i] + s * (values[i + 1] - values[i])
            }
            Self::LogProfile { n } => {
                if t <= 1.0 {
                    1.0
                } else if t >= *n {
                    0.0
                } else {
                    (n.ln() - t.ln()) / n.ln()
                }
            }
            Self::Scaled { inner, l } => inner.value(t / l),
        }
    }

    /// u′(t), right derivative at kinks.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Self::PiecewiseLinear { nodes, values } => {
                if t < nodes[0] || t >= *nodes.last().unwrap() {
                    return 0.0;
                }
                let i = nodes.partition_point(|&x| x <= t) - 1;
                (values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i])
            }
            Self::LogProfile { n } => {
                if t < 1.0 || t >= *n {
                    0.0
                } else {
                    -1.0 / (t * n.ln())
                }
            }
            Self::Scaled { inner, l } => inner.derivative(t / l) / l,
        }
    }

    pub fn support_end(&self) -> f64 {
        match self {
            Self::PiecewiseLinear { nodes, .. } => *nodes.last().unwrap(),
            Self::LogProfile { n } => *n,
            Self::Scaled { inner, l } => inner.support_end() * l,
        }
    }

    /// Points in `[0, support_end]` where the formula changes, including
    /// both ends and, for linear pieces, interior zeros.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match self {
            Self::PiecewiseLinear { nodes, values } => {
                let mut pts = vec![0.0];
                pts.extend(nodes.iter().copied());
                for i in 0..nodes.len() - 1 {
                    let (a, b) = (values[i], values[i + 1]);
                    if a * b < 0.0 {
                        pts.push(nodes[i] + (nodes[i + 1] - nodes[i]) * a / (a - b));
                    }
                }
                pts
            }
            Self::LogProfile { n } => vec![0.0, 1.0, *n],
            Self::Scaled { inner, l } => inner.breakpoints().into_iter().map(|x| x * l).collect(),
        };
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1.0));
        pts
    }

    /// ∫_0^∞ f(t, u(t), u′(t)) dt, Gauss–Legendre on pieces whose length
    /// stays below half of `1 + t`, so power weights in `1 + t` are
    /// integrated to rounding accuracy.
    pub fn integrate(&self, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let (x, w) = rule();
        let pts = self.breakpoints();
        let mut acc = 0.0;
        for win in pts.windows(2) {
            let (a, b) = (win[0], win[1]);
            let mut lo = a;
            while lo < b {
                let hi = (lo + 0.5 * (1.0 + lo)).min(b);
                let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                let mut s = 0.0;
                for (xi, wi) in x.iter().zip(w) {
                    let t = c + h * xi;
                    s += wi * f(t, self.value(t), self.derivative(t));
                }
                acc += h * s;
                lo = hi;
            }
        }
        acc
    }

    /// sup_t |u(t)|·(1+t)^β.
    pub fn weighted_sup(&self, beta: f64) -> f64 {
        let h = |t: f64| self.value(t).abs() * (1.0 + t).powf(beta);
        let pts = self.breakpoints();
        let mut best: f64 = 0.0;
        for win in pts.windows(2) {
            let (a, b) = (win[0], win[1]);
            best = best.max(h(a)).max(h(b - 1e-15 * b.max(1.0)));
            match self {
                Self::PiecewiseLinear { .. } => {
                    // (u0 + m(t−a))(1+t)^β is stationary where m(1+t) + βu = 0
                    let u0 = self.value(a);
                    let m = self.derivative(a);
                    if m != 0.0 && beta != -1.0 {
                        let t = (beta * m * a - m - beta * u0) / (m * (1.0 + beta));
                        if t > a && t < b {
                            best = best.max(h(t));
                        }
                    }
                }
                _ => best = best.max(sampled_max(&h, a, b)),
            }
        }
        best
    }

    /// sup_t |u(t)|·w(t) for a general weight, by sampling plus golden
    /// refinement on each piece.
    pub fn sup_with(&self, w: impl Fn(f64) -> f64) -> f64 {
        let h = |t: f64| self.value(t).abs() * w(t);
        let pts = self.breakpoints();
        pts.windows(2).map(|p| sampled_max(&h, p[0], p[1])).fold(0.0, f64::max)
    }
}

/// Max of `h` on `[a, b]`: 64 samples, then golden-section refinement
/// around the best one.
fn sampled_max(h: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let n = 64;
    let mut best = (h(a), 0usize);
    for i in 1..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        let t = if i == n { b - 1e-15 * b.abs().max(1.0) } else { t };
        let v = h(t);
        if v > best.0 {
            best = (v, i);
        }
    }
    let step = (b - a) / n as f64;
    let mut lo = a + step * (best.1 as f64 - 1.0).max(0.0);
    let mut hi = (a + step * (best.1 as f64 + 1.0)).min(b);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = h(x1);
        }
    }
    best.0.max(f1).max(f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hat_integrals_are_exact() {
        let u = TrialFunction::hat(1.0, 1.0).unwrap();
        // ∫ u² = 2/3, ∫ u′² = 2
        assert_relative_eq!(u.integrate(|_, u, _| u * u), 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(u.integrate(|_, _, d| d * d), 2.0, max_relative = 1e-14);
        // ∫_0^2 u²(1+t)² dt, polynomial: exact value 2/3·(…) computed by hand
        let exact = {
            // ∫_0^1 t²(1+t)² + ∫_1^2 (2−t)²(1+t)²
            let a = 1.0 / 3.0 + 2.0 / 4.0 + 1.0 / 5.0;
            // substitute s = 2 − t: ∫_0^1 s²(3−s)² = 9/3 − 6/4 + 1/5
            let b = 3.0 - 1.5 + 0.2;
            a + b
        };
        assert_relative_eq!(u.integrate(|t, u, _| u * u * (1.0 + t).powi(2)), exact, max_relative = 1e-13);
    }

    #[test]
    fn log_profile_shape() {
        let u = TrialFunction::log_profile(100.0).unwrap();
        assert_eq!(u.value(0.5), 1.0);
        assert_relative_eq!(u.value(10.0), 0.5, max_relative = 1e-15);
        assert_eq!(u.value(200.0), 0.0);
        // ∫ u′² = ∫_1^n ds/(s² ln² n) = (1 − 1/n)/ln² n
        let ln = 100f64.ln();
        assert_relative_eq!(u.integrate(|_, _, d| d * d), (1.0 - 0.01) / (ln * ln), max_relative = 1e-12);
    }

    #[test]
    fn scaling_rescales_integrals() {
        let v = TrialFunction::hat(1.0, 1.0).unwrap();
        let u = TrialFunction::scaled(v.clone(), 0.25).unwrap();
        assert_relative_eq!(u.integrate(|_, u, _| u * u), 0.25 * 2.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(u.integrate(|_, _, d| d * d), 2.0 / 0.25, max_relative = 1e-13);
    }

    #[test]
    fn weighted_sup_of_linear_piece() {
        // u = 1 − t/2 on [0, 2]; u(1+t) peaks at t = 1/2 with value 9/8
        let u = TrialFunction::piecewise_linear(vec![0.0, 2.0], vec![1.0, 0.0]).unwrap();
        assert_relative_eq!(u.weighted_sup(1.0), 1.125, max_relative = 1e-14);
        assert_relative_eq!(u.sup_with(|t| 1.0 + t), 1.125, max_relative = 1e-10);
    }
}
