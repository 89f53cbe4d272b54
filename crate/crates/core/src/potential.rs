use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SpectralError};

pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Callable radial profile supported in `[lo, hi]`.
#[derive(Clone)]
pub struct Profile {
    f: ProfileFn,
    lo: f64,
    hi: f64,
    kinks: Vec<f64>,
    bound: f64,
    smooth: bool,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("kinks", &self.kinks)
            .field("bound", &self.bound)
            .field("smooth", &self.smooth)
            .finish()
    }
}

#[derive(Debug, Clone)]
enum Shape {
    /// `values[i]` on `(breaks[i], breaks[i+1]]`, zero outside.
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
    Profile(Profile),
}

/// `coupling/(t + offset)²`, present on the whole domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSquare {
    pub coupling: f64,
    pub offset: f64,
}

/// Radial potential V(|x|). Enters operators as `−(g u′)′/g − V u`, so
/// positive values are attractive.
#[derive(Debug, Clone)]
pub struct SymmetricPotential {
    shape: Shape,
    scale: f64,
    cut_below: f64,
    inverse_square: Option<InverseSquare>,
}

impl SymmetricPotential {
    pub fn zero() -> Self {
        Self {
            shape: Shape::Piecewise {
                breaks: vec![0.0, 1.0],
                values: vec![0.0],
            },
            scale: 1.0,
            cut_below: f64::NEG_INFINITY,
            inverse_square: None,
        }
    }

    /// Piecewise constant: `values[i]` on `(breaks[i], breaks[i+1]]`.
    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() < 2 || values.len() + 1 != breaks.len() {
            return Err(SpectralError::InvalidPotential(format!(
                "{} breakpoints need {} values",
                breaks.len(),
                breaks.len().saturating_sub(1)
            )));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SpectralError::InvalidPotential(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::InvalidPotential("values must be finite".into()));
        }
        Ok(Self {
            shape: Shape::Piecewise { breaks, values },
            scale: 1.0,
            cut_below: f64::NEG_INFINITY,
            inverse_square: None,
        })
    }

    /// `v·χ_(a,b)`.
    pub fn indicator(a: f64, b: f64, v: f64) -> Result<Self> {
        Self::piecewise(vec![a, b], vec![v])
    }

    /// Callable profile on `[lo, hi]`; `bound` must dominate `|f|` there.
    /// `kinks` are points where `f` or its derivative may jump.
    pub fn profile(
        f: ProfileFn,
        lo: f64,
        hi: f64,
        kinks: Vec<f64>,
        bound: f64,
        smooth: bool,
    ) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(SpectralError::InvalidPotential("support must be a finite interval".into()));
        }
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(SpectralError::InvalidPotential("bound must be finite".into()));
        }
        let mut kinks: Vec<f64> = kinks.into_iter().filter(|k| *k > lo && *k < hi).collect();
        kinks.sort_by(|a, b| a.total_cmp(b));
        kinks.dedup();
        Ok(Self {
            shape: Shape::Profile(Profile {
                f,
                lo,
                hi,
                kinks,
                bound,
                smooth,
            }),
            scale: 1.0,
            cut_below: f64::NEG_INFINITY,
            inverse_square: None,
        })
    }

    /// Like [`Self::profile`], with `bound` estimated by sampling plus a margin.
    pub fn sampled_profile(f: ProfileFn, lo: f64, hi: f64, kinks: Vec<f64>) -> Result<Self> {
        let n = 4096;
        let mut m: f64 = 0.0;
        for i in 0..=n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let v = f(t);
            if !v.is_finite() {
                return Err(SpectralError::InvalidPotential(format!("profile not finite at {t}")));
            }
            m = m.max(v.abs());
        }
        Self::profile(f, lo, hi, kinks, 1.25 * m + 1e-12, true)
    }

    /// Tent `h·max(0, 1 − |t − c|/w)`.
    pub fn tent(center: f64, half_width: f64, height: f64) -> Result<Self> {
        let f: ProfileFn = Arc::new(move |t: f64| height * (1.0 - (t - center).abs() / half_width).max(0.0));
        Self::profile(
            f,
            (center - half_width).max(0.0),
            center + half_width,
            vec![center],
            height.abs(),
            true,
        )
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.scale *= c;
        out
    }

    /// `χ_(from, ∞)·V` (the inverse-square part is left untouched).
    pub fn restricted(&self, from: f64) -> Self {
        let mut out = self.clone();
        out.cut_below = out.cut_below.max(from);
        out
    }

    pub fn with_inverse_square(&self, coupling: f64, offset: f64) -> Self {
        let mut out = self.clone();
        out.inverse_square = if coupling == 0.0 {
            None
        } else {
            Some(InverseSquare { coupling, offset })
        };
        out
    }

    pub fn inverse_square(&self) -> Option<InverseSquare> {
        self.inverse_square
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Breakpoints and effective values when `V` is a plain piecewise
    /// constant (no restriction, no inverse-square part).
    pub fn piecewise_parts(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.shape {
            Shape::Piecewise { breaks, values }
                if self.inverse_square.is_none() && self.cut_below == f64::NEG_INFINITY =>
            {
                Some((breaks.clone(), values.iter().map(|v| v * self.scale).collect()))
            }
            _ => None,
        }
    }

    pub fn is_smooth_profile(&self) -> bool {
        matches!(&self.shape, Shape::Profile(p) if p.smooth)
    }

    fn shape_value(&self, t: f64) -> f64 {
        if t <= self.cut_below {
            return 0.0;
        }
        match &self.shape {
            Shape::Piecewise { breaks, values } => {
                if t <= breaks[0] || t > *breaks.last().unwrap() {
                    return 0.0;
                }
                let i = breaks.partition_point(|&b| b < t);
                values[i - 1]
            }
            Shape::Profile(p) => {
                if t < p.lo || t > p.hi {
                    0.0
                } else {
                    (p.f)(t)
                }
            }
        }
    }

    fn inverse_square_value(&self, t: f64) -> f64 {
        match self.inverse_square {
            Some(InverseSquare { coupling, offset }) => coupling / (t + offset).powi(2),
            None => 0.0,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.scale * self.shape_value(t) + self.inverse_square_value(t)
    }

    /// V_+(t)^p of the compact part only.
    pub fn positive_power(&self, t: f64, p: f64) -> f64 {
        let v = self.value(t);
        if v > 0.0 {
            v.powf(p)
        } else {
            0.0
        }
    }

    /// Left end of the compact part.
    pub fn support_start(&self) -> f64 {
        let lo = match &self.shape {
            Shape::Piecewise { breaks, .. } => breaks[0],
            Shape::Profile(p) => p.lo,
        };
        lo.max(self.cut_below)
    }

    /// Right end of the compact part.
    pub fn compact_end(&self) -> f64 {
        match &self.shape {
            Shape::Piecewise { breaks, .. } => *breaks.last().unwrap(),
            Shape::Profile(p) => p.hi,
        }
    }

    /// T_V: ∞ when an inverse-square term is present.
    pub fn support_end(&self) -> f64 {
        if self.inverse_square.is_some() {
            f64::INFINITY
        } else {
            self.compact_end()
        }
    }

    pub fn is_zero(&self) -> bool {
        if self.inverse_square.is_some() {
            return false;
        }
        if self.scale == 0.0 || self.cut_below >= self.compact_end() {
            return true;
        }
        match &self.shape {
            Shape::Piecewise { values, .. } => values.iter().all(|v| *v == 0.0),
            Shape::Profile(p) => p.bound == 0.0,
        }
    }

    /// Discontinuities of V or its formula, strictly inside `(a, b)`.
    pub fn breaks_between(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = match &self.shape {
            Shape::Piecewise { breaks, .. } => breaks.clone(),
            Shape::Profile(p) => {
                let mut v = vec![p.lo, p.hi];
                v.extend(&p.kinks);
                v
            }
        };
        if self.cut_below.is_finite() {
            pts.push(self.cut_below);
        }
        pts.retain(|&x| x > a && x < b);
        pts.sort_by(|x, y| x.total_cmp(y));
        pts.dedup();
        pts
    }

    pub fn next_break(&self, t: f64) -> f64 {
        self.breaks_between(t, f64::INFINITY)
            .first()
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    /// `Some(v)` when V is constant on `(a, b)` (no inverse-square term,
    /// no break inside, piecewise or outside a profile's support).
    pub fn constant_on(&self, a: f64, b: f64) -> Option<f64> {
        if self.inverse_square.is_some() || !self.breaks_between(a, b).is_empty() {
            return None;
        }
        let mid = if b.is_finite() { 0.5 * (a + b) } else { a + 1.0 };
        match &self.shape {
            Shape::Piecewise { .. } => Some(self.value(mid)),
            Shape::Profile(p) => {
                if b <= p.lo || a >= p.hi || b <= self.cut_below {
                    Some(0.0)
                } else {
                    None
                }
            }
        }
    }

    /// Upper bound for `sup_{s ≥ t} V(s)`.
    pub fn sup_beyond(&self, t: f64) -> f64 {
        let start = t.max(self.cut_below);
        let compact = if start >= self.compact_end() {
            0.0
        } else {
            match &self.shape {
                Shape::Piecewise { breaks, values } => {
                    let mut m: f64 = 0.0;
                    for (i, v) in values.iter().enumerate() {
                        if breaks[i + 1] > start {
                            m = m.max(self.scale * v);
                        }
                    }
                    m
                }
                Shape::Profile(p) => self.scale.abs() * p.bound,
            }
        };
        let inv = match self.inverse_square {
            Some(InverseSquare { coupling, offset }) if coupling > 0.0 => {
                coupling / (t.max(0.0) + offset).powi(2)
            }
            _ => 0.0,
        };
        compact.max(0.0) + inv
    }

    /// Upper bound for `sup |V|` on `[from, ∞)`.
    pub fn sup_abs_beyond(&self, from: f64) -> f64 {
        let compact = match &self.shape {
            Shape::Piecewise { breaks, values } => values
                .iter()
                .enumerate()
                .filter(|(i, _)| breaks[i + 1] > from.max(self.cut_below))
                .map(|(_, v)| (self.scale * v).abs())
                .fold(0.0, f64::max),
            Shape::Profile(p) => self.scale.abs() * p.bound,
        };
        let inv = match self.inverse_square {
            Some(InverseSquare { coupling, offset }) => coupling.abs() / (from.max(0.0) + offset).powi(2),
            None => 0.0,
        };
        compact + inv
    }

    /// End of a piece starting at `a` on which the inverse-square part
    /// varies by at most a factor 4.
    pub(crate) fn smooth_split(&self, a: f64, b: f64) -> f64 {
        match self.inverse_square {
            Some(InverseSquare { offset, .. }) => {
                let cap = 2.0 * (a + offset) - offset;
                if cap > a {
                    b.min(cap)
                } else {
                    b
                }
            }
            None => b,
        }
    }

    /// A radius beyond which `V < μ` holds for good.
    pub fn escape_radius(&self, mu: f64) -> f64 {
        let end = self.compact_end();
        match self.inverse_square {
            Some(InverseSquare { coupling, offset }) if coupling > 0.0 => {
                let r = (coupling / mu).sqrt() * 1.001 - offset;
                end.max(r)
            }
            _ => end,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_evaluation() {
        let v = SymmetricPotential::piecewise(vec![0.0, 1.0, 3.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(v.value(0.5), 2.0);
        assert_eq!(v.value(1.0), 2.0);
        assert_eq!(v.value(2.0), -1.0);
        assert_eq!(v.value(3.5), 0.0);
        assert_eq!(v.support_end(), 3.0);
        assert_eq!(v.restricted(1.5).value(0.5), 0.0);
        assert_eq!(v.scaled(2.0).value(2.0), -2.0);
        assert_eq!(v.constant_on(1.0, 3.0), Some(-1.0));
        assert_eq!(v.constant_on(0.5, 2.0), None);
        assert_eq!(v.sup_beyond(1.5), 0.0);
        assert_eq!(v.sup_beyond(0.0), 2.0);
        assert!(SymmetricPotential::piecewise(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn inverse_square_part() {
        let v = SymmetricPotential::zero().with_inverse_square(0.25, 1.0);
        assert_eq!(v.value(1.0), 0.0625);
        assert!(v.support_end().is_infinite());
        let r = v.escape_radius(0.01);
        assert!(v.value(r) < 0.01);
    }

    #[test]
    fn tent_shape() {
        let v = SymmetricPotential::tent(2.0, 1.0, 3.0).unwrap();
        assert_eq!(v.value(2.0), 3.0);
        assert!((v.value(2.5) - 1.5).abs() < 1e-15);
        assert_eq!(v.value(0.5), 0.0);
        assert_eq!(v.breaks_between(0.0, 10.0), vec![1.0, 2.0, 3.0]);
    }
}
