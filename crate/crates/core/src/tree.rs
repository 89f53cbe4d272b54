use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::ext::ExtReal;
use crate::weight::{StepTail, StepWeight};

/// Generations beyond the explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TailRule {
    /// Every further edge has length
    /// `edge_length`, every further vertex branches `branch` times.
    Homogeneous { edge_length: f64, branch: u32 },
    /// Edge lengths `first_length·ratio^j`, all vertices branch `branch`
    /// times. Realizes global dimension `1 + ln b / ln ratio`.
    Geometric {
        ratio: f64,
        first_length: f64,
        branch: u32,
    },
    /// No further vertices; only valid with an empty prefix (Γ = ℝ₊).
    Halfline,
}

/// A regular rooted metric tree: vertex radii `t_1 < t_2 < …`, branching
/// numbers `b_1, b_2, …`, plus a tail rule for all later generations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDescriptor {
    radii: Vec<f64>,
    branches: Vec<u32>,
    tail: TailRule,
}

/// Envelope constants `c_1 ≤ g_0(t)/(1+t)^{d-1} ≤ c_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionBounds {
    pub d: f64,
    pub c1: f64,
    pub c2: f64,
}

impl TreeDescriptor {
    pub fn build(prefix: &[(f64, u32)], tail: TailRule) -> Result<Self> {
        let mut prev = 0.0;
        for (i, &(r, b)) in prefix.iter().enumerate() {
            if !(r > prev) || !r.is_finite() {
                return Err(SpectralError::InvalidTree(format!(
                    "vertex radius t_{} = {r} does not exceed {prev}",
                    i + 1
                )));
            }
            if b < 2 {
                return Err(SpectralError::InvalidTree(format!(
                    "branching number b_{} = {b} is below 2",
                    i + 1
                )));
            }
            prev = r;
        }
        match tail {
            TailRule::Halfline if !prefix.is_empty() => {
                return Err(SpectralError::InvalidTree(
                    "a half-line tail admits no vertices".into(),
                ))
            }
            TailRule::Homogeneous { edge_length, branch } => {
                if !(edge_length > 0.0) || !edge_length.is_finite() || branch < 2 {
                    return Err(SpectralError::InvalidTree(
                        "homogeneous tail needs edge_length > 0 and branch >= 2".into(),
                    ));
                }
            }
            TailRule::Geometric {
                ratio,
                first_length,
                branch,
            } => {
                if !(ratio > 1.0) || !ratio.is_finite() || !(first_length > 0.0) || branch < 2 {
                    return Err(SpectralError::InvalidTree(
                        "geometric tail needs ratio > 1, first_length > 0, branch >= 2".into(),
                    ));
                }
            }
            TailRule::Halfline => {}
        }
        Ok(Self {
            radii: prefix.iter().map(|p| p.0).collect(),
            branches: prefix.iter().map(|p| p.1).collect(),
            tail,
        })
    }

    pub fn homogeneous(edge_length: f64, branch: u32) -> Result<Self> {
        Self::build(&[], TailRule::Homogeneous { edge_length, branch })
    }

    pub fn geometric(ratio: f64, first_length: f64, branch: u32) -> Result<Self> {
        Self::build(
            &[],
            TailRule::Geometric {
                ratio,
                first_length,
                branch,
            },
        )
    }

    pub fn halfline() -> Self {
        Self {
            radii: Vec::new(),
            branches: Vec::new(),
            tail: TailRule::Halfline,
        }
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn prefix(&self) -> Vec<(f64, u32)> {
        self.radii.iter().copied().zip(self.branches.iter().copied()).collect()
    }

    pub fn is_halfline(&self) -> bool {
        matches!(self.tail, TailRule::Halfline)
    }

    /// `t_k`; `None` past the last vertex of a half-line.
    pub fn radius(&self, k: usize) -> Option<f64> {
        if k == 0 {
            return Some(0.0);
        }
        let n = self.radii.len();
        if k <= n {
            return Some(self.radii[k - 1]);
        }
        let last = self.radii.last().copied().unwrap_or(0.0);
        let j = (k - n) as f64;
        match self.tail {
            TailRule::Halfline => None,
            TailRule::Homogeneous { edge_length, .. } => Some(last + edge_length * j),
            TailRule::Geometric {
                ratio,
                first_length,
                ..
            } => Some(last + first_length * (ratio.powf(j) - 1.0) / (ratio - 1.0)),
        }
    }

    /// `b_k`, with `b_0 = 1`.
    pub fn branch(&self, k: usize) -> Option<u32> {
        if k == 0 {
            return Some(1);
        }
        let n = self.branches.len();
        if k <= n {
            return Some(self.branches[k - 1]);
        }
        match self.tail {
            TailRule::Halfline => None,
            TailRule::Homogeneous { branch, .. } | TailRule::Geometric { branch, .. } => {
                Some(branch)
            }
        }
    }

    /// Vertex generations `k ≥ 1` with `t_k < bound`.
    pub fn generations_below(&self, bound: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let mut k = 1;
        while let Some(t) = self.radius(k) {
            if t >= bound {
                break;
            }
            out.push(k);
            k += 1;
        }
        out
    }

    /// The first branching function g_0 (number of points at distance t).
    pub fn g0(&self) -> StepWeight {
        let mut values = Vec::with_capacity(self.radii.len() + 1);
        let mut acc = 1.0;
        values.push(acc);
        for &b in &self.branches {
            acc *= b as f64;
            values.push(acc);
        }
        let tail = match self.tail {
            TailRule::Halfline => StepTail::Constant,
            TailRule::Homogeneous { edge_length, branch } => StepTail::Geometric {
                first_length: edge_length,
                ratio: 1.0,
                factor: branch as f64,
            },
            TailRule::Geometric {
                ratio,
                first_length,
                branch,
            } => StepTail::Geometric {
                first_length,
                ratio,
                factor: branch as f64,
            },
        };
        StepWeight::new(0.0, self.radii.clone(), values, tail).expect("validated tree")
    }

    /// `b_1⋯b_k` (1 for k = 0).
    pub fn branch_product(&self, k: usize) -> f64 {
        (1..=k).map(|i| self.branch(i).unwrap_or(1) as f64).product()
    }

    /// The k-th branching function g_k on `[t_k, ∞)`.
    pub fn branching_function(&self, k: usize) -> Result<StepWeight> {
        if k == 0 {
            return Ok(self.g0());
        }
        let t = self.radius(k).ok_or_else(|| {
            SpectralError::InvalidParameter(format!("generation {k} does not exist"))
        })?;
        self.g0().restricted(t).scaled(1.0 / self.branch_product(k))
    }

    /// ℓ_Γ = ∫_0^∞ dt/g_0.
    pub fn reduced_height(&self) -> ExtReal {
        self.g0().tail_inverse_integral(0.0)
    }

    /// `b_1⋯b_{k-1}(b_k − 1)`.
    pub fn multiplicity(&self, k: usize) -> Result<u64> {
        if k == 0 {
            return Err(SpectralError::InvalidParameter(
                "the root component has no multiplicity index".into(),
            ));
        }
        let mut m: u64 = 1;
        for i in 1..k {
            m = m
                .checked_mul(self.branch(i).unwrap_or(1) as u64)
                .ok_or_else(|| SpectralError::InvalidParameter("multiplicity overflow".into()))?;
        }
        let bk = self.branch(k).ok_or_else(|| {
            SpectralError::InvalidParameter(format!("generation {k} does not exist"))
        })? as u64;
        m.checked_mul(bk - 1)
            .ok_or_else(|| SpectralError::InvalidParameter("multiplicity overflow".into()))
    }

    /// Exact `inf`/`sup` over t > 0 of `g_0(t)/(1+t)^{d-1}`.
    pub fn dimension_bounds(&self, d: f64) -> Result<DimensionBounds> {
        if !(d >= 1.0) || !d.is_finite() {
            return Err(SpectralError::InvalidParameter(format!("dimension {d} < 1")));
        }
        let e = d - 1.0;
        let g = self.g0();
        let n = g.knots().len();
        let mut c1 = f64::INFINITY;
        let mut c2: f64 = 0.0;
        // ratio decreases inside each segment: sup at lo+, inf at hi
        for i in 0..n {
            let s = g.segment(i);
            c2 = c2.max(s.value / (1.0 + s.lo).powf(e));
            c1 = c1.min(s.value / (1.0 + s.hi).powf(e));
        }
        let origin = g.knots().last().copied().unwrap_or(0.0);
        let v = *g.values().last().unwrap();
        match self.tail {
            TailRule::Halfline => {
                if e > 0.0 {
                    return Err(SpectralError::NoGlobalDimension(
                        "g_0 ≡ 1 has infimum 0 against (1+t)^(d-1) for d > 1".into(),
                    ));
                }
                c1 = c1.min(v);
                c2 = c2.max(v);
            }
            TailRule::Homogeneous { .. } => {
                return Err(SpectralError::NoGlobalDimension(
                    "exponential growth has unbounded supremum against any power".into(),
                ))
            }
            TailRule::Geometric {
                ratio,
                first_length,
                branch,
            } => {
                let lb = (branch as f64).ln();
                let lq = e * ratio.ln();
                if (lb - lq).abs() > 1e-9 * lb.max(lq) {
                    return Err(SpectralError::NoGlobalDimension(if lb > lq {
                        format!("branching outgrows (1+t)^{e}: supremum unbounded")
                    } else {
                        format!("(1+t)^{e} outgrows branching: infimum is 0")
                    }));
                }
                // b = q^{d-1}: the tail ratios are monotone in the segment index
                let lim_lo = v / (first_length / (ratio - 1.0)).powf(e);
                let lim_hi = v / (first_length * ratio / (ratio - 1.0)).powf(e);
                let first_lo = v / (1.0 + origin).powf(e);
                let first_hi = v / (1.0 + origin + first_length).powf(e);
                c2 = c2.max(first_lo.max(lim_lo));
                c1 = c1.min(first_hi.min(lim_hi));
            }
        }
        Ok(DimensionBounds { d, c1, c2 })
    }

    /// Analytic global dimension of a geometric tail, `1 + ln b/ln q`.
    pub fn natural_dimension(&self) -> Option<f64> {
        match self.tail {
            TailRule::Geometric { ratio, branch, .. } => {
                Some(1.0 + (branch as f64).ln() / ratio.ln())
            }
            TailRule::Halfline => Some(1.0),
            TailRule::Homogeneous { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn generators() {
        let h = TreeDescriptor::homogeneous(1.0, 2).unwrap();
        assert_eq!(h.radius(3), Some(3.0));
        assert_eq!(h.branch(5), Some(2));
        let g = TreeDescriptor::geometric(2.0, 1.0, 4).unwrap();
        for k in 0..10 {
            assert_relative_eq!(g.radius(k).unwrap(), 2f64.powi(k as i32) - 1.0);
        }
        assert!(TreeDescriptor::build(&[(1.0, 2)], TailRule::Halfline).is_err());
        assert!(TreeDescriptor::build(&[(1.0, 2), (0.5, 2)], TailRule::Halfline).is_err());
        assert!(TreeDescriptor::build(&[(1.0, 1)], TailRule::Homogeneous { edge_length: 1.0, branch: 2 }).is_err());
    }

    #[test]
    fn branching_functions() {
        let h = TreeDescriptor::homogeneous(1.0, 2).unwrap();
        let g0 = h.g0();
        assert_eq!(g0.value(0.5), 1.0);
        assert_eq!(g0.value(1.5), 2.0);
        let g1 = h.branching_function(1).unwrap();
        assert_eq!(g1.value(1.5), 1.0);
        assert_eq!(g1.value(2.5), 2.0);
        assert_eq!(g1.start(), 1.0);
        let g = TreeDescriptor::geometric(2.0, 1.0, 4).unwrap().g0();
        for k in 0..8 {
            let lo = 2f64.powi(k) - 1.0;
            let hi = 2f64.powi(k + 1) - 1.0;
            assert_eq!(g.value(0.5 * (lo + hi)), 4f64.powi(k));
            assert_eq!(g.value(hi), 4f64.powi(k));
        }
    }

    #[test]
    fn reduced_heights() {
        let h = TreeDescriptor::homogeneous(1.0, 2).unwrap();
        assert_eq!(h.reduced_height(), ExtReal::Finite(2.0));
        let g = TreeDescriptor::geometric(4.0, 1.0, 2).unwrap();
        assert_eq!(g.reduced_height(), ExtReal::Infinite);
        let g = TreeDescriptor::geometric(2.0, 1.0, 4).unwrap();
        assert_relative_eq!(g.reduced_height().finite().unwrap(), 2.0);
        assert_eq!(TreeDescriptor::halfline().reduced_height(), ExtReal::Infinite);
    }

    #[test]
    fn dimension_envelopes() {
        let g = TreeDescriptor::geometric(2.0, 1.0, 4).unwrap();
        let b = g.dimension_bounds(3.0).unwrap();
        assert_relative_eq!(b.c1, 0.25);
        assert_relative_eq!(b.c2, 1.0);
        let b = TreeDescriptor::halfline().dimension_bounds(1.0).unwrap();
        assert_eq!((b.c1, b.c2), (1.0, 1.0));
        assert!(TreeDescriptor::homogeneous(1.0, 2).unwrap().dimension_bounds(3.0).is_err());
        assert!(g.dimension_bounds(2.5).is_err());
    }

    #[test]
    fn multiplicities() {
        let h = TreeDescriptor::homogeneous(1.0, 2).unwrap();
        assert_eq!(h.multiplicity(1).unwrap(), 1);
        assert_eq!(h.multiplicity(2).unwrap(), 2);
        assert!(h.multiplicity(0).is_err());
        let t = TreeDescriptor::build(
            &[(1.0, 3), (2.0, 2)],
            TailRule::Homogeneous { edge_length: 1.0, branch: 2 },
        )
        .unwrap();
        assert_eq!(t.multiplicity(2).unwrap(), 3);
    }
}
