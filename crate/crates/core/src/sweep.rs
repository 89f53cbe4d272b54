//! Coupling-constant sweeps: the strong coupling (Weyl) limit of the
//! Riesz means and the weak coupling behavior of the lowest eigenvalue.

use serde::{Deserialize, Serialize};

use crate::bounds::{classical_constant, weighted_rhs, RhsWeight};
use crate::decomposition::{component_operator, tree_count, tree_moment};
use crate::engine::{lowest_eigenvalue, SolverOptions};
use crate::error::{Result, SpectralError};
use crate::potential::SymmetricPotential;
use crate::tree::TreeDescriptor;
use crate::weight::Weight;

/// `α^{−γ−1/2} tr(−Δ − αV)_-^γ / (L^cl_{γ,1} ∫_Γ V^{γ+1/2} dx)` at one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylPoint {
    pub alpha: f64,
    pub trace: f64,
    pub reference: f64,
    pub ratio: f64,
    /// Set for α = 0, where the ratio is reported as 0.
    pub degenerate: bool,
}

pub fn weyl_point(tree: &TreeDescriptor, v: &SymmetricPotential, gamma: f64, alpha: f64, opts: &SolverOptions) -> Result<WeylPoint> {
    if !(alpha >= 0.0) {
        return Err(SpectralError::InvalidParameter(format!("α = {alpha} < 0")));
    }
    let g0: Weight = tree.g0().into();
    let integral = weighted_rhs(v, gamma + 0.5, &RhsWeight::Unit, Some(&g0))?;
    let reference = classical_constant(gamma)? * alpha.powf(gamma + 0.5) * integral;
    if alpha == 0.0 {
        return Ok(WeylPoint {
            alpha,
            trace: 0.0,
            reference,
            ratio: 0.0,
            degenerate: true,
        });
    }
    let trace = tree_moment(tree, &v.scaled(alpha), gamma, 0.0, opts)?.value;
    Ok(WeylPoint {
        alpha,
        trace,
        reference,
        ratio: trace / reference,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSweep {
    pub points: Vec<WeylPoint>,
    /// `|ratio − 1|` is non-increasing along the grid.
    pub monotone: bool,
    pub final_deviation: f64,
}

pub fn summarize_weyl(points: Vec<WeylPoint>) -> WeylSweep {
    let dev: Vec<f64> = points.iter().filter(|p| !p.degenerate).map(|p| (p.ratio - 1.0).abs()).collect();
    WeylSweep {
        monotone: dev.windows(2).all(|w| w[1] <= w[0]),
        final_deviation: dev.last().copied().unwrap_or(f64::NAN),
        points,
    }
}

pub fn weyl_sweep(tree: &TreeDescriptor, v: &SymmetricPotential, gamma: f64, alphas: &[f64], opts: &SolverOptions) -> Result<WeylSweep> {
    if alphas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SpectralError::InvalidParameter("α grid must increase".into()));
    }
    let points = alphas
        .iter()
        .map(|&a| weyl_point(tree, v, gamma, a, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_weyl(points))
}

/// Lowest eigenvalue of `−Δ − αV` and whether it is the only one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakPoint {
    pub alpha: f64,
    pub lambda: Option<f64>,
    pub count: u64,
    pub unique: bool,
}

pub fn weak_coupling_point(tree: &TreeDescriptor, v: &SymmetricPotential, alpha: f64, opts: &SolverOptions) -> Result<WeakPoint> {
    let va = v.scaled(alpha);
    let count = tree_count(tree, &va, 0.0, opts)?;
    let op = component_operator(tree, &va, 0)?;
    let lambda = lowest_eigenvalue(&op, 0.0, opts)?.map(|e| e.value);
    Ok(WeakPoint {
        alpha,
        lambda,
        count,
        unique: count == 1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakCouplingFit {
    pub points: Vec<WeakPoint>,
    /// Least-squares slope of `ln|λ_1|` against `ln α` over unique points.
    pub slope: f64,
    pub intercept: f64,
    pub used: usize,
    pub expected: Option<f64>,
}

pub fn fit_weak_coupling(points: Vec<WeakPoint>, d: Option<f64>) -> Result<WeakCouplingFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.unique)
        .filter_map(|p| p.lambda.map(|l| (p.alpha.ln(), (-l).ln())))
        .collect();
    if xy.len() < 2 {
        return Err(SpectralError::InvalidParameter(
            "fewer than two grid points with exactly one eigenvalue".into(),
        ));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(WeakCouplingFit {
        used: xy.len(),
        slope,
        intercept: my - slope * mx,
        expected: d.filter(|&d| d < 2.0).map(|d| 2.0 / (2.0 - d)),
        points,
    })
}

pub fn weak_coupling_fit(tree: &TreeDescriptor, v: &SymmetricPotential, alphas: &[f64], opts: &SolverOptions) -> Result<WeakCouplingFit> {
    let points = alphas
        .iter()
        .map(|&a| weak_coupling_point(tree, v, a, opts))
        .collect::<Result<Vec<_>>>()?;
    fit_weak_coupling(points, tree.natural_dimension())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn halfline_weak_coupling_closed_form() {
        // −u″ − α χ_(0,1) u with Neumann at 0: λ ≈ −α² for small α
        let tree = TreeDescriptor::halfline();
        let v = SymmetricPotential::indicator(0.0, 1.0, 1.0).unwrap();
        let p = weak_coupling_point(&tree, &v, 0.01, &SolverOptions::default()).unwrap();
        assert!(p.unique);
        assert_relative_eq!(p.lambda.unwrap(), -1e-4, max_relative = 0.02);
    }

    #[test]
    fn zero_alpha_is_flagged() {
        let tree = TreeDescriptor::halfline();
        let v = SymmetricPotential::indicator(0.0, 1.0, 1.0).unwrap();
        let p = weyl_point(&tree, &v, 1.0, 0.0, &SolverOptions::default()).unwrap();
        assert!(p.degenerate && p.ratio == 0.0);
    }
}
