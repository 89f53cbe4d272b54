//! Piecewise-linear finite-element oracle.
//!
//! Discretizes `∫ g|u′|² − ∫ V g |u|²` and `∫ g|u|²` on a mesh and counts
//! eigenvalues through the inertia of `K − P − σM`. The matrices live on a
//! tree graph (a path for half-line problems), so an LDLᵀ sweep from the
//! leaves to the root gives the inertia exactly.

use crate::engine::{Endpoint, HalflineOperator};
use crate::error::{Result, SpectralError};
use crate::ext::ExtReal;

/// Symmetric matrix supported on a rooted tree graph: entry `(i, parent[i])`
/// is `off[i]`, and `parent[i] < i` for every non-root node.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeMatrix {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub parent: Vec<usize>,
}

pub const NO_PARENT: usize = usize::MAX;

impl TreeMatrix {
    pub fn zeros(parent: Vec<usize>) -> Self {
        let n = parent.len();
        Self {
            diag: vec![0.0; n],
            off: vec![0.0; n],
            parent,
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of negative eigenvalues of the submatrix on the nodes with
    /// `fixed[i] == false`.
    pub fn negative_count(&self, fixed: &[bool]) -> usize {
        let mut d = self.diag.clone();
        let scale = self.diag.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let mut neg = 0;
        for i in (0..d.len()).rev() {
            if fixed[i] {
                continue;
            }
            let mut piv = d[i];
            if piv == 0.0 {
                piv = 1e-300 * scale;
            }
            if piv < 0.0 {
                neg += 1;
            }
            let p = self.parent[i];
            if p != NO_PARENT && !fixed[p] {
                d[p] -= self.off[i] * self.off[i] / piv;
            }
        }
        neg
    }
}

/// `K`, `P` (potential) and `M` (mass) assembled on one graph.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub stiffness: TreeMatrix,
    pub potential: TreeMatrix,
    pub mass: TreeMatrix,
}

impl Pencil {
    pub fn new(parent: Vec<usize>) -> Self {
        Self {
            stiffness: TreeMatrix::zeros(parent.clone()),
            potential: TreeMatrix::zeros(parent.clone()),
            mass: TreeMatrix::zeros(parent),
        }
    }

    /// Adds one element between `child` and its parent.
    pub(crate) fn add_element(&mut self, child: usize, e: &ElementForms) {
        let p = self.stiffness.parent[child];
        for (m, (a, b, c)) in [
            (&mut self.stiffness, e.stiffness),
            (&mut self.potential, e.potential),
            (&mut self.mass, e.mass),
        ] {
            m.diag[p] += a;
            m.diag[child] += c;
            m.off[child] += b;
        }
    }

    /// Eigenvalues of `(K − P, M)` strictly below `sigma`.
    pub fn count_below(&self, sigma: f64, fixed: &[bool]) -> usize {
        let n = self.stiffness.len();
        let mut a = TreeMatrix::zeros(self.stiffness.parent.clone());
        for i in 0..n {
            a.diag[i] = self.stiffness.diag[i] - self.potential.diag[i] - sigma * self.mass.diag[i];
            a.off[i] = self.stiffness.off[i] - self.potential.off[i] - sigma * self.mass.off[i];
        }
        a.negative_count(fixed)
    }

    /// Eigenvalues below `threshold` by bisection on the inertia.
    pub fn eigenvalues_below(&self, threshold: f64, fixed: &[bool], rel_tol: f64) -> Vec<f64> {
        let top = self.count_below(threshold, fixed);
        if top == 0 {
            return Vec::new();
        }
        let mut lo = -1.0;
        while self.count_below(lo, fixed) > 0 {
            lo *= 2.0;
        }
        let mut out = Vec::with_capacity(top);
        self.isolate(lo, threshold, 0, top, fixed, rel_tol, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn isolate(&self, lo: f64, hi: f64, c_lo: usize, c_hi: usize, fixed: &[bool], tol: f64, out: &mut Vec<f64>) {
        if c_hi <= c_lo {
            return;
        }
        if hi - lo <= tol * lo.abs().max(hi.abs()) || hi - lo < 1e-300 {
            for _ in c_lo..c_hi {
                out.push(0.5 * (lo + hi));
            }
            return;
        }
        let mid = 0.5 * (lo + hi);
        let c = self.count_below(mid, fixed);
        self.isolate(lo, mid, c_lo, c, fixed, tol, out);
        self.isolate(mid, hi, c, c_hi, fixed, tol, out);
    }
}

/// Local 2×2 forms of one element, each as `(aa, ab, bb)` with `a` the
/// parent end.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ElementForms {
    pub stiffness: (f64, f64, f64),
    pub potential: (f64, f64, f64),
    pub mass: (f64, f64, f64),
}

const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// Element forms on `[x0, x1]` for weight `g` and potential `v`, evaluated
/// with 3-point Gauss rules (exact for constant data).
pub(crate) fn element_forms(x0: f64, x1: f64, g: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64) -> ElementForms {
    let h = x1 - x0;
    let mut int_g = 0.0;
    let mut m = (0.0, 0.0, 0.0);
    let mut p = (0.0, 0.0, 0.0);
    for (xi, w) in GAUSS3 {
        let s = 0.5 * (xi + 1.0);
        let x = x0 + s * h;
        let gw = g(x) * w * 0.5 * h;
        let (pa, pb) = (1.0 - s, s);
        int_g += gw;
        m.0 += gw * pa * pa;
        m.1 += gw * pa * pb;
        m.2 += gw * pb * pb;
        let vg = v(x) * gw;
        p.0 += vg * pa * pa;
        p.1 += vg * pa * pb;
        p.2 += vg * pb * pb;
    }
    let k = int_g / (h * h);
    ElementForms {
        stiffness: (k, -k, k),
        potential: p,
        mass: m,
    }
}

/// Mesh control for the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    /// Element density on and near the support of V.
    pub nodes_per_unit: usize,
    /// Truncation radius T.
    pub truncation: f64,
    /// Beyond the support, element length may grow like `grading·(t − T_V)`.
    pub grading: f64,
}

impl MeshSpec {
    pub fn new(nodes_per_unit: usize, truncation: f64) -> Self {
        Self {
            nodes_per_unit,
            truncation,
            grading: 0.05,
        }
    }

    pub fn refined(&self) -> Self {
        Self {
            nodes_per_unit: self.nodes_per_unit * 2,
            grading: self.grading / 2.0,
            ..*self
        }
    }
}

/// Nodes in `[left, right]` containing every break, with uniform spacing
/// `1/npu` up to `dense_until` and graded spacing after it.
pub(crate) fn radial_nodes(left: f64, right: f64, breaks: &[f64], mesh: &MeshSpec, dense_until: f64) -> Vec<f64> {
    let mut pts = vec![left, right];
    pts.extend(breaks.iter().copied().filter(|&b| b > left && b < right));
    if dense_until > left && dense_until < right {
        pts.push(dense_until);
    }
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let h0 = 1.0 / mesh.nodes_per_unit as f64;
    let mut out = vec![left];
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a < dense_until {
            let n = ((b - a) / h0).ceil().max(1.0) as usize;
            for i in 1..n {
                out.push(a + (b - a) * i as f64 / n as f64);
            }
        } else {
            let mut t = a;
            loop {
                let h = h0.max(mesh.grading * (t - dense_until));
                if t + 1.5 * h >= b {
                    break;
                }
                t += h;
                out.push(t);
            }
        }
        out.push(b);
    }
    out
}

/// Counts and eigenvalues from the FEM oracle under both truncations.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    pub count_dirichlet: usize,
    pub count_natural: usize,
    /// Eigenvalues below the threshold under natural truncation.
    pub eigenvalues: Vec<f64>,
    pub agree: bool,
    pub unknowns: usize,
}

struct HalflineDiscretization {
    pencil: Pencil,
    fixed_dirichlet: Vec<bool>,
    fixed_natural: Vec<bool>,
    robin: f64,
}

fn discretize(op: &HalflineOperator, mesh: &MeshSpec) -> Result<HalflineDiscretization> {
    let t = mesh.truncation;
    if !(t > op.left) {
        return Err(SpectralError::InvalidParameter("truncation must exceed the left endpoint".into()));
    }
    if matches!(op.endpoint, Endpoint::Initial { .. }) {
        return Err(SpectralError::InvalidParameter("the oracle needs a Neumann or Dirichlet end".into()));
    }
    let mut breaks = op.weight.breaks_between(op.left, t);
    breaks.extend(op.potential.breaks_between(op.left, t));
    let dense = op.potential.support_end().min(t);
    let nodes = radial_nodes(op.left, t, &breaks, mesh, dense);
    let n = nodes.len();
    if n > 20_000_000 {
        return Err(SpectralError::TooLarge(n));
    }
    let parent: Vec<usize> = (0..n).map(|i| if i == 0 { NO_PARENT } else { i - 1 }).collect();
    let mut pencil = Pencil::new(parent);
    for i in 1..n {
        let (x0, x1) = (nodes[i - 1], nodes[i]);
        let e = element_forms(x0, x1, |x| op.weight.value(x), |x| op.potential.value(x));
        pencil.add_element(i, &e);
    }
    // exterior energy min ∫_T^∞ g|u′|² with u(T) = c is c²/∫_T^∞ g⁻¹
    let robin = match op.weight.tail_inverse_integral(t) {
        ExtReal::Finite(i) => 1.0 / i,
        ExtReal::Infinite => 0.0,
    };
    let mut fixed_natural = vec![false; n];
    if op.endpoint == Endpoint::Dirichlet {
        fixed_natural[0] = true;
    }
    let mut fixed_dirichlet = fixed_natural.clone();
    fixed_dirichlet[n - 1] = true;
    Ok(HalflineDiscretization {
        pencil,
        fixed_dirichlet,
        fixed_natural,
        robin,
    })
}

/// Runs the oracle at shift `μ` (eigenvalues below `−μ`).
pub fn oracle_spectrum(op: &HalflineOperator, mu: f64, mesh: &MeshSpec) -> Result<OracleSpectrum> {
    let mut disc = discretize(op, mesh)?;
    let n = disc.pencil.stiffness.len();
    let count_dirichlet = disc.pencil.count_below(-mu, &disc.fixed_dirichlet);
    disc.pencil.stiffness.diag[n - 1] += disc.robin;
    let count_natural = disc.pencil.count_below(-mu, &disc.fixed_natural);
    let eigenvalues = disc.pencil.eigenvalues_below(-mu, &disc.fixed_natural, 1e-12);
    Ok(OracleSpectrum {
        count_dirichlet,
        count_natural,
        eigenvalues,
        agree: count_dirichlet == count_natural,
        unknowns: n,
    })
}

/// Oracle count with automatic refinement: the mesh is doubled while the
/// natural-truncation count still moves, and the truncation is doubled
/// while the two truncations disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedCount {
    pub count_dirichlet: usize,
    pub count_natural: usize,
    pub agree: bool,
    pub mesh: MeshSpec,
}

pub fn certified_count(op: &HalflineOperator, mu: f64, base: &MeshSpec, max_refinements: usize) -> Result<CertifiedCount> {
    let mut mesh = *base;
    let mut last: Option<OracleSpectrum> = None;
    for _ in 0..=max_refinements {
        let s = oracle_spectrum(op, mu, &mesh)?;
        let stable = last.as_ref().is_some_and(|l| l.count_natural == s.count_natural && l.count_dirichlet == s.count_dirichlet);
        if s.agree && stable {
            return Ok(CertifiedCount {
                count_dirichlet: s.count_dirichlet,
                count_natural: s.count_natural,
                agree: true,
                mesh,
            });
        }
        mesh = if s.agree {
            mesh.refined()
        } else {
            MeshSpec {
                truncation: op.left + 2.0 * (mesh.truncation - op.left),
                ..mesh.refined()
            }
        };
        last = Some(s);
    }
    let s = last.expect("at least one pass");
    Ok(CertifiedCount {
        count_dirichlet: s.count_dirichlet,
        count_natural: s.count_natural,
        agree: s.agree,
        mesh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::SymmetricPotential;
    use crate::weight::StepWeight;
    use std::f64::consts::PI;

    #[test]
    fn tree_inertia_matches_path_sturm_count() {
        // tridiagonal 2 on the diagonal, -1 off: eigenvalues 2 − 2cos(kπ/(n+1))
        let n = 10;
        let parent: Vec<usize> = (0..n).map(|i| if i == 0 { NO_PARENT } else { i - 1 }).collect();
        let mut m = TreeMatrix::zeros(parent);
        for i in 0..n {
            m.diag[i] = 2.0 - 1.0;
            if i > 0 {
                m.off[i] = -1.0;
            }
        }
        let expect = (1..=n).filter(|k| 2.0 - 2.0 * (*k as f64 * PI / (n as f64 + 1.0)).cos() < 1.0).count();
        assert_eq!(m.negative_count(&vec![false; n]), expect);
    }

    #[test]
    fn zero_potential_has_no_spectrum() {
        let op = HalflineOperator::new(
            StepWeight::constant(0.0, 1.0).unwrap(),
            SymmetricPotential::zero(),
            Endpoint::Neumann,
            0.0,
        )
        .unwrap();
        let s = oracle_spectrum(&op, 0.0, &MeshSpec::new(64, 10.0)).unwrap();
        assert_eq!((s.count_dirichlet, s.count_natural), (0, 0));
    }

    #[test]
    fn square_well_count_two() {
        let op = HalflineOperator::new(
            StepWeight::constant(0.0, 1.0).unwrap(),
            SymmetricPotential::indicator(0.0, PI, 4.0).unwrap(),
            Endpoint::Neumann,
            0.0,
        )
        .unwrap();
        let s = oracle_spectrum(&op, 0.0, &MeshSpec::new(64, 20.0)).unwrap();
        assert_eq!(s.count_natural, 2);
        assert_eq!(s.eigenvalues.len(), 2);
    }
}
