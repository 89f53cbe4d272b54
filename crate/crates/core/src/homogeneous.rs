//! Homogeneous trees with unit edges: bottom of the essential spectrum,
//! the generalized ground state ω, and counting below λ_b through the
//! ground state representation.

use crate::bounds::{clr_bound, clr_m, p_of_q, weighted_rhs, BoundParams, BoundReport, RhsWeight};
use crate::decomposition::active_generations;
use crate::engine::{count_negative, propagate, Endpoint, HalflineOperator, SolverOptions};
use crate::error::{Result, SpectralError};
use crate::potential::SymmetricPotential;
use crate::tree::TreeDescriptor;
use crate::weight::{GroundStateWeight, PowerWeight, Weight};

/// `R_b = (b^{1/2} + b^{−1/2})/2`.
pub fn r_b(b: f64) -> f64 {
    (b.sqrt() + 1.0 / b.sqrt()) / 2.0
}

/// `λ_b = arccos(1/R_b)²`.
pub fn lambda_b(b: f64) -> Result<f64> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(SpectralError::InvalidParameter(format!("branching {b} must exceed 1")));
    }
    Ok((1.0 / r_b(b)).acos().powi(2))
}

/// ω on the homogeneous tree, `ω(t) = α_j cos μ(t−j) + β_j cos μ(j+1−t)`
/// on `(j, j+1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub branch: f64,
    pub mu: f64,
}

fn edge_of(t: f64) -> u64 {
    if t <= 0.0 {
        0
    } else {
        (t.ceil() as u64).saturating_sub(1)
    }
}

impl GroundState {
    pub fn new(b: f64) -> Result<Self> {
        Ok(Self {
            branch: b,
            mu: lambda_b(b)?.sqrt(),
        })
    }

    /// `(α_j, β_j) = b^{−j/2}(j+1, −j b^{−1/2})`.
    pub fn coefficients(&self, j: u64) -> (f64, f64) {
        let s = self.branch.powf(-(j as f64) / 2.0);
        let jf = j as f64;
        (s * (jf + 1.0), -s * jf / self.branch.sqrt())
    }

    /// The same coefficients from `j` steps of the transfer recursion.
    pub fn coefficients_by_recursion(&self, j: u64) -> (f64, f64) {
        let rb = self.branch.sqrt();
        let (mut a, mut c) = (1.0, 0.0);
        for _ in 0..j {
            let na = (2.0 * a + rb * c) / rb;
            let nc = -a / (rb * rb);
            a = na;
            c = nc;
        }
        (a, c)
    }

    /// ω(t) with t on edge `j` given explicitly (so both one-sided values
    /// at a vertex are reachable).
    fn on_edge(&self, j: u64, t: f64) -> (f64, f64) {
        let (a, c) = self.coefficients(j);
        let s = t - j as f64;
        let m = self.mu;
        let u = a * (m * s).cos() + c * (m * (1.0 - s)).cos();
        let du = -a * m * (m * s).sin() + c * m * (m * (1.0 - s)).sin();
        (u, du)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.on_edge(edge_of(t), t).0
    }

    /// ω′(t−) for t > 0, ω′(0) at 0.
    pub fn derivative_left(&self, t: f64) -> f64 {
        self.on_edge(edge_of(t), t).1
    }

    /// ω′(t+).
    pub fn derivative_right(&self, t: f64) -> f64 {
        let j = if t < 0.0 { 0 } else { t.floor() as u64 };
        self.on_edge(j, t).1
    }

    fn g0(&self, t: f64) -> f64 {
        self.branch.powi(edge_of(t) as i32)
    }

    /// `ω(t)√g_0(t)/(1+t)`.
    pub fn envelope(&self, t: f64) -> f64 {
        self.value(t) * self.g0(t).sqrt() / (1.0 + t)
    }

    /// The periodic limit `φ(s) = cos μs − b^{−1/2} cos μ(1−s)`.
    pub fn periodic_factor(&self, s: f64) -> f64 {
        let s = s - s.floor();
        (self.mu * s).cos() - (self.mu * (1.0 - s)).cos() / self.branch.sqrt()
    }

    /// The two-sided bounds on φ stated with the asymptotics of ω.
    pub fn periodic_bounds(&self) -> (f64, f64) {
        let rb = self.branch.sqrt();
        let hi = (rb - 1.0 / rb) / (rb + 1.0 / rb);
        (hi / rb, hi)
    }

    /// Residuals over the first `edges` edges: vertex continuity, the flux
    /// jump `ω′(j−) = b ω′(j+)`, and agreement of each edge with the exact
    /// transfer of its left data through `u″ = −μ² u`.
    pub fn residuals(&self, edges: u64) -> Residuals {
        let mut r = Residuals::default();
        r.neumann = self.derivative_right(0.0).abs();
        let m = self.mu;
        for j in 0..edges {
            let (u0, du0) = self.on_edge(j, j as f64);
            let scale = u0.abs().max(du0.abs() / m).max(1e-300);
            for i in 1..=16 {
                let s = i as f64 / 16.0;
                let pred = u0 * (m * s).cos() + du0 / m * (m * s).sin();
                let (u, _) = self.on_edge(j, j as f64 + s);
                r.ode = r.ode.max((u - pred).abs() / scale);
            }
            if j > 0 {
                let (ul, dl) = self.on_edge(j - 1, j as f64);
                let (ur, dr) = self.on_edge(j, j as f64);
                r.continuity = r.continuity.max((ul - ur).abs() / scale);
                r.jump = r.jump.max((dl - self.branch * dr).abs() / (dl.abs().max(1e-300)));
            }
        }
        r
    }

    /// Smallest and largest `ω√g_0/(1+t)` over `[0, t_max]`, sampled.
    pub fn envelope_range(&self, t_max: f64, samples_per_edge: usize) -> (f64, f64) {
        let n = (t_max.ceil() as usize).max(1) * samples_per_edge;
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..=n {
            let t = t_max * i as f64 / n as f64;
            let e = self.envelope(t);
            lo = lo.min(e);
            hi = hi.max(e);
        }
        (lo, hi)
    }

    /// `∫_0^n ω² g_0`, which grows like `n³` (ω is not an eigenfunction).
    pub fn mass_up_to(&self, n: f64) -> f64 {
        GroundStateWeight::new(self.branch, 0.0)
            .map(|w| w.integral(0.0, n))
            .unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residuals {
    pub neumann: f64,
    pub continuity: f64,
    pub jump: f64,
    pub ode: f64,
}

fn check_homogeneous(tree: &TreeDescriptor) -> Result<u32> {
    match tree.tail() {
        crate::tree::TailRule::Homogeneous { edge_length, branch }
            if tree.prefix().is_empty() && edge_length == 1.0 =>
        {
            Ok(branch)
        }
        _ => Err(SpectralError::InvalidTree(
            "expected a homogeneous tree with unit edges and no prefix".into(),
        )),
    }
}

/// `B − V` in `L²(ω² g_0)` for component `k`: Neumann at 0 for `k = 0`,
/// Dirichlet at `k` otherwise. Its negative eigenvalues are those of
/// `A_k − V` below λ_b.
pub fn gsr_operator(b: u32, v: &SymmetricPotential, k: usize) -> Result<HalflineOperator> {
    let start = k as f64;
    let w = GroundStateWeight::new(b as f64, start)?;
    let (endpoint, pot) = if k == 0 {
        (Endpoint::Neumann, v.clone())
    } else {
        (Endpoint::Dirichlet, v.restricted(start))
    };
    HalflineOperator::new(w, pot, endpoint, start)
}

/// `N(−Δ_N − V − λ_b)` on the homogeneous tree, summed over components
/// through the ground state representation.
pub fn count_below_lambda_b(tree: &TreeDescriptor, v: &SymmetricPotential, opts: &SolverOptions) -> Result<u64> {
    let b = check_homogeneous(tree)?;
    let mut total: u64 = 0;
    for k in active_generations(tree, v)? {
        let n = count_negative(&gsr_operator(b, v, k)?, 0.0, opts)?;
        let m = if k == 0 { 1 } else { tree.multiplicity(k)? };
        total += m * n;
    }
    Ok(total)
}

/// Count of eigenvalues of component `k` below `λ < λ_b`, by shooting at
/// λ and following the exact per-edge transfer beyond the support until
/// the solution has settled on the growing Floquet direction.
pub fn shifted_component_count(
    b: u32,
    v: &SymmetricPotential,
    k: usize,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<u64> {
    let bf = b as f64;
    let lb = lambda_b(bf)?;
    if !(lambda < lb) || !(lambda > 0.0) {
        return Err(SpectralError::InvalidParameter(format!("need 0 < λ < λ_b = {lb}, got {lambda}")));
    }
    let tree = TreeDescriptor::homogeneous(1.0, b)?;
    let op = crate::decomposition::component_operator(&tree, v, k)?;
    let end = v.support_end();
    if !end.is_finite() {
        return Err(SpectralError::InvalidPotential("needs compact support".into()));
    }
    let t0 = end.max(op.left).ceil().max(op.left + 1.0);
    let st = propagate(&op, lambda, op.initial_state(), t0, opts)?;
    // per-edge map on (u, u′): rotation, then u′ divided by b at the vertex
    let m = lambda.sqrt();
    let (s, c) = m.sin_cos();
    let p = [[c, s / m], [-m * s / bf, c / bf]];
    let tr = p[0][0] + p[1][1];
    let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let (r1, r2) = (0.5 * (tr + disc), 0.5 * (tr - disc));
    // eigenvectors (p01, r − p00)
    let v1 = [p[0][1], r1 - p[0][0]];
    let v2 = [p[0][1], r2 - p[0][0]];
    // beyond the support u at the vertices is c1 r1^n + c2 r2^n, which
    // changes sign at most once, and with √λ < π each edge carries a zero
    // exactly when u changes sign across it
    let vdet = v1[0] * v2[1] - v1[1] * v2[0];
    let g = op.weight.value_right(st.position);
    let x = [st.value, st.flux / g];
    let a1 = (x[0] * v2[1] - x[1] * v2[0]) / vdet;
    let limit_sign = a1 * v1[0];
    if limit_sign == 0.0 || x[0] == 0.0 {
        return Err(SpectralError::NonTermination(format!("λ = {lambda} is numerically an eigenvalue")));
    }
    Ok(st.zeros + u64::from((limit_sign > 0.0) != (x[0] > 0.0)))
}

/// The same tree count as [`count_below_lambda_b`], computed at
/// `λ_b − ε` without the ground state.
pub fn count_below_shifted(tree: &TreeDescriptor, v: &SymmetricPotential, epsilon: f64, opts: &SolverOptions) -> Result<u64> {
    let b = check_homogeneous(tree)?;
    let lambda = lambda_b(b as f64)? - epsilon;
    let mut total = 0;
    for k in active_generations(tree, v)? {
        let n = shifted_component_count(b, v, k, lambda, opts)?;
        let m = if k == 0 { 1 } else { tree.multiplicity(k)? };
        total += m * n;
    }
    Ok(total)
}

/// Zeros on `(0, t_max]` of the Neumann solution of `A_0 − V` at spectral
/// parameter λ.
pub fn zeros_up_to(b: u32, v: &SymmetricPotential, lambda: f64, t_max: f64, opts: &SolverOptions) -> Result<u64> {
    let tree = TreeDescriptor::homogeneous(1.0, b)?;
    let op = HalflineOperator::new(tree.g0(), v.clone(), Endpoint::Neumann, 0.0)?;
    Ok(propagate(&op, lambda, op.initial_state(), t_max, opts)?.zeros)
}

/// Homogeneous CLR report: `N(−Δ_N − V − λ_b) ≤ C(b)·c_p M^p ∫_Γ V_+^p w`,
/// with `C(b) = (C_2/C_1)^{2p}` measured from the envelope of ω.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousBound {
    pub report: BoundReport,
    pub m: f64,
    pub c_b: f64,
    pub envelope: (f64, f64),
    pub potential_integral: f64,
}

pub fn homo_clr_bound(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    w: &RhsWeight,
    q: f64,
    opts: &SolverOptions,
) -> Result<HomogeneousBound> {
    let b = check_homogeneous(tree)?;
    let lhs = count_below_lambda_b(tree, v, opts)? as f64;
    let gpow: Weight = PowerWeight::new(1.0, 2.0, 0.0)?.into();
    let wc = w.clone();
    let m = clr_m(&gpow, &move |t| wc.value(t).unwrap_or(f64::NAN), q, false)?
        .value
        .finite()
        .ok_or_else(|| SpectralError::InvalidParameter("M is infinite".into()))?;
    let p = p_of_q(q);
    let (_, upper) = clr_bound(m, p)?;
    let gs = GroundState::new(b as f64)?;
    let (mut c1, mut c2) = gs.envelope_range(200.0, 64);
    let (plo, phi) = gs.periodic_bounds();
    c1 = c1.min(plo);
    c2 = c2.max(phi);
    let c_b = (c2 / c1).powf(2.0 * p);
    let g0: Weight = tree.g0().into();
    let integral = weighted_rhs(v, p, w, Some(&g0))?;
    let constant = c_b * upper;
    let report = BoundReport::new(
        "homogeneous_clr",
        lhs,
        constant * integral,
        constant,
        BoundParams {
            p: Some(p),
            q: Some(q),
            ..Default::default()
        },
    );
    Ok(HomogeneousBound {
        report,
        m,
        c_b,
        envelope: (c1, c2),
        potential_integral: integral,
    })
}
