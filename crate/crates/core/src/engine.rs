//! Weighted half-line Sturm–Liouville solver for `−(g u′)′ − V g u = λ g u`.
//!
//! The state is `(u, F = g u′)`. `F` is continuous across weight jumps, so
//! stepping through a knot needs no special handling.

use std::f64::consts::PI;

use crate::error::{Result, SpectralError};
use crate::ext::ExtReal;
use crate::potential::SymmetricPotential;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    /// `u′(left) = 0`.
    Neumann,
    /// `u(left) = 0`.
    Dirichlet,
    /// Prescribed `(u, g u′)` at the left end, for singular endpoints
    /// started off a Frobenius expansion.
    Initial { value: f64, flux: f64 },
}

#[derive(Debug, Clone)]
pub struct HalflineOperator {
    pub weight: Weight,
    pub potential: SymmetricPotential,
    pub endpoint: Endpoint,
    pub left: f64,
}

impl HalflineOperator {
    pub fn new(
        weight: impl Into<Weight>,
        potential: SymmetricPotential,
        endpoint: Endpoint,
        left: f64,
    ) -> Result<Self> {
        let weight = weight.into();
        if !left.is_finite() || left < weight.start() - 1e-12 {
            return Err(SpectralError::InvalidParameter(format!(
                "left endpoint {left} lies before the weight's domain {}",
                weight.start()
            )));
        }
        if let Endpoint::Initial { value, flux } = endpoint {
            if value == 0.0 && flux == 0.0 {
                return Err(SpectralError::InvalidParameter("initial data vanish".into()));
            }
        }
        Ok(Self {
            weight,
            potential,
            endpoint,
            left,
        })
    }

    pub fn with_potential(&self, potential: SymmetricPotential) -> Self {
        Self {
            potential,
            ..self.clone()
        }
    }

    pub fn initial_state(&self) -> SolutionState {
        let (value, flux) = match self.endpoint {
            Endpoint::Neumann => (1.0, 0.0),
            Endpoint::Dirichlet => (0.0, 1.0),
            Endpoint::Initial { value, flux } => (value, flux),
        };
        SolutionState {
            position: self.left,
            value,
            flux,
            log_scale: 0.0,
            zeros: 0,
            regime: Regime::Support,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Support,
    Tail,
}

/// Shooting state; the true solution is `exp(log_scale)·(value, flux)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionState {
    pub position: f64,
    pub value: f64,
    pub flux: f64,
    pub log_scale: f64,
    pub zeros: u64,
    pub regime: Regime,
}

impl SolutionState {
    fn renormalize(&mut self) {
        let n = self.value.abs().max(self.flux.abs());
        if n > 0.0 && n.is_finite() {
            self.value /= n;
            self.flux /= n;
            self.log_scale += n.ln();
        }
    }
}

/// Numerical knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative bracket width at which eigenvalue bisection stops.
    pub eigen_rel_tol: f64,
    /// Relative tolerance of the adaptive Prüfer integration.
    pub ode_rel_tol: f64,
    /// Absolute tolerance (radians) of the adaptive Prüfer integration.
    pub ode_abs_tol: f64,
    /// Shift used when counting at 0 is impossible (infinite support).
    pub epsilon: f64,
    /// Cap on solver steps in one call.
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            eigen_rel_tol: 1e-10,
            ode_rel_tol: 1e-11,
            ode_abs_tol: 1e-11,
            epsilon: 1e-8,
            max_steps: 20_000_000,
        }
    }
}

/// Exact step over `h` with constant `g` and `k = V + λ`.
fn exact_step(st: &mut SolutionState, g: f64, k: f64, h: f64) {
    if k > 0.0 {
        let w = k.sqrt();
        let y0 = st.flux / (g * w);
        let phi = st.value.atan2(y0);
        let before = (phi / PI).floor();
        let after = ((phi + w * h) / PI).floor();
        st.zeros += (after - before) as u64;
        let (s, c) = (w * h).sin_cos();
        let u = st.value * c + y0 * s;
        let f = g * w * (-st.value * s + y0 * c);
        st.value = u;
        st.flux = f;
        st.renormalize();
    } else if k == 0.0 {
        let u = st.value + st.flux * h / g;
        if crosses(st.value, u) {
            st.zeros += 1;
        }
        st.value = u;
        st.renormalize();
    } else {
        // u = A e^{κs} + B e^{−κs} has at most one zero per chunk, so a sign
        // comparison of the end values decides it.
        let kappa = (-k).sqrt();
        let mut left = h;
        while left > 0.0 {
            let hc = left.min(20.0 / kappa);
            left -= hc;
            if left < 1e-15 * h {
                left = 0.0;
            }
            let x = kappa * hc;
            let y0 = st.flux / (g * kappa);
            let e2 = (-2.0 * x).exp();
            let u = st.value * (1.0 + e2) + y0 * (1.0 - e2);
            let f = g * kappa * (st.value * (1.0 - e2) + y0 * (1.0 + e2));
            if crosses(st.value, u) {
                st.zeros += 1;
            }
            st.value = u;
            st.flux = f;
            st.log_scale += x - std::f64::consts::LN_2;
            st.renormalize();
        }
    }
}

/// A zero in `(0, h]` of a function with at most one simple zero there.
fn crosses(u0: f64, u1: f64) -> bool {
    u0 != 0.0 && (u1 == 0.0 || (u0 > 0.0) != (u1 > 0.0))
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates the scaled Prüfer system on `[a, b]` where g and V are smooth.
fn prufer_step(
    op: &HalflineOperator,
    lambda: f64,
    st: &mut SolutionState,
    a: f64,
    b: f64,
    opts: &SolverOptions,
    steps: &mut usize,
) -> Result<()> {
    let nudge = 1e-12 * (b - a);
    let inside = |t: f64| t.max(a + nudge).min(b - nudge);
    let g = |t: f64| op.weight.value(inside(t));
    let k = |t: f64| op.potential.value(inside(t)) + lambda;
    let mid = 0.5 * (a + b);
    let s0 = k(mid).abs().sqrt().max(1.0 / (b - a));
    let scale = g(mid) * s0;
    let rhs = |t: f64, y: [f64; 2]| -> [f64; 2] {
        let gt = g(t);
        let kt = k(t);
        let (s, c) = y[0].sin_cos();
        let p = scale / gt;
        let q = kt * gt / scale;
        [p * c * c + q * s * s, s * c * (p - q)]
    };

    let theta0 = st.value.atan2(st.flux / scale);
    let rho0 = st.value.hypot(st.flux / scale);
    let mut y = [theta0, 0.0];
    let mut t = a;
    let d0 = rhs(a, y);
    let mut h = ((b - a) / 8.0).min(0.3 / (d0[0].abs() + 1e-300));
    let hmin = 1e-13 * (b - a).max(1e-300);
    let mut k1 = d0;
    while t < b {
        if *steps >= opts.max_steps {
            return Err(SpectralError::NonTermination(format!(
                "Prüfer integration exceeded {} steps near t = {t}",
                opts.max_steps
            )));
        }
        *steps += 1;
        let last = t + h >= b;
        if last {
            h = b - t;
        }
        let mut ks = [[0.0; 2]; 7];
        ks[0] = k1;
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in ks.iter().enumerate().take(i) {
                yi[0] += h * A[i][j] * kj[0];
                yi[1] += h * A[i][j] * kj[1];
            }
            ks[i] = rhs(t + C[i] * h, yi);
        }
        let mut y5 = y;
        let mut e = [0.0; 2];
        for i in 0..7 {
            y5[0] += h * B5[i] * ks[i][0];
            y5[1] += h * B5[i] * ks[i][1];
            e[0] += h * (B5[i] - B4[i]) * ks[i][0];
            e[1] += h * (B5[i] - B4[i]) * ks[i][1];
        }
        let tol0 = opts.ode_abs_tol + opts.ode_rel_tol * y5[0].abs().min(10.0);
        let tol1 = 1e-8 + 1e-8 * y5[1].abs();
        let err = (e[0] / tol0).abs().max((e[1] / tol1).abs());
        if err <= 1.0 {
            t = if last { b } else { t + h };
            y = y5;
            k1 = ks[6];
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if err > 1.0 && h < hmin {
            return Err(SpectralError::Integration {
                position: t,
                reason: "step size underflow".into(),
            });
        }
    }
    let before = (theta0 / PI).floor();
    let after = (y[0] / PI).floor();
    if after > before {
        st.zeros += (after - before) as u64;
    }
    let (s, c) = y[0].sin_cos();
    st.value = s;
    st.flux = scale * c;
    st.log_scale += rho0.ln() + y[1];
    st.renormalize();
    Ok(())
}

fn propagate_counted(
    op: &HalflineOperator,
    lambda: f64,
    from: SolutionState,
    to: f64,
    opts: &SolverOptions,
    steps: &mut usize,
) -> Result<SolutionState> {
    let mut st = from;
    while st.position < to {
        let a = st.position;
        let mut b = to
            .min(op.weight.next_break(a))
            .min(op.potential.next_break(a));
        if !(b > a) {
            return Err(SpectralError::Integration {
                position: a,
                reason: "empty piece".into(),
            });
        }
        match (op.weight.constant_on(a, b), op.potential.constant_on(a, b)) {
            (Some(g), Some(v)) => exact_step(&mut st, g, v + lambda, b - a),
            _ => {
                b = op.potential.smooth_split(a, op.weight.smooth_split(a, b));
                prufer_step(op, lambda, &mut st, a, b, opts, steps)?;
            }
        }
        *steps += 1;
        st.position = b;
    }
    Ok(st)
}

/// Advances a solution of `−(g u′)′ − V g u = λ g u` from `from.position`
/// to `to`, counting zeros in `(from.position, to]`.
pub fn propagate(
    op: &HalflineOperator,
    lambda: f64,
    from: SolutionState,
    to: f64,
    opts: &SolverOptions,
) -> Result<SolutionState> {
    if !(to >= from.position) || !to.is_finite() {
        return Err(SpectralError::InvalidParameter(format!(
            "cannot propagate from {} to {to}",
            from.position
        )));
    }
    let mut steps = 0;
    propagate_counted(op, lambda, from, to, opts, &mut steps)
}

/// Number of eigenvalues of the operator strictly below `−μ`.
pub fn count_negative(op: &HalflineOperator, mu: f64, opts: &SolverOptions) -> Result<u64> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(SpectralError::InvalidParameter(format!("shift {mu} must be >= 0")));
    }
    if op.potential.is_zero() && !matches!(op.endpoint, Endpoint::Initial { .. }) {
        return Ok(0);
    }
    let mut steps = 0;
    let lambda = -mu;
    let st = op.initial_state();
    if mu == 0.0 {
        let end = op.potential.support_end();
        if end.is_infinite() {
            return Err(SpectralError::RequiresShift);
        }
        let t = end.max(op.left);
        let mut st = propagate_counted(op, 0.0, st, t, opts, &mut steps)?;
        st.regime = Regime::Tail;
        let (a, b) = (st.value, st.flux);
        let extra = match op.weight.tail_inverse_integral(t) {
            ExtReal::Finite(i) => a * (a + b * i) < 0.0,
            ExtReal::Infinite => a * b < 0.0,
        };
        return Ok(st.zeros + u64::from(extra));
    }
    let t = op.potential.escape_radius(mu).max(op.left);
    let mut st = propagate_counted(op, lambda, st, t, opts, &mut steps)?;
    st.regime = Regime::Tail;
    // beyond t, (g u′)′ = (μ − V) g u with μ − V > 0, so u·g u′ > 0 is final
    let chunk = 4.0 / mu.sqrt();
    while !(st.value * st.flux > 0.0) {
        if steps >= opts.max_steps {
            return Err(SpectralError::NonTermination(format!(
                "tail escape not reached by t = {}",
                st.position
            )));
        }
        let next = (st.position + chunk).min(op.weight.next_break(st.position));
        st = propagate_counted(op, lambda, st, next, opts, &mut steps)?;
    }
    Ok(st.zeros)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Eigenvalue {
    pub fn bracket_width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenList {
    pub eigenvalues: Vec<Eigenvalue>,
    /// Threshold actually used (`−ε` when 0 was requested but impossible).
    pub threshold: f64,
    /// Set when eigenvalues may accumulate at 0 and only those below `−ε`
    /// were resolved.
    pub accumulation: bool,
}

impl EigenList {
    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }
}

fn count_below(op: &HalflineOperator, lambda: f64, opts: &SolverOptions) -> Result<u64> {
    count_negative(op, -lambda, opts)
}

/// A λ with no spectrum below it.
fn spectral_floor(op: &HalflineOperator, opts: &SolverOptions) -> Result<f64> {
    // start away from a possible inverse-square singularity at the left end;
    // the doubling below certifies the floor either way
    let mut lo = -(op.potential.sup_abs_beyond(op.left + 1.0) * 1.01 + 1.0);
    for _ in 0..60 {
        if count_below(op, lo, opts)? == 0 {
            return Ok(lo);
        }
        lo *= 2.0;
    }
    Err(SpectralError::NonTermination("no lower spectral bound found".into()))
}

fn effective_threshold(op: &HalflineOperator, threshold: f64, opts: &SolverOptions) -> (f64, bool) {
    if threshold >= 0.0 && op.potential.support_end().is_infinite() {
        (-opts.epsilon, true)
    } else {
        (threshold.min(0.0), false)
    }
}

#[allow(clippy::too_many_arguments)]
fn isolate(
    op: &HalflineOperator,
    lo: f64,
    hi: f64,
    c_lo: u64,
    c_hi: u64,
    opts: &SolverOptions,
    depth: u32,
    out: &mut Vec<Eigenvalue>,
) -> Result<()> {
    if c_hi <= c_lo {
        return Ok(());
    }
    let width = hi - lo;
    if width <= opts.eigen_rel_tol * lo.abs().max(hi.abs()) || depth > 1100 || width < 1e-300 {
        let e = Eigenvalue {
            value: 0.5 * (lo + hi),
            lower: lo,
            upper: hi,
        };
        for _ in c_lo..c_hi {
            out.push(e);
        }
        return Ok(());
    }
    let mid = 0.5 * (lo + hi);
    let c_mid = count_below(op, mid, opts)?;
    isolate(op, lo, mid, c_lo, c_mid, opts, depth + 1, out)?;
    isolate(op, mid, hi, c_mid, c_hi, opts, depth + 1, out)
}

/// All eigenvalues strictly below `threshold ≤ 0`, ascending.
pub fn eigenvalues_below(
    op: &HalflineOperator,
    threshold: f64,
    opts: &SolverOptions,
) -> Result<EigenList> {
    let (thr, accumulation) = effective_threshold(op, threshold, opts);
    let top = count_below(op, thr, opts)?;
    let mut eigenvalues = Vec::with_capacity(top as usize);
    if top > 0 {
        let lo = spectral_floor(op, opts)?;
        isolate(op, lo, thr, 0, top, opts, 0, &mut eigenvalues)?;
    }
    Ok(EigenList {
        eigenvalues,
        threshold: thr,
        accumulation,
    })
}

/// Lowest eigenvalue below `threshold ≤ 0`, if any.
pub fn lowest_eigenvalue(
    op: &HalflineOperator,
    threshold: f64,
    opts: &SolverOptions,
) -> Result<Option<Eigenvalue>> {
    let (thr, _) = effective_threshold(op, threshold, opts);
    if count_below(op, thr, opts)? == 0 {
        return Ok(None);
    }
    let mut lo = spectral_floor(op, opts)?;
    let mut hi = thr;
    let mut depth = 0;
    while hi - lo > opts.eigen_rel_tol * lo.abs().max(hi.abs()) && depth < 1100 {
        let mid = 0.5 * (lo + hi);
        if count_below(op, mid, opts)? >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        depth += 1;
    }
    Ok(Some(Eigenvalue {
        value: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
    }))
}

/// `tr(op + μ)_-^γ` with its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Moment {
    pub value: f64,
    pub count: u64,
    /// Set when the sum only covers eigenvalues below `−ε`.
    pub epsilon: Option<f64>,
    /// `ε^γ·N(−ε)` when regularized, else 0.
    pub remainder_bound: f64,
    pub eigenvalues: Vec<f64>,
}

/// Σ over eigenvalues `λ < −μ` of `(−μ − λ)^γ`; γ = 0 gives the count.
pub fn moment(op: &HalflineOperator, gamma: f64, mu: f64, opts: &SolverOptions) -> Result<Moment> {
    if !(gamma >= 0.0) {
        return Err(SpectralError::InvalidParameter(format!("γ = {gamma} < 0")));
    }
    if gamma == 0.0 {
        let (thr, acc) = effective_threshold(op, -mu, opts);
        let count = count_below(op, thr, opts)?;
        return Ok(Moment {
            value: count as f64,
            count,
            epsilon: acc.then_some(-thr),
            remainder_bound: 0.0,
            eigenvalues: Vec::new(),
        });
    }
    let list = eigenvalues_below(op, -mu, opts)?;
    let count = list.eigenvalues.len() as u64;
    let value = list
        .eigenvalues
        .iter()
        .map(|e| (-mu - e.value).max(0.0).powf(gamma))
        .sum();
    let epsilon = list.accumulation.then_some(-list.threshold);
    let remainder_bound = epsilon.map_or(0.0, |e| e.powf(gamma) * count as f64);
    Ok(Moment {
        value,
        count,
        epsilon,
        remainder_bound,
        eigenvalues: list.values(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{PowerWeight, StepWeight};

    fn flat(v: SymmetricPotential, endpoint: Endpoint) -> HalflineOperator {
        HalflineOperator::new(StepWeight::constant(0.0, 1.0).unwrap(), v, endpoint, 0.0).unwrap()
    }

    #[test]
    fn free_solution_is_constant() {
        let op = flat(SymmetricPotential::zero(), Endpoint::Neumann);
        let st = propagate(&op, 0.0, op.initial_state(), 5.0, &SolverOptions::default()).unwrap();
        assert_eq!(st.zeros, 0);
        assert!((st.value - 1.0).abs() < 1e-15 && st.flux == 0.0);
    }

    #[test]
    fn cosine_zeros() {
        let op = flat(SymmetricPotential::indicator(0.0, PI, 4.0).unwrap(), Endpoint::Neumann);
        let st = propagate(&op, 0.0, op.initial_state(), PI, &SolverOptions::default()).unwrap();
        assert_eq!(st.zeros, 2);
        let u = st.value * st.log_scale.exp();
        assert!((u - 1.0).abs() < 1e-12, "cos 2π = 1, got {u}");
    }

    #[test]
    fn flux_continuity_across_jump() {
        let g = StepWeight::new(0.0, vec![1.0], vec![1.0, 2.0], crate::weight::StepTail::Constant).unwrap();
        let op = HalflineOperator::new(
            g,
            SymmetricPotential::zero(),
            Endpoint::Initial { value: 1.0, flux: 0.6 },
            0.0,
        )
        .unwrap();
        let st = propagate(&op, 0.0, op.initial_state(), 1.5, &SolverOptions::default()).unwrap();
        let scale = st.log_scale.exp();
        let du = st.flux * scale / 2.0;
        assert!((du - 0.3).abs() < 1e-14);
    }

    #[test]
    fn counts_on_flat_line() {
        let o = SolverOptions::default();
        let op = flat(SymmetricPotential::indicator(0.0, PI, 1.0).unwrap(), Endpoint::Neumann);
        assert_eq!(count_negative(&op, 0.0, &o).unwrap(), 1);
        let op = flat(SymmetricPotential::indicator(0.0, PI, 4.0).unwrap(), Endpoint::Neumann);
        assert_eq!(count_negative(&op, 0.0, &o).unwrap(), 2);
        let ev = eigenvalues_below(
            &flat(SymmetricPotential::indicator(0.0, PI, 1.0).unwrap(), Endpoint::Neumann),
            0.0,
            &o,
        )
        .unwrap();
        assert_eq!(ev.eigenvalues.len(), 1);
        assert!(ev.eigenvalues[0].value > -1.0 && ev.eigenvalues[0].value < 0.0);
    }

    #[test]
    fn square_well_matches_transcendental_equation() {
        // Neumann at 0, V = v on (0, 1): eigenvalue −κ² solves
        // sqrt(v − κ²) tan sqrt(v − κ²) = κ.
        let v = 3.0;
        let op = flat(SymmetricPotential::indicator(0.0, 1.0, v).unwrap(), Endpoint::Neumann);
        let ev = eigenvalues_below(&op, 0.0, &SolverOptions::default()).unwrap();
        assert_eq!(ev.eigenvalues.len(), 1);
        let lam = ev.eigenvalues[0].value;
        let kappa = (-lam).sqrt();
        let k = (v - kappa * kappa).sqrt();
        assert!((k * k.tan() - kappa).abs() < 1e-8);
    }

    #[test]
    fn smooth_weight_matches_conjugated_problem() {
        // g = (1+t)², u = w/(1+t) turns A_g into −w″ with Dirichlet-type data;
        // Neumann for u at 0 is the Robin condition w′(0) = w(0).
        let g = PowerWeight::new(1.0, 2.0, 0.0).unwrap();
        let v = SymmetricPotential::indicator(0.0, 2.0, 3.0).unwrap();
        let op = HalflineOperator::new(g, v.clone(), Endpoint::Dirichlet, 0.0).unwrap();
        let flat_op = flat(v, Endpoint::Dirichlet);
        let o = SolverOptions::default();
        let a = eigenvalues_below(&op, 0.0, &o).unwrap().values();
        let b = eigenvalues_below(&flat_op, 0.0, &o).unwrap().values();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-8 * y.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn moment_of_zero_potential() {
        let op = flat(SymmetricPotential::zero(), Endpoint::Neumann);
        let m = moment(&op, 1.5, 0.0, &SolverOptions::default()).unwrap();
        assert_eq!(m.value, 0.0);
    }
}
