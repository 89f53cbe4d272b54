//! Right-hand sides and constants of the CLR, Hardy and Lieb–Thirring type
//! inequalities, with reports comparing them to computed spectra.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::ext::ExtReal;
use crate::potential::SymmetricPotential;
use crate::quad::integrate_split;
use crate::tree::TreeDescriptor;
use crate::trial::TrialFunction;
use crate::weight::Weight;

/// Parameters attached to a report; absent ones are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub d: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
}

/// One inequality `lhs ≤ rhs` evaluated on one instance. `rhs` already
/// includes `constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub ratio: Option<f64>,
    pub satisfied: bool,
    pub params: BoundParams,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, constant: f64, params: BoundParams) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            constant,
            ratio: (rhs > 0.0).then(|| lhs / rhs),
            satisfied: lhs <= rhs,
            params,
        }
    }

    /// `lhs ≤ rhs·(1 + rel) + abs`.
    pub fn satisfied_within(&self, rel: f64, abs: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel) + abs
    }
}

/// Weight `w` in `∫ V_+^p w`.
#[derive(Clone)]
pub enum RhsWeight {
    Unit,
    /// `(1+t)^a`.
    OnePlusT(f64),
    /// `g(t)^e`.
    WeightPower(Weight, f64),
    /// `g(t)·∫_t^∞ ds/g(s)`, the diagonal of the Green function of `A_g`.
    GreenDiagonal(Weight),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for RhsWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unit => write!(f, "Unit"),
            Self::OnePlusT(a) => write!(f, "OnePlusT({a})"),
            Self::WeightPower(_, e) => write!(f, "WeightPower(_, {e})"),
            Self::GreenDiagonal(_) => write!(f, "GreenDiagonal(_)"),
            Self::Custom(_) => write!(f, "Custom(_)"),
        }
    }
}

impl RhsWeight {
    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(match self {
            Self::Unit => 1.0,
            Self::OnePlusT(a) => (1.0 + t).powf(*a),
            Self::WeightPower(g, e) => g.value(t).powf(*e),
            Self::GreenDiagonal(g) => g.value(t) * g.tail_integral(t)?,
            Self::Custom(f) => f(t),
        })
    }

    fn breaks(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            Self::WeightPower(g, _) | Self::GreenDiagonal(g) => g.breaks_between(a, b),
            _ => Vec::new(),
        }
    }
}

const RHS_ABS_TOL: f64 = 1e-13;
const RHS_REL_TOL: f64 = 1e-12;

/// `∫ V_+^p w dt`, or `∫ V_+^p w g_0 dt = ∫_Γ V_+^p w dx` when a measure is
/// given.
pub fn weighted_rhs(v: &SymmetricPotential, p: f64, w: &RhsWeight, measure: Option<&Weight>) -> Result<f64> {
    if !(p > 0.0) {
        return Err(SpectralError::InvalidParameter(format!("exponent p = {p} must be positive")));
    }
    let end = v.support_end();
    if !end.is_finite() {
        return Err(SpectralError::InvalidPotential("weighted integrals need compact support".into()));
    }
    if v.is_zero() {
        return Ok(0.0);
    }
    let a = v.support_start().max(0.0);
    if !(end > a) {
        return Ok(0.0);
    }
    if let RhsWeight::GreenDiagonal(g) = w {
        g.tail_integral(a)?;
    }
    let mut breaks = v.breaks_between(a, end);
    breaks.extend(w.breaks(a, end));
    if let Some(m) = measure {
        breaks.extend(m.breaks_between(a, end));
    }
    breaks.sort_by(|x, y| x.total_cmp(y));
    breaks.dedup();
    let f = |t: f64| {
        let vp = v.positive_power(t, p);
        if vp == 0.0 {
            return 0.0;
        }
        let wt = w.value(t).unwrap_or(f64::NAN);
        vp * wt * measure.map_or(1.0, |m| m.value(t))
    };
    let r = integrate_split(f, a, end, &breaks, RHS_ABS_TOL, RHS_REL_TOL);
    if r.is_nan() {
        return Err(SpectralError::InvalidParameter("weight undefined on the support".into()));
    }
    Ok(r)
}

/// `∫_Γ V_+^{γ+(1+a)/2} g_0^{a/(d−1)} dx` on a tree.
pub fn lt_rhs(tree: &TreeDescriptor, v: &SymmetricPotential, gamma: f64, a: f64, d: f64) -> Result<f64> {
    if !(a >= 0.0) || !(gamma >= 0.0) {
        return Err(SpectralError::InvalidParameter("need γ ≥ 0 and a ≥ 0".into()));
    }
    let g0 = Weight::from(tree.g0());
    let w = if a == 0.0 {
        RhsWeight::Unit
    } else if d <= 1.0 {
        return Err(SpectralError::InvalidParameter(
            "tree weight g_0^{a/(d-1)} is undefined for d = 1; use the half-line form".into(),
        ));
    } else {
        RhsWeight::WeightPower(g0.clone(), a / (d - 1.0))
    };
    weighted_rhs(v, gamma + 0.5 * (1.0 + a), &w, Some(&g0))
}

/// `∫ V_+^{γ+(1+a)/2} (1+t)^a dt` on the half-line.
pub fn lt_rhs_halfline(v: &SymmetricPotential, gamma: f64, a: f64) -> Result<f64> {
    weighted_rhs(v, gamma + 0.5 * (1.0 + a), &RhsWeight::OnePlusT(a), None)
}

/// Value of a supremum functional together with where it was attained and
/// how far out it was examined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupFunctional {
    pub value: ExtReal,
    pub argmax: f64,
    pub horizon: f64,
}

/// Horizon factor and piece cap of the supremum scans.
const SCAN_HORIZON: f64 = 1e6;
const SCAN_MAX_PIECES: usize = 20_000;
const SCAN_SUBDIV: usize = 8;

/// Sample points of a scan, with the left functional accumulated.
struct Scan {
    t: Vec<f64>,
    /// `∫_start^t density` or `sup_{start ≤ s ≤ t} density`.
    left: Vec<f64>,
    /// Same quantity over `(t_{i−1}, t_i]` only.
    local: Vec<f64>,
}

fn scan(
    start: f64,
    next_break: &dyn Fn(f64) -> f64,
    density: &dyn Fn(f64) -> f64,
    running_sup: bool,
) -> Scan {
    let horizon = start + SCAN_HORIZON * (1.0 + start.abs());
    let mut t = vec![start];
    let mut left = vec![0.0];
    let mut local = vec![0.0];
    let mut a = start;
    let mut pieces = 0;
    while a < horizon && pieces < SCAN_MAX_PIECES {
        let b = next_break(a).min(a + 0.25 * (1.0 + a)).min(horizon);
        let h = (b - a) / SCAN_SUBDIV as f64;
        for i in 0..SCAN_SUBDIV {
            let lo = a + h * i as f64;
            let hi = if i + 1 == SCAN_SUBDIV { b } else { lo + h };
            let piece = if running_sup {
                let inside = lo + 1e-12 * (hi - lo);
                (0..=4)
                    .map(|j| density(inside + (hi - inside) * j as f64 / 4.0))
                    .fold(0.0, f64::max)
            } else {
                crate::quad::integrate(density, lo, hi, 1e-300, 1e-12)
            };
            let prev: f64 = *left.last().unwrap();
            left.push(if running_sup { prev.max(piece) } else { prev + piece });
            local.push(piece);
            t.push(hi);
        }
        a = b;
        pieces += 1;
    }
    Scan { t, left, local }
}

/// `M = sup_t (∫_0^t g^{q/2} w^{−(q−2)/2})^{2/q} ∫_t^∞ 1/g`, with
/// `sup_{s≤t} g/w` in place of the first factor when `q = ∞`. The
/// Dirichlet variant exchanges the intervals `(0, t)` and `(t, ∞)`.
///
/// The supremum is scanned out to `10⁶·(1 + start)` (or 20000 pieces) and
/// refined by golden-section search around the best sample.
pub fn clr_m(g: &Weight, w: &dyn Fn(f64) -> f64, q: f64, dirichlet: bool) -> Result<SupFunctional> {
    if !(q > 2.0) {
        return Err(SpectralError::InvalidParameter(format!("q = {q} must exceed 2")));
    }
    let start = g.start();
    if !dirichlet {
        g.tail_integral(start)?;
    }
    let finite_q = q.is_finite();
    let density = |s: f64| {
        if finite_q {
            g.value(s).powf(0.5 * q) * w(s).powf(-0.5 * (q - 2.0))
        } else {
            g.value(s) / w(s)
        }
    };
    let nb = |s: f64| g.next_break(s);
    let sc = scan(start, &nb, &density, !finite_q);
    let horizon = *sc.t.last().unwrap();
    let power = if finite_q { 2.0 / q } else { 1.0 };
    let n = sc.t.len();
    let mut best = (f64::NEG_INFINITY, start);
    if !dirichlet {
        for i in 0..n {
            let f = sc.left[i].powf(power) * g.tail_integral(sc.t[i])?;
            if f > best.0 {
                best = (f, sc.t[i]);
            }
        }
        if finite_q {
            // golden refinement in the neighbourhood of the best sample
            let i = sc.t.iter().position(|&x| x == best.1).unwrap();
            let lo_i = i.saturating_sub(1);
            let hi_i = (i + 1).min(n - 1);
            let (lo, hi) = (sc.t[lo_i], sc.t[hi_i]);
            let base = sc.left[lo_i];
            let f = |t: f64| {
                let acc = base + crate::quad::integrate(density, lo, t, 1e-300, 1e-12);
                acc.powf(power) * g.tail_integral(t).unwrap_or(0.0)
            };
            best.0 = best.0.max(golden_max(&f, lo, hi));
        }
    } else {
        let total = sc.left[n - 1];
        let mut suffix = vec![0.0; n];
        if !finite_q {
            let mut m: f64 = 0.0;
            for i in (0..n).rev() {
                suffix[i] = m;
                m = m.max(sc.local[i]);
            }
        }
        for i in 0..n {
            let right = if finite_q { total - sc.left[i] } else { suffix[i] };
            let f = right.max(0.0).powf(power) * g.inverse_integral(start, sc.t[i]);
            if f > best.0 {
                best = (f, sc.t[i]);
            }
        }
    }
    let value = if best.0.is_finite() {
        ExtReal::Finite(best.0)
    } else {
        ExtReal::Infinite
    };
    Ok(SupFunctional {
        value,
        argmax: best.1,
        horizon,
    })
}

fn golden_max(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (lo, hi);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// `(M^p, (1+p′)^{p−1}(1+1/p′)^p M^p)`; `(M, M)` for `p = 1`.
pub fn clr_bound(m: f64, p: f64) -> Result<(f64, f64)> {
    if !(p >= 1.0) || !(m >= 0.0) || !m.is_finite() {
        return Err(SpectralError::InvalidParameter(format!("need p ≥ 1 and finite M ≥ 0 (p = {p}, M = {m})")));
    }
    let lower = m.powf(p);
    if p == 1.0 {
        return Ok((m, m));
    }
    let pc = p / (p - 1.0);
    let upper = (1.0 + pc).powf(p - 1.0) * (1.0 + 1.0 / pc).powf(p) * lower;
    Ok((lower, upper))
}

/// `p = q/(q−2)` (1 for `q = ∞`).
pub fn p_of_q(q: f64) -> f64 {
    if q.is_infinite() {
        1.0
    } else {
        q / (q - 2.0)
    }
}

/// `∫ V_+ g(t) ∫_t^∞ ds/g dt`.
pub fn sharp_clr_rhs(g: &Weight, v: &SymmetricPotential) -> Result<f64> {
    weighted_rhs(v, 1.0, &RhsWeight::GreenDiagonal(g.clone()), None)
}

/// Outcome of the weighted Hardy inequality
/// `(∫|w u|^q)^{2/q} ≤ S² ∫ g|u′|²` on one trial function, with
/// `v² = g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyCheck {
    pub lhs: f64,
    /// `∫ g|u′|²`.
    pub form: f64,
    pub t_const: ExtReal,
    pub s_upper: ExtReal,
    pub ok: bool,
}

/// Evaluates both sides and the constant bracket `T ≤ S ≤ c_q T` with
/// `T = sup_r (∫_0^r |w|^q)^{1/q} (∫_r^∞ 1/g)^{1/2}`.
pub fn hardy_check(u: &TrialFunction, w: &dyn Fn(f64) -> f64, g: &Weight, q: f64) -> Result<HardyCheck> {
    if !(q > 2.0) && q != 2.0 {
        return Err(SpectralError::InvalidParameter(format!("q = {q} must be at least 2")));
    }
    let form = u.integrate(|t, _, d| g.value(t) * d * d);
    let lhs = if q.is_finite() {
        u.integrate(|t, u, _| (w(t) * u).abs().powf(q)).powf(2.0 / q)
    } else {
        u.sup_with(|t| w(t).abs()).powi(2)
    };
    let t_const = match g.tail_inverse_integral(g.start()) {
        ExtReal::Infinite => ExtReal::Infinite,
        ExtReal::Finite(_) => {
            let finite_q = q.is_finite();
            let density = |s: f64| if finite_q { w(s).abs().powf(q) } else { w(s).abs() };
            let nb = |s: f64| g.next_break(s);
            let sc = scan(g.start(), &nb, &density, !finite_q);
            let power = if finite_q { 1.0 / q } else { 1.0 };
            let mut best: f64 = 0.0;
            for (t, l) in sc.t.iter().zip(&sc.left) {
                best = best.max(l.powf(power) * g.tail_integral(*t)?.sqrt());
            }
            ExtReal::Finite(best)
        }
    };
    let s_upper = match t_const {
        ExtReal::Finite(t) => {
            let c = if q.is_finite() {
                (1.0 + 0.5 * q).powf(1.0 / q) * (1.0 + 2.0 / q).sqrt()
            } else {
                1.0
            };
            ExtReal::Finite(c * t)
        }
        ExtReal::Infinite => ExtReal::Infinite,
    };
    let ok = match s_upper {
        ExtReal::Finite(s) => lhs <= s * s * form * (1.0 + 1e-9) + 1e-300,
        ExtReal::Infinite => true,
    };
    Ok(HardyCheck {
        lhs,
        form,
        t_const,
        s_upper,
        ok,
    })
}

/// `L^cl_{γ,1} = Γ(γ+1)/(2√π Γ(γ+3/2))`.
pub fn classical_constant(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(SpectralError::InvalidParameter(format!("γ = {gamma} < 0")));
    }
    Ok(libm::tgamma(gamma + 1.0) / (2.0 * std::f64::consts::PI.sqrt() * libm::tgamma(gamma + 1.5)))
}

/// Classical constant and the half-line envelope `L^EK_{γ,0} ≤ m·L^cl_{γ,1}`
/// (`m = 4` for γ ≥ 1/2, `m = 2` for γ ≥ 3/2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConstants {
    pub gamma: f64,
    pub classical: f64,
    pub ek_multiplier: f64,
    pub ek_bound: f64,
}

pub fn classical_constants(gamma: f64) -> Result<ClassicalConstants> {
    let classical = classical_constant(gamma)?;
    if gamma < 0.5 {
        return Err(SpectralError::InvalidParameter(format!(
            "the half-line envelope needs γ ≥ 1/2, got {gamma}"
        )));
    }
    let ek_multiplier = if gamma >= 1.5 { 2.0 } else { 4.0 };
    Ok(ClassicalConstants {
        gamma,
        classical,
        ek_multiplier,
        ek_bound: ek_multiplier * classical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{PowerWeight, StepWeight};
    use approx::assert_relative_eq;

    fn power(e: f64) -> Weight {
        PowerWeight::new(1.0, e, 0.0).unwrap().into()
    }

    #[test]
    fn weighted_rhs_examples() {
        let tree = TreeDescriptor::homogeneous(1.0, 2).unwrap();
        let g0: Weight = tree.g0().into();
        let v = SymmetricPotential::indicator(0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(weighted_rhs(&v, 1.0, &RhsWeight::Unit, Some(&g0)).unwrap(), 1.0, max_relative = 1e-14);
        let v = SymmetricPotential::indicator(0.0, 1.0, 2.0).unwrap();
        let r = weighted_rhs(&v, 1.5, &RhsWeight::OnePlusT(1.0), None).unwrap();
        assert_relative_eq!(r, 1.5 * 2f64.powf(1.5), max_relative = 1e-13);
        assert_eq!(weighted_rhs(&SymmetricPotential::zero(), 1.0, &RhsWeight::Unit, None).unwrap(), 0.0);
    }

    #[test]
    fn lt_rhs_examples() {
        let tree = TreeDescriptor::homogeneous(1.0, 2).unwrap();
        let v = SymmetricPotential::indicator(0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(lt_rhs(&tree, &v, 1.0, 0.0, 3.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(lt_rhs(&tree, &v, 0.0, 2.0, 3.0).unwrap(), 1.0, max_relative = 1e-14);
        assert!(lt_rhs(&tree, &v, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn m_for_power_weight() {
        let g = power(2.0);
        let m = clr_m(&g, &|t| 1.0 + t, f64::INFINITY, false).unwrap();
        assert_relative_eq!(m.value.finite().unwrap(), 1.0, max_relative = 1e-9);
        // w = g·G(t,t) = (1+t): same functional
        let gg = g.clone();
        let w = move |t: f64| gg.value(t) * gg.tail_integral(t).unwrap();
        let m = clr_m(&g, &w, f64::INFINITY, false).unwrap();
        assert_relative_eq!(m.value.finite().unwrap(), 1.0, max_relative = 1e-9);
        let flat: Weight = StepWeight::constant(0.0, 1.0).unwrap().into();
        assert!(clr_m(&flat, &|_| 1.0, f64::INFINITY, false).is_err());
    }

    #[test]
    fn m_finite_q_closed_form() {
        // g = (1+t)², w = (1+t)^5 with q = 4: density (1+t)^{-1}, so
        // (ln(1+t))^{1/2}/(1+t) peaks at ln(1+t) = 1/2 with value (2e)^{-1/2}
        let g = power(2.0);
        let m = clr_m(&g, &|t| (1.0 + t).powi(5), 4.0, false).unwrap();
        assert_relative_eq!(m.value.finite().unwrap(), (2.0 * std::f64::consts::E).powf(-0.5), max_relative = 1e-9);
    }

    #[test]
    fn clr_bound_examples() {
        assert_eq!(clr_bound(1.0, 1.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = clr_bound(1.0, 2.0).unwrap();
        assert_eq!(lo, 1.0);
        assert_relative_eq!(hi, 6.75, max_relative = 1e-15);
        assert_eq!(clr_bound(0.0, 2.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn sharp_rhs_example() {
        let v = SymmetricPotential::indicator(0.0, 1.0, 3.0).unwrap();
        assert_relative_eq!(sharp_clr_rhs(&power(2.0), &v).unwrap(), 4.5, max_relative = 1e-12);
    }

    #[test]
    fn hardy_on_flat_weight_is_infinite() {
        let u = TrialFunction::hat(1.0, 1.0).unwrap();
        let g: Weight = StepWeight::constant(0.0, 1.0).unwrap().into();
        let h = hardy_check(&u, &|_| 1.0, &g, 4.0).unwrap();
        assert_eq!(h.t_const, ExtReal::Infinite);
        let h = hardy_check(&u, &|t| 1.0 / (1.0 + t), &power(2.0), f64::INFINITY).unwrap();
        assert!(h.ok);
    }

    #[test]
    fn classical_values() {
        assert_relative_eq!(classical_constant(0.5).unwrap(), 0.25, max_relative = 1e-14);
        assert_relative_eq!(classical_constant(1.5).unwrap(), 3.0 / 16.0, max_relative = 1e-14);
        assert_relative_eq!(classical_constant(1.0).unwrap(), 2.0 / (3.0 * std::f64::consts::PI), max_relative = 1e-14);
        assert_relative_eq!(classical_constants(0.5).unwrap().ek_bound, 1.0, max_relative = 1e-14);
        assert_eq!(classical_constants(2.0).unwrap().ek_multiplier, 2.0);
        assert!(classical_constants(0.25).is_err());
    }
}
