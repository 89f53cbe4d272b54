//! Weighted Sobolev interpolation inequalities on the half-line, their
//! duality with Lieb–Thirring type bounds, one-bound-state bounds,
//! Dirichlet comparison operators and the counterexample families.
//!
//! The inequality family is
//! `(∫|u|^q (1+t)^{βq−1})^{2/q} ≤ K (∫|u′|²(1+t)^{d−1})^θ (∫|u|²(1+t)^{d−1})^{1−θ}`
//! with `θ = (d−2β)/2`, and `sup |u|²(1+t)^{2β}` on the left at `q = ∞`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{weighted_rhs, RhsWeight};
use crate::engine::{count_negative, lowest_eigenvalue, moment, Endpoint, HalflineOperator, Moment, SolverOptions};
use crate::error::{Result, SpectralError};
use crate::potential::SymmetricPotential;
use crate::tree::DimensionBounds;
use crate::trial::TrialFunction;
use crate::weight::{PowerWeight, StepWeight, Weight};

const EDGE: f64 = 1e-12;

/// `x^e` with `0^0 = 1`.
fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Parameter cells of the interpolation inequality. The first three hold,
/// the last three fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevRegion {
    /// `1 < d ≤ 2, 0 < β ≤ (d−1)/2` or `d > 2, (d−2)/2 ≤ β ≤ (d−1)/2`; all q.
    SmallBeta,
    /// `(d−1)/2 < β ≤ d/2` and `q ≤ 1/(β − (d−1)/2)`.
    LargeBeta,
    /// `1 ≤ d < 2, β = 0, q = ∞`.
    ZeroBetaSup,
    /// `1 ≤ d ≤ 2, β ≤ 0, q < ∞`.
    NonPositiveBeta,
    /// `1 ≤ d < 2, β < 0` or `d = 2, β = 0`, at `q = ∞`.
    NonPositiveBetaSup,
    /// `(d−1)/2 < β ≤ d/2` and `q > 1/(β − (d−1)/2)`.
    AboveCriticalQ,
}

impl SobolevRegion {
    pub fn holds(self) -> bool {
        matches!(self, Self::SmallBeta | Self::LargeBeta | Self::ZeroBetaSup)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SmallBeta => "small_beta",
            Self::LargeBeta => "large_beta",
            Self::ZeroBetaSup => "zero_beta_sup",
            Self::NonPositiveBeta => "non_positive_beta",
            Self::NonPositiveBetaSup => "non_positive_beta_sup",
            Self::AboveCriticalQ => "above_critical_q",
        }
    }
}

impl fmt::Display for SobolevRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `1/(β − (d−1)/2)` for β above `(d−1)/2`, else ∞.
pub fn critical_q(beta: f64, d: f64) -> f64 {
    let x = beta - (d - 1.0) / 2.0;
    if x > EDGE {
        1.0 / x
    } else {
        f64::INFINITY
    }
}

pub fn classify(q: f64, beta: f64, d: f64) -> Result<SobolevRegion> {
    if !(d >= 1.0) || !d.is_finite() {
        return Err(SpectralError::InvalidParameter(format!("dimension {d} below 1")));
    }
    if !(q >= 2.0) {
        return Err(SpectralError::InvalidParameter(format!("q = {q} below 2")));
    }
    if !(beta >= (d - 2.0) / 2.0 - EDGE && beta <= d / 2.0 + EDGE) {
        return Err(SpectralError::OutOfRegion(format!(
            "β = {beta} outside [(d−2)/2, d/2] for d = {d}"
        )));
    }
    if beta > (d - 1.0) / 2.0 + EDGE {
        let qc = critical_q(beta, d);
        return Ok(if q <= qc * (1.0 + EDGE) {
            SobolevRegion::LargeBeta
        } else {
            SobolevRegion::AboveCriticalQ
        });
    }
    if d > 2.0 + EDGE || (d > 1.0 && beta > EDGE) {
        return Ok(SobolevRegion::SmallBeta);
    }
    // 1 ≤ d ≤ 2 and β ≤ 0
    if q.is_finite() {
        Ok(SobolevRegion::NonPositiveBeta)
    } else if beta.abs() <= EDGE && d < 2.0 - EDGE {
        Ok(SobolevRegion::ZeroBetaSup)
    } else {
        Ok(SobolevRegion::NonPositiveBetaSup)
    }
}

/// Which formula produced a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ConstantSource {
    /// `β^{−d+2β}`.
    EndpointTwo,
    /// `(2/(d−2β))^{d−2β}((d−1−2β)/(2β))^{d−1−2β}`.
    EndpointSup,
    /// `(2d)^d(2(d−1))^{−2(d−1)}(2−d)^{−1}`.
    ZeroBetaSup,
    /// `2^{−2β}(1−2β)^{2β−1}β^{−1}` (d = 1, q = 2).
    HalfLineTwo,
    /// `(2/(d−1))^{d−2β}` (d > 1, q = 2, β above (d−1)/2).
    HolderTwo,
    /// `2^{(q−2)/q}` at the critical q.
    CriticalQ,
    /// `K(2)^{1−s} K(q_*)^s` with `1/q = (1−s)/2 + s/q_*`.
    Interpolated { s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevConstant {
    pub value: f64,
    pub source: ConstantSource,
    pub region: SobolevRegion,
}

fn k_two(beta: f64, d: f64) -> f64 {
    pow0(beta, -d + 2.0 * beta)
}

fn k_sup(beta: f64, d: f64) -> f64 {
    let e = d - 2.0 * beta;
    let f = d - 1.0 - 2.0 * beta;
    pow0(2.0 / e, e) * pow0(f.max(0.0) / (2.0 * beta), f)
}

fn k_large_two(beta: f64, d: f64) -> (f64, ConstantSource) {
    if d <= 1.0 + EDGE {
        let v = 2f64.powf(-2.0 * beta) * pow0((1.0 - 2.0 * beta).max(0.0), 2.0 * beta - 1.0) / beta;
        (v, ConstantSource::HalfLineTwo)
    } else {
        (pow0(2.0 / (d - 1.0), d - 2.0 * beta), ConstantSource::HolderTwo)
    }
}

/// An admissible constant for `(q, β, d)`; failing cells are rejected with
/// their region name.
pub fn sobolev_constant(q: f64, beta: f64, d: f64) -> Result<SobolevConstant> {
    let region = classify(q, beta, d)?;
    let (value, source) = match region {
        SobolevRegion::SmallBeta => {
            if q == 2.0 {
                (k_two(beta, d), ConstantSource::EndpointTwo)
            } else if q.is_infinite() {
                (k_sup(beta, d), ConstantSource::EndpointSup)
            } else {
                let v = k_sup(beta, d).powf((q - 2.0) / q) * k_two(beta, d).powf(2.0 / q);
                (v, ConstantSource::Interpolated { s: 1.0 - 2.0 / q })
            }
        }
        SobolevRegion::LargeBeta => {
            let qc = critical_q(beta, d);
            let (k2, src2) = k_large_two(beta, d);
            let kc = 2f64.powf((qc - 2.0) / qc);
            if q == 2.0 || qc <= 2.0 * (1.0 + EDGE) {
                (k2, src2)
            } else if (q - qc).abs() <= EDGE * qc {
                (kc, ConstantSource::CriticalQ)
            } else {
                // 1/q = (1−s)/2 + s/q_c
                let s = (0.5 - 1.0 / q) / (0.5 - 1.0 / qc);
                (k2.powf(1.0 - s) * kc.powf(s), ConstantSource::Interpolated { s })
            }
        }
        SobolevRegion::ZeroBetaSup => {
            let v = (2.0 * d).powf(d) * pow0(2.0 * (d - 1.0), -2.0 * (d - 1.0)) / (2.0 - d);
            (v, ConstantSource::ZeroBetaSup)
        }
        r => {
            return Err(SpectralError::OutOfRegion(format!(
                "the inequality fails for (q, β, d) = ({q}, {beta}, {d}): region {r}"
            )))
        }
    };
    Ok(SobolevConstant { value, source, region })
}

/// The three functionals of the inequality for one trial function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevSides {
    pub lhs: f64,
    pub gradient: f64,
    pub mass: f64,
    pub theta: f64,
}

impl SobolevSides {
    pub fn product(&self) -> f64 {
        pow0(self.gradient, self.theta) * pow0(self.mass, 1.0 - self.theta)
    }
}

pub fn sobolev_sides(u: &TrialFunction, q: f64, beta: f64, d: f64) -> SobolevSides {
    let lhs = if q.is_infinite() {
        u.weighted_sup(beta).powi(2)
    } else {
        let e = beta * q - 1.0;
        u.integrate(|t, v, _| v.abs().powf(q) * (1.0 + t).powf(e)).powf(2.0 / q)
    };
    let gradient = u.integrate(|t, _, dv| dv * dv * (1.0 + t).powf(d - 1.0));
    let mass = u.integrate(|t, v, _| v * v * (1.0 + t).powf(d - 1.0));
    SobolevSides {
        lhs,
        gradient,
        mass,
        theta: (d - 2.0 * beta) / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// `None` in failing cells, where `rhs` is computed with K = 1.
    pub constant: Option<SobolevConstant>,
}

pub fn check_sobolev(u: &TrialFunction, q: f64, beta: f64, d: f64) -> Result<SobolevCheck> {
    let region = classify(q, beta, d)?;
    let constant = if region.holds() {
        Some(sobolev_constant(q, beta, d)?)
    } else {
        None
    };
    let sides = sobolev_sides(u, q, beta, d);
    let k = constant.map_or(1.0, |c| c.value);
    let rhs = k * sides.product();
    let ratio = if sides.lhs == 0.0 { 0.0 } else { sides.lhs / rhs };
    Ok(SobolevCheck {
        lhs: sides.lhs,
        rhs,
        ratio,
        constant,
    })
}

/// Exponent σ with `lhs/rhs ∝ l^σ` for `u(t) = v(t/l)` as `l → 0`.
pub fn scaling_exponent(q: f64, beta: f64, d: f64) -> f64 {
    let lhs = if q.is_infinite() { 0.0 } else { 2.0 / q };
    lhs - (2.0 * beta - d + 1.0)
}

/// Matching parameter sets of the potential side `(γ, a, p)` and the
/// Sobolev side `(q, β, θ)` in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityParams {
    pub gamma: f64,
    pub a: f64,
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub theta: f64,
    pub d: f64,
    pub region: SobolevRegion,
}

fn close(x: f64, y: f64) -> bool {
    if x.is_infinite() || y.is_infinite() {
        return x == y;
    }
    (x - y).abs() <= 1e-10 * (1.0 + x.abs().max(y.abs()))
}

impl DualityParams {
    /// Re-checks every relation between the two parameter sets.
    pub fn validate(&self) -> Result<()> {
        let p = self.gamma + (1.0 + self.a) / 2.0;
        let q = if self.p == 1.0 { f64::INFINITY } else { 2.0 * self.p / (self.p - 1.0) };
        let p_back = if self.q.is_infinite() { 1.0 } else { self.q / (self.q - 2.0) };
        let a_back = if self.q.is_infinite() {
            self.d - 1.0 - 2.0 * self.beta
        } else {
            ((self.d - 1.0 - 2.0 * self.beta) * self.q + 2.0) / (self.q - 2.0)
        };
        let beta = (self.d * self.p - 1.0 - self.a) / (2.0 * self.p);
        let theta = (self.d - 2.0 * self.beta) / 2.0;
        let ok = close(p, self.p)
            && close(q, self.q)
            && close(p_back, self.p)
            && close(a_back, self.a)
            && close(beta, self.beta)
            && close(theta, self.theta)
            && close(theta, (1.0 + self.a) / (2.0 * self.p));
        if ok {
            Ok(())
        } else {
            Err(SpectralError::InvalidParameter(format!("inconsistent duality parameters {self:?}")))
        }
    }
}

/// `(γ, a, d) ↦ (q, β, θ)` with `p = γ + (1+a)/2`, `q = 2p/(p−1)`.
pub fn duality_map(gamma: f64, a: f64, d: f64) -> Result<DualityParams> {
    if !(gamma >= 0.0) || !(a > -1.0) || !(d >= 1.0) || !gamma.is_finite() || !a.is_finite() || !d.is_finite() {
        return Err(SpectralError::InvalidParameter(format!(
            "need γ ≥ 0, a > −1, d ≥ 1; got ({gamma}, {a}, {d})"
        )));
    }
    let p = gamma + (1.0 + a) / 2.0;
    if p < 1.0 {
        return Err(SpectralError::OutOfRegion(format!("p = {p} < 1 has no Sobolev counterpart")));
    }
    let q = if p == 1.0 { f64::INFINITY } else { 2.0 * p / (p - 1.0) };
    let beta = (d * p - 1.0 - a) / (2.0 * p);
    let theta = (1.0 + a) / (2.0 * p);
    let region = classify(q, beta, d)?;
    let out = DualityParams {
        gamma,
        a,
        p,
        q,
        beta,
        theta,
        d,
        region,
    };
    out.validate()?;
    Ok(out)
}

/// Inverse of [`duality_map`].
pub fn duality_from_sobolev(q: f64, beta: f64, d: f64) -> Result<DualityParams> {
    if !(q > 2.0) {
        return Err(SpectralError::InvalidParameter(format!("q = {q} must exceed 2")));
    }
    let (p, a) = if q.is_infinite() {
        (1.0, d - 1.0 - 2.0 * beta)
    } else {
        (q / (q - 2.0), ((d - 1.0 - 2.0 * beta) * q + 2.0) / (q - 2.0))
    };
    duality_map(p - (1.0 + a) / 2.0, a, d).map(|mut x| {
        // keep the caller's values instead of their round-off images
        x.q = q;
        x.beta = beta;
        x
    })
}

/// Bound `|λ_1|^γ ≤ C ∫V_+^p ρ dt` for `A_g − V` with Neumann condition.
/// For `d > 1`, `ρ = g^{a/(d−1)}`; for `d = 1`, `ρ = g^p (1+t)^a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneBoundState {
    pub params: DualityParams,
    pub sobolev: SobolevConstant,
    /// Constant of the inequality with `g` in place of `(1+t)^{d−1}`.
    pub k_g: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
}

pub fn one_bound_state_bound(gamma: f64, a: f64, bounds: &DimensionBounds) -> Result<OneBoundState> {
    let params = duality_map(gamma, a, bounds.d)?;
    if !params.region.holds() {
        return Err(SpectralError::OutOfRegion(format!(
            "(γ, a, d) = ({gamma}, {a}, {}) maps to failing region {}",
            bounds.d, params.region
        )));
    }
    let sobolev = sobolev_constant(params.q, params.beta, params.d)?;
    let d = params.d;
    let k_g = if d > 1.0 {
        let x = if params.q.is_infinite() {
            2.0 * params.beta / (d - 1.0)
        } else {
            2.0 * (params.beta * params.q - 1.0) / (params.q * (d - 1.0))
        };
        let ce = if x >= 0.0 { bounds.c2 } else { bounds.c1 };
        sobolev.value * ce.powf(x) / bounds.c1
    } else {
        sobolev.value / bounds.c1
    };
    let th = params.theta;
    let c = (k_g * pow0(th, th) * pow0(1.0 - th, 1.0 - th)).powf(params.p);
    Ok(OneBoundState {
        params,
        sobolev,
        k_g,
        c,
        c1: bounds.c1,
        c2: bounds.c2,
    })
}

impl OneBoundState {
    /// `∫V_+^p ρ dt`.
    pub fn potential_integral(&self, v: &SymmetricPotential, g: &Weight) -> Result<f64> {
        let d = self.params.d;
        let (a, p) = (self.params.a, self.params.p);
        let gw = g.clone();
        let rho: RhsWeight = if d > 1.0 {
            RhsWeight::WeightPower(g.clone(), a / (d - 1.0))
        } else {
            RhsWeight::Custom(std::sync::Arc::new(move |t| gw.value(t).powf(p) * (1.0 + t).powf(a)))
        };
        weighted_rhs(v, p, &rho, None)
    }
}

/// Lowest eigenvalue of the Neumann operator against the one-bound-state
/// bound; for γ = 0 the check is "`C·rhs < 1` forces no negative spectrum".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneBoundCheck {
    pub lowest: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn check_one_bound_state(
    bound: &OneBoundState,
    g: &Weight,
    v: &SymmetricPotential,
    opts: &SolverOptions,
) -> Result<OneBoundCheck> {
    let op = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Neumann, g.start())?;
    let rhs = bound.c * bound.potential_integral(v, g)?;
    let gamma = bound.params.gamma;
    if gamma == 0.0 {
        let n = count_negative(&op, 0.0, opts)?;
        let lowest = if n > 0 {
            lowest_eigenvalue(&op, 0.0, opts)?.map(|e| e.value)
        } else {
            None
        };
        return Ok(OneBoundCheck {
            lowest,
            lhs: if n > 0 { 1.0 } else { 0.0 },
            rhs,
            ok: n == 0 || rhs >= 1.0,
        });
    }
    let lowest = lowest_eigenvalue(&op, 0.0, opts)?.map(|e| e.value);
    let lhs = lowest.map_or(0.0, |l| (-l).max(0.0).powf(gamma));
    Ok(OneBoundCheck {
        lowest,
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + 1e-9) + 1e-300,
    })
}

/// `𝔅_𝒟 − sV` on `L²(ℝ₊)`: weight 1, potential `sV − (d−1)(d−3)/(4(1+t)²)`,
/// Dirichlet at 0.
pub fn b_operator(v: &SymmetricPotential, s: f64, d: f64) -> Result<HalflineOperator> {
    let pot = v.scaled(s).with_inverse_square(-(d - 1.0) * (d - 3.0) / 4.0, 1.0);
    HalflineOperator::new(StepWeight::constant(0.0, 1.0)?, pot, Endpoint::Dirichlet, 0.0)
}

/// The same operator in its unitarily equivalent form on
/// `L²((1+t)^{d−1})`, where V keeps compact support.
pub fn b_operator_weighted(v: &SymmetricPotential, s: f64, d: f64) -> Result<HalflineOperator> {
    HalflineOperator::new(PowerWeight::new(1.0, d - 1.0, 0.0)?, v.scaled(s), Endpoint::Dirichlet, 0.0)
}

pub const HARDY_START: f64 = 1e-6;

/// `−d²/dr² − 1/(4r²) − sV` with Dirichlet condition at 0, started at
/// `r_0` from the regular solution `√r`.
pub fn hardy_operator(v: &SymmetricPotential, s: f64) -> Result<HalflineOperator> {
    let r0 = HARDY_START;
    let pot = v.scaled(s).with_inverse_square(0.25, 0.0);
    HalflineOperator::new(
        StepWeight::constant(0.0, 1.0)?,
        pot,
        Endpoint::Initial {
            value: r0.sqrt(),
            flux: 0.5 / r0.sqrt(),
        },
        r0,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sandwich {
    pub ratio: f64,
    /// `tr(𝔅_𝒟 − V/β)^γ`, `tr(A_𝒟 − V)^γ`, `tr(𝔅_𝒟 − βV)^γ`.
    pub lower: Moment,
    pub middle: Moment,
    pub upper: Moment,
    /// `upper` recomputed on the weight-1 form (ε-regularized).
    pub upper_flat: Moment,
    /// `tr(−d²/dr² − 1/(4r²) − βV)^γ` (ε-regularized).
    pub hardy: Moment,
    pub sandwich_ok: bool,
    pub hardy_ok: bool,
    pub n_neumann: u64,
    pub n_dirichlet: u64,
    pub interlacing_ok: bool,
}

fn slack(m: &Moment) -> f64 {
    1e-9 * (1.0 + m.value.abs())
}

/// Both sides of the Dirichlet comparison for `A_g − V` with envelope
/// constants `(c_1, c_2)`, plus the Neumann/Dirichlet interlacing.
pub fn dirichlet_sandwich(
    g: &Weight,
    bounds: &DimensionBounds,
    v: &SymmetricPotential,
    gamma: f64,
    opts: &SolverOptions,
) -> Result<Sandwich> {
    let d = bounds.d;
    let ratio = bounds.c2 / bounds.c1;
    let lower = moment(&b_operator_weighted(v, 1.0 / ratio, d)?, gamma, 0.0, opts)?;
    let upper = moment(&b_operator_weighted(v, ratio, d)?, gamma, 0.0, opts)?;
    let upper_flat = moment(&b_operator(v, ratio, d)?, gamma, 0.0, opts)?;
    let a_d = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Dirichlet, g.start())?;
    let a_n = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Neumann, g.start())?;
    let middle = moment(&a_d, gamma, 0.0, opts)?;
    let hardy = moment(&hardy_operator(v, ratio)?, gamma, 0.0, opts)?;
    let sandwich_ok = lower.value <= middle.value + slack(&middle) && middle.value <= upper.value + slack(&upper);
    // the regularized Hardy moment misses at most its eigenvalues in (−ε, 0)
    let hardy_ok = upper.value <= hardy.value + hardy.remainder_bound + slack(&hardy);
    let n_neumann = count_negative(&a_n, 0.0, opts)?;
    let n_dirichlet = count_negative(&a_d, 0.0, opts)?;
    let interlacing_ok = n_dirichlet <= n_neumann && n_neumann <= n_dirichlet + 1;
    Ok(Sandwich {
        ratio,
        lower,
        middle,
        upper,
        upper_flat,
        hardy,
        sandwich_ok,
        hardy_ok,
        n_neumann,
        n_dirichlet,
        interlacing_ok,
    })
}

/// `tr(A − V)^γ ≤ |λ_1|^γ + tr(A_𝒟 − V)^γ` for the Neumann operator `A`.
pub fn interlacing_split(g: &Weight, v: &SymmetricPotential, gamma: f64, opts: &SolverOptions) -> Result<(f64, f64, bool)> {
    let a_n = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Neumann, g.start())?;
    let a_d = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Dirichlet, g.start())?;
    let full = moment(&a_n, gamma, 0.0, opts)?;
    let first = full.eigenvalues.first().map_or(0.0, |l| (-l).max(0.0).powf(gamma));
    let first = if gamma == 0.0 { f64::from(u8::from(full.count > 0)) } else { first };
    let rhs = first + moment(&a_d, gamma, 0.0, opts)?.value;
    Ok((full.value, rhs, full.value <= rhs * (1.0 + 1e-9) + 1e-12))
}

#[derive(Debug, Clone)]
pub enum Counterexample {
    Potential(SymmetricPotential),
    Trial(TrialFunction),
}

/// `n·χ_(c, c+1/n)`: tends to a point interaction of unit strength at c.
pub fn dirac(n: f64, center: f64) -> Result<SymmetricPotential> {
    if !(n >= 1.0) || !(center >= 0.0) {
        return Err(SpectralError::InvalidParameter(format!("dirac family needs n ≥ 1, c ≥ 0; got {n}, {center}")));
    }
    SymmetricPotential::indicator(center, center + 1.0 / n, n)
}

/// `α·χ_(0,1)`.
pub fn weak_coupling_witness(alpha: f64) -> Result<SymmetricPotential> {
    SymmetricPotential::indicator(0.0, 1.0, alpha)
}

/// Named families: `dirac` (param n), `log_trial` (n),
/// `scaling_trial` (l, applied to a hat on `[0, 2]`),
/// `weak_coupling_witness` (α).
pub fn counterexample_family(name: &str, param: f64) -> Result<Counterexample> {
    match name {
        "dirac" => {
            if !(param >= 2.0) {
                return Err(SpectralError::InvalidParameter(format!("dirac needs n ≥ 2, got {param}")));
            }
            dirac(param, 0.0).map(Counterexample::Potential)
        }
        "log_trial" => {
            if !(param >= 2.0) {
                return Err(SpectralError::InvalidParameter(format!("log_trial needs n ≥ 2, got {param}")));
            }
            TrialFunction::log_profile(param).map(Counterexample::Trial)
        }
        "scaling_trial" => {
            let v = TrialFunction::piecewise_linear(vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 0.0])?;
            TrialFunction::scaled(v, param).map(Counterexample::Trial)
        }
        "weak_coupling_witness" => weak_coupling_witness(param).map(Counterexample::Potential),
        other => Err(SpectralError::InvalidParameter(format!("unknown counterexample family '{other}'"))),
    }
}

/// `tr(A_g − V_n)^γ` over `∫V_n^{γ+(1+a)/2}(1+t)^a` for the Dirac family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracRatio {
    pub n: f64,
    pub trace: f64,
    pub integral: f64,
    pub ratio: f64,
}

pub fn dirac_ratio(
    g: &Weight,
    n: f64,
    center: f64,
    gamma: f64,
    a: f64,
    endpoint: Endpoint,
    opts: &SolverOptions,
) -> Result<DiracRatio> {
    let v = dirac(n, center)?;
    let op = HalflineOperator::new(g.clone(), v.clone(), endpoint, g.start())?;
    let trace = moment(&op, gamma, 0.0, opts)?.value;
    let integral = weighted_rhs(&v, gamma + (1.0 + a) / 2.0, &RhsWeight::OnePlusT(a), None)?;
    Ok(DiracRatio {
        n,
        trace,
        integral,
        ratio: trace / integral,
    })
}
