use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::ext::ExtReal;

/// Continuation of a [`StepWeight`] beyond its last explicit knot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StepTail {
    /// The last value holds forever.
    Constant,
    /// Tail segment `j` (counted from the last knot) has length
    /// `first_length * ratio^j` and value `last * factor^j`.
    Geometric {
        first_length: f64,
        ratio: f64,
        factor: f64,
    },
}

/// One constancy interval `(lo, hi]` of a step weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Piecewise constant positive weight on `[start, ∞)`.
///
/// `values[i]` holds on `(knots[i-1], knots[i]]` (with `knots[-1] = start`);
/// the tail rule takes over after the last knot. The value at a knot is
/// the left value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepWeight {
    start: f64,
    knots: Vec<f64>,
    values: Vec<f64>,
    tail: StepTail,
}

impl StepWeight {
    pub fn new(start: f64, knots: Vec<f64>, values: Vec<f64>, tail: StepTail) -> Result<Self> {
        if !start.is_finite() {
            return Err(SpectralError::InvalidWeight("start must be finite".into()));
        }
        if values.len() != knots.len() + 1 {
            return Err(SpectralError::InvalidWeight(format!(
                "{} knots need {} values, got {}",
                knots.len(),
                knots.len() + 1,
                values.len()
            )));
        }
        let mut prev = start;
        for &k in &knots {
            if !(k > prev) || !k.is_finite() {
                return Err(SpectralError::InvalidWeight(format!(
                    "knots must increase strictly from {start}"
                )));
            }
            prev = k;
        }
        if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(SpectralError::InvalidWeight("values must be positive".into()));
        }
        if let StepTail::Geometric {
            first_length,
            ratio,
            factor,
        } = tail
        {
            if !(first_length > 0.0) || !(ratio >= 1.0) || !(factor > 0.0) {
                return Err(SpectralError::InvalidWeight(
                    "geometric tail needs first_length > 0, ratio >= 1, factor > 0".into(),
                ));
            }
        }
        Ok(Self {
            start,
            knots,
            values,
            tail,
        })
    }

    /// g ≡ c on `[start, ∞)`.
    pub fn constant(start: f64, c: f64) -> Result<Self> {
        Self::new(start, Vec::new(), vec![c], StepTail::Constant)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> StepTail {
        self.tail
    }

    fn explicit_count(&self) -> usize {
        self.knots.len()
    }

    fn tail_origin(&self) -> f64 {
        self.knots.last().copied().unwrap_or(self.start)
    }

    fn last_value(&self) -> f64 {
        *self.values.last().expect("values is never empty")
    }

    pub fn segment(&self, index: usize) -> Segment {
        let n = self.explicit_count();
        if index < n {
            let lo = if index == 0 { self.start } else { self.knots[index - 1] };
            return Segment {
                index,
                lo,
                hi: self.knots[index],
                value: self.values[index],
            };
        }
        let j = index - n;
        let origin = self.tail_origin();
        match self.tail {
            StepTail::Constant => Segment {
                index: n,
                lo: origin,
                hi: f64::INFINITY,
                value: self.last_value(),
            },
            StepTail::Geometric {
                first_length,
                ratio,
                factor,
            } => {
                // both ends from the same formula so neighbours share knots exactly
                Segment {
                    index,
                    lo: origin + geometric_offset(first_length, ratio, j),
                    hi: origin + geometric_offset(first_length, ratio, j + 1),
                    value: self.last_value() * factor.powi(j as i32),
                }
            }
        }
    }

    /// Index of the segment `(lo, hi]` containing `t`; `t <= start` maps to 0.
    pub fn segment_index(&self, t: f64) -> usize {
        if t <= self.start {
            return 0;
        }
        let n = self.explicit_count();
        let pos = self.knots.partition_point(|&k| k < t);
        if pos < n {
            return pos;
        }
        match self.tail {
            StepTail::Constant => n,
            StepTail::Geometric {
                first_length,
                ratio,
                ..
            } => {
                let s = t - self.tail_origin();
                let mut j = if ratio == 1.0 {
                    (s / first_length).ceil() as i64 - 1
                } else {
                    ((1.0 + s * (ratio - 1.0) / first_length).ln() / ratio.ln()).ceil() as i64 - 1
                };
                j = j.max(0);
                let mut j = j as usize;
                // float guard: settle on the segment with lo < t <= hi
                loop {
                    let seg = self.segment(n + j);
                    if t > seg.hi {
                        j += 1;
                    } else if j > 0 && t <= seg.lo {
                        j -= 1;
                    } else {
                        return n + j;
                    }
                }
            }
        }
    }

    /// Index of the segment `[lo, hi)` containing `t` (right-continuous view).
    pub fn segment_index_right(&self, t: f64) -> usize {
        let i = self.segment_index(t);
        let seg = self.segment(i);
        if t >= seg.hi { i + 1 } else { i }
    }

    /// g(t) with the left-value convention at knots.
    pub fn value(&self, t: f64) -> f64 {
        self.segment(self.segment_index(t)).value
    }

    /// g(t+).
    pub fn value_right(&self, t: f64) -> f64 {
        self.segment(self.segment_index_right(t)).value
    }

    /// Smallest knot strictly greater than `t`, or ∞.
    pub fn next_break(&self, t: f64) -> f64 {
        let i = self.segment_index_right(t.max(self.start));
        self.segment(i).hi
    }

    /// Segments clipped to `[a, b]`.
    pub fn pieces(&self, a: f64, b: f64) -> Vec<Segment> {
        let mut out = Vec::new();
        if !(b > a) {
            return out;
        }
        let a = a.max(self.start);
        let mut i = self.segment_index_right(a);
        loop {
            let seg = self.segment(i);
            let lo = seg.lo.max(a);
            let hi = seg.hi.min(b);
            if hi > lo {
                out.push(Segment { index: i, lo, hi, value: seg.value });
            }
            if seg.hi >= b {
                break;
            }
            i += 1;
        }
        out
    }

    /// ∫_a^b g.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.pieces(a, b).iter().map(|s| s.value * s.len()).sum()
    }

    /// ∫_a^b 1/g for finite `b`.
    pub fn inverse_integral(&self, a: f64, b: f64) -> f64 {
        self.pieces(a, b).iter().map(|s| s.len() / s.value).sum()
    }

    pub fn is_transient(&self) -> bool {
        match self.tail {
            StepTail::Constant => false,
            StepTail::Geometric { ratio, factor, .. } => ratio < factor,
        }
    }

    /// ∫_t^∞ 1/g, or [`SpectralError::DivergentTail`].
    pub fn tail_integral(&self, t: f64) -> Result<f64> {
        match self.tail_inverse_integral(t) {
            ExtReal::Finite(v) => Ok(v),
            ExtReal::Infinite => Err(SpectralError::DivergentTail(t)),
        }
    }

    /// ∫_t^∞ 1/g as an extended real.
    pub fn tail_inverse_integral(&self, t: f64) -> ExtReal {
        if !self.is_transient() {
            return ExtReal::Infinite;
        }
        let StepTail::Geometric {
            first_length,
            ratio,
            factor,
        } = self.tail
        else {
            unreachable!()
        };
        let t = t.max(self.start);
        let n = self.explicit_count();
        let i = self.segment_index_right(t);
        let mut acc = 0.0;
        let first_tail = if i < n {
            acc += self.inverse_integral(t, self.tail_origin());
            0
        } else {
            let seg = self.segment(i);
            acc += (seg.hi - t) / seg.value;
            i - n + 1
        };
        let r = ratio / factor;
        let v = self.last_value();
        acc += first_length * r.powi(first_tail as i32) / v / (1.0 - r);
        ExtReal::Finite(acc)
    }

    /// c·g.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.start,
            self.knots.clone(),
            self.values.iter().map(|v| v * c).collect(),
            self.tail,
        )
    }

    /// The same weight viewed on `[from, ∞)`.
    pub fn restricted(&self, from: f64) -> Self {
        if from <= self.start {
            return self.clone();
        }
        let n = self.explicit_count();
        let i = self.segment_index_right(from);
        if i < n {
            let knots: Vec<f64> = self.knots[i..].to_vec();
            let values: Vec<f64> = self.values[i..].to_vec();
            return Self {
                start: from,
                knots,
                values,
                tail: self.tail,
            };
        }
        match self.tail {
            StepTail::Constant => Self {
                start: from,
                knots: Vec::new(),
                values: vec![self.last_value()],
                tail: StepTail::Constant,
            },
            StepTail::Geometric {
                first_length,
                ratio,
                factor,
            } => {
                let seg = self.segment(i);
                let next = self.segment(i + 1);
                let j = (i - n + 1) as i32;
                Self {
                    start: from,
                    knots: vec![seg.hi],
                    values: vec![seg.value, next.value],
                    tail: StepTail::Geometric {
                        first_length: first_length * ratio.powi(j),
                        ratio,
                        factor,
                    },
                }
            }
        }
    }
}

fn geometric_offset(first_length: f64, ratio: f64, j: usize) -> f64 {
    if ratio == 1.0 {
        first_length * j as f64
    } else {
        first_length * (ratio.powi(j as i32) - 1.0) / (ratio - 1.0)
    }
}

/// `coef·(1+t)^exponent` on `[start, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerWeight {
    pub coef: f64,
    pub exponent: f64,
    pub start: f64,
}

impl PowerWeight {
    pub fn new(coef: f64, exponent: f64, start: f64) -> Result<Self> {
        if !(coef > 0.0) || !exponent.is_finite() || !(start > -1.0) {
            return Err(SpectralError::InvalidWeight(
                "power weight needs coef > 0, finite exponent, start > -1".into(),
            ));
        }
        Ok(Self { coef, exponent, start })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.coef * (1.0 + t).powf(self.exponent)
    }

    /// ∫_a^b (1+t)^e dt.
    fn power_integral(e: f64, a: f64, b: f64) -> f64 {
        if (e + 1.0).abs() < 1e-14 {
            ((1.0 + b) / (1.0 + a)).ln()
        } else if b.is_infinite() {
            if e < -1.0 {
                -(1.0 + a).powf(e + 1.0) / (e + 1.0)
            } else {
                f64::INFINITY
            }
        } else {
            ((1.0 + b).powf(e + 1.0) - (1.0 + a).powf(e + 1.0)) / (e + 1.0)
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.coef * Self::power_integral(self.exponent, a, b)
    }

    pub fn inverse_integral(&self, a: f64, b: f64) -> f64 {
        Self::power_integral(-self.exponent, a, b) / self.coef
    }

    pub fn is_transient(&self) -> bool {
        self.exponent > 1.0
    }

    pub fn tail_inverse_integral(&self, t: f64) -> ExtReal {
        if self.is_transient() {
            ExtReal::Finite(self.inverse_integral(t, f64::INFINITY))
        } else {
            ExtReal::Infinite
        }
    }
}

/// `ω²·g_0` for the homogeneous tree with unit edges and branching `b`,
/// where ω is the generalized ground state at the bottom of the essential
/// spectrum. On `(j, j+1)` it equals `(j+1)² ψ_j(t-j)²` with
/// `ψ_j(s) = cos μs − c_j cos μ(1−s)`, `c_j = j b^{-1/2}/(j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateWeight {
    pub branch: f64,
    pub mu: f64,
    pub start: f64,
}

impl GroundStateWeight {
    pub fn new(branch: f64, start: f64) -> Result<Self> {
        if !(branch > 1.0) {
            return Err(SpectralError::InvalidWeight("branch must exceed 1".into()));
        }
        let r = (branch.sqrt() + 1.0 / branch.sqrt()) / 2.0;
        Ok(Self {
            branch,
            mu: (1.0 / r).acos(),
            start: start.max(0.0),
        })
    }

    fn cj(&self, j: u64) -> f64 {
        j as f64 / self.branch.sqrt() / (j as f64 + 1.0)
    }

    /// `(P_j, Q_j)` with `ψ_j(s) = P cos μs − Q sin μs`.
    fn pq(&self, j: u64) -> (f64, f64) {
        let c = self.cj(j);
        (1.0 - c * self.mu.cos(), c * self.mu.sin())
    }

    fn psi(&self, j: u64, s: f64) -> f64 {
        let (p, q) = self.pq(j);
        p * (self.mu * s).cos() - q * (self.mu * s).sin()
    }

    fn edge_of(t: f64) -> u64 {
        if t <= 0.0 {
            0
        } else {
            (t.ceil() as u64).saturating_sub(1)
        }
    }

    /// Left-value convention at integers (like g_0).
    pub fn value(&self, t: f64) -> f64 {
        let j = Self::edge_of(t);
        let s = t - j as f64;
        let jp = j as f64 + 1.0;
        jp * jp * self.psi(j, s).powi(2)
    }

    pub fn value_right(&self, t: f64) -> f64 {
        let j = if t < 0.0 { 0 } else { t.floor() as u64 };
        let s = t - j as f64;
        let jp = j as f64 + 1.0;
        jp * jp * self.psi(j, s).powi(2)
    }

    /// ∫_{s0}^{s1} ds/ψ_j² inside one edge, via the antiderivative
    /// `sin(μs)/(μ P ψ(s))`.
    fn edge_inverse(&self, j: u64, s0: f64, s1: f64) -> f64 {
        let (p, _) = self.pq(j);
        let f = |s: f64| (self.mu * s).sin() / (self.mu * p * self.psi(j, s));
        (f(s1) - f(s0)) / (j as f64 + 1.0).powi(2)
    }

    fn full_edge_inverse(&self, j: u64) -> f64 {
        self.edge_inverse(j, 0.0, 1.0)
    }

    pub fn inverse_integral(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let mut acc = 0.0;
        let mut t = a;
        while t < b {
            let j = if t < 0.0 { 0 } else { t.floor() as u64 };
            let hi = ((j + 1) as f64).min(b);
            acc += self.edge_inverse(j, t - j as f64, hi - j as f64);
            t = hi;
        }
        acc
    }

    /// ∫_t^∞ 1/(ω² g_0); edges beyond `J` are summed through the expansion
    /// `E_j = ∫_0^1 ψ_j^{-2} = e_0 + e_1/(j+1) + O((j+1)^{-2})` and a
    /// trigamma tail.
    pub fn tail_inverse_integral(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        let j0 = t.floor() as u64;
        let big = j0 + 4000;
        let mut acc = self.inverse_integral(t, big as f64);
        // E_j → E_∞ with E_j − E_∞ = O(1/j); fit the two leading terms from
        // consecutive edges and sum the rest in closed form.
        let e1 = self.full_edge_inverse(big) * (big as f64 + 1.0).powi(2);
        let e2 = self.full_edge_inverse(2 * big) * (2.0 * big as f64 + 1.0).powi(2);
        let x1 = 1.0 / (big as f64 + 1.0);
        let x2 = 1.0 / (2.0 * big as f64 + 1.0);
        let slope = (e1 - e2) / (x1 - x2);
        let e_inf = e1 - slope * x1;
        let n = big as f64 + 1.0;
        acc += e_inf * trigamma(n) + slope * hurwitz3(n);
        acc
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        crate::quad::integrate(|t| self.value(t), a, b, 1e-12, 1e-12)
    }
}

/// ψ'(x) = Σ_{k≥0} 1/(x+k)², asymptotic for large x.
fn trigamma(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = x * x;
    acc + 1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x) - 1.0 / (30.0 * x2 * x2 * x)
        + 1.0 / (42.0 * x2 * x2 * x2 * x)
}

/// Σ_{k≥0} 1/(x+k)³.
fn hurwitz3(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x * x);
        x += 1.0;
    }
    let x2 = x * x;
    acc + 1.0 / (2.0 * x2) + 1.0 / (2.0 * x2 * x) + 1.0 / (4.0 * x2 * x2)
        - 1.0 / (12.0 * x2 * x2 * x2)
}

/// Weight of a half-line operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Weight {
    Step(StepWeight),
    Power(PowerWeight),
    GroundState(GroundStateWeight),
}

impl From<StepWeight> for Weight {
    fn from(w: StepWeight) -> Self {
        Weight::Step(w)
    }
}

impl From<PowerWeight> for Weight {
    fn from(w: PowerWeight) -> Self {
        Weight::Power(w)
    }
}

impl From<GroundStateWeight> for Weight {
    fn from(w: GroundStateWeight) -> Self {
        Weight::GroundState(w)
    }
}

impl Weight {
    pub fn start(&self) -> f64 {
        match self {
            Weight::Step(w) => w.start(),
            Weight::Power(w) => w.start,
            Weight::GroundState(w) => w.start,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Weight::Step(w) => w.value(t),
            Weight::Power(w) => w.value(t),
            Weight::GroundState(w) => w.value(t),
        }
    }

    pub fn value_right(&self, t: f64) -> f64 {
        match self {
            Weight::Step(w) => w.value_right(t),
            Weight::Power(w) => w.value(t),
            Weight::GroundState(w) => w.value_right(t),
        }
    }

    /// Next point after `t` where the weight jumps or changes formula.
    pub fn next_break(&self, t: f64) -> f64 {
        match self {
            Weight::Step(w) => w.next_break(t),
            Weight::Power(_) => f64::INFINITY,
            Weight::GroundState(_) => {
                let f = t.floor() + 1.0;
                if f <= t { f + 1.0 } else { f }
            }
        }
    }

    /// Breakpoints strictly inside `(a, b)`.
    pub fn breaks_between(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut t = a;
        loop {
            let n = self.next_break(t);
            if n >= b {
                break;
            }
            out.push(n);
            t = n;
        }
        out
    }

    /// `Some(g)` when the weight is constant on `(a, b)`.
    pub fn constant_on(&self, a: f64, b: f64) -> Option<f64> {
        match self {
            Weight::Step(w) => {
                if w.next_break(a) >= b {
                    Some(w.value_right(a))
                } else {
                    None
                }
            }
            Weight::Power(w) => (w.exponent == 0.0).then_some(w.coef),
            Weight::GroundState(_) => None,
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            Weight::Step(w) => w.integral(a, b),
            Weight::Power(w) => w.integral(a, b),
            Weight::GroundState(w) => w.integral(a, b),
        }
    }

    pub fn inverse_integral(&self, a: f64, b: f64) -> f64 {
        match self {
            Weight::Step(w) => w.inverse_integral(a, b),
            Weight::Power(w) => w.inverse_integral(a, b),
            Weight::GroundState(w) => w.inverse_integral(a, b),
        }
    }

    pub fn is_transient(&self) -> bool {
        match self {
            Weight::Step(w) => w.is_transient(),
            Weight::Power(w) => w.is_transient(),
            Weight::GroundState(_) => true,
        }
    }

    pub fn tail_inverse_integral(&self, t: f64) -> ExtReal {
        match self {
            Weight::Step(w) => w.tail_inverse_integral(t),
            Weight::Power(w) => w.tail_inverse_integral(t),
            Weight::GroundState(w) => ExtReal::Finite(w.tail_inverse_integral(t)),
        }
    }

    pub fn tail_integral(&self, t: f64) -> Result<f64> {
        match self.tail_inverse_integral(t) {
            ExtReal::Finite(v) => Ok(v),
            ExtReal::Infinite => Err(SpectralError::DivergentTail(t)),
        }
    }

    /// Largest factor `max g / min g` that may appear on a smooth piece
    /// before the solver splits it.
    pub(crate) fn smooth_split(&self, a: f64, b: f64) -> f64 {
        match self {
            Weight::Power(w) if w.exponent != 0.0 => {
                let cap = 2.0 * (1.0 + a) - 1.0;
                b.min(cap.max(a + 1e-3))
            }
            _ => b,
        }
    }
}
