use mtree_spectral::bounds::{classical_constants, clr_bound, clr_m, sharp_clr_rhs, weighted_rhs, RhsWeight};
use mtree_spectral::corpus::{random_potential, random_step_weight, random_tree, random_trial, rng, PotentialSpec};
use mtree_spectral::decomposition::{certified_tree_oracle, shift_off_vertices, tree_count, tree_moment};
use mtree_spectral::engine::{count_negative, Endpoint, HalflineOperator, SolverOptions};
use mtree_spectral::homogeneous::{
    count_below_lambda_b, count_below_shifted, homo_clr_bound, lambda_b, GroundState,
};
use mtree_spectral::oracle::{certified_count, MeshSpec};
use mtree_spectral::sobolev::{
    check_sobolev, classify, counterexample_family, dirac_ratio, dirichlet_sandwich, one_bound_state_bound,
    Counterexample, SobolevRegion,
};
use mtree_spectral::sweep::{weak_coupling_fit, weyl_sweep};
use mtree_spectral::weight::{PowerWeight, StepWeight, Weight};
use mtree_spectral::{SymmetricPotential, TailRule, TreeDescriptor};
use rand::Rng;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

pub fn c01_tree_oracle() -> Result<String, String> {
    let mut r = rng(1001);
    let spec = PotentialSpec {
        max_pieces: 4,
        depth: (0.1, 10.0),
        support: (0.0, 3.5),
    };
    let (mut n, mut total_eigs, mut max_nodes) = (0, 0u64, 0usize);
    while n < 200 {
        let tree = random_tree(&mut r, 3, &[2, 3]).map_err(e)?;
        let v = random_potential(&mut r, &spec).map_err(e)?;
        if tree.generations_below(v.support_end() + 1.0).len() > 4 {
            continue;
        }
        let count = tree_count(&tree, &v, 0.0, &opts()).map_err(e)?;
        let t = shift_off_vertices(&tree, v.support_end() + 1.0);
        let oracle = certified_tree_oracle(&tree, &v, &MeshSpec::new(24, t), 5).map_err(e)?;
        if !oracle.agree || oracle.count_natural as u64 != count {
            return Err(format!(
                "instance {n}: decomposition {count}, oracle natural {} dirichlet {} ({tree:?}, V = {v:?})",
                oracle.count_natural, oracle.count_dirichlet
            ));
        }
        total_eigs += count;
        max_nodes = max_nodes.max(oracle.unknowns);
        n += 1;
    }
    Ok(format!("{n} instances, {total_eigs} eigenvalues in total, up to {max_nodes} unknowns"))
}

pub fn c02_halfline_oracle() -> Result<String, String> {
    let mut r = rng(2002);
    let spec = PotentialSpec::default();
    let mut total = 0;
    for i in 0..200 {
        let g = random_step_weight(&mut r, i % 2 == 0).map_err(e)?;
        let v = random_potential(&mut r, &spec).map_err(e)?;
        let endpoint = if r.gen_bool(0.5) { Endpoint::Neumann } else { Endpoint::Dirichlet };
        let op = HalflineOperator::new(g, v, endpoint, 0.0).map_err(e)?;
        let n = count_negative(&op, 0.0, &opts()).map_err(e)?;
        let c = certified_count(&op, 0.0, &MeshSpec::new(32, op.potential.support_end() + 1.0), 5).map_err(e)?;
        if !c.agree || c.count_natural as u64 != n {
            return Err(format!(
                "instance {i}: solver {n}, oracle natural {} dirichlet {} ({op:?})",
                c.count_natural, c.count_dirichlet
            ));
        }
        total += n;
    }
    Ok(format!("200 instances, {total} eigenvalues in total"))
}

pub fn c03_sharp_clr() -> Result<String, String> {
    let mut r = rng(3003);
    let spec = PotentialSpec::default();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let g: Weight = random_step_weight(&mut r, true).map_err(e)?.into();
        let v = random_potential(&mut r, &spec).map_err(e)?;
        let op = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Neumann, 0.0).map_err(e)?;
        let n = count_negative(&op, 0.0, &opts()).map_err(e)? as f64;
        let rhs = sharp_clr_rhs(&g, &v).map_err(e)?;
        if n > rhs * (1.0 + 1e-9) + 1e-9 {
            return Err(format!("instance {i}: N = {n} > {rhs}"));
        }
        worst = worst.max(n / rhs);
    }
    // a narrow well at t0 binds exactly when its strength exceeds 1/(g(t0)∫_{t0}^∞ 1/g)
    let g: Weight = PowerWeight::new(1.0, 2.0, 0.0).map_err(e)?.into();
    let (t0, h) = (0.5, 1e-3);
    let well = |s: f64| SymmetricPotential::indicator(t0, t0 + h, s / h);
    let count = |s: f64| -> Result<u64, String> {
        let op = HalflineOperator::new(g.clone(), well(s).map_err(e)?, Endpoint::Neumann, 0.0).map_err(e)?;
        count_negative(&op, 0.0, &opts()).map_err(e)
    };
    let (mut lo, mut hi) = (0.01, 10.0);
    if count(lo)? != 0 || count(hi)? == 0 {
        return Err("witness bracket failed".into());
    }
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if count(m)? == 0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let v = well(hi).map_err(e)?;
    let n = count(hi)? as f64;
    let witness = n / sharp_clr_rhs(&g, &v).map_err(e)?;
    if witness < 0.9 {
        return Err(format!("sharpness witness N/rhs = {witness}"));
    }
    Ok(format!("200 instances, max N/rhs {worst:.3}; witness N/rhs = {witness:.5}"))
}

pub fn c04_clr_constants() -> Result<String, String> {
    let mut r = rng(4004);
    let spec = PotentialSpec::default();
    let trees = [
        TreeDescriptor::geometric(2.0, 1.0, 4).map_err(e)?,
        TreeDescriptor::geometric(2f64.sqrt(), 1.0, 2).map_err(e)?,
    ];
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    let mut ms = Vec::new();
    for tree in &trees {
        assert!((tree.natural_dimension().unwrap() - 3.0).abs() < 1e-12);
        let g0: Weight = tree.g0().into();
        for (p, q) in [(1.0, f64::INFINITY), (1.5, 6.0), (2.0, 4.0)] {
            let a = 2.0 * p - 1.0;
            let m = clr_m(&g0, &|t| (1.0 + t).powf(a), q, false).map_err(e)?;
            let m = m.value.finite().ok_or("M infinite")?;
            let (_, c) = clr_bound(m, p).map_err(e)?;
            ms.push(format!("{m:.3}"));
            for _ in 0..40 {
                let v = random_potential(&mut r, &spec).map_err(e)?.scaled(r.gen_range(0.1..3.0));
                let n = tree_count(tree, &v, 0.0, &opts()).map_err(e)? as f64;
                let rhs = c * weighted_rhs(&v, p, &RhsWeight::OnePlusT(a), Some(&g0)).map_err(e)?;
                if n > rhs {
                    return Err(format!("p = {p}: N = {n} > {rhs} for V = {v:?}"));
                }
                worst = worst.max(n / rhs);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} instances, max N/rhs {worst:.3}, M values [{}]", ms.join(", ")))
}

fn mixed_tree(r: &mut rand_chacha::ChaCha8Rng, i: usize) -> Result<TreeDescriptor, String> {
    match i % 3 {
        0 => random_tree(r, 3, &[2, 3]).map_err(e),
        1 => TreeDescriptor::halfline().pipe(Ok),
        _ => {
            let b = r.gen_range(2..=3);
            TreeDescriptor::geometric(r.gen_range(1.2..3.0), r.gen_range(0.5..2.0), b).map_err(e)
        }
    }
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}
impl<T> Pipe for T {}

pub fn c05_universal_lt() -> Result<String, String> {
    let mut r = rng(5005);
    let spec = PotentialSpec::default();
    let k = classical_constants(0.5).map_err(e)?;
    if (k.ek_bound - 1.0).abs() > 1e-14 {
        return Err(format!("4 L^cl = {}", k.ek_bound));
    }
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let tree = mixed_tree(&mut r, i)?;
        let v = random_potential(&mut r, &spec).map_err(e)?.scaled(r.gen_range(0.2..5.0));
        let lhs = tree_moment(&tree, &v, 0.5, 0.0, &opts()).map_err(e)?.value;
        let g0: Weight = tree.g0().into();
        let rhs = k.ek_bound * weighted_rhs(&v, 1.0, &RhsWeight::Unit, Some(&g0)).map_err(e)?;
        if lhs > rhs * (1.0 + 1e-9) {
            return Err(format!("instance {i}: {lhs} > {rhs} on {tree:?} with {v:?}"));
        }
        worst = worst.max(lhs / rhs);
    }
    Ok(format!("200 instances, max ratio {worst:.4}"))
}

pub fn c06_weyl() -> Result<String, String> {
    let tree = TreeDescriptor::geometric(4.0, 1.0, 2).map_err(e)?;
    let v = SymmetricPotential::tent(2.0, 2.0, 1.0).map_err(e)?;
    let s = weyl_sweep(&tree, &v, 1.0, &[1e2, 1e3, 1e4], &opts()).map_err(e)?;
    let ratios: Vec<String> = s.points.iter().map(|p| format!("{:.4}", p.ratio)).collect();
    let detail = format!("ratios [{}] at α = 1e2, 1e3, 1e4", ratios.join(", "));
    if s.final_deviation <= 0.15 && s.monotone {
        Ok(detail)
    } else {
        Err(detail)
    }
}

pub fn c07_weak_coupling() -> Result<String, String> {
    let v = SymmetricPotential::indicator(0.0, 1.0, 1.0).map_err(e)?;
    let grid = [0.02, 0.03, 0.045, 0.065, 0.1];
    let mut out = Vec::new();
    let mut ok = true;
    for tree in [TreeDescriptor::halfline(), TreeDescriptor::geometric(4.0, 1.0, 2).map_err(e)?] {
        let fit = weak_coupling_fit(&tree, &v, &grid, &opts()).map_err(e)?;
        let expected = fit.expected.ok_or("no expected slope")?;
        ok &= (fit.slope - expected).abs() <= 0.5 && fit.used >= 3;
        out.push(format!("slope {:.3} (expected {expected}, {} points)", fit.slope, fit.used));
    }
    let detail = out.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Bottom of the spectrum from the per-edge transfer map: the largest λ
/// at which `(tr P)² ≥ 4 det P`.
fn floquet_lambda(b: f64) -> f64 {
    let disc = |l: f64| {
        let c = l.sqrt().cos();
        (c * (1.0 + 1.0 / b)).powi(2) - 4.0 / b
    };
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if disc(m) >= 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

pub fn c08_homogeneous() -> Result<String, String> {
    let l4 = lambda_b(4.0).map_err(e)?;
    let l2 = lambda_b(2.0).map_err(e)?;
    let f4 = floquet_lambda(4.0);
    let f2 = floquet_lambda(2.0);
    if (l4 - 0.41409).abs() > 1e-5 || (l2 - 0.11549).abs() > 1e-5 || (l4 - f4).abs() > 1e-10 || (l2 - f2).abs() > 1e-10 {
        return Err(format!("λ_4 = {l4} (oracle {f4}), λ_2 = {l2} (oracle {f2})"));
    }
    let mut worst_res: f64 = 0.0;
    let mut env = Vec::new();
    for b in [2.0, 3.0, 4.0] {
        let gs = GroundState::new(b).map_err(e)?;
        let res = gs.residuals(100);
        worst_res = worst_res.max(res.ode).max(res.jump).max(res.continuity).max(res.neumann);
        let (lo, hi) = gs.envelope_range(100.0, 64);
        if !(lo > 0.0 && hi.is_finite()) {
            return Err(format!("envelope for b = {b}: [{lo}, {hi}]"));
        }
        env.push(format!("b={b}: [{lo:.3}, {hi:.3}]"));
    }
    if worst_res > 1e-12 {
        return Err(format!("ground state residual {worst_res:e}"));
    }
    let mut r = rng(8008);
    let spec = PotentialSpec {
        max_pieces: 4,
        depth: (0.1, 6.0),
        support: (0.0, 4.0),
    };
    let mut routes = 0;
    let mut cb = Vec::new();
    for i in 0..30 {
        let b = [2, 3, 4][i % 3];
        let tree = TreeDescriptor::homogeneous(1.0, b).map_err(e)?;
        let v = random_potential(&mut r, &spec).map_err(e)?;
        let gsr = count_below_lambda_b(&tree, &v, &opts()).map_err(e)?;
        let direct = count_below_shifted(&tree, &v, 1e-9, &opts()).map_err(e)?;
        if gsr != direct {
            return Err(format!("b = {b}: GSR count {gsr}, shifted count {direct} for {v:?}"));
        }
        let rep = homo_clr_bound(&tree, &v, &RhsWeight::OnePlusT(3.0), 4.0, &opts()).map_err(e)?;
        if !rep.report.satisfied {
            return Err(format!("homogeneous CLR violated: {:?}", rep.report));
        }
        if i < 3 {
            cb.push(format!("C({b}) = {:.3}", rep.c_b));
        }
        routes += 1;
    }
    Ok(format!(
        "λ_4 = {l4:.10}, λ_2 = {l2:.10}, residual {worst_res:.1e}, envelopes {}, {routes} two-route counts equal, {}",
        env.join(" "),
        cb.join(", ")
    ))
}

pub fn c09_sobolev() -> Result<String, String> {
    let inf = f64::INFINITY;
    let cells: [(f64, f64, f64); 16] = [
        (2.0, 0.5, 3.0),
        (inf, 0.5, 3.0),
        (4.0, 0.75, 3.0),
        (6.0, 1.0, 3.0),
        (3.0, 0.2, 1.5),
        (inf, 0.25, 1.5),
        (2.0, 0.5, 2.0),
        (inf, 0.3, 2.0),
        (2.0, 0.5, 1.0),
        (3.0, 0.3, 1.0),
        (1.0 / 0.3, 0.3, 1.0),
        (3.0, 1.0, 2.5),
        (4.0, 1.0, 2.5),
        (2.0, 1.25, 2.5),
        (inf, 0.0, 1.0),
        (inf, 0.0, 1.5),
    ];
    let mut r = rng(9009);
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for &(q, beta, d) in &cells {
        let region = classify(q, beta, d).map_err(e)?;
        if !region.holds() {
            return Err(format!("cell ({q}, {beta}, {d}) classified {region}"));
        }
        for _ in 0..500 {
            let u = random_trial(&mut r).map_err(e)?;
            let c = check_sobolev(&u, q, beta, d).map_err(e)?;
            if c.ratio > 1.0 + 1e-9 {
                return Err(format!("({q}, {beta}, {d}): ratio {} for {u:?}", c.ratio));
            }
            worst = worst.max(c.ratio);
            trials += 1;
        }
    }
    // the excluded cell d = 2, β = 0, q = ∞
    assert_eq!(classify(inf, 0.0, 2.0).map_err(e)?, SobolevRegion::NonPositiveBetaSup);
    let log_ratio = |n: f64| -> Result<f64, String> {
        match counterexample_family("log_trial", n).map_err(e)? {
            Counterexample::Trial(u) => Ok(check_sobolev(&u, inf, 0.0, 2.0).map_err(e)?.ratio),
            _ => Err("log_trial is a trial function".into()),
        }
    };
    let growth = log_ratio(1e4)? / log_ratio(1e2)?;
    if !(growth > 1.5) {
        return Err(format!("log_trial growth {growth}"));
    }
    // point-interaction family: unbounded ratios exactly below γ = (1−a)/2
    let g: Weight = StepWeight::constant(0.0, 1.0).map_err(e)?.into();
    let mut dirac = Vec::new();
    for (endpoint, center) in [(Endpoint::Neumann, 0.0), (Endpoint::Dirichlet, 2.0)] {
        for (gamma, a) in [(0.0, 0.0), (0.1, 0.0), (0.0, 0.3), (0.5, 0.0), (0.25, 0.5), (0.6, 0.2)] {
            let r10 = dirac_ratio(&g, 10.0, center, gamma, a, endpoint, &opts()).map_err(e)?;
            let r4 = dirac_ratio(&g, 1e4, center, gamma, a, endpoint, &opts()).map_err(e)?;
            let blow = r4.ratio > 10.0 * r10.ratio;
            let expect = gamma < (1.0 - a) / 2.0;
            if blow != expect || r4.trace <= 0.0 {
                return Err(format!(
                    "dirac {endpoint:?} (γ, a) = ({gamma}, {a}): ratio {} → {}",
                    r10.ratio, r4.ratio
                ));
            }
            dirac.push(format!("{:.1}", r4.ratio / r10.ratio));
        }
    }
    Ok(format!(
        "{trials} trials in {} cells, max ratio {worst:.4}; log_trial growth {growth:.3}; dirac growth factors [{}]",
        cells.len(),
        dirac.join(", ")
    ))
}

pub fn c10_sandwich() -> Result<String, String> {
    let g: Weight = PowerWeight::new(1.0, 2.0, 0.0).map_err(e)?.into();
    let exact = mtree_spectral::DimensionBounds { d: 3.0, c1: 1.0, c2: 1.0 };
    let mut r = rng(10010);
    let spec = PotentialSpec::default();
    for gamma in [0.0, 0.5, 1.0] {
        for _ in 0..5 {
            let v = random_potential(&mut r, &spec).map_err(e)?;
            let s = dirichlet_sandwich(&g, &exact, &v, gamma, &opts()).map_err(e)?;
            let tol = 1e-8 * (1.0 + s.middle.value);
            if (s.lower.value - s.middle.value).abs() > tol || (s.upper.value - s.middle.value).abs() > tol {
                return Err(format!("three-way equality at γ = {gamma}: {:?}", s));
            }
        }
    }
    let mut n = 0;
    let mut max_ratio: f64 = 0.0;
    let mut tries = 0;
    while n < 60 {
        tries += 1;
        if tries > 2000 {
            return Err("could not draw enough trees with c2/c1 ≤ 4".into());
        }
        let d = [1.5, 2.0, 2.5, 3.0][n % 4];
        let b: u32 = r.gen_range(2..=4);
        let ratio = (b as f64).powf(1.0 / (d - 1.0));
        let k = r.gen_range(0..=2);
        let prefix: Vec<(f64, u32)> = (1..=k).map(|i| (i as f64 * 0.7, 2)).collect();
        let tail = TailRule::Geometric {
            ratio,
            first_length: r.gen_range(0.5..2.0),
            branch: b,
        };
        let tree = TreeDescriptor::build(&prefix, tail).map_err(e)?;
        let bounds = match tree.dimension_bounds(d) {
            Ok(x) if x.c2 / x.c1 <= 4.0 => x,
            _ => continue,
        };
        let g0: Weight = tree.g0().into();
        let v = random_potential(&mut r, &spec).map_err(e)?;
        let gamma = [0.0, 0.5, 1.0][n % 3];
        let s = dirichlet_sandwich(&g0, &bounds, &v, gamma, &opts()).map_err(e)?;
        if !(s.sandwich_ok && s.interlacing_ok) {
            return Err(format!("d = {d}, γ = {gamma}: {s:?}"));
        }
        max_ratio = max_ratio.max(bounds.c2 / bounds.c1);
        n += 1;
    }
    Ok(format!("three-way equality on 15 instances; sandwich and interlacing on {n} trees (c2/c1 up to {max_ratio:.2})"))
}

pub fn c11_one_bound_state() -> Result<String, String> {
    let bounds = mtree_spectral::DimensionBounds { d: 3.0, c1: 1.0, c2: 1.0 };
    let obs = one_bound_state_bound(0.0, 1.0, &bounds).map_err(e)?;
    if (obs.c - 1.0).abs() > 1e-14 {
        return Err(format!("C = {}", obs.c));
    }
    let g: Weight = PowerWeight::new(1.0, 2.0, 0.0).map_err(e)?.into();
    let mut r = rng(11011);
    let spec = PotentialSpec::default();
    let mut below = 0;
    for i in 0..100 {
        let v = random_potential(&mut r, &spec).map_err(e)?;
        let m = obs.potential_integral(&v, &g).map_err(e)?;
        let target = r.gen_range(0.05..0.999);
        let v = v.scaled(target / m);
        let op = HalflineOperator::new(g.clone(), v.clone(), Endpoint::Neumann, 0.0).map_err(e)?;
        let n = count_negative(&op, 0.0, &opts()).map_err(e)?;
        if n != 0 {
            return Err(format!("instance {i}: {n} eigenvalues at ∫V(1+t) = {target}"));
        }
        below += 1;
    }
    // smallest margin above 1 with a bound state, over a few shapes
    let mut margins = Vec::new();
    for (lo, hi) in [(0.0, 0.01), (0.0, 1.0), (1.0, 3.0)] {
        let shape = SymmetricPotential::indicator(lo, hi, 1.0).map_err(e)?;
        let m = obs.potential_integral(&shape, &g).map_err(e)?;
        let mut found = None;
        let mut margin: f64 = 1.0;
        while margin <= 10.0 {
            let op = HalflineOperator::new(g.clone(), shape.scaled(margin / m), Endpoint::Neumann, 0.0).map_err(e)?;
            if count_negative(&op, 0.0, &opts()).map_err(e)? >= 1 {
                found = Some(margin);
                break;
            }
            margin *= 1.01;
        }
        margins.push(found.map_or("none ≤ 10".to_string(), |m| format!("{m:.3}")));
    }
    Ok(format!(
        "C = 1; {below} instances below threshold with no eigenvalue; first witness margins [{}]",
        margins.join(", ")
    ))
}
