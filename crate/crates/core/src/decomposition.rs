//! Spectrum of `−Δ_N − V` on a regular tree from its half-line components,
//! and a finite-element oracle on the literal truncated tree graph.

use crate::engine::{eigenvalues_below, moment, Endpoint, HalflineOperator, Moment, SolverOptions};
use crate::error::{Result, SpectralError};
use crate::ext::ExtReal;
use crate::oracle::{element_forms, radial_nodes, MeshSpec, Pencil, NO_PARENT};
use crate::potential::SymmetricPotential;
use crate::tree::TreeDescriptor;

/// Component `k` of the orthogonal decomposition: weight `g_k` on
/// `[t_k, ∞)`, Neumann at the root for `k = 0`, Dirichlet at `t_k` otherwise.
pub fn component_operator(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    k: usize,
) -> Result<HalflineOperator> {
    let t = tree
        .radius(k)
        .ok_or_else(|| SpectralError::InvalidParameter(format!("generation {k} does not exist")))?;
    let g = tree.branching_function(k)?;
    let endpoint = if k == 0 {
        Endpoint::Neumann
    } else {
        Endpoint::Dirichlet
    };
    let pot = if k == 0 { v.clone() } else { v.restricted(t) };
    HalflineOperator::new(g, pot, endpoint, t)
}

/// Generations whose components can carry spectrum: 0 and every `k` with
/// `t_k < T_V`. Components with `t_k ≥ T_V` have `V_k ≡ 0` and are
/// nonnegative, so dropping them is exact.
pub fn active_generations(tree: &TreeDescriptor, v: &SymmetricPotential) -> Result<Vec<usize>> {
    let end = v.support_end();
    if !end.is_finite() {
        return Err(SpectralError::InvalidPotential(
            "tree sums need a compactly supported potential".into(),
        ));
    }
    let mut out = vec![0];
    out.extend(tree.generations_below(end));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMoment {
    pub k: usize,
    pub multiplicity: u64,
    pub left: f64,
    pub moment: Moment,
}

/// `tr(−Δ_N − V − μ)_-^γ` with its per-component breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeMoment {
    pub value: f64,
    pub count: u64,
    pub components: Vec<ComponentMoment>,
}

pub fn tree_moment(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    gamma: f64,
    mu: f64,
    opts: &SolverOptions,
) -> Result<TreeMoment> {
    let mut value = 0.0;
    let mut count: u64 = 0;
    let mut components = Vec::new();
    for k in active_generations(tree, v)? {
        let op = component_operator(tree, v, k)?;
        let m = moment(&op, gamma, mu, opts)?;
        let multiplicity = if k == 0 { 1 } else { tree.multiplicity(k)? };
        value += multiplicity as f64 * m.value;
        count = count
            .checked_add(multiplicity.checked_mul(m.count).ok_or(SpectralError::TooLarge(usize::MAX))?)
            .ok_or(SpectralError::TooLarge(usize::MAX))?;
        components.push(ComponentMoment {
            k,
            multiplicity,
            left: op.left,
            moment: m,
        });
    }
    Ok(TreeMoment {
        value,
        count,
        components,
    })
}

/// `N(−Δ_N − V + μ)`: eigenvalues below `−μ`, with multiplicity.
pub fn tree_count(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    mu: f64,
    opts: &SolverOptions,
) -> Result<u64> {
    Ok(tree_moment(tree, v, 0.0, mu, opts)?.count)
}

/// Eigenvalues below `threshold` tagged by component and multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEigenvalue {
    pub k: usize,
    pub multiplicity: u64,
    pub index: usize,
    pub value: f64,
    pub bracket_width: f64,
}

pub fn tree_eigenvalues(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    threshold: f64,
    opts: &SolverOptions,
) -> Result<Vec<TreeEigenvalue>> {
    let mut out = Vec::new();
    for k in active_generations(tree, v)? {
        let op = component_operator(tree, v, k)?;
        let multiplicity = if k == 0 { 1 } else { tree.multiplicity(k)? };
        for (index, e) in eigenvalues_below(&op, threshold, opts)?.eigenvalues.iter().enumerate() {
            out.push(TreeEigenvalue {
                k,
                multiplicity,
                index,
                value: e.value,
                bracket_width: e.bracket_width(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Majorization {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `tr(A_k − V_k)_-^γ ≤ tr(A_0 − χ_(t_k,∞) V)_-^γ`.
pub fn majorization_check(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    gamma: f64,
    k: usize,
    opts: &SolverOptions,
) -> Result<Majorization> {
    if k == 0 {
        return Err(SpectralError::InvalidParameter("majorization needs k >= 1".into()));
    }
    let op = component_operator(tree, v, k)?;
    let lhs = moment(&op, gamma, 0.0, opts)?.value;
    let t = op.left;
    let root = HalflineOperator::new(tree.g0(), v.restricted(t), Endpoint::Neumann, 0.0)?;
    let rhs = moment(&root, gamma, 0.0, opts)?.value;
    Ok(Majorization {
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + 1e-9) + 1e-12,
    })
}

/// Counts of the direct oracle on the truncated tree.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectOracle {
    pub count_dirichlet: usize,
    pub count_natural: usize,
    pub agree: bool,
    pub unknowns: usize,
    pub leaves: usize,
    pub mesh: MeshSpec,
}

/// Cap on the size of the assembled graph.
pub const MAX_TREE_NODES: usize = 5_000_000;

struct TreeDiscretization {
    pencil: Pencil,
    leaves: Vec<usize>,
    robin: f64,
}

fn discretize_tree(tree: &TreeDescriptor, v: &SymmetricPotential, mesh: &MeshSpec) -> Result<TreeDiscretization> {
    let t_end = mesh.truncation;
    let end = v.support_end();
    if !end.is_finite() {
        return Err(SpectralError::InvalidPotential("the tree oracle needs compact support".into()));
    }
    if !(t_end > 0.0) {
        return Err(SpectralError::InvalidParameter("truncation must be positive".into()));
    }
    let gens = tree.generations_below(t_end);
    if gens.iter().any(|&k| (tree.radius(k).unwrap() - t_end).abs() < 1e-9) {
        return Err(SpectralError::InvalidParameter(format!(
            "truncation {t_end} sits on a vertex"
        )));
    }
    let vertices: Vec<(f64, u32)> = gens
        .iter()
        .map(|&k| (tree.radius(k).unwrap(), tree.branch(k).unwrap()))
        .collect();
    let mut breaks: Vec<f64> = vertices.iter().map(|p| p.0).collect();
    breaks.extend(v.breaks_between(0.0, t_end));
    let positions = radial_nodes(0.0, t_end, &breaks, mesh, end.min(t_end));

    // size check before allocating anything
    let mut total = 1usize;
    let mut width = 1usize;
    let mut fanout = 1usize;
    for &x in &positions[1..] {
        width = width.checked_mul(fanout).ok_or(SpectralError::TooLarge(usize::MAX))?;
        total = total.saturating_add(width);
        if total > MAX_TREE_NODES {
            return Err(SpectralError::TooLarge(total));
        }
        fanout = vertex_branch(&vertices, x);
    }

    let mut parent = Vec::with_capacity(total);
    parent.push(NO_PARENT);
    let mut elements = Vec::with_capacity(total);
    let mut frontier = vec![0usize];
    let mut fanout = 1usize;
    for w in positions.windows(2) {
        let e = element_forms(w[0], w[1], |_| 1.0, |x| v.value(x));
        let mut next = Vec::with_capacity(frontier.len() * fanout);
        for &p in &frontier {
            for _ in 0..fanout {
                let id = parent.len();
                parent.push(p);
                elements.push((id, e));
                next.push(id);
            }
        }
        frontier = next;
        fanout = vertex_branch(&vertices, w[1]);
    }
    let mut pencil = Pencil::new(parent);
    for (id, e) in &elements {
        pencil.add_element(*id, e);
    }
    // each leaf sees a copy of the subtree beyond T, whose radial weight is
    // g_0/L with L leaves; its minimal energy for u(T) = c is c²/(L·I_T)
    let leaves = frontier.len();
    let robin = match tree.g0().tail_inverse_integral(t_end) {
        ExtReal::Finite(i) => 1.0 / (leaves as f64 * i),
        ExtReal::Infinite => 0.0,
    };
    Ok(TreeDiscretization {
        pencil,
        leaves: frontier,
        robin,
    })
}

fn vertex_branch(vertices: &[(f64, u32)], x: f64) -> usize {
    vertices
        .iter()
        .find(|(r, _)| (r - x).abs() < 1e-12)
        .map_or(1, |&(_, b)| b as usize)
}

/// Counts negative eigenvalues of the form `∫_Γ |φ′|² − V|φ|²` assembled
/// edge by edge on `{|x| ≤ T}`; Dirichlet truncation fixes the leaves,
/// natural truncation adds the exact exterior energy at each leaf.
pub fn direct_tree_oracle(tree: &TreeDescriptor, v: &SymmetricPotential, mesh: &MeshSpec) -> Result<DirectOracle> {
    let mut disc = discretize_tree(tree, v, mesh)?;
    let n = disc.pencil.stiffness.len();
    let mut fixed = vec![false; n];
    for &l in &disc.leaves {
        fixed[l] = true;
    }
    let count_dirichlet = disc.pencil.count_below(0.0, &fixed);
    for &l in &disc.leaves {
        disc.pencil.stiffness.diag[l] += disc.robin;
    }
    let count_natural = disc.pencil.count_below(0.0, &vec![false; n]);
    Ok(DirectOracle {
        count_dirichlet,
        count_natural,
        agree: count_dirichlet == count_natural,
        unknowns: n,
        leaves: disc.leaves.len(),
        mesh: *mesh,
    })
}

/// Oracle with refinement: the mesh doubles until two successive passes
/// agree, and while the two truncations disagree the distance from the
/// end of the support to the truncation doubles instead. Dirichlet
/// truncation loses eigenvalues close to 0, whose decay can be slow.
pub fn certified_tree_oracle(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    base: &MeshSpec,
    max_refinements: usize,
) -> Result<DirectOracle> {
    const MAX_EXTENSIONS: usize = 6;
    let end = v.support_end();
    let mut mesh = *base;
    let mut last: Option<DirectOracle> = None;
    let (mut refinements, mut extensions) = (0, 0);
    loop {
        let s = match direct_tree_oracle(tree, v, &mesh) {
            Ok(s) => s,
            Err(SpectralError::TooLarge(n)) => return last.ok_or(SpectralError::TooLarge(n)),
            Err(err) => return Err(err),
        };
        let stable = last
            .as_ref()
            .is_some_and(|l| l.count_natural == s.count_natural && l.count_dirichlet == s.count_dirichlet);
        if s.agree && stable {
            return Ok(s);
        }
        if s.agree || extensions == MAX_EXTENSIONS {
            if refinements == max_refinements {
                return Ok(s);
            }
            refinements += 1;
            mesh = mesh.refined();
        } else {
            extensions += 1;
            let reach = (mesh.truncation - end).max(1.0);
            mesh.truncation = shift_off_vertices(tree, end + 2.0 * reach);
        }
        last = Some(s);
    }
}

/// Moves `t` slightly when it falls on a vertex radius.
pub fn shift_off_vertices(tree: &TreeDescriptor, t: f64) -> f64 {
    let mut t = t;
    while tree
        .generations_below(t + 1e-6)
        .iter()
        .any(|&k| (tree.radius(k).unwrap() - t).abs() < 1e-6)
    {
        t += 0.0371;
    }
    t
}

/// Eigenvalues below `threshold` of the Dirichlet-truncated direct oracle,
/// with repetitions.
pub fn direct_tree_eigenvalues(
    tree: &TreeDescriptor,
    v: &SymmetricPotential,
    mesh: &MeshSpec,
    threshold: f64,
) -> Result<Vec<f64>> {
    let disc = discretize_tree(tree, v, mesh)?;
    let n = disc.pencil.stiffness.len();
    let mut fixed = vec![false; n];
    for &l in &disc.leaves {
        fixed[l] = true;
    }
    Ok(disc.pencil.eigenvalues_below(threshold, &fixed, 1e-13))
}

/// Groups sorted values whose relative gap is below `tol`; returns
/// `(representative, size)` per cluster.
pub fn clusters(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((rep, n)) if (x - *rep).abs() <= tol * rep.abs().max(1.0) => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}
