//! The Solecki-style ideal on measure-1/2 clopen sets at a fixed
//! resolution, with the selector pipeline: refinement antichains α, the
//! counting antichains φ_n, the mass-trimming ρ_ε, the sequence Φ_ε, the
//! level sets Λ, and branch extraction from the tree T_X. All mass
//! arithmetic is exact dyadic.

use std::collections::{BTreeSet, HashMap};

use crate::foundation::{Dyadic, ForgeError, GradedIdeal, GroundSet, Result, Subset};
use crate::ic::Node;

// ---------------------------------------------------------------------------
// Clopen sets
// ---------------------------------------------------------------------------

/// A clopen subset of the depth-`k` cylinder space: a union of cells,
/// each cell a length-`k` bit string (first symbol most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClopenSet {
    pub resolution: usize,
    pub cells: Subset,
}

impl ClopenSet {
    pub fn new(resolution: usize, cells: Subset) -> Result<Self> {
        if cells.ground_size() != 1 << resolution {
            return Err(ForgeError::ResolutionMismatch);
        }
        Ok(ClopenSet { resolution, cells })
    }

    pub fn measure(&self) -> Dyadic {
        Dyadic::new(self.cells.len() as u128, self.resolution as u32)
    }

    pub fn is_half(&self) -> bool {
        self.cells.len() == 1 << (self.resolution - 1)
    }
}

/// All measure-1/2 clopen sets at resolution `k`, ordered by cell
/// bitmask. Full enumeration is limited to `k <= 4`; the count at `k = 5`
/// is C(32,16), far beyond desk scale.
pub fn omega_enumerate(k: usize) -> Result<Vec<ClopenSet>> {
    if k == 0 || k > 4 {
        return Err(ForgeError::ScaleLimit(format!(
            "omega enumeration supports 1 <= k <= 4, got {k}"
        )));
    }
    let cells = 1usize << k;
    let half = cells / 2;
    let mut out = Vec::new();
    for mask in 0u64..1 << cells {
        if mask.count_ones() as usize == half {
            out.push(ClopenSet::new(k, Subset::from_mask(cells, mask))?);
        }
    }
    Ok(out)
}

/// Indices of the listed sets containing the cell `x`: one grade-1
/// generator of the Solecki ideal.
pub fn generator_for_point(x_cell: usize, omega: &[ClopenSet]) -> Subset {
    let mut s = Subset::empty(omega.len());
    for (i, d) in omega.iter().enumerate() {
        if d.cells.contains(x_cell) {
            s.insert(i);
        }
    }
    s
}

/// The graded ideal over ground = the canonical enumeration of Ω at
/// resolution `k`, generated by the per-cell sets.
pub fn solecki_ideal(k: usize) -> Result<(Vec<ClopenSet>, GradedIdeal)> {
    let omega = omega_enumerate(k)?;
    let gens: Vec<Subset> = (0..1 << k).map(|c| generator_for_point(c, &omega)).collect();
    let ideal = GradedIdeal::new(
        GroundSet::new(omega.len(), format!("Omega_{k}"))?,
        gens,
        format!("S_{k}"),
    )?;
    Ok((omega, ideal))
}

/// Exact measure of the cells lying in at least `m` members of `X`.
pub fn check_cx_mass(x: &[ClopenSet], m: usize) -> Result<Dyadic> {
    let k = shared_resolution(x)?;
    let count = (0..1usize << k)
        .filter(|&c| x.iter().filter(|d| d.cells.contains(c)).count() >= m)
        .count();
    Ok(Dyadic::new(count as u128, k as u32))
}

/// The largest number of members of `X` any single cell lies in.
pub fn max_cell_membership(x: &[ClopenSet]) -> Result<usize> {
    let k = shared_resolution(x)?;
    Ok((0..1usize << k)
        .map(|c| x.iter().filter(|d| d.cells.contains(c)).count())
        .max()
        .unwrap())
}

fn shared_resolution(x: &[ClopenSet]) -> Result<usize> {
    let Some(first) = x.first() else {
        return Err(ForgeError::EmptyFamily);
    };
    if x.iter().any(|d| d.resolution != first.resolution) {
        return Err(ForgeError::ResolutionMismatch);
    }
    Ok(first.resolution)
}

// ---------------------------------------------------------------------------
// Antichains of nodes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntichainOfNodes {
    nodes: BTreeSet<Node>,
}

impl AntichainOfNodes {
    pub fn new(nodes: BTreeSet<Node>) -> Result<Self> {
        let v: Vec<Node> = nodes.iter().copied().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i].comparable(&v[j]) {
                    return Err(ForgeError::InvalidArgument(format!(
                        "nodes {} and {} are comparable",
                        v[i], v[j]
                    )));
                }
            }
        }
        Ok(AntichainOfNodes { nodes })
    }

    pub fn nodes(&self) -> &BTreeSet<Node> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Exact mass `Σ 2^{-|s|}`.
    pub fn mass(&self) -> Dyadic {
        self.nodes
            .iter()
            .fold(Dyadic::ZERO, |acc, s| acc.add(&Dyadic::half_power(s.len as u32)))
    }
}

/// Refine the cells of `D` to length `resolution + index`: a uniform-
/// length antichain covering `D` whose length grows with the enumeration
/// index, of mass exactly `μ(D)`.
pub fn alpha(d: &ClopenSet, index: usize) -> AntichainOfNodes {
    let k = d.resolution;
    let mut nodes = BTreeSet::new();
    for cell in d.cells.iter() {
        for ext in 0u32..1 << index {
            nodes.insert(Node {
                len: k + index,
                val: ((cell as u32) << index) | ext,
            });
        }
    }
    AntichainOfNodes { nodes }
}

/// A node set coding the limit set of points passing through many of
/// its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdeltaCode {
    pub a: BTreeSet<Node>,
}

/// The union of the `α(D_i, i)` over the family, with the index local to
/// the family.
pub fn code_cx(x: &[ClopenSet]) -> GdeltaCode {
    let mut a = BTreeSet::new();
    for (i, d) in x.iter().enumerate() {
        a.extend(alpha(d, i).nodes);
    }
    GdeltaCode { a }
}

// ---------------------------------------------------------------------------
// φ, ρ, Φ, Λ
// ---------------------------------------------------------------------------

#[cfg(test)]
fn prefix_count(a: &BTreeSet<Node>, s: &Node) -> usize {
    (0..=s.len).filter(|&m| a.contains(&s.prefix(m))).count()
}

/// The ⊑-minimal nodes with exactly `n - 1` prefixes in `A` (counting
/// equality): the canonical maximal antichain of that property. The
/// count only increments at members of `A`, so minimality means the
/// parent's count is one lower; no witness lives beyond the longest
/// member of `A`, and the cap merely bounds the assertion scope.
pub fn phi_n_antichain(a: &BTreeSet<Node>, n: usize, depth_cap: usize) -> Result<AntichainOfNodes> {
    if n == 0 {
        return Err(ForgeError::InvalidArgument("phi needs n >= 1".into()));
    }
    let max_len = a.iter().map(|s| s.len).max().unwrap_or(0).min(depth_cap);
    let mut out = BTreeSet::new();
    let mut frontier: Vec<(Node, usize)> = vec![(Node::root(), usize::from(a.contains(&Node::root())))];
    while let Some((s, count)) = frontier.pop() {
        if count == n - 1 {
            out.insert(s);
            continue;
        }
        if s.len >= max_len {
            continue;
        }
        for b in 0..2u32 {
            let child = Node { len: s.len + 1, val: (s.val << 1) | b };
            let c = count + usize::from(a.contains(&child));
            frontier.push((child, c));
        }
    }
    AntichainOfNodes::new(out)
}

/// Keep the least prefix of `A` (canonical node order) whose residual
/// mass drops below `ε`.
pub fn rho_eps(a: &AntichainOfNodes, eps: &Dyadic) -> Result<AntichainOfNodes> {
    if eps.is_zero() {
        return Err(ForgeError::BadEpsilon);
    }
    let mut residual = a.mass();
    let mut kept = BTreeSet::new();
    for s in a.nodes.iter() {
        if residual < *eps {
            break;
        }
        kept.insert(*s);
        residual = residual.sub(&Dyadic::half_power(s.len as u32));
    }
    Ok(AntichainOfNodes { nodes: kept })
}

/// The trimmed antichain sequence `Φ_ε(A)(n) = ρ_{ε/2^{n+1}}(φ_n(A))`
/// for `n = 1..=n_max`, with exact residual bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSequence {
    pub antichains: Vec<AntichainOfNodes>,
    pub bounds: Vec<Dyadic>,
    pub residuals: Vec<Dyadic>,
}

impl PhiSequence {
    /// The antichain at parameter `n` (1-based).
    pub fn at(&self, n: usize) -> &AntichainOfNodes {
        &self.antichains[n - 1]
    }
}

pub fn phi_eps(
    a: &BTreeSet<Node>,
    eps: &Dyadic,
    n_max: usize,
    depth_cap: usize,
) -> Result<PhiSequence> {
    if eps.is_zero() {
        return Err(ForgeError::BadEpsilon);
    }
    let mut antichains = Vec::new();
    let mut bounds = Vec::new();
    let mut residuals = Vec::new();
    for n in 1..=n_max {
        let full = phi_n_antichain(a, n, depth_cap)?;
        let bound = Dyadic::new(eps.numerator(), eps.exponent() + n as u32 + 1);
        let trimmed = rho_eps(&full, &bound)?;
        residuals.push(full.mass().sub(&trimmed.mass()));
        bounds.push(bound);
        antichains.push(trimmed);
    }
    Ok(PhiSequence { antichains, bounds, residuals })
}

/// The level sets `Λ(X)(n) = {i : α(D_i, i) ∩ Φ_{1/4}(C(X))(n) ≠ ∅}`
/// for `n = 1..=n_max`, plus the contract bookkeeping: per-member
/// occurrence counts and the exact mass of the part of `C_X` missed by
/// the intersection of the level unions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaReport {
    pub per_n: Vec<Vec<usize>>,
    pub occurrences: Vec<usize>,
    pub uncovered_mass: Dyadic,
}

pub fn lambda_map(x: &[ClopenSet], n_max: usize) -> Result<LambdaReport> {
    let k = shared_resolution(x)?;
    let code = code_cx(x);
    let cap = k + x.len();
    let phi = phi_eps(&code.a, &Dyadic::new(1, 2), n_max, cap)?;
    let alphas: Vec<AntichainOfNodes> =
        x.iter().enumerate().map(|(i, d)| alpha(d, i)).collect();
    let per_n: Vec<Vec<usize>> = (1..=n_max)
        .map(|n| {
            (0..x.len())
                .filter(|&i| {
                    alphas[i].nodes.iter().any(|s| phi.at(n).nodes.contains(s))
                })
                .collect()
        })
        .collect();
    let occurrences: Vec<usize> = (0..x.len())
        .map(|i| per_n.iter().filter(|lvl| lvl.contains(&i)).count())
        .collect();

    let m = x.len().div_ceil(2);
    let cx_cells: Vec<usize> = (0..1usize << k)
        .filter(|&c| x.iter().filter(|d| d.cells.contains(c)).count() >= m)
        .collect();
    let mut covered = Subset::full(1 << k);
    for lvl in per_n.iter().filter(|lvl| !lvl.is_empty()) {
        let mut union = Subset::empty(1 << k);
        for &i in lvl {
            union = union.union(&x[i].cells);
        }
        covered = covered.intersect(&union);
    }
    let missed = cx_cells.iter().filter(|&&c| !covered.contains(c)).count();
    Ok(LambdaReport {
        per_n,
        occurrences,
        uncovered_mass: Dyadic::new(missed as u128, k as u32),
    })
}

// ---------------------------------------------------------------------------
// The selector
// ---------------------------------------------------------------------------

/// Outcome of the branch extraction from `T_X`: the chosen subfamily in
/// level order, the exact common-cell set, and the achieved depth
/// against the requested one. A shortfall is reported, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoleckiSelection {
    pub family: Vec<usize>,
    pub common_cells: Subset,
    pub depth_achieved: usize,
    pub depth_requested: usize,
    pub distinct_members: usize,
}

/// Walk `T_X`: sequences whose `n`-th entry lies in `Λ(X)(n)` with a
/// nonempty running cell intersection, leftmost among the deepest. The
/// informative levels start at `n = 2`; the trimmed `φ_1` antichain is
/// the root and meets no `α`.
pub fn solecki_selector(x: &[ClopenSet]) -> Result<SoleckiSelection> {
    let k = shared_resolution(x)?;
    if x.len() < 2 {
        return Err(ForgeError::InvalidArgument(
            "selector needs at least 2 sets".into(),
        ));
    }
    let requested = x.len();
    let n_max = x.len() + 1;
    let lambda = lambda_map(x, n_max)?;
    let levels: Vec<&Vec<usize>> = lambda.per_n[1..].iter().collect();

    // deepest reachable depth from (level, intersection), memoized
    fn deepest(
        level: usize,
        cells: u64,
        levels: &[&Vec<usize>],
        x: &[ClopenSet],
        memo: &mut HashMap<(usize, u64), usize>,
    ) -> usize {
        if level == levels.len() {
            return 0;
        }
        if let Some(&d) = memo.get(&(level, cells)) {
            return d;
        }
        let mut best = 0;
        for &i in levels[level] {
            let next = cells & x[i].cells.as_mask();
            if next != 0 {
                best = best.max(1 + deepest(level + 1, next, levels, x, memo));
            }
        }
        memo.insert((level, cells), best);
        best
    }

    let full = Subset::full(1 << k).as_mask();
    let mut memo = HashMap::new();
    let total = deepest(0, full, &levels, x, &mut memo);

    let mut family = Vec::new();
    let mut cells = full;
    let mut level = 0;
    let mut remaining = total;
    while remaining > 0 {
        let mut advanced = false;
        for &i in levels[level] {
            let next = cells & x[i].cells.as_mask();
            if next != 0 && deepest(level + 1, next, &levels, x, &mut memo) == remaining - 1 {
                family.push(i);
                cells = next;
                advanced = true;
                break;
            }
        }
        debug_assert!(advanced);
        level += 1;
        remaining -= 1;
    }

    let mut common = Subset::empty(1 << k);
    for c in 0..1usize << k {
        if cells >> c & 1 == 1 {
            common.insert(c);
        }
    }
    let distinct = family.iter().collect::<BTreeSet<_>>().len();
    Ok(SoleckiSelection {
        family,
        common_cells: common,
        depth_achieved: total,
        depth_requested: requested,
        distinct_members: distinct,
    })
}
