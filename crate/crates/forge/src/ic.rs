//! The branch-indexed ideal on the binary tree `2^{<=d}`: generators are
//! antichains, per-branch fiber level sets, and per-branch fiber
//! transversals, driven by a branch function `c`. The module provides the
//! decomposition-based membership formula, a grade-1 selector with a
//! square-root size floor, and the anti-reduction construction `c = H∘Θ`
//! that defeats graded reductions from a selector-equipped ideal.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::foundation::{ForgeError, GradedIdeal, Result, Subset};
use crate::selectors::FiniteSelector;

// ---------------------------------------------------------------------------
// Nodes of the binary tree
// ---------------------------------------------------------------------------

/// A node of the full binary tree: a bit string of length `len` stored as
/// an integer with the first symbol in the most significant position.
/// The derived order is length-then-lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub len: usize,
    pub val: u32,
}

impl Node {
    pub fn root() -> Node {
        Node { len: 0, val: 0 }
    }

    pub fn new(len: usize, val: u32) -> Result<Node> {
        if len > 31 || u64::from(val) >= 1u64 << len {
            return Err(ForgeError::InvalidArgument(format!(
                "node value {val} does not fit length {len}"
            )));
        }
        Ok(Node { len, val })
    }

    /// Level-order heap index: `2^len - 1 + val`.
    pub fn index(&self) -> usize {
        (1usize << self.len) - 1 + self.val as usize
    }

    pub fn from_index(i: usize) -> Node {
        let len = (i + 1).ilog2() as usize;
        Node { len, val: (i + 1 - (1 << len)) as u32 }
    }

    pub fn from_bits_str(s: &str) -> Result<Node> {
        if s == "e" || s.is_empty() {
            return Ok(Node::root());
        }
        let mut val = 0u32;
        for ch in s.chars() {
            match ch {
                '0' => val <<= 1,
                '1' => val = (val << 1) | 1,
                _ => {
                    return Err(ForgeError::InvalidArgument(format!(
                        "bad node string `{s}`"
                    )))
                }
            }
        }
        Node::new(s.len(), val)
    }

    pub fn symbol(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        ((self.val >> (self.len - 1 - i)) & 1) as u8
    }

    pub fn is_prefix_of(&self, other: &Node) -> bool {
        other.len >= self.len && (other.val >> (other.len - self.len)) == self.val
    }

    pub fn comparable(&self, other: &Node) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The length-`m` prefix.
    pub fn prefix(&self, m: usize) -> Node {
        debug_assert!(m <= self.len);
        Node { len: m, val: self.val >> (self.len - m) }
    }

    /// Extend by zeros to length `d`.
    pub fn leftmost_extension(&self, d: usize) -> Node {
        debug_assert!(d >= self.len);
        Node { len: d, val: self.val << (d - self.len) }
    }
}

impl std::fmt::Display for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.len == 0 {
            return write!(f, "e");
        }
        for i in 0..self.len {
            write!(f, "{}", self.symbol(i))?;
        }
        Ok(())
    }
}

/// Number of nodes of the full binary tree of depth `d`.
pub fn ic_ground_size(d: usize) -> usize {
    (1 << (d + 1)) - 1
}

pub fn nodes_to_subset(nodes: &BTreeSet<Node>, d: usize) -> Subset {
    let mut s = Subset::empty(ic_ground_size(d));
    for n in nodes {
        s.insert(n.index());
    }
    s
}

pub fn subset_to_nodes(s: &Subset) -> BTreeSet<Node> {
    s.iter().map(Node::from_index).collect()
}

// ---------------------------------------------------------------------------
// Branch functions and presentations
// ---------------------------------------------------------------------------

/// For each depth-`d` branch, a total map from levels `0..d` to fiber
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchFunction {
    pub depth: usize,
    maps: Vec<Vec<usize>>,
}

impl BranchFunction {
    pub fn new(depth: usize, maps: Vec<Vec<usize>>) -> Result<Self> {
        if maps.len() != 1 << depth {
            return Err(ForgeError::InvalidArgument(format!(
                "expected {} branch maps, got {}",
                1 << depth,
                maps.len()
            )));
        }
        if let Some(m) = maps.iter().find(|m| m.len() != depth) {
            return Err(ForgeError::InvalidArgument(format!(
                "branch map has {} levels, expected {depth}",
                m.len()
            )));
        }
        Ok(BranchFunction { depth, maps })
    }

    /// Constant map `level -> level` on every branch: each level its own
    /// fiber.
    pub fn level_identity(depth: usize) -> Self {
        BranchFunction {
            depth,
            maps: vec![(0..depth).collect(); 1 << depth],
        }
    }

    pub fn level_map(&self, branch_val: u32) -> &[usize] {
        &self.maps[branch_val as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ICPresentation {
    pub depth: usize,
    pub c: BranchFunction,
}

impl ICPresentation {
    pub fn new(depth: usize, c: BranchFunction) -> Result<Self> {
        if c.depth != depth {
            return Err(ForgeError::InvalidArgument(format!(
                "branch function depth {} does not match presentation depth {depth}",
                c.depth
            )));
        }
        Ok(ICPresentation { depth, c })
    }
}

// ---------------------------------------------------------------------------
// Decomposition into chains and antichains
// ---------------------------------------------------------------------------

fn is_antichain(nodes: &[Node]) -> bool {
    nodes
        .iter()
        .tuple_combinations()
        .all(|(a, b)| !a.comparable(b))
}

fn maximal_antichains(elems: &[Node]) -> Vec<Vec<Node>> {
    let n = elems.len();
    if n > 14 {
        // too many for subset enumeration: fall back to the level
        // antichains, which still yield a valid candidate family
        let mut by_len: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
        for &e in elems {
            by_len.entry(e.len).or_default().push(e);
        }
        return by_len.into_values().collect();
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let sel: Vec<Node> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elems[i]).collect();
        if !is_antichain(&sel) {
            continue;
        }
        let maximal = (0..n)
            .filter(|i| mask >> i & 1 == 0)
            .all(|i| sel.iter().any(|s| s.comparable(&elems[i])));
        if maximal {
            out.push(sel);
        }
    }
    out
}

fn min_cover_indices(masks: &[u128], full: u128) -> Vec<usize> {
    fn dfs(
        masks: &[u128],
        full: u128,
        start: usize,
        covered: u128,
        chosen: &mut Vec<usize>,
        budget: usize,
    ) -> bool {
        if covered == full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        for i in start..masks.len() {
            if masks[i] & !covered == 0 {
                continue;
            }
            chosen.push(i);
            if dfs(masks, full, i + 1, covered | masks[i], chosen, budget - 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for t in 1..=masks.len() {
        let mut chosen = Vec::new();
        if dfs(masks, full, 0, 0, &mut chosen, t) {
            return chosen;
        }
    }
    Vec::new()
}

/// Cover `A` by chains and antichains of the tree order, with the total
/// number of pieces minimal (exact set cover over the maximal chains and
/// maximal antichains of `A`). Ties between equally small covers resolve
/// toward chains, which come first in the candidate order.
pub fn chain_antichain_decompose(a: &BTreeSet<Node>) -> (Vec<Vec<Node>>, Vec<Vec<Node>>) {
    if a.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let elems: Vec<Node> = a.iter().copied().collect();
    debug_assert!(elems.len() <= 127);
    let pos: BTreeMap<Node, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let to_mask = |piece: &[Node]| -> u128 {
        piece.iter().fold(0u128, |m, e| m | 1 << pos[e])
    };

    // maximal chains: predecessor sets of the maximal elements
    let mut chains: Vec<Vec<Node>> = elems
        .iter()
        .filter(|m| !elems.iter().any(|b| *m != b && m.is_prefix_of(b)))
        .map(|m| elems.iter().copied().filter(|b| b.is_prefix_of(m)).collect())
        .collect();
    chains.sort();
    chains.dedup();
    let mut antichains = maximal_antichains(&elems);
    antichains.sort();
    antichains.dedup();

    let mut pieces: Vec<Vec<Node>> = chains;
    let chain_count = pieces.len();
    pieces.extend(antichains);
    let masks: Vec<u128> = pieces.iter().map(|p| to_mask(p)).collect();
    let full = (0..elems.len()).fold(0u128, |m, i| m | 1 << i);
    let chosen = min_cover_indices(&masks, full);

    let mut out_chains = Vec::new();
    let mut out_antichains = Vec::new();
    for i in chosen {
        if i < chain_count {
            out_chains.push(pieces[i].clone());
        } else {
            out_antichains.push(pieces[i].clone());
        }
    }
    (out_chains, out_antichains)
}

// ---------------------------------------------------------------------------
// The formula ingredients
// ---------------------------------------------------------------------------

/// `Γ(x, A) = { x↾m : m ∈ A }` for a branch `x` and a set of levels `A`.
pub fn gamma(x: &Node, levels: &BTreeSet<usize>) -> BTreeSet<Node> {
    levels
        .iter()
        .filter(|&&m| m <= x.len)
        .map(|&m| x.prefix(m))
        .collect()
}

/// The first at most `k` elements of `x ∩ f⁻¹(n)` for every `n`, as a
/// set of levels. Levels outside `f`'s domain are ignored.
pub fn phi_k(f: &[usize], x: &BTreeSet<usize>, k: usize) -> BTreeSet<usize> {
    let mut taken: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = BTreeSet::new();
    for &m in x.iter().filter(|&&m| m < f.len()) {
        let cnt = taken.entry(f[m]).or_insert(0);
        if *cnt < k {
            *cnt += 1;
            out.insert(m);
        }
    }
    out
}

/// `η_n(f) = f⁻¹({1..n})` as a set of levels.
pub fn eta_n(f: &[usize], n: usize) -> BTreeSet<usize> {
    f.iter()
        .enumerate()
        .filter(|&(_, &v)| 1 <= v && v <= n)
        .map(|(m, _)| m)
        .collect()
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

fn validate_nodes(a: &BTreeSet<Node>, d: usize) -> Result<()> {
    if let Some(bad) = a.iter().find(|n| n.len > d) {
        return Err(ForgeError::InvalidArgument(format!(
            "node {bad} exceeds depth {d}"
        )));
    }
    Ok(())
}

/// The decomposition used by the membership formula: depth-`d` nodes
/// (the stand-ins for branches) are routed to an extra antichain, since
/// the branch function has no fiber at level `d`; the rest is decomposed
/// minimally.
pub fn membership_decomposition(
    a: &BTreeSet<Node>,
    d: usize,
) -> (Vec<Vec<Node>>, Vec<Vec<Node>>) {
    let leaves: Vec<Node> = a.iter().copied().filter(|n| n.len == d).collect();
    let rest: BTreeSet<Node> = a.iter().copied().filter(|n| n.len < d).collect();
    let (chains, mut antichains) = chain_antichain_decompose(&rest);
    if !leaves.is_empty() {
        antichains.push(leaves);
    }
    (chains, antichains)
}

/// Evaluate the membership formula at parameter `n`: every antichain of
/// the decomposition covers itself, and each chain must lie inside
/// `Γ(x, φ_n(c(x), levels) ∪ η_n(c(x)))` for its leftmost branch
/// extension `x`. Monotone in `n` and true for every `A` once
/// `n > depth`.
pub fn ic_membership(a: &BTreeSet<Node>, p: &ICPresentation, n: usize) -> Result<bool> {
    validate_nodes(a, p.depth)?;
    let (chains, antichains) = membership_decomposition(a, p.depth);
    let mut covered: BTreeSet<Node> = antichains.into_iter().flatten().collect();
    for chain in &chains {
        let top = *chain.last().unwrap();
        let x = top.leftmost_extension(p.depth);
        let f = p.c.level_map(x.val);
        let levels: BTreeSet<usize> = chain.iter().map(|s| s.len).collect();
        let mut l = phi_k(f, &levels, n);
        l.extend(eta_n(f, n));
        covered.extend(gamma(&x, &l));
    }
    Ok(a.iter().all(|s| covered.contains(s)))
}

/// The least `n` at which the formula holds, together with the chain and
/// antichain counts of the decomposition it evaluates. Always at most
/// `depth + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipGrade {
    pub min_n: usize,
    pub chain_count: usize,
    pub antichain_count: usize,
}

pub fn ic_min_grade(a: &BTreeSet<Node>, p: &ICPresentation) -> Result<MembershipGrade> {
    let (chains, antichains) = membership_decomposition(a, p.depth);
    for n in 0..=p.depth + 1 {
        if ic_membership(a, p, n)? {
            return Ok(MembershipGrade {
                min_n: n,
                chain_count: chains.len(),
                antichain_count: antichains.len(),
            });
        }
    }
    unreachable!("formula saturates at n = depth + 1");
}

// ---------------------------------------------------------------------------
// The explicit generator oracle
// ---------------------------------------------------------------------------

/// True iff `piece` fits inside a single generator: an antichain, a
/// per-branch fiber level set, or a per-branch fiber transversal.
pub fn is_single_generator(piece: &BTreeSet<Node>, p: &ICPresentation) -> Result<bool> {
    validate_nodes(piece, p.depth)?;
    if piece.is_empty() {
        return Ok(true);
    }
    let elems: Vec<Node> = piece.iter().copied().collect();
    if is_antichain(&elems) {
        return Ok(true);
    }
    // classes (ii) and (iii) live along a single branch and below level d
    if elems.iter().any(|e| e.len >= p.depth) {
        return Ok(false);
    }
    let top = *elems.last().unwrap();
    if !elems.iter().all(|e| e.is_prefix_of(&top)) {
        return Ok(false);
    }
    let tail = p.depth - top.len;
    for ext in 0u32..1 << tail {
        let x_val = (top.val << tail) | ext;
        let f = p.c.level_map(x_val);
        let values: Vec<usize> = elems.iter().map(|e| f[e.len]).collect();
        // one fiber entirely
        if values.iter().all_equal() {
            return Ok(true);
        }
        // at most one element per fiber extends to a full transversal
        if values.iter().duplicates().next().is_none() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Minimal number of generators covering `A`, by exact search over the
/// single-generator subsets of `A`. Intended for small `A` (the subset
/// lattice of `A` is enumerated).
pub fn ic_cover_oracle(a: &BTreeSet<Node>, p: &ICPresentation) -> Result<usize> {
    validate_nodes(a, p.depth)?;
    if a.is_empty() {
        return Ok(0);
    }
    let elems: Vec<Node> = a.iter().copied().collect();
    let n = elems.len();
    if n > 12 {
        return Err(ForgeError::ScaleLimit(format!(
            "cover oracle limited to 12 elements, got {n}"
        )));
    }
    let mut masks = Vec::new();
    for mask in 1u32..(1 << n) {
        let sel: BTreeSet<Node> =
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elems[i]).collect();
        if is_single_generator(&sel, p)? {
            masks.push(u128::from(mask));
        }
    }
    let full = (1u128 << n) - 1;
    Ok(min_cover_indices(&masks, full).len())
}

// ---------------------------------------------------------------------------
// The selector
// ---------------------------------------------------------------------------

fn max_antichain_in(a: &BTreeSet<Node>, d: usize) -> BTreeSet<Node> {
    fn go(s: Node, d: usize, a: &BTreeSet<Node>) -> BTreeSet<Node> {
        let own: BTreeSet<Node> = if a.contains(&s) {
            std::iter::once(s).collect()
        } else {
            BTreeSet::new()
        };
        if s.len == d {
            return own;
        }
        let l = go(Node { len: s.len + 1, val: s.val << 1 }, d, a);
        let r = go(Node { len: s.len + 1, val: (s.val << 1) | 1 }, d, a);
        let mut both = l;
        both.extend(r);
        if both.len() >= own.len() {
            both
        } else {
            own
        }
    }
    go(Node::root(), d, a)
}

/// Pick the largest grade-1 piece of `A` among: the exact maximum
/// antichain, and per branch the largest fiber class and the fiber
/// transversal of `A`'s trace. Antichains win ties.
pub fn ic_selector(a: &BTreeSet<Node>, p: &ICPresentation) -> Result<BTreeSet<Node>> {
    validate_nodes(a, p.depth)?;
    if a.len() < 2 {
        return Err(ForgeError::InvalidArgument(
            "selector needs at least 2 nodes".into(),
        ));
    }
    let mut best = max_antichain_in(a, p.depth);
    for x_val in 0..1u32 << p.depth {
        let x = Node { len: p.depth, val: x_val };
        let trace: Vec<Node> = a
            .iter()
            .copied()
            .filter(|s| s.len < p.depth && s.is_prefix_of(&x))
            .collect();
        let f = p.c.level_map(x_val);
        let mut fibers: BTreeMap<usize, Vec<Node>> = BTreeMap::new();
        for &s in &trace {
            fibers.entry(f[s.len]).or_default().push(s);
        }
        if let Some(fiber) = fibers.values().max_by_key(|v| v.len()) {
            if fiber.len() > best.len() {
                best = fiber.iter().copied().collect();
            }
        }
        let transversal: BTreeSet<Node> =
            fibers.values().map(|v| v[0]).collect();
        if transversal.len() > best.len() {
            best = transversal;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Block plans and H
// ---------------------------------------------------------------------------

/// Strictly increasing block sizes; beyond the configured prefix the
/// sizes keep growing by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    sizes: Vec<usize>,
}

impl BlockPlan {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes[0] == 0 {
            return Err(ForgeError::InvalidArgument(
                "block plan needs positive sizes".into(),
            ));
        }
        if !sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(ForgeError::InvalidArgument(
                "block sizes must strictly increase".into(),
            ));
        }
        Ok(BlockPlan { sizes })
    }

    /// Sizes 1, 2, 3, ...
    pub fn unit() -> Self {
        BlockPlan { sizes: vec![1] }
    }

    pub fn block_size(&self, j: usize) -> usize {
        if j < self.sizes.len() {
            self.sizes[j]
        } else {
            self.sizes[self.sizes.len() - 1] + (j - self.sizes.len() + 1)
        }
    }
}

/// Enumerate `A` increasingly and assign the `j`-th block of
/// `plan.block_size(j)` consecutive elements the value `j`.
pub fn build_h(a: &BTreeSet<usize>, plan: &BlockPlan) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    let mut block = 0usize;
    let mut left = plan.block_size(0);
    for &x in a {
        if left == 0 {
            block += 1;
            left = plan.block_size(block);
        }
        out.insert(x, block);
        left -= 1;
    }
    out
}

// ---------------------------------------------------------------------------
// The anti-reduction construction
// ---------------------------------------------------------------------------

/// A total map from tree nodes (heap-indexed) into `[0, ground_size)`,
/// the finite stand-in for a coded function on node sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCode {
    pub depth: usize,
    pub ground_size: usize,
    map: Vec<usize>,
}

impl FunctionCode {
    pub fn new(depth: usize, ground_size: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != ic_ground_size(depth) {
            return Err(ForgeError::PartialMap(map.len()));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= ground_size) {
            return Err(ForgeError::InvalidArgument(format!(
                "code value {v} outside ground [0,{ground_size})"
            )));
        }
        Ok(FunctionCode { depth, ground_size, map })
    }

    pub fn constant(depth: usize, ground_size: usize, v: usize) -> Result<Self> {
        FunctionCode::new(depth, ground_size, vec![v; ic_ground_size(depth)])
    }

    pub fn value(&self, node: &Node) -> usize {
        self.map[node.index()]
    }
}

/// The selected level set of a branch: push the chain of `x` through the
/// code, select, and pull back the levels whose image was kept. Level
/// `d` is outside the branch function's domain and is dropped.
pub fn theta(x: &Node, code: &FunctionCode, s: &FiniteSelector) -> BTreeSet<usize> {
    let d = code.depth;
    let mut image = Subset::empty(code.ground_size);
    for m in 0..=d {
        image.insert(code.value(&x.prefix(m)));
    }
    let selected = s.select(&image);
    (0..d)
        .filter(|&m| selected.contains(code.value(&x.prefix(m))))
        .collect()
}

/// Build the branch function `c(x) = H(Θ(x))`: selected levels get their
/// block value, unselected levels get the sink value 0 (which the
/// `η_n` part never covers).
pub fn anti_reduction_c(
    s: &FiniteSelector,
    code: &FunctionCode,
    plan: &BlockPlan,
) -> Result<BranchFunction> {
    let d = code.depth;
    let mut maps = Vec::with_capacity(1 << d);
    for x_val in 0..1u32 << d {
        let x = Node { len: d, val: x_val };
        let th = theta(&x, code, s);
        let h = build_h(&th, plan);
        maps.push((0..d).map(|m| h.get(&m).copied().unwrap_or(0)).collect());
    }
    BranchFunction::new(d, maps)
}

/// The witness report of a defeating run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefeatReport {
    pub branch: Node,
    pub theta: BTreeSet<usize>,
    pub witness: BTreeSet<Node>,
    pub selected: Subset,
    pub selected_grade_ok: bool,
    /// Largest grade at which the witness refutes membership.
    pub max_defeated: usize,
    pub requested_grade: usize,
}

/// Build `c` from the selector and the code, take the branch with the
/// largest selected level set (lexicographically least on ties), and
/// check that its prefix set along the selected levels refutes the
/// membership formula at grade `k` while the selected image stays
/// grade-bounded in the source ideal.
pub fn defeat_reduction_demo(
    code: &FunctionCode,
    ideal: &GradedIdeal,
    s: &FiniteSelector,
    k: usize,
    plan: &BlockPlan,
) -> Result<DefeatReport> {
    if code.ground_size != ideal.ground.size {
        return Err(ForgeError::GroundMismatch(code.ground_size, ideal.ground.size));
    }
    let d = code.depth;
    let c = anti_reduction_c(s, code, plan)?;
    let p = ICPresentation::new(d, c)?;

    let mut best: Option<(Node, BTreeSet<usize>)> = None;
    for x_val in 0..1u32 << d {
        let x = Node { len: d, val: x_val };
        let th = theta(&x, code, s);
        if best.as_ref().map_or(true, |(_, b)| th.len() > b.len()) {
            best = Some((x, th));
        }
    }
    let (x, th) = best.unwrap();
    let witness = gamma(&x, &th);
    if witness.is_empty() {
        return Err(ForgeError::ScaleLimit(
            "selector kept no level on any branch".into(),
        ));
    }

    let mut image = Subset::empty(code.ground_size);
    for m in 0..=d {
        image.insert(code.value(&x.prefix(m)));
    }
    let selected = s.select(&image);
    let selected_grade_ok = ideal.is_member_grade(&selected, s.grade_bound)?;

    let min_n = ic_min_grade(&witness, &p)?.min_n;
    if min_n == 0 {
        return Err(ForgeError::ScaleLimit(
            "witness is already covered at grade 0".into(),
        ));
    }
    let max_defeated = min_n - 1;
    if k > max_defeated {
        return Err(ForgeError::ScaleLimit(format!(
            "witness defeats grades up to {max_defeated}, requested {k}"
        )));
    }
    Ok(DefeatReport {
        branch: x,
        theta: th,
        witness,
        selected,
        selected_grade_ok,
        max_defeated,
        requested_grade: k,
    })
}

/// The selector used by the demos: the identity on sets that are already
/// grade-bounded, otherwise the largest single-generator trace.
pub fn identity_on_ideal_selector(ideal: GradedIdeal, grade_bound: usize) -> FiniteSelector {
    let size = ideal.ground.size;
    FiniteSelector::new(
        format!("identity on {}", ideal.name),
        grade_bound,
        move |a: &Subset| {
            if ideal.is_member_grade(a, grade_bound).unwrap_or(false) {
                return a.clone();
            }
            ideal
                .generators
                .iter()
                .map(|g| a.intersect(g))
                .max_by_key(|t| t.len())
                .unwrap_or_else(|| Subset::empty(a.ground_size()))
        },
        move |_| size,
        |_| 0,
    )
}
