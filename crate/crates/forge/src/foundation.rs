//! Ground types shared by every module: finite sets as bit-vectors,
//! finitely-branching trees, exact dyadic rationals, and graded ideal
//! presentations with an exact cover-number solver.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Shared error type for the whole workbench.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ForgeError {
    #[error("ground mismatch: set over [0,{0}) against ideal over [0,{1})")]
    GroundMismatch(usize, usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("empty generator family")]
    EmptyFamily,
    #[error("generator family has {got} members, cap is {cap}")]
    TooManyGenerators { got: usize, cap: usize },
    #[error("singleton {{{0}}} is not contained in any generator")]
    UncoveredSingleton(usize),
    #[error("map is not total: position {0} unassigned")]
    PartialMap(usize),
    #[error("code is not downward closed (witness branch {0:#x})")]
    NotDownwardClosed(u64),
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("clopen sets at different resolutions")]
    ResolutionMismatch,
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
    #[error("unknown ideal `{0}`")]
    UnknownIdeal(String),
    #[error("selector violated its declared decision depth at point {0}")]
    ModulusViolation(usize),
    #[error("chain has no depth-{0} branch extension")]
    NoBranchExtension(usize),
    #[error("invalid submeasure: {0}")]
    InvalidSubmeasure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, ForgeError>;

// ---------------------------------------------------------------------------
// Ground sets and subsets
// ---------------------------------------------------------------------------

/// A finite ground set `[0, N)` with a display label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    pub size: usize,
    pub label: String,
}

impl GroundSet {
    pub fn new(size: usize, label: impl Into<String>) -> Result<Self> {
        if size == 0 {
            return Err(ForgeError::InvalidArgument(
                "ground set must be nonempty".into(),
            ));
        }
        Ok(GroundSet { size, label: label.into() })
    }
}

/// A subset of `[0, N)` stored as a bit-vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    size: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(size: usize) -> Self {
        Subset { size, words: vec![0; size.div_ceil(64)] }
    }

    pub fn full(size: usize) -> Self {
        let mut s = Self::empty(size);
        for i in 0..size {
            s.insert(i);
        }
        s
    }

    pub fn singleton(size: usize, elem: usize) -> Self {
        let mut s = Self::empty(size);
        s.insert(elem);
        s
    }

    pub fn from_elems(size: usize, elems: &[usize]) -> Self {
        let mut s = Self::empty(size);
        for &e in elems {
            s.insert(e);
        }
        s
    }

    /// Low 64 elements as a mask; only valid for grounds of size <= 64.
    pub fn as_mask(&self) -> u64 {
        debug_assert!(self.size <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_mask(size: usize, mask: u64) -> Self {
        debug_assert!(size <= 64);
        let mut s = Self::empty(size);
        s.words[0] = mask & mask_low(size);
        s
    }

    pub fn ground_size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, elem: usize) -> bool {
        elem < self.size && self.words[elem / 64] >> (elem % 64) & 1 == 1
    }

    pub fn insert(&mut self, elem: usize) {
        assert!(elem < self.size, "element {elem} outside ground [0,{})", self.size);
        self.words[elem / 64] |= 1 << (elem % 64);
    }

    pub fn remove(&mut self, elem: usize) {
        if elem < self.size {
            self.words[elem / 64] &= !(1 << (elem % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Subset { size: self.size, words }
    }

    pub fn intersect(&self, other: &Subset) -> Subset {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Subset { size: self.size, words }
    }

    pub fn minus(&self, other: &Subset) -> Subset {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        Subset { size: self.size, words }
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&i| self.contains(i))
    }

    pub fn elems(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_elem(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Restriction to `[0, cutoff)`.
    pub fn below(&self, cutoff: usize) -> Subset {
        let mut s = self.clone();
        for i in cutoff..self.size {
            s.remove(i);
        }
        s
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

fn mask_low(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

// ---------------------------------------------------------------------------
// Finitely branching trees
// ---------------------------------------------------------------------------

/// A prefix-closed set of sequences over a finite alphabet, with an
/// explicit depth bound. Children of every node are explicitly enumerable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    nodes: BTreeSet<Vec<u8>>,
    children: BTreeMap<Vec<u8>, BTreeSet<u8>>,
    depth: usize,
}

impl Tree {
    pub fn new(nodes: BTreeSet<Vec<u8>>, depth: usize) -> Result<Self> {
        let mut all = nodes;
        all.insert(Vec::new());
        for node in &all {
            if node.len() > depth {
                return Err(ForgeError::MalformedTree(format!(
                    "node of length {} exceeds depth {}",
                    node.len(),
                    depth
                )));
            }
        }
        // prefix closure check
        for node in &all {
            if !node.is_empty() {
                let parent = node[..node.len() - 1].to_vec();
                if !all.contains(&parent) {
                    return Err(ForgeError::MalformedTree(format!(
                        "missing parent of {node:?}"
                    )));
                }
            }
        }
        let mut children: BTreeMap<Vec<u8>, BTreeSet<u8>> = BTreeMap::new();
        for node in &all {
            if !node.is_empty() {
                children
                    .entry(node[..node.len() - 1].to_vec())
                    .or_default()
                    .insert(node[node.len() - 1]);
            }
        }
        Ok(Tree { nodes: all, children, depth })
    }

    pub fn from_branches(branches: &[Vec<u8>], depth: usize) -> Result<Self> {
        let mut nodes = BTreeSet::new();
        for b in branches {
            for i in 0..=b.len() {
                nodes.insert(b[..i].to_vec());
            }
        }
        Tree::new(nodes, depth)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn contains(&self, node: &[u8]) -> bool {
        self.nodes.contains(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.nodes.iter()
    }

    pub fn children_of(&self, node: &[u8]) -> Vec<u8> {
        self.children
            .get(node)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    /// The lexicographically least branch reaching the full depth bound,
    /// or `None` when no branch reaches it.
    pub fn leftmost_branch(&self) -> Option<Vec<u8>> {
        let mut path = Vec::new();
        if self.dfs_leftmost(&mut path) {
            Some(path)
        } else {
            None
        }
    }

    fn dfs_leftmost(&self, path: &mut Vec<u8>) -> bool {
        if path.len() == self.depth {
            return true;
        }
        for sym in self.children_of(path) {
            path.push(sym);
            if self.dfs_leftmost(path) {
                return true;
            }
            path.pop();
        }
        false
    }

    /// All branches that reach the full depth, in lexicographic order.
    pub fn full_branches(&self) -> Vec<Vec<u8>> {
        self.nodes
            .iter()
            .filter(|n| n.len() == self.depth)
            .cloned()
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Dyadic rationals
// ---------------------------------------------------------------------------

/// A non-negative dyadic rational `num / 2^exp`, stored in reduced form
/// (numerator odd or zero). All arithmetic and comparison is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: u128, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    /// `1 / 2^exp`.
    pub fn half_power(exp: u32) -> Self {
        Dyadic { num: 1, exp }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.num % 2 == 0 && self.exp > 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let num = (self.num << (exp - self.exp)) + (other.num << (exp - other.exp));
        Dyadic::new(num, exp)
    }

    /// Exact subtraction; panics if `other > self`.
    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let exp = self.exp.max(other.exp);
        let a = self.num << (exp - self.exp);
        let b = other.num << (exp - other.exp);
        assert!(a >= b, "dyadic subtraction underflow");
        Dyadic::new(a - b, exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.max(other.exp);
        let a = self.num << (exp - self.exp);
        let b = other.num << (exp - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

// ---------------------------------------------------------------------------
// Graded ideals and the cover-number solver
// ---------------------------------------------------------------------------

/// Cover number of a set: minimal count of generators whose union
/// contains it, or `Infinite` when no cover exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverNumber {
    Finite(usize),
    Infinite,
}

impl CoverNumber {
    pub fn le(&self, k: usize) -> bool {
        match self {
            CoverNumber::Finite(n) => *n <= k,
            CoverNumber::Infinite => false,
        }
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            CoverNumber::Finite(n) => Some(*n),
            CoverNumber::Infinite => None,
        }
    }
}

impl fmt::Display for CoverNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverNumber::Finite(n) => write!(f, "{n}"),
            CoverNumber::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// A finite ground set with a generator family; membership is graded by
/// cover number. The "contains fin" convention (every singleton inside
/// some generator) is enforced at construction unless the caller opts out
/// with [`GradedIdeal::new_partial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedIdeal {
    pub ground: GroundSet,
    pub generators: Vec<Subset>,
    pub name: String,
}

/// Generator cap keeping the exact solver tractable.
pub const MAX_GENERATORS: usize = 128;

impl GradedIdeal {
    pub fn new(ground: GroundSet, generators: Vec<Subset>, name: impl Into<String>) -> Result<Self> {
        let ideal = Self::new_partial(ground, generators, name)?;
        for i in 0..ideal.ground.size {
            if !ideal.generators.iter().any(|g| g.contains(i)) {
                return Err(ForgeError::UncoveredSingleton(i));
            }
        }
        Ok(ideal)
    }

    /// Constructor skipping the singleton-coverage check.
    pub fn new_partial(
        ground: GroundSet,
        generators: Vec<Subset>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(ForgeError::EmptyFamily);
        }
        if generators.len() > MAX_GENERATORS {
            return Err(ForgeError::TooManyGenerators {
                got: generators.len(),
                cap: MAX_GENERATORS,
            });
        }
        for g in &generators {
            if g.ground_size() != ground.size {
                return Err(ForgeError::GroundMismatch(g.ground_size(), ground.size));
            }
        }
        Ok(GradedIdeal { ground, generators, name: name.into() })
    }

    pub fn cover_number(&self, a: &Subset) -> Result<CoverNumber> {
        CoverSolver::new(self).cover_number(a)
    }

    /// `cover_number(a) <= k`.
    pub fn is_member_grade(&self, a: &Subset, k: usize) -> Result<bool> {
        Ok(self.cover_number(a)?.le(k))
    }
}

/// Exact minimal set-cover solver with per-instance memoization.
/// Reusable across queries against the same ideal (the memo is keyed on
/// the uncovered residual, which is shared between queries).
pub struct CoverSolver<'a> {
    ideal: &'a GradedIdeal,
    covers_elem: Vec<Vec<usize>>,
    memo: HashMap<Vec<u64>, CoverNumber>,
}

impl<'a> CoverSolver<'a> {
    pub fn new(ideal: &'a GradedIdeal) -> Self {
        let n = ideal.ground.size;
        let mut covers_elem = vec![Vec::new(); n];
        for (gi, g) in ideal.generators.iter().enumerate() {
            for e in g.iter() {
                covers_elem[e].push(gi);
            }
        }
        CoverSolver { ideal, covers_elem, memo: HashMap::new() }
    }

    pub fn cover_number(&mut self, a: &Subset) -> Result<CoverNumber> {
        if a.ground_size() != self.ideal.ground.size {
            return Err(ForgeError::GroundMismatch(a.ground_size(), self.ideal.ground.size));
        }
        Ok(self.min_cover(a.clone()))
    }

    pub fn is_member_grade(&mut self, a: &Subset, k: usize) -> Result<bool> {
        Ok(self.cover_number(a)?.le(k))
    }

    fn min_cover(&mut self, uncovered: Subset) -> CoverNumber {
        if uncovered.is_empty() {
            return CoverNumber::Finite(0);
        }
        let key = uncovered.clone();
        if let Some(&cached) = self.memo.get(&key.words) {
            return cached;
        }
        // branch on the uncovered element with fewest covering generators
        let pivot = uncovered
            .iter()
            .min_by_key(|&e| self.covers_elem[e].len())
            .unwrap();
        let candidates = self.covers_elem[pivot].clone();
        let mut best = CoverNumber::Infinite;
        for gi in candidates {
            let rest = uncovered.minus(&self.ideal.generators[gi]);
            if let CoverNumber::Finite(sub) = self.min_cover(rest) {
                let total = sub + 1;
                match best {
                    CoverNumber::Finite(b) if b <= total => {}
                    _ => best = CoverNumber::Finite(total),
                }
            }
        }
        self.memo.insert(key.words, best);
        best
    }
}

// ---------------------------------------------------------------------------
// Product-tree cover search (Lemma 1 finitized)
// ---------------------------------------------------------------------------

/// Find `y_1..y_n` in `family` with `x` contained in their union, by
/// walking the product tree of characteristic-vector prefixes level by
/// level and taking its leftmost full branch. Returns `None` when the
/// tree has no full branch.
pub fn find_cover(x: &Subset, family: &[Subset], n: usize) -> Result<Option<Vec<Subset>>> {
    if n == 0 {
        return Err(ForgeError::BadArity("find_cover needs n >= 1".into()));
    }
    let size = x.ground_size();
    for k in family {
        if k.ground_size() != size {
            return Err(ForgeError::GroundMismatch(k.ground_size(), size));
        }
    }
    if family.is_empty() {
        return Ok(None);
    }
    // State: for each coordinate, the set of family indices whose
    // characteristic vector is consistent with the bits chosen so far,
    // plus the chosen bits.
    let init_cands: Vec<Vec<usize>> = vec![(0..family.len()).collect(); n];
    let mut bits: Vec<Vec<bool>> = vec![Vec::new(); n];
    if dfs_cover(x, family, size, &mut bits, &init_cands) {
        let result = bits
            .iter()
            .map(|b| {
                let elems: Vec<usize> =
                    b.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i).collect();
                Subset::from_elems(size, &elems)
            })
            .collect();
        Ok(Some(result))
    } else {
        Ok(None)
    }
}

fn dfs_cover(
    x: &Subset,
    family: &[Subset],
    size: usize,
    bits: &mut Vec<Vec<bool>>,
    cands: &[Vec<usize>],
) -> bool {
    let level = bits[0].len();
    if level == size {
        return true;
    }
    let n = bits.len();
    // enumerate bit tuples lexicographically, first coordinate most
    // significant, 0 before 1
    for tuple in 0..(1u32 << n) {
        let choice: Vec<bool> = (0..n).map(|i| tuple >> (n - 1 - i) & 1 == 1).collect();
        // coverage: if x contains `level`, some coordinate must choose 1
        if x.contains(level) && !choice.iter().any(|&b| b) {
            continue;
        }
        let mut next_cands = Vec::with_capacity(n);
        let mut ok = true;
        for i in 0..n {
            let filtered: Vec<usize> = cands[i]
                .iter()
                .copied()
                .filter(|&fi| family[fi].contains(level) == choice[i])
                .collect();
            if filtered.is_empty() {
                ok = false;
                break;
            }
            next_cands.push(filtered);
        }
        if !ok {
            continue;
        }
        for i in 0..n {
            bits[i].push(choice[i]);
        }
        if dfs_cover(x, family, size, bits, &next_cands) {
            return true;
        }
        for b in bits.iter_mut() {
            b.pop();
        }
    }
    false
}
