//! Three codings of finite ideal presentations and the conversions
//! between them: compact codes (branch sets of a binary tree), coloring
//! sequences (simultaneously monochromatic sets), and lower-semicontinuous
//! submeasures.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::foundation::{
    Dyadic, ForgeError, GradedIdeal, GroundSet, Result, Subset, Tree,
};

// ---------------------------------------------------------------------------
// Compact codes
// ---------------------------------------------------------------------------

/// A finitely branching binary tree of depth `d`; each depth-`d` branch is
/// the characteristic vector of a subset of `[0, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactCode {
    depth: usize,
    branches: BTreeSet<u64>,
    tree: Tree,
}

impl CompactCode {
    pub fn from_branch_masks(depth: usize, masks: &[u64]) -> Result<Self> {
        if depth > 16 {
            return Err(ForgeError::ScaleLimit(format!(
                "compact code depth {depth} exceeds 16"
            )));
        }
        if masks.is_empty() {
            return Err(ForgeError::EmptyFamily);
        }
        let branches: BTreeSet<u64> = masks.iter().copied().collect();
        let branch_vecs: Vec<Vec<u8>> = branches
            .iter()
            .map(|&m| (0..depth).map(|i| (m >> i & 1) as u8).collect())
            .collect();
        let tree = Tree::from_branches(&branch_vecs, depth)?;
        Ok(CompactCode { depth, branches, tree })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn branch_masks(&self) -> &BTreeSet<u64> {
        &self.branches
    }

    pub fn codes_subset(&self, mask: u64) -> bool {
        self.branches.contains(&mask)
    }

    /// The coded subsets are closed under taking subsets.
    pub fn is_downward_closed(&self) -> bool {
        self.branches.iter().all(|&m| {
            (0..self.depth).all(|i| m >> i & 1 == 0 || self.branches.contains(&(m & !(1 << i))))
        })
    }

    pub fn contains_all_singletons(&self) -> bool {
        (0..self.depth).all(|i| self.branches.contains(&(1u64 << i)))
    }
}

/// The graded ideal whose generators are the branches of `code`; grade-n
/// membership is exactly membership in the n-fold union-closure of the
/// branch set (downward closure is implicit in covering semantics).
/// Only maximal branches are kept as generators; this changes no cover
/// number.
pub fn unions_down(code: &CompactCode, n: usize) -> Result<GradedIdeal> {
    if n == 0 {
        return Err(ForgeError::BadArity("unions_down needs n >= 1".into()));
    }
    let masks: Vec<u64> = code.branches.iter().copied().collect();
    let maximal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && m & !o == 0))
        .collect();
    let gens: Vec<Subset> = if maximal.is_empty() {
        vec![Subset::empty(code.depth)]
    } else {
        maximal
            .iter()
            .map(|&m| Subset::from_mask(code.depth, m))
            .collect()
    };
    let ground = GroundSet::new(code.depth.max(1), "code ground")?;
    GradedIdeal::new_partial(ground, gens, format!("unions-down(grade {n})"))
}

/// Code whose branch set is exactly the downward closure of the given
/// generator family. The paper's marker construction is replaced by
/// direct enumeration of the closure, which is exact at finite depth.
pub fn code_from_generators(gens: &[Subset]) -> Result<CompactCode> {
    if gens.is_empty() {
        return Err(ForgeError::EmptyFamily);
    }
    let n = gens[0].ground_size();
    if n > 16 {
        return Err(ForgeError::ScaleLimit(format!("ground size {n} exceeds 16")));
    }
    for g in gens {
        if g.ground_size() != n {
            return Err(ForgeError::GroundMismatch(g.ground_size(), n));
        }
    }
    for i in 0..n {
        if !gens.iter().any(|g| g.contains(i)) {
            return Err(ForgeError::UncoveredSingleton(i));
        }
    }
    let mut branches = BTreeSet::new();
    for g in gens {
        let m = g.as_mask();
        // enumerate all submasks of m (including 0 and m)
        let mut sub = m;
        loop {
            branches.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & m;
        }
    }
    let masks: Vec<u64> = branches.into_iter().collect();
    CompactCode::from_branch_masks(n, &masks)
}

// ---------------------------------------------------------------------------
// Colorings
// ---------------------------------------------------------------------------

/// A total coloring of k-element subsets with `colors` colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiColoring {
    Table { arity: usize, colors: usize, table: std::collections::BTreeMap<u64, u8> },
    /// `d_n` built from code membership and the congruence coloring:
    /// 1 on coded subsets, otherwise 0 or 2 by `r_n`.
    CodeMembership { arity: usize, branches: BTreeSet<u64> },
}

impl MultiColoring {
    pub fn arity(&self) -> usize {
        match self {
            MultiColoring::Table { arity, .. } => *arity,
            MultiColoring::CodeMembership { arity, .. } => *arity,
        }
    }

    pub fn colors(&self) -> usize {
        match self {
            MultiColoring::Table { colors, .. } => *colors,
            MultiColoring::CodeMembership { .. } => 3,
        }
    }

    /// `elems` must be a strictly increasing slice of length `arity()`.
    pub fn eval(&self, elems: &[usize]) -> u8 {
        debug_assert_eq!(elems.len(), self.arity());
        match self {
            MultiColoring::Table { table, .. } => {
                let mask = elems.iter().fold(0u64, |m, &e| m | 1 << e);
                *table.get(&mask).expect("coloring table not total")
            }
            MultiColoring::CodeMembership { arity, branches } => {
                let mask = elems.iter().fold(0u64, |m, &e| m | 1 << e);
                if branches.contains(&mask) {
                    1
                } else if congruent_mod(elems, *arity) {
                    2
                } else {
                    0
                }
            }
        }
    }

    pub fn is_monochromatic_on(&self, a: &Subset) -> bool {
        let elems = a.elems();
        if elems.len() < self.arity() {
            return true;
        }
        let mut seen: Option<u8> = None;
        for combo in elems.iter().copied().combinations(self.arity()) {
            let c = self.eval(&combo);
            match seen {
                None => seen = Some(c),
                Some(prev) if prev != c => return false,
                _ => {}
            }
        }
        true
    }

    /// The color taken on `a` when monochromatic and `|a| >= arity`.
    pub fn constant_color_on(&self, a: &Subset) -> Option<u8> {
        let elems = a.elems();
        if elems.len() < self.arity() {
            return None;
        }
        let first = elems[..self.arity()].to_vec();
        if self.is_monochromatic_on(a) {
            Some(self.eval(&first))
        } else {
            None
        }
    }
}

fn congruent_mod(elems: &[usize], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    elems.windows(2).all(|w| w[0] % n == w[1] % n)
}

/// A total 2-coloring of k-element subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoColoring {
    Table { arity: usize, table: std::collections::BTreeMap<u64, u8> },
    Constant { arity: usize, color: u8 },
    /// `r_n`: 1 exactly on tuples congruent modulo the arity.
    Congruence { modulus: usize },
    /// `c_i(a) = 1` iff the base coloring takes color `i` on `a`.
    ColorIndicator { base: Box<MultiColoring>, color: u8 },
    /// Evaluate the base coloring on the least `base.arity()` elements.
    PadArity { base: Box<TwoColoring>, arity: usize },
}

impl TwoColoring {
    pub fn arity(&self) -> usize {
        match self {
            TwoColoring::Table { arity, .. } => *arity,
            TwoColoring::Constant { arity, .. } => *arity,
            TwoColoring::Congruence { modulus } => *modulus,
            TwoColoring::ColorIndicator { base, .. } => base.arity(),
            TwoColoring::PadArity { arity, .. } => *arity,
        }
    }

    pub fn eval(&self, elems: &[usize]) -> u8 {
        debug_assert_eq!(elems.len(), self.arity());
        match self {
            TwoColoring::Table { table, .. } => {
                let mask = elems.iter().fold(0u64, |m, &e| m | 1 << e);
                *table.get(&mask).expect("coloring table not total")
            }
            TwoColoring::Constant { color, .. } => *color,
            TwoColoring::Congruence { modulus } => {
                u8::from(congruent_mod(elems, *modulus))
            }
            TwoColoring::ColorIndicator { base, color } => {
                u8::from(base.eval(elems) == *color)
            }
            TwoColoring::PadArity { base, .. } => base.eval(&elems[..base.arity()]),
        }
    }

    pub fn is_monochromatic_on(&self, a: &Subset) -> bool {
        let elems = a.elems();
        if elems.len() < self.arity() {
            return true;
        }
        let mut seen: Option<u8> = None;
        for combo in elems.iter().copied().combinations(self.arity()) {
            let c = self.eval(&combo);
            match seen {
                None => seen = Some(c),
                Some(prev) if prev != c => return false,
                _ => {}
            }
        }
        true
    }
}

/// The congruence coloring `r_n`: 1 iff all members of the tuple are
/// congruent modulo `n`.
pub fn congruence_coloring(n: usize) -> Result<TwoColoring> {
    if n == 0 {
        return Err(ForgeError::BadArity("congruence modulus must be >= 1".into()));
    }
    Ok(TwoColoring::Congruence { modulus: n })
}

/// Split an m-color coloring into m two-colorings with the same
/// monochromatic sets: `c_i(a) = 1` iff `c(a) = i`.
pub fn reduce_colors(c: &MultiColoring) -> Vec<TwoColoring> {
    (0..c.colors())
        .map(|i| TwoColoring::ColorIndicator { base: Box::new(c.clone()), color: i as u8 })
        .collect()
}

/// Raise the arity of a 2-coloring without changing which sets of size
/// >= m are monochromatic: evaluate on the least k elements.
pub fn pad_arity(d: &TwoColoring, m: usize) -> Result<TwoColoring> {
    if m < d.arity() {
        return Err(ForgeError::BadArity(format!(
            "cannot pad arity {} down to {m}",
            d.arity()
        )));
    }
    if m == d.arity() {
        return Ok(d.clone());
    }
    Ok(TwoColoring::PadArity { base: Box::new(d.clone()), arity: m })
}

/// A finite sequence of 2-colorings over a common ground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSequence {
    pub ground: GroundSet,
    pub colorings: Vec<TwoColoring>,
}

impl ColoringSequence {
    pub fn arity_bound(&self) -> usize {
        self.colorings.iter().map(|c| c.arity()).max().unwrap_or(0)
    }
}

/// True iff every coloring of the sequence is constant on the tuples of
/// its arity drawn from `a`.
pub fn is_simultaneously_monochromatic(a: &Subset, seq: &ColoringSequence) -> bool {
    seq.colorings.iter().all(|c| c.is_monochromatic_on(a))
}

/// Result of converting a compact code to colorings: the intermediate
/// 3-colorings `d_n`, the reduced 2-coloring sequence, and the computed
/// size bound above which simultaneous monochromaticity coincides with
/// being coded.
#[derive(Debug, Clone)]
pub struct CodeColorings {
    pub multis: Vec<MultiColoring>,
    pub sequence: ColoringSequence,
    pub size_bound: usize,
}

/// Colorings whose simultaneously monochromatic sets of size at least the
/// returned bound are exactly the coded subsets.
pub fn colorings_from_code(code: &CompactCode) -> Result<CodeColorings> {
    if !code.is_downward_closed() {
        let witness = code
            .branch_masks()
            .iter()
            .copied()
            .find(|&m| {
                (0..code.depth())
                    .any(|i| m >> i & 1 == 1 && !code.codes_subset(m & !(1 << i)))
            })
            .unwrap_or(0);
        return Err(ForgeError::NotDownwardClosed(witness));
    }
    if !code.contains_all_singletons() {
        return Err(ForgeError::InvalidArgument(
            "code must contain all singletons".into(),
        ));
    }
    let d = code.depth();
    let mut multis = Vec::new();
    let mut colorings = Vec::new();
    for n in 1..=d {
        let dn = MultiColoring::CodeMembership {
            arity: n,
            branches: code.branch_masks().clone(),
        };
        colorings.extend(reduce_colors(&dn));
        multis.push(dn);
    }
    let ground = GroundSet::new(d, "code ground")?;
    let sequence = ColoringSequence { ground, colorings };
    // size bound: smallest s with  (|A| >= s  =>  sim-mono(A) <=> coded(A))
    let mut worst_mismatch = 0usize;
    for mask in 0..(1u64 << d) {
        let a = Subset::from_mask(d, mask);
        let mono = is_simultaneously_monochromatic(&a, &sequence);
        if mono != code.codes_subset(mask) {
            worst_mismatch = worst_mismatch.max(a.len() + 1);
        }
    }
    Ok(CodeColorings { multis, sequence, size_bound: worst_mismatch })
}

// ---------------------------------------------------------------------------
// Submeasures
// ---------------------------------------------------------------------------

/// An exact submeasure value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiValue {
    Finite(Dyadic),
    Infinite,
}

impl PhiValue {
    pub fn le(&self, bound: &Dyadic) -> bool {
        match self {
            PhiValue::Finite(d) => d <= bound,
            PhiValue::Infinite => false,
        }
    }

    pub fn add(&self, other: &PhiValue) -> PhiValue {
        match (self, other) {
            (PhiValue::Finite(a), PhiValue::Finite(b)) => PhiValue::Finite(a.add(b)),
            _ => PhiValue::Infinite,
        }
    }
}

impl PartialOrd for PhiValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (PhiValue::Finite(a), PhiValue::Finite(b)) => a.partial_cmp(b),
            (PhiValue::Finite(_), PhiValue::Infinite) => Some(std::cmp::Ordering::Less),
            (PhiValue::Infinite, PhiValue::Finite(_)) => Some(std::cmp::Ordering::Greater),
            (PhiValue::Infinite, PhiValue::Infinite) => Some(std::cmp::Ordering::Equal),
        }
    }
}

/// A lower-semicontinuous submeasure given by an explicit value table over
/// all subsets of `[0, N)`. The three axioms (null at empty, monotone,
/// subadditive) are checked exhaustively at construction for N <= 10.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LscSubmeasure {
    ground_size: usize,
    table: Vec<PhiValue>,
}

impl LscSubmeasure {
    pub fn from_table(ground_size: usize, table: Vec<PhiValue>) -> Result<Self> {
        if ground_size > 20 {
            return Err(ForgeError::ScaleLimit(format!(
                "submeasure ground size {ground_size} exceeds 20"
            )));
        }
        if table.len() != 1 << ground_size {
            return Err(ForgeError::InvalidSubmeasure(format!(
                "table has {} entries, expected {}",
                table.len(),
                1usize << ground_size
            )));
        }
        if table[0] != PhiValue::Finite(Dyadic::ZERO) {
            return Err(ForgeError::InvalidSubmeasure("phi(empty) != 0".into()));
        }
        // monotonicity via single-element removals
        for mask in 0..table.len() {
            for i in 0..ground_size {
                if mask >> i & 1 == 1 {
                    let sub = mask & !(1 << i);
                    if let Some(std::cmp::Ordering::Greater) =
                        table[sub].partial_cmp(&table[mask])
                    {
                        return Err(ForgeError::InvalidSubmeasure(format!(
                            "not monotone at mask {mask:#x}"
                        )));
                    }
                }
            }
        }
        if ground_size <= 10 {
            for a in 0..table.len() {
                for b in 0..table.len() {
                    let sum = table[a].add(&table[b]);
                    if let Some(std::cmp::Ordering::Greater) =
                        table[a | b].partial_cmp(&sum)
                    {
                        return Err(ForgeError::InvalidSubmeasure(format!(
                            "not subadditive at {a:#x}, {b:#x}"
                        )));
                    }
                }
            }
        }
        Ok(LscSubmeasure { ground_size, table })
    }

    /// Counting measure.
    pub fn cardinality(ground_size: usize) -> Result<Self> {
        let table = (0..1usize << ground_size)
            .map(|m| PhiValue::Finite(Dyadic::new(m.count_ones() as u128, 0)))
            .collect();
        Self::from_table(ground_size, table)
    }

    /// `phi(A) = sum of weights over A`.
    pub fn weighted_singletons(weights: &[Dyadic]) -> Result<Self> {
        let n = weights.len();
        let table = (0..1usize << n)
            .map(|m| {
                let mut v = Dyadic::ZERO;
                for (i, w) in weights.iter().enumerate() {
                    if m >> i & 1 == 1 {
                        v = v.add(w);
                    }
                }
                PhiValue::Finite(v)
            })
            .collect();
        Self::from_table(n, table)
    }

    /// Minimal total weight of a generator family covering the set;
    /// infinite when no cover exists.
    pub fn min_cover_weight(gens: &[Subset], weights: &[Dyadic]) -> Result<Self> {
        if gens.is_empty() || gens.len() != weights.len() {
            return Err(ForgeError::InvalidSubmeasure(
                "min_cover_weight needs matching nonempty generators and weights".into(),
            ));
        }
        let n = gens[0].ground_size();
        if n > 16 {
            return Err(ForgeError::ScaleLimit(format!("ground size {n} exceeds 16")));
        }
        let gen_masks: Vec<u64> = gens.iter().map(|g| g.as_mask()).collect();
        let mut table = vec![PhiValue::Infinite; 1 << n];
        table[0] = PhiValue::Finite(Dyadic::ZERO);
        for mask in 1..(1u64 << n) {
            let pivot = mask.trailing_zeros() as u64;
            let mut best = PhiValue::Infinite;
            for (gi, &g) in gen_masks.iter().enumerate() {
                if g >> pivot & 1 == 1 {
                    let rest = (mask & !g) as usize;
                    let cand = table[rest].add(&PhiValue::Finite(weights[gi]));
                    if cand.partial_cmp(&best) == Some(std::cmp::Ordering::Less) {
                        best = cand;
                    }
                }
            }
            table[mask as usize] = best;
        }
        Self::from_table(n, table)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn value(&self, a: &Subset) -> PhiValue {
        debug_assert_eq!(a.ground_size(), self.ground_size);
        self.table[a.as_mask() as usize]
    }
}

/// Membership predicate `A |-> phi(A) <= bound`; graded by the bound
/// rather than by cover number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmeasureIdeal {
    pub phi: LscSubmeasure,
    pub bound: Dyadic,
    /// Records the grading convention in force.
    pub grading: &'static str,
}

pub fn submeasure_ideal(phi: LscSubmeasure, bound: Dyadic) -> SubmeasureIdeal {
    SubmeasureIdeal { phi, bound, grading: "graded by submeasure bound, not cover number" }
}

impl SubmeasureIdeal {
    pub fn is_member(&self, a: &Subset) -> bool {
        self.phi.value(a).le(&self.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::CoverNumber;

    #[test]
    fn unions_down_sole_empty_generator() {
        let code = CompactCode::from_branch_masks(3, &[0]).unwrap();
        let ideal = unions_down(&code, 3).unwrap();
        let single = Subset::singleton(3, 0);
        assert_eq!(ideal.cover_number(&single).unwrap(), CoverNumber::Infinite);
    }

    #[test]
    fn unions_down_two_singletons() {
        // K codes {{0},{1}}; at grade 2 the pair {0,1} needs both.
        let code = CompactCode::from_branch_masks(2, &[0b01, 0b10]).unwrap();
        let ideal = unions_down(&code, 2).unwrap();
        let pair = Subset::from_elems(2, &[0, 1]);
        assert_eq!(ideal.cover_number(&pair).unwrap(), CoverNumber::Finite(2));
    }

    #[test]
    fn unions_down_grade2_members_are_pairs_of_branches() {
        // [DERIVED] random K with 5 branches: grade-2 members are exactly
        // unions of <= 2 branches and their subsets (pair enumeration).
        let masks = [0b00011u64, 0b00100, 0b11000, 0b00110, 0b00001];
        let code = CompactCode::from_branch_masks(5, &masks).unwrap();
        let ideal = unions_down(&code, 2).unwrap();
        for a in 0..(1u64 << 5) {
            let mut expect = false;
            for &x in &masks {
                for &y in &masks {
                    if a & !(x | y) == 0 {
                        expect = true;
                    }
                }
            }
            let got = ideal
                .is_member_grade(&Subset::from_mask(5, a), 2)
                .unwrap();
            assert_eq!(got, expect, "mask {a:#b}");
        }
    }

    #[test]
    fn code_from_generators_singleton() {
        let gens = vec![Subset::from_elems(2, &[0])];
        // support must be all of the ground
        assert!(matches!(
            code_from_generators(&gens),
            Err(ForgeError::UncoveredSingleton(1))
        ));
        let gens = vec![Subset::from_elems(2, &[0]), Subset::from_elems(2, &[1])];
        let code = code_from_generators(&gens).unwrap();
        let expect: BTreeSet<u64> = [0b00, 0b01, 0b10].into_iter().collect();
        assert_eq!(code.branch_masks(), &expect);
    }

    #[test]
    fn code_from_generators_downward_closure() {
        let gens = vec![Subset::from_elems(2, &[0, 1])];
        let code = code_from_generators(&gens).unwrap();
        let expect: BTreeSet<u64> = [0b00, 0b01, 0b10, 0b11].into_iter().collect();
        assert_eq!(code.branch_masks(), &expect);
        assert!(code.is_downward_closed());
    }

    #[test]
    fn code_round_trip_matches_subset_check() {
        // [DERIVED] random generators on [0,8): grade-1 membership of the
        // round-tripped code equals "contained in some generator".
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = 8;
            let mut gens: Vec<Subset> = (0..rng.gen_range(2..=5))
                .map(|_| Subset::from_mask(n, rng.gen::<u64>() & 0xff))
                .collect();
            for i in 0..n {
                if !gens.iter().any(|g| g.contains(i)) {
                    gens.push(Subset::singleton(n, i));
                }
            }
            let code = code_from_generators(&gens).unwrap();
            let ideal = unions_down(&code, 1).unwrap();
            for mask in 0..(1u64 << n) {
                let a = Subset::from_mask(n, mask);
                let direct = gens.iter().any(|g| a.is_subset_of(g));
                assert_eq!(ideal.is_member_grade(&a, 1).unwrap(), direct);
            }
        }
    }

    #[test]
    fn reduce_colors_single_color() {
        let table = (0u64..1 << 4)
            .filter(|m| m.count_ones() == 2)
            .map(|m| (m, 0u8))
            .collect();
        let c = MultiColoring::Table { arity: 2, colors: 1, table };
        let parts = reduce_colors(&c);
        assert_eq!(parts.len(), 1);
        let a = Subset::from_elems(4, &[0, 1, 2]);
        assert!(parts[0].is_monochromatic_on(&a));
        assert_eq!(parts[0].eval(&[0, 1]), 1);
    }

    #[test]
    fn reduce_colors_constant_two_of_three() {
        let table = (0u64..1 << 4)
            .filter(|m| m.count_ones() == 2)
            .map(|m| (m, 2u8))
            .collect();
        let c = MultiColoring::Table { arity: 2, colors: 3, table };
        let parts = reduce_colors(&c);
        assert_eq!(parts[2].eval(&[0, 1]), 1);
        assert_eq!(parts[0].eval(&[0, 1]), 0);
        assert_eq!(parts[1].eval(&[0, 1]), 0);
    }

    #[test]
    fn reduce_colors_preserves_monochromatic_families() {
        // [DERIVED] random 3-colorings of pairs over [0,8): the
        // monochromatic families coincide, over all subsets.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for _ in 0..10 {
            let table = (0u64..1 << 8)
                .filter(|m| m.count_ones() == 2)
                .map(|m| (m, rng.gen_range(0..3u8)))
                .collect();
            let c = MultiColoring::Table { arity: 2, colors: 3, table };
            let parts = reduce_colors(&c);
            for mask in 0..(1u64 << 8) {
                let a = Subset::from_mask(8, mask);
                let mono = c.is_monochromatic_on(&a);
                let simo = parts.iter().all(|p| p.is_monochromatic_on(&a));
                assert_eq!(mono, simo, "mask {mask:#b}");
            }
        }
    }

    #[test]
    fn pad_arity_identity_and_errors() {
        let d = congruence_coloring(2).unwrap();
        assert_eq!(pad_arity(&d, 2).unwrap(), d);
        assert!(matches!(pad_arity(&d, 1), Err(ForgeError::BadArity(_))));
    }

    #[test]
    fn pad_arity_parity_of_sum() {
        // [DERIVED] d = parity-of-sum on pairs; on A={0,2,4} d is constant
        // 0, so the padded triple coloring is constant 0 as well.
        let table = (0u64..1 << 6)
            .filter(|m| m.count_ones() == 2)
            .map(|m| {
                let elems: Vec<u64> = (0..6).filter(|i| m >> i & 1 == 1).collect();
                (m, ((elems[0] + elems[1]) % 2) as u8)
            })
            .collect();
        let d = TwoColoring::Table { arity: 2, table };
        let padded = pad_arity(&d, 3).unwrap();
        assert_eq!(padded.eval(&[0, 2, 4]), 0);
        let a = Subset::from_elems(6, &[0, 2, 4]);
        assert!(padded.is_monochromatic_on(&a));
    }

    #[test]
    fn pad_arity_preserves_monochromatic_families() {
        // [DERIVED] random pair colorings over [0,9), padded by 2: the
        // padded coloring only probes pairs sitting below two further
        // elements, so monochromaticity transfers from the base coloring
        // (not conversely), and every evaluation matches the base value
        // on the two least elements.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        for _ in 0..5 {
            let table = (0u64..1 << 9)
                .filter(|m| m.count_ones() == 2)
                .map(|m| (m, rng.gen_range(0..2u8)))
                .collect();
            let d = TwoColoring::Table { arity: 2, table };
            let padded = pad_arity(&d, 4).unwrap();
            for mask in 0..(1u64 << 9) {
                let a = Subset::from_mask(9, mask);
                if a.len() >= 4 && d.is_monochromatic_on(&a) {
                    assert!(padded.is_monochromatic_on(&a), "mask {mask:#b}");
                }
                if a.len() == 4 {
                    let e = a.elems();
                    assert_eq!(padded.eval(&e), d.eval(&e[..2]));
                }
            }
        }
    }

    #[test]
    fn congruence_coloring_values() {
        // [PAPER] r_n is 1 exactly on tuples congruent mod n.
        let r2 = congruence_coloring(2).unwrap();
        assert_eq!(r2.eval(&[0, 2]), 1);
        assert_eq!(r2.eval(&[0, 1]), 0);
        let r3 = congruence_coloring(3).unwrap();
        assert_eq!(r3.eval(&[0, 3, 6]), 1);
        assert_eq!(r3.eval(&[0, 3, 7]), 0);
    }

    #[test]
    fn congruence_dispersion() {
        // finite dispersion: r_n attains both colors on [0,m) for
        // 2 <= n <= floor(sqrt(m)), for every m <= 64
        for m in 4..=64usize {
            let bound = (2..).take_while(|n| n * n <= m).last().unwrap_or(1);
            for n in 2..=bound {
                let rn = congruence_coloring(n).unwrap();
                let tuple0: Vec<usize> = (0..n).collect(); // 0,1,..,n-1 not congruent
                let tuple1: Vec<usize> = (0..n).map(|i| i * n).collect(); // all = 0 mod n
                assert!(tuple1.iter().all(|&x| x < m));
                assert_eq!(rn.eval(&tuple0), 0, "m={m} n={n}");
                assert_eq!(rn.eval(&tuple1), 1, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn sim_monochromatic_small_sets() {
        let seq = ColoringSequence {
            ground: GroundSet::new(6, "g").unwrap(),
            colorings: vec![congruence_coloring(2).unwrap()],
        };
        assert!(is_simultaneously_monochromatic(&Subset::singleton(6, 3), &seq));
        assert!(is_simultaneously_monochromatic(
            &Subset::from_elems(6, &[0, 2, 4]),
            &seq
        ));
        assert!(!is_simultaneously_monochromatic(
            &Subset::from_elems(6, &[0, 1, 2]),
            &seq
        ));
    }

    #[test]
    fn colorings_from_code_powerset() {
        let masks: Vec<u64> = (0..8).collect();
        let code = CompactCode::from_branch_masks(3, &masks).unwrap();
        let cc = colorings_from_code(&code).unwrap();
        for mask in 0..8u64 {
            let a = Subset::from_mask(3, mask);
            assert!(is_simultaneously_monochromatic(&a, &cc.sequence));
        }
        assert_eq!(cc.size_bound, 0);
    }

    #[test]
    fn colorings_from_code_evens() {
        // [DERIVED] K codes subsets of the even numbers in [0,8)
        let even_mask = 0b01010101u64;
        let masks: Vec<u64> = (0..=255).filter(|m| m & !even_mask == 0).collect();
        let code = CompactCode::from_branch_masks(8, &masks).unwrap();
        // add odd singletons so the code contains fin
        let mut with_singles = masks.clone();
        for i in 0..8 {
            with_singles.push(1 << i);
        }
        let code2 = CompactCode::from_branch_masks(8, &with_singles).unwrap();
        assert!(code2.is_downward_closed());
        let cc = colorings_from_code(&code2).unwrap();
        let evens = Subset::from_elems(8, &[0, 2, 4, 6]);
        let mixed = Subset::from_elems(8, &[0, 1, 2, 3]);
        assert!(is_simultaneously_monochromatic(&evens, &cc.sequence));
        assert!(!is_simultaneously_monochromatic(&mixed, &cc.sequence));
        drop(code);
    }

    #[test]
    fn colorings_from_code_rejects_non_downward_closed() {
        let code = CompactCode::from_branch_masks(2, &[0b11, 0b01, 0b00]).unwrap();
        assert!(matches!(
            colorings_from_code(&code),
            Err(ForgeError::NotDownwardClosed(_))
        ));
    }

    #[test]
    fn chain_property_holds() {
        // if d_{n+1} is monochromatic in color 1 then so is d_n
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let d = 6;
            let mut masks: BTreeSet<u64> = BTreeSet::new();
            masks.insert(0);
            for i in 0..d {
                masks.insert(1 << i);
            }
            for _ in 0..6 {
                let m = rng.gen::<u64>() & ((1 << d) - 1);
                let mut sub = m;
                loop {
                    masks.insert(sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & m;
                }
            }
            let code = CompactCode::from_branch_masks(
                d,
                &masks.iter().copied().collect::<Vec<_>>(),
            )
            .unwrap();
            let cc = colorings_from_code(&code).unwrap();
            for mask in 0..(1u64 << d) {
                let a = Subset::from_mask(d, mask);
                for n in 1..cc.multis.len() {
                    let hi = cc.multis[n].constant_color_on(&a);
                    if hi == Some(1) {
                        let lo = cc.multis[n - 1].constant_color_on(&a);
                        assert_eq!(lo, Some(1), "mask {mask:#b} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn sim_mono_equals_coded_above_bound() {
        // [DERIVED] random downward-closed codes at depth 8: above the
        // computed size bound, sim-monochromatic iff coded.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
        for _ in 0..5 {
            let d = 8;
            let mut masks: BTreeSet<u64> = BTreeSet::new();
            masks.insert(0);
            for i in 0..d {
                masks.insert(1 << i);
            }
            for _ in 0..5 {
                let m = rng.gen::<u64>() & ((1 << d) - 1);
                let mut sub = m;
                loop {
                    masks.insert(sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & m;
                }
            }
            let code = CompactCode::from_branch_masks(
                d,
                &masks.iter().copied().collect::<Vec<_>>(),
            )
            .unwrap();
            let cc = colorings_from_code(&code).unwrap();
            for mask in 0..(1u64 << d) {
                let a = Subset::from_mask(d, mask);
                if a.len() >= cc.size_bound {
                    assert_eq!(
                        is_simultaneously_monochromatic(&a, &cc.sequence),
                        code.codes_subset(mask),
                        "mask {mask:#b}"
                    );
                }
            }
        }
    }

    #[test]
    fn submeasure_cardinality_bound() {
        let phi = LscSubmeasure::cardinality(5).unwrap();
        let ideal = submeasure_ideal(phi, Dyadic::new(3, 0));
        assert!(ideal.is_member(&Subset::from_elems(5, &[0, 1, 2])));
        assert!(!ideal.is_member(&Subset::from_elems(5, &[0, 1, 2, 3])));
    }

    #[test]
    fn submeasure_geometric_weights() {
        let weights: Vec<Dyadic> = (0..5).map(|i| Dyadic::half_power(i + 1)).collect();
        let phi = LscSubmeasure::weighted_singletons(&weights).unwrap();
        let ideal = submeasure_ideal(phi, Dyadic::half_power(1));
        assert!(ideal.is_member(&Subset::singleton(5, 0)));
        assert!(!ideal.is_member(&Subset::from_elems(5, &[0, 1])));
    }

    #[test]
    fn min_cover_weight_unit_weights_match_cover_number() {
        // [DERIVED] min-cover-weight with unit weights equals cover_number
        // on every subset of [0,8)
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let n = 8;
        let gens: Vec<Subset> = (0..6)
            .map(|_| Subset::from_mask(n, rng.gen::<u64>() & 0xff))
            .collect();
        let weights = vec![Dyadic::ONE; gens.len()];
        let phi = LscSubmeasure::min_cover_weight(&gens, &weights).unwrap();
        let ideal = GradedIdeal::new_partial(
            GroundSet::new(n, "g").unwrap(),
            gens,
            "gens",
        )
        .unwrap();
        for mask in 0..(1u64 << n) {
            let a = Subset::from_mask(n, mask);
            match (phi.value(&a), ideal.cover_number(&a).unwrap()) {
                (PhiValue::Finite(d), CoverNumber::Finite(k)) => {
                    assert_eq!(d, Dyadic::new(k as u128, 0), "mask {mask:#b}");
                }
                (PhiValue::Infinite, CoverNumber::Infinite) => {}
                (got, want) => panic!("mask {mask:#b}: {got:?} vs {want:?}"),
            }
        }
    }

    #[test]
    fn submeasure_rejects_non_monotone() {
        let mut table = vec![PhiValue::Finite(Dyadic::ZERO); 4];
        table[1] = PhiValue::Finite(Dyadic::ONE);
        table[3] = PhiValue::Finite(Dyadic::ZERO); // {0,1} below {0}
        assert!(LscSubmeasure::from_table(2, table).is_err());
    }
}
