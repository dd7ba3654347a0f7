//! Selector machinery: the finite selector contract, tallness and
//! omega-hitting tests, the interval selector, the interval
//! characterization check, and the diagonalization adversary against
//! selectors with a declared continuity modulus.

use itertools::Itertools;

use crate::foundation::{
    CoverSolver, ForgeError, GradedIdeal, Result, Subset,
};

// ---------------------------------------------------------------------------
// Finite selectors
// ---------------------------------------------------------------------------

/// A function from sets to subsets with a declared decision depth: the
/// output restricted below `m` depends only on the input restricted below
/// `decision_depth(m)`. The contract (output inside input, output
/// grade-bounded in the target, output size floored by `eta`) is what the
/// tests exercise; the struct only carries the declared data.
pub struct FiniteSelector {
    pub name: String,
    pub grade_bound: usize,
    select: Box<dyn Fn(&Subset) -> Subset + Send + Sync>,
    decision_depth: Box<dyn Fn(usize) -> usize + Send + Sync>,
    /// Declared unbounded size floor: |select(A)| >= eta(|A|).
    eta: Box<dyn Fn(usize) -> usize + Send + Sync>,
}

impl FiniteSelector {
    pub fn new(
        name: impl Into<String>,
        grade_bound: usize,
        select: impl Fn(&Subset) -> Subset + Send + Sync + 'static,
        decision_depth: impl Fn(usize) -> usize + Send + Sync + 'static,
        eta: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        FiniteSelector {
            name: name.into(),
            grade_bound,
            select: Box::new(select),
            decision_depth: Box::new(decision_depth),
            eta: Box::new(eta),
        }
    }

    pub fn select(&self, a: &Subset) -> Subset {
        (self.select)(a)
    }

    pub fn decision_depth(&self, m: usize) -> usize {
        (self.decision_depth)(m)
    }

    pub fn eta(&self, input_size: usize) -> usize {
        (self.eta)(input_size)
    }
}

impl std::fmt::Debug for FiniteSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteSelector")
            .field("name", &self.name)
            .field("grade_bound", &self.grade_bound)
            .finish()
    }
}

// ---------------------------------------------------------------------------
// Interval partitions
// ---------------------------------------------------------------------------

/// A partition of `[0, N)` into consecutive intervals given by cutpoints
/// `0 = b_0 < b_1 < ... < b_r = N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    cutpoints: Vec<usize>,
}

impl IntervalPartition {
    pub fn new(cutpoints: Vec<usize>) -> Result<Self> {
        if cutpoints.len() < 2 || cutpoints[0] != 0 {
            return Err(ForgeError::InvalidArgument(
                "cutpoints must start at 0 and contain at least one interval".into(),
            ));
        }
        if !cutpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(ForgeError::InvalidArgument(
                "cutpoints must be strictly increasing".into(),
            ));
        }
        Ok(IntervalPartition { cutpoints })
    }

    /// Equal-width partition of `[0, n)` into `r` intervals (the last one
    /// absorbs the remainder).
    pub fn equal_width(n: usize, r: usize) -> Result<Self> {
        if r == 0 || r > n {
            return Err(ForgeError::InvalidArgument(format!(
                "cannot split [0,{n}) into {r} intervals"
            )));
        }
        let w = n / r;
        let mut cut: Vec<usize> = (0..r).map(|i| i * w).collect();
        cut.push(n);
        IntervalPartition::new(cut)
    }

    pub fn ground_size(&self) -> usize {
        *self.cutpoints.last().unwrap()
    }

    pub fn interval_count(&self) -> usize {
        self.cutpoints.len() - 1
    }

    pub fn interval(&self, j: usize) -> std::ops::Range<usize> {
        self.cutpoints[j]..self.cutpoints[j + 1]
    }

    /// Index of the interval containing `x`.
    pub fn interval_of(&self, x: usize) -> usize {
        debug_assert!(x < self.ground_size());
        self.cutpoints.partition_point(|&b| b <= x) - 1
    }
}

/// `g(A) = { min(A ∩ I_j) : A ∩ I_j nonempty }` — the canonical local
/// selector attached to an interval partition.
pub fn interval_selector(p: &IntervalPartition, a: &Subset) -> Subset {
    let mut out = Subset::empty(a.ground_size());
    for j in 0..p.interval_count() {
        if let Some(m) = p.interval(j).find(|&x| a.contains(x)) {
            out.insert(m);
        }
    }
    out
}

/// Package the interval selector as a [`FiniteSelector`]. The decision
/// depth of level `m` is the right endpoint of the interval containing
/// `m - 1`; eta counts the intervals an input of that size must meet
/// in the worst case (at least one).
pub fn interval_finite_selector(p: IntervalPartition, grade_bound: usize) -> FiniteSelector {
    let p2 = p.clone();
    let p3 = p.clone();
    FiniteSelector::new(
        format!("interval selector ({} intervals)", p.interval_count()),
        grade_bound,
        move |a| interval_selector(&p2, a),
        move |m| {
            if m == 0 {
                0
            } else {
                let x = (m - 1).min(p3.ground_size() - 1);
                p3.interval(p3.interval_of(x)).end.max(m)
            }
        },
        move |n| usize::from(n > 0),
    )
}

// ---------------------------------------------------------------------------
// Tallness and omega-hitting
// ---------------------------------------------------------------------------

/// Outcome of the finite tallness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallReport {
    pub tall: bool,
    /// A witness set with no large single-generator subset, when not tall.
    pub counterexample: Option<Subset>,
}

/// Finite tallness: every `A` with `|A| >= t` contains a `B` with
/// `|B| >= s` inside a single generator. Exhaustive over size-`t`
/// subsets for `N <= 16`, seeded sampling above.
pub fn is_tall_finite(ideal: &GradedIdeal, t: usize, s: usize) -> Result<TallReport> {
    let n = ideal.ground.size;
    if !(1 <= s && s <= t && t <= n) {
        return Err(ForgeError::InvalidArgument(format!(
            "need 1 <= s <= t <= N, got s={s} t={t} N={n}"
        )));
    }
    let check = |a: &Subset| -> bool {
        ideal
            .generators
            .iter()
            .any(|g| a.intersect(g).len() >= s)
    };
    if n <= 16 {
        // a witness inside any size-t superset works for the superset,
        // so size-exactly-t suffices
        for combo in (0..n).combinations(t) {
            let a = Subset::from_elems(n, &combo);
            if !check(&a) {
                return Ok(TallReport { tall: false, counterexample: Some(a) });
            }
        }
        Ok(TallReport { tall: true, counterexample: None })
    } else {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7a11);
        let mut elems: Vec<usize> = (0..n).collect();
        for _ in 0..2000 {
            elems.shuffle(&mut rng);
            let a = Subset::from_elems(n, &elems[..t]);
            if !check(&a) {
                return Ok(TallReport { tall: false, counterexample: Some(a) });
            }
        }
        Ok(TallReport { tall: true, counterexample: None })
    }
}

/// Search for a set of grade at most `k` meeting every member of
/// `family`: enumerate unions of at most `k` generators in canonical
/// order and return the minimal transversal inside the first union that
/// meets everything.
pub fn omega_hitting_check(
    ideal: &GradedIdeal,
    family: &[Subset],
    k: usize,
) -> Result<Option<Subset>> {
    for x in family {
        if x.ground_size() != ideal.ground.size {
            return Err(ForgeError::GroundMismatch(x.ground_size(), ideal.ground.size));
        }
        if x.is_empty() {
            return Err(ForgeError::InvalidArgument(
                "omega-hitting family members must be nonempty".into(),
            ));
        }
    }
    if family.is_empty() {
        return Ok(Some(Subset::empty(ideal.ground.size)));
    }
    for r in 1..=k.min(ideal.generators.len()) {
        for combo in (0..ideal.generators.len()).combinations(r) {
            let mut u = Subset::empty(ideal.ground.size);
            for &gi in &combo {
                u = u.union(&ideal.generators[gi]);
            }
            if family.iter().all(|x| u.intersects(x)) {
                // minimal transversal: least point of the union in each member
                let mut w = Subset::empty(ideal.ground.size);
                for x in family {
                    let p = u.intersect(x).min_elem().unwrap();
                    w.insert(p);
                }
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Outcome of the interval characterization check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizationReport {
    pub holds: bool,
    /// A partial transversal with cover number above the grade, if any.
    pub counterexample: Option<Subset>,
}

/// True iff every partial transversal of the partition (at most one
/// point per interval) has cover number at most `k` in the ideal. The
/// search walks intervals depth-first, pruning as soon as a partial
/// transversal already exceeds the grade (cover number is monotone), so
/// failing instances exit early with the counterexample.
pub fn check_interval_characterization(
    ideal: &GradedIdeal,
    p: &IntervalPartition,
    k: usize,
) -> Result<CharacterizationReport> {
    if p.ground_size() != ideal.ground.size {
        return Err(ForgeError::GroundMismatch(p.ground_size(), ideal.ground.size));
    }
    let mut solver = CoverSolver::new(ideal);
    let mut current = Subset::empty(ideal.ground.size);
    let bad = dfs_transversal(&mut current, 0, p, k, &mut solver)?;
    Ok(CharacterizationReport { holds: bad.is_none(), counterexample: bad })
}

fn dfs_transversal(
    current: &mut Subset,
    j: usize,
    p: &IntervalPartition,
    k: usize,
    solver: &mut CoverSolver<'_>,
) -> Result<Option<Subset>> {
    if !solver.is_member_grade(current, k)? {
        return Ok(Some(current.clone()));
    }
    if j == p.interval_count() {
        return Ok(None);
    }
    // try points first so counterexamples surface early, then skip
    for x in p.interval(j) {
        current.insert(x);
        if let Some(bad) = dfs_transversal(current, j + 1, p, k, solver)? {
            return Ok(Some(bad));
        }
        current.remove(x);
    }
    dfs_transversal(current, j + 1, p, k, solver)
}

// ---------------------------------------------------------------------------
// The diagonalization adversary
// ---------------------------------------------------------------------------

/// One stage of the adversary recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryStage {
    pub b: Subset,
    pub n: usize,
    pub m: usize,
}

/// The realized recursion: stages, the limit set, and its selector image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryTrace {
    pub stages: Vec<AdversaryStage>,
    pub final_b: Subset,
    pub final_image: Subset,
}

/// Outcome of the adversary run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversaryOutcome {
    Trace(AdversaryTrace),
    /// The ground was too small to complete a stage per family member.
    Stuck { completed: usize },
}

/// Run the recursion against a selector with a declared decision depth:
/// start from the first family member, repeatedly pick the smallest
/// selected point beyond the previous modulus cutoff, freeze the input
/// below the cutoff that decides that point, and splice in the next
/// family member above it. Each picked point is probed for modulus
/// honesty by perturbing the input above the cutoff.
pub fn adversary_against_selector(
    g: &FiniteSelector,
    family: &[Subset],
    n_ground: usize,
) -> Result<AdversaryOutcome> {
    if family.is_empty() {
        return Err(ForgeError::InvalidArgument("empty adversary family".into()));
    }
    for a in family {
        if a.ground_size() != n_ground {
            return Err(ForgeError::GroundMismatch(a.ground_size(), n_ground));
        }
    }
    let mut stages: Vec<AdversaryStage> = Vec::new();
    let mut b = family[0].clone();
    let mut prev_m = 0usize;
    for (i, _) in family.iter().enumerate() {
        let image = g.select(&b);
        // smallest selected point at or beyond the previous cutoff
        let Some(n_i) = image.iter().find(|&x| x >= prev_m) else {
            return Ok(AdversaryOutcome::Stuck { completed: i });
        };
        let m_i = g.decision_depth(n_i + 1).max(n_i + 1);
        if m_i > n_ground && i + 1 < family.len() {
            return Ok(AdversaryOutcome::Stuck { completed: i });
        }
        // probe the declared modulus: the membership of n_i must be
        // stable under perturbations above m_i
        for probe in probe_variants(&b, m_i, n_ground) {
            if g.select(&probe).contains(n_i) != image.contains(n_i) {
                return Err(ForgeError::ModulusViolation(n_i));
            }
        }
        stages.push(AdversaryStage { b: b.clone(), n: n_i, m: m_i });
        if i + 1 < family.len() {
            let low = b.below(m_i.min(n_ground));
            let mut next = low;
            for x in family[i + 1].iter().filter(|&x| x >= m_i) {
                next.insert(x);
            }
            b = next;
        }
        prev_m = m_i;
    }
    let final_image = g.select(&b);
    Ok(AdversaryOutcome::Trace(AdversaryTrace {
        stages,
        final_b: b,
        final_image,
    }))
}

fn probe_variants(b: &Subset, cutoff: usize, n_ground: usize) -> Vec<Subset> {
    let mut probes = Vec::new();
    if cutoff >= n_ground {
        return probes;
    }
    // flip the tail entirely, clear it, and fill it
    let low = b.below(cutoff);
    let mut cleared = low.clone();
    let mut filled = low.clone();
    let mut flipped = low.clone();
    for x in cutoff..n_ground {
        filled.insert(x);
        if !b.contains(x) {
            flipped.insert(x);
        }
    }
    probes.push(cleared.clone());
    probes.push(filled);
    probes.push(flipped);
    cleared.insert(n_ground - 1);
    probes.push(cleared);
    probes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::GroundSet;

    fn fin(n: usize) -> GradedIdeal {
        let gens: Vec<Subset> = (0..n).map(|i| Subset::singleton(n, i)).collect();
        GradedIdeal::new(GroundSet::new(n, "fin").unwrap(), gens, "fin").unwrap()
    }

    fn parity_ideal(n: usize) -> GradedIdeal {
        let evens: Vec<usize> = (0..n).step_by(2).collect();
        let odds: Vec<usize> = (1..n).step_by(2).collect();
        GradedIdeal::new(
            GroundSet::new(n, "parity").unwrap(),
            vec![Subset::from_elems(n, &evens), Subset::from_elems(n, &odds)],
            "parity",
        )
        .unwrap()
    }

    #[test]
    fn powerset_is_tall() {
        let i = GradedIdeal::new(
            GroundSet::new(6, "all").unwrap(),
            vec![Subset::full(6)],
            "powerset",
        )
        .unwrap();
        assert!(is_tall_finite(&i, 3, 2).unwrap().tall);
    }

    #[test]
    fn fin_is_not_tall() {
        let r = is_tall_finite(&fin(5), 2, 2).unwrap();
        assert!(!r.tall);
        assert_eq!(r.counterexample.unwrap().len(), 2);
    }

    #[test]
    fn parity_pigeonhole_tall() {
        // [DERIVED] any 5 numbers in [0,12) contain 3 sharing parity
        let r = is_tall_finite(&parity_ideal(12), 5, 3).unwrap();
        assert!(r.tall, "counterexample: {:?}", r.counterexample);
    }

    #[test]
    fn hitting_single_full_member() {
        let i = fin(4);
        let fam = vec![Subset::full(4)];
        let w = omega_hitting_check(&i, &fam, 1).unwrap().unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn hitting_fin_fails_on_disjoint_pair() {
        let i = fin(4);
        let fam = vec![Subset::from_elems(4, &[0, 1]), Subset::from_elems(4, &[2, 3])];
        assert_eq!(omega_hitting_check(&i, &fam, 1).unwrap(), None);
    }

    #[test]
    fn hitting_rows_meet_columns() {
        // rows of a 5x5 grid as generators; the 5 columns as the family
        let n = 25;
        let rows: Vec<Subset> = (0..5)
            .map(|r| Subset::from_elems(n, &(0..5).map(|c| r * 5 + c).collect::<Vec<_>>()))
            .collect();
        let i = GradedIdeal::new(GroundSet::new(n, "rows").unwrap(), rows, "rows").unwrap();
        let cols: Vec<Subset> = (0..5)
            .map(|c| Subset::from_elems(n, &(0..5).map(|r| r * 5 + c).collect::<Vec<_>>()))
            .collect();
        let w = omega_hitting_check(&i, &cols, 1).unwrap().unwrap();
        assert!(cols.iter().all(|c| w.intersects(c)));
        assert!(i.is_member_grade(&w, 1).unwrap());
    }

    #[test]
    fn interval_selector_examples() {
        let p = IntervalPartition::new(vec![0, 2, 5]).unwrap();
        assert_eq!(interval_selector(&p, &Subset::empty(5)), Subset::empty(5));
        let a = Subset::from_elems(5, &[1, 2, 4]);
        assert_eq!(interval_selector(&p, &a), Subset::from_elems(5, &[1, 2]));
    }

    #[test]
    fn interval_selector_contract() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(88);
        for _ in 0..100 {
            let n = rng.gen_range(4..=32);
            let r = rng.gen_range(1..=n.min(6));
            let p = IntervalPartition::equal_width(n, r).unwrap();
            let mut a = Subset::empty(n);
            for x in 0..n {
                if rng.gen_bool(0.4) {
                    a.insert(x);
                }
            }
            let out = interval_selector(&p, &a);
            assert!(out.is_subset_of(&a));
            for j in 0..p.interval_count() {
                let count = p.interval(j).filter(|&x| out.contains(x)).count();
                assert!(count <= 1);
            }
            assert_eq!(out, interval_selector(&p, &a));
        }
    }

    #[test]
    fn characterization_powerset_trivially_holds() {
        let i = GradedIdeal::new(
            GroundSet::new(6, "all").unwrap(),
            vec![Subset::full(6)],
            "powerset",
        )
        .unwrap();
        let p = IntervalPartition::equal_width(6, 3).unwrap();
        assert!(check_interval_characterization(&i, &p, 1).unwrap().holds);
    }

    #[test]
    fn characterization_fin_fails_with_two_intervals() {
        let p = IntervalPartition::equal_width(4, 2).unwrap();
        let r = check_interval_characterization(&fin(4), &p, 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample.unwrap().len(), 2);
    }

    #[test]
    fn characterization_parity_with_pair_intervals() {
        // [DERIVED] parity ideal on [0,12), intervals {2j, 2j+1}: every
        // transversal splits into its even and odd parts, so grade 2.
        let i = parity_ideal(12);
        let cut: Vec<usize> = (0..=6).map(|j| 2 * j).collect();
        let p = IntervalPartition::new(cut).unwrap();
        assert!(check_interval_characterization(&i, &p, 2).unwrap().holds);
        // and exhaustive transversal enumeration agrees
        use itertools::Itertools;
        for choice in (0..6).map(|j| vec![None, Some(2 * j), Some(2 * j + 1)]).multi_cartesian_product() {
            let elems: Vec<usize> = choice.into_iter().flatten().collect();
            let t = Subset::from_elems(12, &elems);
            assert!(i.is_member_grade(&t, 2).unwrap());
        }
    }

    #[test]
    fn characterization_implies_selector_grade() {
        // composing the two checks: when the characterization holds at k,
        // the interval selector output is grade-k
        let i = parity_ideal(12);
        let cut: Vec<usize> = (0..=6).map(|j| 2 * j).collect();
        let p = IntervalPartition::new(cut).unwrap();
        assert!(check_interval_characterization(&i, &p, 2).unwrap().holds);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(91);
        for _ in 0..50 {
            let mut a = Subset::empty(12);
            for x in 0..12 {
                if rng.gen_bool(0.5) {
                    a.insert(x);
                }
            }
            let out = interval_selector(&p, &a);
            assert!(i.is_member_grade(&out, 2).unwrap());
        }
    }

    #[test]
    fn adversary_single_member() {
        let p = IntervalPartition::equal_width(12, 12).unwrap();
        let g = interval_finite_selector(p, 1);
        let a0 = Subset::from_elems(12, &[3, 7, 11]);
        match adversary_against_selector(&g, &[a0.clone()], 12).unwrap() {
            AdversaryOutcome::Trace(t) => {
                assert_eq!(t.stages.len(), 1);
                let n0 = t.stages[0].n;
                assert!(t.final_image.contains(n0));
                assert!(a0.contains(n0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn adversary_three_progressions() {
        // [DERIVED] width-1 intervals make the selector the identity;
        // three disjoint arithmetic progressions in [0,60) give a 3-stage
        // trace whose picks land in each progression.
        let p = IntervalPartition::equal_width(60, 60).unwrap();
        let g = interval_finite_selector(p, 60);
        let fam: Vec<Subset> = (0..3)
            .map(|r| Subset::from_elems(60, &(0..20).map(|i| 3 * i + r).collect::<Vec<_>>()))
            .collect();
        match adversary_against_selector(&g, &fam, 60).unwrap() {
            AdversaryOutcome::Trace(t) => {
                assert_eq!(t.stages.len(), 3);
                for (i, st) in t.stages.iter().enumerate() {
                    assert!(t.final_image.contains(st.n), "stage {i}");
                    assert!(fam[i].contains(st.n), "stage {i}");
                }
                // cutoffs strictly interleave
                for w in t.stages.windows(2) {
                    assert!(w[0].n < w[0].m && w[0].m <= w[1].n && w[1].n < w[1].m);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn adversary_detects_modulus_cheat() {
        // a selector claiming to be fully local while actually depending
        // on the global maximum
        let g = FiniteSelector::new(
            "cheat",
            1,
            |a: &Subset| match a.iter().last() {
                Some(mx) if mx % 2 == 0 => a.clone(),
                _ => Subset::empty(a.ground_size()),
            },
            |m| m,
            |_| 0,
        );
        let fam = vec![Subset::from_elems(10, &[0, 2, 4]), Subset::from_elems(10, &[1, 3, 9])];
        assert!(matches!(
            adversary_against_selector(&g, &fam, 10),
            Err(ForgeError::ModulusViolation(_))
        ));
    }

    #[test]
    fn adversary_stuck_on_small_ground() {
        let p = IntervalPartition::equal_width(4, 2).unwrap();
        let g = interval_finite_selector(p, 2);
        let fam = vec![
            Subset::from_elems(4, &[3]),
            Subset::from_elems(4, &[3]),
            Subset::from_elems(4, &[3]),
        ];
        assert!(matches!(
            adversary_against_selector(&g, &fam, 4).unwrap(),
            AdversaryOutcome::Stuck { .. }
        ));
    }
}
