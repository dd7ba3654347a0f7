//! Executable Katetov-order tests between graded ideal presentations:
//! witness checking, exhaustive witness search with pruning, and a
//! pairwise order-diagram generator with DOT output.
//!
//! A map `f` from the ground of `J` to the ground of `I` witnesses
//! `I <=_K J` at grade `k` when the `f`-preimage of every generator of
//! `I` has cover number at most `k` in `J`. Finite verdicts are evidence
//! about the truncation only, never about the infinitary relation.

use std::fmt::Write as _;

use crate::foundation::{CoverSolver, ForgeError, GradedIdeal, Result, Subset};

/// A total map from the ground of `J` to the ground of `I`, together with
/// the grade at which it passed the reduction check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionWitness {
    pub map: Vec<usize>,
    pub grade: usize,
}

/// True iff for every generator `G` of `ideal_from` the preimage
/// `f^{-1}[G]` has cover number at most `k` in `ideal_to`.
pub fn check_reduction(
    f: &[usize],
    ideal_from: &GradedIdeal,
    ideal_to: &GradedIdeal,
    k: usize,
) -> Result<bool> {
    if f.len() != ideal_to.ground.size {
        return Err(ForgeError::PartialMap(f.len()));
    }
    for (j, &v) in f.iter().enumerate() {
        if v >= ideal_from.ground.size {
            return Err(ForgeError::InvalidArgument(format!(
                "f({j}) = {v} outside target ground [0,{})",
                ideal_from.ground.size
            )));
        }
    }
    let mut solver = CoverSolver::new(ideal_to);
    for g in &ideal_from.generators {
        let preimage = preimage_of(f, g, ideal_to.ground.size);
        if !solver.is_member_grade(&preimage, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn preimage_of(f: &[usize], g: &Subset, domain_size: usize) -> Subset {
    let mut p = Subset::empty(domain_size);
    for (j, &v) in f.iter().enumerate() {
        if g.contains(v) {
            p.insert(j);
        }
    }
    p
}

/// Outcome of a bounded witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ReductionWitness),
    NotFound,
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&ReductionWitness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Backtracking search for the lexicographically least map witnessing
/// `ideal_from <=_K ideal_to` at grade `k`. Prunes a partial assignment
/// as soon as some generator's partial preimage already exceeds the
/// grade. `budget` caps the number of assignment steps.
pub fn search_reduction(
    ideal_from: &GradedIdeal,
    ideal_to: &GradedIdeal,
    k: usize,
    budget: u64,
) -> Result<SearchOutcome> {
    let domain = ideal_to.ground.size;
    let codomain = ideal_from.ground.size;
    let mut solver = CoverSolver::new(ideal_to);
    let mut f: Vec<usize> = Vec::with_capacity(domain);
    let mut nodes: u64 = 0;

    fn dfs(
        f: &mut Vec<usize>,
        domain: usize,
        codomain: usize,
        ideal_from: &GradedIdeal,
        ideal_to: &GradedIdeal,
        k: usize,
        solver: &mut CoverSolver<'_>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<Option<Option<Vec<usize>>>> {
        // Ok(Some(Some(f)))  -> found
        // Ok(Some(None))     -> budget exhausted
        // Ok(None)           -> subtree exhausted, keep searching
        if f.len() == domain {
            return Ok(Some(Some(f.clone())));
        }
        for v in 0..codomain {
            *nodes += 1;
            if *nodes > budget {
                return Ok(Some(None));
            }
            f.push(v);
            let mut viable = true;
            for g in &ideal_from.generators {
                let preimage = preimage_of(f, g, ideal_to.ground.size);
                if !solver.is_member_grade(&preimage, k)? {
                    viable = false;
                    break;
                }
            }
            if viable {
                if let Some(res) = dfs(
                    f, domain, codomain, ideal_from, ideal_to, k, solver, nodes, budget,
                )? {
                    return Ok(Some(res));
                }
            }
            f.pop();
        }
        Ok(None)
    }

    match dfs(
        &mut f,
        domain,
        codomain,
        ideal_from,
        ideal_to,
        k,
        &mut solver,
        &mut nodes,
        budget,
    )? {
        Some(Some(map)) => Ok(SearchOutcome::Found(ReductionWitness { map, grade: k })),
        Some(None) => Ok(SearchOutcome::BudgetExhausted),
        None => Ok(SearchOutcome::NotFound),
    }
}

/// Compose two witnesses: if `f` witnesses `I <=_K J` at grade `k` and
/// `g` witnesses `J <=_K L` at grade `m`, then `f . g` passes the check
/// for `I <=_K L` at grade `k * m` (a k-cover pulled back through a
/// grade-m map yields at most k*m generators).
pub fn compose_witnesses(f: &ReductionWitness, g: &ReductionWitness) -> ReductionWitness {
    let map = g.map.iter().map(|&x| f.map[x]).collect();
    ReductionWitness { map, grade: f.grade * g.grade }
}

/// One cell of the pairwise diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Found { grade: usize },
    Refuted,
    Exhausted,
}

/// Pairwise search results over a list of named ideals, plus DOT text.
/// Cells are finite-scale evidence; the scale label is recorded in the
/// graph itself.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub names: Vec<String>,
    pub cells: Vec<Vec<Cell>>,
    pub scale: String,
    pub grade: usize,
}

pub fn diagram(
    entries: &[(String, GradedIdeal)],
    scale: &str,
    k: usize,
    budget: u64,
) -> Result<Diagram> {
    let names: Vec<String> = entries.iter().map(|(n, _)| n.clone()).collect();
    let mut cells = Vec::with_capacity(entries.len());
    for (_, from) in entries {
        let mut row = Vec::with_capacity(entries.len());
        for (_, to) in entries {
            let cell = match search_reduction(from, to, k, budget)? {
                SearchOutcome::Found(w) => Cell::Found { grade: w.grade },
                SearchOutcome::NotFound => Cell::Refuted,
                SearchOutcome::BudgetExhausted => Cell::Exhausted,
            };
            row.push(cell);
        }
        cells.push(row);
    }
    Ok(Diagram { names, cells, scale: scale.to_string(), grade: k })
}

impl Diagram {
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph katetov {{");
        let _ = writeln!(out, "  label=\"finite-scale evidence; scale={}\";", self.scale);
        let _ = writeln!(out, "  scale=\"{}\";", self.scale);
        for name in &self.names {
            let _ = writeln!(out, "  \"{name}\";");
        }
        for (i, row) in self.cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                if let Cell::Found { grade } = cell {
                    let _ = writeln!(
                        out,
                        "  \"{}\" -> \"{}\" [grade={}];",
                        self.names[i], self.names[j], grade
                    );
                }
            }
        }
        let _ = writeln!(out, "}}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::GroundSet;

    fn ideal(n: usize, gens: &[&[usize]], name: &str) -> GradedIdeal {
        let g = gens.iter().map(|e| Subset::from_elems(n, e)).collect();
        GradedIdeal::new_partial(GroundSet::new(n, name).unwrap(), g, name).unwrap()
    }

    fn fin(n: usize) -> GradedIdeal {
        let gens: Vec<Subset> = (0..n).map(|i| Subset::singleton(n, i)).collect();
        GradedIdeal::new(GroundSet::new(n, "fin").unwrap(), gens, "fin").unwrap()
    }

    #[test]
    fn identity_reduction_on_same_ideal() {
        let i = ideal(4, &[&[0, 1], &[2, 3]], "i");
        let id: Vec<usize> = (0..4).collect();
        assert!(check_reduction(&id, &i, &i, 1).unwrap());
    }

    #[test]
    fn fin_below_anything_containing_fin() {
        // preimage of a singleton under the identity is a singleton
        let i = fin(4);
        let j = ideal(4, &[&[0, 1], &[2, 3]], "j");
        let id: Vec<usize> = (0..4).collect();
        assert!(check_reduction(&id, &i, &j, 1).unwrap());
    }

    #[test]
    fn constant_map_fails_when_preimage_uncoverable() {
        // [DERIVED] columns of a 4x4 grid vs fin on [0,4): the constant-0
        // map pulls a column back to all of [0,4), which one singleton
        // cannot cover.
        let cols: Vec<Vec<usize>> = (0..4)
            .map(|c| (0..4).map(|r| r * 4 + c).collect())
            .collect();
        let col_refs: Vec<&[usize]> = cols.iter().map(|c| c.as_slice()).collect();
        let grid = ideal(16, &col_refs, "columns");
        let j = fin(4);
        let f = vec![0usize; 4];
        assert!(!check_reduction(&f, &grid, &j, 1).unwrap());
    }

    #[test]
    fn partial_map_rejected() {
        let i = fin(4);
        assert_eq!(
            check_reduction(&[0, 1], &i, &i, 1).unwrap_err(),
            ForgeError::PartialMap(2)
        );
    }

    #[test]
    fn search_identity_exists() {
        let i = ideal(4, &[&[0, 1], &[2, 3]], "i");
        let out = search_reduction(&i, &i, 1, 1_000_000).unwrap();
        let w = out.witness().expect("reflexive witness");
        assert!(check_reduction(&w.map, &i, &i, 1).unwrap());
        // lexicographically least valid map is no larger than identity
        assert!(w.map <= (0..4).collect::<Vec<_>>());
    }

    #[test]
    fn search_full_generator_finds_constant() {
        let i = ideal(3, &[&[0, 1, 2]], "all");
        let j = fin(3);
        let out = search_reduction(&i, &j, j.generators.len(), 1_000_000).unwrap();
        let w = out.witness().expect("witness");
        assert!(w.map <= vec![0, 0, 0]);
    }

    #[test]
    fn search_agrees_with_exhaustive_enumeration() {
        // [DERIVED] brute force over all maps on grounds of size <= 4
        use itertools::Itertools;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = rng.gen_range(2..=4);
            let m = rng.gen_range(2..=4);
            let gens_i: Vec<Vec<usize>> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    (0..n).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>()
                })
                .collect();
            let gens_i: Vec<Vec<usize>> = gens_i
                .into_iter()
                .map(|g| if g.is_empty() { vec![0] } else { g })
                .collect();
            let refs: Vec<&[usize]> = gens_i.iter().map(|g| g.as_slice()).collect();
            let i = ideal(n, &refs, "i");
            let j = fin(m);
            let k = 1;
            let brute = (0..m)
                .map(|_| 0..n)
                .multi_cartesian_product()
                .find(|f| check_reduction(f, &i, &j, k).unwrap());
            let searched = search_reduction(&i, &j, k, 10_000_000).unwrap();
            match (brute, searched) {
                (Some(f), SearchOutcome::Found(w)) => assert_eq!(f, w.map),
                (None, SearchOutcome::NotFound) => {}
                (b, s) => panic!("disagreement: {b:?} vs {s:?}"),
            }
        }
    }

    #[test]
    fn budget_exhaustion_reported() {
        let i = fin(5);
        let j = ideal(5, &[&[0], &[1], &[2], &[3], &[4]], "j");
        assert_eq!(
            search_reduction(&i, &j, 0, 1).unwrap(),
            SearchOutcome::BudgetExhausted
        );
    }

    #[test]
    fn witness_composition_passes_at_product_grade() {
        let i = fin(3);
        let j = ideal(3, &[&[0, 1], &[2]], "j");
        let l = ideal(3, &[&[0], &[1, 2]], "l");
        let f = search_reduction(&i, &j, 1, 1_000_000)
            .unwrap()
            .witness()
            .cloned()
            .expect("f");
        let g = search_reduction(&j, &l, 2, 1_000_000)
            .unwrap()
            .witness()
            .cloned()
            .expect("g");
        let h = compose_witnesses(&f, &g);
        assert_eq!(h.grade, f.grade * g.grade);
        assert!(check_reduction(&h.map, &i, &l, h.grade).unwrap());
    }

    #[test]
    fn diagram_single_entry_self_loop() {
        let entries = vec![("fin".to_string(), fin(3))];
        let d = diagram(&entries, "N=3", 1, 1_000_000).unwrap();
        assert_eq!(d.cells[0][0], Cell::Found { grade: 1 });
        let dot = d.to_dot();
        assert!(dot.contains("\"fin\" -> \"fin\""));
        assert!(dot.contains("scale=\"N=3\""));
    }

    #[test]
    fn diagram_deterministic() {
        let entries = vec![
            ("fin".to_string(), fin(3)),
            ("split".to_string(), ideal(3, &[&[0, 1], &[2]], "split")),
        ];
        let d1 = diagram(&entries, "N=3", 1, 1_000_000).unwrap();
        let d2 = diagram(&entries, "N=3", 1, 1_000_000).unwrap();
        assert_eq!(d1.to_dot(), d2.to_dot());
    }
}
