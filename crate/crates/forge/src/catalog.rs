//! Scale-parameterized presentations of the named ideals: fin, fin×fin,
//! nwd, the chain/antichain ideal on the binary tree, the Rado-prefix
//! random ideal with its Ramsey selector, and the Solecki ideal with its
//! pipeline selector.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::foundation::{ForgeError, GradedIdeal, GroundSet, Result, Subset};
use crate::ic::{ic_ground_size, Node};
use crate::selectors::FiniteSelector;
use crate::solecki::{solecki_ideal, solecki_selector, ClopenSet};

pub const NAMES: [&str; 6] = ["fin", "finxfin", "nwd", "C", "R", "S"];

#[derive(Debug, Clone)]
pub struct CatalogParams {
    pub ground: usize,
    pub rows: usize,
    pub cols: usize,
    pub nwd_depth: usize,
    pub c_depth: usize,
    pub vertices: usize,
    pub resolution: usize,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams {
            ground: 8,
            rows: 8,
            cols: 8,
            nwd_depth: 6,
            c_depth: 3,
            vertices: 18,
            resolution: 2,
        }
    }
}

pub struct CatalogEntry {
    pub name: String,
    pub ideal: GradedIdeal,
    pub selector: Option<FiniteSelector>,
    pub omega: Option<Vec<ClopenSet>>,
}

pub fn catalog_get(name: &str, p: &CatalogParams) -> Result<CatalogEntry> {
    match name {
        "fin" => Ok(CatalogEntry {
            name: "fin".into(),
            ideal: fin_ideal(p.ground)?,
            selector: None,
            omega: None,
        }),
        "finxfin" => Ok(CatalogEntry {
            name: "finxfin".into(),
            ideal: finxfin_ideal(p.rows, p.cols)?,
            selector: Some(heavy_column_selector(p.rows, p.cols)),
            omega: None,
        }),
        "nwd" => Ok(CatalogEntry {
            name: "nwd".into(),
            ideal: nwd_ideal(p.nwd_depth)?,
            selector: None,
            omega: None,
        }),
        "C" => Ok(CatalogEntry {
            name: "C".into(),
            ideal: chain_antichain_ideal(p.c_depth)?,
            selector: None,
            omega: None,
        }),
        "R" => {
            let ideal = rado_ideal(p.vertices)?;
            let selector = rado_selector(p.vertices);
            Ok(CatalogEntry { name: "R".into(), ideal, selector: Some(selector), omega: None })
        }
        "S" => {
            let (omega, ideal) = solecki_ideal(p.resolution)?;
            let selector = solecki_finite_selector(omega.clone());
            Ok(CatalogEntry {
                name: "S".into(),
                ideal,
                selector: Some(selector),
                omega: Some(omega),
            })
        }
        other => Err(ForgeError::UnknownIdeal(other.into())),
    }
}

// ---------------------------------------------------------------------------
// fin and fin x fin
// ---------------------------------------------------------------------------

pub fn fin_ideal(n: usize) -> Result<GradedIdeal> {
    let gens: Vec<Subset> = (0..n).map(|i| Subset::singleton(n, i)).collect();
    GradedIdeal::new(GroundSet::new(n, "fin")?, gens, "fin")
}

/// The grid ideal on `rows x cols` points (`index = r * cols + c`),
/// generated by the full rows and full columns. The cover number of a
/// set is the minimal number of lines through it, matching the
/// columns-with-large-trace-plus-finite-part reading at this scale.
pub fn finxfin_ideal(rows: usize, cols: usize) -> Result<GradedIdeal> {
    let n = rows * cols;
    let mut gens = Vec::new();
    for r in 0..rows {
        gens.push(Subset::from_elems(n, &(0..cols).map(|c| r * cols + c).collect::<Vec<_>>()));
    }
    for c in 0..cols {
        gens.push(Subset::from_elems(n, &(0..rows).map(|r| r * cols + c).collect::<Vec<_>>()));
    }
    GradedIdeal::new(GroundSet::new(n, "grid")?, gens, "finxfin")
}

/// A fully local selector on the grid: scan points in increasing order
/// and keep a point exactly when its column is the (lexicographically
/// first) most-populated column seen so far. Membership of a point is
/// decided at its arrival, so the decision depth is the identity.
pub fn heavy_column_selector(rows: usize, cols: usize) -> FiniteSelector {
    let n = rows * cols;
    FiniteSelector::new(
        format!("heavy column ({rows}x{cols})"),
        cols,
        move |a: &Subset| {
            let mut counts = vec![0usize; cols];
            let mut out = Subset::empty(n);
            for p in a.iter() {
                let col = p % cols;
                counts[col] += 1;
                let leader = (0..cols).max_by_key(|&c| (counts[c], cols - c)).unwrap();
                if col == leader {
                    out.insert(p);
                }
            }
            out
        },
        |m| m,
        |s| usize::from(s > 0),
    )
}

// ---------------------------------------------------------------------------
// nwd
// ---------------------------------------------------------------------------

/// Ground: nodes of length `< depth`, heap-indexed. Generators: the
/// prefix chains of the deepest nodes, plus seeded complements of open
/// dense node sets (one chosen extension per node, one or two bits).
pub fn nwd_ideal(depth: usize) -> Result<GradedIdeal> {
    if depth < 2 || depth > 6 {
        return Err(ForgeError::ScaleLimit(format!(
            "nwd supports depth 2..=6, got {depth}"
        )));
    }
    let d = depth - 1;
    let n = ic_ground_size(d);
    let mut gens = Vec::new();
    for leaf in 0..1u32 << d {
        let node = Node { len: d, val: leaf };
        let chain: Vec<usize> = (0..=d).map(|m| node.prefix(m).index()).collect();
        gens.push(Subset::from_elems(n, &chain));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e7764);
    for _ in 0..16 {
        let mut fat = Subset::full(n);
        for i in 0..n {
            let s = Node::from_index(i);
            if s.len > d.saturating_sub(1) {
                continue;
            }
            let extra = if s.len + 2 <= d { rng.gen_range(1..=2) } else { 1 };
            let e = Node {
                len: s.len + extra,
                val: (s.val << extra) | rng.gen_range(0..1u32 << extra),
            };
            for j in 0..n {
                if e.is_prefix_of(&Node::from_index(j)) {
                    fat.remove(j);
                }
            }
        }
        if !fat.is_empty() {
            gens.push(fat);
        }
    }
    GradedIdeal::new(GroundSet::new(n, "nodes")?, gens, "nwd")
}

/// The truncated nowhere-density test: every node of length at most
/// `depth - 2` has a proper extension of length below `depth` with no
/// member of `a` above or equal to it.
pub fn is_nowhere_dense(a: &Subset, depth: usize) -> bool {
    let d = depth - 1;
    let n = ic_ground_size(d);
    debug_assert_eq!(a.ground_size(), n);
    let members: Vec<Node> = a.iter().map(Node::from_index).collect();
    for i in 0..n {
        let s = Node::from_index(i);
        if s.len + 1 > d {
            continue;
        }
        let found = (0..n).any(|j| {
            let t = Node::from_index(j);
            s.is_prefix_of(&t)
                && t.len > s.len
                && members.iter().all(|u| !t.is_prefix_of(u))
        });
        if !found {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// C: chains and antichains on the binary tree
// ---------------------------------------------------------------------------

/// Ground: all nodes of `2^{<=d}`. Generators: the maximal chains (one
/// per leaf) and the level antichains. The full maximal-antichain family
/// is doubly exponential; the levels are the canonical representatives.
pub fn chain_antichain_ideal(d: usize) -> Result<GradedIdeal> {
    let n = ic_ground_size(d);
    let mut gens = Vec::new();
    for leaf in 0..1u32 << d {
        let node = Node { len: d, val: leaf };
        gens.push(Subset::from_elems(
            n,
            &(0..=d).map(|m| node.prefix(m).index()).collect::<Vec<_>>(),
        ));
    }
    for level in 0..=d {
        gens.push(Subset::from_elems(
            n,
            &(0..1u32 << level)
                .map(|v| Node { len: level, val: v }.index())
                .collect::<Vec<_>>(),
        ));
    }
    GradedIdeal::new(GroundSet::new(n, "nodes")?, gens, "C")
}

// ---------------------------------------------------------------------------
// R: the Rado-prefix random ideal
// ---------------------------------------------------------------------------

/// Adjacency of the Rado prefix: `i ~ j` for `j < i` iff bit `j` of `i`
/// is set. Returned as bitmasks.
pub fn rado_adjacency(n: usize) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in 0..i {
            if i >> j & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn bron_kerbosch(adj: &[u32], r: u32, p: u32, x: u32, out: &mut Vec<u32>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    let pivot = {
        let mut best = 0;
        let mut best_deg = usize::MAX;
        let mut cand = p | x;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let deg = (p & !adj[v]).count_ones() as usize;
            if deg < best_deg {
                best_deg = deg;
                best = v;
            }
        }
        best
    };
    let mut todo = p & !adj[pivot];
    let mut p = p;
    let mut x = x;
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1u32 << v);
        x |= 1 << v;
    }
}

fn all_maximal(adj: &[u32], n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let p = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    bron_kerbosch(adj, 0, p, 0, &mut out);
    out.sort_unstable();
    out
}

fn complement_adj(adj: &[u32], n: usize) -> Vec<u32> {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    (0..n).map(|v| full & !adj[v] & !(1u32 << v)).collect()
}

/// Generators: every maximal clique and every maximal independent set
/// of the prefix graph (32 of them at 18 vertices), so any homogeneous
/// set is grade 1.
pub fn rado_ideal(n: usize) -> Result<GradedIdeal> {
    if n < 2 || n > 24 {
        return Err(ForgeError::ScaleLimit(format!(
            "rado prefix supports 2..=24 vertices, got {n}"
        )));
    }
    let adj = rado_adjacency(n);
    let mut gens: Vec<Subset> = all_maximal(&adj, n)
        .into_iter()
        .chain(all_maximal(&complement_adj(&adj, n), n))
        .map(|mask| Subset::from_mask(n, u64::from(mask)))
        .collect();
    gens.dedup();
    GradedIdeal::new(GroundSet::new(n, "rado")?, gens, "R")
}

pub fn is_homogeneous(set: &Subset, adj: &[u32]) -> bool {
    let v: Vec<usize> = set.elems();
    let pairs: Vec<(usize, usize)> = (0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
        .map(|(i, j)| (v[i], v[j]))
        .collect();
    pairs.iter().all(|&(a, b)| adj[a] >> b & 1 == 1)
        || pairs.iter().all(|&(a, b)| adj[a] >> b & 1 == 0)
}

/// A clique or independent subset of `A` of size at least
/// `⌊log2|A|⌋ - 1`: exact maximum homogeneous set for up to 20
/// vertices, greedy pre-homogeneous extraction above.
pub fn ramsey_selector(a: &Subset, adj: &[u32]) -> Subset {
    let n = adj.len();
    let verts = a.elems();
    if verts.len() < 2 {
        return a.clone();
    }
    let best_mask = if verts.len() <= 20 {
        let sub: Vec<u32> = verts
            .iter()
            .map(|&v| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| adj[v] >> u & 1 == 1)
                    .fold(0u32, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let cliques = all_maximal(&sub, verts.len());
        let anti = all_maximal(&complement_adj(&sub, verts.len()), verts.len());
        let local = cliques
            .into_iter()
            .chain(anti)
            .max_by_key(|m| m.count_ones())
            .unwrap();
        (0..verts.len())
            .filter(|i| local >> i & 1 == 1)
            .fold(0u64, |m, i| m | 1 << verts[i])
    } else {
        // greedy pre-homogeneous sequence, thinned to the majority color
        let mut live = verts;
        let mut recorded: Vec<(usize, bool)> = Vec::new();
        while let Some((&v, rest)) = live.split_first() {
            let (nb, non): (Vec<usize>, Vec<usize>) =
                rest.iter().partition(|&&u| adj[v] >> u & 1 == 1);
            let color = nb.len() >= non.len();
            recorded.push((v, color));
            live = if color { nb } else { non };
        }
        let ones = recorded.iter().filter(|&&(_, c)| c).count();
        let majority = ones * 2 >= recorded.len();
        recorded
            .iter()
            .filter(|&&(_, c)| c == majority)
            .fold(0u64, |m, &(v, _)| m | 1 << v)
    };
    Subset::from_mask(n, best_mask)
}

fn rado_selector(n: usize) -> FiniteSelector {
    let adj = rado_adjacency(n);
    FiniteSelector::new(
        format!("ramsey ({n} vertices)"),
        1,
        move |a: &Subset| ramsey_selector(a, &adj),
        move |_| n,
        |s| match s {
            0 => 0,
            1..=3 => 1,
            _ => (s.ilog2() as usize).saturating_sub(1).max(1),
        },
    )
}

// ---------------------------------------------------------------------------
// S: the Solecki ideal selector wrapper
// ---------------------------------------------------------------------------

fn solecki_finite_selector(omega: Vec<ClopenSet>) -> FiniteSelector {
    let ground = omega.len();
    FiniteSelector::new(
        "solecki pipeline",
        1,
        move |a: &Subset| {
            let idx = a.elems();
            if idx.len() < 2 {
                return a.clone();
            }
            let x: Vec<ClopenSet> = idx.iter().map(|&i| omega[i].clone()).collect();
            match solecki_selector(&x) {
                Ok(sel) => {
                    let mut out = Subset::empty(ground);
                    for &local in sel.family.iter().collect::<BTreeSet<_>>() {
                        out.insert(idx[local]);
                    }
                    out
                }
                Err(_) => Subset::empty(ground),
            }
        },
        move |_| ground,
        |_| 0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::CoverNumber;
    use crate::selectors::{adversary_against_selector, AdversaryOutcome};

    #[test]
    fn fin_entry() {
        let e = catalog_get("fin", &CatalogParams { ground: 4, ..Default::default() }).unwrap();
        assert_eq!(e.ideal.generators.len(), 4);
        assert!(e.ideal.generators.iter().all(|g| g.len() == 1));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(
            catalog_get("density", &CatalogParams::default()),
            Err(ForgeError::UnknownIdeal(_))
        ));
    }

    #[test]
    fn c_depth_two_counts() {
        let ideal = chain_antichain_ideal(2).unwrap();
        let chains: Vec<&Subset> =
            ideal.generators.iter().filter(|g| g.len() == 3).collect();
        assert_eq!(chains.len(), 4);
        // the level {0, 1} and the leaf level appear
        let level1 = Subset::from_elems(7, &[1, 2]);
        let leaves = Subset::from_elems(7, &[3, 4, 5, 6]);
        assert!(ideal.generators.contains(&level1));
        assert!(ideal.generators.contains(&leaves));
    }

    #[test]
    fn finxfin_diagonal_needs_many_lines() {
        let ideal = finxfin_ideal(8, 8).unwrap();
        let diag = Subset::from_elems(64, &(0..8).map(|i| i * 8 + i).collect::<Vec<_>>());
        assert_eq!(ideal.cover_number(&diag).unwrap(), CoverNumber::Finite(8));
        let row = Subset::from_elems(64, &(0..8).collect::<Vec<_>>());
        assert_eq!(ideal.cover_number(&row).unwrap(), CoverNumber::Finite(1));
    }

    #[test]
    fn nwd_generators_are_nowhere_dense() {
        let ideal = nwd_ideal(6).unwrap();
        assert_eq!(ideal.ground.size, 63);
        assert!(ideal.generators.len() <= 64);
        for g in &ideal.generators {
            assert!(is_nowhere_dense(g, 6));
        }
    }

    #[test]
    fn nwd_reproducible() {
        assert_eq!(nwd_ideal(6).unwrap(), nwd_ideal(6).unwrap());
    }

    #[test]
    fn rado_generators_homogeneous() {
        let ideal = rado_ideal(18).unwrap();
        let adj = rado_adjacency(18);
        assert!(ideal.generators.len() <= 64);
        for g in &ideal.generators {
            assert!(is_homogeneous(g, &adj));
        }
    }

    #[test]
    fn ramsey_selector_full_ground() {
        let adj = rado_adjacency(18);
        let ideal = rado_ideal(18).unwrap();
        let a = Subset::full(18);
        let out = ramsey_selector(&a, &adj);
        assert!(out.is_subset_of(&a));
        assert!(is_homogeneous(&out, &adj));
        assert!(out.len() >= 4);
        assert!(ideal.is_member_grade(&out, 1).unwrap());
    }

    #[test]
    fn ramsey_selector_random_subsets() {
        use rand::{Rng, SeedableRng};
        let adj = rado_adjacency(18);
        let ideal = rado_ideal(18).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let mut a = Subset::empty(18);
            for v in 0..18 {
                if rng.gen_bool(0.6) {
                    a.insert(v);
                }
            }
            if a.len() < 2 {
                continue;
            }
            let out = ramsey_selector(&a, &adj);
            assert!(out.is_subset_of(&a));
            assert!(is_homogeneous(&out, &adj));
            assert!(ideal.is_member_grade(&out, 1).unwrap());
            let floor = match a.len() {
                0 => 0,
                1..=3 => 1,
                s => (s.ilog2() as usize).saturating_sub(1).max(1),
            };
            assert!(out.len() >= floor);
        }
    }

    #[test]
    fn heavy_column_selector_is_local() {
        use rand::{Rng, SeedableRng};
        let sel = heavy_column_selector(8, 8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..50 {
            let mut a = Subset::empty(64);
            for p in 0..64 {
                if rng.gen_bool(0.3) {
                    a.insert(p);
                }
            }
            let out = sel.select(&a);
            assert!(out.is_subset_of(&a));
            // locality: truncating the tail preserves the prefix output
            for cut in [16, 32, 48] {
                let pre = sel.select(&a.below(cut));
                assert_eq!(pre.below(cut), out.below(cut));
            }
        }
    }

    #[test]
    fn heavy_column_adversary_trace() {
        let sel = heavy_column_selector(8, 8);
        // four sets concentrated on different columns
        let fam: Vec<Subset> = (0..4)
            .map(|c| {
                Subset::from_elems(64, &(0..8).map(|r| r * 8 + c).collect::<Vec<_>>())
            })
            .collect();
        match adversary_against_selector(&sel, &fam, 64).unwrap() {
            AdversaryOutcome::Trace(t) => {
                for (i, st) in t.stages.iter().enumerate() {
                    assert!(fam[i].contains(st.n), "stage {i}: {}", st.n);
                    assert!(t.final_image.contains(st.n), "stage {i}");
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solecki_entry_selector_grade_one() {
        let e = catalog_get("S", &CatalogParams::default()).unwrap();
        let s = e.selector.as_ref().unwrap();
        let omega = e.omega.as_ref().unwrap();
        // the three sets through cell 0
        let mut a = Subset::empty(omega.len());
        for (i, d) in omega.iter().enumerate() {
            if d.cells.contains(0) {
                a.insert(i);
            }
        }
        let out = s.select(&a);
        assert!(out.is_subset_of(&a));
        assert!(!out.is_empty());
        assert!(e.ideal.is_member_grade(&out, 1).unwrap());
    }

    #[test]
    fn builders_reproducible() {
        let p = CatalogParams::default();
        for name in NAMES {
            let a = catalog_get(name, &p).unwrap();
            let b = catalog_get(name, &p).unwrap();
            assert_eq!(a.ideal, b.ideal, "{name}");
        }
    }
}
