//! Line-oriented text format for ideal presentations, and conversions
//! between the coding kinds.
//!
//! A file looks like:
//!
//! ```text
//! forge-ideal 1
//! name: fin
//! kind: generators
//! ground: 4
//! gen: 0x1
//! gen: 0x2
//! ```
//!
//! Kinds: `generators`, `compact-code`, `colorings`, `submeasure`.
//! Subsets are hex bitmasks over the ground set; dyadic rationals are
//! written exactly as `numerator/2^exponent` (or `inf`). The format
//! round-trips bit-exactly: `parse(serialize(p)) == p`.

use ideal_forge::codings::{
    code_from_generators, colorings_from_code, submeasure_ideal, unions_down, CompactCode,
    ColoringSequence, LscSubmeasure, PhiValue, SubmeasureIdeal, TwoColoring,
};
use ideal_forge::foundation::Result;
use ideal_forge::{Dyadic, ForgeError, GradedIdeal, GroundSet, Subset};
use std::collections::BTreeMap;

const HEADER: &str = "forge-ideal 1";

/// The four coding kinds a presentation file can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Generators,
    CompactCode,
    Colorings,
    Submeasure,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Generators => "generators",
            Kind::CompactCode => "compact-code",
            Kind::Colorings => "colorings",
            Kind::Submeasure => "submeasure",
        }
    }

    pub fn from_str(s: &str) -> Result<Kind> {
        match s {
            "generators" => Ok(Kind::Generators),
            "compact-code" => Ok(Kind::CompactCode),
            "colorings" => Ok(Kind::Colorings),
            "submeasure" => Ok(Kind::Submeasure),
            other => Err(ForgeError::InvalidArgument(format!("unknown kind {other:?}"))),
        }
    }
}

/// An ideal presentation as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Generators { name: String, ground: usize, gens: Vec<u64> },
    CompactCode { name: String, depth: usize, branches: Vec<u64> },
    /// Only explicit colorings (`table`, `constant`, `congruence`) are
    /// representable on disk; derived wrappers are tabulated first.
    Colorings { name: String, ground: usize, colorings: Vec<TwoColoring> },
    Submeasure { name: String, ground: usize, bound: Dyadic, table: Vec<PhiValue> },
}

impl Presentation {
    pub fn name(&self) -> &str {
        match self {
            Presentation::Generators { name, .. }
            | Presentation::CompactCode { name, .. }
            | Presentation::Colorings { name, .. }
            | Presentation::Submeasure { name, .. } => name,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Presentation::Generators { .. } => Kind::Generators,
            Presentation::CompactCode { .. } => Kind::CompactCode,
            Presentation::Colorings { .. } => Kind::Colorings,
            Presentation::Submeasure { .. } => Kind::Submeasure,
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&format!("name: {}\n", self.name()));
        out.push_str(&format!("kind: {}\n", self.kind().as_str()));
        match self {
            Presentation::Generators { ground, gens, .. } => {
                out.push_str(&format!("ground: {ground}\n"));
                for g in gens {
                    out.push_str(&format!("gen: {g:#x}\n"));
                }
            }
            Presentation::CompactCode { depth, branches, .. } => {
                out.push_str(&format!("depth: {depth}\n"));
                for b in branches {
                    out.push_str(&format!("branch: {b:#x}\n"));
                }
            }
            Presentation::Colorings { ground, colorings, .. } => {
                out.push_str(&format!("ground: {ground}\n"));
                for c in colorings {
                    out.push_str("coloring: ");
                    out.push_str(&serialize_coloring(c));
                    out.push('\n');
                }
            }
            Presentation::Submeasure { ground, bound, table, .. } => {
                out.push_str(&format!("ground: {ground}\n"));
                out.push_str(&format!("bound: {}\n", dyadic_str(bound)));
                for (mask, v) in table.iter().enumerate() {
                    out.push_str(&format!("value: {mask:#x}={}\n", phi_str(v)));
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let bad = |msg: String| ForgeError::InvalidArgument(msg);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some(HEADER) {
            return Err(bad(format!("missing header line {HEADER:?}")));
        }
        let mut name = None;
        let mut kind = None;
        let mut ground = None;
        let mut depth = None;
        let mut bound = None;
        let mut gens = Vec::new();
        let mut branches = Vec::new();
        let mut colorings = Vec::new();
        let mut values: BTreeMap<u64, PhiValue> = BTreeMap::new();
        for line in lines {
            let (key, val) = line
                .split_once(':')
                .ok_or_else(|| bad(format!("malformed line {line:?}")))?;
            let val = val.trim();
            match key.trim() {
                "name" => name = Some(val.to_string()),
                "kind" => kind = Some(Kind::from_str(val)?),
                "ground" => ground = Some(parse_usize(val)?),
                "depth" => depth = Some(parse_usize(val)?),
                "bound" => bound = Some(parse_dyadic(val)?),
                "gen" => gens.push(parse_mask(val)?),
                "branch" => branches.push(parse_mask(val)?),
                "coloring" => colorings.push(parse_coloring(val)?),
                "value" => {
                    let (m, v) = val
                        .split_once('=')
                        .ok_or_else(|| bad(format!("malformed value line {val:?}")))?;
                    values.insert(parse_mask(m.trim())?, parse_phi(v.trim())?);
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let name = name.ok_or_else(|| bad("missing name".into()))?;
        match kind.ok_or_else(|| bad("missing kind".into()))? {
            Kind::Generators => Ok(Presentation::Generators {
                name,
                ground: ground.ok_or_else(|| bad("missing ground".into()))?,
                gens,
            }),
            Kind::CompactCode => Ok(Presentation::CompactCode {
                name,
                depth: depth.ok_or_else(|| bad("missing depth".into()))?,
                branches,
            }),
            Kind::Colorings => Ok(Presentation::Colorings {
                name,
                ground: ground.ok_or_else(|| bad("missing ground".into()))?,
                colorings,
            }),
            Kind::Submeasure => {
                let ground = ground.ok_or_else(|| bad("missing ground".into()))?;
                let expected = 1u64 << ground;
                if values.len() as u64 != expected
                    || values.keys().last().copied().unwrap_or(0) != expected - 1
                {
                    return Err(bad(format!(
                        "submeasure table must list all {expected} masks"
                    )));
                }
                Ok(Presentation::Submeasure {
                    name,
                    ground,
                    bound: bound.ok_or_else(|| bad("missing bound".into()))?,
                    table: values.into_values().collect(),
                })
            }
        }
    }

    // Materialization into forge objects -----------------------------------

    pub fn to_ideal(&self) -> Result<GradedIdeal> {
        match self {
            Presentation::Generators { name, ground, gens } => {
                let g = GroundSet::new(*ground, name.clone())?;
                let subsets = gens.iter().map(|&m| Subset::from_mask(*ground, m)).collect();
                GradedIdeal::new_partial(g, subsets, name.clone())
            }
            _ => Err(ForgeError::InvalidArgument(format!(
                "kind {} does not present a generator ideal",
                self.kind().as_str()
            ))),
        }
    }

    pub fn to_code(&self) -> Result<CompactCode> {
        match self {
            Presentation::CompactCode { depth, branches, .. } => {
                CompactCode::from_branch_masks(*depth, branches)
            }
            _ => Err(ForgeError::InvalidArgument(format!(
                "kind {} is not a compact code",
                self.kind().as_str()
            ))),
        }
    }

    pub fn to_sequence(&self) -> Result<ColoringSequence> {
        match self {
            Presentation::Colorings { name, ground, colorings } => Ok(ColoringSequence {
                ground: GroundSet::new(*ground, name.clone())?,
                colorings: colorings.clone(),
            }),
            _ => Err(ForgeError::InvalidArgument(format!(
                "kind {} is not a coloring sequence",
                self.kind().as_str()
            ))),
        }
    }

    pub fn to_submeasure_ideal(&self) -> Result<SubmeasureIdeal> {
        match self {
            Presentation::Submeasure { ground, bound, table, .. } => {
                let phi = LscSubmeasure::from_table(*ground, table.clone())?;
                Ok(submeasure_ideal(phi, *bound))
            }
            _ => Err(ForgeError::InvalidArgument(format!(
                "kind {} is not a submeasure",
                self.kind().as_str()
            ))),
        }
    }
}

// Conversions ---------------------------------------------------------------

/// Convert a presentation to the target coding kind.
///
/// Supported directions: generators <-> compact-code, generators or
/// compact-code -> colorings, generators or compact-code -> submeasure
/// (minimal cover weight with unit weights, bound 1), submeasure ->
/// generators (maximal members). Colorings are a sink: recovering a code
/// from an arbitrary coloring sequence is not supported.
pub fn convert(p: &Presentation, target: Kind) -> Result<Presentation> {
    if p.kind() == target {
        return Ok(p.clone());
    }
    let unsupported = || {
        Err(ForgeError::InvalidArgument(format!(
            "conversion {} -> {} is not supported",
            p.kind().as_str(),
            target.as_str()
        )))
    };
    match (p, target) {
        (Presentation::Generators { name, ground, gens }, Kind::CompactCode) => {
            let subsets: Vec<Subset> =
                gens.iter().map(|&m| Subset::from_mask(*ground, m)).collect();
            let code = code_from_generators(&subsets)?;
            Ok(Presentation::CompactCode {
                name: name.clone(),
                depth: code.depth(),
                branches: code.branch_masks().iter().copied().collect(),
            })
        }
        (Presentation::CompactCode { name, .. }, Kind::Generators) => {
            let ideal = unions_down(&p.to_code()?, 1)?;
            Ok(Presentation::Generators {
                name: name.clone(),
                ground: ideal.ground.size,
                gens: ideal.generators.iter().map(Subset::as_mask).collect(),
            })
        }
        (Presentation::CompactCode { name, depth, .. }, Kind::Colorings) => {
            let cc = colorings_from_code(&p.to_code()?)?;
            let tabulated = cc
                .sequence
                .colorings
                .iter()
                .map(|c| tabulate(c, *depth))
                .collect();
            Ok(Presentation::Colorings { name: name.clone(), ground: *depth, colorings: tabulated })
        }
        (Presentation::Generators { .. }, Kind::Colorings) => {
            convert(&convert(p, Kind::CompactCode)?, Kind::Colorings)
        }
        (Presentation::Generators { name, ground, gens }, Kind::Submeasure) => {
            let subsets: Vec<Subset> =
                gens.iter().map(|&m| Subset::from_mask(*ground, m)).collect();
            let weights = vec![Dyadic::ONE; subsets.len()];
            let phi = LscSubmeasure::min_cover_weight(&subsets, &weights)?;
            let table = (0..1u64 << ground)
                .map(|m| phi.value(&Subset::from_mask(*ground, m)))
                .collect();
            Ok(Presentation::Submeasure {
                name: name.clone(),
                ground: *ground,
                bound: Dyadic::ONE,
                table,
            })
        }
        (Presentation::CompactCode { .. }, Kind::Submeasure) => {
            convert(&convert(p, Kind::Generators)?, Kind::Submeasure)
        }
        (Presentation::Submeasure { name, ground, bound, table }, Kind::Generators) => {
            // Maximal members of the submeasure ideal.
            let members: Vec<u64> = (0..1u64 << ground)
                .filter(|&m| table[m as usize].le(bound))
                .collect();
            let gens: Vec<u64> = members
                .iter()
                .copied()
                .filter(|&m| {
                    m != 0 && !members.iter().any(|&o| o != m && o & m == m)
                })
                .collect();
            Ok(Presentation::Generators { name: name.clone(), ground: *ground, gens })
        }
        _ => unsupported(),
    }
}

/// Expand any 2-coloring into an explicit table over all tuples of its
/// arity from `[0, ground)`, so it can be written to disk.
pub fn tabulate(c: &TwoColoring, ground: usize) -> TwoColoring {
    if let TwoColoring::Table { .. } | TwoColoring::Constant { .. } | TwoColoring::Congruence { .. } =
        c
    {
        return c.clone();
    }
    let arity = c.arity();
    let mut table = BTreeMap::new();
    let mut elems: Vec<usize> = (0..arity).collect();
    loop {
        let mask = elems.iter().fold(0u64, |m, &e| m | 1 << e);
        table.insert(mask, c.eval(&elems));
        // next combination in lex order
        let mut i = arity;
        loop {
            if i == 0 {
                return TwoColoring::Table { arity, table };
            }
            i -= 1;
            if elems[i] + (arity - i) < ground {
                elems[i] += 1;
                for j in i + 1..arity {
                    elems[j] = elems[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// Scalar parsing/printing ---------------------------------------------------

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| ForgeError::InvalidArgument(format!("bad integer {s:?}")))
}

fn parse_mask(s: &str) -> Result<u64> {
    let digits = s
        .strip_prefix("0x")
        .ok_or_else(|| ForgeError::InvalidArgument(format!("mask {s:?} must start with 0x")))?;
    u64::from_str_radix(digits, 16)
        .map_err(|_| ForgeError::InvalidArgument(format!("bad mask {s:?}")))
}

pub fn dyadic_str(d: &Dyadic) -> String {
    format!("{}/2^{}", d.numerator(), d.exponent())
}

pub fn parse_dyadic(s: &str) -> Result<Dyadic> {
    let bad = || ForgeError::InvalidArgument(format!("bad dyadic {s:?}"));
    let (num, exp) = s.split_once("/2^").ok_or_else(bad)?;
    let num: u128 = num.parse().map_err(|_| bad())?;
    let exp: u32 = exp.parse().map_err(|_| bad())?;
    Ok(Dyadic::new(num, exp))
}

fn phi_str(v: &PhiValue) -> String {
    match v {
        PhiValue::Finite(d) => dyadic_str(d),
        PhiValue::Infinite => "inf".into(),
    }
}

fn parse_phi(s: &str) -> Result<PhiValue> {
    if s == "inf" {
        Ok(PhiValue::Infinite)
    } else {
        Ok(PhiValue::Finite(parse_dyadic(s)?))
    }
}

fn serialize_coloring(c: &TwoColoring) -> String {
    match c {
        TwoColoring::Table { arity, table } => {
            let entries: Vec<String> =
                table.iter().map(|(m, v)| format!("{m:#x}={v}")).collect();
            format!("table {arity} {}", entries.join(" "))
        }
        TwoColoring::Constant { arity, color } => format!("constant {arity} {color}"),
        TwoColoring::Congruence { modulus } => format!("congruence {modulus}"),
        other => serialize_coloring(&tabulate(other, 64)),
    }
}

fn parse_coloring(s: &str) -> Result<TwoColoring> {
    let bad = || ForgeError::InvalidArgument(format!("bad coloring {s:?}"));
    let mut parts = s.split_whitespace();
    match parts.next().ok_or_else(bad)? {
        "congruence" => {
            let modulus = parse_usize(parts.next().ok_or_else(bad)?)?;
            Ok(TwoColoring::Congruence { modulus })
        }
        "constant" => {
            let arity = parse_usize(parts.next().ok_or_else(bad)?)?;
            let color: u8 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            Ok(TwoColoring::Constant { arity, color })
        }
        "table" => {
            let arity = parse_usize(parts.next().ok_or_else(bad)?)?;
            let mut table = BTreeMap::new();
            for entry in parts {
                let (m, v) = entry.split_once('=').ok_or_else(bad)?;
                let mask = parse_mask(m)?;
                let color: u8 = v.parse().map_err(|_| bad())?;
                table.insert(mask, color);
            }
            Ok(TwoColoring::Table { arity, table })
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn roundtrip(p: &Presentation) {
        let text = p.serialize();
        let back = Presentation::parse(&text).expect("parse back");
        assert_eq!(&back, p, "round trip mismatch for:\n{text}");
        assert_eq!(back.serialize(), text, "serialization not stable");
    }

    #[test]
    fn generators_roundtrip_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let ground = rng.gen_range(1..=12);
            let count = rng.gen_range(1..=6);
            let gens: Vec<u64> = (0..count)
                .map(|_| rng.gen_range(1..1u64 << ground))
                .collect();
            roundtrip(&Presentation::Generators { name: "g".into(), ground, gens });
        }
    }

    #[test]
    fn compact_code_roundtrip_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let depth = rng.gen_range(1..=10);
            let count = rng.gen_range(1..=8);
            let branches: Vec<u64> =
                (0..count).map(|_| rng.gen_range(0..1u64 << depth)).collect();
            roundtrip(&Presentation::CompactCode { name: "c".into(), depth, branches });
        }
    }

    #[test]
    fn colorings_roundtrip() {
        let mut table = BTreeMap::new();
        table.insert(0b011u64, 1u8);
        table.insert(0b101u64, 0u8);
        table.insert(0b110u64, 1u8);
        let p = Presentation::Colorings {
            name: "seq".into(),
            ground: 3,
            colorings: vec![
                TwoColoring::Congruence { modulus: 2 },
                TwoColoring::Constant { arity: 3, color: 1 },
                TwoColoring::Table { arity: 2, table },
            ],
        };
        roundtrip(&p);
    }

    #[test]
    fn submeasure_roundtrip_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let ground = rng.gen_range(1..=6);
            let table: Vec<PhiValue> = (0..1u64 << ground)
                .map(|m| {
                    if m != 0 && rng.gen_bool(0.1) {
                        PhiValue::Infinite
                    } else {
                        PhiValue::Finite(Dyadic::new(
                            m.count_ones() as u128 * rng.gen_range(1..4),
                            rng.gen_range(0..3),
                        ))
                    }
                })
                .collect();
            // not necessarily a valid submeasure; the file format does not
            // validate axioms, materialization does
            roundtrip(&Presentation::Submeasure {
                name: "phi".into(),
                ground,
                bound: Dyadic::new(rng.gen_range(0..8), rng.gen_range(0..3)),
                table,
            });
        }
    }

    #[test]
    fn convert_generators_code_roundtrip() {
        // fin on [0,3): singleton generators; coded sets = singletons + empty
        let p = Presentation::Generators {
            name: "fin".into(),
            ground: 3,
            gens: vec![0b001, 0b010, 0b100],
        };
        let code = convert(&p, Kind::CompactCode).unwrap();
        let back = convert(&code, Kind::Generators).unwrap();
        // maximal coded sets are exactly the singletons
        match &back {
            Presentation::Generators { gens, .. } => {
                let mut sorted = gens.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, vec![0b001, 0b010, 0b100]);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn convert_membership_agrees_across_codings() {
        let p = Presentation::Generators {
            name: "x".into(),
            ground: 4,
            gens: vec![0b0011, 0b1100, 0b0101],
        };
        let ideal = p.to_ideal().unwrap();
        let code = convert(&p, Kind::CompactCode).unwrap().to_code().unwrap();
        let seq = convert(&p, Kind::Colorings).unwrap().to_sequence().unwrap();
        let size_bound = colorings_from_code(&code).unwrap().size_bound;
        let sub = convert(&p, Kind::Submeasure)
            .unwrap()
            .to_submeasure_ideal()
            .unwrap();
        for mask in 0..16u64 {
            let a = Subset::from_mask(4, mask);
            let grade1 = ideal.is_member_grade(&a, 1).unwrap();
            assert_eq!(code.codes_subset(mask), grade1, "code vs gens at {mask:#x}");
            assert_eq!(sub.is_member(&a), grade1, "submeasure vs gens at {mask:#x}");
            if a.len() >= size_bound {
                use ideal_forge::codings::is_simultaneously_monochromatic;
                assert_eq!(
                    is_simultaneously_monochromatic(&a, &seq),
                    grade1,
                    "colorings vs gens at {mask:#x}"
                );
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Presentation::parse("").is_err());
        assert!(Presentation::parse("forge-ideal 1\nname: x\n").is_err());
        assert!(Presentation::parse("forge-ideal 1\nname: x\nkind: nope\n").is_err());
        assert!(
            Presentation::parse("forge-ideal 1\nname: x\nkind: generators\ngen: 0x1\n").is_err(),
            "missing ground must be rejected"
        );
    }
}
