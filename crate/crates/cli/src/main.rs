//! `forge` — command line front end for the finite ideal workbench.
//!
//! Exit codes: 0 on success, 1 on a negative verdict (not a member, no
//! reduction found, not tall, no hitting set, a failed verify run), 2 on
//! usage or input errors.

use clap::{Parser, Subcommand, ValueEnum};
use forge_cli::acceptance::{report_for, run_all, Profile};
use forge_cli::format::{convert, Kind, Presentation};
use forge_cli::report::ReportDocument;
use ideal_forge::catalog::{catalog_get, CatalogParams, NAMES};
use ideal_forge::ic::{
    defeat_reduction_demo, ic_ground_size, ic_membership, identity_on_ideal_selector, BlockPlan,
    BranchFunction, FunctionCode, ICPresentation, Node,
};
use ideal_forge::katetov::{diagram, search_reduction, SearchOutcome};
use ideal_forge::selectors::{
    interval_finite_selector, is_tall_finite, omega_hitting_check, IntervalPartition,
};
use ideal_forge::solecki::{
    check_cx_mass, lambda_map, max_cell_membership, omega_enumerate, solecki_selector,
};
use ideal_forge::{GradedIdeal, GroundSet, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "forge", version, about = "finite ideal workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Generators,
    CompactCode,
    Colorings,
    Submeasure,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Generators => Kind::Generators,
            KindArg::CompactCode => Kind::CompactCode,
            KindArg::Colorings => Kind::Colorings,
            KindArg::Submeasure => Kind::Submeasure,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Desk,
    Extended,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert a presentation file between coding kinds.
    Convert {
        /// Input presentation file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Target coding kind.
        #[arg(long)]
        to: KindArg,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cover-number membership in a catalog ideal, a presentation file,
    /// or (with --ic-depth) the branch-function presentation.
    Member {
        /// Catalog ideal name or presentation file path.
        #[arg(long)]
        ideal: Option<String>,
        /// Set elements, e.g. `0,3,5` — or node words like `e,0,01` in
        /// ic mode.
        #[arg(long)]
        set: String,
        /// Grade to decide membership at (reports the cover number
        /// either way).
        #[arg(long)]
        grade: Option<usize>,
        /// Evaluate the graded membership formula over `2^{<=d}` with
        /// the level-identity branch function instead.
        #[arg(long)]
        ic_depth: Option<usize>,
        /// Grade parameter n of the ic formula (default 1).
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Search for a reduction witness between two ideals.
    Reduce {
        /// Source ideal (catalog name or presentation file).
        #[arg(long)]
        from: String,
        /// Target ideal (catalog name or presentation file).
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 1)]
        grade: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Pairwise reduction searches over named ideals, rendered as DOT.
    Diagram {
        /// Comma-separated catalog names (default: the whole catalog).
        #[arg(long)]
        names: Option<String>,
        #[arg(long, default_value_t = 1)]
        grade: usize,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Finite tallness: every size-t subset holds a size-s piece of one
    /// generator.
    Tall {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: usize,
    },
    /// Search for a grade-k member meeting every set of a family
    /// (members separated by `;`, elements by `,`).
    Hitting {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        grade: usize,
    },
    /// Apply a selector to a set.
    Select {
        /// `interval`, or a catalog name whose entry carries a selector
        /// (finxfin, R, S).
        #[arg(long)]
        selector: String,
        #[arg(long)]
        set: String,
        /// Cutpoints for the interval selector, e.g. `0,4,8`.
        #[arg(long)]
        cutpoints: Option<String>,
    },
    /// Walk the averaging / trimming / branch-selection pipeline on a
    /// subfamily of the half-measure clopen sets.
    SoleckiDemo {
        #[arg(long, default_value_t = 2)]
        resolution: usize,
        /// Indices into the enumeration (default `0,1,2`).
        #[arg(long)]
        indices: Option<String>,
    },
    /// Build the anti-reduction branch function against a seeded code
    /// and report the defeating witness.
    AntiReductionDemo {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        grade: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block plan prefix, e.g. `2,3`.
        #[arg(long, default_value = "2,3")]
        plan: String,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
        profile: ProfileArg,
        /// Write the report here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Distinguishes "the computation said no" (exit 1) from bad input
/// (exit 2).
enum Failure {
    Negative(String),
    Usage(String),
}

type CmdResult = Result<ReportDocument, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Convert { input, to, out } => cmd_convert(&input, to.into(), out.as_deref()),
        Cmd::Member { ideal, set, grade, ic_depth, n } => {
            cmd_member(ideal.as_deref(), &set, grade, ic_depth, n)
        }
        Cmd::Reduce { from, to, grade, budget } => cmd_reduce(&from, &to, grade, budget),
        Cmd::Diagram { names, grade, budget } => cmd_diagram(names.as_deref(), grade, budget),
        Cmd::Tall { ideal, t, s } => cmd_tall(&ideal, t, s),
        Cmd::Hitting { ideal, family, grade } => cmd_hitting(&ideal, &family, grade),
        Cmd::Select { selector, set, cutpoints } => {
            cmd_select(&selector, &set, cutpoints.as_deref())
        }
        Cmd::SoleckiDemo { resolution, indices } => {
            cmd_solecki_demo(resolution, indices.as_deref())
        }
        Cmd::AntiReductionDemo { depth, grade, seed, plan } => {
            cmd_anti_reduction_demo(depth, grade, seed, &plan)
        }
        Cmd::Verify { seed, profile, out } => cmd_verify(seed, profile, out.as_deref()),
    };
    match result {
        Ok(doc) => {
            print!("{}", doc.render());
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// Shared helpers ------------------------------------------------------------

fn parse_elems(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse().map_err(|_| usage(format!("bad element {p:?}"))))
        .collect()
}

fn subset_from_list(ground: usize, s: &str) -> Result<Subset, Failure> {
    let elems = parse_elems(s)?;
    if let Some(&e) = elems.iter().find(|&&e| e >= ground) {
        return Err(usage(format!("element {e} outside ground [0,{ground})")));
    }
    Ok(Subset::from_elems(ground, &elems))
}

/// Resolve a catalog name or a generators presentation file.
fn load_ideal(name: &str) -> Result<GradedIdeal, Failure> {
    if NAMES.contains(&name) {
        return catalog_get(name, &CatalogParams::default())
            .map(|e| e.ideal)
            .map_err(usage);
    }
    let text = std::fs::read_to_string(name)
        .map_err(|e| usage(format!("cannot read {name}: {e}")))?;
    let p = Presentation::parse(&text).map_err(usage)?;
    p.to_ideal().map_err(usage)
}

fn describe_ideal(doc: &mut ReportDocument, ideal: &GradedIdeal) {
    doc.value("ideal", ideal.name.clone())
        .uint("ground", ideal.ground.size as u64)
        .uint("generators", ideal.generators.len() as u64);
}

// Commands ------------------------------------------------------------------

fn cmd_convert(input: &std::path::Path, to: Kind, out: Option<&std::path::Path>) -> CmdResult {
    let text = std::fs::read_to_string(input)
        .map_err(|e| usage(format!("cannot read {}: {e}", input.display())))?;
    let p = Presentation::parse(&text).map_err(usage)?;
    let converted = convert(&p, to).map_err(usage)?;
    let serialized = converted.serialize();
    match out {
        Some(path) => {
            std::fs::write(path, &serialized)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            let mut doc = ReportDocument::new();
            doc.value("command", "convert")
                .value("from", p.kind().as_str())
                .value("to", converted.kind().as_str())
                .value("out", path.display().to_string());
            Ok(doc)
        }
        None => {
            // raw file text, not a report
            print!("{serialized}");
            Ok(ReportDocument::new())
        }
    }
}

fn cmd_member(
    ideal: Option<&str>,
    set: &str,
    grade: Option<usize>,
    ic_depth: Option<usize>,
    n: usize,
) -> CmdResult {
    let mut doc = ReportDocument::new();
    doc.value("command", "member");
    if let Some(d) = ic_depth {
        let nodes: Result<std::collections::BTreeSet<Node>, _> =
            set.split(',').map(|w| Node::from_bits_str(w.trim())).collect();
        let nodes = nodes.map_err(usage)?;
        let p = ICPresentation::new(d, BranchFunction::level_identity(d)).map_err(usage)?;
        let member = ic_membership(&nodes, &p, n).map_err(usage)?;
        doc.uint("depth", d as u64)
            .uint("n", n as u64)
            .uint("nodes", nodes.len() as u64)
            .flag("member", member);
        return if member {
            Ok(doc)
        } else {
            Err(Failure::Negative(doc.render()))
        };
    }
    let name = ideal.ok_or_else(|| usage("--ideal is required outside ic mode"))?;
    // submeasure files grade by their bound, not by cover number
    if !NAMES.contains(&name) {
        if let Ok(text) = std::fs::read_to_string(name) {
            if let Ok(p) = Presentation::parse(&text) {
                if p.kind() == Kind::Submeasure {
                    let si = p.to_submeasure_ideal().map_err(usage)?;
                    let a = subset_from_list(si.phi.ground_size(), set)?;
                    let member = si.is_member(&a);
                    doc.value("ideal", p.name().to_string())
                        .value("grading", si.grading)
                        .dyadic("bound", &si.bound)
                        .flag("member", member);
                    return if member {
                        Ok(doc)
                    } else {
                        Err(Failure::Negative(doc.render()))
                    };
                }
            }
        }
    }
    let ideal = load_ideal(name)?;
    let a = subset_from_list(ideal.ground.size, set)?;
    describe_ideal(&mut doc, &ideal);
    let cover = ideal.cover_number(&a).map_err(usage)?;
    doc.value("cover-number", cover.to_string());
    match grade {
        None => Ok(doc),
        Some(k) => {
            let member = cover.le(k);
            doc.uint("grade", k as u64).flag("member", member);
            if member {
                Ok(doc)
            } else {
                Err(Failure::Negative(doc.render()))
            }
        }
    }
}

fn cmd_reduce(from: &str, to: &str, grade: usize, budget: u64) -> CmdResult {
    let from_ideal = load_ideal(from)?;
    let to_ideal = load_ideal(to)?;
    let mut doc = ReportDocument::new();
    doc.value("command", "reduce")
        .value("from", from)
        .value("to", to)
        .uint("grade", grade as u64)
        .uint("budget", budget);
    match search_reduction(&from_ideal, &to_ideal, grade, budget).map_err(usage)? {
        SearchOutcome::Found(w) => {
            doc.value("status", "found")
                .list("witness", w.map.iter().map(|v| v.to_string()));
            Ok(doc)
        }
        SearchOutcome::NotFound => {
            doc.value("status", "not-found");
            Err(Failure::Negative(doc.render()))
        }
        SearchOutcome::BudgetExhausted => {
            doc.value("status", "budget-exhausted");
            Err(Failure::Negative(doc.render()))
        }
    }
}

fn cmd_diagram(names: Option<&str>, grade: usize, budget: u64) -> CmdResult {
    let params = CatalogParams::default();
    let picked: Vec<&str> = match names {
        Some(list) => list.split(',').map(str::trim).collect(),
        None => NAMES.to_vec(),
    };
    let mut entries = Vec::new();
    for name in picked {
        let entry = catalog_get(name, &params).map_err(usage)?;
        entries.push((entry.name.clone(), entry.ideal));
    }
    let scale = format!("catalog defaults, budget {budget}");
    let d = diagram(&entries, &scale, grade, budget).map_err(usage)?;
    print!("{}", d.to_dot());
    Ok(ReportDocument::new())
}

fn cmd_tall(ideal: &str, t: usize, s: usize) -> CmdResult {
    let ideal = load_ideal(ideal)?;
    let rep = is_tall_finite(&ideal, t, s).map_err(usage)?;
    let mut doc = ReportDocument::new();
    doc.value("command", "tall");
    describe_ideal(&mut doc, &ideal);
    doc.uint("t", t as u64).uint("s", s as u64).flag("tall", rep.tall);
    if let Some(w) = &rep.counterexample {
        doc.list("counterexample", w.iter().map(|x| x.to_string()));
    }
    if rep.tall {
        Ok(doc)
    } else {
        Err(Failure::Negative(doc.render()))
    }
}

fn cmd_hitting(ideal: &str, family: &str, grade: usize) -> CmdResult {
    let ideal = load_ideal(ideal)?;
    let sets: Result<Vec<Subset>, Failure> = family
        .split(';')
        .map(|part| subset_from_list(ideal.ground.size, part))
        .collect();
    let sets = sets?;
    let mut doc = ReportDocument::new();
    doc.value("command", "hitting");
    describe_ideal(&mut doc, &ideal);
    doc.uint("family-size", sets.len() as u64).uint("grade", grade as u64);
    match omega_hitting_check(&ideal, &sets, grade).map_err(usage)? {
        Some(w) => {
            doc.value("status", "found")
                .list("witness", w.iter().map(|x| x.to_string()));
            Ok(doc)
        }
        None => {
            doc.value("status", "none");
            Err(Failure::Negative(doc.render()))
        }
    }
}

fn cmd_select(selector: &str, set: &str, cutpoints: Option<&str>) -> CmdResult {
    let mut doc = ReportDocument::new();
    doc.value("command", "select").value("selector", selector);
    let (sel, ground) = match selector {
        "interval" => {
            let cut = parse_elems(
                cutpoints.ok_or_else(|| usage("interval selector needs --cutpoints"))?,
            )?;
            let partition = IntervalPartition::new(cut).map_err(usage)?;
            let ground = partition.ground_size();
            let parts = partition.interval_count();
            (interval_finite_selector(partition, parts), ground)
        }
        name => {
            let entry = catalog_get(name, &CatalogParams::default()).map_err(usage)?;
            let ground = entry.ideal.ground.size;
            let sel = entry
                .selector
                .ok_or_else(|| usage(format!("catalog entry {name} has no selector")))?;
            (sel, ground)
        }
    };
    let a = subset_from_list(ground, set)?;
    let out = sel.select(&a);
    doc.value("name", sel.name.clone())
        .uint("grade-bound", sel.grade_bound as u64)
        .uint("input-size", a.len() as u64)
        .list("selected", out.iter().map(|x| x.to_string()));
    Ok(doc)
}

fn cmd_solecki_demo(resolution: usize, indices: Option<&str>) -> CmdResult {
    let omega = omega_enumerate(resolution).map_err(usage)?;
    let idx = match indices {
        Some(list) => parse_elems(list)?,
        None => vec![0, 1, 2],
    };
    if let Some(&i) = idx.iter().find(|&&i| i >= omega.len()) {
        return Err(usage(format!(
            "index {i} outside the enumeration (|Omega_{resolution}| = {})",
            omega.len()
        )));
    }
    let x: Vec<_> = idx.iter().map(|&i| omega[i].clone()).collect();
    let mut doc = ReportDocument::new();
    doc.value("command", "solecki-demo")
        .uint("resolution", resolution as u64)
        .uint("family-size", x.len() as u64)
        .list("indices", idx.iter().map(|i| i.to_string()));
    let m = x.len().div_ceil(2);
    doc.uint("threshold", m as u64)
        .uint("max-cell-membership", max_cell_membership(&x).map_err(usage)? as u64)
        .dyadic("cx-mass", &check_cx_mass(&x, m).map_err(usage)?);
    let lambda = lambda_map(&x, x.len() + 1).map_err(usage)?;
    let mut levels = ReportDocument::new();
    for (i, lvl) in lambda.per_n.iter().enumerate() {
        levels.list(format!("n-{}", i + 1), lvl.iter().map(|v| v.to_string()));
    }
    doc.section("lambda", levels);
    doc.dyadic("uncovered-mass", &lambda.uncovered_mass);
    if x.len() >= 2 {
        let sel = solecki_selector(&x).map_err(usage)?;
        let mut s = ReportDocument::new();
        s.list("family", sel.family.iter().map(|v| v.to_string()))
            .list("common-cells", sel.common_cells.iter().map(|c| c.to_string()))
            .uint("depth-achieved", sel.depth_achieved as u64)
            .uint("depth-requested", sel.depth_requested as u64)
            .uint("distinct-members", sel.distinct_members as u64);
        doc.section("selector", s);
    }
    Ok(doc)
}

fn cmd_anti_reduction_demo(depth: usize, grade: usize, seed: u64, plan: &str) -> CmdResult {
    let plan = BlockPlan::new(parse_elems(plan)?).map_err(usage)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map: Vec<usize> = (0..ic_ground_size(depth)).map(|_| rng.gen_range(0..2)).collect();
    let code = FunctionCode::new(depth, 2, map).map_err(usage)?;
    let gens = vec![Subset::singleton(2, 0), Subset::singleton(2, 1)];
    let fin2 = GradedIdeal::new(GroundSet::new(2, "fin").map_err(usage)?, gens, "fin")
        .map_err(usage)?;
    let selector = identity_on_ideal_selector(fin2.clone(), 2);
    let mut doc = ReportDocument::new();
    doc.value("command", "anti-reduction-demo")
        .uint("depth", depth as u64)
        .uint("grade", grade as u64)
        .uint("seed", seed);
    match defeat_reduction_demo(&code, &fin2, &selector, grade, &plan) {
        Ok(rep) => {
            doc.value("status", "defeated")
                .value("branch", format!("{:?}", rep.branch))
                .list("theta", rep.theta.iter().map(|l| l.to_string()))
                .uint("witness-size", rep.witness.len() as u64)
                .uint("max-defeated", rep.max_defeated as u64)
                .flag("selected-grade-ok", rep.selected_grade_ok);
            Ok(doc)
        }
        Err(e) => {
            doc.value("status", "not-defeated").value("reason", e.to_string());
            Err(Failure::Negative(doc.render()))
        }
    }
}

fn cmd_verify(seed: u64, profile: ProfileArg, out: Option<&std::path::Path>) -> CmdResult {
    let profile = match profile {
        ProfileArg::Desk => Profile::Desk,
        ProfileArg::Extended => Profile::Extended,
    };
    let outcomes = run_all(seed, profile);
    let doc = report_for(seed, profile, &outcomes);
    if let Some(path) = out {
        std::fs::write(path, doc.render())
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if outcomes.iter().all(|o| o.passed) {
        Ok(doc)
    } else {
        Err(Failure::Negative(doc.render()))
    }
}
