//! `whurwitz`: counts and verifies reflection factorizations from the command line.
//!
//! Exit status: 0 success, 1 verification mismatch, 2 usage or input error,
//! 3 budget exceeded.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{Format, Table};
use whurwitz::closed_forms::identities::{
    chebyshev_gf_holds, chebyshev_helpers, classical_chebyshev_gf, misprinted_chebyshev_gf, primitive_root_identities,
};
use whurwitz::closed_forms::{hurwitz_number, Partition};
use whurwitz::cutjoin::{cutjoin_rhs, prefix_poset, verify_rgs_recurrence};
use whurwitz::gram::fred_bruteforce;
use whurwitz::lattice::{Lattice, Oracle, DEFAULT_LATTICE_CEILING};
use whurwitz::parabolic::classify_pqc;
use whurwitz::perm_group::ElemId;
use whurwitz::real_group::{OrbitGroup, RootDatum};
use whurwitz::realization::Realization;
use whurwitz::rgs::{count_rgs_formula, enumerate_rgs, enumerate_rgs_graph, key_histogram};
use whurwitz::verify::{verification_matrix, VerificationRow};
use whurwitz::wreath::{GroupSpec, WreathGroup};
use whurwitz::Error;

#[derive(Parser)]
#[command(name = "whurwitz", version, about = "Reflection factorization counts in finite reflection groups")]
struct Cli {
    #[arg(long, value_enum, default_value_t, global = true)]
    format: Format,
    /// Enable the stretch presets (F4).
    #[arg(long, global = true)]
    stretch: bool,
    /// Largest group order for which the reflection-subgroup lattice is built.
    #[arg(long, global = true, default_value_t = DEFAULT_LATTICE_CEILING)]
    lattice_ceiling: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct GroupArgs {
    /// G(m,p,n) as "m,p,n".
    #[arg(long)]
    family: Option<String>,
    /// Real orbit group preset, e.g. B3, H3, I2(5).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Clone)]
struct ElementArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Element JSON: {"perm":[..],"colors":[..]} for G(m,p,n), {"word":[..]} for presets. Default: identity.
    #[arg(long)]
    element: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Group-level data.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Factorization counts of one element.
    Count {
        #[command(subcommand)]
        cmd: CountCmd,
    },
    /// Relative generating sets of one element.
    Rgs {
        #[command(subcommand)]
        cmd: RgsCmd,
    },
    /// Hurwitz number of a cycle type.
    Hurwitz {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
        genus: u32,
        /// Cycle type as "a,b,c".
        #[arg(long)]
        lambda: String,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Prefix poset of minimum-length full factorizations of the identity.
    Poset {
        #[command(flatten)]
        group: GroupArgs,
        /// Write the poset as a DOT file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, rank, reflections, classes and lattice size
    Info(GroupArgs),
}

#[derive(Subcommand)]
enum CountCmd {
    /// Reduced reflection factorizations (Fred).
    Reduced(ElementArgs),
    /// Full reflection factorizations: minimum length by default.
    Full {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        length: Option<usize>,
    },
}

#[derive(Subcommand)]
enum RgsCmd {
    /// Number of relative generating sets, with the Grammian-key histogram
    Count(ElementArgs),
    /// Every relative generating set with its Grammian key
    List(ElementArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Main theorem against the oracle, one row per conjugacy class.
    Main {
        #[command(flatten)]
        group: GroupArgs,
        /// Include classes that are not parabolic quasi-Coxeter.
        #[arg(long)]
        all_classes: bool,
        /// Skip the lattice oracle columns (for groups above the lattice ceiling).
        #[arg(long)]
        skip_oracle: bool,
    },
    /// Cut-and-join recursion and its relative-generating-set form.
    Cutjoin {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Primitive-root sums and Chebyshev helper values.
    Identities {
        #[arg(long, default_value_t = 200)]
        max_m: u64,
        #[arg(long, default_value_t = 50)]
        max_s: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Core(e) if e.is_budget() => write!(f, "budget exceeded: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A table plus whether every check in it passed.
struct Outcome {
    table: Table,
    ok: bool,
}

enum Ambient {
    Wreath(WreathGroup),
    Orbit(OrbitGroup),
}

impl Ambient {
    fn real(&self) -> &dyn Realization {
        match self {
            Ambient::Wreath(w) => w,
            Ambient::Orbit(o) => o,
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("cannot parse {what} {s:?}")))).collect()
}

fn load(args: &GroupArgs, stretch: bool) -> CliResult<Ambient> {
    match (&args.family, &args.preset) {
        (Some(f), None) => {
            let v: Vec<u32> = parse_list(f, "family")?;
            let [m, p, n] = v[..] else {
                return Err(CliError::Usage(format!("--family expects m,p,n, got {f:?}")));
            };
            Ok(Ambient::Wreath(WreathGroup::new(GroupSpec::new(m, p, n)?)?))
        }
        (None, Some(p)) => Ok(Ambient::Orbit(OrbitGroup::build(RootDatum::preset_ext(p, stretch)?)?)),
        _ => Err(CliError::Usage("give exactly one of --family or --preset".into())),
    }
}

fn element(real: &dyn Realization, text: &Option<String>) -> CliResult<ElemId> {
    Ok(match text {
        Some(t) => real.parse_element(t)?,
        None => real.group().identity(),
    })
}

fn oracle<'a>(real: &'a dyn Realization, ceiling: usize) -> CliResult<Oracle<'a>> {
    Ok(Oracle::with_ceiling(real, ceiling)?)
}

fn text(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn group_info(real: &dyn Realization, ceiling: usize) -> Outcome {
    let group = real.group();
    let orbit = real.as_orbit();
    let mut t = Table::new([
        "group",
        "order",
        "rank",
        "reflections",
        "conjugacy_classes",
        "well_generated",
        "real",
        "crystallographic",
        "coxeter_number",
        "connection_index",
        "reflection_subgroups",
    ]);
    let subgroups = Lattice::cached(real, ceiling).map(|l| json!(l.len())).unwrap_or(Value::Null);
    t.push(vec![
        json!(real.label()),
        text(group.order()),
        json!(real.rank()),
        json!(group.reflection_count()),
        json!(group.conjugacy_classes().len()),
        json!(real.well_generated()),
        json!(real.is_real()),
        json!(real.weyl().is_some()),
        orbit.map_or(Value::Null, |o| json!(o.coxeter_number())),
        real.weyl().map_or(Value::Null, |w| text(w.connection_index(group.all_reflections()))),
        subgroups,
    ]);
    Outcome { table: t, ok: true }
}

fn count_reduced(real: &dyn Realization, g: ElemId) -> Outcome {
    let mut t = Table::new(["group", "element", "lr", "count"]);
    t.push(vec![
        json!(real.label()),
        json!(real.element_text(g)),
        json!(real.group().length(g)),
        text(fred_bruteforce(real, g)),
    ]);
    Outcome { table: t, ok: true }
}

fn count_full(real: &dyn Realization, g: ElemId, length: Option<usize>, ceiling: usize) -> CliResult<Outcome> {
    let o = oracle(real, ceiling)?;
    let (len, count) = match length {
        Some(l) => (l, o.count_full(g, l)),
        None => o.ffull(g).ok_or_else(|| {
            CliError::Core(Error::Unsupported("no full factorization within the length bound".into()))
        })?,
    };
    let mut t = Table::new(["group", "element", "length", "count"]);
    t.push(vec![json!(real.label()), json!(real.element_text(g)), json!(len), text(count)]);
    Ok(Outcome { table: t, ok: true })
}

fn rgs_count(real: &dyn Realization, g: ElemId) -> CliResult<Outcome> {
    let class = classify_pqc(real, g)?;
    let records = enumerate_rgs(real, g)?;
    let (graph, formula) = match real.as_wreath() {
        Some(w) if class.case_tag.is_pqc() => {
            (text(enumerate_rgs_graph(w, &class, g)?.len()), text(count_rgs_formula(w.spec(), &class)?))
        }
        _ => (Value::Null, Value::Null),
    };
    let search = text(records.len());
    let ok = [&graph, &formula].iter().all(|v| v.is_null() || tsv_eq(v, &search));
    let mut t = Table::new(["group", "element", "case_tag", "search", "graph", "formula", "histogram"]);
    t.push(vec![
        json!(real.label()),
        json!(real.element_text(g)),
        json!(class.case_tag.label()),
        search,
        graph,
        formula,
        json!(key_histogram(&records)),
    ]);
    Ok(Outcome { table: t, ok })
}

fn tsv_eq(a: &Value, b: &Value) -> bool {
    output::tsv_cell(a) == output::tsv_cell(b)
}

fn rgs_list(real: &dyn Realization, g: ElemId) -> CliResult<Outcome> {
    let records = enumerate_rgs(real, g)?;
    let group = real.group();
    let mut t = Table::new(["index", "reflections", "elements", "grammian_key"]);
    for (i, r) in records.iter().enumerate() {
        let ids: Vec<usize> = r.reflections.iter().map(|j| j + 1).collect();
        let elems: Vec<String> = r.reflections.iter().map(|&j| real.element_text(group.reflection(j))).collect();
        t.push(vec![json!(i + 1), json!(ids), json!(elems), json!(r.grammian_key)]);
    }
    Ok(Outcome { table: t, ok: true })
}

fn hurwitz(genus: u32, lambda: &str) -> CliResult<Outcome> {
    let parts: Vec<u64> = parse_list(lambda, "cycle type")?;
    let p = Partition::new(parts)?;
    let value = hurwitz_number(genus, &p)?;
    let mut t = Table::new(["genus", "lambda", "value"]);
    t.push(vec![json!(genus), json!(p.parts()), text(value)]);
    Ok(Outcome { table: t, ok: true })
}

fn verify_main(real: &dyn Realization, all: bool, skip_oracle: bool, ceiling: usize) -> CliResult<Outcome> {
    let o = if skip_oracle { None } else { Some(oracle(real, ceiling)?) };
    let rows = verification_matrix(real, o.as_ref(), all)?;
    let ok = rows.iter().all(|r| r.matched);
    Ok(Outcome { table: Table::from_records(&rows, &VerificationRow::COLUMNS), ok })
}

fn verify_cutjoin(real: &dyn Realization, ceiling: usize) -> CliResult<Outcome> {
    let o = oracle(real, ceiling)?;
    let group = real.group();
    let mut reps: Vec<ElemId> = Vec::new();
    for class in group.conjugacy_classes() {
        if classify_pqc(real, class[0])?.case_tag.is_pqc() {
            reps.push(class[0]);
        }
    }
    reps.sort_by_key(|&g| (group.length(g), real.element_text(g)));
    let mut t = Table::new([
        "group",
        "representative",
        "lr",
        "first_sum",
        "second_sum",
        "cutjoin_rhs",
        "ffull_bruteforce",
        "first_sum_all_pqc",
        "recurrence_lhs",
        "recurrence_rhs",
        "recurrence_holds",
        "match",
    ]);
    let mut ok = true;
    for g in reps {
        let cj = cutjoin_rhs(&o, g)?;
        let oracle_value = o.ffull(g).map(|(_, c)| c);
        let recurrence = match verify_rgs_recurrence(&o, g) {
            Ok(r) => Some(r),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let matched = oracle_value.as_ref() == Some(&cj.total())
            && cj.first_all_pqc
            && recurrence.as_ref().is_none_or(|r| r.holds());
        ok &= matched;
        t.push(vec![
            json!(real.label()),
            json!(real.element_text(g)),
            json!(group.length(g)),
            text(&cj.first),
            text(&cj.second),
            text(cj.total()),
            oracle_value.map_or(Value::Null, text),
            json!(cj.first_all_pqc),
            recurrence.as_ref().map_or(Value::Null, |r| text(&r.lhs)),
            recurrence.as_ref().map_or(Value::Null, |r| text(&r.rhs)),
            recurrence.as_ref().map_or(Value::Null, |r| json!(r.holds())),
            json!(matched),
        ]);
    }
    Ok(Outcome { table: t, ok })
}

fn verify_identities(max_m: u64, max_s: u64) -> CliResult<Outcome> {
    if max_m < 2 || max_s < 1 {
        return Err(CliError::Usage("--max-m must be at least 2 and --max-s at least 1".into()));
    }
    let mut t = Table::new(["kind", "parameter", "values", "expected", "float_error", "ok"]);
    let mut ok = true;
    for m in 2..=max_m {
        let r = primitive_root_identities(m);
        let pass = r.exact_ok && r.float_ok;
        ok &= pass;
        t.push(vec![
            json!("primitive-root-sums"),
            json!(m),
            json!([r.first_exact, r.second_exact]),
            json!([r.first_expected, r.second_expected]),
            json!(r.first_float_error.max(r.second_float_error)),
            json!(pass),
        ]);
    }
    for s in 1..=max_s {
        let r = chebyshev_helpers(s);
        let s = s as u128;
        let expected = [2 * s + 1, s * (s + 1) * (2 * s + 1) / 3, 4 * s, 2 * s * (2 * s * s + 1) / 3];
        ok &= r.ok;
        t.push(vec![
            json!("chebyshev-helpers"),
            json!(r.s),
            json!([r.a_at_one, r.a_prime_at_one, r.b_at_one, r.b_prime_at_one]),
            json!(expected.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            Value::Null,
            json!(r.ok),
        ]);
    }
    // values: [classical denominator 1 + z² − 2xz, variant 1 + x² − 2xz]; only the first must hold.
    let terms = 2 * max_s as usize + 2;
    let (num, den) = classical_chebyshev_gf();
    let gf = chebyshev_gf_holds(&num, &den, terms);
    let (vnum, vden) = misprinted_chebyshev_gf();
    let variant = chebyshev_gf_holds(&vnum, &vden, terms);
    ok &= gf;
    t.push(vec![
        json!("chebyshev-generating-function"),
        json!(terms),
        json!([gf, variant]),
        json!([true, false]),
        Value::Null,
        json!(gf),
    ]);
    Ok(Outcome { table: t, ok })
}

fn poset(real: &dyn Realization, dot: &Option<PathBuf>, ceiling: usize) -> CliResult<Outcome> {
    let o = oracle(real, ceiling)?;
    let p = prefix_poset(&o)?;
    if let Some(path) = dot {
        std::fs::write(path, p.to_dot()).map_err(Error::from)?;
    }
    let middle: Vec<String> = p.elements_at(real.rank()).into_iter().map(|g| real.element_text(g)).collect();
    let sizes: Vec<usize> = p.ranks.iter().map(Vec::len).collect();
    let mut t =
        Table::new(["group", "nodes", "covers", "maximal_chains", "rank_sizes", "middle_rank_elements", "lemma_holds"]);
    t.push(vec![
        json!(real.label()),
        json!(p.nodes.len()),
        json!(p.covers.len()),
        text(&p.chain_count),
        json!(sizes),
        json!(middle),
        json!(p.lemma_holds),
    ]);
    Ok(Outcome { table: t, ok: p.lemma_holds })
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let ceiling = cli.lattice_ceiling;
    let stretch = cli.stretch;
    match cli.command {
        Command::Group { cmd: GroupCmd::Info(g) } => Ok(group_info(load(&g, stretch)?.real(), ceiling)),
        Command::Count { cmd } => match cmd {
            CountCmd::Reduced(e) => {
                let a = load(&e.group, stretch)?;
                let g = element(a.real(), &e.element)?;
                Ok(count_reduced(a.real(), g))
            }
            CountCmd::Full { element: e, length } => {
                let a = load(&e.group, stretch)?;
                let g = element(a.real(), &e.element)?;
                count_full(a.real(), g, length, ceiling)
            }
        },
        Command::Rgs { cmd } => {
            let (RgsCmd::Count(e) | RgsCmd::List(e)) = &cmd;
            let a = load(&e.group, stretch)?;
            let g = element(a.real(), &e.element)?;
            match cmd {
                RgsCmd::Count(_) => rgs_count(a.real(), g),
                RgsCmd::List(_) => rgs_list(a.real(), g),
            }
        }
        Command::Hurwitz { genus, lambda } => hurwitz(genus, &lambda),
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Main { group, all_classes, skip_oracle } => {
                verify_main(load(&group, stretch)?.real(), all_classes, skip_oracle, ceiling)
            }
            VerifyCmd::Cutjoin { group } => verify_cutjoin(load(&group, stretch)?.real(), ceiling),
            VerifyCmd::Identities { max_m, max_s } => verify_identities(max_m, max_s),
        },
        Command::Poset { group, dot } => poset(load(&group, stretch)?.real(), &dot, ceiling),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            print!("{}", out.table.render(format));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification mismatch");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
