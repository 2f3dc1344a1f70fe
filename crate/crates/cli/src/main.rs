use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tatekit::algebra::Algebra;
use tatekit::corpus::{builtin_algebras, corpus_modules, gorenstein_ideals, NamedModule};
use tatekit::homalg::{self, Session};
use tatekit::invariants::{self, DEFAULT_HORIZON};
use tatekit::io::{self, AlgebraFile, AlgebraSource, FieldSpec, ModuleFile};
use tatekit::linkage::{self, LinkageDatum};
use tatekit::modrep::{self, IsoSearch, Module};
use tatekit::theorems::{self, BatteryResult, Checker, ALL_CHECKS};
use tatekit::{Error, Ideal, TateTable};

const EXIT_REFUTED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tatekit", version, about = "Tate cohomology and linkage over local Gorenstein algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe an algebra and optionally a module over it.
    Info {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long = "M")]
        module: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Write an algebra or module file.
    Gen(GenArgs),
    /// Print a window of the complete resolution of a module.
    Resolve {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        module: PathBuf,
        /// Also print every differential.
        #[arg(long)]
        differentials: bool,
    },
    /// Dimensions of Tate Ext or Tor on a window.
    Tate {
        kind: TateKind,
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: PathBuf,
        #[arg(long = "N")]
        n: PathBuf,
    },
    /// Stable Betti and Bass numbers of a module.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        module: PathBuf,
    },
    /// Test whether two modules are linked, or print the link of one.
    Link {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long = "M")]
        m: PathBuf,
        #[arg(long = "N")]
        n: Option<PathBuf>,
        /// Generators of the linking ideal as basis labels, e.g. `x^2`.
        #[arg(long, value_delimiter = ',')]
        ideal: Vec<String>,
        #[arg(long, value_parser = io_seed, default_value = "0xC0FFEE")]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run theorem checks over a module corpus.
    Verify {
        /// `all` or one check id.
        check: String,
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Corpus::Builtin)]
        corpus: Corpus,
        /// Restrict the corpus to these module files.
        #[arg(long = "M")]
        modules: Vec<PathBuf>,
        #[arg(long, default_value = "-8:8", allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_parser = io_seed, default_value = "0xC0FFEE")]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        #[arg(long)]
        json: bool,
        /// Print the compared tables under each report.
        #[arg(long)]
        evidence: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long, default_value = "-8:8", allow_hyphen_values = true)]
    window: String,
    #[arg(long, value_parser = io_seed, default_value = "0xC0FFEE")]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long = "char", default_value_t = 2)]
    characteristic: u64,
    /// Exponents for `ci`, e.g. `2,2`.
    #[arg(long)]
    powers: Option<String>,
    #[arg(long)]
    vars: Option<String>,
    /// Monomial generators for `monomial`, e.g. `x^2,xy,y^2`.
    #[arg(long)]
    monomials: Option<String>,
    /// Algebra file for module families.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Ideal generators for `cyclic`, as basis labels.
    #[arg(long, value_delimiter = ',')]
    ideal: Vec<String>,
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Embed the algebra in the module file instead of referencing it.
    #[arg(long)]
    inline: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Monomial complete intersection `F_p[x..]/(x^a, ..)`.
    Ci,
    /// Quotient by a monomial ideal.
    Monomial,
    /// Structure-constant form of an existing algebra.
    Structure,
    Residue,
    Free,
    Cyclic,
}

#[derive(Clone, Copy, ValueEnum)]
enum TateKind {
    Ext,
    Tor,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Corpus {
    Builtin,
}

fn io_seed(s: &str) -> Result<u64, String> {
    io::parse_seed(s).map_err(|e| e.to_string())
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BudgetExhausted(_) | Error::HypothesisNotCertified(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Arc<Algebra>, Failure> {
    Ok(Arc::new(io::parse_algebra(&read(path)?, &path.display().to_string())?))
}

/// Loads a module over `algebra`. Algebra paths inside module files are
/// resolved against the module file's directory first.
fn load_module(path: &Path, algebra: &Arc<Algebra>) -> Result<Module, Failure> {
    let text = read(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let load = |p: &str| -> tatekit::Result<Algebra> {
        let near = dir.join(p);
        let chosen = if near.exists() { near } else { PathBuf::from(p) };
        let text = std::fs::read_to_string(&chosen)
            .map_err(|e| Error::Parse { location: chosen.display().to_string(), message: e.to_string() })?;
        io::parse_algebra(&text, &chosen.display().to_string())
    };
    Ok(io::parse_module(&text, &path.display().to_string(), algebra, load)?)
}

fn module_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn write_output(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn element_by_label(algebra: &Algebra, label: &str) -> Result<Vec<u32>, Failure> {
    let i = algebra.label_index(label.trim()).ok_or_else(|| {
        input_error(format!("ideal: no basis element {label:?}; basis is {}", algebra.labels().join(" ")))
    })?;
    Ok(algebra.basis_element(i))
}

fn ideal_from_labels(algebra: &Arc<Algebra>, labels: &[String]) -> Result<Ideal, Failure> {
    let gens = labels.iter().map(|l| element_by_label(algebra, l)).collect::<Result<Vec<_>, _>>()?;
    Ok(Ideal::generated_by(algebra, &gens)?)
}

fn search(seed: u64) -> IsoSearch {
    IsoSearch { seed, ..IsoSearch::default() }
}

fn dims_line(t: &TateTable) -> String {
    t.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
}

fn period_line(t: &TateTable) -> String {
    match t.period {
        Some(p) => format!("period {} from degree {}", p.p, p.from),
        None => "period not detected".into(),
    }
}

fn info(algebra: &Path, module: Option<&Path>, horizon: usize) -> CmdResult {
    let a = load_algebra(algebra)?;
    println!("field       F_{}", a.field().characteristic());
    println!("dimension   {}", a.dim());
    println!("basis       {}", a.labels().join(" "));
    println!("radical     dimension {}, {} generators", a.radical_basis().len(), a.radical_generators().len());
    println!("socle       dimension {}", a.socle_dim());
    println!("gorenstein  {}", if a.is_gorenstein() { "yes" } else { "no" });
    if let Some(path) = module {
        let m = load_module(path, &a)?;
        let (gens, _) = modrep::minimal_generators(&m);
        let (_, free) = homalg::strip_free(&m);
        let c = invariants::complexity_estimate(&m, horizon);
        println!("module      {} (dimension {})", module_name(path), m.kdim());
        println!("generators  {gens}");
        println!("free part   rank {free}");
        let betti = homalg::betti_numbers(&m, horizon);
        println!("betti       {}", betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "));
        let certified = if c.certified { "certified" } else { "estimate" };
        println!("complexity  {:?} ({certified}, horizon {})", c.bound, c.horizon);
        println!("gdim zero   {}", invariants::gdim_is_zero(&m));
    }
    Ok(0)
}

/// The algebra path to record in a module file: the bare file name when
/// both files share a directory, otherwise the path as given.
fn algebra_reference(algebra: &Path, output: Option<&Path>) -> String {
    let dir = |p: &Path| p.parent().and_then(|d| std::fs::canonicalize(if d.as_os_str().is_empty() { Path::new(".") } else { d }).ok());
    match (output, algebra.file_name()) {
        (Some(out), Some(name)) if dir(out).is_some() && dir(out) == dir(algebra) => name.to_string_lossy().into_owned(),
        _ => algebra.display().to_string(),
    }
}

fn gen(args: &GenArgs) -> CmdResult {
    let field = FieldSpec { char: args.characteristic };
    let text = match args.family {
        Family::Ci => {
            let powers = io::parse_list(args.powers.as_deref().ok_or_else(|| input_error("--powers is required"))?, "powers")?;
            let vars = io::parse_vars(args.vars.as_deref(), powers.len())?;
            let file = AlgebraFile::MonomialCi { field, vars, powers };
            file.build()?;
            file.to_json()
        }
        Family::Monomial => {
            let text = args.monomials.as_deref().ok_or_else(|| input_error("--monomials is required"))?;
            let vars = match args.vars.as_deref() {
                Some(v) => io::parse_vars(Some(v), 0)?,
                None => {
                    let count = ["x", "y", "z", "w"].iter().rposition(|v| text.contains(v)).map_or(1, |i| i + 1);
                    io::parse_vars(None, count)?
                }
            };
            let monomials = io::parse_monomials(text, &vars)?;
            let file = AlgebraFile::Monomial { field, vars, monomials };
            file.build()?;
            file.to_json()
        }
        Family::Structure | Family::Residue | Family::Free | Family::Cyclic => {
            let path = args.algebra.as_deref().ok_or_else(|| input_error("--algebra is required"))?;
            let a = load_algebra(path)?;
            let source = if args.inline {
                AlgebraSource::Inline(AlgebraFile::parse(&read(path)?, &path.display().to_string())?)
            } else {
                AlgebraSource::Path(algebra_reference(path, args.output.as_deref()))
            };
            match args.family {
                Family::Structure => AlgebraFile::from_algebra(&a).to_json(),
                Family::Residue => ModuleFile::from_module(&Module::residue_field(&a), Some(source)).to_json(),
                Family::Free => ModuleFile::from_module(&Module::free(&a, args.rank), Some(source)).to_json(),
                _ => {
                    if args.ideal.is_empty() {
                        return Err(input_error("--ideal is required"));
                    }
                    let ideal = args
                        .ideal
                        .iter()
                        .map(|l| Ok(element_by_label(&a, l)?.into_iter().map(i64::from).collect()))
                        .collect::<Result<Vec<Vec<i64>>, Failure>>()?;
                    let file = ModuleFile::Cyclic { algebra: Some(source), ideal };
                    file.build(&a)?;
                    file.to_json()
                }
            }
        }
    };
    write_output(args.output.as_deref(), &text)?;
    Ok(0)
}

fn resolve(common: &Common, module: &Path, differentials: bool) -> CmdResult {
    let a = load_algebra(&common.algebra)?;
    let m = load_module(module, &a)?;
    let (lo, hi) = io::parse_window(&common.window)?;
    let t = homalg::complete_resolution(&m, lo, hi)?;
    let checks = t.checks();
    let ranks: Vec<usize> = (lo..=hi).map(|i| t.rank(i)).collect();
    if common.json {
        let out = json!({"lo": lo, "hi": hi, "ranks": ranks, "stripped_rank": t.stripped_rank, "checks": checks});
        println!("{out}");
    } else {
        let width = ranks.iter().map(|r| r.to_string().len()).max().unwrap_or(1).max(3);
        let degrees: Vec<String> = (lo..=hi).map(|i| format!("{i:>width$}")).collect();
        let cells: Vec<String> = ranks.iter().map(|r| format!("{r:>width$}")).collect();
        println!("degree {}", degrees.join(" "));
        println!("rank   {}", cells.join(" "));
        println!("free summands stripped: rank {}", t.stripped_rank);
        println!(
            "squares vanish: {}; exact: {}; dual exact: {}; minimal: {}",
            checks.squares_vanish, checks.exact, checks.dual_exact, checks.minimal
        );
        if differentials {
            for i in (lo + 1)..=hi {
                println!("d_{i} = {:?}", t.differential(i));
            }
        }
    }
    Ok(if checks.all() { 0 } else { EXIT_REFUTED })
}

fn tate(kind: TateKind, common: &Common, m: &Path, n: &Path) -> CmdResult {
    let a = load_algebra(&common.algebra)?;
    let mm = load_module(m, &a)?;
    let nn = load_module(n, &a)?;
    let (lo, hi) = io::parse_window(&common.window)?;
    let session = Session::new(search(common.seed));
    let table = match kind {
        TateKind::Ext => session.tate_ext(&mm, &nn, lo, hi)?,
        TateKind::Tor => session.tate_tor(&mm, &nn, lo, hi)?,
    };
    if common.json {
        println!("{}", io::table_to_json(&table));
    } else {
        println!("{}", dims_line(&table));
        println!("{}", period_line(&table));
    }
    Ok(0)
}

fn profile(common: &Common, module: &Path) -> CmdResult {
    let a = load_algebra(&common.algebra)?;
    let m = load_module(module, &a)?;
    let (lo, hi) = io::parse_window(&common.window)?;
    let p = invariants::profile_in(&Session::new(search(common.seed)), &m, lo, hi)?;
    if common.json {
        println!("{}", serde_json::to_string(&p).expect("profiles serialize"));
    } else {
        let join = |v: &[usize]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
        println!("window         {lo}:{hi}");
        println!("stable betti   {}", join(&p.stable_betti));
        println!("stable bass    {}", join(&p.stable_bass));
        println!("betti          {}", join(&p.ordinary_betti));
        match p.period {
            Some(per) => println!("period         {} from degree {}", per.p, per.from),
            None => println!("period         not detected"),
        }
    }
    Ok(0)
}

fn link(
    algebra: &Path,
    m: &Path,
    n: Option<&Path>,
    ideal: &[String],
    seed: u64,
    output: Option<&Path>,
    as_json: bool,
) -> CmdResult {
    let a = load_algebra(algebra)?;
    let mm = load_module(m, &a)?;
    let datum = LinkageDatum::new(&a, &ideal_from_labels(&a, ideal)?)?;
    let Some(n) = n else {
        let over_base = datum.restrict(&mm)?;
        let linked = datum.inflate(&linkage::link_operator(&over_base)?)?;
        let source = AlgebraSource::Path(algebra.display().to_string());
        write_output(output, &ModuleFile::from_module(&linked, Some(source)).to_json())?;
        return Ok(0);
    };
    let nn = load_module(n, &a)?;
    let check = linkage::is_linked_with(&mm, &nn, &datum, &search(seed))?;
    let mat = |h: &Option<modrep::ModuleHom>| {
        h.as_ref().map(|h| (0..h.mat().rows()).map(|r| h.mat().row(r).to_vec()).collect::<Vec<_>>())
    };
    if as_json {
        let out = json!({
            "linked": check.linked,
            "undetermined": check.undetermined,
            "reason": check.reason,
            "quotient_gorenstein": datum.gorenstein,
            "forward": mat(&check.forward),
            "backward": mat(&check.backward),
        });
        println!("{out}");
    } else {
        println!("linked: {}", if check.linked { "yes" } else { "no" });
        if let Some(reason) = &check.reason {
            println!("reason: {reason}");
        }
        if check.undetermined {
            println!("isomorphism search ran out of budget");
        }
        for (name, h) in [("M -> lambda N", &check.forward), ("N -> lambda M", &check.backward)] {
            if let Some(rows) = mat(h) {
                println!("{name}: {rows:?}");
            }
        }
    }
    if check.undetermined && !check.linked {
        return Err(Failure { code: EXIT_BUDGET, message: "linkage undetermined within the search budget".into() });
    }
    Ok(0)
}

struct AlgebraRun {
    name: String,
    result: BatteryResult,
    controls: Vec<(String, Result<(), Error>)>,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    check: &str,
    algebra: Option<&Path>,
    modules: &[PathBuf],
    window: &str,
    seed: u64,
    horizon: usize,
    as_json: bool,
    evidence: bool,
) -> CmdResult {
    let filter = match check {
        "all" => None,
        c if ALL_CHECKS.contains(&c) => Some(c),
        c => return Err(input_error(format!("unknown check {c:?}; expected all or one of {}", ALL_CHECKS.join(", ")))),
    };
    let (lo, hi) = io::parse_window(window)?;
    let targets: Vec<(String, Arc<Algebra>)> = match algebra {
        Some(path) => {
            let a = load_algebra(path)?;
            a.require_gorenstein()?;
            vec![(path.display().to_string(), a)]
        }
        None if !modules.is_empty() => return Err(input_error("--M needs --algebra")),
        None => builtin_algebras().into_iter().map(|a| (a.name, a.algebra)).collect(),
    };
    let mut runs = Vec::new();
    for (name, a) in targets {
        if !a.is_gorenstein() {
            runs.push(AlgebraRun { name, result: BatteryResult::default(), controls: theorems::negative_controls(&a) });
            continue;
        }
        let corpus: Vec<NamedModule> = if modules.is_empty() {
            corpus_modules(&a)
        } else {
            modules.iter().map(|p| Ok(NamedModule::new(module_name(p), load_module(p, &a)?))).collect::<Result<_, Failure>>()?
        };
        let mut checker = Checker::with_seed(lo, hi, seed);
        checker.horizon = horizon;
        let result = theorems::run_battery(&checker, &corpus, &gorenstein_ideals(&a), filter);
        runs.push(AlgebraRun { name, result, controls: Vec::new() });
    }

    let refuted: usize = runs.iter().map(|r| r.result.refuted()).sum();
    let leaked: usize = runs
        .iter()
        .flat_map(|r| &r.controls)
        .filter(|(_, o)| !matches!(o, Err(Error::NotGorenstein { .. })))
        .count();
    let budget = runs.iter().flat_map(|r| &r.result.failures).filter(|f| f.budget).count();
    let errors = runs.iter().flat_map(|r| &r.result.failures).filter(|f| !f.budget).count();

    if as_json {
        let out: Vec<_> = runs
            .iter()
            .map(|r| {
                let controls: Vec<_> = r
                    .controls
                    .iter()
                    .map(|(op, o)| json!({"operation": op, "rejected": o.is_err(), "error": o.as_ref().err().map(|e| e.to_string())}))
                    .collect();
                json!({"algebra": r.name, "reports": r.result.reports, "failures": r.result.failures, "negative_controls": controls})
            })
            .collect();
        println!("{}", serde_json::to_string(&out).expect("reports serialize"));
    } else {
        for r in &runs {
            println!("== {}", r.name);
            for report in &r.result.reports {
                println!("{}", report.summary());
                if evidence || report.refuted() {
                    for e in &report.evidence {
                        println!("    {:<24} [{}:{}] {}", e.label, e.table.lo, e.table.hi, dims_line(&e.table));
                    }
                    for note in &report.notes {
                        println!("    note: {note}");
                    }
                }
            }
            for f in &r.result.failures {
                println!("{:<22} {:<28} error: {}", f.check, f.inputs.join(", "), f.error);
            }
            for (op, outcome) in &r.controls {
                match outcome {
                    Err(e) => println!("negative-control {op:<22} rejected: {e}"),
                    Ok(()) => println!("negative-control {op:<22} NOT REJECTED"),
                }
            }
        }
        let total: usize = runs.iter().map(|r| r.result.reports.len()).sum();
        println!("{total} reports, {refuted} refuted, {budget} over budget, {errors} errors, {leaked} unrejected controls");
    }
    Ok(if refuted + leaked > 0 {
        EXIT_REFUTED
    } else if budget > 0 {
        EXIT_BUDGET
    } else if errors > 0 {
        EXIT_INPUT
    } else {
        0
    })
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Info { algebra, module, horizon } => info(&algebra, module.as_deref(), horizon),
        Command::Gen(args) => gen(&args),
        Command::Resolve { common, module, differentials } => resolve(&common, &module, differentials),
        Command::Tate { kind, common, m, n } => tate(kind, &common, &m, &n),
        Command::Profile { common, module } => profile(&common, &module),
        Command::Link { algebra, m, n, ideal, seed, output, json } => {
            link(&algebra, &m, n.as_deref(), &ideal, seed, output.as_deref(), json)
        }
        Command::Verify { check, algebra, corpus: _, modules, window, seed, horizon, json, evidence } => {
            verify(&check, algebra.as_deref(), &modules, &window, seed, horizon, json, evidence)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
