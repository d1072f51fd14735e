//! `dialnet`: check, build, simulate and verify Dialectica objects, fuzzy
//! nets and fuzzy topological systems from JSON files.
//!
//! Exit codes: 0 pass, 1 property failure, 2 input error, 3 resource limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dialnet::dialectica::{self, DialMorphism, DialObject, HomRule};
use dialnet::fnets::{self, FuzzyNet, NetMorphism};
use dialnet::io::{self, SystemInput};
use dialnet::laws::{self, Family, LawSuiteConfig, SuiteMode};
use dialnet::simulator;
use dialnet::toposys::{self, AxiomMode, FuzzyTopSystem};
use dialnet::{Degree, Error, FinMap, Limits, Verdict};

#[derive(Parser)]
#[command(name = "dialnet", version, about = "Dialectica categories, fuzzy nets and fuzzy topological systems")]
struct Cli {
    /// Largest function space or enumeration allowed (overrides the default of 10000).
    #[arg(long, global = true, env = "DIALNET_CAP")]
    cap: Option<u64>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an artifact or decide a property.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Build a construction and print it as canonical JSON.
    Build(BuildArgs),
    /// Run the law suite.
    Laws(LawsArgs),
    /// Play the token game on a net.
    Run(RunArgs),
    /// Reports on fuzzy topological systems.
    #[command(subcommand)]
    Topo(TopoCmd),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Parse a Dialectica object.
    Object { object: PathBuf },
    /// Decide whether (f, g) is a morphism from SOURCE to TARGET.
    Morphism {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
    /// Check the satisfaction axioms of a system.
    System {
        system: PathBuf,
        #[arg(long)]
        all_subsets: bool,
    },
    /// Parse a fuzzy net.
    Net { net: PathBuf },
    /// Decide whether (f, F) is a simulation from SOURCE to TARGET.
    Simulation {
        source: PathBuf,
        target: PathBuf,
        morphism: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Tensor,
    Hom,
    Product,
    Coproduct,
    Curry,
    Uncurry,
}

#[derive(Args)]
struct BuildArgs {
    construction: Construction,
    /// Object (or net) files; curry and uncurry take A B C and a morphism file.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Inputs are nets rather than Dialectica objects.
    #[arg(long)]
    net: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    DialStandard,
    DialOpposite,
    Nets,
}

#[derive(Args)]
struct LawsArgs {
    #[arg(long, default_value_t = 2)]
    max_size: usize,
    /// Comma-separated degrees.
    #[arg(long, default_value = "0,1/2,1")]
    grid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Random instances per law.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Largest number of object tuples a law checks exhaustively.
    #[arg(long, default_value_t = 200_000)]
    budget: u64,
    /// Only these laws (repeatable).
    #[arg(long = "law")]
    laws: Vec<String>,
    /// Only these families (repeatable).
    #[arg(long = "family", value_enum)]
    families: Vec<FamilyArg>,
    /// Fill the internal hom with the monoid instead of the residual.
    #[arg(long)]
    mutate_hom: bool,
}

#[derive(Args)]
struct RunArgs {
    net: PathBuf,
    marking: PathBuf,
    /// Comma-separated event labels.
    #[arg(long, conflicts_with = "explore")]
    schedule: Option<String>,
    /// Explore all firing sequences up to this depth.
    #[arg(long)]
    explore: Option<usize>,
    #[arg(long, default_value = "0")]
    threshold: String,
}

#[derive(Subcommand)]
enum TopoCmd {
    /// Check the satisfaction axioms.
    Axioms {
        system: PathBuf,
        #[arg(long)]
        all_subsets: bool,
    },
    /// Extents of one open, or of every open.
    Extent {
        system: PathBuf,
        #[arg(long)]
        open: Option<String>,
    },
    /// Whether extents are closed like a fuzzy topology.
    Closure { system: PathBuf },
    /// Three continuity verdicts for {"f": ..., "phi": ...}.
    Continuity {
        source: PathBuf,
        target: PathBuf,
        maps: PathBuf,
    },
}

/// What a command produced: output text and whether the checked property held.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn report(value: Value, passed: bool) -> Self {
        Outcome {
            text: io::to_canonical(&value),
            passed,
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Schema {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    io::parse(&text).map_err(|e| match e {
        Error::Json { line, column, message } => Error::Json {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn in_file<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Schema { path: p, message } => Error::Schema {
            path: format!("{}:{}", path.display(), p),
            message,
        },
        other => other,
    })
}

fn read_object(path: &Path) -> Result<DialObject, Error> {
    in_file(path, io::object_from_json(&read_json(path)?))
}

fn read_net(path: &Path) -> Result<FuzzyNet, Error> {
    in_file(path, io::net_from_json(&read_json(path)?))
}

fn read_system(path: &Path) -> Result<SystemInput, Error> {
    in_file(path, io::system_from_json(&read_json(path)?))
}

fn build_system(input: SystemInput) -> Result<FuzzyTopSystem, Error> {
    match input {
        SystemInput::Fuzzy { points, frame, sat } => FuzzyTopSystem::new(points, frame, sat),
        SystemInput::Crisp(ts) => toposys::crisp_embed(&ts),
    }
}

fn parse_degree(text: &str) -> Result<Degree, Error> {
    text.parse()
}

fn verdict_report<W: serde::Serialize>(kind: &str, verdict: &Verdict<W>) -> Outcome {
    let mut v = serde_json::to_value(verdict).expect("verdicts serialize");
    v["kind"] = json!(kind);
    Outcome::report(v, verdict.is_valid())
}

fn check(cmd: CheckCmd) -> Result<Outcome, Error> {
    match cmd {
        CheckCmd::Object { object } => {
            let a = read_object(&object)?;
            Ok(Outcome::report(
                json!({
                    "kind": "object",
                    "verdict": "valid",
                    "orientation": a.orientation().name(),
                    "U": a.left().len(),
                    "X": a.right().len(),
                }),
                true,
            ))
        }
        CheckCmd::Morphism { source, target, morphism } => {
            let (a, b) = (read_object(&source)?, read_object(&target)?);
            let (f, g) = in_file(&morphism, io::maps_from_json(&read_json(&morphism)?, &a, &b))?;
            Ok(verdict_report("morphism", &dialectica::check_morphism(&a, &b, &f, &g)?))
        }
        CheckCmd::System { system, all_subsets } => axioms(&system, all_subsets),
        CheckCmd::Net { net } => {
            let n = read_net(&net)?;
            Ok(Outcome::report(
                json!({
                    "kind": "net",
                    "verdict": "valid",
                    "events": n.events().len(),
                    "conditions": n.conditions().len(),
                    "crisp": n.is_crisp(),
                }),
                true,
            ))
        }
        CheckCmd::Simulation { source, target, morphism } => {
            let (n, n2) = (read_net(&source)?, read_net(&target)?);
            let (f, big_f) = in_file(&morphism, io::net_maps_from_json(&read_json(&morphism)?, &n, &n2))?;
            Ok(verdict_report("simulation", &fnets::check_simulation(&n, &n2, &f, &big_f)?))
        }
    }
}

fn axioms(system: &Path, all_subsets: bool) -> Result<Outcome, Error> {
    let mode = if all_subsets { AxiomMode::AllSubsets } else { AxiomMode::BinaryAndEmpty };
    let verdict = match read_system(system)? {
        SystemInput::Fuzzy { points, frame, sat } => toposys::check_axioms(&points, &frame, &sat, mode)?,
        SystemInput::Crisp(ts) => {
            let sat: Vec<Degree> = ts.models.iter().map(|&m| if m { Degree::ONE } else { Degree::ZERO }).collect();
            toposys::check_axioms(&ts.points, &ts.frame, &sat, mode)?
        }
    };
    Ok(verdict_report("system", &verdict))
}

fn canonical(value: Value) -> Outcome {
    Outcome::report(value, true)
}

fn build(args: BuildArgs, limits: &Limits) -> Result<Outcome, Error> {
    let arity = match args.construction {
        Construction::Curry | Construction::Uncurry => 4,
        _ => 2,
    };
    if args.inputs.len() != arity {
        return Err(Error::Schema {
            path: "inputs".into(),
            message: format!("expected {arity} input files, found {}", args.inputs.len()),
        });
    }
    let p = &args.inputs;
    if args.net {
        build_net(args.construction, p, limits)
    } else {
        build_dial(args.construction, p, limits)
    }
}

fn build_dial(c: Construction, p: &[PathBuf], limits: &Limits) -> Result<Outcome, Error> {
    let (a, b) = (read_object(&p[0])?, read_object(&p[1])?);
    let obj = |o: DialObject| Ok(canonical(io::object_to_json(&o)));
    let read_morphism = |source: &DialObject, target: &DialObject| -> Result<DialMorphism, Error> {
        let (f, g) = in_file(&p[3], io::maps_from_json(&read_json(&p[3])?, source, target))?;
        DialMorphism::new(source, target, f, g)
    };
    match c {
        Construction::Tensor => obj(dialectica::tensor(&a, &b, limits)?),
        Construction::Hom => obj(dialectica::internal_hom(&a, &b, limits)?),
        Construction::Product => obj(dialectica::product(&a, &b)?),
        Construction::Coproduct => obj(dialectica::coproduct(&a, &b)?),
        Construction::Curry => {
            let z = read_object(&p[2])?;
            let m = read_morphism(&dialectica::tensor(&a, &b, limits)?, &z)?;
            Ok(canonical(io::morphism_to_json(&dialectica::curry(&m, limits)?)))
        }
        Construction::Uncurry => {
            let z = read_object(&p[2])?;
            let m = read_morphism(&a, &dialectica::internal_hom(&b, &z, limits)?)?;
            Ok(canonical(io::morphism_to_json(&dialectica::uncurry(&m, limits)?)))
        }
    }
}

fn build_net(c: Construction, p: &[PathBuf], limits: &Limits) -> Result<Outcome, Error> {
    let (a, b) = (read_net(&p[0])?, read_net(&p[1])?);
    let net = |n: FuzzyNet| Ok(canonical(io::net_to_json(&n)));
    let read_morphism = |source: &FuzzyNet, target: &FuzzyNet| -> Result<NetMorphism, Error> {
        let (f, big_f) = in_file(&p[3], io::net_maps_from_json(&read_json(&p[3])?, source, target))?;
        NetMorphism::new(source, target, f, big_f)
    };
    match c {
        Construction::Tensor => net(fnets::net_tensor(&a, &b, limits)?),
        Construction::Hom => net(fnets::net_hom(&a, &b, limits)?),
        Construction::Product => net(fnets::net_product(&a, &b)?),
        Construction::Coproduct => net(fnets::net_coproduct(&a, &b)?),
        Construction::Curry => {
            let z = read_net(&p[2])?;
            let m = read_morphism(&fnets::net_tensor(&a, &b, limits)?, &z)?;
            Ok(canonical(io::net_morphism_to_json(&fnets::net_curry(&m, limits)?)))
        }
        Construction::Uncurry => {
            let z = read_net(&p[2])?;
            let m = read_morphism(&a, &fnets::net_hom(&b, &z, limits)?)?;
            Ok(canonical(io::net_morphism_to_json(&fnets::net_uncurry(&m, limits)?)))
        }
    }
}

fn laws_cmd(args: LawsArgs, limits: &Limits) -> Result<Outcome, Error> {
    let grid = args
        .grid
        .split(',')
        .map(|s| parse_degree(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let families = if args.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.families
            .iter()
            .map(|f| match f {
                FamilyArg::DialStandard => Family::DialStandard,
                FamilyArg::DialOpposite => Family::DialOpposite,
                FamilyArg::Nets => Family::Nets,
            })
            .collect()
    };
    let config = LawSuiteConfig {
        max_carrier_size: args.max_size,
        grid,
        seed: args.seed,
        mode: match args.mode {
            ModeArg::Exhaustive => SuiteMode::Exhaustive,
            ModeArg::Randomized => SuiteMode::Randomized,
        },
        samples: args.samples,
        exhaustive_budget: args.budget,
        cap: limits.cap,
        hom_rule: if args.mutate_hom { HomRule::MonoidMutant } else { HomRule::Residual },
        laws: args.laws,
        families,
    };
    let report = laws::run_suite(&config)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let passed = report.passed;
    let value = serde_json::to_value(&report).expect("reports serialize");
    Ok(Outcome::report(value, passed))
}

fn run_cmd(args: RunArgs, limits: &Limits) -> Result<Outcome, Error> {
    let net = read_net(&args.net)?;
    let m0 = in_file(&args.marking, io::marking_from_json(&read_json(&args.marking)?, net.conditions()))?;
    let threshold = parse_degree(&args.threshold)?;
    if let Some(depth) = args.explore {
        let r = simulator::explore(&net, &m0, depth, threshold, limits)?;
        let value = serde_json::to_value(&r).expect("reachability serializes");
        return Ok(Outcome::report(value, true));
    }
    let schedule = match args.schedule.as_deref().map(str::trim) {
        None | Some("") => Vec::new(),
        Some(s) => s
            .split(',')
            .map(|label| net.event_index(label.trim()))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let trace = simulator::run(&net, &m0, &schedule, threshold)?;
    let mut text = String::new();
    for step in &trace {
        text.push_str(&serde_json::to_string(step).expect("trace steps serialize"));
        text.push('\n');
    }
    Ok(Outcome { text, passed: true })
}

fn topo(cmd: TopoCmd) -> Result<Outcome, Error> {
    match cmd {
        TopoCmd::Axioms { system, all_subsets } => axioms(&system, all_subsets),
        TopoCmd::Extent { system, open } => {
            let sys = build_system(read_system(&system)?)?;
            let opens = match open {
                Some(label) => vec![sys.frame().open(&label)?],
                None => sys.frame().elements().indices().collect(),
            };
            let mut extents = serde_json::Map::new();
            for a in opens {
                extents.insert(sys.frame().elements().describe(a), toposys::extent(&sys, a)?.to_json());
            }
            Ok(canonical(json!({ "extents": extents })))
        }
        TopoCmd::Closure { system } => {
            let sys = build_system(read_system(&system)?)?;
            let r = toposys::check_extent_topology(&sys);
            let passed = r.verdict != toposys::ExtentVerdict::Fails;
            Ok(Outcome::report(serde_json::to_value(&r).expect("reports serialize"), passed))
        }
        TopoCmd::Continuity { source, target, maps } => {
            let s1 = build_system(read_system(&source)?)?;
            let s2 = build_system(read_system(&target)?)?;
            let v = read_json(&maps)?;
            let f = in_file(&maps, FinMap::from_json(io::require(&v, "f")?, s1.points(), s2.points(), "f"))?;
            let phi = in_file(
                &maps,
                FinMap::from_json(io::require(&v, "phi")?, s2.frame().elements(), s1.frame().elements(), "phi"),
            )?;
            let r = toposys::check_continuity(&s1, &s2, &f, &phi)?;
            let passed = r.all_pass();
            Ok(Outcome::report(serde_json::to_value(&r).expect("reports serialize"), passed))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => 3,
        Error::NotEnabled { .. } => 1,
        Error::Internal(_) => 1,
        e if e.is_input_error() => 2,
        Error::InvalidMorphism(_) | Error::InvalidSystem(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let limits = cli.cap.map(Limits::with_cap).unwrap_or_default();
    let result = match cli.command {
        Command::Check(cmd) => check(cmd),
        Command::Build(args) => build(args, &limits),
        Command::Laws(args) => laws_cmd(args, &limits),
        Command::Run(args) => run_cmd(args, &limits),
        Command::Topo(cmd) => topo(cmd),
    };
    match result {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
