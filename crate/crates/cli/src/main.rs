//! `srp`: steady and ranging persistence for hypergraph filtrations.
//!
//! Subcommands: `ingest` builds filtration JSON from a play CSV, `diagram`
//! computes persistence diagrams, `compare` confronts steady with ranging,
//! `counterexample` searches for a convexity witness and materializes the
//! 1-interleaved filtration pairs that break compatibility, and `check` runs
//! the axiom / representation / containment battery.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or I/O error.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use srp_core::feature::{SearchOutcome, WitnessJson};
use srp_core::filtration::WeightedHypergraph;
use srp_core::ingest::{parse_play, PlayRecord};
use srp_core::persistence::Compatibility;
use srp_core::{
    diagram, epsilon_compatible, feature_by_name, isomorphisms, render_svg,
    representation_identity_check, Feature, Mode, MonoClass, PersistenceDiagram,
    PersistenceFunction, SearchConfig, TameFiltration, DEFAULT_SIZE_CAP,
};

#[derive(Parser)]
#[command(name = "srp", version, about = "Steady and ranging persistence for hypergraph filtrations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a play CSV into filtration JSON
    Ingest(IngestArgs),
    /// Compute persistence diagrams for a feature on a filtration
    Diagram(DiagramArgs),
    /// Compare the steady and ranging diagrams of a feature
    Compare(CompareArgs),
    /// Find a convexity witness and build both counterexample pairs
    Counterexample(CounterexampleArgs),
    /// Run axiom, representation-identity and containment checks
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Steady,
    Ranging,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Scene,
    Character,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    #[value(name = "=")]
    SizePreserving,
    #[value(name = "<=")]
    MembershipReflecting,
    #[value(name = "any")]
    General,
}

impl From<ClassArg> for MonoClass {
    fn from(c: ClassArg) -> MonoClass {
        match c {
            ClassArg::SizePreserving => MonoClass::SizePreserving,
            ClassArg::MembershipReflecting => MonoClass::MembershipReflecting,
            ClassArg::General => MonoClass::General,
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    /// Play CSV (`index,charA;charB;charC`, indices contiguous from 0)
    #[arg(long = "in")]
    input: PathBuf,
    /// Which chronological filtration to build
    #[arg(long, value_enum, default_value = "scene")]
    variant: VariantArg,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    /// Filtration JSON, weighted-hypergraph JSON, or play CSV
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    feature: String,
    #[arg(long, value_enum, default_value = "both")]
    mode: ModeArg,
    /// Scene or character filtration, for play CSV inputs
    #[arg(long, value_enum, default_value = "scene")]
    variant: VariantArg,
    /// Output path for the diagram JSON (`.steady`/`.ranging` is inserted
    /// when both modes are requested)
    #[arg(long)]
    out: Option<PathBuf>,
    /// `svg` additionally writes a scatter plot next to the JSON
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    feature: String,
    #[arg(long, value_enum, default_value = "scene")]
    variant: VariantArg,
    /// Optional probe pair: also print σ(u ≤ v) and ρ(u ≤ v)
    #[arg(long)]
    probe_u: Option<f64>,
    #[arg(long)]
    probe_v: Option<f64>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    feature: String,
    /// Morphism class the witness chain must live in
    #[arg(long, value_enum, default_value = "=")]
    class: ClassArg,
    /// Witness JSON produced by an earlier run; searched for when omitted
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Seed for the randomized search phase (required when searching)
    #[arg(long)]
    seed: Option<u64>,
    /// Chain budget for the search
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    #[arg(long, default_value_t = 6)]
    max_edges: usize,
    /// Write the full witness + probe report as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Filtration JSON, weighted-hypergraph JSON, or play CSV
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Check this feature only; all three built-ins when omitted
    #[arg(long)]
    feature: Option<String>,
    #[arg(long, value_enum, default_value = "scene")]
    variant: VariantArg,
    /// A stored diagram to verify against the computed function
    #[arg(long)]
    diagram: Option<PathBuf>,
    /// Mode of the stored diagram
    #[arg(long, value_enum, default_value = "steady")]
    mode: ModeArg,
    /// Check N random sublevel filtrations instead of a file
    #[arg(long)]
    random: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// ε for the self-compatibility sanity check
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
}

enum AppError {
    Usage(String),
    Io(String),
    Check(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) | AppError::Io(_) => 2,
            AppError::Check(_) => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Io(m) => write!(f, "i/o error: {m}"),
            AppError::Check(m) => write!(f, "check failure: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Diagram(args) => cmd_diagram(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Counterexample(args) => cmd_counterexample(args),
        Command::Check(args) => cmd_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}

fn size_cap() -> usize {
    std::env::var("SRP_SIZE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

fn read_file(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path)
        .map_err(|e| AppError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    std::fs::write(path, contents)
        .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
}

fn lookup_feature(name: &str) -> Result<Arc<dyn Feature>, AppError> {
    feature_by_name(name).ok_or_else(|| {
        AppError::Usage(format!(
            "unknown feature {name:?}; expected hub, exclusivity or max-originality"
        ))
    })
}

enum Input {
    Play(PlayRecord),
    Filtration(TameFiltration),
}

fn load_input(path: &Path) -> Result<Input, AppError> {
    let text = read_file(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let title = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok(Input::Play(
            parse_play(&text, title).map_err(|e| AppError::Usage(e.to_string()))?,
        ));
    }
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| AppError::Usage(format!("{}: invalid JSON: {e}", path.display())))?;
    if value.get("critical_values").is_some() {
        let flt: TameFiltration = serde_json::from_value(value)
            .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
        Ok(Input::Filtration(flt))
    } else if value.get("weights").is_some() {
        let w: WeightedHypergraph = serde_json::from_value(value)
            .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
        let flt = w
            .sublevel_filtration(MonoClass::SizePreserving)
            .map_err(|e| AppError::Usage(e.to_string()))?;
        Ok(Input::Filtration(flt))
    } else {
        Err(AppError::Usage(format!(
            "{}: expected a filtration (`critical_values`), a weighted hypergraph (`weights`) or a play CSV",
            path.display()
        )))
    }
}

fn filtration_for(input: &Input, variant: VariantArg) -> Result<TameFiltration, AppError> {
    match input {
        Input::Filtration(flt) => Ok(flt.clone()),
        Input::Play(play) => match variant {
            VariantArg::Scene => {
                play.scene_filtration().map_err(|e| AppError::Check(e.to_string()))
            }
            VariantArg::Character => {
                play.character_filtration().map_err(|e| AppError::Check(e.to_string()))
            }
        },
    }
}

fn compute(
    feature: &Arc<dyn Feature>,
    flt: &Arc<TameFiltration>,
    mode: Mode,
) -> Result<PersistenceFunction, AppError> {
    PersistenceFunction::compute(feature.clone(), flt.clone(), mode)
        .map_err(|e| AppError::Check(format!("internal error: {e}")))
}

fn points_summary(d: &PersistenceDiagram) -> String {
    if d.points.is_empty() {
        return "{}".into();
    }
    let entries: Vec<String> = d
        .points
        .iter()
        .map(|p| format!("({},{}):{}", p.birth, p.death, p.mult))
        .collect();
    format!("{{{}}}", entries.join(", "))
}

fn print_cornerpoint_table(d: &PersistenceDiagram) {
    println!("{} diagram: {} cornerpoints", d.mode, d.points.len());
    println!("  birth\tdeath\tmult");
    for p in &d.points {
        println!("  {}\t{}\t{}", p.birth, p.death, p.mult);
    }
}

fn with_mode_suffix(path: &Path, mode: Mode) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|s| s.to_string_lossy().into_owned());
    let name = match ext {
        Some(ext) => format!("{stem}.{mode}.{ext}"),
        None => format!("{stem}.{mode}"),
    };
    path.with_file_name(name)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialization cannot fail")
}

fn cmd_ingest(args: IngestArgs) -> Result<(), AppError> {
    let Input::Play(play) = load_input(&args.input)? else {
        return Err(AppError::Usage("ingest expects a play CSV".into()));
    };
    let flt = filtration_for(&Input::Play(play), args.variant)?;
    let json = to_json(&flt);
    match &args.out {
        Some(path) => {
            write_file(path, &json)?;
            println!(
                "wrote {} filtration ({} critical values) to {}",
                match args.variant {
                    VariantArg::Scene => "scene",
                    VariantArg::Character => "character",
                },
                flt.critical_values().len(),
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_diagram(args: DiagramArgs) -> Result<(), AppError> {
    let feature = lookup_feature(&args.feature)?;
    let flt = Arc::new(filtration_for(&load_input(&args.input)?, args.variant)?);
    let modes: &[Mode] = match args.mode {
        ModeArg::Steady => &[Mode::Steady],
        ModeArg::Ranging => &[Mode::Ranging],
        ModeArg::Both => &[Mode::Steady, Mode::Ranging],
    };
    for mode in modes {
        let p = compute(&feature, &flt, *mode)?;
        let d = diagram(&p);
        print_cornerpoint_table(&d);
        if let Some(out) = &args.out {
            let json_path =
                if modes.len() > 1 { with_mode_suffix(out, *mode) } else { out.clone() };
            write_file(&json_path, &to_json(&d))?;
            if args.format == FormatArg::Svg {
                let svg_path = json_path.with_extension("svg");
                let title = format!("{} {}", feature.name(), mode);
                write_file(&svg_path, &render_svg(&d, &title))?;
            }
        }
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), AppError> {
    let feature = lookup_feature(&args.feature)?;
    let flt = Arc::new(filtration_for(&load_input(&args.input)?, args.variant)?);
    let steady = compute(&feature, &flt, Mode::Steady)?;
    let ranging = compute(&feature, &flt, Mode::Ranging)?;

    match (args.probe_u, args.probe_v) {
        (Some(u), Some(v)) => {
            if u > v {
                return Err(AppError::Usage(format!("probe needs u ≤ v, got u={u} v={v}")));
            }
            let s = steady.value_at(u, v).expect("u ≤ v");
            let r = ranging.value_at(u, v).expect("u ≤ v");
            println!("σ({u} ≤ {v}) = {s}, ρ({u} ≤ {v}) = {r}");
        }
        (None, None) => {}
        _ => return Err(AppError::Usage("--probe-u and --probe-v go together".into())),
    }

    let ds = diagram(&steady);
    let dr = diagram(&ranging);
    if ds.same_points(&dr) {
        println!("EQUAL: steady and ranging diagrams coincide ({} cornerpoints)", ds.points.len());
    } else {
        println!("DIFFER: steady {} vs ranging {}", points_summary(&ds), points_summary(&dr));
        for p in ds.symmetric_difference(&dr) {
            println!("  difference at ({},{}) ×{}", p.birth, p.death, p.mult);
        }
    }
    Ok(())
}

fn cmd_counterexample(args: CounterexampleArgs) -> Result<(), AppError> {
    let feature = lookup_feature(&args.feature)?;
    let class: MonoClass = args.class.into();

    let witness = match &args.witness {
        Some(path) => {
            let raw: WitnessJson = serde_json::from_str(&read_file(path)?)
                .map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))?;
            let w = raw.into_witness().map_err(|e| AppError::Usage(e.to_string()))?;
            w.verify(feature.as_ref(), class)
                .map_err(|e| AppError::Check(format!("supplied witness rejected: {e}")))?;
            w
        }
        None => {
            let seed = args.seed.ok_or_else(|| {
                AppError::Usage("searching needs an explicit --seed for reproducibility".into())
            })?;
            let config = SearchConfig {
                class,
                max_vertices: args.max_vertices,
                max_edges: args.max_edges,
                budget: args.budget,
                seed,
            };
            match srp_core::convexity_witness_search(feature.as_ref(), &config)
                .map_err(|e| AppError::Usage(e.to_string()))?
            {
                SearchOutcome::Found(w) => w,
                SearchOutcome::NoneFound { chains_checked, budget } => {
                    println!(
                        "no witness within budget ({chains_checked} of {budget} chains checked); \
                         {} shows no convexity violation at this scale",
                        feature.name()
                    );
                    return Ok(());
                }
            }
        }
    };

    println!(
        "witness: A = {} on a chain X({}v/{}e) ↪ X′({}v/{}e) ↪ X″({}v/{}e)",
        points_of_set(&witness.a),
        witness.iota.source().vertex_count(),
        witness.iota.source().edge_count(),
        witness.iota.target().vertex_count(),
        witness.iota.target().edge_count(),
        witness.iota_prime.target().vertex_count(),
        witness.iota_prime.target().edge_count(),
    );

    let steady_pair = srp_core::build_steady_counterexample(&witness)
        .map_err(|e| AppError::Check(e.to_string()))?;
    let ranging_pair = srp_core::build_ranging_counterexample(&witness)
        .map_err(|e| AppError::Check(e.to_string()))?;

    let mut report = serde_json::Map::new();
    report.insert("witness".into(), serde_json::to_value(WitnessJson::from(&witness)).unwrap());
    for (pair, mode) in [(&steady_pair, Mode::Steady), (&ranging_pair, Mode::Ranging)] {
        pair.verify_one_interleaving()
            .map_err(|e| AppError::Check(format!("{mode} pair: {e}")))?;
        println!("{mode} pair: 1-interleaving verified (F crit {:?}, G crit {:?})",
            pair.f.critical_values(), pair.g.critical_values());

        let probe = pair.probe_report(feature.as_ref());
        let (u, v) = probe.probe;
        let kind = match mode {
            Mode::Steady => "S",
            Mode::Ranging => "R",
        };
        let (shifted, direct) = match probe.shifted_side {
            "F" => ("F", "G"),
            _ => ("G", "F"),
        };
        println!(
            "  |{kind}_{direct}({u} ≤ {v})| = {} < {} = |{kind}_{shifted}({} ≤ {})|: \
             1-compatibility violated {}",
            probe.direct_count,
            probe.shifted_count,
            u - probe.epsilon,
            v + probe.epsilon,
            if probe.strict_violation() { "(strict)" } else { "— NOT violated" },
        );
        if !probe.strict_violation() {
            return Err(AppError::Check(format!(
                "{mode} pair shows no strict inequality at the probe; witness does not refute balancedness"
            )));
        }

        let pf = compute(&feature, &Arc::new(pair.f.clone()), mode)?;
        let pg = compute(&feature, &Arc::new(pair.g.clone()), mode)?;
        match epsilon_compatible(&pf, &pg, pair.epsilon) {
            Compatibility::Violated(v) => {
                println!(
                    "  ε-compatibility check: first violation at ({}, {}) with counts {} > {}",
                    v.u, v.v, v.shifted_count, v.direct_count
                );
            }
            Compatibility::Compatible => {
                return Err(AppError::Check(format!(
                    "{mode} pair unexpectedly 1-compatible"
                )));
            }
        }
        report.insert(
            format!("{mode}"),
            serde_json::json!({
                "f_critical_values": pair.f.critical_values(),
                "g_critical_values": pair.g.critical_values(),
                "probe": [u, v],
                "epsilon": pair.epsilon,
                "shifted_side": probe.shifted_side,
                "shifted_count": probe.shifted_count,
                "direct_count": probe.direct_count,
            }),
        );
    }

    if let Some(out) = &args.out {
        write_file(out, &serde_json::Value::Object(report).to_string())?;
        println!("report written to {}", out.display());
    }
    Ok(())
}

fn points_of_set(set: &srp_core::ElementSet) -> String {
    let names: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", names.join(", "))
}

/// One feature × mode battery on one filtration. Returns failure messages.
fn check_battery(
    feature: &Arc<dyn Feature>,
    flt: &Arc<TameFiltration>,
    label: &str,
    eps: f64,
) -> Result<(), AppError> {
    let steady = compute(feature, flt, Mode::Steady)?;
    let ranging = compute(feature, flt, Mode::Ranging)?;
    for p in [&steady, &ranging] {
        p.verify_axioms()
            .map_err(|e| AppError::Check(format!("{label}: {e}")))?;
        let d = diagram(p);
        if !representation_identity_check(p, &d) {
            return Err(AppError::Check(format!(
                "{label}: representation identity fails for {}",
                p.mode()
            )));
        }
        // A function is ε-compatible with itself for every ε ≥ 0.
        if !epsilon_compatible(p, p, eps).is_compatible() {
            return Err(AppError::Check(format!(
                "{label}: {} function is not {eps}-compatible with itself",
                p.mode()
            )));
        }
    }
    let samples = steady.samples().to_vec();
    for (i, u) in samples.iter().enumerate() {
        for v in &samples[i..] {
            let s = steady.value_at(*u, *v).expect("u ≤ v");
            let r = ranging.value_at(*u, *v).expect("u ≤ v");
            if s > r {
                return Err(AppError::Check(format!(
                    "{label}: steady ⊄ ranging at ({u}, {v}): {s} > {r}"
                )));
            }
        }
    }
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), AppError> {
    if args.eps < 0.0 {
        return Err(AppError::Usage("--eps must be nonnegative".into()));
    }
    let features: Vec<Arc<dyn Feature>> = match &args.feature {
        Some(name) => vec![lookup_feature(name)?],
        None => ["hub", "exclusivity", "max-originality"]
            .iter()
            .map(|n| feature_by_name(n).expect("built-in"))
            .collect(),
    };

    if let Some(n) = args.random {
        let seed = args.seed.ok_or_else(|| {
            AppError::Usage("--random needs an explicit --seed for reproducibility".into())
        })?;
        let bounds = srp_core::corpus::CorpusBounds::default();
        let mut rng = srp_core::corpus::rng_for(seed);
        for i in 0..n {
            let w = srp_core::corpus::random_weighted_hypergraph(&mut rng, &bounds);
            let flt = Arc::new(
                w.sublevel_filtration(MonoClass::SizePreserving)
                    .map_err(|e| AppError::Check(e.to_string()))?,
            );
            for feature in &features {
                check_battery(feature, &flt, &format!("instance {i}, {}", feature.name()), args.eps)?;
            }
        }
        println!("checked {n} random instances × {} features: all pass", features.len());
        return Ok(());
    }

    let input_path = args
        .input
        .as_ref()
        .ok_or_else(|| AppError::Usage("provide --in FILE or --random N".into()))?;
    let input = load_input(input_path)?;
    let flt = Arc::new(filtration_for(&input, args.variant)?);
    for feature in &features {
        check_battery(feature, &flt, feature.name(), args.eps)?;
        println!("{}: axioms, representation identity and S ⊆ R hold", feature.name());

        if let Some(dpath) = &args.diagram {
            let mode = match args.mode {
                ModeArg::Ranging => Mode::Ranging,
                _ => Mode::Steady,
            };
            let stored: PersistenceDiagram = serde_json::from_str(&read_file(dpath)?)
                .map_err(|e| AppError::Usage(format!("{}: {e}", dpath.display())))?;
            let p = compute(feature, &flt, mode)?;
            if !representation_identity_check(&p, &stored) {
                return Err(AppError::Check(format!(
                    "stored diagram {} does not represent the computed {} function of {}",
                    dpath.display(),
                    mode,
                    feature.name()
                )));
            }
            println!("stored diagram represents the computed {mode} function");
        }
    }

    if let Input::Play(play) = &input {
        // The two chronological filtrations must end in dual hypergraphs.
        let scene = play.scene_filtration().map_err(|e| AppError::Check(e.to_string()))?;
        let character =
            play.character_filtration().map_err(|e| AppError::Check(e.to_string()))?;
        let dual = scene
            .final_object()
            .dual()
            .map_err(|e| AppError::Check(e.to_string()))?;
        match isomorphisms(&dual, character.final_object(), size_cap()) {
            Ok(isos) if !isos.is_empty() => {
                println!("scene/character duality verified on the final objects");
            }
            Ok(_) => {
                return Err(AppError::Check(
                    "dual of the final scene-hypergraph is not isomorphic to the final character-hypergraph".into(),
                ))
            }
            Err(e) => println!("duality check skipped: {e}"),
        }
    }
    println!("all checks passed");
    Ok(())
}
