//! Command-line surface over the library. Exit codes: 0 success, 1
//! verification failure, 2 usage or parse errors.

use anyhow::{anyhow, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use varietas::bimodule::{BimoduleJson, LatticeBimodule};
use varietas::duality::{dual_of_variety, verify_local_duality};
use varietas::lang::{Alphabet, Dfa, DfaJson, RegularLanguage};
use varietas::monoid::transition_monoid;
use varietas::qfa::{basic_variety_probe, margin_report, Kwqfa, KwqfaJson, MeasureMode};
use varietas::recognition::{
    minimal_recognizer, rec_of_uquotient, recognized_variety, validate_uquotient, UQuotient,
    UQuotientJson,
};
use varietas::varieties::{
    check_cotheory, derivative_closure, CotheorySample, LocalBasicVariety, VarietyFamily,
    VarietyJson,
};
use varietas::verify::{run_checks, suite_names};

#[derive(Parser)]
#[command(
    name = "varietas",
    version,
    about = "Regular-language algebra workbench"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition monoid of a language (the syntactic monoid)
    Syntactic(LangArgs),
    /// Derivative closure of a language
    Closure {
        #[command(flatten)]
        lang: LangArgs,
        /// Also print DOT diagrams of the member automata
        #[arg(long)]
        dot: bool,
    },
    /// Dualize a derivative-closed family (JSON file or generated from a language)
    Dualize {
        /// Variety JSON file, or a pattern when --from-lang is set
        input: String,
        /// Treat the input as a pattern and dualize its derivative closure
        #[arg(long)]
        from_lang: bool,
        /// Print a DOT diagram of the dual lattice order
        #[arg(long)]
        dot: bool,
    },
    /// Round-trip check: languages of the dual equal the family
    VerifyDuality {
        input: String,
        #[arg(long)]
        from_lang: bool,
    },
    /// Reduce a bimodule (JSON file) to its canonical reduced quotient
    Reduce { path: PathBuf },
    /// Validate a bimodule JSON file against all axioms
    Check { path: PathBuf },
    /// Check the cotheory conditions on a sample file
    CheckCotheory { path: PathBuf },
    /// Languages recognized by a word-lattice quotient (JSON file)
    Rec {
        path: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Full walk: closure, dual, minimal recognizer, round trip
    Pipeline(LangArgs),
    /// Quantum finite automata
    Qfa {
        #[command(subcommand)]
        command: QfaCommand,
    },
    /// Run verification suites
    Verify {
        /// Restrict to one suite
        #[arg(long)]
        suite: Option<String>,
        /// Seed for randomized corpora
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct LangArgs {
    /// Pattern in the minimal regex dialect, or @file.json for a DFA
    spec: String,
    /// Explicit alphabet (defaults to the letters occurring in the pattern)
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Subcommand)]
enum QfaCommand {
    /// Accept probability of one word
    Run {
        machine: PathBuf,
        word: String,
        #[arg(long, value_enum, default_value = "subspace")]
        mode: ModeArg,
        /// Print the full per-step trace
        #[arg(long)]
        trace: bool,
    },
    /// Margin report against a language over all words up to a bound
    Margin {
        machine: PathBuf,
        #[command(flatten)]
        lang: LangArgs,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "subspace")]
        mode: ModeArg,
    },
    /// Unitarity and partition validation
    Validate { machine: PathBuf },
    /// Closure evidence probe of the machine's bounded-error cut
    Probe {
        machine: PathBuf,
        /// Contexts as v:w pairs, e.g. a: or a:b
        #[arg(long = "context")]
        contexts: Vec<String>,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "subspace")]
        mode: ModeArg,
    },
}

#[derive(clap::ValueEnum, Clone, Copy)]
enum ModeArg {
    Subspace,
    Basis,
}

impl From<ModeArg> for MeasureMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Subspace => MeasureMode::Subspace,
            ModeArg::Basis => MeasureMode::Basis,
        }
    }
}

fn load_language(args: &LangArgs) -> Result<RegularLanguage> {
    if let Some(path) = args.spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let json: DfaJson = serde_json::from_str(&text).context("parsing DFA JSON")?;
        return Ok(RegularLanguage::from_dfa(Dfa::try_from(json)?));
    }
    if args.spec.is_empty() {
        return Err(anyhow!("empty language pattern"));
    }
    match &args.alphabet {
        Some(sigma) => Ok(RegularLanguage::from_regex_over(
            &args.spec,
            Alphabet::new(sigma)?,
        )?),
        None => Ok(RegularLanguage::from_regex(&args.spec)?),
    }
}

fn load_variety(input: &str, from_lang: bool) -> Result<LocalBasicVariety> {
    if from_lang {
        let lang = load_language(&LangArgs {
            spec: input.to_string(),
            alphabet: None,
        })?;
        Ok(derivative_closure(&lang).variety)
    } else {
        let text = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
        let json: VarietyJson = serde_json::from_str(&text).context("parsing variety JSON")?;
        Ok(LocalBasicVariety::try_from(json)?)
    }
}

fn load_bimodule(path: &PathBuf) -> Result<LatticeBimodule> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let json: BimoduleJson = serde_json::from_str(&text).context("parsing bimodule JSON")?;
    Ok(LatticeBimodule::try_from(json)?)
}

fn load_uquotient(path: &PathBuf) -> Result<UQuotient> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let json: UQuotientJson = serde_json::from_str(&text).context("parsing quotient JSON")?;
    Ok(UQuotient::try_from(json)?)
}

fn load_qfa(path: &PathBuf) -> Result<Kwqfa> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))?;
    let json: KwqfaJson = serde_json::from_str(&text).context("parsing QFA JSON")?;
    Ok(Kwqfa::try_from(json)?)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Syntactic(args) => {
            let lang = load_language(&args)?;
            let tm = transition_monoid(&lang);
            if cli.json {
                let letter_map: std::collections::BTreeMap<String, usize> = lang
                    .alphabet()
                    .symbols()
                    .iter()
                    .zip(&tm.letter_map)
                    .map(|(&c, &m)| (c.to_string(), m))
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "monoid": tm.monoid,
                        "letter_map": letter_map,
                        "representatives": tm.representatives,
                    })
                );
            } else {
                println!("syntactic monoid size: {}", tm.monoid.size);
                for (i, &c) in lang.alphabet().symbols().iter().enumerate() {
                    println!("  letter {c:?} ↦ element {}", tm.letter_map[i]);
                }
            }
            Ok(0)
        }
        Command::Closure { lang, dot } => {
            let base = load_language(&lang)?;
            let dc = derivative_closure(&base);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&VarietyJson::from(&dc.variety))?
                );
            } else {
                println!("derivative closure size: {}", dc.variety.len());
                for (i, l) in dc.variety.languages().iter().enumerate() {
                    println!("  [{i}] {}", l.summary());
                }
            }
            if dot {
                for (i, l) in dc.variety.languages().iter().enumerate() {
                    println!("{}", l.to_dot(&format!("derivative_{i}")));
                }
            }
            Ok(0)
        }
        Command::Dualize {
            input,
            from_lang,
            dot,
        } => {
            let v = load_variety(&input, from_lang)?;
            let e = dual_of_variety(&v)?;
            if cli.json {
                println!("{}", serde_json::to_string(&UQuotientJson::from(&e))?);
            } else {
                println!(
                    "dual quotient: {} machine states, lattice of {} elements",
                    e.states, e.lattice.size
                );
            }
            if dot {
                println!("{}", e.lattice.to_dot("dual_lattice"));
            }
            Ok(0)
        }
        Command::VerifyDuality { input, from_lang } => {
            let v = load_variety(&input, from_lang)?;
            let ok = verify_local_duality(&v)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "family_size": v.len(), "round_trip": ok })
                );
            } else {
                println!(
                    "family of {} languages: round trip {}",
                    v.len(),
                    if ok { "OK" } else { "FAILED" }
                );
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Reduce { path } => {
            let b = load_bimodule(&path)?;
            let (reduced, _) = b.reduce();
            let changed = reduced.monoid.size != b.monoid.size;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "reduced": BimoduleJson::from(&reduced),
                        "collapsed_monoid": changed,
                    })
                );
            } else {
                println!(
                    "monoid {} → {}, lattice unchanged ({} elements)",
                    b.monoid.size, reduced.monoid.size, reduced.lattice.size
                );
            }
            Ok(0)
        }
        Command::Check { path } => {
            let text =
                std::fs::read_to_string(&path).with_context(|| format!("reading {path:?}"))?;
            let json: BimoduleJson =
                serde_json::from_str(&text).context("parsing bimodule JSON")?;
            // assemble without the constructor so the report covers all laws
            let lattice = varietas::order::Fdl::try_from(json.lattice)?;
            let candidate = LatticeBimodule {
                monoid: json.monoid,
                lattice,
                iota: json.iota,
                act_left: json.act_left,
                act_right: json.act_right,
            };
            candidate.check_shapes()?;
            let report = candidate.check_axioms();
            if cli.json {
                println!("{}", serde_json::to_string(&report)?);
            } else if report.passed() {
                println!("all bimodule laws hold");
            } else {
                for v in &report.violations {
                    println!("violated {} at {}", v.law, v.witness);
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::CheckCotheory { path } => {
            let text =
                std::fs::read_to_string(&path).with_context(|| format!("reading {path:?}"))?;
            let json: CotheorySampleJson =
                serde_json::from_str(&text).context("parsing cotheory sample JSON")?;
            let sample = json.into_sample()?;
            let report = check_cotheory(&sample);
            if cli.json {
                println!("{}", serde_json::to_string(&report)?);
            } else if report.passed() {
                println!("cotheory conditions hold on the sample");
            } else {
                for v in &report.violations {
                    println!("{}: {}", v.kind, v.detail);
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Rec { path, dot } => {
            let e = load_uquotient(&path)?;
            let report = validate_uquotient(&e, 200_000)?;
            if !report.passed() {
                eprintln!("quotient invariants fail: {report:?}");
                return Ok(1);
            }
            let langs = rec_of_uquotient(&e);
            if cli.json {
                let dfas: Vec<DfaJson> = langs.iter().map(|l| l.to_json()).collect();
                println!("{}", serde_json::json!({ "languages": dfas }));
            } else {
                println!("{} recognized languages:", langs.len());
                for l in &langs {
                    println!("  {}", l.summary());
                }
            }
            if dot {
                for (i, l) in langs.iter().enumerate() {
                    println!("{}", l.to_dot(&format!("recognized_{i}")));
                }
            }
            Ok(0)
        }
        Command::Pipeline(args) => {
            let lang = load_language(&args)?;
            let dc = derivative_closure(&lang);
            let e = dual_of_variety(&dc.variety)?;
            let (bimodule, spec) = minimal_recognizer(&lang)?;
            let rec = recognized_variety(&spec);
            let round_trip = verify_local_duality(&dc.variety)? && rec == dc.variety;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "closure_size": dc.variety.len(),
                        "dual_lattice_size": e.lattice.size,
                        "monoid_size": bimodule.monoid.size,
                        "recognizer_reduced": bimodule.is_reduced(),
                        "round_trip": round_trip,
                    })
                );
            } else {
                println!("closure size:        {}", dc.variety.len());
                println!("dual lattice size:   {}", e.lattice.size);
                println!("syntactic monoid:    {}", bimodule.monoid.size);
                println!("recognizer reduced:  {}", bimodule.is_reduced());
                println!(
                    "round trip:          {}",
                    if round_trip { "OK" } else { "FAILED" }
                );
            }
            Ok(if round_trip { 0 } else { 1 })
        }
        Command::Qfa { command } => run_qfa(command, cli.json),
        Command::Verify { suite, seed } => {
            if let Some(s) = &suite {
                if !suite_names().contains(&s.as_str()) {
                    return Err(anyhow!(
                        "unknown suite {s:?}; available: {}",
                        suite_names().join(", ")
                    ));
                }
            }
            let outcomes = run_checks(suite.as_deref(), seed);
            let all_passed = outcomes.iter().all(|o| o.passed);
            if cli.json {
                println!("{}", serde_json::to_string(&outcomes)?);
            } else {
                for o in &outcomes {
                    let tag = o
                        .criterion
                        .map_or(String::new(), |c| format!(" [criterion {c}]"));
                    println!(
                        "{} {}/{}{tag}: {} ({} ms)",
                        if o.passed { "PASS" } else { "FAIL" },
                        o.suite,
                        o.name,
                        o.details,
                        o.millis
                    );
                }
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn run_qfa(command: QfaCommand, json: bool) -> Result<i32> {
    match command {
        QfaCommand::Run {
            machine,
            word,
            mode,
            trace,
        } => {
            let m = load_qfa(&machine)?;
            let validation = m.validate();
            if !validation.passed {
                eprintln!(
                    "machine is invalid (worst residual {:.3e})",
                    validation.worst_residual
                );
                return Ok(1);
            }
            let t = m.simulate(&word, mode.into())?;
            if json {
                println!("{}", serde_json::to_string(&t)?);
            } else {
                if trace {
                    for s in &t.steps {
                        println!(
                            "  {:?}: p_acc={:.6} p_rej={:.6} continuing={:.6}",
                            s.symbol, s.p_acc, s.p_rej, s.continuing
                        );
                    }
                }
                println!("p_acc({word:?}) = {:.9}", t.p_acc());
            }
            Ok(0)
        }
        QfaCommand::Margin {
            machine,
            lang,
            max_len,
            mode,
        } => {
            let m = load_qfa(&machine)?;
            let validation = m.validate();
            if !validation.passed {
                eprintln!(
                    "machine is invalid (worst residual {:.3e})",
                    validation.worst_residual
                );
                return Ok(1);
            }
            let l = load_language(&lang)?;
            let report = margin_report(&m, &l, max_len, mode.into())?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!(
                    "words ≤ {}: min accept on members = {:?}, max accept off = {:?}",
                    report.max_len, report.min_accept, report.max_accept_complement
                );
                match report.bounded_error_p {
                    Some(p) => println!("bounded-error evidence with p = {p:.6}"),
                    None => println!("no bounded-error separation at 1/2"),
                }
            }
            Ok(0)
        }
        QfaCommand::Validate { machine } => {
            let m = load_qfa(&machine)?;
            let report = m.validate();
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                for (name, r) in &report.unitarity_residuals {
                    println!("  unitary {name:?}: residual {r:.3e}");
                }
                println!(
                    "{}",
                    if report.passed {
                        "machine is valid"
                    } else {
                        "machine is INVALID"
                    }
                );
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        QfaCommand::Probe {
            machine,
            contexts,
            max_len,
            mode,
        } => {
            let m = load_qfa(&machine)?;
            let parsed: Vec<varietas::lang::Context> = contexts
                .iter()
                .map(|c| {
                    let (l, r) = c
                        .split_once(':')
                        .ok_or_else(|| anyhow!("context must be v:w, got {c:?}"))?;
                    Ok(varietas::lang::Context::new(l, r))
                })
                .collect::<Result<_>>()?;
            let report = basic_variety_probe(&m, &parsed, &[], max_len, mode.into())?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("evidence only; not conclusive");
                for e in &report.entries {
                    println!(
                        "  {}: cut {} of {}, threshold margin {:.6} ({})",
                        e.label,
                        e.cut_size,
                        e.words_checked,
                        e.threshold_margin,
                        if e.separated {
                            "separated"
                        } else {
                            "touches 1/2"
                        }
                    );
                }
            }
            Ok(0)
        }
    }
}

/// File shape for cotheory samples.
#[derive(serde::Deserialize)]
struct CotheorySampleJson {
    families: Vec<FamilyJson>,
    homs: Vec<HomJson>,
}

#[derive(serde::Deserialize)]
struct FamilyJson {
    alphabet: String,
    varieties: Vec<VarietyJson>,
}

#[derive(serde::Deserialize)]
struct HomJson {
    source: String,
    target: String,
    image: std::collections::BTreeMap<String, String>,
}

impl CotheorySampleJson {
    fn into_sample(self) -> Result<CotheorySample> {
        let families = self
            .families
            .into_iter()
            .map(|f| {
                let alphabet = Alphabet::new(&f.alphabet)?;
                let members = f
                    .varieties
                    .into_iter()
                    .map(LocalBasicVariety::try_from)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(VarietyFamily { alphabet, members })
            })
            .collect::<Result<Vec<_>>>()?;
        let homs = self
            .homs
            .into_iter()
            .map(|h| {
                let source = Alphabet::new(&h.source)?;
                let target = Alphabet::new(&h.target)?;
                let image = source
                    .symbols()
                    .iter()
                    .map(|c| {
                        h.image
                            .get(&c.to_string())
                            .cloned()
                            .ok_or_else(|| anyhow!("hom missing image for {c:?}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(varietas::lang::FreeMonoidHom::new(source, target, image)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CotheorySample { families, homs })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
