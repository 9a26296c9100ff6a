//! Command line front end: module files, property checks, theorem
//! verification and counterexample search.

pub mod error;
pub mod render;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rickart_core::lab::{search_counterexample, verify_theorem, Expr, SearchBounds, StreamParams};
use rickart_core::{Engine, EngineOptions, HomRoute, HomSpace, Limits, Property};
use serde_json::{json, Map, Value};

pub use error::CliError;
pub use spec::{
    module_to_spec_text, parse_module_spec, parse_ring_spec, read_module, ring_to_spec_text,
    ModuleFile, RingRef,
};

use render::{
    certificate_json, certificate_text, hom_lines, module_header, module_json, report_json,
    report_text, submodule_line, witness_json, witness_text,
};

/// Exit code for a false property (check) or a failed verification.
pub const EXIT_FALSE: i32 = 1;
/// Exit code for usage, parse and engine errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rickart",
    version,
    about = "Decide Rickart-type properties of finite modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct EngineFlags {
    /// Walk every homomorphism instead of classifying kernels and images.
    #[arg(long)]
    enumerate: bool,
    /// Decide essential, superfluous and summand from the definitions.
    #[arg(long)]
    brute_force: bool,
    /// Largest hom set walked element by element.
    #[arg(long, value_name = "N")]
    max_homs: Option<u128>,
}

impl EngineFlags {
    fn engine(&self, verbose: bool) -> Engine {
        let mut limits = Limits::default();
        if let Some(n) = self.max_homs {
            limits.max_homs = n;
        }
        Engine::new(EngineOptions {
            limits,
            route: if self.enumerate {
                HomRoute::Enumerate
            } else {
                HomRoute::Auto
            },
            brute_force: self.brute_force,
            verbose,
        })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide one property; exit 0 when it holds, 1 when it fails.
    Check {
        property: String,
        #[arg(long, value_name = "FILE")]
        module: PathBuf,
        /// Decide "<relative> is <module>-<property>" for a hom-quantified property.
        #[arg(long, value_name = "FILE")]
        relative: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Print the summands that certify a true verdict.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// Every property with failure witnesses.
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// The direct summands.
    Summands {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// The submodule lattice.
    Submodules {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// The homomorphisms from the first module to the second.
    Homs {
        source: PathBuf,
        target: PathBuf,
        /// Print at most this many homomorphisms.
        #[arg(long, default_value_t = 64)]
        limit: u64,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// Check a theorem over its instance stream; exit 1 on a violation.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long, value_name = "K")]
        max_order: Option<usize>,
        /// Bound on direct sums whose lattice is examined.
        #[arg(long, value_name = "K")]
        max_sum_order: Option<usize>,
        /// `Z` (abelian groups) or `zn:<n>`.
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineFlags,
    },
    /// First module (or pair) satisfying the hypothesis but not the conclusion.
    Search {
        #[arg(long)]
        hypothesis: String,
        #[arg(long)]
        conclusion: String,
        #[arg(long, value_name = "K")]
        max_order: usize,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineFlags,
    },
}

/// `None` for abelian groups, `Some(n)` for modules over `Z_n`.
fn stream_ring(text: Option<&str>) -> Result<Option<u64>, CliError> {
    match text.map(RingRef::parse) {
        None | Some(Some(RingRef::Integers)) => Ok(None),
        Some(Some(RingRef::Zn(n))) => Ok(Some(n)),
        _ => Err(CliError::Usage(format!(
            "--ring expects `Z` or `zn:<n>`, found `{}`",
            text.unwrap_or_default()
        ))),
    }
}

fn property(name: &str) -> Result<Property, CliError> {
    Property::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        CliError::Usage(format!(
            "unknown property `{name}`; expected one of {}",
            names.join(", ")
        ))
    })
}

fn json_line(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise") + "\n"
}

/// Output text and exit code of a successful dispatch.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Check {
            property: name,
            module,
            relative,
            json,
            verbose,
            engine,
        } => {
            let p = property(&name)?;
            let engine = engine.engine(verbose);
            let m = read_module(&module)?;
            let n = relative.as_deref().map(read_module).transpose()?;
            let verdict = match &n {
                Some(n) if p.is_relative() => engine.explain_relative(p, &m.module, &n.module)?,
                Some(_) => {
                    return Err(CliError::Usage(format!(
                        "{p} is not defined relative to another module"
                    )));
                }
                None => engine.explain(p, &m.module)?,
            };
            let text = if json {
                let mut o = Map::new();
                o.insert("module".into(), module_json(&m.module, m.name.as_deref()));
                if let Some(n) = &n {
                    o.insert("relative".into(), module_json(&n.module, n.name.as_deref()));
                }
                o.insert("properties".into(), json!({ p.name(): verdict.holds }));
                let mut w = Map::new();
                if let Some(wit) = &verdict.witness {
                    w.insert(p.name().into(), witness_json(wit));
                }
                o.insert("witnesses".into(), Value::Object(w));
                if verbose {
                    let certs: Vec<Value> =
                        verdict.certificates.iter().map(certificate_json).collect();
                    o.insert("certificates".into(), json!(certs));
                }
                json_line(&Value::Object(o))
            } else {
                let mut t = format!("{}\n", verdict.holds);
                if let Some(w) = &verdict.witness {
                    t.push_str(&witness_text(w, ""));
                }
                if verbose && !verdict.certificates.is_empty() {
                    t.push_str("certificates:\n");
                    for c in &verdict.certificates {
                        t.push_str(&certificate_text(c, "  "));
                    }
                }
                t
            };
            Ok(Outcome {
                text,
                code: if verdict.holds { 0 } else { EXIT_FALSE },
            })
        }
        Command::Report { file, json, engine } => {
            let m = read_module(&file)?;
            let r = engine.engine(false).property_report(&m.module)?;
            Ok(Outcome::ok(if json {
                json_line(&report_json(&r, &m.module, m.name.as_deref()))
            } else {
                report_text(&r, &m.module, m.name.as_deref())
            }))
        }
        Command::Summands { file, engine } => {
            let m = read_module(&file)?;
            let subs = engine.engine(false).summands(&m.module)?;
            let mut t = format!(
                "{}: {} direct summands\n",
                module_header(&m.module, m.name.as_deref()),
                subs.len()
            );
            for s in &subs {
                t.push_str(&format!("  {}\n", submodule_line(s)));
            }
            Ok(Outcome::ok(t))
        }
        Command::Submodules { file, engine } => {
            let m = read_module(&file)?;
            let lat = engine.engine(false).lattice(&m.module)?;
            let mut t = format!(
                "{}: {} submodules\n",
                module_header(&m.module, m.name.as_deref()),
                lat.len()
            );
            for s in lat.submodules() {
                t.push_str(&format!("  {}\n", submodule_line(s)));
            }
            t.push_str(&format!("socle {}\n", submodule_line(lat.socle())));
            t.push_str(&format!("radical {}\n", submodule_line(lat.radical())));
            Ok(Outcome::ok(t))
        }
        Command::Homs {
            source,
            target,
            limit,
            engine,
        } => {
            let m = read_module(&source)?;
            let n = read_module(&target)?;
            let engine = engine.engine(false);
            let space = HomSpace::new(&m.module, &n.module)?;
            let count = space.count(engine.limits())?;
            let mut t = format!("Hom({}, {}): {count} homomorphisms\n", m.module, n.module);
            let shown = count.min(limit as u128) as u64;
            for i in 0..shown {
                if let Some(h) = space.nth(i, engine.limits())? {
                    t.push_str(&format!("#{}\n", i + 1));
                    t.push_str(&hom_lines(&h, "  "));
                }
            }
            if (shown as u128) < count {
                t.push_str(&format!("... {} more\n", count - shown as u128));
            }
            Ok(Outcome::ok(t))
        }
        Command::Verify {
            theorem,
            max_order,
            max_sum_order,
            ring,
            json,
            engine,
        } => {
            let params = StreamParams {
                max_order,
                max_sum_order,
                ring: stream_ring(ring.as_deref())?,
            };
            let r = verify_theorem(&theorem, &params, &engine.engine(false))?;
            let text = if json {
                let violations: Vec<Value> = r
                    .violations
                    .iter()
                    .map(|v| json!({ "instance": v.instance, "witness": v.witness }))
                    .collect();
                json_line(&json!({
                    "theorem": r.theorem,
                    "passed": r.passed(),
                    "instances": r.instances,
                    "violations": violations,
                    "notes": r.notes,
                }))
            } else {
                let mut t = format!(
                    "{}: {} ({} instances, {} violations, {:.2?})\n",
                    r.theorem,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.instances,
                    r.violations.len(),
                    r.elapsed
                );
                for v in &r.violations {
                    t.push_str(&format!("  violation at {}: {}\n", v.instance, v.witness));
                }
                for n in &r.notes {
                    t.push_str(&format!("  note: {n}\n"));
                }
                t
            };
            Ok(Outcome {
                text,
                code: if r.passed() { 0 } else { EXIT_FALSE },
            })
        }
        Command::Search {
            hypothesis,
            conclusion,
            max_order,
            ring,
            json,
            engine,
        } => {
            let h = Expr::parse(&hypothesis)?;
            let c = Expr::parse(&conclusion)?;
            let bounds = SearchBounds {
                max_order,
                ring: stream_ring(ring.as_deref())?,
            };
            let found = search_counterexample(&h, &c, &bounds, &engine.engine(false))?;
            let text = match (&found, json) {
                (None, false) => {
                    format!("no counterexample to {h} => {c} up to order {max_order}\n")
                }
                (None, true) => json_line(
                    &json!({ "hypothesis": h.to_string(), "conclusion": c.to_string(), "counterexample": null }),
                ),
                (Some(ce), false) => {
                    let mut t =
                        format!("counterexample to {h} => {c} (instance {}):\n", ce.examined);
                    match (&ce.sum, ce.modules.as_slice()) {
                        (Some(s), [a, b]) => {
                            t.push_str(&format!("  a = {a}\n  b = {b}\n  a+b = {s}\n"))
                        }
                        _ => t.push_str(&format!("  M = {}\n", ce.modules[0])),
                    }
                    for a in &ce.chain {
                        t.push_str(&format!("  {} = {}\n", a.atom, a.value));
                        if let Some(w) = &a.witness {
                            t.push_str(&witness_text(w, "    "));
                        }
                    }
                    t
                }
                (Some(ce), true) => {
                    let chain: Vec<Value> = ce
                        .chain
                        .iter()
                        .map(|a| {
                            json!({
                                "atom": a.atom,
                                "value": a.value,
                                "witness": a.witness.as_ref().map(witness_json),
                            })
                        })
                        .collect();
                    let modules: Vec<Value> =
                        ce.modules.iter().map(|m| module_json(m, None)).collect();
                    json_line(&json!({
                        "hypothesis": h.to_string(),
                        "conclusion": c.to_string(),
                        "counterexample": {
                            "modules": modules,
                            "sum": ce.sum.as_ref().map(|s| module_json(s, None)),
                            "examined": ce.examined,
                            "chain": chain,
                        },
                    }))
                }
            };
            Ok(Outcome::ok(text))
        }
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
