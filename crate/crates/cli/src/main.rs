//! `prefcheck`: check preference axioms on mixture sets from JSON model files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use prefcheck::axioms::{verify_witness, CheckError, Checker};
use prefcheck::catalog::{self, CatalogError};
use prefcheck::descriptor::{quotient_instance, DescriptorError, Loaded, ModelFile};
use prefcheck::fuzz::Generator;
use prefcheck::representation::{calibrate, verify_representation, RepresentationError};
use prefcheck::theorems::{run_all, run_harness, TheoremId};
use prefcheck::{AxiomId, Label, MixtureSpace, Rational, Status};

#[derive(Parser)]
#[command(name = "prefcheck", version, about = "Exact checks of preference axioms on mixture sets")]
struct Cli {
    /// Emit compact JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Emit indented JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide axioms on a model's universe.
    Axioms {
        model: PathBuf,
        /// Restrict to these axioms (repeatable).
        #[arg(long = "axiom")]
        axioms: Vec<String>,
        /// Expected status, as `axiom=status` (repeatable).
        #[arg(long = "expect")]
        expect: Vec<String>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Run a theorem harness (or `all`).
    Theorem {
        theorem: String,
        model: PathBuf,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Calibrate and verify a utility representation.
    Represent {
        model: PathBuf,
        /// Universe indices of the lower and upper anchors, as `i,j`.
        #[arg(long)]
        anchors: Option<String>,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Run the built-in example catalog against its expectations.
    Catalog {
        /// Restrict to these entries (repeatable).
        #[arg(long = "entry")]
        entries: Vec<String>,
        /// Write every selected entry as a model file into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Run every theorem harness on random multi-utility instances.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Args)]
struct UniverseArgs {
    /// Mixture weights for universe closure, as `a,b,...`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    closure_depth: Option<usize>,
    /// Work on the indifference quotient.
    #[arg(long)]
    quotient: bool,
}

#[derive(Clone, Copy)]
enum Mode {
    Text,
    Json,
    Pretty,
}

/// A failed run: exit 2 for bad input, exit 1 for a failed check.
enum Failure {
    Input(String),
    Check(String),
}

impl From<DescriptorError> for Failure {
    fn from(e: DescriptorError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Unknown(_) => Failure::Input(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

/// What a subcommand prints, and whether it passed.
struct Outcome {
    report: Value,
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.pretty {
        Mode::Pretty
    } else if cli.json {
        Mode::Json
    } else {
        Mode::Text
    };
    let result = match cli.command {
        Command::Axioms { model, axioms, expect, universe } => cmd_axioms(&model, &axioms, &expect, &universe),
        Command::Theorem { theorem, model, universe } => cmd_theorem(&theorem, &model, &universe),
        Command::Represent { model, anchors, universe } => cmd_represent(&model, anchors.as_deref(), &universe),
        Command::Catalog { entries, export } => cmd_catalog(&entries, export.as_deref()),
        Command::Fuzz { count } => cmd_fuzz(count),
    };
    match result {
        Ok(out) => {
            match mode {
                Mode::Text => print!("{}", out.text),
                Mode::Json => println!("{}", out.report),
                Mode::Pretty => println!("{}", serde_json::to_string_pretty(&out.report).expect("json value")),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_grid(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(|s| {
            let w: Rational = s.trim().parse().map_err(|_| Failure::Input(format!("bad grid weight `{s}`")))?;
            if w <= Rational::ZERO || w >= Rational::ONE {
                return Err(Failure::Input(format!("grid weight {w} is not strictly between 0 and 1")));
            }
            Ok(w)
        })
        .collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn load(path: &Path, args: &UniverseArgs) -> Result<(ModelFile, Loaded), Failure> {
    let file = ModelFile::read(path)?;
    let mut loaded = file.load()?;
    if let Some(g) = &args.grid {
        loaded.universe.grid = parse_grid(g)?;
    }
    if let Some(d) = args.closure_depth {
        loaded.universe.closure_depth = d;
    }
    if args.quotient && !matches!(loaded.model.space, MixtureSpace::Quotient(_)) {
        let (model, universe) = quotient_instance(&loaded.model, &loaded.universe)?;
        loaded.model = model;
        loaded.universe = universe;
    }
    Ok((file, loaded))
}

fn parse_expect(items: &[String]) -> Result<Vec<(AxiomId, Status)>, Failure> {
    items
        .iter()
        .map(|item| {
            let (k, v) = item.split_once('=').ok_or_else(|| Failure::Input(format!("expected `axiom=status`, got `{item}`")))?;
            let id: AxiomId = k.trim().parse().map_err(|e: prefcheck::verdict::UnknownAxiom| Failure::Input(e.to_string()))?;
            let st: Status = v.trim().parse().map_err(Failure::Input)?;
            Ok((id, st))
        })
        .collect()
}

fn cmd_axioms(path: &Path, filter: &[String], expect: &[String], args: &UniverseArgs) -> Result<Outcome, Failure> {
    let (file, loaded) = load(path, args)?;
    let expect = parse_expect(expect)?;
    let mut ids: Vec<AxiomId> = if filter.is_empty() {
        AxiomId::standard().to_vec()
    } else {
        filter
            .iter()
            .map(|s| s.parse().map_err(|e: prefcheck::verdict::UnknownAxiom| Failure::Input(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    for (id, _) in &expect {
        if !ids.contains(id) {
            ids.push(*id);
        }
    }
    let checker = Checker::new(&loaded.model, &loaded.universe)?;
    let verdicts = checker.check_all(&ids)?;
    let mut mismatches = Vec::new();
    let mut text = String::new();
    for v in &verdicts {
        let _ = writeln!(text, "{v}");
        if v.witness.is_some() && !verify_witness(checker.model(), v)? {
            mismatches.push(json!({"subject": v.axiom.as_str(), "expected": "witness replays", "actual": "witness rejected"}));
        }
    }
    for (id, want) in &expect {
        let got = verdicts.iter().find(|v| v.axiom == *id).map(|v| v.status).expect("expected axiom was checked");
        if got != *want {
            mismatches.push(json!({"subject": id.as_str(), "expected": want.as_str(), "actual": got.as_str()}));
        }
    }
    for m in &mismatches {
        let _ = writeln!(text, "MISMATCH {}: expected {}, got {}", m["subject"].as_str().unwrap(), m["expected"].as_str().unwrap(), m["actual"].as_str().unwrap());
    }
    let size = checker.size();
    let report = json!({
        "model": to_value(&file),
        "universe": {"given": size.given, "closure": size.closure, "total": size.total},
        "verdicts": to_value(&verdicts),
        "mismatches": mismatches,
    });
    Ok(Outcome { ok: mismatches.is_empty(), report, text })
}

fn cmd_theorem(theorem: &str, path: &Path, args: &UniverseArgs) -> Result<Outcome, Failure> {
    let which = if theorem.eq_ignore_ascii_case("all") {
        None
    } else {
        Some(theorem.parse::<TheoremId>().map_err(|e| Failure::Input(e.to_string()))?)
    };
    let (file, loaded) = load(path, args)?;
    let checker = Checker::new(&loaded.model, &loaded.universe)?;
    let reports = match which {
        Some(t) => run_harness(t, &checker)?,
        None => run_all(&checker)?,
    };
    let mut text = String::new();
    for r in &reports {
        let name = match &r.variant {
            Some(v) => format!("{} ({v})", r.theorem),
            None => r.theorem.to_string(),
        };
        let verdict = if !r.applicable {
            "not applicable"
        } else if r.consistent {
            "consistent"
        } else {
            "REFUTED"
        };
        let _ = writeln!(text, "{name}: {verdict}");
        for v in r.hypotheses.values() {
            let _ = writeln!(text, "  hypothesis {v}");
        }
        for v in r.conclusions.values() {
            let _ = writeln!(text, "  conclusion {v}");
        }
        for v in r.intermediate.values() {
            let _ = writeln!(text, "  intermediate {v}");
        }
        if let Some(rep) = &r.representation {
            let _ = writeln!(text, "  representation calibrated={} verified={} {}", rep.calibrated, rep.verified, rep.detail);
        }
        for n in &r.notes {
            let _ = writeln!(text, "  note: {n}");
        }
    }
    let ok = reports.iter().all(|r| !r.refuted());
    Ok(Outcome { ok, report: json!({"model": to_value(&file), "theorems": to_value(&reports)}), text })
}

fn parse_anchors(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Input(format!("anchors must be `i,j`, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn cmd_represent(path: &Path, anchors: Option<&str>, args: &UniverseArgs) -> Result<Outcome, Failure> {
    let (file, loaded) = load(path, args)?;
    let checker = Checker::new(&loaded.model, &loaded.universe)?;
    let given = &loaded.universe.points;
    let (low, high) = match anchors.map(parse_anchors).transpose()?.or(loaded.anchors) {
        Some(pair) => pair,
        None => first_strict_pair(&checker, given.len()).ok_or_else(|| Failure::Input("no strictly ordered pair to anchor on".into()))?,
    };
    let locate = |i: usize| -> Result<usize, Failure> {
        let p = given.get(i).ok_or_else(|| Failure::Input(format!("anchor index {i} is outside the universe")))?;
        let p = match &loaded.model.space {
            MixtureSpace::Quotient(q) => q.canonical(p).map_err(CheckError::from)?,
            _ => p.clone(),
        };
        Ok(checker.points().iter().position(|x| *x == p).expect("given points are in the checked universe"))
    };
    let (li, hi) = (locate(low)?, locate(high)?);
    let cal = calibrate(&checker, li, hi).map_err(|e| match e {
        RepresentationError::EmptyIndifference { .. } => Failure::Check(e.to_string()),
        other => Failure::Input(other.to_string()),
    })?;
    let verification = verify_representation(checker.model(), &cal.representation, checker.points(), checker.grid())?;
    let values = cal.representation.with_class_members(checker.model()).map_err(CheckError::from)?;
    let mut text = String::new();
    let _ = writeln!(text, "anchors {} < {}", values.anchor_low, values.anchor_high);
    for (p, u) in &values.values {
        let _ = writeln!(text, "u({p}) = {u}");
    }
    for w in &cal.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let _ = writeln!(
        text,
        "verification: order {} on {} pairs, mixtures {} on {} checks",
        verdict_word(verification.order_agreement),
        verification.pairs_checked,
        verdict_word(verification.mixture_preservation),
        verification.mixtures_checked
    );
    for f in &verification.failures {
        let _ = writeln!(text, "FAILURE {f}");
    }
    let report = json!({
        "model": to_value(&file),
        "utility": to_value(&values),
        "trace": to_value(&cal.trace),
        "warnings": cal.warnings,
        "verification": to_value(&verification),
    });
    Ok(Outcome { ok: verification.passed(), report, text })
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "agrees"
    } else {
        "DISAGREES"
    }
}

fn first_strict_pair(checker: &Checker, n: usize) -> Option<(usize, usize)> {
    for i in 0..n {
        for j in 0..n {
            if checker.outcome(i, j).label() == Label::StrictBelow {
                return Some((i, j));
            }
        }
    }
    None
}

fn export_name(id: &str, quotient: bool) -> String {
    if quotient {
        format!("quotient_{}.json", id.split('_').next().unwrap_or(id))
    } else {
        format!("{id}.json")
    }
}

fn cmd_catalog(entries: &[String], export: Option<&Path>) -> Result<Outcome, Failure> {
    for id in entries {
        if !catalog::IDS.contains(&id.as_str()) {
            return Err(Failure::Input(format!("unknown catalog entry `{id}`")));
        }
    }
    if let Some(dir) = export {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
        let chosen: Vec<&str> = if entries.is_empty() { catalog::IDS.to_vec() } else { entries.iter().map(String::as_str).collect() };
        for id in chosen {
            let entry = catalog::load_entry(id)?;
            let mut files = vec![(export_name(id, false), ModelFile::from_entry(&entry, false))];
            if entry.quotient {
                files.push((export_name(id, true), ModelFile::from_entry(&entry, true)));
            }
            for (name, file) in files {
                let text = serde_json::to_string_pretty(&file).expect("model files serialize");
                let target = dir.join(name);
                std::fs::write(&target, text + "\n").map_err(|e| Failure::Input(format!("cannot write {}: {e}", target.display())))?;
            }
        }
    }
    let reports = catalog::run_catalog(Some(entries))?;
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{:<18} {} ({} points, {} mismatches)", r.id, if r.passed() { "pass" } else { "FAIL" }, r.universe_size, r.mismatches.len());
        for m in &r.mismatches {
            let _ = writeln!(text, "  MISMATCH {}: expected {}, got {}", m.subject, m.expected, m.actual);
        }
    }
    let ok = reports.iter().all(|r| r.passed());
    Ok(Outcome { ok, report: json!({"entries": to_value(&reports)}), text })
}

fn cmd_fuzz(count: usize) -> Result<Outcome, Failure> {
    let seed = match std::env::var("PREFCHECK_SEED") {
        Ok(s) => s.trim().parse::<u64>().map_err(|_| Failure::Input(format!("PREFCHECK_SEED must be an unsigned integer, got `{s}`")))?,
        Err(_) => 0,
    };
    let mut refutations = Vec::new();
    let mut harnesses = 0;
    let mut applicable = 0;
    for inst in Generator::new(seed).corpus(count) {
        let checker = Checker::new(&inst.model, &inst.universe)?;
        for r in run_all(&checker)? {
            harnesses += 1;
            applicable += usize::from(r.applicable);
            if r.refuted() {
                refutations.push(json!({"instance": inst.label, "report": to_value(&r)}));
            }
        }
    }
    let mut text = format!("seed {seed}: {count} instances, {harnesses} harness runs, {applicable} applicable, {} refutations\n", refutations.len());
    for r in &refutations {
        let _ = writeln!(text, "REFUTED {} on {}", r["report"]["theorem"].as_str().unwrap_or("?"), r["instance"].as_str().unwrap_or("?"));
    }
    let report = json!({
        "seed": seed,
        "instances": count,
        "harness_runs": harnesses,
        "applicable": applicable,
        "refutations": refutations,
    });
    Ok(Outcome { ok: refutations.is_empty(), report, text })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_weights_must_be_interior() {
        assert!(parse_grid("1/4,1/2").is_ok());
        assert!(parse_grid("0,1/2").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn anchors_parse() {
        assert!(matches!(parse_anchors("0, 2"), Ok((0, 2))));
        assert!(parse_anchors("0").is_err());
    }

    #[test]
    fn quotient_export_names() {
        assert_eq!(export_name("split_hm", true), "quotient_split.json");
        assert_eq!(export_name("eu3", false), "eu3.json");
    }
}
