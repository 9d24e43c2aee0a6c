use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use voxnav_core::axml::{decode_manifest, to_xml_string};
use voxnav_core::dialogue::{Device, DialogueConfig, DialogueSession, ExecutionResult};
use voxnav_core::featdex::{evaluate_hit_rate, match_app, rank_features, recommend, EvalCase, ScoringConfig};
use voxnav_core::harness::fixtures::{fixtures_dir, load_bundles, load_scenario, write_all, APPS_DIR};
use voxnav_core::harness::{run_scenario, ManifestSource, ScenarioOptions, SimDevice};
use voxnav_core::lang::{
    evaluate_parser, expand_scfg, load_replay_set, load_test_set, parse, serialize_mr, write_test_set, CommandParser,
    Grammar, Lexicon, RuleParser, SynthConfig, TestCase,
};
use voxnav_core::manifest::collect_intents;

/// First bytes of a binary XML resource chunk.
const AXML_MAGIC: [u8; 2] = [0x03, 0x00];

#[derive(Debug, Parser)]
#[command(name = "voxnav", version, about = "Voice-command navigation over simulated apps")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory of app bundles to install on the simulated device.
    #[arg(long, global = true, value_name = "DIR")]
    pub apps: Option<PathBuf>,
    /// Lexicon TOML replacing the built-in action phrases and thesaurus.
    #[arg(long, global = true, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Decode a binary manifest to XML text.
    Decode { file: PathBuf },
    /// Extract components and launch intents from a manifest (binary or XML).
    Extract { file: PathBuf },
    /// Build the feature index over a directory of app bundles.
    Index { dir: PathBuf },
    /// Rank an app's intents for a feature phrase.
    Query {
        app: String,
        feature: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Parse an utterance into canonical MR text.
    Parse {
        utterance: String,
        /// On-screen button label; repeat for several.
        #[arg(long = "schema", value_name = "LABEL")]
        schema: Vec<String>,
    },
    /// Synthesize utterance/MR pairs from a grammar as a test-set TSV.
    Synth {
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        /// Grammar file; the built-in grammar when absent.
        #[arg(long, value_name = "FILE")]
        grammar: Option<PathBuf>,
    },
    /// Score the parser on a test-set TSV.
    EvalParser {
        tsv: PathBuf,
        /// Score recorded predictions (utterance, gold, predicted, schema) instead of parsing.
        #[arg(long)]
        replay: bool,
    },
    /// Hit rate at k=1 and k=3 for a JSON case file against app bundles.
    EvalHit {
        cases: PathBuf,
        bundles: PathBuf,
        /// Also write the per-case CSV here.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Run a scenario script against the device.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        continue_after_reject: bool,
    },
    /// Read utterances from stdin and execute them one per line.
    Repl,
    /// Serve the device over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Start with no apps installed.
        #[arg(long)]
        empty: bool,
    },
    /// Regenerate the bundled fixture files.
    Fixtures {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Input was understood but the operation failed.
    #[error("{0}")]
    Domain(String),
    /// Arguments were inconsistent in a way clap cannot check.
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read(path)?).map_err(|_| CliError::Domain(format!("{}: not UTF-8", path.display())))
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(domain)
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), CliError> {
    emit(out, serde_json::to_string_pretty(value).map_err(domain)?)
}

impl Cli {
    pub fn apps_dir(&self) -> PathBuf {
        self.apps.clone().unwrap_or_else(|| fixtures_dir().join(APPS_DIR))
    }

    pub fn load_lexicon(&self) -> Result<Lexicon, CliError> {
        match &self.lexicon {
            Some(path) => Lexicon::from_toml(&read_text(path)?).map_err(domain),
            None => Ok(Lexicon::default()),
        }
    }

    pub fn load_device(&self) -> Result<SimDevice, CliError> {
        let bundles = load_bundles(&self.apps_dir()).map_err(domain)?;
        SimDevice::with_bundles(bundles).map_err(domain)
    }

    pub fn session(&self) -> Result<DialogueSession<SimDevice>, CliError> {
        Ok(DialogueSession::new(self.load_device()?, self.load_lexicon()?, DialogueConfig::default()))
    }
}

/// Runs every subcommand except `serve`, writing results to `out`.
pub fn run(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Cmd::Decode { file } => {
            let doc = decode_manifest(&read(file)?).map_err(domain)?;
            if cli.json {
                emit_json(out, &doc)
            } else {
                write!(out, "{}", to_xml_string(&doc)).map_err(domain)
            }
        }
        Cmd::Extract { file } => extract(cli, file, out),
        Cmd::Index { dir } => {
            let bundles = load_bundles(dir).map_err(domain)?;
            let device = SimDevice::with_bundles(bundles).map_err(domain)?;
            let apps = device.app_summaries();
            if cli.json {
                return emit_json(out, &apps);
            }
            for app in &apps {
                emit(out, format!("{}\t{}\t{} intents", app.package_name, app.label, app.intent_count))?;
                for link in &app.deep_links {
                    emit(out, format!("\t{link}"))?;
                }
            }
            Ok(())
        }
        Cmd::Query { app, feature, k } => query(cli, app, feature, *k, out),
        Cmd::Parse { utterance, schema } => {
            let mr = parse(utterance, schema, &cli.load_lexicon()?).map_err(|e| CliError::Domain(format!("{} ({})", e, e.kind.code())))?;
            if cli.json {
                emit_json(out, &json!({ "utterance": utterance, "mr": serialize_mr(&mr) }))
            } else {
                emit(out, serialize_mr(&mr))
            }
        }
        Cmd::Synth { budget, seed, grammar } => {
            let grammar = match grammar {
                Some(path) => Grammar::parse(&read_text(path)?).map_err(domain)?,
                None => Grammar::default_grammar(),
            };
            let pairs = expand_scfg(&grammar, *budget, *seed, &SynthConfig::default()).map_err(domain)?;
            let cases: Vec<TestCase> = pairs
                .into_iter()
                .map(|p| TestCase {
                    schema: p.schema().to_vec(),
                    utterance: p.utterance,
                    expected: p.mr,
                })
                .collect();
            if cli.json {
                let rows: Vec<_> = cases
                    .iter()
                    .map(|c| json!({ "utterance": c.utterance, "mr": serialize_mr(&c.expected), "schema": c.schema }))
                    .collect();
                emit_json(out, &rows)
            } else {
                write!(out, "{}", write_test_set(&cases)).map_err(domain)
            }
        }
        Cmd::EvalParser { tsv, replay } => {
            let text = read_text(tsv)?;
            let metrics = if *replay {
                let (cases, parser) = load_replay_set(&text).map_err(domain)?;
                evaluate_parser(&parser, &cases)
            } else {
                let cases = load_test_set(&text).map_err(domain)?;
                evaluate_parser(&RuleParser::new(cli.load_lexicon()?), &cases)
            }
            .map_err(domain)?;
            if cli.json {
                emit_json(out, &metrics)
            } else {
                emit(out, voxnav_core::lang::ParserMetrics::table_header())?;
                emit(out, metrics.table_row(&tsv.display().to_string()))
            }
        }
        Cmd::EvalHit { cases, bundles, csv } => {
            let cases: Vec<EvalCase> = serde_json::from_str(&read_text(cases)?).map_err(domain)?;
            let device = SimDevice::with_bundles(load_bundles(bundles).map_err(domain)?).map_err(domain)?;
            let report = evaluate_hit_rate(device.feature_index(), &cases, &[1, 3], &device, &ScoringConfig::default())
                .map_err(domain)?;
            if let Some(path) = csv {
                std::fs::write(path, report.to_csv()).map_err(domain)?;
            }
            if cli.json {
                emit_json(out, &report.summary_json())
            } else {
                for (k, hits) in &report.hits {
                    emit(out, format!("hit@{k}\t{hits}/{}\t{:.2}%", cases.len(), report.hit_rate[k]))?;
                }
                Ok(())
            }
        }
        Cmd::Run { scenario, continue_after_reject } => {
            let script = load_scenario(scenario).map_err(domain)?;
            let mut session = cli.session()?;
            let options = ScenarioOptions {
                continue_after_reject: *continue_after_reject,
            };
            let report = run_scenario(&mut session, &script, &RuleParser::new(cli.load_lexicon()?), options);
            if cli.json {
                emit_json(out, &report)?;
            } else {
                for step in &report.steps {
                    emit(out, format!("> {}", step.utterance))?;
                    if let Some(e) = &step.parse_error {
                        emit(out, format!("  parse error: {e}"))?;
                    }
                    for r in &step.results {
                        emit(out, format!("  {}  [{}]", r.feedback, r.screen_after))?;
                    }
                }
                emit(out, format!("final screen {}, {} steps", report.final_screen, report.step_count))?;
            }
            if report.completed() {
                Ok(())
            } else {
                Err(CliError::Domain(format!("scenario {} did not complete", report.name)))
            }
        }
        Cmd::Repl => repl(cli, input, out),
        Cmd::Fixtures { out: dir } => {
            let dir = dir.clone().unwrap_or_else(fixtures_dir);
            let n = write_all(&dir).map_err(domain)?;
            emit(out, format!("wrote {n} files under {}", dir.display()))
        }
        Cmd::Serve { .. } => Err(CliError::Usage("serve runs from the binary entry point".into())),
    }
}

fn extract(cli: &Cli, file: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read(file)?;
    let source = if bytes.starts_with(&AXML_MAGIC) {
        ManifestSource::Binary(bytes)
    } else {
        ManifestSource::Xml(String::from_utf8(bytes).map_err(|_| CliError::Domain("manifest is not UTF-8".into()))?)
    };
    let package = source.extract().map_err(domain)?;
    let intents = collect_intents(&package);
    if cli.json {
        return emit_json(out, &json!({ "package": package, "intents": intents.intents, "launcher": intents.launcher }));
    }
    emit(out, format!("{} ({})", package.package_name, package.label))?;
    for intent in &intents.intents {
        let keywords: Vec<&str> = intent.keywords.tokens().collect();
        emit(out, format!("{}\t[{}]", intent.describe(), keywords.join(", ")))?;
    }
    Ok(())
}

fn query(cli: &Cli, app: &str, feature: &str, k: usize, out: &mut dyn Write) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let device = cli.load_device()?;
    let index = device.feature_index();
    let cfg = ScoringConfig::default();
    let entry = match_app(index, app).map_err(domain)?;
    let ranked = rank_features(entry, feature, k, &cfg).map_err(domain)?;
    let recommended = recommend(index, app, Some(feature), k, &cfg).map_err(domain)?;
    if cli.json {
        return emit_json(
            out,
            &json!({
                "package_name": entry.package.package_name,
                "feature": feature,
                "k": k,
                "ranked": ranked.entries,
                "recommended": recommended,
            }),
        );
    }
    for (i, m) in ranked.entries.iter().enumerate() {
        emit(out, format!("{}. {:.3}\t{}", i + 1, m.score.total, m.intent.describe()))?;
    }
    let top = ranked.entries.first().map(|m| &m.intent);
    if let Some(launcher) = recommended.first().filter(|r| Some(*r) != top) {
        emit(out, format!("fallback: {}", launcher.describe()))?;
    }
    Ok(())
}

fn print_results(cli: &Cli, results: &[ExecutionResult], out: &mut dyn Write) -> Result<(), CliError> {
    for r in results {
        if cli.json {
            emit(out, r.to_json_line())?;
        } else {
            emit(out, format!("{}  [{}]", r.feedback, r.screen_after))?;
        }
    }
    Ok(())
}

fn repl(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    let mut session = cli.session()?;
    let parser = RuleParser::new(cli.load_lexicon()?);
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line).map_err(domain)? == 0 {
            return Ok(());
        }
        let utterance = line.trim();
        match utterance {
            "" => continue,
            "quit" | "exit" => return Ok(()),
            _ => {}
        }
        match parser.parse(utterance, &session.screen_schema()) {
            Err(e) => emit(out, format!("could not understand: {e}"))?,
            Ok(mr) => {
                let rejected = session.enqueue(&mr).err().map(|e| e.rejected).unwrap_or_default();
                let results = session.run_until_idle();
                print_results(cli, &results, out)?;
                print_results(cli, &rejected, out)?;
            }
        }
        out.flush().map_err(domain)?;
    }
}
