use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ellcode_core::codes::{is_mds, sigma_search, CodeRepr, LinearCode, DEFAULT_SIGMA_ATTEMPTS};
use ellcode_core::curve::Point;
use ellcode_core::ecp::{channel_corrupt, ecp_decode, CompositeScheme, DecodeResult};
use ellcode_core::field::{ElemRepr, Field, FieldElem};
use ellcode_core::kernels::support_set;
use ellcode_core::pipeline::{
    info, nontrivial_divisors, selftest, CodeContext, FamilyFile, Instance, InstanceConfig, SelftestOptions,
};
use ellcode_core::seed::rng_for;

/// Elliptic-curve evaluation codes with a direct-sum decomposition and
/// error-correcting-pair decoding.
#[derive(Parser)]
#[command(name = "ellcode", version)]
struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArg {
    /// Instance configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Point counts, kernel orders and divisor degrees of an instance.
    Info {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        json: bool,
    },
    /// Build the instance and run the invariant checks.
    Selftest {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Perturb a projector before checking (exercises failure reporting).
        #[arg(long, hide = true)]
        corrupt_projector: bool,
    },
    /// Build everything and write code.json, family.json and the report.
    Pipeline {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the code of D_N only.
    Build {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for an evaluation set.
    Sigma {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message with a code, or a word of L_0(D_N) with a family.
    Encode {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        code: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        /// Message as a JSON array; random when absent.
        #[arg(long)]
        message: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add an error of exact weight to a word (or to every part of a composite word).
    Corrupt {
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Field of the word; read from the code when omitted.
        #[arg(long, required_unless_present = "family")]
        code: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a received word with the code's error-correcting pair.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode every factor of a composite word and recombine.
    DecodeComposite {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        words: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project a word of L_0(D_N) onto the factors.
    Split {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sum factor parts back into L_0(D_N).
    Recombine {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        parts: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively check the MDS property of a code's evaluation set.
    VerifyMds {
        #[arg(long)]
        code: PathBuf,
    },
}

const DECODE_FAILURE: u8 = 2;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A config file that cannot be read or parsed. Reported with `EX_USAGE`.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EX_USAGE: u8 = 64;

fn load_config(cfg: &ConfigArg) -> Result<InstanceConfig> {
    read_json(&cfg.config).map_err(|e| UsageError(format!("{e:#}")).into())
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_code(path: &Path) -> Result<LinearCode> {
    let repr: CodeRepr = read_json(path)?;
    Ok(LinearCode::from_repr(&repr)?)
}

fn load_family(path: &Path) -> Result<CompositeScheme> {
    let file: FamilyFile = read_json(path)?;
    Ok(file.load()?.1)
}

fn parse_word(field: Field, v: &[ElemRepr]) -> Result<Vec<FieldElem>> {
    Ok(v.iter().map(|c| field.parse(c)).collect::<ellcode_core::Result<Vec<_>>>()?)
}

fn word_json(w: &[FieldElem]) -> Value {
    json!(w.iter().map(FieldElem::to_repr).collect::<Vec<_>>())
}

fn parts_json(parts: &[(u64, Vec<FieldElem>)]) -> Value {
    json!(parts.iter().map(|(r, w)| json!({"r": r, "word": word_json(w)})).collect::<Vec<_>>())
}

fn parse_parts(field: Field, v: &Value) -> Result<Vec<(u64, Vec<FieldElem>)>> {
    let arr = v.as_array().context("expected an array of {r, word} objects")?;
    arr.iter()
        .map(|p| {
            let r = p.get("r").and_then(Value::as_u64).context("part without r")?;
            let w: Vec<ElemRepr> = serde_json::from_value(p.get("word").cloned().context("part without word")?)?;
            Ok((r, parse_word(field, &w)?))
        })
        .collect()
}

fn decode_json(res: &DecodeResult, code: &LinearCode) -> Value {
    let message = res.codeword.as_ref().and_then(|c| code.message_of(c));
    json!({
        "status": res.status,
        "codeword": res.codeword.as_deref().map(word_json),
        "message": message.as_deref().map(word_json),
        "error_positions": res.error_positions,
        "error_weight": res.error_weight,
    })
}

fn random_word(field: Field, len: usize, seed: u64) -> Vec<FieldElem> {
    let mut rng = rng_for(seed, "message");
    (0..len).map(|_| field.random(&mut rng)).collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Info { cfg, json } => {
            let report = info(&load_config(&cfg)?)?;
            if json {
                emit(&serde_json::to_value(&report)?, None)?;
            } else {
                print!("{}", report.table());
            }
        }
        Cmd::Selftest { cfg, trials, corrupt_projector } => {
            let config = load_config(&cfg)?;
            let checks = selftest(&config, SelftestOptions { corrupt_projector, trials });
            let all = checks.iter().all(|c| c.pass);
            emit(&json!({"pass": all, "checks": checks}), None)?;
            if !all {
                return Ok(ExitCode::from(DECODE_FAILURE));
            }
        }
        Cmd::Pipeline { cfg, out } => {
            let inst = Instance::build(&load_config(&cfg)?)?;
            fs::create_dir_all(&out)?;
            let report = inst.report();
            emit(&serde_json::to_value(inst.main_code().code.to_repr())?, Some(&out.join("code.json")))?;
            if let Some(f) = inst.family_file() {
                emit(&serde_json::to_value(f)?, Some(&out.join("family.json")))?;
            }
            emit(&serde_json::to_value(&report)?, Some(&out.join("report.json")))?;
            fs::write(out.join("report.txt"), report.table())?;
            print!("{}", report.table());
        }
        Cmd::Build { cfg, out } => {
            let config = load_config(&cfg)?;
            let inst = Instance::build(&config)?;
            emit(&serde_json::to_value(inst.main_code().code.to_repr())?, Some(&out))?;
        }
        Cmd::Sigma { cfg, out } => {
            let config = load_config(&cfg)?;
            config.validate()?;
            let curve = config.curve()?;
            let level = curve.level(config.level_degree)?;
            let y: Vec<Vec<Point>> = nontrivial_divisors(config.n)?
                .into_iter()
                .map(|m| support_set(&curve, m, level).map(|s| s.points))
                .collect::<ellcode_core::Result<_>>()?;
            let res = sigma_search(
                &curve,
                &y,
                config.m,
                level,
                config.mode,
                &mut rng_for(config.seed, "sigma"),
                &config.effective_guards()?,
                config.max_attempts.unwrap_or(DEFAULT_SIGMA_ATTEMPTS),
            )?;
            let pts: Vec<_> = res.sigma.iter().map(Point::to_repr).collect();
            emit(&json!({"verified": res.verified, "attempts": res.attempts, "sigma": pts}), out.as_deref())?;
        }
        Cmd::Encode { code, family, message, seed, out } => {
            if let Some(path) = code {
                let code = load_code(&path)?;
                let msg = match message {
                    Some(m) => parse_word(code.field, &read_json::<Vec<ElemRepr>>(&m)?)?,
                    None => random_word(code.field, code.dimension(), seed),
                };
                emit(&json!({"message": word_json(&msg), "codeword": word_json(&code.encode(&msg)?)}), out.as_deref())?;
            } else {
                let scheme = load_family(family.as_deref().expect("clap enforces one of the two"))?;
                let field = scheme.base_point.level();
                let word = match message {
                    Some(m) => parse_word(field, &read_json::<Vec<ElemRepr>>(&m)?)?,
                    None => random_word(field, scheme.word_dim(), seed),
                };
                let cws = scheme.encode(&word)?;
                emit(&json!({"message": word_json(&word), "codewords": parts_json(&cws)}), out.as_deref())?;
            }
        }
        Cmd::Corrupt { word, weight, seed, code, family, out } => {
            let field = match (&code, &family) {
                (Some(c), _) => load_code(c)?.field,
                (None, Some(f)) => load_family(f)?.base_point.level(),
                (None, None) => bail!("--code or --family is needed to know the field"),
            };
            let v: Value = read_json(&word)?;
            // accept bare words, composite part lists, or encode output
            let v = v.get("codewords").or_else(|| v.get("codeword")).cloned().unwrap_or(v);
            let mut rng = rng_for(seed, "channel");
            let out_v = if v.as_array().is_some_and(|a| a.first().is_some_and(Value::is_object)) {
                let parts = parse_parts(field, &v)?;
                let rx = parts
                    .into_iter()
                    .map(|(r, w)| Ok((r, channel_corrupt(&w, weight, &mut rng)?)))
                    .collect::<Result<Vec<_>>>()?;
                parts_json(&rx)
            } else {
                let w: Vec<ElemRepr> = serde_json::from_value(v)?;
                word_json(&channel_corrupt(&parse_word(field, &w)?, weight, &mut rng)?)
            };
            emit(&out_v, out.as_deref())?;
        }
        Cmd::Decode { code, word, out } => {
            let code = load_code(&code)?;
            let pair = CodeContext::of(&code)?.pair(&code)?;
            let y: Vec<ElemRepr> = read_json(&word)?;
            let res = ecp_decode(&parse_word(code.field, &y)?, &pair)?;
            emit(&decode_json(&res, &code), out.as_deref())?;
            if !res.is_decoded() {
                return Ok(ExitCode::from(DECODE_FAILURE));
            }
        }
        Cmd::DecodeComposite { family, words, out } => {
            let scheme = load_family(&family)?;
            let field = scheme.base_point.level();
            let rx = parse_parts(field, &read_json(&words)?)?;
            let res = scheme.decode(&rx)?;
            let factors: Vec<Value> = res
                .factors
                .iter()
                .map(|(r, d)| json!({"r": r, "status": d.status, "error_weight": d.error_weight}))
                .collect();
            let status = if res.word.is_some() { "decoded" } else { "failure" };
            emit(
                &json!({
                    "status": status,
                    "word": res.word.as_deref().map(word_json),
                    "failed_factors": res.failed_factors(),
                    "factors": factors,
                }),
                out.as_deref(),
            )?;
            if res.word.is_none() {
                return Ok(ExitCode::from(DECODE_FAILURE));
            }
        }
        Cmd::Split { family, word, out } => {
            let scheme = load_family(&family)?;
            let w: Vec<ElemRepr> = read_json(&word)?;
            let parts = scheme.split(&parse_word(scheme.base_point.level(), &w)?)?;
            emit(&parts_json(&parts), out.as_deref())?;
        }
        Cmd::Recombine { family, parts, out } => {
            let scheme = load_family(&family)?;
            let parts = parse_parts(scheme.base_point.level(), &read_json(&parts)?)?;
            emit(&word_json(&scheme.recombine(&parts)?), out.as_deref())?;
        }
        Cmd::VerifyMds { code } => {
            let code = load_code(&code)?;
            let ctx = CodeContext::of(&code)?;
            let guards = ellcode_core::codes::Guards::default().with_env_override()?;
            let res = is_mds(&ctx.curve, &ctx.divisor, &ctx.sigma, &guards)?;
            let witness = res.witness.as_ref().map(|w| w.iter().map(Point::to_repr).collect::<Vec<_>>());
            emit(&json!({"mds": res.mds, "checked": res.checked, "witness": witness}), None)?;
            if !res.mds {
                return Ok(ExitCode::from(DECODE_FAILURE));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("usage error: {e}");
            ExitCode::from(EX_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
