//! The `effcat` command line.
//!
//! Exit codes: 0 equal or ok, 1 unequal or a failed check, 2 inconclusive,
//! 3 usage error, 4 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use super::program::{compile, with_all_swaps, ElaborateOptions, ProgramError};
use super::render::{render_diagram, render_eff, Format, RenderSpec};
use super::term::{diagram_term, eff_term, eff_to_term, TermError};
use super::valuation::{parse_input, MonoidSpec, ValuationFile};
use crate::diagram::DiagramError;
use crate::interp::{describe_output, evaluate, InterpError};
use crate::polygraph::{run_polygraph, validate_couple, PolygraphCouple, PolygraphError};
use crate::promonad::{CategorySpec, FinitePromonad, FunctorSpec, PromonadError, PromonadSpec};
use crate::puretensor::{check_universal_property, pt_cotuple, PtError, WriterInstance};
use crate::runtime::{eff_bfs_equal, eff_equal, eff_normalize, embed_monrun, monrun_equal, RuntimeError};
use crate::BfsOutcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "effcat", version, about = "String diagrams for effectful categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Ascii,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a polygraph couple.
    Check { file: PathBuf },
    /// Decide equality of two terms.
    Eq {
        file: PathBuf,
        left: String,
        right: String,
        /// Read both terms as runtime diagrams with explicit braids.
        #[arg(long)]
        monrun: bool,
        /// Declare a free swap generator for every pair of objects.
        #[arg(long)]
        swaps: bool,
        /// Search the exchange class with this many states instead of normalizing.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Draw a term, or a compiled program.
    Render {
        file: PathBuf,
        term: Option<String>,
        #[arg(long, conflicts_with = "term")]
        program: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: FormatArg,
        /// Draw effectful boxes without the runtime wire.
        #[arg(long)]
        no_runtime: bool,
        /// Draw the runtime diagram with explicit braids.
        #[arg(long)]
        monrun: bool,
        /// Keep the layers in the order written.
        #[arg(long)]
        as_written: bool,
    },
    /// Run a program in the finite writer target.
    Eval {
        file: PathBuf,
        valuation: PathBuf,
        program: PathBuf,
        /// Comma-separated input elements.
        #[arg(default_value = "")]
        input: String,
    },
    /// Compile a program to a term.
    Compile {
        file: PathBuf,
        program: PathBuf,
        #[arg(long)]
        no_swaps: bool,
    },
    /// Finite promonads.
    #[command(subcommand)]
    Promonad(PromonadCmd),
    /// The pure tensor of two writer promonads.
    #[command(subcommand)]
    Ptensor(PtensorCmd),
}

#[derive(Debug, Subcommand)]
enum PromonadCmd {
    /// Check the promonad laws.
    Check { file: PathBuf },
    /// Print the Kleisli category and its inclusion.
    Kleisli { file: PathBuf },
    /// Go to the other presentation and back, and compare tables.
    Roundtrip { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum PtensorCmd {
    /// Decide equality of two words.
    Eq {
        file: PathBuf,
        left: String,
        right: String,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Value of a word under the cotuple into the product writer.
    Cotuple { file: PathBuf, word: String },
    /// Check that the cotuple agrees with every pair of writer maps on short words.
    CheckUniversal {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_letters: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error(transparent)]
    Couple(#[from] PolygraphError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Promonad(#[from] PromonadError),
    #[error(transparent)]
    PureTensor(#[from] PtError),
}

/// What a command prints and how it exits.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: impl Into<String>) -> Self {
        Outcome { text: text.into(), code: EXIT_OK }
    }

    fn verdict(v: BfsOutcome) -> Self {
        match v {
            BfsOutcome::Equal => Outcome { text: "equal".into(), code: EXIT_OK },
            BfsOutcome::Unequal => Outcome { text: "unequal".into(), code: EXIT_NO },
            BfsOutcome::Inconclusive => Outcome { text: "inconclusive".into(), code: EXIT_INCONCLUSIVE },
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })
}

fn couple(path: &Path) -> Result<PolygraphCouple, CliError> {
    Ok(PolygraphCouple::parse(&read(path)?)?)
}

fn promonad_spec(path: &Path) -> Result<PromonadSpec, CliError> {
    PromonadSpec::parse(&read(path)?).map_err(|e| CliError::Format { path: path.display().to_string(), message: e.to_string() })
}

#[derive(Debug, Deserialize)]
struct WriterSide {
    base: CategorySpec,
    monoid: MonoidSpec,
}

#[derive(Debug, Deserialize)]
struct PtensorFile {
    left: WriterSide,
    right: WriterSide,
}

fn writer_instance(path: &Path) -> Result<WriterInstance, CliError> {
    let text = read(path)?;
    let f: PtensorFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Format { path: path.display().to_string(), message: e.to_string() })?;
    let (v, m) = (f.left.base.build()?, f.left.monoid.build()?);
    let (w, n) = (f.right.base.build()?, f.right.monoid.build()?);
    Ok(WriterInstance::new(&v, &m, &w, &n))
}

fn as_bfs(equal: bool) -> BfsOutcome {
    if equal {
        BfsOutcome::Equal
    } else {
        BfsOutcome::Unequal
    }
}

fn execute(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Check { file } => {
            let c = couple(&file)?;
            match validate_couple(&c) {
                Ok(()) => Ok(Outcome::ok(format!(
                    "ok: {} objects, {} pure and {} effectful generators",
                    c.objects().len(),
                    c.pure.gens.len(),
                    c.effectful.gens.len()
                ))),
                Err(vs) => Ok(Outcome {
                    text: vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"),
                    code: EXIT_NO,
                }),
            }
        }
        Command::Eq { file, left, right, monrun, swaps, budget } => {
            let mut c = couple(&file)?;
            if swaps {
                c = with_all_swaps(&c);
            }
            let verdict = if monrun {
                let sig = run_polygraph(&c)?;
                let (d1, d2) = (diagram_term(&sig, &left)?, diagram_term(&sig, &right)?);
                as_bfs(monrun_equal(&c, &d1, &d2)?)
            } else {
                let (e1, e2) = (eff_term(&c, &left)?, eff_term(&c, &right)?);
                match budget {
                    Some(b) => eff_bfs_equal(&c, &e1, &e2, b)?,
                    None => as_bfs(eff_equal(&c, &e1, &e2)?),
                }
            };
            let mut out = Outcome::verdict(verdict);
            if swaps {
                out.text.push_str("\nnote: swap generators are free; equalities that need symmetry coherence are not decided");
            }
            Ok(out)
        }
        Command::Render { file, term, program, format, no_runtime, monrun, as_written } => {
            let c = couple(&file)?;
            let (c, e) = match (term, program) {
                (Some(t), None) => {
                    let e = eff_term(&c, &t)?;
                    (c, e)
                }
                (None, Some(p)) => {
                    let el = compile(&read(&p)?, &c, ElaborateOptions::default())?;
                    (el.couple, el.morphism)
                }
                _ => return Err(CliError::Format { path: file.display().to_string(), message: "give a term or --program".into() }),
            };
            let e = if as_written { e } else { eff_normalize(&c, &e)? };
            let spec = RenderSpec {
                format: match format {
                    FormatArg::Ascii => Format::Ascii,
                    FormatArg::Svg => Format::Svg,
                },
                show_runtime: !no_runtime,
                labels: true,
            };
            let text = if monrun {
                let sig = run_polygraph(&c)?;
                render_diagram(&sig, &embed_monrun(&c, &e)?, spec)?
            } else {
                render_eff(&c, &e, spec)?
            };
            Ok(Outcome::ok(text.trim_end().to_string()))
        }
        Command::Eval { file, valuation, program, input } => {
            let c = couple(&file)?;
            let el = compile(&read(&program)?, &c, ElaborateOptions::default())?;
            let vf = ValuationFile::parse(&read(&valuation)?)
                .map_err(|message| CliError::Format { path: valuation.display().to_string(), message })?;
            let (t, v) = vf.build(&el.couple)?;
            let f = evaluate(&el.couple, &el.morphism, &t, &v)?;
            let x = parse_input(&t, &f.dom, &input)?;
            Ok(Outcome::ok(describe_output(&t, &f, &x)))
        }
        Command::Compile { file, program, no_swaps } => {
            let c = couple(&file)?;
            let el = compile(&read(&program)?, &c, ElaborateOptions { swaps: !no_swaps })?;
            Ok(Outcome::ok(eff_to_term(&el.couple, &el.morphism)?.to_string()))
        }
        Command::Promonad(p) => promonad(p),
        Command::Ptensor(p) => ptensor(p),
    }
}

fn promonad(cmd: PromonadCmd) -> Result<Outcome, CliError> {
    match cmd {
        PromonadCmd::Check { file } => {
            let m = promonad_spec(&file)?.build()?;
            Ok(match m.check() {
                Ok(()) => Outcome::ok(format!("ok: {} elements over {} base morphisms", m.len(), m.base().len())),
                Err(e) => Outcome { text: e.to_string(), code: EXIT_NO },
            })
        }
        PromonadCmd::Kleisli { file } => {
            let m = promonad_spec(&file)?.build()?;
            let (_, j) = m.kleisli()?;
            Ok(Outcome::ok(serde_json::to_string_pretty(&FunctorSpec::of(&j)).expect("specs serialize")))
        }
        PromonadCmd::Roundtrip { file } => {
            let spec = promonad_spec(&file)?;
            let exact = match &spec {
                PromonadSpec::Functor(f) => {
                    let i = f.build()?;
                    let m = FinitePromonad::from_functor(&i)?;
                    let (k, j) = m.kleisli()?;
                    k == i.dst && j == i && FinitePromonad::from_functor(&j)? == m
                }
                _ => {
                    let m = spec.build()?;
                    let (_, j) = m.kleisli()?;
                    FinitePromonad::from_functor(&j)? == m
                }
            };
            Ok(if exact {
                Outcome::ok("roundtrip exact")
            } else {
                Outcome { text: "roundtrip differs".into(), code: EXIT_NO }
            })
        }
    }
}

fn ptensor(cmd: PtensorCmd) -> Result<Outcome, CliError> {
    match cmd {
        PtensorCmd::Eq { file, left, right, budget } => {
            let inst = writer_instance(&file)?;
            let pt = &inst.tensor;
            let (u, t) = (pt.parse_word(&left)?, pt.parse_word(&right)?);
            Ok(Outcome::verdict(pt.equal(&u, &t, budget)))
        }
        PtensorCmd::Cotuple { file, word } => {
            let inst = writer_instance(&file)?;
            let u = inst.tensor.parse_word(&word)?;
            let x = pt_cotuple(&inst.tensor, &inst.a, &inst.b, &u)?;
            Ok(Outcome::ok(inst.target.name(x).to_string()))
        }
        PtensorCmd::CheckUniversal { file, max_letters, budget } => {
            let inst = writer_instance(&file)?;
            Ok(match check_universal_property(&inst.tensor, &inst.a, &inst.b, max_letters, budget, &[]) {
                Ok(()) => Outcome::ok(format!("ok: words up to {max_letters} letters")),
                Err(e) => Outcome { text: e.to_string(), code: EXIT_NO },
            })
        }
    }
}

/// Runs the command line, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{e}");
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
