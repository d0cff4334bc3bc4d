//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use k3lat::cones::Flavor;
use k3lat::Int;
use serde_json::Value;

use crate::check::check_file;
use crate::commands::Invocation;
use crate::document::{render, Document};
use crate::error::CliError;
use crate::json::{object, parse_columns, parse_list};
use crate::pretty;

#[derive(Debug, Parser)]
#[command(name = "k3lat", version, about = "Exact lattice certificates for rank-2 K3 Picard lattices")]
struct Cli {
    /// Emit the JSON document (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing on standard output; report through the exit code.
    #[arg(long, global = true)]
    quiet: bool,
    /// Render the document as a table instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

fn int_arg(s: &str) -> Result<Int, String> {
    s.trim().parse::<Int>().map_err(|_| format!("{s:?} is not an integer"))
}

fn flavor_arg(s: &str) -> Result<Flavor, String> {
    s.parse::<Flavor>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct Rank2Args {
    #[arg(long, allow_hyphen_values = true, value_parser = int_arg)]
    d: Int,
    #[arg(long, allow_hyphen_values = true, value_parser = int_arg)]
    a: Int,
    #[arg(long, allow_hyphen_values = true, value_parser = int_arg)]
    b: Int,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// `even` or `odd`.
    #[arg(long, value_parser = flavor_arg)]
    flavor: Flavor,
    #[arg(long)]
    r: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank-2 lattice utilities.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Refined sums of k squares.
    Squares {
        #[arg(long, allow_hyphen_values = true, value_parser = int_arg)]
        n: Int,
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
        k: u8,
    },
    /// Cone data of a reference lattice.
    Cones {
        #[command(subcommand)]
        action: ConesAction,
    },
    /// Nef test against the model's cone generators.
    Nef {
        #[command(flatten)]
        model: ModelArgs,
        /// Coordinates `c0,c1,...` in the basis `A, E1, ..., Er`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Zariski decomposition `L = P + N`.
    Zariski {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Cremona isometry of the even model applied to a class.
    Cremona {
        #[arg(long)]
        r: usize,
        /// Indices `i,j,k` with `1 <= i < j < k <= r`.
        #[arg(long)]
        ijk: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Primitive embedding of `[[2d, a], [a, 2b]]`, optionally nef-ifying `L`.
    Embed {
        #[command(flatten)]
        lattice: Rank2Args,
        #[arg(long = "L", allow_hyphen_values = true)]
        l: Option<String>,
    },
    /// Reflect a given embedding until the image of `L` is nef.
    Nefify {
        #[command(flatten)]
        model: ModelArgs,
        /// Image columns `c;c;...`, each a comma list.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long = "L", allow_hyphen_values = true)]
        l: String,
        /// A second class to normalise against `L`.
        #[arg(long = "C", allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// The explicit embedding of `[[2a, b], [b, -2]]` into the odd `Σ_5`.
    A3 {
        #[arg(long, allow_hyphen_values = true, value_parser = int_arg)]
        a: Int,
        #[arg(long, allow_hyphen_values = true, value_parser = int_arg)]
        b: Int,
    },
    /// The fixed rank-4 embeddings.
    Rank4 {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// An odd `Σ_5` class to split along the fibre class.
        #[arg(long, allow_hyphen_values = true)]
        split: Option<String>,
    },
    /// Divisor bookkeeping on the two components of the degeneration.
    Degeneration {
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Full pipeline: hypotheses, embedding and nef-ification of `L`.
    Verify {
        #[command(flatten)]
        lattice: Rank2Args,
        #[arg(long = "L", allow_hyphen_values = true)]
        l: String,
    },
    /// Re-verify a certificate document.
    Check {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum LatticeAction {
    /// Validate and reduce a rank-2 lattice.
    Validate {
        #[command(flatten)]
        lattice: Rank2Args,
    },
}

#[derive(Debug, Subcommand)]
enum ConesAction {
    /// List the (-2)-classes and cone generators.
    Enumerate {
        #[command(flatten)]
        model: ModelArgs,
    },
}

fn pair2(s: &str) -> Result<Vec<Int>, CliError> {
    let v = parse_list(s)?;
    if v.len() != 2 {
        return Err(CliError::Usage(format!("expected two coordinates, got {s:?}")));
    }
    Ok(v)
}

impl Command {
    fn invocation(self) -> Result<Invocation, CliError> {
        Ok(match self {
            Command::Lattice { action: LatticeAction::Validate { lattice: Rank2Args { d, a, b } } } => {
                Invocation::LatticeValidate { d, a, b }
            }
            Command::Squares { n, k } => Invocation::Squares { n, k: k as usize },
            Command::Cones { action: ConesAction::Enumerate { model } } => {
                Invocation::ConesEnumerate { flavor: model.flavor, r: model.r }
            }
            Command::Nef { model, class } => Invocation::Nef { flavor: model.flavor, r: model.r, class: parse_list(&class)? },
            Command::Zariski { model, class } => {
                Invocation::Zariski { flavor: model.flavor, r: model.r, class: parse_list(&class)? }
            }
            Command::Cremona { r, ijk, class } => {
                let v: Vec<usize> = ijk
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("{t:?} is not an index"))))
                    .collect::<Result<_, _>>()?;
                let ijk: [usize; 3] = v.try_into().map_err(|_| CliError::Usage("--ijk needs three indices".into()))?;
                Invocation::Cremona { r, ijk, class: parse_list(&class)? }
            }
            Command::Embed { lattice: Rank2Args { d, a, b }, l } => {
                Invocation::Embed { d, a, b, l: l.as_deref().map(pair2).transpose()? }
            }
            Command::Nefify { model, matrix, l, c } => Invocation::Nefify {
                flavor: model.flavor,
                r: model.r,
                columns: parse_columns(&matrix)?,
                l: parse_list(&l)?,
                c: c.as_deref().map(parse_list).transpose()?,
            },
            Command::A3 { a, b } => Invocation::A3 { a, b },
            Command::Rank4 { which, split } => Invocation::Rank4 { which, split: split.as_deref().map(parse_list).transpose()? },
            Command::Degeneration { r, class } => Invocation::Degeneration { r, class: parse_list(&class)? },
            Command::Verify { lattice: Rank2Args { d, a, b }, l } => Invocation::Verify { d, a, b, l: pair2(&l)? },
            Command::Check { .. } => unreachable!("handled before dispatch"),
        })
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_json(kind: &str, code: &str, message: &str, witness: Value) -> String {
    render(&object(vec![(
        "error",
        object(vec![
            ("kind", Value::String(kind.into())),
            ("code", Value::String(code.into())),
            ("message", Value::String(message.into())),
            ("witness", witness),
        ]),
    )]))
}

fn failure(e: &CliError) -> Outcome {
    Outcome { code: e.exit_code(), stdout: String::new(), stderr: error_json(e.kind(), e.code(), &e.to_string(), e.witness()) }
}

fn emit(doc: &Document, quiet: bool, pretty_out: bool) -> String {
    if quiet {
        String::new()
    } else if pretty_out {
        pretty::render(&doc.to_json())
    } else {
        doc.render()
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let text = e.render().to_string();
                let code = if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand { 1 } else { 0 };
                return if code == 0 {
                    Outcome { code, stdout: text, stderr: String::new() }
                } else {
                    Outcome { code, stdout: String::new(), stderr: text }
                };
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return Outcome { code: 1, stdout: String::new(), stderr: error_json("usage", "usage", &first, Value::Null) };
        }
    };
    let (quiet, pretty_out) = (cli.quiet, cli.pretty);

    if let Command::Check { file } = &cli.command {
        return match check_file(file) {
            Ok(doc) => {
                let verified = doc.result["verified"] == Value::Bool(true);
                Outcome { code: if verified { 0 } else { 1 }, stdout: emit(&doc, quiet, pretty_out), stderr: String::new() }
            }
            Err(e) => failure(&e),
        };
    }

    let doc = match cli.command.invocation().and_then(|inv| inv.execute()) {
        Ok(doc) => doc,
        Err(e) => return failure(&e),
    };
    let stdout = emit(&doc, quiet, pretty_out);
    if doc.all_pass() {
        Outcome { code: 0, stdout, stderr: String::new() }
    } else {
        let failed: Vec<Value> =
            doc.checks.iter().filter(|c| !c.pass).map(|c| Value::String(c.name.clone())).collect();
        let witness = object(vec![("failed", Value::Array(failed))]);
        Outcome { code: 2, stdout, stderr: error_json("computation", "check_failed", "a certificate check failed", witness) }
    }
}
