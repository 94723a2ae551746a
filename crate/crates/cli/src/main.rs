//! Command-line front-end for modal CNF symmetry detection.
//!
//! Subcommands: `normalize` (canonical modal CNF), `detect` (symmetry
//! group), `verify` (check a permutation or layered sequence), `entail`
//! (bounded entailment with optional symmetry transfer check), and `graph`
//! (detection-graph export). Inputs are inline formulas or paths to files
//! holding one; both the formula grammar and the `{ { ~p, r }, ... }` set
//! notation are accepted.
//!
//! Exit codes: 0 success/found, 1 clean negative, 2 usage or parse error,
//! 3 internal verification failure.

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modsym_core::detection::{
    build_graph_layered_with, build_graph_with, detect_layered_symmetries_with,
    detect_symmetries_with, export_graph, DetectError, DetectOptions, GraphFormat,
};
use modsym_core::formula::{parse_to_cnf, ModalCnf, ParseError};
use modsym_core::models::{entails, Bounds, ClassSpec, Entailment, ModelError};
use modsym_core::permutation::PermutationError;
use modsym_core::{Permutation, PermutationSequence};

#[derive(Parser)]
#[command(name = "modsym", version, about = "Symmetries of modal CNF formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
enum ReportFormat {
    #[default]
    Human,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
enum ExportFormat {
    #[default]
    Dot,
    Cel,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical modal CNF.
    Normalize {
        /// Inline formula (grammar or set notation) or a path to one.
        input: String,
    },
    /// Detect the symmetry group of a formula.
    Detect {
        input: String,
        /// Detect layered symmetries (one permutation per modal depth).
        #[arg(long)]
        layered: bool,
        /// Allow symmetries that move definitional atoms from the CNF
        /// transform.
        #[arg(long)]
        include_aux_atoms: bool,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Verify a permutation (or a layered sequence) as a symmetry.
    Verify {
        input: String,
        /// Cycle notation, e.g. `(p ~q)(~p q)`, or `[ cyc ; cyc ]` for a
        /// layered sequence.
        permutation: String,
    },
    /// Bounded entailment between two formulas.
    Entail {
        phi: String,
        psi: String,
        /// Atoms constrained to hold at exactly one world.
        #[arg(long, value_delimiter = ',')]
        nominals: Vec<String>,
        /// The universal modality is part of the class.
        #[arg(long)]
        universal: bool,
        /// Atom-indexed modalities are part of the class.
        #[arg(long)]
        at: bool,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        /// Also check entailment of the image of psi under this symmetry
        /// of phi and flag any disagreement.
        #[arg(long)]
        via_symmetry: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Export the detection graph of a formula.
    Graph {
        input: String,
        #[arg(long, value_enum, default_value_t)]
        format: ExportFormat,
        /// Export the layered construction instead.
        #[arg(long)]
        layered: bool,
        #[arg(long)]
        include_aux_atoms: bool,
    },
}

/// Command outcomes map to exit codes 0 and 1.
enum Outcome {
    Found,
    Negative,
}

#[derive(Debug)]
enum CliError {
    /// Unusable input: exit 2.
    Input(String),
    /// The pipeline contradicted itself: exit 3.
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PermutationError> for CliError {
    fn from(e: PermutationError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DetectError> for CliError {
    fn from(e: DetectError) -> Self {
        match e {
            DetectError::Permutation(p) => CliError::Input(p.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Reads a file when the argument names one, otherwise treats the argument
/// itself as the input text.
fn load(arg: &str) -> Result<String, CliError> {
    if std::path::Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load_cnf(arg: &str) -> Result<ModalCnf, CliError> {
    Ok(parse_to_cnf(load(arg)?.trim())?)
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Normalize { input } => {
            println!("{}", load_cnf(&input)?.canonicalize());
            Ok(Outcome::Found)
        }
        Command::Detect { input, layered, include_aux_atoms, format } => {
            let phi = load_cnf(&input)?;
            let options = DetectOptions { include_aux_atoms };
            if layered {
                let report = detect_layered_symmetries_with(&phi, options)?;
                print_report(
                    format,
                    report.generators.iter().map(|g| g.to_string()).collect(),
                    report.group_order,
                    report.verified,
                );
                Ok(if report.is_trivial() { Outcome::Negative } else { Outcome::Found })
            } else {
                let report = detect_symmetries_with(&phi, options)?;
                print_report(
                    format,
                    report.generators.iter().map(|g| g.to_string()).collect(),
                    report.group_order,
                    report.verified,
                );
                Ok(if report.is_trivial() { Outcome::Negative } else { Outcome::Found })
            }
        }
        Command::Verify { input, permutation } => {
            let phi = load_cnf(&input)?;
            let text = load(&permutation)?;
            let trimmed = text.trim();
            let layered =
                trimmed.starts_with('[') || trimmed.contains(';') || trimmed.contains('\n');
            let holds = if layered {
                let seq = PermutationSequence::parse(trimmed)?;
                seq.is_layered_symmetry(&phi)?
            } else {
                let sigma = Permutation::parse_cycles(trimmed)?;
                sigma.is_symmetry(&phi)?
            };
            println!("symmetry: {holds}");
            Ok(if holds { Outcome::Found } else { Outcome::Negative })
        }
        Command::Entail {
            phi,
            psi,
            nominals,
            universal,
            at,
            max_worlds,
            max_depth,
            via_symmetry,
            format,
        } => {
            if max_worlds == 0 || max_depth == 0 {
                return Err(CliError::Input("bounds must be positive".into()));
            }
            let phi = load_cnf(&phi)?;
            let psi = load_cnf(&psi)?;
            let spec = ClassSpec {
                universal,
                at,
                nominals: nominals.into_iter().collect(),
                ..ClassSpec::default()
            };
            let bounds = Bounds::new(max_worlds, max_depth);
            let direct = entails(&phi, &psi, &spec, bounds)?;
            print_entailment(format, &direct, &spec, "entailed");

            if let Some(cycles) = via_symmetry {
                let sigma = Permutation::parse_cycles(cycles.trim())?;
                if !sigma.is_symmetry(&phi)? {
                    return Err(CliError::Input(format!("{sigma} is not a symmetry of phi")));
                }
                let image = entails(&phi, &sigma.apply_cnf(&psi)?, &spec, bounds)?;
                print_entailment(format, &image, &spec, "entailed_via_symmetry");
                if direct.entailed != image.entailed {
                    println!("symmetry_transfer: violated");
                    return Err(CliError::Internal(
                        "entailment disagrees with its symmetry transfer".into(),
                    ));
                }
                println!("symmetry_transfer: consistent");
            }
            Ok(if direct.entailed { Outcome::Found } else { Outcome::Negative })
        }
        Command::Graph { input, format, layered, include_aux_atoms } => {
            let phi = load_cnf(&input)?;
            let options = DetectOptions { include_aux_atoms };
            let dg = if layered {
                build_graph_layered_with(&phi, options)
            } else {
                build_graph_with(&phi, options)
            };
            let text = match format {
                ExportFormat::Dot => export_graph(&dg, GraphFormat::Dot),
                ExportFormat::Cel => export_graph(&dg, GraphFormat::ColoredEdgeList),
            };
            print!("{text}");
            Ok(Outcome::Found)
        }
    }
}

fn print_report(format: ReportFormat, generators: Vec<String>, order: Option<u128>, verified: bool) {
    match format {
        ReportFormat::Machine => {
            println!("generators: {}", generators.len());
            for g in &generators {
                println!("generator: {g}");
            }
            match order {
                Some(o) => println!("order: {o}"),
                None => println!("order: above-cap"),
            }
            println!("verified: {verified}");
        }
        ReportFormat::Human => {
            if generators.is_empty() {
                println!("no symmetries found (trivial group)");
            } else {
                println!("symmetry generators ({}):", generators.len());
                for g in &generators {
                    println!("  {g}");
                }
            }
            match order {
                Some(o) => println!("group order: {o}"),
                None => println!("group order: above reporting cap"),
            }
            println!("all generators verified: {}", if verified { "yes" } else { "no" });
        }
    }
}

fn print_entailment(format: ReportFormat, result: &Entailment, spec: &ClassSpec, key: &str) {
    match format {
        ReportFormat::Machine => {
            println!("{key}: {}", result.entailed);
            println!("exact: {}", result.exact);
        }
        ReportFormat::Human => {
            let verdict = if result.entailed {
                if result.exact {
                    "yes"
                } else {
                    "yes (within bounds)"
                }
            } else {
                "no"
            };
            println!("{key}: {verdict}");
        }
    }
    if let Some(model) = &result.countermodel {
        println!("countermodel:");
        print!("{}", model.to_text(spec));
    }
}
