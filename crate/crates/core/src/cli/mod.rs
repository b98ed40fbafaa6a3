//! Command-line front end. Every invocation is first turned into a
//! [`CommandRequest`], which serializes losslessly and can be replayed with
//! `chevalley run <file>`.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand as ClapSubcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::decomposition::Algorithm;
use crate::group::{LetterJson, RepKind};

/// Version tag of the structured output.
pub const SCHEMA: &str = "chevalley-cli/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    RingDecomposeArtinian,
    RootsShow,
    ChevalleyConstants,
    GroupVerifyRelations,
    GroupDecompose,
    GroupClosure,
    CongruenceCertify,
    CongruenceLevels,
    EbgCheck,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::RingDecomposeArtinian => "ring decompose-artinian",
            Subcommand::RootsShow => "roots show",
            Subcommand::ChevalleyConstants => "chevalley constants",
            Subcommand::GroupVerifyRelations => "group verify-relations",
            Subcommand::GroupDecompose => "group decompose",
            Subcommand::GroupClosure => "group closure",
            Subcommand::CongruenceCertify => "congruence certify",
            Subcommand::CongruenceLevels => "congruence levels",
            Subcommand::EbgCheck => "ebg check",
        }
    }
}

/// A matrix of element strings or an elementary word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Matrix(Vec<Vec<String>>),
    Word(Vec<LetterJson>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandRequest {
    pub subcommand: Subcommand,
    #[serde(default)]
    pub type_label: Option<String>,
    #[serde(default)]
    pub ring: Option<String>,
    #[serde(default = "default_rep")]
    pub rep: RepKind,
    #[serde(default)]
    pub algorithm: Option<Algorithm>,
    #[serde(default)]
    pub input: Option<Payload>,
    #[serde(default)]
    pub subgroup: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

fn default_rep() -> RepKind {
    RepKind::Defining
}

fn default_cap() -> usize {
    1_000_000
}

fn default_format() -> OutputFormat {
    OutputFormat::Text
}

impl CommandRequest {
    pub fn new(subcommand: Subcommand) -> CommandRequest {
        CommandRequest {
            subcommand,
            type_label: None,
            ring: None,
            rep: default_rep(),
            algorithm: None,
            input: None,
            subgroup: None,
            seed: 0,
            cap: default_cap(),
            format: default_format(),
        }
    }
}

/// Result of running a request: exit code and the text to print.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

#[derive(Parser, Debug)]
#[command(name = "chevalley", version, about = "Chevalley groups over finite commutative rings")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Top,
}

#[derive(clap::Args, Debug)]
struct Target {
    /// Cartan type such as A2 or G2.
    #[arg(long = "type")]
    type_label: String,
    /// Ring such as Z/8 or "Z/4 x GF(3)".
    #[arg(long)]
    ring: String,
    /// `defining` or `adjoint`.
    #[arg(long, default_value = "defining")]
    rep: RepKind,
}

#[derive(ClapSubcommand, Debug)]
enum Top {
    /// Finite commutative rings.
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Root systems.
    Roots {
        #[command(subcommand)]
        cmd: RootsCmd,
    },
    /// Chevalley bases.
    Chevalley {
        #[command(subcommand)]
        cmd: ChevalleyCmd,
    },
    /// Group elements and their decompositions.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Normal subgroups and ideal certificates.
    Congruence {
        #[command(subcommand)]
        cmd: CongruenceCmd,
    },
    /// Exhaustive `(U+U-)^4` coverage.
    Ebg {
        #[command(subcommand)]
        cmd: EbgCmd,
    },
    /// Replays a serialized request.
    Run { path: PathBuf },
}

#[derive(ClapSubcommand, Debug)]
enum RingCmd {
    /// Splits a ring into local factors.
    DecomposeArtinian { ring: String },
}

#[derive(ClapSubcommand, Debug)]
enum RootsCmd {
    /// Prints the positive roots and the Weyl group order.
    Show {
        #[arg(long = "type")]
        type_label: String,
    },
}

#[derive(ClapSubcommand, Debug)]
enum ChevalleyCmd {
    /// Prints structure constants and decomposition bounds.
    Constants { type_label: String },
}

#[derive(ClapSubcommand, Debug)]
enum GroupCmd {
    /// Checks the Steinberg relations.
    VerifyRelations {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Writes an element as a bounded product of elementaries.
    Decompose {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "prop2")]
        algorithm: Algorithm,
        /// Inline JSON, or a path to a JSON file.
        #[arg(long)]
        input: String,
    },
    /// Order of the subgroup generated by all elementaries.
    Closure {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
}

#[derive(ClapSubcommand, Debug)]
enum CongruenceCmd {
    /// Derives an ideal whose root elements lie in the subgroup.
    Certify {
        #[command(flatten)]
        target: Target,
        /// `kernel:(g1,..)`, `full` or `trivial`.
        #[arg(long)]
        subgroup: String,
    },
    /// Lists the level set of every root.
    Levels {
        #[command(flatten)]
        target: Target,
        /// `kernel:(g1,..)`, `full` or `trivial`.
        #[arg(long)]
        subgroup: String,
    },
}

#[derive(ClapSubcommand, Debug)]
enum EbgCmd {
    /// Runs the (U+U-)^4 decomposition on every element.
    Check {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
}

fn with_target(sub: Subcommand, t: Target) -> CommandRequest {
    CommandRequest { type_label: Some(t.type_label), ring: Some(t.ring), rep: t.rep, ..CommandRequest::new(sub) }
}

fn read_payload(text: &str) -> Result<Payload, String> {
    let trimmed = text.trim_start();
    let json = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| format!("cannot read {text}: {e}"))?
    };
    serde_json::from_str(&json).map_err(|e| format!("malformed input JSON: {e}"))
}

fn to_request(cli: Cli) -> Result<CommandRequest, String> {
    let mut req = match cli.command {
        Top::Ring { cmd: RingCmd::DecomposeArtinian { ring } } => {
            CommandRequest { ring: Some(ring), ..CommandRequest::new(Subcommand::RingDecomposeArtinian) }
        }
        Top::Roots { cmd: RootsCmd::Show { type_label } } => {
            CommandRequest { type_label: Some(type_label), ..CommandRequest::new(Subcommand::RootsShow) }
        }
        Top::Chevalley { cmd: ChevalleyCmd::Constants { type_label } } => {
            CommandRequest { type_label: Some(type_label), ..CommandRequest::new(Subcommand::ChevalleyConstants) }
        }
        Top::Group { cmd } => match cmd {
            GroupCmd::VerifyRelations { target, seed } => CommandRequest { seed, ..with_target(Subcommand::GroupVerifyRelations, target) },
            GroupCmd::Decompose { target, algorithm, input } => CommandRequest {
                algorithm: Some(algorithm),
                input: Some(read_payload(&input)?),
                ..with_target(Subcommand::GroupDecompose, target)
            },
            GroupCmd::Closure { target, cap } => CommandRequest { cap, ..with_target(Subcommand::GroupClosure, target) },
        },
        Top::Congruence { cmd } => match cmd {
            CongruenceCmd::Certify { target, subgroup } => {
                CommandRequest { subgroup: Some(subgroup), ..with_target(Subcommand::CongruenceCertify, target) }
            }
            CongruenceCmd::Levels { target, subgroup } => {
                CommandRequest { subgroup: Some(subgroup), ..with_target(Subcommand::CongruenceLevels, target) }
            }
        },
        Top::Ebg { cmd: EbgCmd::Check { target, cap } } => CommandRequest { cap, ..with_target(Subcommand::EbgCheck, target) },
        Top::Run { path } => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            return serde_json::from_str(&text).map_err(|e| format!("malformed request: {e}"));
        }
    };
    req.format = cli.format;
    Ok(req)
}

/// Parses arguments and runs the request.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { code, output: e.to_string() };
        }
    };
    let format = cli.format;
    match to_request(cli) {
        Ok(req) => run(&req),
        Err(msg) => commands::malformed_outcome(format, "request", &msg),
    }
}

pub use commands::run;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_round_trips() {
        let mut req = CommandRequest::new(Subcommand::GroupDecompose);
        req.type_label = Some("A2".into());
        req.ring = Some("Z/8".into());
        req.algorithm = Some(Algorithm::Tavgen);
        req.input = Some(Payload::Word(vec![LetterJson { root: vec![1, -1, 0], t: "3".into() }]));
        req.format = OutputFormat::Json;
        let text = serde_json::to_string(&req).unwrap();
        assert_eq!(serde_json::from_str::<CommandRequest>(&text).unwrap(), req);
        let m = Payload::Matrix(vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Payload>(&text).unwrap(), m);
    }
}
